use std::collections::HashMap;

use super::curve::{Curve, CurveKind, CurvePoint};
use crate::quadrature;
use crate::{Error, Result, Vec2};

/// Binding of an edge to a parameter interval of a table curve.
///
/// `t[0]` is the parameter of the first endpoint and `t[1]` of the second;
/// either order is allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveBinding {
    pub curve: u32,
    pub t: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub v: [usize; 2],
    pub curve: Option<CurveBinding>,
}

/// An edge as used by an element; `reversed` means the element traverses it
/// from `v[1]` to `v[0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeUse {
    pub edge: usize,
    pub reversed: bool,
}

impl EdgeUse {
    pub fn forward(edge: usize) -> Self {
        Self { edge, reversed: false }
    }

    pub fn backward(edge: usize) -> Self {
        Self { edge, reversed: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub edges: Vec<EdgeUse>,
    pub kappa: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMarker {
    Interior,
    Boundary,
}

/// Cached geometric data of an element (curved area and centroid).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementGeometry {
    pub area: f64,
    pub centroid: Vec2,
    pub diameter: f64,
    pub chord_centroid: Vec2,
}

#[derive(Clone, Copy, Debug)]
enum Shape<'a> {
    Straight { a: Vec2, b: Vec2 },
    Curve(&'a CurveKind),
}

/// Parametrisation `s -> γ_e(s)` of an edge over `[lo, hi]`, increasing in
/// the direction of travel.
///
/// A flipped map evaluates the underlying curve at `-s`, so that reversing an
/// edge reverses its parameter (and turns the scaled monomials `m_i` into
/// `(-1)^i m_i`).
#[derive(Clone, Copy, Debug)]
pub struct EdgeMap<'a> {
    shape: Shape<'a>,
    lo: f64,
    hi: f64,
    flip: bool,
}

impl<'a> EdgeMap<'a> {
    pub fn straight(a: Vec2, b: Vec2) -> Self {
        Self {
            shape: Shape::Straight { a, b },
            lo: 0.0,
            hi: 1.0,
            flip: false,
        }
    }

    pub fn on_curve(curve: &'a CurveKind, t0: f64, t1: f64) -> Self {
        if t0 <= t1 {
            Self {
                shape: Shape::Curve(curve),
                lo: t0,
                hi: t1,
                flip: false,
            }
        } else {
            Self {
                shape: Shape::Curve(curve),
                lo: -t0,
                hi: -t1,
                flip: true,
            }
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            shape: self.shape,
            lo: -self.hi,
            hi: -self.lo,
            flip: !self.flip,
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_curved(&self) -> bool {
        match self.shape {
            Shape::Straight { .. } => false,
            Shape::Curve(kind) => !kind.is_straight(),
        }
    }

    pub fn eval(&self, s: f64) -> CurvePoint {
        let t = if self.flip { -s } else { s };
        let p = match self.shape {
            Shape::Straight { a, b } => CurvePoint {
                position: a + (b - a) * t,
                tangent: b - a,
            },
            Shape::Curve(kind) => kind.eval(t),
        };
        if self.flip {
            CurvePoint {
                position: p.position,
                tangent: -p.tangent,
            }
        } else {
            p
        }
    }

    pub fn start(&self) -> Vec2 {
        self.eval(self.lo).position
    }

    pub fn end(&self) -> Vec2 {
        self.eval(self.hi).position
    }

    pub fn chord_length(&self) -> f64 {
        (self.end() - self.start()).norm()
    }

    /// `∫ |γ'(s)| ds` with an `n`-point Gauss rule.
    pub fn arc_length(&self, n: usize) -> f64 {
        if !self.is_curved() {
            return self.chord_length();
        }
        quadrature::EdgeRule::new(self, n).length()
    }
}

/// Polygonal mesh with optionally curved edges.
#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    curves: Vec<Curve>,
    edges: Vec<Edge>,
    elements: Vec<Element>,
    curve_index: HashMap<u32, usize>,
    edge_elements: Vec<[Option<usize>; 2]>,
    geometry: Vec<ElementGeometry>,
}

impl PartialEq for Mesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.curves == other.curves
            && self.edges == other.edges
            && self.elements == other.elements
    }
}

/// Tolerance on `|γ(t) - vertex|` for curve-bound edges.
pub const BINDING_TOL: f64 = 1e-12;

impl Mesh {
    /// Builds a mesh and checks its topology. Structural defects (unknown
    /// ids, open or self-touching cycles, dangling edges, edges used more than
    /// twice or twice in the same direction, mismatched curve endpoints,
    /// clockwise elements, non-positive κ) are collected and reported
    /// together.
    pub fn new(vertices: Vec<Vec2>, curves: Vec<Curve>, edges: Vec<Edge>, elements: Vec<Element>) -> Result<Self> {
        let mut problems = Vec::new();
        let mut curve_index = HashMap::new();
        for (i, c) in curves.iter().enumerate() {
            if curve_index.insert(c.id, i).is_some() {
                problems.push(format!("duplicate curve id {}", c.id));
            }
        }

        for (ei, e) in edges.iter().enumerate() {
            if e.v.iter().any(|&v| v >= vertices.len()) {
                problems.push(format!("edge {ei} references a missing vertex"));
                continue;
            }
            if e.v[0] == e.v[1] {
                problems.push(format!("edge {ei} has coincident endpoints"));
                continue;
            }
            let (a, b) = (vertices[e.v[0]], vertices[e.v[1]]);
            if (b - a).norm() <= 0.0 {
                problems.push(format!("edge {ei} has zero chord length"));
            }
            if let Some(binding) = &e.curve {
                match curve_index.get(&binding.curve) {
                    None => problems.push(format!("edge {ei} references missing curve {}", binding.curve)),
                    Some(&ci) => {
                        let curve = &curves[ci];
                        for (end, &t) in binding.t.iter().enumerate() {
                            match curve.eval(t) {
                                Ok(p) => {
                                    let gap = (p.position - vertices[e.v[end]]).norm();
                                    if gap > BINDING_TOL * (1.0 + vertices[e.v[end]].norm()) {
                                        problems.push(format!(
                                            "edge {ei} endpoint {end} is {gap:.2e} away from curve {}",
                                            binding.curve
                                        ));
                                    }
                                }
                                Err(err) => problems.push(format!("edge {ei}: {err}")),
                            }
                        }
                    }
                }
            }
        }

        let mut edge_elements = vec![[None, None]; edges.len()];
        for (ki, el) in elements.iter().enumerate() {
            if !(el.kappa > 0.0) {
                problems.push(format!("element {ki} has non-positive kappa {}", el.kappa));
            }
            if el.edges.len() < 3 {
                problems.push(format!("element {ki} has fewer than three edges"));
                continue;
            }
            let mut ok = true;
            for u in &el.edges {
                if u.edge >= edges.len() {
                    problems.push(format!("element {ki} references missing edge {}", u.edge));
                    ok = false;
                    continue;
                }
                let slot = usize::from(u.reversed);
                match edge_elements[u.edge][slot] {
                    None => edge_elements[u.edge][slot] = Some(ki),
                    Some(other) => {
                        problems.push(format!(
                            "edge {} traversed in the same direction by elements {other} and {ki}",
                            u.edge
                        ));
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let ends: Vec<[usize; 2]> = el
                .edges
                .iter()
                .map(|u| {
                    let v = edges[u.edge].v;
                    if u.reversed {
                        [v[1], v[0]]
                    } else {
                        v
                    }
                })
                .collect();
            let n = ends.len();
            for i in 0..n {
                if ends[i][1] != ends[(i + 1) % n][0] {
                    problems.push(format!("element {ki} has an open edge cycle at position {i}"));
                }
            }
            let mut starts: Vec<usize> = ends.iter().map(|e| e[0]).collect();
            starts.sort_unstable();
            if starts.windows(2).any(|w| w[0] == w[1]) {
                problems.push(format!("element {ki} visits a vertex twice"));
            }
        }
        for (ei, inc) in edge_elements.iter().enumerate() {
            if inc[0].is_none() && inc[1].is_none() {
                problems.push(format!("edge {ei} is not used by any element"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Structure(problems));
        }

        let mut mesh = Self {
            vertices,
            curves,
            edges,
            elements,
            curve_index,
            edge_elements,
            geometry: Vec::new(),
        };
        let mut geometry = Vec::with_capacity(mesh.elements.len());
        for ki in 0..mesh.elements.len() {
            let g = mesh.compute_geometry(ki);
            if !(g.area > 0.0) {
                problems.push(format!(
                    "element {ki} has non-positive signed area {:.3e} (clockwise?)",
                    g.area
                ));
            }
            geometry.push(g);
        }
        if !problems.is_empty() {
            return Err(Error::Structure(problems));
        }
        mesh.geometry = geometry;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn curve(&self, id: u32) -> Option<&Curve> {
        self.curve_index.get(&id).map(|&i| &self.curves[i])
    }

    /// Elements on the (forward, backward) side of an edge.
    pub fn edge_elements(&self, edge: usize) -> [Option<usize>; 2] {
        self.edge_elements[edge]
    }

    pub fn marker(&self, edge: usize) -> EdgeMarker {
        let [a, b] = self.edge_elements[edge];
        if a.is_some() && b.is_some() {
            EdgeMarker::Interior
        } else {
            EdgeMarker::Boundary
        }
    }

    pub fn is_boundary(&self, edge: usize) -> bool {
        self.marker(edge) == EdgeMarker::Boundary
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.is_boundary(e)).collect()
    }

    /// Canonical parametrisation of an edge, running from `v[0]` to `v[1]`.
    pub fn edge_map(&self, edge: usize) -> EdgeMap<'_> {
        let e = &self.edges[edge];
        match &e.curve {
            Some(b) => {
                let curve = self.curve(b.curve).expect("curve ids checked at construction");
                EdgeMap::on_curve(&curve.kind, b.t[0], b.t[1])
            }
            None => EdgeMap::straight(self.vertices[e.v[0]], self.vertices[e.v[1]]),
        }
    }

    /// Parametrisation of an edge in the direction an element traverses it.
    pub fn edge_map_for(&self, usage: EdgeUse) -> EdgeMap<'_> {
        let m = self.edge_map(usage.edge);
        if usage.reversed {
            m.reversed()
        } else {
            m
        }
    }

    /// The counterclockwise boundary of an element as a list of edge maps.
    pub fn element_boundary(&self, element: usize) -> Vec<EdgeMap<'_>> {
        self.elements[element]
            .edges
            .iter()
            .map(|&u| self.edge_map_for(u))
            .collect()
    }

    /// Vertex positions of an element in counterclockwise order.
    pub fn element_vertices(&self, element: usize) -> Vec<Vec2> {
        self.elements[element]
            .edges
            .iter()
            .map(|u| {
                let v = self.edges[u.edge].v;
                self.vertices[if u.reversed { v[1] } else { v[0] }]
            })
            .collect()
    }

    pub fn is_curved(&self, edge: usize) -> bool {
        self.edge_map(edge).is_curved()
    }

    pub fn element_is_curved(&self, element: usize) -> bool {
        self.elements[element].edges.iter().any(|u| self.is_curved(u.edge))
    }

    pub fn geometry(&self, element: usize) -> &ElementGeometry {
        &self.geometry[element]
    }

    /// Mesh size `h = max h_K`.
    pub fn h(&self) -> f64 {
        self.geometry.iter().map(|g| g.diameter).fold(0.0, f64::max)
    }

    /// Copy of the mesh with every curve binding removed, so that each edge
    /// becomes the chord between its endpoints.
    pub fn straightened(&self) -> Result<Self> {
        let edges = self.edges.iter().map(|e| Edge { v: e.v, curve: None }).collect();
        Self::new(self.vertices.clone(), Vec::new(), edges, self.elements.clone())
    }

    /// Copy of the mesh with one edge's canonical orientation reversed: the
    /// endpoints and parameter interval are swapped and every element use of
    /// the edge flips direction.
    pub fn with_reversed_edge(&self, edge: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        let e = &mut edges[edge];
        e.v.swap(0, 1);
        if let Some(b) = &mut e.curve {
            b.t.swap(0, 1);
        }
        let elements = self
            .elements
            .iter()
            .map(|el| Element {
                kappa: el.kappa,
                edges: el
                    .edges
                    .iter()
                    .map(|&u| {
                        if u.edge == edge {
                            EdgeUse {
                                edge,
                                reversed: !u.reversed,
                            }
                        } else {
                            u
                        }
                    })
                    .collect(),
            })
            .collect();
        Self::new(self.vertices.clone(), self.curves.clone(), edges, elements)
    }

    /// Copy of the mesh with a different κ per element.
    pub fn with_kappa(&self, kappa: impl Fn(usize, &ElementGeometry) -> f64) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, el)| Element {
                edges: el.edges.clone(),
                kappa: kappa(i, &self.geometry[i]),
            })
            .collect();
        Self::new(self.vertices.clone(), self.curves.clone(), self.edges.clone(), elements)
    }

    fn compute_geometry(&self, element: usize) -> ElementGeometry {
        let verts = self.element_vertices(element);
        let chord_centroid = polygon_centroid(&verts);
        let boundary = self.element_boundary(element);
        let scale = verts
            .iter()
            .map(|v| (v - chord_centroid).norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let raw = quadrature::boundary_moments(&boundary, chord_centroid, scale, 1, 16);
        let area = raw[0];
        let centroid = chord_centroid + Vec2::new(raw[1], raw[2]) * (scale / raw[0]);

        let mut samples = verts.clone();
        for m in &boundary {
            if m.is_curved() {
                let (lo, hi) = m.interval();
                for j in 1..16 {
                    samples.push(m.eval(lo + (hi - lo) * j as f64 / 16.0).position);
                }
            }
        }
        let mut diameter: f64 = 0.0;
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }
        ElementGeometry {
            area,
            centroid,
            diameter,
            chord_centroid,
        }
    }
}

/// Signed area of a polygon (positive for counterclockwise order).
pub fn polygon_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Area centroid of a simple polygon.
pub fn polygon_centroid(v: &[Vec2]) -> Vec2 {
    let n = v.len();
    let origin = v[0];
    let mut c = Vec2::zeros();
    let mut area = 0.0;
    for i in 0..n {
        let (a, b) = (v[i] - origin, v[(i + 1) % n] - origin);
        let cross = a.x * b.y - b.x * a.y;
        area += cross;
        c += (a + b) * cross;
    }
    if area.abs() < f64::MIN_POSITIVE {
        return v.iter().sum::<Vec2>() / n as f64;
    }
    origin + c / (3.0 * area)
}
