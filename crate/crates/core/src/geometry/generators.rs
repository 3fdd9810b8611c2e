//! Mesh generators for the unit disk (optionally split by the circle
//! `r = 1/2`), the sine-bounded domain and the unit square.

use std::f64::consts::PI;

use super::curve::{full_circle, sine_lower, sine_upper, Curve};
use super::mesh::{CurveBinding, Edge, EdgeUse, Element, Mesh};
use crate::{Result, Vec2};

pub const OUTER_CIRCLE: u32 = 0;
pub const INTERFACE_CIRCLE: u32 = 1;
pub const SINE_LOWER: u32 = 0;
pub const SINE_UPPER: u32 = 1;

/// Diffusion coefficient inside and outside the interface circle.
///
/// These values make the piecewise radial solution `u3` of the interface
/// test the exact solution: its inner branch satisfies `-Δu = 5` (source 5,
/// κ = 1) and its outer branch `-Δu = 1/5` (source 1, κ = 5), with
/// continuous flux across `r = 1/2`.
pub const KAPPA_INNER: f64 = 1.0;
pub const KAPPA_OUTER: f64 = 5.0;

/// Radius of the interface circle.
pub const INTERFACE_RADIUS: f64 = 0.5;

/// Polar mesh of the unit disk with `rings x sectors` elements.
///
/// The innermost ring consists of triangles sharing the origin, the others
/// are annular sectors. Edges on the unit circle are bound to it. With
/// `interface_at_half` one ring boundary lies on `r = 1/2`, its edges are
/// bound to that circle (curved interior edges) and κ is set per side.
pub fn polar_disk(rings: usize, sectors: usize, interface_at_half: bool) -> Mesh {
    assert!(rings >= 1 && sectors >= 3, "need rings >= 1 and sectors >= 3");
    let radii: Vec<f64> = if interface_at_half && rings >= 2 {
        let inner = rings / 2;
        let outer = rings - inner;
        (0..=rings)
            .map(|i| {
                if i <= inner {
                    INTERFACE_RADIUS * i as f64 / inner as f64
                } else {
                    INTERFACE_RADIUS + (1.0 - INTERFACE_RADIUS) * (i - inner) as f64 / outer as f64
                }
            })
            .collect()
    } else {
        (0..=rings).map(|i| i as f64 / rings as f64).collect()
    };
    let interface_ring = interface_at_half
        .then(|| radii.iter().position(|&r| r == INTERFACE_RADIUS))
        .flatten();

    let angle = |j: usize| 2.0 * PI * j as f64 / sectors as f64;
    let mut vertices = vec![Vec2::zeros()];
    for r in &radii[1..] {
        for j in 0..sectors {
            let (s, c) = angle(j).sin_cos();
            vertices.push(Vec2::new(r * c, r * s));
        }
    }
    // circle i = 1..=rings, sector j
    let vid = |i: usize, j: usize| 1 + (i - 1) * sectors + (j % sectors);

    let mut curves = vec![Curve::new(OUTER_CIRCLE, full_circle(1.0))];
    if interface_ring.is_some() {
        curves.push(Curve::new(INTERFACE_CIRCLE, full_circle(INTERFACE_RADIUS)));
    }

    let mut edges = Vec::new();
    // radial[i][j]: from circle i (0 = origin) to circle i+1 at angle j
    let mut radial = vec![vec![0; sectors]; rings];
    for (i, row) in radial.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let from = if i == 0 { 0 } else { vid(i, j) };
            *slot = edges.len();
            edges.push(Edge {
                v: [from, vid(i + 1, j)],
                curve: None,
            });
        }
    }
    // arc[i][j]: on circle i+1 from angle j to j+1
    let mut arc = vec![vec![0; sectors]; rings];
    for (i, row) in arc.iter_mut().enumerate() {
        let circle = i + 1;
        let binding = if circle == rings {
            Some(OUTER_CIRCLE)
        } else if Some(circle) == interface_ring {
            Some(INTERFACE_CIRCLE)
        } else {
            None
        };
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = edges.len();
            edges.push(Edge {
                v: [vid(circle, j), vid(circle, j + 1)],
                curve: binding.map(|curve| CurveBinding {
                    curve,
                    t: [angle(j), angle(j + 1)],
                }),
            });
        }
    }

    let mut elements = Vec::new();
    for i in 0..rings {
        let kappa = match interface_ring {
            Some(ir) if i < ir => KAPPA_INNER,
            Some(_) => KAPPA_OUTER,
            None => 1.0,
        };
        for j in 0..sectors {
            let jn = (j + 1) % sectors;
            let mut uses = vec![
                EdgeUse::forward(radial[i][j]),
                EdgeUse::forward(arc[i][j]),
                EdgeUse::backward(radial[i][jn]),
            ];
            if i > 0 {
                uses.push(EdgeUse::backward(arc[i - 1][j]));
            }
            elements.push(Element { edges: uses, kappa });
        }
    }
    Mesh::new(vertices, curves, edges, elements).expect("polar generator builds a valid mesh")
}

/// Structured `n x n` quadrilateral mesh of the unit square.
pub fn unit_square_quads(n: usize) -> Mesh {
    assert!(n >= 1);
    let (vertices, edges, elements) = square_grid(n);
    Mesh::new(vertices, Vec::new(), edges, elements).expect("square generator builds a valid mesh")
}

fn square_grid(n: usize) -> (Vec<Vec2>, Vec<Edge>, Vec<Element>) {
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Vec2::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let mut edges = Vec::new();
    let hid = |i: usize, j: usize| j * n + i;
    for j in 0..=n {
        for i in 0..n {
            edges.push(Edge {
                v: [vid(i, j), vid(i + 1, j)],
                curve: None,
            });
        }
    }
    let offset = (n + 1) * n;
    let vert_id = |i: usize, j: usize| offset + i * n + j;
    for i in 0..=n {
        for j in 0..n {
            edges.push(Edge {
                v: [vid(i, j), vid(i, j + 1)],
                curve: None,
            });
        }
    }
    let mut elements = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            elements.push(Element {
                edges: vec![
                    EdgeUse::forward(hid(i, j)),
                    EdgeUse::forward(vert_id(i + 1, j)),
                    EdgeUse::backward(hid(i, j + 1)),
                    EdgeUse::backward(vert_id(i, j)),
                ],
                kappa: 1.0,
            });
        }
    }
    (vertices, edges, elements)
}

pub fn g1(x: f64) -> f64 {
    (PI * x).sin() / 20.0
}

pub fn g2(x: f64) -> f64 {
    1.0 + (3.0 * PI * x).sin() / 20.0
}

/// Maps a node of the unit square to the sine-bounded domain
/// `{0 < x < 1, g1(x) < y < g2(x)}`; the two branches agree at `y = 1/2`.
pub fn map_to_sine_domain(p: Vec2) -> Vec2 {
    let (x, y) = (p.x, p.y);
    if y <= 0.5 {
        Vec2::new(x, y + g1(x) * (1.0 - 2.0 * y))
    } else {
        Vec2::new(x, 1.0 - y + g2(x) * (2.0 * y - 1.0))
    }
}

/// Maps a straight mesh of the unit square onto the sine-bounded domain.
/// Edges with both endpoints on `y = 0` (`y = 1`) are bound to `g1` (`g2`)
/// with the abscissa as parameter; all other edges stay straight.
pub fn map_square_mesh(square: &Mesh) -> Result<Mesh> {
    const ON_SIDE: f64 = 1e-12;
    let vertices: Vec<Vec2> = square.vertices().iter().map(|&p| map_to_sine_domain(p)).collect();
    let edges = square
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (square.vertices()[e.v[0]], square.vertices()[e.v[1]]);
            let curve = if a.y.abs() < ON_SIDE && b.y.abs() < ON_SIDE {
                Some(SINE_LOWER)
            } else if (a.y - 1.0).abs() < ON_SIDE && (b.y - 1.0).abs() < ON_SIDE {
                Some(SINE_UPPER)
            } else {
                None
            };
            Edge {
                v: e.v,
                curve: curve.map(|curve| CurveBinding { curve, t: [a.x, b.x] }),
            }
        })
        .collect();
    let curves = vec![
        Curve::new(SINE_LOWER, sine_lower()),
        Curve::new(SINE_UPPER, sine_upper()),
    ];
    Mesh::new(vertices, curves, edges, square.elements().to_vec())
}

/// `n x n` quadrilateral mesh mapped onto the sine-bounded domain.
pub fn sine_quads(n: usize) -> Mesh {
    map_square_mesh(&unit_square_quads(n)).expect("mapped square mesh is valid")
}
