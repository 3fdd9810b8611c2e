//! Gauss rules on edge parameter intervals, monomial moments by the
//! divergence theorem, and fan sub-triangulation rules over curved elements.

use std::sync::OnceLock;

use crate::basis::{monomial_index, num_monomials};
use crate::geometry::{kernel_center, CurvePoint, EdgeMap, Mesh};
use crate::{Error, Result, Vec2};

const CACHED_RULES: usize = 96;

/// Gauss-Legendre nodes and weights on `[-1, 1]` with `n` points.
pub fn gauss_legendre(n: usize) -> (&'static [f64], &'static [f64]) {
    static RULES: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    assert!(
        (1..=CACHED_RULES).contains(&n),
        "Gauss rule with {n} points is not available"
    );
    let rules = RULES.get_or_init(|| (1..=CACHED_RULES).map(compute_gauss_legendre).collect());
    let (x, w) = &rules[n - 1];
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
    }
    (p1, n as f64 * (z * p1 - p2) / (z * z - 1.0))
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Point counts of the edge and bulk rules.
///
/// Edge rules use `k + straight_extra` points on straight edges and
/// `k + curved_extra` on curved ones, raised when the integrand degree
/// demands more. Everything is multiplied by `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureOrders {
    pub straight_extra: usize,
    pub curved_extra: usize,
    pub factor: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        Self {
            straight_extra: 4,
            curved_extra: 8,
            factor: 1,
        }
    }
}

impl QuadratureOrders {
    pub fn scaled(self, factor: usize) -> Self {
        Self {
            factor: self.factor * factor,
            ..self
        }
    }

    /// Points for an edge integrand that is a polynomial of `degree` in the
    /// parameter on straight edges.
    pub fn edge_points(&self, k: usize, degree: usize, curved: bool) -> usize {
        let extra = if curved { self.curved_extra } else { self.straight_extra };
        let exact = degree / 2 + 1;
        ((k + extra).max(exact) * self.factor).min(CACHED_RULES)
    }

    /// (points along the edge, points towards the star point) for bulk
    /// integrands of polynomial `degree`.
    pub fn bulk_points(&self, degree: usize, curved: bool) -> (usize, usize) {
        let nt = degree / 2 + 1 + if curved { self.curved_extra } else { 0 };
        let ns = degree.div_ceil(2) + 1;
        (
            (nt * self.factor).min(CACHED_RULES),
            (ns * self.factor).min(CACHED_RULES),
        )
    }
}

/// Gauss rule on the parameter interval of an edge.
#[derive(Clone, Debug)]
pub struct EdgeRule {
    pub params: Vec<f64>,
    /// Parameter-space weights; they sum to the interval length.
    pub weights: Vec<f64>,
    pub points: Vec<CurvePoint>,
}

impl EdgeRule {
    pub fn new(map: &EdgeMap<'_>, n: usize) -> Self {
        let (lo, hi) = map.interval();
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let params: Vec<f64> = x.iter().map(|xi| mid + half * xi).collect();
        let weights = w.iter().map(|wi| wi * half).collect();
        let points = params.iter().map(|&t| map.eval(t)).collect();
        Self {
            params,
            weights,
            points,
        }
    }

    /// Arc-length weights `w_q |γ'(t_q)|`.
    pub fn ds_weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().zip(&self.points).map(|(w, p)| w * p.speed())
    }

    pub fn length(&self) -> f64 {
        self.ds_weights().sum()
    }

    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.ds_weights()
            .zip(&self.points)
            .map(|(w, p)| w * f(p.position))
            .sum()
    }
}

/// `∫_e f ds` pulled back to the parameter interval with `n` points.
pub fn edge_integral(map: &EdgeMap<'_>, n: usize, f: impl Fn(Vec2) -> f64) -> f64 {
    EdgeRule::new(map, n).integrate(f)
}

/// Moments `∫_K X^a Y^b dx dy` with `X = (x - o_x)/s`, `Y = (y - o_y)/s`, for
/// all `a + b <= degree` in graded lexicographic order, computed as
/// `∮ s X^{a+1} Y^b / (a+1) n_x ds` over a counterclockwise boundary.
///
/// Straight edges use a rule exact for the integrand; curved edges use at
/// least `curved_points` points.
pub fn boundary_moments(
    boundary: &[EdgeMap<'_>],
    origin: Vec2,
    scale: f64,
    degree: usize,
    curved_points: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; num_monomials(degree)];
    let exact = (degree + 3) / 2;
    let mut xp = vec![0.0; degree + 2];
    let mut yp = vec![0.0; degree + 1];
    for map in boundary {
        let n = if map.is_curved() {
            curved_points.max(exact + 4)
        } else {
            exact
        };
        let rule = EdgeRule::new(map, n.min(CACHED_RULES));
        for (w, p) in rule.weights.iter().zip(&rule.points) {
            let x = (p.position.x - origin.x) / scale;
            let y = (p.position.y - origin.y) / scale;
            // n_x |γ'| = γ_2' for counterclockwise traversal
            let factor = w * scale * p.tangent.y;
            xp[0] = 1.0;
            yp[0] = 1.0;
            for i in 1..xp.len() {
                xp[i] = xp[i - 1] * x;
            }
            for i in 1..yp.len() {
                yp[i] = yp[i - 1] * y;
            }
            for d in 0..=degree {
                for b in 0..=d {
                    let a = d - b;
                    out[monomial_index(a, b)] += factor * xp[a + 1] * yp[b] / (a + 1) as f64;
                }
            }
        }
    }
    out
}

/// Moments `μ_α = ∫_K m_α dK` of the scaled monomials of an element.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub degree: usize,
    pub values: Vec<f64>,
}

impl MomentTable {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[monomial_index(a, b)]
    }

    pub fn area(&self) -> f64 {
        self.values[0]
    }
}

/// Divergence-theorem moments of `((x - center)/h)^α` up to `degree`.
pub fn monomial_moments_divergence(
    boundary: &[EdgeMap<'_>],
    center: Vec2,
    h: f64,
    degree: usize,
    curved_points: usize,
) -> MomentTable {
    MomentTable {
        degree,
        values: boundary_moments(boundary, center, h, degree, curved_points),
    }
}

/// Quadrature over an element built from a fan of (possibly curved)
/// triangles `(t, s) -> (1 - s) γ(t) + s x_c` around a star point `x_c`.
#[derive(Clone, Debug)]
pub struct BulkRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    pub star: Vec2,
}

impl BulkRule {
    /// Fan rule around `star`; `None` if the Jacobian is not positive at
    /// some node, i.e. the element is not star-shaped with respect to it.
    pub fn with_star(boundary: &[EdgeMap<'_>], star: Vec2, degree: usize, orders: &QuadratureOrders) -> Option<Self> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for map in boundary {
            let (nt, ns) = orders.bulk_points(degree, map.is_curved());
            let rule = EdgeRule::new(map, nt);
            let (sx, sw) = gauss_legendre(ns);
            for (wt, p) in rule.weights.iter().zip(&rule.points) {
                let r = p.position - star;
                let cross = r.x * p.tangent.y - r.y * p.tangent.x;
                if !(cross > 0.0) {
                    return None;
                }
                for (xs, ws) in sx.iter().zip(sw) {
                    let s = 0.5 * (xs + 1.0);
                    points.push(p.position * (1.0 - s) + star * s);
                    weights.push(wt * 0.5 * ws * (1.0 - s) * cross);
                }
            }
        }
        Some(Self { points, weights, star })
    }

    /// Fan rule for an element of a mesh, exact for polynomials of `degree`
    /// on straight elements. The star point is the chord-polygon centroid,
    /// falling back to the centre of the largest ball in the polygon kernel.
    pub fn for_element(mesh: &Mesh, element: usize, degree: usize, orders: &QuadratureOrders) -> Result<Self> {
        let boundary = mesh.element_boundary(element);
        let star = mesh.geometry(element).chord_centroid;
        if let Some(rule) = Self::with_star(&boundary, star, degree, orders) {
            return Ok(rule);
        }
        if let Some((c, _)) = kernel_center(&mesh.element_vertices(element)) {
            if let Some(rule) = Self::with_star(&boundary, c, degree, orders) {
                return Ok(rule);
            }
        }
        Err(Error::StarPoint(element))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }
}

/// `∫_K f dK` with a prepared bulk rule.
pub fn bulk_integral(rule: &BulkRule, f: impl Fn(Vec2) -> f64) -> f64 {
    rule.integrate(f)
}
