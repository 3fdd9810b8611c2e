#![allow(dead_code)]

use std::f64::consts::PI;

use curvem::assembly::Discretization;
use curvem::cases::Problem;
use curvem::geometry::{mesh_read, Curve, CurveBinding, CurveKind, Edge, EdgeUse, Element, Mesh};
use curvem::quadrature::BulkRule;
use curvem::Vec2;
use nalgebra::DVector;
use rand::Rng;

pub fn fixture(name: &str) -> Mesh {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    mesh_read(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Single-element mesh from a counterclockwise vertex loop, all edges
/// straight.
pub fn polygon(vertices: Vec<Vec2>) -> Mesh {
    let n = vertices.len();
    let edges = (0..n)
        .map(|i| Edge {
            v: [i, (i + 1) % n],
            curve: None,
        })
        .collect();
    let element = Element {
        edges: (0..n).map(EdgeUse::forward).collect(),
        kappa: 1.0,
    };
    Mesh::new(vertices, Vec::new(), edges, vec![element]).unwrap()
}

/// Regular `n`-gon around `center` with radial and angular jitter; stays
/// star-shaped with respect to `center`.
pub fn random_polygon(rng: &mut impl Rng, n: usize, center: Vec2, radius: f64) -> Mesh {
    let offset = rng.random_range(0.0..2.0 * PI);
    let step = 2.0 * PI / n as f64;
    let vertices = (0..n)
        .map(|i| {
            let a = offset + step * (i as f64 + rng.random_range(-0.2..0.2));
            let r = radius * rng.random_range(0.7..1.3);
            center + Vec2::new(a.cos(), a.sin()) * r
        })
        .collect();
    polygon(vertices)
}

/// Annular-sector-like element with one circular edge. With `convex` the
/// element lies inside the circle and the arc bulges outwards; otherwise it
/// lies outside and the arc is traversed clockwise.
pub fn random_curved_element(rng: &mut impl Rng, convex: bool) -> Mesh {
    let center = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let radius = rng.random_range(0.3..2.0);
    let a0 = rng.random_range(-PI..PI);
    let a1 = a0 + rng.random_range(0.3..0.9);
    let on_circle = |a: f64| center + Vec2::new(a.cos(), a.sin()) * radius;
    // a concave arc needs a deep element for the chord centroid to see it
    let depth = radius
        * if convex {
            rng.random_range(0.3..0.6)
        } else {
            rng.random_range(0.6..1.0)
        };
    let jitter = |a: f64, r: f64, rng: &mut dyn rand::RngCore| {
        let a = a + rng.random_range(-0.05..0.05);
        let r = r + depth * rng.random_range(-0.1..0.1);
        center + Vec2::new(a.cos(), a.sin()) * r
    };
    let curve = Curve::new(
        0,
        CurveKind::CircleArc {
            center: [center.x, center.y],
            radius,
            angle0: a0,
            angle1: a1,
        },
    );
    let arc = Edge {
        v: [0, 1],
        curve: Some(CurveBinding { curve: 0, t: [a0, a1] }),
    };
    let (vertices, arc_use) = if convex {
        let r = radius - depth;
        (
            vec![on_circle(a0), on_circle(a1), jitter(a1, r, rng), jitter(a0, r, rng)],
            EdgeUse::forward(0),
        )
    } else {
        let r = radius + depth;
        (
            vec![on_circle(a0), on_circle(a1), jitter(a0, r, rng), jitter(a1, r, rng)],
            EdgeUse::backward(0),
        )
    };
    let straight = |a, b| Edge { v: [a, b], curve: None };
    let (edges, uses) = if convex {
        (
            vec![arc, straight(1, 2), straight(2, 3), straight(3, 0)],
            vec![arc_use, EdgeUse::forward(1), EdgeUse::forward(2), EdgeUse::forward(3)],
        )
    } else {
        (
            vec![arc, straight(0, 2), straight(2, 3), straight(3, 1)],
            vec![EdgeUse::forward(1), EdgeUse::forward(2), EdgeUse::forward(3), arc_use],
        )
    };
    let element = Element {
        edges: uses,
        kappa: 1.0,
    };
    Mesh::new(vertices, vec![curve], edges, vec![element]).unwrap()
}

/// Absolute `(|u - Π∇u_h|_1, ‖u - Π∇u_h‖_0)` by bulk quadrature.
pub fn absolute_errors(disc: &Discretization, dofs: &DVector<f64>, problem: &dyn Problem) -> (f64, f64) {
    let (mut h1, mut l2) = (0.0, 0.0);
    for (el, local) in disc.elements.iter().enumerate() {
        let coeffs = local.project(&disc.local(el, dofs));
        let rule = BulkRule::for_element(&disc.mesh, el, disc.settings.bulk_degree(), &disc.settings.orders).unwrap();
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let (v, g) = local.eval_polynomial(&coeffs, *p);
            h1 += w * (problem.grad(*p) - g).norm_squared();
            l2 += w * (problem.u(*p) - v).powi(2);
        }
    }
    (h1.sqrt(), l2.sqrt())
}

pub fn max_abs(m: impl IntoIterator<Item = f64>) -> f64 {
    m.into_iter().fold(0.0, |a, b| a.max(b.abs()))
}
