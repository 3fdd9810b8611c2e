use super::mesh::Mesh;
use crate::{Error, Result, Vec2};

/// Centre and radius of the largest disk inside the kernel of a
/// counterclockwise polygon (the set of points the polygon is star-shaped
/// with respect to). `None` when the kernel has empty interior.
pub fn kernel_center(vertices: &[Vec2]) -> Option<(Vec2, f64)> {
    let n = vertices.len();
    // n·x + r <= c for each edge, n the outward unit normal
    let planes: Vec<(Vec2, f64)> = (0..n)
        .filter_map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let d = b - a;
            let len = d.norm();
            (len > 0.0).then(|| {
                let normal = Vec2::new(d.y, -d.x) / len;
                (normal, normal.dot(&a))
            })
        })
        .collect();
    let scale = vertices.iter().flat_map(|v| [v.x.abs(), v.y.abs()]).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let mut best: Option<(Vec2, f64)> = None;
    let m = planes.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let rows = [planes[i], planes[j], planes[l]];
                let a = nalgebra::Matrix3::from_fn(|r, c| match c {
                    0 => rows[r].0.x,
                    1 => rows[r].0.y,
                    _ => 1.0,
                });
                let rhs = nalgebra::Vector3::new(rows[0].1, rows[1].1, rows[2].1);
                let Some(sol) = a.lu().solve(&rhs) else {
                    continue;
                };
                let (x, r) = (Vec2::new(sol[0], sol[1]), sol[2]);
                if !r.is_finite() || r <= 0.0 {
                    continue;
                }
                if best.is_some_and(|(_, br)| br >= r) {
                    continue;
                }
                if planes.iter().all(|(nrm, c)| nrm.dot(&x) + r <= c + tol) {
                    best = Some((x, r));
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementCheck {
    pub element: usize,
    /// `min_e h_e / h_K` over the element's edges (chord lengths).
    pub edge_ratio: f64,
    /// Radius of the largest ball in the chord-polygon kernel over `h_K`.
    pub kernel_ratio: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub rho: f64,
    pub elements: Vec<ElementCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.elements.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ElementCheck> {
        self.elements.iter().filter(|c| !c.passed)
    }

    pub fn min_edge_ratio(&self) -> f64 {
        self.elements.iter().map(|c| c.edge_ratio).fold(f64::INFINITY, f64::min)
    }

    pub fn min_kernel_ratio(&self) -> f64 {
        self.elements
            .iter()
            .map(|c| c.kernel_ratio)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks `h_e >= ρ h_K` on every edge and star-shapedness of the chord
/// polygon with respect to a ball of radius `ρ h_K`, and re-verifies the
/// interior-edge orientation pairing. Topology defects are hard errors;
/// regularity failures are reported per element.
pub fn mesh_validate(mesh: &Mesh, rho: f64) -> Result<ValidationReport> {
    let mut problems = Vec::new();
    for e in 0..mesh.num_edges() {
        let [fwd, bwd] = mesh.edge_elements(e);
        if fwd.is_none() && bwd.is_none() {
            problems.push(format!("dangling edge {e}"));
        }
        if fwd.is_some() && fwd == bwd {
            problems.push(format!("edge {e} used twice by element {}", fwd.unwrap_or_default()));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Structure(problems));
    }

    let elements = (0..mesh.num_elements())
        .map(|k| {
            let hk = mesh.geometry(k).diameter;
            let edge_ratio = mesh.elements()[k]
                .edges
                .iter()
                .map(|u| mesh.edge_map(u.edge).chord_length() / hk)
                .fold(f64::INFINITY, f64::min);
            let kernel_ratio = kernel_center(&mesh.element_vertices(k)).map_or(0.0, |(_, r)| r / hk);
            ElementCheck {
                element: k,
                edge_ratio,
                kernel_ratio,
                passed: edge_ratio >= rho && kernel_ratio >= rho,
            }
        })
        .collect();
    Ok(ValidationReport { rho, elements })
}
