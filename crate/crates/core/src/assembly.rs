//! Global numbering, Dirichlet data, sparse assembly and solve.
//!
//! Global DoFs are laid out as one block of `k` edge moments per edge (in
//! the edge's canonical orientation), followed by one block of `k(k-1)/2`
//! bulk moments per element. An element that traverses an edge against its
//! canonical orientation reads the block through the sign table `(-1)^i`.
//! Boundary edge blocks are fixed to the moments of the Dirichlet datum and
//! eliminated.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::element::{edge_moments, reversal_parity, LocalElement, Settings};
use crate::geometry::Mesh;
use crate::linalg::{cholesky_solve, conjugate_gradient, SolveStats, SolverKind, CG_TOLERANCE};
use crate::{par_map, Result, Vec2};

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalDofMap {
    pub k: usize,
    pub num_edges: usize,
    pub num_elements: usize,
    pub bulk_per_element: usize,
    constrained: Vec<bool>,
}

impl GlobalDofMap {
    pub fn len(&self) -> usize {
        self.constrained.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constrained.is_empty()
    }

    pub fn edge_dof(&self, edge: usize, i: usize) -> usize {
        edge * self.k + i
    }

    pub fn bulk_dof(&self, element: usize, j: usize) -> usize {
        self.k * self.num_edges + element * self.bulk_per_element + j
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    pub fn num_constrained(&self) -> usize {
        self.constrained.iter().filter(|&&c| c).count()
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.len()).filter(|&d| !self.constrained[d]).collect()
    }

    /// Global id and sign of every local DoF of an element.
    pub fn element_dofs(&self, mesh: &Mesh, element: usize) -> Vec<(usize, f64)> {
        let parity = reversal_parity(self.k);
        let mut out = Vec::new();
        for usage in &mesh.elements()[element].edges {
            for (i, p) in parity.iter().enumerate() {
                let sign = if usage.reversed { *p } else { 1.0 };
                out.push((self.edge_dof(usage.edge, i), sign));
            }
        }
        for j in 0..self.bulk_per_element {
            out.push((self.bulk_dof(element, j), 1.0));
        }
        out
    }

    /// Local DoF vector of an element read from a global vector.
    pub fn gather(&self, mesh: &Mesh, element: usize, global: &DVector<f64>) -> DVector<f64> {
        let map = self.element_dofs(mesh, element);
        DVector::from_iterator(map.len(), map.iter().map(|&(g, s)| s * global[g]))
    }
}

pub fn build_dof_map(mesh: &Mesh, k: usize) -> GlobalDofMap {
    let nb = k * k.saturating_sub(1) / 2;
    let ne = mesh.num_edges();
    let mut constrained = vec![false; k * ne + nb * mesh.num_elements()];
    for e in mesh.boundary_edges() {
        for i in 0..k {
            constrained[e * k + i] = true;
        }
    }
    GlobalDofMap {
        k,
        num_edges: ne,
        num_elements: mesh.num_elements(),
        bulk_per_element: nb,
        constrained,
    }
}

/// Full-length vector holding `|e|^{-1} ∫_e g m̃_i ds` on the DoFs of
/// boundary edges and zero elsewhere.
pub fn dirichlet_moments<G>(mesh: &Mesh, dofs: &GlobalDofMap, settings: &Settings, g: G) -> DVector<f64>
where
    G: Fn(Vec2) -> f64 + Sync,
{
    let boundary = mesh.boundary_edges();
    let blocks = par_map(boundary.len(), |i| edge_moments(mesh, boundary[i], settings, &g));
    let mut out = DVector::zeros(dofs.len());
    for (e, block) in boundary.iter().zip(blocks) {
        for (i, v) in block.into_iter().enumerate() {
            out[dofs.edge_dof(*e, i)] = v;
        }
    }
    out
}

/// A mesh with its local element matrices and global numbering.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: Mesh,
    pub settings: Settings,
    pub dofs: GlobalDofMap,
    pub elements: Vec<LocalElement>,
}

impl Discretization {
    pub fn new(mesh: Mesh, settings: Settings) -> Result<Self> {
        settings.check()?;
        let elements = par_map(mesh.num_elements(), |el| LocalElement::build(&mesh, el, &settings))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let dofs = build_dof_map(&mesh, settings.k);
        Ok(Self {
            mesh,
            settings,
            dofs,
            elements,
        })
    }

    pub fn k(&self) -> usize {
        self.settings.k
    }

    pub fn num_dofs(&self) -> usize {
        self.dofs.len()
    }

    pub fn local(&self, element: usize, global: &DVector<f64>) -> DVector<f64> {
        self.dofs.gather(&self.mesh, element, global)
    }
}

/// Free-DoF system after eliminating the boundary blocks. Bulk unknowns are
/// frame variables (see [`LocalElement::frame`]); edge unknowns are the edge
/// DoFs themselves.
#[derive(Clone, Debug)]
pub struct GlobalSystem {
    pub matrix: CsrMatrix<f64>,
    pub rhs: DVector<f64>,
    /// Global id of every free DoF, in matrix order.
    pub free: Vec<usize>,
    /// Full-length vector carrying the constrained values.
    pub lifted: DVector<f64>,
    /// First global bulk id and frame factor of every element.
    frames: Vec<(usize, DMatrix<f64>)>,
}

impl GlobalSystem {
    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    /// Full DoF vector from the system unknowns and the constrained values.
    pub fn expand(&self, free_values: &DVector<f64>) -> DVector<f64> {
        let mut out = self.lifted.clone();
        for (i, &g) in self.free.iter().enumerate() {
            out[g] = free_values[i];
        }
        for (start, l) in &self.frames {
            let n = l.nrows();
            let bulk = l * out.rows(*start, n);
            out.rows_mut(*start, n).copy_from(&bulk);
        }
        out
    }
}

/// Sums of local matrices into a full-size COO matrix, for inspection.
pub fn assemble_full_matrix(disc: &Discretization) -> CsrMatrix<f64> {
    let n = disc.num_dofs();
    let mut coo = CooMatrix::new(n, n);
    for (el, local) in disc.elements.iter().enumerate() {
        let map = disc.dofs.element_dofs(&disc.mesh, el);
        scatter(&mut coo, &map, &local.stiffness, Some);
    }
    CsrMatrix::from(&coo)
}

fn scatter(coo: &mut CooMatrix<f64>, map: &[(usize, f64)], a: &DMatrix<f64>, index: impl Fn(usize) -> Option<usize>) {
    for (i, &(gi, si)) in map.iter().enumerate() {
        let Some(r) = index(gi) else { continue };
        for (j, &(gj, sj)) in map.iter().enumerate() {
            if let Some(c) = index(gj) {
                coo.push(r, c, si * sj * a[(i, j)]);
            }
        }
    }
}

pub fn assemble<F, G>(disc: &Discretization, f: F, g: G) -> Result<GlobalSystem>
where
    F: Fn(Vec2) -> f64 + Sync,
    G: Fn(Vec2) -> f64 + Sync,
{
    let mesh = &disc.mesh;
    let dofs = &disc.dofs;
    let lifted = dirichlet_moments(mesh, dofs, &disc.settings, g);
    let loads = par_map(disc.elements.len(), |el| {
        disc.elements[el].system_load(mesh, &disc.settings, &f)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let free = dofs.free_dofs();
    let mut index = vec![None; dofs.len()];
    for (i, &g) in free.iter().enumerate() {
        index[g] = Some(i);
    }
    let n = free.len();
    let mut coo = CooMatrix::new(n, n);
    let mut rhs = DVector::zeros(n);
    for (el, (local, load)) in disc.elements.iter().zip(&loads).enumerate() {
        let map = dofs.element_dofs(mesh, el);
        scatter(&mut coo, &map, &local.system_stiffness, |g| index[g]);
        for (i, &(gi, si)) in map.iter().enumerate() {
            let Some(r) = index[gi] else { continue };
            rhs[r] += si * load[i];
            for (j, &(gj, sj)) in map.iter().enumerate() {
                if index[gj].is_none() {
                    rhs[r] -= si * sj * local.system_stiffness[(i, j)] * lifted[gj];
                }
            }
        }
    }
    let frames = disc
        .elements
        .iter()
        .enumerate()
        .filter(|(_, local)| local.frame.nrows() > 0)
        .map(|(el, local)| (dofs.bulk_dof(el, 0), local.frame.clone()))
        .collect();
    Ok(GlobalSystem {
        matrix: CsrMatrix::from(&coo),
        rhs,
        free,
        lifted,
        frames,
    })
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// All global DoFs, constrained ones included.
    pub dofs: DVector<f64>,
    /// Solution of the assembled system, in its own variables.
    pub unknowns: DVector<f64>,
    pub stats: SolveStats,
}

pub fn solve(system: &GlobalSystem, solver: SolverKind) -> Result<Solution> {
    let (x, stats) = if system.num_free() == 0 {
        (
            DVector::zeros(0),
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        )
    } else {
        match solver {
            SolverKind::Cg => {
                let max_iter = 10 * system.num_free() + 100;
                conjugate_gradient(&system.matrix, &system.rhs, CG_TOLERANCE, max_iter)?
            }
            SolverKind::Direct => cholesky_solve(&system.matrix, &system.rhs)?,
        }
    };
    Ok(Solution {
        dofs: system.expand(&x),
        unknowns: x,
        stats,
    })
}

/// Builds, assembles and solves `-div(κ ∇u) = f`, `u = g` on the boundary.
pub fn solve_problem<F, G>(
    mesh: Mesh,
    settings: Settings,
    f: F,
    g: G,
    solver: SolverKind,
) -> Result<(Discretization, Solution)>
where
    F: Fn(Vec2) -> f64 + Sync,
    G: Fn(Vec2) -> f64 + Sync,
{
    let disc = Discretization::new(mesh, settings)?;
    let system = assemble(&disc, f, g)?;
    let solution = solve(&system, solver)?;
    Ok((disc, solution))
}

/// Global DoF vector re-expressed for the mesh with `edge` reversed.
pub fn reverse_edge_dofs(dofs: &GlobalDofMap, edge: usize, values: &DVector<f64>) -> DVector<f64> {
    let mut out = values.clone();
    for (i, p) in reversal_parity(dofs.k).into_iter().enumerate() {
        out[dofs.edge_dof(edge, i)] *= p;
    }
    out
}

/// `dof_id,value` lines with 17 significant digits.
pub fn write_solution_csv(mut out: impl Write, values: &DVector<f64>) -> std::io::Result<()> {
    writeln!(out, "dof_id,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i},{v:.16e}")?;
    }
    Ok(())
}
