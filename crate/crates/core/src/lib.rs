//! Nonconforming virtual element method for diffusion problems on polygonal
//! meshes whose boundary and interface edges may be curved.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: parametrised curves, the mesh data model, generators for
//!   the disk, sine-bounded and interface domains, JSON mesh I/O and a
//!   shape-regularity validator.
//! * [`basis`]: scaled monomials on elements and on edge parameter intervals.
//! * [`quadrature`]: Gauss rules on edge parameter intervals, monomial moments
//!   by the divergence theorem and a fan sub-triangulation bulk rule.
//! * [`element`]: degrees of freedom, the edge/bulk `L2` projectors, the
//!   Ritz-Galerkin projector, stabilisation, local stiffness and load.
//! * [`assembly`]: global numbering with shared edge blocks, Dirichlet
//!   moments, sparse assembly and the linear solvers.
//! * [`postproc`]: DoF interpolation, projected error quantities and rate
//!   fitting.
//! * [`cases`]: the manufactured test problems and the refinement families
//!   used by the convergence studies.
//! * [`cli`]: the `curvem` command line front end.

// `!(x > 0.0)` is used on purpose to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod basis;
pub mod cases;
pub mod cli;
pub mod element;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod postproc;
pub mod quadrature;

pub use error::{Error, Result};

/// Points and vectors in the plane.
pub type Vec2 = nalgebra::Vector2<f64>;

/// Polynomial degree supported by the bases and element routines.
pub const MAX_DEGREE: usize = 6;

/// `(0..n).map(f)`, element-parallel when the `parallel` feature is on.
/// Results keep index order.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
