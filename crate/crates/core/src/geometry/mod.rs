//! Curves, meshes, generators, mesh files and regularity checks.

mod curve;
pub mod generators;
pub mod io;
mod mesh;
mod validate;

pub use curve::{full_circle, sine_lower, sine_upper, Curve, CurveKind, CurvePoint};
pub use io::{mesh_from_json, mesh_read, mesh_to_json, mesh_write};
pub use mesh::{
    polygon_area, polygon_centroid, CurveBinding, Edge, EdgeMap, EdgeMarker, EdgeUse, Element, ElementGeometry, Mesh,
    BINDING_TOL,
};
pub use validate::{kernel_center, mesh_validate, ElementCheck, ValidationReport};

/// `curve_eval`: position, tangent and speed of a table curve at `t`.
pub fn curve_eval(curve: &Curve, t: f64) -> crate::Result<(crate::Vec2, crate::Vec2, f64)> {
    let p = curve.eval(t)?;
    Ok((p.position, p.tangent, p.speed()))
}
