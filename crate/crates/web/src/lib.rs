//! Browser bindings for the `curvem` solver: mesh preview, a single solve
//! coloured by the projected solution, and a small convergence table.
//!
//! Every export returns a JSON string so the page needs no glue beyond
//! `JSON.parse`.

use curvem::assembly::Discretization;
use curvem::cases::{case_convergence, run, Case, MeshFamily};
use curvem::element::Settings;
use curvem::geometry::Mesh;
use curvem::linalg::SolverKind;
use curvem::postproc::CSV_HEADER;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Points per curved edge in the drawn outlines.
const ARC_SAMPLES: usize = 12;

/// Largest level the page may request; keeps a solve well under a second.
pub const MAX_LEVEL: usize = 3;

#[derive(Serialize, Debug)]
pub struct Cell {
    /// Closed outline, curved edges sampled.
    pub outline: Vec<[f64; 2]>,
    pub kappa: f64,
    /// `Π∇ u_h` at the centroid, when a solution is attached.
    pub value: Option<f64>,
}

#[derive(Serialize, Debug)]
pub struct MeshView {
    pub cells: Vec<Cell>,
    pub curved_edges: usize,
}

#[derive(Serialize, Debug)]
pub struct SolveView {
    pub mesh: MeshView,
    pub h: f64,
    pub ndofs: usize,
    pub eh1: f64,
    pub el2: f64,
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn check_level(level: usize) -> Result<(), String> {
    if level > MAX_LEVEL {
        return Err(format!("level {level} exceeds the demo limit {MAX_LEVEL}"));
    }
    Ok(())
}

fn outline(mesh: &Mesh, element: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for map in mesh.element_boundary(element) {
        let (lo, hi) = map.interval();
        let n = if map.is_curved() { ARC_SAMPLES } else { 1 };
        for i in 0..n {
            let p = map.eval(lo + (hi - lo) * i as f64 / n as f64).position;
            out.push([p.x, p.y]);
        }
    }
    out
}

fn mesh_view(mesh: &Mesh, values: Option<&[f64]>) -> MeshView {
    let cells = (0..mesh.num_elements())
        .map(|el| Cell {
            outline: outline(mesh, el),
            kappa: mesh.elements()[el].kappa,
            value: values.map(|v| v[el]),
        })
        .collect();
    let curved_edges = (0..mesh.num_edges()).filter(|&e| mesh.is_curved(e)).count();
    MeshView { cells, curved_edges }
}

fn centroid_values(disc: &Discretization, dofs: &nalgebra::DVector<f64>) -> Vec<f64> {
    (0..disc.elements.len())
        .map(|el| {
            let local = &disc.elements[el];
            let coeffs = local.project(&disc.local(el, dofs));
            local.eval_polynomial(&coeffs, local.centroid).0
        })
        .collect()
}

/// Outline of level `level` of a mesh family.
pub fn mesh_preview(family: &str, level: usize) -> Result<MeshView, String> {
    check_level(level)?;
    let family: MeshFamily = parse(family)?;
    Ok(mesh_view(&family.mesh(level), None))
}

/// Solves a test case on its own mesh family.
pub fn solve_case(case: &str, k: usize, level: usize) -> Result<SolveView, String> {
    check_level(level)?;
    let case: Case = parse(case)?;
    let mesh = case.family().mesh(level);
    let (disc, solution, errors) =
        run(mesh, Settings::new(k), case.problem(), SolverKind::Direct).map_err(|e| e.to_string())?;
    let values = centroid_values(&disc, &solution.dofs);
    Ok(SolveView {
        mesh: mesh_view(&disc.mesh, Some(&values)),
        h: errors.h,
        ndofs: errors.ndofs,
        eh1: errors.eh1,
        el2: errors.el2,
    })
}

/// Rate table as CSV for `levels` refinements, `levels` in `3..=MAX_LEVEL + 1`.
pub fn convergence_csv(case: &str, k: usize, levels: usize) -> Result<String, String> {
    if !(3..=MAX_LEVEL + 1).contains(&levels) {
        return Err(format!("levels must lie in 3..={}", MAX_LEVEL + 1));
    }
    let case: Case = parse(case)?;
    let report = case_convergence(case, levels, Settings::new(k), SolverKind::Direct).map_err(|e| e.to_string())?;
    Ok(format!("{CSV_HEADER}\n{}", report.csv_rows()))
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = meshPreview)]
pub fn mesh_preview_js(family: &str, level: usize) -> Result<String, JsValue> {
    to_js(mesh_preview(family, level))
}

#[wasm_bindgen(js_name = solveCase)]
pub fn solve_case_js(case: &str, k: usize, level: usize) -> Result<String, JsValue> {
    to_js(solve_case(case, k, level))
}

#[wasm_bindgen(js_name = convergenceTable)]
pub fn convergence_table_js(case: &str, k: usize, levels: usize) -> Result<String, JsValue> {
    convergence_csv(case, k, levels).map_err(|e| JsValue::from_str(&e))
}
