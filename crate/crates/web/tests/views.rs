use curvem_web::{convergence_csv, mesh_preview, solve_case, MAX_LEVEL};

#[test]
fn polar_preview_has_curved_boundary() {
    let view = mesh_preview("polar", 0).unwrap();
    assert_eq!(view.cells.len(), 16);
    assert_eq!(view.curved_edges, 8);
    assert!(view.cells.iter().all(|c| c.value.is_none() && c.kappa == 1.0));
    // outer cells carry sampled arcs
    assert!(view.cells.iter().any(|c| c.outline.len() > 4));
}

#[test]
fn interface_preview_reports_both_coefficients() {
    let view = mesh_preview("polar-interface", 0).unwrap();
    let mut kappas: Vec<f64> = view.cells.iter().map(|c| c.kappa).collect();
    kappas.dedup();
    kappas.sort_by(f64::total_cmp);
    kappas.dedup();
    assert_eq!(kappas, vec![1.0, 5.0]);
}

#[test]
fn solve_attaches_values_and_errors() {
    let view = solve_case("disk-u1", 2, 1).unwrap();
    assert!(view.mesh.cells.iter().all(|c| c.value.is_some()));
    assert!(view.eh1 > 0.0 && view.eh1 < 0.2);
    let json = serde_json::to_string(&view).unwrap();
    assert!(json.contains("\"eh1\""));
}

#[test]
fn table_has_header_levels_and_fit() {
    let csv = convergence_csv("sine-u2", 2, 3).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("2,sine-quads,fit,"));
}

#[test]
fn bad_input_is_an_error() {
    assert!(mesh_preview("hexagons", 0).is_err());
    assert!(mesh_preview("polar", MAX_LEVEL + 1).is_err());
    assert!(solve_case("disk-u1", 0, 0).is_err());
    assert!(convergence_csv("disk-u1", 2, 2).is_err());
}
