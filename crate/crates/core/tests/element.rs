mod common;

use curvem::basis::{monomial_index, multi_indices, num_monomials, ScaledMonomials1D, ScaledMonomials2D};
use curvem::cases::MeshFamily;
use curvem::element::{EdgeLength, LoadProjection, LocalElement, Settings, Stabilization};
use curvem::geometry::generators::{polar_disk, sine_quads, unit_square_quads};
use curvem::geometry::Mesh;
use curvem::quadrature::EdgeRule;
use curvem::Vec2;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn monomial(local: &LocalElement, alpha: (usize, usize)) -> impl Fn(Vec2) -> f64 + '_ {
    let basis = ScaledMonomials2D::new(local.centroid, local.diameter, alpha.0 + alpha.1);
    move |p| basis.eval(p)[monomial_index(alpha.0, alpha.1)]
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    e
}

/// `E_e` restricted to the edge's own DoF block.
fn edge_block(local: &LocalElement, e: usize) -> DMatrix<f64> {
    local.edges[e].projection.columns(e * local.k, local.k).into_owned()
}

fn curved_elements(mesh: &Mesh) -> Vec<usize> {
    (0..mesh.num_elements())
        .filter(|&k| mesh.element_is_curved(k))
        .collect()
}

/// Moments `|e|^{-1} ∫_e v m̃_i ds` by an `n`-point rule on the element's
/// traversal parametrisation.
fn edge_dofs(mesh: &Mesh, element: usize, edge: usize, k: usize, n: usize, v: impl Fn(f64) -> f64) -> DVector<f64> {
    let map = mesh.element_boundary(element)[edge];
    let (lo, hi) = map.interval();
    let basis = ScaledMonomials1D::on_interval(lo, hi, k - 1);
    let rule = EdgeRule::new(&map, n);
    let mut out = DVector::zeros(k);
    for ((w, t), p) in rule.weights.iter().zip(&rule.params).zip(&rule.points) {
        let m = basis.eval(*t);
        for i in 0..k {
            out[i] += w * p.speed() * v(*t) * m[i];
        }
    }
    out / rule.length()
}

#[test]
fn edge_projection_reproduces_constants() {
    let mesh = polar_disk(2, 8, true);
    for k in 1..=4 {
        let settings = Settings::new(k);
        for el in [0, 9, 15] {
            let local = LocalElement::build(&mesh, el, &settings).unwrap();
            let dofs = local.interpolate(&mesh, &settings, |_| 1.0).unwrap();
            for (e, edge) in local.edges.iter().enumerate() {
                let coeffs = &edge.projection * &dofs;
                assert!((coeffs - unit(k, 0)).amax() < 1e-13);
                if k == 1 {
                    assert!((edge_block(&local, e)[(0, 0)] - 1.0).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn straight_edge_projection_is_the_legendre_projector() {
    // on [-1, 1]: E = H⁻¹ with H_ij = ½ ∫ s^{i+j} ds
    for k in 1..=5 {
        let mesh = unit_square_quads(1);
        let local = LocalElement::build(&mesh, 0, &Settings::new(k)).unwrap();
        let h = DMatrix::from_fn(k, k, |i, j| {
            if (i + j) % 2 == 0 {
                1.0 / (i + j + 1) as f64
            } else {
                0.0
            }
        });
        let oracle = h.try_inverse().unwrap();
        for e in 0..local.num_edges() {
            let scale = oracle.amax();
            assert!((edge_block(&local, e) - &oracle).amax() < 1e-12 * scale, "k={k}");
        }
    }
}

#[test]
fn quarter_circle_edge_reproduces_its_own_monomial() {
    let mesh = polar_disk(1, 4, false);
    let k = 3;
    let local = LocalElement::build(&mesh, 0, &Settings::new(k)).unwrap();
    let e = local.edges.iter().position(|e| e.curved).unwrap();
    let map = mesh.element_boundary(0)[e];
    let (lo, hi) = map.interval();
    assert!((hi - lo - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let m2 = ScaledMonomials1D::on_interval(lo, hi, 2);
    let dofs = edge_dofs(&mesh, 0, e, k, 40, |t| m2.eval(t)[2]);
    let coeffs = edge_block(&local, e) * dofs;
    assert!((coeffs - unit(k, 2)).amax() < 1e-12);
}

#[test]
fn edge_projection_is_idempotent_on_its_range() {
    for mesh in [polar_disk(2, 8, true), sine_quads(4)] {
        for k in 1..=4 {
            let settings = Settings::new(k);
            for el in curved_elements(&mesh) {
                let local = LocalElement::build(&mesh, el, &settings).unwrap();
                for e in 0..local.num_edges() {
                    let map = mesh.element_boundary(el)[e];
                    let (lo, hi) = map.interval();
                    let basis = ScaledMonomials1D::on_interval(lo, hi, k - 1);
                    // the element's own rule, then a dense one for the quadrature error
                    let own = settings.orders.edge_points(k, 2 * k + 1, map.is_curved());
                    for i in 0..k {
                        let dofs = edge_dofs(&mesh, el, e, k, own, |t| basis.eval(t)[i]);
                        let err = (edge_block(&local, e) * dofs - unit(k, i)).amax();
                        assert!(err < 1e-12, "element {el} edge {e} k={k} i={i}: {err:e}");
                        let dofs = edge_dofs(&mesh, el, e, k, 40, |t| basis.eval(t)[i]);
                        assert!((edge_block(&local, e) * dofs - unit(k, i)).amax() < 1e-9);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ritz_galerkin_projector_is_exact_on_straight_polygons(seed in any::<u64>(), n in 3usize..9, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = common::random_polygon(&mut rng, n, Vec2::new(-0.3, 0.6), 0.5);
        let settings = Settings::new(k);
        let local = LocalElement::build(&mesh, 0, &settings).unwrap();
        for (i, alpha) in multi_indices(k).into_iter().enumerate() {
            let dofs = local.interpolate(&mesh, &settings, monomial(&local, alpha)).unwrap();
            let coeffs = local.project(&dofs);
            prop_assert!((coeffs - unit(num_monomials(k), i)).amax() <= 1e-10, "k={} alpha={:?}", k, alpha);
        }
    }
}

#[test]
fn ritz_galerkin_projector_reproduces_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut meshes = vec![
        polar_disk(2, 8, true),
        sine_quads(4),
        common::fixture("voronoi_sine.json"),
    ];
    for i in 0..10 {
        meshes.push(common::random_curved_element(&mut rng, i % 2 == 0));
    }
    for (m, mesh) in meshes.iter().enumerate() {
        for k in 1..=4 {
            let settings = Settings::new(k);
            for el in 0..mesh.num_elements() {
                let local = LocalElement::build(mesh, el, &settings).unwrap();
                let exact = unit(num_monomials(k), 0);
                let own = (local.project(&local.d.column(0).into_owned()) - &exact).amax();
                let dofs = local.interpolate(mesh, &settings, |_| 1.0).unwrap();
                let err = (local.project(&dofs) - &exact).amax();
                assert!(own < 1e-12, "mesh {m} element {el} k={k}: {own:e}");
                // independently quadratured DoFs carry rounding that ‖Π∇‖ amplifies
                assert!(err < 1e-11, "mesh {m} element {el} k={k}: {err:e}");
            }
        }
    }
}

#[test]
fn curved_projection_defect_shrinks_under_refinement() {
    let mut worst = Vec::new();
    for level in 0..3 {
        let mesh = MeshFamily::Polar.mesh(level);
        let settings = Settings::new(2);
        let defect = curved_elements(&mesh)
            .into_iter()
            .map(|el| {
                let local = LocalElement::build(&mesh, el, &settings).unwrap();
                let dofs = local.interpolate(&mesh, &settings, monomial(&local, (1, 0))).unwrap();
                (local.project(&dofs) - unit(6, monomial_index(1, 0))).amax()
            })
            .fold(0.0, f64::max);
        worst.push(defect);
    }
    assert!(worst[0] > 0.0);
    assert!(worst[1] < worst[0] && worst[2] < worst[1], "{worst:?}");
}

#[test]
fn bulk_projection_examples() {
    let mesh = polar_disk(4, 16, true);
    let local = LocalElement::build(&mesh, 10, &Settings::new(1)).unwrap();
    assert_eq!(local.pi0.nrows(), 0);

    for k in 2..=4 {
        let settings = Settings::new(k);
        let local = LocalElement::build(&mesh, 10, &settings).unwrap();
        let dofs = local.interpolate(&mesh, &settings, |_| 1.0).unwrap();
        let c = &local.pi0 * dofs;
        assert!((c - unit(num_monomials(k - 2), 0)).amax() < 1e-12);
    }

    // m_(1,1) lies in P_{k-2} from k = 4 on
    for el in [0, 10, 20] {
        let settings = Settings::new(4);
        let local = LocalElement::build(&mesh, el, &settings).unwrap();
        let dofs = local.interpolate(&mesh, &settings, monomial(&local, (1, 1))).unwrap();
        let c = &local.pi0 * dofs;
        assert!((c - unit(6, monomial_index(1, 1))).amax() < 1e-12);
    }
}

#[test]
fn bulk_projection_at_k3_is_the_l2_projection_onto_linears() {
    let mesh = polar_disk(2, 8, true);
    let settings = Settings::new(3);
    let local = LocalElement::build(&mesh, 12, &settings).unwrap();
    let v = monomial(&local, (1, 1));
    let c = &local.pi0 * local.interpolate(&mesh, &settings, &v).unwrap();
    // normal equations on P_1 with the element's own moment table
    let h = DMatrix::from_fn(3, 3, |i, j| {
        let (a, b) = (multi_indices(1)[i], multi_indices(1)[j]);
        local.moments.get(a.0 + b.0, a.1 + b.1)
    });
    let r = DVector::from_fn(3, |i, _| {
        let a = multi_indices(1)[i];
        local.moments.get(a.0 + 1, a.1 + 1)
    });
    let oracle = h.lu().solve(&r).unwrap();
    assert!((c - oracle).amax() < 1e-12);
}

#[test]
fn projections_commute_with_adding_constants() {
    let mesh = sine_quads(4);
    let v = |p: Vec2| (3.0 * p.x).sin() * p.y.exp();
    let shift = 1.75;
    for k in 2..=4 {
        let settings = Settings::new(k);
        for el in curved_elements(&mesh) {
            let local = LocalElement::build(&mesh, el, &settings).unwrap();
            let a = local.interpolate(&mesh, &settings, v).unwrap();
            let b = &a + local.d.column(0) * shift;
            let d0 = &local.pi0 * (&b - &a);
            assert!((d0 - unit(local.pi0.nrows(), 0) * shift).amax() < 1e-12);
            let dn = local.project(&b) - local.project(&a);
            let err = (dn - unit(num_monomials(k), 0) * shift).amax();
            assert!(err < 1e-12 * shift, "element {el} k={k}: {err:e}");
            for edge in &local.edges {
                let de = &edge.projection * (&b - &a);
                assert!((de - unit(k, 0) * shift).amax() < 1e-12);
            }
        }
    }
}

#[test]
fn stabilization_examples() {
    let mesh = polar_disk(2, 8, true);
    let el = mesh.num_elements() - 1;
    let kappa = mesh.elements()[el].kappa;
    assert_ne!(kappa, 1.0);
    let mut settings = Settings::new(3);
    let local = LocalElement::build(&mesh, el, &settings).unwrap();
    let n = local.ndof();
    assert_eq!(local.stabilization, DMatrix::identity(n, n));
    let zero = DVector::zeros(n);
    assert_eq!((zero.transpose() * &local.stabilization * &zero)[0], 0.0);

    settings.stabilization = Stabilization::KappaScaled;
    let local = LocalElement::build(&mesh, el, &settings).unwrap();
    assert_eq!(local.stabilization, DMatrix::identity(n, n) * kappa);
}

fn all_test_meshes() -> Vec<Mesh> {
    let mut meshes = vec![
        unit_square_quads(2),
        common::fixture("voronoi_square.json"),
        common::fixture("voronoi_sine.json"),
    ];
    for family in [MeshFamily::Polar, MeshFamily::PolarInterface, MeshFamily::SineQuads] {
        for level in 0..3 {
            meshes.push(family.mesh(level));
        }
    }
    meshes
}

#[test]
fn local_stiffness_structure() {
    for mesh in all_test_meshes() {
        for k in 1..=4 {
            let settings = Settings::new(k);
            for el in 0..mesh.num_elements() {
                let local = LocalElement::build(&mesh, el, &settings).unwrap();
                let a = &local.stiffness;
                let norm = a.amax();
                assert!((a - a.transpose()).amax() <= 1e-12 * norm);
                let ones = local.interpolate(&mesh, &settings, |_| 1.0).unwrap();
                assert!((a * &ones).amax() <= 1e-10 * norm * ones.amax());

                // rank on the congruent frame-variable matrix, which shares it
                let eig = local.system_stiffness.clone().symmetric_eigenvalues();
                let max = eig.max();
                let rank = eig.iter().filter(|&&l| l > 1e-10 * max).count();
                assert_eq!(rank, local.ndof() - 1, "element {el}, k={k}");
                assert!(eig.min() > -1e-12 * max);
            }
        }
    }
}

#[test]
fn local_stiffness_rank_on_straight_elements_directly() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 3..8 {
        let mesh = common::random_polygon(&mut rng, n, Vec2::zeros(), 1.0);
        for k in 1..=4 {
            let local = LocalElement::build(&mesh, 0, &Settings::new(k)).unwrap();
            let eig = local.stiffness.clone().symmetric_eigenvalues();
            let max = eig.max();
            assert_eq!(eig.iter().filter(|&&l| l > 1e-10 * max).count(), local.ndof() - 1);
        }
    }
}

#[test]
fn load_examples() {
    let mesh = unit_square_quads(1);
    for k in 1..=4 {
        let settings = Settings::new(k);
        let local = LocalElement::build(&mesh, 0, &settings).unwrap();
        assert_eq!(
            local.load(&mesh, &settings, |_| 0.0).unwrap(),
            DVector::zeros(local.ndof())
        );
    }

    let settings = Settings::new(1);
    let local = LocalElement::build(&mesh, 0, &settings).unwrap();
    let b = local.load(&mesh, &settings, |_| 1.0).unwrap();
    assert_eq!(b.len(), 4);
    assert!(b.iter().all(|v| (v - 0.25).abs() < 1e-15));

    let disk = polar_disk(2, 8, false);
    let mut settings = Settings::new(2);
    settings.load = LoadProjection::Bulk;
    for el in 0..disk.num_elements() {
        let local = LocalElement::build(&disk, el, &settings).unwrap();
        let b = local.load(&disk, &settings, |_| 1.0).unwrap();
        let off = local.bulk_offset();
        assert!(b.rows(0, off).amax() < 1e-12 * local.area);
        assert!((b[off] - local.area).abs() < 1e-12 * local.area);
    }
}

#[test]
fn ritz_galerkin_load_integrates_the_projection() {
    let mesh = polar_disk(2, 8, false);
    let settings = Settings::new(2);
    assert_eq!(settings.load, LoadProjection::RitzGalerkin);
    let v = |p: Vec2| p.x * p.x - 0.5 * p.y + 0.25;
    for el in curved_elements(&mesh) {
        let local = LocalElement::build(&mesh, el, &settings).unwrap();
        let b = local.load(&mesh, &settings, |_| 1.0).unwrap();
        let dofs = local.interpolate(&mesh, &settings, v).unwrap();
        let coeffs = local.project(&dofs);
        let exact: f64 = multi_indices(2)
            .into_iter()
            .enumerate()
            .map(|(i, (a, c))| coeffs[i] * local.moments.get(a, c))
            .sum();
        assert!((b.dot(&dofs) - exact).abs() < 1e-12 * local.area);
    }
}

#[test]
fn system_variables_are_congruent() {
    let mesh = polar_disk(2, 8, true);
    for k in 2..=4 {
        let settings = Settings::new(k);
        for el in 0..mesh.num_elements() {
            let local = LocalElement::build(&mesh, el, &settings).unwrap();
            let n = local.ndof();
            let off = local.bulk_offset();
            let mut t = DMatrix::identity(n, n);
            t.view_mut((off, off), (n - off, n - off)).copy_from(&local.frame);
            let congruent = t.transpose() * &local.stiffness * &t;
            assert!((congruent - &local.system_stiffness).amax() < 1e-10 * local.system_stiffness.amax());
            let f = |p: Vec2| 1.0 + p.x;
            let load = local.load(&mesh, &settings, f).unwrap();
            let system = local.system_load(&mesh, &settings, f).unwrap();
            assert!((t.transpose() * load - &system).amax() < 1e-12 * system.amax());
        }
    }
}

#[test]
fn stability_range_is_bounded_under_refinement() {
    // straight elements are exactly 1
    let local = LocalElement::build(&unit_square_quads(1), 0, &Settings::new(3)).unwrap();
    let (lo, hi) = local.stability_range();
    assert!((lo - 1.0).abs() < 1e-10 && (hi - 1.0).abs() < 1e-10);

    for family in [MeshFamily::Polar, MeshFamily::SineQuads] {
        for k in 1..=3 {
            let settings = Settings::new(k);
            for level in 0..3 {
                let mesh = family.mesh(level);
                for el in curved_elements(&mesh) {
                    let (lo, hi) = LocalElement::build(&mesh, el, &settings).unwrap().stability_range();
                    assert!(lo > 0.5 && hi < 2.0, "{family} level {level} k={k}: [{lo}, {hi}]");
                }
            }
        }
    }
}

#[test]
fn projector_does_not_depend_on_the_edge_length_convention() {
    let mesh = polar_disk(2, 8, false);
    let v = |p: Vec2| (p.x + 2.0 * p.y).cos();
    for k in 1..=4 {
        let arc = Settings::new(k);
        let chord = Settings {
            edge_length: EdgeLength::Chord,
            ..arc
        };
        for el in curved_elements(&mesh) {
            let a = LocalElement::build(&mesh, el, &arc).unwrap();
            let c = LocalElement::build(&mesh, el, &chord).unwrap();
            let pa = a.project(&a.interpolate(&mesh, &arc, v).unwrap());
            let pc = c.project(&c.interpolate(&mesh, &chord, v).unwrap());
            assert!((pa - pc).amax() < 1e-12);
            let ones = c.interpolate(&mesh, &chord, |_| 1.0).unwrap();
            assert!((&c.stiffness * ones).amax() < 1e-10 * c.stiffness.amax());
        }
    }
}
