//! Local spaces of order `k` on (possibly curved) polygons.
//!
//! Local degrees of freedom are ordered as follows: for every edge of the
//! element, in counterclockwise order, the `k` moments
//! `D_e^i(v) = |e|^{-1} ∫_e v m̃_i ds` against the scaled monomials of degree
//! `< k` on the edge parameter interval (parametrised in the direction the
//! element traverses the edge); then the `k(k-1)/2` bulk moments
//! `D_K^j(v) = |K|^{-1} ∫_K v m_j dK` against `M_{k-2}(K)`.
//!
//! Monomial-indexed rows and columns follow the graded lexicographic order of
//! [`crate::basis`].

use nalgebra::{DMatrix, DVector};

use crate::basis::{
    dim_p, grad_dot_grad, monomial_index, multi_indices, num_monomials, ScaledMonomials1D, ScaledMonomials2D,
};
use crate::geometry::{EdgeMap, Mesh};
use crate::linalg::{guarded_solve, rcond, MIN_RCOND};
use crate::quadrature::{monomial_moments_divergence, BulkRule, EdgeRule, MomentTable, QuadratureOrders};
use crate::{Error, Result, Vec2, MAX_DEGREE};

/// Which length `|e|` scales the edge moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EdgeLength {
    /// `∫_e ds`; makes `D_e^0(1) = 1` exactly.
    #[default]
    Arc,
    /// Distance between the endpoints.
    Chord,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Stabilization {
    /// Euclidean product of the DoF vectors.
    #[default]
    DofiDofi,
    /// `κ_K` times the identity in DoF coordinates.
    KappaScaled,
}

impl Stabilization {
    pub fn matrix(&self, ndof: usize, kappa: f64) -> DMatrix<f64> {
        match self {
            Stabilization::DofiDofi => DMatrix::identity(ndof, ndof),
            Stabilization::KappaScaled => DMatrix::identity(ndof, ndof) * kappa,
        }
    }
}

/// Polynomial image of the test function in the load `∫_K f P v_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadProjection {
    /// `Π^{0,K}_{k-2}` for `k >= 2`; `k = 1` averages the edge constants.
    Bulk,
    /// `Π̃^{∇,K}_k`.
    RitzGalerkin,
}

impl LoadProjection {
    /// `RitzGalerkin` at `k = 2`, where the bulk projection onto constants
    /// costs one order in `L2`, and `Bulk` otherwise.
    pub fn default_for(k: usize) -> Self {
        if k == 2 {
            LoadProjection::RitzGalerkin
        } else {
            LoadProjection::Bulk
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub k: usize,
    pub edge_length: EdgeLength,
    pub orders: QuadratureOrders,
    pub stabilization: Stabilization,
    pub load: LoadProjection,
}

impl Settings {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            edge_length: EdgeLength::default(),
            orders: QuadratureOrders::default(),
            stabilization: Stabilization::default(),
            load: LoadProjection::default_for(k),
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=MAX_DEGREE).contains(&self.k) {
            return Err(Error::Invalid(format!(
                "order k = {} outside the supported range 1..={MAX_DEGREE}",
                self.k
            )));
        }
        Ok(())
    }

    /// Number of bulk moments `k(k-1)/2`.
    pub fn bulk_dofs(&self) -> usize {
        dim_p(self.k as isize - 2)
    }

    /// `k * #edges + k(k-1)/2`.
    pub fn local_dofs(&self, edges: usize) -> usize {
        self.k * edges + self.bulk_dofs()
    }

    /// Exactness degree of the bulk rules used for loads and errors.
    pub fn bulk_degree(&self) -> usize {
        2 * self.k + 2
    }

    fn edge_points(&self, curved: bool) -> usize {
        self.orders.edge_points(self.k, 2 * self.k + 1, curved)
    }
}

/// Canonical-orientation edge moments of `v` on a mesh edge:
/// `|e|^{-1} ∫_e v m̃_i ds`, `i = 0..k`.
pub fn edge_moments(mesh: &Mesh, edge: usize, settings: &Settings, v: impl Fn(Vec2) -> f64) -> Vec<f64> {
    let map = mesh.edge_map(edge);
    edge_moments_on(&map, settings, v)
}

fn edge_length(map: &EdgeMap<'_>, rule: &EdgeRule, kind: EdgeLength) -> f64 {
    match kind {
        EdgeLength::Arc => rule.length(),
        EdgeLength::Chord => map.chord_length(),
    }
}

fn edge_moments_on(map: &EdgeMap<'_>, settings: &Settings, v: impl Fn(Vec2) -> f64) -> Vec<f64> {
    let k = settings.k;
    let rule = EdgeRule::new(map, settings.edge_points(map.is_curved()));
    let (lo, hi) = map.interval();
    let basis = ScaledMonomials1D::on_interval(lo, hi, k - 1);
    let len = edge_length(map, &rule, settings.edge_length);
    let mut out = vec![0.0; k];
    let mut m = vec![0.0; k];
    for ((w, t), p) in rule.weights.iter().zip(&rule.params).zip(&rule.points) {
        basis.eval_into(*t, &mut m);
        let fv = w * p.speed() * v(p.position);
        for (o, mi) in out.iter_mut().zip(&m) {
            *o += fv * mi;
        }
    }
    out.iter_mut().for_each(|o| *o /= len);
    out
}

/// `(-1)^i`: the factor relating the edge moments of the two opposite
/// parametrisations of an edge.
pub fn reversal_parity(k: usize) -> Vec<f64> {
    (0..k).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Per-edge data kept after construction.
#[derive(Clone, Debug)]
pub struct LocalEdge {
    pub edge: usize,
    pub reversed: bool,
    pub curved: bool,
    /// `|e|` as used in the DoF scaling.
    pub length: f64,
    /// `(M_e)_{ij} = ∫ m_i m_j |γ'| dt`.
    pub mass: DMatrix<f64>,
    /// `E_e`: DoF vector to coefficients of `Π̃^{0,e}_{k-1} v` in `M̃_{k-1}(e)`.
    pub projection: DMatrix<f64>,
}

/// Projector, stiffness and helper matrices of one element.
#[derive(Clone, Debug)]
pub struct LocalElement {
    pub element: usize,
    pub k: usize,
    pub kappa: f64,
    pub area: f64,
    pub centroid: Vec2,
    pub diameter: f64,
    pub edges: Vec<LocalEdge>,
    /// Moments of `M_{2k}(K)`.
    pub moments: MomentTable,
    /// `G_{αβ} = ∫_K ∇m_α · ∇m_β`, degree `k`.
    pub g: DMatrix<f64>,
    /// DoFs of every `m_α ∈ M_k(K)` (columns).
    pub d: DMatrix<f64>,
    /// Right-hand side matrix of the Ritz-Galerkin system.
    pub b: DMatrix<f64>,
    /// `Π̃^{∇,K}_k`: DoF vector to `M_k(K)` coefficients.
    pub pi_nabla: DMatrix<f64>,
    /// `Π^{0,K}_{k-2}`: DoF vector to `M_{k-2}(K)` coefficients.
    pub pi0: DMatrix<f64>,
    pub stabilization: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
    /// Lower Cholesky factor `L` of `(|K|^{-1} ∫_K m_i m_j)_{|i|,|j| <= k-2}`.
    /// The global system is solved for the moments `y` against the
    /// orthonormalised basis `m L⁻ᵀ`; bulk DoFs are recovered as `L y`.
    pub frame: DMatrix<f64>,
    /// [`Self::pi_nabla`] acting on frame variables.
    pub system_pi_nabla: DMatrix<f64>,
    /// [`Self::stiffness`] in frame variables, `Tᵀ A T` with
    /// `T = diag(I, L)`.
    pub system_stiffness: DMatrix<f64>,
}

impl LocalElement {
    pub fn ndof(&self) -> usize {
        self.stiffness.nrows()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn basis(&self) -> ScaledMonomials2D {
        ScaledMonomials2D::new(self.centroid, self.diameter, self.k)
    }

    /// Offset of the bulk block in the local DoF vector.
    pub fn bulk_offset(&self) -> usize {
        self.k * self.edges.len()
    }

    pub fn build(mesh: &Mesh, element: usize, settings: &Settings) -> Result<Self> {
        settings.check()?;
        let k = settings.k;
        let geom = *mesh.geometry(element);
        let (area, xk, hk) = (geom.area, geom.centroid, geom.diameter);
        let kappa = mesh.elements()[element].kappa;
        let maps = mesh.element_boundary(element);
        let uses = &mesh.elements()[element].edges;
        let ne = maps.len();
        let nk = num_monomials(k);
        let nb = settings.bulk_dofs();
        let ndof = settings.local_dofs(ne);
        let bulk = k * ne;
        let basis = ScaledMonomials2D::new(xk, hk, k);
        let indices = multi_indices(k);

        let moments = monomial_moments_divergence(&maps, xk, hk, 2 * k, settings.edge_points(true));
        let mu = |a: usize, b: usize| moments.get(a, b);

        let mut g = DMatrix::zeros(nk, nk);
        for (i, &a) in indices.iter().enumerate() {
            for (j, &c) in indices.iter().enumerate() {
                g[(i, j)] = grad_dot_grad(a, c)
                    .into_iter()
                    .map(|(coef, m)| coef * mu(m.0, m.1))
                    .sum::<f64>()
                    / (hk * hk);
            }
        }

        let mut d = DMatrix::zeros(ndof, nk);
        let mut b = DMatrix::zeros(nk, ndof);
        let mut constant_row = DVector::zeros(nk);
        let mut edges = Vec::with_capacity(ne);

        for (e, (map, usage)) in maps.iter().zip(uses).enumerate() {
            let curved = map.is_curved();
            let rule = EdgeRule::new(map, settings.edge_points(curved));
            let (lo, hi) = map.interval();
            let basis1d = ScaledMonomials1D::on_interval(lo, hi, k - 1);
            let len = edge_length(map, &rule, settings.edge_length);
            let off = e * k;

            let mut mass = DMatrix::zeros(k, k);
            // r[(α, j)] = ∫ (n·∇m_α) m_j ds
            let mut flux = DMatrix::zeros(nk, k);
            let mut m1 = vec![0.0; k];
            for ((w, t), p) in rule.weights.iter().zip(&rule.params).zip(&rule.points) {
                basis1d.eval_into(*t, &mut m1);
                let ds = w * p.speed();
                let vals = basis.eval(p.position);
                let grads = basis.eval_grad(p.position);
                // outward normal times |γ'|
                let nrm = Vec2::new(p.tangent.y, -p.tangent.x);
                for i in 0..k {
                    for j in 0..k {
                        mass[(i, j)] += ds * m1[i] * m1[j];
                    }
                }
                for a in 0..nk {
                    let dn = w * grads[a].dot(&nrm);
                    for j in 0..k {
                        d[(off + j, a)] += ds * vals[a] * m1[j] / len;
                        flux[(a, j)] += dn * m1[j];
                    }
                    if k == 1 {
                        constant_row[a] += ds * vals[a];
                    }
                }
            }

            // coefficients of Π̃^{0,e}_{k-1}(n·∇m_α), one column per α
            let coeffs = guarded_solve(&mass, &flux.transpose(), "edge mass matrix", element)?;
            for a in 1..nk {
                for j in 0..k {
                    b[(a, off + j)] += coeffs[(j, a)] * len;
                }
            }
            if k == 1 {
                b[(0, off)] = len;
            }

            let mut reader = DMatrix::zeros(k, ndof);
            for j in 0..k {
                reader[(j, off + j)] = len;
            }
            let projection = guarded_solve(&mass, &reader, "edge mass matrix", element)?;
            edges.push(LocalEdge {
                edge: usage.edge,
                reversed: usage.reversed,
                curved,
                length: len,
                mass,
                projection,
            });
        }

        if nb > 0 {
            let laplacian = basis.laplacian_table();
            let low = multi_indices(k - 2);
            for a in 1..nk {
                for c in 0..nb {
                    b[(a, bulk + c)] -= area * laplacian[(a, c)];
                }
            }
            for (c, &cm) in low.iter().enumerate() {
                for (a, &am) in indices.iter().enumerate() {
                    d[(bulk + c, a)] = mu(am.0 + cm.0, am.1 + cm.1) / area;
                }
            }
            for (a, &am) in indices.iter().enumerate() {
                constant_row[a] = mu(am.0, am.1);
            }
            b[(0, bulk)] = area;
        }

        let frame = if nb > 0 {
            let low = multi_indices(k - 2);
            let h = DMatrix::from_fn(nb, nb, |i, j| mu(low[i].0 + low[j].0, low[i].1 + low[j].1) / area);
            cholesky_factor(h, "bulk mass matrix", element)?
        } else {
            DMatrix::zeros(0, 0)
        };
        let to_frame = |m: &DMatrix<f64>| {
            let mut out = m.clone();
            if nb > 0 {
                let cols = m.columns(bulk, nb) * &frame;
                out.columns_mut(bulk, nb).copy_from(&cols);
            }
            out
        };
        let mut d_frame = d.clone();
        if nb > 0 {
            let rows = frame
                .solve_lower_triangular(&d.rows(bulk, nb).into_owned())
                .expect("Cholesky factor is invertible");
            d_frame.rows_mut(bulk, nb).copy_from(&rows);
        }

        // Π∇ in frame variables. With G_sub = L Lᵀ (non-constant block) the
        // consistency term is YᵀY for Y = L⁻¹ B_sub, which avoids squaring
        // the conditioning of G.
        let b_frame = to_frame(&b);
        let g_sub = g.view((1, 1), (nk - 1, nk - 1)).into_owned();
        if !(constant_row[0].abs() > 0.0) {
            return Err(Error::Conditioning {
                what: "Ritz-Galerkin system",
                element,
                rcond: 0.0,
            });
        }
        let l_g = cholesky_factor(g_sub, "Ritz-Galerkin system", element)?;
        let mut y = l_g
            .solve_lower_triangular(&b_frame.rows(1, nk - 1).into_owned())
            .expect("Cholesky factor is invertible");
        let sub = l_g
            .transpose()
            .solve_upper_triangular(&y)
            .expect("Cholesky factor is invertible");
        let mut pi_frame = DMatrix::zeros(nk, ndof);
        pi_frame.rows_mut(1, nk - 1).copy_from(&sub);
        let head = (b_frame.row(0) - constant_row.rows(1, nk - 1).transpose() * &sub) / constant_row[0];
        pi_frame.set_row(0, &head);
        // Π∇ D e_0 = e_0 holds exactly in exact arithmetic; remove the
        // rounding drift along the constant-fixing functional.
        let drift = remove_constant_drift(
            &mut pi_frame,
            &d_frame.column(0).into_owned(),
            &b_frame.row(0).transpose(),
        );
        y -= l_g.transpose()
            * drift.rows(1, nk - 1)
            * (b_frame.row(0) / b_frame.row(0).dot(&d_frame.column(0).transpose()));

        let mut pi_nabla = pi_frame.clone();
        if nb > 0 {
            let cols = from_frame_right(&pi_frame.columns(bulk, nb).into_owned(), &frame);
            pi_nabla.columns_mut(bulk, nb).copy_from(&cols);
        }
        remove_constant_drift(&mut pi_nabla, &d.column(0).into_owned(), &b.row(0).transpose());

        let pi0 = if nb > 0 {
            let low = multi_indices(k - 2);
            let h = DMatrix::from_fn(nb, nb, |i, j| mu(low[i].0 + low[j].0, low[i].1 + low[j].1));
            let mut reader = DMatrix::zeros(nb, ndof);
            for c in 0..nb {
                reader[(c, bulk + c)] = area;
            }
            guarded_solve(&h, &reader, "bulk mass matrix", element)?
        } else {
            DMatrix::zeros(0, ndof)
        };

        let stabilization = settings.stabilization.matrix(ndof, kappa);
        let weights = {
            let right = to_frame(&stabilization);
            to_frame(&right.transpose()).transpose()
        };
        let defect = DMatrix::identity(ndof, ndof) - &d_frame * &pi_frame;
        let a = (y.transpose() * &y + defect.transpose() * weights * &defect) * kappa;
        let system_stiffness = (&a + a.transpose()) * 0.5;
        let stiffness = {
            let mut s = system_stiffness.clone();
            if nb > 0 {
                let cols = from_frame_right(&s.columns(bulk, nb).into_owned(), &frame);
                s.columns_mut(bulk, nb).copy_from(&cols);
                let rows = from_frame_right(&s.rows(bulk, nb).transpose(), &frame).transpose();
                s.rows_mut(bulk, nb).copy_from(&rows);
            }
            (&s + s.transpose()) * 0.5
        };

        Ok(Self {
            element,
            k,
            kappa,
            area,
            centroid: xk,
            diameter: hk,
            edges,
            moments,
            g,
            d,
            b,
            pi_nabla,
            pi0,
            stabilization,
            stiffness,
            frame,
            system_pi_nabla: pi_frame,
            system_stiffness,
        })
    }

    /// Local load vector. With [`LoadProjection::Bulk`] this is
    /// `Π0ᵀ (∫_K f m_j)_{|j| <= k-2}` for `k >= 2` and `|K| f̄ / N_e` on every
    /// edge constant for `k = 1`; with [`LoadProjection::RitzGalerkin`] it is
    /// `Π∇ᵀ (∫_K f m_α)_{|α| <= k}`.
    pub fn load(&self, mesh: &Mesh, settings: &Settings, f: impl Fn(Vec2) -> f64) -> Result<DVector<f64>> {
        self.load_in(mesh, settings, f, false)
    }

    /// [`Self::load`] in frame variables, `Tᵀ` times the load.
    pub fn system_load(&self, mesh: &Mesh, settings: &Settings, f: impl Fn(Vec2) -> f64) -> Result<DVector<f64>> {
        self.load_in(mesh, settings, f, true)
    }

    fn load_in(&self, mesh: &Mesh, settings: &Settings, f: impl Fn(Vec2) -> f64, frame: bool) -> Result<DVector<f64>> {
        let rule = BulkRule::for_element(mesh, self.element, settings.bulk_degree(), &settings.orders)?;
        let ndof = self.ndof();
        let moments = |degree: usize| {
            let basis = ScaledMonomials2D::new(self.centroid, self.diameter, degree);
            let mut out = DVector::zeros(basis.dim());
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let fw = w * f(*p);
                for (m, v) in out.iter_mut().zip(basis.eval(*p)) {
                    *m += fw * v;
                }
            }
            out
        };
        match settings.load {
            LoadProjection::RitzGalerkin if frame => Ok(self.system_pi_nabla.transpose() * moments(self.k)),
            LoadProjection::RitzGalerkin => Ok(self.pi_nabla.transpose() * moments(self.k)),
            LoadProjection::Bulk if self.k == 1 => {
                let total = moments(0)[0];
                let ne = self.num_edges();
                let mut out = DVector::zeros(ndof);
                for e in 0..ne {
                    out[e] = total / ne as f64;
                }
                Ok(out)
            }
            LoadProjection::Bulk if frame => {
                // Π0 in frame variables is L⁻ᵀ
                let bulk = self
                    .frame
                    .solve_lower_triangular(&moments(self.k - 2))
                    .expect("Cholesky factor is invertible");
                let mut out = DVector::zeros(ndof);
                out.rows_mut(self.bulk_offset(), bulk.len()).copy_from(&bulk);
                Ok(out)
            }
            LoadProjection::Bulk => Ok(self.pi0.transpose() * moments(self.k - 2)),
        }
    }

    /// Local DoFs of a function: edge moments (in this element's traversal
    /// direction) and bulk moments, all by quadrature.
    pub fn interpolate(&self, mesh: &Mesh, settings: &Settings, v: impl Fn(Vec2) -> f64) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.ndof());
        for (e, le) in self.edges.iter().enumerate() {
            let canonical = edge_moments(mesh, le.edge, settings, &v);
            let parity = reversal_parity(self.k);
            for i in 0..self.k {
                out[e * self.k + i] = if le.reversed {
                    parity[i] * canonical[i]
                } else {
                    canonical[i]
                };
            }
        }
        let bulk = self.bulk_moments(mesh, settings, &v)?;
        let off = self.bulk_offset();
        for (j, value) in bulk.iter().enumerate() {
            out[off + j] = *value;
        }
        Ok(out)
    }

    /// `|K|^{-1} ∫_K v m_j dK` for `|j| <= k - 2`.
    pub fn bulk_moments(&self, mesh: &Mesh, settings: &Settings, v: impl Fn(Vec2) -> f64) -> Result<Vec<f64>> {
        if self.k < 2 {
            return Ok(Vec::new());
        }
        let rule = BulkRule::for_element(mesh, self.element, settings.bulk_degree(), &settings.orders)?;
        let low = ScaledMonomials2D::new(self.centroid, self.diameter, self.k - 2);
        let mut out = vec![0.0; low.dim()];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let fw = w * v(*p);
            for (o, m) in out.iter_mut().zip(low.eval(*p)) {
                *o += fw * m;
            }
        }
        out.iter_mut().for_each(|o| *o /= self.area);
        Ok(out)
    }

    /// Coefficients of `Π̃^{∇,K}_k v_h` from local DoFs.
    pub fn project(&self, dofs: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.pi_nabla.nrows(), |i, _| {
            compensated_dot(self.pi_nabla.row(i).iter().copied(), dofs.iter().copied())
        })
    }

    /// Evaluates a polynomial given by `M_k(K)` coefficients and its gradient.
    pub fn eval_polynomial(&self, coeffs: &DVector<f64>, p: Vec2) -> (f64, Vec2) {
        let basis = self.basis();
        let v = basis.eval(p);
        let g = basis.eval_grad(p);
        let value = v.iter().zip(coeffs.iter()).map(|(a, c)| a * c).sum();
        let grad = g.iter().zip(coeffs.iter()).map(|(a, c)| a * *c).sum();
        (value, grad)
    }

    /// Local DoFs of every monomial coefficient vector: `D c`.
    pub fn dofs_of_polynomial(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.d * coeffs
    }

    /// Generalised eigenvalue range of `a_h(I q, I q) / κ` against
    /// `|q|²_{1,K}` over non-constant `q ∈ P_k(K)`, where `I q` is the DoF
    /// vector of `q`. Equals `[1, 1]` on straight elements.
    pub fn stability_range(&self) -> (f64, f64) {
        let nk = self.g.nrows();
        let discrete = self.d.transpose() * &self.stiffness * &self.d / self.kappa;
        let sub = |m: &DMatrix<f64>| m.view((1, 1), (nk - 1, nk - 1)).into_owned();
        let (a, g) = (sub(&discrete), sub(&self.g));
        let l = match g.clone().cholesky() {
            Some(c) => c.l(),
            None => return (f64::NAN, f64::NAN),
        };
        let linv = l
            .try_inverse()
            .unwrap_or_else(|| DMatrix::from_element(nk - 1, nk - 1, f64::NAN));
        let m = &linv * a * linv.transpose();
        let m = (&m + m.transpose()) * 0.5;
        let eig = m.symmetric_eigenvalues();
        (eig.min(), eig.max())
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky_factor(m: DMatrix<f64>, what: &'static str, element: usize) -> Result<DMatrix<f64>> {
    let rc = rcond(&m);
    match m.cholesky() {
        Some(c) if rc >= MIN_RCOND => Ok(c.l()),
        _ => Err(Error::Conditioning {
            what,
            element,
            rcond: rc,
        }),
    }
}

/// `m L⁻¹` for a lower triangular `L`.
fn from_frame_right(m: &DMatrix<f64>, l: &DMatrix<f64>) -> DMatrix<f64> {
    l.transpose()
        .solve_upper_triangular(&m.transpose())
        .expect("Cholesky factor is invertible")
        .transpose()
}

/// Subtracts `(Π ones - e_0) wᵀ` with `w = c / (c · ones)`, so that
/// `Π ones = e_0` to rounding; returns the removed drift.
fn remove_constant_drift(pi: &mut DMatrix<f64>, ones: &DVector<f64>, c: &DVector<f64>) -> DVector<f64> {
    let w = c / c.dot(ones);
    let mut drift = DVector::from_fn(pi.nrows(), |i, _| {
        compensated_dot(pi.row(i).iter().copied(), ones.iter().copied())
    });
    drift[0] -= 1.0;
    *pi -= &drift * w.transpose();
    drift
}

/// Dot product in twice the working precision (Ogita-Rump-Oishi `Dot2`).
fn compensated_dot(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut err) = (0.0f64, 0.0f64);
    for (x, y) in a.zip(b) {
        let p = x * y;
        let pe = x.mul_add(y, -p);
        let t = sum + p;
        let z = t - sum;
        err += (sum - (t - z)) + (p - z) + pe;
        sum = t;
    }
    sum + err
}

/// Index of `m_α` in the element monomial ordering.
pub fn coefficient_index(a: usize, b: usize) -> usize {
    monomial_index(a, b)
}
