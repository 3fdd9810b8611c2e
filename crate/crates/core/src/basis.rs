//! Scaled and shifted monomials.
//!
//! Two-dimensional monomials `m_α(x) = ((x - x_K)/h_K)^α` are ordered
//! graded-lexicographically: degree by degree, and within degree `d` from
//! `(d, 0)` to `(0, d)`. Every matrix indexed by monomials uses this order.
//! One-dimensional monomials live on an edge parameter interval and are never
//! pulled back through `γ^{-1}`: mapped edge polynomials are always
//! evaluated in parameter space.

use nalgebra::DMatrix;

use crate::geometry::EdgeMap;
use crate::{Error, Result, Vec2};

pub type MultiIndex = (usize, usize);

/// `(n + 1)(n + 2)/2`, the dimension of `P_n` in two variables. Zero for the
/// `P_{-1} = {0}` convention, which callers express as `None`.
pub const fn num_monomials(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Dimension of `P_n` allowing `n = -1`.
pub fn dim_p(n: isize) -> usize {
    if n < 0 {
        0
    } else {
        num_monomials(n as usize)
    }
}

pub const fn monomial_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

pub fn multi_indices(n: usize) -> Vec<MultiIndex> {
    (0..=n).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect()
}

/// `α + β`, failing when the result exceeds `max_degree`.
pub fn product_expand(a: MultiIndex, b: MultiIndex, max_degree: usize) -> Result<MultiIndex> {
    let p = (a.0 + b.0, a.1 + b.1);
    if p.0 + p.1 > max_degree {
        return Err(Error::DegreeOverflow {
            degree: p.0 + p.1,
            max: max_degree,
        });
    }
    Ok(p)
}

/// `h^2 ∇m_α · ∇m_β` as a combination of monomials `(coefficient, index)`.
pub fn grad_dot_grad(a: MultiIndex, b: MultiIndex) -> Vec<(f64, MultiIndex)> {
    let mut terms = Vec::with_capacity(2);
    if a.0 > 0 && b.0 > 0 {
        terms.push(((a.0 * b.0) as f64, (a.0 + b.0 - 2, a.1 + b.1)));
    }
    if a.1 > 0 && b.1 > 0 {
        terms.push(((a.1 * b.1) as f64, (a.0 + b.0, a.1 + b.1 - 2)));
    }
    terms
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledMonomials2D {
    pub center: Vec2,
    pub h: f64,
    pub degree: usize,
}

impl ScaledMonomials2D {
    pub fn new(center: Vec2, h: f64, degree: usize) -> Self {
        Self { center, h, degree }
    }

    pub fn dim(&self) -> usize {
        num_monomials(self.degree)
    }

    fn powers(&self, p: Vec2) -> (Vec<f64>, Vec<f64>) {
        let x = (p.x - self.center.x) / self.h;
        let y = (p.y - self.center.y) / self.h;
        let mut xp = vec![1.0; self.degree + 1];
        let mut yp = vec![1.0; self.degree + 1];
        for i in 1..=self.degree {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
        }
        (xp, yp)
    }

    pub fn eval(&self, p: Vec2) -> Vec<f64> {
        let (xp, yp) = self.powers(p);
        multi_indices(self.degree)
            .into_iter()
            .map(|(a, b)| xp[a] * yp[b])
            .collect()
    }

    pub fn eval_grad(&self, p: Vec2) -> Vec<Vec2> {
        let (xp, yp) = self.powers(p);
        let inv = 1.0 / self.h;
        multi_indices(self.degree)
            .into_iter()
            .map(|(a, b)| {
                let dx = if a > 0 { a as f64 * xp[a - 1] * yp[b] } else { 0.0 };
                let dy = if b > 0 { b as f64 * xp[a] * yp[b - 1] } else { 0.0 };
                Vec2::new(dx, dy) * inv
            })
            .collect()
    }

    /// Coefficients of `Δm_α` in the degree `n - 2` basis (rows: `α` of
    /// degree `<= n`; columns: degree `<= n - 2`), including the `h^{-2}`.
    pub fn laplacian_table(&self) -> DMatrix<f64> {
        let n = self.degree;
        let cols = if n >= 2 { num_monomials(n - 2) } else { 0 };
        let mut table = DMatrix::zeros(num_monomials(n), cols);
        let inv2 = 1.0 / (self.h * self.h);
        for (row, (a, b)) in multi_indices(n).into_iter().enumerate() {
            if a >= 2 {
                table[(row, monomial_index(a - 2, b))] += (a * (a - 1)) as f64 * inv2;
            }
            if b >= 2 {
                table[(row, monomial_index(a, b - 2))] += (b * (b - 1)) as f64 * inv2;
            }
        }
        table
    }
}

/// Scaled monomials `((t - t_mid)/h_I)^i`, `i = 0..=degree`, where `h_I` is
/// half the length of the parameter interval, so values lie in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledMonomials1D {
    pub mid: f64,
    pub h: f64,
    pub degree: usize,
}

impl ScaledMonomials1D {
    pub fn on_interval(lo: f64, hi: f64, degree: usize) -> Self {
        Self {
            mid: 0.5 * (lo + hi),
            h: 0.5 * (hi - lo),
            degree,
        }
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let x = (t - self.mid) / self.h;
        out[0] = 1.0;
        for i in 1..=self.degree {
            out[i] = out[i - 1] * x;
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(t, &mut out);
        out
    }
}

/// The mapped set `m̃_i = m_i ∘ γ_e^{-1}` on an edge, evaluated through the
/// edge parameter.
#[derive(Clone, Copy, Debug)]
pub struct MappedEdgeBasis<'a> {
    pub basis: ScaledMonomials1D,
    pub map: EdgeMap<'a>,
}

impl<'a> MappedEdgeBasis<'a> {
    pub fn new(map: EdgeMap<'a>, degree: usize) -> Self {
        let (lo, hi) = map.interval();
        Self {
            basis: ScaledMonomials1D::on_interval(lo, hi, degree),
            map,
        }
    }

    /// Physical point `γ_e(t)` and the values `m̃_i(γ_e(t)) = m_i(t)`.
    pub fn eval(&self, t: f64) -> (Vec2, Vec<f64>) {
        (self.map.eval(t).position, self.basis.eval(t))
    }
}

/// `n_K · ∇m_α` at `γ(t)` for an edge parametrised in the counterclockwise
/// direction of the element, together with `|γ'(t)|`. The outward normal is
/// `(γ_2', -γ_1') / |γ'|`, so `values * speed` is the flux density per unit
/// parameter.
pub fn grad_dot_normal_on_edge(basis: &ScaledMonomials2D, map: &EdgeMap<'_>, t: f64) -> (Vec<f64>, f64) {
    let p = map.eval(t);
    let speed = p.speed();
    let n = Vec2::new(p.tangent.y, -p.tangent.x) / speed;
    let values = basis.eval_grad(p.position).iter().map(|g| g.dot(&n)).collect();
    (values, speed)
}
