//! DoF interpolation, projected error quantities and rate fitting.

use std::fmt::Write as _;

use nalgebra::DVector;

use crate::assembly::Discretization;
use crate::quadrature::BulkRule;
use crate::{par_map, Error, Result, Vec2};

/// Projected errors of one run. With `relative` unset the norms of the exact
/// solution vanished and absolute errors are reported instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorPair {
    pub h: f64,
    pub ndofs: usize,
    pub eh1: f64,
    pub el2: f64,
    pub relative: bool,
}

/// `E_H1 = (Σ_K |u - Π̃∇ u_h|²_{1,K})^{1/2} / |u|_{1,Ω}` and the analogous
/// `L2` quantity, by bulk quadrature of exactness `2k + 2`.
pub fn compute_errors<U, D>(disc: &Discretization, dofs: &DVector<f64>, u: U, grad_u: D) -> Result<ErrorPair>
where
    U: Fn(Vec2) -> f64 + Sync,
    D: Fn(Vec2) -> Vec2 + Sync,
{
    let settings = &disc.settings;
    let parts = par_map(disc.elements.len(), |el| -> Result<[f64; 4]> {
        let local = &disc.elements[el];
        let coeffs = local.project(&disc.local(el, dofs));
        let rule = BulkRule::for_element(&disc.mesh, el, settings.bulk_degree(), &settings.orders)?;
        let mut acc = [0.0; 4];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let (value, grad) = local.eval_polynomial(&coeffs, *p);
            let (ue, ge) = (u(*p), grad_u(*p));
            acc[0] += w * (ge - grad).norm_squared();
            acc[1] += w * (ue - value).powi(2);
            acc[2] += w * ge.norm_squared();
            acc[3] += w * ue * ue;
        }
        Ok(acc)
    });
    let mut total = [0.0; 4];
    for part in parts {
        let part = part?;
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    let relative = total[2] > 0.0 && total[3] > 0.0;
    let (eh1, el2) = if relative {
        ((total[0] / total[2]).sqrt(), (total[1] / total[3]).sqrt())
    } else {
        (total[0].sqrt(), total[1].sqrt())
    };
    Ok(ErrorPair {
        h: disc.mesh.h(),
        ndofs: disc.num_dofs(),
        eh1,
        el2,
        relative,
    })
}

/// Global DoF vector of `v`: canonical edge moments and bulk moments, all
/// by quadrature.
pub fn interpolate_dofs<V>(disc: &Discretization, v: V) -> Result<DVector<f64>>
where
    V: Fn(Vec2) -> f64 + Sync,
{
    let mesh = &disc.mesh;
    let map = &disc.dofs;
    let edges = par_map(mesh.num_edges(), |e| {
        crate::element::edge_moments(mesh, e, &disc.settings, &v)
    });
    let bulk = par_map(disc.elements.len(), |el| {
        disc.elements[el].bulk_moments(mesh, &disc.settings, &v)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut out = DVector::zeros(map.len());
    for (e, block) in edges.into_iter().enumerate() {
        for (i, value) in block.into_iter().enumerate() {
            out[map.edge_dof(e, i)] = value;
        }
    }
    for (el, block) in bulk.into_iter().enumerate() {
        for (j, value) in block.into_iter().enumerate() {
            out[map.bulk_dof(el, j)] = value;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rates {
    /// Least-squares slope of `log E` against `log h`.
    pub slope: f64,
    /// `log(E_i / E_{i+1}) / log(h_i / h_{i+1})`.
    pub pairwise: Vec<f64>,
}

pub fn fit_rates(h: &[f64], e: &[f64]) -> Result<Rates> {
    if h.len() != e.len() {
        return Err(Error::Invalid("mesh sizes and errors differ in length".into()));
    }
    if h.len() < 2 {
        return Err(Error::Invalid(format!(
            "rate fitting needs at least 2 points, got {}",
            h.len()
        )));
    }
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let pairwise = x
        .windows(2)
        .zip(y.windows(2))
        .map(|(a, b)| (b[0] - b[1]) / (a[0] - a[1]))
        .collect();
    Ok(Rates { slope, pairwise })
}

/// Column schema of [`ConvergenceReport::to_csv`].
pub const CSV_HEADER: &str = "k,mesh_family,level,h,ndofs,EH1,EL2,slope_H1,slope_L2";

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub k: usize,
    pub family: String,
    pub runs: Vec<ErrorPair>,
}

impl ConvergenceReport {
    pub fn new(k: usize, family: impl Into<String>) -> Self {
        Self {
            k,
            family: family.into(),
            runs: Vec::new(),
        }
    }

    pub fn h1_rates(&self) -> Result<Rates> {
        let h: Vec<f64> = self.runs.iter().map(|r| r.h).collect();
        fit_rates(&h, &self.runs.iter().map(|r| r.eh1).collect::<Vec<_>>())
    }

    pub fn l2_rates(&self) -> Result<Rates> {
        let h: Vec<f64> = self.runs.iter().map(|r| r.h).collect();
        fit_rates(&h, &self.runs.iter().map(|r| r.el2).collect::<Vec<_>>())
    }

    /// Header, one row per level with the slope from the previous level
    /// (empty on the first), then a `fit` row with the least-squares slopes.
    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }

    /// [`Self::to_csv`] without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        let rates = self.h1_rates().ok().zip(self.l2_rates().ok());
        for (level, run) in self.runs.iter().enumerate() {
            let slopes = match (&rates, level) {
                (Some((a, b)), l) if l > 0 => format!("{:.16e},{:.16e}", a.pairwise[l - 1], b.pairwise[l - 1]),
                _ => ",".to_string(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{:.16e},{},{:.16e},{:.16e},{}",
                self.k, self.family, level, run.h, run.ndofs, run.eh1, run.el2, slopes
            );
        }
        if let Some((a, b)) = rates {
            let _ = writeln!(
                out,
                "{},{},fit,,,,,{:.16e},{:.16e}",
                self.k, self.family, a.slope, b.slope
            );
        }
        out
    }
}
