//! Manufactured problems and the refinement families of the convergence
//! studies.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::assembly::{solve_problem, Discretization, Solution};
use crate::element::Settings;
use crate::geometry::generators::{polar_disk, sine_quads, unit_square_quads};
use crate::geometry::Mesh;
use crate::linalg::SolverKind;
use crate::postproc::{compute_errors, ConvergenceReport, ErrorPair};
use crate::{Error, Result, Vec2};

/// `-div(κ ∇u) = f` in the domain, `u = g` on its boundary.
pub trait Problem: Sync {
    fn u(&self, p: Vec2) -> f64;
    fn grad(&self, p: Vec2) -> Vec2;
    fn f(&self, p: Vec2) -> f64;
    fn g(&self, p: Vec2) -> f64 {
        self.u(p)
    }
}

/// `sin(πx) cos(πy)`.
pub struct DiskU1;

impl Problem for DiskU1 {
    fn u(&self, p: Vec2) -> f64 {
        (PI * p.x).sin() * (PI * p.y).cos()
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        let (sx, cx) = (PI * p.x).sin_cos();
        let (sy, cy) = (PI * p.y).sin_cos();
        Vec2::new(PI * cx * cy, -PI * sx * sy)
    }

    fn f(&self, p: Vec2) -> f64 {
        2.0 * PI * PI * self.u(p)
    }
}

/// Value, gradient and pure second derivatives of a function of `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Jet {
    v: f64,
    x: f64,
    y: f64,
    xx: f64,
    yy: f64,
}

impl Jet {
    fn constant(v: f64) -> Self {
        Jet {
            v,
            x: 0.0,
            y: 0.0,
            xx: 0.0,
            yy: 0.0,
        }
    }

    fn var_x(x: f64) -> Self {
        Jet {
            v: x,
            x: 1.0,
            ..Jet::constant(0.0)
        }
    }

    fn var_y(y: f64) -> Self {
        Jet {
            v: y,
            y: 1.0,
            ..Jet::constant(0.0)
        }
    }

    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        Jet {
            v: s,
            x: c * self.x,
            y: c * self.y,
            xx: c * self.xx - s * self.x * self.x,
            yy: c * self.yy - s * self.y * self.y,
        }
    }

    fn scale(self, a: f64) -> Self {
        Jet {
            v: a * self.v,
            x: a * self.x,
            y: a * self.y,
            xx: a * self.xx,
            yy: a * self.yy,
        }
    }

    fn laplacian(&self) -> f64 {
        self.xx + self.yy
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            x: self.x + o.x,
            y: self.y + o.y,
            xx: self.xx + o.xx,
            yy: self.yy + o.yy,
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            x: self.x * o.v + self.v * o.x,
            y: self.y * o.v + self.v * o.y,
            xx: self.xx * o.v + 2.0 * self.x * o.x + self.v * o.xx,
            yy: self.yy * o.v + 2.0 * self.y * o.y + self.v * o.yy,
        }
    }
}

/// `-(y - g1)(y - g2)(1 - x) x (3 + sin 5x sin 7y)` on the sine-bounded
/// domain; vanishes on its whole boundary.
pub struct SineU2;

impl SineU2 {
    fn jet(p: Vec2) -> Jet {
        let x = Jet::var_x(p.x);
        let y = Jet::var_y(p.y);
        let one = Jet::constant(1.0);
        let g1 = x.scale(PI).sin().scale(1.0 / 20.0);
        let g2 = one + x.scale(3.0 * PI).sin().scale(1.0 / 20.0);
        let wave = Jet::constant(3.0) + x.scale(5.0).sin() * y.scale(7.0).sin();
        -((y - g1) * (y - g2) * (one - x) * x * wave)
    }
}

impl Problem for SineU2 {
    fn u(&self, p: Vec2) -> f64 {
        Self::jet(p).v
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        let j = Self::jet(p);
        Vec2::new(j.x, j.y)
    }

    fn f(&self, p: Vec2) -> f64 {
        -Self::jet(p).laplacian()
    }
}

/// `u2` with the boundary datum replaced by zero, for meshes whose curved
/// edges were straightened.
pub struct StraightApproxU2;

impl Problem for StraightApproxU2 {
    fn u(&self, p: Vec2) -> f64 {
        SineU2.u(p)
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        SineU2.grad(p)
    }

    fn f(&self, p: Vec2) -> f64 {
        SineU2.f(p)
    }

    fn g(&self, _: Vec2) -> f64 {
        0.0
    }
}

/// Radial solution with `κ = 1, f = 5` for `r <= 1/2` and `κ = 5, f = 1`
/// outside.
pub struct InterfaceU3;

impl Problem for InterfaceU3 {
    fn u(&self, p: Vec2) -> f64 {
        let r = p.norm();
        if r <= 0.5 {
            -1.25 * r * r + 0.35 + 2f64.ln() / 10.0
        } else {
            -r * r / 20.0 - r.ln() / 10.0 + 0.05
        }
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        let r2 = p.norm_squared();
        if r2 <= 0.25 {
            p * -2.5
        } else {
            p * (-0.1 - 0.1 / r2)
        }
    }

    fn f(&self, p: Vec2) -> f64 {
        if p.norm() <= 0.5 {
            5.0
        } else {
            1.0
        }
    }
}

/// `u ≡ c`, `f ≡ 0`.
pub struct Constant(pub f64);

impl Problem for Constant {
    fn u(&self, _: Vec2) -> f64 {
        self.0
    }

    fn grad(&self, _: Vec2) -> Vec2 {
        Vec2::zeros()
    }

    fn f(&self, _: Vec2) -> f64 {
        0.0
    }
}

/// `Σ c x^a y^b` with `κ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(f64, usize, usize)>,
}

impl Polynomial {
    /// A fixed polynomial of total degree `k` with all coefficients nonzero.
    pub fn of_degree(k: usize) -> Self {
        let mut terms = Vec::new();
        for d in 0..=k {
            for b in 0..=d {
                let c = 1.0 + 0.25 * (d as f64) - 0.5 * (b as f64) + 0.1 * (d * b) as f64;
                terms.push((c, d - b, b));
            }
        }
        Self { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|&(_, a, b)| a + b).max().unwrap_or(0)
    }
}

fn ipow(x: f64, n: isize) -> f64 {
    if n < 0 {
        0.0
    } else {
        x.powi(n as i32)
    }
}

impl Problem for Polynomial {
    fn u(&self, p: Vec2) -> f64 {
        self.terms
            .iter()
            .map(|&(c, a, b)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
            .sum()
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        self.terms
            .iter()
            .map(|&(c, a, b)| {
                let (a, b) = (a as isize, b as isize);
                Vec2::new(
                    c * a as f64 * ipow(p.x, a - 1) * ipow(p.y, b),
                    c * b as f64 * ipow(p.x, a) * ipow(p.y, b - 1),
                )
            })
            .sum()
    }

    fn f(&self, p: Vec2) -> f64 {
        -self
            .terms
            .iter()
            .map(|&(c, a, b)| {
                let (a, b) = (a as isize, b as isize);
                c * ((a * (a - 1)) as f64 * ipow(p.x, a - 2) * ipow(p.y, b)
                    + (b * (b - 1)) as f64 * ipow(p.x, a) * ipow(p.y, b - 2))
            })
            .sum::<f64>()
    }
}

/// Generated mesh sequences; level `l` halves the mesh size of level
/// `l - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFamily {
    /// `polar_disk(2·2^l, 8·2^l)`.
    Polar,
    /// Same counts, conforming to the circle `r = 1/2`.
    PolarInterface,
    /// `sine_quads(4·2^l)`.
    SineQuads,
    /// `sine_quads(4·2^l)` with every curved edge replaced by its chord.
    SineQuadsStraight,
    /// `unit_square_quads(4·2^l)`.
    SquareQuads,
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 5] = [
        MeshFamily::Polar,
        MeshFamily::PolarInterface,
        MeshFamily::SineQuads,
        MeshFamily::SineQuadsStraight,
        MeshFamily::SquareQuads,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeshFamily::Polar => "polar",
            MeshFamily::PolarInterface => "polar-interface",
            MeshFamily::SineQuads => "sine-quads",
            MeshFamily::SineQuadsStraight => "sine-quads-straight",
            MeshFamily::SquareQuads => "square-quads",
        }
    }

    pub fn mesh(&self, level: usize) -> Mesh {
        let s = 1usize << level;
        match self {
            MeshFamily::Polar => polar_disk(2 * s, 8 * s, false),
            MeshFamily::PolarInterface => polar_disk(2 * s, 8 * s, true),
            MeshFamily::SineQuads => sine_quads(4 * s),
            // coarser levels are dominated by the discretisation error
            MeshFamily::SineQuadsStraight => sine_quads(16 * s)
                .straightened()
                .expect("chords of a valid mesh form a valid mesh"),
            MeshFamily::SquareQuads => unit_square_quads(4 * s),
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown mesh family `{s}`")))
    }
}

/// The four studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    DiskU1,
    SineU2,
    InterfaceU3,
    StraightApproxU2,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::DiskU1, Case::SineU2, Case::InterfaceU3, Case::StraightApproxU2];

    pub fn name(&self) -> &'static str {
        match self {
            Case::DiskU1 => "disk-u1",
            Case::SineU2 => "sine-u2",
            Case::InterfaceU3 => "interface-u3",
            Case::StraightApproxU2 => "straight-approx-u2",
        }
    }

    pub fn family(&self) -> MeshFamily {
        match self {
            Case::DiskU1 => MeshFamily::Polar,
            Case::SineU2 => MeshFamily::SineQuads,
            Case::InterfaceU3 => MeshFamily::PolarInterface,
            Case::StraightApproxU2 => MeshFamily::SineQuadsStraight,
        }
    }

    pub fn problem(&self) -> &'static dyn Problem {
        match self {
            Case::DiskU1 => &DiskU1,
            Case::SineU2 => &SineU2,
            Case::InterfaceU3 => &InterfaceU3,
            Case::StraightApproxU2 => &StraightApproxU2,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown test case `{s}`")))
    }
}

/// Solves `problem` on `mesh` and measures the projected errors.
pub fn run(
    mesh: Mesh,
    settings: Settings,
    problem: &dyn Problem,
    solver: SolverKind,
) -> Result<(Discretization, Solution, ErrorPair)> {
    let (disc, solution) = solve_problem(mesh, settings, |p| problem.f(p), |p| problem.g(p), solver)?;
    let errors = compute_errors(&disc, &solution.dofs, |p| problem.u(p), |p| problem.grad(p))?;
    Ok((disc, solution, errors))
}

/// Runs `problem` on `meshes` in order and collects the errors.
pub fn convergence(
    family: &str,
    meshes: impl IntoIterator<Item = Mesh>,
    settings: Settings,
    problem: &dyn Problem,
    solver: SolverKind,
) -> Result<ConvergenceReport> {
    let mut report = ConvergenceReport::new(settings.k, family);
    for mesh in meshes {
        let (_, _, errors) = run(mesh, settings, problem, solver)?;
        report.runs.push(errors);
    }
    Ok(report)
}

/// `levels` refinements of the default family of `case`.
pub fn case_convergence(
    case: Case,
    levels: usize,
    settings: Settings,
    solver: SolverKind,
) -> Result<ConvergenceReport> {
    let family = case.family();
    convergence(
        family.name(),
        (0..levels).map(|l| family.mesh(l)),
        settings,
        case.problem(),
        solver,
    )
}
