//! The `curvem` command line front end.
//!
//! Exit codes: `0` success, `1` solver or I/O failure, `2` usage error,
//! `3` a rate check failed in `--check` mode.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assembly::write_solution_csv;
use crate::cases::{convergence, run, Case, Constant, MeshFamily, Problem};
use crate::element::Settings;
use crate::geometry::generators::{polar_disk, sine_quads, unit_square_quads};
use crate::geometry::{mesh_read, mesh_to_json, Mesh};
use crate::linalg::SolverKind;
use crate::postproc::{ConvergenceReport, CSV_HEADER};
use crate::{Error, MAX_DEGREE};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "curvem", version, about = "Nonconforming virtual elements on curved meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a mesh and write it as JSON.
    Mesh(MeshArgs),
    /// Solve one problem on one mesh and report the projected errors.
    Solve(SolveArgs),
    /// Run a refinement study and write the rate table as CSV.
    Convergence(ConvergenceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeshKind {
    /// Polar mesh of the unit disk.
    Disk,
    /// Mapped quadrilaterals on the sine-bounded domain.
    Sine,
    /// Uniform quadrilaterals on the unit square.
    Square,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    pub kind: MeshKind,
    #[arg(long, default_value_t = 2)]
    pub rings: usize,
    #[arg(long, default_value_t = 8)]
    pub sectors: usize,
    /// Put a ring on r = 1/2 with κ = 1 inside and κ = 5 outside.
    #[arg(long)]
    pub interface: bool,
    /// Cells per side for `sine` and `square`.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Replace every curved edge by its chord.
    #[arg(long)]
    pub straight: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Cg,
    Direct,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Cg => SolverKind::Cg,
            SolverArg::Direct => SolverKind::Direct,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// disk-u1, sine-u2, interface-u3 or straight-approx-u2.
    #[arg(long, default_value = "disk-u1")]
    pub case: Case,
    /// Mesh family; defaults to the family of the test case.
    #[arg(long)]
    pub family: Option<MeshFamily>,
    /// Multiplier on every quadrature point count.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=8))]
    pub quad_order: u32,
    #[arg(long, value_enum, default_value_t = SolverArg::Direct)]
    pub solver: SolverArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Refinement level within the family.
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
    /// Solve `-div(κ∇u) = 0` with `u = C` on the boundary instead of the
    /// test case.
    #[arg(long, value_name = "C")]
    pub constant: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// One or more orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Explicit mesh sequence, coarsest first; overrides --family/--levels.
    #[arg(long)]
    pub mesh_file: Vec<PathBuf>,
    /// Compare the fitted slopes with the case thresholds.
    #[arg(long)]
    pub check: bool,
}

/// Inclusive bounds on the least-squares slopes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBounds {
    pub h1: (f64, f64),
    pub l2: (f64, f64),
}

impl RateBounds {
    /// The rates the method is expected to reach for `case` at order `k`.
    pub fn expected(case: Case, k: usize) -> Self {
        let k = k as f64;
        match case {
            Case::DiskU1 | Case::SineU2 => Self {
                h1: (k - 0.15, f64::INFINITY),
                l2: (k + 1.0 - 0.25, f64::INFINITY),
            },
            Case::InterfaceU3 => Self {
                h1: (k - 0.15, f64::INFINITY),
                l2: (k + 0.75, f64::INFINITY),
            },
            Case::StraightApproxU2 => Self {
                h1: (1.2, 1.8),
                l2: (1.6, 2.4),
            },
        }
    }

    pub fn admits(&self, h1: f64, l2: f64) -> bool {
        (self.h1.0..=self.h1.1).contains(&h1) && (self.l2.0..=self.l2.1).contains(&l2)
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Mesh(a) => cmd_mesh(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Convergence(a) => cmd_convergence(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Invalid(_) | Error::Parse { .. } | Error::Structure(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> crate::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn settings(k: usize, quad_order: u32) -> crate::Result<Settings> {
    let mut s = Settings::new(k);
    s.check()?;
    s.orders = s.orders.scaled(quad_order as usize);
    Ok(s)
}

pub fn cmd_mesh(a: &MeshArgs) -> crate::Result<i32> {
    let mesh = match a.kind {
        MeshKind::Disk => {
            if a.rings < 1 || a.sectors < 3 {
                return Err(Error::Invalid(
                    "disk meshes need --rings >= 1 and --sectors >= 3".into(),
                ));
            }
            polar_disk(a.rings, a.sectors, a.interface)
        }
        MeshKind::Sine | MeshKind::Square => {
            if a.n < 1 {
                return Err(Error::Invalid("--n must be at least 1".into()));
            }
            if a.kind == MeshKind::Sine {
                sine_quads(a.n)
            } else {
                unit_square_quads(a.n)
            }
        }
    };
    let mesh = if a.straight { mesh.straightened()? } else { mesh };
    emit(&a.out, &mesh_to_json(&mesh))?;
    let curved = (0..mesh.num_edges()).filter(|&e| mesh.is_curved(e)).count();
    eprintln!(
        "elements={} edges={} curved_edges={}",
        mesh.num_elements(),
        mesh.num_edges(),
        curved
    );
    Ok(0)
}

pub fn cmd_solve(a: &SolveArgs) -> crate::Result<i32> {
    let settings = settings(a.k, a.common.quad_order)?;
    let mesh = match &a.mesh_file {
        Some(path) => mesh_read(path)?,
        None => a.common.family.unwrap_or(a.common.case.family()).mesh(a.level),
    };
    let constant = a.constant.map(Constant);
    let problem: &dyn Problem = match &constant {
        Some(c) => c,
        None => a.common.case.problem(),
    };
    let (_, solution, errors) = run(mesh, settings, problem, a.common.solver.into())?;
    if let Some(path) = &a.common.out {
        let mut buf = Vec::new();
        write_solution_csv(&mut buf, &solution.dofs)?;
        fs::write(path, buf)?;
    }
    println!(
        "h={:.16e} ndofs={} EH1={:.16e} EL2={:.16e} relative={} iterations={} residual={:.3e}",
        errors.h,
        errors.ndofs,
        errors.eh1,
        errors.el2,
        errors.relative,
        solution.stats.iterations,
        solution.stats.relative_residual
    );
    Ok(0)
}

pub fn cmd_convergence(a: &ConvergenceArgs) -> crate::Result<i32> {
    let explicit = !a.mesh_file.is_empty();
    let levels = if explicit { a.mesh_file.len() } else { a.levels };
    if levels < 3 {
        return Err(Error::Invalid(format!(
            "a convergence study needs at least 3 levels, got {levels}"
        )));
    }
    if a.k.is_empty() || a.k.iter().any(|k| !(1..=MAX_DEGREE).contains(k)) {
        return Err(Error::Invalid(format!("every --k must lie in 1..={MAX_DEGREE}")));
    }
    let meshes: Vec<Mesh> = if explicit {
        a.mesh_file.iter().map(mesh_read).collect::<crate::Result<_>>()?
    } else {
        let family = a.common.family.unwrap_or(a.common.case.family());
        (0..levels).map(|l| family.mesh(l)).collect()
    };
    let family_name = if explicit {
        "file"
    } else {
        a.common.family.unwrap_or(a.common.case.family()).name()
    };
    let mut csv = format!("{CSV_HEADER}\n");
    let mut reports: Vec<ConvergenceReport> = Vec::new();
    for &k in &a.k {
        let s = settings(k, a.common.quad_order)?;
        let report = convergence(
            family_name,
            meshes.iter().cloned(),
            s,
            a.common.case.problem(),
            a.common.solver.into(),
        )?;
        csv.push_str(&report.csv_rows());
        reports.push(report);
    }
    emit(&a.common.out, &csv)?;
    if !a.check {
        return Ok(0);
    }
    let mut failed = false;
    let mut log = String::new();
    for report in &reports {
        let bounds = RateBounds::expected(a.common.case, report.k);
        let (h1, l2) = (report.h1_rates()?.slope, report.l2_rates()?.slope);
        let ok = bounds.admits(h1, l2);
        failed |= !ok;
        let _ = writeln!(
            log,
            "{} {} k={} slope_H1={:.3} slope_L2={:.3} bounds_H1=[{}, {}] bounds_L2=[{}, {}]",
            if ok { "PASS" } else { "FAIL" },
            a.common.case,
            report.k,
            h1,
            l2,
            bounds.h1.0,
            bounds.h1.1,
            bounds.l2.0,
            bounds.l2.1
        );
    }
    eprint!("{log}");
    Ok(if failed { EXIT_CHECK } else { 0 })
}
