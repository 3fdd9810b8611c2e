use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Position and first derivative of a parametrisation at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub position: Vec2,
    pub tangent: Vec2,
}

impl CurvePoint {
    /// `|γ'(t)|`.
    pub fn speed(&self) -> f64 {
        self.tangent.norm()
    }
}

/// Shape of a parametrised curve.
///
/// Sine graphs are `y = offset + amplitude * sin(frequency * x)` with `x = t`
/// when `orientation` is positive; a negative orientation swaps the roles of
/// the two coordinates (a graph over `y`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveKind {
    CircleArc {
        center: [f64; 2],
        radius: f64,
        angle0: f64,
        angle1: f64,
    },
    SineGraph {
        amplitude: f64,
        frequency: f64,
        offset: f64,
        orientation: i8,
        t_lo: f64,
        t_hi: f64,
    },
    /// The straight chord between `inner(t0)` and `inner(t1)`, parametrised
    /// affinely over `[t0, t1]`.
    StraightChordOf { inner: Box<CurveKind>, t0: f64, t1: f64 },
    /// Segment `a + t (b - a)` for `t` in `[0, 1]`.
    PolylineSegment { a: [f64; 2], b: [f64; 2] },
}

/// A named curve of the mesh curve table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub id: u32,
    #[serde(flatten)]
    pub kind: CurveKind,
}

impl Curve {
    pub fn new(id: u32, kind: CurveKind) -> Self {
        Self { id, kind }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.kind.domain()
    }

    /// Evaluates position and tangent, rejecting parameters outside the
    /// domain (with a relative slack of `1e-12`).
    pub fn eval(&self, t: f64) -> Result<CurvePoint> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::CurveDomain { t, lo, hi });
        }
        Ok(self.kind.eval(t))
    }
}

impl CurveKind {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            CurveKind::CircleArc { angle0, angle1, .. } => (*angle0, *angle1),
            CurveKind::SineGraph { t_lo, t_hi, .. } => (*t_lo, *t_hi),
            CurveKind::StraightChordOf { t0, t1, .. } => (t0.min(*t1), t0.max(*t1)),
            CurveKind::PolylineSegment { .. } => (0.0, 1.0),
        }
    }

    /// Unchecked evaluation; callers guarantee `t` lies in the domain.
    pub fn eval(&self, t: f64) -> CurvePoint {
        match self {
            CurveKind::CircleArc { center, radius, .. } => {
                let (s, c) = t.sin_cos();
                CurvePoint {
                    position: Vec2::new(center[0] + radius * c, center[1] + radius * s),
                    tangent: Vec2::new(-radius * s, radius * c),
                }
            }
            CurveKind::SineGraph {
                amplitude,
                frequency,
                offset,
                orientation,
                ..
            } => {
                let (s, c) = (frequency * t).sin_cos();
                let g = offset + amplitude * s;
                let dg = amplitude * frequency * c;
                if *orientation >= 0 {
                    CurvePoint {
                        position: Vec2::new(t, g),
                        tangent: Vec2::new(1.0, dg),
                    }
                } else {
                    CurvePoint {
                        position: Vec2::new(g, t),
                        tangent: Vec2::new(dg, 1.0),
                    }
                }
            }
            CurveKind::StraightChordOf { inner, t0, t1 } => {
                let a = inner.eval(*t0).position;
                let b = inner.eval(*t1).position;
                let d = (b - a) / (t1 - t0);
                CurvePoint {
                    position: a + d * (t - t0),
                    tangent: d,
                }
            }
            CurveKind::PolylineSegment { a, b } => {
                let a = Vec2::new(a[0], a[1]);
                let d = Vec2::new(b[0], b[1]) - a;
                CurvePoint {
                    position: a + d * t,
                    tangent: d,
                }
            }
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(
            self,
            CurveKind::StraightChordOf { .. } | CurveKind::PolylineSegment { .. }
        )
    }
}

/// The lower (`g1`) and upper (`g2`) boundaries of the sine-bounded domain.
pub fn sine_lower() -> CurveKind {
    CurveKind::SineGraph {
        amplitude: 0.05,
        frequency: std::f64::consts::PI,
        offset: 0.0,
        orientation: 1,
        t_lo: 0.0,
        t_hi: 1.0,
    }
}

pub fn sine_upper() -> CurveKind {
    CurveKind::SineGraph {
        amplitude: 0.05,
        frequency: 3.0 * std::f64::consts::PI,
        offset: 1.0,
        orientation: 1,
        t_lo: 0.0,
        t_hi: 1.0,
    }
}

pub fn full_circle(radius: f64) -> CurveKind {
    CurveKind::CircleArc {
        center: [0.0, 0.0],
        radius,
        angle0: 0.0,
        angle1: 2.0 * std::f64::consts::PI,
    }
}
