use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::CdMatrix;
use crate::error::{Error, Result};
use crate::repr::{opnorm_estimate, PowerOptions};
use crate::scalar::Real;

use super::section::SINGULAR_PIVOT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpNorm {
    One,
    Two,
    Inf,
}

impl fmt::Display for LpNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpNorm::One => "1",
            LpNorm::Two => "2",
            LpNorm::Inf => "inf",
        })
    }
}

impl FromStr for LpNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(LpNorm::One),
            "2" => Ok(LpNorm::Two),
            "inf" | "Inf" | "infinity" => Ok(LpNorm::Inf),
            other => Err(Error::Parse(format!("unknown p '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LpRow {
    pub radius: usize,
    pub p: LpNorm,
    pub norm: f64,
    pub inverse_norm: f64,
    pub cond: f64,
    /// Power iteration convergence; always true for `p = 1, inf`.
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpDrift {
    pub p: LpNorm,
    pub min_cond: f64,
    pub max_cond: f64,
    /// `max / min` condition number over the radii.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpReport {
    pub rows: Vec<LpRow>,
    pub drift: Vec<LpDrift>,
}

/// Condition numbers of the sections of `a` on `l1`, `l2` and `l_inf`.
///
/// `p = 1` and `p = inf` use exact column and row sums. `p = 2` needs a
/// Hermitian section and uses power iteration on the section and its inverse.
pub fn lp_condition_experiment<T: Real>(
    a: &CdMatrix<T>,
    radii: &[usize],
    ps: &[LpNorm],
    opts: PowerOptions,
) -> Result<LpReport> {
    let g = a.group();
    let mut rows = Vec::new();
    for &n in radii {
        let ball = g.ball(n)?;
        let mut s = a.to_dense(&ball)?;
        let inv = s.inverse(T::cast(SINGULAR_PIVOT))?;
        for &p in ps {
            let (norm, inverse_norm, converged) = match p {
                LpNorm::One => (s.norm_1().as_f64(), inv.norm_1().as_f64(), true),
                LpNorm::Inf => (s.norm_inf().as_f64(), inv.norm_inf().as_f64(), true),
                LpNorm::Two => {
                    if !s.hermitian() {
                        s.mark_hermitian(T::cast(1e-12) * s.max_abs()).map_err(|_| {
                            Error::Usage("the p = 2 path needs a Hermitian matrix".into())
                        })?;
                    }
                    let e1 = opnorm_estimate(&s, opts)?;
                    let e2 = opnorm_estimate(&inv, opts)?;
                    (e1.value.as_f64(), e2.value.as_f64(), e1.converged && e2.converged)
                }
            };
            rows.push(LpRow {
                radius: n,
                p,
                norm,
                inverse_norm,
                cond: norm * inverse_norm,
                converged,
            });
        }
    }
    let drift = ps
        .iter()
        .map(|&p| {
            let c: Vec<f64> = rows.iter().filter(|r| r.p == p).map(|r| r.cond).collect();
            let min = c.iter().copied().fold(f64::INFINITY, f64::min);
            let max = c.iter().copied().fold(0.0, f64::max);
            LpDrift {
                p,
                min_cond: min,
                max_cond: max,
                ratio: max / min,
            }
        })
        .collect();
    Ok(LpReport { rows, drift })
}
