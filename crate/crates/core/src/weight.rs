//! Submultiplicative weights and growth diagnostics.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind};

/// Symmetric submultiplicative weight with `w(e) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    Constant,
    /// `(1 + |x|)^s`.
    Polynomial { s: f64 },
    /// `exp(c |x|^beta)` with `0 < beta < 1`.
    Subexponential { c: f64, beta: f64 },
    /// `exp(c |x|)`.
    Exponential { c: f64 },
    /// `(1 + |k1|)^s` on Z^2.
    ProductZ2 { s: f64 },
}

impl Weight {
    fn validate(self) -> Result<Self> {
        let bad = |m: &str| Err(Error::Usage(format!("invalid weight {self}: {m}")));
        match self {
            Weight::Polynomial { s } | Weight::ProductZ2 { s } if !(s >= 0.0) => bad("s must be >= 0"),
            Weight::Subexponential { c, beta } if !(c >= 0.0) || !(beta > 0.0 && beta < 1.0) => {
                bad("need c >= 0 and 0 < beta < 1")
            }
            Weight::Exponential { c } if !(c >= 0.0) => bad("c must be >= 0"),
            w => Ok(w),
        }
    }

    /// Depends on the element only through its word length.
    pub fn is_length_based(&self) -> bool {
        !matches!(self, Weight::ProductZ2 { .. })
    }

    /// `log w` as a function of word length, for length based weights.
    pub fn log_of_length(&self, n: usize) -> Option<f64> {
        let n = n as f64;
        match *self {
            Weight::Constant => Some(0.0),
            Weight::Polynomial { s } => Some(s * (1.0 + n).ln()),
            Weight::Subexponential { c, beta } => Some(c * n.powf(beta)),
            Weight::Exponential { c } => Some(c * n),
            Weight::ProductZ2 { .. } => None,
        }
    }

    pub fn log_eval(&self, group: &Group, g: &Element) -> Result<f64> {
        match *self {
            Weight::ProductZ2 { s } => {
                if group.kind() != GroupKind::Lattice(2) {
                    return Err(Error::Usage("prodz2 weight is defined on Z2 only".into()));
                }
                Ok(s * (1.0 + g.coords()[0].unsigned_abs() as f64).ln())
            }
            _ => Ok(self.log_of_length(group.word_length(g)?).expect("length weight")),
        }
    }

    pub fn eval(&self, group: &Group, g: &Element) -> Result<f64> {
        Ok(self.log_eval(group, g)?.exp())
    }

    /// `log sup_{U^n} w` in closed form. For the product weight the generating set
    /// is `{-1,0,1} x Z`, whose n-th power is the strip `|k1| <= n`.
    pub fn log_closed_form_sup(&self, n: usize) -> f64 {
        match *self {
            Weight::ProductZ2 { s } => s * (1.0 + n as f64).ln(),
            _ => self.log_of_length(n).expect("length weight"),
        }
    }

    pub fn check_group(&self, group: &Group) -> Result<()> {
        if matches!(self, Weight::ProductZ2 { .. }) && group.kind() != GroupKind::Lattice(2) {
            return Err(Error::Usage("prodz2 weight is defined on Z2 only".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Constant => f.write_str("const"),
            Weight::Polynomial { s } => write!(f, "poly:s={s}"),
            Weight::Subexponential { c, beta } => write!(f, "subexp:c={c},beta={beta}"),
            Weight::Exponential { c } => write!(f, "exp:c={c}"),
            Weight::ProductZ2 { s } => write!(f, "prodz2:s={s}"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = Vec::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("weight parameter '{kv}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("weight parameter '{kv}': {e}")))?;
            params.push((k.trim().to_string(), v));
        }
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("weight '{spec}' needs parameter {key}")))
        };
        let w = match name.trim().to_ascii_lowercase().as_str() {
            "const" | "constant" => Weight::Constant,
            "poly" => Weight::Polynomial { s: get("s")? },
            "subexp" => Weight::Subexponential {
                c: get("c")?,
                beta: get("beta")?,
            },
            "exp" => Weight::Exponential { c: get("c")? },
            "prodz2" => Weight::ProductZ2 { s: get("s")? },
            other => return Err(Error::Parse(format!("unknown weight '{other}'"))),
        };
        w.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Verdict on a sequence expected to tend to 1.
///
/// Pass when the last quarter is nonincreasing and ends below 1.05. Fail when the
/// whole last quarter stays at or above 1.1. Otherwise inconclusive.
pub fn sequence_verdict(values: &[f64]) -> Verdict {
    if values.is_empty() {
        return Verdict::Inconclusive;
    }
    let q = values.len().div_ceil(4).max(2).min(values.len());
    let tail = &values[values.len() - q..];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let last = *tail.last().unwrap();
    if nonincreasing && last < 1.05 {
        Verdict::Pass
    } else if tail.iter().all(|&v| v >= 1.1) {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrsDiagnostic {
    pub element: String,
    /// `w(x^n)^(1/n)` for `n = 1..=N`.
    pub values: Vec<f64>,
    pub verdict: Verdict,
}

/// GRS diagnostic along the powers of a single element.
pub fn grs_diagnostic(w: &Weight, group: &Group, x: &Element, n_max: usize) -> Result<GrsDiagnostic> {
    if n_max < 10 {
        return Err(Error::InsufficientData("GRS diagnostic needs N >= 10".into()));
    }
    group.kind().validate(x)?;
    w.check_group(group)?;
    if *x == group.identity() {
        return Err(Error::Usage("GRS diagnostic needs a non-identity element".into()));
    }
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lw = match w {
            Weight::ProductZ2 { s } => s * (1.0 + (n as f64) * x.coords()[0].unsigned_abs() as f64).ln(),
            _ => w.log_of_length(group.power_length(x, n)?).unwrap(),
        };
        values.push((lw / n as f64).exp());
    }
    let verdict = sequence_verdict(&values);
    Ok(GrsDiagnostic {
        element: x.to_string(),
        values,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UgrsDiagnostic {
    /// `(sup_{U^n} w)^(1/n)` for `n = 1..=N`.
    pub values: Vec<f64>,
    pub verdict: Verdict,
    /// Largest `n` evaluated by enumerating the ball; closed forms beyond.
    pub enumerated_through: usize,
    pub generating_set: String,
}

fn sphere_log_extremes(w: &Weight, group: &Group, k: usize) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for g in group.sphere(k)? {
        let l = w.log_eval(group, &g)?;
        lo = lo.min(l);
        hi = hi.max(l);
    }
    Ok((lo, hi))
}

/// UGRS diagnostic with `U` the standard generators plus the identity.
pub fn ugrs_diagnostic(w: &Weight, group: &Group, n_max: usize) -> Result<UgrsDiagnostic> {
    if n_max < 10 {
        return Err(Error::InsufficientData("UGRS diagnostic needs N >= 10".into()));
    }
    w.check_group(group)?;
    let product = matches!(w, Weight::ProductZ2 { .. });
    let budget = if product { 0 } else { n_max.min(group.max_radius()) };
    let mut values = Vec::with_capacity(n_max);
    let mut running = 0.0f64;
    for n in 1..=n_max {
        let lsup = if n <= budget {
            running = running.max(sphere_log_extremes(w, group, n)?.1);
            running
        } else {
            w.log_closed_form_sup(n)
        };
        values.push((lsup / n as f64).exp());
    }
    let verdict = sequence_verdict(&values);
    Ok(UgrsDiagnostic {
        values,
        verdict,
        enumerated_through: budget,
        generating_set: if product {
            "{-1,0,1}xZ".into()
        } else {
            "standard".into()
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    /// `sup / inf` of the weight on the sphere of radius `n`, `n = 1..=N`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `sup_{S_n} w <= C inf_{S_n} w` on the spheres up to radius `N`.
pub fn ratio_condition(w: &Weight, group: &Group, n_max: usize, bound: f64) -> Result<RatioReport> {
    w.check_group(group)?;
    let ratios = if matches!(w, Weight::ProductZ2 { .. }) {
        // constant on each strip boundary of the infinite generating set
        vec![1.0; n_max]
    } else {
        (1..=n_max)
            .map(|n| sphere_log_extremes(w, group, n).map(|(lo, hi)| (hi - lo).exp()))
            .collect::<Result<Vec<_>>>()?
    };
    let max_ratio = ratios.iter().copied().fold(1.0, f64::max);
    Ok(RatioReport {
        holds: max_ratio <= bound,
        ratios,
        max_ratio,
        bound,
    })
}

/// Induced weight `v(n) = sup_{B_|n|} w` on the integers.
#[derive(Debug, Clone, Serialize)]
pub struct InducedWeight {
    /// `v(0), ..., v(N)`.
    pub values: Vec<f64>,
}

impl InducedWeight {
    pub fn at(&self, n: i64) -> Option<f64> {
        self.values.get(n.unsigned_abs() as usize).copied()
    }
}

pub fn induced_weight_v(w: &Weight, group: &Group, n_max: usize) -> Result<InducedWeight> {
    w.check_group(group)?;
    let product = matches!(w, Weight::ProductZ2 { .. });
    let budget = if product { 0 } else { n_max.min(group.max_radius()) };
    let mut values = vec![1.0];
    let mut running = 0.0f64;
    for n in 1..=n_max {
        let l = if n <= budget {
            running = running.max(sphere_log_extremes(w, group, n)?.1);
            running
        } else {
            w.log_closed_form_sup(n)
        };
        values.push(l.exp());
    }
    Ok(InducedWeight { values })
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub submultiplicative: bool,
    pub symmetric: bool,
    pub normalized: bool,
}

/// Checks the weight axioms on all pairs from `B_r`.
pub fn check_axioms(w: &Weight, group: &Group, r: usize) -> Result<AxiomReport> {
    w.check_group(group)?;
    let ball = group.ball(r)?;
    let logs: Vec<f64> = ball
        .elements()
        .iter()
        .map(|g| w.log_eval(group, g))
        .collect::<Result<_>>()?;
    let mut sub = true;
    let mut sym = true;
    for (i, x) in ball.elements().iter().enumerate() {
        let xi = group.inv(x);
        sym &= (w.log_eval(group, &xi)? - logs[i]).abs() <= 1e-12;
        for (j, y) in ball.elements().iter().enumerate() {
            let xy = group.mul(x, y);
            sub &= w.log_eval(group, &xy)? <= logs[i] + logs[j] + 1e-12;
        }
    }
    Ok(AxiomReport {
        pairs_checked: ball.len() * ball.len(),
        submultiplicative: sub,
        symmetric: sym,
        normalized: w.log_eval(group, &group.identity())?.abs() <= 1e-15,
    })
}
