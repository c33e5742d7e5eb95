use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{CdMatrix, DenseSection, Extent, VectorSection};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy)]
pub struct PowerOptions {
    pub max_iters: usize,
    /// Stop when the Rayleigh quotient changes by less than this, relatively.
    pub tol: f64,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            max_iters: 5000,
            tol: 1e-10,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerEstimate<T> {
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Real> PowerEstimate<T> {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                iterations: self.iterations,
                last: self.value.as_f64(),
            })
        }
    }
}

fn normalize<T: Real>(v: &mut [Complex<T>]) -> T {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    if n > T::zero() {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
    n
}

/// Power iteration on `A* A` from a seeded start vector. Returns `||A||_2`.
pub fn power_norm<T: Real>(
    n: usize,
    mut apply: impl FnMut(&[Complex<T>]) -> Vec<Complex<T>>,
    mut apply_adjoint: impl FnMut(&[Complex<T>]) -> Vec<Complex<T>>,
    opts: PowerOptions,
) -> Result<PowerEstimate<T>> {
    if n == 0 {
        return Err(Error::Usage("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<Complex<T>> = (0..n)
        .map(|_| Complex::new(T::cast(rng.gen_range(-1.0..1.0)), T::cast(rng.gen_range(-1.0..1.0))))
        .collect();
    normalize(&mut v);
    let tol = T::cast(opts.tol);
    let mut prev = T::zero();
    for it in 1..=opts.max_iters {
        let w = apply(&v);
        let rq = w.iter().map(|c| c.norm_sqr()).sum::<T>();
        if it == 1 && rq == T::zero() {
            return Err(Error::Usage("operator vanishes on the start vector".into()));
        }
        if it > 1 && (rq - prev).abs() <= tol * rq {
            return Ok(PowerEstimate {
                value: rq.sqrt(),
                iterations: it,
                converged: true,
            });
        }
        prev = rq;
        v = apply_adjoint(&w);
        if normalize(&mut v) == T::zero() {
            return Ok(PowerEstimate {
                value: rq.sqrt(),
                iterations: it,
                converged: true,
            });
        }
    }
    Ok(PowerEstimate {
        value: prev.sqrt(),
        iterations: opts.max_iters,
        converged: false,
    })
}

/// Operator norm of a dense section on `l2`.
pub fn opnorm_estimate<T: Real>(m: &DenseSection<T>, opts: PowerOptions) -> Result<PowerEstimate<T>> {
    if m.max_abs() == T::zero() {
        return Err(Error::Usage("zero section".into()));
    }
    power_norm(m.n(), |v| m.apply(v), |v| m.apply_adjoint(v), opts)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingleDiagonalCheck<T> {
    pub estimate: T,
    pub sup: T,
    pub converged: bool,
}

/// Norm of the single diagonal operator `D^m_z` against `sup |m|`.
pub fn single_diag_opnorm_check<T: Real>(
    group: &std::sync::Arc<Group>,
    z: &Element,
    m: &VectorSection<T>,
    opts: PowerOptions,
) -> Result<SingleDiagonalCheck<T>> {
    let r = m.ball().radius();
    let mut a = CdMatrix::zero(group, r, Extent::Exact)?;
    a.insert_diagonal(z, m.values().to_vec())?;
    let section = group.ball(r + group.word_length(z)?)?;
    let est = opnorm_estimate(&a.to_dense(&section)?, opts)?;
    Ok(SingleDiagonalCheck {
        estimate: est.value,
        sup: m.norm_inf(),
        converged: est.converged,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralRadiusEstimate<T> {
    /// `r_k = ||f^(2^k)||_1^(1/2^k)` for `k = 0, 1, ...`.
    pub r: Vec<T>,
    /// Why the sequence stopped before the requested length, if it did.
    pub stopped: Option<String>,
}

/// Spectral radius in the CD algebra by repeated squaring.
pub fn specrad_l_estimate<T: Real>(f: &CdMatrix<T>, k_max: usize) -> Result<SpectralRadiusEstimate<T>> {
    let mut g = f.clone();
    let mut r = vec![g.cd_norm()];
    let mut stopped = None;
    for k in 1..=k_max {
        match g.compose(&g) {
            Ok(next) => g = next,
            Err(e @ (Error::Truncation { .. } | Error::RadiusLimit { .. } | Error::ResourceLimit { .. })) => {
                stopped = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
        let p = T::cast(0.5f64.powi(k as i32));
        r.push(g.cd_norm().powf(p));
    }
    Ok(SpectralRadiusEstimate { r, stopped })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormIdentityReport {
    pub r: Vec<f64>,
    pub opnorm: f64,
    pub opnorm_converged: bool,
    pub ratio: f64,
    pub r_nonincreasing: bool,
    pub stopped: Option<String>,
}

/// Compares the CD spectral radius of `f* f` with `||R(f)||^2` on a section.
pub fn check_normid<T: Real>(
    f: &CdMatrix<T>,
    ball: &std::sync::Arc<crate::Ball>,
    k_max: usize,
    opts: PowerOptions,
) -> Result<NormIdentityReport> {
    let g = f.adjoint()?.compose(f)?;
    let sr = specrad_l_estimate(&g, k_max)?;
    let est = opnorm_estimate(&f.to_dense(ball)?, opts)?;
    let r: Vec<f64> = sr.r.iter().map(|x| x.as_f64()).collect();
    let op = est.value.as_f64();
    Ok(NormIdentityReport {
        ratio: r.last().copied().unwrap_or(f64::NAN) / (op * op),
        r_nonincreasing: r.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)),
        r,
        opnorm: op,
        opnorm_converged: est.converged,
        stopped: sr.stopped,
    })
}
