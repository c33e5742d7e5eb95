//! Randomized property suites run by `convdom verify`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{product_region, CdMatrix, CertifiedRegion, Extent, VectorSection};
use crate::envelope::Envelope;
use crate::error::Result;
use crate::group::{Element, Group};
use crate::repr::{check_intertwining, BiVectorSection};
use crate::scalar::{Complex, Real};

/// Diagonal radius of the random matrices.
const K: usize = 2;
/// Column radius of the random matrices.
const N: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

fn random_complex<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    Complex::new(T::cast(rng.gen_range(-1.0..1.0)), T::cast(rng.gen_range(-1.0..1.0)))
}

fn random_matrix<T: Real>(g: &Arc<Group>, extent: Extent, rng: &mut ChaCha8Rng) -> Result<CdMatrix<T>> {
    CdMatrix::from_fn(g, K, N, extent, |_, _| random_complex(rng))
}

fn suite(name: &str, cases: usize, max_error: f64, tolerance: f64) -> SuiteResult {
    SuiteResult {
        name: name.into(),
        cases,
        max_error,
        tolerance,
        passed: max_error <= tolerance,
    }
}

/// `cd_norm` against the sup-sum over `z = x y^-1` of a dense section.
pub fn isometry_suite<T: Real>(g: &Arc<Group>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let ball = g.ball(N + K)?;
    let n = ball.len();
    let mut ids: HashMap<Element, usize> = HashMap::new();
    let mut zindex = Vec::with_capacity(n * n);
    for x in ball.elements() {
        for y in ball.elements() {
            let next = ids.len();
            zindex.push(*ids.entry(g.mul(x, &g.inv(y))).or_insert(next));
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let a = random_matrix::<T>(g, Extent::Exact, rng)?;
        let d = a.to_dense(&ball)?;
        let mut sup = vec![0.0f64; ids.len()];
        for i in 0..n {
            for j in 0..n {
                let s = &mut sup[zindex[i * n + j]];
                *s = s.max(d.get(i, j).norm().as_f64());
            }
        }
        let total: f64 = sup.iter().sum();
        worst = worst.max((a.cd_norm().as_f64() - total).abs() / total.max(1.0));
    }
    Ok(suite("isometry", cases, worst, tol::<T>()))
}

/// Twisted convolution against dense matrix products on the certified region.
pub fn homomorphism_suite<T: Real>(g: &Arc<Group>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let ball = g.ball(N + K)?;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let h = random_matrix::<T>(g, Extent::Exact, rng)?;
        let f = random_matrix::<T>(g, Extent::Exact, rng)?;
        let p = h.compose(&f)?;
        let region = product_region(&f, &p, &ball);
        let lhs = p.to_dense(&ball)?;
        let rhs = h.to_dense(&ball)?.matmul(&f.to_dense(&ball)?)?;
        worst = worst.max(lhs.max_abs_diff_on(&rhs, &region)?.as_f64());
    }
    Ok(suite("homomorphism", cases, worst, tol::<T>() * 10.0))
}

/// Adjoint against the conjugate transpose, and adjoint applied twice.
pub fn involution_suite<T: Real>(g: &Arc<Group>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let ball = g.ball(N + K)?;
    let full = CertifiedRegion::full(ball.len(), ball.len());
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let f = random_matrix::<T>(g, Extent::Exact, rng)?;
        let s = f.adjoint()?;
        let lhs = s.to_dense(&ball)?;
        let rhs = f.to_dense(&ball)?.adjoint();
        worst = worst.max(lhs.max_abs_diff_on(&rhs, &full)?.as_f64());
        let back = s.adjoint()?.restrict_columns(N)?;
        worst = worst.max(back.max_abs_diff(&f)?.as_f64());
    }
    Ok(suite("involution", cases, worst, tol::<T>()))
}

/// `|A c| <= a * |c|` pointwise on certified rows. The error is the largest excess.
pub fn domination_suite<T: Real>(g: &Arc<Group>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let ball = g.ball(N)?;
    let mut worst = 0.0f64;
    for i in 0..cases {
        let extent = if i % 2 == 0 { Extent::Exact } else { Extent::Window };
        let a = random_matrix::<T>(g, extent, rng)?;
        let vals: Vec<Complex<T>> = (0..ball.len()).map(|_| random_complex(rng)).collect();
        let abs = Envelope::from_pairs(g, ball.elements().iter().cloned().zip(vals.iter().map(|v| v.norm())))?;
        let out = a.apply(&VectorSection::new(&ball, vals)?)?;
        let bound = a.envelope()?.convolve(&abs)?;
        for (j, x) in ball.elements().iter().enumerate() {
            if out.certified[j] {
                let gap = (out.values.values()[j].norm() - bound.get(x)).as_f64();
                worst = worst.max(gap);
            }
        }
    }
    Ok(suite("domination", cases, worst, tol::<T>()))
}

/// `lambda^D(f) S = S R(f)` on bi-sections supported near the identity.
pub fn intertwining_suite<T: Real>(g: &Arc<Group>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let ball = g.ball(N)?;
    let inner = ball.prefix_len(1);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let f = random_matrix::<T>(g, Extent::Exact, rng)?;
        let xi = BiVectorSection::from_fn(&ball, |x, z| {
            if x < inner && z < inner {
                random_complex(rng)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
        worst = worst.max(check_intertwining(&f, &xi)?.max_diff.as_f64());
    }
    Ok(suite("intertwining", cases, worst, tol::<T>()))
}

fn tol<T: Real>() -> f64 {
    1e3 * T::epsilon().as_f64()
}

/// Runs all suites with `cases` random instances each.
pub fn verify_group<T: Real>(g: &Arc<Group>, seed: u64, cases: usize) -> Result<VerifyReport> {
    g.require_hypotheses()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        isometry_suite::<T>(g, cases, &mut rng)?,
        homomorphism_suite::<T>(g, cases, &mut rng)?,
        involution_suite::<T>(g, cases, &mut rng)?,
        domination_suite::<T>(g, cases, &mut rng)?,
        intertwining_suite::<T>(g, cases, &mut rng)?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport {
        group: g.kind().to_string(),
        seed,
        suites,
        passed,
    })
}

/// A seeded batch of [`intertwining_suite`].
pub fn intertwining_batch<T: Real>(g: &Arc<Group>, seed: u64, cases: usize) -> Result<SuiteResult> {
    g.require_hypotheses()?;
    intertwining_suite::<T>(g, cases, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;

    #[test]
    fn suites_pass_on_z2_f64() {
        let g = Group::new(GroupKind::Lattice(2));
        let r = verify_group::<f64>(&g, 3, 4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn suites_pass_on_z_f32() {
        let g = Group::new(GroupKind::Lattice(1));
        let r = verify_group::<f32>(&g, 3, 4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn free_group_needs_override() {
        let g = Group::new(GroupKind::Free2);
        assert!(matches!(
            verify_group::<f64>(&g, 1, 1),
            Err(crate::error::Error::OutOfHypothesis(_))
        ));
    }
}
