use serde::Serialize;

use crate::algebra::{CdMatrix, Extent};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct NeumannInverse<T> {
    /// `I + f + ... + f^(K)` on columns `B_r`.
    pub inverse: CdMatrix<T>,
    pub summary: NeumannSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct NeumannSummary {
    pub norm: f64,
    pub terms: usize,
    /// `q^(K+1) / (1 - q)`, a bound on the CD norm of the dropped tail.
    pub tail_bound: f64,
    pub column_radius: usize,
}

/// Smallest `K` with `q^(K+1) / (1 - q) <= tol`.
pub fn terms_needed(q: f64, tol: f64) -> usize {
    let mut k = 0usize;
    let mut p = q;
    while p / (1.0 - q) > tol && k < 1_000_000 {
        p *= q;
        k += 1;
    }
    k
}

/// Inverse of `I - f` by the Neumann series, for `||f||_1 < 1`.
///
/// Windowed inputs lose `K_f` columns per term; the result is exact on the
/// returned column ball. `max_terms` caps the series, and the reported tail
/// bound reflects the cap.
pub fn neumann_inverse<T: Real>(f: &CdMatrix<T>, tol: f64, max_terms: usize) -> Result<NeumannInverse<T>> {
    let q = f.cd_norm().as_f64();
    if q >= 1.0 {
        return Err(Error::NotContractive { norm: q });
    }
    let terms = terms_needed(q, tol).min(max_terms);
    let kf = f.diagonal_radius();
    let nf = f.column_radius();
    let r = match f.extent() {
        Extent::Exact => nf,
        Extent::Window => {
            let shrink = terms.saturating_sub(1) * kf;
            nf.checked_sub(shrink).ok_or(Error::Truncation { needed: shrink, limit: nf })?
        }
    };
    let reach = terms * kf;
    if reach > f.group().max_radius() {
        return Err(Error::Truncation {
            needed: reach,
            limit: f.group().max_radius(),
        });
    }
    let mut sum = CdMatrix::identity(f.group(), r)?;
    if terms > 0 {
        let mut power = f.restrict_columns(r)?;
        sum = sum.add(&power)?;
        for _ in 2..=terms {
            power = f.compose(&power)?;
            sum = sum.add(&power)?;
        }
    }
    Ok(NeumannInverse {
        inverse: sum,
        summary: NeumannSummary {
            norm: q,
            terms,
            tail_bound: q.powi(terms as i32 + 1) / (1.0 - q),
            column_radius: r,
        },
    })
}
