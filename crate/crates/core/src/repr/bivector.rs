use std::sync::Arc;

use crate::algebra::{CdMatrix, Extent};
use crate::error::{Error, Result};
use crate::group::{Ball, Group};
use crate::scalar::{czero, Complex, Real};

/// Values `xi(x, z)` for `x, z` in a ball, with a mask of certified pairs.
#[derive(Clone, Debug)]
pub struct BiVectorSection<T> {
    ball: Arc<Ball>,
    values: Vec<Complex<T>>,
    certified: Vec<bool>,
}

impl<T: Real> BiVectorSection<T> {
    /// Fully certified section built from `f(x index, z index)`.
    pub fn from_fn(ball: &Arc<Ball>, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let n = ball.len();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        BiVectorSection {
            ball: ball.clone(),
            values,
            certified: vec![true; n * n],
        }
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    #[inline]
    pub fn get(&self, x: usize, z: usize) -> Complex<T> {
        self.values[x * self.ball.len() + z]
    }

    #[inline]
    pub fn is_certified(&self, x: usize, z: usize) -> bool {
        self.certified[x * self.ball.len() + z]
    }

    pub fn certified_count(&self) -> usize {
        self.certified.iter().filter(|&&b| b).count()
    }

    fn empty_like(&self) -> Self {
        let n = self.ball.len();
        BiVectorSection {
            ball: self.ball.clone(),
            values: vec![czero(); n * n],
            certified: vec![true; n * n],
        }
    }
}

fn check(group: &Group, ball: &Ball) -> Result<()> {
    if group.kind() != ball.kind() {
        return Err(Error::GroupMismatch {
            left: group.kind().to_string(),
            right: ball.kind().to_string(),
        });
    }
    Ok(())
}

/// Value of `m_w` at `u`, or `None` when it is not known.
fn diag_value<T: Real>(f: &CdMatrix<T>, m: &[Complex<T>], u: &crate::Element) -> Option<Complex<T>> {
    match f.columns().position(u) {
        Some(p) => Some(m[p]),
        None if f.extent() == Extent::Exact => Some(czero()),
        None => None,
    }
}

/// `lambda^D(f) xi (x, z) = sum_w m_w(w^-1 x z) xi(w^-1 x, z)`.
pub fn lambda_d_apply<T: Real>(f: &CdMatrix<T>, xi: &BiVectorSection<T>) -> Result<BiVectorSection<T>> {
    let g = f.group();
    let ball = xi.ball();
    check(g, ball)?;
    let mut out = xi.empty_like();
    let n = ball.len();
    for (w, _, m) in f.diagonals() {
        let winv = g.inv(w);
        for xi_ in 0..n {
            let y = g.mul(&winv, ball.element(xi_));
            let py = ball.position(&y);
            for zi in 0..n {
                let idx = xi_ * n + zi;
                let Some(py) = py else {
                    out.certified[idx] = false;
                    continue;
                };
                let u = g.mul(&y, ball.element(zi));
                match diag_value(f, m, &u) {
                    Some(v) => {
                        out.values[idx] += v * xi.get(py, zi);
                        out.certified[idx] &= xi.is_certified(py, zi);
                    }
                    None => out.certified[idx] = false,
                }
            }
        }
    }
    Ok(out)
}

/// `R^w(f) xi (x, z) = sum_w m_w(w^-1 x) xi(w^-1 x, z)`, the right regular action on each fibre.
pub fn r_omega_apply<T: Real>(f: &CdMatrix<T>, xi: &BiVectorSection<T>) -> Result<BiVectorSection<T>> {
    let g = f.group();
    let ball = xi.ball();
    check(g, ball)?;
    let mut out = xi.empty_like();
    let n = ball.len();
    for (w, _, m) in f.diagonals() {
        let winv = g.inv(w);
        for xi_ in 0..n {
            let y = g.mul(&winv, ball.element(xi_));
            let py = ball.position(&y);
            let v = diag_value(f, m, &y);
            for zi in 0..n {
                let idx = xi_ * n + zi;
                match (py, v) {
                    (Some(py), Some(v)) => {
                        out.values[idx] += v * xi.get(py, zi);
                        out.certified[idx] &= xi.is_certified(py, zi);
                    }
                    _ => out.certified[idx] = false,
                }
            }
        }
    }
    Ok(out)
}

fn shear<T: Real>(group: &Group, xi: &BiVectorSection<T>, inverse: bool) -> Result<BiVectorSection<T>> {
    let ball = xi.ball();
    check(group, ball)?;
    let mut out = xi.empty_like();
    let n = ball.len();
    for zi in 0..n {
        let z = if inverse {
            group.inv(ball.element(zi))
        } else {
            ball.element(zi).clone()
        };
        for xi_ in 0..n {
            let idx = xi_ * n + zi;
            match ball.position(&group.mul(ball.element(xi_), &z)) {
                Some(p) => {
                    out.values[idx] = xi.get(p, zi);
                    out.certified[idx] = xi.is_certified(p, zi);
                }
                None => out.certified[idx] = false,
            }
        }
    }
    Ok(out)
}

/// `S xi (x, z) = xi(x z, z)`.
pub fn shear_s<T: Real>(group: &Group, xi: &BiVectorSection<T>) -> Result<BiVectorSection<T>> {
    shear(group, xi, false)
}

/// `S^-1 xi (x, z) = xi(x z^-1, z)`.
pub fn shear_s_inv<T: Real>(group: &Group, xi: &BiVectorSection<T>) -> Result<BiVectorSection<T>> {
    shear(group, xi, true)
}

#[derive(Debug, Clone, Copy)]
pub struct IntertwiningCheck<T> {
    pub max_diff: T,
    pub certified_pairs: usize,
}

/// Compares `lambda^D(f) S xi` with `S R^w(f) xi` on pairs certified for both.
pub fn check_intertwining<T: Real>(f: &CdMatrix<T>, xi: &BiVectorSection<T>) -> Result<IntertwiningCheck<T>> {
    let g = f.group();
    let lhs = lambda_d_apply(f, &shear_s(g, xi)?)?;
    let rhs = shear_s(g, &r_omega_apply(f, xi)?)?;
    let n = xi.ball().len();
    let mut d = T::zero();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if lhs.is_certified(i, j) && rhs.is_certified(i, j) {
                count += 1;
                d = d.max((lhs.get(i, j) - rhs.get(i, j)).norm());
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(IntertwiningCheck {
        max_diff: d,
        certified_pairs: count,
    })
}
