//! Dense LU factorization with partial pivoting on split real/imaginary storage.

use crate::scalar::{Complex, Real};

pub(crate) struct Lu<T> {
    n: usize,
    re: Vec<T>,
    im: Vec<T>,
    perm: Vec<usize>,
}

/// Smallest pivot modulus met and the reference scale, reported on failure.
pub(crate) struct SingularPivot<T> {
    pub pivot: T,
    pub scale: T,
}

#[inline]
fn axpy<T: Real>(dst_re: &mut [T], dst_im: &mut [T], lr: T, li: T, src_re: &[T], src_im: &[T]) {
    // dst -= l * src
    for (((dr, di), &sr), &si) in dst_re.iter_mut().zip(dst_im.iter_mut()).zip(src_re).zip(src_im) {
        *dr -= lr * sr - li * si;
        *di -= lr * si + li * sr;
    }
}

impl<T: Real> Lu<T> {
    /// Factors the row-major `n x n` matrix. Fails when a pivot falls below
    /// `rel_tol` times the largest initial entry modulus.
    pub fn factor(n: usize, data: &[Complex<T>], rel_tol: T) -> Result<Lu<T>, SingularPivot<T>> {
        let mut re: Vec<T> = data.iter().map(|c| c.re).collect();
        let mut im: Vec<T> = data.iter().map(|c| c.im).collect();
        let scale = data.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        let tol = rel_tol * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = T::zero();
            for i in k..n {
                let m = re[i * n + k].hypot(im[i * n + k]);
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if !(best > tol) || scale == T::zero() {
                return Err(SingularPivot { pivot: best, scale });
            }
            if p != k {
                for j in 0..n {
                    re.swap(k * n + j, p * n + j);
                    im.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pr = re[k * n + k];
            let pi = im[k * n + k];
            let d = pr * pr + pi * pi;
            let (ir, ii) = (pr / d, -pi / d);
            let (re_top, re_rest) = re.split_at_mut((k + 1) * n);
            let (im_top, im_rest) = im.split_at_mut((k + 1) * n);
            let row_re = &re_top[k * n + k + 1..(k + 1) * n];
            let row_im = &im_top[k * n + k + 1..(k + 1) * n];
            for r in 0..n - k - 1 {
                let base = r * n;
                let (ar, ai) = (re_rest[base + k], im_rest[base + k]);
                if ar == T::zero() && ai == T::zero() {
                    continue;
                }
                let lr = ar * ir - ai * ii;
                let li = ar * ii + ai * ir;
                re_rest[base + k] = lr;
                im_rest[base + k] = li;
                axpy(
                    &mut re_rest[base + k + 1..base + n],
                    &mut im_rest[base + k + 1..base + n],
                    lr,
                    li,
                    row_re,
                    row_im,
                );
            }
        }
        Ok(Lu { n, re, im, perm })
    }

    /// Row-major inverse of the factored matrix.
    pub fn inverse(&self) -> Vec<Complex<T>> {
        let n = self.n;
        let mut br = vec![T::zero(); n * n];
        let mut bi = vec![T::zero(); n * n];
        for (i, &p) in self.perm.iter().enumerate() {
            br[i * n + p] = T::one();
        }
        // forward substitution with the unit lower factor
        for i in 1..n {
            let (top_r, rest_r) = br.split_at_mut(i * n);
            let (top_i, rest_i) = bi.split_at_mut(i * n);
            let (dst_r, dst_i) = (&mut rest_r[..n], &mut rest_i[..n]);
            for k in 0..i {
                let (lr, li) = (self.re[i * n + k], self.im[i * n + k]);
                if lr == T::zero() && li == T::zero() {
                    continue;
                }
                axpy(dst_r, dst_i, lr, li, &top_r[k * n..(k + 1) * n], &top_i[k * n..(k + 1) * n]);
            }
        }
        // back substitution with the upper factor
        for i in (0..n).rev() {
            let (top_r, rest_r) = br.split_at_mut((i + 1) * n);
            let (top_i, rest_i) = bi.split_at_mut((i + 1) * n);
            let dst_r = &mut top_r[i * n..];
            let dst_i = &mut top_i[i * n..];
            for k in i + 1..n {
                let (ur, ui) = (self.re[i * n + k], self.im[i * n + k]);
                if ur == T::zero() && ui == T::zero() {
                    continue;
                }
                let off = (k - i - 1) * n;
                axpy(dst_r, dst_i, ur, ui, &rest_r[off..off + n], &rest_i[off..off + n]);
            }
            let (pr, pi) = (self.re[i * n + i], self.im[i * n + i]);
            let d = pr * pr + pi * pi;
            let (ir, ii) = (pr / d, -pi / d);
            for (r, m) in dst_r.iter_mut().zip(dst_i.iter_mut()) {
                let (a, b) = (*r, *m);
                *r = a * ir - b * ii;
                *m = a * ii + b * ir;
            }
        }
        br.into_iter().zip(bi).map(|(r, i)| Complex::new(r, i)).collect()
    }
}
