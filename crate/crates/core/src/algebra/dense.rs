use std::io::Write;
use std::sync::Arc;

use super::lu::Lu;
use super::region::CertifiedRegion;
use crate::error::{Error, Result};
use crate::group::{Ball, Group};
use crate::io::fmt17;
use crate::scalar::{czero, Complex, Real};

/// Square matrix indexed by a ball in canonical order, stored row-major.
#[derive(Clone, Debug)]
pub struct DenseSection<T> {
    group: Arc<Group>,
    ball: Arc<Ball>,
    data: Vec<Complex<T>>,
    hermitian: bool,
}

impl<T: Real> DenseSection<T> {
    pub fn zeros(group: &Arc<Group>, ball: &Arc<Ball>) -> Result<Self> {
        if ball.kind() != group.kind() {
            return Err(Error::GroupMismatch {
                left: group.kind().to_string(),
                right: ball.kind().to_string(),
            });
        }
        let n = ball.len();
        Ok(DenseSection {
            group: group.clone(),
            ball: ball.clone(),
            data: vec![czero(); n * n],
            hermitian: false,
        })
    }

    pub fn from_fn(
        group: &Arc<Group>,
        ball: &Arc<Ball>,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Result<Self> {
        let mut d = Self::zeros(group, ball)?;
        let n = d.n();
        for i in 0..n {
            for j in 0..n {
                d.data[i * n + j] = f(i, j);
            }
        }
        Ok(d)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn n(&self) -> usize {
        self.ball.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        let n = self.n();
        self.data[i * n + j] = v;
        self.hermitian = false;
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_hermitian_within(&self, tol: T) -> bool {
        let n = self.n();
        (0..n).all(|i| (i..n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Sets the Hermitian flag after checking the entries.
    pub fn mark_hermitian(&mut self, tol: T) -> Result<()> {
        if !self.is_hermitian_within(tol) {
            return Err(Error::Usage("section is not Hermitian".into()));
        }
        self.hermitian = true;
        Ok(())
    }

    fn check_same(&self, other: &DenseSection<T>) -> Result<()> {
        self.group.check_same(&other.group)?;
        if self.ball.radius() != other.ball.radius() {
            return Err(Error::Usage(format!(
                "sections on balls of radius {} and {}",
                self.ball.radius(),
                other.ball.radius()
            )));
        }
        Ok(())
    }

    /// Matrix product. Zero entries of the left factor are skipped.
    pub fn matmul(&self, other: &DenseSection<T>) -> Result<DenseSection<T>> {
        self.check_same(other)?;
        let n = self.n();
        let mut out = vec![czero(); n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * *b;
                }
            }
        }
        Ok(DenseSection {
            group: self.group.clone(),
            ball: self.ball.clone(),
            data: out,
            hermitian: false,
        })
    }

    pub fn adjoint(&self) -> DenseSection<T> {
        let n = self.n();
        let mut out = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j].conj();
            }
        }
        DenseSection {
            group: self.group.clone(),
            ball: self.ball.clone(),
            data: out,
            hermitian: self.hermitian,
        }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    pub fn apply_adjoint(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n();
        assert_eq!(v.len(), n);
        let mut out = vec![czero(); n];
        for (i, vi) in v.iter().enumerate() {
            if vi.re == T::zero() && vi.im == T::zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&self.data[i * n..(i + 1) * n]) {
                *o += a.conj() * *vi;
            }
        }
        out
    }

    /// Largest column sum, the operator norm on `l1`.
    pub fn norm_1(&self) -> T {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Largest row sum, the operator norm on `l_inf`.
    pub fn norm_inf(&self) -> T {
        let n = self.n();
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().map(|c| c.norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Largest entry difference over the certified pairs.
    pub fn max_abs_diff_on(&self, other: &DenseSection<T>, region: &CertifiedRegion) -> Result<T> {
        self.check_same(other)?;
        let n = self.n();
        if region.rows() != n || region.cols() != n {
            return Err(Error::Usage("region shape does not match the section".into()));
        }
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut d = T::zero();
        for i in 0..n {
            for j in 0..n {
                if region.contains(i, j) {
                    d = d.max((self.data[i * n + j] - other.data[i * n + j]).norm());
                }
            }
        }
        Ok(d)
    }

    /// Inverse by LU with partial pivoting. Pivots below `rel_tol` times the
    /// largest entry modulus are reported as a singular section.
    pub fn inverse(&self, rel_tol: T) -> Result<DenseSection<T>> {
        let lu = Lu::factor(self.n(), &self.data, rel_tol).map_err(|p| Error::SingularSection {
            radius: self.ball.radius(),
            pivot: p.pivot.as_f64(),
            scale: p.scale.as_f64(),
        })?;
        Ok(DenseSection {
            group: self.group.clone(),
            ball: self.ball.clone(),
            data: lu.inverse(),
            hermitian: self.hermitian,
        })
    }

    /// Writes nonzero entries as `x,y,re,im` rows in row-major order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "y", "re", "im"])?;
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let v = self.data[i * n + j];
                if v.re != T::zero() || v.im != T::zero() {
                    wr.write_record([
                        self.ball.element(i).to_string(),
                        self.ball.element(j).to_string(),
                        fmt17(v.re.as_f64()),
                        fmt17(v.im.as_f64()),
                    ])?;
                }
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Writes the ball manifest `index,element,length`.
    pub fn write_manifest<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["index", "element", "length"])?;
        for (i, g) in self.ball.elements().iter().enumerate() {
            wr.write_record([i.to_string(), g.to_string(), self.ball.length(i).to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Finitely supported vector on a ball.
#[derive(Clone, Debug)]
pub struct VectorSection<T> {
    ball: Arc<Ball>,
    values: Vec<Complex<T>>,
}

impl<T: Real> VectorSection<T> {
    pub fn new(ball: &Arc<Ball>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != ball.len() {
            return Err(Error::Usage(format!(
                "vector of length {} on a ball of size {}",
                values.len(),
                ball.len()
            )));
        }
        Ok(VectorSection {
            ball: ball.clone(),
            values,
        })
    }

    pub fn zeros(ball: &Arc<Ball>) -> Self {
        VectorSection {
            ball: ball.clone(),
            values: vec![czero(); ball.len()],
        }
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn norm_1(&self) -> T {
        self.values.iter().map(|c| c.norm()).sum()
    }

    pub fn norm_2(&self) -> T {
        self.values.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn norm_inf(&self) -> T {
        self.values.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}
