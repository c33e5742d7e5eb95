use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dense::{DenseSection, VectorSection};
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::group::{Ball, Canon, Element, Group};
use crate::scalar::{czero, Complex, Real};
use crate::weight::Weight;

/// What is known about the values outside the stored column ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extent {
    /// Every diagonal vanishes outside the column ball.
    Exact,
    /// Values outside the column ball are unknown.
    Window,
}

/// A convolution-dominated matrix stored by its diagonals.
///
/// The diagonal indexed by `z` holds `m_z(y) = A(zy, y)` for `y` in the column
/// ball `B_N`, in canonical order. Diagonals are kept in canonical order of `z`.
#[derive(Clone, Debug)]
pub struct CdMatrix<T> {
    group: Arc<Group>,
    columns: Arc<Ball>,
    extent: Extent,
    diagonals: BTreeMap<Canon, Vec<Complex<T>>>,
}

/// Result of applying a matrix to a vector section.
#[derive(Clone, Debug)]
pub struct Applied<T> {
    pub values: VectorSection<T>,
    /// Rows whose full sum was captured inside the section.
    pub certified: Vec<bool>,
}

fn is_zero<T: Real>(c: &Complex<T>) -> bool {
    c.re == T::zero() && c.im == T::zero()
}

impl<T: Real> CdMatrix<T> {
    pub fn zero(group: &Arc<Group>, column_radius: usize, extent: Extent) -> Result<Self> {
        Ok(CdMatrix {
            group: group.clone(),
            columns: group.ball(column_radius)?,
            extent,
            diagonals: BTreeMap::new(),
        })
    }

    pub fn identity(group: &Arc<Group>, column_radius: usize) -> Result<Self> {
        Self::shift(group, &group.identity(), column_radius)
    }

    /// Left translation `lambda(z)`, a single constant diagonal.
    pub fn shift(group: &Arc<Group>, z: &Element, column_radius: usize) -> Result<Self> {
        let mut a = Self::zero(group, column_radius, Extent::Window)?;
        let n = a.columns.len();
        a.insert_diagonal(z, vec![Complex::new(T::one(), T::zero()); n])?;
        Ok(a)
    }

    /// Builds `m_z(y) = f(z, y)` for `z` in `B_K` and `y` in `B_N`.
    pub fn from_fn(
        group: &Arc<Group>,
        diagonal_radius: usize,
        column_radius: usize,
        extent: Extent,
        mut f: impl FnMut(&Element, &Element) -> Complex<T>,
    ) -> Result<Self> {
        let mut a = Self::zero(group, column_radius, extent)?;
        let zs = group.ball(diagonal_radius)?;
        for z in zs.elements() {
            let v: Vec<Complex<T>> = a.columns.elements().iter().map(|y| f(z, y)).collect();
            if v.iter().any(|c| !is_zero(c)) {
                a.insert_diagonal(z, v)?;
            }
        }
        Ok(a)
    }

    fn key(&self, z: &Element) -> Result<Canon> {
        self.group.kind().validate(z)?;
        let limit = self.group.max_radius();
        let c = self.group.canon(z).map_err(|_| Error::Truncation {
            needed: limit + 1,
            limit,
        })?;
        if c.len as usize > limit {
            return Err(Error::Truncation {
                needed: c.len as usize,
                limit,
            });
        }
        Ok(c)
    }

    /// Replaces the diagonal `z`. `values` is indexed by the column ball.
    pub fn insert_diagonal(&mut self, z: &Element, values: Vec<Complex<T>>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::Usage(format!(
                "diagonal of length {} for a column ball of size {}",
                values.len(),
                self.columns.len()
            )));
        }
        let k = self.key(z)?;
        self.diagonals.insert(k, values);
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn columns(&self) -> &Arc<Ball> {
        &self.columns
    }

    pub fn column_radius(&self) -> usize {
        self.columns.radius()
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    /// Radius up to which columns are known exactly; unbounded for exact objects.
    pub fn certified_column_radius(&self) -> Option<usize> {
        match self.extent {
            Extent::Exact => None,
            Extent::Window => Some(self.column_radius()),
        }
    }

    /// Largest word length among stored diagonals.
    pub fn diagonal_radius(&self) -> usize {
        self.diagonals.keys().map(|k| k.len as usize).max().unwrap_or(0)
    }

    pub fn num_diagonals(&self) -> usize {
        self.diagonals.len()
    }

    pub fn diagonal(&self, z: &Element) -> Option<&[Complex<T>]> {
        let k = self.group.canon(z).ok()?;
        self.diagonals.get(&k).map(Vec::as_slice)
    }

    /// `(z, |z|, m_z)` in canonical order.
    pub fn diagonals(&self) -> impl Iterator<Item = (&Element, usize, &[Complex<T>])> + '_ {
        self.diagonals
            .iter()
            .map(|(k, v)| (&k.elem, k.len as usize, v.as_slice()))
    }

    /// `m_z(y)`, zero when the diagonal is absent or `y` lies outside the columns.
    pub fn entry(&self, z: &Element, y: &Element) -> Complex<T> {
        match (self.diagonal(z), self.columns.position(y)) {
            (Some(d), Some(p)) => d[p],
            _ => czero(),
        }
    }

    /// Values of the diagonal `k` on the first `len` columns, zero filled for exact objects.
    fn padded(&self, k: &Canon, len: usize) -> Vec<Complex<T>> {
        let mut v = vec![czero(); len];
        if let Some(d) = self.diagonals.get(k) {
            let m = len.min(d.len());
            v[..m].copy_from_slice(&d[..m]);
        }
        v
    }

    /// Column radius and extent of the region known for both operands.
    fn common_region(&self, other: &CdMatrix<T>) -> (usize, Extent) {
        match (self.extent, other.extent) {
            (Extent::Exact, Extent::Exact) => {
                (self.column_radius().max(other.column_radius()), Extent::Exact)
            }
            (Extent::Window, Extent::Window) => {
                (self.column_radius().min(other.column_radius()), Extent::Window)
            }
            (Extent::Window, Extent::Exact) => (self.column_radius(), Extent::Window),
            (Extent::Exact, Extent::Window) => (other.column_radius(), Extent::Window),
        }
    }

    /// `self + alpha * other` on the common known region.
    pub fn add_scaled(&self, other: &CdMatrix<T>, alpha: Complex<T>) -> Result<CdMatrix<T>> {
        self.group.check_same(&other.group)?;
        let (n, extent) = self.common_region(other);
        let columns = self.group.ball(n)?;
        let len = columns.len();
        let mut diagonals = BTreeMap::new();
        let keys: std::collections::BTreeSet<&Canon> =
            self.diagonals.keys().chain(other.diagonals.keys()).collect();
        for k in keys {
            let mut v = self.padded(k, len);
            for (a, b) in v.iter_mut().zip(other.padded(k, len)) {
                *a += alpha * b;
            }
            if v.iter().any(|c| !is_zero(c)) {
                diagonals.insert(k.clone(), v);
            }
        }
        Ok(CdMatrix {
            group: self.group.clone(),
            columns,
            extent,
            diagonals,
        })
    }

    pub fn add(&self, other: &CdMatrix<T>) -> Result<CdMatrix<T>> {
        self.add_scaled(other, Complex::new(T::one(), T::zero()))
    }

    pub fn sub(&self, other: &CdMatrix<T>) -> Result<CdMatrix<T>> {
        self.add_scaled(other, Complex::new(-T::one(), T::zero()))
    }

    pub fn scale(&self, alpha: Complex<T>) -> CdMatrix<T> {
        let mut out = self.clone();
        for v in out.diagonals.values_mut() {
            for c in v.iter_mut() {
                *c *= alpha;
            }
        }
        out
    }

    /// Keeps columns `|y| <= r`. Exact objects can also be padded with zeros.
    pub fn restrict_columns(&self, r: usize) -> Result<CdMatrix<T>> {
        let n = self.column_radius();
        if r > n && self.extent == Extent::Window {
            return Err(Error::Truncation { needed: r, limit: n });
        }
        let columns = self.group.ball(r)?;
        let len = columns.len();
        let extent = if r < n { Extent::Window } else { self.extent };
        let diagonals = self
            .diagonals
            .keys()
            .map(|k| (k.clone(), self.padded(k, len)))
            .collect();
        Ok(CdMatrix {
            group: self.group.clone(),
            columns,
            extent,
            diagonals,
        })
    }

    /// Twisted convolution `self * f`, the diagonal form of the operator product.
    ///
    /// `l_v(y) = sum_w n_{v w^-1}(w y) m_w(y)` where `n` are the diagonals of
    /// `self` and `m` those of `f`.
    pub fn compose(&self, f: &CdMatrix<T>) -> Result<CdMatrix<T>> {
        let h = self;
        h.group.check_same(&f.group)?;
        let g = &h.group;
        let kf = f.diagonal_radius();
        let nf = f.column_radius();
        let (n_out, extent) = match h.extent {
            Extent::Exact => (nf, f.extent),
            Extent::Window => {
                let nh = h.column_radius();
                if nh < kf {
                    return Err(Error::Truncation { needed: kf, limit: nh });
                }
                (nf.min(nh - kf), Extent::Window)
            }
        };
        let columns = g.ball(n_out)?;
        let len = columns.len();
        let limit = g.max_radius();
        let overflow = || Error::Truncation {
            needed: h.diagonal_radius() + kf,
            limit,
        };
        let mut out: BTreeMap<Canon, Vec<Complex<T>>> = BTreeMap::new();
        let mut pos: Vec<Option<u32>> = vec![None; len];
        for (kw, m_w) in &f.diagonals {
            for (j, p) in pos.iter_mut().enumerate() {
                *p = h
                    .columns
                    .position(&g.mul(&kw.elem, columns.element(j)))
                    .map(|p| p as u32);
            }
            for (ku, n_u) in &h.diagonals {
                let v = g.mul(&ku.elem, &kw.elem);
                let key = g.canon(&v).map_err(|_| overflow())?;
                if key.len as usize > limit {
                    return Err(overflow());
                }
                let acc = out.entry(key).or_insert_with(|| vec![czero(); len]);
                for j in 0..len {
                    let m = m_w[j];
                    if is_zero(&m) {
                        continue;
                    }
                    if let Some(p) = pos[j] {
                        acc[j] += n_u[p as usize] * m;
                    }
                }
            }
        }
        out.retain(|_, v| v.iter().any(|c| !is_zero(c)));
        Ok(CdMatrix {
            group: g.clone(),
            columns,
            extent,
            diagonals: out,
        })
    }

    /// `f^(k)` by repeated squaring; `k = 0` gives the identity window.
    pub fn star_power(&self, k: u32) -> Result<CdMatrix<T>> {
        if k == 0 {
            return Self::identity(&self.group, self.column_radius());
        }
        let needed = self.diagonal_radius() * k as usize;
        if needed > self.group.max_radius() {
            return Err(Error::Truncation {
                needed,
                limit: self.group.max_radius(),
            });
        }
        let mut acc: Option<CdMatrix<T>> = None;
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.compose(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.compose(&base)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// Involution `f*`, the diagonal form of the Hilbert space adjoint.
    ///
    /// The diagonal `v` becomes the diagonal `v^-1` with values `conj(m_v(v^-1 y))`.
    pub fn adjoint(&self) -> Result<CdMatrix<T>> {
        let g = &self.group;
        let k = self.diagonal_radius();
        let n = self.column_radius();
        let n_out = match self.extent {
            Extent::Exact => {
                let r = n + k;
                if r > g.max_radius() {
                    return Err(Error::Truncation {
                        needed: r,
                        limit: g.max_radius(),
                    });
                }
                r
            }
            Extent::Window => n.checked_sub(k).ok_or(Error::Truncation { needed: k, limit: n })?,
        };
        let columns = g.ball(n_out)?;
        let mut diagonals = BTreeMap::new();
        for (kv, m) in &self.diagonals {
            let vinv = g.inv(&kv.elem);
            let vals: Vec<Complex<T>> = columns
                .elements()
                .iter()
                .map(|y| match self.columns.position(&g.mul(&vinv, y)) {
                    Some(p) => m[p].conj(),
                    None => czero(),
                })
                .collect();
            diagonals.insert(
                Canon {
                    len: kv.len,
                    elem: vinv,
                },
                vals,
            );
        }
        let out = CdMatrix {
            group: g.clone(),
            columns,
            extent: self.extent,
            diagonals,
        };
        Ok(match self.extent {
            Extent::Exact => out.trimmed()?,
            Extent::Window => out,
        })
    }

    /// Shrinks the column ball of an exact object to its support.
    fn trimmed(self) -> Result<CdMatrix<T>> {
        let mut r = 0;
        for v in self.diagonals.values() {
            if let Some(j) = v.iter().rposition(|c| !is_zero(c)) {
                r = r.max(self.columns.length(j));
            }
        }
        if r == self.column_radius() {
            return Ok(self);
        }
        let columns = self.group.ball(r)?;
        let len = columns.len();
        let diagonals = self
            .diagonals
            .into_iter()
            .map(|(k, mut v)| {
                v.truncate(len);
                (k, v)
            })
            .collect();
        Ok(CdMatrix {
            group: self.group,
            columns,
            extent: self.extent,
            diagonals,
        })
    }

    /// `sum_z sup_y |m_z(y)|` over the stored columns.
    pub fn cd_norm(&self) -> T {
        self.diagonals
            .values()
            .map(|v| v.iter().fold(T::zero(), |m, c| m.max(c.norm())))
            .sum()
    }

    pub fn cd_norm_weighted(&self, w: &Weight) -> Result<T> {
        let mut s = T::zero();
        for (k, v) in &self.diagonals {
            let sup = v.iter().fold(T::zero(), |m, c| m.max(c.norm()));
            s += sup * T::cast(w.eval(&self.group, &k.elem)?);
        }
        Ok(s)
    }

    /// Dominating envelope `a(z) = sup_y |m_z(y)|`.
    pub fn envelope(&self) -> Result<Envelope<T>> {
        let mut e = Envelope::new(&self.group);
        for (k, v) in &self.diagonals {
            let sup = v.iter().fold(T::zero(), |m, c| m.max(c.norm()));
            if sup > T::zero() {
                e.raise_canon(k.clone(), sup);
            }
        }
        Ok(e)
    }

    /// Dense matrix of the operator restricted to `ball x ball`.
    pub fn to_dense(&self, ball: &Arc<Ball>) -> Result<DenseSection<T>> {
        if self.extent == Extent::Window && ball.radius() > self.column_radius() {
            return Err(Error::Truncation {
                needed: ball.radius(),
                limit: self.column_radius(),
            });
        }
        let mut d = DenseSection::zeros(&self.group, ball)?;
        let cols = ball.len().min(self.columns.len());
        for (k, v) in &self.diagonals {
            for (j, m) in v.iter().enumerate().take(cols) {
                if is_zero(m) {
                    continue;
                }
                if let Some(i) = ball.position(&self.group.mul(&k.elem, ball.element(j))) {
                    d.set(i, j, *m);
                }
            }
        }
        Ok(d)
    }

    /// Reads the diagonals off a dense section: `m_z(y) = M(zy, y)`.
    pub fn from_dense(dense: &DenseSection<T>) -> Result<CdMatrix<T>> {
        let group = dense.group();
        let ball = dense.ball();
        let mut a = Self::zero(group, ball.radius(), Extent::Window)?;
        let n = ball.len();
        for j in 0..n {
            let yinv = group.inv(ball.element(j));
            for i in 0..n {
                let v = dense.get(i, j);
                if is_zero(&v) {
                    continue;
                }
                let z = group.mul(ball.element(i), &yinv);
                let key = a.key(&z)?;
                a.diagonals.entry(key).or_insert_with(|| vec![czero(); n])[j] = v;
            }
        }
        Ok(a)
    }

    /// `(A c)(x) = sum_z m_z(z^-1 x) c(z^-1 x)` on the ball of `c`.
    pub fn apply(&self, c: &VectorSection<T>) -> Result<Applied<T>> {
        let ball = c.ball();
        if ball.kind() != self.group.kind() {
            return Err(Error::GroupMismatch {
                left: self.group.kind().to_string(),
                right: ball.kind().to_string(),
            });
        }
        let mut out = VectorSection::zeros(ball);
        let cols = ball.len().min(self.columns.len());
        let known = match self.extent {
            Extent::Exact => usize::MAX,
            Extent::Window => self.columns.len(),
        };
        let mut certified = vec![true; ball.len()];
        for (k, m) in &self.diagonals {
            let zinv = self.group.inv(&k.elem);
            for (x, cert) in ball.elements().iter().zip(certified.iter_mut()) {
                match ball.position(&self.group.mul(&zinv, x)) {
                    Some(p) if p < known => {}
                    _ => *cert = false,
                }
            }
            for j in 0..cols {
                let v = m[j] * c.values()[j];
                if is_zero(&v) {
                    continue;
                }
                if let Some(i) = ball.position(&self.group.mul(&k.elem, ball.element(j))) {
                    out.values_mut()[i] += v;
                }
            }
        }
        Ok(Applied {
            values: out,
            certified,
        })
    }

    /// Largest entry difference on the region known for both objects.
    pub fn max_abs_diff(&self, other: &CdMatrix<T>) -> Result<T> {
        self.group.check_same(&other.group)?;
        let (n, _) = self.common_region(other);
        let len = self.group.ball(n)?.len();
        let keys: std::collections::BTreeSet<&Canon> =
            self.diagonals.keys().chain(other.diagonals.keys()).collect();
        let mut d = T::zero();
        for k in keys {
            for (a, b) in self.padded(k, len).into_iter().zip(other.padded(k, len)) {
                d = d.max((a - b).norm());
            }
        }
        Ok(d)
    }

    /// Same object up to `tol`: same extent, same window, equal values.
    pub fn approx_eq(&self, other: &CdMatrix<T>, tol: T) -> bool {
        if self.group.kind() != other.group.kind() || self.extent != other.extent {
            return false;
        }
        if self.extent == Extent::Window && self.column_radius() != other.column_radius() {
            return false;
        }
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }
}

impl<T: Real> PartialEq for CdMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, T::zero())
    }
}
