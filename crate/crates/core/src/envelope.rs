//! Finitely supported nonnegative functions on the group.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Canon, Element, Group};
use crate::io::fmt17;
use crate::scalar::Real;
use crate::weight::Weight;

/// A dominating envelope `a: G -> [0, inf)` with finite support, kept in canonical order.
#[derive(Clone, Debug)]
pub struct Envelope<T> {
    group: Arc<Group>,
    values: BTreeMap<Canon, T>,
}

impl<T: Real> Envelope<T> {
    pub fn new(group: &Arc<Group>) -> Self {
        Envelope {
            group: group.clone(),
            values: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I>(group: &Arc<Group>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, T)>,
    {
        let mut e = Self::new(group);
        for (g, v) in pairs {
            let key = e.key(&g)?;
            if e.values.contains_key(&key) {
                return Err(Error::Usage(format!("duplicate envelope entry at {g}")));
            }
            e.check_value(&g, v)?;
            e.values.insert(key, v);
        }
        Ok(e)
    }

    fn key(&self, g: &Element) -> Result<Canon> {
        self.group.kind().validate(g)?;
        let c = self.group.canon(g)?;
        let limit = self.group.max_radius();
        if c.len as usize > limit {
            return Err(Error::Truncation {
                needed: c.len as usize,
                limit,
            });
        }
        Ok(c)
    }

    fn check_value(&self, g: &Element, v: T) -> Result<()> {
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::Usage(format!("envelope value {v} at {g} must be finite and >= 0")));
        }
        Ok(())
    }

    pub fn insert(&mut self, g: &Element, v: T) -> Result<()> {
        self.check_value(g, v)?;
        let key = self.key(g)?;
        self.values.insert(key, v);
        Ok(())
    }

    /// Raises the value at `g` to at least `v`.
    pub fn raise(&mut self, g: &Element, v: T) -> Result<()> {
        self.check_value(g, v)?;
        let key = self.key(g)?;
        let slot = self.values.entry(key).or_insert(T::zero());
        if v > *slot {
            *slot = v;
        }
        Ok(())
    }

    pub(crate) fn raise_canon(&mut self, key: Canon, v: T) {
        let slot = self.values.entry(key).or_insert(T::zero());
        if v > *slot {
            *slot = v;
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn get(&self, g: &Element) -> T {
        match self.group.canon(g) {
            Ok(k) => self.values.get(&k).copied().unwrap_or(T::zero()),
            Err(_) => T::zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in canonical order as `(element, word length, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, usize, T)> + '_ {
        self.values.iter().map(|(k, v)| (&k.elem, k.len as usize, *v))
    }

    pub fn support_radius(&self) -> usize {
        self.values
            .iter()
            .filter(|(_, v)| **v > T::zero())
            .map(|(k, _)| k.len as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn l1_norm(&self) -> T {
        self.values.values().copied().sum()
    }

    pub fn weighted_norm(&self, w: &Weight) -> Result<T> {
        let mut s = T::zero();
        for (k, v) in &self.values {
            s += *v * T::cast(w.eval(&self.group, &k.elem)?);
        }
        Ok(s)
    }

    pub fn sup(&self) -> T {
        self.values.values().fold(T::zero(), |a, &b| a.max(b))
    }

    /// `(a * b)(x) = sum_y a(x y^-1) b(y)`.
    pub fn convolve(&self, other: &Envelope<T>) -> Result<Envelope<T>> {
        self.group.check_same(&other.group)?;
        let mut acc: BTreeMap<Canon, T> = BTreeMap::new();
        for (ky, vb) in &other.values {
            for (ku, va) in &self.values {
                let x = self.group.mul(&ku.elem, &ky.elem);
                let key = match self.group.canon(&x) {
                    Ok(k) => k,
                    Err(_) => {
                        return Err(Error::Truncation {
                            needed: (ku.len + ky.len) as usize,
                            limit: self.group.max_radius(),
                        })
                    }
                };
                if key.len as usize > self.group.max_radius() {
                    return Err(Error::Truncation {
                        needed: key.len as usize,
                        limit: self.group.max_radius(),
                    });
                }
                *acc.entry(key).or_insert(T::zero()) += *va * *vb;
            }
        }
        Ok(Envelope {
            group: self.group.clone(),
            values: acc,
        })
    }

    /// `b_k = sum_{|z| = k} a(z)` for `k = 0..=support radius`.
    pub fn sphere_sums(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.support_radius() + 1];
        for (k, v) in &self.values {
            if let Some(s) = out.get_mut(k.len as usize) {
                *s += *v;
            }
        }
        out
    }

    /// Weighted sphere sums `sum_{|z| = k} a(z) w(z)`.
    pub fn weighted_sphere_sums(&self, w: &Weight) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.support_radius() + 1];
        for (k, v) in &self.values {
            if let Some(s) = out.get_mut(k.len as usize) {
                *s += *v * T::cast(w.eval(&self.group, &k.elem)?);
            }
        }
        Ok(out)
    }

    /// Values restricted to `|z| <= r`.
    pub fn restrict(&self, r: usize) -> Envelope<T> {
        Envelope {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .filter(|(k, _)| k.len as usize <= r)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Pointwise sup distance over the union of supports.
    pub fn max_abs_diff(&self, other: &Envelope<T>) -> T {
        let mut d = T::zero();
        for (k, v) in &self.values {
            let w = other.values.get(k).copied().unwrap_or(T::zero());
            d = d.max((*v - w).abs());
        }
        for (k, w) in &other.values {
            if !self.values.contains_key(k) {
                d = d.max(w.abs());
            }
        }
        d
    }

    /// Weighted sup distance `max_z w(z) |a(z) - b(z)|`.
    pub fn weighted_max_abs_diff(&self, other: &Envelope<T>, w: &Weight) -> Result<T> {
        let mut d = T::zero();
        let keys: std::collections::BTreeSet<&Canon> =
            self.values.keys().chain(other.values.keys()).collect();
        for k in keys {
            let a = self.values.get(k).copied().unwrap_or(T::zero());
            let b = other.values.get(k).copied().unwrap_or(T::zero());
            d = d.max(T::cast(w.eval(&self.group, &k.elem)?) * (a - b).abs());
        }
        Ok(d)
    }

    /// Writes `element,value` rows in canonical order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["element", "value"])?;
        for (k, v) in &self.values {
            wr.write_record([k.elem.to_string(), fmt17(v.as_f64())])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Writes `z,|z|,b_value` rows in canonical order.
    pub fn write_curve_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["z", "|z|", "b_value"])?;
        for (k, v) in &self.values {
            wr.write_record([k.elem.to_string(), k.len.to_string(), fmt17(v.as_f64())])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(group: &Arc<Group>, r: R) -> Result<Envelope<T>> {
        let mut rd = csv::Reader::from_reader(r);
        let mut pairs = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("expected 2 fields, got {}", rec.len())));
            }
            let g = group.parse_element(&rec[0])?;
            let v: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("value '{}': {e}", &rec[1])))?;
            pairs.push((g, T::cast(v)));
        }
        Self::from_pairs(group, pairs)
    }
}

impl<T: Real> PartialEq for Envelope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.group.kind() == other.group.kind() && self.values == other.values
    }
}
