use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{CdMatrix, Extent};
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeShape {
    /// `rate^|z|`.
    Geometric { rate: f64 },
    /// `(1 + |z|)^-s`.
    Polynomial { s: f64 },
}

impl EnvelopeShape {
    fn profile(self, len: usize) -> f64 {
        match self {
            EnvelopeShape::Geometric { rate } => rate.powi(len as i32),
            EnvelopeShape::Polynomial { s } => (1.0 + len as f64).powf(-s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseScheme {
    /// Independent phase per entry.
    Random,
    /// All entries real and positive.
    Positive,
    /// One phase per diagonal, so the matrix commutes with right translations.
    Toeplitz,
}

/// A constant diagonal added on top of the generated ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offset {
    pub element: String,
    pub value: f64,
}

/// Recipe for a reproducible test matrix `A = identity * I + F + offsets`.
///
/// `F` lives on the diagonals `1 <= |z| <= support_radius` with envelope
/// proportional to `shape(|z|)` and total mass `mass`. Every entry of `F` has
/// modulus exactly equal to its envelope value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestMatrixSpec {
    pub shape: EnvelopeShape,
    pub support_radius: usize,
    pub mass: f64,
    pub identity: f64,
    pub phases: PhaseScheme,
    pub hermitian: bool,
    #[serde(default)]
    pub offsets: Vec<Offset>,
}

impl TestMatrixSpec {
    pub fn new(shape: EnvelopeShape, support_radius: usize, mass: f64) -> Self {
        TestMatrixSpec {
            shape,
            support_radius,
            mass,
            identity: 1.0,
            phases: PhaseScheme::Random,
            hermitian: false,
            offsets: Vec::new(),
        }
    }

    pub fn with_identity(mut self, c: f64) -> Self {
        self.identity = c;
        self
    }

    pub fn with_phases(mut self, p: PhaseScheme) -> Self {
        self.phases = p;
        self
    }

    pub fn hermitian(mut self, h: bool) -> Self {
        self.hermitian = h;
        self
    }

    pub fn with_offset(mut self, element: &str, value: f64) -> Self {
        self.offsets.push(Offset {
            element: element.to_string(),
            value,
        });
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.mass >= 0.0) || !self.identity.is_finite() {
            return Err(Error::Usage("mass must be >= 0 and identity finite".into()));
        }
        match self.shape {
            EnvelopeShape::Geometric { rate } if !(rate > 0.0) => {
                Err(Error::Usage("geometric rate must be > 0".into()))
            }
            EnvelopeShape::Polynomial { s } if !(s >= 0.0) => {
                Err(Error::Usage("polynomial exponent must be >= 0".into()))
            }
            _ => Ok(()),
        }
    }

    /// Off-identity envelope values `a(z)` for `1 <= |z| <= R`.
    fn off_identity(&self, group: &Group) -> Result<Vec<(Element, f64)>> {
        let mut zs = Vec::new();
        for k in 1..=self.support_radius {
            for z in group.sphere(k)? {
                zs.push((z, self.shape.profile(k)));
            }
        }
        let total: f64 = zs.iter().map(|(_, v)| v).sum();
        if total > 0.0 {
            for (_, v) in zs.iter_mut() {
                *v *= self.mass / total;
            }
        }
        Ok(zs)
    }

    fn parsed_offsets(&self, group: &Group) -> Result<Vec<(Element, f64)>> {
        let mut out = Vec::new();
        for o in &self.offsets {
            out.push((group.parse_element(&o.element)?, o.value));
        }
        if self.hermitian {
            for (z, v) in &out {
                let zi = group.inv(z);
                if !out.iter().any(|(w, u)| *w == zi && u == v) {
                    return Err(Error::Usage(format!(
                        "hermitian spec needs a matching offset at {zi} for {z}"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// The prescribed envelope of `A`, identity and offsets included.
    pub fn envelope<T: Real>(&self, group: &Arc<Group>) -> Result<Envelope<T>> {
        self.validate()?;
        let mut e = Envelope::new(group);
        if self.identity != 0.0 {
            e.insert(&group.identity(), T::cast(self.identity.abs()))?;
        }
        for (z, v) in self.off_identity(group)? {
            e.insert(&z, T::cast(v))?;
        }
        for (z, c) in self.parsed_offsets(group)? {
            let cur = e.get(&z);
            e.insert(&z, cur + T::cast(c.abs()))?;
        }
        Ok(e)
    }
}

fn mix(mut h: u64, x: u64) -> u64 {
    // splitmix64 step
    h ^= x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn angle(seed: u64, z: &Element, y: Option<&Element>) -> f64 {
    let mut h = mix(seed, 0x0c0f_fee0);
    for &c in z.coords() {
        h = mix(h, c as u64);
    }
    h = mix(h, 0xffff_ffff);
    if let Some(y) = y {
        for &c in y.coords() {
            h = mix(h, c as u64);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
}

/// Phase of the entry `(z, y)`. Hermitian specs pair `(z, y)` with `(z^-1, zy)`
/// and give the second the conjugate phase of the first.
fn phase(spec: &TestMatrixSpec, group: &Group, seed: u64, z: &Element, y: &Element) -> f64 {
    let column = match spec.phases {
        PhaseScheme::Positive => return 0.0,
        PhaseScheme::Toeplitz => false,
        PhaseScheme::Random => true,
    };
    if !spec.hermitian {
        return angle(seed, z, column.then_some(y));
    }
    let zi = group.inv(z);
    if *z <= zi {
        angle(seed, z, column.then_some(y))
    } else {
        let x = group.mul(z, y);
        -angle(seed, &zi, column.then_some(&x))
    }
}

/// Builds the window `B_N` of the test matrix described by `spec`.
///
/// Entries depend only on `(seed, z, y)`, so windows of different radii agree
/// on their common columns.
pub fn make_test_matrix<T: Real>(
    group: &Arc<Group>,
    spec: &TestMatrixSpec,
    seed: u64,
    column_radius: usize,
) -> Result<CdMatrix<T>> {
    spec.validate()?;
    let mut a = CdMatrix::zero(group, column_radius, Extent::Window)?;
    let cols = a.columns().clone();
    let n = cols.len();
    let mut diags: Vec<(Element, Vec<Complex<T>>)> = Vec::new();
    if spec.identity != 0.0 {
        diags.push((group.identity(), vec![Complex::new(T::cast(spec.identity), T::zero()); n]));
    }
    for (z, v) in spec.off_identity(group)? {
        if v == 0.0 {
            continue;
        }
        let vals = cols
            .elements()
            .iter()
            .map(|y| {
                let t = phase(spec, group, seed, &z, y);
                Complex::from_polar(T::cast(v), T::cast(t))
            })
            .collect();
        diags.push((z, vals));
    }
    for (z, c) in spec.parsed_offsets(group)? {
        let add = Complex::new(T::cast(c), T::zero());
        match diags.iter_mut().find(|(w, _)| *w == z) {
            Some((_, vals)) => vals.iter_mut().for_each(|x| *x += add),
            None => diags.push((z, vec![add; n])),
        }
    }
    for (z, vals) in diags {
        a.insert_diagonal(&z, vals)?;
    }
    Ok(a)
}
