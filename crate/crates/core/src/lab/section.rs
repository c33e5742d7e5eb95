use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{CdMatrix, DenseSection};
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::group::{Ball, Element};
use crate::scalar::Real;

/// Relative pivot threshold below which a section is declared singular.
pub const SINGULAR_PIVOT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SectionInverse<T> {
    pub radius: usize,
    pub margin: usize,
    pub interior_radius: usize,
    pub section: DenseSection<T>,
    pub inverse: DenseSection<T>,
    /// `b(z) = max |inverse(x, y)|` over `x, y` in the interior with `x y^-1 = z`.
    pub envelope: Envelope<T>,
    /// `max |(A A^-1 - I)(x, y)|` over interior rows `x`.
    pub residual: f64,
}

pub fn default_margin(radius: usize) -> usize {
    radius.div_ceil(4)
}

/// Envelope of a dense matrix over pairs in `B_r`.
pub fn interior_envelope<T: Real>(m: &DenseSection<T>, r: usize) -> Result<Envelope<T>> {
    let g = m.group();
    let ball = m.ball();
    let lim = ball.prefix_len(r);
    let mut acc: HashMap<Element, T> = HashMap::new();
    for j in 0..lim {
        let yinv = g.inv(ball.element(j));
        for i in 0..lim {
            let v = m.get(i, j).norm();
            let z = g.mul(ball.element(i), &yinv);
            let slot = acc.entry(z).or_insert(T::zero());
            if v > *slot {
                *slot = v;
            }
        }
    }
    let mut e = Envelope::new(g);
    for (z, v) in acc {
        if v > T::zero() {
            e.insert(&z, v)?;
        }
    }
    Ok(e)
}

/// Inverts the section of `A` on `ball` and reads the envelope of the inverse on
/// the interior ball of radius `radius - margin`.
pub fn finite_section_inverse<T: Real>(
    a: &CdMatrix<T>,
    ball: &Arc<Ball>,
    margin: Option<usize>,
) -> Result<SectionInverse<T>> {
    let radius = ball.radius();
    let margin = margin.unwrap_or_else(|| default_margin(radius));
    if margin > radius {
        return Err(Error::Usage(format!("margin {margin} exceeds the radius {radius}")));
    }
    let section = a.to_dense(ball)?;
    let inverse = section.inverse(T::cast(SINGULAR_PIVOT))?;
    let envelope = interior_envelope(&inverse, radius - margin)?;
    let residual = interior_residual(&section, &inverse, ball.prefix_len(radius - margin))?;
    Ok(SectionInverse {
        radius,
        margin,
        interior_radius: radius - margin,
        section,
        inverse,
        envelope,
        residual,
    })
}

fn interior_residual<T: Real>(a: &DenseSection<T>, inv: &DenseSection<T>, rows: usize) -> Result<f64> {
    let p = a.matmul(inv)?;
    let mut worst = 0.0f64;
    for i in 0..rows {
        for j in 0..p.n() {
            let d = if i == j { p.get(i, j) - T::one() } else { p.get(i, j) };
            worst = worst.max(d.norm().as_f64());
        }
    }
    Ok(worst)
}
