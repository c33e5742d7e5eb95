//! Convolution-dominated matrices, their dense sections and certification masks.

mod dense;
mod io;
mod lu;
mod matrix;
mod region;

pub use dense::{DenseSection, VectorSection};
pub use io::MatrixMeta;
pub use matrix::{Applied, CdMatrix, Extent};
pub use region::CertifiedRegion;

/// Region where `dense(h) dense(f)` on `ball` equals `dense(h * f)`.
///
/// Columns `|y| <= n - K_f` see every term of the product inside the section;
/// windowed products are further limited to their own window.
pub fn product_region<T: crate::Real>(
    f: &CdMatrix<T>,
    product: &CdMatrix<T>,
    ball: &crate::Ball,
) -> CertifiedRegion {
    let inside = ball.radius().checked_sub(f.diagonal_radius());
    let r = match (inside, product.certified_column_radius()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, _) => None,
    };
    CertifiedRegion::columns_within(ball, r)
}

#[cfg(test)]
mod tests;
