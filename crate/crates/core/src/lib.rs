//! Convolution-dominated matrices indexed by a finitely generated group.
//!
//! An operator on `l2(G)` is stored by its diagonals `m_z(y) = A(zy, y)`.
//! Composition becomes twisted convolution of diagonals and the CD norm is the
//! sum over `z` of the sup of `|m_z|`.

pub mod algebra;
pub mod checks;
pub mod envelope;
pub mod error;
pub mod group;
pub mod io;
pub mod lab;
pub mod repr;
pub mod scalar;
pub mod weight;

pub use algebra::{CdMatrix, CertifiedRegion, DenseSection, Extent, VectorSection};
pub use envelope::Envelope;
pub use error::{Error, ExitCategory, Result};
pub use group::{Ball, Canon, Element, Group, GroupConfig, GroupKind};
pub use scalar::{Complex, Real};
pub use weight::{Verdict, Weight};

pub type EnvelopeF64 = Envelope<f64>;
pub type EnvelopeF32 = Envelope<f32>;
pub type CdMatrixF64 = CdMatrix<f64>;
pub type CdMatrixF32 = CdMatrix<f32>;
pub type DenseSectionF64 = DenseSection<f64>;
pub type VectorSectionF64 = VectorSection<f64>;
