//! Test matrices, Neumann and finite-section inverses, and envelope studies.

mod lp;
mod neumann;
mod section;
mod study;
mod testmatrix;

pub use lp::{lp_condition_experiment, LpDrift, LpNorm, LpReport, LpRow};
pub use neumann::{neumann_inverse, terms_needed, NeumannInverse, NeumannSummary};
pub use section::{default_margin, finite_section_inverse, interior_envelope, SectionInverse, SINGULAR_PIVOT};
pub use study::{
    envelope_convergence_study, study_matrix, weighted_inverse_check, RadiusSummary, Study,
    StudyOptions, StudyReport, StudyVerdict, WeightedReport,
};
pub use testmatrix::{make_test_matrix, EnvelopeShape, Offset, PhaseScheme, TestMatrixSpec};
