//! Dense and regular representations, the shear intertwiner and norm estimates.

mod bivector;
mod spectral;

pub use bivector::{
    check_intertwining, lambda_d_apply, r_omega_apply, shear_s, shear_s_inv, BiVectorSection,
    IntertwiningCheck,
};
pub use spectral::{
    check_normid, opnorm_estimate, power_norm, single_diag_opnorm_check, specrad_l_estimate,
    NormIdentityReport, PowerEstimate, PowerOptions, SingleDiagonalCheck, SpectralRadiusEstimate,
};
