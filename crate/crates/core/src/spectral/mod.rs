//! Dirichlet eigenvalues, harmonic extension and discrete identity checks on grids.

mod dbar;
mod eigen;
mod experiments;
mod harmonic;
mod operator;

pub use dbar::{dbar_identity_check, sample_complex, smooth_bump, DbarReport, SUPPORT_MARGIN};
pub use eigen::{
    closed_range_constant, closed_range_from_lambda, lambda1, lambda1_extrapolated, lambda1_with,
    rayleigh_upper, richardson, ClosedRangeEstimate, ClosedRangeVerdict, EigenOptions,
    SpectralResult,
};
pub use experiments::{
    disc_log_integral, eigenvalue_stability_experiment, majorant_integral_check, scene_box,
    MajorantReport, StabilityRow, StabilityTable, MAJORANT_SLACK, STABILITY_GAP,
};
pub use harmonic::{harmonic_extension, HARMONIC_TOL};
pub use operator::{conjugate_gradient, dot, norm, CgStats, DirichletLaplacian};
