//! Toeplitz operators on the Bergman space `A²(𝔻)` whose symbols are
//! sesquilinear forms: bounded functions, Carleson measures, derivatives of
//! point masses and infinite collections of derivative measures.
//!
//! Operators are realized as truncated matrices in the orthonormal basis
//! `e_k(z) = √(k+1) z^k`.

pub mod analytic;
pub mod carleson;
pub mod error;
pub mod geometry;
pub mod operators;
pub mod profile;
pub mod quadrature;
pub mod spectral;
pub mod special;
pub mod symbols;

pub use analytic::{eval_basis, kernel, kernel_tail_norm, truncated_kernel, AnalyticPoly, ComplexPoint};
pub use error::{Error, Result};
pub use geometry::{bergman_disk, inclusion_constants, EuclideanDisk, InclusionConstants};
pub use operators::{weak_convergence_check, OperatorJson, TruncatedOperator};
pub use profile::Profile;
pub use quadrature::{circle_quadrature, disk_quadrature, GaussLegendre, QuadratureRule};
pub use symbols::{
    assemble, derivative_delta_apply, finite_rank_form, form_eval, matrix_element, Atom, CircleEntry,
    CircularConvention, DeltaConvention, DeltaTerm, FormOptions, FormValue, Symbol,
};
pub use carleson::{
    central_derivative_bound, check_norm_af_type, coeff_m, decay_classify, form_bound_check, varpi, DecayClass,
    KCarlesonReport, KClassParams, MeasureCollection, Order, Verdict,
};
pub use spectral::{
    angular_gamma, approx_family_gamma, oscillation_profile, radial_gamma, radial_gamma_sequence, vertical_gamma,
    OscillationProfile, SpectralData, SpectralKind,
};
