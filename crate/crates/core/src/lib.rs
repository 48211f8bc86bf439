//! Numerical and symbolic tools for the modular quantum dilogarithm γ(z):
//! evaluation, its functional identities, integral relations, the operator
//! realisation on a grid, and the classical dilogarithm limit.

pub mod cmath;
mod ddfft;
pub mod dilog;
pub mod error;
pub mod gamma;
pub mod grid;
pub mod oscillatory;
pub mod params;
pub mod quad;
pub mod report;
pub mod sample;
pub mod suites;
pub mod weyl;
pub mod ysystem;

pub use num_complex::Complex64;

pub use dilog::{euler_E, euler_dilog, rogers_L, rogers_R};
pub use error::{Error, Result};
pub use gamma::{
    cross_representation_check, gamma, origin_check, property_suite, q_exponential, residue_check,
    residue_fit, theta, theta_product, Contour, DilogValue, GammaEvaluator, ResidueFit, SampleSpec,
};
pub use grid::{
    conjugation_check, default_test_set, fourier_checks, intertwining_checks, operator_suite,
    refinement_check, s5_identity_check, volkov_operator_check, volkov_operator_reports,
    y_system_grid_checks, Grid, GridFunction, GridOperators, Operator, TestVector,
};
pub use oscillatory::{
    ftd_check, mir_check, pentagon_kernel_reduction, shc_check, tail_agreement_check,
    OscillatorySpec, TailMethod,
};
pub use params::{make_params, ModularParameter};
pub use report::VerificationReport;
pub use sample::Lcg;
pub use weyl::{
    compact_pentagon_check, e_of, quantum_y_elements, schutzenberger_check, volkov_formal_check,
    weyl_inverse, weyl_mul, y_system_formal_check, WeylElement,
};
pub use ysystem::{
    five_term_check, five_term_residual, quasiclassical_gamma_check, stationary_phase_check,
    y_orbit, FiveTermForm, YOrbit,
};
