//! Rodov comparison splines and the inequalities they extremize.
//!
//! The crate is layered bottom-up:
//!
//! * [`piecewise`]: periodic piecewise polynomials, generic over [`Scalar`].
//! * [`rodov`]: the base splines `ψ_r(a1, a2; ·)` and the Euler special case.
//! * [`scaling`]: the scaled family `Ψ` and its derivative norms.
//! * [`matcher`]: recovering `Ψ` parameters from prescribed derivative norms.
//! * [`rearrange`]: decreasing rearrangements and their cumulative integrals.
//! * [`testfn`]: trigonometric and spline test functions.
//! * [`verify`]: executable checks of the comparison inequalities.

pub mod error;
pub mod matcher;
pub mod piecewise;
mod poly;
pub mod quad;
pub mod rearrange;
pub mod rodov;
pub mod roots;
pub mod scaling;
pub mod scalar;
pub mod testfn;
pub mod verify;

pub use error::{Error, Result};
pub use piecewise::{Branch, BranchInverter, Interval, Piecewise, Root, Tolerances};
pub use poly::MAX_DEGREE;
pub use scalar::Scalar;

/// The double precision piecewise polynomial used throughout the crate.
pub type PiecewisePoly = Piecewise<f64>;
pub use rodov::{build_psi, build_psi1, euler_phi, psi_sup_norm, psi_zeros, RodovParams};
pub use scaling::{build_Psi, norm_profile, PsiParams, Psi_derivative_norm, Psi_lp_norm};
pub use matcher::{match_case_a, match_case_b, match_case_c, match_targets, Case, NormTargets};
pub use rearrange::{
    abs_derivative, cumulative_rearrangement, distribution, rearrangement, Distribution,
    Rearrangement,
};
pub use testfn::{TestFunction, TrigPoly};
pub use verify::{
    best_constant, check_bohr_favard, check_comparison, check_hypothesis, check_ligun, check_nagy,
    check_rearrangement_ineq, check_sign_changes, check_lp_lower, generate_admissible, ligun_orders,
    run_suite, run_trial, sample_trial, self_check, tune_nagy, tune_lp_lower, CheckReport, GenKind,
    HypothesisEntry, Suite, SuiteSummary, Trial, VerifyOptions,
};
