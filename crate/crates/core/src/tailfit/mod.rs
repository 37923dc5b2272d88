//! Heavy-tailed degree-distribution model selection.
//!
//! Candidate models are a discrete power law, a discretized lognormal, a
//! discretized exponential, and a truncated Poisson. Fitting combines MLE
//! parameter estimation with KS-driven `xmin` selection; plausibility comes
//! from a semi-parametric bootstrap, and direct model comparisons use Vuong's
//! normalized likelihood-ratio test.

mod fit;
mod gof;
mod models;
mod optim;
mod select;
mod vuong;
mod zeta;

pub use fit::{ccdf_points, fit_model, CcdfPoint, DegreeSample, FitResult};
pub use gof::{goodness_of_fit, goodness_of_fit_with, GofResult, XminPolicy};
pub use models::{cdf, log_pmf, power_law_alpha_closed_form, ModelFamily, ModelKind, Sampler};
pub use select::{
    sample_model, select_best, Comparison, FamilyOutcome, SelectConfig, SelectionReport,
};
pub use vuong::{
    vuong_compare, vuong_compare_with, CommonTail, Verdict, VuongResult, DEFAULT_SIGNIFICANCE,
};
pub use zeta::hurwitz_zeta;
