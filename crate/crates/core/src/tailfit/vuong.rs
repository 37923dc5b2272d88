//! Vuong's likelihood-ratio test for non-nested model comparison.
//!
//! Both models are re-estimated on a shared tail and compared through the
//! pointwise log-likelihood differences; the normalized statistic is
//! `LR / (sigma * sqrt(n))` with `sigma` the (population) standard deviation
//! of the differences, and the p-value is two-sided normal.
//!
//! By default the shared tail starts at the *smaller* of the two fitted
//! `xmin` values, so the comparison covers the bulk of the data rather than
//! only the sparser of the two tails, where non-nested alternatives become
//! indistinguishable. The larger-`xmin` and fixed variants are available.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::fit::{DegreeSample, FitResult, SampleIndex};
use super::models::{fit_family, log_pmf, ModelKind, TailStats};
use crate::error::{Error, Result};

/// How the shared comparison tail is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommonTail {
    /// `x >= min(xmin_a, xmin_b)` (default).
    MinXmin,
    /// `x >= max(xmin_a, xmin_b)`.
    MaxXmin,
    /// An explicit lower bound.
    Fixed(u64),
}

impl Default for CommonTail {
    fn default() -> Self {
        CommonTail::MinXmin
    }
}

pub const DEFAULT_SIGNIFICANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FirstFavored,
    SecondFavored,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VuongResult {
    /// Sum over shared-tail points of `log pmf_a - log pmf_b`.
    pub log_lr: f64,
    pub normalized_stat: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Lower bound of the shared tail.
    pub tail_xmin: u64,
    pub n_common: usize,
    /// Set when the pointwise differences have zero variance (e.g. a model
    /// compared against itself), which forces an inconclusive verdict.
    pub zero_variance: bool,
}

pub fn vuong_compare(
    sample: &DegreeSample,
    fit_a: &FitResult,
    fit_b: &FitResult,
) -> Result<VuongResult> {
    vuong_compare_with(sample, fit_a, fit_b, CommonTail::default(), DEFAULT_SIGNIFICANCE)
}

pub fn vuong_compare_with(
    sample: &DegreeSample,
    fit_a: &FitResult,
    fit_b: &FitResult,
    tail: CommonTail,
    significance: f64,
) -> Result<VuongResult> {
    let t = match tail {
        CommonTail::MinXmin => fit_a.xmin.min(fit_b.xmin),
        CommonTail::MaxXmin => fit_a.xmin.max(fit_b.xmin),
        CommonTail::Fixed(x) => x,
    };
    if t < 1 {
        return Err(Error::parameter("common tail bound must be >= 1"));
    }

    let index = SampleIndex::new(sample.values());
    let idx = index.uniq.partition_point(|&u| u < t);
    let uniq = &index.uniq[idx..];
    let counts = &index.counts[idx..];
    let n: u64 = counts.iter().sum();
    if n < 2 {
        return Err(Error::Comparison(format!(
            "common tail x >= {t} has {n} point(s); need at least 2"
        )));
    }

    let stats = TailStats::new(uniq, counts);
    let (model_a, _) = refit(fit_a.model, &stats, t)?;
    let (model_b, _) = refit(fit_b.model, &stats, t)?;

    // Pointwise log-likelihood differences, aggregated over unique values.
    let nf = n as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (&x, &c) in uniq.iter().zip(counts) {
        let d = log_pmf(&model_a, t, x) - log_pmf(&model_b, t, x);
        let c = c as f64;
        sum += c * d;
        sum_sq += c * d * d;
    }
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0);
    let sd = var.sqrt();

    if sd < 1e-12 {
        return Ok(VuongResult {
            log_lr: sum,
            normalized_stat: 0.0,
            p_value: 1.0,
            verdict: Verdict::Inconclusive,
            tail_xmin: t,
            n_common: n as usize,
            zero_variance: true,
        });
    }

    let stat = sum / (sd * nf.sqrt());
    let p_value = erfc(stat.abs() / std::f64::consts::SQRT_2);
    let verdict = if p_value > significance {
        Verdict::Inconclusive
    } else if sum > 0.0 {
        Verdict::FirstFavored
    } else {
        Verdict::SecondFavored
    };

    Ok(VuongResult {
        log_lr: sum,
        normalized_stat: stat,
        p_value,
        verdict,
        tail_xmin: t,
        n_common: n as usize,
        zero_variance: false,
    })
}

fn refit(kind: ModelKind, stats: &TailStats, xmin: u64) -> Result<(ModelKind, f64)> {
    fit_family(kind.family(), stats, xmin, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::tailfit::fit::fit_model;
    use crate::tailfit::models::{ModelFamily, ModelKind, Sampler};

    #[test]
    fn self_comparison_is_inconclusive() {
        let sampler = Sampler::new(ModelKind::PowerLaw { alpha: 2.2 }, 1).unwrap();
        let mut rng = stream_rng(1, 0);
        let sample =
            DegreeSample::new((0..500).map(|_| sampler.draw(&mut rng)).collect()).unwrap();
        let fit = fit_model(&sample, ModelFamily::PowerLaw, None).unwrap();
        let v = vuong_compare(&sample, &fit, &fit).unwrap();
        assert_eq!(v.log_lr, 0.0);
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert!(v.zero_variance);
    }

    #[test]
    fn swapping_sides_negates_lr_keeps_p() {
        let sampler = Sampler::new(ModelKind::LogNormal { mu: 1.0, sigma: 1.0 }, 1).unwrap();
        let mut rng = stream_rng(2, 0);
        let sample =
            DegreeSample::new((0..2_000).map(|_| sampler.draw(&mut rng)).collect()).unwrap();
        let ln = fit_model(&sample, ModelFamily::LogNormal, None).unwrap();
        let ex = fit_model(&sample, ModelFamily::Exponential, None).unwrap();
        let ab = vuong_compare(&sample, &ln, &ex).unwrap();
        let ba = vuong_compare(&sample, &ex, &ln).unwrap();
        assert!((ab.log_lr + ba.log_lr).abs() < 1e-9);
        assert!((ab.p_value - ba.p_value).abs() < 1e-12);
    }

    #[test]
    fn lognormal_data_favors_lognormal_over_exponential() {
        let sampler = Sampler::new(ModelKind::LogNormal { mu: 1.0, sigma: 1.0 }, 1).unwrap();
        let mut rng = stream_rng(3, 0);
        let sample =
            DegreeSample::new((0..5_000).map(|_| sampler.draw(&mut rng)).collect()).unwrap();
        let ln = fit_model(&sample, ModelFamily::LogNormal, None).unwrap();
        let ex = fit_model(&sample, ModelFamily::Exponential, None).unwrap();
        let v = vuong_compare(&sample, &ln, &ex).unwrap();
        assert_eq!(v.verdict, Verdict::FirstFavored, "{v:?}");
        assert!(v.p_value <= 0.05);
    }

    #[test]
    fn tiny_common_tail_is_an_error() {
        let sample = DegreeSample::new(vec![1, 1, 1, 2, 9]).unwrap();
        let a = fit_model(&sample, ModelFamily::PowerLaw, Some(1)).unwrap();
        let b = fit_model(&sample, ModelFamily::Exponential, Some(1)).unwrap();
        let err = vuong_compare_with(&sample, &a, &b, CommonTail::Fixed(9), 0.1).unwrap_err();
        assert!(err.to_string().contains("common tail"), "{err}");
    }
}
