//! Tail model fitting with KS-driven lower-bound selection.
//!
//! For a candidate `xmin` the model is fitted by maximum likelihood on the
//! tail `x >= xmin` and scored by the Kolmogorov–Smirnov distance between the
//! tail empirical CDF and the fitted model CDF. Without an override, every
//! unique sample value (with at least two tail points) is tried and the
//! candidate with the smallest KS distance wins; ties go to the smallest
//! `xmin`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::models::{cdf, fit_family, ModelFamily, ModelKind, TailStats};
use super::zeta::hurwitz_zeta;
use crate::error::{Error, Result};

/// Positive integer observations (degrees); zeros are stripped upstream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSample {
    values: Vec<u64>, // ascending
}

impl DegreeSample {
    /// Builds a sample from positive values. Errors on empty input or zeros.
    pub fn new(mut values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::parameter("degree sample is empty"));
        }
        if values.iter().any(|&v| v == 0) {
            return Err(Error::parameter(
                "degree sample contains zeros; strip them before fitting",
            ));
        }
        values.sort_unstable();
        Ok(DegreeSample { values })
    }

    /// Builds a sample from raw degrees, silently dropping zeros.
    pub fn from_degrees<I: IntoIterator<Item = u64>>(degrees: I) -> Result<Self> {
        Self::new(degrees.into_iter().filter(|&d| d > 0).collect())
    }

    /// Reads one integer per line (blank lines ignored).
    pub fn from_reader<R: std::io::BufRead>(reader: R) -> Result<Self> {
        let mut values = Vec::new();
        for (no, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let v: u64 = t
                .parse()
                .map_err(|_| Error::parameter(format!("line {}: not a non-negative integer: {t:?}", no + 1)))?;
            if v > 0 {
                values.push(v);
            }
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> u64 {
        *self.values.last().expect("non-empty")
    }
}

/// A fitted tail model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub xmin: u64,
    pub n_tail: usize,
    /// KS distance between tail empirical CDF and model CDF.
    pub ks: f64,
    /// Log-likelihood of the tail under the fitted model.
    pub loglik: f64,
    /// Set when the selected tail has fewer than 50 points: tiny tails can
    /// "win" the scan while explaining almost none of the data.
    pub small_tail: bool,
}

/// Unique values with counts plus cumulative statistics, so any suffix tail
/// has O(1) sufficient statistics.
pub(crate) struct SampleIndex {
    pub uniq: Vec<u64>,
    pub counts: Vec<u64>,
    // suffix[i] aggregates uniq[i..]: (n, sum_ln, sum_x, sum_lgamma, sum_ln2)
    suffix: Vec<[f64; 5]>,
}

impl SampleIndex {
    pub fn new(sorted_values: &[u64]) -> Self {
        let mut uniq = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for &v in sorted_values {
            if uniq.last() == Some(&v) {
                *counts.last_mut().expect("parallel") += 1;
            } else {
                uniq.push(v);
                counts.push(1);
            }
        }
        let mut suffix = vec![[0.0; 5]; uniq.len() + 1];
        for i in (0..uniq.len()).rev() {
            let c = counts[i] as f64;
            let x = uniq[i] as f64;
            let lx = x.ln();
            let prev = suffix[i + 1];
            suffix[i] = [
                prev[0] + c,
                prev[1] + c * lx,
                prev[2] + c * x,
                prev[3] + c * ln_gamma(x + 1.0),
                prev[4] + c * lx * lx,
            ];
        }
        SampleIndex { uniq, counts, suffix }
    }

    /// Tail statistics for `uniq[i..]`.
    fn tail_stats(&self, i: usize) -> TailStats<'_> {
        let [n, sum_ln, sum_x, sum_lgamma, sum_ln2] = self.suffix[i];
        let mean_ln = sum_ln / n;
        let sd_ln = (sum_ln2 / n - mean_ln * mean_ln).max(0.0).sqrt();
        TailStats {
            uniq: &self.uniq[i..],
            counts: &self.counts[i..],
            n,
            sum_ln,
            sum_x,
            sum_lgamma,
            mean_ln,
            sd_ln,
        }
    }

    fn tail_len(&self, i: usize) -> usize {
        self.suffix[i][0] as usize
    }
}

/// KS distance on the tail: max over observed tail values of
/// `|ecdf(x) - cdf(x)|`, both conditioned on `x >= xmin`.
pub(crate) fn ks_distance(
    kind: &ModelKind,
    xmin: u64,
    uniq_tail: &[u64],
    counts_tail: &[u64],
) -> f64 {
    let n: u64 = counts_tail.iter().sum();
    let n = n as f64;
    if let ModelKind::PowerLaw { alpha } = *kind {
        let last = *uniq_tail.last().expect("non-empty tail");
        if last - xmin <= 200_000 {
            return ks_power_law_recurrence(alpha, xmin, uniq_tail, counts_tail, n, last);
        }
    }
    let mut cum = 0u64;
    let mut ks: f64 = 0.0;
    for (&x, &c) in uniq_tail.iter().zip(counts_tail) {
        cum += c;
        let emp = cum as f64 / n;
        ks = ks.max((emp - cdf(kind, xmin, x)).abs());
    }
    ks
}

/// Power-law KS via the downward recurrence `zeta(a,k) = zeta(a,k+1) + k^-a`,
/// which turns the per-value Hurwitz evaluations into one evaluation plus a
/// walk over the integer range.
fn ks_power_law_recurrence(
    alpha: f64,
    xmin: u64,
    uniq_tail: &[u64],
    counts_tail: &[u64],
    n: f64,
    last: u64,
) -> f64 {
    let z0 = hurwitz_zeta(alpha, xmin as f64);
    // z = zeta(alpha, k) walking k downward from last + 1.
    let mut k = last + 1;
    let mut z = hurwitz_zeta(alpha, k as f64);
    let mut ks: f64 = 0.0;
    let mut cum: u64 = n as u64;
    for i in (0..uniq_tail.len()).rev() {
        let x = uniq_tail[i];
        while k > x + 1 {
            k -= 1;
            z += (k as f64).powf(-alpha);
        }
        let model = 1.0 - z / z0;
        let emp = cum as f64 / n;
        ks = ks.max((emp - model).abs());
        cum -= counts_tail[i];
    }
    ks
}

/// Fits `family` on the tail starting at `uniq[idx]`-equivalent position with
/// explicit `xmin` (which may fall below the smallest retained value).
fn fit_at(
    index: &SampleIndex,
    family: ModelFamily,
    xmin: u64,
    idx: usize,
) -> Result<FitResult> {
    let n_tail = index.tail_len(idx);
    if n_tail < 2 {
        return Err(Error::Fit {
            family: family.name(),
            message: format!("tail at xmin={xmin} has {n_tail} point(s); need at least 2"),
        });
    }
    let stats = index.tail_stats(idx);
    let (model, loglik) = fit_family(family, &stats, xmin, None)?;
    let ks = ks_distance(&model, xmin, stats.uniq, stats.counts);
    Ok(FitResult {
        model,
        xmin,
        n_tail,
        ks,
        loglik,
        small_tail: n_tail < 50,
    })
}

/// Fits a tail model, scanning `xmin` over all unique sample values unless an
/// override is given.
pub fn fit_model(
    sample: &DegreeSample,
    family: ModelFamily,
    xmin_override: Option<u64>,
) -> Result<FitResult> {
    if sample.len() < 2 {
        return Err(Error::parameter("need at least 2 observations to fit"));
    }
    let index = SampleIndex::new(sample.values());

    if let Some(xmin) = xmin_override {
        if xmin < 1 || xmin > sample.max() {
            return Err(Error::parameter(format!(
                "xmin_override {xmin} outside sample value range [1, {}]",
                sample.max()
            )));
        }
        let idx = index.uniq.partition_point(|&u| u < xmin);
        return fit_at(&index, family, xmin, idx);
    }

    let mut best: Option<FitResult> = None;
    let mut last_err = None;
    for i in 0..index.uniq.len() {
        if index.tail_len(i) < 2 {
            break;
        }
        match fit_at(&index, family, index.uniq[i], i) {
            Ok(fit) => {
                if best.as_ref().map_or(true, |b| fit.ks < b.ks) {
                    best = Some(fit);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| {
        last_err.unwrap_or_else(|| Error::Fit {
            family: family.name(),
            message: "no admissible xmin candidate".into(),
        })
    })
}

/// Empirical vs model CCDF at the unique tail values (plot-ready content).
#[derive(Debug, Clone, Serialize)]
pub struct CcdfPoint {
    pub x: u64,
    pub empirical: f64,
    pub model: f64,
}

pub fn ccdf_points(sample: &DegreeSample, fit: &FitResult) -> Vec<CcdfPoint> {
    let index = SampleIndex::new(sample.values());
    let idx = index.uniq.partition_point(|&u| u < fit.xmin);
    let uniq = &index.uniq[idx..];
    let counts = &index.counts[idx..];
    let n: u64 = counts.iter().sum();
    let mut cum = 0u64;
    let mut out = Vec::with_capacity(uniq.len());
    for (&x, &c) in uniq.iter().zip(counts) {
        // CCDF just below x: P(X >= x).
        let emp = (n - cum) as f64 / n as f64;
        let model = if x == fit.xmin {
            1.0
        } else {
            1.0 - cdf(&fit.model, fit.xmin, x - 1)
        };
        out.push(CcdfPoint { x, empirical: emp, model });
        cum += c;
    }
    out
}
