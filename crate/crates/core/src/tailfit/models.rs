//! The four discrete candidate models, truncated to `x >= xmin`.
//!
//! Conventions:
//! - power law: `pmf(x) = x^-alpha / zeta(alpha, xmin)`;
//! - lognormal and exponential are discretized by taking CDF differences of
//!   the continuous distribution at half-integer boundaries and renormalizing
//!   over `x >= xmin` (the discretized exponential is a geometric law on
//!   `x - xmin`);
//! - Poisson is the ordinary Poisson conditioned on `x >= xmin`.
//!
//! All MLE fits operate on a pre-aggregated tail (unique values + counts).

use rand::Rng;
use rand_distr::{Distribution, Poisson as PoissonDist, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use super::optim::{brent_min, nelder_mead2};
use super::zeta::hurwitz_zeta;
use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal survival function, accurate in both tails.
pub(crate) fn norm_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    PowerLaw,
    LogNormal,
    Exponential,
    Poisson,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 4] = [
        ModelFamily::PowerLaw,
        ModelFamily::LogNormal,
        ModelFamily::Exponential,
        ModelFamily::Poisson,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::PowerLaw => "power_law",
            ModelFamily::LogNormal => "lognormal",
            ModelFamily::Exponential => "exponential",
            ModelFamily::Poisson => "poisson",
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A fitted (or externally specified) model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelKind {
    PowerLaw { alpha: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Exponential { lambda: f64 },
    Poisson { lambda: f64 },
}

impl ModelKind {
    pub fn family(&self) -> ModelFamily {
        match self {
            ModelKind::PowerLaw { .. } => ModelFamily::PowerLaw,
            ModelKind::LogNormal { .. } => ModelFamily::LogNormal,
            ModelKind::Exponential { .. } => ModelFamily::Exponential,
            ModelKind::Poisson { .. } => ModelFamily::Poisson,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ModelKind::PowerLaw { alpha } => alpha > 1.0 && alpha.is_finite(),
            ModelKind::LogNormal { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            ModelKind::Exponential { lambda } | ModelKind::Poisson { lambda } => {
                lambda > 0.0 && lambda.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::parameter(format!("invalid model parameters: {self:?}")))
        }
    }
}

/// Aggregated view of a tail used by the MLE routines: unique values in
/// ascending order with multiplicities, plus the sufficient statistics the
/// likelihoods need.
#[derive(Debug, Clone)]
pub(crate) struct TailStats<'a> {
    pub uniq: &'a [u64],
    pub counts: &'a [u64],
    pub n: f64,
    pub sum_ln: f64,
    pub sum_x: f64,
    pub sum_lgamma: f64,
    pub mean_ln: f64,
    pub sd_ln: f64,
}

impl<'a> TailStats<'a> {
    pub fn new(uniq: &'a [u64], counts: &'a [u64]) -> Self {
        let mut n = 0.0;
        let mut sum_ln = 0.0;
        let mut sum_x = 0.0;
        let mut sum_lgamma = 0.0;
        let mut sum_ln2 = 0.0;
        for (&x, &c) in uniq.iter().zip(counts) {
            let c = c as f64;
            let xf = x as f64;
            let lx = xf.ln();
            n += c;
            sum_ln += c * lx;
            sum_x += c * xf;
            sum_lgamma += c * ln_gamma(xf + 1.0);
            sum_ln2 += c * lx * lx;
        }
        let mean_ln = sum_ln / n;
        let var_ln = (sum_ln2 / n - mean_ln * mean_ln).max(0.0);
        TailStats {
            uniq,
            counts,
            n,
            sum_ln,
            sum_x,
            sum_lgamma,
            mean_ln,
            sd_ln: var_ln.sqrt(),
        }
    }
}

/// Log of the model pmf at integer `x >= xmin`.
pub fn log_pmf(kind: &ModelKind, xmin: u64, x: u64) -> f64 {
    debug_assert!(x >= xmin && xmin >= 1);
    let xf = x as f64;
    match *kind {
        ModelKind::PowerLaw { alpha } => {
            -alpha * xf.ln() - hurwitz_zeta(alpha, xmin as f64).ln()
        }
        ModelKind::LogNormal { mu, sigma } => {
            let lo = ((xf - 0.5).ln() - mu) / sigma;
            let hi = ((xf + 0.5).ln() - mu) / sigma;
            let sf_lo = norm_sf(lo);
            let sf_hi = norm_sf(hi);
            if sf_lo <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let log_z = norm_sf(((xmin as f64 - 0.5).ln() - mu) / sigma).ln();
            sf_lo.ln() + (-(sf_hi / sf_lo)).ln_1p() - log_z
        }
        ModelKind::Exponential { lambda } => {
            (-(-lambda).exp_m1()).ln() - lambda * (xf - xmin as f64)
        }
        ModelKind::Poisson { lambda } => {
            let log_q = gamma_lr(xmin as f64, lambda).ln();
            xf * lambda.ln() - lambda - ln_gamma(xf + 1.0) - log_q
        }
    }
}

/// Model CDF `P(X <= x)` at integer `x >= xmin`, conditioned on `X >= xmin`.
pub fn cdf(kind: &ModelKind, xmin: u64, x: u64) -> f64 {
    debug_assert!(x >= xmin && xmin >= 1);
    let xf = x as f64;
    match *kind {
        ModelKind::PowerLaw { alpha } => {
            1.0 - hurwitz_zeta(alpha, xf + 1.0) / hurwitz_zeta(alpha, xmin as f64)
        }
        ModelKind::LogNormal { mu, sigma } => {
            let z = norm_sf(((xmin as f64 - 0.5).ln() - mu) / sigma);
            1.0 - norm_sf(((xf + 0.5).ln() - mu) / sigma) / z
        }
        ModelKind::Exponential { lambda } => -(-lambda * (xf - xmin as f64 + 1.0)).exp_m1(),
        ModelKind::Poisson { lambda } => {
            let below = gamma_ur(xmin as f64, lambda); // P(X <= xmin-1)
            let q = 1.0 - below;
            (gamma_ur(xf + 1.0, lambda) - below) / q
        }
    }
}

/// Closed-form power-law estimate `1 + n / sum ln(x_i / (xmin - 0.5))`.
///
/// This is the continuous-approximation estimator; the exact zeta MLE uses it
/// to bracket the search, and small fixtures pin it directly.
pub fn power_law_alpha_closed_form(values: &[u64], xmin: u64) -> f64 {
    let shift = xmin as f64 - 0.5;
    let mut n = 0.0;
    let mut s = 0.0;
    for &x in values.iter().filter(|&&x| x >= xmin) {
        n += 1.0;
        s += (x as f64 / shift).ln();
    }
    1.0 + n / s
}

fn degenerate(family: &'static str) -> Error {
    Error::Fit {
        family,
        message: "degenerate tail: all values equal".into(),
    }
}

pub(crate) fn fit_power_law(stats: &TailStats, xmin: u64) -> Result<(ModelKind, f64)> {
    let xmin_f = xmin as f64;
    let nll = |alpha: f64| stats.n * hurwitz_zeta(alpha, xmin_f).ln() + alpha * stats.sum_ln;
    // Bracket around the closed-form estimate; it is biased low for small
    // xmin but always lands in the basin of the exact optimum.
    let quick = 1.0 + stats.n / (stats.sum_ln - stats.n * (xmin_f - 0.5).ln());
    let hi = (3.0 * quick.max(1.5)).clamp(6.0, 50.0);
    let (alpha, min_nll) = brent_min(nll, 1.0 + 1e-6, hi, 1e-9, 200);
    let kind = ModelKind::PowerLaw { alpha };
    kind.validate()?;
    Ok((kind, -min_nll))
}

pub(crate) fn fit_log_normal(
    stats: &TailStats,
    xmin: u64,
    warm: Option<[f64; 2]>,
) -> Result<(ModelKind, f64)> {
    if stats.uniq.len() < 2 {
        return Err(degenerate("lognormal"));
    }
    let nll = |p: [f64; 2]| {
        let [mu, sigma] = p;
        if !(1e-4..=25.0).contains(&sigma) || mu.abs() > 60.0 {
            return f64::INFINITY;
        }
        let kind = ModelKind::LogNormal { mu, sigma };
        let mut acc = 0.0;
        for (&x, &c) in stats.uniq.iter().zip(stats.counts) {
            let lp = log_pmf(&kind, xmin, x);
            if !lp.is_finite() {
                return f64::INFINITY;
            }
            acc -= c as f64 * lp;
        }
        acc
    };
    let start = warm.unwrap_or([stats.mean_ln, stats.sd_ln.max(0.2)]);
    let ([mu, sigma], min_nll) = nelder_mead2(nll, start, [0.4, 0.3], 1e-10, 400);
    if !min_nll.is_finite() {
        return Err(Error::Fit {
            family: "lognormal",
            message: "likelihood did not converge".into(),
        });
    }
    let kind = ModelKind::LogNormal { mu, sigma };
    kind.validate()?;
    Ok((kind, -min_nll))
}

pub(crate) fn fit_exponential(stats: &TailStats, xmin: u64) -> Result<(ModelKind, f64)> {
    let mean_excess = stats.sum_x / stats.n - xmin as f64;
    if mean_excess <= 0.0 {
        return Err(degenerate("exponential"));
    }
    // Geometric MLE on x - xmin.
    let lambda = (1.0 + 1.0 / mean_excess).ln();
    let loglik =
        stats.n * (-(-lambda).exp_m1()).ln() - lambda * (stats.sum_x - stats.n * xmin as f64);
    let kind = ModelKind::Exponential { lambda };
    kind.validate()?;
    Ok((kind, loglik))
}

pub(crate) fn fit_poisson(stats: &TailStats, xmin: u64) -> Result<(ModelKind, f64)> {
    let mean = stats.sum_x / stats.n;
    if stats.uniq.len() < 2 && stats.uniq[0] == xmin {
        // All mass at the truncation point: likelihood is maximized by
        // lambda -> 0, which is not a usable rate.
        return Err(degenerate("poisson"));
    }
    let nll = |lambda: f64| {
        if lambda <= 1e-9 {
            return f64::INFINITY;
        }
        let log_q = gamma_lr(xmin as f64, lambda).ln();
        -(stats.sum_x * lambda.ln() - stats.n * lambda - stats.sum_lgamma - stats.n * log_q)
    };
    let hi = (3.0 * mean).max(xmin as f64 + 20.0);
    let (lambda, min_nll) = brent_min(nll, 1e-8, hi, 1e-10, 200);
    let kind = ModelKind::Poisson { lambda };
    kind.validate()?;
    Ok((kind, -min_nll))
}

pub(crate) fn fit_family(
    family: ModelFamily,
    stats: &TailStats,
    xmin: u64,
    warm: Option<[f64; 2]>,
) -> Result<(ModelKind, f64)> {
    match family {
        ModelFamily::PowerLaw => fit_power_law(stats, xmin),
        ModelFamily::LogNormal => fit_log_normal(stats, xmin, warm),
        ModelFamily::Exponential => fit_exponential(stats, xmin),
        ModelFamily::Poisson => fit_poisson(stats, xmin),
    }
}

/// Draws i.i.d. variates from a truncated model. Construction validates the
/// parameters; `draw` is then infallible.
pub struct Sampler {
    kind: ModelKind,
    xmin: u64,
    // Power law: cumulative pmf for xmin, xmin+1, ... so draws are a binary
    // search; the (rare) far tail beyond the table falls back to a zeta
    // bisection.
    table: Vec<f64>,
}

impl Sampler {
    pub fn new(kind: ModelKind, xmin: u64) -> Result<Self> {
        kind.validate()?;
        if xmin < 1 {
            return Err(Error::parameter("xmin must be >= 1"));
        }
        let mut table = Vec::new();
        if let ModelKind::PowerLaw { .. } = kind {
            let mut x = xmin;
            loop {
                let c = cdf(&kind, xmin, x);
                table.push(c);
                if 1.0 - c < 1e-10 || table.len() >= 1 << 16 {
                    break;
                }
                x += 1;
            }
        }
        Ok(Sampler { kind, xmin, table })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.kind {
            ModelKind::PowerLaw { .. } => {
                let u: f64 = rng.random();
                let idx = self.table.partition_point(|&c| c < u);
                if idx < self.table.len() {
                    self.xmin + idx as u64
                } else {
                    self.search_tail(u)
                }
            }
            ModelKind::LogNormal { mu, sigma } => loop {
                let z: f64 = StandardNormal.sample(rng);
                let y = (mu + sigma * z).exp();
                let x = (y + 0.5).floor();
                if x >= self.xmin as f64 && x < u64::MAX as f64 {
                    return x as u64;
                }
            },
            ModelKind::Exponential { lambda } => {
                let u: f64 = rng.random();
                let k = ((-u).ln_1p() / -lambda).floor() as u64;
                self.xmin + k
            }
            ModelKind::Poisson { lambda } => {
                let dist = PoissonDist::new(lambda).expect("validated lambda");
                loop {
                    let y: f64 = dist.sample(rng);
                    if y >= self.xmin as f64 {
                        return y as u64;
                    }
                }
            }
        }
    }

    /// Inverse-CDF bisection past the end of the power-law table.
    fn search_tail(&self, u: f64) -> u64 {
        let mut lo = self.xmin + self.table.len() as u64 - 1; // cdf(lo) < u
        let mut hi = lo.max(1) * 2;
        while cdf(&self.kind, self.xmin, hi) < u {
            lo = hi;
            hi *= 2;
            if hi > 1 << 62 {
                return hi;
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if cdf(&self.kind, self.xmin, mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}
