//! Multi-family fitting, goodness-of-fit, and pairwise comparison report.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::fit::{fit_model, DegreeSample, FitResult};
use super::gof::{goodness_of_fit_with, GofResult, XminPolicy};
use super::models::{ModelFamily, ModelKind};
use super::vuong::{vuong_compare_with, CommonTail, Verdict, VuongResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SelectConfig {
    /// Bootstrap simulations per family (5000 is the reference setting;
    /// 1000 is the desk-scale profile).
    pub n_sims: usize,
    pub seed: u64,
    /// Vuong verdict threshold.
    pub significance: f64,
    pub tail_policy: CommonTail,
    pub xmin_policy: XminPolicy,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            n_sims: 5000,
            seed: 0,
            significance: 0.1,
            tail_policy: CommonTail::MinXmin,
            xmin_policy: XminPolicy::Refit,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyOutcome {
    pub family: ModelFamily,
    pub fit: Option<FitResult>,
    pub gof: Option<GofResult>,
    /// Fit failure message when the family could not be fitted.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub first: ModelFamily,
    pub second: ModelFamily,
    #[serde(flatten)]
    pub result: VuongResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionReport {
    pub families: Vec<FamilyOutcome>,
    pub comparisons: Vec<Comparison>,
    /// The single family favored by both criteria (wins every pairwise test
    /// decisively *and* holds the best goodness-of-fit p-value), when one
    /// exists. Conflicting evidence leaves this empty.
    pub favored: Option<ModelFamily>,
    /// True when the pairwise tests single out a winner but the
    /// goodness-of-fit ranking disagrees with it.
    pub conflicted: bool,
}

impl SelectionReport {
    pub fn outcome(&self, family: ModelFamily) -> Option<&FamilyOutcome> {
        self.families.iter().find(|f| f.family == family)
    }

    pub fn comparison(&self, a: ModelFamily, b: ModelFamily) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .find(|c| (c.first == a && c.second == b) || (c.first == b && c.second == a))
    }

    /// JSON shape: `{families: {name: {params, xmin, n_tail, ks, gof_p}},
    /// comparisons: [{a, b, log_lr, stat, p, verdict}], ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut families = serde_json::Map::new();
        for f in &self.families {
            let entry = match (&f.fit, &f.error) {
                (Some(fit), _) => json!({
                    "params": fit.model,
                    "xmin": fit.xmin,
                    "n_tail": fit.n_tail,
                    "ks": fit.ks,
                    "loglik": fit.loglik,
                    "small_tail": fit.small_tail,
                    "gof_p": f.gof.as_ref().map(|g| g.p_value),
                }),
                (None, Some(err)) => json!({ "error": err }),
                (None, None) => json!({}),
            };
            families.insert(f.family.name().to_string(), entry);
        }
        let comparisons: Vec<_> = self
            .comparisons
            .iter()
            .map(|c| {
                json!({
                    "a": c.first.name(),
                    "b": c.second.name(),
                    "log_lr": c.result.log_lr,
                    "stat": c.result.normalized_stat,
                    "p": c.result.p_value,
                    "verdict": format!("{:?}", c.result.verdict),
                    "tail_xmin": c.result.tail_xmin,
                    "n_common": c.result.n_common,
                })
            })
            .collect();
        json!({
            "families": families,
            "comparisons": comparisons,
            "favored": self.favored.map(|f| f.name()),
            "conflicted": self.conflicted,
        })
    }
}

/// Fits every family, bootstraps a goodness-of-fit p-value for each, and runs
/// all pairwise Vuong comparisons. Fit failures are recorded per family, not
/// fatal. No single winner is declared when the two criteria conflict.
pub fn select_best(
    sample: &DegreeSample,
    families: &[ModelFamily],
    config: &SelectConfig,
) -> Result<SelectionReport> {
    if families.len() < 2 {
        return Err(Error::parameter("need at least 2 families to compare"));
    }

    let mut outcomes = Vec::with_capacity(families.len());
    for (i, &family) in families.iter().enumerate() {
        let outcome = match fit_model(sample, family, None) {
            Ok(fit) => {
                // Per-family seed offset keeps the bootstrap streams of the
                // different families disjoint.
                let seed = config
                    .seed
                    .wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let gof =
                    goodness_of_fit_with(sample, &fit, config.n_sims, seed, config.xmin_policy)?;
                FamilyOutcome {
                    family,
                    fit: Some(fit),
                    gof: Some(gof),
                    error: None,
                }
            }
            Err(e) => FamilyOutcome {
                family,
                fit: None,
                gof: None,
                error: Some(e.to_string()),
            },
        };
        outcomes.push(outcome);
    }

    let mut comparisons = Vec::new();
    for i in 0..outcomes.len() {
        for j in (i + 1)..outcomes.len() {
            let (Some(fa), Some(fb)) = (&outcomes[i].fit, &outcomes[j].fit) else {
                continue;
            };
            let result = vuong_compare_with(
                sample,
                fa,
                fb,
                config.tail_policy,
                config.significance,
            )?;
            comparisons.push(Comparison {
                first: outcomes[i].family,
                second: outcomes[j].family,
                result,
            });
        }
    }

    // Vuong winner: decisively favored in every comparison it appears in.
    let fitted: Vec<ModelFamily> = outcomes
        .iter()
        .filter(|o| o.fit.is_some())
        .map(|o| o.family)
        .collect();
    let vuong_winner = fitted.iter().copied().find(|&f| {
        let involved: Vec<_> = comparisons
            .iter()
            .filter(|c| c.first == f || c.second == f)
            .collect();
        !involved.is_empty()
            && involved.iter().all(|c| {
                (c.first == f && c.result.verdict == Verdict::FirstFavored)
                    || (c.second == f && c.result.verdict == Verdict::SecondFavored)
            })
    });

    // Goodness-of-fit ranking.
    let gof_best = outcomes
        .iter()
        .filter_map(|o| o.gof.as_ref().map(|g| (o.family, g.p_value)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(f, _)| f);

    let (favored, conflicted) = match (vuong_winner, gof_best) {
        (Some(v), Some(g)) if v == g => (Some(v), false),
        (Some(_), Some(_)) => (None, true),
        (Some(v), None) => (Some(v), false),
        (None, _) => (None, false),
    };

    Ok(SelectionReport {
        families: outcomes,
        comparisons,
        favored,
        conflicted,
    })
}

/// Draws `n` i.i.d. values from a truncated model; deterministic given seed.
pub fn sample_model(kind: ModelKind, xmin: u64, n: usize, seed: u64) -> Result<DegreeSample> {
    if n < 1 {
        return Err(Error::parameter("n must be >= 1"));
    }
    let sampler = super::models::Sampler::new(kind, xmin)?;
    let mut rng = crate::rng::stream_rng(seed, 0);
    DegreeSample::new((0..n).map(|_| sampler.draw(&mut rng)).collect())
}
