//! Quantitative summaries and report assembly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::corpus::{Corpus, FollowerCode, MessageRecord};
use crate::error::{Error, Result};
use crate::sentiment::{PolarityCategory, ScoredMention};

/// Product-moment correlation. Errors when either argument is constant (the
/// coefficient is undefined there), so the result is never NaN.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::parameter(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::parameter("need at least 2 points"));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x) * (a - mean_x);
        var_y += (b - mean_y) * (b - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::parameter(
            "correlation undefined for constant input",
        ));
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

// ---------------------------------------------------------------------------
// Engagement summaries

/// Mean engagement per group. Means are totals over group size; a missing
/// reply count contributes zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngagementSummary {
    pub group: String,
    pub n: u64,
    pub mean_retweets: f64,
    pub mean_replies: f64,
    pub mean_likes: f64,
}

/// One row per non-empty group under the given total grouping function.
pub fn engagement_summary<F>(corpus: &Corpus, group_of: F) -> Vec<EngagementSummary>
where
    F: Fn(&MessageRecord) -> String,
{
    let mut acc: BTreeMap<String, (u64, u64, u64, u64)> = BTreeMap::new();
    for r in &corpus.records {
        let e = acc.entry(group_of(r)).or_insert((0, 0, 0, 0));
        e.0 += 1;
        e.1 += r.retweet_count;
        e.2 += r.reply_count.unwrap_or(0);
        e.3 += r.like_count;
    }
    acc.into_iter()
        .map(|(group, (n, rt, rp, lk))| EngagementSummary {
            group,
            n,
            mean_retweets: rt as f64 / n as f64,
            mean_replies: rp as f64 / n as f64,
            mean_likes: lk as f64 / n as f64,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Opinion matrix

/// Counts of categorized mentions for one (follower group, target) cell.
/// Overlap is kept separate from the positive/negative tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpinionCell {
    pub positive: u64,
    pub negative: u64,
    pub neutral: u64,
    pub overlap: u64,
}

impl OpinionCell {
    pub fn total(&self) -> u64 {
        self.positive + self.negative + self.neutral + self.overlap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpinionMatrix {
    /// Keyed by (group name, target name).
    pub cells: BTreeMap<(String, String), OpinionCell>,
    /// Ambiguous mentions (several targets in one record) are tallied
    /// separately per target, mirroring manual-annotation handling.
    pub ambiguous: BTreeMap<(String, String), u64>,
}

/// Cross-tabulates scored target mentions by the author's follower group.
/// `groups` maps a group name to the follower codes it covers; records whose
/// code belongs to no group are skipped.
pub fn opinion_matrix(
    corpus: &Corpus,
    mentions: &[ScoredMention],
    groups: &[(String, Vec<FollowerCode>)],
) -> OpinionMatrix {
    let mut cells: BTreeMap<(String, String), OpinionCell> = BTreeMap::new();
    let mut ambiguous: BTreeMap<(String, String), u64> = BTreeMap::new();
    for m in mentions {
        let code = corpus.records[m.record_index].follower_code;
        let Some((group, _)) = groups.iter().find(|(_, codes)| codes.contains(&code)) else {
            continue;
        };
        let key = (group.clone(), m.target.clone());
        if m.ambiguous {
            *ambiguous.entry(key).or_insert(0) += 1;
            continue;
        }
        let cell = cells.entry(key).or_default();
        match m.category {
            PolarityCategory::Positive => cell.positive += 1,
            PolarityCategory::Negative => cell.negative += 1,
            PolarityCategory::Neutral => cell.neutral += 1,
            PolarityCategory::Overlap => cell.overlap += 1,
        }
    }
    OpinionMatrix { cells, ambiguous }
}

// ---------------------------------------------------------------------------
// Report bundle

/// Formats a float with 6 significant digits, so CSV goldens are byte-stable.
pub fn fmt_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Trim trailing zeros but keep integers unadorned.
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One named section of the final report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    /// Module that produced the artifact.
    pub module: String,
    pub body: SectionBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionBody {
    Json { value: serde_json::Value },
    Csv { header: Vec<String>, rows: Vec<Vec<String>> },
}

/// Everything a run produces, plus the config snapshot and seed registry
/// needed to reproduce it byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub sections: BTreeMap<String, Section>,
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
}

impl ReportBundle {
    pub fn add_json(&mut self, name: &str, module: &str, value: serde_json::Value) {
        self.sections.insert(
            name.to_string(),
            Section {
                module: module.to_string(),
                body: SectionBody::Json { value },
            },
        );
    }

    pub fn add_csv(&mut self, name: &str, module: &str, header: Vec<String>, rows: Vec<Vec<String>>) {
        self.sections.insert(
            name.to_string(),
            Section {
                module: module.to_string(),
                body: SectionBody::Csv { header, rows },
            },
        );
    }
}

/// Writes `index.json` plus one file per section into `dir`. Ordering and
/// number formatting are fixed, so identical bundles produce identical bytes.
pub fn emit_report(bundle: &ReportBundle, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut index_sections = serde_json::Map::new();
    for (name, section) in &bundle.sections {
        let (file_name, contents) = match &section.body {
            SectionBody::Json { value } => (
                format!("{name}.json"),
                format!("{}\n", serde_json::to_string_pretty(&sorted_json(value))?),
            ),
            SectionBody::Csv { header, rows } => {
                let mut out = String::new();
                out.push_str(&header.join(","));
                out.push('\n');
                for row in rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                (format!("{name}.csv"), out)
            }
        };
        let path = dir.join(&file_name);
        std::fs::write(&path, contents)?;
        index_sections.insert(
            name.clone(),
            json!({ "module": section.module, "file": file_name }),
        );
        written.push(path);
    }
    let index = json!({
        "sections": serde_json::Value::Object(index_sections),
        "config": sorted_json(&bundle.config),
        "seeds": bundle.seeds,
    });
    let path = dir.join("index.json");
    std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&index)?))?;
    written.push(path);
    Ok(written)
}

/// Recursively sorts object keys so serialization order never depends on
/// insertion order.
fn sorted_json(v: &serde_json::Value) -> serde_json::Value {
    match v {
        serde_json::Value::Object(map) => {
            let sorted: BTreeMap<String, serde_json::Value> = map
                .iter()
                .map(|(k, val)| (k.clone(), sorted_json(val)))
                .collect();
            serde_json::to_value(sorted).expect("object")
        }
        serde_json::Value::Array(items) => {
            serde_json::Value::Array(items.iter().map(sorted_json).collect())
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{utc, Language};

    #[test]
    fn pearson_identity_and_reflection() {
        let x = vec![1.0, 2.0, 3.0, 5.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_errors() {
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 1.0], &[2.0, 2.0]).is_err());
    }

    #[test]
    fn pearson_symmetry_and_scale_invariance() {
        let x = vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0];
        let y = vec![2.0, 7.0, 1.0, 8.0, 2.0, 8.0];
        let r1 = pearson(&x, &y).unwrap();
        let r2 = pearson(&y, &x).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
        let scaled: Vec<f64> = x.iter().map(|v| 3.5 * v + 11.0).collect();
        assert!((pearson(&scaled, &y).unwrap() - r1).abs() < 1e-12);
        assert!((-1.0..=1.0).contains(&r1));
    }

    fn rec(author: &str, rt: u64, reply: Option<u64>, like: u64) -> MessageRecord {
        MessageRecord {
            id: None,
            author: author.into(),
            timestamp: utc(2016, 12, 1, 10, 0, 0),
            text: format!("{author} {rt} {like}"),
            retweet_count: rt,
            like_count: like,
            reply_count: reply,
            language: Language::De,
            follower_code: FollowerCode::Neither,
            is_retweet: false,
        }
    }

    #[test]
    fn engagement_single_record() {
        let corpus = Corpus::new(vec![rec("a", 3, Some(2), 7)], vec![]);
        let rows = engagement_summary(&corpus, |r| r.author.clone());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 1);
        assert_eq!(
            (rows[0].mean_retweets, rows[0].mean_replies, rows[0].mean_likes),
            (3.0, 2.0, 7.0)
        );
    }

    #[test]
    fn engagement_conservation() {
        let corpus = Corpus::new(
            vec![
                rec("a", 3, Some(1), 7),
                rec("a", 5, None, 1),
                rec("b", 2, Some(4), 0),
            ],
            vec![],
        );
        let rows = engagement_summary(&corpus, |r| r.author.clone());
        let recombined: f64 = rows.iter().map(|r| r.n as f64 * r.mean_retweets).sum();
        let total: u64 = corpus.records.iter().map(|r| r.retweet_count).sum();
        assert!((recombined - total as f64).abs() < 1e-9);
    }

    #[test]
    fn fmt_g6_is_stable() {
        assert_eq!(fmt_g6(0.0), "0");
        assert_eq!(fmt_g6(1.0), "1");
        assert_eq!(fmt_g6(0.008521), "0.008521");
        assert_eq!(fmt_g6(8.994839), "8.99484");
        assert_eq!(fmt_g6(123456.789), "123457");
        assert_eq!(fmt_g6(-0.124134), "-0.124134");
    }

    #[test]
    fn report_bundle_roundtrip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let mut bundle = ReportBundle::default();
        bundle.config = json!({"b": 1, "a": {"z": true, "m": [1, 2]}});
        bundle.seeds.insert("fit".into(), 42);
        bundle.add_json("network", "graphs", json!({"vertices": 5, "edges": 4}));
        bundle.add_csv(
            "shares",
            "botdetect",
            vec!["row".into(), "value".into()],
            vec![vec!["generated".into(), fmt_g6(1.02)]],
        );

        let a_dir = dir.path().join("a");
        let b_dir = dir.path().join("b");
        emit_report(&bundle, &a_dir).unwrap();
        emit_report(&bundle, &b_dir).unwrap();
        for name in ["index.json", "network.json", "shares.csv"] {
            let a = std::fs::read(a_dir.join(name)).unwrap();
            let b = std::fs::read(b_dir.join(name)).unwrap();
            assert_eq!(a, b, "{name} not byte-identical");
        }
        let index: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(a_dir.join("index.json")).unwrap())
                .unwrap();
        assert_eq!(index["sections"]["network"]["module"], "graphs");
        assert_eq!(index["seeds"]["fit"], 42);
    }

    #[test]
    fn empty_bundle_emits_index_only() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&ReportBundle::default(), dir.path()).unwrap();
        assert_eq!(files.len(), 1);
        let index: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
        assert_eq!(index["sections"], json!({}));
    }
}
