//! Keyword-defined information streams, retweet trajectories, and annotation
//! joins.

use std::collections::{BTreeMap, HashMap, HashSet};

use chrono::NaiveDate;
use regex::RegexBuilder;
use serde::{Deserialize, Serialize};

use crate::corpus::{daily_counts, looks_like_retweet, text_hash, Corpus, DailySeries, Language, MessageRecord};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Keyword streams

/// A named set of case-insensitive patterns tracked over time, optionally
/// restricted to one language.
#[derive(Debug, Clone)]
pub struct KeywordStream {
    pub name: String,
    pub lang: Option<Language>,
    patterns: Vec<regex::Regex>,
}

#[derive(Debug, Deserialize)]
struct StreamSpec {
    name: String,
    patterns: Vec<String>,
    #[serde(default)]
    lang: Option<String>,
}

impl KeywordStream {
    /// Compiles the patterns; invalid ones fail here, never mid-run.
    pub fn new(name: &str, patterns: &[String], lang: Option<Language>) -> Result<KeywordStream> {
        if patterns.is_empty() {
            return Err(Error::config(format!("stream {name:?} has no patterns")));
        }
        let compiled = patterns
            .iter()
            .map(|p| {
                RegexBuilder::new(p)
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| Error::config(format!("stream {name:?} pattern {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KeywordStream {
            name: name.to_string(),
            lang,
            patterns: compiled,
        })
    }

    /// Loads stream definitions from JSON: `[{name, patterns[], lang?}]`.
    /// Stream names must be unique within a file.
    pub fn load_definitions<R: std::io::Read>(reader: R) -> Result<Vec<KeywordStream>> {
        let specs: Vec<StreamSpec> = serde_json::from_reader(reader)?;
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(specs.len());
        for spec in specs {
            if !seen.insert(spec.name.clone()) {
                return Err(Error::config(format!("duplicate stream name {:?}", spec.name)));
            }
            let lang = spec.lang.as_deref().map(Language::parse_tag);
            out.push(KeywordStream::new(&spec.name, &spec.patterns, lang)?);
        }
        Ok(out)
    }

    /// A record matching several patterns of this stream counts once.
    pub fn matches(&self, record: &MessageRecord) -> bool {
        if let Some(lang) = self.lang {
            if record.language != lang {
                return false;
            }
        }
        self.patterns.iter().any(|p| p.is_match(&record.text))
    }
}

/// Daily count of records matching the stream, over the given range.
pub fn track_stream(
    corpus: &Corpus,
    stream: &KeywordStream,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<DailySeries> {
    let matching = Corpus {
        records: corpus
            .records
            .iter()
            .filter(|r| stream.matches(r))
            .cloned()
            .collect(),
        provenance: corpus.provenance.clone(),
        dedup_removed: 0,
    };
    daily_counts(&matching, start, end, vec![])
}

// ---------------------------------------------------------------------------
// Retweet trajectories

/// How a message is identified: by explicit id, or by the hash of its
/// canonical text (retweet prefixes stripped, whitespace collapsed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageKey {
    Id(String),
    TextHash(u64),
}

/// Canonical text for spread matching: leading `RT @user:` prefixes removed,
/// whitespace runs collapsed. Captures exact-text copies only.
pub fn canonical_spread_text(text: &str) -> String {
    let mut t = text.trim();
    while looks_like_retweet(t) {
        match t.find(':') {
            Some(pos) => t = t[pos + 1..].trim(),
            None => {
                t = "";
                break;
            }
        }
    }
    t.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn spread_key(record: &MessageRecord) -> u64 {
    text_hash(&canonical_spread_text(&record.text))
}

/// Cumulative spread of one message over time, split by follower code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub key: MessageKey,
    pub start: NaiveDate,
    pub end: NaiveDate,
    /// Cumulative retweet counts per day, one row per day, split by
    /// follower code 0..=3.
    pub cumulative: Vec<[u64; 4]>,
    pub distinct_spreaders: [u64; 4],
    pub total_retweets: u64,
    pub mean_retweets_per_spreader: f64,
    /// Largest share of the total attributable to a single spreader, in
    /// percent.
    pub max_spreader_share: f64,
}

impl Trajectory {
    /// Total cumulative count on the last day, summed over codes.
    pub fn final_total(&self) -> u64 {
        self.cumulative.last().map(|row| row.iter().sum()).unwrap_or(0)
    }
}

/// Tracks how a message spread: all records sharing the message's canonical
/// text, excluding the origin record itself, partitioned by the spreader's
/// follower code.
pub fn retweet_trajectory(corpus: &Corpus, key: &MessageKey) -> Result<Trajectory> {
    // Resolve the origin record.
    let origin_idx = match key {
        MessageKey::Id(id) => corpus
            .records
            .iter()
            .position(|r| r.id.as_deref() == Some(id.as_str()))
            .ok_or_else(|| Error::NotFound(format!("message id {id:?}")))?,
        MessageKey::TextHash(h) => corpus
            .records
            .iter()
            .position(|r| spread_key(r) == *h)
            .ok_or_else(|| Error::NotFound(format!("message text hash {h}")))?,
    };
    let hash = spread_key(&corpus.records[origin_idx]);

    let spread: Vec<&MessageRecord> = corpus
        .records
        .iter()
        .enumerate()
        .filter(|&(i, r)| i != origin_idx && spread_key(r) == hash)
        .map(|(_, r)| r)
        .collect();

    let origin_date = corpus.records[origin_idx].date();
    let start = spread
        .iter()
        .map(|r| r.date())
        .min()
        .unwrap_or(origin_date)
        .min(origin_date);
    let end = spread
        .iter()
        .map(|r| r.date())
        .max()
        .unwrap_or(origin_date)
        .max(origin_date);

    let days = (end - start).num_days() as usize + 1;
    let mut daily = vec![[0u64; 4]; days];
    let mut spreaders: [HashSet<String>; 4] = Default::default();
    let mut per_spreader: HashMap<String, u64> = HashMap::new();
    for r in &spread {
        let code = r.follower_code.code() as usize;
        let day = (r.date() - start).num_days() as usize;
        daily[day][code] += 1;
        spreaders[code].insert(r.author.to_lowercase());
        *per_spreader.entry(r.author.to_lowercase()).or_insert(0) += 1;
    }

    // Prefix sums.
    let mut cumulative = daily.clone();
    for d in 1..days {
        for c in 0..4 {
            cumulative[d][c] += cumulative[d - 1][c];
        }
    }

    let total = spread.len() as u64;
    let n_spreaders: u64 = spreaders.iter().map(|s| s.len() as u64).sum();
    let mean = if n_spreaders == 0 {
        0.0
    } else {
        total as f64 / n_spreaders as f64
    };
    let max_share = per_spreader
        .values()
        .max()
        .map(|&m| 100.0 * m as f64 / total as f64)
        .unwrap_or(0.0);

    Ok(Trajectory {
        key: key.clone(),
        start,
        end,
        cumulative,
        distinct_spreaders: [
            spreaders[0].len() as u64,
            spreaders[1].len() as u64,
            spreaders[2].len() as u64,
            spreaders[3].len() as u64,
        ],
        total_retweets: total,
        mean_retweets_per_spreader: mean,
        max_spreader_share: max_share,
    })
}

// ---------------------------------------------------------------------------
// Annotation joins

/// Analyst-supplied labels keyed by message id or canonical-text hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationSet {
    pub entries: BTreeMap<String, String>,
    pub vocabulary: Vec<String>,
}

impl AnnotationSet {
    /// CSV rows `message_key,label`; every label must come from the declared
    /// vocabulary, which must be non-empty.
    pub fn from_csv<R: std::io::Read>(reader: R, vocabulary: &[String]) -> Result<AnnotationSet> {
        if vocabulary.is_empty() {
            return Err(Error::config("annotation vocabulary is empty"));
        }
        let vocab: HashSet<&str> = vocabulary.iter().map(String::as_str).collect();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(reader);
        let mut entries = BTreeMap::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let key = row
                .get(0)
                .filter(|k| !k.is_empty())
                .ok_or_else(|| Error::config(format!("annotation row {}: empty key", i + 1)))?;
            let label = row
                .get(1)
                .filter(|l| !l.is_empty())
                .ok_or_else(|| Error::config(format!("annotation row {}: empty label", i + 1)))?;
            if !vocab.contains(label) {
                return Err(Error::config(format!(
                    "annotation row {}: label {label:?} not in vocabulary",
                    i + 1
                )));
            }
            entries.insert(key.to_string(), label.to_string());
        }
        Ok(AnnotationSet {
            entries,
            vocabulary: vocabulary.to_vec(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationJoin {
    /// Matched-record counts per label (all vocabulary labels present).
    pub counts: BTreeMap<String, u64>,
    /// Annotation keys that resolve to no record.
    pub unmatched: Vec<String>,
}

/// Joins annotations against the corpus: a key matches a record by explicit
/// id or by canonical-text hash (decimal). Counts are per label over matched
/// records; unmatched keys are reported, not dropped.
pub fn join_annotations(corpus: &Corpus, annotations: &AnnotationSet) -> Result<AnnotationJoin> {
    let mut by_id: HashMap<&str, usize> = HashMap::new();
    let mut by_hash: HashMap<u64, usize> = HashMap::new();
    for r in &corpus.records {
        if let Some(id) = &r.id {
            *by_id.entry(id.as_str()).or_insert(0) += 1;
        }
        *by_hash.entry(spread_key(r)).or_insert(0) += 1;
    }

    let mut counts: BTreeMap<String, u64> = annotations
        .vocabulary
        .iter()
        .map(|l| (l.clone(), 0))
        .collect();
    let mut unmatched = Vec::new();
    for (key, label) in &annotations.entries {
        let matched = by_id.get(key.as_str()).copied().unwrap_or_else(|| {
            key.parse::<u64>()
                .ok()
                .and_then(|h| by_hash.get(&h).copied())
                .unwrap_or(0)
        });
        if matched == 0 {
            unmatched.push(key.clone());
        } else {
            *counts.get_mut(label).expect("vocab label") += matched as u64;
        }
    }
    Ok(AnnotationJoin { counts, unmatched })
}
