//! Corpus ingestion, cleaning, and partitioning.
//!
//! Messages are read from JSON-lines or CSV archives, sorted into a canonical
//! order (timestamp, then author, then text hash), deduplicated, normalized
//! against a replacement table, filtered by hashtag selectors, annotated with
//! follower codes, and aggregated into daily series.

use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    De,
    En,
    Other,
}

impl Language {
    pub fn parse_tag(tag: &str) -> Language {
        match tag.to_ascii_lowercase().as_str() {
            "de" | "de-at" | "de-de" => Language::De,
            "en" | "en-us" | "en-gb" => Language::En,
            _ => Language::Other,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Language::De => "de",
            Language::En => "en",
            Language::Other => "other",
        }
    }
}

/// Which candidate(s) the author follows: 0 = neither, 1 = candidate A,
/// 2 = candidate B, 3 = both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum FollowerCode {
    Neither,
    OnlyA,
    OnlyB,
    Both,
}

impl FollowerCode {
    pub const ALL: [FollowerCode; 4] = [
        FollowerCode::Neither,
        FollowerCode::OnlyA,
        FollowerCode::OnlyB,
        FollowerCode::Both,
    ];

    pub fn code(&self) -> u8 {
        match self {
            FollowerCode::Neither => 0,
            FollowerCode::OnlyA => 1,
            FollowerCode::OnlyB => 2,
            FollowerCode::Both => 3,
        }
    }

    /// True when the author follows candidate A (exclusively or not).
    pub fn follows_a(&self) -> bool {
        matches!(self, FollowerCode::OnlyA | FollowerCode::Both)
    }

    pub fn follows_b(&self) -> bool {
        matches!(self, FollowerCode::OnlyB | FollowerCode::Both)
    }
}

impl TryFrom<u8> for FollowerCode {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(FollowerCode::Neither),
            1 => Ok(FollowerCode::OnlyA),
            2 => Ok(FollowerCode::OnlyB),
            3 => Ok(FollowerCode::Both),
            _ => Err(format!("follower code {v} outside 0..=3")),
        }
    }
}

impl From<FollowerCode> for u8 {
    fn from(c: FollowerCode) -> u8 {
        c.code()
    }
}

/// One social-media message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub id: Option<String>,
    pub author: String,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub retweet_count: u64,
    pub like_count: u64,
    pub reply_count: Option<u64>,
    pub language: Language,
    pub follower_code: FollowerCode,
    pub is_retweet: bool,
}

impl MessageRecord {
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

/// True when the text starts with the conventional retweet prefix.
pub fn looks_like_retweet(text: &str) -> bool {
    let t = text.trim_start();
    t.len() >= 4 && t[..4].eq_ignore_ascii_case("rt @")
}

/// Stable 64-bit FNV-1a over the text, used for canonical ordering and dedup
/// keys. Not cryptographic; just deterministic across runs.
pub fn text_hash(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub sources: Vec<String>,
    pub ingested_at: DateTime<Utc>,
}

/// An ordered message collection. Records are kept in canonical order:
/// (timestamp, author, text hash).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub records: Vec<MessageRecord>,
    pub provenance: Provenance,
    pub dedup_removed: u64,
}

impl Corpus {
    pub fn new(mut records: Vec<MessageRecord>, sources: Vec<String>) -> Corpus {
        canonical_sort(&mut records);
        Corpus {
            records,
            provenance: Provenance {
                sources,
                ingested_at: Utc::now(),
            },
            dedup_removed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct authors, case-folded.
    pub fn authors(&self) -> HashSet<String> {
        self.records.iter().map(|r| r.author.to_lowercase()).collect()
    }

    /// Splits by the language field; sizes always sum to the corpus size.
    pub fn partition_by_language(&self) -> BTreeMap<Language, Corpus> {
        let mut out: BTreeMap<Language, Vec<MessageRecord>> = BTreeMap::new();
        for r in &self.records {
            out.entry(r.language).or_default().push(r.clone());
        }
        out.into_iter()
            .map(|(lang, records)| {
                (
                    lang,
                    Corpus {
                        records,
                        provenance: self.provenance.clone(),
                        dedup_removed: self.dedup_removed,
                    },
                )
            })
            .collect()
    }

    /// Keeps only records in the given language set.
    pub fn retain_languages(&self, langs: &[Language]) -> Corpus {
        Corpus {
            records: self
                .records
                .iter()
                .filter(|r| langs.contains(&r.language))
                .cloned()
                .collect(),
            provenance: self.provenance.clone(),
            dedup_removed: self.dedup_removed,
        }
    }
}

fn canonical_sort(records: &mut [MessageRecord]) {
    records.sort_by(|a, b| {
        (a.timestamp, &a.author, text_hash(&a.text))
            .cmp(&(b.timestamp, &b.author, text_hash(&b.text)))
    });
}

// ---------------------------------------------------------------------------
// Ingestion

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceFormat {
    JsonLines,
    Csv,
}

/// A record-level ingestion failure; the line is counted and reported, never
/// silently dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub rejects: Vec<Reject>,
}

/// Stop-word-ratio language guess used when the source record carries no
/// language tag.
#[derive(Debug, Clone)]
pub struct LanguageHeuristic {
    pub de_stopwords: HashSet<String>,
    pub en_stopwords: HashSet<String>,
    /// Minimum stop-word ratio to accept a language; below it the record
    /// falls back to `other`.
    pub min_ratio: f64,
}

const DE_STOPWORDS: &[&str] = &[
    "der", "die", "das", "und", "ist", "ich", "nicht", "ein", "eine", "mit", "für", "auf",
    "den", "von", "zu", "im", "sich", "des", "auch", "es", "an", "wir", "sie", "er", "so",
    "wie", "aber", "bei", "nur", "aus", "wird", "sind", "noch", "nach", "wenn", "hat", "war",
];

const EN_STOPWORDS: &[&str] = &[
    "the", "and", "is", "i", "not", "a", "an", "with", "for", "on", "of", "to", "in", "it",
    "we", "they", "he", "she", "as", "but", "at", "only", "from", "will", "are", "still",
    "after", "if", "has", "was", "this", "that", "be", "by", "or", "have",
];

impl Default for LanguageHeuristic {
    fn default() -> Self {
        LanguageHeuristic {
            de_stopwords: DE_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            en_stopwords: EN_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            min_ratio: 0.10,
        }
    }
}

impl LanguageHeuristic {
    pub fn classify(&self, text: &str) -> Language {
        let mut total = 0usize;
        let mut de = 0usize;
        let mut en = 0usize;
        for token in tokenize_words(text) {
            total += 1;
            if self.de_stopwords.contains(&token) {
                de += 1;
            }
            if self.en_stopwords.contains(&token) {
                en += 1;
            }
        }
        if total == 0 {
            return Language::Other;
        }
        let de_ratio = de as f64 / total as f64;
        let en_ratio = en as f64 / total as f64;
        if de_ratio < self.min_ratio && en_ratio < self.min_ratio {
            Language::Other
        } else if de_ratio >= en_ratio {
            Language::De
        } else {
            Language::En
        }
    }
}

/// Lowercased word tokens: maximal runs of alphanumeric characters plus
/// apostrophe/underscore.
pub(crate) fn tokenize_words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '\'' || c == '_' {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<String>,
    author: Option<String>,
    ts: Option<String>,
    text: Option<String>,
    #[serde(default)]
    rt_count: Option<u64>,
    #[serde(default)]
    like_count: Option<u64>,
    #[serde(default)]
    reply_count: Option<u64>,
    #[serde(default)]
    lang: Option<String>,
    #[serde(default)]
    is_retweet: Option<bool>,
}

fn finish_record(
    raw: RawRecord,
    heuristic: &LanguageHeuristic,
) -> std::result::Result<MessageRecord, String> {
    let author = match raw.author {
        Some(a) if !a.trim().is_empty() => a.trim().to_string(),
        _ => return Err("missing author".into()),
    };
    let ts = raw.ts.as_deref().ok_or("missing ts")?;
    let timestamp = DateTime::parse_from_rfc3339(ts)
        .map_err(|e| format!("bad timestamp {ts:?}: {e}"))?
        .with_timezone(&Utc);
    let text = match raw.text {
        Some(t) if !t.is_empty() => t,
        _ => return Err("missing text".into()),
    };
    let language = match raw.lang.as_deref() {
        Some(tag) if !tag.is_empty() => Language::parse_tag(tag),
        _ => heuristic.classify(&text),
    };
    let is_retweet = raw.is_retweet.unwrap_or(false) || looks_like_retweet(&text);
    Ok(MessageRecord {
        id: raw.id.filter(|s| !s.is_empty()),
        author,
        timestamp,
        text,
        retweet_count: raw.rt_count.unwrap_or(0),
        like_count: raw.like_count.unwrap_or(0),
        reply_count: raw.reply_count,
        language,
        follower_code: FollowerCode::Neither,
        is_retweet,
    })
}

/// Reads a message archive. Malformed records become [`Reject`] entries; an
/// unreadable stream is a fatal error.
pub fn ingest<R: BufRead>(reader: R, format: SourceFormat, source_name: &str) -> Result<Ingested> {
    ingest_with(reader, format, source_name, &LanguageHeuristic::default())
}

pub fn ingest_with<R: BufRead>(
    reader: R,
    format: SourceFormat,
    source_name: &str,
    heuristic: &LanguageHeuristic,
) -> Result<Ingested> {
    let mut records = Vec::new();
    let mut rejects = Vec::new();

    match format {
        SourceFormat::JsonLines => {
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| Error::Ingest(format!("{source_name}: {e}")))?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: std::result::Result<RawRecord, _> = serde_json::from_str(&line);
                match parsed {
                    Ok(raw) => match finish_record(raw, heuristic) {
                        Ok(rec) => records.push(rec),
                        Err(reason) => rejects.push(Reject { line: i + 1, reason }),
                    },
                    Err(e) => rejects.push(Reject {
                        line: i + 1,
                        reason: format!("invalid json: {e}"),
                    }),
                }
            }
        }
        SourceFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
            let headers = rdr
                .headers()
                .map_err(|e| Error::Ingest(format!("{source_name}: {e}")))?
                .clone();
            let field = |rec: &csv::StringRecord, name: &str| -> Option<String> {
                headers
                    .iter()
                    .position(|h| h == name)
                    .and_then(|i| rec.get(i))
                    .map(str::to_string)
                    .filter(|s| !s.is_empty())
            };
            for (i, row) in rdr.records().enumerate() {
                let line = i + 2; // header is line 1
                let row = match row {
                    Ok(r) => r,
                    Err(e) => {
                        rejects.push(Reject {
                            line,
                            reason: format!("invalid csv row: {e}"),
                        });
                        continue;
                    }
                };
                let parse_count = |s: Option<String>| -> std::result::Result<Option<u64>, String> {
                    match s {
                        None => Ok(None),
                        Some(v) => v
                            .parse::<u64>()
                            .map(Some)
                            .map_err(|_| format!("bad count {v:?}")),
                    }
                };
                let raw = (|| -> std::result::Result<RawRecord, String> {
                    Ok(RawRecord {
                        id: field(&row, "id"),
                        author: field(&row, "author"),
                        ts: field(&row, "ts"),
                        text: field(&row, "text"),
                        rt_count: parse_count(field(&row, "rt_count"))?,
                        like_count: parse_count(field(&row, "like_count"))?,
                        reply_count: parse_count(field(&row, "reply_count"))?,
                        lang: field(&row, "lang"),
                        is_retweet: match field(&row, "is_retweet").as_deref() {
                            None => None,
                            Some("true") | Some("1") => Some(true),
                            Some("false") | Some("0") => Some(false),
                            Some(v) => return Err(format!("bad is_retweet {v:?}")),
                        },
                    })
                })();
                match raw.and_then(|r| finish_record(r, heuristic)) {
                    Ok(rec) => records.push(rec),
                    Err(reason) => rejects.push(Reject { line, reason }),
                }
            }
        }
    }

    Ok(Ingested {
        corpus: Corpus::new(records, vec![source_name.to_string()]),
        rejects,
    })
}

// ---------------------------------------------------------------------------
// Deduplication

/// Dedup key: explicit message id when present, otherwise (case-folded
/// author, timestamp, text hash).
fn dedup_key(r: &MessageRecord) -> (Option<String>, String, i64, u64) {
    match &r.id {
        Some(id) => (Some(id.clone()), String::new(), 0, 0),
        None => (
            None,
            r.author.to_lowercase(),
            r.timestamp.timestamp(),
            text_hash(&r.text),
        ),
    }
}

/// Keeps the first record (in canonical order) per dedup key. The removed
/// count accumulates, so deduplication is idempotent on the whole value.
pub fn deduplicate(corpus: Corpus) -> Corpus {
    let mut seen = HashSet::with_capacity(corpus.len());
    let before = corpus.records.len();
    let mut records = Vec::with_capacity(before);
    for r in corpus.records {
        if seen.insert(dedup_key(&r)) {
            records.push(r);
        }
    }
    let removed = (before - records.len()) as u64;
    Corpus {
        records,
        provenance: corpus.provenance,
        dedup_removed: corpus.dedup_removed + removed,
    }
}

// ---------------------------------------------------------------------------
// Text normalization

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationEntry {
    pub pattern: String,
    pub replacement: String,
    pub case_insensitive: bool,
}

/// Ordered literal replacements; the shipped table is idempotent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormalizationTable {
    pub entries: Vec<NormalizationEntry>,
}

impl NormalizationTable {
    /// Two-column CSV (pattern, replacement) with an optional third column
    /// `ci` marking case-insensitive entries. No header row.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<NormalizationTable> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut entries = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let pattern = row
                .get(0)
                .filter(|p| !p.is_empty())
                .ok_or_else(|| {
                    Error::config(format!("normalization row {}: empty pattern", i + 1))
                })?
                .to_string();
            let replacement = row.get(1).unwrap_or("").to_string();
            let case_insensitive = row.get(2).map(|c| c.trim() == "ci").unwrap_or(false);
            entries.push(NormalizationEntry {
                pattern,
                replacement,
                case_insensitive,
            });
        }
        Ok(NormalizationTable { entries })
    }
}

fn replace_ci(text: &str, pattern: &str, replacement: &str) -> String {
    let lower_text = text.to_lowercase();
    let lower_pat = pattern.to_lowercase();
    if lower_pat.is_empty() {
        return text.to_string();
    }
    if lower_text.len() != text.len() {
        // Case folding changed byte offsets; use the char-wise scan instead.
        return replace_ci_chars(text, &lower_pat, replacement);
    }
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while let Some(pos) = lower_text[i..].find(&lower_pat) {
        out.push_str(&text[i..i + pos]);
        out.push_str(replacement);
        i += pos + lower_pat.len();
    }
    out.push_str(&text[i..]);
    out
}

fn replace_ci_chars(text: &str, lower_pat: &str, replacement: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let pat: Vec<char> = lower_pat.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        if i + pat.len() <= chars.len() {
            for (j, pc) in pat.iter().enumerate() {
                let mut lowered = chars[i + j].to_lowercase();
                if !(lowered.next() == Some(*pc) && lowered.next().is_none()) {
                    out.push(chars[i]);
                    i += 1;
                    continue 'outer;
                }
            }
            out.push_str(replacement);
            i += pat.len();
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

/// Applies all table entries left-to-right in table order. Matches are
/// literal; case-insensitive only where the entry opts in.
pub fn normalize_text(text: &str, table: &NormalizationTable) -> String {
    let mut out = text.to_string();
    for e in &table.entries {
        if e.case_insensitive {
            out = replace_ci(&out, &e.pattern, &e.replacement);
        } else if !e.pattern.is_empty() {
            out = out.replace(&e.pattern, &e.replacement);
        }
    }
    out
}

/// Normalizes every record's text (re-sorting afterwards, since the canonical
/// order keys on the text hash).
pub fn normalize_corpus(mut corpus: Corpus, table: &NormalizationTable) -> Corpus {
    for r in &mut corpus.records {
        r.text = normalize_text(&r.text, table);
    }
    canonical_sort(&mut corpus.records);
    corpus
}

// ---------------------------------------------------------------------------
// Hashtags and selector filtering

/// Case-folded hashtags occurring in the text: `#` followed by letters,
/// digits, or underscores.
pub fn extract_hashtags(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '#' {
            continue;
        }
        let mut tag = String::new();
        while let Some(&n) = chars.peek() {
            if n.is_alphanumeric() || n == '_' {
                tag.extend(n.to_lowercase());
                chars.next();
            } else {
                break;
            }
        }
        if !tag.is_empty() {
            out.push(format!("#{tag}"));
        }
    }
    out
}

/// Hashtag retention rules: any single hashtag, or all members of any
/// conjunction, must occur in the record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectorSet {
    pub hashtags: Vec<String>,
    pub conjunctions: Vec<Vec<String>>,
}

impl SelectorSet {
    pub fn new(hashtags: Vec<String>, conjunctions: Vec<Vec<String>>) -> Result<SelectorSet> {
        let fold = |t: &String| -> Result<String> {
            let tag = t.to_lowercase();
            if !tag.starts_with('#') || tag.len() < 2 {
                return Err(Error::config(format!("selector {t:?} must start with '#'")));
            }
            Ok(tag)
        };
        let hashtags: Vec<String> = hashtags.iter().map(&fold).collect::<Result<_>>()?;
        let conjunctions: Vec<Vec<String>> = conjunctions
            .iter()
            .map(|c| c.iter().map(&fold).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if hashtags.is_empty() && conjunctions.is_empty() {
            return Err(Error::config("selector set is empty"));
        }
        for c in &conjunctions {
            if c.is_empty() {
                return Err(Error::config("empty conjunction in selector set"));
            }
        }
        Ok(SelectorSet {
            hashtags,
            conjunctions,
        })
    }

    pub fn matches(&self, text: &str) -> bool {
        let tags: HashSet<String> = extract_hashtags(text).into_iter().collect();
        if self.hashtags.iter().any(|h| tags.contains(h)) {
            return true;
        }
        self.conjunctions
            .iter()
            .any(|c| c.iter().all(|h| tags.contains(h)))
    }
}

/// Retains records matching the selector set; order-preserving sub-multiset.
pub fn filter_by_selectors(corpus: &Corpus, selectors: &SelectorSet) -> Corpus {
    Corpus {
        records: corpus
            .records
            .iter()
            .filter(|r| selectors.matches(&r.text))
            .cloned()
            .collect(),
        provenance: corpus.provenance.clone(),
        dedup_removed: corpus.dedup_removed,
    }
}

// ---------------------------------------------------------------------------
// Follower codes

/// Assigns each record's follower code from case-folded username sets.
pub fn assign_follower_codes(
    mut corpus: Corpus,
    followers_a: &HashSet<String>,
    followers_b: &HashSet<String>,
) -> Corpus {
    for r in &mut corpus.records {
        let author = r.author.to_lowercase();
        let a = followers_a.contains(&author);
        let b = followers_b.contains(&author);
        r.follower_code = match (a, b) {
            (false, false) => FollowerCode::Neither,
            (true, false) => FollowerCode::OnlyA,
            (false, true) => FollowerCode::OnlyB,
            (true, true) => FollowerCode::Both,
        };
    }
    corpus
}

/// Loads a follower list: one username per line, case-folded.
pub fn load_follower_list<R: BufRead>(reader: R) -> Result<HashSet<String>> {
    let mut out = HashSet::new();
    for line in reader.lines() {
        let line = line?;
        let name = line.trim().to_lowercase();
        if !name.is_empty() {
            out.insert(name);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Daily series

/// Per-day counts over an inclusive date range, with event markers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySeries {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub counts: Vec<u64>,
    pub markers: Vec<(NaiveDate, String)>,
}

impl DailySeries {
    pub fn day_index(&self, date: NaiveDate) -> Option<usize> {
        if date < self.start || date > self.end {
            return None;
        }
        Some((date - self.start).num_days() as usize)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Index of the (first) maximum-count day.
    pub fn argmax(&self) -> Option<usize> {
        let max = *self.counts.iter().max()?;
        self.counts.iter().position(|&c| c == max)
    }
}

/// Counts in-range records per UTC day. Day boundaries are UTC days.
pub fn daily_counts(
    corpus: &Corpus,
    start: NaiveDate,
    end: NaiveDate,
    markers: Vec<(NaiveDate, String)>,
) -> Result<DailySeries> {
    if end < start {
        return Err(Error::parameter(format!("end {end} before start {start}")));
    }
    for (d, label) in &markers {
        if *d < start || *d > end {
            return Err(Error::parameter(format!(
                "marker {label:?} at {d} outside range {start}..={end}"
            )));
        }
    }
    let days = (end - start).num_days() as usize + 1;
    let mut counts = vec![0u64; days];
    for r in &corpus.records {
        let d = r.date();
        if d >= start && d <= end {
            counts[(d - start).num_days() as usize] += 1;
        }
    }
    Ok(DailySeries {
        start,
        end,
        counts,
        markers,
    })
}

/// UTC timestamp helper for fixtures and the corpus generator.
pub fn utc(y: i32, m: u32, d: u32, h: u32, min: u32, s: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, m, d, h, min, s)
        .single()
        .expect("valid date")
}
