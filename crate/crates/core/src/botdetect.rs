//! Bot-account assessment.
//!
//! External bot scores in [0,1] are banded into human / potential bot / bot
//! (boundaries at 0.5 and 0.90, half-open upward). A content-generation
//! heuristic independently flags accounts posting 50+ messages on three or
//! more distinct days, or whose username contains "bot". Activity shares for
//! a flagged cohort are computed against whole-corpus totals.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Score bands

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t1: f64,
    pub t2: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { t1: 0.5, t2: 0.90 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BotCategory {
    Human,
    PotentialBot,
    Bot,
}

/// Bands a score: `<= t1` human, `<= t2` potential bot, above that bot.
/// Scores outside [0,1] (or NaN) are parameter errors.
pub fn categorize_score(score: f64, thresholds: Thresholds) -> Result<BotCategory> {
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::parameter(format!("bot score {score} outside [0,1]")));
    }
    Ok(if score <= thresholds.t1 {
        BotCategory::Human
    } else if score <= thresholds.t2 {
        BotCategory::PotentialBot
    } else {
        BotCategory::Bot
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbsenceReason {
    AccountGone,
    InsufficientData,
    ProviderError,
}

/// An external score for one account, or the reason none is available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotScore {
    pub username: String,
    pub score: Option<f64>,
    pub absence_reason: Option<AbsenceReason>,
}

impl BotScore {
    pub fn present(username: &str, score: f64) -> BotScore {
        BotScore {
            username: username.to_string(),
            score: Some(score),
            absence_reason: None,
        }
    }

    pub fn absent(username: &str, reason: AbsenceReason) -> BotScore {
        BotScore {
            username: username.to_string(),
            score: None,
            absence_reason: Some(reason),
        }
    }
}

// ---------------------------------------------------------------------------
// Activity profiles and the content-generation heuristic

/// Per-account activity derived from the corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ActivityProfile {
    pub username: String,
    pub daily_counts: BTreeMap<NaiveDate, u64>,
    pub tweets: u64,
    pub retweets_generated: u64,
    pub retweets_received: u64,
    pub likes_received: u64,
}

/// Builds every author's activity profile (usernames case-folded).
pub fn activity_profiles(corpus: &Corpus) -> BTreeMap<String, ActivityProfile> {
    let mut out: BTreeMap<String, ActivityProfile> = BTreeMap::new();
    for r in &corpus.records {
        let name = r.author.to_lowercase();
        let p = out.entry(name.clone()).or_insert_with(|| ActivityProfile {
            username: name,
            ..Default::default()
        });
        *p.daily_counts.entry(r.date()).or_insert(0) += 1;
        p.tweets += 1;
        if r.is_retweet {
            p.retweets_generated += 1;
        }
        p.retweets_received += r.retweet_count;
        p.likes_received += r.like_count;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FlagReason {
    /// 50+ messages per day on at least three distinct (UTC) days.
    Volume,
    /// Username contains "bot".
    Name,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicFlag {
    pub flagged: bool,
    pub reasons: BTreeSet<FlagReason>,
}

pub const VOLUME_PER_DAY: u64 = 50;
pub const VOLUME_DAYS: usize = 3;

/// Content-generation-count heuristic.
pub fn heuristic_flag(profile: &ActivityProfile, username: &str) -> HeuristicFlag {
    let mut reasons = BTreeSet::new();
    let heavy_days = profile
        .daily_counts
        .values()
        .filter(|&&c| c >= VOLUME_PER_DAY)
        .count();
    if heavy_days >= VOLUME_DAYS {
        reasons.insert(FlagReason::Volume);
    }
    if username.to_lowercase().contains("bot") {
        reasons.insert(FlagReason::Name);
    }
    HeuristicFlag {
        flagged: !reasons.is_empty(),
        reasons,
    }
}

// ---------------------------------------------------------------------------
// Score providers

/// Source of external bot scores. `Ok(None)` means the provider answered but
/// knows nothing about the account.
pub trait ScoreProvider {
    fn fetch(&mut self, username: &str) -> std::result::Result<Option<f64>, AbsenceReason>;
}

/// Offline provider backed by a CSV of `username,score` rows. An empty score
/// field records an account the service could not assess.
pub struct FileProvider {
    scores: BTreeMap<String, Option<f64>>,
}

impl FileProvider {
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<FileProvider> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut scores = BTreeMap::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let name = row
                .get(0)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::config(format!("scores row {}: empty username", i + 1)))?
                .to_lowercase();
            let score = match row.get(1).map(str::trim) {
                None | Some("") => None,
                Some(v) => {
                    let s: f64 = v.parse().map_err(|_| {
                        Error::config(format!("scores row {}: bad score {v:?}", i + 1))
                    })?;
                    if !(0.0..=1.0).contains(&s) {
                        return Err(Error::config(format!(
                            "scores row {}: score {s} outside [0,1]",
                            i + 1
                        )));
                    }
                    Some(s)
                }
            };
            scores.insert(name, score);
        }
        Ok(FileProvider { scores })
    }

    pub fn open(path: &Path) -> Result<FileProvider> {
        FileProvider::from_csv(std::fs::File::open(path)?)
    }
}

impl ScoreProvider for FileProvider {
    fn fetch(&mut self, username: &str) -> std::result::Result<Option<f64>, AbsenceReason> {
        match self.scores.get(&username.to_lowercase()) {
            Some(Some(s)) => Ok(Some(*s)),
            Some(None) => Err(AbsenceReason::InsufficientData),
            None => Ok(None),
        }
    }
}

/// Remote provider speaking `GET {endpoint}/score?username=NAME` returning
/// `{"username": ..., "score": 0.42}` (null score = insufficient data).
/// Non-200 responses are retried with exponential backoff before giving up;
/// 404 means the account is gone. Requests are paced by `min_interval`.
pub struct HttpProvider {
    endpoint: String,
    attempts: u32,
    min_interval: Duration,
    backoff_base: Duration,
    last_request: Option<std::time::Instant>,
}

#[derive(Debug, Deserialize)]
struct ScorePayload {
    #[allow(dead_code)]
    username: Option<String>,
    score: Option<f64>,
}

impl HttpProvider {
    pub fn new(endpoint: &str, rate_limit_ms: u64) -> HttpProvider {
        HttpProvider {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            attempts: 3,
            min_interval: Duration::from_millis(rate_limit_ms),
            backoff_base: Duration::from_millis(100),
            last_request: None,
        }
    }

    /// Shortens the backoff; tests only.
    pub fn with_backoff(mut self, base: Duration) -> HttpProvider {
        self.backoff_base = base;
        self
    }

    fn pace(&mut self) {
        if let Some(last) = self.last_request {
            let elapsed = last.elapsed();
            if elapsed < self.min_interval {
                std::thread::sleep(self.min_interval - elapsed);
            }
        }
        self.last_request = Some(std::time::Instant::now());
    }
}

impl ScoreProvider for HttpProvider {
    fn fetch(&mut self, username: &str) -> std::result::Result<Option<f64>, AbsenceReason> {
        let url = format!("{}/score?username={}", self.endpoint, username);
        for attempt in 0..self.attempts {
            self.pace();
            match ureq::get(&url).call() {
                Ok(mut resp) => {
                    let body = resp
                        .body_mut()
                        .read_to_string()
                        .map_err(|_| AbsenceReason::ProviderError)?;
                    let payload: ScorePayload =
                        serde_json::from_str(&body).map_err(|_| AbsenceReason::ProviderError)?;
                    return match payload.score {
                        Some(s) if (0.0..=1.0).contains(&s) => Ok(Some(s)),
                        Some(_) => Err(AbsenceReason::ProviderError),
                        None => Err(AbsenceReason::InsufficientData),
                    };
                }
                Err(ureq::Error::StatusCode(404)) => return Ok(None),
                Err(_) => {
                    if attempt + 1 < self.attempts {
                        std::thread::sleep(self.backoff_base * 2u32.pow(attempt));
                    }
                }
            }
        }
        Err(AbsenceReason::ProviderError)
    }
}

/// Disk-cached wrapper: hits are answered from the cache file, misses go to
/// the inner provider and are appended (`username,score,fetched_at`).
pub struct CachedProvider<P: ScoreProvider> {
    inner: P,
    path: PathBuf,
    cache: BTreeMap<String, Option<f64>>,
}

impl<P: ScoreProvider> CachedProvider<P> {
    pub fn new(inner: P, path: &Path) -> Result<CachedProvider<P>> {
        let mut cache = BTreeMap::new();
        if path.exists() {
            let file = std::fs::File::open(path)?;
            for line in std::io::BufReader::new(file).lines() {
                let line = line?;
                let mut parts = line.split(',');
                if let Some(name) = parts.next().filter(|n| !n.is_empty()) {
                    let score = parts.next().and_then(|s| s.parse::<f64>().ok());
                    cache.insert(name.to_lowercase(), score);
                }
            }
        }
        Ok(CachedProvider {
            inner,
            path: path.to_path_buf(),
            cache,
        })
    }

    fn append(&self, username: &str, score: Option<f64>) -> Result<()> {
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let ts = chrono::Utc::now().to_rfc3339();
        match score {
            Some(s) => writeln!(file, "{username},{s},{ts}")?,
            None => writeln!(file, "{username},,{ts}")?,
        }
        Ok(())
    }
}

impl<P: ScoreProvider> ScoreProvider for CachedProvider<P> {
    fn fetch(&mut self, username: &str) -> std::result::Result<Option<f64>, AbsenceReason> {
        let key = username.to_lowercase();
        if let Some(cached) = self.cache.get(&key) {
            return match cached {
                Some(s) => Ok(Some(*s)),
                None => Err(AbsenceReason::InsufficientData),
            };
        }
        let result = self.inner.fetch(username);
        // Only definitive answers are cached; transient provider errors are
        // retried on the next run.
        match &result {
            Ok(Some(s)) => {
                let _ = self.append(&key, Some(*s));
                self.cache.insert(key, Some(*s));
            }
            Err(AbsenceReason::InsufficientData) => {
                let _ = self.append(&key, None);
                self.cache.insert(key, None);
            }
            _ => {}
        }
        result
    }
}

/// Fetches one score per requested username. Provider failures become
/// per-account absences, never a run-aborting error.
pub fn fetch_scores<P: ScoreProvider>(usernames: &[String], provider: &mut P) -> Vec<BotScore> {
    usernames
        .iter()
        .map(|name| match provider.fetch(name) {
            Ok(Some(score)) => BotScore::present(name, score),
            Ok(None) => BotScore::absent(name, AbsenceReason::AccountGone),
            Err(reason) => BotScore::absent(name, reason),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Activity share table

/// The six activity-share rows for a flagged cohort, in percent of
/// whole-corpus totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityShareTable {
    pub generated_content: f64,
    pub rt_received: f64,
    pub like_count: f64,
    pub rt_generated: f64,
    pub follower_share_a: f64,
    pub follower_share_b: f64,
    /// Flagged names that are not corpus authors (ignored with a warning).
    pub unknown_flagged: Vec<String>,
}

/// Shares of content, reactions, and follower membership attributable to a
/// flagged account set. Denominators are whole-corpus totals.
pub fn bot_activity_table(corpus: &Corpus, flagged: &HashSet<String>) -> Result<ActivityShareTable> {
    if corpus.is_empty() {
        return Err(Error::parameter("empty corpus"));
    }
    let flagged: HashSet<String> = flagged.iter().map(|s| s.to_lowercase()).collect();
    let authors = corpus.authors();
    let mut unknown: Vec<String> = flagged.difference(&authors).cloned().collect();
    unknown.sort();

    let mut total_msgs = 0u64;
    let mut flag_msgs = 0u64;
    let mut total_rt_recv = 0u64;
    let mut flag_rt_recv = 0u64;
    let mut total_likes = 0u64;
    let mut flag_likes = 0u64;
    let mut total_rt_gen = 0u64;
    let mut flag_rt_gen = 0u64;
    let mut followers_a: HashSet<&str> = HashSet::new();
    let mut followers_b: HashSet<&str> = HashSet::new();
    let mut flagged_a: HashSet<&str> = HashSet::new();
    let mut flagged_b: HashSet<&str> = HashSet::new();

    for r in &corpus.records {
        let author = r.author.to_lowercase();
        let is_flagged = flagged.contains(&author);
        total_msgs += 1;
        total_rt_recv += r.retweet_count;
        total_likes += r.like_count;
        if r.is_retweet {
            total_rt_gen += 1;
        }
        if is_flagged {
            flag_msgs += 1;
            flag_rt_recv += r.retweet_count;
            flag_likes += r.like_count;
            if r.is_retweet {
                flag_rt_gen += 1;
            }
        }
        if r.follower_code.follows_a() {
            followers_a.insert(r.author.as_str());
            if is_flagged {
                flagged_a.insert(r.author.as_str());
            }
        }
        if r.follower_code.follows_b() {
            followers_b.insert(r.author.as_str());
            if is_flagged {
                flagged_b.insert(r.author.as_str());
            }
        }
    }

    let share = |num: u64, den: u64| if den == 0 { 0.0 } else { 100.0 * num as f64 / den as f64 };
    Ok(ActivityShareTable {
        generated_content: share(flag_msgs, total_msgs),
        rt_received: share(flag_rt_recv, total_rt_recv),
        like_count: share(flag_likes, total_likes),
        rt_generated: share(flag_rt_gen, total_rt_gen),
        follower_share_a: share(flagged_a.len() as u64, followers_a.len() as u64),
        follower_share_b: share(flagged_b.len() as u64, followers_b.len() as u64),
        unknown_flagged: unknown,
    })
}

/// Confusion table between score-band categories and the heuristic flags, so
/// the two methods can be compared on any corpus.
pub fn method_confusion(
    scores: &[BotScore],
    flags: &BTreeMap<String, HeuristicFlag>,
    thresholds: Thresholds,
) -> Result<BTreeMap<(BotCategory, bool), u64>> {
    let mut out = BTreeMap::new();
    for s in scores {
        let Some(score) = s.score else { continue };
        let cat = categorize_score(score, thresholds)?;
        let flagged = flags
            .get(&s.username.to_lowercase())
            .map(|f| f.flagged)
            .unwrap_or(false);
        *out.entry((cat, flagged)).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{utc, FollowerCode, Language, MessageRecord};

    #[test]
    fn band_boundaries() {
        let t = Thresholds::default();
        assert_eq!(categorize_score(0.0, t).unwrap(), BotCategory::Human);
        assert_eq!(categorize_score(0.50, t).unwrap(), BotCategory::Human);
        assert_eq!(categorize_score(0.51, t).unwrap(), BotCategory::PotentialBot);
        assert_eq!(categorize_score(0.90, t).unwrap(), BotCategory::PotentialBot);
        assert_eq!(categorize_score(0.91, t).unwrap(), BotCategory::Bot);
        assert_eq!(categorize_score(1.0, t).unwrap(), BotCategory::Bot);
        assert!(categorize_score(-0.1, t).is_err());
        assert!(categorize_score(1.1, t).is_err());
        assert!(categorize_score(f64::NAN, t).is_err());
    }

    #[test]
    fn banding_is_monotone() {
        let t = Thresholds::default();
        let mut last = BotCategory::Human;
        for i in 0..=100 {
            let c = categorize_score(i as f64 / 100.0, t).unwrap();
            assert!(c >= last);
            last = c;
        }
    }

    fn day_rec(author: &str, day: u32, n: u64) -> Vec<MessageRecord> {
        (0..n)
            .map(|i| MessageRecord {
                id: None,
                author: author.into(),
                timestamp: utc(2016, 11, day, 1 + (i % 20) as u32, (i % 60) as u32, 0),
                text: format!("msg {i}"),
                retweet_count: 0,
                like_count: 0,
                reply_count: None,
                language: Language::De,
                follower_code: FollowerCode::Neither,
                is_retweet: false,
            })
            .collect()
    }

    #[test]
    fn volume_rule_boundary() {
        // 50/day on exactly 3 days -> flagged.
        let mut records = Vec::new();
        for day in [14, 15, 16] {
            records.extend(day_rec("heavy", day, 50));
        }
        // 49/day on 10 days -> not flagged.
        for day in 14..24 {
            records.extend(day_rec("alice", day, 49));
        }
        let corpus = Corpus::new(records, vec![]);
        let profiles = activity_profiles(&corpus);
        let heavy = heuristic_flag(&profiles["heavy"], "heavy");
        assert!(heavy.flagged);
        assert_eq!(heavy.reasons, BTreeSet::from([FlagReason::Volume]));
        let alice = heuristic_flag(&profiles["alice"], "alice");
        assert!(!alice.flagged);
    }

    #[test]
    fn name_rule_fires_on_single_tweet() {
        let corpus = Corpus::new(day_rec("NewsBotDE", 14, 1), vec![]);
        let profiles = activity_profiles(&corpus);
        let flag = heuristic_flag(&profiles["newsbotde"], "NewsBotDE");
        assert!(flag.flagged);
        assert_eq!(flag.reasons, BTreeSet::from([FlagReason::Name]));
    }

    #[test]
    fn profiles_recount_equality() {
        let mut records = day_rec("a", 14, 5);
        records[0].retweet_count = 7;
        records[1].like_count = 3;
        records[2].is_retweet = true;
        let corpus = Corpus::new(records, vec![]);
        let p = &activity_profiles(&corpus)["a"];
        // Brute-force recount.
        assert_eq!(p.tweets, corpus.len() as u64);
        assert_eq!(
            p.retweets_received,
            corpus.records.iter().map(|r| r.retweet_count).sum::<u64>()
        );
        assert_eq!(
            p.likes_received,
            corpus.records.iter().map(|r| r.like_count).sum::<u64>()
        );
        assert_eq!(
            p.retweets_generated,
            corpus.records.iter().filter(|r| r.is_retweet).count() as u64
        );
        assert_eq!(p.daily_counts.values().sum::<u64>(), p.tweets);
    }

    #[test]
    fn file_provider_roundtrip_and_absences() {
        let csv = "alice,0.12\nbotty,0.95\nghosted,\n";
        let mut provider = FileProvider::from_csv(csv.as_bytes()).unwrap();
        let scores = fetch_scores(
            &["alice".into(), "botty".into(), "ghosted".into(), "unknown".into()],
            &mut provider,
        );
        assert_eq!(scores[0].score, Some(0.12));
        assert_eq!(scores[1].score, Some(0.95));
        assert_eq!(scores[2].absence_reason, Some(AbsenceReason::InsufficientData));
        assert_eq!(scores[3].absence_reason, Some(AbsenceReason::AccountGone));
        assert!(fetch_scores(&[], &mut provider).is_empty());
    }

    #[test]
    fn file_provider_validates() {
        assert!(FileProvider::from_csv("alice,1.5\n".as_bytes()).is_err());
        assert!(FileProvider::from_csv("alice,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn activity_table_no_flagged_is_zero() {
        let corpus = Corpus::new(day_rec("a", 14, 3), vec![]);
        let table = bot_activity_table(&corpus, &HashSet::new()).unwrap();
        assert_eq!(table.generated_content, 0.0);
        assert_eq!(table.rt_generated, 0.0);
    }

    #[test]
    fn activity_table_planted_cohort() {
        // 102 of 10000 messages from the cohort -> 1.02% generated content.
        let mut records = Vec::new();
        for i in 0..9898u64 {
            records.extend(day_rec(&format!("u{}", i % 500), 14 + (i % 10) as u32 / 5, 1));
        }
        for _ in 0..102u64 {
            records.extend(day_rec("cohort_bot", 15, 1));
        }
        let corpus = Corpus::new(records, vec![]);
        assert_eq!(corpus.len(), 10_000);
        let flagged: HashSet<String> = ["cohort_bot".to_string()].into_iter().collect();
        let table = bot_activity_table(&corpus, &flagged).unwrap();
        assert!((table.generated_content - 1.02).abs() < 1e-9);
        assert!(table.unknown_flagged.is_empty());
    }

    #[test]
    fn activity_table_warns_on_unknown_flagged() {
        let corpus = Corpus::new(day_rec("a", 14, 2), vec![]);
        let flagged: HashSet<String> = ["nobody".to_string()].into_iter().collect();
        let table = bot_activity_table(&corpus, &flagged).unwrap();
        assert_eq!(table.unknown_flagged, vec!["nobody".to_string()]);
        assert!(bot_activity_table(&Corpus::new(vec![], vec![]), &flagged).is_err());
    }

    #[test]
    fn activity_table_scale_invariance() {
        let mut records = Vec::new();
        records.extend(day_rec("bot_x", 14, 4));
        records.extend(day_rec("u1", 14, 12));
        for r in records.iter_mut() {
            r.retweet_count = 2;
            r.like_count = 4;
        }
        let corpus = Corpus::new(records.clone(), vec![]);
        let doubled = Corpus::new(
            records
                .iter()
                .cloned()
                .chain(records.iter().enumerate().map(|(i, r)| {
                    let mut c = r.clone();
                    c.timestamp = c.timestamp + chrono::Duration::seconds(40_000 + i as i64);
                    c
                }))
                .collect(),
            vec![],
        );
        let flagged: HashSet<String> = ["bot_x".to_string()].into_iter().collect();
        let a = bot_activity_table(&corpus, &flagged).unwrap();
        let b = bot_activity_table(&doubled, &flagged).unwrap();
        assert!((a.generated_content - b.generated_content).abs() < 1e-9);
        assert!((a.rt_received - b.rt_received).abs() < 1e-9);
        assert!((a.like_count - b.like_count).abs() < 1e-9);
    }
}
