//! Lexicon-based dual-polarity scoring and emotion vectors.
//!
//! Each message gets an independent positive strength in [1,5] and negative
//! strength in [-5,-1]: per sentence, every lexicon term contributes its
//! strength after booster, negation, and letter-repetition adjustments; the
//! sentence score is the componentwise extremum of the contributions, and the
//! message score the extremum over sentences. Emotion vectors count tokens
//! carrying each of the eight basic emotions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Language};
use crate::error::{Error, Result};

/// Dual polarity strengths. The scorer never emits 0 on either axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentimentScore {
    pub positive: i8,
    pub negative: i8,
}

impl SentimentScore {
    pub const NEUTRAL: SentimentScore = SentimentScore {
        positive: 1,
        negative: -1,
    };

    pub fn new(positive: i8, negative: i8) -> Result<SentimentScore> {
        if !(1..=5).contains(&positive) || !(-5..=-1).contains(&negative) {
            return Err(Error::parameter(format!(
                "score ({positive},{negative}) outside [1,5] x [-5,-1]"
            )));
        }
        Ok(SentimentScore { positive, negative })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PolarityCategory {
    Positive,
    Negative,
    Neutral,
    Overlap,
}

/// Polarity category: neutral iff (1,-1); positive iff only positive
/// evidence; negative iff only negative evidence; overlap iff both.
pub fn categorize_polarity(score: SentimentScore) -> PolarityCategory {
    let pos = score.positive >= 2;
    let neg = score.negative <= -2;
    match (pos, neg) {
        (false, false) => PolarityCategory::Neutral,
        (true, false) => PolarityCategory::Positive,
        (false, true) => PolarityCategory::Negative,
        (true, true) => PolarityCategory::Overlap,
    }
}

/// The eight basic emotions, in canonical index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

impl Emotion {
    pub const ALL: [Emotion; 8] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Trust,
    ];

    pub fn index(&self) -> usize {
        Emotion::ALL.iter().position(|e| e == self).expect("member")
    }

    pub fn parse(label: &str) -> Option<Emotion> {
        match label {
            "anger" => Some(Emotion::Anger),
            "anticipation" => Some(Emotion::Anticipation),
            "disgust" => Some(Emotion::Disgust),
            "fear" => Some(Emotion::Fear),
            "joy" => Some(Emotion::Joy),
            "sadness" => Some(Emotion::Sadness),
            "surprise" => Some(Emotion::Surprise),
            "trust" => Some(Emotion::Trust),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }
}

/// Token counts per emotion; additive under concatenation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionVector {
    pub counts: [u64; 8],
}

impl EmotionVector {
    pub fn get(&self, e: Emotion) -> u64 {
        self.counts[e.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }
}

impl std::ops::Add for EmotionVector {
    type Output = EmotionVector;
    fn add(self, rhs: EmotionVector) -> EmotionVector {
        let mut counts = [0u64; 8];
        for i in 0..8 {
            counts[i] = self.counts[i] + rhs.counts[i];
        }
        EmotionVector { counts }
    }
}

// ---------------------------------------------------------------------------
// Sentiment lexicon

/// Term lexicon with strengths in [-5,-2] or [2,5], plus boosters (+/-1),
/// negators, and emoticons. Entries ending in `*` match as stems.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    exact: HashMap<String, i8>,
    stems: Vec<(String, i8)>,
    boosters: HashMap<String, i8>,
    negators: HashSet<String>,
    emoticons: HashMap<String, i8>,
}

impl SentimentLexicon {
    /// Tab-separated sections:
    ///
    /// ```text
    /// [terms]
    /// great\t3
    /// ablehn*\t-3
    /// [boosters]
    /// very\t1
    /// [negators]
    /// not
    /// [emoticons]
    /// :)\t2
    /// ```
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<SentimentLexicon> {
        let mut lex = SentimentLexicon::default();
        let mut section = "terms".to_string();
        for (no, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with("//") {
                continue;
            }
            if t.starts_with('[') && t.ends_with(']') {
                section = t[1..t.len() - 1].to_lowercase();
                continue;
            }
            let mut parts = t.split('\t');
            let term = parts
                .next()
                .map(|s| s.trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::config(format!("lexicon line {}: empty term", no + 1)))?;
            let strength = parts.next().map(str::trim);
            let parse = |s: Option<&str>| -> Result<i8> {
                s.ok_or_else(|| Error::config(format!("lexicon line {}: missing strength", no + 1)))?
                    .parse()
                    .map_err(|_| Error::config(format!("lexicon line {}: bad strength", no + 1)))
            };
            match section.as_str() {
                "terms" => {
                    let s = parse(strength)?;
                    if !((-5..=-2).contains(&s) || (2..=5).contains(&s)) {
                        return Err(Error::config(format!(
                            "lexicon line {}: strength {s} outside [-5,-2] u [2,5]",
                            no + 1
                        )));
                    }
                    if let Some(stem) = term.strip_suffix('*') {
                        if stem.is_empty() {
                            return Err(Error::config(format!("lexicon line {}: bare stem", no + 1)));
                        }
                        lex.stems.push((stem.to_string(), s));
                    } else {
                        lex.exact.insert(term, s);
                    }
                }
                "boosters" => {
                    let s = parse(strength)?;
                    if s != 1 && s != -1 {
                        return Err(Error::config(format!(
                            "lexicon line {}: booster must be +1 or -1",
                            no + 1
                        )));
                    }
                    lex.boosters.insert(term, s);
                }
                "negators" => {
                    lex.negators.insert(term);
                }
                "emoticons" => {
                    let s = parse(strength)?;
                    lex.emoticons.insert(term, s);
                }
                other => {
                    return Err(Error::config(format!(
                        "lexicon line {}: unknown section [{other}]",
                        no + 1
                    )))
                }
            }
        }
        // Longest stems first so the most specific one wins.
        lex.stems.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        Ok(lex)
    }

    pub fn from_entries(
        terms: &[(&str, i8)],
        boosters: &[(&str, i8)],
        negators: &[&str],
        emoticons: &[(&str, i8)],
    ) -> SentimentLexicon {
        let mut lex = SentimentLexicon::default();
        for &(t, s) in terms {
            if let Some(stem) = t.strip_suffix('*') {
                lex.stems.push((stem.to_lowercase(), s));
            } else {
                lex.exact.insert(t.to_lowercase(), s);
            }
        }
        lex.stems.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        for &(t, s) in boosters {
            lex.boosters.insert(t.to_lowercase(), s);
        }
        for &t in negators {
            lex.negators.insert(t.to_lowercase());
        }
        for &(t, s) in emoticons {
            lex.emoticons.insert(t.to_string(), s);
        }
        lex
    }

    fn term_strength(&self, word: &str) -> Option<i8> {
        if let Some(&s) = self.exact.get(word) {
            return Some(s);
        }
        self.stems
            .iter()
            .find(|(stem, _)| word.starts_with(stem.as_str()))
            .map(|&(_, s)| s)
    }
}

/// Scoring rule toggles.
#[derive(Debug, Clone, Copy)]
pub struct ScorerOptions {
    /// Runs of 3+ repeated letters add +1 magnitude ("goood").
    pub letter_repetition_boost: bool,
    /// How many preceding tokens a negator may act across.
    pub negation_window: usize,
}

impl Default for ScorerOptions {
    fn default() -> Self {
        ScorerOptions {
            letter_repetition_boost: true,
            negation_window: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word { text: String, emphasized: bool },
    Emoticon(String),
}

/// Splits into sentences of tokens. Whitespace-delimited chunks that exactly
/// match an emoticon stay intact; other chunks break into word tokens, and
/// `.`/`!`/`?` end the sentence.
fn tokenize_sentences(text: &str, lexicon: &SentimentLexicon) -> Vec<Vec<Token>> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for chunk in text.split_whitespace() {
        if lexicon.emoticons.contains_key(chunk) {
            current.push(Token::Emoticon(chunk.to_string()));
            continue;
        }
        let mut word = String::new();
        let flush = |word: &mut String, current: &mut Vec<Token>| {
            if !word.is_empty() {
                let lower = word.to_lowercase();
                let (collapsed, emphasized) = collapse_repeats(&lower);
                current.push(Token::Word {
                    text: collapsed,
                    emphasized,
                });
                word.clear();
            }
        };
        for c in chunk.chars() {
            if c.is_alphanumeric() || c == '\'' || c == '_' {
                word.push(c);
            } else {
                flush(&mut word, &mut current);
                if matches!(c, '.' | '!' | '?') && !current.is_empty() {
                    sentences.push(std::mem::take(&mut current));
                }
            }
        }
        flush(&mut word, &mut current);
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// Collapses runs of 3+ identical letters and reports whether any run was
/// collapsed. Runs shrink to two letters first ("goood" -> "good"); if the
/// double is still unknown the scorer later also tries the single form.
fn collapse_repeats(word: &str) -> (String, bool) {
    let mut out = String::with_capacity(word.len());
    let mut emphasized = false;
    let mut run_char = '\0';
    let mut run_len = 0usize;
    for c in word.chars() {
        if c == run_char {
            run_len += 1;
        } else {
            run_char = c;
            run_len = 1;
        }
        if run_len <= 2 {
            out.push(c);
        } else {
            emphasized = true;
        }
    }
    (out, emphasized)
}

/// Fully collapsed variant (every repeated-letter run down to one letter).
fn collapse_to_single(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    let mut last = '\0';
    for c in word.chars() {
        if c != last {
            out.push(c);
            last = c;
        }
    }
    out
}

/// Scores one message with the default rule set.
pub fn score_polarity(text: &str, lexicon: &SentimentLexicon) -> SentimentScore {
    score_polarity_with(text, lexicon, &ScorerOptions::default())
}

/// Scores one message: per sentence the maximum positive and minimum negative
/// contribution (floored at 1 / ceiled at -1), then the componentwise
/// extremum over sentences. Deterministic; unknown tokens contribute nothing.
pub fn score_polarity_with(
    text: &str,
    lexicon: &SentimentLexicon,
    options: &ScorerOptions,
) -> SentimentScore {
    let mut pos_best: i8 = 1;
    let mut neg_best: i8 = -1;

    for sentence in tokenize_sentences(text, lexicon) {
        for (i, token) in sentence.iter().enumerate() {
            let contribution: Option<i8> = match token {
                Token::Emoticon(e) => lexicon.emoticons.get(e).copied(),
                Token::Word { text: word, emphasized } => {
                    let hit = lexicon.term_strength(word).or_else(|| {
                        if *emphasized {
                            lexicon.term_strength(&collapse_to_single(word))
                        } else {
                            None
                        }
                    });
                    hit.map(|strength| {
                        let mut magnitude = strength.abs();
                        let mut positive = strength > 0;
                        // Emphasis: 3+ repeated letters add one point.
                        if *emphasized && options.letter_repetition_boost {
                            magnitude = (magnitude + 1).min(5);
                        }
                        // Booster immediately before the term.
                        if i > 0 {
                            if let Token::Word { text: prev, .. } = &sentence[i - 1] {
                                if let Some(&b) = lexicon.boosters.get(prev) {
                                    magnitude = (magnitude + b).clamp(2, 5);
                                }
                            }
                        }
                        // Negator within the preceding window flips positive
                        // evidence (weakened) and neutralizes negative.
                        let negated = sentence[i.saturating_sub(options.negation_window)..i]
                            .iter()
                            .any(|t| match t {
                                Token::Word { text: w, .. } => lexicon.negators.contains(w),
                                Token::Emoticon(_) => false,
                            });
                        if negated {
                            if positive {
                                positive = false;
                                magnitude = (magnitude - 1).max(2);
                            } else {
                                return 0; // neutralized, no evidence
                            }
                        }
                        if positive {
                            magnitude
                        } else {
                            -magnitude
                        }
                    })
                }
            };
            match contribution {
                Some(c) if c > 0 => pos_best = pos_best.max(c),
                Some(c) if c < 0 => neg_best = neg_best.min(c),
                _ => {}
            }
        }
    }

    SentimentScore {
        positive: pos_best,
        negative: neg_best,
    }
}

// ---------------------------------------------------------------------------
// Emotion lexicon

/// Word to emotion-set associations plus polarity flags.
#[derive(Debug, Clone, Default)]
pub struct EmotionLexicon {
    entries: HashMap<String, EmotionEntry>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EmotionEntry {
    pub emotions: u8, // bitmask over Emotion::ALL
    pub positive: bool,
    pub negative: bool,
}

impl EmotionLexicon {
    /// Flat three-column format: `word\taffect\t0|1`, the standard
    /// word-emotion association layout. Affects are the eight emotions plus
    /// `positive` / `negative`.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<EmotionLexicon> {
        let mut entries: HashMap<String, EmotionEntry> = HashMap::new();
        for (no, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let parts: Vec<&str> = t.split('\t').collect();
            if parts.len() != 3 {
                return Err(Error::config(format!(
                    "emotion lexicon line {}: expected 3 tab-separated columns",
                    no + 1
                )));
            }
            let flag = match parts[2].trim() {
                "0" => false,
                "1" => true,
                v => {
                    return Err(Error::config(format!(
                        "emotion lexicon line {}: flag {v:?} not 0/1",
                        no + 1
                    )))
                }
            };
            if !flag {
                continue;
            }
            let word = parts[0].trim().to_lowercase();
            let entry = entries.entry(word).or_default();
            match parts[1].trim() {
                "positive" => entry.positive = true,
                "negative" => entry.negative = true,
                label => match Emotion::parse(label) {
                    Some(e) => entry.emotions |= 1 << e.index(),
                    None => {
                        return Err(Error::config(format!(
                            "emotion lexicon line {}: unknown affect {label:?}",
                            no + 1
                        )))
                    }
                },
            }
        }
        Ok(EmotionLexicon { entries })
    }

    pub fn from_entries(words: &[(&str, &[Emotion])]) -> EmotionLexicon {
        let mut entries: HashMap<String, EmotionEntry> = HashMap::new();
        for (word, emotions) in words {
            let entry = entries.entry(word.to_lowercase()).or_default();
            for e in *emotions {
                entry.emotions |= 1 << e.index();
            }
        }
        EmotionLexicon { entries }
    }

    pub fn lookup(&self, word: &str) -> Option<&EmotionEntry> {
        self.entries.get(word)
    }
}

/// Token-frequency emotion counts: each token occurrence contributes to every
/// emotion its lexicon entry carries.
pub fn emotion_vector(text: &str, lexicon: &EmotionLexicon) -> EmotionVector {
    let mut counts = [0u64; 8];
    for token in crate::corpus::tokenize_words(text) {
        if let Some(entry) = lexicon.lookup(&token) {
            for e in Emotion::ALL {
                if entry.emotions & (1 << e.index()) != 0 {
                    counts[e.index()] += 1;
                }
            }
        }
    }
    EmotionVector { counts }
}

// ---------------------------------------------------------------------------
// Target-directed sentiment

/// Patterns identifying mentions of one target (names, hashtags, handles).
#[derive(Debug, Clone)]
pub struct TargetPatterns {
    pub name: String,
    regexes: Vec<Regex>,
}

impl TargetPatterns {
    /// Compiles case-insensitive patterns. Invalid patterns fail at load.
    pub fn new(name: &str, patterns: &[String]) -> Result<TargetPatterns> {
        if patterns.is_empty() {
            return Err(Error::config(format!("target {name:?} has no patterns")));
        }
        let regexes = patterns
            .iter()
            .map(|p| {
                regex::RegexBuilder::new(p)
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| Error::config(format!("target {name:?} pattern {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TargetPatterns {
            name: name.to_string(),
            regexes,
        })
    }

    pub fn matches(&self, text: &str) -> bool {
        self.regexes.iter().any(|r| r.is_match(text))
    }
}

/// Per-language sentiment lexicons; unsupported languages score neutral.
#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    pub by_language: BTreeMap<Language, SentimentLexicon>,
}

impl LexiconSet {
    /// Scores a text in the given language. Records in languages without a
    /// lexicon get the neutral score and an `unsupported` flag.
    pub fn score(&self, text: &str, language: Language) -> (SentimentScore, bool) {
        match self.by_language.get(&language) {
            Some(lex) => (score_polarity(text, lex), false),
            None => (SentimentScore::NEUTRAL, true),
        }
    }
}

/// One scored mention of a target.
#[derive(Debug, Clone, Serialize)]
pub struct ScoredMention {
    /// Index of the record in the corpus' canonical order.
    pub record_index: usize,
    pub record_id: Option<String>,
    pub author: String,
    pub target: String,
    pub score: SentimentScore,
    pub category: PolarityCategory,
    /// True when the record matches more than one distinct target; such
    /// records are left for a manual annotation join.
    pub ambiguous: bool,
    /// True when the record's language has no lexicon.
    pub unsupported_language: bool,
}

/// Scores every record that mentions any target. A record matching two or
/// more distinct targets is flagged ambiguous on each of its entries.
pub fn sentiment_toward(
    corpus: &Corpus,
    targets: &[TargetPatterns],
    lexicons: &LexiconSet,
) -> Result<Vec<ScoredMention>> {
    if targets.is_empty() {
        return Err(Error::parameter("no target patterns given"));
    }
    let mut out = Vec::new();
    for (idx, record) in corpus.records.iter().enumerate() {
        let hits: Vec<&TargetPatterns> =
            targets.iter().filter(|t| t.matches(&record.text)).collect();
        if hits.is_empty() {
            continue;
        }
        let ambiguous = hits.len() > 1;
        let (score, unsupported) = lexicons.score(&record.text, record.language);
        for t in hits {
            out.push(ScoredMention {
                record_index: idx,
                record_id: record.id.clone(),
                author: record.author.clone(),
                target: t.name.clone(),
                score,
                category: categorize_polarity(score),
                ambiguous,
                unsupported_language: unsupported,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexicon() -> SentimentLexicon {
        SentimentLexicon::from_entries(
            &[("great", 3), ("awful", -4), ("good", 2), ("hope", 2), ("lies", -3)],
            &[("very", 1), ("slightly", -1)],
            &["not", "no", "never"],
            &[(":)", 2), (":(", -2)],
        )
    }

    #[test]
    fn no_evidence_floors() {
        assert_eq!(
            score_polarity("nothing to see here", &lexicon()),
            SentimentScore::NEUTRAL
        );
    }

    #[test]
    fn repeated_term_takes_max_not_sum() {
        let opts = ScorerOptions {
            letter_repetition_boost: false,
            ..Default::default()
        };
        let s = score_polarity_with("great great day", &lexicon(), &opts);
        assert_eq!(s, SentimentScore { positive: 3, negative: -1 });
    }

    #[test]
    fn negation_flips_and_weakens() {
        let s = score_polarity("not great", &lexicon());
        assert_eq!(s, SentimentScore { positive: 1, negative: -2 });
    }

    #[test]
    fn negation_neutralizes_negative_terms() {
        let s = score_polarity("not awful", &lexicon());
        assert_eq!(s, SentimentScore::NEUTRAL);
    }

    #[test]
    fn negation_window_is_two_tokens() {
        // "not so great": negator two tokens before still applies.
        let s = score_polarity("not so great", &lexicon());
        assert_eq!(s.negative, -2);
        // Three tokens away: out of window.
        let s = score_polarity("not in any way great", &lexicon());
        assert_eq!(s.positive, 3);
    }

    #[test]
    fn booster_adjusts_magnitude() {
        assert_eq!(score_polarity("very good", &lexicon()).positive, 3);
        assert_eq!(score_polarity("slightly great", &lexicon()).positive, 2);
        // Clamped to 5.
        let lex = SentimentLexicon::from_entries(&[("superb", 5)], &[("very", 1)], &[], &[]);
        assert_eq!(score_polarity("very superb", &lex).positive, 5);
    }

    #[test]
    fn letter_repetition_boosts() {
        assert_eq!(score_polarity("goood day", &lexicon()).positive, 3);
        assert_eq!(score_polarity("greaaat", &lexicon()).positive, 4);
        let opts = ScorerOptions {
            letter_repetition_boost: false,
            ..Default::default()
        };
        assert_eq!(score_polarity_with("goood day", &lexicon(), &opts).positive, 2);
    }

    #[test]
    fn sentences_score_independently() {
        // Negative evidence in one sentence, positive in the other.
        let s = score_polarity("awful lies. great hope!", &lexicon());
        assert_eq!(s, SentimentScore { positive: 3, negative: -4 });
    }

    #[test]
    fn emoticons_survive_tokenization() {
        let s = score_polarity("so :) today", &lexicon());
        assert_eq!(s.positive, 2);
        let s = score_polarity(":(", &lexicon());
        assert_eq!(s.negative, -2);
    }

    #[test]
    fn stem_entries_match_prefixes() {
        let lex = SentimentLexicon::from_entries(&[("ablehn*", -3)], &[], &[], &[]);
        assert_eq!(score_polarity("ablehnung", &lex).negative, -3);
        assert_eq!(score_polarity("ablehnen!", &lex).negative, -3);
        assert_eq!(score_polarity("abgelehnt", &lex), SentimentScore::NEUTRAL);
    }

    #[test]
    fn category_table_spec_points() {
        let s = |p, n| SentimentScore { positive: p, negative: n };
        assert_eq!(categorize_polarity(s(1, -1)), PolarityCategory::Neutral);
        assert_eq!(categorize_polarity(s(4, -1)), PolarityCategory::Positive);
        assert_eq!(categorize_polarity(s(1, -3)), PolarityCategory::Negative);
        assert_eq!(categorize_polarity(s(3, -4)), PolarityCategory::Overlap);
    }

    #[test]
    fn category_partitions_all_25_pairs() {
        let mut counts: BTreeMap<PolarityCategory, usize> = BTreeMap::new();
        for p in 1..=5i8 {
            for n in -5..=-1i8 {
                let c = categorize_polarity(SentimentScore { positive: p, negative: n });
                *counts.entry(c).or_default() += 1;
            }
        }
        assert_eq!(counts[&PolarityCategory::Neutral], 1);
        assert_eq!(counts[&PolarityCategory::Positive], 4);
        assert_eq!(counts[&PolarityCategory::Negative], 4);
        assert_eq!(counts[&PolarityCategory::Overlap], 16);
        assert_eq!(counts.values().sum::<usize>(), 25);
    }

    fn emo_lexicon() -> EmotionLexicon {
        EmotionLexicon::from_entries(&[
            ("abandon", &[Emotion::Fear, Emotion::Sadness]),
            ("cheer", &[Emotion::Joy]),
            ("friend", &[Emotion::Trust, Emotion::Joy]),
        ])
    }

    #[test]
    fn emotion_vector_empty_text() {
        assert!(emotion_vector("", &emo_lexicon()).is_zero());
    }

    #[test]
    fn emotion_vector_counts_token_frequency() {
        let v = emotion_vector("abandon abandon", &emo_lexicon());
        assert_eq!(v.get(Emotion::Fear), 2);
        assert_eq!(v.get(Emotion::Sadness), 2);
        assert_eq!(v.get(Emotion::Joy), 0);
    }

    #[test]
    fn emotion_vector_mixed_fixture() {
        // 3 joy terms and 1 trust term -> joy 3 (one shared with trust: friend
        // carries both), trust 1.
        let v = emotion_vector("cheer cheer friend", &emo_lexicon());
        assert_eq!(v.get(Emotion::Joy), 3);
        assert_eq!(v.get(Emotion::Trust), 1);
    }

    #[test]
    fn emotion_lexicon_tsv_parses_and_validates() {
        let data = "abandon\tfear\t1\nabandon\tsadness\t1\nabandon\tjoy\t0\ncheer\tpositive\t1\n";
        let lex = EmotionLexicon::from_tsv(data.as_bytes()).unwrap();
        let e = lex.lookup("abandon").unwrap();
        assert_ne!(e.emotions & (1 << Emotion::Fear.index()), 0);
        assert_eq!(e.emotions & (1 << Emotion::Joy.index()), 0);
        assert!(lex.lookup("cheer").unwrap().positive);

        assert!(EmotionLexicon::from_tsv("x\tbogus\t1\n".as_bytes()).is_err());
        assert!(EmotionLexicon::from_tsv("x\tjoy\n".as_bytes()).is_err());
    }

    #[test]
    fn sentiment_lexicon_rejects_weak_strengths() {
        assert!(SentimentLexicon::from_tsv("[terms]\nmeh\t1\n".as_bytes()).is_err());
        assert!(SentimentLexicon::from_tsv("[terms]\nmeh\t0\n".as_bytes()).is_err());
        assert!(SentimentLexicon::from_tsv("[boosters]\nvery\t2\n".as_bytes()).is_err());
    }

    #[test]
    fn sentiment_toward_scores_matching_records_only() {
        use crate::corpus::{utc, FollowerCode, MessageRecord};
        let mk = |author: &str, text: &str| MessageRecord {
            id: None,
            author: author.into(),
            timestamp: utc(2016, 12, 1, 10, 0, 0),
            text: text.into(),
            retweet_count: 0,
            like_count: 0,
            reply_count: None,
            language: Language::En,
            follower_code: FollowerCode::Neither,
            is_retweet: false,
        };
        let corpus = Corpus::new(
            vec![
                mk("u1", "candidate Adler is great"),
                mk("u2", "no candidates here"),
                mk("u3", "#adler and @burger mentioned"),
                mk("u4", "plain chatter"),
                mk("u5", "burger rally tomorrow"),
            ],
            vec![],
        );
        let targets = vec![
            TargetPatterns::new("adler", &["adler".into(), "#adler".into()]).unwrap(),
            TargetPatterns::new("burger", &["burger".into()]).unwrap(),
        ];
        let mut lexicons = LexiconSet::default();
        lexicons.by_language.insert(Language::En, lexicon());

        let scored = sentiment_toward(&corpus, &targets, &lexicons).unwrap();
        // u1 -> adler, u3 -> both (ambiguous), u5 -> burger.
        assert_eq!(scored.len(), 4);
        let ambiguous: Vec<_> = scored.iter().filter(|m| m.ambiguous).collect();
        assert_eq!(ambiguous.len(), 2);
        assert!(ambiguous.iter().all(|m| m.author == "u3"));
        let adler_hit = scored.iter().find(|m| m.author == "u1").unwrap();
        assert_eq!(adler_hit.category, PolarityCategory::Positive);
    }

    #[test]
    fn sentiment_toward_empty_corpus_and_unsupported_language() {
        let corpus = Corpus::new(vec![], vec![]);
        let targets = vec![TargetPatterns::new("x", &["x".into()]).unwrap()];
        let scored = sentiment_toward(&corpus, &targets, &LexiconSet::default()).unwrap();
        assert!(scored.is_empty());

        use crate::corpus::{utc, FollowerCode, MessageRecord};
        let corpus = Corpus::new(
            vec![MessageRecord {
                id: None,
                author: "u".into(),
                timestamp: utc(2016, 12, 1, 0, 0, 0),
                text: "x great".into(),
                retweet_count: 0,
                like_count: 0,
                reply_count: None,
                language: Language::Other,
                follower_code: FollowerCode::Neither,
                is_retweet: false,
            }],
            vec![],
        );
        let scored = sentiment_toward(&corpus, &targets, &LexiconSet::default()).unwrap();
        assert_eq!(scored.len(), 1);
        assert!(scored[0].unsupported_language);
        assert_eq!(scored[0].score, SentimentScore::NEUTRAL);
    }

    #[test]
    fn invalid_target_pattern_fails_at_load() {
        assert!(TargetPatterns::new("bad", &["([".into()]).is_err());
        assert!(TargetPatterns::new("empty", &[]).is_err());
    }
}
