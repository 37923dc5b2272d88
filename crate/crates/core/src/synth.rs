//! Deterministic synthetic corpus generator.
//!
//! Produces a two-candidate election discussion with enough planted structure
//! to exercise every pipeline phase: partisan follower groups, hashtags from
//! all five categories, @-mention threads, misinformation keyword streams
//! with known peak days, one heavily re-shared video message, a labeled
//! reaction set, self-disclosed and high-volume bot accounts, and engagement
//! counts with a strong retweet/like correlation. Everything derives from one
//! seed.

use std::fmt::Write as _;

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::{Distribution, LogNormal};

use crate::rng::stream_rng;

pub const CANDIDATE_A: &str = "adler";
pub const CANDIDATE_B: &str = "birke";

/// Start of the generated campaign window.
pub fn default_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 9, 1).expect("valid")
}

pub const DEFAULT_DAYS: u32 = 31;

/// Reaction labels planted for the first misinformation stream, with their
/// exact counts.
pub const REACTION_PLAN: [(&str, usize); 5] = [
    ("seek", 53),
    ("annoy", 13),
    ("threat", 23),
    ("sarcasm", 36),
    ("amuse", 10),
];

#[derive(Debug, Clone)]
pub struct SynthOutput {
    /// JSON-lines corpus.
    pub jsonl: String,
    /// One username per line.
    pub followers_a: String,
    pub followers_b: String,
    /// `username,score` rows; a few scores are blank (insufficient data) and
    /// a few accounts are missing entirely (gone).
    pub bot_scores: String,
    /// `message_key,label` rows for the planted reaction set.
    pub annotations: String,
}

struct Message {
    id: Option<String>,
    author: String,
    day: u32,
    hour: u32,
    minute: u32,
    second: u32,
    text: String,
    rt_count: u64,
    like_count: u64,
    reply_count: Option<u64>,
    lang: &'static str,
}

const SUPPORT_A: &[&str] = &["#vote4adler", "#teamadler", "#adlervoran"];
const SUPPORT_B: &[&str] = &["#birke2016", "#probirke", "#mitbirke"];
const AGAINST_A: &[&str] = &["#noadler", "#adlerraus"];
const AGAINST_B: &[&str] = &["#stopbirke", "#nichtbirke", "#birkenein"];
const GENERAL: &[&str] = &["#wahl21", "#stichwahl", "#adler", "#birke", "#tvduell"];
const TOPICS: &[&str] = &["#grenzen", "#klima", "#europa", "#jobs", "#renten"];
const OTHER_TAGS: &[&str] = &["#montag", "#wetter", "#kaffee", "#herbst"];

const POSITIVE_DE: &[&str] = &["gut", "stark", "hoffnung", "gemeinsam", "danke", "freude"];
const NEGATIVE_DE: &[&str] = &["schlecht", "lüge", "angst", "wut", "skandal", "schande"];
const POSITIVE_EN: &[&str] = &["good", "strong", "hope", "together", "thanks", "joy"];
const NEGATIVE_EN: &[&str] = &["bad", "lies", "fear", "anger", "scandal", "shame"];
const FILLER_DE: &[&str] = &[
    "heute", "wieder", "debatte", "stimme", "zukunft", "land", "leute", "abend", "rede",
    "plakate", "umfrage", "runde",
];
const FILLER_EN: &[&str] = &[
    "today", "again", "debate", "voice", "future", "country", "people", "evening", "speech",
    "posters", "polls", "round",
];

fn pick<'a, R: Rng>(rng: &mut R, pool: &[&'a str]) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

/// Generates the bundled synthetic corpus. `n_target` is the approximate
/// message count (the planted structures add a fixed overhead of a few
/// hundred messages).
pub fn generate_corpus(seed: u64, n_target: usize) -> SynthOutput {
    let mut messages: Vec<Message> = Vec::with_capacity(n_target + 512);

    // Account population.
    let followers_a: Vec<String> = (0..240).map(|i| format!("a_fan{i:03}")).collect();
    let followers_b: Vec<String> = (0..190).map(|i| format!("b_fan{i:03}")).collect();
    let both: Vec<String> = (0..25).map(|i| format!("both{i:02}")).collect();
    let neutral: Vec<String> = (0..130).map(|i| format!("user{i:03}")).collect();
    let bots = ["wetterbot", "infobot24", "massenaccount"];

    let mut follower_list_a: Vec<String> = followers_a.clone();
    follower_list_a.extend(both.iter().cloned());
    let mut follower_list_b: Vec<String> = followers_b.clone();
    follower_list_b.extend(both.iter().cloned());

    let mut next_id = 0usize;
    let mut fresh_id = move || {
        next_id += 1;
        format!("m{next_id:06}")
    };

    // --- Candidate messages: a few per day, engagement-heavy.
    {
        let mut rng = stream_rng(seed, 1);
        let engagement = LogNormal::new(3.0, 0.8).expect("valid");
        for day in 0..DEFAULT_DAYS {
            for (cand, support, lang_pos) in [
                (CANDIDATE_A, SUPPORT_A, POSITIVE_DE),
                (CANDIDATE_B, SUPPORT_B, POSITIVE_DE),
            ] {
                let posts = 1 + (rng.random_range(0..3u32) == 0) as u32;
                for _ in 0..posts {
                    let rt = engagement.sample(&mut rng) as u64;
                    let like = (rt as f64 * rng.random_range(1.1..1.6)) as u64;
                    let text = format!(
                        "{} {} {} {} {}",
                        pick(&mut rng, FILLER_DE),
                        pick(&mut rng, lang_pos),
                        pick(&mut rng, FILLER_DE),
                        pick(&mut rng, GENERAL),
                        pick(&mut rng, support),
                    );
                    messages.push(Message {
                        id: Some(fresh_id()),
                        author: cand.to_string(),
                        day,
                        hour: rng.random_range(7..22),
                        minute: rng.random_range(0..60),
                        second: rng.random_range(0..60),
                        text,
                        rt_count: rt,
                        like_count: like,
                        reply_count: Some(rng.random_range(0..40)),
                        lang: "de",
                    });
                }
            }
        }
    }

    // --- Planted misinformation streams with known peaks.
    // Stream "geheimakte": campaign-rumor keyword, peak on day 17.
    // Stream "krankheit": health rumor, peak on day 10.
    {
        let mut rng = stream_rng(seed, 2);
        let plant = |rng: &mut rand_chacha::ChaCha8Rng,
                     messages: &mut Vec<Message>,
                     fresh_id: &mut dyn FnMut() -> String,
                     keyword: &str,
                     peak_day: u32,
                     total: usize| {
            for _ in 0..total {
                // Triangular-ish distribution around the peak.
                let offset = (rng.random_range(0..4) + rng.random_range(0..4)) as i64 - 3;
                let day = (peak_day as i64 + offset).clamp(0, DEFAULT_DAYS as i64 - 1) as u32;
                let day = if rng.random_range(0..3) == 0 { day } else { peak_day };
                let author = format!("user{:03}", rng.random_range(0..130));
                let text = format!(
                    "{} {} {} {}",
                    pick(rng, FILLER_DE),
                    keyword,
                    pick(rng, NEGATIVE_DE),
                    pick(rng, GENERAL)
                );
                messages.push(Message {
                    id: Some(fresh_id()),
                    author,
                    day,
                    hour: rng.random_range(6..23),
                    minute: rng.random_range(0..60),
                    second: rng.random_range(0..60),
                    text,
                    rt_count: rng.random_range(0..6),
                    like_count: rng.random_range(0..9),
                    reply_count: None,
                    lang: "de",
                });
            }
        };
        plant(&mut rng, &mut messages, &mut fresh_id, "geheimakte", 17, 90);
        plant(&mut rng, &mut messages, &mut fresh_id, "krankheit", 10, 60);
    }

    // --- Labeled reaction set for the first stream (annotation fixture).
    let mut annotations = String::new();
    {
        let mut rng = stream_rng(seed, 3);
        let phrases: [(&str, &str); 5] = [
            ("seek", "stimmt die geheimakte wirklich quelle"),
            ("annoy", "schon wieder diese geheimakte nervt"),
            ("threat", "geheimakte könnte die stichwahl kosten"),
            ("sarcasm", "geheimakte natürlich und morgen ufos"),
            ("amuse", "popcorn holen geheimakte zeit"),
        ];
        let mut k = 0usize;
        for (label, count) in REACTION_PLAN {
            let phrase = phrases
                .iter()
                .find(|(l, _)| *l == label)
                .map(|(_, p)| *p)
                .expect("planned label");
            for _ in 0..count {
                let id = format!("spy-r-{k:04}");
                k += 1;
                let author = format!("user{:03}", rng.random_range(0..130));
                messages.push(Message {
                    id: Some(id.clone()),
                    author,
                    day: 18 + rng.random_range(0..3),
                    hour: rng.random_range(6..23),
                    minute: rng.random_range(0..60),
                    second: rng.random_range(0..60),
                    text: format!("{} nr{}", phrase, k),
                    rt_count: rng.random_range(0..4),
                    like_count: rng.random_range(0..6),
                    reply_count: None,
                    lang: "de",
                });
                let _ = writeln!(annotations, "{id},{label}");
            }
        }
    }

    // --- One heavily re-shared video message: 68 retweets by 18 distinct
    // spreaders, one of whom contributes 12.
    {
        let mut rng = stream_rng(seed, 4);
        let video_text = "hass im netz und warum ich dagegen bin video";
        messages.push(Message {
            id: Some("video-hass".into()),
            author: "b_fan000".into(),
            day: 6,
            hour: 9,
            minute: 30,
            second: 0,
            text: video_text.into(),
            rt_count: 68,
            like_count: 90,
            reply_count: None,
            lang: "de",
        });
        let mut spreaders: Vec<(String, usize)> = vec![("b_fan001".into(), 12), ("b_fan002".into(), 4)];
        // Sixteen non-followers share the remaining 52.
        let mut left = 68 - 16;
        for i in 0..16 {
            let extra = if i < 12 { 3 } else { 0 };
            let extra = extra.min(left);
            left -= extra;
            spreaders.push((format!("user{:03}", 100 + i), 1 + extra));
        }
        assert_eq!(spreaders.iter().map(|s| s.1).sum::<usize>(), 68);
        let mut k = 0;
        for (author, n) in spreaders {
            for _ in 0..n {
                messages.push(Message {
                    id: Some(format!("rt-video-{k:03}")),
                    author: author.clone(),
                    day: 7 + rng.random_range(0..6),
                    hour: rng.random_range(0..24),
                    minute: rng.random_range(0..60),
                    second: rng.random_range(0..60),
                    text: format!("RT @b_fan000: {video_text}"),
                    rt_count: 0,
                    like_count: rng.random_range(0..3),
                    reply_count: None,
                    lang: "de",
                });
                k += 1;
            }
        }
    }

    // --- Bot accounts: two self-disclosed, one high-volume.
    {
        let mut rng = stream_rng(seed, 5);
        for day in [14, 15, 16, 17] {
            for i in 0..55u32 {
                messages.push(Message {
                    id: Some(fresh_id()),
                    author: "massenaccount".into(),
                    day,
                    hour: i % 24,
                    minute: rng.random_range(0..60),
                    second: rng.random_range(0..60),
                    text: format!("{} update {} {}", pick(&mut rng, FILLER_DE), day, i),
                    rt_count: 0,
                    like_count: 0,
                    reply_count: None,
                    lang: "de",
                });
            }
        }
        for (bot, n) in [("wetterbot", 9u32), ("infobot24", 14)] {
            for i in 0..n {
                messages.push(Message {
                    id: Some(fresh_id()),
                    author: bot.into(),
                    day: rng.random_range(0..DEFAULT_DAYS),
                    hour: 6,
                    minute: i,
                    second: 0,
                    text: format!("{} bericht {} {}", pick(&mut rng, FILLER_DE), bot, i),
                    rt_count: 0,
                    like_count: rng.random_range(0..2),
                    reply_count: None,
                    lang: "de",
                });
            }
        }
    }

    // --- General follower chatter up to the target size.
    {
        let mut rng = stream_rng(seed, 6);
        let remaining = n_target.saturating_sub(messages.len());
        for _ in 0..remaining {
            let (author, own_support, own_against_rival, rival, lang): (
                String,
                &[&str],
                &[&str],
                &str,
                &'static str,
            ) = match rng.random_range(0..100u32) {
                0..=39 => {
                    let a = &followers_a[rng.random_range(0..followers_a.len())];
                    (a.clone(), SUPPORT_A, AGAINST_B, CANDIDATE_B, "de")
                }
                40..=71 => {
                    let b = &followers_b[rng.random_range(0..followers_b.len())];
                    (b.clone(), SUPPORT_B, AGAINST_A, CANDIDATE_A, "de")
                }
                72..=76 => {
                    let x = &both[rng.random_range(0..both.len())];
                    (x.clone(), GENERAL, GENERAL, CANDIDATE_A, "de")
                }
                _ => {
                    let u = &neutral[rng.random_range(0..neutral.len())];
                    let lang = if rng.random_range(0..100) < 55 { "en" } else { "other" };
                    (u.clone(), GENERAL, GENERAL, CANDIDATE_B, lang)
                }
            };
            let (pos_pool, neg_pool, filler): (&[&str], &[&str], &[&str]) = match lang {
                "de" => (POSITIVE_DE, NEGATIVE_DE, FILLER_DE),
                _ => (POSITIVE_EN, NEGATIVE_EN, FILLER_EN),
            };
            let roll = rng.random_range(0..100u32);
            let mut text = String::new();
            if roll < 22 {
                //

                // Positive about own candidate.
                let _ = write!(
                    text,
                    "{} @{} {} {} {}",
                    pick(&mut rng, filler),
                    if own_support == SUPPORT_B { CANDIDATE_B } else { CANDIDATE_A },
                    pick(&mut rng, pos_pool),
                    pick(&mut rng, own_support),
                    pick(&mut rng, GENERAL)
                );
            } else if roll < 40 {
                // Negative about the rival.
                let _ = write!(
                    text,
                    "{} @{} {} {} {}",
                    pick(&mut rng, filler),
                    rival,
                    pick(&mut rng, neg_pool),
                    pick(&mut rng, own_against_rival),
                    pick(&mut rng, GENERAL)
                );
            } else if roll < 52 {
                // Peer conversation.
                let peer = match rng.random_range(0..3u32) {
                    0 => followers_a[rng.random_range(0..followers_a.len())].clone(),
                    1 => followers_b[rng.random_range(0..followers_b.len())].clone(),
                    _ => neutral[rng.random_range(0..neutral.len())].clone(),
                };
                let _ = write!(
                    text,
                    "@{} {} {} {}",
                    peer,
                    pick(&mut rng, filler),
                    pick(&mut rng, pos_pool),
                    pick(&mut rng, TOPICS)
                );
            } else if roll < 64 {
                // Retweet of a candidate line.
                let cand = if rng.random_range(0..2) == 0 { CANDIDATE_A } else { CANDIDATE_B };
                let _ = write!(
                    text,
                    "RT @{}: {} {} {}",
                    cand,
                    pick(&mut rng, filler),
                    pick(&mut rng, pos_pool),
                    pick(&mut rng, GENERAL)
                );
            } else {
                // Topic chatter with co-occurring hashtags.
                let _ = write!(
                    text,
                    "{} {} {} {} {}",
                    pick(&mut rng, filler),
                    pick(&mut rng, TOPICS),
                    pick(&mut rng, filler),
                    pick(&mut rng, GENERAL),
                    if rng.random_range(0..4) == 0 {
                        pick(&mut rng, OTHER_TAGS)
                    } else {
                        pick(&mut rng, TOPICS)
                    }
                );
            }
            let rt = rng.random_range(0..12u64);
            let like = (rt as f64 * rng.random_range(1.0..1.8)) as u64 + rng.random_range(0..2);
            messages.push(Message {
                id: Some(fresh_id()),
                author,
                day: rng.random_range(0..DEFAULT_DAYS),
                hour: rng.random_range(0..24),
                minute: rng.random_range(0..60),
                second: rng.random_range(0..60),
                text,
                rt_count: rt,
                like_count: like,
                reply_count: if rng.random_range(0..4) == 0 {
                    Some(rng.random_range(0..5))
                } else {
                    None
                },
                lang,
            });
        }
    }

    // --- Serialize JSONL in generation order (ingest re-sorts canonically).
    let start = default_start();
    let mut jsonl = String::with_capacity(messages.len() * 160);
    for m in &messages {
        let date = start + chrono::Duration::days(m.day as i64);
        let line = serde_json::json!({
            "id": m.id,
            "author": m.author,
            "ts": format!("{}T{:02}:{:02}:{:02}Z", date, m.hour, m.minute, m.second),
            "text": m.text,
            "rt_count": m.rt_count,
            "like_count": m.like_count,
            "reply_count": m.reply_count,
            "lang": m.lang,
        });
        jsonl.push_str(&line.to_string());
        jsonl.push('\n');
    }

    // --- Bot scores: bots high, a sprinkle of potential bots, ~2% absent.
    let mut bot_scores = String::new();
    {
        let mut rng = stream_rng(seed, 7);
        let mut all_authors: Vec<String> = Vec::new();
        all_authors.push(CANDIDATE_A.into());
        all_authors.push(CANDIDATE_B.into());
        all_authors.extend(followers_a.iter().cloned());
        all_authors.extend(followers_b.iter().cloned());
        all_authors.extend(both.iter().cloned());
        all_authors.extend(neutral.iter().cloned());
        for (i, name) in all_authors.iter().enumerate() {
            if i % 50 == 17 {
                continue; // account gone: not in the file at all
            }
            if i % 50 == 33 {
                let _ = writeln!(bot_scores, "{name},");
                continue; // insufficient data
            }
            let score = if i % 23 == 5 {
                rng.random_range(0.51..0.85)
            } else {
                rng.random_range(0.02..0.45)
            };
            let _ = writeln!(bot_scores, "{name},{score:.3}");
        }
        for bot in bots {
            let _ = writeln!(bot_scores, "{bot},{:.3}", rng.random_range(0.92..0.99));
        }
    }

    SynthOutput {
        jsonl,
        followers_a: follower_list_a.join("\n") + "\n",
        followers_b: follower_list_b.join("\n") + "\n",
        bot_scores,
        annotations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest, SourceFormat};

    #[test]
    fn generator_is_deterministic() {
        let a = generate_corpus(42, 1000);
        let b = generate_corpus(42, 1000);
        assert_eq!(a.jsonl, b.jsonl);
        assert_eq!(a.bot_scores, b.bot_scores);
        let c = generate_corpus(43, 1000);
        assert_ne!(a.jsonl, c.jsonl);
    }

    #[test]
    fn generated_corpus_ingests_cleanly() {
        let out = generate_corpus(42, 1500);
        let ingested = ingest(out.jsonl.as_bytes(), SourceFormat::JsonLines, "synth").unwrap();
        assert!(ingested.rejects.is_empty(), "{:?}", ingested.rejects);
        assert!(ingested.corpus.len() >= 1500);
        // The planted reaction ids are present.
        let spy = ingested
            .corpus
            .records
            .iter()
            .filter(|r| r.id.as_deref().map(|i| i.starts_with("spy-r-")).unwrap_or(false))
            .count();
        assert_eq!(spy, 135);
        // The planted video trajectory is present.
        let rts = ingested
            .corpus
            .records
            .iter()
            .filter(|r| r.id.as_deref().map(|i| i.starts_with("rt-video-")).unwrap_or(false))
            .count();
        assert_eq!(rts, 68);
    }
}
