//! Property tests for the corpus operations, plus the large planted-duplicate
//! reconciliation.

use std::collections::HashSet;

use chrono::Duration;
use proptest::prelude::*;
use sma_core::corpus::{
    assign_follower_codes, daily_counts, deduplicate, filter_by_selectors, utc, Corpus,
    FollowerCode, Language, MessageRecord, SelectorSet,
};

fn record(author_id: u8, day: u8, second: u32, text_id: u8, lang_id: u8) -> MessageRecord {
    let texts = [
        "nur text",
        "#wahl heute",
        "#wahl #runde zwei",
        "@someone hallo",
        "#runde eins",
        "RT @x: #wahl",
    ];
    MessageRecord {
        id: None,
        author: format!("user{}", author_id % 5),
        timestamp: utc(2016, 11, 14, 0, 0, 0) + Duration::days(day as i64 % 5) + Duration::seconds(second as i64),
        text: texts[text_id as usize % texts.len()].to_string(),
        retweet_count: second as u64 % 7,
        like_count: second as u64 % 11,
        reply_count: None,
        language: match lang_id % 3 {
            0 => Language::De,
            1 => Language::En,
            _ => Language::Other,
        },
        follower_code: FollowerCode::Neither,
        is_retweet: false,
    }
}

fn corpus_strategy() -> impl Strategy<Value = Corpus> {
    prop::collection::vec(
        (0u8..5, 0u8..5, 0u32..120, 0u8..6, 0u8..3),
        0..40,
    )
    .prop_map(|specs| {
        Corpus::new(
            specs
                .into_iter()
                .map(|(a, d, s, t, l)| record(a, d, s, t, l))
                .collect(),
            vec![],
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dedup_is_idempotent(corpus in corpus_strategy()) {
        let once = deduplicate(corpus);
        let twice = deduplicate(once.clone());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn filter_is_idempotent_and_subset(corpus in corpus_strategy()) {
        let selectors = SelectorSet::new(
            vec!["#wahl".into()],
            vec![vec!["#wahl".into(), "#runde".into()]],
        ).unwrap();
        let once = filter_by_selectors(&corpus, &selectors);
        let twice = filter_by_selectors(&once, &selectors);
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.len() <= corpus.len());
        // Sub-multiset: every kept record appears in the original.
        for r in &once.records {
            prop_assert!(corpus.records.contains(r));
        }
    }

    #[test]
    fn language_partition_conserves_size(corpus in corpus_strategy()) {
        let parts = corpus.partition_by_language();
        let total: usize = parts.values().map(|c| c.len()).sum();
        prop_assert_eq!(total, corpus.len());
    }

    #[test]
    fn daily_counts_conserve_in_range_records(corpus in corpus_strategy()) {
        let start = chrono::NaiveDate::from_ymd_opt(2016, 11, 14).unwrap();
        let end = chrono::NaiveDate::from_ymd_opt(2016, 11, 18).unwrap();
        let series = daily_counts(&corpus, start, end, vec![]).unwrap();
        let in_range = corpus.records.iter()
            .filter(|r| { let d = r.date(); d >= start && d <= end })
            .count() as u64;
        prop_assert_eq!(series.total(), in_range);
    }

    #[test]
    fn follower_codes_independent_of_record_order(corpus in corpus_strategy(), rot in 0usize..10) {
        let a: HashSet<String> = ["user0", "user1"].iter().map(|s| s.to_string()).collect();
        let b: HashSet<String> = ["user1", "user2"].iter().map(|s| s.to_string()).collect();
        let coded = assign_follower_codes(corpus.clone(), &a, &b);

        let mut rotated = corpus.records.clone();
        if !rotated.is_empty() {
            let mid = rot % rotated.len();
            rotated.rotate_left(mid);
        }
        let coded_rotated = assign_follower_codes(Corpus::new(rotated, vec![]), &a, &b);
        // Same multiset of (author, code) results regardless of input order.
        let mut lhs: Vec<(String, u8)> = coded.records.iter()
            .map(|r| (r.author.clone(), r.follower_code.code())).collect();
        let mut rhs: Vec<(String, u8)> = coded_rotated.records.iter()
            .map(|r| (r.author.clone(), r.follower_code.code())).collect();
        lhs.sort();
        rhs.sort();
        prop_assert_eq!(lhs, rhs);
    }
}

/// The headline dedup arithmetic: 343766 raw messages containing 121 planted
/// duplicate keys reduce to 343645 unique records.
#[test]
fn planted_duplicates_reconcile_to_unique_total() {
    let base = utc(2016, 11, 14, 0, 0, 0);
    let unique_total = 343_645usize;
    let planted = 121usize;
    let mut records: Vec<MessageRecord> = Vec::with_capacity(unique_total + planted);
    for i in 0..unique_total {
        records.push(MessageRecord {
            id: None,
            author: format!("u{}", i % 9973),
            timestamp: base + Duration::seconds(i as i64 % 2_592_000),
            text: format!("t{i}"),
            retweet_count: 0,
            like_count: 0,
            reply_count: None,
            language: Language::De,
            follower_code: FollowerCode::Neither,
            is_retweet: false,
        });
    }
    // Duplicate 121 existing records (same author, timestamp, text).
    for i in 0..planted {
        records.push(records[i * 997].clone());
    }
    assert_eq!(records.len(), 343_766);
    let corpus = Corpus::new(records, vec![]);
    let deduped = deduplicate(corpus);
    assert_eq!(deduped.len(), 343_645);
    assert_eq!(deduped.dedup_removed, 121);
}
