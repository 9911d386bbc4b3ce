//! Property suites over random corpora and transaction sets.

use chrono::{Duration, TimeZone, Utc};
use proptest::prelude::*;
use std::collections::BTreeSet;

use tweetmine::corpus::{
    filter_by_keywords, slice_by_time, Corpus, KeywordFilter, MatchMode, Message, TimeWindow,
};
use tweetmine::itemsets::{build_transactions, mine_frequent_itemsets, support};
use tweetmine::text::{
    build_frequency_dictionary, default_stoplist, remove_stopwords, tokenize, NameLexicon,
};
use tweetmine::timeseries::{frequency_series, name_frequency, rank_names};

fn word_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("george".to_string()),
        Just("james".to_string()),
        Just("alexander".to_string()),
        Just("louis".to_string()),
        Just("henry".to_string()),
        Just("baby".to_string()),
        Just("royal".to_string()),
        Just("name".to_string()),
        Just("the".to_string()),
        Just("watch".to_string()),
    ]
}

fn text_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(word_strategy(), 0..8).prop_map(|ws| ws.join(" "))
}

fn corpus_strategy(max_len: usize) -> impl Strategy<Value = Corpus> {
    prop::collection::vec((text_strategy(), 0i64..10_000), 0..max_len).prop_map(|items| {
        let base = Utc.with_ymd_and_hms(2013, 7, 24, 0, 0, 0).unwrap();
        let messages = items
            .into_iter()
            .enumerate()
            .map(|(i, (text, offset))| {
                Message {
                    id: format!("p{i:05}"),
                    timestamp: base + Duration::seconds(offset),
                    author: format!("u{i}"),
                    text,
                    mentions: Vec::new(),
                }
                .validate()
                .unwrap()
            })
            .collect();
        Corpus::new(messages).unwrap()
    })
}

proptest! {
    #[test]
    fn filter_retains_exactly_the_matching_messages(
        corpus in corpus_strategy(40),
        mode in prop_oneof![Just(MatchMode::Substring), Just(MatchMode::Token)],
    ) {
        let filter = KeywordFilter::new(["george", "baby"], mode).unwrap();
        let filtered = filter_by_keywords(&corpus, &filter);
        // subset with every retained message matching
        let ids: BTreeSet<&str> = filtered.messages().iter().map(|m| m.id.as_str()).collect();
        for m in corpus.messages() {
            let matched = filter.matches(&m.text);
            prop_assert_eq!(ids.contains(m.id.as_str()), matched);
        }
    }

    #[test]
    fn slice_is_idempotent_and_commutes_with_filter(corpus in corpus_strategy(40)) {
        let base = Utc.with_ymd_and_hms(2013, 7, 24, 0, 0, 0).unwrap();
        let window = TimeWindow::new(base + Duration::seconds(1000), base + Duration::seconds(8000)).unwrap();
        let once = slice_by_time(&corpus, &window);
        let twice = slice_by_time(&once, &window);
        prop_assert_eq!(once.messages(), twice.messages());

        let filter = KeywordFilter::new(["name"], MatchMode::Token).unwrap();
        let a = filter_by_keywords(&slice_by_time(&corpus, &window), &filter);
        let b = slice_by_time(&filter_by_keywords(&corpus, &filter), &window);
        prop_assert_eq!(a.messages(), b.messages());
    }

    #[test]
    fn tokenize_idempotent_on_rejoined_output(text in "\\PC{0,120}") {
        let first = tokenize(&text);
        prop_assert_eq!(tokenize(&first.tokens.join(" ")), first);
    }

    #[test]
    fn stopword_removal_is_idempotent(text in text_strategy()) {
        let stoplist = default_stoplist();
        let once = remove_stopwords(&tokenize(&text), &stoplist);
        prop_assert_eq!(remove_stopwords(&once, &stoplist), once);
    }

    #[test]
    fn dictionary_total_matches_stream_lengths(corpus in corpus_strategy(30)) {
        let stoplist = default_stoplist();
        let dict = build_frequency_dictionary(&corpus, &stoplist);
        let total: usize = corpus
            .messages()
            .iter()
            .map(|m| remove_stopwords(&tokenize(&m.text), &stoplist).tokens.len())
            .sum();
        prop_assert_eq!(dict.total(), total as u64);
    }

    #[test]
    fn anti_monotone_support(corpus in corpus_strategy(60), sub_mask in 1u8..7) {
        let lexicon = NameLexicon::new(["george", "james", "alexander"]).unwrap();
        let ts = build_transactions(&corpus, &lexicon);
        prop_assume!(!ts.is_empty());
        let all = ["alexander", "george", "james"];
        let superset: BTreeSet<String> = all.iter().map(|s| s.to_string()).collect();
        let subset: BTreeSet<String> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| sub_mask & (1 << i) != 0)
            .map(|(_, s)| s.to_string())
            .collect();
        let (sup_g, _) = support(&ts, &superset).unwrap();
        let (sup_f, _) = support(&ts, &subset).unwrap();
        prop_assert!(sup_f >= sup_g);
    }

    #[test]
    fn duplication_leaves_ratios_unchanged(corpus in corpus_strategy(25), k in 2usize..5) {
        prop_assume!(!corpus.is_empty());
        let duplicated = duplicate(&corpus, k);
        let (start, end) = corpus.time_span().unwrap();
        let window = TimeWindow::new(start, end + Duration::seconds(1)).unwrap();

        let (f1, _, _) = name_frequency(&corpus, "george", &window).unwrap();
        let (f2, _, _) = name_frequency(&duplicated, "george", &window).unwrap();
        prop_assert_eq!(f1, f2);

        let lexicon = NameLexicon::new(["george", "james", "louis"]).unwrap();
        let r1 = rank_names(&corpus, &lexicon, &window).unwrap();
        let r2 = rank_names(&duplicated, &lexicon, &window).unwrap();
        let order1: Vec<&str> = r1.entries.iter().map(|e| e.name.as_str()).collect();
        let order2: Vec<&str> = r2.entries.iter().map(|e| e.name.as_str()).collect();
        prop_assert_eq!(order1, order2);
        for (a, b) in r1.entries.iter().zip(&r2.entries) {
            prop_assert_eq!(a.f, b.f);
        }
    }

    #[test]
    fn series_totals_cover_the_corpus(corpus in corpus_strategy(30)) {
        prop_assume!(!corpus.is_empty());
        let series = frequency_series(&corpus, "george", Duration::seconds(600)).unwrap();
        let total: u64 = series.points.iter().map(|p| p.n_total).sum();
        prop_assert_eq!(total, corpus.len() as u64);
    }

    #[test]
    fn mined_supports_are_exact_counts(corpus in corpus_strategy(60)) {
        let lexicon = NameLexicon::new(["george", "james", "alexander", "louis"]).unwrap();
        let ts = build_transactions(&corpus, &lexicon);
        prop_assume!(!ts.is_empty());
        for fi in mine_frequent_itemsets(&ts, 0.0, 1, 4).unwrap() {
            prop_assert_eq!((fi.support * ts.len() as f64).round() as u64, fi.count);
            let items: BTreeSet<String> = fi.items.iter().cloned().collect();
            let (_, count) = support(&ts, &items).unwrap();
            prop_assert_eq!(count, fi.count);
        }
    }
}

fn duplicate(corpus: &Corpus, k: usize) -> Corpus {
    let mut messages = Vec::new();
    for copy in 0..k {
        for m in corpus.messages() {
            let mut m = m.clone();
            m.id = format!("{}-c{copy}", m.id);
            messages.push(m);
        }
    }
    Corpus::new(messages).unwrap()
}
