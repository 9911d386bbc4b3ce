//! Keyword-filtered tweet-corpus analytics: windowed name-frequency time
//! series with step detection, Apriori frequent-itemset mining over
//! name co-occurrences, and mention-graph community analysis with
//! force-directed layouts.
//!
//! The pipeline runs over line-delimited corpora (`.jsonl` or `.csv`):
//! load and filter a corpus, tokenize and count names, mine itemsets,
//! build the mention graph, detect communities, lay the graph out and
//! export everything as CSV/DOT/GraphML.

pub mod corpus;
pub mod export;
pub mod graph;
pub mod itemsets;
pub mod layout;
pub mod synth;
pub mod text;
pub mod timeseries;

pub use corpus::{
    filter_by_keywords, load_corpus, slice_by_time, write_corpus, Corpus, CorpusError, Format,
    KeywordFilter, MatchMode, Message, TimeWindow,
};
pub use graph::{
    build_mention_graph, detect_communities, filter_active, modularity_score, remove_popular,
    GraphError, MentionGraph, Partition,
};
pub use itemsets::{
    build_transactions, itemset_graph, mine_frequent_itemsets, support, top_itemsets,
    FrequentItemset, ItemsetError, ItemsetGraph, Transaction, TransactionSet,
};
pub use layout::{layout_graph, Layout, LayoutError};
pub use synth::{generate_synthetic, SyntheticSpec, SynthError};
pub use text::{
    build_frequency_dictionary, extract_names, remove_stopwords, tokenize, FrequencyDictionary,
    NameLexicon, TextError, TokenStream,
};
pub use timeseries::{
    detect_jump, frequency_series, name_frequency, rank_names, FrequencySeries, NameRanking,
    SeriesError,
};
