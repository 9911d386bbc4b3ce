//! Tokenization, stop-word removal, frequency dictionaries and the
//! candidate-name lexicon.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::corpus::Corpus;

/// Default English stop-word list shipped with the crate, one token per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../assets/stopwords.txt");

/// Default candidate-name lexicon (22 lowercase given names).
pub const DEFAULT_NAMES: &str = include_str!("../assets/names.txt");

#[derive(Debug, Error)]
pub enum TextError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("lexicon entry {0:?} is not a single token")]
    InvalidLexiconEntry(String),
}

/// Ordered lowercase tokens for one message.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn contains(&self, token: &str) -> bool {
        self.tokens.iter().any(|t| t == token)
    }
}

/// Fold a handful of common Latin diacritics down to ASCII; everything else
/// passes through unchanged. The corpus under study is English.
fn fold_char(c: char) -> char {
    match c {
        'à'..='å' => 'a',
        'è'..='ë' => 'e',
        'ì'..='ï' => 'i',
        'ò'..='ö' => 'o',
        'ù'..='ü' => 'u',
        'ç' => 'c',
        'ñ' => 'n',
        'ý' | 'ÿ' => 'y',
        _ => c,
    }
}

/// Lowercase and split on non-alphanumeric characters. URL runs (`http…`)
/// are dropped whole; leading `#` and `@` are stripped so tags and handles
/// yield their bare word.
pub fn tokenize(text: &str) -> TokenStream {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        if raw.starts_with("http") {
            continue;
        }
        let stripped = raw.trim_start_matches(['#', '@']);
        let mut current = String::new();
        for c in stripped.chars().flat_map(|c| c.to_lowercase()) {
            let c = fold_char(c);
            if c.is_alphanumeric() {
                current.push(c);
            } else if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
    }
    TokenStream { tokens }
}

/// Extract `@handle` mention tokens from raw text, lowercased, in order.
pub fn extract_mentions(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        if let Some(rest) = raw.strip_prefix('@') {
            let handle: String = rest
                .chars()
                .take_while(|c| c.is_alphanumeric() || *c == '_')
                .flat_map(|c| c.to_lowercase())
                .collect();
            if !handle.is_empty() {
                out.push(handle);
            }
        }
    }
    out
}

/// Remove every member of `stoplist` from the stream, preserving order.
pub fn remove_stopwords(ts: &TokenStream, stoplist: &BTreeSet<String>) -> TokenStream {
    TokenStream {
        tokens: ts
            .tokens
            .iter()
            .filter(|t| !stoplist.contains(t.as_str()))
            .cloned()
            .collect(),
    }
}

/// Token counts over a corpus after tokenization and stop-word removal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyDictionary {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyDictionary {
    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, c)| (t.as_str(), *c))
    }
}

pub fn build_frequency_dictionary(
    corpus: &Corpus,
    stoplist: &BTreeSet<String>,
) -> FrequencyDictionary {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut total = 0u64;
    for msg in corpus.messages() {
        let ts = remove_stopwords(&tokenize(&msg.text), stoplist);
        for token in ts.tokens {
            *counts.entry(token).or_insert(0) += 1;
            total += 1;
        }
    }
    FrequencyDictionary { counts, total }
}

/// Nonempty set of lowercase single-token name candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameLexicon {
    names: BTreeSet<String>,
}

impl NameLexicon {
    pub fn new<I, S>(names: I) -> Result<Self, TextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = BTreeSet::new();
        for name in names {
            let name: String = name.into();
            let lower = name.to_lowercase();
            if lower.is_empty() || lower.chars().any(|c| c.is_whitespace()) {
                return Err(TextError::InvalidLexiconEntry(name));
            }
            set.insert(lower);
        }
        if set.is_empty() {
            return Err(TextError::EmptyLexicon);
        }
        Ok(NameLexicon { names: set })
    }

    /// The 22-name default lexicon.
    pub fn default_names() -> Self {
        NameLexicon::new(parse_token_lines(DEFAULT_NAMES)).expect("embedded lexicon is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self, TextError> {
        let content = fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        NameLexicon::new(parse_token_lines(&content))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Parse a token-per-line file; blank lines and `#` comments are skipped.
pub fn parse_token_lines(content: &str) -> Vec<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// The shipped English stop-word list as a set.
pub fn default_stoplist() -> BTreeSet<String> {
    parse_token_lines(DEFAULT_STOPWORDS).into_iter().collect()
}

pub fn stoplist_from_file(path: &Path) -> Result<BTreeSet<String>, TextError> {
    let content = fs::read_to_string(path).map_err(|source| TextError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_token_lines(&content).into_iter().collect())
}

/// Lexicon members present in the dictionary with their counts, sorted by
/// count descending, name ascending on ties.
pub fn extract_names(dict: &FrequencyDictionary, lexicon: &NameLexicon) -> Vec<(String, u64)> {
    let mut out: Vec<(String, u64)> = lexicon
        .names()
        .filter_map(|n| {
            let c = dict.count(n);
            (c > 0).then(|| (n.to_string(), c))
        })
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}
