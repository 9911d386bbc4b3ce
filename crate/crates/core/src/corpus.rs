//! Message corpora: loading, validation, persistence, keyword filtering
//! and time slicing. Corpora are immutable snapshots once constructed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{extract_mentions, tokenize};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate message id: {0}")]
    DuplicateId(String),
    #[error("invalid time window: start must precede end")]
    InvalidWindow,
    #[error("keyword filter must contain at least one nonempty keyword")]
    EmptyFilter,
    #[error("invalid message {id:?}: {reason}")]
    InvalidMessage { id: String, reason: String },
}

/// One tweet-like record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    #[serde(rename = "ts")]
    pub timestamp: DateTime<Utc>,
    pub author: String,
    pub text: String,
    #[serde(default)]
    pub mentions: Vec<String>,
}

impl Message {
    /// Validate field invariants. Mentions fall back to `@handle` extraction
    /// from the text when the record carries none.
    pub fn validate(mut self) -> Result<Self, String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.author.is_empty() {
            return Err("empty author".into());
        }
        if self.text.chars().count() > 10_000 {
            return Err("text exceeds 10000 characters".into());
        }
        if self.mentions.is_empty() {
            self.mentions = extract_mentions(&self.text);
        }
        for m in &self.mentions {
            if m.is_empty() || m.chars().any(char::is_whitespace) {
                return Err(format!("invalid mention handle {m:?}"));
            }
        }
        // Twitter handles are case-insensitive; normalize once here.
        self.author = self.author.to_lowercase();
        for m in &mut self.mentions {
            *m = m.to_lowercase();
        }
        // Truncate to the second so persisted and in-memory timestamps agree.
        self.timestamp = DateTime::from_timestamp(self.timestamp.timestamp(), 0)
            .expect("timestamp in range")
            .with_timezone(&Utc);
        Ok(self)
    }
}

/// Immutable, (timestamp, id)-sorted collection of messages.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    messages: Vec<Message>,
    meta: BTreeMap<String, String>,
}

impl Corpus {
    pub fn new(mut messages: Vec<Message>) -> Result<Self, CorpusError> {
        messages.sort_by(|a, b| (a.timestamp, &a.id).cmp(&(b.timestamp, &b.id)));
        let mut seen = HashSet::new();
        for m in &messages {
            if !seen.insert(m.id.clone()) {
                return Err(CorpusError::DuplicateId(m.id.clone()));
            }
        }
        Ok(Corpus {
            messages,
            meta: BTreeMap::new(),
        })
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn authors(&self) -> BTreeSet<&str> {
        self.messages.iter().map(|m| m.author.as_str()).collect()
    }

    pub fn time_span(&self) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
        match (self.messages.first(), self.messages.last()) {
            (Some(a), Some(b)) => Some((a.timestamp, b.timestamp)),
            _ => None,
        }
    }
}

/// How keywords are matched against message text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// Case-insensitive substring match; the default, since hashtag keywords
    /// like `#royalbabywatch` appear embedded in text.
    Substring,
    /// Keyword must appear as a whole token of the tokenized text.
    Token,
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchMode::Substring => write!(f, "substring"),
            MatchMode::Token => write!(f, "token"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordFilter {
    keywords: BTreeSet<String>,
    pub match_mode: MatchMode,
}

impl KeywordFilter {
    pub fn new<I, S>(keywords: I, match_mode: MatchMode) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let keywords: BTreeSet<String> = keywords
            .into_iter()
            .map(|k| k.into().to_lowercase())
            .collect();
        if keywords.is_empty() || keywords.iter().any(String::is_empty) {
            return Err(CorpusError::EmptyFilter);
        }
        Ok(KeywordFilter {
            keywords,
            match_mode,
        })
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(String::as_str)
    }

    pub fn matches(&self, text: &str) -> bool {
        match self.match_mode {
            MatchMode::Substring => {
                let lower = text.to_lowercase();
                self.keywords.iter().any(|k| lower.contains(k.as_str()))
            }
            MatchMode::Token => {
                let ts = tokenize(text);
                self.keywords.iter().any(|k| ts.contains(k))
            }
        }
    }
}

/// Half-open UTC interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    start: DateTime<Utc>,
    end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self, CorpusError> {
        if start >= end {
            return Err(CorpusError::InvalidWindow);
        }
        Ok(TimeWindow { start, end })
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.start
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.end
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") => Some(Format::Jsonl),
            Some("csv") => Some(Format::Csv),
            _ => None,
        }
    }
}

fn ts_to_string(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Load and validate a corpus file. Invalid records are reported with their
/// line number; duplicate ids abort the load.
pub fn load_corpus(path: &Path, format: Format) -> Result<Corpus, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::FileNotFound(path.display().to_string()));
    }
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    match format {
        Format::Jsonl => load_jsonl(reader, path),
        Format::Csv => load_csv(reader),
    }
}

fn load_jsonl(reader: impl BufRead, path: &Path) -> Result<Corpus, CorpusError> {
    let mut messages = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let msg: Message =
            serde_json::from_str(&line).map_err(|e| CorpusError::MalformedRecord {
                line: lineno,
                reason: e.to_string(),
            })?;
        let msg = msg.validate().map_err(|reason| CorpusError::MalformedRecord {
            line: lineno,
            reason,
        })?;
        messages.push(msg);
    }
    Corpus::new(messages)
}

fn load_csv(reader: impl BufRead) -> Result<Corpus, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut messages = Vec::new();
    for (idx, record) in rdr.deserialize::<CsvRecord>().enumerate() {
        // header is line 1
        let lineno = idx + 2;
        let rec = record.map_err(|e| CorpusError::MalformedRecord {
            line: lineno,
            reason: e.to_string(),
        })?;
        let timestamp = DateTime::parse_from_rfc3339(&rec.ts)
            .map_err(|e| CorpusError::MalformedRecord {
                line: lineno,
                reason: format!("bad timestamp {:?}: {e}", rec.ts),
            })?
            .with_timezone(&Utc);
        let mentions = if rec.mentions.is_empty() {
            Vec::new()
        } else {
            rec.mentions.split(';').map(str::to_string).collect()
        };
        let msg = Message {
            id: rec.id,
            timestamp,
            author: rec.author,
            text: rec.text,
            mentions,
        };
        let msg = msg.validate().map_err(|reason| CorpusError::MalformedRecord {
            line: lineno,
            reason,
        })?;
        messages.push(msg);
    }
    Corpus::new(messages)
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRecord {
    id: String,
    ts: String,
    author: String,
    text: String,
    mentions: String,
}

/// Persist a corpus bit-stably: sorted order, fixed field order, RFC 3339
/// second-precision timestamps.
pub fn write_corpus(corpus: &Corpus, path: &Path, format: Format) -> Result<(), CorpusError> {
    let mut file = File::create(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    match format {
        Format::Jsonl => {
            for msg in corpus.messages() {
                let rec = serde_json::json!({
                    "id": msg.id,
                    "ts": ts_to_string(msg.timestamp),
                    "author": msg.author,
                    "text": msg.text,
                    "mentions": msg.mentions,
                });
                writeln!(file, "{rec}").map_err(io_err)?;
            }
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(file);
            for msg in corpus.messages() {
                wtr.serialize(CsvRecord {
                    id: msg.id.clone(),
                    ts: ts_to_string(msg.timestamp),
                    author: msg.author.clone(),
                    text: msg.text.clone(),
                    mentions: msg.mentions.join(";"),
                })
                .map_err(|e| CorpusError::MalformedRecord {
                    line: 0,
                    reason: e.to_string(),
                })?;
            }
            wtr.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

/// Keep exactly the messages whose text matches at least one keyword.
pub fn filter_by_keywords(corpus: &Corpus, filter: &KeywordFilter) -> Corpus {
    let messages = corpus
        .messages()
        .iter()
        .filter(|m| filter.matches(&m.text))
        .cloned()
        .collect();
    let mut out = Corpus::new(messages).expect("subset of a valid corpus is valid");
    out.meta = corpus.meta.clone();
    out.meta.insert(
        "filter.keywords".into(),
        filter.keywords().collect::<Vec<_>>().join(","),
    );
    out.meta
        .insert("filter.mode".into(), filter.match_mode.to_string());
    out
}

/// Keep exactly the messages with `start <= timestamp < end`.
pub fn slice_by_time(corpus: &Corpus, window: &TimeWindow) -> Corpus {
    let messages = corpus
        .messages()
        .iter()
        .filter(|m| window.contains(m.timestamp))
        .cloned()
        .collect();
    let mut out = Corpus::new(messages).expect("subset of a valid corpus is valid");
    out.meta = corpus.meta.clone();
    out
}
