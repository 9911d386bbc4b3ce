//! Deterministic synthetic-corpus generation for fixtures and scenario
//! replicas (frequency steps, ranking distributions, itemset counts,
//! mention hubs).

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, CorpusError, Message};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("inconsistent spec: {0}")]
    InconsistentSpec(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// One message template; expanded `count` times.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MessageSpec {
    /// Token bag; the message text is the tokens joined by spaces.
    pub tokens: Vec<String>,
    /// Fixed author, or a deterministic generated handle when absent.
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default = "one")]
    pub count: u64,
}

fn one() -> u64 {
    1
}

/// Messages emitted within `[start, start + duration_secs)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowSpec {
    pub start: DateTime<Utc>,
    #[serde(default = "default_duration")]
    pub duration_secs: i64,
    pub messages: Vec<MessageSpec>,
}

fn default_duration() -> i64 {
    600
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub windows: Vec<WindowSpec>,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<(), SynthError> {
        let mut prev_end: Option<DateTime<Utc>> = None;
        for (i, w) in self.windows.iter().enumerate() {
            if w.duration_secs <= 0 {
                return Err(SynthError::InconsistentSpec(format!(
                    "window {i} has nonpositive duration"
                )));
            }
            if let Some(end) = prev_end {
                if w.start < end {
                    return Err(SynthError::InconsistentSpec(format!(
                        "window {i} overlaps the previous window"
                    )));
                }
            }
            prev_end = Some(w.start + Duration::seconds(w.duration_secs));
        }
        Ok(())
    }
}

/// Expand a scenario spec into a corpus. Deterministic for fixed
/// `(spec, seed)`; the seed only shuffles message order within each window.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<Corpus, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut messages = Vec::new();
    for (widx, window) in spec.windows.iter().enumerate() {
        let mut expanded: Vec<&MessageSpec> = Vec::new();
        for m in &window.messages {
            for _ in 0..m.count {
                expanded.push(m);
            }
        }
        expanded.shuffle(&mut rng);
        let n = expanded.len() as i64;
        for (midx, m) in expanded.iter().enumerate() {
            let offset = midx as i64 * window.duration_secs / n.max(1);
            let author = m
                .author
                .clone()
                .unwrap_or_else(|| format!("synuser{widx:03}x{midx:05}"));
            let msg = Message {
                id: format!("syn-{widx:03}-{midx:05}"),
                timestamp: window.start + Duration::seconds(offset),
                author,
                text: m.tokens.join(" "),
                mentions: m.mentions.clone(),
            }
            .validate()
            .map_err(SynthError::InconsistentSpec)?;
            messages.push(msg);
        }
    }
    Ok(Corpus::new(messages)?)
}

/// Canonical scenario specs used by the test suites and the `synth`
/// subcommand.
pub mod scenarios {
    use super::*;

    fn at(y: i32, mo: u32, d: u32, h: u32, mi: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(y, mo, d, h, mi, 0).unwrap()
    }

    fn name_msg(tokens: &[&str], count: u64) -> MessageSpec {
        MessageSpec {
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
            author: None,
            mentions: Vec::new(),
            count,
        }
    }

    /// The 15 itemset-count targets over an 804-transaction base. Each triple
    /// appears as the exact item set of `count` transactions; 44 filler
    /// transactions carry a single name so only the listed triples occur.
    pub const ITEMSET_TRIPLES: [(&str, &str, &str, u64); 15] = [
        ("alexander", "george", "james", 97),
        ("george", "henry", "james", 86),
        ("george", "james", "louis", 72),
        ("alexander", "james", "louis", 68),
        ("alexander", "george", "louis", 68),
        ("george", "henry", "louis", 64),
        ("alexander", "henry", "james", 62),
        ("alexander", "george", "henry", 62),
        ("alexander", "henry", "louis", 60),
        ("henry", "james", "louis", 60),
        ("arthur", "george", "james", 15),
        ("charles", "james", "spencer", 13),
        ("george", "james", "spencer", 12),
        ("charles", "george", "philip", 11),
        ("george", "james", "richard", 10),
    ];

    pub const ITEMSET_TRANSACTION_BASE: u64 = 804;

    /// 804 transactions whose size-3 itemset supports reproduce the known
    /// count table exactly.
    pub fn itemset_reconstruction() -> SyntheticSpec {
        let mut messages = Vec::new();
        let mut total = 0u64;
        for (a, b, c, count) in ITEMSET_TRIPLES {
            messages.push(name_msg(&["name", a, b, c], count));
            total += count;
        }
        let filler = ITEMSET_TRANSACTION_BASE - total;
        messages.push(name_msg(&["name", "george"], filler));
        SyntheticSpec {
            windows: vec![WindowSpec {
                start: at(2013, 7, 22, 12, 0),
                duration_secs: 3600,
                messages,
            }],
        }
    }

    /// Per-name tweet counts for the pre-announcement ranking: george first,
    /// james second, alexander seventh, louis tenth.
    pub const PRE_RANK_COUNTS: [(&str, u64); 22] = [
        ("george", 50),
        ("james", 45),
        ("henry", 40),
        ("arthur", 35),
        ("charles", 30),
        ("edward", 25),
        ("alexander", 20),
        ("albert", 15),
        ("andrew", 12),
        ("louis", 10),
        ("boris", 9),
        ("freddy", 8),
        ("harry", 7),
        ("joffrey", 6),
        ("john", 5),
        ("joseph", 4),
        ("michael", 3),
        ("philip", 2),
        ("richard", 1),
        ("rudiger", 0),
        ("spencer", 0),
        ("stuart", 0),
    ];

    /// Per-name tweet counts after the announcement: the top three are the
    /// three component names.
    pub const POST_RANK_COUNTS: [(&str, u64); 22] = [
        ("george", 60),
        ("alexander", 50),
        ("louis", 40),
        ("james", 10),
        ("henry", 8),
        ("arthur", 6),
        ("charles", 5),
        ("edward", 4),
        ("albert", 3),
        ("andrew", 2),
        ("boris", 1),
        ("freddy", 0),
        ("harry", 0),
        ("joffrey", 0),
        ("john", 0),
        ("joseph", 0),
        ("michael", 0),
        ("philip", 0),
        ("richard", 0),
        ("rudiger", 0),
        ("spencer", 0),
        ("stuart", 0),
    ];

    fn ranking_window(start: DateTime<Utc>, counts: &[(&str, u64)]) -> WindowSpec {
        let messages = counts
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(name, c)| name_msg(&["name", name], *c))
            .collect();
        WindowSpec {
            start,
            duration_secs: 3600,
            messages,
        }
    }

    /// Pre-announcement window (before 18:00 on July 24).
    pub fn ranking_pre() -> SyntheticSpec {
        SyntheticSpec {
            windows: vec![ranking_window(at(2013, 7, 24, 14, 0), &PRE_RANK_COUNTS)],
        }
    }

    /// Post-announcement window (after 21:00 on July 24).
    pub fn ranking_post() -> SyntheticSpec {
        SyntheticSpec {
            windows: vec![ranking_window(at(2013, 7, 24, 21, 30), &POST_RANK_COUNTS)],
        }
    }

    /// Ten 600-second windows at f = 0.1 for "george" followed by ten at
    /// f = 0.8; the step lands on the 19:20 window.
    pub fn frequency_step() -> SyntheticSpec {
        let base = at(2013, 7, 24, 17, 40);
        let windows = (0..20)
            .map(|i| {
                let hits = if i < 10 { 1 } else { 8 };
                WindowSpec {
                    start: base + Duration::seconds(i * 600),
                    duration_secs: 600,
                    messages: vec![
                        name_msg(&["name", "george"], hits),
                        name_msg(&["name", "baby"], 10 - hits),
                    ],
                }
            })
            .collect();
        SyntheticSpec { windows }
    }

    pub const MEGA_HUBS: u64 = 6;
    pub const MID_HUBS: u64 = 10;
    pub const MEGA_HUB_MENTIONS: u64 = 120;
    pub const MID_HUB_MENTIONS: u64 = 60;

    /// Mention-hub replica: 6 users mentioned 120 times each and 10 users
    /// mentioned 60 times each, every mention from a distinct author.
    pub fn mention_hubs() -> SyntheticSpec {
        let mut messages = Vec::new();
        let mut author_seq = 0u64;
        let mut hub_msgs = |hub: String, mentions: u64| {
            for _ in 0..mentions {
                messages.push(MessageSpec {
                    tokens: vec!["name".into(), "talk".into()],
                    author: Some(format!("fan{author_seq:05}")),
                    mentions: vec![hub.clone()],
                    count: 1,
                });
                author_seq += 1;
            }
        };
        for h in 0..MEGA_HUBS {
            hub_msgs(format!("megahub{h}"), MEGA_HUB_MENTIONS);
        }
        for h in 0..MID_HUBS {
            hub_msgs(format!("midhub{h}"), MID_HUB_MENTIONS);
        }
        SyntheticSpec {
            windows: vec![WindowSpec {
                start: at(2013, 7, 24, 10, 0),
                duration_secs: 3600,
                messages,
            }],
        }
    }
}
