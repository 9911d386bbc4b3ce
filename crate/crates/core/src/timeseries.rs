//! Windowed name-frequency statistics: per-window tweet-presence ratios,
//! series over time, name rankings and step-jump detection.
//!
//! A name "occurs" in a message when it appears as a whole token of the
//! tokenized text, so `georgetown` does not count for `george`.

use chrono::{DateTime, Duration, SecondsFormat, Utc};
use thiserror::Error;

use crate::corpus::{Corpus, TimeWindow};
use crate::text::{tokenize, NameLexicon};

pub const DEFAULT_WINDOW_SECS: i64 = 600;
pub const DEFAULT_MIN_RISE: f64 = 0.2;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("no messages in the selected window")]
    EmptyWindow,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("window width must be positive")]
    InvalidWidth,
    #[error("min_rise must be in (0, 1]")]
    InvalidMinRise,
    #[error("series needs at least two present points")]
    TooFewPoints,
    #[error("malformed series csv at line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },
}

/// One window of a frequency series. `f` is absent when the window holds no
/// messages at all, so sparse periods do not read as zero frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub window_start: DateTime<Utc>,
    pub n_matching: u64,
    pub n_total: u64,
    pub f: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySeries {
    pub window_width: Duration,
    pub points: Vec<SeriesPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub name: String,
    pub f: f64,
    pub n_matching: u64,
}

/// Names sorted by frequency descending, name ascending on ties.
#[derive(Debug, Clone, PartialEq)]
pub struct NameRanking {
    pub entries: Vec<RankEntry>,
    pub n_total: u64,
}

impl NameRanking {
    /// 1-based rank of a name, if present.
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name).map(|i| i + 1)
    }
}

/// Fraction of messages in the window whose token stream contains `name`.
pub fn name_frequency(
    corpus: &Corpus,
    name: &str,
    window: &TimeWindow,
) -> Result<(f64, u64, u64), SeriesError> {
    let mut n_total = 0u64;
    let mut n_matching = 0u64;
    for msg in corpus.messages() {
        if window.contains(msg.timestamp) {
            n_total += 1;
            if tokenize(&msg.text).contains(name) {
                n_matching += 1;
            }
        }
    }
    if n_total == 0 {
        return Err(SeriesError::EmptyWindow);
    }
    Ok((n_matching as f64 / n_total as f64, n_matching, n_total))
}

/// Tile `[floor(first, width), last]` with contiguous windows and compute
/// the per-window frequency of `name`.
pub fn frequency_series(
    corpus: &Corpus,
    name: &str,
    width: Duration,
) -> Result<FrequencySeries, SeriesError> {
    let width_secs = width.num_seconds();
    if width_secs <= 0 {
        return Err(SeriesError::InvalidWidth);
    }
    let (first, last) = corpus.time_span().ok_or(SeriesError::EmptyCorpus)?;
    let origin = first.timestamp().div_euclid(width_secs) * width_secs;
    let n_windows = (last.timestamp() - origin) / width_secs + 1;

    let mut matching = vec![0u64; n_windows as usize];
    let mut totals = vec![0u64; n_windows as usize];
    for msg in corpus.messages() {
        let idx = ((msg.timestamp.timestamp() - origin) / width_secs) as usize;
        totals[idx] += 1;
        if tokenize(&msg.text).contains(name) {
            matching[idx] += 1;
        }
    }

    let points = (0..n_windows as usize)
        .map(|i| SeriesPoint {
            window_start: DateTime::from_timestamp(origin + i as i64 * width_secs, 0)
                .expect("window start in range"),
            n_matching: matching[i],
            n_total: totals[i],
            f: (totals[i] > 0).then(|| matching[i] as f64 / totals[i] as f64),
        })
        .collect();
    Ok(FrequencySeries {
        window_width: width,
        points,
    })
}

/// Frequency of every lexicon name over one window, ranked.
pub fn rank_names(
    corpus: &Corpus,
    lexicon: &NameLexicon,
    window: &TimeWindow,
) -> Result<NameRanking, SeriesError> {
    let mut n_total = 0u64;
    let mut counts: Vec<(String, u64)> = lexicon.names().map(|n| (n.to_string(), 0)).collect();
    for msg in corpus.messages() {
        if !window.contains(msg.timestamp) {
            continue;
        }
        n_total += 1;
        let ts = tokenize(&msg.text);
        for (name, count) in counts.iter_mut() {
            if ts.contains(name) {
                *count += 1;
            }
        }
    }
    if n_total == 0 {
        return Err(SeriesError::EmptyWindow);
    }
    let mut entries: Vec<RankEntry> = counts
        .into_iter()
        .map(|(name, n_matching)| RankEntry {
            f: n_matching as f64 / n_total as f64,
            name,
            n_matching,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.f.partial_cmp(&a.f)
            .expect("frequencies are finite")
            .then_with(|| a.name.cmp(&b.name))
    });
    Ok(NameRanking { entries, n_total })
}

/// Locate the largest one-step rise between consecutive present points.
/// Returns the start of the higher window and the rise, or `None` when no
/// rise reaches `min_rise`. Ties resolve to the earliest window.
pub fn detect_jump(
    series: &FrequencySeries,
    min_rise: f64,
) -> Result<Option<(DateTime<Utc>, f64)>, SeriesError> {
    if !(min_rise > 0.0 && min_rise <= 1.0) {
        return Err(SeriesError::InvalidMinRise);
    }
    let present: Vec<&SeriesPoint> = series.points.iter().filter(|p| p.f.is_some()).collect();
    if present.len() < 2 {
        return Err(SeriesError::TooFewPoints);
    }
    let mut best: Option<(DateTime<Utc>, f64)> = None;
    for pair in present.windows(2) {
        let delta = pair[1].f.unwrap() - pair[0].f.unwrap();
        if best.is_none_or(|(_, b)| delta > b) {
            best = Some((pair[1].window_start, delta));
        }
    }
    Ok(best.filter(|(_, delta)| *delta >= min_rise))
}

fn ts_str(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Render as CSV: `window_start_utc,n_matching,n_total,f`; absent windows
/// emit an empty `f` cell. Frequencies print with six decimals.
pub fn series_to_csv(series: &FrequencySeries) -> String {
    let mut out = String::from("window_start_utc,n_matching,n_total,f\n");
    for p in &series.points {
        let f = p.f.map(|v| format!("{v:.6}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            ts_str(p.window_start),
            p.n_matching,
            p.n_total,
            f
        ));
    }
    out
}

/// Parse the CSV emitted by [`series_to_csv`].
pub fn series_from_csv(content: &str, width: Duration) -> Result<FrequencySeries, SeriesError> {
    let mut points = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if idx == 0 {
            continue;
        }
        let err = |reason: &str| SeriesError::MalformedCsv {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(err("expected 4 columns"));
        }
        let window_start = DateTime::parse_from_rfc3339(cols[0])
            .map_err(|_| err("bad timestamp"))?
            .with_timezone(&Utc);
        let n_matching: u64 = cols[1].parse().map_err(|_| err("bad n_matching"))?;
        let n_total: u64 = cols[2].parse().map_err(|_| err("bad n_total"))?;
        let f = if cols[3].is_empty() {
            None
        } else {
            Some(cols[3].parse::<f64>().map_err(|_| err("bad f"))?)
        };
        points.push(SeriesPoint {
            window_start,
            n_matching,
            n_total,
            f,
        });
    }
    Ok(FrequencySeries {
        window_width: width,
        points,
    })
}

/// Render a ranking as CSV: `rank,name,n_matching,n_total,f`.
pub fn ranking_to_csv(ranking: &NameRanking) -> String {
    let mut out = String::from("rank,name,n_matching,n_total,f\n");
    for (i, e) in ranking.entries.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{:.6}\n",
            i + 1,
            e.name,
            e.n_matching,
            ranking.n_total,
            e.f
        ));
    }
    out
}
