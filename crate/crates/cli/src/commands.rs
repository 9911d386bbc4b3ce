//! Subcommand implementations. Exit-status contract: 0 success, 1 input
//! error, 2 empty analytical selection.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use chrono::{DateTime, Duration, SecondsFormat, Utc};

use tweetmine::corpus::{load_corpus, slice_by_time, write_corpus, Corpus, Format, TimeWindow};
use tweetmine::export::{
    itemset_graph_to_dot, itemset_graph_to_graphml, mention_graph_to_dot, mention_graph_to_graphml,
};
use tweetmine::graph::{
    build_mention_graph, detect_communities, filter_active, remove_popular, MentionGraph,
};
use tweetmine::itemsets::{build_transactions, itemset_graph, mine_frequent_itemsets, report_to_csv};
use tweetmine::layout::layout_graph;
use tweetmine::synth::{generate_synthetic, scenarios, SyntheticSpec};
use tweetmine::text::NameLexicon;
use tweetmine::timeseries::{
    detect_jump, frequency_series, rank_names, ranking_to_csv, series_to_csv,
};

use crate::config::RunConfig;
use crate::plot;

/// Errors carry the exit status: input problems exit 1, empty analytical
/// selections exit 2.
#[derive(Debug)]
pub enum CliError {
    Input(anyhow::Error),
    Empty(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Empty(_) => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Input(e) => format!("{e:#}"),
            CliError::Empty(reason) => format!("empty selection: {reason}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Input(e)
    }
}

pub type CmdResult = Result<(), CliError>;

fn input_err<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Input(e.into())
}

fn load(path: &Path, format: Option<Format>) -> Result<Corpus, CliError> {
    let format = format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| input_err(anyhow!("cannot infer format of {}", path.display())))?;
    load_corpus(path, format).map_err(input_err)
}

fn load_lexicon(path: Option<&Path>) -> Result<NameLexicon, CliError> {
    match path {
        Some(p) => NameLexicon::from_file(p).map_err(input_err),
        None => Ok(NameLexicon::default_names()),
    }
}

fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)
        .with_context(|| format!("cannot create output directory {}", out.display()))
        .map_err(CliError::Input)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(CliError::Input)
}

fn parse_ts(raw: &str) -> Result<DateTime<Utc>, CliError> {
    DateTime::parse_from_rfc3339(raw)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| input_err(anyhow!("bad timestamp {raw:?}: {e}")))
}

/// Restrict to `[from, to)` when bounds are given; full span otherwise.
fn select_window(
    corpus: &Corpus,
    from: Option<&str>,
    to: Option<&str>,
) -> Result<TimeWindow, CliError> {
    let (first, last) = corpus
        .time_span()
        .ok_or_else(|| CliError::Empty("corpus has no messages".into()))?;
    let start = match from {
        Some(raw) => parse_ts(raw)?,
        None => first,
    };
    let end = match to {
        Some(raw) => parse_ts(raw)?,
        None => last + Duration::seconds(1),
    };
    TimeWindow::new(start, end).map_err(input_err)
}

pub fn cmd_ingest(input: &Path, format: Option<Format>, out: &Path) -> CmdResult {
    let corpus = load(input, format)?;
    ensure_out_dir(out)?;
    write_corpus(&corpus, &out.join("corpus.jsonl"), Format::Jsonl).map_err(input_err)?;
    println!("{} messages", corpus.len());
    if let Some((first, last)) = corpus.time_span() {
        println!(
            "time span {} .. {}",
            first.to_rfc3339_opts(SecondsFormat::Secs, true),
            last.to_rfc3339_opts(SecondsFormat::Secs, true)
        );
    }
    println!("{} authors", corpus.authors().len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_freq(
    corpus_path: &Path,
    name: &str,
    width_secs: i64,
    from: Option<&str>,
    to: Option<&str>,
    min_rise: f64,
    out: &Path,
) -> CmdResult {
    let corpus = load(corpus_path, None)?;
    let window = select_window(&corpus, from, to)?;
    let selection = slice_by_time(&corpus, &window);
    if selection.is_empty() {
        return Err(CliError::Empty("no messages in the requested bounds".into()));
    }
    let series = frequency_series(&selection, name, Duration::seconds(width_secs))
        .map_err(input_err)?;
    ensure_out_dir(out)?;
    write_file(&out.join(format!("freq_{name}.csv")), &series_to_csv(&series))?;
    let points: Vec<(String, Option<f64>)> = series
        .points
        .iter()
        .map(|p| {
            (
                p.window_start.format("%m-%d %H:%M").to_string(),
                p.f,
            )
        })
        .collect();
    write_file(
        &out.join(format!("freq_{name}.svg")),
        &plot::line_chart(&format!("tweet frequency of \"{name}\""), &points),
    )?;
    match detect_jump(&series, min_rise) {
        Ok(Some((window_start, delta))) => println!(
            "jump detected at {} (rise {delta:.6})",
            window_start.to_rfc3339_opts(SecondsFormat::Secs, true)
        ),
        Ok(None) => println!("no jump above min_rise {min_rise}"),
        Err(e) => println!("jump detection skipped: {e}"),
    }
    Ok(())
}

pub fn cmd_rank(
    corpus_path: &Path,
    lexicon_path: Option<&Path>,
    from: Option<&str>,
    to: Option<&str>,
    out: &Path,
) -> CmdResult {
    let corpus = load(corpus_path, None)?;
    let lexicon = load_lexicon(lexicon_path)?;
    let window = select_window(&corpus, from, to)?;
    let ranking = match rank_names(&corpus, &lexicon, &window) {
        Ok(r) => r,
        Err(tweetmine::SeriesError::EmptyWindow) => {
            return Err(CliError::Empty("no messages in the requested bounds".into()))
        }
        Err(e) => return Err(input_err(e)),
    };
    ensure_out_dir(out)?;
    write_file(&out.join("ranking.csv"), &ranking_to_csv(&ranking))?;
    let bars: Vec<(String, f64)> = ranking
        .entries
        .iter()
        .map(|e| (e.name.clone(), e.f))
        .collect();
    write_file(
        &out.join("ranking.svg"),
        &plot::bar_chart("name frequency ranking", &bars),
    )?;
    if let Some(top) = ranking.entries.first() {
        println!("top name: {} (f = {:.6})", top.name, top.f);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_itemsets(
    corpus_path: &Path,
    lexicon_path: Option<&Path>,
    supp_min: f64,
    min_size: usize,
    max_size: usize,
    top_k: usize,
    out: &Path,
) -> CmdResult {
    let corpus = load(corpus_path, None)?;
    let lexicon = load_lexicon(lexicon_path)?;
    let transactions = build_transactions(&corpus, &lexicon);
    if transactions.is_empty() {
        return Err(CliError::Empty("no message matches any lexicon name".into()));
    }
    let mined = mine_frequent_itemsets(&transactions, supp_min, min_size, max_size)
        .map_err(input_err)?;
    ensure_out_dir(out)?;
    write_file(&out.join("itemsets.csv"), &report_to_csv(&mined))?;
    let graph = itemset_graph(&mined, top_k);
    write_file(&out.join("itemset_graph.dot"), &itemset_graph_to_dot(&graph))?;
    write_file(
        &out.join("itemset_graph.graphml"),
        &itemset_graph_to_graphml(&graph),
    )?;
    println!(
        "{} frequent itemsets over {} transactions",
        mined.len(),
        transactions.len()
    );
    Ok(())
}

struct CommunityRun<'a> {
    tag: &'a str,
    graph: MentionGraph,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_communities(
    corpus_path: &Path,
    min_tweets: u64,
    min_mentions: u64,
    popular_threshold: Option<u64>,
    iterations: usize,
    frame: (f64, f64),
    seed: u64,
    out: &Path,
) -> CmdResult {
    let corpus = load(corpus_path, None)?;
    let full = build_mention_graph(&corpus);
    let active = filter_active(&full, min_tweets, min_mentions);
    if active.is_empty() {
        return Err(CliError::Empty(
            "no vertices survive the activity filter".into(),
        ));
    }
    ensure_out_dir(out)?;
    let mut runs = vec![CommunityRun {
        tag: "communities",
        graph: active.clone(),
    }];
    if let Some(threshold) = popular_threshold {
        let reduced = remove_popular(&active, threshold);
        if reduced.is_empty() {
            return Err(CliError::Empty(
                "popular-user removal emptied the graph".into(),
            ));
        }
        runs.push(CommunityRun {
            tag: "communities_filtered",
            graph: reduced,
        });
    }
    for run in &runs {
        let partition = detect_communities(&run.graph).map_err(input_err)?;
        let layout =
            layout_graph(&run.graph, frame.0, frame.1, iterations, seed).map_err(input_err)?;
        write_file(
            &out.join(format!("{}.graphml", run.tag)),
            &mention_graph_to_graphml(&run.graph, Some(&partition), Some(&layout)),
        )?;
        write_file(
            &out.join(format!("{}.dot", run.tag)),
            &mention_graph_to_dot(&run.graph, Some(&partition), Some(&layout)),
        )?;
        println!(
            "{}: {} vertices, {} edges, {} communities, modularity {:.6}",
            run.tag,
            run.graph.vertex_count(),
            run.graph.edge_count(),
            partition.community_count(),
            partition.modularity
        );
    }
    Ok(())
}

pub fn cmd_layout(
    corpus_path: &Path,
    iterations: usize,
    frame: (f64, f64),
    seed: u64,
    out: &Path,
) -> CmdResult {
    let corpus = load(corpus_path, None)?;
    let graph = build_mention_graph(&corpus);
    if graph.is_empty() {
        return Err(CliError::Empty("mention graph is empty".into()));
    }
    let layout = layout_graph(&graph, frame.0, frame.1, iterations, seed).map_err(input_err)?;
    ensure_out_dir(out)?;
    write_file(
        &out.join("layout.graphml"),
        &mention_graph_to_graphml(&graph, None, Some(&layout)),
    )?;
    write_file(
        &out.join("layout.dot"),
        &mention_graph_to_dot(&graph, None, Some(&layout)),
    )?;
    println!(
        "layout of {} vertices written ({} iterations)",
        graph.vertex_count(),
        iterations
    );
    Ok(())
}

pub fn cmd_synth(scenario: &str, spec_path: Option<&Path>, seed: u64, out: &Path) -> CmdResult {
    let spec: SyntheticSpec = match spec_path {
        Some(path) => {
            let content = fs::read_to_string(path)
                .with_context(|| format!("cannot read spec {}", path.display()))
                .map_err(CliError::Input)?;
            serde_json::from_str(&content)
                .map_err(|e| input_err(anyhow!("bad scenario spec: {e}")))?
        }
        None => match scenario {
            "table" => scenarios::itemset_reconstruction(),
            "ranking-pre" => scenarios::ranking_pre(),
            "ranking-post" => scenarios::ranking_post(),
            "step" => scenarios::frequency_step(),
            "hubs" => scenarios::mention_hubs(),
            other => {
                return Err(input_err(anyhow!(
                    "unknown scenario {other:?} (expected table, ranking-pre, ranking-post, step or hubs)"
                )))
            }
        },
    };
    let corpus = generate_synthetic(&spec, seed).map_err(input_err)?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))
                .map_err(CliError::Input)?;
        }
    }
    write_corpus(&corpus, out, Format::Jsonl).map_err(input_err)?;
    println!("{} synthetic messages written to {}", corpus.len(), out.display());
    Ok(())
}

/// Run ingest → freq → rank → itemsets → communities from one config file.
pub fn cmd_pipeline(config_path: &Path, out_override: Option<&Path>) -> CmdResult {
    let cfg = RunConfig::from_file(config_path).map_err(CliError::Input)?;
    let input = cfg
        .get_path("input")
        .ok_or_else(|| input_err(anyhow!("config key `input` is required")))?;
    let out: PathBuf = out_override
        .map(Path::to_path_buf)
        .or_else(|| cfg.get_path("out"))
        .ok_or_else(|| input_err(anyhow!("config key `out` (or --out) is required")))?;

    let name = cfg.get("name").unwrap_or("george").to_string();
    let width: i64 = cfg
        .get_parsed("width")
        .map_err(CliError::Input)?
        .unwrap_or(tweetmine::timeseries::DEFAULT_WINDOW_SECS);
    let min_rise: f64 = cfg
        .get_parsed("min_rise")
        .map_err(CliError::Input)?
        .unwrap_or(tweetmine::timeseries::DEFAULT_MIN_RISE);
    let lexicon = cfg.get_path("lexicon");
    let supp_min: f64 = cfg
        .get_parsed("supp_min")
        .map_err(CliError::Input)?
        .unwrap_or(0.07);
    let min_size: usize = cfg.get_parsed("min_size").map_err(CliError::Input)?.unwrap_or(3);
    let max_size: usize = cfg.get_parsed("max_size").map_err(CliError::Input)?.unwrap_or(3);
    let top_k: usize = cfg.get_parsed("top_k").map_err(CliError::Input)?.unwrap_or(10);
    let min_tweets: u64 = cfg.get_parsed("min_tweets").map_err(CliError::Input)?.unwrap_or(0);
    let min_mentions: u64 = cfg
        .get_parsed("min_mentions")
        .map_err(CliError::Input)?
        .unwrap_or(0);
    let remove_popular: Option<u64> = cfg.get_parsed("remove_popular").map_err(CliError::Input)?;
    let iterations: usize = cfg
        .get_parsed("iterations")
        .map_err(CliError::Input)?
        .unwrap_or(tweetmine::layout::DEFAULT_ITERATIONS);
    let layout_width: f64 = cfg
        .get_parsed("layout_width")
        .map_err(CliError::Input)?
        .unwrap_or(1000.0);
    let layout_height: f64 = cfg
        .get_parsed("layout_height")
        .map_err(CliError::Input)?
        .unwrap_or(1000.0);
    let seed: u64 = cfg.get_parsed("seed").map_err(CliError::Input)?.unwrap_or(0);
    let from = cfg.get("from").map(str::to_string);
    let to = cfg.get("to").map(str::to_string);

    cmd_ingest(&input, None, &out)?;
    let corpus = out.join("corpus.jsonl");
    cmd_freq(
        &corpus,
        &name,
        width,
        from.as_deref(),
        to.as_deref(),
        min_rise,
        &out,
    )?;
    cmd_rank(&corpus, lexicon.as_deref(), from.as_deref(), to.as_deref(), &out)?;
    cmd_itemsets(
        &corpus,
        lexicon.as_deref(),
        supp_min,
        min_size,
        max_size,
        top_k,
        &out,
    )?;
    cmd_communities(
        &corpus,
        min_tweets,
        min_mentions,
        remove_popular,
        iterations,
        (layout_width, layout_height),
        seed,
        &out,
    )?;
    Ok(())
}
