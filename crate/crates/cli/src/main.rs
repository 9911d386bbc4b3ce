//! `tweetmine` command-line front end. Exit status: 0 on success, 1 on
//! input/configuration errors, 2 when a selection is analytically empty.

mod commands;
mod config;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tweetmine::corpus::Format;
use tweetmine::layout::DEFAULT_ITERATIONS;
use tweetmine::timeseries::{DEFAULT_MIN_RISE, DEFAULT_WINDOW_SECS};

#[derive(Parser)]
#[command(name = "tweetmine", about = "keyword-corpus mining: frequency series, itemsets, communities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file and write it back in canonical jsonl order.
    Ingest {
        /// Corpus file (.jsonl or .csv).
        input: PathBuf,
        /// Input format, inferred from the extension when omitted.
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Windowed frequency series of one name, with jump detection.
    Freq {
        input: PathBuf,
        /// Name whose tweet frequency is tracked.
        #[arg(long)]
        name: String,
        /// Window width in seconds.
        #[arg(long, default_value_t = DEFAULT_WINDOW_SECS)]
        width: i64,
        /// Inclusive RFC 3339 lower bound.
        #[arg(long)]
        from: Option<String>,
        /// Exclusive RFC 3339 upper bound.
        #[arg(long)]
        to: Option<String>,
        /// Minimum one-step rise in f that counts as a jump.
        #[arg(long, default_value_t = DEFAULT_MIN_RISE)]
        min_rise: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Rank all lexicon names by tweet frequency over a time window.
    Rank {
        input: PathBuf,
        /// Name lexicon file (one name per line); built-in list when omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Mine frequent name itemsets from per-tweet transactions.
    Itemsets {
        input: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Minimum support; itemsets must exceed it strictly.
        #[arg(long, default_value_t = 0.07)]
        supp_min: f64,
        #[arg(long, default_value_t = 3)]
        min_size: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Number of top itemsets in the exported bipartite graph.
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Detect mention-graph communities and export an annotated graph.
    Communities {
        input: PathBuf,
        /// Keep authors with at least this many tweets...
        #[arg(long, default_value_t = 0)]
        min_tweets: u64,
        /// ...or at least this many received mentions.
        #[arg(long, default_value_t = 0)]
        min_mentions: u64,
        /// Also rerun with vertices mentioned at least this often removed.
        #[arg(long)]
        remove_popular: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iterations: usize,
        #[arg(long, default_value_t = 1000.0)]
        layout_width: f64,
        #[arg(long, default_value_t = 1000.0)]
        layout_height: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Force-directed layout of the full mention graph.
    Layout {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iterations: usize,
        #[arg(long, default_value_t = 1000.0)]
        layout_width: f64,
        #[arg(long, default_value_t = 1000.0)]
        layout_height: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Generate a deterministic synthetic corpus.
    Synth {
        /// Built-in scenario: table, ranking-pre, ranking-post, step, hubs.
        #[arg(long, default_value = "table")]
        scenario: String,
        /// JSON scenario spec; overrides --scenario.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output corpus file (jsonl).
        #[arg(long, default_value = "synthetic.jsonl")]
        out: PathBuf,
    },
    /// Run ingest, freq, rank, itemsets and communities from a config file.
    Pipeline {
        /// Flat `key = value` config file.
        config: PathBuf,
        /// Output directory; overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_format(raw: &str) -> Result<Format, String> {
    match raw {
        "jsonl" => Ok(Format::Jsonl),
        "csv" => Ok(Format::Csv),
        other => Err(format!("unknown format {other:?} (expected jsonl or csv)")),
    }
}

fn run(cli: Cli) -> commands::CmdResult {
    match cli.command {
        Command::Ingest { input, format, out } => commands::cmd_ingest(&input, format, &out),
        Command::Freq {
            input,
            name,
            width,
            from,
            to,
            min_rise,
            out,
        } => commands::cmd_freq(
            &input,
            &name,
            width,
            from.as_deref(),
            to.as_deref(),
            min_rise,
            &out,
        ),
        Command::Rank {
            input,
            lexicon,
            from,
            to,
            out,
        } => commands::cmd_rank(&input, lexicon.as_deref(), from.as_deref(), to.as_deref(), &out),
        Command::Itemsets {
            input,
            lexicon,
            supp_min,
            min_size,
            max_size,
            top_k,
            out,
        } => commands::cmd_itemsets(
            &input,
            lexicon.as_deref(),
            supp_min,
            min_size,
            max_size,
            top_k,
            &out,
        ),
        Command::Communities {
            input,
            min_tweets,
            min_mentions,
            remove_popular,
            iterations,
            layout_width,
            layout_height,
            seed,
            out,
        } => commands::cmd_communities(
            &input,
            min_tweets,
            min_mentions,
            remove_popular,
            iterations,
            (layout_width, layout_height),
            seed,
            &out,
        ),
        Command::Layout {
            input,
            iterations,
            layout_width,
            layout_height,
            seed,
            out,
        } => commands::cmd_layout(&input, iterations, (layout_width, layout_height), seed, &out),
        Command::Synth {
            scenario,
            spec,
            seed,
            out,
        } => commands::cmd_synth(&scenario, spec.as_deref(), seed, &out),
        Command::Pipeline { config, out } => commands::cmd_pipeline(&config, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tweetmine: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
