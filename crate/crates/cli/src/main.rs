use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use collabscope_core::ingest::{AuthorFormat, SingleFieldRule};
use collabscope_core::measures::{EntropyNorm, PairMode};
use collabscope_core::nullmodel::DEFAULT_SIMULATIONS;
use collabscope_core::plotspec::{plotspec, Figure};
use collabscope_core::report::{AnalysisReport, EmitFlags, RunConfig};
use collabscope_core::stats::DEFAULT_GRID;
use collabscope_core::synth::{self, SynthConfig, TeamSizeDist};
use collabscope_core::{pipeline, Error};

const EXIT_INPUT: u8 = 3;
const EXIT_ANALYSIS: u8 = 4;

#[derive(Parser)]
#[command(name = "collabscope", version, about = "Interdisciplinarity measures for coauthorship networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis on an author file and a team file.
    Run(RunArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Write a Vega-Lite description of one figure from a report.
    Plotspec(PlotspecArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Author records (.csv or .json).
    #[arg(long)]
    authors: PathBuf,
    /// Team list (.json, .csv, or `paper_id: a,b,c` lines).
    #[arg(long)]
    teams: PathBuf,
    /// Discipline labels, one per line. Defaults to every label seen in the author file.
    #[arg(long)]
    index: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIMULATIONS)]
    nsims: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Team entropy normalization: `max` uses ln(max{|p|,N_d}), `min` uses ln(min{|p|,N_d}).
    #[arg(long, default_value = "max")]
    entropy_norm: EntropyNorm,
    /// Output directory. Without it only a summary is printed.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,plotspec.
    #[arg(long, default_value = "csv,json")]
    emit: EmitFlags,
    /// Write every author pair to pairs.csv instead of coauthor pairs only.
    #[arg(long)]
    all_pairs_csv: bool,
    /// Compare only coauthor pairs; skips the edge vs non-edge tests.
    #[arg(long)]
    edges_only: bool,
    /// Label core/shell in one pass instead of peeling.
    #[arg(long)]
    no_peel: bool,
    /// Drop single-field authors from the whole analysis.
    #[arg(long)]
    remove_single_field: bool,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 300)]
    n_authors: usize,
    #[arg(long, default_value_t = 27)]
    n_disciplines: usize,
    /// Probability that a team member is drawn from the seed author's most similar peers.
    #[arg(long, default_value_t = 0.0)]
    homophily: f64,
    /// Team size weights as `size:weight,...`.
    #[arg(long)]
    team_sizes: Option<TeamSizeDist>,
    #[arg(long)]
    n_teams: Option<usize>,
    /// Add two-person teams until the graph has exactly this many edges.
    #[arg(long)]
    target_edges: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Author file format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotspecArgs {
    /// A report.json written by `run`.
    #[arg(long)]
    report: PathBuf,
    /// fig1, fig2, fig4 or fig6.
    #[arg(long)]
    figure: Figure,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: RunArgs) -> Result<(), Error> {
    let mut config = RunConfig::new(args.authors, args.teams);
    config.index = args.index;
    config.n_sims = args.nsims;
    config.seed = args.seed;
    config.entropy_norm = args.entropy_norm;
    config.out = args.out;
    config.emit = args.emit;
    config.grid_size = args.grid;
    config.peel = !args.no_peel;
    if args.all_pairs_csv {
        config.pairs_csv = PairMode::AllPairs;
    }
    if args.edges_only {
        config.pair_mode = PairMode::EdgesOnly;
    }
    if args.remove_single_field {
        config.exclusions.single_field = SingleFieldRule::Remove;
    }

    let output = pipeline::run(&config)?;
    let r = &output.analysis.report;
    println!(
        "{} authors, {} edges, {} teams, {} disciplines",
        r.dataset.n_authors, r.dataset.n_edges, r.dataset.n_teams, r.dataset.n_disciplines
    );
    println!("core {} / shell {}", r.core_shell.n_core, r.core_shell.n_shell);
    for note in &r.notes {
        eprintln!("note: {note}");
    }
    for f in &output.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), Error> {
    if !(0.0..=1.0).contains(&args.homophily) {
        return Err(Error::Invalid(format!("homophily {} is outside [0, 1]", args.homophily)));
    }
    let config = SynthConfig {
        n_authors: args.n_authors,
        n_disciplines: args.n_disciplines,
        homophily: args.homophily,
        team_sizes: args.team_sizes.unwrap_or_default(),
        n_teams: args.n_teams,
        target_edges: args.target_edges,
        seed: args.seed,
    };
    let data = synth::generate(&config)?;
    let format = if args.format == "json" { AuthorFormat::Json } else { AuthorFormat::Csv };
    let files = synth::write(&data, &args.out, format)?;
    for f in [&files.authors, &files.teams, &files.index] {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn read_report(path: &Path) -> Result<AnalysisReport, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    AnalysisReport::from_json(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        location: "report".into(),
        message: e.to_string(),
    })
}

fn plot(args: PlotspecArgs) -> Result<(), Error> {
    let report = read_report(&args.report)?;
    let spec = plotspec(&report, args.figure)?;
    let mut text = serde_json::to_string_pretty(&spec)?;
    text.push('\n');
    match args.out {
        Some(path) => fs::write(&path, text).map_err(|source| Error::Io { path, source })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source: e,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Synth(a) => synth(a),
        Command::Plotspec(a) => plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { EXIT_INPUT } else { EXIT_ANALYSIS })
        }
    }
}
