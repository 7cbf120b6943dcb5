use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vmlab::gfourier::WLayout;
use vmlab::harness::{run_experiment, theorem13_parameters, Experiment, ExperimentConfig, Report};

#[derive(Parser)]
#[command(name = "vmlab", version, about = "Vertex-minor universality experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write records to PATH.jsonl and the aggregate table to PATH.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Load the configuration from a JSON file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record per-trial wall time (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layout {
    Random,
    Independent,
}

#[derive(Subcommand)]
enum Command {
    /// Check the delta-via-M construction against sequential complementation.
    ClaimMVerify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Exhaustive sign-expectation bound scan (CSV).
    Lemma21Scan {
        #[arg(long = "m-max")]
        m_max: Option<usize>,
        #[arg(long = "p-grid", value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
    },
    /// Symmetric zero-diagonal rank census (CSV).
    RankCensus {
        #[arg(long)]
        s: Option<usize>,
    },
    /// Monte-Carlo TV distance of G'[U] and G_delta to uniform.
    TvEstimate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, value_enum)]
        layout: Option<Layout>,
    },
    /// Exact Fourier chain over every (or sampled) G[W].
    FourierAudit {
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Local-complementation orbit of a graph.
    Orbit {
        #[arg(long)]
        graph6: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Decide whether the target is a vertex-minor on the given labels.
    CheckMinor {
        #[arg(long)]
        graph6: String,
        #[arg(long = "target-graph6")]
        target_graph6: String,
        #[arg(long, value_delimiter = ',')]
        on: Option<Vec<vmlab::Label>>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// k-vertex-minor universality with per-subset coverage.
    Universal {
        #[arg(long)]
        graph6: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Pivot-pair finding on random biadjacency matrices.
    PivotPairs {
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Low-rank tail of random square biadjacency matrices.
    RankTail {
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Bipartite delta recurrence on random instances.
    BipDeltaVerify {
        #[arg(long)]
        sizes: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Parameter choices of the universality theorem for given n and p.
    Params {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
    },
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn build_config(global: &Global, command: Command) -> Result<ExperimentConfig, String> {
    let experiment = match &command {
        Command::ClaimMVerify { .. } => Experiment::ClaimMVerify,
        Command::Lemma21Scan { .. } => Experiment::Lemma21Scan,
        Command::RankCensus { .. } => Experiment::RankCensus,
        Command::TvEstimate { .. } => Experiment::TvEstimate,
        Command::FourierAudit { .. } => Experiment::FourierAudit,
        Command::Orbit { .. } => Experiment::Orbit,
        Command::CheckMinor { .. } => Experiment::CheckMinor,
        Command::Universal { .. } => Experiment::Universal,
        Command::PivotPairs { .. } => Experiment::PivotPairs,
        Command::RankTail { .. } => Experiment::RankTail,
        Command::BipDeltaVerify { .. } => Experiment::BipDeltaVerify,
        Command::Params { .. } => unreachable!("handled before"),
    };
    let mut cfg = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let cfg = ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?;
            if !cfg.experiment.is_empty() && cfg.experiment != experiment.name() {
                return Err(format!(
                    "config is for {:?}, not {}",
                    cfg.experiment,
                    experiment.name()
                ));
            }
            cfg
        }
        None => ExperimentConfig::default(),
    };
    cfg.experiment = experiment.name().to_string();
    if let Some(seed) = global.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = global.trials {
        cfg.trials = trials;
    }
    cfg.record_timing |= global.timing;
    match command {
        Command::ClaimMVerify { n, p, s } => {
            set(&mut cfg.n, n);
            set(&mut cfg.p, p);
            set(&mut cfg.s, s);
        }
        Command::Lemma21Scan { m_max, p_grid } => {
            set(&mut cfg.m, m_max);
            set(&mut cfg.p_grid, p_grid);
        }
        Command::RankCensus { s } => set(&mut cfg.s, s),
        Command::TvEstimate { n, p, s, r, samples, layout } => {
            set(&mut cfg.n, n);
            set(&mut cfg.p, p);
            set(&mut cfg.s, s);
            set(&mut cfg.r, r);
            set(&mut cfg.samples, samples);
            set(
                &mut cfg.layout,
                layout.map(|l| match l {
                    Layout::Random => WLayout::Random,
                    Layout::Independent => WLayout::Independent,
                }),
            );
        }
        Command::FourierAudit { s, r, p } => {
            set(&mut cfg.s, s);
            set(&mut cfg.r, r);
            set(&mut cfg.p, p);
        }
        Command::Orbit { graph6, n, p, cap } => {
            set(&mut cfg.graph6, graph6);
            set(&mut cfg.n, n);
            set(&mut cfg.p, p);
            set(&mut cfg.cap, cap);
        }
        Command::CheckMinor { graph6, target_graph6, on, cap } => {
            cfg.graph6 = Some(graph6);
            cfg.target_graph6 = Some(target_graph6);
            set(&mut cfg.on, on);
            set(&mut cfg.cap, cap);
        }
        Command::Universal { graph6, n, p, k, cap } => {
            set(&mut cfg.graph6, graph6);
            set(&mut cfg.n, n);
            set(&mut cfg.p, p);
            set(&mut cfg.k, k);
            set(&mut cfg.cap, cap);
        }
        Command::PivotPairs { rows, cols, p } => {
            set(&mut cfg.rows, rows);
            set(&mut cfg.cols, cols);
            set(&mut cfg.p, p);
        }
        Command::RankTail { r, p } => {
            set(&mut cfg.r, r);
            set(&mut cfg.p, p);
        }
        Command::BipDeltaVerify { sizes, p } => {
            set(&mut cfg.sizes, sizes);
            set(&mut cfg.p, p);
        }
        Command::Params { .. } => unreachable!("handled before"),
    }
    Ok(cfg)
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> Result<(), String> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn write_outputs(base: &Path, report: &Report) -> Result<(), String> {
    let jsonl = base.with_extension("jsonl");
    let csv = base.with_extension("csv");
    fs::write(&jsonl, report.to_jsonl()).map_err(|e| format!("{}: {e}", jsonl.display()))?;
    fs::write(&csv, &report.csv).map_err(|e| format!("{}: {e}", csv.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool, String> {
    if let Some(threads) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    if let Command::Params { n, p } = cli.command {
        if n == 0 || !(0.0..=1.0).contains(&p) {
            return Err("params needs n >= 1 and p in [0, 1]".into());
        }
        let params = theorem13_parameters(n, p);
        emit(&(serde_json::to_string_pretty(&params).map_err(|e| e.to_string())? + "\n"))?;
        return Ok(true);
    }
    let cfg = build_config(&cli.global, cli.command)?;
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    match cfg.experiment.as_str() {
        "rank-census" | "lemma21-scan" => emit(&report.csv)?,
        _ => emit(
            &(serde_json::to_string_pretty(&report.summary_json()).map_err(|e| e.to_string())?
                + "\n"),
        )?,
    }
    if let Some(base) = &cli.global.out {
        write_outputs(base, &report)?;
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
