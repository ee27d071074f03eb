use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wgalab::cli::{render_report, run_command, write_report, Command, ExperimentConfig, Format};

/// Experiments on weighted group algebras l1(G, w).
#[derive(Debug, Parser)]
#[command(name = "wgalab", version)]
struct Args {
    /// classify | radius | spectrum | example-paper | probe-finite | separate | bochner
    #[arg(value_parser = Command::from_str_arg)]
    command: Option<Command>,
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Group, e.g. `Z`, `Z^2xZ_4`, `1`.
    #[arg(long)]
    group: Option<String>,
    /// Weight, e.g. `poly:1`, `exp:0.7`, `subexp:1,0.5`, `poly:1*const:1`.
    #[arg(long)]
    weight: Option<String>,
    /// Element as JSON `[[[coords], re, im], ...]`.
    #[arg(long)]
    element: Option<String>,
    /// Measure as JSON `[{"character": {...}, "mass": m}, ...]`.
    #[arg(long)]
    measure: Option<String>,
    /// Characters to annihilate (separate), as a JSON list.
    #[arg(long)]
    exclude: Option<String>,
    /// Character to hit (separate).
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    max_exponent: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | csv
    #[arg(long, value_parser = Format::from_str_arg)]
    format: Option<Format>,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

fn config(args: Args) -> Result<ExperimentConfig, String> {
    let mut cfg = match (&args.config, args.command) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?;
            if let Some(c) = args.command {
                cfg.command = c;
            }
            cfg
        }
        (None, Some(c)) => ExperimentConfig::new(c),
        (None, None) => return Err("a command or --config is required".into()),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field {
                cfg.$field = v.into();
            }
        )*};
    }
    set!(group, weight, element, measure, exclude, target, max_exponent, samples, tolerance, seed, out, format);
    cfg.force |= args.force;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match config(Args::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let result = run_command(&cfg).and_then(|report| match &cfg.out {
        Some(path) => write_report(&report, path, cfg.format, cfg.force),
        None => render_report(&report, cfg.format).map(|text| print!("{text}")),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
