use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nslab_cli::{parse_config, run, CliError, Experiment};

#[derive(Parser)]
#[command(name = "nslab", version, about = "Pseudo-spectral Navier-Stokes and harmonic-analysis laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Report format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Extra `key=value` settings appended to the config.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    GridInfo(Common),
    Norms(Common),
    Majorant(Common),
    CheapEvolve(Common),
    Certificate(Common),
    Picard(Common),
    GevreyCheck(Common),
    Kato(Common),
    Maximal(Common),
    Hedberg(Common),
    Calderon(Common),
    Splitting(Common),
    /// Run the experiment named in the config file.
    Run(Common),
}

const DEFAULT_GRID: &str = "grid.n = 16\ngrid.L = 6.283185307179586\n";

fn config_text(common: &Common, fixed: Option<Experiment>) -> Result<String, CliError> {
    let mut text = match &common.config {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.clone(), source })?,
        None => DEFAULT_GRID.to_string(),
    };
    text.push('\n');
    let mut overrides: Vec<(String, String)> = common
        .set
        .iter()
        .map(|s| match s.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => (s.clone(), String::new()),
        })
        .collect();
    if let Some(seed) = common.seed {
        overrides.push(("seed".into(), seed.to_string()));
    }
    if let Some(f) = &common.format {
        overrides.push(("output.format".into(), f.clone()));
    }
    if let Some(e) = fixed {
        overrides.push(("experiment".into(), e.id().into()));
    }
    // later settings replace earlier lines with the same key
    let keys: Vec<&str> = overrides.iter().map(|(k, _)| k.as_str()).collect();
    let mut lines: Vec<String> = text
        .lines()
        .filter(|l| {
            let key = l.split('#').next().unwrap_or("").split('=').next().unwrap_or("").trim();
            !keys.contains(&key)
        })
        .map(str::to_string)
        .collect();
    lines.extend(overrides.iter().map(|(k, v)| format!("{k} = {v}")));
    Ok(lines.join("\n"))
}

fn execute(command: Command) -> Result<(), CliError> {
    let (common, fixed) = match command {
        Command::GridInfo(c) => (c, Some(Experiment::GridInfo)),
        Command::Norms(c) => (c, Some(Experiment::Norms)),
        Command::Majorant(c) => (c, Some(Experiment::Majorant)),
        Command::CheapEvolve(c) => (c, Some(Experiment::CheapEvolve)),
        Command::Certificate(c) => (c, Some(Experiment::Certificate)),
        Command::Picard(c) => (c, Some(Experiment::Picard)),
        Command::GevreyCheck(c) => (c, Some(Experiment::GevreyCheck)),
        Command::Kato(c) => (c, Some(Experiment::Kato)),
        Command::Maximal(c) => (c, Some(Experiment::Maximal)),
        Command::Hedberg(c) => (c, Some(Experiment::Hedberg)),
        Command::Calderon(c) => (c, Some(Experiment::Calderon)),
        Command::Splitting(c) => (c, Some(Experiment::Splitting)),
        Command::Run(c) => (c, None),
    };
    let cfg = parse_config(&config_text(&common, fixed)?)?;
    let exp = cfg.experiment.ok_or_else(|| {
        CliError::Config(nslab_cli::ConfigErrors(vec![nslab_cli::ConfigError::MissingRequired(vec![
            "experiment".into()
        ])]))
    })?;
    let dir = common
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("nslab-out"));
    let manifest = run(exp, &cfg, &dir)?;
    for f in &manifest.files {
        println!("{}  {}", f.sha256, dir.join(&f.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(errs) => {
                    for err in &errs.0 {
                        eprintln!("config error: {err}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
