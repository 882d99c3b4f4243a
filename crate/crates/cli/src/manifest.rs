use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nslab_core::quadrature::DerivedConstant;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::experiments::{base_constants, run_experiment, Outcome};
use crate::report::{to_json_bytes, Artifact};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub experiment: Experiment,
    pub config: Vec<String>,
    pub seed: u64,
    pub threads: usize,
    pub version: &'static str,
    pub wall_time_s: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub constants_used: Vec<DerivedConstant>,
    pub files: Vec<FileDigest>,
    pub status: &'static str,
    pub error: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn write_file(dir: &Path, a: &Artifact) -> Result<FileDigest, CliError> {
    let path: PathBuf = dir.join(&a.name);
    std::fs::write(&path, &a.bytes).map_err(io_err(&path))?;
    Ok(FileDigest { name: a.name.clone(), sha256: sha256_hex(&a.bytes), bytes: a.bytes.len() })
}

/// Run one experiment, write its files into `dir` and the manifest last.
/// A numerical error or failed check still produces a manifest (status
/// `failed`) before the error is returned.
pub fn run(exp: Experiment, cfg: &ExperimentConfig, dir: &Path) -> Result<RunManifest, CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build().expect("thread pool");
    let result = pool.install(|| run_experiment(exp, cfg));
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e @ CliError::Numerical(_)) => (Outcome::default(), Some(e)),
        Err(e) => return Err(e),
    };
    let mut files = Vec::new();
    for a in &outcome.artifacts {
        files.push(write_file(dir, a)?);
    }
    let mut constants_used = base_constants();
    constants_used.extend(outcome.constants);
    let message = error.as_ref().map(|e| e.to_string()).or_else(|| outcome.failure.clone());
    let manifest = RunManifest {
        experiment: exp,
        config: cfg.echo(),
        seed: cfg.seed,
        threads: cfg.threads,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: start.elapsed().as_secs_f64(),
        tolerances: outcome.tolerances,
        constants_used,
        files,
        status: if message.is_some() { "failed" } else { "ok" },
        error: message,
    };
    let path = dir.join(MANIFEST_NAME);
    std::fs::write(&path, to_json_bytes(&manifest)).map_err(io_err(&path))?;
    match (error, outcome.failure) {
        (Some(e), _) => Err(e),
        (None, Some(f)) => Err(CliError::Violation(f)),
        (None, None) => Ok(manifest),
    }
}
