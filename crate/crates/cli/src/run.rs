//! Per-run bookkeeping: input digests, output paths, exit classification and
//! the run manifest.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Exit status of a failed run.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input or violated precondition (exit 1).
    Invalid(anyhow::Error),
    /// The requested computation exceeds a scale limit (exit 2).
    Scale(anyhow::Error),
}

impl Failure {
    pub fn invalid(msg: impl Display) -> Self {
        Failure::Invalid(anyhow::anyhow!("{msg}"))
    }

    pub fn scale(msg: impl Display) -> Self {
        Failure::Scale(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Scale(_) => 2,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Invalid(e) | Failure::Scale(e) => e,
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub prng: &'static str,
    pub threads: Option<usize>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub wall_time_ms: f64,
    pub exit_code: i32,
}

pub struct Run {
    started: Instant,
    pub seed: Option<u64>,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
}

impl Run {
    pub fn new() -> Self {
        Self {
            started: Instant::now(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Reads `path` and parses it; the digest is taken over `canonical` of the
    /// parsed value, or over the raw bytes when parsing fails.
    pub fn load<T, E: Display>(
        &mut self,
        path: &Path,
        parse: impl FnOnce(&str) -> Result<T, E>,
        canonical: impl FnOnce(&T) -> String,
    ) -> CmdResult<T> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
        match parse(&text) {
            Ok(v) => {
                self.digest(path, canonical(&v).as_bytes());
                Ok(v)
            }
            Err(e) => {
                self.digest(path, text.as_bytes());
                Err(Failure::invalid(format!("{}: {e}", path.display())))
            }
        }
    }

    fn digest(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> CmdResult<()> {
        fs::write(path, contents)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    pub fn finish(
        self,
        command: &str,
        arguments: Vec<String>,
        threads: Option<usize>,
        exit_code: i32,
    ) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            arguments,
            seed: self.seed,
            prng: mret_core::PRNG,
            threads,
            inputs: self.inputs,
            outputs: self.outputs,
            wall_time_ms: self.started.elapsed().as_secs_f64() * 1e3,
            exit_code,
        }
    }
}

/// `prefix` with `ext` appended after a dot.
pub fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
