//! Run manifests: what was run, with which settings, and what it wrote.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Outcome;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// The arguments after splicing in the config file.
    pub resolved_args: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub code_version: String,
    pub threads: usize,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<OutputFile>,
}

/// Collects outputs while a subcommand runs.
pub struct Recorder {
    manifest: RunManifest,
    out: Option<PathBuf>,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn strings(v: &[OsString]) -> Vec<String> {
    v.iter().map(|s| s.to_string_lossy().into_owned()).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Recorder {
    pub fn new(argv: &[OsString], resolved: &[OsString], config: BTreeMap<String, String>) -> Self {
        Recorder {
            manifest: RunManifest {
                command_line: strings(argv),
                resolved_args: strings(resolved),
                config,
                seed: None,
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                threads: rayon::current_num_threads(),
                started_unix: now(),
                finished_unix: 0,
                outputs: Vec::new(),
            },
            out: None,
        }
    }

    /// Creates the output directory.
    pub fn set_out(&mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        self.out = Some(dir.to_path_buf());
        Ok(())
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    /// Writes `name` into the output directory and records its checksum.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let dir = self.out.as_ref().context("output directory not set")?;
        let path = dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.retain(|o| o.file != name);
        self.manifest.outputs.push(OutputFile { file: name.to_string(), bytes: bytes.len() as u64, sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        let Some(dir) = self.out.take() else {
            return Ok(());
        };
        self.manifest.finished_unix = now();
        let json = serde_json::to_vec_pretty(&self.manifest)?;
        std::fs::write(dir.join(MANIFEST), json).with_context(|| format!("writing {}", dir.join(MANIFEST).display()))?;
        Ok(())
    }
}

/// Arguments of a recorded run redirected to `out`, without `--config`.
pub fn replay_args(manifest: &RunManifest, out: &Path) -> Vec<OsString> {
    let out = out.to_string_lossy().into_owned();
    let mut args = Vec::new();
    let mut saw_out = false;
    let mut it = manifest.resolved_args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            it.next();
            continue;
        }
        if a.starts_with("--config=") {
            continue;
        }
        if a == "--out" {
            it.next();
            args.push("--out".to_string());
            args.push(out.clone());
            saw_out = true;
        } else if a.starts_with("--out=") {
            args.push(format!("--out={out}"));
            saw_out = true;
        } else {
            args.push(a.clone());
        }
    }
    if !saw_out {
        args.push("--out".into());
        args.push(out);
    }
    args.into_iter().map(OsString::from).collect()
}

/// Re-runs a recorded command into `out` and compares every output checksum.
pub fn replay(path: &Path, out: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(dir) = path.parent() {
        if dir.canonicalize().ok() == out.canonicalize().ok() {
            anyhow::bail!("replay output directory must differ from the recorded one");
        }
    }
    crate::run(replay_args(&manifest, out))?;
    let mut mismatches = 0;
    for o in &manifest.outputs {
        let bytes = std::fs::read(out.join(&o.file)).with_context(|| format!("reading replayed {}", o.file))?;
        let ok = sha256_hex(&bytes) == o.sha256;
        println!("{:<40} {}", o.file, if ok { "identical" } else { "MISMATCH" });
        mismatches += usize::from(!ok);
    }
    println!("{} of {} outputs reproduced byte-identically", manifest.outputs.len() - mismatches, manifest.outputs.len());
    Ok(if mismatches == 0 { Outcome::Ok } else { Outcome::Failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(args: &[&str]) -> RunManifest {
        RunManifest {
            command_line: vec![],
            resolved_args: args.iter().map(|s| s.to_string()).collect(),
            config: BTreeMap::new(),
            seed: None,
            code_version: "0".into(),
            threads: 1,
            started_unix: 0,
            finished_unix: 0,
            outputs: vec![],
        }
    }

    #[test]
    fn replay_redirects_output_and_drops_config() {
        let m = manifest(&["cuspavg", "--config", "c.conf", "gen", "--X", "100", "--out", "a"]);
        let args = replay_args(&m, Path::new("b"));
        assert_eq!(args, ["cuspavg", "gen", "--X", "100", "--out", "b"].map(OsString::from));
        let m = manifest(&["cuspavg", "constants", "--omega1plus", "0.007"]);
        assert_eq!(replay_args(&m, Path::new("b")).last().unwrap(), "b");
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
