//! `gen`: local data and coefficient tables from a source.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use cuspavg_core::coeffgen::{
    assemble, delta_local_from_table, delta_table_from_tau, ingest, ramanujan_tau, sato_tate_source, write_local_csv,
    write_table_csv,
};
use cuspavg_core::{CoefficientTable, LocalData, Representation, SamplerConfig};

use crate::manifest::Recorder;
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    /// Ramanujan Δ via its q-expansion.
    Delta,
    /// Independent Sato–Tate classes per prime.
    SatoTate,
    /// Local data from an ingestion CSV (`--file`).
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lift {
    Std,
    Sym2,
    Sym3,
    Sym4,
    Adjoint,
}

impl Lift {
    fn name(&self) -> &'static str {
        match self {
            Lift::Std => "std",
            Lift::Sym2 => "sym2",
            Lift::Sym3 => "sym3",
            Lift::Sym4 => "sym4",
            Lift::Adjoint => "adjoint",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "sato-tate")]
    pub source: SourceKind,
    /// Table length and prime bound (default 100000; for `file`, the data bound).
    #[arg(long = "X", value_name = "N")]
    pub x: Option<u64>,
    /// Sato–Tate seed.
    #[arg(long, default_value_t = 7, value_name = "N")]
    pub seed: u64,
    /// Fraction of Sato–Tate primes given a nontempered class.
    #[arg(long, default_value_t = 0.0, value_name = "FRAC")]
    pub nontempered: f64,
    /// Representation whose coefficients are tabulated.
    #[arg(long, value_enum, default_value = "std")]
    pub lift: Lift,
    /// Ingestion CSV for `--source file`.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    pub out: PathBuf,
}

/// Where coefficient data comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub x: Option<u64>,
    pub seed: u64,
    pub nontempered: f64,
    pub file: Option<PathBuf>,
}

/// Local data, and for Δ the exact table and `τ`.
pub struct Loaded {
    pub local: LocalData,
    pub table: Option<CoefficientTable>,
    pub tau: Option<Vec<i128>>,
}

impl SourceSpec {
    pub fn load(&self) -> Result<Loaded> {
        Ok(match self.kind {
            SourceKind::Delta => {
                let tau = ramanujan_tau(self.x.unwrap_or(100_000))?;
                let table = delta_table_from_tau(&tau);
                Loaded { local: delta_local_from_table(&table)?, table: Some(table), tau: Some(tau) }
            }
            SourceKind::SatoTate => {
                let cfg = SamplerConfig { seed: self.seed, nontempered_fraction: self.nontempered, ..Default::default() };
                Loaded { local: sato_tate_source(&cfg, self.x.unwrap_or(100_000))?, table: None, tau: None }
            }
            SourceKind::File => {
                let path = self.file.as_ref().context("--source file needs --file")?;
                let local = ingest(path)?;
                if let Some(x) = self.x {
                    if x > local.bound() {
                        bail!("--X {x} exceeds the data in {} (primes up to {})", path.display(), local.bound());
                    }
                }
                Loaded { local, table: None, tau: None }
            }
        })
    }

    pub fn seed(&self) -> Option<u64> {
        (self.kind == SourceKind::SatoTate).then_some(self.seed)
    }

    /// Parses `delta:X=…`, `sato-tate:X=…,seed=…,nontempered=…` or `file:PATH`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = SourceSpec { kind: SourceKind::SatoTate, x: None, seed: 7, nontempered: 0.0, file: None };
        spec.kind = match head {
            "delta" => SourceKind::Delta,
            "sato-tate" => SourceKind::SatoTate,
            "file" => {
                spec.kind = SourceKind::File;
                spec.file = Some(PathBuf::from(rest));
                return Ok(spec);
            }
            other => bail!("`{other}` is neither a directory nor a source (delta, sato-tate, file:PATH)"),
        };
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv.split_once('=').with_context(|| format!("expected key=value in `{kv}`"))?;
            match k {
                "X" => spec.x = Some(v.parse().with_context(|| format!("bad X `{v}`"))?),
                "seed" => spec.seed = v.parse().with_context(|| format!("bad seed `{v}`"))?,
                "nontempered" => spec.nontempered = v.parse().with_context(|| format!("bad fraction `{v}`"))?,
                other => bail!("unknown source key `{other}`"),
            }
        }
        Ok(spec)
    }
}

pub fn run(a: &GenArgs, rec: &mut Recorder) -> Result<Outcome> {
    let spec = SourceSpec { kind: a.source, x: a.x, seed: a.seed, nontempered: a.nontempered, file: a.file.clone() };
    if a.source != SourceKind::File && a.file.is_some() {
        bail!("--file only applies to --source file");
    }
    rec.set_out(&a.out)?;
    if let Some(s) = spec.seed() {
        rec.set_seed(s);
    }
    let loaded = spec.load()?;
    let x = a.x.unwrap_or(loaded.local.bound());

    let mut buf = Vec::new();
    write_local_csv(&loaded.local, &mut buf)?;
    rec.write("local.csv", &buf)?;

    let table = match (a.lift, loaded.table) {
        (Lift::Std, Some(t)) => t,
        (Lift::Std, None) => assemble(&loaded.local, x)?,
        (lift, _) => assemble(&loaded.local.lifted(Representation::from_lift(lift.name())?)?, x)?,
    };
    let mut buf = Vec::new();
    write_table_csv(&table, &mut buf)?;
    rec.write("coefficients.csv", &buf)?;

    let mut summary = format!(
        "source {} ({}), {} primes up to {}, table λ_n for n ≤ {}\n",
        loaded.local.label(),
        a.lift.name(),
        loaded.local.factors().len(),
        loaded.local.bound(),
        table.bound()
    );
    if let Some(tau) = &loaded.tau {
        let mut csv = String::from("n,tau\n");
        for (n, t) in tau.iter().enumerate().skip(1) {
            writeln!(csv, "{n},{t}")?;
        }
        rec.write("tau.csv", csv.as_bytes())?;
        for n in [2usize, 3, 5, 7].into_iter().filter(|&n| n < tau.len()) {
            writeln!(summary, "τ({n}) = {}", tau[n])?;
        }
    }
    for n in [2usize, 3, 4, 6].into_iter().filter(|&n| n <= table.bound()) {
        let v = table.get(n);
        writeln!(summary, "λ_{n} = {:.12} {:+.12}i", v.re, v.im)?;
    }
    print!("{summary}");
    Ok(Outcome::Ok)
}
