//! `certify`: the weight-function certification table.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use cuspavg_core::bnb::BnbConfig;
use cuspavg_core::weights::{default_r_grid, omega1_plus, suite, suite_row, supplementary, CertificationRow, SuiteConfig};
use cuspavg_core::WeightFunctionId;

use crate::manifest::Recorder;
use crate::output::{json_bytes, parse_list};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Function id (g, F_delta, omega_delta_R, omega1, omega1_minus, omega1_plus,
    /// h11 … h42, ratio_h11_h12, ratio_h31_h32, ratio_h41_h42) or `all`.
    #[arg(long, default_value = "all", value_name = "ID")]
    pub function: String,
    /// δ for the δ-dependent rows; for `--function omega1` the δ of ω₁.
    #[arg(long, value_name = "V")]
    pub delta: Option<f64>,
    /// δ of the ω₁ row in `--function all`.
    #[arg(long = "omega1-delta", value_name = "V")]
    pub omega1_delta: Option<f64>,
    /// R: a value, a comma-separated list, or `grid` (2…20 step 0.5, 25…200 step 5).
    #[arg(long = "R", value_name = "V|LIST|grid")]
    pub r: Option<String>,
    /// Width tolerance of the certified enclosures.
    #[arg(long, default_value_t = 1e-9, value_name = "V")]
    pub tol: f64,
    /// Also certify the local basins, the literal reading and the typed display variants.
    #[arg(long)]
    pub supplementary: bool,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    pub out: PathBuf,
}

fn parse_r(s: &str) -> Result<Vec<f64>> {
    if s == "grid" {
        return Ok(default_r_grid());
    }
    let v: Vec<f64> = parse_list(s)?;
    anyhow::ensure!(v.iter().all(|&r| r >= 2.0), "R must be at least 2");
    Ok(v)
}

pub fn run(a: &CertifyArgs, rec: &mut Recorder) -> Result<Outcome> {
    anyhow::ensure!(a.tol > 0.0, "--tol must be positive");
    let selected: Option<WeightFunctionId> = match a.function.as_str() {
        "all" => None,
        s => Some(s.parse()?),
    };
    rec.set_out(&a.out)?;
    let r_list = a.r.as_deref().map(parse_r).transpose()?;
    let mut sc = SuiteConfig { tol: a.tol, ..Default::default() };
    if let Some(d) = a.delta {
        sc.delta = d;
        if selected == Some(WeightFunctionId::Omega1) {
            sc.omega1_delta = d;
        }
    }
    if let Some(d) = a.omega1_delta {
        sc.omega1_delta = d;
    }
    if let Some(rs) = &r_list {
        if rs.len() == 1 {
            sc.r = rs[0];
        } else {
            sc.r_grid = rs.clone();
        }
    }
    let cfg = BnbConfig::with_tol(a.tol);

    let mut rows = match selected {
        None => suite(&sc)?,
        Some(WeightFunctionId::OmegaDeltaR) if r_list.as_ref().is_some_and(|v| v.len() > 1) => r_list
            .as_ref()
            .expect("checked")
            .iter()
            .map(|&r| suite_row(WeightFunctionId::OmegaDeltaR, &SuiteConfig { r, ..sc.clone() }, &cfg))
            .collect::<cuspavg_core::Result<Vec<_>>>()?,
        Some(id) => vec![suite_row(id, &sc, &cfg)?],
    };
    if a.supplementary {
        rows.extend(supplementary(&sc)?);
    }

    rec.write("report.json", &json_bytes(&rows)?)?;
    let table = render(&rows);
    rec.write("report.txt", table.as_bytes())?;
    print!("{table}");

    if selected.is_none() || selected == Some(WeightFunctionId::Omega1Plus) {
        let rep = omega1_plus(sc.delta, &sc.r_grid, &cfg)?;
        let mut csv = String::from("R,omega_lo,omega_hi,bracket_lo,bracket_hi,inequality_holds\n");
        for row in &rep.rows {
            writeln!(
                csv,
                "{},{:e},{:e},{:e},{:e},{}",
                row.r, row.omega.lo, row.omega.hi, row.bracket.lo, row.bracket.hi, row.inequality_holds
            )?;
        }
        rec.write("omega1_plus.csv", csv.as_bytes()).context("omega1_plus grid")?;
    }
    Ok(Outcome::Ok)
}

/// Fixed-width table with one line per row and the notes underneath.
pub fn render(rows: &[CertificationRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<34} {:<22} {:<40} {:<23} {:<36} verdict",
        "function", "params", "certified min [lo, hi]", "argmin", "published"
    );
    let mut notes = Vec::new();
    for row in rows {
        let p = &row.params;
        let mut params = Vec::new();
        if let Some(d) = p.delta {
            params.push(format!("δ={d}"));
        }
        if let Some(r) = p.r {
            params.push(format!("R={r}"));
        }
        if let Some(v) = &p.variant {
            params.push(v.clone());
        }
        let argmin = match (row.argmin_lo, row.argmin_hi) {
            (Some(lo), Some(hi)) if (hi - lo) < 1e-6 => format!("{:.6}", 0.5 * (lo + hi)),
            (Some(lo), Some(hi)) => format!("[{lo:.4}, {hi:.4}]"),
            _ => "-".into(),
        };
        let published = match row.paper_location {
            Some(x) => format!("{} at {}", row.paper_claim, x),
            None => row.paper_claim.clone(),
        };
        let mut verdict = if row.agrees { "agree".to_string() } else { "FLAG".to_string() };
        if !row.note.is_empty() {
            notes.push((row.function.clone(), row.note.clone()));
            let _ = write!(verdict, " [{}]", notes.len());
        }
        let _ = writeln!(
            s,
            "{:<34} {:<22} [{:>17.10e}, {:>17.10e}] {:<23} {:<36} {}",
            row.function,
            params.join(" "),
            row.min_lo,
            row.min_hi,
            argmin,
            published,
            verdict
        );
    }
    let agree = rows.iter().filter(|r| r.agrees).count();
    let _ = writeln!(s, "\n{agree} of {} rows agree with the published values", rows.len());
    for (i, (f, n)) in notes.iter().enumerate() {
        let _ = writeln!(s, "[{}] {f}: {n}", i + 1);
    }
    s
}
