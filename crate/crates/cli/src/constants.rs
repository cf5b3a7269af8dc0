//! `constants`: ω₂, ω₃ and ω₁₂ from ω₁⁺(1/2).

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use cuspavg_core::bnb::BnbConfig;
use cuspavg_core::weights::{default_r_grid, exponent_constants, omega1_plus};

use crate::manifest::Recorder;
use crate::output::json_bytes;
use crate::Outcome;

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// ω₁⁺(1/2): a number, or `from-certify` for the certified lower end of the R-grid maximum.
    #[arg(long, value_name = "V|from-certify")]
    pub omega1plus: String,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    pub out: PathBuf,
}

pub fn run(a: &ConstantsArgs, rec: &mut Recorder) -> Result<Outcome> {
    let (value, origin) = if a.omega1plus == "from-certify" {
        let rep = omega1_plus(0.5, &default_r_grid(), &BnbConfig::with_tol(1e-12))?;
        (rep.grid_max.lo, format!("certified R-grid maximum at R = {}", rep.grid_max_r))
    } else {
        let v: f64 = a.omega1plus.parse().map_err(|_| anyhow::anyhow!("bad --omega1plus `{}`", a.omega1plus))?;
        if !(v > 0.0) {
            bail!("--omega1plus must be positive, got {v}");
        }
        (v, "supplied".to_string())
    };
    rec.set_out(&a.out)?;
    let c = exponent_constants(value)?;
    let mark = |ok: bool| if ok { "pass" } else { "FLAG" };
    let mut s = String::new();
    writeln!(s, "ω₁⁺(1/2) = {value:.9e} ({origin})")?;
    writeln!(s, "{:<6} {:>14} {:>12}  verdict", "name", "value", "floor")?;
    writeln!(s, "{:<6} {:>14.6e} {:>12.1e}  {}", "ω₂", c.omega2, c.floor_omega2, mark(c.pass_omega2))?;
    writeln!(s, "{:<6} {:>14.6e} {:>12.1e}  {}", "ω₃", c.omega3, c.floor_omega3, mark(c.pass_omega3))?;
    writeln!(s, "{:<6} {:>14.6e} {:>12.1e}  {}", "ω₁₂", c.omega12, c.floor_omega12, mark(c.pass_omega12))?;
    print!("{s}");
    rec.write("constants.json", &json_bytes(&c)?)?;
    rec.write("constants.txt", s.as_bytes())?;
    Ok(Outcome::Ok)
}
