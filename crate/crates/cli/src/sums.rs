//! `sums`: partial-sum suites with loglog fits and exact inequality checks.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use cuspavg_core::coeffgen::{assemble, ingest};
use cuspavg_core::satake::{LocalParameters, RAMANUJAN_EXPONENT};
use cuspavg_core::sums::{
    default_checkpoints, degree4_aggregate, dirichlet_sum, elliott_delta, fit_loglog, holder_check,
    hypothesis_h_exponent, log_checkpoints, lower_bound_ratio, prime_power_split, prime_power_sum, prime_sum,
    threshold_chains, InequalityCheck, PrimeWeight,
};
use cuspavg_core::weights::omega1_minus;
use cuspavg_core::{CoefficientTable, LocalData, RegressionFit, SumSeries};
use serde::Serialize;

use crate::gen::{SourceKind, SourceSpec};
use crate::manifest::Recorder;
use crate::output::{json_bytes, parse_list, series_bytes};
use crate::Outcome;

const MERTENS: f64 = 0.261_497_212_847_642_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Σ|a_p|^e/p for e = 0, 2, 4, 8, 2δ against the Sato–Tate moments.
    Moments,
    /// Rankin-trick threshold chains at R.
    Thresholds,
    /// Σ|λ_n|^{2δ} against X/log^ω X, the Elliott bound and the lower-bound ratio.
    #[value(name = "theoremA")]
    TheoremA,
    /// Adjoint and Sym⁴ sums and the degree-4 aggregate identity.
    #[value(name = "theoremB")]
    TheoremB,
    /// Prime-power tails and the l₀ exponent check.
    #[value(name = "hypothesisH")]
    HypothesisH,
    /// Hölder's inequality for two inputs.
    Holder,
    All,
}

#[derive(Debug, Args)]
pub struct SumsArgs {
    /// Directory holding local.csv, an ingestion CSV, or a source spec
    /// (`delta:X=N`, `sato-tate:X=N,seed=S,nontempered=F`, `file:PATH`).
    #[arg(long, default_value = "sato-tate:X=1000000,seed=7", value_name = "DIR|SPEC")]
    pub input: String,
    /// Second input for the Hölder suite (default: the next Sato–Tate seed, or the input itself).
    #[arg(long, value_name = "DIR|SPEC")]
    pub input2: Option<String>,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0.5, value_name = "V")]
    pub delta: f64,
    #[arg(long = "R", default_value_t = 6.0, value_name = "V")]
    pub r: f64,
    /// Comma-separated checkpoints (default 10³, 10^3.5, …, clipped to the data).
    #[arg(long, value_name = "LIST")]
    pub checkpoints: Option<String>,
    /// ω₁⁺(δ) used for the upper ratio series.
    #[arg(long, default_value_t = 0.007, value_name = "V")]
    pub omega1plus: f64,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    pub out: PathBuf,
}

/// One line of summary.json.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryEntry {
    pub suite: &'static str,
    pub descriptor: String,
    pub file: String,
    /// `exact`, `statistical` or `report`.
    pub kind: &'static str,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual: Option<f64>,
    pub value: Option<f64>,
    pub paper_target: String,
    pub verdict: String,
}

struct Input {
    local: LocalData,
    table: Option<CoefficientTable>,
    spec: Option<SourceSpec>,
}

fn load_input(s: &str) -> Result<Input> {
    let path = Path::new(s);
    if path.exists() {
        let file = if path.is_dir() { path.join("local.csv") } else { path.to_path_buf() };
        let local = ingest(&file).with_context(|| format!("loading {}", file.display()))?;
        return Ok(Input { local, table: None, spec: None });
    }
    let spec = SourceSpec::parse(s)?;
    let loaded = spec.load()?;
    Ok(Input { local: loaded.local, table: loaded.table, spec: Some(spec) })
}

fn checkpoints_for(bound: u64, given: Option<&str>) -> Result<Vec<u64>> {
    if let Some(s) = given {
        return parse_list(s);
    }
    let mut v: Vec<u64> = default_checkpoints().into_iter().filter(|&x| x <= bound).collect();
    if v.len() < 4 {
        v = log_checkpoints(2.0, (bound as f64).log10(), 0.25).into_iter().filter(|&x| x <= bound).collect();
    }
    Ok(v)
}

/// `E|2cos θ|^s` under the Sato–Tate measure (composite Simpson).
fn sato_tate_abs_moment(s: f64) -> f64 {
    let n = 20_000;
    let h = PI / n as f64;
    let f = |t: f64| 2.0 / PI * t.sin().powi(2) * (2.0 * t.cos()).abs().powf(s);
    let mut acc = f(0.0) + f(PI);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

struct Run<'a> {
    rec: &'a mut Recorder,
    entries: Vec<SummaryEntry>,
}

impl Run<'_> {
    fn series(&mut self, suite: &'static str, name: &str, s: &SumSeries) -> Result<String> {
        let file = format!("{suite}_{name}.csv");
        self.rec.write(&file, &series_bytes(s)?)?;
        Ok(file)
    }

    /// A slope claim `target ± tol`, or a report when `target` is `None`.
    fn slope(&mut self, suite: &'static str, name: &str, s: &SumSeries, target: Option<(f64, f64)>) -> Result<()> {
        let file = self.series(suite, name, s)?;
        let fit = fit_loglog(s).ok();
        let (kind, paper_target, verdict) = match (target, fit) {
            (Some((t, tol)), Some(f)) => {
                ("statistical", format!("slope {t:.4} ± {tol}"), pass((f.slope - t).abs() <= tol))
            }
            (Some((t, tol)), None) => ("statistical", format!("slope {t:.4} ± {tol}"), "insufficient checkpoints".into()),
            (None, _) => ("report", String::new(), "reported".into()),
        };
        self.push_fit(suite, &s.descriptor, file, kind, fit, Some(s.last()), paper_target, verdict);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn push_fit(
        &mut self,
        suite: &'static str,
        descriptor: &str,
        file: String,
        kind: &'static str,
        fit: Option<RegressionFit>,
        value: Option<f64>,
        paper_target: String,
        verdict: String,
    ) {
        self.entries.push(SummaryEntry {
            suite,
            descriptor: descriptor.to_string(),
            file,
            kind,
            slope: fit.map(|f| f.slope),
            intercept: fit.map(|f| f.intercept),
            residual: fit.map(|f| f.max_residual),
            value,
            paper_target,
            verdict,
        });
    }

    fn inequality(&mut self, suite: &'static str, name: &str, c: &InequalityCheck) -> Result<()> {
        let lhs = self.series(suite, &format!("{name}_lhs"), &c.lhs)?;
        self.series(suite, &format!("{name}_rhs"), &c.rhs)?;
        self.entries.push(SummaryEntry {
            suite,
            descriptor: c.name.clone(),
            file: lhs,
            kind: "exact",
            slope: None,
            intercept: None,
            residual: Some(c.min_slack),
            value: Some(c.lhs.last()),
            paper_target: "lhs ≤ rhs at every checkpoint".into(),
            verdict: exact(c.holds()),
        });
        Ok(())
    }
}

fn pass(ok: bool) -> String {
    if ok { "pass" } else { "miss" }.into()
}

fn exact(ok: bool) -> String {
    if ok { "holds" } else { "FAILS" }.into()
}

/// `ln` of a positive series, for fitting power-of-log trends.
fn ln_series(s: &SumSeries, descriptor: String) -> SumSeries {
    SumSeries { descriptor, checkpoints: s.checkpoints.clone(), values: s.values.iter().map(|v| v.ln()).collect() }
}

pub fn run(a: &SumsArgs, rec: &mut Recorder) -> Result<Outcome> {
    anyhow::ensure!(a.delta > 0.0, "--delta must be positive");
    anyhow::ensure!(a.r >= 2.0, "--R must be at least 2");
    anyhow::ensure!(a.omega1plus > 0.0, "--omega1plus must be positive");
    let input = load_input(&a.input)?;
    rec.set_out(&a.out)?;
    if let Some(seed) = input.spec.as_ref().and_then(SourceSpec::seed) {
        rec.set_seed(seed);
    }
    let local = &input.local;
    let cps = checkpoints_for(local.bound(), a.checkpoints.as_deref())?;
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;
    let mut run = Run { rec, entries: Vec::new() };

    if want(Suite::Moments) {
        let s = prime_sum(local, PrimeWeight::AbsPow(0.0), &cps)?;
        let file = run.series("moments", "reciprocal_primes", &s)?;
        let fit = fit_loglog(&s).ok();
        let ok = fit.is_some_and(|f| (f.slope - 1.0).abs() <= 0.1 && (f.intercept - MERTENS).abs() <= 0.05);
        let descriptor = s.descriptor.clone();
        run.push_fit(
            "moments",
            &descriptor,
            file,
            "statistical",
            fit,
            Some(s.last()),
            format!("slope 1 ± 0.1, intercept {MERTENS:.4} ± 0.05"),
            pass(ok),
        );
        for (e, target, tol) in [(2.0, 1.0, 0.2), (4.0, 2.0, 0.3), (8.0, 14.0, 2.0)] {
            let s = prime_sum(local, PrimeWeight::AbsPow(e), &cps)?;
            run.slope("moments", &format!("abs_pow_{e}"), &s, Some((target, tol)))?;
        }
        let m = sato_tate_abs_moment(2.0 * a.delta);
        let s = prime_sum(local, PrimeWeight::AbsPow(2.0 * a.delta), &cps)?;
        run.slope("moments", "abs_pow_2delta", &s, Some((m, 0.1 * m.max(1.0))))?;
    }

    if want(Suite::Thresholds) {
        let checks = threshold_chains(local, a.r, &cps)?;
        run.inequality("thresholds", "rankin_eighth", &checks[0])?;
        run.inequality("thresholds", "adjoint_eighth", &checks[1])?;
    }

    if want(Suite::TheoremA) {
        let x = *cps.last().context("no checkpoints")?;
        let table = match &input.table {
            Some(t) => t.clone(),
            None => assemble(local, x)?,
        };
        let s = dirichlet_sum(&table, a.delta, &cps)?;
        let file = run.series("theoremA", "dirichlet", &s)?;
        run.push_fit("theoremA", &s.descriptor, file, "report", None, Some(s.last()), String::new(), "reported".into());

        let w_minus = omega1_minus(a.delta);
        for (name, omega, target, ok) in [
            ("lower_ratio", w_minus, format!("ω₁⁻(δ) = {w_minus:.7}: slope of ln ratio ≥ 0"), (|m: f64| m >= 0.0) as fn(f64) -> bool),
            ("upper_ratio", a.omega1plus, format!("ω₁⁺ = {}: slope of ln ratio ≤ 0", a.omega1plus), |m: f64| m <= 0.0),
        ] {
            let ratio = s.log_ratio(omega);
            let file = run.series("theoremA", name, &ratio)?;
            let fit = fit_loglog(&ln_series(&ratio, format!("ln {}", ratio.descriptor))).ok();
            let verdict = fit.map_or("insufficient checkpoints".into(), |f| pass(ok(f.slope)));
            run.push_fit("theoremA", &ratio.descriptor, file, "statistical", fit, Some(ratio.last()), target, verdict);
        }

        if a.delta < 1.0 {
            let el = elliott_delta(&table, a.delta, &cps)?;
            let file = run.series("theoremA", "elliott", &el.series)?;
            let builtin = input.spec.as_ref().is_some_and(|s| s.kind != SourceKind::File);
            let (kind, verdict) = if builtin { ("statistical", pass(el.holds)) } else { ("report", "reported".into()) };
            run.push_fit(
                "theoremA",
                &el.series.descriptor,
                file,
                kind,
                None,
                Some(el.value),
                format!("max over checkpoints ≤ {}", el.bound),
                verdict,
            );
        }

        let lb = lower_bound_ratio(&table, local, a.delta, a.r, &cps)?;
        let file = run.series("theoremA", "lower_bound_ratio", &lb)?;
        let floor = lb.values.iter().copied().fold(f64::INFINITY, f64::min);
        run.push_fit("theoremA", &lb.descriptor, file, "statistical", None, Some(floor), "min > 0.1".into(), pass(floor > 0.1));

        let pr = prime_sum(local, PrimeWeight::AbsPowAtMost { e: 2.0 * a.delta, r: a.r }, &cps)?;
        let file = run.series("theoremA", "restricted_moment", &pr)?;
        let threshold = 1.0 - 1.0 / 1.04 - a.r.powf(2.0 * a.delta - 4.0);
        let fit = fit_loglog(&pr).ok();
        let verdict = fit.map_or("insufficient checkpoints".into(), |f| pass(f.slope >= threshold));
        run.push_fit(
            "theoremA",
            &pr.descriptor,
            file,
            "statistical",
            fit,
            Some(pr.last()),
            format!("slope ≥ 1 − 1.04⁻¹ − R^(2δ−4) = {threshold:.4}"),
            verdict,
        );
    }

    if want(Suite::TheoremB) {
        let s = prime_sum(local, PrimeWeight::AdjointSq, &cps)?;
        run.slope("theoremB", "adjoint_sq", &s, Some((1.0, 0.2)))?;
        let s = prime_sum(local, PrimeWeight::Adjoint, &cps)?;
        run.slope("theoremB", "adjoint", &s, Some((0.0, 0.2)))?;
        let s = prime_sum(local, PrimeWeight::Sym4Twist, &cps)?;
        run.slope("theoremB", "sym4_twist", &s, Some((0.0, 0.2)))?;
        let agg = degree4_aggregate(local, &cps)?;
        let file = run.series("theoremB", "degree4_lhs", &agg.lhs)?;
        run.series("theoremB", "degree4_rhs", &agg.rhs)?;
        run.entries.push(SummaryEntry {
            suite: "theoremB",
            descriptor: format!("{} = {}", agg.lhs.descriptor, agg.rhs.descriptor),
            file,
            kind: "exact",
            slope: None,
            intercept: None,
            residual: Some(agg.max_relative_residual),
            value: Some(agg.lhs.last()),
            paper_target: "identity, relative residual ≤ 1e-9".into(),
            verdict: exact(agg.max_relative_residual <= 1e-9),
        });
    }

    if want(Suite::HypothesisH) {
        for pp in prime_power_sum(local, 2..=4, &cps)? {
            let file = run.series("hypothesisH", &format!("prime_power_l{}", pp.l), &pp.series)?;
            let total = pp.series.last();
            let share = if total > 0.0 { pp.last_decade_increment / total } else { 0.0 };
            run.push_fit(
                "hypothesisH",
                &pp.series.descriptor,
                file,
                "statistical",
                None,
                Some(share),
                "last-decade increment < 1% of total".into(),
                pass(share < 0.01),
            );
        }
        let (head, tail) = prime_power_split(local, &cps)?;
        let f1 = run.series("hypothesisH", "split_l1", &head)?;
        run.push_fit("hypothesisH", &head.descriptor, f1, "report", fit_loglog(&head).ok(), Some(head.last()), String::new(), "reported".into());
        let f2 = run.series("hypothesisH", "split_tail", &tail)?;
        run.push_fit("hypothesisH", &tail.descriptor, f2, "report", None, Some(tail.last()), String::new(), "reported".into());

        let observed = local
            .unramified_upto(local.bound())
            .filter(|c| !c.is_tempered())
            .map(|c| c.max_modulus().ln() / (c.prime() as f64).ln())
            .fold(0.0, f64::max);
        for (label, theta) in [("θ = 7/64", RAMANUJAN_EXPONENT), ("observed θ", observed)] {
            let e = hypothesis_h_exponent(2, theta);
            run.entries.push(SummaryEntry {
                suite: "hypothesisH",
                descriptor: format!("(1−2θ)·l₀ > 1, m = 2, l₀ = {}, {label} = {theta:.6}", e.l0),
                file: String::new(),
                kind: "exact",
                slope: None,
                intercept: None,
                residual: None,
                value: Some(e.exponent),
                paper_target: "> 1".into(),
                verdict: exact(e.holds),
            });
        }
    }

    if want(Suite::Holder) {
        let (second, independent) = match (&a.input2, &input.spec) {
            (Some(s), _) => (load_input(s)?.local, false),
            (None, Some(spec)) if spec.kind == SourceKind::SatoTate => {
                let next = SourceSpec { seed: spec.seed.wrapping_add(1), ..spec.clone() };
                (next.load()?.local, spec.nontempered == 0.0)
            }
            (None, _) => (local.clone(), false),
        };
        let c = holder_check(local, &second, &cps)?;
        run.inequality("holder", "holder", &c)?;
        let target = independent.then_some(((8.0 / (3.0 * PI)).powi(2), 0.1));
        run.slope("holder", "product_moment", &c.lhs, target)?;
    }

    let failed = run.entries.iter().any(|e| e.kind == "exact" && e.verdict != "holds");
    let text = render(&run.entries);
    run.rec.write("summary.json", &json_bytes(&run.entries)?)?;
    run.rec.write("summary.txt", text.as_bytes())?;
    print!("{text}");
    Ok(if failed { Outcome::Failed } else { Outcome::Ok })
}

fn render(entries: &[SummaryEntry]) -> String {
    let mut s = String::new();
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.5}"));
    let _ = writeln!(s, "{:<12} {:<12} {:>10} {:>10} {:>14}  {:<48} descriptor", "suite", "verdict", "slope", "intercept", "value", "target");
    for e in entries {
        let _ = writeln!(
            s,
            "{:<12} {:<12} {:>10} {:>10} {:>14}  {:<48} {}",
            e.suite,
            e.verdict,
            opt(e.slope),
            opt(e.intercept),
            e.value.map_or("-".to_string(), |x| format!("{x:.6e}")),
            e.paper_target,
            e.descriptor
        );
    }
    let exact_fail = entries.iter().filter(|e| e.kind == "exact" && e.verdict != "holds").count();
    let misses = entries.iter().filter(|e| e.kind == "statistical" && e.verdict != "pass").count();
    let _ = writeln!(s, "\n{exact_fail} exact failures, {misses} statistical misses, {} entries", entries.len());
    s
}
