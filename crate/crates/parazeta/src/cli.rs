//! Command-line front end.
use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parazeta_core::normalize::{confirm_poles, fe_residual, format_poles, FE_TOL};
use parazeta_core::oracle::{numeric_residue_oracle, pick_anchor, ORACLE_TOL};
use parazeta_core::period::build_period;
use parazeta_core::pipeline::{compare, parse_group, run, term_diff, PipelineRun, RunOptions};
use parazeta_core::q::{fmt_q, parse_q};
use parazeta_core::residue::{residue, Hyperplane};
use parazeta_core::rootsys::{build_root_system, Family};
use parazeta_core::symexpr::{parse_expr, parse_linform, LinForm, SymExpr};
use parazeta_core::xinum::{eval_expr, Ctx, EvalConfig, C};
use parazeta_core::zerofind::{describe_box, RhOptions};
use parazeta_core::{Error, Var, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::artifacts::Artifacts;
use crate::golden::golden_for;
use crate::parallel::{oracle_parallel, pool, rh_report_parallel};
use crate::schema::*;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Parser, Debug)]
#[command(name = "parazeta", version, about = "Non-abelian zeta functions from periods and iterated residues")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Working precision in decimal digits (at least 15).
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Root directory for result files.
    #[arg(long, global = true, env = "PARAZETA_OUT", default_value = "parazeta-out")]
    pub out: PathBuf,
    /// Do not write result files.
    #[arg(long, global = true)]
    pub no_files: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Period,
    Residue,
    XiO,
    Zeta,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Roots, coroots, ρ and the Weyl group of a group.
    Inspect { group: String },
    /// Derive the zeta function of G/P.
    Zeta {
        group: String,
        parabolic: String,
        /// Stage printed to stdout (all stages are written to files).
        #[arg(long, value_enum, default_value_t = Stage::Zeta)]
        stage: Stage,
        /// Add the normalization record, pole report and golden comparison.
        #[arg(long)]
        report: bool,
    },
    /// Evaluate the zeta of G/P at one point.
    Eval {
        group: String,
        parabolic: String,
        /// The point as "re,im" (or "re").
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Check the functional equation, poles, the RH boxes, or the golden form.
    Verify(VerifyArgs),
    /// Numeric contour residues.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub group: String,
    pub parabolic: String,
    #[arg(long)]
    pub fe: bool,
    #[arg(long)]
    pub poles: bool,
    #[arg(long)]
    pub rh: bool,
    /// Compare with the shipped transcription, if any.
    #[arg(long)]
    pub golden: bool,
    #[arg(long, default_value_t = 30.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Discrepancies in boxes below this height are flagged, not failed.
    #[arg(long)]
    pub central: Option<f64>,
    /// Sample points for the FE check.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Expression whose residue is taken (plain notation).
    #[arg(long, conflicts_with_all = ["period", "group"])]
    pub residue: Option<String>,
    /// Use the period of this group instead of an expression.
    #[arg(long, conflicts_with = "group")]
    pub period: Option<String>,
    /// Linear form cutting out the hyperplane, e.g. "z2 - z3 - 1".
    #[arg(long, allow_hyphen_values = true)]
    pub along: Option<String>,
    /// Remaining variables, e.g. "x=1/3,y=-2"; drawn from the seed if absent.
    #[arg(long, allow_hyphen_values = true)]
    pub anchor: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 48)]
    pub samples: usize,
    /// Check every residue step of G/P (with --parabolic).
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, requires = "group")]
    pub parabolic: Option<String>,
    /// Anchors per step in --group mode.
    #[arg(long, default_value_t = 10)]
    pub anchors: usize,
}

/// What a command produced: text for stdout and whether its checks passed.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, passed: true }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) | Error::Parse(_) => exit::USAGE,
        Error::Internal(_) => exit::INTERNAL,
        _ => exit::FAILED,
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report")
}

struct Env<'a> {
    g: &'a Global,
    ctx: Ctx,
    args: Vec<String>,
}

impl Env<'_> {
    fn files(&self, name: &str) -> parazeta_core::Result<Option<Artifacts>> {
        if self.g.no_files {
            return Ok(None);
        }
        Artifacts::create(&self.g.out, name).map(Some)
    }

    fn finish(&self, a: Option<Artifacts>, command: &str) -> parazeta_core::Result<()> {
        if let Some(a) = a {
            a.finish(command, &self.args, self.g.digits, self.g.seed)?;
        }
        Ok(())
    }

    fn run(&self, group: &str, parabolic: &str) -> parazeta_core::Result<PipelineRun> {
        run(group, parabolic, &self.ctx, &RunOptions { fe_points: 50, seed: self.g.seed })
    }
}

/// Runs a parsed command line; `args` is recorded in manifests.
pub fn execute(cli: &Cli, args: Vec<String>) -> parazeta_core::Result<Outcome> {
    let g = &cli.global;
    if g.digits < 15 {
        return Err(Error::Unsupported(format!("--digits {} is below the minimum of 15", g.digits)));
    }
    pool(g.jobs)?.install(move || {
        let env = Env { g, ctx: Ctx::new(EvalConfig::with_digits(g.digits)), args };
        match &cli.cmd {
            Cmd::Inspect { group } => cmd_inspect(&env, group),
            Cmd::Zeta { group, parabolic, stage, report } => cmd_zeta(&env, group, parabolic, *stage, *report),
            Cmd::Eval { group, parabolic, s } => cmd_eval(&env, group, parabolic, s),
            Cmd::Verify(v) => cmd_verify(&env, v),
            Cmd::Oracle(o) => cmd_oracle(&env, o),
        }
    })
}

fn cmd_inspect(env: &Env, group: &str) -> parazeta_core::Result<Outcome> {
    let gs = parse_group(group)?;
    let rs = build_root_system(gs.family, gs.rank)?;
    let j = root_system_json(&gs.name, &rs)?;
    if env.g.format == Format::Json {
        return Ok(ok(json(&j)));
    }
    let row = |v: &[String]| format!("({})", v.join(", "));
    let mut s = format!("{} (type {}, rank {}, {})\n", j.group, j.cartan_type, j.rank, j.convention);
    s += &format!("simple roots: {}\n", j.simple_roots.iter().map(|r| row(r)).collect::<Vec<_>>().join(" "));
    s += &format!("positive roots ({}):\n", j.positive_roots.len());
    for (r, c) in j.positive_roots.iter().zip(&j.positive_coroots) {
        s += &format!("  {}  coroot {}\n", row(r), row(c));
    }
    s += &format!("rho: {}\n", row(&j.rho));
    s += &format!("<rho, simple coroots>: {}\n", j.rho_pairings.join(", "));
    s += &format!("|W| = {}\n", j.weyl_order);
    Ok(ok(s))
}

fn show(e: &SymExpr, f: Format) -> String {
    match f {
        Format::Latex => e.to_latex(),
        Format::Json => json(&expr_to_json(e)),
        Format::Text => e.to_plain(),
    }
}

#[derive(Serialize)]
struct ComparisonJson {
    id: String,
    matched: bool,
    outcome: String,
    pipeline_terms: usize,
    golden_terms: usize,
    printed_terms: usize,
    only_pipeline: Vec<String>,
    only_golden: Vec<String>,
}

fn golden_comparison(env: &Env, r: &PipelineRun) -> parazeta_core::Result<Option<ComparisonJson>> {
    let Some(gold) = golden_for(&r.group.name, &r.parabolic.name)? else { return Ok(None) };
    let c = compare(&gold.id, &r.xi_o, &gold.expr, &env.ctx, env.g.seed)?;
    let (a, b) = if c.matched() { (vec![], vec![]) } else { term_diff(&r.xi_o, &gold.expr) };
    Ok(Some(ComparisonJson {
        id: gold.id,
        matched: c.matched(),
        outcome: c.describe(),
        pipeline_terms: c.pipeline_terms,
        golden_terms: c.golden_terms,
        printed_terms: gold.printed_terms,
        only_pipeline: a,
        only_golden: b,
    }))
}

#[derive(Serialize)]
struct ZetaJson {
    group: String,
    parabolic: String,
    zeta: ExprJson,
    plain: String,
    latex: String,
    auxiliary: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    record: Option<RecordJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    poles: Option<PoleReportJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonJson>,
}

fn cmd_zeta(env: &Env, group: &str, parabolic: &str, stage: Stage, report: bool) -> parazeta_core::Result<Outcome> {
    let r = env.run(group, parabolic)?;
    let name = format!("zeta-{}-{}", r.group.name, r.parabolic.name);
    let mut files = env.files(&name)?;
    let cmp = if report { golden_comparison(env, &r)? } else { None };
    if let Some(a) = files.as_mut() {
        a.json("period.json", &expr_to_json(&r.period))?;
        a.json("residue.json", &expr_to_json(&r.residue))?;
        a.json("xi_o.json", &expr_to_json(&r.xi_o))?;
        a.json("zeta.json", &expr_to_json(r.zeta()))?;
        a.text("zeta.tex", &format!("{}\n", r.zeta().to_latex()))?;
        if report {
            a.json("record.json", &record_json(&r.record))?;
            a.json("poles.json", &pole_report_json(&r.poles))?;
            if let Some(c) = &cmp {
                a.json("comparison.json", c)?;
            }
        }
    }
    env.finish(files, "zeta")?;
    let e = match stage {
        Stage::Period => &r.period,
        Stage::Residue => &r.residue,
        Stage::XiO => &r.xi_o,
        Stage::Zeta => r.zeta(),
    };
    if env.g.format == Format::Json {
        let j = ZetaJson {
            group: r.group.name.clone(),
            parabolic: r.parabolic.name.clone(),
            zeta: expr_to_json(e),
            plain: e.to_plain(),
            latex: e.to_latex(),
            auxiliary: r.auxiliary.clone(),
            record: report.then(|| record_json(&r.record)),
            poles: report.then(|| pole_report_json(&r.poles)),
            comparison: cmp,
        };
        return Ok(ok(json(&j)));
    }
    let mut s = show(e, env.g.format) + "\n";
    if report {
        let c = r.record.c_constant.as_ref().map(fmt_q).unwrap_or_else(|| "not found".into());
        s += &format!("c = {c}\n");
        if let Some((a, b)) = &r.record.rescaling {
            s += &format!("rescaling: v = {}*s + {}\n", fmt_q(a), fmt_q(b));
        }
        s += &format!("poles: {}\n", format_poles(&r.poles));
        s += &format!("terms: {}\n", r.zeta().len());
        if !r.auxiliary.is_empty() {
            s += &format!("auxiliary constants in {} terms\n", r.auxiliary.len());
        }
        if let Some(c) = &cmp {
            s += &format!("{}: {}\n", c.id, c.outcome);
        }
    }
    Ok(ok(s))
}

fn parse_point(s: &str) -> parazeta_core::Result<(f64, f64)> {
    let bad = || Error::Parse(format!("point '{s}' is not 're,im'"));
    let mut it = s.split(',').map(|x| x.trim().parse::<f64>());
    let re = it.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match it.next() {
        Some(x) => x.map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok((re, im))
}

fn cmd_eval(env: &Env, group: &str, parabolic: &str, s: &str) -> parazeta_core::Result<Outcome> {
    let (re, im) = parse_point(s)?;
    let r = env.run(group, parabolic)?;
    let z = r.zeta();
    let v = parazeta_core::normalize::sole_var(z)?;
    let pt = BTreeMap::from([(v, C::from_f64(re, im, &env.ctx))]);
    let res = eval_expr(z, &pt, &env.ctx)?;
    let j = eval_json(&res);
    if env.g.format == Format::Json {
        return Ok(ok(json(&j)));
    }
    let mut out = format!("f({re}{im:+}i) = {:.15e} {:+.15e}i\n", j.value[0], j.value[1]);
    if j.near_singular {
        out += &format!("warning: near-singular ({})\n", j.offending.join(", "));
    }
    Ok(ok(out))
}

#[derive(Serialize)]
struct FeJson {
    c: String,
    residual: f64,
    points: usize,
    passed: bool,
}

#[derive(Serialize)]
struct PoleCheckJson {
    s: String,
    order: u32,
    observed: f64,
    passed: bool,
}

fn cmd_verify(env: &Env, v: &VerifyArgs) -> parazeta_core::Result<Outcome> {
    if !(v.fe || v.poles || v.rh || v.golden) {
        return Err(Error::Unsupported("verify needs at least one of --fe, --poles, --rh, --golden".into()));
    }
    let r = env.run(&v.group, &v.parabolic)?;
    let mut files = env.files(&format!("verify-{}-{}", r.group.name, r.parabolic.name))?;
    let mut out = String::new();
    let mut passed = true;
    let mut all = serde_json::Map::new();
    let z = r.zeta();
    if v.fe {
        let c = Q::from_integer(1.into());
        let res = if r.centered.is_some() { fe_residual(z, &c, v.points, &env.ctx, env.g.seed)? } else { f64::INFINITY };
        let j = FeJson { c: fmt_q(&c), residual: res, points: v.points, passed: res <= FE_TOL };
        passed &= j.passed;
        out += &format!("FE s <-> 1-s: residual {:.2e} at {} points -> {}\n", res, v.points, verdict(j.passed));
        if let Some(a) = files.as_mut() {
            a.json("fe.json", &j)?;
        }
        all.insert("fe".into(), serde_json::to_value(&j).expect("json"));
    }
    if v.poles {
        let checks = confirm_poles(z, &r.poles, &env.ctx)?;
        let j: Vec<PoleCheckJson> = checks
            .iter()
            .map(|c| PoleCheckJson { s: fmt_q(&c.at), order: c.order, observed: c.observed, passed: c.ok() })
            .collect();
        let good = checks.iter().all(|c| c.ok());
        passed &= good;
        let set: Vec<String> = r.poles.poles.iter().map(|p| fmt_q(&p.at)).collect();
        out += &format!("poles: {{{}}}\n", set.join(", "));
        out += &format!("orders: {} (numeric growth check {})\n", format_poles(&r.poles), verdict(good));
        if let Some(a) = files.as_mut() {
            a.json("poles.json", &pole_report_json(&r.poles))?;
            a.json("pole_checks.json", &j)?;
        }
        all.insert("poles".into(), serde_json::to_value(pole_report_json(&r.poles)).expect("json"));
        all.insert("pole_checks".into(), serde_json::to_value(&j).expect("json"));
    }
    if v.golden {
        match golden_comparison(env, &r)? {
            Some(c) => {
                passed &= c.matched;
                out += &format!("{}: {} -> {}\n", c.id, c.outcome, verdict(c.matched));
                for t in &c.only_pipeline {
                    out += &format!("  only in pipeline: {t}\n");
                }
                for t in &c.only_golden {
                    out += &format!("  only in golden:   {t}\n");
                }
                if let Some(a) = files.as_mut() {
                    a.json("comparison.json", &c)?;
                }
                all.insert("comparison".into(), serde_json::to_value(&c).expect("json"));
            }
            None => out += "no transcription for this pair\n",
        }
    }
    if v.rh {
        let opts = RhOptions { step: v.step, tol: v.tol, central: v.central, fe_points: v.points, seed: env.g.seed, ..RhOptions::default() };
        let rep = rh_report_parallel(z, v.tmax, &opts, env.g.digits)?;
        let good = rep.consistent();
        passed &= good;
        out += &format!("zeros on the line up to t = {}: {}\n", v.tmax, rep.zeros.count_in(0.0, v.tmax));
        for b in &rep.boxes {
            out += &format!("  {}\n", describe_box(b));
        }
        out += &format!("RH boxes -> {}\n", verdict(good));
        let j = zeta_report_json(&rep);
        if let Some(a) = files.as_mut() {
            a.json("rh.json", &j)?;
            a.zeros_csv(&rep.zeros)?;
            a.line_csv(&rep.zeros)?;
        }
        all.insert("rh".into(), serde_json::to_value(&j).expect("json"));
    }
    env.finish(files, "verify")?;
    all.insert("passed".into(), passed.into());
    let stdout = if env.g.format == Format::Json { json(&all) } else { out };
    Ok(Outcome { stdout, passed })
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn parse_anchor(s: &str) -> parazeta_core::Result<BTreeMap<Var, Q>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("anchor entry '{kv}' is not var=value")))?;
            let q = parse_q(v.trim()).ok_or_else(|| Error::Parse(format!("'{v}' is not a rational")))?;
            Ok((Var::new(k.trim()), q))
        })
        .collect()
}

#[derive(Serialize)]
struct SingleOracleJson {
    #[serde(flatten)]
    oracle: OracleJson,
    symbolic: [f64; 2],
    relative: f64,
    passed: bool,
}

fn cmd_oracle(env: &Env, o: &OracleArgs) -> parazeta_core::Result<Outcome> {
    if let Some(group) = &o.group {
        let gs = parse_group(group)?;
        let p = parazeta_core::pipeline::parse_parabolic(&gs, o.parabolic.as_deref().unwrap_or(""))?;
        let rs = build_root_system(gs.family, gs.rank)?;
        let period = build_period(&rs)?;
        let checks = oracle_parallel(&period, &rs, &p, o.anchors, o.samples, env.g.digits, env.g.seed)?;
        let j: Vec<OracleCheckJson> = checks.iter().map(oracle_check_json).collect();
        let passed = checks.iter().all(|c| c.passed());
        let mut files = env.files(&format!("oracle-{}-{}", gs.name, p.name))?;
        if let Some(a) = files.as_mut() {
            a.json("oracle.json", &j)?;
        }
        env.finish(files, "oracle")?;
        if env.g.format == Format::Json {
            return Ok(Outcome { stdout: json(&j), passed });
        }
        let mut s = String::new();
        for c in &checks {
            let anchor: Vec<String> = c.anchor.iter().map(|(v, q)| format!("{v}={}", fmt_q(q))).collect();
            s += &format!("{} [{}] rel {:.1e} -> {}\n", c.label, anchor.join(","), c.relative, verdict(c.passed()));
        }
        s += &format!("{} checks, {} samples each -> {}\n", checks.len(), o.samples, verdict(passed));
        return Ok(Outcome { stdout: s, passed });
    }
    let along = o.along.as_deref().ok_or_else(|| Error::Unsupported("oracle needs --along".into()))?;
    let mut form = parse_linform(along)?;
    let expr = match (&o.residue, &o.period) {
        (Some(e), None) => parse_expr(e)?,
        (None, Some(g)) => {
            let gs = parse_group(g)?;
            if gs.family == Family::A {
                // The period lives on Σzᵢ = 0 with the last coordinate eliminated.
                let n = gs.rank + 1;
                let last = (1..n).fold(LinForm::zero(), |acc, i| acc.sub(&LinForm::var(Var::new(format!("z{i}")))));
                form = form.substitute(&BTreeMap::from([(Var::new(format!("z{n}")), last)]));
            }
            build_period(&build_root_system(gs.family, gs.rank)?)?
        }
        _ => return Err(Error::Unsupported("oracle needs --residue, --period or --group".into())),
    };
    let h = Hyperplane::from_form(form, None)?;
    let (anchor, auto_r) = match &o.anchor {
        Some(a) => (parse_anchor(a)?, 0.25),
        None => pick_anchor(&expr, &h, &mut ChaCha8Rng::seed_from_u64(env.g.seed))
            .ok_or_else(|| Error::NoConvergence("no admissible anchor found".into()))?,
    };
    let radius = o.radius.unwrap_or(auto_r);
    let rep = numeric_residue_oracle(&expr, &h, &anchor, radius, o.samples, &env.ctx)?;
    let sym = residue(&expr, &h)?;
    let pt = anchor.iter().map(|(v, q)| (v.clone(), C::real(env.ctx.q(q), &env.ctx))).collect();
    let sv = eval_expr(&sym, &pt, &env.ctx)?.value;
    let rel = sv.sub(&rep.value, &env.ctx).abs_f64() / sv.abs_f64().max(rep.value.abs_f64()).max(1e-300);
    let (a, b) = sv.to_f64();
    let j = SingleOracleJson { oracle: oracle_json(&rep, &anchor), symbolic: [a, b], relative: rel, passed: rel <= ORACLE_TOL };
    let mut files = env.files("oracle")?;
    if let Some(f) = files.as_mut() {
        f.json("oracle.json", &j)?;
    }
    env.finish(files, "oracle")?;
    let passed = j.passed;
    if env.g.format == Format::Json {
        return Ok(Outcome { stdout: json(&j), passed });
    }
    let anchor: Vec<String> = anchor.iter().map(|(v, q)| format!("{v}={}", fmt_q(q))).collect();
    let s = format!(
        "contour value {:.15e} {:+.15e}i (error estimate {:.1e}, {} samples, radius {})\nsymbolic      {:.15e} {:+.15e}i\nanchor [{}] relative {:.1e} -> {}\n",
        j.oracle.contour_value[0],
        j.oracle.contour_value[1],
        j.oracle.error_estimate,
        j.oracle.samples,
        j.oracle.radius,
        a,
        b,
        anchor.join(","),
        rel,
        verdict(passed)
    );
    Ok(Outcome { stdout: s, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_anchors() {
        assert_eq!(parse_point("2,0").unwrap(), (2.0, 0.0));
        assert_eq!(parse_point("0.5").unwrap(), (0.5, 0.0));
        assert!(parse_point("a,b").is_err());
        assert!(parse_point("1,2,3").is_err());
        let a = parse_anchor("x=1/3,y=-2").unwrap();
        assert_eq!(a[&Var::new("y")], Q::from_integer((-2).into()));
        assert!(parse_anchor("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), exit::USAGE);
        assert_eq!(exit_code(&Error::Pole("s".into())), exit::FAILED);
        assert_eq!(exit_code(&Error::Internal("x".into())), exit::INTERNAL);
    }
}
