//! Period → iterated residue → normalization for a named group and maximal
//! parabolic, plus the truncated SL(3) variant.
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::normalize::{
    center, clearing_factors, find_fe_constant, normalize_o, pole_report, random_point, NormalizationRecord,
    PoleReport,
};
use crate::period::{build_period, build_period_t, ExpConvention};
use crate::q::{qf, Q};
use crate::residue::iterated_residue;
use crate::rootsys::{build_root_system, Family, ParabolicDescriptor, RootSystem};
use crate::symexpr::{LinForm, SymExpr};
use crate::var::Var;
use crate::xinum::{equals_up_to_scalar, eval_expr, Ctx, ScalarMatch, C};

/// A parsed group name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    /// Canonical spelling, e.g. "SL3", "Sp4", "G2".
    pub name: String,
    pub family: Family,
    pub rank: usize,
}

fn num(s: &str) -> Option<usize> {
    (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())).then(|| s.parse().ok()).flatten()
}

/// `SL<n>`, `Sp<2n>`, `SO<m>`, `G2`, or a Cartan type such as `A2`, `C3`.
pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let bad = || Error::Unsupported(alloc::format!("unknown group '{s}'"));
    let g = |name: String, family, rank| Ok(GroupSpec { name, family, rank });
    if let Some(n) = s.strip_prefix("SL").and_then(num) {
        return if n >= 2 { g(alloc::format!("SL{n}"), Family::A, n - 1) } else { Err(bad()) };
    }
    if let Some(n) = s.strip_prefix("Sp").and_then(num) {
        return if n >= 4 && n % 2 == 0 { g(alloc::format!("Sp{n}"), Family::C, n / 2) } else { Err(bad()) };
    }
    if let Some(m) = s.strip_prefix("SO").and_then(num) {
        return match m {
            m if m >= 5 && m % 2 == 1 => g(alloc::format!("SO{m}"), Family::B, m / 2),
            m if m >= 6 && m % 2 == 0 => g(alloc::format!("SO{m}"), Family::D, m / 2),
            _ => Err(bad()),
        };
    }
    let mut ch = s.chars();
    let fam = match ch.next() {
        Some('A') => Family::A,
        Some('B') => Family::B,
        Some('C') => Family::C,
        Some('D') => Family::D,
        Some('G') => Family::G,
        _ => return Err(bad()),
    };
    let r = num(ch.as_str()).ok_or_else(bad)?;
    let name = match (fam, r) {
        (Family::A, r) => alloc::format!("SL{}", r + 1),
        (Family::C, r) => alloc::format!("Sp{}", 2 * r),
        (Family::B, r) => alloc::format!("SO{}", 2 * r + 1),
        (Family::D, r) => alloc::format!("SO{}", 2 * r),
        (Family::G, 2) => "G2".into(),
        _ => return Err(bad()),
    };
    g(name, fam, r)
}

/// Parabolic labels: `B` for rank one; `P<a><b>` (parts summing to n) for
/// SL(n); `Pe1-e2`, `P2e2` for Sp(4) (naming the retained root); `Plong`,
/// `Pshort` for G₂ (naming the removed root); `P<k>` removes the k-th
/// simple root (1-based) in any group.
pub fn parse_parabolic(g: &GroupSpec, s: &str) -> Result<ParabolicDescriptor> {
    let bad = || Error::Unsupported(alloc::format!("unknown parabolic '{s}' for {}", g.name));
    let removed = match (g.family, g.rank, s) {
        (_, 1, "B") => 0,
        (Family::C, 2, "Pe1-e2") => 1,
        (Family::C, 2, "P2e2") => 0,
        (Family::G, 2, "Plong") => 1,
        (Family::G, 2, "Pshort") => 0,
        _ => {
            let body = s.strip_prefix('P').ok_or_else(bad)?;
            let digits: Vec<usize> = body.bytes().map(|b| (b as char).to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(bad)?;
            match (g.family, digits.as_slice()) {
                (Family::A, [a, b]) if *a >= 1 && *b >= 1 && a + b == g.rank + 1 => a - 1,
                (_, _) => match num(body) {
                    Some(k) if k >= 1 && k <= g.rank => k - 1,
                    _ => return Err(bad()),
                },
            }
        }
    };
    let mut p = ParabolicDescriptor { removed, retained: Vec::new(), name: String::new() };
    p.retained = (0..g.rank).filter(|&i| i != removed).collect();
    p.name = canonical_label(g, removed);
    Ok(p)
}

/// The preferred label for the parabolic removing simple root `removed`.
pub fn canonical_label(g: &GroupSpec, removed: usize) -> String {
    match (g.family, g.rank) {
        (_, 1) => "B".into(),
        (Family::A, r) => alloc::format!("P{}{}", removed + 1, r - removed),
        (Family::C, 2) => if removed == 1 { "Pe1-e2" } else { "P2e2" }.into(),
        (Family::G, 2) => if removed == 1 { "Plong" } else { "Pshort" }.into(),
        _ => alloc::format!("P{}", removed + 1),
    }
}

/// Affine renaming v = a·s + b of the surviving residue variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rescaling {
    pub group: &'static str,
    pub parabolic: &'static str,
    /// (numerator, denominator) of a and b.
    pub a: (i64, i64),
    pub b: (i64, i64),
}

impl Rescaling {
    pub fn a(&self) -> Q {
        qf(self.a.0, self.a.1)
    }

    pub fn b(&self) -> Q {
        qf(self.b.0, self.b.1)
    }
}

const fn rescale(group: &'static str, parabolic: &'static str, a: i64, b: (i64, i64)) -> Rescaling {
    Rescaling { group, parabolic, a: (a, 1), b }
}

/// Chosen so that the ξ arguments read like the closed forms in the
/// literature; groups not listed use v = s.
pub const RESCALING: &[Rescaling] = &[
    rescale("SL2", "B", 1, (-1, 2)),
    rescale("SL3", "P21", 1, (-1, 1)),
    rescale("SL3", "P12", 2, (-1, 1)),
    rescale("SL4", "P31", 1, (-3, 2)),
    rescale("SL4", "P13", 3, (-3, 2)),
    rescale("SL4", "P22", 1, (0, 1)),
    rescale("SL5", "P41", 1, (-2, 1)),
    rescale("SL5", "P14", 4, (-2, 1)),
    rescale("SL5", "P32", 3, (2, 1)),
    rescale("SL5", "P23", 3, (1, 1)),
    rescale("Sp4", "Pe1-e2", 1, (-1, 1)),
    rescale("Sp4", "P2e2", 2, (-1, 1)),
    rescale("G2", "Plong", 1, (-1, 1)),
    rescale("G2", "Pshort", 1, (-1, 1)),
];

pub fn rescaling_for(group: &str, parabolic: &str) -> Rescaling {
    RESCALING
        .iter()
        .find(|r| r.group == group && r.parabolic == parabolic)
        .copied()
        .unwrap_or(Rescaling { group: "", parabolic: "", a: (1, 1), b: (0, 1) })
}

/// The variable of every final zeta.
pub fn s_var() -> Var {
    Var::new("s")
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Sample points for the numeric FE check.
    pub fe_points: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { fe_points: 50, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub group: GroupSpec,
    pub parabolic: ParabolicDescriptor,
    pub root_system: RootSystem,
    /// The period, one term per Weyl element.
    pub period: SymExpr,
    /// After the iterated residue, in the surviving λ-variable.
    pub residue: SymExpr,
    pub residue_var: Var,
    /// Cleared of ξ denominators, in s.
    pub xi_o: SymExpr,
    /// Centered so that f(1−s) = f(s); absent if no FE constant verified.
    pub centered: Option<SymExpr>,
    pub record: NormalizationRecord,
    /// Poles of the centered zeta (of ξ_o if centering failed).
    pub poles: PoleReport,
    /// Terms carrying Laurent constants or derivative values.
    pub auxiliary: Vec<String>,
}

impl PipelineRun {
    /// The final zeta: centered if possible, ξ_o otherwise.
    pub fn zeta(&self) -> &SymExpr {
        self.centered.as_ref().unwrap_or(&self.xi_o)
    }
}

/// Runs the whole chain for `group`/`parabolic`.
pub fn run(group: &str, parabolic: &str, ctx: &Ctx, opts: &RunOptions) -> Result<PipelineRun> {
    let g = parse_group(group)?;
    let p = parse_parabolic(&g, parabolic)?;
    let rs = build_root_system(g.family, g.rank)?;
    let period = build_period(&rs)?;
    let (res, v) = iterated_residue(&period, &rs, &p)?;
    let res = res.simplify();
    let sc = rescaling_for(&g.name, &p.name);
    let s = s_var();
    let img = LinForm::term(s.clone(), sc.a()).add_const(&sc.b());
    let in_s = res.substitute(&BTreeMap::from([(v.clone(), img)]))?.simplify();
    let mut record = clearing_factors(&in_s);
    record.rescaling = Some((sc.a(), sc.b()));
    let xi_o = normalize_o(&in_s, &record)?.with_label(alloc::format!("{}/{} xi_o", g.name, p.name));
    let (c, table) = find_fe_constant(&xi_o, ctx, opts.fe_points, opts.seed)?;
    record.c_constant = c.clone();
    record.candidates = table;
    let centered = match &c {
        Some(c) => {
            let (e, k) = center(&xi_o, c)?;
            record.scalar = k;
            Some(e.with_label(alloc::format!("{}/{} zeta", g.name, p.name)))
        }
        None => None,
    };
    let fin = centered.as_ref().unwrap_or(&xi_o);
    let poles = pole_report(fin)?;
    let auxiliary = fin.auxiliary_terms().iter().map(|t| t.to_plain()).collect();
    Ok(PipelineRun {
        group: g,
        parabolic: p,
        root_system: rs,
        period,
        residue: res,
        residue_var: v,
        xi_o,
        centered,
        record,
        poles,
        auxiliary,
    })
}

/// Which truncation parameter the SL(3) truncated run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TMode {
    /// T = (x, y, −x−y), result in the raw slice variable.
    General,
    /// T = xρ = (x, 0, −x), result shifted so the FE reads s ↔ 1−s.
    RhoLine,
}

/// Slice parametrizations of the truncated SL(3) residues: the surviving
/// variable as a·v + b for the general and ρ-line modes.
pub const T_RESCALING: &[(&str, (i64, i64), (i64, i64))] = &[
    // residue along z1 − z2 = 1, z2 = t; ρ-line uses t = s − 1
    ("P21", (1, 0), (1, -1)),
    // residue along z2 − z3 = 1, z3 = s, so z1 = −2s − 1; ρ-line uses s − 1
    ("P12", (-2, -1), (-2, 1)),
];

#[derive(Clone, Debug)]
pub struct TRun {
    pub parabolic: ParabolicDescriptor,
    pub mode: TMode,
    /// Truncated period (in z and T variables).
    pub period: SymExpr,
    /// Residue in the slice variable (t or s) and T variables, cleared of
    /// ξ denominators.
    pub result: SymExpr,
}

pub fn t_vars() -> (Var, Var) {
    (Var::new("x"), Var::new("y"))
}

/// Truncated SL(3) period through its single residue.
pub fn run_t(parabolic: &str, mode: TMode) -> Result<TRun> {
    let g = parse_group("SL3")?;
    let p = parse_parabolic(&g, parabolic)?;
    let rs = build_root_system(g.family, g.rank)?;
    let (x, y) = t_vars();
    let lx = LinForm::var(x.clone());
    let t: Vec<LinForm> = match mode {
        TMode::General => {
            let ly = LinForm::var(y.clone());
            alloc::vec![lx.clone(), ly.clone(), lx.add(&ly).neg()]
        }
        TMode::RhoLine => alloc::vec![lx.clone(), LinForm::zero(), lx.neg()],
    };
    let period = build_period_t(&rs, &t, ExpConvention::InverseShifted)?;
    let (res, v) = iterated_residue(&period, &rs, &p)?;
    let &(_, gen, rho) = T_RESCALING
        .iter()
        .find(|(n, _, _)| *n == p.name)
        .ok_or_else(|| Error::Unsupported(alloc::format!("no slice data for {}", p.name)))?;
    let (var, (a, b)) = match mode {
        TMode::General if p.name == "P21" => (Var::new("t"), gen),
        TMode::General => (s_var(), gen),
        TMode::RhoLine => (s_var(), rho),
    };
    let img = LinForm::term(var, Q::from_integer(a.into())).add_const(&Q::from_integer(b.into()));
    let raw = res.substitute(&BTreeMap::from([(v, img)]))?.simplify();
    let result = normalize_o(&raw, &clearing_factors(&raw))?;
    Ok(TRun { parabolic: p, mode, period, result })
}

/// max over `n` seeded (s, x) of |f(1−s, x) − g(s, x)| / (1 + |g(s, x)|),
/// with |s| ≤ 3 and x ∈ [−1, 1].
pub fn cross_fe_residual(f: &SymExpr, g: &SymExpr, n: usize, ctx: &Ctx, seed: u64) -> Result<f64> {
    let s = s_var();
    let (x, _) = t_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut got = 0;
    let mut tries = 0;
    while got < n {
        tries += 1;
        if tries > 20 * n + 20 {
            return Err(Error::NoConvergence("too many sample points near poles".into()));
        }
        let (a, b) = random_point(&mut rng, 3.0);
        let xv = C::from_f64(rng.gen_range(-1.0..1.0), 0.0, ctx);
        let sv = C::from_f64(a, b, ctx);
        let mirrored = C::one(ctx).sub(&sv, ctx);
        let l = eval_expr(f, &BTreeMap::from([(s.clone(), mirrored), (x.clone(), xv.clone())]), ctx);
        let r = eval_expr(g, &BTreeMap::from([(s.clone(), sv), (x.clone(), xv)]), ctx);
        let (l, r) = match (l, r) {
            (Ok(l), Ok(r)) if !l.near_singular && !r.near_singular => (l.value, r.value),
            _ => continue,
        };
        worst = worst.max(l.sub(&r, ctx).abs_f64() / (1.0 + r.abs_f64()));
        got += 1;
    }
    Ok(worst)
}

/// Which stage of a run a golden formula is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// ξ_o, before centering (equal to the centered zeta up to scalar when
    /// c = 1).
    XiO,
    /// The cleared truncated residue of [`run_t`].
    Truncated(TMode),
}

/// A transcribed closed form.
#[derive(Clone, Debug)]
pub struct GoldenFormula {
    pub id: String,
    pub group: String,
    pub parabolic: String,
    pub frame: Frame,
    pub expr: SymExpr,
    /// Summands as printed (bracketed groups expanded, nothing merged).
    pub printed_terms: usize,
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub id: String,
    pub outcome: ScalarMatch,
    pub pipeline_terms: usize,
    pub golden_terms: usize,
}

impl Comparison {
    pub fn matched(&self) -> bool {
        self.outcome.is_match()
    }

    pub fn describe(&self) -> String {
        match &self.outcome {
            ScalarMatch::Exact(q) => alloc::format!("scalar {}", crate::q::fmt_q(q)),
            ScalarMatch::Numeric { ratio, agree, rational } => alloc::format!(
                "weak match, ratio {:.12e}{} (spread {agree:.1e})",
                ratio.0,
                rational.as_ref().map(|q| alloc::format!(" ~ {}", crate::q::fmt_q(q))).unwrap_or_default()
            ),
            ScalarMatch::Mismatch => "mismatch".to_string(),
        }
    }
}

/// Pipeline expression vs golden, structural first, then numeric.
pub fn compare(id: &str, ours: &SymExpr, golden: &SymExpr, ctx: &Ctx, seed: u64) -> Result<Comparison> {
    Ok(Comparison {
        id: id.into(),
        outcome: equals_up_to_scalar(ours, golden, ctx, seed)?,
        pipeline_terms: ours.simplify().len(),
        golden_terms: golden.simplify().len(),
    })
}

/// The terms of `ours` that have no counterpart in `golden` at the best
/// scalar guess, and vice versa; used to explain mismatches.
pub fn term_diff(ours: &SymExpr, golden: &SymExpr) -> (Vec<String>, Vec<String>) {
    let a = ours.simplify();
    let b = golden.simplify();
    // Ratio on the most common shared key.
    let mut votes: BTreeMap<Q, usize> = BTreeMap::new();
    for x in &b.terms {
        for y in a.terms.iter().filter(|y| y.key() == x.key()) {
            *votes.entry(&y.scalar / &x.scalar).or_insert(0) += 1;
        }
    }
    let k = votes.into_iter().max_by_key(|(_, n)| *n).map(|(q, _)| q).unwrap_or_else(Q::one);
    let d = a.sub(&b.scale(&k)).simplify();
    let only_a = d.terms.iter().filter(|t| a.terms.iter().any(|u| u.key() == t.key())).map(|t| t.to_plain()).collect();
    let only_b = d.terms.iter().filter(|t| !a.terms.iter().any(|u| u.key() == t.key())).map(|t| t.to_plain()).collect();
    (only_a, only_b)
}
