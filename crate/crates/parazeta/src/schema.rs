//! JSON forms of expressions and reports. Rationals are strings "p/q".
use std::collections::BTreeMap;

use parazeta_core::normalize::{NormalizationRecord, PoleReport};
use parazeta_core::oracle::{OracleCheck, OracleReport};
use parazeta_core::q::{fmt_q, parse_q};
use parazeta_core::rootsys::{coroot, weyl_group, RootSystem};
use parazeta_core::symexpr::{LinForm, Poly, SymExpr, Term, XiAtom};
use parazeta_core::xinum::EvalResult;
use parazeta_core::zerofind::{BoxCertificate, Verdict, ZetaReport};
use parazeta_core::{Error, Result, Var, Q};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FormJson {
    pub coeffs: BTreeMap<String, String>,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LinPow {
    pub form: FormJson,
    pub exp: i32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AtomJson {
    Of(FormJson),
    Value(String),
    Laurent(u32),
    Deriv { arg: FormJson, k: u32 },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AtomPow {
    pub atom: AtomJson,
    pub exp: i32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MonoJson {
    pub powers: BTreeMap<String, u32>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub scalar: String,
    pub lin: Vec<LinPow>,
    pub xi: Vec<AtomPow>,
    /// Exponent P of a factor e^P, as a polynomial.
    pub expfactor: Option<Vec<MonoJson>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ExprJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn q_in(s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational '{s}'")))
}

pub fn form_to_json(l: &LinForm) -> FormJson {
    FormJson {
        coeffs: l.coeffs().iter().map(|(v, c)| (v.to_string(), fmt_q(c))).collect(),
        constant: fmt_q(l.const_term()),
    }
}

pub fn form_from_json(f: &FormJson) -> Result<LinForm> {
    let coeffs = f.coeffs.iter().map(|(v, c)| Ok((Var::new(v.as_str()), q_in(c)?))).collect::<Result<Vec<_>>>()?;
    Ok(LinForm::from_parts(coeffs, q_in(&f.constant)?))
}

fn atom_to_json(a: &XiAtom) -> AtomJson {
    match a {
        XiAtom::Of(l) => AtomJson::Of(form_to_json(l)),
        XiAtom::Value(q) => AtomJson::Value(fmt_q(q)),
        XiAtom::Laurent(k) => AtomJson::Laurent(*k),
        XiAtom::Deriv(l, k) => AtomJson::Deriv { arg: form_to_json(l), k: *k },
    }
}

fn poly_to_json(p: &Poly) -> Vec<MonoJson> {
    p.terms()
        .iter()
        .map(|(m, c)| MonoJson { powers: m.iter().map(|(v, e)| (v.to_string(), *e)).collect(), coeff: fmt_q(c) })
        .collect()
}

fn poly_from_json(p: &[MonoJson]) -> Result<Poly> {
    let terms = p
        .iter()
        .map(|m| {
            let mono = m.powers.iter().map(|(v, e)| (Var::new(v.as_str()), *e)).collect();
            Ok((mono, q_in(&m.coeff)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_terms(terms))
}

pub fn expr_to_json(e: &SymExpr) -> ExprJson {
    ExprJson {
        vars: e.vars.iter().map(|v| v.to_string()).collect(),
        terms: e
            .terms
            .iter()
            .map(|t| TermJson {
                scalar: fmt_q(&t.scalar),
                lin: t.lin.iter().map(|(l, k)| LinPow { form: form_to_json(l), exp: *k }).collect(),
                xi: t.xi.iter().map(|(a, k)| AtomPow { atom: atom_to_json(a), exp: *k }).collect(),
                expfactor: t.exp.as_ref().map(poly_to_json),
            })
            .collect(),
        label: e.label.clone(),
    }
}

/// Rebuilds an expression; atoms are re-canonicalized, so canonical input
/// round-trips exactly.
pub fn expr_from_json(j: &ExprJson) -> Result<SymExpr> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for tj in &j.terms {
        let mut t = Term::scalar(q_in(&tj.scalar)?);
        for lp in &tj.lin {
            t.push_lin(&form_from_json(&lp.form)?, lp.exp)?;
        }
        for ap in &tj.xi {
            match &ap.atom {
                AtomJson::Of(f) => t.push_xi_of(form_from_json(f)?, ap.exp)?,
                AtomJson::Value(q) => t.push_xi_of(LinForm::constant(q_in(q)?), ap.exp)?,
                AtomJson::Laurent(k) => t.push_atom(XiAtom::Laurent(*k), ap.exp),
                AtomJson::Deriv { arg, k } => t.push_deriv(form_from_json(arg)?, *k, ap.exp)?,
            }
        }
        if let Some(p) = &tj.expfactor {
            t.push_exp(&poly_from_json(p)?);
        }
        terms.push(t);
    }
    let mut e = SymExpr::from_terms(terms, j.vars.iter().map(|v| Var::new(v.as_str())));
    e.label = j.label.clone();
    Ok(e)
}

pub fn expr_to_string(e: &SymExpr) -> String {
    serde_json::to_string_pretty(&expr_to_json(e)).expect("expression JSON serializes")
}

pub fn expr_from_str(s: &str) -> Result<SymExpr> {
    let j: ExprJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    expr_from_json(&j)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PoleJson {
    pub s: String,
    pub order: u32,
}

pub fn poles_json(r: &PoleReport) -> Vec<PoleJson> {
    r.poles.iter().map(|p| PoleJson { s: fmt_q(&p.at), order: p.order }).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PoleReportJson {
    pub poles: Vec<PoleJson>,
    pub candidates: Vec<String>,
    pub cancelled: Vec<String>,
}

pub fn pole_report_json(r: &PoleReport) -> PoleReportJson {
    PoleReportJson {
        poles: poles_json(r),
        candidates: r.candidates.iter().map(fmt_q).collect(),
        cancelled: r.cancelled.iter().map(fmt_q).collect(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FactorJson {
    pub factor: String,
    pub exp: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CandidateJson {
    pub c: String,
    pub residual: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RecordJson {
    pub i_factors: Vec<FactorJson>,
    pub j_factors: Vec<FactorJson>,
    pub c: Option<String>,
    pub candidates: Vec<CandidateJson>,
    /// v = a·s + b.
    pub rescaling: Option<(String, String)>,
    pub scalar: String,
}

pub fn record_json(r: &NormalizationRecord) -> RecordJson {
    RecordJson {
        i_factors: r.i_factors.iter().map(|(l, e)| FactorJson { factor: l.to_plain(), exp: *e }).collect(),
        j_factors: r.j_factors.iter().map(|(a, e)| FactorJson { factor: a.to_plain(), exp: *e }).collect(),
        c: r.c_constant.as_ref().map(fmt_q),
        candidates: r.candidates.iter().map(|(c, x)| CandidateJson { c: fmt_q(c), residual: *x }).collect(),
        rescaling: r.rescaling.as_ref().map(|(a, b)| (fmt_q(a), fmt_q(b))),
        scalar: fmt_q(&r.scalar),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ZeroJson {
    pub t: f64,
    pub absf: f64,
    pub multiplicity: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RectJson {
    pub sigma: [f64; 2],
    pub t: [f64; 2],
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BoxJson {
    pub rect: RectJson,
    pub winding: i64,
    pub poles: Vec<PoleJson>,
    pub online: u32,
    pub verdict: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ZetaReportJson {
    pub zeros: Vec<ZeroJson>,
    pub boxes: Vec<BoxJson>,
    pub fe_residual_max: f64,
    pub poles: Vec<PoleJson>,
    pub t_max: f64,
    pub step: f64,
    pub tol: f64,
    pub excluded: Vec<f64>,
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Discrepancy => "discrepancy",
        Verdict::Flagged => "flagged",
    }
}

pub fn box_json(b: &BoxCertificate) -> BoxJson {
    BoxJson {
        rect: RectJson { sigma: [b.rect.sigma.0, b.rect.sigma.1], t: [b.rect.t.0, b.rect.t.1] },
        winding: b.winding,
        poles: b.poles.iter().map(|(p, k)| PoleJson { s: fmt_q(p), order: *k }).collect(),
        online: b.online,
        verdict: verdict_str(b.verdict).into(),
    }
}

pub fn zeta_report_json(r: &ZetaReport) -> ZetaReportJson {
    ZetaReportJson {
        zeros: r.zeros.zeros.iter().map(|z| ZeroJson { t: z.t, absf: z.absf, multiplicity: z.multiplicity }).collect(),
        boxes: r.boxes.iter().map(box_json).collect(),
        fe_residual_max: r.fe_residual_max,
        poles: poles_json(&r.poles),
        t_max: r.t_max,
        step: r.zeros.step,
        tol: r.zeros.tol,
        excluded: r.zeros.excluded.clone(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct OracleJson {
    pub contour_value: [f64; 2],
    pub error_estimate: f64,
    pub samples: usize,
    pub radius: f64,
    pub anchor: BTreeMap<String, String>,
}

pub fn oracle_json(r: &OracleReport, anchor: &BTreeMap<Var, Q>) -> OracleJson {
    let (a, b) = r.value.to_f64();
    OracleJson {
        contour_value: [a, b],
        error_estimate: r.error_estimate,
        samples: r.samples,
        radius: r.radius,
        anchor: anchor.iter().map(|(v, q)| (v.to_string(), fmt_q(q))).collect(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct OracleCheckJson {
    pub label: String,
    pub anchor: BTreeMap<String, String>,
    pub symbolic: [f64; 2],
    pub contour_value: [f64; 2],
    pub error_estimate: f64,
    pub relative: f64,
    pub passed: bool,
}

pub fn oracle_check_json(c: &OracleCheck) -> OracleCheckJson {
    OracleCheckJson {
        label: c.label.clone(),
        anchor: c.anchor.iter().map(|(v, q)| (v.to_string(), fmt_q(q))).collect(),
        symbolic: [c.symbolic.0, c.symbolic.1],
        contour_value: [c.numeric.0, c.numeric.1],
        error_estimate: c.error_estimate,
        relative: c.relative,
        passed: c.passed(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalJson {
    pub value: [f64; 2],
    pub near_singular: bool,
    pub offending: Vec<String>,
}

pub fn eval_json(r: &EvalResult) -> EvalJson {
    let (a, b) = r.value.to_f64();
    EvalJson { value: [a, b], near_singular: r.near_singular, offending: r.offending.clone() }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RootSystemJson {
    pub group: String,
    pub cartan_type: String,
    pub rank: usize,
    pub convention: String,
    pub simple_roots: Vec<Vec<String>>,
    pub positive_roots: Vec<Vec<String>>,
    pub positive_coroots: Vec<Vec<String>>,
    pub rho: Vec<String>,
    /// ⟨ρ, α∨⟩ for each simple root.
    pub rho_pairings: Vec<String>,
    pub weyl_order: usize,
    /// Row-major matrices.
    pub weyl_matrices: Vec<Vec<String>>,
    pub weyl_words: Vec<Vec<usize>>,
}

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

pub fn root_system_json(group: &str, rs: &RootSystem) -> Result<RootSystemJson> {
    let w = weyl_group(rs, 100_000)?;
    Ok(RootSystemJson {
        group: group.into(),
        cartan_type: rs.name(),
        rank: rs.rank,
        convention: rs.convention.clone(),
        simple_roots: rs.simple.iter().map(|r| qs(r)).collect(),
        positive_roots: rs.positive.iter().map(|r| qs(r)).collect(),
        positive_coroots: rs.positive.iter().map(|r| qs(&coroot(r))).collect(),
        rho: qs(&rs.rho),
        rho_pairings: rs.simple.iter().map(|a| fmt_q(&parazeta_core::rootsys::dot(&rs.rho, &coroot(a)))).collect(),
        weyl_order: w.len(),
        weyl_matrices: w.iter().map(|e| qs(&e.matrix)).collect(),
        weyl_words: w.iter().map(|e| e.word.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use parazeta_core::symexpr::parse_expr;

    #[test]
    fn round_trip_with_every_atom_kind() {
        let e = parse_expr("1/2*xi(3*s-1)^2/(s-1) - xi(2)*xid(1,2*s+1)/(s*s) + a(1)*exp(3*s*x+y)").unwrap();
        let back = expr_from_str(&expr_to_string(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn rejects_bad_rationals() {
        let mut j = expr_to_json(&parse_expr("xi(s)").unwrap());
        j.terms[0].scalar = "1/0".into();
        assert!(expr_from_json(&j).is_err());
    }
}
