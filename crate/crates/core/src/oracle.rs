//! Numeric contour residues, used to cross-check the symbolic residue.
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::q::{qf, to_f64, Q};
use crate::residue::{hyperplanes_for, residue, Hyperplane};
use crate::rootsys::{ParabolicDescriptor, RootSystem};
use crate::symexpr::{LinForm, SymExpr};
use crate::var::Var;
use crate::xinum::{eval_expr, Ctx, C, RM};

/// Largest error estimate accepted.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct OracleReport {
    /// (1/2πi)∮ with all samples.
    pub value: C,
    /// Same integral with every other sample.
    pub coarse: C,
    pub error_estimate: f64,
    pub samples: usize,
    pub radius: f64,
}

fn lin_c(l: &LinForm, pt: &BTreeMap<Var, C>, c: &Ctx) -> Result<C> {
    let mut acc = C::real(c.q(l.const_term()), c);
    for (v, k) in l.coeffs() {
        let x = pt.get(v).ok_or_else(|| Error::Unsupported(alloc::format!("no value for {v}")))?;
        acc = acc.add(&x.scale(&c.q(k), c), c);
    }
    Ok(acc)
}

/// (1/2πi)∮ expr du on |u| = radius, where u is the value of `h.restricted`
/// and the remaining variables sit at `anchor`. `samples` nodes; the error
/// estimate compares with the rule on every other node.
pub fn numeric_residue_oracle(
    expr: &SymExpr,
    h: &Hyperplane,
    anchor: &BTreeMap<Var, Q>,
    radius: f64,
    samples: usize,
    c: &Ctx,
) -> Result<OracleReport> {
    if samples < 4 || samples % 2 != 0 {
        return Err(Error::Unsupported("sample count must be even and at least 4".into()));
    }
    let k = h.restricted.coeff(&h.pivot);
    let mut pt: BTreeMap<Var, C> = anchor.iter().map(|(v, q)| (v.clone(), C::real(c.q(q), c))).collect();
    let base = lin_c(&h.solved, &pt, c)?;
    let inv = c.q(&k.recip());
    let two_pi = c.pi().mul(&c.int(2), c.p, RM);
    let n = samples as i64;
    let mut sums = [C::zero(c), C::zero(c)];
    for j in 0..samples {
        // θ_j = 2πj/M; u = r e^{iθ}, du = iu dθ, so the integral is mean(f·u).
        let theta = two_pi.mul(&c.int(j as i64), c.p, RM).div(&c.int(n), c.p, RM);
        let u = C::new(c.int(0), theta).exp(c).scale(&c.real(radius), c);
        pt.insert(h.pivot.clone(), base.add(&u.scale(&inv, c), c));
        let f = eval_expr(expr, &pt, c)?;
        let v = f.value.mul(&u, c);
        sums[j % 2] = sums[j % 2].add(&v, c);
    }
    let half = c.int(n / 2);
    let coarse = C::new(sums[0].re.div(&half, c.p, RM), sums[0].im.div(&half, c.p, RM));
    let all = sums[0].add(&sums[1], c);
    let value = C::new(all.re.div(&c.int(n), c.p, RM), all.im.div(&c.int(n), c.p, RM));
    let err = value.sub(&coarse, c).abs_f64();
    let scale = value.abs_f64().max(1e-300);
    if err > ORACLE_TOL * scale.max(1.0) {
        let (a, b) = (value.to_f64(), coarse.to_f64());
        return Err(Error::NoConvergence(alloc::format!(
            "contour estimates {:.6e}{:+.6e}i and {:.6e}{:+.6e}i differ by {err:.1e}",
            a.0, a.1, b.0, b.1
        )));
    }
    Ok(OracleReport { value, coarse, error_estimate: err, samples, radius })
}

/// For every factor that can be singular, the pair (value at the anchor
/// with u = 0, coefficient of u) of the relevant linear argument, together
/// with the singular values of that argument.
/// The flag marks arguments that depend on the anchor (other loci).
fn singular_args(expr: &SymExpr, h: &Hyperplane, anchor: &BTreeMap<Var, Q>) -> Option<Vec<(Q, Q, bool, &'static [i64])>> {
    let u = Var::new("__u");
    let k = h.restricted.coeff(&h.pivot);
    let img = LinForm::term(u.clone(), k.recip()).add(&h.solved);
    let sub = BTreeMap::from([(h.pivot.clone(), img)]);
    let mut out = Vec::new();
    let mut push = |l: &LinForm, at: &'static [i64]| -> Option<()> {
        let m = l.substitute(&sub);
        let a = m.coeff(&u);
        let rest = m.without(&u);
        let b = rest.eval_q(anchor)?;
        out.push((b, a, !rest.is_constant(), at));
        Some(())
    };
    for t in &expr.terms {
        for (l, e) in &t.lin {
            if *e < 0 {
                push(l, &[0])?;
            }
        }
        for a in t.xi.keys() {
            if let Some(l) = a.arg() {
                push(&l, &[0, 1])?;
            }
        }
    }
    Some(out)
}

/// Seeded anchor off every other singular locus by at least 1/10, with the
/// largest safe radius (a third of the distance to the nearest other pole
/// in u, capped at 1/4). `None` if the draw fails.
pub fn pick_anchor(expr: &SymExpr, h: &Hyperplane, rng: &mut ChaCha8Rng) -> Option<(BTreeMap<Var, Q>, f64)> {
    let mut vars: Vec<Var> = expr.free_vars().into_iter().filter(|v| *v != h.pivot).collect();
    vars.sort();
    let min = qf(1, 10);
    'draw: for _ in 0..200 {
        let anchor: BTreeMap<Var, Q> = vars
            .iter()
            .map(|v| {
                let d = rng.gen_range(1..=97i64);
                (v.clone(), qf(rng.gen_range(-3 * d..=3 * d), d))
            })
            .collect();
        let mut nearest = f64::INFINITY;
        for (b, a, moving, at) in singular_args(expr, h, &anchor)? {
            for &p in at {
                let off = &b - Q::from_integer(p.into());
                if a.is_zero() {
                    if off.abs() < min {
                        continue 'draw;
                    }
                } else {
                    let u = -(&off / &a);
                    if u.is_zero() && !moving {
                        continue;
                    }
                    if u.abs() < min {
                        continue 'draw;
                    }
                    nearest = nearest.min(to_f64(&u.abs()));
                }
            }
        }
        return Some((anchor, (nearest / 3.0).min(0.25)));
    }
    None
}

/// One oracle comparison.
#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub label: String,
    pub anchor: Vec<(Var, Q)>,
    pub symbolic: (f64, f64),
    pub numeric: (f64, f64),
    pub error_estimate: f64,
    pub relative: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.relative <= ORACLE_TOL
    }
}

/// Compares the symbolic residue of `expr` along `h` with the contour
/// integral at `anchors` seeded anchors.
pub fn check_residue(
    expr: &SymExpr,
    h: &Hyperplane,
    anchors: usize,
    samples: usize,
    c: &Ctx,
    seed: u64,
    label: &str,
) -> Result<Vec<OracleCheck>> {
    let sym = residue(expr, h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..anchors {
        let (anchor, r) = pick_anchor(expr, h, &mut rng)
            .ok_or_else(|| Error::NoConvergence("no admissible anchor found".into()))?;
        let num = numeric_residue_oracle(expr, h, &anchor, r, samples, c)?;
        let pt = anchor.iter().map(|(v, q)| (v.clone(), C::real(c.q(q), c))).collect();
        let s = eval_expr(&sym, &pt, c)?.value;
        let rel = s.sub(&num.value, c).abs_f64() / s.abs_f64().max(num.value.abs_f64()).max(1e-300);
        out.push(OracleCheck {
            label: label.into(),
            anchor: anchor.into_iter().collect(),
            symbolic: s.to_f64(),
            numeric: num.value.to_f64(),
            error_estimate: num.error_estimate,
            relative: rel,
        });
    }
    Ok(out)
}

/// Oracle checks for every residue step of `G/P`: step k compares the
/// symbolic residue of step k−1's symbolic output with its contour
/// integral, `per_step` anchors each.
pub fn check_iterated(
    period: &SymExpr,
    rs: &RootSystem,
    p: &ParabolicDescriptor,
    per_step: usize,
    samples: usize,
    c: &Ctx,
    seed: u64,
) -> Result<Vec<OracleCheck>> {
    let mut e = period.clone();
    let mut out = Vec::new();
    for (i, h) in hyperplanes_for(rs, p)?.iter().enumerate() {
        let label = alloc::format!("{}/{} step {}", rs.name(), p.name, i + 1);
        out.extend(check_residue(&e, h, per_step, samples, c, seed.wrapping_add(i as u64), &label)?);
        e = residue(&e, h)?;
    }
    Ok(out)
}
