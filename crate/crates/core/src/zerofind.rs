//! Zeros on the critical line, argument-principle box counts and RH
//! reports for centered zetas.
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::normalize::{fe_residual, pole_report, sole_var, PoleReport, FE_TOL};
use crate::q::{to_f64, Q};
use crate::symexpr::SymExpr;
use crate::var::Var;
use crate::xinum::{eval_expr, Ctx, C};

/// Reality bound on the critical line, relative to 1 + |f|.
pub const REALITY_TOL: f64 = 1e-9;

/// Largest phase step accepted between neighbouring boundary samples.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Bisection depth allowed per boundary segment.
const MAX_DEPTH: u32 = 24;

/// Offset used to estimate zero multiplicities from |f(t*+2h)|/|f(t*+h)|.
const MULT_H: f64 = 1e-3;

/// t ↦ Re f(1/2 + it) for a centered zeta.
#[derive(Clone, Debug)]
pub struct RealRestriction<'a> {
    pub zeta: &'a SymExpr,
    pub var: Var,
}

/// Checks the FE with c = 1 at `fe_points` seeded points and conjugation
/// symmetry at two points on the line.
pub fn real_restriction<'a>(zeta: &'a SymExpr, ctx: &Ctx, fe_points: usize, seed: u64) -> Result<RealRestriction<'a>> {
    let var = sole_var(zeta)?;
    let r = fe_residual(zeta, &Q::from_integer(1.into()), fe_points, ctx, seed)?;
    if r > FE_TOL {
        return Err(Error::NotCentered(alloc::format!("FE residual {r:.2e} for s ↔ 1−s")));
    }
    let rr = RealRestriction { zeta, var };
    for t in [0.37, 2.71] {
        rr.at(t, ctx)?;
    }
    Ok(rr)
}

impl RealRestriction<'_> {
    /// f at σ + it.
    pub fn eval(&self, sigma: f64, t: f64, ctx: &Ctx) -> Result<(C, bool)> {
        let s = C::from_f64(sigma, t, ctx);
        let r = eval_expr(self.zeta, &BTreeMap::from([(self.var.clone(), s)]), ctx)?;
        Ok((r.value, r.near_singular))
    }

    /// Re f(1/2 + it), `None` near a pole.
    pub fn at(&self, t: f64, ctx: &Ctx) -> Result<Option<f64>> {
        let (v, near) = match self.eval(0.5, t, ctx) {
            Ok(x) => x,
            Err(Error::Pole(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if near {
            return Ok(None);
        }
        let (re, im) = v.to_f64();
        if libm::fabs(im) > REALITY_TOL * (1.0 + libm::hypot(re, im)) {
            return Err(Error::NotCentered(alloc::format!("Im f(1/2+{t}i) = {im:.3e}")));
        }
        Ok(Some(re))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Zero {
    pub t: f64,
    /// |f(1/2 + it)| at the refined point.
    pub absf: f64,
    /// Estimated order; `multiple` is set when it exceeds one.
    pub multiplicity: u32,
    pub multiple: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub zeros: Vec<Zero>,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub tol: f64,
    /// Grid points skipped for pole proximity.
    pub excluded: Vec<f64>,
    /// (t, Re f(1/2+it)) on the scan grid, for plotting.
    pub grid: Vec<(f64, f64)>,
}

impl ZeroList {
    /// Zeros with t strictly inside (a, b), counted with multiplicity.
    pub fn count_in(&self, a: f64, b: f64) -> u32 {
        self.zeros.iter().filter(|z| z.t > a && z.t < b).map(|z| z.multiplicity).sum()
    }
}

fn bisect(rr: &RealRestriction, mut a: f64, mut fa: f64, mut b: f64, tol: f64, ctx: &Ctx) -> Result<f64> {
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = match rr.at(m, ctx)? {
            Some(v) => v,
            None => break,
        };
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimizes |Re f| on [a, b] by golden section.
fn golden_min(rr: &RealRestriction, mut a: f64, mut b: f64, tol: f64, ctx: &Ctx) -> Result<(f64, f64)> {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let val = |t: f64| -> Result<f64> { Ok(rr.at(t, ctx)?.map(libm::fabs).unwrap_or(f64::INFINITY)) };
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (val(x1)?, val(x2)?);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = val(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = val(x2)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, val(t)?))
}

/// Order of the zero at t from the growth of |f| on both sides.
fn multiplicity(rr: &RealRestriction, t: f64, ctx: &Ctx) -> Result<u32> {
    let mut logs = Vec::new();
    for sgn in [1.0, -1.0] {
        let a = rr.at(t + sgn * MULT_H, ctx)?;
        let b = rr.at(t + sgn * 2.0 * MULT_H, ctx)?;
        if let (Some(a), Some(b)) = (a, b) {
            if a != 0.0 && b != 0.0 {
                logs.push(libm::log2(libm::fabs(b) / libm::fabs(a)));
            }
        }
    }
    if logs.is_empty() {
        return Ok(1);
    }
    let m = logs.iter().sum::<f64>() / logs.len() as f64;
    Ok(libm::round(m).max(1.0) as u32)
}

fn push_zero(out: &mut Vec<Zero>, rr: &RealRestriction, t: f64, ctx: &Ctx) -> Result<()> {
    let absf = rr.at(t, ctx)?.map(libm::fabs).unwrap_or(f64::NAN);
    let m = multiplicity(rr, t, ctx)?;
    out.push(Zero { t, absf, multiplicity: m, multiple: m > 1 });
    Ok(())
}

/// Relative size below which a local minimum of |Re f| counts as a zero
/// without a sign change.
const TOUCH_REL: f64 = 1e-12;

/// Sign changes of Re f(1/2+it) on the grid t_min + k·step, bisected to
/// `tol`. Local minima without a sign change are refined and kept when
/// |f| falls below 1e−12 of its neighbours (even-order zeros).
pub fn scan_zeros(rr: &RealRestriction, t_min: f64, t_max: f64, step: f64, tol: f64, ctx: &Ctx) -> Result<ZeroList> {
    let n = libm::ceil((t_max - t_min) / step) as usize;
    let mut grid: Vec<(f64, Option<f64>)> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = (t_min + k as f64 * step).min(t_max);
        grid.push((t, rr.at(t, ctx)?));
    }
    let excluded = grid.iter().filter(|(_, v)| v.is_none()).map(|(t, _)| *t).collect();
    let mut zeros = Vec::new();
    // The restriction is even in t, so t = 0 is a stationary point.
    if t_min == 0.0 {
        if let (Some(f0), Some(&(_, Some(f1)))) = (grid[0].1, grid.get(1)) {
            if libm::fabs(f0) <= TOUCH_REL * libm::fabs(f1) {
                push_zero(&mut zeros, rr, 0.0, ctx)?;
            }
        }
    }
    for k in 0..n {
        let (a, fa) = grid[k];
        let (b, fb) = grid[k + 1];
        let (Some(fa), Some(fb)) = (fa, fb) else { continue };
        if fa == 0.0 && k > 0 {
            push_zero(&mut zeros, rr, a, ctx)?;
            continue;
        }
        if fa != 0.0 && fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            let t = bisect(rr, a, fa, b, tol, ctx)?;
            push_zero(&mut zeros, rr, t, ctx)?;
            continue;
        }
        // Touching zero: interior local minimum of |f| with equal signs.
        if k == 0 {
            continue;
        }
        let (p, fp) = grid[k - 1];
        let Some(fp) = fp else { continue };
        if (fp > 0.0) == (fa > 0.0) && libm::fabs(fa) < libm::fabs(fp) && libm::fabs(fa) < libm::fabs(fb) {
            let (t, v) = golden_min(rr, p, b, tol, ctx)?;
            if v <= TOUCH_REL * libm::fabs(fp).max(libm::fabs(fb)) {
                push_zero(&mut zeros, rr, t, ctx)?;
            }
        }
    }
    zeros.sort_by(|x, y| x.t.total_cmp(&y.t));
    zeros.dedup_by(|x, y| libm::fabs(x.t - y.t) < 10.0 * tol);
    let grid = grid.into_iter().filter_map(|(t, v)| v.map(|v| (t, v))).collect();
    Ok(ZeroList { zeros, t_min, t_max, step, tol, excluded, grid })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub sigma: (f64, f64),
    pub t: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Discrepancy,
    /// Discrepancy inside the box where exceptional zeros are tolerated.
    Flagged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCertificate {
    pub rect: Rect,
    /// Zeros minus poles enclosed, from the argument principle.
    pub winding: i64,
    /// Enclosed poles with orders, from the exact pole report.
    pub poles: Vec<(Q, u32)>,
    /// Zeros on the line inside the box, with multiplicity.
    pub online: u32,
    pub verdict: Verdict,
    /// Boundary evaluations used.
    pub evaluations: usize,
}

impl BoxCertificate {
    pub fn pole_total(&self) -> i64 {
        self.poles.iter().map(|(_, k)| *k as i64).sum()
    }

    /// winding + poles − on-line zeros; zero means no zero off the line.
    pub fn excess(&self) -> i64 {
        self.winding + self.pole_total() - self.online as i64
    }
}

fn direction(v: &C) -> Option<(f64, f64)> {
    let (a, b) = v.to_f64_scaled();
    let r = libm::hypot(a, b);
    (r > 0.0).then(|| (a / r, b / r))
}

fn phase_step(a: (f64, f64), b: (f64, f64)) -> f64 {
    // arg(b · conj a)
    libm::atan2(b.1 * a.0 - b.0 * a.1, b.0 * a.0 + b.1 * a.1)
}

struct Tracker<'a, 'b> {
    rr: &'a RealRestriction<'b>,
    ctx: &'a Ctx,
    evals: usize,
}

impl Tracker<'_, '_> {
    fn dir(&mut self, p: (f64, f64)) -> Result<(f64, f64)> {
        self.evals += 1;
        let (v, _) = self.rr.eval(p.0, p.1, self.ctx).map_err(|e| match e {
            Error::Pole(f) => Error::Indeterminate(alloc::format!("boundary hits a pole of {f}")),
            e => e,
        })?;
        direction(&v).ok_or_else(|| Error::Indeterminate(alloc::format!("f vanishes at {}+{}i", p.0, p.1)))
    }

    fn segment(&mut self, a: (f64, f64), da: (f64, f64), b: (f64, f64), db: (f64, f64), depth: u32) -> Result<f64> {
        let d = phase_step(da, db);
        if libm::fabs(d) < MAX_PHASE_STEP {
            return Ok(d);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Indeterminate(alloc::format!(
                "phase step {d:.2} near {:.6}+{:.6}i after {MAX_DEPTH} subdivisions",
                a.0, a.1
            )));
        }
        let m = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        let dm = self.dir(m)?;
        Ok(self.segment(a, da, m, dm, depth + 1)? + self.segment(m, dm, b, db, depth + 1)?)
    }

    /// Total phase change along a closed polygon, first sampled every `h`.
    fn around(&mut self, corners: &[(f64, f64)], h: f64) -> Result<f64> {
        let mut total = 0.0;
        for i in 0..corners.len() {
            let (a, b) = (corners[i], corners[(i + 1) % corners.len()]);
            let len = libm::hypot(b.0 - a.0, b.1 - a.1);
            let n = libm::ceil(len / h).max(1.0) as usize;
            let pts: Vec<(f64, f64)> = (0..=n)
                .map(|k| {
                    let s = k as f64 / n as f64;
                    (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1))
                })
                .collect();
            let mut prev = self.dir(pts[0])?;
            for w in pts.windows(2) {
                let next = self.dir(w[1])?;
                total += self.segment(w[0], prev, w[1], next, 0)?;
                prev = next;
            }
        }
        Ok(total)
    }
}

/// Margin kept between box edges and known poles or on-line zeros.
pub const EDGE_MARGIN: f64 = 1e-2;

/// Moves edges off known poles (real) and on-line zeros.
pub fn nudge(rect: Rect, poles: &PoleReport, zeros: &ZeroList) -> Rect {
    let mut r = rect;
    let ps: Vec<f64> = poles.poles.iter().map(|p| to_f64(&p.at)).collect();
    for _ in 0..8 {
        let mut moved = false;
        for p in &ps {
            if libm::fabs(r.sigma.0 - p) < EDGE_MARGIN {
                r.sigma.0 = p - 2.0 * EDGE_MARGIN;
                moved = true;
            }
            if libm::fabs(r.sigma.1 - p) < EDGE_MARGIN {
                r.sigma.1 = p + 2.0 * EDGE_MARGIN;
                moved = true;
            }
        }
        for edge in [&mut r.t.0, &mut r.t.1] {
            let hit = |e: f64| {
                let zero = zeros.zeros.iter().any(|z| libm::fabs(z.t - e) < EDGE_MARGIN);
                let pole = libm::fabs(e) < EDGE_MARGIN && ps.iter().any(|p| *p > r.sigma.0 && *p < r.sigma.1);
                zero || pole
            };
            if hit(*edge) {
                *edge += if *edge <= 0.0 { -2.0 } else { 2.0 } * EDGE_MARGIN;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    r
}

/// Argument-principle count on the boundary of `rect` (auto-nudged), with
/// exact pole corrections and the on-line count from `zeros`.
pub fn count_zeros_box(
    rr: &RealRestriction,
    rect: Rect,
    poles: &PoleReport,
    zeros: &ZeroList,
    ctx: &Ctx,
) -> Result<BoxCertificate> {
    let rect = nudge(rect, poles, zeros);
    let (s0, s1) = rect.sigma;
    let (t0, t1) = rect.t;
    let corners = [(s0, t0), (s1, t0), (s1, t1), (s0, t1)];
    let mut tr = Tracker { rr, ctx, evals: 0 };
    let total = tr.around(&corners, 0.05)?;
    let w = total / (2.0 * PI);
    let winding = libm::round(w);
    if libm::fabs(w - winding) > 0.1 {
        return Err(Error::Indeterminate(alloc::format!("winding {w:.3} is not near an integer")));
    }
    // Poles are real; t0 < 0 < t1 encloses those between the σ edges.
    let poles: Vec<(Q, u32)> = if t0 < 0.0 && t1 > 0.0 {
        poles
            .poles
            .iter()
            .filter(|p| {
                let x = to_f64(&p.at);
                x > s0 && x < s1
            })
            .map(|p| (p.at.clone(), p.order))
            .collect()
    } else {
        Vec::new()
    };
    let online = zeros.count_in(t0, t1) + if t0 < 0.0 { zeros.count_in(t0, 0.0) } else { 0 };
    let mut cert = BoxCertificate {
        rect,
        winding: winding as i64,
        poles,
        online,
        verdict: Verdict::Consistent,
        evaluations: tr.evals,
    };
    if cert.excess() != 0 {
        cert.verdict = Verdict::Discrepancy;
    }
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct RhOptions {
    pub step: f64,
    pub tol: f64,
    /// Target box height; edges are nudged off zeros.
    pub box_height: f64,
    /// Discrepancies in boxes with t1 at most this are flagged, not failed.
    pub central: Option<f64>,
    pub fe_points: usize,
    pub seed: u64,
}

impl Default for RhOptions {
    fn default() -> Self {
        RhOptions { step: 0.05, tol: 1e-10, box_height: 5.0, central: None, fe_points: 100, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct ZetaReport {
    pub zeros: ZeroList,
    pub boxes: Vec<BoxCertificate>,
    pub fe_residual_max: f64,
    pub poles: PoleReport,
    pub t_max: f64,
}

impl ZetaReport {
    /// No box reports an unflagged discrepancy.
    pub fn consistent(&self) -> bool {
        self.boxes.iter().all(|b| b.verdict != Verdict::Discrepancy)
    }

    pub fn flagged(&self) -> Vec<&BoxCertificate> {
        self.boxes.iter().filter(|b| b.verdict == Verdict::Flagged).collect()
    }
}

/// σ-range of the tiling.
pub const STRIP: (f64, f64) = (-0.2, 1.2);

/// Box tiling of STRIP × [0, t_max]; the first box starts just below the
/// real axis so that real poles are enclosed rather than on the boundary.
pub fn plan_boxes(t_max: f64, opts: &RhOptions) -> Vec<Rect> {
    let mut edges = alloc::vec![-2.0 * EDGE_MARGIN];
    if let Some(c) = opts.central {
        if c < t_max {
            edges.push(c);
        }
    }
    let mut t = opts.box_height;
    while t < t_max - 1e-9 {
        if edges.last().is_some_and(|e| t > *e + 0.5) {
            edges.push(t);
        }
        t += opts.box_height;
    }
    edges.push(t_max);
    edges.windows(2).map(|w| Rect { sigma: STRIP, t: (w[0], w[1]) }).collect()
}

/// Applies the central-box policy to a certificate.
pub fn apply_policy(mut cert: BoxCertificate, opts: &RhOptions) -> BoxCertificate {
    if cert.verdict == Verdict::Discrepancy && opts.central.is_some_and(|c| cert.rect.t.1 <= c + 2.0 * EDGE_MARGIN) {
        cert.verdict = Verdict::Flagged;
    }
    cert
}

/// Zeros on [0, t_max + 1], box certificates tiling STRIP × [0, t_max], the
/// exact pole report and the FE residual.
pub fn rh_report(zeta: &SymExpr, t_max: f64, opts: &RhOptions, ctx: &Ctx) -> Result<ZetaReport> {
    let rr = real_restriction(zeta, ctx, 10, opts.seed)?;
    let poles = pole_report(zeta)?;
    let zeros = scan_zeros(&rr, 0.0, t_max + 1.0, opts.step, opts.tol, ctx)?;
    let mut boxes = Vec::new();
    let mut prev_top: Option<f64> = None;
    for mut rect in plan_boxes(t_max, opts) {
        // Keep the tiling gap-free after nudging.
        if let Some(t) = prev_top {
            rect.t.0 = t;
        }
        let cert = apply_policy(count_zeros_box(&rr, rect, &poles, &zeros, ctx)?, opts);
        prev_top = Some(cert.rect.t.1);
        boxes.push(cert);
    }
    let fe_residual_max = fe_residual(zeta, &Q::from_integer(1.into()), opts.fe_points, ctx, opts.seed)?;
    Ok(ZetaReport { zeros, boxes, fe_residual_max, poles, t_max })
}

/// Human-readable one-line summary of a certificate.
pub fn describe_box(b: &BoxCertificate) -> String {
    let poles: Vec<String> = b.poles.iter().map(|(p, k)| alloc::format!("{}^{k}", crate::q::fmt_q(p))).collect();
    alloc::format!(
        "[{:.2},{:.2}]x[{:.3},{:.3}] winding {} poles [{}] online {} -> {:?}",
        b.rect.sigma.0,
        b.rect.sigma.1,
        b.rect.t.0,
        b.rect.t.1,
        b.winding,
        poles.join(","),
        b.online,
        b.verdict
    )
}

/// |q| as f64, for callers that sort pole lists.
pub fn pole_abs(q: &Q) -> f64 {
    to_f64(&q.abs())
}
