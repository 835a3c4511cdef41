//! Rayon scheduling. Numeric contexts are not `Sync`, so every worker
//! builds its own.
use parazeta_core::normalize::{fe_residual, pole_report};
use parazeta_core::oracle::{check_residue, OracleCheck};
use parazeta_core::pipeline::{run, PipelineRun, RunOptions};
use parazeta_core::residue::{hyperplanes_for, residue};
use parazeta_core::rootsys::{ParabolicDescriptor, RootSystem};
use parazeta_core::symexpr::SymExpr;
use parazeta_core::xinum::Ctx;
use parazeta_core::zerofind::{
    apply_policy, count_zeros_box, nudge, plan_boxes, real_restriction, scan_zeros, RhOptions, ZeroList, ZetaReport,
};
use parazeta_core::{Error, Result, Q};
use rayon::prelude::*;

/// A pool with `jobs` threads (0: one per core).
pub fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Internal(e.to_string()))
}

/// Grid steps per scan chunk.
const CHUNK_STEPS: usize = 40;

/// `scan_zeros` over [t_min, t_max] split into chunks that overlap by one
/// grid step, so sign changes and touching zeros at chunk edges are seen.
pub fn scan_parallel(zeta: &SymExpr, t_min: f64, t_max: f64, step: f64, tol: f64, digits: u32, seed: u64) -> Result<ZeroList> {
    let rr = real_restriction(zeta, &Ctx::with_digits(digits), 10, seed)?;
    let n = ((t_max - t_min) / step).ceil() as usize;
    let starts: Vec<usize> = (0..n).step_by(CHUNK_STEPS).collect();
    let parts = starts
        .par_iter()
        .map_init(
            || Ctx::with_digits(digits),
            |ctx, &k0| {
                let lo = k0.saturating_sub(1);
                let hi = (k0 + CHUNK_STEPS).min(n);
                let a = t_min + lo as f64 * step;
                let b = (t_min + hi as f64 * step).min(t_max);
                scan_zeros(&rr, a, b, step, tol, ctx)
            },
        )
        .collect::<Result<Vec<_>>>()?;
    let mut out = ZeroList { zeros: vec![], t_min, t_max, step, tol, excluded: vec![], grid: vec![] };
    for p in parts {
        out.zeros.extend(p.zeros);
        out.excluded.extend(p.excluded);
        out.grid.extend(p.grid);
    }
    out.zeros.sort_by(|x, y| x.t.total_cmp(&y.t));
    out.zeros.dedup_by(|x, y| (x.t - y.t).abs() < 10.0 * tol);
    out.excluded.sort_by(f64::total_cmp);
    out.excluded.dedup_by(|x, y| (*x - *y).abs() < step / 4.0);
    out.grid.sort_by(|x, y| x.0.total_cmp(&y.0));
    out.grid.dedup_by(|x, y| (x.0 - y.0).abs() < step / 4.0);
    Ok(out)
}

/// Same result as the sequential `rh_report`, with the zero scan and the
/// box contours spread over the current pool.
pub fn rh_report_parallel(zeta: &SymExpr, t_max: f64, opts: &RhOptions, digits: u32) -> Result<ZetaReport> {
    let ctx = Ctx::with_digits(digits);
    let rr = real_restriction(zeta, &ctx, 10, opts.seed)?;
    let poles = pole_report(zeta)?;
    let zeros = scan_parallel(zeta, 0.0, t_max + 1.0, opts.step, opts.tol, digits, opts.seed)?;
    // Nudging is cheap and chains box edges, so it stays sequential.
    let mut rects = Vec::new();
    let mut prev_top: Option<f64> = None;
    for mut rect in plan_boxes(t_max, opts) {
        if let Some(t) = prev_top {
            rect.t.0 = t;
        }
        let r = nudge(rect, &poles, &zeros);
        prev_top = Some(r.t.1);
        rects.push(r);
    }
    let boxes = rects
        .par_iter()
        .map_init(
            || Ctx::with_digits(digits),
            |ctx, rect| count_zeros_box(&rr, *rect, &poles, &zeros, ctx).map(|c| apply_policy(c, opts)),
        )
        .collect::<Result<Vec<_>>>()?;
    let fe_residual_max = fe_residual(zeta, &Q::from_integer(1.into()), opts.fe_points, &ctx, opts.seed)?;
    Ok(ZetaReport { zeros, boxes, fe_residual_max, poles, t_max })
}

/// Stepwise oracle checks for one parabolic, steps in parallel. Seeds
/// match `check_iterated`.
pub fn oracle_parallel(
    period: &SymExpr,
    rs: &RootSystem,
    p: &ParabolicDescriptor,
    per_step: usize,
    samples: usize,
    digits: u32,
    seed: u64,
) -> Result<Vec<OracleCheck>> {
    let mut stages = Vec::new();
    let mut e = period.clone();
    for h in hyperplanes_for(rs, p)? {
        let next = residue(&e, &h)?;
        stages.push((e, h));
        e = next;
    }
    let per: Vec<Vec<OracleCheck>> = stages
        .par_iter()
        .enumerate()
        .map_init(
            || Ctx::with_digits(digits),
            |ctx, (i, (e, h))| {
                let label = format!("{}/{} step {}", rs.name(), p.name, i + 1);
                check_residue(e, h, per_step, samples, ctx, seed.wrapping_add(i as u64), &label)
            },
        )
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// Independent pipeline runs, in input order.
pub fn run_many(pairs: &[(&str, &str)], digits: u32, opts: &RunOptions) -> Vec<Result<PipelineRun>> {
    pairs.par_iter().map_init(|| Ctx::with_digits(digits), |ctx, (g, p)| run(g, p, ctx, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use parazeta_core::symexpr::parse_expr;
    use parazeta_core::zerofind::rh_report;

    fn sl2() -> SymExpr {
        parse_expr("xi(2*s)/(s-1) - xi(2*s-1)/s").unwrap()
    }

    #[test]
    fn chunked_scan_matches_sequential() {
        let z = sl2();
        let ctx = Ctx::with_digits(20);
        let rr = real_restriction(&z, &ctx, 10, 1).unwrap();
        let seq = scan_zeros(&rr, 0.0, 12.0, 0.05, 1e-10, &ctx).unwrap();
        let par = pool(3).unwrap().install(|| scan_parallel(&z, 0.0, 12.0, 0.05, 1e-10, 20, 1)).unwrap();
        assert_eq!(seq.zeros.len(), par.zeros.len());
        for (a, b) in seq.zeros.iter().zip(&par.zeros) {
            assert!((a.t - b.t).abs() < 1e-9);
        }
        assert_eq!(seq.grid.len(), par.grid.len());
    }

    #[test]
    fn parallel_report_matches_sequential() {
        let z = sl2();
        let opts = RhOptions { fe_points: 10, ..RhOptions::default() };
        let seq = rh_report(&z, 12.0, &opts, &Ctx::with_digits(20)).unwrap();
        let par = pool(2).unwrap().install(|| rh_report_parallel(&z, 12.0, &opts, 20)).unwrap();
        assert_eq!(seq.boxes.len(), par.boxes.len());
        for (a, b) in seq.boxes.iter().zip(&par.boxes) {
            assert_eq!((a.winding, a.online, a.verdict), (b.winding, b.online, b.verdict));
            assert_eq!(a.rect, b.rect);
        }
        assert!(par.consistent());
    }
}
