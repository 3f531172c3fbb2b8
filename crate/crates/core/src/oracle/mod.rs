//! Numeric cross-check of the obstruction: the number of special points of
//! a small generic deformation `ω + λℓ` on the smooth part of `X` near the
//! origin, each counted once because they are non-degenerate.
//!
//! Special points are found as solutions of a square Lagrange-multiplier
//! system by multistart Newton iteration. This is an empirical check, not a
//! certificate: stability across independent deformations and charts stands
//! in for completeness.

mod lagrange;
mod numeric;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::germs::{FormCollection, GermError, VarietyGerm};
use crate::obstruction::{chern_obstruction, ObstructionError, ObstructionReport, TrialConfig};

pub use lagrange::{numeric_collection, LagrangeSystem, NumericForm};
pub use numeric::ComplexPoly;

/// Number of independent deformations whose counts must agree.
pub const DEFORMATIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub lambda_magnitude: f64,
    pub ball_radius: f64,
    /// Newton starts per run; `None` means 50 times the Bézout bound.
    pub starts: Option<usize>,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub dedup_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            lambda_magnitude: 1e-2,
            ball_radius: 0.5,
            starts: None,
            newton_tol: 1e-12,
            max_newton_iters: 100,
            dedup_tol: 1e-8,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.dedup_tol.partial_cmp(&self.newton_tol) != Some(Ordering::Greater) {
            return Err(OracleError::Config("dedup tolerance must exceed Newton tolerance"));
        }
        if !(self.lambda_magnitude > 0.0 && self.lambda_magnitude < self.ball_radius) {
            return Err(OracleError::Config("need 0 < lambda magnitude < ball radius"));
        }
        if self.max_newton_iters == 0 || self.starts == Some(0) {
            return Err(OracleError::Config("Newton iterations and starts must be positive"));
        }
        Ok(())
    }
}

/// Minimum singular value of the equation Jacobian for a point to count as
/// a smooth point of `X`.
const SMOOTH_TOL: f64 = 1e-10;
/// Largest condition number of the system Jacobian at a non-degenerate
/// solution.
const MAX_CONDITION: f64 = 1e10;
/// Singular-value threshold for numeric rank, relative to the largest
/// singular value but never below an absolute floor, so that a vanishing
/// matrix has rank zero.
const RANK_TOL: f64 = 1e-8;
const START_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoint {
    /// Coordinates as `(re, im)` pairs.
    pub x: Vec<(f64, f64)>,
    pub residual: f64,
    pub condition: f64,
    /// Numeric rank of each block's degeneracy matrix at the point.
    pub block_ranks: Vec<usize>,
    #[serde(skip)]
    pub solution: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    pub out_of_ball: usize,
    pub singular_locus: usize,
    pub degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub count: usize,
    /// Accepted points of the first deformation.
    pub points: Vec<SpecialPoint>,
    pub rejected: Rejections,
    pub deformations_agreeing: usize,
    pub charts_agreeing: usize,
    pub starts: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Shape(#[from] GermError),
    #[error("count unstable across deformations: {counts:?}")]
    Unstable { counts: Vec<usize> },
    #[error("suspected multiplicity collision: accepted points {distance:e} apart")]
    Collision { distance: f64 },
    #[error("invalid oracle configuration: {0}")]
    Config(&'static str),
}

fn stream_rng(seed: u64, tag: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(stream);
    rng
}

fn unit_disk<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU)
}

/// Builds the Lagrange system of an undeformed collection with a chart
/// drawn from `chart_seed`.
pub fn build_lagrange_system(
    germ: &VarietyGerm,
    collection: &FormCollection,
    chart_seed: u64,
) -> Result<LagrangeSystem, GermError> {
    check_shapes(germ, collection)?;
    Ok(LagrangeSystem::build(germ, collection, chart_seed))
}

fn check_shapes(germ: &VarietyGerm, collection: &FormCollection) -> Result<(), GermError> {
    if collection.partition().total() != germ.dimension() {
        return Err(GermError::PartitionSum {
            sum: collection.partition().total(),
            expected: germ.dimension(),
        });
    }
    if collection.nvars() != germ.nvars() {
        return Err(GermError::VariableCount {
            expected: germ.nvars(),
            found: collection.nvars(),
        });
    }
    Ok(())
}

/// `ω + λℓ` with a random complex constant collection `ℓ` and `λ` of the
/// configured magnitude in a random direction.
fn deform<R: Rng>(base: &[Vec<NumericForm>], nvars: usize, magnitude: f64, rng: &mut R) -> Vec<Vec<NumericForm>> {
    let lambda = Complex64::from_polar(magnitude, rng.gen::<f64>() * std::f64::consts::TAU);
    base.iter()
        .map(|block| {
            block
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|a| a.add(&ComplexPoly::constant(nvars, lambda * unit_disk(rng))))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Runs Newton from `start`; returns the solution and its residual if the
/// residual drops below `tol`.
pub fn newton(system: &LagrangeSystem, mut z: Vec<Complex64>, tol: f64, max_iters: usize) -> Option<(Vec<Complex64>, f64)> {
    for _ in 0..max_iters {
        let r = system.residual_norm(&z);
        if !r.is_finite() {
            return None;
        }
        if r < tol {
            // A couple of polishing steps, keeping the best iterate.
            let mut best = (z.clone(), r);
            for _ in 0..2 {
                if system.newton_step(&mut z).is_none() {
                    break;
                }
                let r2 = system.residual_norm(&z);
                if r2 < best.1 {
                    best = (z.clone(), r2);
                }
            }
            return Some(best);
        }
        system.newton_step(&mut z)?;
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite() || c.norm() > 1e8) {
            return None;
        }
    }
    None
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Scales rows, then columns, to unit max-norm. Singularity is unchanged
/// while the condition estimate stops depending on how close the point
/// sits to the origin.
fn equilibrate(mut m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    for mut row in m.row_iter_mut() {
        let top = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if top > 0.0 {
            row /= Complex64::new(top, 0.0);
        }
    }
    for mut col in m.column_iter_mut() {
        let top = col.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if top > 0.0 {
            col /= Complex64::new(top, 0.0);
        }
    }
    m
}

fn numeric_rank(m: &DMatrix<Complex64>) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|v| **v > RANK_TOL * top.max(1.0)).count()
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

fn lex(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (u, v) in a.iter().zip(b) {
        match u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

struct RunOutcome {
    points: Vec<SpecialPoint>,
    rejected: Rejections,
}

fn solve_run(system: &LagrangeSystem, cfg: &OracleConfig, starts: usize, start_seed: (u64, u64)) -> Result<RunOutcome, OracleError> {
    let n = system.nvars();
    let mut converged: Vec<(Vec<Complex64>, f64)> = (0..starts)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = stream_rng(start_seed.0, start_seed.1, k as u64);
            let z0 = system.random_start(cfg.ball_radius, &mut rng);
            newton(system, z0, cfg.newton_tol, cfg.max_newton_iters)
        })
        .collect();
    converged.sort_by(|a, b| lex(&a.0, &b.0));

    let mut distinct: Vec<(Vec<Complex64>, f64)> = Vec::new();
    for (z, r) in converged {
        match distinct.iter_mut().find(|(w, _)| distance(w, &z) < cfg.dedup_tol) {
            Some(slot) => {
                if r < slot.1 {
                    *slot = (z, r);
                }
            }
            None => distinct.push((z, r)),
        }
    }

    let mut rejected = Rejections::default();
    let mut points = Vec::new();
    for (z, residual) in distinct {
        let x = &z[..n];
        let radius = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if radius >= cfg.ball_radius {
            rejected.out_of_ball += 1;
            continue;
        }
        let jf = system.equation_jacobian(x);
        if jf.nrows() > 0 && singular_values(&jf).last().copied().unwrap_or(0.0) <= SMOOTH_TOL {
            rejected.singular_locus += 1;
            continue;
        }
        let s = singular_values(&equilibrate(system.jacobian(&z)));
        let condition = match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        };
        if condition > MAX_CONDITION {
            rejected.degenerate += 1;
            continue;
        }
        let block_ranks = (0..system.block_count())
            .map(|i| numeric_rank(&system.degeneracy_matrix(x, i)))
            .collect();
        points.push(SpecialPoint {
            x: x.iter().map(|c| (c.re, c.im)).collect(),
            residual,
            condition,
            block_ranks,
            solution: z.clone(),
        });
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = distance(&a.solution, &b.solution);
            if d < 10.0 * cfg.dedup_tol {
                return Err(OracleError::Collision { distance: d });
            }
        }
    }
    Ok(RunOutcome { points, rejected })
}

fn deformed_collection(base: &[Vec<NumericForm>], nvars: usize, cfg: &OracleConfig, d: u64) -> Vec<Vec<NumericForm>> {
    let mut rng = stream_rng(cfg.seed, 1, d);
    deform(base, nvars, cfg.lambda_magnitude, &mut rng)
}

/// The Lagrange system solved for `deformation` under `chart`, exactly as
/// [`count_special_points`] builds it. Chart 1 exists only for
/// deformation 0.
pub fn deformed_system(
    germ: &VarietyGerm,
    collection: &FormCollection,
    cfg: &OracleConfig,
    deformation: u64,
    chart: u64,
) -> Result<LagrangeSystem, OracleError> {
    check_shapes(germ, collection)?;
    let deformed = deformed_collection(&numeric_collection(collection), germ.nvars(), cfg, deformation);
    let mut chart_rng = stream_rng(cfg.seed, 2, deformation * 16 + chart);
    Ok(LagrangeSystem::from_numeric(germ, deformed, &mut chart_rng))
}

/// Counts special points of generic deformations of `collection` on the
/// smooth part of `germ` inside the ball. Three independent deformations,
/// plus a second chart for the first one, must all agree.
pub fn count_special_points(
    germ: &VarietyGerm,
    collection: &FormCollection,
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    cfg.validate()?;
    check_shapes(germ, collection)?;
    let base = numeric_collection(collection);
    let mut counts = Vec::new();
    let mut first: Option<RunOutcome> = None;
    let mut used_starts = 0;
    let mut charts_agreeing = 1;
    for d in 0..DEFORMATIONS as u64 {
        let deformed = deformed_collection(&base, germ.nvars(), cfg, d);
        let chart_variants: u64 = if d == 0 { 2 } else { 1 };
        for chart in 0..chart_variants {
            let mut chart_rng = stream_rng(cfg.seed, 2, d * 16 + chart);
            let system = LagrangeSystem::from_numeric(germ, deformed.clone(), &mut chart_rng);
            let starts = cfg
                .starts
                .unwrap_or_else(|| system.bezout_bound().saturating_mul(50).min(START_CAP) as usize);
            used_starts = used_starts.max(starts);
            let outcome = solve_run(&system, cfg, starts, (cfg.seed, 3 + d * 16 + chart))?;
            if chart == 0 {
                counts.push(outcome.points.len());
            } else if outcome.points.len() == counts[0] {
                charts_agreeing += 1;
            } else {
                counts.push(outcome.points.len());
                return Err(OracleError::Unstable { counts });
            }
            if first.is_none() {
                first = Some(outcome);
            }
        }
    }
    if counts.iter().any(|c| *c != counts[0]) {
        return Err(OracleError::Unstable { counts });
    }
    let first = first.expect("at least one run");
    Ok(OracleReport {
        count: counts[0],
        points: first.points,
        rejected: first.rejected,
        deformations_agreeing: counts.len(),
        charts_agreeing,
        starts: used_starts,
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConservationError {
    #[error(transparent)]
    Symbolic(#[from] ObstructionError),
    #[error(transparent)]
    Numeric(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conservation {
    pub holds: bool,
    pub obstruction: ObstructionReport,
    pub oracle: OracleReport,
}

/// Compares the obstruction with the number of special points of a generic
/// deformation. A mismatch is reported in `holds`, never reconciled.
pub fn verify_conservation(
    germ: &VarietyGerm,
    collection: &FormCollection,
    trial_cfg: &TrialConfig,
    oracle_cfg: &OracleConfig,
) -> Result<Conservation, ConservationError> {
    let obstruction = chern_obstruction(germ, collection, trial_cfg)?;
    let oracle = count_special_points(germ, collection, oracle_cfg)?;
    Ok(Conservation {
        holds: obstruction.chern == oracle.count as i64,
        obstruction,
        oracle,
    })
}
