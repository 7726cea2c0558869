//! Gaussian perturbation and smoothed-running-time experiments.
//!
//! Besides the sweep driver this module holds executable forms of the
//! quantities the smoothed analysis works with: the bounding box side `D`,
//! the error of evaluating a gain at approximate centers, the exact center
//! update along a sequence of moves, and a Monte Carlo estimate of how
//! likely a quadratic Gaussian form lands in a short interval.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    center_of_mass, gain_with_centers, move_gain, sq_dist, Clustering, PointSet,
};
use crate::lower_bound::{scripted_sequence, verify_sequence, GadgetInstance};
use crate::scalar::Scalar;
use crate::search::{
    default_max_iters, hw_run, init_clustering, InitStrategy, PivotRule, Termination,
};

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationConfig {
    pub sigma: f64,
    pub seed: u64,
    pub trials: usize,
    /// For `sigma > 1`: shrink the input by `1/sigma` and perturb with unit
    /// variance instead.
    pub rescale: bool,
}

impl PerturbationConfig {
    pub fn new(sigma: f64, seed: u64) -> Self {
        Self {
            sigma,
            seed,
            trials: 1,
            rescale: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::precondition(format!(
                "sigma must be ≥ 0, got {}",
                self.sigma
            )));
        }
        if self.trials == 0 {
            return Err(Error::precondition("trials must be at least 1"));
        }
        Ok(())
    }
}

/// Mixes `words` into one 64-bit seed (SplitMix64 finalizer per word).
pub fn derive_seed(words: &[u64]) -> u64 {
    let mut h = 0x243F_6A88_85A3_08D3u64;
    for &w in words {
        h = h.wrapping_add(w).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

/// Standard normal draws for one point: stream `point` of the ChaCha
/// generator keyed by `seed`, so every (seed, point, coordinate) maps to a
/// fixed value regardless of evaluation order.
fn point_noise(seed: u64, point: usize, dim: usize) -> impl Iterator<Item = f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(point as u64);
    (0..dim).map(move |_| rng.sample::<f64, _>(StandardNormal))
}

/// Adds independent `N(0, sigma^2)` noise to every coordinate.
///
/// With `rescale` and `sigma > 1` the output is `y / sigma + N(0, 1)`,
/// which is the `sigma` perturbation scaled by `1/sigma`.
pub fn perturb(points: &PointSet<f64>, cfg: &PerturbationConfig) -> Result<PointSet<f64>> {
    cfg.validate()?;
    let d = points.dim();
    let (shrink, sigma) = if cfg.rescale && cfg.sigma > 1.0 {
        (1.0 / cfg.sigma, 1.0)
    } else {
        (1.0, cfg.sigma)
    };
    let mut coords = Vec::with_capacity(points.coords().len());
    for (id, p) in points.iter().enumerate() {
        for (y, g) in p.iter().zip(point_noise(cfg.seed, id, d)) {
            coords.push(y * shrink + sigma * g);
        }
    }
    PointSet::new(d, coords)
}

/// Uniformly scales and translates `points` into `[0, 1]^d` (same factor
/// on every axis). Inputs already inside the unit cube are returned as is.
pub fn normalize_unit_cube(points: &PointSet<f64>) -> PointSet<f64> {
    let inside = points.coords().iter().all(|&v| (0.0..=1.0).contains(&v));
    if inside {
        return points.clone();
    }
    let d = points.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points.iter() {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let span = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| h - l)
        .fold(0.0f64, f64::max);
    let factor = if span > 0.0 { 1.0 / span } else { 1.0 };
    let coords = points
        .coords()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v - lo[i % d]) * factor)
        .collect();
    PointSet::new(d, coords).expect("same shape")
}

/// `D = sqrt(2 n ln(n k d))`: side of the box `[-D/2, D/2]^d` that holds the
/// perturbed points with high probability.
pub fn box_bound(n: usize, k: usize, d: usize) -> Result<f64> {
    let product = (n as f64) * (k as f64) * (d as f64);
    if n == 0 || k == 0 || d == 0 || product < 3.0 {
        return Err(Error::precondition(format!(
            "box bound needs n, k, d ≥ 1 and n*k*d ≥ 3, got {n}*{k}*{d}"
        )));
    }
    Ok((2.0 * n as f64 * product.ln()).sqrt())
}

/// `true` when every coordinate lies in `[-D/2, D/2]`.
pub fn inside_box(points: &PointSet<f64>, side: f64) -> bool {
    let half = side / 2.0;
    points.coords().iter().all(|v| v.abs() <= half)
}

/// Fraction of `trials` perturbations of `base` with at least one point
/// outside the box of side `box_bound(n, k, d)`.
pub fn containment_failure_rate(
    base: &PointSet<f64>,
    k: usize,
    sigma: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let side = box_bound(base.len(), k, base.dim())?;
    let mut failures = 0usize;
    for trial in 0..trials {
        let cfg = PerturbationConfig::new(sigma, derive_seed(&[seed, trial as u64]));
        if !inside_box(&perturb(base, &cfg)?, side) {
            failures += 1;
        }
    }
    Ok(failures as f64 / trials as f64)
}

/// Result of comparing an exact gain with the gain at approximate centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxGainCheck {
    pub lhs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Evaluates `|Δ - Δ'|` against `9 sqrt(d) D eps`, where `Δ` is the true
/// gain of moving `x` from `src` to `dst` and `Δ'` uses the approximate
/// centers. `D` is [`box_bound`] for the instance, whose points must lie
/// in `[-D/2, D/2]^d`.
#[allow(clippy::too_many_arguments)]
pub fn check_approx_gain(
    x: usize,
    src: usize,
    dst: usize,
    clustering: &Clustering<f64>,
    points: &PointSet<f64>,
    approx_src: &[f64],
    approx_dst: &[f64],
    eps: f64,
) -> Result<ApproxGainCheck> {
    let d = points.dim();
    let side = box_bound(points.len(), clustering.k(), d)?;
    let root_d = (d as f64).sqrt();
    if !(0.0..=root_d * side).contains(&eps) {
        return Err(Error::precondition(format!(
            "eps = {eps} outside [0, sqrt(d) D = {}]",
            root_d * side
        )));
    }
    if !inside_box(points, side) {
        return Err(Error::precondition("points leave the box [-D/2, D/2]^d"));
    }
    let slack = eps * eps * (1.0 + 1e-12);
    let c_src = center_of_mass(src, clustering)?;
    let c_dst = center_of_mass(dst, clustering)?;
    if sq_dist(&c_src, approx_src) > slack || sq_dist(&c_dst, approx_dst) > slack {
        return Err(Error::precondition(format!(
            "approximate centers are farther than eps = {eps} from the true centers"
        )));
    }
    let exact = move_gain(x, src, dst, clustering, points)?;
    let approx = gain_with_centers(
        points.point(x),
        approx_src,
        approx_dst,
        clustering.size(src),
        clustering.size(dst),
    )?;
    let lhs = (exact - approx).abs();
    let bound = 9.0 * root_d * side * eps;
    Ok(ApproxGainCheck {
        lhs,
        bound,
        ok: lhs <= bound,
    })
}

/// Carries an approximate center through a batch of moves: the cluster had
/// `size_old` points, gained `gained` and lost `lost`, and now has
/// `size_new`. The approximation error is multiplied by
/// `size_old / size_new`.
pub fn update_center_approx<S: Scalar>(
    approx_old: &[S],
    size_old: usize,
    size_new: usize,
    gained: &[&[S]],
    lost: &[&[S]],
) -> Result<Vec<S>> {
    if size_new < 1 {
        return Err(Error::precondition("updated cluster would be empty"));
    }
    if size_old + gained.len() != size_new + lost.len() {
        return Err(Error::precondition(format!(
            "sizes disagree: {size_old} + {} - {} != {size_new}",
            gained.len(),
            lost.len()
        )));
    }
    let ratio = S::from_count(size_old) / S::from_count(size_new);
    let inv_new = S::one() / S::from_count(size_new);
    let mut out: Vec<S> = approx_old
        .iter()
        .map(|c| c.clone() * ratio.clone())
        .collect();
    for (j, slot) in out.iter_mut().enumerate() {
        let delta = gained.iter().fold(S::zero(), |acc, g| acc + g[j].clone())
            - lost.iter().fold(S::zero(), |acc, l| acc + l[j].clone());
        *slot = slot.clone() + delta * inv_new.clone();
    }
    Ok(out)
}

/// Monte Carlo estimate of `P(Z in [start, start + eps])` for
/// `Z = a ||X||^2 + <v, X>`, `X ~ N(mu, sigma^2 I)`.
#[allow(clippy::too_many_arguments)]
pub fn anticoncentration_mc(
    a: f64,
    v: &[f64],
    mu: &[f64],
    sigma: f64,
    eps: f64,
    start: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if a == 0.0 {
        return Err(Error::precondition("a must be non-zero"));
    }
    if v.len() != mu.len() || v.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            found: v.len(),
        });
    }
    if trials < 10_000 {
        return Err(Error::precondition("at least 10^4 trials are required"));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::precondition("sigma must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut norm2 = 0.0;
        let mut dot = 0.0;
        for (&m, &w) in mu.iter().zip(v) {
            let x = m + sigma * rng.sample::<f64, _>(StandardNormal);
            norm2 += x * x;
            dot += w * x;
        }
        let z = a * norm2 + dot;
        if z >= start && z <= start + eps {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Non-scripted pivot rules available to sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepRule {
    First,
    Best,
    Random,
}

impl SweepRule {
    fn pivot(self, seed: u64) -> PivotRule {
        match self {
            SweepRule::First => PivotRule::FirstImprovement,
            SweepRule::Best => PivotRule::BestImprovement,
            SweepRule::Random => PivotRule::RandomImprovement { seed },
        }
    }
}

/// What a sweep perturbs.
#[derive(Clone, Debug)]
pub enum SweepBase {
    /// Arbitrary points, started from a seeded balanced clustering.
    Points { points: PointSet<f64>, k: usize },
    /// The worst-case instance, started from its scripted initial
    /// clustering. `sigma = 0` rows replay the script exactly.
    Gadget(GadgetInstance),
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub rule: SweepRule,
    pub max_iters: Option<usize>,
    pub threads: Option<usize>,
    pub rescale: bool,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    pub initial_potential: f64,
    pub final_potential: f64,
    pub terminated: Termination,
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str =
    "sigma,trial,seed,iterations,initial_potential,final_potential,terminated,wall_time_ms";

impl SweepResult {
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(SWEEP_CSV_HEADER.split(','))?;
        for r in &self.rows {
            writer.write_record([
                r.sigma.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.iterations.to_string(),
                r.initial_potential.to_string(),
                r.final_potential.to_string(),
                r.terminated.as_str().to_string(),
                r.wall_time_ms
                    .map(|t| format!("{t:.3}"))
                    .unwrap_or_default(),
            ])?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Median iteration count over the rows for one sigma.
    pub fn median_iterations(&self, sigma: f64) -> Option<f64> {
        let mut its: Vec<usize> = self
            .rows
            .iter()
            .filter(|r| r.sigma == sigma)
            .map(|r| r.iterations)
            .collect();
        if its.is_empty() {
            return None;
        }
        its.sort_unstable();
        let mid = its.len() / 2;
        Some(if its.len() % 2 == 1 {
            its[mid] as f64
        } else {
            (its[mid - 1] + its[mid]) as f64 / 2.0
        })
    }
}

fn sweep_trial(
    base: &SweepBase,
    cfg: &SweepConfig,
    sigma_index: usize,
    trial: usize,
) -> Result<SweepRow> {
    let sigma = cfg.sigmas[sigma_index];
    let seed = derive_seed(&[cfg.seed, sigma_index as u64, trial as u64]);
    let started = Instant::now();

    let (iterations, initial_potential, final_potential, terminated) = match base {
        SweepBase::Gadget(instance) if sigma == 0.0 => {
            // Unperturbed control: exact replay of the script.
            let script = scripted_sequence(instance.m)?;
            let report = verify_sequence(instance, &script)?;
            let span = instance
                .points
                .coords()
                .iter()
                .map(Scalar::to_f64_lossy)
                .fold(0.0f64, f64::max);
            let norm = if span > 0.0 { span * span } else { 1.0 };
            (
                report.moves,
                report.initial_potential.to_f64_lossy() / norm,
                report.final_potential.to_f64_lossy() / norm,
                report.terminated,
            )
        }
        _ => {
            let (unit, k, init) = match base {
                SweepBase::Gadget(instance) => (
                    normalize_unit_cube(&instance.points.map(Scalar::to_f64_lossy)),
                    instance.k(),
                    InitStrategy::Given(instance.initial.assignment().to_vec()),
                ),
                SweepBase::Points { points, k } => (
                    normalize_unit_cube(points),
                    *k,
                    InitStrategy::BalancedRandom,
                ),
            };
            let pcfg = PerturbationConfig {
                sigma,
                seed,
                trials: 1,
                rescale: cfg.rescale,
            };
            let perturbed = perturb(&unit, &pcfg)?;
            let start = init_clustering(&perturbed, k, &init, seed)?;
            let max_iters = cfg
                .max_iters
                .unwrap_or_else(|| default_max_iters(k, perturbed.dim()));
            let trace = hw_run(&perturbed, start, cfg.rule.pivot(seed), max_iters)?;
            (
                trace.iterations,
                trace.initial_potential,
                trace.final_potential,
                trace.terminated,
            )
        }
    };

    Ok(SweepRow {
        sigma,
        trial,
        seed,
        iterations,
        initial_potential,
        final_potential,
        terminated,
        wall_time_ms: cfg.timing.then(|| started.elapsed().as_secs_f64() * 1000.0),
    })
}

/// Runs every (sigma, trial) pair, in parallel, and returns rows ordered by
/// sigma index then trial.
pub fn smoothed_sweep(base: &SweepBase, cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.trials == 0 {
        return Err(Error::precondition("trials must be at least 1"));
    }
    if cfg.sigmas.is_empty() {
        return Err(Error::precondition("at least one sigma is required"));
    }
    for &sigma in &cfg.sigmas {
        PerturbationConfig::new(sigma, 0).validate()?;
    }
    let jobs: Vec<(usize, usize)> = (0..cfg.sigmas.len())
        .flat_map(|s| (0..cfg.trials).map(move |t| (s, t)))
        .collect();
    let run = || -> Result<Vec<SweepRow>> {
        jobs.par_iter()
            .map(|&(s, t)| sweep_trial(base, cfg, s, t))
            .collect()
    };
    let rows = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::precondition(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, rational, Rational};

    fn unit_square(n: usize, seed: u64) -> PointSet<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointSet::new(2, (0..2 * n).map(|_| rng.random::<f64>()).collect()).unwrap()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let base = unit_square(10, 1);
        let out = perturb(&base, &PerturbationConfig::new(0.0, 5)).unwrap();
        assert_eq!(out, base);
        let tiny = perturb(&base, &PerturbationConfig::new(1e-300, 5)).unwrap();
        assert_eq!(tiny, base);
    }

    #[test]
    fn perturbation_is_deterministic() {
        let base = unit_square(10, 1);
        let cfg = PerturbationConfig::new(0.3, 42);
        let a = perturb(&base, &cfg).unwrap();
        let b = perturb(&base, &cfg).unwrap();
        assert_eq!(
            a.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        let c = perturb(&base, &PerturbationConfig::new(0.3, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_depends_only_on_point_index() {
        let base = unit_square(6, 2);
        let cfg = PerturbationConfig::new(0.5, 9);
        let full = perturb(&base, &cfg).unwrap();
        let prefix = PointSet::new(2, base.coords()[..6].to_vec()).unwrap();
        let part = perturb(&prefix, &cfg).unwrap();
        assert_eq!(part.coords(), &full.coords()[..6]);
    }

    #[test]
    fn perturbation_variance() {
        let sigma = 0.7;
        let base = PointSet::new(1, vec![0.0; 100_000]).unwrap();
        let out = perturb(&base, &PerturbationConfig::new(sigma, 3)).unwrap();
        let n = out.len() as f64;
        let mean = out.coords().iter().sum::<f64>() / n;
        let var = out.coords().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn rescaling_matches_scaled_perturbation() {
        let base = unit_square(5, 4);
        let sigma = 4.0;
        let scaled = perturb(
            &base,
            &PerturbationConfig {
                rescale: true,
                ..PerturbationConfig::new(sigma, 8)
            },
        )
        .unwrap();
        let raw = perturb(
            &base,
            &PerturbationConfig {
                rescale: false,
                ..PerturbationConfig::new(sigma, 8)
            },
        )
        .unwrap();
        for (s, r) in scaled.coords().iter().zip(raw.coords()) {
            assert!((s * sigma - r).abs() < 1e-12);
        }
    }

    #[test]
    fn box_bound_values() {
        let d = box_bound(20, 3, 2).unwrap();
        assert!((d - (40.0f64 * 120f64.ln()).sqrt()).abs() < 1e-12);
        assert!((d - 13.84).abs() < 0.005);
        assert!(box_bound(1, 1, 2).is_err());
        assert!(box_bound(0, 3, 3).is_err());
        for n in 3..30 {
            for k in 1..5 {
                for d in 1..4 {
                    let here = box_bound(n, k, d).unwrap();
                    assert!(box_bound(n + 1, k, d).unwrap() >= here);
                    assert!(box_bound(n, k + 1, d).unwrap() >= here);
                    assert!(box_bound(n, k, d + 1).unwrap() >= here);
                }
            }
        }
    }

    #[test]
    fn approx_gain_exact_centers() {
        let pts = PointSet::new(1, vec![0.1, 0.4, 0.9, 0.2]).unwrap();
        let c = Clustering::new(&pts, 2, vec![0, 0, 1, 1]).unwrap();
        let a = center_of_mass(0, &c).unwrap();
        let b = center_of_mass(1, &c).unwrap();
        let check = check_approx_gain(1, 0, 1, &c, &pts, &a, &b, 0.01).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert!(check.ok);

        let off = [a[0] + 0.5];
        assert!(check_approx_gain(1, 0, 1, &c, &pts, &off, &b, 0.01).is_err());
        assert!(check_approx_gain(1, 0, 1, &c, &pts, &a, &b, 1e9).is_err());
    }

    #[test]
    fn center_update_examples() {
        let p = |v: i64| vec![rational(v)];
        let (x1, x2, x3, x4) = (p(1), p(2), p(6), p(10));
        // Cluster {1, 2, 6} loses 2 and gains 10.
        let exact_old = vec![rational(3)];
        let new = update_center_approx(&exact_old, 3, 3, &[&x4], &[&x2]).unwrap();
        assert_eq!(new, vec![ratio(17, 3)]);
        let same = update_center_approx(&exact_old, 3, 3, &[], &[]).unwrap();
        assert_eq!(same, exact_old);
        let _ = (x1, x3);
        assert!(update_center_approx(&exact_old, 1, 0, &[], &[&x2]).is_err());
        assert!(update_center_approx(&exact_old, 3, 5, &[], &[]).is_err());
    }

    #[test]
    fn center_update_error_ratio() {
        // Center of {1, 2, 6} is 3; start 1/7 off and shrink to {1, 6}.
        let two = vec![rational(2)];
        let approx = vec![rational(3) + ratio(1, 7)];
        let new: Vec<Rational> = update_center_approx(&approx, 3, 2, &[], &[&two]).unwrap();
        let true_new = ratio(7, 2);
        assert_eq!(new[0].clone() - true_new, ratio(3, 2) * ratio(1, 7));
    }

    #[test]
    fn anticoncentration_basics() {
        let p = anticoncentration_mc(1.0, &[0.0], &[0.0], 1.0, 1e6, -1.0, 10_000, 1).unwrap();
        assert_eq!(p, 1.0);
        assert!(anticoncentration_mc(0.0, &[0.0], &[0.0], 1.0, 0.1, 0.0, 10_000, 1).is_err());
        assert!(anticoncentration_mc(1.0, &[0.0], &[0.0], 1.0, 0.1, 0.0, 10, 1).is_err());
    }

    #[test]
    fn anticoncentration_scales_like_sqrt_eps() {
        let trials = 400_000;
        let p1 = anticoncentration_mc(1.0, &[0.0], &[0.0], 1.0, 0.01, 0.0, trials, 5).unwrap();
        let p2 = anticoncentration_mc(1.0, &[0.0], &[0.0], 1.0, 0.005, 0.0, trials, 6).unwrap();
        assert!(p1 <= 10.0 * 0.01f64.sqrt());
        let ratio = p1 / p2;
        assert!((ratio - 2f64.sqrt()).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn normalization() {
        let pts = PointSet::new(1, vec![0.0, 5.0, 10.0]).unwrap();
        assert_eq!(normalize_unit_cube(&pts).coords(), &[0.0, 0.5, 1.0]);
        let inside = PointSet::new(1, vec![0.25, 0.5]).unwrap();
        assert_eq!(normalize_unit_cube(&inside), inside);
    }

    #[test]
    fn sweep_rows_are_ordered_and_monotone() {
        let base = SweepBase::Points {
            points: unit_square(12, 3),
            k: 3,
        };
        let cfg = SweepConfig {
            sigmas: vec![0.05, 0.2],
            trials: 4,
            seed: 17,
            rule: SweepRule::First,
            max_iters: None,
            threads: Some(3),
            rescale: true,
            timing: false,
        };
        let result = smoothed_sweep(&base, &cfg).unwrap();
        assert_eq!(result.rows.len(), 8);
        for (i, row) in result.rows.iter().enumerate() {
            assert_eq!(row.trial, i % 4);
            assert!(row.final_potential <= row.initial_potential);
            assert_eq!(row.terminated, Termination::LocalOpt);
        }
        let again = smoothed_sweep(
            &base,
            &SweepConfig {
                threads: Some(1),
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_eq!(result, again);
        let csv = result.to_csv().unwrap();
        assert!(csv.starts_with(SWEEP_CSV_HEADER));
        assert_eq!(csv.lines().count(), 9);
    }
}
