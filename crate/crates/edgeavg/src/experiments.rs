//! Monte-Carlo estimation of the expected consensus time, scaling sweeps
//! over the graph size and the threshold, and log-log exponent fits.

use std::fs::File;
use std::io::{BufReader, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{lower_bound_spec, DistributionSpec};
use crate::dynamics::{run_coupled, run_until_consensus_from_rng};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;
use crate::seed::{derive_seed, derive_seed2};

/// Consensus-time growth exponent in `n`: `max(3 - p, 2/p)` for an i.i.d.
/// initial profile with p-th absolute moment at most 1. Crossover at p = 2.
pub fn theoretical_beta(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
    }
    Ok((3.0 - p).max(2.0 / p))
}

/// Graph family of a sweep; the size coordinate is the generator parameter
/// (cycle/path/complete vertex count, torus side).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphFamily {
    Cycle,
    Path,
    Complete,
    Torus { dim: usize },
    File { path: String },
}

impl GraphFamily {
    pub fn build(&self, size: usize) -> Result<Graph> {
        match self {
            GraphFamily::Cycle => Graph::cycle(size),
            GraphFamily::Path => Graph::path(size),
            GraphFamily::Complete => Graph::complete(size),
            GraphFamily::Torus { dim } => Graph::torus(size, *dim),
            GraphFamily::File { path } => {
                let file = File::open(path)?;
                Graph::read_edge_list(BufReader::new(file))
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GraphFamily::Cycle => "cycle",
            GraphFamily::Path => "path",
            GraphFamily::Complete => "complete",
            GraphFamily::Torus { .. } => "torus",
            GraphFamily::File { .. } => "file",
        }
    }
}

/// Initial law of a sweep point: either one fixed law for every point, or
/// the scale-matched three-point law resolved per `(p, n, eps)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum DistributionRule {
    Fixed { spec: DistributionSpec<f64> },
    LowerBound,
}

impl DistributionRule {
    pub fn resolve(&self, p: f64, n: usize, epsilon: f64) -> Result<DistributionSpec<f64>> {
        match self {
            DistributionRule::Fixed { spec } => {
                spec.validate()?;
                Ok(spec.clone())
            }
            DistributionRule::LowerBound => Ok(lower_bound_spec(p, n, epsilon)?.spec),
        }
    }
}

fn default_max_events() -> u64 {
    1_000_000_000
}

/// A full experiment description; serializes one-to-one to the JSON config
/// accepted by the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: GraphFamily,
    pub sizes: Vec<usize>,
    pub distribution: DistributionRule,
    pub epsilons: Vec<f64>,
    pub p: f64,
    pub replicates: usize,
    pub base_seed: u64,
    #[serde(default = "default_max_events")]
    pub max_events: u64,
    /// Worker threads; 0 uses the ambient thread pool.
    #[serde(default)]
    pub parallelism: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidParameter("no sizes given".into()));
        }
        if self.epsilons.is_empty() {
            return Err(Error::InvalidParameter("no epsilon values given".into()));
        }
        if self
            .epsilons
            .iter()
            .any(|e| !(e.is_finite() && *e > 0.0))
        {
            return Err(Error::InvalidParameter(
                "epsilon values must be positive and finite".into(),
            ));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be >= 1".into()));
        }
        if !(self.p >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p must be >= 1, got {}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Monte-Carlo summary of the expected consensus time at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub n: usize,
    pub epsilon: f64,
    pub mean_tau: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub replicates_used: usize,
    pub capped_count: usize,
    /// Capped replicates were excluded, so the mean is biased low.
    pub lower_estimate: bool,
    /// Fewer than 30 usable replicates; the normal interval is unreliable.
    pub low_replicates: bool,
}

/// Estimates the expected consensus time by independent replicates, each
/// with a freshly sampled profile and its own clock stream derived from
/// `base_seed` and the replicate index. Capped replicates are excluded
/// from the mean and counted.
pub fn estimate_consensus_time<R: Real>(
    g: &Graph,
    dist: &DistributionSpec<R>,
    epsilon: R,
    replicates: usize,
    base_seed: u64,
    max_events: u64,
) -> Result<EstimateResult> {
    g.require_connected()?;
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be >= 1".into()));
    }
    if !(epsilon > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let sampler = dist.sampler()?;
    let n = g.vertex_count();
    let taus: Vec<Option<f64>> = (0..replicates)
        .into_par_iter()
        .map(|rep| -> Result<Option<f64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base_seed, rep as u64));
            let f0 = sampler.sample_profile(n, &mut rng);
            let r = run_until_consensus_from_rng(g, &f0, epsilon, rng, max_events)?;
            Ok(r.tau.reached().map(|t| t.to_f64_lossy()))
        })
        .collect::<Result<Vec<_>>>()?;
    let capped_count = taus.iter().filter(|t| t.is_none()).count();
    let used: Vec<f64> = taus.into_iter().flatten().collect();
    if used.is_empty() {
        return Err(Error::EstimationFailed(format!(
            "all {replicates} replicates hit the {max_events}-event cap"
        )));
    }
    let k = used.len();
    let mean = used.iter().sum::<f64>() / k as f64;
    let stderr = if k > 1 {
        let var = used.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        0.0
    };
    let half = 1.96 * stderr;
    Ok(EstimateResult {
        n,
        epsilon: epsilon.to_f64_lossy(),
        mean_tau: mean,
        stderr,
        ci_lo: mean - half,
        ci_hi: mean + half,
        replicates_used: k,
        capped_count,
        lower_estimate: capped_count > 0,
        low_replicates: k < 30,
    })
}

/// Ordinary least-squares line fit. `x` must contain at least two distinct
/// abscissae.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

pub fn exponent_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "fit needs at least two distinct abscissae".into(),
        ));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points_used: points.len(),
    })
}

/// Which coordinate a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    N,
    Epsilon,
}

/// One grid point of a sweep: the estimate, or the error that prevented it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub size: usize,
    pub epsilon: f64,
    pub estimate: Option<EstimateResult>,
    pub error: Option<String>,
}

/// Sweep results plus the log-log fit over the usable points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub fit: Option<FitResult>,
    pub warnings: Vec<String>,
}

fn run_point(
    cfg: &ExperimentConfig,
    size: usize,
    epsilon: f64,
    seed: u64,
) -> std::result::Result<EstimateResult, String> {
    let attempt = || -> Result<EstimateResult> {
        let g = cfg.family.build(size)?;
        let dist = cfg
            .distribution
            .resolve(cfg.p, g.vertex_count(), epsilon)?;
        estimate_consensus_time(&g, &dist, epsilon, cfg.replicates, seed, cfg.max_events)
    };
    attempt().map_err(|e| e.to_string())
}

fn with_pool<T: Send>(parallelism: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if parallelism == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Sweeps the graph size at a fixed threshold and fits
/// `log mean_tau ~ slope * log n`. Needs at least 3 sizes and exactly one
/// epsilon. Point failures are collected, not fatal.
pub fn scaling_sweep_n(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if cfg.sizes.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "size sweep needs at least 3 sizes, got {}",
            cfg.sizes.len()
        )));
    }
    if cfg.epsilons.len() != 1 {
        return Err(Error::InvalidParameter(
            "size sweep needs exactly one epsilon".into(),
        ));
    }
    let epsilon = cfg.epsilons[0];
    let points = with_pool(cfg.parallelism, || {
        cfg.sizes
            .iter()
            .enumerate()
            .map(|(idx, &size)| {
                // one seed branch per size; replicate streams derive from it
                let seed = derive_seed(cfg.base_seed, idx as u64);
                match run_point(cfg, size, epsilon, seed) {
                    Ok(est) => SweepPoint {
                        size,
                        epsilon,
                        estimate: Some(est),
                        error: None,
                    },
                    Err(e) => SweepPoint {
                        size,
                        epsilon,
                        estimate: None,
                        error: Some(e),
                    },
                }
            })
            .collect::<Vec<_>>()
    })?;
    finish_sweep(SweepAxis::N, points)
}

/// Sweeps the threshold at a fixed size and fits
/// `log mean_tau ~ slope * log(1/eps)`. Needs at least 3 thresholds and
/// exactly one size. Replicate streams are shared across thresholds, so
/// per-replicate consensus times are pathwise monotone in epsilon.
pub fn scaling_sweep_eps(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if cfg.epsilons.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "epsilon sweep needs at least 3 values, got {}",
            cfg.epsilons.len()
        )));
    }
    if cfg.sizes.len() != 1 {
        return Err(Error::InvalidParameter(
            "epsilon sweep needs exactly one size".into(),
        ));
    }
    let size = cfg.sizes[0];
    let points = with_pool(cfg.parallelism, || {
        cfg.epsilons
            .iter()
            .map(|&epsilon| {
                match run_point(cfg, size, epsilon, cfg.base_seed) {
                    Ok(est) => SweepPoint {
                        size,
                        epsilon,
                        estimate: Some(est),
                        error: None,
                    },
                    Err(e) => SweepPoint {
                        size,
                        epsilon,
                        estimate: None,
                        error: Some(e),
                    },
                }
            })
            .collect::<Vec<_>>()
    })?;
    finish_sweep(SweepAxis::Epsilon, points)
}

fn finish_sweep(axis: SweepAxis, points: Vec<SweepPoint>) -> Result<SweepOutput> {
    let mut warnings = Vec::new();
    let mut fit_points = Vec::new();
    for pt in &points {
        match (&pt.estimate, &pt.error) {
            (Some(est), _) if est.mean_tau > 0.0 => {
                let x = match axis {
                    SweepAxis::N => (est.n as f64).ln(),
                    SweepAxis::Epsilon => (1.0 / est.epsilon).ln(),
                };
                fit_points.push((x, est.mean_tau.ln()));
            }
            (Some(_), _) => warnings.push(format!(
                "point (size {}, eps {}) has zero mean and was excluded from the fit",
                pt.size, pt.epsilon
            )),
            (None, Some(e)) => warnings.push(format!(
                "point (size {}, eps {}) failed: {e}",
                pt.size, pt.epsilon
            )),
            (None, None) => unreachable!("point without estimate or error"),
        }
    }
    let fit = match exponent_fit(&fit_points) {
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("no fit: {e}"));
            None
        }
    };
    Ok(SweepOutput {
        axis,
        points,
        fit,
        warnings,
    })
}

/// Pathwise subadditivity tally over coupled replicates: how often the sum
/// profile failed to reach its threshold by `max(tau1, tau2)` (allowing
/// 1e-12 rounding slack). Zero is the expected count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubadditivityReport {
    pub replicates: usize,
    pub violations: usize,
    /// Replicates skipped because one of the coupled runs hit the cap.
    pub capped: usize,
    pub vacuous: bool,
}

pub fn subadditivity_suite<R: Real>(
    g: &Graph,
    dist1: &DistributionSpec<R>,
    dist2: &DistributionSpec<R>,
    eps1: R,
    eps2: R,
    replicates: usize,
    seed: u64,
    max_events: u64,
) -> Result<SubadditivityReport> {
    g.require_connected()?;
    if replicates == 0 {
        return Ok(SubadditivityReport {
            replicates: 0,
            violations: 0,
            capped: 0,
            vacuous: true,
        });
    }
    let s1 = dist1.sampler()?;
    let s2 = dist2.sampler()?;
    let n = g.vertex_count();
    let outcomes: Vec<(bool, bool)> = (0..replicates)
        .into_par_iter()
        .map(|rep| -> Result<(bool, bool)> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed2(seed, 0, rep as u64));
            let f1 = s1.sample_profile(n, &mut rng);
            let f2 = s2.sample_profile(n, &mut rng);
            let clock_seed = derive_seed2(seed, 1, rep as u64);
            let r = run_coupled(g, &f1, &f2, eps1, eps2, clock_seed, max_events)?;
            match (r.tau1.reached(), r.tau2.reached(), r.tau_sum.reached()) {
                (Some(t1), Some(t2), Some(ts)) => {
                    let violated = ts > t1.max(t2) + R::of(1e-12);
                    Ok((violated, false))
                }
                (Some(t1), Some(t2), None) => {
                    // the sum failed to reach eps1+eps2 although both parts
                    // reached; only the event cap can cause this
                    let _ = (t1, t2);
                    Ok((true, true))
                }
                _ => Ok((false, true)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = outcomes.iter().filter(|(v, _)| *v).count();
    let capped = outcomes.iter().filter(|(_, c)| *c).count();
    Ok(SubadditivityReport {
        replicates,
        violations,
        capped,
        vacuous: false,
    })
}

/// Writes sweep results as CSV
/// `family,n,epsilon,p,replicates,capped,mean_tau,stderr,ci_lo,ci_hi`.
/// Failed points are skipped (they are recorded in the JSON envelope).
pub fn write_results_csv<W: Write>(
    out: &mut W,
    family: &str,
    p: f64,
    points: &[SweepPoint],
) -> Result<()> {
    writeln!(
        out,
        "family,n,epsilon,p,replicates,capped,mean_tau,stderr,ci_lo,ci_hi"
    )?;
    for pt in points {
        if let Some(est) = &pt.estimate {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                family,
                est.n,
                est.epsilon,
                p,
                est.replicates_used,
                est.capped_count,
                est.mean_tau,
                est.stderr,
                est.ci_lo,
                est.ci_hi
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(theoretical_beta(1.0).unwrap(), 2.0);
        assert_eq!(theoretical_beta(2.0).unwrap(), 1.0);
        assert_eq!(theoretical_beta(4.0).unwrap(), 0.5);
        assert!(theoretical_beta(0.5).is_err());
    }

    #[test]
    fn constant_law_estimates_zero() {
        let g = Graph::cycle(8).unwrap();
        let est = estimate_consensus_time(
            &g,
            &DistributionSpec::constant(3.0f64),
            0.5,
            100,
            1,
            1_000,
        )
        .unwrap();
        assert_eq!(est.mean_tau, 0.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.capped_count, 0);
    }

    #[test]
    fn k2_rademacher_estimate_is_half() {
        // constant profile with probability 1/2 (tau 0), else one Exp(1) ring
        let g = Graph::complete(2).unwrap();
        let est = estimate_consensus_time(
            &g,
            &DistributionSpec::<f64>::rademacher(),
            0.5,
            10_000,
            7,
            1_000,
        )
        .unwrap();
        assert!(
            (est.mean_tau - 0.5).abs() < 0.5 * 0.07,
            "mean {}",
            est.mean_tau
        );
        assert!(est.ci_lo < est.mean_tau && est.mean_tau < est.ci_hi);
        assert!(!est.low_replicates && !est.lower_estimate);
    }

    #[test]
    fn wide_threshold_estimates_zero_for_rademacher() {
        let g = Graph::cycle(16).unwrap();
        let est = estimate_consensus_time(
            &g,
            &DistributionSpec::<f64>::rademacher(),
            2.0,
            200,
            3,
            1_000,
        )
        .unwrap();
        assert_eq!(est.mean_tau, 0.0);
    }

    #[test]
    fn all_capped_reports_estimation_failure() {
        let g = Graph::cycle(16).unwrap();
        let r = estimate_consensus_time(
            &g,
            &DistributionSpec::<f64>::rademacher(),
            0.01,
            10,
            3,
            1,
        );
        assert!(matches!(r, Err(Error::EstimationFailed(_))));
    }

    #[test]
    fn estimate_is_parallelism_invariant() {
        let g = Graph::cycle(16).unwrap();
        let run = |threads: usize| {
            with_pool(threads, || {
                estimate_consensus_time(
                    &g,
                    &DistributionSpec::<f64>::rademacher(),
                    0.25,
                    64,
                    99,
                    1 << 22,
                )
                .unwrap()
            })
            .unwrap()
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        assert_eq!(a.mean_tau.to_bits(), b.mean_tau.to_bits());
    }

    #[test]
    fn fit_recovers_planted_power_laws() {
        let pts: Vec<(f64, f64)> = [16.0, 32.0, 64.0, 128.0]
            .iter()
            .map(|&n: &f64| (n.ln(), (n * n).ln()))
            .collect();
        let fit = exponent_fit(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let pts: Vec<(f64, f64)> = [1.0, 0.5, 0.25]
            .iter()
            .map(|&e: &f64| ((1.0 / e).ln(), e.powi(-4).ln()))
            .collect();
        let fit = exponent_fit(&pts).unwrap();
        assert!((fit.slope - 4.0).abs() < 1e-12);

        let flat = exponent_fit(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert_eq!(flat.r_squared, 1.0);

        assert!(exponent_fit(&[(0.0, 0.0)]).is_err());
        assert!(exponent_fit(&[(1.0, 0.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn sweep_requires_enough_points() {
        let cfg = ExperimentConfig {
            family: GraphFamily::Cycle,
            sizes: vec![8, 16],
            distribution: DistributionRule::Fixed {
                spec: DistributionSpec::rademacher(),
            },
            epsilons: vec![0.5],
            p: 1.0,
            replicates: 4,
            base_seed: 1,
            max_events: 1 << 20,
            parallelism: 1,
        };
        assert!(scaling_sweep_n(&cfg).is_err());
        let mut cfg_eps = cfg.clone();
        cfg_eps.sizes = vec![8];
        cfg_eps.epsilons = vec![0.5, 0.25];
        assert!(scaling_sweep_eps(&cfg_eps).is_err());
    }

    #[test]
    fn eps_sweep_excludes_oversized_thresholds() {
        let cfg = ExperimentConfig {
            family: GraphFamily::Cycle,
            sizes: vec![12],
            distribution: DistributionRule::Fixed {
                spec: DistributionSpec::rademacher(),
            },
            epsilons: vec![3.0, 0.5, 0.25, 1.0],
            p: 1.0,
            replicates: 32,
            base_seed: 5,
            max_events: 1 << 22,
            parallelism: 0,
        };
        let out = scaling_sweep_eps(&cfg).unwrap();
        // the eps = 3 point reports zero mean and is excluded with a warning
        let zero_pt = out.points.iter().find(|p| p.epsilon == 3.0).unwrap();
        assert_eq!(zero_pt.estimate.as_ref().unwrap().mean_tau, 0.0);
        assert!(out.warnings.iter().any(|w| w.contains("zero mean")));
        let fit = out.fit.unwrap();
        assert_eq!(fit.points_used, 3);
    }

    #[test]
    fn eps_sweep_is_monotone_at_matched_seeds() {
        let cfg = ExperimentConfig {
            family: GraphFamily::Cycle,
            sizes: vec![16],
            distribution: DistributionRule::Fixed {
                spec: DistributionSpec::rademacher(),
            },
            epsilons: vec![1.0, 0.5, 0.25],
            p: 1.0,
            replicates: 48,
            base_seed: 11,
            max_events: 1 << 24,
            parallelism: 0,
        };
        let out = scaling_sweep_eps(&cfg).unwrap();
        let means: Vec<f64> = out
            .points
            .iter()
            .map(|p| p.estimate.as_ref().unwrap().mean_tau)
            .collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
    }

    #[test]
    fn subadditivity_with_zero_profile_is_trivial() {
        let g = Graph::cycle(8).unwrap();
        let r = subadditivity_suite(
            &g,
            &DistributionSpec::<f64>::rademacher(),
            &DistributionSpec::constant(0.0),
            0.25,
            0.25,
            50,
            13,
            1 << 22,
        )
        .unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.capped, 0);

        let vac = subadditivity_suite(
            &g,
            &DistributionSpec::<f64>::rademacher(),
            &DistributionSpec::rademacher(),
            0.25,
            0.25,
            0,
            13,
            1 << 22,
        )
        .unwrap();
        assert!(vac.vacuous);
        assert_eq!(vac.violations, 0);
    }

    #[test]
    fn csv_header_and_rows() {
        let pt = SweepPoint {
            size: 8,
            epsilon: 0.5,
            estimate: Some(EstimateResult {
                n: 8,
                epsilon: 0.5,
                mean_tau: 1.25,
                stderr: 0.1,
                ci_lo: 1.054,
                ci_hi: 1.446,
                replicates_used: 100,
                capped_count: 0,
                lower_estimate: false,
                low_replicates: false,
            }),
            error: None,
        };
        let mut buf = Vec::new();
        write_results_csv(&mut buf, "cycle", 1.0, &[pt]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "family,n,epsilon,p,replicates,capped,mean_tau,stderr,ci_lo,ci_hi"
        );
        assert_eq!(lines.next().unwrap(), "cycle,8,0.5,1,100,0,1.25,0.1,1.054,1.446");
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = ExperimentConfig {
            family: GraphFamily::Torus { dim: 2 },
            sizes: vec![4, 8],
            distribution: DistributionRule::LowerBound,
            epsilons: vec![1.0],
            p: 1.5,
            replicates: 10,
            base_seed: 42,
            max_events: default_max_events(),
            parallelism: 0,
        };
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);

        // defaults apply when omitted
        let minimal = r#"{
            "family": {"kind": "cycle"},
            "sizes": [8],
            "distribution": {"rule": "fixed", "spec": {"kind": "rademacher"}},
            "epsilons": [0.5],
            "p": 1.0,
            "replicates": 5,
            "base_seed": 1
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.max_events, 1_000_000_000);
        assert_eq!(cfg.parallelism, 0);
    }
}
