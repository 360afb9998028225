//! The mass-transport view of the averaging dynamics: fragmentation
//! trajectories of a probability vector, the doubly stochastic transport
//! matrix, quadratic mass statistics, the drift identity, and the tail
//! experiments built on them.

use std::io::Write;

use rayon::prelude::*;

use crate::dynamics::ClockStream;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;
use crate::seed::derive_seed;

/// Full-matrix operations are capped at this size; single-row evolution
/// (a [`MassVector`]) has no cap.
pub const MATRIX_CAP: usize = 1024;

/// A probability mass vector evolving under the averaging events.
#[derive(Debug, Clone, PartialEq)]
pub struct MassVector<R: Real> {
    mu: Vec<R>,
    time: R,
}

impl<R: Real> MassVector<R> {
    /// Validates nonnegativity and total mass 1 (up to rounding at scale).
    pub fn new(mu: Vec<R>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidParameter("empty mass vector".into()));
        }
        if let Some(bad) = mu.iter().find(|x| !(x.is_finite() && **x >= R::zero())) {
            return Err(Error::InvalidParameter(format!(
                "mass entries must be finite and nonnegative, got {bad}"
            )));
        }
        let total: R = mu.iter().copied().sum();
        if (total - R::one()).abs() > R::sum_tolerance(mu.len()) {
            return Err(Error::InvalidParameter(format!(
                "mass must sum to 1, got {total}"
            )));
        }
        Ok(MassVector {
            mu,
            time: R::zero(),
        })
    }

    /// Point mass at vertex `v`.
    pub fn delta(n: usize, v: usize) -> Result<Self> {
        if v >= n {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range 0..{n}"
            )));
        }
        let mut mu = vec![R::zero(); n];
        mu[v] = R::one();
        Self::new(mu)
    }

    /// Uniform mass `1/n` everywhere (the fixed point).
    pub fn uniform(n: usize) -> Result<Self> {
        let w = R::one() / R::of(n as f64);
        Self::new(vec![w; n])
    }

    pub fn values(&self) -> &[R] {
        &self.mu
    }

    pub fn time(&self) -> R {
        self.time
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    fn apply_average(&mut self, v: usize, w: usize) {
        let avg = R::of(0.5) * (self.mu[v] + self.mu[w]);
        self.mu[v] = avg;
        self.mu[w] = avg;
    }

    /// Largest entry.
    pub fn linf(&self) -> R {
        self.mu.iter().fold(R::zero(), |a, &x| a.max(x))
    }

    /// Largest deviation from the uniform mass `1/n`.
    pub fn linf_star(&self) -> R {
        let inv_n = R::one() / R::of(self.mu.len() as f64);
        self.mu
            .iter()
            .fold(R::zero(), |a, &x| a.max((x - inv_n).abs()))
    }

    /// Quadratic statistics with respect to a graph structure.
    pub fn stats(&self, g: &Graph) -> FragStats<R> {
        let inv_n = R::one() / R::of(self.mu.len() as f64);
        let q: R = self.mu.iter().map(|&x| x * x).sum();
        let q_star: R = self
            .mu
            .iter()
            .map(|&x| {
                let d = x - inv_n;
                d * d
            })
            .sum();
        let mut x_dirichlet = R::zero();
        for &(v, w) in g.edges() {
            let d = self.mu[v] - self.mu[w];
            x_dirichlet += d * d;
        }
        FragStats {
            q,
            q_star,
            x_dirichlet,
        }
    }
}

/// Quadratic mass statistics: `q = sum mu^2`, `q_star = sum (mu - 1/n)^2`
/// (so `q = q_star + 1/n`), and the Dirichlet sum over edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FragStats<R> {
    pub q: R,
    pub q_star: R,
    pub x_dirichlet: R,
}

/// The dense transport matrix: entry `(v, w)` is the mass now at `w` that
/// originated at source `v`. Row `v` evolves as a fragmentation trajectory
/// started from the point mass at `v`, so the matrix stays doubly
/// stochastic under the dynamics.
///
/// Storage is transposed (grouped by current vertex `w`) so each averaging
/// event updates two contiguous blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix<R: Real> {
    n: usize,
    // data[w * n + v] = M(v, w)
    data: Vec<R>,
    time: R,
}

impl<R: Real> MassMatrix<R> {
    /// Identity transport (time 0). Capped at [`MATRIX_CAP`] vertices.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        if n > MATRIX_CAP {
            return Err(Error::InvalidParameter(format!(
                "full-matrix operations are capped at {MATRIX_CAP} vertices, got {n}"
            )));
        }
        let mut data = vec![R::zero(); n * n];
        for v in 0..n {
            data[v * n + v] = R::one();
        }
        Ok(MassMatrix {
            n,
            data,
            time: R::zero(),
        })
    }

    #[cfg(test)]
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = vec![R::zero(); n * n];
        for w in 0..n {
            for v in 0..n {
                data[w * n + v] = f(v, w);
            }
        }
        MassMatrix {
            n,
            data,
            time: R::zero(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> R {
        self.time
    }

    /// Entry `M(v, w)`: mass at current vertex `w` from source `v`.
    pub fn entry(&self, v: usize, w: usize) -> R {
        self.data[w * self.n + v]
    }

    fn apply_average(&mut self, w1: usize, w2: usize) {
        let n = self.n;
        let (a, b) = if w1 < w2 { (w1, w2) } else { (w2, w1) };
        let (head, tail) = self.data.split_at_mut(b * n);
        let row_a = &mut head[a * n..(a + 1) * n];
        let row_b = &mut tail[..n];
        let half = R::of(0.5);
        for (x, y) in row_a.iter_mut().zip(row_b.iter_mut()) {
            let avg = half * (*x + *y);
            *x = avg;
            *y = avg;
        }
    }

    /// Sum over current vertices of row `v` (1 for doubly stochastic M).
    pub fn row_sum(&self, v: usize) -> R {
        (0..self.n).map(|w| self.entry(v, w)).sum()
    }

    /// Sum over sources of column `w` (1 for doubly stochastic M).
    pub fn col_sum(&self, w: usize) -> R {
        let block = &self.data[w * self.n..(w + 1) * self.n];
        block.iter().copied().sum()
    }

    /// `M^T f0`: the opinion profile transported from `f0`.
    pub fn transpose_apply(&self, f0: &[R]) -> Vec<R> {
        (0..self.n)
            .map(|w| {
                let block = &self.data[w * self.n..(w + 1) * self.n];
                block.iter().zip(f0).map(|(&m, &f)| m * f).sum()
            })
            .collect()
    }

    /// `mu0 M`: the mass vector transported from `mu0`.
    pub fn vector_apply(&self, mu0: &[R]) -> Vec<R> {
        // same contraction as transpose_apply by the storage layout
        self.transpose_apply(mu0)
    }

    /// Writes the dense matrix as CSV, one row per source vertex.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        for v in 0..self.n {
            let mut line = String::new();
            for w in 0..self.n {
                if w > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{}", self.entry(v, w)));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Uniform norms and extremal squared row/column masses of a transport
/// matrix: `linf` is the largest entry, `linf_star` the largest absolute
/// entry of `M - J/n`, and `row_l2_max`/`col_l2_max` the largest squared
/// sums over a source row / current column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms<R> {
    pub linf: R,
    pub linf_star: R,
    pub row_l2_max: R,
    pub col_l2_max: R,
}

pub fn matrix_norms<R: Real>(m: &MassMatrix<R>) -> MatrixNorms<R> {
    let n = m.size();
    let inv_n = R::one() / R::of(n as f64);
    let mut linf = R::zero();
    let mut linf_star = R::zero();
    for &x in &m.data {
        linf = linf.max(x);
        linf_star = linf_star.max((x - inv_n).abs());
    }
    let mut row_l2_max = R::zero();
    for v in 0..n {
        let s: R = (0..n)
            .map(|w| {
                let x = m.entry(v, w);
                x * x
            })
            .sum();
        row_l2_max = row_l2_max.max(s);
    }
    let mut col_l2_max = R::zero();
    for w in 0..n {
        let block = &m.data[w * n..(w + 1) * n];
        let s: R = block.iter().map(|&x| x * x).sum();
        col_l2_max = col_l2_max.max(s);
    }
    MatrixNorms {
        linf,
        linf_star,
        row_l2_max,
        col_l2_max,
    }
}

/// Pulls timed events off a clock stream, holding back the first event
/// beyond the requested horizon so consecutive horizons share one stream.
pub(crate) struct EventDriver {
    clock: ClockStream,
    generated_until: f64,
    pending: Option<(f64, usize)>,
}

impl EventDriver {
    pub(crate) fn new(seed: u64, edge_count: usize) -> Result<Self> {
        Ok(EventDriver {
            clock: ClockStream::new(seed, edge_count)?,
            generated_until: 0.0,
            pending: None,
        })
    }

    /// Applies every event with time `<= t` in order.
    pub(crate) fn advance_to(&mut self, t: f64, mut apply: impl FnMut(f64, usize)) {
        loop {
            if self.pending.is_none() {
                let (dt, e) = self.clock.next_event();
                self.generated_until += dt;
                self.pending = Some((self.generated_until, e));
            }
            let (time, edge) = self.pending.expect("just filled");
            if time > t {
                return;
            }
            self.pending = None;
            apply(time, edge);
        }
    }
}

fn check_grid<R: Real>(t_grid: &[R]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty snapshot grid".into()));
    }
    let mut prev = R::zero();
    for &t in t_grid {
        if !(t.is_finite() && t >= R::zero()) {
            return Err(Error::InvalidParameter(format!(
                "grid times must be finite and nonnegative, got {t}"
            )));
        }
        if t < prev {
            return Err(Error::InvalidParameter(
                "snapshot grid must be ascending".into(),
            ));
        }
        prev = t;
    }
    Ok(())
}

/// Evolves a fragmentation trajectory under one clock stream, snapshotting
/// the mass vector and its statistics at each grid time.
pub fn evolve_mass<R: Real>(
    g: &Graph,
    mu0: &MassVector<R>,
    t_grid: &[R],
    seed: u64,
) -> Result<Vec<(MassVector<R>, FragStats<R>)>> {
    g.require_connected()?;
    if mu0.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "mass vector length {} does not match vertex count {}",
            mu0.len(),
            g.vertex_count()
        )));
    }
    check_grid(t_grid)?;
    let mut driver = EventDriver::new(seed, g.edge_count())?;
    let mut state = mu0.clone();
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        driver.advance_to(t.to_f64_lossy(), |_, e| {
            let (v, w) = g.edge(e);
            state.apply_average(v, w);
        });
        let mut snap = state.clone();
        snap.time = t;
        let stats = snap.stats(g);
        out.push((snap, stats));
    }
    Ok(out)
}

/// Evolves the full transport matrix under one clock stream, snapshotting
/// at each grid time. Subject to the [`MATRIX_CAP`].
pub fn evolve_matrix<R: Real>(
    g: &Graph,
    t_grid: &[R],
    seed: u64,
) -> Result<Vec<MassMatrix<R>>> {
    g.require_connected()?;
    check_grid(t_grid)?;
    let mut driver = EventDriver::new(seed, g.edge_count())?;
    let mut state = MassMatrix::identity(g.vertex_count())?;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        driver.advance_to(t.to_f64_lossy(), |_, e| {
            let (v, w) = g.edge(e);
            state.apply_average(v, w);
        });
        let mut snap = state.clone();
        snap.time = t;
        out.push(snap);
    }
    Ok(out)
}

/// Maximum discrepancies between the directly simulated trajectories and
/// their transport-matrix representations at a common time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingReport<R> {
    /// `max |f_t - M_t^T f_0|`
    pub f_discrepancy: R,
    /// `max |mu_t - mu_0 M_t|`
    pub mu_discrepancy: R,
}

/// Runs the opinion dynamics, the fragmentation trajectory, and the full
/// matrix under one shared clock stream up to time `t`, and reports how far
/// the direct states are from `M_t^T f0` and `mu0 M_t`.
pub fn coupling_check<R: Real>(
    g: &Graph,
    f0: &[R],
    mu0: &MassVector<R>,
    t: R,
    seed: u64,
) -> Result<CouplingReport<R>> {
    g.require_connected()?;
    let n = g.vertex_count();
    if f0.len() != n || mu0.len() != n {
        return Err(Error::InvalidParameter(format!(
            "profile length {} / mass length {} do not match vertex count {n}",
            f0.len(),
            mu0.len()
        )));
    }
    if !(t.is_finite() && t >= R::zero()) {
        return Err(Error::InvalidParameter(format!("bad time {t}")));
    }
    let mut driver = EventDriver::new(seed, g.edge_count())?;
    let mut f: Vec<R> = f0.to_vec();
    let mut mu = mu0.clone();
    let mut m = MassMatrix::identity(n)?;
    driver.advance_to(t.to_f64_lossy(), |_, e| {
        let (v, w) = g.edge(e);
        let avg = R::of(0.5) * (f[v] + f[w]);
        f[v] = avg;
        f[w] = avg;
        mu.apply_average(v, w);
        m.apply_average(v, w);
    });
    let f_from_matrix = m.transpose_apply(f0);
    let mu_from_matrix = m.vector_apply(mu0.values());
    let f_discrepancy = f
        .iter()
        .zip(&f_from_matrix)
        .fold(R::zero(), |a, (&x, &y)| a.max((x - y).abs()));
    let mu_discrepancy = mu
        .values()
        .iter()
        .zip(&mu_from_matrix)
        .fold(R::zero(), |a, (&x, &y)| a.max((x - y).abs()));
    Ok(CouplingReport {
        f_discrepancy,
        mu_discrepancy,
    })
}

/// Both sides of the deterministic drift identity for the centered
/// quadratic mass `Q*`: the exhaustive one-step generator over edges, and
/// `-X/2` with `X` the Dirichlet sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheck<R> {
    pub exact_drift: R,
    pub minus_half_x: R,
}

/// Applies each edge once to the current state (each edge rings at unit
/// rate, so the sum of the one-step changes of `Q*` is exactly the
/// generator) and compares with `-X/2`.
pub fn drift_check<R: Real>(g: &Graph, mu: &MassVector<R>) -> Result<DriftCheck<R>> {
    if mu.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "mass vector length {} does not match vertex count {}",
            mu.len(),
            g.vertex_count()
        )));
    }
    let inv_n = R::one() / R::of(mu.len() as f64);
    let half = R::of(0.5);
    let mut exact_drift = R::zero();
    let mut x = R::zero();
    for &(v, w) in g.edges() {
        let a = mu.values()[v];
        let b = mu.values()[w];
        let avg = half * (a + b);
        let da = a - inv_n;
        let db = b - inv_n;
        let dm = avg - inv_n;
        exact_drift += R::of(2.0) * dm * dm - da * da - db * db;
        let d = a - b;
        x += d * d;
    }
    Ok(DriftCheck {
        exact_drift,
        minus_half_x: -half * x,
    })
}

/// Which tail statistic a [`tail_experiment`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// `Q_t >= 6 t*^(-1/2)` with `t* = min(t, n^2)`; bound `exp(-t*/30)`.
    QBound,
    /// `max entry of M_t >= 10 t^(-1/2)`; bound `4n exp(-t/60)`,
    /// stated for `t <= n^2`.
    LinfBound,
    /// `max |mu_t - 1/n| > exp(-t/(8n^2))` along a single row;
    /// bound `n exp(-t/(4n^2))`.
    StarDecay,
}

impl TailKind {
    pub fn name(&self) -> &'static str {
        match self {
            TailKind::QBound => "q_bound",
            TailKind::LinfBound => "linf_bound",
            TailKind::StarDecay => "star_decay",
        }
    }
}

/// Outcome of a tail experiment: the empirical violation frequency next to
/// the probability bound evaluated at `(n, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub kind: TailKind,
    pub n: usize,
    pub t: f64,
    pub replicates: usize,
    pub violations: usize,
    pub frequency: f64,
    pub threshold: f64,
    pub bound: f64,
    /// Set when `t > n^2`, where the `LinfBound` form is not asserted.
    pub beyond_mixing_window: bool,
}

/// Runs independent replicates of the relevant trajectory and counts how
/// often the tail statistic violates its threshold.
pub fn tail_experiment<R: Real>(
    g: &Graph,
    source: usize,
    t: f64,
    replicates: usize,
    seed: u64,
    kind: TailKind,
) -> Result<TailReport> {
    g.require_connected()?;
    let n = g.vertex_count();
    if source >= n {
        return Err(Error::InvalidParameter(format!(
            "source {source} out of range 0..{n}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time must be positive, got {t}"
        )));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("need at least one replicate".into()));
    }
    let n2 = (n * n) as f64;
    let t_star = t.min(n2);
    let (threshold, bound) = match kind {
        TailKind::QBound => (6.0 / t_star.sqrt(), (-t_star / 30.0).exp()),
        TailKind::LinfBound => (10.0 / t.sqrt(), (4.0 * n as f64 * (-t / 60.0).exp()).min(1.0)),
        TailKind::StarDecay => (
            (-t / (8.0 * n2)).exp(),
            (n as f64 * (-t / (4.0 * n2)).exp()).min(1.0),
        ),
    };
    let violations = (0..replicates)
        .into_par_iter()
        .map(|rep| -> Result<bool> {
            let rep_seed = derive_seed(seed, rep as u64);
            let stat: f64 = match kind {
                TailKind::QBound => {
                    let mu0 = MassVector::<R>::delta(n, source)?;
                    let snaps = evolve_mass(g, &mu0, &[R::of(t)], rep_seed)?;
                    snaps[0].1.q.to_f64_lossy()
                }
                TailKind::StarDecay => {
                    let mu0 = MassVector::<R>::delta(n, source)?;
                    let snaps = evolve_mass(g, &mu0, &[R::of(t)], rep_seed)?;
                    snaps[0].0.linf_star().to_f64_lossy()
                }
                TailKind::LinfBound => {
                    let snaps = evolve_matrix::<R>(g, &[R::of(t)], rep_seed)?;
                    matrix_norms(&snaps[0]).linf.to_f64_lossy()
                }
            };
            Ok(match kind {
                // the decay statement is a strict upper bound, the others
                // bound the probability of reaching the threshold
                TailKind::StarDecay => stat > threshold,
                _ => stat >= threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&v| v)
        .count();
    Ok(TailReport {
        kind,
        n,
        t,
        replicates,
        violations,
        frequency: violations as f64 / replicates as f64,
        threshold,
        bound,
        beyond_mixing_window: t > n2,
    })
}

/// Circular distance between vertices of an `n`-cycle.
pub fn cycle_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// Outcome of the localized-mass experiment on the cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaReport {
    pub n: usize,
    pub t: f64,
    pub replicates: usize,
    pub successes: usize,
    pub frequency: f64,
    /// Strict distance bound `4 sqrt(t)` defining the ball around the source.
    pub radius: f64,
    /// True when the ball already covers the whole cycle.
    pub ball_covers_cycle: bool,
}

/// On the `n`-cycle, estimates the probability that at least half of the
/// mass started at `o` stays within cycle distance `< 4 sqrt(t)` of `o` at
/// time `t`. Stated for `n >= 15` and `t >= 120`.
pub fn omega_event_check<R: Real>(
    n: usize,
    o: usize,
    t: f64,
    replicates: usize,
    seed: u64,
) -> Result<OmegaReport> {
    if n < 15 {
        return Err(Error::Precondition(format!(
            "the localized-mass statement needs n >= 15, got {n}"
        )));
    }
    if !(t >= 120.0) {
        return Err(Error::Precondition(format!(
            "the localized-mass statement needs t >= 120, got {t}"
        )));
    }
    if o >= n {
        return Err(Error::InvalidParameter(format!(
            "source {o} out of range 0..{n}"
        )));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("need at least one replicate".into()));
    }
    let g = Graph::cycle(n)?;
    let radius = 4.0 * t.sqrt();
    let in_ball: Vec<bool> = (0..n)
        .map(|v| (cycle_distance(o, v, n) as f64) < radius)
        .collect();
    let successes = (0..replicates)
        .into_par_iter()
        .map(|rep| -> Result<bool> {
            let mu0 = MassVector::<R>::delta(n, o)?;
            let snaps = evolve_mass(&g, &mu0, &[R::of(t)], derive_seed(seed, rep as u64))?;
            let mass: R = snaps[0]
                .0
                .values()
                .iter()
                .zip(&in_ball)
                .filter(|(_, &inside)| inside)
                .map(|(&m, _)| m)
                .sum();
            Ok(mass >= R::of(0.5))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&s| s)
        .count();
    Ok(OmegaReport {
        n,
        t,
        replicates,
        successes,
        frequency: successes as f64 / replicates as f64,
        radius,
        ball_covers_cycle: radius > (n / 2) as f64,
    })
}

/// Writes fragmentation snapshots as CSV `time,q,q_star,linf,linf_star`.
pub fn write_snapshot_csv<R: Real, W: Write>(
    out: &mut W,
    snapshots: &[(MassVector<R>, FragStats<R>)],
) -> Result<()> {
    writeln!(out, "time,q,q_star,linf,linf_star")?;
    for (mv, stats) in snapshots {
        writeln!(
            out,
            "{},{},{},{},{}",
            mv.time(),
            stats.q,
            stats.q_star,
            mv.linf(),
            mv.linf_star()
        )?;
    }
    Ok(())
}
