//! Initial-opinion laws: atomic samplers, analytic moments, the threshold
//! split, and the heavy-tailed constructions used for lower-bound sweeps.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Description of an initial-opinion law. All laws here are atomic except
/// `Uniform`; the heavy-tailed ones are symmetric by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[serde(bound(
    serialize = "R: Serialize",
    deserialize = "R: serde::de::Deserialize<'de>"
))]
pub enum DistributionSpec<R: Real> {
    /// Point mass at `c`.
    Constant { c: R },
    /// Uniform on `{-1, +1}`.
    Rademacher,
    /// Continuous uniform on `[a, b)`.
    Uniform { a: R, b: R },
    /// Symmetric law on `{-x0, 0, +x0}` with `P(+-x0) = 1/(2 x0^p)`,
    /// so the p-th absolute moment is exactly 1.
    ThreePoint { x0: R, p: R },
    /// Symmetric integer law with `P(+-m) = 1/(c2 m^(p_prime + 1))` for
    /// `m = 1..=m_max`, remaining mass on 0. With `c2` from
    /// [`power_law_normalizer`], the p-th absolute moment is at most 1.
    PowerLaw { p: R, p_prime: R, c2: R, m_max: u64 },
    /// Arbitrary finite law given as `[value, probability]` atoms.
    CustomDiscrete { atoms: Vec<(R, R)> },
}

impl<R: Real> DistributionSpec<R> {
    pub fn constant(c: R) -> Self {
        DistributionSpec::Constant { c }
    }

    pub fn rademacher() -> Self {
        DistributionSpec::Rademacher
    }

    pub fn uniform(a: R, b: R) -> Result<Self> {
        let spec = DistributionSpec::Uniform { a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn three_point(x0: R, p: R) -> Result<Self> {
        let spec = DistributionSpec::ThreePoint { x0, p };
        spec.validate()?;
        Ok(spec)
    }

    /// Power-law spec with the normalizer computed from `(p, p_prime, m_max)`.
    pub fn power_law(p: R, p_prime: R, m_max: u64) -> Result<Self> {
        let c2 = power_law_normalizer(p.to_f64_lossy(), p_prime.to_f64_lossy(), m_max)?;
        let spec = DistributionSpec::PowerLaw {
            p,
            p_prime,
            c2: R::of(c2),
            m_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn custom_discrete(atoms: Vec<(R, R)>) -> Result<Self> {
        let spec = DistributionSpec::CustomDiscrete { atoms };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the structural invariants of the law.
    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::Constant { c } => {
                if !c.is_finite() {
                    return Err(Error::InvalidParameter("constant must be finite".into()));
                }
            }
            DistributionSpec::Rademacher => {}
            DistributionSpec::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::InvalidParameter(format!(
                        "uniform needs a < b, got [{a}, {b})"
                    )));
                }
            }
            DistributionSpec::ThreePoint { x0, p } => {
                if !(*x0 > R::one()) {
                    return Err(Error::InvalidParameter(format!(
                        "three-point needs x0 > 1, got {x0}"
                    )));
                }
                if !(*p >= R::one()) {
                    return Err(Error::InvalidParameter(format!(
                        "three-point needs p >= 1, got {p}"
                    )));
                }
            }
            DistributionSpec::PowerLaw {
                p,
                p_prime,
                c2,
                m_max,
            } => {
                let (p, pp, c2) = (p.to_f64_lossy(), p_prime.to_f64_lossy(), c2.to_f64_lossy());
                if !(p >= 1.0 && pp > p) {
                    return Err(Error::InvalidParameter(format!(
                        "power law needs p_prime > p >= 1, got p = {p}, p_prime = {pp}"
                    )));
                }
                if *m_max == 0 || c2 <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "power law needs m_max >= 1 and c2 > 0".into(),
                    ));
                }
                // c2 must make both the total probability and the p-th
                // moment sum admissible
                let (mut prob, mut moment) = (0.0, 0.0);
                for m in (1..=*m_max).rev() {
                    let m = m as f64;
                    let w = m.powf(-pp - 1.0) / c2;
                    prob += 2.0 * w;
                    moment += 2.0 * m.powf(p) * w;
                }
                if prob > 1.0 + 1e-12 || moment > 1.0 + 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "normalizer too small: total probability {prob}, p-th moment {moment}"
                    )));
                }
            }
            DistributionSpec::CustomDiscrete { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::InvalidParameter("no atoms".into()));
                }
                let mut total = 0.0f64;
                for &(v, pr) in atoms {
                    if !v.is_finite() {
                        return Err(Error::InvalidParameter(format!("non-finite atom {v}")));
                    }
                    let pr = pr.to_f64_lossy();
                    if !(pr >= 0.0) {
                        return Err(Error::InvalidParameter(format!(
                            "negative probability {pr}"
                        )));
                    }
                    total += pr;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "probabilities sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One draw from the law. For tight loops compile a [`Sampler`] once.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Result<R> {
        Ok(self.sampler()?.sample(rng))
    }

    /// Compiles the inverse-CDF tables for repeated sampling.
    pub fn sampler(&self) -> Result<Sampler<R>> {
        Sampler::compile(self)
    }

    /// Analytic absolute moment `E|X|^q` for `q >= 1`.
    pub fn lp_norm(&self, q: R) -> Result<R> {
        if !(q >= R::one()) {
            return Err(Error::InvalidParameter(format!(
                "moment order must be >= 1, got {q}"
            )));
        }
        self.validate()?;
        Ok(match self {
            DistributionSpec::Constant { c } => c.abs().powf(q),
            DistributionSpec::Rademacher => R::one(),
            DistributionSpec::Uniform { a, b } => {
                // integral of |x|^q via sign(x) |x|^(q+1) / (q+1)
                let s = |x: R| x.signum() * x.abs().powf(q + R::one()) / (q + R::one());
                (s(*b) - s(*a)) / (*b - *a)
            }
            DistributionSpec::ThreePoint { x0, p } => x0.powf(q - *p),
            DistributionSpec::PowerLaw {
                p_prime,
                c2,
                m_max,
                ..
            } => {
                if q >= *p_prime {
                    return Err(Error::DivergentMoment(format!(
                        "order {q} moment of the untruncated law diverges for p_prime = {p_prime}"
                    )));
                }
                let (qf, ppf, c2f) = (
                    q.to_f64_lossy(),
                    p_prime.to_f64_lossy(),
                    c2.to_f64_lossy(),
                );
                let mut sum = 0.0;
                for m in (1..=*m_max).rev() {
                    sum += 2.0 * (m as f64).powf(qf - ppf - 1.0) / c2f;
                }
                R::of(sum)
            }
            DistributionSpec::CustomDiscrete { atoms } => atoms
                .iter()
                .map(|&(v, pr)| pr * v.abs().powf(q))
                .sum(),
        })
    }

    /// `E[X^2 1_{|X| <= b}]`, the second moment truncated at level `b`.
    pub fn truncated_second_moment(&self, b: R) -> Result<R> {
        if !(b > R::zero()) {
            return Err(Error::InvalidParameter(format!(
                "truncation level must be positive, got {b}"
            )));
        }
        self.validate()?;
        Ok(match self {
            DistributionSpec::Constant { c } => {
                if c.abs() <= b {
                    *c * *c
                } else {
                    R::zero()
                }
            }
            DistributionSpec::Rademacher => {
                if R::one() <= b {
                    R::one()
                } else {
                    R::zero()
                }
            }
            DistributionSpec::Uniform { a, b: hi } => {
                let lo_c = a.max(-b);
                let hi_c = hi.min(b);
                if lo_c >= hi_c {
                    R::zero()
                } else {
                    let three = R::of(3.0);
                    (hi_c.powi(3) - lo_c.powi(3)) / (three * (*hi - *a))
                }
            }
            DistributionSpec::ThreePoint { x0, p } => {
                if *x0 <= b {
                    x0.powf(R::of(2.0) - *p)
                } else {
                    R::zero()
                }
            }
            DistributionSpec::PowerLaw {
                p_prime,
                c2,
                m_max,
                ..
            } => {
                let cutoff = (*m_max).min(b.to_f64_lossy().floor().max(0.0) as u64);
                let (ppf, c2f) = (p_prime.to_f64_lossy(), c2.to_f64_lossy());
                let mut sum = 0.0;
                for m in (1..=cutoff).rev() {
                    sum += 2.0 * (m as f64).powf(1.0 - ppf) / c2f;
                }
                R::of(sum)
            }
            DistributionSpec::CustomDiscrete { atoms } => atoms
                .iter()
                .filter(|&&(v, _)| v.abs() <= b)
                .map(|&(v, pr)| pr * v * v)
                .sum(),
        })
    }

    /// Width of the support (`sup - inf`); the oscillation of any profile
    /// drawn from the law never exceeds this.
    pub fn osc_upper_bound(&self) -> R {
        match self {
            DistributionSpec::Constant { .. } => R::zero(),
            DistributionSpec::Rademacher => R::of(2.0),
            DistributionSpec::Uniform { a, b } => *b - *a,
            DistributionSpec::ThreePoint { x0, .. } => *x0 + *x0,
            DistributionSpec::PowerLaw { m_max, .. } => R::of(2.0 * *m_max as f64),
            DistributionSpec::CustomDiscrete { atoms } => {
                let (lo, hi) = atoms.iter().fold(
                    (R::infinity(), R::neg_infinity()),
                    |(lo, hi), &(v, _)| (lo.min(v), hi.max(v)),
                );
                hi - lo
            }
        }
    }
}

/// Compiled sampler with precomputed cumulative tables.
#[derive(Debug, Clone)]
pub struct Sampler<R: Real> {
    kind: Compiled<R>,
}

#[derive(Debug, Clone)]
enum Compiled<R> {
    Constant(R),
    Rademacher,
    Uniform { a: R, width: R },
    ThreePoint { x0: R, atom: f64 },
    // cumulative doubled magnitude weights; atom m has total mass 2*q_m,
    // split evenly between signs inside its interval
    SymmetricMagnitudes { cum: Vec<f64>, values: Vec<R> },
    Discrete { cum: Vec<f64>, values: Vec<R> },
}

impl<R: Real> Sampler<R> {
    fn compile(spec: &DistributionSpec<R>) -> Result<Self> {
        spec.validate()?;
        let kind = match spec {
            DistributionSpec::Constant { c } => Compiled::Constant(*c),
            DistributionSpec::Rademacher => Compiled::Rademacher,
            DistributionSpec::Uniform { a, b } => Compiled::Uniform {
                a: *a,
                width: *b - *a,
            },
            DistributionSpec::ThreePoint { x0, p } => Compiled::ThreePoint {
                x0: *x0,
                atom: 0.5 * x0.to_f64_lossy().powf(-p.to_f64_lossy()),
            },
            DistributionSpec::PowerLaw {
                p_prime,
                c2,
                m_max,
                ..
            } => {
                let (ppf, c2f) = (p_prime.to_f64_lossy(), c2.to_f64_lossy());
                let mut cum = Vec::with_capacity(*m_max as usize);
                let mut values = Vec::with_capacity(*m_max as usize);
                let mut acc = 0.0;
                for m in 1..=*m_max {
                    acc += 2.0 * (m as f64).powf(-ppf - 1.0) / c2f;
                    cum.push(acc);
                    values.push(R::of(m as f64));
                }
                Compiled::SymmetricMagnitudes { cum, values }
            }
            DistributionSpec::CustomDiscrete { atoms } => {
                let mut cum = Vec::with_capacity(atoms.len());
                let mut values = Vec::with_capacity(atoms.len());
                let mut acc = 0.0;
                for &(v, pr) in atoms {
                    acc += pr.to_f64_lossy();
                    cum.push(acc);
                    values.push(v);
                }
                Compiled::Discrete { cum, values }
            }
        };
        Ok(Sampler { kind })
    }

    /// One draw.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> R {
        match &self.kind {
            Compiled::Constant(c) => *c,
            Compiled::Rademacher => {
                if rng.random::<bool>() {
                    R::one()
                } else {
                    -R::one()
                }
            }
            Compiled::Uniform { a, width } => *a + *width * R::of(rng.random::<f64>()),
            Compiled::ThreePoint { x0, atom } => {
                let u: f64 = rng.random();
                if u < *atom {
                    *x0
                } else if u < 2.0 * *atom {
                    -*x0
                } else {
                    R::zero()
                }
            }
            Compiled::SymmetricMagnitudes { cum, values } => {
                let u: f64 = rng.random();
                let total = *cum.last().expect("non-empty");
                if u >= total {
                    return R::zero();
                }
                let i = cum.partition_point(|&c| c <= u);
                let prev = if i == 0 { 0.0 } else { cum[i - 1] };
                let half = 0.5 * (cum[i] - prev);
                if u - prev < half {
                    values[i]
                } else {
                    -values[i]
                }
            }
            Compiled::Discrete { cum, values } => {
                let u: f64 = rng.random();
                let i = cum.partition_point(|&c| c <= u).min(values.len() - 1);
                values[i]
            }
        }
    }

    /// Samples an i.i.d. profile of length `n`.
    pub fn sample_profile<G: Rng + ?Sized>(&self, n: usize, rng: &mut G) -> Vec<R> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// Smallest normalizer (to relative 1e-6) making the symmetric power law
/// with exponent `p_prime + 1` both a probability law and `L^p`-bounded by
/// 1 when truncated at `m_max`. The moment sum dominates termwise, so this
/// is `2 * sum of m^(p - p_prime - 1)`.
pub fn power_law_normalizer(p: f64, p_prime: f64, m_max: u64) -> Result<f64> {
    if !(p >= 1.0) || !(p_prime > p) || m_max == 0 {
        return Err(Error::InvalidParameter(format!(
            "normalizer needs p_prime > p >= 1 and m_max >= 1, got ({p}, {p_prime}, {m_max})"
        )));
    }
    // summed small-to-large for accuracy
    let mut sum = 0.0;
    for m in (1..=m_max).rev() {
        sum += (m as f64).powf(p - p_prime - 1.0);
    }
    Ok(2.0 * sum)
}

/// Splits a profile at threshold `b`: `g` keeps the entries with
/// `|f| <= b` (others zeroed), `h` the rest, so `g + h == f` exactly.
pub fn threshold_split<R: Real>(f: &[R], b: R) -> Result<(Vec<R>, Vec<R>)> {
    if !(b > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "threshold must be positive, got {b}"
        )));
    }
    let mut g = vec![R::zero(); f.len()];
    let mut h = vec![R::zero(); f.len()];
    for (i, &x) in f.iter().enumerate() {
        if x.abs() <= b {
            g[i] = x;
        } else {
            h[i] = x;
        }
    }
    Ok((g, h))
}

/// A three-point law scaled for the consensus-time lower-bound experiments,
/// together with the scale formula it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundSpec<R: Real> {
    pub spec: DistributionSpec<R>,
    pub x0: R,
    pub formula: &'static str,
}

/// The tight lower-bound construction: a three-point law whose spike scale
/// is `n * eps` for `p < 2` and `n^(1/p)` for `p >= 2` (proof-side constant
/// factors dropped; the scale is clamped above 1 so the law stays valid).
/// Requires `eps` in `[n^(1/p - 1), 1]`.
pub fn lower_bound_spec<R: Real>(p: R, n: usize, epsilon: R) -> Result<LowerBoundSpec<R>> {
    if !(p >= R::one()) {
        return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n must be >= 2, got {n}"
        )));
    }
    let nf = R::of(n as f64);
    let lo = nf.powf(R::one() / p - R::one());
    let slack = R::of(1.0 - 1e-12);
    if !(epsilon >= lo * slack && epsilon <= R::one() / slack) {
        return Err(Error::Precondition(format!(
            "epsilon {epsilon} outside [{lo}, 1] for p = {p}, n = {n}"
        )));
    }
    let floor = R::of(1.0 + 1e-6);
    let (x0, formula) = if p < R::of(2.0) {
        ((nf * epsilon).max(floor), "x0 = max(n * eps, 1 + 1e-6)")
    } else {
        (
            nf.powf(R::one() / p).max(floor),
            "x0 = max(n^(1/p), 1 + 1e-6)",
        )
    };
    Ok(LowerBoundSpec {
        spec: DistributionSpec::three_point(x0, p)?,
        x0,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_always_returns_itself() {
        let s = DistributionSpec::constant(0.0f64).sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(s.sample(&mut rng), 0.0);
        }
    }

    #[test]
    fn rademacher_draws_are_balanced_signs() {
        let s = DistributionSpec::<f64>::rademacher().sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = 100_000;
        let mut sum = 0.0;
        for _ in 0..draws {
            let x = s.sample(&mut rng);
            assert!(x == 1.0 || x == -1.0);
            sum += x;
        }
        assert!((sum / draws as f64).abs() < 0.02);
    }

    #[test]
    fn three_point_atom_frequency() {
        let s = DistributionSpec::three_point(4.0f64, 1.0)
            .unwrap()
            .sampler()
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 100_000;
        let mut hits = 0;
        for _ in 0..draws {
            if s.sample(&mut rng).abs() == 4.0 {
                hits += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        assert!((freq - 0.25).abs() < 0.02, "spike frequency {freq}");
    }

    #[test]
    fn symmetric_laws_have_zero_sample_mean() {
        // 4 sigma bands from the analytic second moments
        let million = 1_000_000u64;
        let cases: Vec<(DistributionSpec<f64>, f64)> = vec![
            (DistributionSpec::rademacher(), 1.0),
            (DistributionSpec::three_point(4.0, 1.0).unwrap(), 4.0),
            (
                DistributionSpec::power_law(1.0, 2.0, 1_000_000).unwrap(),
                8.75,
            ),
        ];
        for (i, (spec, second_moment)) in cases.into_iter().enumerate() {
            let s = spec.sampler().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let mut sum = 0.0;
            for _ in 0..million {
                sum += s.sample(&mut rng);
            }
            let mean = sum / million as f64;
            let band = 4.0 * (second_moment / million as f64).sqrt();
            assert!(mean.abs() < band, "law {i}: mean {mean}, band {band}");
        }
    }

    #[test]
    fn power_law_atom_frequencies() {
        let spec = DistributionSpec::power_law(1.0f64, 2.0, 1_000_000).unwrap();
        let c2 = match spec {
            DistributionSpec::PowerLaw { c2, .. } => c2,
            _ => unreachable!(),
        };
        let s = spec.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 1_000_000;
        let mut counts = [0usize; 6];
        for _ in 0..draws {
            let m = s.sample(&mut rng).abs() as usize;
            if (1..=5).contains(&m) {
                counts[m] += 1;
            }
        }
        for m in 1..=5usize {
            let expected = 2.0 / (c2 * (m as f64).powi(3));
            let freq = counts[m] as f64 / draws as f64;
            let sigma = (expected * (1.0 - expected) / draws as f64).sqrt();
            assert!(
                (freq - expected).abs() < 4.0 * sigma,
                "atom {m}: freq {freq}, expected {expected}"
            );
        }
    }

    #[test]
    fn three_point_moment_is_exactly_one_at_p() {
        for xi in 1..=5 {
            for pi in 1..=5 {
                let x0 = 1.0 + xi as f64;
                let p = 1.0 + 0.5 * (pi - 1) as f64;
                let spec = DistributionSpec::three_point(x0, p).unwrap();
                assert_eq!(spec.lp_norm(p).unwrap(), 1.0, "x0 = {x0}, p = {p}");
            }
        }
    }

    #[test]
    fn moments_of_simple_laws() {
        assert_eq!(
            DistributionSpec::<f64>::rademacher().lp_norm(3.7).unwrap(),
            1.0
        );
        assert_eq!(
            DistributionSpec::constant(-2.0f64).lp_norm(2.0).unwrap(),
            4.0
        );
        // uniform on [-1, 1): E|X|^2 = 1/3
        let u = DistributionSpec::uniform(-1.0f64, 1.0).unwrap();
        assert!((u.lp_norm(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn power_law_moment_divergence() {
        let spec = DistributionSpec::power_law(1.0f64, 2.0, 1000).unwrap();
        assert!(matches!(
            spec.lp_norm(2.0),
            Err(Error::DivergentMoment(_))
        ));
        assert!(spec.lp_norm(1.0).unwrap() <= 1.0);
    }

    #[test]
    fn normalizer_partial_sums() {
        // frozen from high-precision partial sums
        let c2 = power_law_normalizer(1.0, 2.0, 1_000_000).unwrap();
        assert!((c2 - 3.2898661337).abs() < 1e-9, "c2 = {c2}");
        assert!((c2 - 3.2899).abs() < 1e-3);

        assert_eq!(power_law_normalizer(1.0, 2.0, 1).unwrap(), 2.0);

        let c2 = power_law_normalizer(1.0, 1.5, 1_000_000).unwrap();
        assert!((c2 - 5.2207506984).abs() < 1e-9, "c2 = {c2}");
        // adding the analytic tail 4/sqrt(m_max) recovers the infinite sum
        assert!((c2 + 4.0 / 1000.0 - 5.2245).abs() < 5e-4);

        assert!(power_law_normalizer(1.0, 1.0, 10).is_err());
        assert!(power_law_normalizer(0.5, 2.0, 10).is_err());
    }

    #[test]
    fn threshold_split_examples() {
        let (g, h) = threshold_split(&[5.0, 0.5, -3.0], 2.0).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 0.0]);
        assert_eq!(h, vec![5.0, 0.0, -3.0]);

        let f = [1.0, -2.0, 0.0];
        let (g, h) = threshold_split(&f, 10.0).unwrap();
        assert_eq!(g, f.to_vec());
        assert_eq!(h, vec![0.0; 3]);

        // boundary |f| = b stays in g
        let (g, h) = threshold_split(&[2.0, -2.0], 2.0).unwrap();
        assert_eq!(g, vec![2.0, -2.0]);
        assert_eq!(h, vec![0.0, 0.0]);

        assert!(threshold_split(&f, 0.0).is_err());
    }

    #[test]
    fn lower_bound_scales() {
        let lb = lower_bound_spec(1.0f64, 100, 1.0).unwrap();
        assert_eq!(lb.x0, 100.0);
        let lb = lower_bound_spec(2.0f64, 100, 0.5).unwrap();
        assert_eq!(lb.x0, 10.0);
        // p = 1 admits only eps = 1
        assert!(matches!(
            lower_bound_spec(1.0f64, 100, 0.5),
            Err(Error::Precondition(_))
        ));
        assert!(lower_bound_spec(1.0f64, 100, 1e-4).is_err());
        // clamped above 1 when the scale degenerates
        let lb = lower_bound_spec(1.5f64, 2, 1.0).unwrap();
        assert!(lb.x0 > 1.0);
        lb.spec.validate().unwrap();
    }

    #[test]
    fn truncated_second_moments() {
        let tp = DistributionSpec::three_point(4.0f64, 1.0).unwrap();
        assert_eq!(tp.truncated_second_moment(4.0).unwrap(), 4.0);
        assert_eq!(tp.truncated_second_moment(3.0).unwrap(), 0.0);
        assert_eq!(
            DistributionSpec::<f64>::rademacher()
                .truncated_second_moment(2.0)
                .unwrap(),
            1.0
        );
    }

    #[test]
    fn custom_discrete_validation_and_sampling() {
        assert!(DistributionSpec::custom_discrete(vec![(1.0f64, 0.5), (2.0, 0.6)]).is_err());
        let spec =
            DistributionSpec::custom_discrete(vec![(-1.0f64, 0.25), (0.0, 0.5), (1.0, 0.25)])
                .unwrap();
        let s = spec.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..10_000 {
            *counts.entry(s.sample(&mut rng) as i64).or_insert(0) += 1;
        }
        assert!(counts[&0] > 4500 && counts[&0] < 5500);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = DistributionSpec::three_point(4.0f64, 1.0).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"three-point\""));
        let back: DistributionSpec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);

        let custom =
            DistributionSpec::custom_discrete(vec![(-1.0f64, 0.5), (1.0, 0.5)]).unwrap();
        let json = serde_json::to_string(&custom).unwrap();
        assert!(json.contains("\"atoms\":[[-1.0,0.5],[1.0,0.5]]"));
    }
}
