//! Non-adaptive one-sided testers: the uniform sampler and the interval
//! tester that mixes whole intervals with singleton samples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{AccessMode, OracleError, QueryOracle};
use crate::pattern::{find_copy_in, PatternCopy, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<PatternCopy>,
    pub queries_used: usize,
    pub rounds_used: usize,
    pub budget_exceeded: bool,
    pub fell_back: bool,
    /// Constants the run used, by name.
    pub constants: Vec<(String, f64)>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn rejected(&self) -> bool {
        self.decision == Decision::Reject
    }
}

fn require_non_adaptive(oracle: &QueryOracle) -> Result<()> {
    if oracle.mode() != AccessMode::NonAdaptive || oracle.rounds_used() > 0 {
        return Err(Error::Precondition("tester needs a fresh non-adaptive oracle".into()));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition(format!("eps = {eps} must lie in (0, 1]")));
    }
    Ok(())
}

/// Queries the sorted positions in one batch and searches for a copy.
fn run_batch(
    oracle: &mut QueryOracle,
    pi: &Permutation,
    mut positions: Vec<usize>,
    constants: Vec<(String, f64)>,
    warnings: Vec<String>,
) -> Result<Verdict> {
    positions.sort_unstable();
    positions.dedup();
    let mut verdict = Verdict {
        decision: Decision::Accept,
        witness: None,
        queries_used: 0,
        rounds_used: 0,
        budget_exceeded: false,
        fell_back: false,
        constants,
        warnings,
    };
    let values = match oracle.query_batch(&positions) {
        Ok(v) => v,
        Err(OracleError::Budget { .. }) => {
            verdict.budget_exceeded = true;
            return Ok(verdict);
        }
        Err(e) => return Err(e.into()),
    };
    verdict.queries_used = oracle.queries_used();
    verdict.rounds_used = oracle.rounds_used();
    if let Some(c) = find_copy_in(&values, pi) {
        verdict.decision = Decision::Reject;
        verdict.witness = Some(PatternCopy(c.into_iter().map(|i| positions[i]).collect()));
    }
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Leading constant; defaults to 4k.
    pub constant: Option<f64>,
    /// Exact number of queries, overriding the formula.
    pub queries: Option<usize>,
}

/// ceil(c * eps^(-1/k) * n^(1-1/k)), capped at n.
pub fn sampler_queries(n: usize, k: usize, eps: f64, constant: f64) -> usize {
    let k = k as f64;
    let q = constant * eps.powf(-1.0 / k) * (n as f64).powf(1.0 - 1.0 / k);
    (q.ceil() as usize).min(n)
}

/// Queries a uniform random set of positions and rejects iff it holds a copy.
///
/// For a fixed seed the sampled sets are nested in the sample size.
pub fn sampler_test(
    oracle: &mut QueryOracle,
    pi: &Permutation,
    eps: f64,
    seed: u64,
    config: &SamplerConfig,
) -> Result<Verdict> {
    require_non_adaptive(oracle)?;
    check_eps(eps)?;
    let n = oracle.len();
    let k = pi.len();
    let c = config.constant.unwrap_or(4.0 * k as f64);
    let q = config.queries.map_or_else(|| sampler_queries(n, k, eps, c), |q| q.min(n));
    let positions = nested_sample(n, q, seed);
    let constants = vec![("c_s".into(), c), ("q".into(), q as f64)];
    run_batch(oracle, pi, positions, constants, Vec::new())
}

/// The first `q` picks of a seeded partial shuffle of `0..n`.
pub fn nested_sample(n: usize, q: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<usize> = (0..n).collect();
    let (picked, _) = all.partial_shuffle(&mut rng, q.min(n));
    // picks are stored back to front
    picked.iter().rev().copied().collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalConfig {
    /// The constant c; defaults to 100k^2.
    pub c: Option<f64>,
    /// Per-element inclusion probability, overriding c*m/(eps*n).
    pub inclusion: Option<f64>,
    /// Leading constant of the sampler used on degenerate sizing.
    pub fallback_constant: Option<f64>,
}

/// Interval length (eps*n)^(1-1/(k-1)) before rounding.
pub fn interval_length(n: usize, k: usize, eps: f64) -> f64 {
    (eps * n as f64).powf(1.0 - 1.0 / (k as f64 - 1.0))
}

/// Runs both cases in one batch.
///
/// Case 1 keeps each length-m interval whole with probability p and adds
/// singletons with probability p; case 2 adds singletons with probability p.
/// A case whose draw is too large contributes nothing.
pub fn interval_test(
    oracle: &mut QueryOracle,
    pi: &Permutation,
    eps: f64,
    seed: u64,
    config: &IntervalConfig,
) -> Result<Verdict> {
    require_non_adaptive(oracle)?;
    check_eps(eps)?;
    let k = pi.len();
    if k < 3 {
        return Err(Error::Precondition("interval tester needs k >= 3".into()));
    }
    let n = oracle.len();
    let mut warnings = Vec::new();
    let validity = 0.01 * (n as f64).powf(-1.0 / 9.0);
    if eps < validity {
        warnings.push(format!("eps = {eps} is below the validity range ~ n^(-1/9) = {validity:.4}"));
    }
    let m_raw = interval_length(n, k, eps);
    if !(m_raw >= 1.0) || m_raw > n as f64 {
        let cfg = SamplerConfig { constant: config.fallback_constant, queries: None };
        let mut v = sampler_test(oracle, pi, eps, seed, &cfg)?;
        v.fell_back = true;
        v.warnings.push(format!("interval length {m_raw:.3} is degenerate for n = {n}; used the sampler"));
        return Ok(v);
    }
    let m = m_raw.ceil() as usize;
    let c = config.c.unwrap_or(100.0 * (k * k) as f64);
    let p = config
        .inclusion
        .unwrap_or(c * m as f64 / (eps * n as f64))
        .clamp(0.0, 1.0);
    let cap_intervals = 100.0 * c / eps;
    let cap_singles = 100.0 * c * m as f64 / eps;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = n.div_ceil(m);
    let picked: Vec<usize> = (0..intervals).filter(|_| rng.gen::<f64>() < p).collect();
    let singles_1: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < p).collect();
    let singles_2: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < p).collect();

    let mut positions = Vec::new();
    let mut aborted = Vec::new();
    if picked.len() as f64 > cap_intervals || singles_1.len() as f64 > cap_singles {
        aborted.push("case 1");
    } else {
        for &b in &picked {
            positions.extend(b * m..((b + 1) * m).min(n));
        }
        positions.extend_from_slice(&singles_1);
    }
    if singles_2.len() as f64 > cap_singles {
        aborted.push("case 2");
    } else {
        positions.extend_from_slice(&singles_2);
    }
    for a in aborted {
        warnings.push(format!("{a} drew too many queries and was dropped"));
    }
    let constants = vec![
        ("c".into(), c),
        ("m".into(), m as f64),
        ("p".into(), p),
        ("interval_cap".into(), cap_intervals),
        ("singleton_cap".into(), cap_singles),
    ];
    run_batch(oracle, pi, positions, constants, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::validate_witness;
    use crate::Sequence;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn sampler_sees_everything_when_small() {
        let f = Sequence::new(vec![1.0, 3.0, 2.0]).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::NonAdaptive);
        let v = sampler_test(&mut o, &perm("1,3,2"), 0.5, 1, &SamplerConfig::default()).unwrap();
        assert!(v.rejected());
        assert_eq!(v.witness, Some(PatternCopy(vec![0, 1, 2])));
        assert!(validate_witness(o.transcript(), &perm("1,3,2"), v.witness.as_ref().unwrap()));
    }

    #[test]
    fn nested_samples() {
        for seed in 0..20 {
            let big = nested_sample(100, 40, seed);
            let small = nested_sample(100, 25, seed);
            assert_eq!(&big[..25], &small[..]);
            let mut s = big.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), 40);
        }
    }

    #[test]
    fn sampler_budget_exhaustion_accepts() {
        let f = Sequence::new(vec![1.0, 3.0, 2.0, 4.0]).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::NonAdaptive).with_budget(2);
        let v = sampler_test(&mut o, &perm("1,3,2"), 0.5, 1, &SamplerConfig::default()).unwrap();
        assert_eq!(v.decision, Decision::Accept);
        assert!(v.budget_exceeded);
        assert_eq!(o.queries_used(), 0);
    }

    #[test]
    fn testers_need_non_adaptive_oracle() {
        let f = Sequence::new(vec![1.0, 3.0, 2.0]).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::Adaptive);
        assert!(sampler_test(&mut o, &perm("1,3,2"), 0.5, 1, &SamplerConfig::default()).is_err());
        assert!(interval_test(&mut o, &perm("1,3,2"), 0.5, 1, &IntervalConfig::default()).is_err());
    }

    #[test]
    fn interval_falls_back_on_tiny_inputs() {
        let f = Sequence::new(vec![1.0, 3.0, 2.0]).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::NonAdaptive);
        let v = interval_test(&mut o, &perm("1,3,2"), 0.1, 1, &IntervalConfig::default()).unwrap();
        assert!(v.fell_back);
    }

    #[test]
    fn interval_rejects_k2() {
        let f = Sequence::new(vec![2.0, 1.0]).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::NonAdaptive);
        assert!(interval_test(&mut o, &perm("2,1"), 0.5, 1, &IntervalConfig::default()).is_err());
    }

    #[test]
    fn interval_caps_drop_cases() {
        let f = Sequence::new((0..400).map(|i| i as f64).collect()).unwrap();
        let mut o = QueryOracle::new(&f, AccessMode::NonAdaptive);
        let cfg = IntervalConfig { c: Some(0.001), inclusion: Some(1.0), fallback_constant: None };
        let v = interval_test(&mut o, &perm("1,3,2"), 0.5, 1, &cfg).unwrap();
        assert_eq!(v.queries_used, 0);
        assert_eq!(v.warnings.len(), 2);
    }
}
