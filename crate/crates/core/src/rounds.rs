//! Round-limited interval narrowing on promise inputs, and a generator for
//! such inputs.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{AccessMode, OracleError, QueryOracle};
use crate::pattern::Sequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSearchParams {
    pub interval: Range<usize>,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub rounds: usize,
    /// Lower bound on the density of points above `alpha`.
    pub gamma: f64,
    /// Promised number of points with value in (a, b).
    pub ell: usize,
    /// Leading constant of the per-round sample size.
    pub narrowing_constant: f64,
    /// Final round samples ceil(final_constant * |I| / ell) points.
    pub final_constant: f64,
}

impl RoundSearchParams {
    pub fn new(interval: Range<usize>, alpha: f64, a: f64, b: f64, rounds: usize, gamma: f64, ell: usize) -> Self {
        RoundSearchParams {
            interval,
            alpha,
            a,
            b,
            rounds,
            gamma,
            ell,
            narrowing_constant: 8.0,
            final_constant: 4.0,
        }
    }

    /// Per-round sample size N for an interval of the given length.
    pub fn narrowing_samples(&self, len: usize) -> usize {
        let r = self.rounds as f64;
        let s = (len as f64).powf(1.0 / (r + 1.0));
        let sr = s / r;
        let n = self.narrowing_constant * ((r + 1.0).log2() / self.gamma) * sr * sr.max(2.0).log2();
        n.ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    /// A position with value in (a, b).
    Witness(usize),
    /// Positions k < k2 with alpha < f(k2) < f(k).
    ViolatingPair(usize, usize),
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub queries_used: usize,
    pub rounds_used: usize,
    pub samples_per_round: usize,
}

fn sample(rng: &mut ChaCha8Rng, range: &Range<usize>, count: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..count).map(|_| rng.gen_range(range.clone())).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn round_limited_search(oracle: &mut QueryOracle, params: &RoundSearchParams, seed: u64) -> Result<SearchReport> {
    let r = params.rounds;
    if r == 0 || oracle.mode() != AccessMode::Rounds(r) || oracle.rounds_used() > 0 {
        return Err(Error::Precondition("search needs a fresh oracle limited to `rounds` batches".into()));
    }
    let whole = &params.interval;
    if whole.start >= whole.end || whole.end > oracle.len() || params.ell == 0 || !(params.gamma > 0.0) || !(params.a < params.b) {
        return Err(Error::Precondition("need a non-empty interval, ell >= 1, gamma > 0 and a < b".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_round = params.narrowing_samples(whole.len());
    let mut current = whole.clone();
    let report = |oracle: &QueryOracle, outcome| SearchReport {
        outcome,
        queries_used: oracle.queries_used(),
        rounds_used: oracle.rounds_used(),
        samples_per_round: per_round,
    };
    for _ in 1..r {
        let positions = sample(&mut rng, &current, per_round);
        let values = match oracle.query_batch(&positions) {
            Ok(v) => v,
            Err(OracleError::Budget { .. }) => return Ok(report(oracle, SearchOutcome::NotFound)),
            Err(e) => return Err(e.into()),
        };
        let filtered: Vec<(usize, f64)> = positions
            .iter()
            .copied()
            .zip(values)
            .filter(|&(_, v)| v > params.alpha)
            .collect();
        if filtered.is_empty() {
            return Ok(report(oracle, SearchOutcome::NotFound));
        }
        if let Some(&(p, _)) = filtered.iter().find(|&&(_, v)| params.a < v && v < params.b) {
            return Ok(report(oracle, SearchOutcome::Witness(p)));
        }
        if let Some(w) = filtered.windows(2).find(|w| w[1].1 < w[0].1) {
            return Ok(report(oracle, SearchOutcome::ViolatingPair(w[0].0, w[1].0)));
        }
        let start = filtered
            .iter()
            .rev()
            .find(|&&(_, v)| v <= params.a)
            .map_or(current.start, |&(p, _)| p + 1);
        let end = filtered
            .iter()
            .find(|&&(_, v)| v >= params.b)
            .map_or(current.end, |&(p, _)| p);
        if start >= end {
            return Ok(report(oracle, SearchOutcome::NotFound));
        }
        current = start..end;
    }
    let count = (params.final_constant * current.len() as f64 / params.ell as f64).ceil() as usize;
    let positions = sample(&mut rng, &current, count.max(1));
    let values = match oracle.query_batch(&positions) {
        Ok(v) => v,
        Err(OracleError::Budget { .. }) => return Ok(report(oracle, SearchOutcome::NotFound)),
        Err(e) => return Err(e.into()),
    };
    let hit = positions
        .iter()
        .zip(values)
        .find(|&(_, v)| v > params.alpha && params.a < v && v < params.b)
        .map(|(&p, _)| p);
    Ok(report(oracle, hit.map_or(SearchOutcome::NotFound, SearchOutcome::Witness)))
}

/// A synthetic input meeting the search promise: the points above `alpha`
/// have density about one half and increase, and `ell` consecutive ones
/// among them take values in (a, b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromiseInstance {
    pub sequence: Sequence,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub above: Vec<usize>,
    pub witnesses: Vec<usize>,
}

pub fn forge_promise_instance(n: usize, ell: usize, seed: u64) -> Result<PromiseInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut above: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if above.len() < ell || ell == 0 {
        return Err(Error::InvalidSpec(format!("cannot plant {ell} witnesses in length {n}")));
    }
    above.sort_unstable();
    let start = rng.gen_range(0..=above.len() - ell);
    let mut values: Vec<f64> = (0..n).map(|_| -rng.gen_range(1.0..2.0)).collect();
    let count = above.len() as f64;
    for (j, &p) in above.iter().enumerate() {
        values[p] = if j < start {
            (j + 1) as f64 / (start + 1) as f64
        } else if j < start + ell {
            1.0 + (j - start + 1) as f64 / (ell + 1) as f64
        } else {
            2.0 + (j + 1) as f64 / count
        };
    }
    let witnesses = above[start..start + ell].to_vec();
    Ok(PromiseInstance {
        sequence: Sequence::new(values)?,
        alpha: 0.0,
        a: 1.0,
        b: 2.0,
        above,
        witnesses,
    })
}

/// Swaps two random points above the threshold so the restriction is no
/// longer monotone.
pub fn scramble_above(inst: &mut PromiseInstance, swaps: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = inst.sequence.values().to_vec();
    let mut order = inst.above.clone();
    order.shuffle(&mut rng);
    for pair in order.chunks(2).take(swaps) {
        if let [x, y] = *pair {
            values.swap(x, y);
        }
    }
    inst.sequence = Sequence::new(values).expect("finite");
}
