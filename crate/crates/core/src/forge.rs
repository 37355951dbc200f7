//! Instance families: planted far instances, free controls, template search
//! and the reduction pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{is_unique, Sign, SignedPartition};
use crate::pattern::{enumerate_copies, find_copy, PatternCopy, Permutation, Sequence};

/// Far instances up to this length are checked by enumeration at construction.
pub const FAR_VERIFY_CAP: usize = 64;
/// Reduction pairs up to this template length are checked at construction.
pub const REDUCTION_VERIFY_CAP: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarInstanceSpec {
    pub pi: Permutation,
    pub partition: SignedPartition,
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarInstance {
    pub sequence: Sequence,
    /// Start offset of the stacked copies inside each block interval.
    pub offsets: Vec<usize>,
    /// Largest admissible offset per block.
    pub offset_ranges: Vec<usize>,
    /// The planted pairwise disjoint copies, one per stack level.
    pub planted: Vec<PatternCopy>,
}

fn integral(x: f64) -> Option<usize> {
    let r = x.round();
    (r >= 0.0 && (x - r).abs() < 1e-9).then_some(r as usize)
}

/// Number of planted copies, after checking the parameter constraints.
pub fn planted_count(k: usize, n: usize, eps: f64) -> Result<usize> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidSpec(format!("n = {n} must be a positive multiple of k = {k}")));
    }
    if !(eps > 0.0 && eps <= 1.0 / (2 * k) as f64 + 1e-12) {
        return Err(Error::InvalidSpec(format!("eps = {eps} must lie in (0, 1/(2k)] with k = {k}")));
    }
    let t = integral(eps * n as f64)
        .ok_or_else(|| Error::InvalidSpec(format!("eps*n = {} is not an integer", eps * n as f64)))?;
    if t < k {
        return Err(Error::InvalidSpec(format!("eps*n = {t} must be at least k = {k}")));
    }
    Ok(t)
}

/// Nearest conforming (n, eps) to a requested pair, or an error when no
/// conforming pair exists near it.
pub fn snap_far_parameters(k: usize, n: usize, eps: f64) -> Result<(usize, f64)> {
    if k == 0 {
        return Err(Error::InvalidSpec("k must be positive".into()));
    }
    let n2 = k * ((n as f64 / k as f64).round() as usize).max(1);
    let hi = n2 / (2 * k);
    if hi < k {
        return Err(Error::InvalidSpec(format!("n = {n2} is too short for k = {k}")));
    }
    let t = ((eps * n2 as f64).round() as usize).clamp(k, hi);
    Ok((n2, t as f64 / n2 as f64))
}

pub fn forge_far_instance(spec: &FarInstanceSpec) -> Result<FarInstance> {
    let pi = &spec.pi;
    let k = pi.len();
    let n = spec.n;
    let t = planted_count(k, n, spec.eps)?;
    if spec.partition.partition().k() != k {
        return Err(Error::InvalidSpec("partition does not belong to the pattern".into()));
    }
    if !is_unique(pi, &spec.partition)? {
        return Err(Error::InvalidSpec(format!(
            "signed partition {} is not unique",
            spec.partition.render(pi)
        )));
    }
    let m = n / k;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut values = vec![0.0; n];
    let mut offsets = Vec::new();
    let mut ranges = Vec::new();
    let mut planted = vec![Vec::with_capacity(k); t];
    let blocks = spec.partition.partition().blocks();
    for (block, &sign) in blocks.iter().zip(spec.partition.signs()) {
        let d = block.len();
        let base = m * block.start;
        let range = d * (m - t);
        let off = rng.gen_range(0..=range);
        let stack_end = base + off + t * d;
        let (before, after) = match sign {
            Sign::Plus => (-1.0, n as f64),
            Sign::Minus => (n as f64, -1.0),
        };
        values[base..base + off].fill(before);
        values[stack_end..m * block.end].fill(after);
        for r in 0..t {
            let level = match sign {
                Sign::Plus => r,
                Sign::Minus => t - 1 - r,
            };
            for l in 0..d {
                let pos = base + off + r * d + l;
                values[pos] = level as f64 + pi.get(block.start + l) as f64 / (2 * k) as f64;
                planted[level].push(pos);
            }
        }
        offsets.push(off);
        ranges.push(range);
    }
    let sequence = Sequence::from_vec_unchecked(values);
    let planted: Vec<PatternCopy> = planted.into_iter().map(PatternCopy).collect();
    if n <= FAR_VERIFY_CAP {
        let found = enumerate_copies(&sequence, pi, Some(t + 1));
        let mut sorted = planted.clone();
        sorted.sort();
        if found != sorted {
            return Err(Error::InvalidSpec(format!(
                "construction check failed: {} copies found, {} planted",
                found.len(),
                t
            )));
        }
    }
    Ok(FarInstance { sequence, offsets, offset_ranges: ranges, planted })
}

/// A strictly monotone sequence avoiding `pi`: increasing unless `pi` is the
/// identity, decreasing otherwise.
pub fn forge_free_instance(pi: &Permutation, n: usize, seed: u64) -> Result<Sequence> {
    if pi.len() < 2 {
        return Err(Error::InvalidSpec("every sequence of length >= 1 contains the pattern of length 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = if pi.is_increasing() { -1.0 } else { 1.0 };
    let mut acc = 0.0;
    let values = (0..n)
        .map(|_| {
            acc += step * rng.gen_range(1.0..2.0);
            acc
        })
        .collect();
    Ok(Sequence::from_vec_unchecked(values))
}

/// S = (-1)^delta, T, 2^(2m - delta), with T sorted in (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateSearchInstance {
    t: Sequence,
    s: Sequence,
    delta: usize,
}

impl TemplateSearchInstance {
    pub fn new(t: Sequence, delta: usize) -> Result<Self> {
        let m = t.len();
        if m == 0 || delta > 2 * m {
            return Err(Error::InvalidSpec(format!("need m >= 1 and delta <= 2m, got m={m}, delta={delta}")));
        }
        let v = t.values();
        if !v.windows(2).all(|w| w[0] < w[1]) || v[0] <= 0.0 || v[m - 1] >= 1.0 {
            return Err(Error::InvalidSpec("T must be strictly increasing inside (0, 1)".into()));
        }
        let mut s = vec![-1.0; delta];
        s.extend_from_slice(v);
        s.resize(3 * m, 2.0);
        Ok(TemplateSearchInstance { t, s: Sequence::from_vec_unchecked(s), delta })
    }

    /// Rebuilds an instance from its two arrays, checking their shape.
    pub fn from_arrays(s: Sequence, t: Sequence) -> Result<Self> {
        let m = t.len();
        if s.len() != 3 * m {
            return Err(Error::InvalidSpec(format!("S has length {}, expected {}", s.len(), 3 * m)));
        }
        let delta = s.values().iter().take_while(|&&v| v == -1.0).count();
        let inst = Self::new(t, delta)?;
        if inst.s != s {
            return Err(Error::InvalidSpec("S is not padding around T".into()));
        }
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &Sequence {
        &self.t
    }

    pub fn s(&self) -> &Sequence {
        &self.s
    }

    /// Ground truth; solvers never see it.
    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Recovers the offset from full knowledge of both arrays.
    pub fn recover_offset(&self) -> Option<usize> {
        let m = self.m();
        (0..=2 * m).find(|&d| (0..m).all(|i| self.s.get(d + i) == self.t.get(i)))
    }
}

pub fn forge_template_search(m: usize, seed: u64) -> Result<TemplateSearchInstance> {
    if m == 0 {
        return Err(Error::InvalidSpec("m must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = loop {
        let mut t: Vec<f64> = (0..m)
            .map(|_| loop {
                let x: f64 = rng.gen();
                if x > 0.0 {
                    break x;
                }
            })
            .collect();
        t.sort_by(f64::total_cmp);
        if t.windows(2).all(|w| w[0] < w[1]) {
            break t;
        }
    };
    let delta = rng.gen_range(0..=2 * m);
    TemplateSearchInstance::new(Sequence::from_vec_unchecked(t), delta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionPair {
    pub f_yes: Sequence,
    pub f_no: Sequence,
    pub source: TemplateSearchInstance,
    pub deltas: Vec<f64>,
    /// The m disjoint copies of (1,3,2) in `f_no`.
    pub copies: Vec<PatternCopy>,
}

impl ReductionPair {
    /// 0-based prefix position of the upper perturbed copy of `T_l` (l 1-based).
    pub fn upper_prefix_position(m: usize, l: usize) -> usize {
        2 * (m - l) + 1
    }

    /// Position pairs whose relative order differs between the two sequences.
    pub fn differing_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.source.m();
        let delta = self.source.delta();
        (1..=m)
            .map(|l| (Self::upper_prefix_position(m, l), 2 * m + delta + l - 1))
            .collect()
    }
}

/// Builds (f_yes, f_no) of length 5m from a template-search instance.
///
/// The prefix holds, for each template value, a lower and an upper perturbed
/// copy side by side. The pairs are laid out in decreasing template order so
/// that no two pairs combine with a tail entry into a copy.
pub fn forge_reduction_pair(inst: &TemplateSearchInstance) -> Result<ReductionPair> {
    let m = inst.m();
    if m < 2 {
        return Err(Error::InvalidSpec("the reduction needs m >= 2".into()));
    }
    let t = inst.t().values();
    let deltas: Vec<f64> = (0..m)
        .map(|i| {
            let left = if i > 0 { t[i] - t[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < m { t[i + 1] - t[i] } else { f64::INFINITY };
            left.min(right) / 4.0
        })
        .collect();
    if deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidSpec("template values must be distinct".into()));
    }
    let mut prefix = vec![0.0; 2 * m];
    for l in 1..=m {
        let hi = ReductionPair::upper_prefix_position(m, l);
        prefix[hi - 1] = t[l - 1] - deltas[l - 1];
        prefix[hi] = t[l - 1] + deltas[l - 1];
    }
    let s = inst.s().values();
    let mut f_no = prefix.clone();
    f_no.extend_from_slice(s);
    let mut f_yes = prefix;
    f_yes.extend_from_slice(s);
    let delta = inst.delta();
    let mut copies = Vec::with_capacity(m);
    for l in (1..=m).rev() {
        let tail = 2 * m + delta + l - 1;
        f_yes[tail] += 2.0 * deltas[l - 1];
        let hi = ReductionPair::upper_prefix_position(m, l);
        copies.push(PatternCopy(vec![hi - 1, hi, tail]));
    }
    let pair = ReductionPair {
        f_yes: Sequence::from_vec_unchecked(f_yes),
        f_no: Sequence::from_vec_unchecked(f_no),
        source: inst.clone(),
        deltas,
        copies,
    };
    if m <= REDUCTION_VERIFY_CAP {
        let pi: Permutation = Permutation::new(vec![1, 3, 2])?;
        if find_copy(&pair.f_yes, &pi).is_some() {
            return Err(Error::InvalidSpec("construction check failed: f_yes contains a copy".into()));
        }
        if enumerate_copies(&pair.f_no, &pi, Some(m + 1)) != pair.copies {
            return Err(Error::InvalidSpec("construction check failed: unexpected copies in f_no".into()));
        }
    }
    Ok(pair)
}
