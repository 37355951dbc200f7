//! Signed partitions, the blowup sequence and the unique-partition number.

use std::fmt;
use std::ops::ControlFlow;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{for_each_copy, Permutation, Sequence};

/// Largest k for which uniqueness of a blowup is checked.
pub const UNIQUENESS_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The consecutive block at 0-based positions `start..end` of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConsecutiveBlock {
    pub start: usize,
    pub end: usize,
}

impl ConsecutiveBlock {
    pub fn new(start: usize, end: usize, k: usize) -> Result<Self> {
        if start >= end || end > k {
            return Err(Error::InvalidBlock(format!(
                "positions {start}..{end} are not a non-empty block of a length-{k} permutation"
            )));
        }
        Ok(ConsecutiveBlock { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn is_long(&self) -> bool {
        self.len() >= 2
    }

    /// Last position of the block (inclusive).
    pub fn last(&self) -> usize {
        self.end - 1
    }

    pub fn values<'a>(&self, pi: &'a Permutation) -> &'a [usize] {
        &pi.values()[self.start..self.end]
    }

    pub fn min_value(&self, pi: &Permutation) -> usize {
        *self.values(pi).iter().min().unwrap()
    }

    pub fn max_value(&self, pi: &Permutation) -> usize {
        *self.values(pi).iter().max().unwrap()
    }

    /// 0-based position of the block minimum within `pi`.
    pub fn argmin(&self, pi: &Permutation) -> usize {
        (self.start..self.end).min_by_key(|&i| pi.get(i)).unwrap()
    }

    pub fn argmax(&self, pi: &Permutation) -> usize {
        (self.start..self.end).max_by_key(|&i| pi.get(i)).unwrap()
    }

    pub fn overlaps(&self, other: &ConsecutiveBlock) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn render(&self, pi: &Permutation) -> String {
        let v = self.values(pi);
        if v.len() == 1 {
            v[0].to_string()
        } else {
            format!("({})", v.iter().join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    k: usize,
    blocks: Vec<ConsecutiveBlock>,
}

impl Partition {
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidPartition(format!("sizes {sizes:?} must be positive")));
        }
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push(ConsecutiveBlock { start, end: start + s });
            start += s;
        }
        Ok(Partition { k: start, blocks })
    }

    pub fn from_blocks(blocks: Vec<ConsecutiveBlock>, k: usize) -> Result<Self> {
        let mut expect = 0;
        for b in &blocks {
            if b.start != expect || b.end <= b.start {
                return Err(Error::InvalidPartition(format!(
                    "blocks {blocks:?} do not tile 0..{k} contiguously"
                )));
            }
            expect = b.end;
        }
        if expect != k || k == 0 {
            return Err(Error::InvalidPartition(format!("blocks {blocks:?} do not cover 0..{k}")));
        }
        Ok(Partition { k, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[ConsecutiveBlock] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn render(&self, pi: &Permutation) -> String {
        format!("({})", self.blocks.iter().map(|b| b.render(pi)).join(","))
    }
}

/// All compositions of `k`, by decreasing number of parts and then
/// lexicographically by part sizes.
pub fn compositions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return Vec::new();
    }
    let mut all: Vec<Vec<usize>> = (0..1u64 << (k - 1))
        .map(|mask| {
            let mut sizes = Vec::new();
            let mut run = 1;
            for i in 0..k - 1 {
                if mask >> i & 1 == 1 {
                    sizes.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            sizes.push(run);
            sizes
        })
        .collect();
    all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    all
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPartition {
    partition: Partition,
    signs: Vec<Sign>,
}

impl SignedPartition {
    pub fn new(pi: &Permutation, partition: Partition, signs: Vec<Sign>) -> Result<Self> {
        if partition.k() != pi.len() {
            return Err(Error::InvalidPartition(format!(
                "partition of length {} used with a pattern of length {}",
                partition.k(),
                pi.len()
            )));
        }
        if signs.len() != partition.size() {
            return Err(Error::InvalidPartition(format!(
                "{} signs for {} blocks",
                signs.len(),
                partition.size()
            )));
        }
        for (b, &s) in partition.blocks().iter().zip(&signs) {
            if b.is_long() && forced_sign(pi, *b)? != s {
                return Err(Error::InvalidPartition(format!(
                    "block {} must carry sign {}",
                    b.render(pi),
                    forced_sign(pi, *b)?
                )));
            }
        }
        Ok(SignedPartition { partition, signs })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn size(&self) -> usize {
        self.signs.len()
    }

    pub fn render(&self, pi: &Permutation) -> String {
        format!(
            "{} S=({})",
            self.partition.render(pi),
            self.signs.iter().join(",")
        )
    }
}

/// The sign a block of length at least two must carry.
pub fn forced_sign(pi: &Permutation, block: ConsecutiveBlock) -> Result<Sign> {
    if !block.is_long() || block.end > pi.len() {
        return Err(Error::InvalidBlock(format!(
            "forced sign needs a block of length >= 2 inside the pattern, got {}..{}",
            block.start, block.end
        )));
    }
    Ok(if block.argmin(pi) < block.argmax(pi) { Sign::Minus } else { Sign::Plus })
}

/// Every admissible sign vector for `partition`: long blocks forced,
/// singletons free, ordered lexicographically with `+` first.
pub fn admissible_signings(pi: &Permutation, partition: &Partition) -> Vec<SignedPartition> {
    let singles: Vec<usize> = (0..partition.size())
        .filter(|&i| !partition.blocks()[i].is_long())
        .collect();
    let base: Vec<Sign> = partition
        .blocks()
        .iter()
        .map(|b| if b.is_long() { forced_sign(pi, *b).unwrap() } else { Sign::Plus })
        .collect();
    (0..1u64 << singles.len())
        .map(|mask| {
            let mut signs = base.clone();
            for (bit, &i) in singles.iter().enumerate() {
                if mask >> (singles.len() - 1 - bit) & 1 == 1 {
                    signs[i] = Sign::Minus;
                }
            }
            SignedPartition { partition: partition.clone(), signs }
        })
        .collect()
}

/// The length-k² blowup sequence of a signed partition.
pub fn blowup_sequence(pi: &Permutation, p: &SignedPartition) -> Sequence {
    let k = pi.len();
    let mut values = vec![0.0; k * k];
    for (block, &sign) in p.partition.blocks().iter().zip(&p.signs) {
        let kb = block.len();
        for m in 0..k {
            let level = match sign {
                Sign::Plus => m,
                Sign::Minus => k - 1 - m,
            } as f64;
            for j in 0..kb {
                values[block.start * k + m * kb + j] =
                    level + pi.get(block.start + j) as f64 / (2 * k) as f64;
            }
        }
    }
    Sequence::from_vec_unchecked(values)
}

/// Whether the blowup has no copy beyond the k trivial ones.
pub fn is_unique(pi: &Permutation, p: &SignedPartition) -> Result<bool> {
    let k = pi.len();
    if k > UNIQUENESS_CAP {
        return Err(Error::CapExceeded { what: "uniqueness check", cap: UNIQUENESS_CAP, k });
    }
    let f = blowup_sequence(pi, p);
    let v = f.values();
    let flow = for_each_copy(&f, pi, |c| {
        let level = v[c[0]].floor();
        if c.iter().all(|&i| v[i].floor() == level) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    Ok(flow.is_continue())
}

/// The two necessary conditions every unique partition satisfies.
pub fn satisfies_necessary_conditions(pi: &Permutation, lambda: &Partition) -> bool {
    let k = pi.len();
    let long: Vec<(usize, usize)> = lambda
        .blocks()
        .iter()
        .filter(|b| b.is_long())
        .map(|b| (b.min_value(pi), b.max_value(pi)))
        .collect();
    let covered = (1..=k).all(|l| long.iter().any(|&(lo, hi)| lo <= l && l <= hi));
    covered
        && long.iter().all(|&(lo, hi)| {
            let straddled = |v: usize| long.iter().any(|&(a, b)| a < v && v < b);
            (hi == k || straddled(hi)) && (lo == 1 || straddled(lo))
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uspn {
    pub value: usize,
    pub witness: SignedPartition,
}

/// The largest size of a unique signed partition, with the first witness in
/// enumeration order.
pub fn uspn(pi: &Permutation) -> Result<Uspn> {
    let k = pi.len();
    if k > UNIQUENESS_CAP {
        return Err(Error::CapExceeded { what: "uspn", cap: UNIQUENESS_CAP, k });
    }
    for sizes in compositions(k) {
        let partition = Partition::from_sizes(&sizes)?;
        if k >= 2 && !satisfies_necessary_conditions(pi, &partition) {
            continue;
        }
        for p in admissible_signings(pi, &partition) {
            if is_unique(pi, &p)? {
                return Ok(Uspn { value: p.size(), witness: p });
            }
        }
    }
    unreachable!("the single-block partition is always unique")
}

/// All unique signed partitions with exactly `size` blocks.
pub fn unique_signed_partitions(pi: &Permutation, size: usize) -> Result<Vec<SignedPartition>> {
    let mut out = Vec::new();
    for sizes in compositions(pi.len()).into_iter().filter(|s| s.len() == size) {
        let partition = Partition::from_sizes(&sizes)?;
        for p in admissible_signings(pi, &partition) {
            if is_unique(pi, &p)? {
                out.push(p);
            }
        }
    }
    Ok(out)
}

pub fn max_adjacent_gap(pi: &Permutation) -> Result<usize> {
    if pi.len() < 2 {
        return Err(Error::Precondition("m(pi) needs k >= 2".into()));
    }
    Ok(pi.values().windows(2).map(|w| w[0].abs_diff(w[1])).max().unwrap())
}

/// Canonical member of the hierarchy family: 1 at position l, the values
/// 2..=l increasing before it, and l+i at position l+i.
pub fn hierarchy_permutation(k: usize, l: usize) -> Result<Permutation> {
    if l < 2 || l + 1 > k {
        return Err(Error::Precondition(format!("need 2 <= l <= k-1, got k={k}, l={l}")));
    }
    let values = (2..=l).chain(std::iter::once(1)).chain(l + 1..=k).collect();
    Permutation::new(values)
}
