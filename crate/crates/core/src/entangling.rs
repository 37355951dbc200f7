//! Shadowed blocks, entanglings and the entangling number.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{compositions, forced_sign, ConsecutiveBlock, Partition, Sign, SignedPartition};
use crate::pattern::Permutation;

/// Largest k for which the entangling number is computed.
pub const ENTANGLING_CAP: usize = 14;

/// Ordered blocks; the first one is distinguished.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entangling {
    pub blocks: Vec<ConsecutiveBlock>,
}

impl Entangling {
    pub fn new(blocks: Vec<ConsecutiveBlock>) -> Self {
        Entangling { blocks }
    }

    /// Size of the induced partition.
    pub fn d(&self, k: usize) -> usize {
        k - self.blocks.iter().map(|b| b.len() - 1).sum::<usize>()
    }

    pub fn render(&self, pi: &Permutation) -> String {
        format!("({})", self.blocks.iter().map(|b| b.render(pi)).join(","))
    }

    /// The partition whose parts are the blocks plus singletons.
    pub fn induced_partition(&self, k: usize) -> Result<Partition> {
        let mut sorted = self.blocks.clone();
        sorted.sort();
        let mut parts = Vec::new();
        let mut pos = 0;
        for b in sorted {
            while pos < b.start {
                parts.push(ConsecutiveBlock { start: pos, end: pos + 1 });
                pos += 1;
            }
            parts.push(b);
            pos = b.end;
        }
        while pos < k {
            parts.push(ConsecutiveBlock { start: pos, end: pos + 1 });
            pos += 1;
        }
        Partition::from_blocks(parts, k)
    }
}

pub fn is_shadowed(pi: &Permutation, sigma: ConsecutiveBlock, sigma_prime: ConsecutiveBlock) -> Result<bool> {
    let k = pi.len();
    if !sigma.is_long() || !sigma_prime.is_long() || sigma.end > k || sigma_prime.end > k {
        return Err(Error::InvalidBlock("shadowing needs two blocks of length >= 2".into()));
    }
    if sigma.overlaps(&sigma_prime) {
        return Err(Error::InvalidBlock("shadowing needs disjoint blocks".into()));
    }
    Ok(shadowed(pi, sigma, sigma_prime))
}

fn shadowed(pi: &Permutation, sigma: ConsecutiveBlock, sp: ConsecutiveBlock) -> bool {
    let m = sp.argmin(pi);
    let big_m = sp.argmax(pi);
    let (vm, vbig) = (pi.get(m), pi.get(big_m));
    if sp.start > sigma.last() {
        let left = pi.get(sp.start - 1);
        (m < big_m && left > vbig) || (m > big_m && left < vm)
    } else {
        let right = pi.get(sp.last() + 1);
        (m < big_m && right < vm) || (m > big_m && right > vbig)
    }
}

/// The endpoint of `b` facing the distinguished block.
fn inner_value(pi: &Permutation, first: ConsecutiveBlock, b: ConsecutiveBlock) -> Option<usize> {
    if b.start > first.last() {
        Some(pi.get(b.start))
    } else if b.last() < first.start {
        Some(pi.get(b.last()))
    } else {
        None
    }
}

fn covers(pi: &Permutation, blocks: &[ConsecutiveBlock]) -> bool {
    let ranges: Vec<(usize, usize)> = blocks.iter().map(|b| (b.min_value(pi), b.max_value(pi))).collect();
    (1..=pi.len()).all(|l| ranges.iter().any(|&(lo, hi)| lo <= l && l <= hi))
}

pub fn is_entangling(pi: &Permutation, e: &Entangling) -> bool {
    let k = pi.len();
    let blocks = &e.blocks;
    if blocks.is_empty() || blocks.iter().any(|b| !b.is_long() || b.end > k) {
        return false;
    }
    if blocks.iter().tuple_combinations().any(|(a, b)| a.overlaps(b)) {
        return false;
    }
    let first = blocks[0];
    let (mut lo, mut hi) = (first.min_value(pi), first.max_value(pi));
    for &b in &blocks[1..] {
        match inner_value(pi, first, b) {
            Some(v) if lo < v && v < hi => {}
            _ => return false,
        }
        lo = lo.min(b.min_value(pi));
        hi = hi.max(b.max_value(pi));
    }
    blocks[1..].iter().all(|&b| !shadowed(pi, first, b)) && covers(pi, blocks)
}

/// Tries to order `long` with `long[first]` distinguished.
fn arrange(pi: &Permutation, long: &[ConsecutiveBlock], first: usize) -> Option<Entangling> {
    let head = long[first];
    if long.iter().enumerate().any(|(i, &b)| i != first && shadowed(pi, head, b)) {
        return None;
    }
    let mut order = vec![head];
    let mut rest: Vec<ConsecutiveBlock> = long.iter().enumerate().filter(|&(i, _)| i != first).map(|(_, &b)| b).collect();
    let (mut lo, mut hi) = (head.min_value(pi), head.max_value(pi));
    while !rest.is_empty() {
        let next = rest.iter().position(|&b| {
            let v = inner_value(pi, head, b).unwrap();
            lo < v && v < hi
        })?;
        let b = rest.remove(next);
        lo = lo.min(b.min_value(pi));
        hi = hi.max(b.max_value(pi));
        order.push(b);
    }
    Some(Entangling::new(order))
}

fn entanglings_of(pi: &Permutation, sizes: &[usize]) -> Vec<Entangling> {
    let partition = Partition::from_sizes(sizes).unwrap();
    let long: Vec<ConsecutiveBlock> = partition.blocks().iter().copied().filter(|b| b.is_long()).collect();
    if long.is_empty() || !covers(pi, &long) {
        return Vec::new();
    }
    (0..long.len()).filter_map(|i| arrange(pi, &long, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglingNumber {
    pub value: usize,
    pub witness: Option<Entangling>,
}

/// The maximum of d(E) over all entanglings; 0 when none exists.
pub fn entangling_number(pi: &Permutation) -> Result<EntanglingNumber> {
    let k = pi.len();
    if k > ENTANGLING_CAP {
        return Err(Error::CapExceeded { what: "entangling number", cap: ENTANGLING_CAP, k });
    }
    for sizes in compositions(k) {
        if let Some(e) = entanglings_of(pi, &sizes).into_iter().next() {
            return Ok(EntanglingNumber { value: sizes.len(), witness: Some(e) });
        }
    }
    Ok(EntanglingNumber { value: 0, witness: None })
}

/// One ordered representative per (block set, distinguished block) pair
/// that admits a valid ordering.
pub fn all_entanglings(pi: &Permutation) -> Result<Vec<Entangling>> {
    let k = pi.len();
    if k > ENTANGLING_CAP {
        return Err(Error::CapExceeded { what: "entangling enumeration", cap: ENTANGLING_CAP, k });
    }
    Ok(compositions(k).iter().flat_map(|s| entanglings_of(pi, s)).collect())
}

/// The signed partition on the induced parts of an entangling.
pub fn entangling_sign_vector(pi: &Permutation, e: &Entangling) -> Result<SignedPartition> {
    if !is_entangling(pi, e) {
        return Err(Error::InvalidEntangling(e.render(pi)));
    }
    let partition = e.induced_partition(pi.len())?;
    let head = partition.blocks().iter().position(|&b| b == e.blocks[0]).unwrap();
    let signs = partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if b.is_long() {
                return forced_sign(pi, b).unwrap();
            }
            let j = b.start;
            let plus = if i < head { pi.get(j) > pi.get(j + 1) } else { pi.get(j) < pi.get(j - 1) };
            if plus {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    SignedPartition::new(pi, partition, signs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomPermutationStats {
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub d_values: Vec<usize>,
    pub frac_at_least_k_minus_3: f64,
    pub frac_at_least_k_minus_2: f64,
}

pub fn random_permutation_stats(k: usize, samples: usize, seed: u64) -> Result<RandomPermutationStats> {
    if k < 4 || samples == 0 {
        return Err(Error::Precondition(format!("need k >= 4 and samples >= 1, got k={k}, samples={samples}")));
    }
    if k > ENTANGLING_CAP {
        return Err(Error::CapExceeded { what: "entangling number", cap: ENTANGLING_CAP, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Permutation> = (0..samples).map(|_| Permutation::random(k, &mut rng)).collect::<Result<_>>()?;
    let d_values: Vec<usize> = perms
        .par_iter()
        .map(|p| entangling_number(p).map(|e| e.value))
        .collect::<Result<_>>()?;
    let frac = |t: usize| d_values.iter().filter(|&&d| d >= t).count() as f64 / samples as f64;
    Ok(RandomPermutationStats {
        k,
        samples,
        seed,
        frac_at_least_k_minus_3: frac(k - 3),
        frac_at_least_k_minus_2: frac(k - 2),
        d_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::is_unique;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn blk(start: usize, end: usize) -> ConsecutiveBlock {
        ConsecutiveBlock { start, end }
    }

    #[test]
    fn shadowing_examples() {
        assert!(is_shadowed(&perm("1,4,5,2,3"), blk(0, 2), blk(3, 5)).unwrap());
        assert!(!is_shadowed(&perm("4,1,2,5,6,3"), blk(2, 4), blk(0, 2)).unwrap());
        assert!(is_shadowed(&perm("1,4,5,2,3"), blk(0, 2), blk(1, 3)).is_err());
        assert!(is_shadowed(&perm("1,4,5,2,3"), blk(0, 1), blk(3, 5)).is_err());
    }

    #[test]
    fn adjacent_neighbor_between_extremes_is_not_shadowed() {
        // neighbour 3 sits between min 1 and max 5 of the right block
        let pi = perm("2,4,3,5,1");
        assert!(!is_shadowed(&pi, blk(0, 2), blk(3, 5)).unwrap());
    }

    #[test]
    fn entangling_examples() {
        let pi = perm("5,1,3,2,7,6,8,4");
        let e = Entangling::new(vec![blk(1, 3), blk(3, 5), blk(5, 7)]);
        assert!(is_entangling(&pi, &e));
        assert_eq!(e.d(8), 5);
        let gap = Entangling::new(vec![blk(1, 3)]);
        assert!(!is_entangling(&pi, &gap));
        assert!(is_entangling(&perm("1,4,2,3"), &Entangling::new(vec![blk(0, 2)])));
    }

    #[test]
    fn entangling_number_examples() {
        let pi = perm("4,1,2,5,6,3");
        let d = entangling_number(&pi).unwrap();
        assert_eq!(d.value, 3);
        assert!(is_entangling(&pi, d.witness.as_ref().unwrap()));
        let d = entangling_number(&perm("5,1,3,2,7,6,8,4")).unwrap();
        assert_eq!(d.value, 5);
        assert_eq!(entangling_number(&perm("1")).unwrap().value, 0);
    }

    #[test]
    fn monotone_whole_block_is_an_entangling() {
        for k in 2..=6 {
            let pi = Permutation::identity(k).unwrap();
            let d = entangling_number(&pi).unwrap();
            assert_eq!(d.value, 1);
            assert_eq!(d.witness.unwrap().blocks, vec![blk(0, k)]);
        }
    }

    #[test]
    fn sign_vector_examples() {
        let pi = perm("5,1,3,2,7,6,8,4");
        let e = Entangling::new(vec![blk(1, 3), blk(3, 5), blk(5, 7)]);
        let p = entangling_sign_vector(&pi, &e).unwrap();
        assert_eq!(p.size(), 5);
        assert!(is_unique(&pi, &p).unwrap());

        let pi = perm("4,1,2,3");
        let e = Entangling::new(vec![blk(0, 2)]);
        let p = entangling_sign_vector(&pi, &e).unwrap();
        assert_eq!(p.size(), 3);
        assert!(is_unique(&pi, &p).unwrap());

        let pi = perm("1,3,2");
        assert!(entangling_sign_vector(&pi, &Entangling::new(vec![blk(1, 3)])).is_err());
    }

    #[test]
    fn stats_are_deterministic() {
        let a = random_permutation_stats(6, 50, 3).unwrap();
        let b = random_permutation_stats(6, 50, 3).unwrap();
        assert_eq!(a, b);
        assert!(random_permutation_stats(3, 5, 0).is_err());
        assert!(random_permutation_stats(15, 5, 0).is_err());
    }
}
