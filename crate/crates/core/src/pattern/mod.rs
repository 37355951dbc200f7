//! Permutations, sequences and pattern-copy search.

mod search;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use search::CopySearch;

/// A permutation of `1..=k`, stored in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    values: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let k = values.len();
        if k == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; k + 1];
        for &v in &values {
            if v == 0 || v > k || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{values:?} is not a bijection onto 1..={k}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::new((1..=k).collect())
    }

    /// All permutations of length `k` in lexicographic order.
    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        (1..=k)
            .permutations(k)
            .map(|values| Permutation { values })
    }

    /// A uniformly random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Self> {
        let mut values: Vec<usize> = (1..=k).collect();
        values.shuffle(rng);
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Value at 0-based position `i`.
    pub fn get(&self, i: usize) -> usize {
        self.values[i]
    }

    /// 0-based position holding value `v`.
    pub fn position_of(&self, v: usize) -> usize {
        self.values
            .iter()
            .position(|&x| x == v)
            .expect("value outside 1..=k")
    }

    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_monotone(&self) -> bool {
        self.is_increasing() || self.is_decreasing()
    }

    /// Whether the values 1 and k sit in adjacent positions.
    pub fn extremes_adjacent(&self) -> bool {
        let k = self.len();
        k >= 2 && self.position_of(1).abs_diff(self.position_of(k)) == 1
    }

    pub fn symmetry(&self, which: Symmetry) -> Permutation {
        let k = self.len();
        let values = match which {
            Symmetry::Reverse => self.values.iter().rev().copied().collect(),
            Symmetry::Complement => self.values.iter().map(|&v| k + 1 - v).collect(),
            Symmetry::Inverse => {
                let mut inv = vec![0; k];
                for (i, &v) in self.values.iter().enumerate() {
                    inv[v - 1] = i + 1;
                }
                inv
            }
        };
        Permutation { values }
    }

    pub fn to_sequence(&self) -> Sequence {
        Sequence::from_vec_unchecked(self.values.iter().map(|&v| v as f64).collect())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.values
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the literal format `1,3,2` (surrounding parentheses allowed).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        let values = s
            .split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidPermutation(format!("cannot parse {t:?} as a positive integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.values.iter().join(","))
    }
}

/// A finite sequence of finite reals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sequence {
    values: Vec<f64>,
}

impl Sequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence(format!(
                "entry {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Sequence { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Sequence { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The subsequence at the given (increasing) positions.
    pub fn subsequence(&self, positions: &[usize]) -> Sequence {
        Sequence::from_vec_unchecked(positions.iter().map(|&i| self.values[i]).collect())
    }

    pub fn reversed(&self) -> Sequence {
        Sequence::from_vec_unchecked(self.values.iter().rev().copied().collect())
    }

    /// Negates every entry, which complements the relative order.
    pub fn complemented(&self) -> Sequence {
        Sequence::from_vec_unchecked(self.values.iter().map(|v| -v).collect())
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

impl TryFrom<Vec<f64>> for Sequence {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sequence::new(values)
    }
}

impl From<Sequence> for Vec<f64> {
    fn from(s: Sequence) -> Self {
        s.values
    }
}

/// Strictly increasing 0-based positions of a copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternCopy(pub Vec<usize>);

impl PatternCopy {
    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that the positions are increasing, in range, and realize `pi`.
    pub fn is_valid_for(&self, f: &Sequence, pi: &Permutation) -> bool {
        let p = &self.0;
        p.len() == pi.len()
            && p.windows(2).all(|w| w[0] < w[1])
            && p.last().is_none_or(|&l| l < f.len())
            && realizes(&p.iter().map(|&i| f.get(i)).collect::<Vec<_>>(), pi)
    }
}

impl fmt::Display for PatternCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Whether `values` is order-isomorphic to `pi` under strict comparisons.
pub fn realizes(values: &[f64], pi: &Permutation) -> bool {
    let p = pi.values();
    values.len() == p.len()
        && (0..p.len()).all(|x| (x + 1..p.len()).all(|y| (values[x] < values[y]) == (p[x] < p[y]) && values[x] != values[y]))
}

pub fn order_isomorphic(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len()
        && (0..x.len()).all(|i| {
            (0..x.len()).all(|j| i == j || ((x[i] < x[j]) == (y[i] < y[j])))
        })
}

/// Lexicographically smallest copy of `pi` in `f`.
pub fn find_copy(f: &Sequence, pi: &Permutation) -> Option<PatternCopy> {
    find_copy_in(f.values(), pi).map(PatternCopy)
}

pub fn find_copy_in(values: &[f64], pi: &Permutation) -> Option<Vec<usize>> {
    let mut found = None;
    let _ = CopySearch::new(values, pi).visit(|c| {
        found = Some(c.to_vec());
        ControlFlow::Break(())
    });
    found
}

pub fn contains(f: &Sequence, pi: &Permutation) -> bool {
    find_copy(f, pi).is_some()
}

/// All copies in lexicographic order, truncated at `limit`.
pub fn enumerate_copies(f: &Sequence, pi: &Permutation, limit: Option<usize>) -> Vec<PatternCopy> {
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    let _ = CopySearch::new(f.values(), pi).visit(|c| {
        out.push(PatternCopy(c.to_vec()));
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Visits every copy in lexicographic order until the visitor breaks.
pub fn for_each_copy<F>(f: &Sequence, pi: &Permutation, visitor: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    CopySearch::new(f.values(), pi).visit(visitor)
}

/// Maximal set of pairwise disjoint copies, taking the lexicographically
/// first copy among the remaining entries each time.
pub fn max_disjoint_copies_greedy(f: &Sequence, pi: &Permutation) -> Vec<PatternCopy> {
    greedy_packing(f.values(), pi, &vec![true; f.len()])
}

/// Greedy packing restricted to entries with `alive[i]`.
pub(crate) fn greedy_packing(values: &[f64], pi: &Permutation, alive: &[bool]) -> Vec<PatternCopy> {
    let mut alive = alive.to_vec();
    let mut out = Vec::new();
    loop {
        let index: Vec<usize> = (0..values.len()).filter(|&i| alive[i]).collect();
        let sub: Vec<f64> = index.iter().map(|&i| values[i]).collect();
        match find_copy_in(&sub, pi) {
            None => return out,
            Some(c) => {
                let c: Vec<usize> = c.into_iter().map(|i| index[i]).collect();
                for &i in &c {
                    alive[i] = false;
                }
                out.push(PatternCopy(c));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn seq(v: &[f64]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let p = perm("4,1,2,5,6,3");
        assert_eq!(p.to_string(), "4,1,2,5,6,3");
        assert_eq!(perm("(1, 3, 2)"), perm("1,3,2"));
        assert!("1,1,2".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }

    #[test]
    fn sequence_rejects_non_finite() {
        assert!(Sequence::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sequence::new(vec![f64::INFINITY]).is_err());
        assert!(Sequence::new(vec![]).is_ok());
    }

    #[test]
    fn isomorphism_examples() {
        assert!(order_isomorphic(&[0.5, 2.0, 1.1], &[1.0, 3.0, 2.0]));
        assert!(!order_isomorphic(&[1.0, 1.0], &[1.0, 2.0]));
        assert!(order_isomorphic(&[3.0, 1.0, 2.0], &[30.0, 10.0, 20.0]));
        assert!(!order_isomorphic(&[1.0], &[1.0, 2.0]));
    }

    #[test]
    fn find_copy_examples() {
        assert_eq!(
            find_copy(&seq(&[1.0, 3.0, 2.0]), &perm("1,3,2")),
            Some(PatternCopy(vec![0, 1, 2]))
        );
        assert_eq!(find_copy(&seq(&[5.0, 4.0, 3.0, 2.0, 1.0]), &perm("1,2")), None);
        assert_eq!(
            find_copy(&seq(&[2.0, 4.0, 1.0, 5.0, 3.0]), &perm("1,3,2")),
            Some(PatternCopy(vec![0, 1, 4]))
        );
    }

    #[test]
    fn ties_never_form_copies() {
        assert_eq!(find_copy(&seq(&[1.0, 1.0]), &perm("1,2")), None);
        assert_eq!(find_copy(&seq(&[1.0, 1.0]), &perm("2,1")), None);
        assert_eq!(find_copy(&seq(&[1.0, 2.0, 2.0]), &perm("1,3,2")), None);
    }

    #[test]
    fn enumerate_examples() {
        let got = enumerate_copies(&seq(&[1.0, 3.0, 2.0, 4.0]), &perm("1,2"), None);
        let want: Vec<PatternCopy> = [[0, 1], [0, 2], [0, 3], [1, 3], [2, 3]]
            .iter()
            .map(|c| PatternCopy(c.to_vec()))
            .collect();
        assert_eq!(got, want);
        assert!(enumerate_copies(&seq(&[1.0, 2.0]), &perm("1,3,2"), None).is_empty());
        let got = enumerate_copies(&seq(&[0.5, 0.25, 1.5, 1.25]), &perm("2,1"), None);
        assert_eq!(got, vec![PatternCopy(vec![0, 1]), PatternCopy(vec![2, 3])]);
        let got = enumerate_copies(&seq(&[1.0, 3.0, 2.0, 4.0]), &perm("1,2"), Some(2));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn greedy_examples() {
        let f = seq(&[1.0, 3.0, 2.0, 4.0, 6.0, 5.0]);
        assert_eq!(max_disjoint_copies_greedy(&f, &perm("1,3,2")).len(), 2);
        let f = seq(&[1.0, 2.0, 3.0]);
        assert!(max_disjoint_copies_greedy(&f, &perm("1,3,2")).is_empty());
        let f = seq(&[1.0, 3.0, 2.0]);
        assert_eq!(max_disjoint_copies_greedy(&f, &perm("1,3,2")).len(), 1);
    }

    #[test]
    fn symmetry_examples() {
        let p = perm("1,3,2");
        assert_eq!(p.symmetry(Symmetry::Reverse), perm("2,3,1"));
        assert_eq!(p.symmetry(Symmetry::Complement), perm("3,1,2"));
        assert_eq!(perm("2,3,1").symmetry(Symmetry::Inverse), perm("3,1,2"));
        for q in Permutation::all(4) {
            for s in [Symmetry::Reverse, Symmetry::Complement, Symmetry::Inverse] {
                assert_eq!(q.symmetry(s).symmetry(s), q);
            }
        }
    }

    #[test]
    fn all_counts_and_order() {
        assert_eq!(Permutation::all(4).count(), 24);
        let v: Vec<_> = Permutation::all(3).map(|p| p.to_string()).collect();
        assert_eq!(v, ["1,2,3", "1,3,2", "2,1,3", "2,3,1", "3,1,2", "3,2,1"]);
    }

    #[test]
    fn copy_validation() {
        let f = seq(&[2.0, 4.0, 1.0, 5.0, 3.0]);
        let p = perm("1,3,2");
        assert!(PatternCopy(vec![0, 1, 4]).is_valid_for(&f, &p));
        assert!(!PatternCopy(vec![0, 1, 2]).is_valid_for(&f, &p));
        assert!(!PatternCopy(vec![1, 0, 4]).is_valid_for(&f, &p));
        assert!(!PatternCopy(vec![0, 1, 9]).is_valid_for(&f, &p));
    }

    #[test]
    fn extremes_adjacent() {
        assert!(perm("1,3,2").extremes_adjacent());
        assert!(!perm("1,2,3").extremes_adjacent());
        assert!(perm("2,4,1,3").extremes_adjacent());
    }
}
