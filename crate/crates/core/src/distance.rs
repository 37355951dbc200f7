//! Distance to freeness: packing bounds, exact deletion distance, and the
//! conversion of a deletion set into value modifications.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{find_copy_in, greedy_packing, max_disjoint_copies_greedy, Permutation, Sequence};

/// Sequences up to this length get an exact value in [`distance_bounds`].
pub const EXACT_CAP: usize = 40;
/// Default node budget of the exact search.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

pub fn distance_bounds(f: &Sequence, pi: &Permutation) -> DistanceReport {
    let g = max_disjoint_copies_greedy(f, pi).len();
    let exact = if f.len() <= EXACT_CAP {
        deletion_distance_exact(f, pi, Some(DEFAULT_NODE_BUDGET)).ok().map(|s| s.distance)
    } else {
        None
    };
    DistanceReport { lower: g, upper: pi.len() * g, exact }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionSolution {
    pub distance: usize,
    /// A minimum deletion set, sorted.
    pub deleted: Vec<usize>,
    pub nodes: u64,
}

struct Search<'a> {
    values: &'a [f64],
    pi: &'a Permutation,
    budget: Option<u64>,
    nodes: u64,
    best: usize,
    best_set: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, deleted: &mut Vec<bool>, kept: &mut Vec<bool>, count: usize) -> Result<()> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(Error::BudgetExceeded(self.budget.unwrap()));
        }
        let alive: Vec<bool> = deleted.iter().map(|d| !d).collect();
        let index: Vec<usize> = (0..self.values.len()).filter(|&i| alive[i]).collect();
        let sub: Vec<f64> = index.iter().map(|&i| self.values[i]).collect();
        let Some(copy) = find_copy_in(&sub, self.pi) else {
            if count < self.best {
                self.best = count;
                self.best_set = (0..deleted.len()).filter(|&i| deleted[i]).collect();
            }
            return Ok(());
        };
        if count + 1 >= self.best {
            return Ok(());
        }
        if count + greedy_packing(self.values, self.pi, &alive).len() >= self.best {
            return Ok(());
        }
        let branch: Vec<usize> = copy.iter().map(|&i| index[i]).filter(|&i| !kept[i]).collect();
        for (j, &e) in branch.iter().enumerate() {
            deleted[e] = true;
            self.run(deleted, kept, count + 1)?;
            deleted[e] = false;
            kept[e] = true;
            if j + 1 == branch.len() {
                for &x in &branch {
                    kept[x] = false;
                }
            }
        }
        Ok(())
    }
}

/// Minimum number of deletions that leave a `pi`-free sequence.
///
/// Branches on the entries of one copy at a time; the i-th branch deletes the
/// i-th entry and keeps the earlier ones. A greedy packing of the remaining
/// entries bounds each subtree from below.
pub fn deletion_distance_exact(f: &Sequence, pi: &Permutation, budget: Option<u64>) -> Result<DeletionSolution> {
    let values = f.values();
    let n = values.len();
    let packing = max_disjoint_copies_greedy(f, pi);
    let mut initial: Vec<usize> = packing.iter().flat_map(|c| c.positions().iter().copied()).collect();
    initial.sort_unstable();
    let mut search = Search {
        values,
        pi,
        budget,
        nodes: 0,
        best: initial.len(),
        best_set: initial,
    };
    if search.best > packing.len() {
        search.run(&mut vec![false; n], &mut vec![false; n], 0)?;
    }
    Ok(DeletionSolution { distance: search.best, deleted: search.best_set, nodes: search.nodes })
}

/// Overwrites the entries of `deleted` with neighbouring surviving values, one
/// at a time, always taking the smallest position that has a neighbour
/// outside the set and preferring its left neighbour.
pub fn deletion_set_to_modifications(f: &Sequence, deleted: &[usize]) -> Result<Sequence> {
    let n = f.len();
    let mut pending = vec![false; n];
    for &i in deleted {
        if i >= n {
            return Err(Error::Precondition(format!("position {i} is out of range for length {n}")));
        }
        pending[i] = true;
    }
    if n > 0 && pending.iter().all(|&p| p) {
        return Err(Error::Precondition("at least one entry must survive".into()));
    }
    let mut values = f.values().to_vec();
    let mut left = pending.iter().filter(|&&p| p).count();
    while left > 0 {
        let (x, y) = (0..n)
            .filter(|&x| pending[x])
            .find_map(|x| {
                if x > 0 && !pending[x - 1] {
                    Some((x, x - 1))
                } else if x + 1 < n && !pending[x + 1] {
                    Some((x, x + 1))
                } else {
                    None
                }
            })
            .expect("a pending entry always borders a settled one");
        values[x] = values[y];
        pending[x] = false;
        left -= 1;
    }
    Ok(Sequence::from_vec_unchecked(values))
}
