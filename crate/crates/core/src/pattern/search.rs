use std::ops::ControlFlow;

use super::Permutation;

/// Merge-sort tree answering "first position >= start with value in (lo, hi)".
struct RangeIndex {
    n: usize,
    // levels[l] holds the values sorted within aligned blocks of 2^l positions
    levels: Vec<Vec<f64>>,
}

impl RangeIndex {
    fn new(values: &[f64]) -> Self {
        let n = values.len();
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while width < n {
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(n);
            let mut s = 0;
            while s < n {
                let mid = (s + width).min(n);
                let end = (s + 2 * width).min(n);
                let (mut a, mut b) = (s, mid);
                while a < mid && b < end {
                    if prev[a] <= prev[b] {
                        next.push(prev[a]);
                        a += 1;
                    } else {
                        next.push(prev[b]);
                        b += 1;
                    }
                }
                next.extend_from_slice(&prev[a..mid]);
                next.extend_from_slice(&prev[b..end]);
                s = end;
            }
            levels.push(next);
            width *= 2;
        }
        RangeIndex { n, levels }
    }

    fn next_in(&self, start: usize, lo: f64, hi: f64) -> Option<usize> {
        if start >= self.n || !(lo < hi) {
            return None;
        }
        self.first(self.levels.len() - 1, 0, start, lo, hi)
    }

    fn first(&self, level: usize, block: usize, start: usize, lo: f64, hi: f64) -> Option<usize> {
        let s = block << level;
        if s >= self.n {
            return None;
        }
        let e = (s + (1 << level)).min(self.n);
        if e <= start {
            return None;
        }
        if s >= start {
            let sorted = &self.levels[level][s..e];
            let idx = sorted.partition_point(|&v| v <= lo);
            if idx == sorted.len() || sorted[idx] >= hi {
                return None;
            }
            if level == 0 {
                return Some(s);
            }
        }
        self.first(level - 1, 2 * block, start, lo, hi)
            .or_else(|| self.first(level - 1, 2 * block + 1, start, lo, hi))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Future {
    Empty,
    AllAbove,
    AllBelow,
    Mixed,
}

/// Depth-first copy search in position order.
///
/// Each pattern index carries an open value interval implied by the entries
/// chosen so far; candidates are located by jumping through the range index
/// and every later interval is checked for a feasible entry before descending.
pub struct CopySearch<'a> {
    values: &'a [f64],
    pattern: &'a [usize],
    index: RangeIndex,
    future: Vec<Future>,
}

impl<'a> CopySearch<'a> {
    pub fn new(values: &'a [f64], pi: &'a Permutation) -> Self {
        let pattern = pi.values();
        let k = pattern.len();
        let future = (0..k)
            .map(|x| {
                let above = (x + 1..k).filter(|&y| pattern[y] > pattern[x]).count();
                let rest = k - x - 1;
                match (rest, above) {
                    (0, _) => Future::Empty,
                    (r, a) if a == r => Future::AllAbove,
                    (_, 0) => Future::AllBelow,
                    _ => Future::Mixed,
                }
            })
            .collect();
        CopySearch {
            values,
            pattern,
            index: RangeIndex::new(values),
            future,
        }
    }

    /// Calls `visitor` on each copy in lexicographic order of positions.
    pub fn visit<F>(&self, mut visitor: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.len();
        if k == 0 || self.values.len() < k {
            return ControlFlow::Continue(());
        }
        let mut chosen = Vec::with_capacity(k);
        let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); k];
        let mut found = 0u64;
        self.descend(0, 0, &bounds, &mut chosen, &mut found, &mut visitor)
    }

    fn descend<F>(
        &self,
        x: usize,
        start: usize,
        bounds: &[(f64, f64)],
        chosen: &mut Vec<usize>,
        found: &mut u64,
        visitor: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.len();
        let n = self.values.len();
        let (lo, hi) = bounds[x];
        let px = self.pattern[x];
        let future = self.future[x];
        let mut failed_min = f64::INFINITY;
        let mut failed_max = f64::NEG_INFINITY;
        let mut next = bounds.to_vec();
        let mut p = start;
        while let Some(pos) = self.index.next_in(p, lo, hi) {
            p = pos + 1;
            if n - pos < k - x {
                break;
            }
            let v = self.values[pos];
            chosen.push(pos);
            if future == Future::Empty {
                *found += 1;
                let flow = visitor(chosen);
                chosen.pop();
                flow?;
                continue;
            }
            let dominated = match future {
                Future::AllAbove => v >= failed_min,
                Future::AllBelow => v <= failed_max,
                _ => false,
            };
            if dominated {
                chosen.pop();
                continue;
            }
            next[x + 1..].copy_from_slice(&bounds[x + 1..]);
            for y in x + 1..k {
                if self.pattern[y] > px {
                    next[y].0 = next[y].0.max(v);
                } else {
                    next[y].1 = next[y].1.min(v);
                }
            }
            let feasible = (x + 1..k).all(|y| self.index.next_in(pos + 1, next[y].0, next[y].1).is_some());
            let before = *found;
            if feasible {
                let flow = self.descend(x + 1, pos + 1, &next, chosen, found, visitor);
                if flow.is_break() {
                    chosen.pop();
                    return flow;
                }
            }
            chosen.pop();
            if *found == before {
                failed_min = failed_min.min(v);
                failed_max = failed_max.max(v);
            }
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_next(values: &[f64], start: usize, lo: f64, hi: f64) -> Option<usize> {
        (start..values.len()).find(|&i| lo < values[i] && values[i] < hi)
    }

    #[test]
    fn range_index_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..40 {
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..10) as f64).collect();
            let idx = RangeIndex::new(&values);
            for _ in 0..200 {
                let start = rng.gen_range(0..=n);
                let lo = rng.gen_range(-1..11) as f64 - 0.5 * rng.gen_range(0..2) as f64;
                let hi = lo + rng.gen_range(0..6) as f64;
                assert_eq!(idx.next_in(start, lo, hi), brute_next(&values, start, lo, hi));
            }
        }
    }
}
