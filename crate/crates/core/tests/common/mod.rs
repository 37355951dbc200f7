// Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;

/// Pairwise comparison against the pattern, no sorting involved.
pub fn bf_matches(vals: &[f64], pattern: &[usize]) -> bool {
    for a in 0..vals.len() {
        for b in a + 1..vals.len() {
            let want_less = pattern[a] < pattern[b];
            let ok = if want_less { vals[a] < vals[b] } else { vals[a] > vals[b] };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Every increasing index tuple realizing the pattern, lexicographic.
pub fn bf_copies(values: &[f64], pattern: &[usize]) -> Vec<Vec<usize>> {
    (0..values.len())
        .combinations(pattern.len())
        .filter(|idx| {
            let vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
            bf_matches(&vals, pattern)
        })
        .collect()
}

pub fn bf_free(values: &[f64], pattern: &[usize]) -> bool {
    (0..values.len()).combinations(pattern.len()).all(|idx| {
        let vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        !bf_matches(&vals, pattern)
    })
}

/// Smallest number of deletions leaving a free sequence, by trying every
/// deletion set in order of size.
pub fn bf_distance(values: &[f64], pattern: &[usize]) -> usize {
    let n = values.len();
    for d in 0..=n {
        for del in (0..n).combinations(d) {
            let rest: Vec<f64> = (0..n).filter(|i| !del.contains(i)).map(|i| values[i]).collect();
            if bf_free(&rest, pattern) {
                return d;
            }
        }
    }
    n
}

/// Largest number of pairwise disjoint copies, by exhaustive search.
pub fn bf_max_disjoint(values: &[f64], pattern: &[usize]) -> usize {
    fn go(copies: &[Vec<usize>], used: &mut Vec<bool>, from: usize) -> usize {
        let mut best = 0;
        for i in from..copies.len() {
            if copies[i].iter().all(|&p| !used[p]) {
                for &p in &copies[i] {
                    used[p] = true;
                }
                best = best.max(1 + go(copies, used, i + 1));
                for &p in &copies[i] {
                    used[p] = false;
                }
            }
        }
        best
    }
    let copies = bf_copies(values, pattern);
    go(&copies, &mut vec![false; values.len()], 0)
}

/// Sign of every pairwise comparison `(i, j)` with i < j.
pub fn order_relations(values: &[f64]) -> Vec<((usize, usize), std::cmp::Ordering)> {
    let n = values.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(((i, j), values[i].partial_cmp(&values[j]).unwrap()));
        }
    }
    out
}

/// Every copy of the pattern in the blowup lies on one integer level.
///
/// Extends index tuples left to right, dropping a prefix as soon as one of
/// its pairs disagrees with the pattern.
pub fn bf_blowup_unique(blowup: &[f64], pattern: &[usize]) -> bool {
    fn go(v: &[f64], pat: &[usize], chosen: &mut Vec<usize>, from: usize) -> bool {
        let j = chosen.len();
        if j == pat.len() {
            let level = v[chosen[0]].floor();
            return chosen.iter().all(|&i| v[i].floor() == level);
        }
        for x in from..v.len() {
            let fits = chosen.iter().enumerate().all(|(a, &i)| {
                if pat[a] < pat[j] {
                    v[i] < v[x]
                } else {
                    v[i] > v[x]
                }
            });
            if fits {
                chosen.push(x);
                let ok = go(v, pat, chosen, x + 1);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    go(blowup, pattern, &mut Vec::new(), 0)
}
