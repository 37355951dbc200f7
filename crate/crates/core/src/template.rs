//! Solvers for template search: recover the offset of T inside S.
//!
//! The grid solver is a baseline strategy, not claimed to be optimal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{AccessMode, TemplateOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateReport {
    pub estimate: usize,
    pub queries_used: usize,
    pub rounds_used: usize,
    /// Number of offsets still consistent with the observations.
    pub candidates_left: usize,
}

/// Query bound of the binary search for template length `m`.
pub fn binary_search_query_bound(m: usize) -> usize {
    2 + (usize::BITS - (2 * m).leading_zeros()) as usize
}

/// Finds the first S entry at least T_1 by binary search over 0..=2m.
pub fn template_binary_search(oracle: &mut TemplateOracle) -> Result<TemplateReport> {
    if oracle.mode() != AccessMode::Adaptive {
        return Err(Error::Precondition("binary search needs an adaptive oracle".into()));
    }
    let m = oracle.m();
    let (_, t) = oracle.query_batch(&[], &[0, m - 1])?;
    let first = t[0];
    let (mut lo, mut hi) = (0, 2 * m);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (s, _) = oracle.query_batch(&[mid], &[])?;
        if s[0] >= first {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(TemplateReport {
        estimate: lo,
        queries_used: oracle.queries_used(),
        rounds_used: oracle.rounds_used(),
        candidates_left: 1,
    })
}

/// Everything learned so far, reduced to an interval of offsets.
struct Knowledge {
    m: usize,
    s: Vec<(usize, f64)>,
    t: Vec<(usize, f64)>,
}

impl Knowledge {
    fn bounds(&self) -> (usize, usize) {
        let m = self.m as i64;
        let (mut lo, mut hi) = (0i64, 2 * m);
        for &(i, v) in &self.s {
            let i = i as i64;
            if v < 0.0 {
                lo = lo.max(i + 1);
            } else if v > 1.0 {
                hi = hi.min(i - m);
            } else {
                lo = lo.max(i - m + 1);
                hi = hi.min(i);
                for &(j, w) in &self.t {
                    let d = i - j as i64;
                    if v == w {
                        lo = lo.max(d);
                        hi = hi.min(d);
                    } else if v > w {
                        hi = hi.min(d - 1);
                    } else {
                        lo = lo.max(d + 1);
                    }
                }
            }
        }
        if lo > hi {
            // inconsistent observations cannot come from a well-formed instance
            return (lo.clamp(0, 2 * m) as usize, lo.clamp(0, 2 * m) as usize);
        }
        (lo as usize, hi as usize)
    }
}

/// S probes splitting [lo, hi] into nearly equal cells.
fn s_grid(lo: usize, hi: usize, q: usize) -> Vec<usize> {
    let w = hi - lo;
    let mut v: Vec<usize> = (1..=q).map(|a| lo + (a * (w + 1)) / (q + 1)).filter(|&i| i > lo && i <= hi).collect();
    if q >= w {
        v = (lo + 1..=hi).collect();
    }
    v.dedup();
    v
}

/// Paired S and T probes whose differences step through the candidate
/// offsets with stride g, so value comparisons pin the offset to one stride.
fn vernier(lo: usize, hi: usize, q: usize, m: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let w = hi - lo + 1;
    if q < 2 || w > m {
        return None;
    }
    let mut qs = q.div_ceil(2);
    while qs >= 1 {
        let qt = q - qs;
        if qt >= 1 {
            let g = w.div_ceil(qs * qt);
            if (qs - 1) * g + w <= m {
                let s = (0..qs).map(|a| hi + a * g).collect();
                let t = (0..qt).filter_map(|b| (w - 1).checked_sub(b * qs * g)).collect();
                return Some((s, t));
            }
        }
        qs -= 1;
    }
    None
}

/// Grid strategy with a shared round clock: each round spends an equal
/// share of the remaining budget on probes inside the current candidate
/// interval, then intersects all constraints. Returns the midpoint.
pub fn template_r_round_solver(oracle: &mut TemplateOracle, rounds: usize, budget: usize) -> Result<TemplateReport> {
    if rounds == 0 || oracle.mode() != AccessMode::Rounds(rounds) || oracle.rounds_used() > 0 {
        return Err(Error::Precondition("grid solver needs a fresh oracle limited to `rounds` batches".into()));
    }
    let m = oracle.m();
    let mut know = Knowledge { m, s: Vec::new(), t: Vec::new() };
    let mut spent = 0;
    for round in 0..rounds {
        let (lo, hi) = know.bounds();
        if lo == hi || spent >= budget {
            break;
        }
        let q = ((budget - spent) / (rounds - round)).max(1);
        let (s_pos, t_pos) = vernier(lo, hi, q, m).unwrap_or_else(|| (s_grid(lo, hi, q), Vec::new()));
        let (s_val, t_val) = oracle.query_batch(&s_pos, &t_pos)?;
        spent += s_pos.len() + t_pos.len();
        know.s.extend(s_pos.into_iter().zip(s_val));
        know.t.extend(t_pos.into_iter().zip(t_val));
    }
    let (lo, hi) = know.bounds();
    Ok(TemplateReport {
        estimate: lo + (hi - lo) / 2,
        queries_used: oracle.queries_used(),
        rounds_used: oracle.rounds_used(),
        candidates_left: hi - lo + 1,
    })
}
