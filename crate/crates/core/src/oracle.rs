//! Query access with enforced batching discipline and a full transcript.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forge::TemplateSearchInstance;
use crate::pattern::{realizes, PatternCopy, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("a non-adaptive oracle accepts a single batch")]
    SecondBatch,
    #[error("round limit of {0} batches reached")]
    RoundLimit(usize),
    #[error("batch of {requested} queries exceeds the remaining budget of {remaining}")]
    Budget { requested: usize, remaining: usize },
    #[error("position {position} is out of range for length {n}")]
    OutOfRange { position: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccessMode {
    NonAdaptive,
    Rounds(usize),
    Adaptive,
}

impl AccessMode {
    fn max_rounds(self) -> Option<usize> {
        match self {
            AccessMode::NonAdaptive => Some(1),
            AccessMode::Rounds(r) => Some(r),
            AccessMode::Adaptive => None,
        }
    }
}

/// One answered query; `round` counts from 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub round: usize,
    pub position: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Discipline {
    mode: AccessMode,
    budget: Option<usize>,
    rounds: usize,
    used: usize,
}

impl Discipline {
    fn admit(&mut self, requested: usize) -> Result<usize, OracleError> {
        if let Some(limit) = self.mode.max_rounds() {
            if self.rounds >= limit {
                return Err(match self.mode {
                    AccessMode::NonAdaptive => OracleError::SecondBatch,
                    _ => OracleError::RoundLimit(limit),
                });
            }
        }
        if let Some(b) = self.budget {
            let remaining = b - self.used;
            if requested > remaining {
                return Err(OracleError::Budget { requested, remaining });
            }
        }
        self.rounds += 1;
        self.used += requested;
        Ok(self.rounds)
    }
}

/// Hides a sequence behind batched queries.
///
/// Only the length is public. A batch is either answered in full or rejected
/// without revealing anything.
#[derive(Debug, Clone)]
pub struct QueryOracle {
    target: Vec<f64>,
    discipline: Discipline,
    transcript: Vec<QueryRecord>,
}

impl QueryOracle {
    pub fn new(target: &crate::Sequence, mode: AccessMode) -> Self {
        QueryOracle {
            target: target.values().to_vec(),
            discipline: Discipline { mode, budget: None, rounds: 0, used: 0 },
            transcript: Vec::new(),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.discipline.budget = Some(budget);
        self
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn mode(&self) -> AccessMode {
        self.discipline.mode
    }

    pub fn budget(&self) -> Option<usize> {
        self.discipline.budget
    }

    pub fn remaining_budget(&self) -> Option<usize> {
        self.discipline.budget.map(|b| b - self.discipline.used)
    }

    pub fn rounds_used(&self) -> usize {
        self.discipline.rounds
    }

    pub fn queries_used(&self) -> usize {
        self.transcript.len()
    }

    pub fn transcript(&self) -> &[QueryRecord] {
        &self.transcript
    }

    pub fn query_batch(&mut self, positions: &[usize]) -> Result<Vec<f64>, OracleError> {
        let n = self.target.len();
        if let Some(&position) = positions.iter().find(|&&p| p >= n) {
            return Err(OracleError::OutOfRange { position, n });
        }
        let round = self.discipline.admit(positions.len())?;
        Ok(positions
            .iter()
            .map(|&position| {
                let value = self.target[position];
                self.transcript.push(QueryRecord { round, position, value });
                value
            })
            .collect())
    }
}

/// Checks a claimed copy using only values recorded in the transcript.
pub fn validate_witness(transcript: &[QueryRecord], pi: &Permutation, witness: &PatternCopy) -> bool {
    let p = witness.positions();
    if p.len() != pi.len() || !p.windows(2).all(|w| w[0] < w[1]) {
        return false;
    }
    let mut values = Vec::with_capacity(p.len());
    for &pos in p {
        match transcript.iter().find(|r| r.position == pos) {
            Some(r) => values.push(r.value),
            None => return false,
        }
    }
    realizes(&values, pi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateArray {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateRecord {
    pub round: usize,
    pub array: TemplateArray,
    pub position: usize,
    pub value: f64,
}

/// Joint access to the two arrays of a template-search instance.
///
/// Both arrays share one round clock: a round is a pair of batches, one per
/// array, submitted together. The hidden offset is never exposed.
#[derive(Debug, Clone)]
pub struct TemplateOracle {
    s: Vec<f64>,
    t: Vec<f64>,
    discipline: Discipline,
    transcript: Vec<TemplateRecord>,
}

impl TemplateOracle {
    pub fn new(instance: &TemplateSearchInstance, mode: AccessMode) -> Self {
        TemplateOracle {
            s: instance.s().values().to_vec(),
            t: instance.t().values().to_vec(),
            discipline: Discipline { mode, budget: None, rounds: 0, used: 0 },
            transcript: Vec::new(),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.discipline.budget = Some(budget);
        self
    }

    /// Template length; S has length 3m.
    pub fn m(&self) -> usize {
        self.t.len()
    }

    pub fn mode(&self) -> AccessMode {
        self.discipline.mode
    }

    pub fn remaining_budget(&self) -> Option<usize> {
        self.discipline.budget.map(|b| b - self.discipline.used)
    }

    pub fn rounds_used(&self) -> usize {
        self.discipline.rounds
    }

    pub fn queries_used(&self) -> usize {
        self.transcript.len()
    }

    pub fn transcript(&self) -> &[TemplateRecord] {
        &self.transcript
    }

    pub fn query_batch(
        &mut self,
        s_positions: &[usize],
        t_positions: &[usize],
    ) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
        for (&p, n) in s_positions
            .iter()
            .map(|p| (p, self.s.len()))
            .chain(t_positions.iter().map(|p| (p, self.t.len())))
        {
            if p >= n {
                return Err(OracleError::OutOfRange { position: p, n });
            }
        }
        let round = self.discipline.admit(s_positions.len() + t_positions.len())?;
        let mut answer = |array: TemplateArray, positions: &[usize]| -> Vec<f64> {
            positions
                .iter()
                .map(|&position| {
                    let value = match array {
                        TemplateArray::S => self.s[position],
                        TemplateArray::T => self.t[position],
                    };
                    self.transcript.push(TemplateRecord { round, array, position, value });
                    value
                })
                .collect()
        };
        let s = answer(TemplateArray::S, s_positions);
        let t = answer(TemplateArray::T, t_positions);
        Ok((s, t))
    }
}
