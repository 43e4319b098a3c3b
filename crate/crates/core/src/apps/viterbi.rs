//! Most likely state path of a hidden Markov model over Max-Plus
//! log-weights: one integral operator per observation step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::integral::{apply_integral, KernelMatrix};
use crate::kernel::space::Space;
use crate::semimodule::{FiniteFunction, PointSet};
use crate::semiring::{Semiring, SemiringOps, Value};

/// Log-weights are Max-Plus values; `-∞` forbids a start, move or emission.
#[derive(Clone, Debug, PartialEq)]
pub struct Hmm {
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub initial: Vec<Value>,
    /// `transition[s][t]`: weight of moving from `s` to `t`.
    pub transition: Vec<Vec<Value>>,
    /// `emission[s][o]`: weight of emitting symbol `o` in state `s`.
    pub emission: Vec<Vec<Value>>,
    /// Observed symbol indices.
    pub sequence: Vec<usize>,
}

impl Hmm {
    pub fn validate(&self) -> Result<()> {
        let s = Semiring::max_plus(false);
        let n = self.states.len();
        let m = self.symbols.len();
        if n == 0 || m == 0 {
            return Err(Error::Input("an HMM needs states and symbols".into()));
        }
        if self.sequence.is_empty() {
            return Err(Error::Input("observation sequence is empty".into()));
        }
        let dims = |got: usize, expected: usize| {
            if got == expected {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected, got })
            }
        };
        dims(self.initial.len(), n)?;
        dims(self.transition.len(), n)?;
        dims(self.emission.len(), n)?;
        for row in &self.transition {
            dims(row.len(), n)?;
        }
        for row in &self.emission {
            dims(row.len(), m)?;
        }
        if let Some(&o) = self.sequence.iter().find(|&&o| o >= m) {
            return Err(Error::Input(format!("observation index {o} out of range")));
        }
        let all = self
            .initial
            .iter()
            .chain(self.transition.iter().flatten())
            .chain(self.emission.iter().flatten());
        for &v in all {
            s.validate(v)?;
        }
        Ok(())
    }

    /// `k_t(s, s') = T(s, s') ⊙ E(s', o_t)`.
    fn step_kernel(&self, points: &PointSet, o: usize) -> Result<KernelMatrix> {
        let s = Semiring::max_plus(false);
        let rows = self
            .transition
            .iter()
            .map(|row| {
                FiniteFunction::new(
                    row.iter()
                        .enumerate()
                        .map(|(t, &w)| s.otimes(w, self.emission[t][o]))
                        .collect(),
                )
            })
            .collect();
        KernelMatrix::new(s, points.clone(), points.clone(), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViterbiPath {
    /// Best total log-weight; `-∞` when every path is forbidden.
    pub score: Value,
    /// State indices, one per observation; ties go to the lowest index.
    pub path: Option<Vec<usize>>,
}

pub fn viterbi(h: &Hmm) -> Result<ViterbiPath> {
    h.validate()?;
    let s = Semiring::max_plus(false);
    let n = h.states.len();
    let points = PointSet::new(h.states.iter().cloned())?;
    let space = Space::full(s, points.clone());
    let first = FiniteFunction::new(
        (0..n)
            .map(|q| s.otimes(h.initial[q], h.emission[q][h.sequence[0]]))
            .collect(),
    );
    let mut deltas = vec![first];
    let mut kernels = Vec::new();
    for &o in &h.sequence[1..] {
        let k = h.step_kernel(&points, o)?;
        let next = apply_integral(&k, deltas.last().expect("nonempty"), &space)?;
        deltas.push(next);
        kernels.push(k);
    }
    let last = deltas.last().expect("nonempty");
    let score = s.sup(last.values().iter().copied());
    if score == s.zero() {
        return Ok(ViterbiPath { score, path: None });
    }
    let argmax = |vals: Vec<Value>, target: Value| {
        vals.iter()
            .position(|&v| v == target)
            .expect("the supremum of a finite chain is attained")
    };
    let mut q = argmax(last.values().to_vec(), score);
    let mut path = vec![q];
    for t in (1..deltas.len()).rev() {
        let target = deltas[t].get(q);
        let k = &kernels[t - 1];
        q = argmax(
            (0..n).map(|p| s.otimes(deltas[t - 1].get(p), k.get(p, q))).collect(),
            target,
        );
        path.push(q);
    }
    path.reverse();
    Ok(ViterbiPath {
        score,
        path: Some(path),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: i64) -> Value {
        Value::int(x)
    }

    #[test]
    fn single_state_sums_the_weights() {
        let h = Hmm {
            states: vec!["a".into()],
            symbols: vec!["x".into(), "y".into()],
            initial: vec![w(1)],
            transition: vec![vec![w(2)]],
            emission: vec![vec![w(3), w(-1)]],
            sequence: vec![0, 1, 0],
        };
        let r = viterbi(&h).unwrap();
        assert_eq!(r.score, w(1 + 3 + 2 - 1 + 2 + 3));
        assert_eq!(r.path, Some(vec![0, 0, 0]));
    }

    #[test]
    fn forbidden_row_is_never_entered_again() {
        let h = Hmm {
            states: vec!["a".into(), "b".into()],
            symbols: vec!["x".into()],
            initial: vec![w(0), w(5)],
            transition: vec![vec![w(0), w(0)], vec![Value::Bot, Value::Bot]],
            emission: vec![vec![w(0)], vec![w(0)]],
            sequence: vec![0, 0, 0],
        };
        let r = viterbi(&h).unwrap();
        assert_eq!(r.path, Some(vec![0, 0, 0]));
        assert_eq!(r.score, w(0));
    }

    #[test]
    fn all_forbidden_has_no_path() {
        let h = Hmm {
            states: vec!["a".into()],
            symbols: vec!["x".into()],
            initial: vec![Value::Bot],
            transition: vec![vec![w(0)]],
            emission: vec![vec![w(0)]],
            sequence: vec![0],
        };
        assert_eq!(
            viterbi(&h).unwrap(),
            ViterbiPath {
                score: Value::Bot,
                path: None
            }
        );
    }
}
