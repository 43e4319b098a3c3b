//! Single-source shortest paths as the least fixpoint of
//! `f ↦ (A f) ⊕ e_source` over Min-Plus, `A` the integral operator whose
//! kernel is the edge matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::integral::{apply_integral, KernelMatrix};
use crate::kernel::space::Space;
use crate::semimodule::{FiniteFunction, PointSet};
use crate::semiring::{Rational, Semiring, SemiringOps, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    pub nodes: Vec<String>,
    /// `(from, to, weight)`; parallel edges keep the lightest.
    pub edges: Vec<(usize, usize, Rational)>,
    pub source: usize,
}

impl WeightedGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<(usize, usize, Rational)>, source: usize) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::Input("graph has no nodes".into()));
        }
        if source >= n {
            return Err(Error::Input(format!("source index {source} out of range")));
        }
        if let Some(&(u, v, _)) = edges.iter().find(|(u, v, _)| *u >= n || *v >= n) {
            return Err(Error::Input(format!("edge ({u}, {v}) references a missing node")));
        }
        PointSet::new(nodes.iter().cloned())?;
        Ok(Self { nodes, edges, source })
    }

    /// `k(u, v)`: lightest edge `u → v`, or `+∞`.
    pub fn kernel(&self) -> Result<KernelMatrix> {
        let s = Semiring::min_plus(false);
        let n = self.nodes.len();
        let mut rows = vec![vec![s.zero(); n]; n];
        for &(u, v, w) in &self.edges {
            rows[u][v] = s.oplus(rows[u][v], Value::Fin(w));
        }
        let points = PointSet::new(self.nodes.iter().cloned())?;
        KernelMatrix::new(
            s,
            points.clone(),
            points,
            rows.into_iter().map(FiniteFunction::new).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShortestPaths {
    /// Min-Plus values; the semiring zero `+∞` marks unreachable nodes.
    pub distances: Vec<Value>,
    /// Operator applications until the fixpoint was observed; at most `|nodes|`.
    pub iterations: usize,
}

/// Exact distances from the source. A negative cycle reachable from the
/// source is reported with its nodes in traversal order, first node repeated.
pub fn shortest_paths(g: &WeightedGraph) -> Result<ShortestPaths> {
    let s = Semiring::min_plus(false);
    let n = g.nodes.len();
    let kernel = g.kernel()?;
    let space = Space::full(s, kernel.col_points().clone());
    let unit = FiniteFunction::indicator(n, g.source, s.one());
    let mut history = vec![unit.clone()];
    for t in 1..=n {
        let prev = &history[t - 1];
        let next = apply_integral(&kernel, prev, &space)?.join(&s, &unit);
        if next == *prev {
            return Ok(ShortestPaths {
                distances: next.into_values(),
                iterations: t,
            });
        }
        history.push(next);
    }
    Err(Error::NegativeCycle(negative_cycle(g, &kernel, &history)))
}

/// Backtracks an optimal `n`-edge walk that beats every shorter walk; the
/// walk repeats a node, and the enclosed cycle has negative weight.
fn negative_cycle(g: &WeightedGraph, kernel: &KernelMatrix, history: &[FiniteFunction]) -> Vec<String> {
    let s = Semiring::min_plus(false);
    let n = g.nodes.len();
    let last = &history[n];
    let mut v = (0..n)
        .find(|&v| last.get(v) != history[n - 1].get(v))
        .expect("the iterate changed in the last round");
    let mut walk = vec![v];
    for t in (1..=n).rev() {
        let target = history[t].get(v);
        v = (0..n)
            .find(|&u| s.otimes(history[t - 1].get(u), kernel.get(u, v)) == target)
            .expect("an improved value is attained by an edge");
        walk.push(v);
    }
    walk.reverse();
    for (j, &b) in walk.iter().enumerate() {
        if let Some(i) = walk[..j].iter().position(|&a| a == b) {
            return walk[i..=j].iter().map(|&x| g.nodes[x].clone()).collect();
        }
    }
    unreachable!("a walk with n edges over n nodes repeats a node")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> WeightedGraph {
        WeightedGraph::new(
            (0..n).map(|i| format!("n{i}")).collect(),
            edges
                .iter()
                .map(|&(u, v, w)| (u, v, Rational::from_integer(w)))
                .collect(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn single_edge() {
        let r = shortest_paths(&graph(2, &[(0, 1, 5)])).unwrap();
        assert_eq!(r.distances, vec![Value::int(0), Value::int(5)]);
        assert!(r.iterations <= 2);
    }

    #[test]
    fn unreachable_is_the_semiring_zero() {
        let r = shortest_paths(&graph(3, &[(0, 1, 1)])).unwrap();
        assert_eq!(r.distances[2], Value::Bot);
    }

    #[test]
    fn negative_cycle_is_witnessed() {
        let g = graph(4, &[(0, 1, 1), (1, 2, -3), (2, 1, 1), (2, 3, 0)]);
        match shortest_paths(&g) {
            Err(Error::NegativeCycle(c)) => {
                assert_eq!(c.first(), c.last());
                assert!(c.contains(&"n1".to_string()) && c.contains(&"n2".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unreachable_negative_cycle_is_ignored() {
        let g = graph(4, &[(0, 1, 2), (2, 3, -1), (3, 2, -1)]);
        let r = shortest_paths(&g).unwrap();
        assert_eq!(r.distances[1], Value::int(2));
        assert_eq!(r.distances[2], Value::Bot);
    }
}
