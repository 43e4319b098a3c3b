//! Classical oracles for the tropical applications, written directly over
//! exact rationals without the kernel machinery.
#![allow(dead_code)]

use idemkern::apps::{Hmm, WeightedGraph};
use idemkern::semiring::Rational;
use idemkern::Value;
use rand::{Rng, RngExt};

pub fn random_weight(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.random_range(lo..=hi), rng.random_range(1..=4))
}

/// Up to `max_nodes` nodes; about half the graphs allow negative edges.
pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, allow_negative: bool) -> WeightedGraph {
    let n = rng.random_range(1..=max_nodes);
    let m = rng.random_range(0..=3 * n);
    let lo = if allow_negative { -3 } else { 0 };
    let edges = (0..m)
        .map(|_| {
            (
                rng.random_range(0..n),
                rng.random_range(0..n),
                random_weight(rng, lo, 12),
            )
        })
        .collect();
    let nodes = (0..n).map(|i| format!("v{i}")).collect();
    WeightedGraph::new(nodes, edges, rng.random_range(0..n)).unwrap()
}

/// Bellman-Ford; `None` when a negative cycle is reachable from the source.
pub fn bellman_ford(g: &WeightedGraph) -> Option<Vec<Option<Rational>>> {
    let n = g.nodes.len();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    dist[g.source] = Some(Rational::from_integer(0));
    for _ in 0..n.saturating_sub(1) {
        for &(u, v, w) in &g.edges {
            if let Some(du) = dist[u] {
                if dist[v].is_none_or(|dv| du + w < dv) {
                    dist[v] = Some(du + w);
                }
            }
        }
    }
    for &(u, v, w) in &g.edges {
        if let (Some(du), Some(dv)) = (dist[u], dist[v]) {
            if du + w < dv {
                return None;
            }
        }
    }
    Some(dist)
}

/// Weight of a closed walk given by labels, using the lightest parallel edge.
pub fn cycle_weight(g: &WeightedGraph, labels: &[String]) -> Option<Rational> {
    let idx: Vec<usize> = labels
        .iter()
        .map(|l| g.nodes.iter().position(|n| n == l))
        .collect::<Option<_>>()?;
    let mut total = Rational::from_integer(0);
    for pair in idx.windows(2) {
        total += g
            .edges
            .iter()
            .filter(|e| e.0 == pair[0] && e.1 == pair[1])
            .map(|e| e.2)
            .min()?;
    }
    Some(total)
}

fn log_weight(rng: &mut impl Rng) -> Value {
    if rng.random_range(0..6) == 0 {
        Value::Bot
    } else {
        Value::Fin(random_weight(rng, -8, 0))
    }
}

pub fn random_hmm(rng: &mut impl Rng, max_states: usize, max_len: usize) -> Hmm {
    let n = rng.random_range(1..=max_states);
    let m = rng.random_range(1..=3);
    let t = rng.random_range(1..=max_len);
    Hmm {
        states: (0..n).map(|i| format!("s{i}")).collect(),
        symbols: (0..m).map(|i| format!("o{i}")).collect(),
        initial: (0..n).map(|_| log_weight(rng)).collect(),
        transition: (0..n).map(|_| (0..n).map(|_| log_weight(rng)).collect()).collect(),
        emission: (0..n).map(|_| (0..m).map(|_| log_weight(rng)).collect()).collect(),
        sequence: (0..t).map(|_| rng.random_range(0..m)).collect(),
    }
}

/// Log-weight of a state path; `None` is `-∞`.
pub fn path_score(h: &Hmm, path: &[usize]) -> Option<Rational> {
    let fin = |v: Value| match v {
        Value::Fin(q) => Some(q),
        _ => None,
    };
    let mut total = fin(h.initial[path[0]])? + fin(h.emission[path[0]][h.sequence[0]])?;
    for t in 1..path.len() {
        total += fin(h.transition[path[t - 1]][path[t]])? + fin(h.emission[path[t]][h.sequence[t]])?;
    }
    Some(total)
}

/// Best score over every state path.
pub fn exhaustive_viterbi(h: &Hmm) -> Option<Rational> {
    let n = h.states.len();
    let t = h.sequence.len();
    let mut best = None;
    let mut path = vec![0usize; t];
    loop {
        if let Some(score) = path_score(h, &path) {
            if best.is_none_or(|b| score > b) {
                best = Some(score);
            }
        }
        let mut pos = 0;
        loop {
            if pos == t {
                return best;
            }
            path[pos] += 1;
            if path[pos] < n {
                break;
            }
            path[pos] = 0;
            pos += 1;
        }
    }
}

pub fn as_value(q: Option<Rational>) -> Value {
    q.map_or(Value::Bot, Value::Fin)
}
