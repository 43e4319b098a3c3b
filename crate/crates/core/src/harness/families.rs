//! Instance families: exhaustive enumeration of small functional semimodules
//! and seeded random generation of semimodules and b-linear operators.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::integral::KernelMatrix;
use crate::kernel::linear_maps::random_b_linear_map;
use crate::kernel::operator::{is_b_linear, Operator};
use crate::kernel::space::Space;
use crate::semimodule::{closure, enumerate_full_space, FiniteFunction, FunctionalSemimodule, PointSet};
use crate::semiring::{Semiring, SemiringOps};

/// Node budget for the randomized b-linear map search.
pub const RANDOM_MAP_BUDGET: usize = 200_000;
/// Upper bound on `|K(X)|` for exhaustive family enumeration.
pub const FULL_SPACE_CAP: usize = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Every valid functional semimodule.
    #[default]
    All,
    /// Only those closed under pointwise infima (∧-semimodules).
    InfClosed,
}

/// Canonical order on carriers of a fixed space: by size, then by the set of
/// little-endian element indices compared from the largest index down
/// (bitmask order within one size).
fn carrier_key(indices: &BTreeSet<usize>) -> (usize, Vec<usize>) {
    (indices.len(), indices.iter().rev().copied().collect())
}

fn closed_set(
    s: &Semiring,
    dim: usize,
    gens: &[FiniteFunction],
    inf_close: bool,
    cap: usize,
) -> Option<Vec<FiniteFunction>> {
    closure(s, dim, gens, false, inf_close, cap).ok()
}

/// All valid functional semimodules in `K(X)`, `|X| = dim`, with at most
/// `cap` elements, in canonical order.
///
/// The search runs over sets closed under scalar action (and pointwise meets
/// for [`Family::InfClosed`]); every such set of size `≤ cap` is reached by
/// adding one element at a time, because the closure of a subset of its
/// elements is contained in it.
pub fn enumerate_semimodules(
    s: Semiring,
    dim: usize,
    cap: usize,
    family: Family,
) -> Result<Vec<Arc<FunctionalSemimodule>>> {
    let space = enumerate_full_space(&s, dim, FULL_SPACE_CAP)?;
    let position: HashMap<&FiniteFunction, usize> = space.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let inf_close = family == Family::InfClosed;
    let to_indices = |set: &[FiniteFunction]| -> BTreeSet<usize> { set.iter().map(|f| position[f]).collect() };

    let start = closed_set(&s, dim, &[], inf_close, cap).ok_or(Error::CapExceeded {
        what: "semimodule family",
        cap,
    })?;
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    let first = to_indices(&start);
    seen.insert(first.clone());
    queue.push_back(first);
    while let Some(set) = queue.pop_front() {
        if set.len() == cap {
            continue;
        }
        let elems: Vec<FiniteFunction> = set.iter().map(|&i| space[i].clone()).collect();
        for (g_idx, g) in space.iter().enumerate() {
            if set.contains(&g_idx) {
                continue;
            }
            let mut gens = elems.clone();
            gens.push(g.clone());
            if let Some(next) = closed_set(&s, dim, &gens, inf_close, cap) {
                let key = to_indices(&next);
                if seen.insert(key.clone()) {
                    queue.push_back(key);
                }
            }
        }
    }

    let mut sets: Vec<BTreeSet<usize>> = seen.into_iter().collect();
    sets.sort_by_key(carrier_key);
    let points = PointSet::numbered("x", dim);
    Ok(sets
        .into_iter()
        .filter_map(|set| {
            let carrier = set.iter().map(|&i| space[i].clone()).collect();
            FunctionalSemimodule::new(s, points.clone(), carrier).ok().map(Arc::new)
        })
        .collect())
}

/// How [`gen_semimodule`] closes its random generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// Scalar action and pointwise joins: always a b-subsemimodule.
    Pointwise,
    /// Scalar action, pointwise joins and meets.
    InfClosed,
    /// Scalar action plus the top function; valid only when least upper
    /// bounds happen to exist, so generation may fail.
    Loose,
}

/// A random functional semimodule from one to three random generators.
pub fn gen_semimodule(
    s: Semiring,
    dim: usize,
    mode: GenMode,
    cap: usize,
    rng: &mut dyn Rng,
) -> Result<Arc<FunctionalSemimodule>> {
    let count = rng.random_range(1..=3);
    let mut gens: Vec<FiniteFunction> = (0..count)
        .map(|_| FiniteFunction::new((0..dim).map(|_| s.sample(rng)).collect()))
        .collect();
    let elems = match mode {
        GenMode::Pointwise => closure(&s, dim, &gens, true, false, cap)?,
        GenMode::InfClosed => closure(&s, dim, &gens, true, true, cap)?,
        GenMode::Loose => {
            let top = s.top_element().ok_or_else(|| Error::NotEnumerable(s.name()))?;
            gens.push(FiniteFunction::constant(top, dim));
            closure(&s, dim, &gens, false, false, cap)?
        }
    };
    Ok(Arc::new(FunctionalSemimodule::new(
        s,
        PointSet::numbered("x", dim),
        elems,
    )?))
}

/// A random b-linear operator `V → W`.
///
/// Over a b-subsemimodule the operator is integral with a random kernel whose
/// rows lie in `W`; otherwise it is a random solution of the join, scalar and
/// zero constraints. Either way the result is validated with [`is_b_linear`].
pub fn gen_b_linear_operator(
    v: &Arc<FunctionalSemimodule>,
    w: &Arc<FunctionalSemimodule>,
    rng: &mut dyn Rng,
) -> Result<Operator> {
    let source = Space::Enumerated(v.clone());
    let target = Space::Enumerated(w.clone());
    if v.is_b_subsemimodule() {
        let rows = (0..v.dim())
            .map(|_| w.carrier().choose(rng).expect("nonempty carrier").clone())
            .collect();
        let k = KernelMatrix::new(*v.semiring(), v.points().clone(), w.points().clone(), rows)?;
        let op = Operator::from_kernel(source, target, k)?.to_table()?;
        if is_b_linear(&op)? {
            return Ok(op);
        }
    }
    random_operator(v, w, rng)
}

/// A random solution of the b-linearity constraints, ignoring integrality.
pub fn random_operator(
    v: &Arc<FunctionalSemimodule>,
    w: &Arc<FunctionalSemimodule>,
    rng: &mut dyn Rng,
) -> Result<Operator> {
    let op = random_b_linear_map(v, w, rng, RANDOM_MAP_BUDGET)?;
    debug_assert!(is_b_linear(&op).unwrap_or(false));
    Ok(op)
}
