//! Exhaustive and randomized search for b-linear maps between enumerated
//! semimodules.
//!
//! Carrier elements are visited along a linear extension of the pointwise
//! order. An element that is the join of two earlier elements, or a scalar
//! multiple of an earlier one, has its image forced; only the remaining
//! (join-irreducible) elements branch over the target carrier. Every join,
//! scalar and zero constraint is checked as soon as all of its elements are
//! assigned.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::operator::Operator;
use super::space::Space;
use crate::error::{Error, Result};
use crate::semimodule::{FunctionalSemimodule, PointSet};

/// Default cap on the source carrier size for exhaustive functional enumeration.
pub const DEFAULT_CARRIER_CAP: usize = 8;
/// Default cap on the number of scalars.
pub const DEFAULT_SCALAR_CAP: usize = 16;
/// Upper bound on the number of maps returned by an exhaustive enumeration.
pub const MAX_ENUMERATED_MAPS: usize = 1 << 20;

#[derive(Clone, Copy)]
enum Constraint {
    /// `A(c) = A(a) ∨ A(b)`.
    Join(usize, usize, usize),
    /// `A(c) = λ_l ⊙ A(a)`.
    Scale(usize, usize, usize),
    /// `A(c) = 0`.
    Zero(usize),
}

#[derive(Clone, Copy)]
enum Force {
    Join(usize, usize),
    Scale(usize, usize),
    Zero,
}

struct Search<'a> {
    src: &'a FunctionalSemimodule,
    dst: &'a FunctionalSemimodule,
    order: Vec<usize>,
    force: Vec<Option<Force>>,
    checks: Vec<Vec<Constraint>>,
    /// `dst_scale[l][w]`: index of `λ_l ⊙ w` in the target, if present.
    dst_scale: Vec<Vec<Option<usize>>>,
    dst_zero: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(src: &'a FunctionalSemimodule, dst: &'a FunctionalSemimodule) -> Result<Self> {
        if src.semiring() != dst.semiring() {
            return Err(Error::Input("source and target use different semirings".into()));
        }
        let n = src.len();
        let s = *src.semiring();
        let below = |i: usize| (0..n).filter(|&j| src.element(j).leq(&s, src.element(i))).count();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (below(i), i));
        let mut pos = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }

        let mut checks = vec![Vec::new(); n];
        let mut force: Vec<Option<Force>> = vec![None; n];
        let zero = src.zero_idx();
        if let Some(z) = zero {
            checks[pos[z]].push(Constraint::Zero(z));
            force[pos[z]] = Some(Force::Zero);
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let c = src.join_idx(a, b);
                if c == a || c == b {
                    // Order constraint: images must be comparable the same way.
                    let at = pos[a].max(pos[b]);
                    checks[at].push(Constraint::Join(a, b, c));
                    continue;
                }
                let at = pos[a].max(pos[b]).max(pos[c]);
                checks[at].push(Constraint::Join(a, b, c));
                if pos[c] > pos[a] && pos[c] > pos[b] && force[pos[c]].is_none() {
                    force[pos[c]] = Some(Force::Join(a, b));
                }
            }
        }
        for l in 0..src.scalars().len() {
            for a in 0..n {
                let c = src.scale_idx(l, a);
                let at = pos[a].max(pos[c]);
                checks[at].push(Constraint::Scale(l, a, c));
                if c != a && pos[c] > pos[a] && force[pos[c]].is_none() {
                    force[pos[c]] = Some(Force::Scale(l, a));
                }
            }
        }

        let dst_scale = src
            .scalars()
            .iter()
            .map(|&lambda| {
                (0..dst.len())
                    .map(|w| dst.index_of(&dst.element(w).scale(&s, lambda)))
                    .collect()
            })
            .collect();

        Ok(Self {
            src,
            dst,
            order,
            force,
            checks,
            dst_scale,
            dst_zero: dst.zero_idx(),
        })
    }

    fn forced_value(&self, f: Force, img: &[usize]) -> Option<usize> {
        match f {
            Force::Join(a, b) => Some(self.dst.join_idx(img[a], img[b])),
            Force::Scale(l, a) => self.dst_scale[l][img[a]],
            Force::Zero => self.dst_zero,
        }
    }

    fn consistent(&self, p: usize, img: &[usize]) -> bool {
        self.checks[p].iter().all(|c| match *c {
            Constraint::Join(a, b, c) => self.dst.join_idx(img[a], img[b]) == img[c],
            Constraint::Scale(l, a, c) => self.dst_scale[l][img[a]] == Some(img[c]),
            Constraint::Zero(c) => Some(img[c]) == self.dst_zero,
        })
    }

    /// Depth-first search. `visit` returns `false` to stop. Returns `false`
    /// when the node budget ran out.
    fn run(&self, rng: Option<&mut dyn Rng>, budget: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.src.len();
        let mut img = vec![usize::MAX; n];
        let mut nodes = 0usize;
        let mut rng = rng;
        let mut stop = false;
        self.descend(0, &mut img, &mut nodes, budget, &mut rng, visit, &mut stop);
        nodes <= budget
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        p: usize,
        img: &mut Vec<usize>,
        nodes: &mut usize,
        budget: usize,
        rng: &mut Option<&mut dyn Rng>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
        stop: &mut bool,
    ) {
        if *stop {
            return;
        }
        *nodes += 1;
        if *nodes > budget {
            *stop = true;
            return;
        }
        if p == self.order.len() {
            if !visit(img) {
                *stop = true;
            }
            return;
        }
        let c = self.order[p];
        let candidates: Vec<usize> = match self.force[p] {
            Some(f) => match self.forced_value(f, img) {
                Some(v) => vec![v],
                None => return,
            },
            None => {
                let mut all: Vec<usize> = (0..self.dst.len()).collect();
                if let Some(r) = rng.as_deref_mut() {
                    all.shuffle(r);
                }
                all
            }
        };
        for v in candidates {
            img[c] = v;
            if self.consistent(p, img) {
                self.descend(p + 1, img, nodes, budget, rng, visit, stop);
                if *stop {
                    return;
                }
            }
        }
        img[c] = usize::MAX;
    }
}

fn to_operator(src: &Arc<FunctionalSemimodule>, dst: &Arc<FunctionalSemimodule>, img: &[usize]) -> Operator {
    let images = img.iter().map(|&w| dst.element(w).clone()).collect();
    Operator::table(Space::Enumerated(src.clone()), Space::Enumerated(dst.clone()), images)
        .expect("search produces well-typed tables")
}

/// Every b-linear map `V → W`, in search order.
pub fn enumerate_b_linear_maps(
    src: &Arc<FunctionalSemimodule>,
    dst: &Arc<FunctionalSemimodule>,
    max_maps: usize,
) -> Result<Vec<Operator>> {
    let search = Search::new(src, dst)?;
    let mut found = Vec::new();
    let mut overflow = false;
    let complete = search.run(None, usize::MAX, &mut |img| {
        if found.len() == max_maps {
            overflow = true;
            return false;
        }
        found.push(to_operator(src, dst, img));
        true
    });
    if overflow || !complete {
        return Err(Error::CapExceeded {
            what: "b-linear maps",
            cap: max_maps,
        });
    }
    Ok(found)
}

/// Visits every b-linear map `V → W` in search order until `visit` returns
/// false. Returns whether the enumeration ran to completion.
pub fn for_each_b_linear_map(
    src: &Arc<FunctionalSemimodule>,
    dst: &Arc<FunctionalSemimodule>,
    visit: &mut dyn FnMut(Operator) -> bool,
) -> Result<bool> {
    let search = Search::new(src, dst)?;
    let mut stopped = false;
    search.run(None, usize::MAX, &mut |img| {
        let go = visit(to_operator(src, dst, img));
        stopped |= !go;
        go
    });
    Ok(!stopped)
}

/// A random b-linear map `V → W`: branching choices are shuffled and the
/// first complete assignment wins. The zero map is always reachable, so the
/// search only fails when `budget` nodes are exhausted first.
pub fn random_b_linear_map(
    src: &Arc<FunctionalSemimodule>,
    dst: &Arc<FunctionalSemimodule>,
    rng: &mut dyn Rng,
    budget: usize,
) -> Result<Operator> {
    let search = Search::new(src, dst)?;
    let mut found = None;
    search.run(Some(rng), budget, &mut |img| {
        found = Some(img.to_vec());
        false
    });
    found
        .map(|img| to_operator(src, dst, &img))
        .ok_or(Error::BudgetExhausted(budget))
}

/// The semiring as an enumerated one-point semimodule.
pub fn scalar_module(src: &FunctionalSemimodule) -> Result<Arc<FunctionalSemimodule>> {
    Ok(Arc::new(FunctionalSemimodule::full(
        *src.semiring(),
        PointSet::numbered("*", 1),
        usize::MAX,
    )?))
}

/// All b-linear functionals `V → K`.
pub fn enumerate_b_linear_functionals(
    v: &Arc<FunctionalSemimodule>,
    carrier_cap: usize,
    scalar_cap: usize,
) -> Result<Vec<Operator>> {
    if v.len() > carrier_cap {
        return Err(Error::CapExceeded {
            what: "carrier size for functional enumeration",
            cap: carrier_cap,
        });
    }
    if v.scalars().len() > scalar_cap {
        return Err(Error::CapExceeded {
            what: "scalar carrier size",
            cap: scalar_cap,
        });
    }
    enumerate_b_linear_maps(v, &scalar_module(v)?, MAX_ENUMERATED_MAPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::operator::is_b_linear;
    use crate::semimodule::FiniteFunction;
    use crate::semiring::{Semiring, SemiringOps, Value};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full(s: Semiring, n: usize) -> Arc<FunctionalSemimodule> {
        Arc::new(FunctionalSemimodule::full(s, PointSet::numbered("x", n), 1 << 12).unwrap())
    }

    /// Brute force: every table carrier(V) -> carrier(W), filtered by is_b_linear.
    fn brute_force_count(src: &Arc<FunctionalSemimodule>, dst: &Arc<FunctionalSemimodule>) -> usize {
        let (n, m) = (src.len(), dst.len());
        let mut count = 0;
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let images: Vec<FiniteFunction> = (0..n)
                .map(|_| {
                    let w = c % m;
                    c /= m;
                    dst.element(w).clone()
                })
                .collect();
            let op = Operator::table(Space::Enumerated(src.clone()), Space::Enumerated(dst.clone()), images).unwrap();
            if is_b_linear(&op).unwrap() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn functional_counts_on_full_boolean() {
        let s = Semiring::boolean();
        let v1 = full(s, 1);
        assert_eq!(enumerate_b_linear_functionals(&v1, 8, 16).unwrap().len(), 2);
        let v2 = full(s, 2);
        let fs = enumerate_b_linear_functionals(&v2, 8, 16).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs.len(), brute_force_count(&v2, &scalar_module(&v2).unwrap()));
        let zero =
            Arc::new(FunctionalSemimodule::new(s, PointSet::numbered("x", 2), vec![FiniteFunction::zero(2)]).unwrap());
        assert_eq!(enumerate_b_linear_functionals(&zero, 8, 16).unwrap().len(), 1);
    }

    #[test]
    fn search_agrees_with_brute_force() {
        let f2 = Semiring::fuzzy_chain(2).unwrap();
        let v = full(f2, 1);
        let w = full(f2, 2);
        let enumerated = enumerate_b_linear_maps(&v, &w, 1 << 16).unwrap();
        assert_eq!(enumerated.len(), brute_force_count(&v, &w));
        for op in &enumerated {
            assert!(is_b_linear(op).unwrap());
        }
        let sn = Semiring::saturated_nat(2).unwrap();
        let v = full(sn, 1);
        let w = full(sn, 1);
        assert_eq!(
            enumerate_b_linear_maps(&v, &w, 1 << 16).unwrap().len(),
            brute_force_count(&v, &w)
        );
    }

    #[test]
    fn random_maps_are_b_linear() {
        let b = Semiring::boolean();
        let one = Value::int(1);
        let bits = |s: &str| FiniteFunction::new(s.chars().map(|c| if c == '1' { one } else { Value::Bot }).collect());
        let diamond = Arc::new(
            FunctionalSemimodule::new(
                b,
                PointSet::numbered("x", 3),
                vec![bits("000"), bits("100"), bits("010"), bits("111")],
            )
            .unwrap(),
        );
        let w = full(b, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let op = random_b_linear_map(&diamond, &w, &mut rng, 10_000).unwrap();
            assert!(is_b_linear(&op).unwrap());
        }
        assert_eq!(b.one(), one);
        assert!(enumerate_b_linear_functionals(&full(b, 4), 8, 16).is_err());
    }
}
