//! Rank-one maps, b-nuclear operators and the approximation property.

use serde::Serialize;

use super::integral::{has_integral_representation, KernelMatrix};
use super::linear_maps::{enumerate_b_linear_functionals, DEFAULT_CARRIER_CAP, DEFAULT_SCALAR_CAP};
use super::operator::Operator;
use super::space::Space;
use crate::error::{Error, Result};
use crate::semimodule::{FiniteFunction, PointSet};
use crate::semiring::SemiringOps;

/// `v ↦ φ(v) ⊙ w` for a functional `φ` and a vector `w`.
#[derive(Clone, Debug)]
pub struct RankOneMap {
    pub functional: Operator,
    pub vector: FiniteFunction,
}

impl RankOneMap {
    pub fn apply(&self, target: &Space, f: &FiniteFunction) -> Result<FiniteFunction> {
        target.scale(self.functional.apply_scalar(f)?, &self.vector)
    }
}

/// A finite join of rank-one maps `V → W`.
#[derive(Clone, Debug)]
pub struct NuclearDecomposition {
    pub source: Space,
    pub target: Space,
    pub terms: Vec<RankOneMap>,
}

impl NuclearDecomposition {
    pub fn apply(&self, f: &FiniteFunction) -> Result<FiniteFunction> {
        let parts = self
            .terms
            .iter()
            .map(|t| t.apply(&self.target, f))
            .collect::<Result<Vec<_>>>()?;
        self.target.join_all(parts)
    }

    /// The decomposition as an operator.
    pub fn to_operator(&self) -> Result<Operator> {
        match self.source.carrier() {
            Some(c) => {
                let images = c.iter().map(|f| self.apply(f)).collect::<Result<Vec<_>>>()?;
                Operator::table(self.source.clone(), self.target.clone(), images)
            }
            None => {
                let this = self.clone();
                Operator::from_fn(self.source.clone(), self.target.clone(), move |f| this.apply(f))
            }
        }
    }

    /// `(functional values on the source carrier, vector)` per term.
    pub fn summary(&self) -> Result<Vec<TermSummary>> {
        let s = *self.source.semiring();
        self.terms
            .iter()
            .map(|t| {
                let functional = match self.source.carrier() {
                    Some(c) => Some(
                        c.iter()
                            .map(|f| Ok(s.format(t.functional.apply_scalar(f)?)))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    None => None,
                };
                Ok(TermSummary {
                    functional,
                    vector: t.vector.render(&s),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TermSummary {
    /// Values on the source carrier, when it is enumerated.
    pub functional: Option<Vec<String>>,
    pub vector: String,
}

/// The evaluation functional `f ↦ f(x)` on `space`.
pub fn evaluation_functional(space: &Space, x: usize) -> Result<Operator> {
    let s = *space.semiring();
    let n = space.dim();
    let rows = (0..n)
        .map(|i| FiniteFunction::new(vec![if i == x { s.one() } else { s.zero() }]))
        .collect();
    let kernel = KernelMatrix::new(s, space.points().clone(), PointSet::numbered("*", 1), rows)?;
    Operator::from_kernel(space.clone(), Space::scalars(s), kernel)
}

/// `A = ∨_x δ_x ⊙ k(x)` for an integral operator with kernel `k`.
///
/// The evaluation functionals are b-linear only when the source join is
/// pointwise, so the source must be a b-subsemimodule.
pub fn nuclear_decomposition_from_kernel(a: &Operator) -> Result<NuclearDecomposition> {
    if !a.source().is_b_subsemimodule() {
        return Err(Error::NotBSubsemimodule);
    }
    let verdict = has_integral_representation(a)?;
    if !verdict.integral {
        let s = *a.source().semiring();
        return Err(Error::NotIntegral(
            verdict.mismatch.map(|f| f.render(&s)).unwrap_or_default(),
        ));
    }
    let terms = (0..a.source().dim())
        .map(|x| {
            Ok(RankOneMap {
                functional: evaluation_functional(a.source(), x)?,
                vector: verdict.kernel.row(x).clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NuclearDecomposition {
        source: a.source().clone(),
        target: a.target().clone(),
        terms,
    })
}

/// Outcome of [`is_b_nuclear`].
#[derive(Clone, Debug)]
pub struct NuclearityVerdict {
    pub nuclear: bool,
    /// Number of b-linear functionals on the source.
    pub functionals: usize,
    /// Canonical decomposition over all functionals with nonzero vector.
    pub decomposition: NuclearDecomposition,
    /// First source element where the canonical decomposition falls short.
    pub mismatch: Option<FiniteFunction>,
}

/// Largest `w ∈ W` with `φ(v) ⊙ w ≼ Av` for all `v`.
fn largest_vector(
    a: &Operator,
    phi: &Operator,
    carrier: &[FiniteFunction],
    w: &[FiniteFunction],
) -> Result<FiniteFunction> {
    let s = *a.source().semiring();
    let target = a.target();
    let values = carrier
        .iter()
        .map(|v| Ok((phi.apply_scalar(v)?, a.apply(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let admissible = w
        .iter()
        .filter(|cand| values.iter().all(|(lambda, av)| cand.scale(&s, *lambda).leq(&s, av)))
        .cloned();
    target.join_all(admissible)
}

/// Decides b-nuclearity from the definition: `A` is a finite join of rank-one
/// maps with b-linear functionals iff it equals the join, over every b-linear
/// functional `φ`, of `φ ⊙ w_φ` with `w_φ` the largest admissible vector.
///
/// Both spaces must be enumerable; full spaces over finite semirings are
/// materialized.
pub fn is_b_nuclear(a: &Operator, carrier_cap: usize) -> Result<NuclearityVerdict> {
    let source = a.source().materialize(1 << 12)?;
    let target = a.target().materialize(1 << 12)?;
    let v = match &source {
        Space::Enumerated(v) => v.clone(),
        Space::Full { semiring, .. } => return Err(Error::NotEnumerable(semiring.name())),
    };
    if let Space::Full { semiring, .. } = &target {
        return Err(Error::NotEnumerable(semiring.name()));
    }
    let a = if source == *a.source() && target == *a.target() {
        a.clone()
    } else {
        let images = v.carrier().iter().map(|f| a.apply(f)).collect::<Result<Vec<_>>>()?;
        Operator::table(source.clone(), target.clone(), images)?
    };
    let functionals = enumerate_b_linear_functionals(&v, carrier_cap, DEFAULT_SCALAR_CAP)?;
    is_b_nuclear_with(&a, &functionals)
}

/// [`is_b_nuclear`] for an operator between enumerated spaces, given every
/// b-linear functional on its source.
pub fn is_b_nuclear_with(a: &Operator, functionals: &[Operator]) -> Result<NuclearityVerdict> {
    let (v, w) = match (a.source(), a.target()) {
        (Space::Enumerated(v), Space::Enumerated(w)) => (v.clone(), w.clone()),
        _ => return Err(Error::NeedsCarrier("deciding b-nuclearity")),
    };
    let mut terms = Vec::new();
    for phi in functionals {
        let vector = largest_vector(a, phi, v.carrier(), w.carrier())?;
        let trivial = vector.is_zero()
            || v.carrier()
                .iter()
                .all(|f| phi.apply_scalar(f).is_ok_and(|x| x.is_bot()));
        if !trivial {
            terms.push(RankOneMap {
                functional: phi.clone(),
                vector,
            });
        }
    }
    let decomposition = NuclearDecomposition {
        source: a.source().clone(),
        target: a.target().clone(),
        terms,
    };
    let mut mismatch = None;
    for f in v.carrier() {
        if decomposition.apply(f)? != a.apply(f)? {
            mismatch = Some(f.clone());
            break;
        }
    }
    Ok(NuclearityVerdict {
        nuclear: mismatch.is_none(),
        functionals: functionals.len(),
        decomposition,
        mismatch,
    })
}

/// [`is_b_nuclear`] with the default carrier cap.
pub fn is_b_nuclear_default(a: &Operator) -> Result<NuclearityVerdict> {
    is_b_nuclear(a, DEFAULT_CARRIER_CAP)
}

/// Whether the identity of `space` is integral.
pub fn has_approximation_property(space: &Space) -> Result<bool> {
    Ok(has_integral_representation(&Operator::identity(space.clone()))?.integral)
}
