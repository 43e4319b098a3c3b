//! δ-functionals and the evaluation map `i_Δ: V → K(Δ(V))`.
//!
//! A b-linear functional `φ` is a δ-functional when some `v ∈ V` satisfies
//! `φ(w) ⊙ v ≼ w` for every `w ∈ V`. Under [`WitnessRule::Any`] the zero
//! element qualifies, so every b-linear functional is a δ-functional;
//! [`WitnessRule::Nonzero`] demands a nonzero witness (on the zero semimodule
//! the zero element is still accepted).

use std::sync::Arc;

use serde::Serialize;

use super::integral::has_integral_representation;
use super::linear_maps::{enumerate_b_linear_functionals, DEFAULT_SCALAR_CAP};
use super::operator::Operator;
use super::space::Space;
use crate::error::Result;
use crate::semimodule::{FiniteFunction, FunctionalSemimodule, PointSet};
use crate::semiring::{Semiring, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessRule {
    #[default]
    Any,
    Nonzero,
}

#[derive(Clone, Debug)]
pub struct DeltaFunctional {
    pub functional: Operator,
    /// Values on the carrier of `V`, in carrier order.
    pub values: Vec<Value>,
    /// Greatest witness; witnesses form a down-set closed under joins.
    pub witness: FiniteFunction,
}

/// A b-linear functional without a nonzero witness.
#[derive(Clone, Debug, Serialize)]
pub struct RejectedFunctional {
    pub values: Vec<String>,
    /// `(candidate, failing w)` for each minimal nonzero candidate.
    pub failures: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct DeltaSet {
    pub module: Arc<FunctionalSemimodule>,
    pub rule: WitnessRule,
    pub functionals: usize,
    pub deltas: Vec<DeltaFunctional>,
    pub rejected: Vec<RejectedFunctional>,
}

fn values_on(phi: &Operator, v: &FunctionalSemimodule) -> Result<Vec<Value>> {
    v.carrier().iter().map(|f| phi.apply_scalar(f)).collect()
}

/// First `w` with `φ(w) ⊙ cand ⋠ w`.
fn first_failure<'a>(
    s: &Semiring,
    carrier: &'a [FiniteFunction],
    values: &[Value],
    cand: &FiniteFunction,
) -> Option<&'a FiniteFunction> {
    carrier
        .iter()
        .zip(values)
        .find(|(w, &phi_w)| !cand.scale(s, phi_w).leq(s, w))
        .map(|(w, _)| w)
}

/// All δ-functionals on `v`, each with its greatest witness.
pub fn delta_set(v: &Arc<FunctionalSemimodule>, carrier_cap: usize) -> Result<DeltaSet> {
    delta_set_with(v, carrier_cap, WitnessRule::Any)
}

pub fn delta_set_with(v: &Arc<FunctionalSemimodule>, carrier_cap: usize, rule: WitnessRule) -> Result<DeltaSet> {
    let s = *v.semiring();
    let functionals = enumerate_b_linear_functionals(v, carrier_cap, DEFAULT_SCALAR_CAP)?;
    let count = functionals.len();
    let carrier = v.carrier();
    let accept_zero = rule == WitnessRule::Any || carrier.iter().all(FiniteFunction::is_zero);
    let minimal_nonzero: Vec<&FiniteFunction> = carrier
        .iter()
        .filter(|f| !f.is_zero())
        .filter(|f| !carrier.iter().any(|g| !g.is_zero() && g != *f && g.leq(&s, f)))
        .collect();
    let space = Space::Enumerated(v.clone());
    let mut deltas = Vec::new();
    let mut rejected = Vec::new();
    for phi in functionals {
        let values = values_on(&phi, v)?;
        let witnesses = carrier
            .iter()
            .filter(|cand| first_failure(&s, carrier, &values, cand).is_none())
            .cloned();
        let witness = space.join_all(witnesses)?;
        if !witness.is_zero() || accept_zero {
            deltas.push(DeltaFunctional {
                functional: phi,
                values,
                witness,
            });
        } else {
            let failures = minimal_nonzero
                .iter()
                .filter_map(|cand| first_failure(&s, carrier, &values, cand).map(|w| (cand.render(&s), w.render(&s))))
                .collect();
            rejected.push(RejectedFunctional {
                values: values.iter().map(|&x| s.format(x)).collect(),
                failures,
            });
        }
    }
    Ok(DeltaSet {
        module: v.clone(),
        rule,
        functionals: count,
        deltas,
        rejected,
    })
}

/// `i_Δ` together with its image and embedding diagnostics.
#[derive(Clone, Debug)]
pub struct DeltaRepresentation {
    pub delta: DeltaSet,
    /// `phi1, phi2, ...`, one point per δ-functional.
    pub points: PointSet,
    pub map: Operator,
    pub image: Arc<FunctionalSemimodule>,
    pub injective: bool,
    pub join_preserving: bool,
    pub order_reflecting: bool,
}

impl DeltaRepresentation {
    pub fn is_embedding(&self) -> bool {
        self.injective && self.join_preserving && self.order_reflecting
    }

    /// Whether the identity of the image is integral.
    pub fn image_identity_integral(&self) -> Result<bool> {
        let image = Space::Enumerated(self.image.clone());
        Ok(has_integral_representation(&Operator::identity(image))?.integral)
    }

    /// For each point `x` of `V`, the δ-functional agreeing with `f ↦ f(x)`.
    pub fn point_map(&self) -> Vec<Option<usize>> {
        let v = &self.delta.module;
        (0..v.dim())
            .map(|x| {
                self.delta
                    .deltas
                    .iter()
                    .position(|d| v.carrier().iter().zip(&d.values).all(|(f, &val)| f.get(x) == val))
            })
            .collect()
    }

    /// Whether pulling the image back along `point_map` recovers every
    /// element of `V`. `None` when some point has no matching δ-functional.
    pub fn pullback_recovers(&self) -> Option<bool> {
        let map: Vec<usize> = self.point_map().into_iter().collect::<Option<_>>()?;
        let v = &self.delta.module;
        let images = self.map.images().ok()?;
        Some(
            v.carrier()
                .iter()
                .zip(&images)
                .all(|(f, g)| FiniteFunction::new(map.iter().map(|&p| g.get(p)).collect()) == *f),
        )
    }
}

pub fn i_delta(v: &Arc<FunctionalSemimodule>, carrier_cap: usize) -> Result<DeltaRepresentation> {
    i_delta_with(v, carrier_cap, WitnessRule::Any)
}

pub fn i_delta_with(
    v: &Arc<FunctionalSemimodule>,
    carrier_cap: usize,
    rule: WitnessRule,
) -> Result<DeltaRepresentation> {
    let s = *v.semiring();
    let delta = delta_set_with(v, carrier_cap, rule)?;
    let points = PointSet::numbered("phi", delta.deltas.len().max(1));
    let images: Vec<FiniteFunction> = (0..v.len())
        .map(|i| {
            if delta.deltas.is_empty() {
                FiniteFunction::zero(1)
            } else {
                FiniteFunction::new(delta.deltas.iter().map(|d| d.values[i]).collect())
            }
        })
        .collect();
    let image = Arc::new(FunctionalSemimodule::new(s, points.clone(), images.clone())?);
    let n = v.len();
    let injective = image.len() == n;
    let join_preserving = (0..n).all(|i| (0..n).all(|j| images[v.join_idx(i, j)] == images[i].join(&s, &images[j])));
    let order_reflecting =
        (0..n).all(|i| (0..n).all(|j| !images[i].leq(&s, &images[j]) || v.element(i).leq(&s, v.element(j))));
    let map = Operator::table(Space::Enumerated(v.clone()), Space::Enumerated(image.clone()), images)?;
    Ok(DeltaRepresentation {
        delta,
        points,
        map,
        image,
        injective,
        join_preserving,
        order_reflecting,
    })
}
