//! Hypothesis-dropping search: walk small instances in a fixed order and
//! stop at the first one where a statement's conclusion fails.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::checks::{integral, judge, scalar_kernels, Analysis};
use super::config::CheckId;
use super::families::{enumerate_semimodules, Family};
use super::report::{Status, Witness};
use crate::error::{Error, Result};
use crate::kernel::linear_maps::for_each_b_linear_map;
use crate::kernel::nuclear::is_b_nuclear_with;
use crate::kernel::operator::{is_b_linear, Operator};
use crate::kernel::space::Space;
use crate::semimodule::FunctionalSemimodule;
use crate::semiring::{Semiring, SemiringOps, SemiringSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// Keep every hypothesis.
    None,
    /// `thm1`: `V` contains 0 and is closed under infima.
    InfClosure,
    /// `thm1`: the target is admissible.
    Admissibility,
    /// `thm2`: every b-linear functional on `V` is integral.
    FunctionalIntegrality,
    /// `prop2`: `V` is a b-subsemimodule.
    BSubsemimodule,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 5] = [
        Hypothesis::None,
        Hypothesis::InfClosure,
        Hypothesis::Admissibility,
        Hypothesis::FunctionalIntegrality,
        Hypothesis::BSubsemimodule,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::None => "none",
            Hypothesis::InfClosure => "inf-closure",
            Hypothesis::Admissibility => "admissibility",
            Hypothesis::FunctionalIntegrality => "functional-integrality",
            Hypothesis::BSubsemimodule => "b-subsemimodule",
        }
    }

    /// Whether `statement` has this hypothesis to drop.
    pub fn applies_to(self, statement: CheckId) -> bool {
        matches!(
            (statement, self),
            (
                CheckId::Prop1 | CheckId::Prop2 | CheckId::Thm1 | CheckId::Thm2,
                Hypothesis::None
            ) | (CheckId::Thm1, Hypothesis::InfClosure | Hypothesis::Admissibility)
                | (CheckId::Thm2, Hypothesis::FunctionalIntegrality)
                | (CheckId::Prop2, Hypothesis::BSubsemimodule)
        )
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypothesis::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown hypothesis `{s}`")))
    }
}

/// The instances a search walks through.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpace {
    pub semirings: Vec<SemiringSpec>,
    pub max_points: usize,
    pub carrier_cap: usize,
    pub target_points: usize,
    pub target_carrier_cap: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            semirings: vec![
                SemiringSpec::from(Semiring::boolean()),
                SemiringSpec::from(Semiring::fuzzy_chain(2).expect("valid level count")),
            ],
            max_points: 3,
            carrier_cap: 8,
            target_points: 2,
            target_carrier_cap: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub witness: Witness,
    pub description: String,
    /// Whether the witness satisfies the dropped hypothesis anyway; `true`
    /// means the statement fails even with it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub statement: CheckId,
    pub dropped: Hypothesis,
    pub budget: usize,
    /// Instances or operators tested.
    pub examined: usize,
    /// Whether every candidate was tested without reaching the budget.
    pub complete: bool,
    pub found: Option<Counterexample>,
}

impl SearchReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} without {}: examined {} of budget {}{}\n",
            self.statement,
            self.dropped,
            self.examined,
            self.budget,
            if self.complete { ", search space exhausted" } else { "" }
        );
        match &self.found {
            None => out.push_str("no counterexample found\n"),
            Some(c) => {
                let w = &c.witness;
                let s = w.semiring().map(|s| s.name()).unwrap_or_default();
                let v = w
                    .module
                    .build(w.semiring().expect("witness semiring"))
                    .map(|m| m.render());
                out.push_str(&format!(
                    "counterexample over {s}: V={} {}\n",
                    v.unwrap_or_default(),
                    c.description
                ));
                if let Some(h) = c.hypothesis_holds {
                    out.push_str(&format!("dropped hypothesis holds on the witness: {h}\n"));
                }
            }
        }
        out
    }
}

/// Candidate sources ordered by carrier size, then `|X|`, then semiring,
/// then canonical carrier order.
fn candidates(space: &SearchSpace, semirings: &[Semiring]) -> Result<Vec<Arc<FunctionalSemimodule>>> {
    let mut keyed = Vec::new();
    for (si, &s) in semirings.iter().enumerate() {
        for dim in 1..=space.max_points {
            for (pos, v) in enumerate_semimodules(s, dim, space.carrier_cap, Family::All)?
                .into_iter()
                .enumerate()
            {
                keyed.push(((v.len(), dim, si, pos), v));
            }
        }
    }
    keyed.sort_by_key(|(k, _)| *k);
    Ok(keyed.into_iter().map(|(_, v)| v).collect())
}

fn targets(space: &SearchSpace, s: Semiring) -> Result<Vec<Arc<FunctionalSemimodule>>> {
    let mut keyed = Vec::new();
    for dim in 1..=space.target_points {
        for (pos, w) in enumerate_semimodules(s, dim, space.target_carrier_cap, Family::All)?
            .into_iter()
            .enumerate()
        {
            keyed.push(((w.len(), dim, pos), w));
        }
    }
    keyed.sort_by_key(|(k, _)| *k);
    Ok(keyed.into_iter().map(|(_, w)| w).collect())
}

/// `f ↦ ⊕ k(x) ⊙ f(x)` for a scalar kernel.
fn describe_scalar_kernel(v: &FunctionalSemimodule, op_kernel: &[crate::semiring::Value]) -> String {
    let s = v.semiring();
    let terms: Vec<String> = op_kernel
        .iter()
        .enumerate()
        .filter(|(_, k)| **k != s.zero())
        .map(|(x, &k)| {
            let label = v.points().label(x);
            if k == s.one() {
                format!("f({label})")
            } else {
                format!("{} ⊙ f({label})", s.format(k))
            }
        })
        .collect();
    if terms.is_empty() {
        "f ↦ 0".to_string()
    } else {
        format!("f ↦ {}", terms.join(" ⊕ "))
    }
}

struct Walk {
    budget: usize,
    examined: usize,
}

impl Walk {
    /// Counts one test; false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.examined >= self.budget {
            return false;
        }
        self.examined += 1;
        true
    }
}

/// Searches for the smallest instance on which `statement` fails once
/// `dropped` is no longer required.
pub fn counterexample_search(statement: CheckId, dropped: Hypothesis, budget: usize) -> Result<SearchReport> {
    counterexample_search_in(&SearchSpace::default(), statement, dropped, budget)
}

pub fn counterexample_search_in(
    space: &SearchSpace,
    statement: CheckId,
    dropped: Hypothesis,
    budget: usize,
) -> Result<SearchReport> {
    if !dropped.applies_to(statement) {
        return Err(Error::Input(format!(
            "{statement} has no hypothesis `{dropped}` to drop"
        )));
    }
    let semirings = space
        .semirings
        .iter()
        .map(Semiring::try_from)
        .collect::<Result<Vec<_>>>()?;
    let pools = if matches!(statement, CheckId::Thm1 | CheckId::Thm2) {
        semirings
            .iter()
            .map(|&s| targets(space, s))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut walk = Walk { budget, examined: 0 };
    let mut found = None;
    let mut complete = true;
    for v in candidates(space, &semirings)? {
        if walk.examined >= budget {
            complete = false;
            break;
        }
        let a = Analysis::new(v.clone(), space.carrier_cap);
        let pool = || {
            let si = semirings
                .iter()
                .position(|s| s == v.semiring())
                .expect("candidate semiring");
            &pools[si]
        };
        let hit = match statement {
            CheckId::Prop1 => {
                walk.tick();
                verdict_of(CheckId::Prop1, &a)
            }
            CheckId::Prop2 if dropped == Hypothesis::None => {
                walk.tick();
                verdict_of(CheckId::Prop2, &a)
            }
            CheckId::Prop2 => prop2_dropped(&a, &mut walk)?,
            CheckId::Thm1 => thm1(&a, pool(), dropped, &mut walk)?,
            CheckId::Thm2 => thm2(&a, pool(), dropped, &mut walk)?,
            _ => unreachable!("applies_to admits no other statement"),
        };
        if let Some(c) = hit {
            found = Some(c);
            complete = false;
            break;
        }
        if walk.examined >= budget {
            complete = false;
            break;
        }
    }
    Ok(SearchReport {
        statement,
        dropped,
        budget,
        examined: walk.examined,
        complete,
        found,
    })
}

fn verdict_of(check: CheckId, a: &Analysis) -> Option<Counterexample> {
    let out = judge(check, a, &[]);
    (out.status == Status::Violation).then(|| Counterexample {
        witness: out.witness.unwrap_or_else(|| Witness::of_module(&a.module)),
        description: out.detail.unwrap_or_default(),
        hypothesis_holds: None,
    })
}

/// Integral operators on any IFS: scalar kernels first, then kernels into V.
fn prop2_dropped(a: &Analysis, walk: &mut Walk) -> Result<Option<Counterexample>> {
    let v = &a.module;
    let s = *v.semiring();
    let space = Space::Enumerated(v.clone());
    for k in scalar_kernels(v)? {
        if !walk.tick() {
            return Ok(None);
        }
        let values: Vec<_> = (0..v.dim()).map(|x| k.row(x).get(0)).collect();
        let op = Operator::from_kernel(space.clone(), Space::scalars(s), k)?;
        if !is_b_linear(&op)? {
            let table = Operator::table(
                space.clone(),
                Space::Enumerated(crate::kernel::linear_maps::scalar_module(v)?),
                op.images()?,
            )?;
            return Ok(Some(Counterexample {
                witness: Witness::with_operator(v, &table)?,
                description: format!(
                    "integral functional {} is not b-linear",
                    describe_scalar_kernel(v, &values)
                ),
                hypothesis_holds: Some(v.is_b_subsemimodule()),
            }));
        }
    }
    Ok(None)
}

fn thm1(
    a: &Analysis,
    pool: &[Arc<FunctionalSemimodule>],
    dropped: Hypothesis,
    walk: &mut Walk,
) -> Result<Option<Counterexample>> {
    let v = &a.module;
    if dropped != Hypothesis::InfClosure && !v.is_inf_closed() {
        return Ok(None);
    }
    for w in pool {
        if dropped != Hypothesis::Admissibility && !w.is_admissible() {
            continue;
        }
        let mut hit = None;
        let mut failure = None;
        for_each_b_linear_map(v, w, &mut |op| {
            if !walk.tick() {
                return false;
            }
            match integral(&op) {
                Ok(true) => true,
                Ok(false) => {
                    hit = Some(op);
                    false
                }
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(op) = hit {
            let holds = match dropped {
                Hypothesis::InfClosure => Some(v.is_inf_closed()),
                Hypothesis::Admissibility => Some(w.is_admissible()),
                _ => None,
            };
            return Ok(Some(Counterexample {
                witness: Witness::with_operator(v, &op)?,
                description: format!(
                    "b-linear map into W={} has no integral representation (V {} admissible)",
                    w.render(),
                    if v.is_admissible() { "is" } else { "is not" }
                ),
                hypothesis_holds: holds,
            }));
        }
        if walk.examined >= walk.budget {
            return Ok(None);
        }
    }
    Ok(None)
}

fn thm2(
    a: &Analysis,
    pool: &[Arc<FunctionalSemimodule>],
    dropped: Hypothesis,
    walk: &mut Walk,
) -> Result<Option<Counterexample>> {
    let v = &a.module;
    if !v.is_b_subsemimodule() {
        return Ok(None);
    }
    let functionals = match a.functionals() {
        Ok(f) => f,
        Err(Error::CapExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let functionals_integral = a.non_integral_functional()?.is_none();
    if dropped != Hypothesis::FunctionalIntegrality && !functionals_integral {
        return Ok(None);
    }
    for w in pool {
        let mut hit = None;
        let mut failure = None;
        for_each_b_linear_map(v, w, &mut |op| {
            if !walk.tick() {
                return false;
            }
            let r = integral(&op).and_then(|int| Ok((int, is_b_nuclear_with(&op, &functionals)?.nuclear)));
            match r {
                Ok((int, nuc)) if int == nuc => true,
                Ok((int, nuc)) => {
                    hit = Some((op, int, nuc));
                    false
                }
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some((op, int, nuc)) = hit {
            return Ok(Some(Counterexample {
                witness: Witness::with_operator(v, &op)?,
                description: format!("b-linear map into W={}: integral={int} but b-nuclear={nuc}", w.render()),
                hypothesis_holds: (dropped == Hypothesis::FunctionalIntegrality).then_some(functionals_integral),
            }));
        }
        if walk.examined >= walk.budget {
            return Ok(None);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggles_are_validated() {
        assert!(counterexample_search(CheckId::Thm3, Hypothesis::None, 10).is_err());
        assert!(counterexample_search(CheckId::Prop2, Hypothesis::InfClosure, 10).is_err());
        assert_eq!(
            "b-subsemimodule".parse::<Hypothesis>().unwrap(),
            Hypothesis::BSubsemimodule
        );
    }

    #[test]
    fn budget_is_respected() {
        let r = counterexample_search(CheckId::Prop1, Hypothesis::None, 5).unwrap();
        assert_eq!(r.examined, 5);
        assert!(!r.complete);
        assert!(r.found.is_none());
    }

    #[test]
    fn prop2_without_b_sub_finds_the_diamond() {
        let r = counterexample_search(CheckId::Prop2, Hypothesis::BSubsemimodule, 100_000).unwrap();
        let c = r.found.expect("witness");
        let s = c.witness.semiring().unwrap();
        assert_eq!(s, Semiring::boolean());
        assert_eq!(c.witness.module.build(s).unwrap().render(), "{000,010,100,111}");
        assert!(c.description.contains("f ↦ f(x3)"), "{}", c.description);
        assert_eq!(c.hypothesis_holds, Some(false));
    }
}
