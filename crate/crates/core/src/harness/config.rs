use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::families::Family;
use crate::error::{Error, Result};
use crate::semiring::{Semiring, SemiringOps, SemiringSpec};

/// The eleven structural statements checked by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Prop1,
    Prop2,
    Thm1,
    Thm2,
    Prop3,
    Corollary,
    Thm3,
    Thm3a,
    Prop4,
    Thm4,
    Prop5,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::Prop1,
        CheckId::Prop2,
        CheckId::Thm1,
        CheckId::Thm2,
        CheckId::Prop3,
        CheckId::Corollary,
        CheckId::Thm3,
        CheckId::Thm3a,
        CheckId::Prop4,
        CheckId::Thm4,
        CheckId::Prop5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Prop1 => "prop1",
            CheckId::Prop2 => "prop2",
            CheckId::Thm1 => "thm1",
            CheckId::Thm2 => "thm2",
            CheckId::Prop3 => "prop3",
            CheckId::Corollary => "corollary",
            CheckId::Thm3 => "thm3",
            CheckId::Thm3a => "thm3a",
            CheckId::Prop4 => "prop4",
            CheckId::Thm4 => "thm4",
            CheckId::Prop5 => "prop5",
        }
    }

    /// Whether the check generates operators out of each instance.
    pub fn uses_operators(self) -> bool {
        matches!(
            self,
            CheckId::Thm1 | CheckId::Thm2 | CheckId::Prop3 | CheckId::Corollary | CheckId::Thm3 | CheckId::Thm3a
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown check `{s}`")))
    }
}

/// Parameters of a suite run. Identical configurations produce identical
/// instance streams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub semirings: Vec<SemiringSpec>,
    /// Inclusive range of `|X|`.
    pub points: (usize, usize),
    /// Largest source carrier.
    pub carrier_cap: usize,
    /// Generated operators per instance and direction.
    pub operators: usize,
    /// Largest `|Y|` for target semimodules.
    pub target_points: usize,
    /// Largest target carrier.
    pub target_carrier_cap: usize,
    pub seed: u64,
    /// Enumerate every semimodule within the caps instead of sampling.
    pub exhaustive: bool,
    pub family: Family,
    /// Random instances per semiring and `|X|` when not exhaustive.
    pub instances: usize,
    pub checks: Vec<CheckId>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            semirings: vec![
                SemiringSpec::from(Semiring::boolean()),
                SemiringSpec::from(Semiring::fuzzy_chain(2).expect("valid level count")),
            ],
            points: (1, 3),
            carrier_cap: 8,
            operators: 50,
            target_points: 2,
            target_carrier_cap: 8,
            seed: 0,
            exhaustive: true,
            family: Family::All,
            instances: 25,
            checks: CheckId::ALL.to_vec(),
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<Vec<Semiring>> {
        let bad = |msg: &str| Err(Error::Input(format!("invalid trial configuration: {msg}")));
        if self.semirings.is_empty() {
            return bad("no semirings");
        }
        if self.points.0 == 0 || self.points.0 > self.points.1 {
            return bad("points must be a range 1 <= min <= max");
        }
        if self.carrier_cap == 0 || self.target_carrier_cap == 0 || self.target_points == 0 {
            return bad("caps must be positive");
        }
        if !self.exhaustive && self.instances == 0 {
            return bad("instances must be positive in sampling mode");
        }
        if self.checks.is_empty() {
            return bad("no checks selected");
        }
        self.semirings
            .iter()
            .map(|spec| {
                let s = Semiring::try_from(spec)?;
                if !s.is_enumerable() {
                    return Err(Error::NotEnumerable(s.name()));
                }
                Ok(s)
            })
            .collect()
    }

    /// The selected checks in canonical order, without duplicates.
    pub fn selected_checks(&self) -> Vec<CheckId> {
        let mut c = self.checks.clone();
        c.sort();
        c.dedup();
        c
    }
}
