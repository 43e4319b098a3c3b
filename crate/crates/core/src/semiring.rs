//! Boundedly complete idempotent semirings.
//!
//! Every instance shipped here is a chain under its canonical order
//! `a ≼ b ⇔ a ⊕ b = b`, which makes joins and meets of finite sets plain
//! maxima and minima. Values are exact: Max-Plus and Min-Plus carry rational
//! payloads, the finite instances carry integer levels.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational payload.
pub type Rational = Ratio<i64>;

/// An element of one of the supported semirings.
///
/// `Bot` is always the semiring zero. `Top` only occurs in the completed
/// Max-Plus / Min-Plus variants; the finite instances use a `Fin` level as
/// their greatest element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bot,
    Fin(Rational),
    Top,
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Fin(Rational::from_integer(n))
    }

    /// Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Value::Fin(Rational::new(num, den))
    }

    pub fn is_bot(self) -> bool {
        matches!(self, Value::Bot)
    }

    pub fn payload(self) -> Option<Rational> {
        match self {
            Value::Fin(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bot => f.write_str("bot"),
            Value::Top => f.write_str("top"),
            Value::Fin(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Value::Fin(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase")]
enum ValueRepr {
    Bot,
    Top,
    Q { num: i64, den: i64 },
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            Value::Bot => ValueRepr::Bot,
            Value::Top => ValueRepr::Top,
            Value::Fin(q) => ValueRepr::Q {
                num: *q.numer(),
                den: *q.denom(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ValueRepr::deserialize(d)? {
            ValueRepr::Bot => Ok(Value::Bot),
            ValueRepr::Top => Ok(Value::Top),
            ValueRepr::Q { den: 0, .. } => Err(serde::de::Error::custom("zero denominator")),
            ValueRepr::Q { num, den } => Ok(Value::ratio(num, den)),
        }
    }
}

/// The concrete semiring families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instance {
    /// `{0, 1}` with or / and.
    Boolean,
    /// Rationals with `-∞`; `⊕ = max`, `⊙ = +`.
    MaxPlus,
    /// Rationals with `+∞`; `⊕ = min`, `⊙ = +`.
    MinPlus,
    /// Levels `0..=N` with `⊕ = max`, `⊙ = min`.
    FuzzyChain(u32),
    /// `{⊥, 0..=N}` with `⊕ = max`, `⊙ = saturating +` capped at `N`.
    SaturatedNat(u32),
}

/// A semiring instance together with its completion flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Semiring {
    instance: Instance,
    completed: bool,
}

/// The arithmetic every checked semiring provides. [`Semiring`] is the real
/// implementation; the trait exists so that law checks can run against
/// deliberately broken algebras too.
pub trait SemiringOps {
    fn name(&self) -> String;
    fn zero(&self) -> Value;
    fn one(&self) -> Value;
    fn oplus(&self, a: Value, b: Value) -> Value;
    fn otimes(&self, a: Value, b: Value) -> Value;
    fn residual(&self, a: Value, b: Value) -> Result<Value>;
    fn invert(&self, a: Value) -> Result<Value>;
    fn is_semifield(&self) -> bool;
    /// The full carrier, when finite.
    fn elements(&self) -> Option<Vec<Value>>;
    fn sample(&self, rng: &mut dyn Rng) -> Value;

    fn leq(&self, a: Value, b: Value) -> bool {
        self.oplus(a, b) == b
    }
}

impl Semiring {
    pub fn boolean() -> Self {
        Self {
            instance: Instance::Boolean,
            completed: true,
        }
    }

    pub fn max_plus(completed: bool) -> Self {
        Self {
            instance: Instance::MaxPlus,
            completed,
        }
    }

    pub fn min_plus(completed: bool) -> Self {
        Self {
            instance: Instance::MinPlus,
            completed,
        }
    }

    pub fn fuzzy_chain(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSemiring("fuzzy-chain height must be positive".into()));
        }
        Ok(Self {
            instance: Instance::FuzzyChain(n),
            completed: true,
        })
    }

    pub fn saturated_nat(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSemiring("saturated-nat cap must be positive".into()));
        }
        Ok(Self {
            instance: Instance::SaturatedNat(n),
            completed: true,
        })
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    /// Finite instances are complete lattices as they stand.
    pub fn is_completed(&self) -> bool {
        self.completed
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self.instance, Instance::MaxPlus | Instance::MinPlus)
    }

    /// Whether the `Top` variant is part of the carrier.
    pub fn has_top(&self) -> bool {
        !self.is_enumerable() && self.completed
    }

    /// The greatest element, if the carrier has one.
    pub fn top_element(&self) -> Option<Value> {
        match self.instance {
            Instance::Boolean => Some(Value::int(1)),
            Instance::FuzzyChain(n) | Instance::SaturatedNat(n) => Some(Value::int(n as i64)),
            Instance::MaxPlus | Instance::MinPlus => self.completed.then_some(Value::Top),
        }
    }

    /// Total order of the canonical partial order (every instance is a chain).
    pub fn cmp(&self, a: Value, b: Value) -> Ordering {
        match (a, b) {
            (Value::Fin(x), Value::Fin(y)) => match self.instance {
                Instance::MinPlus => y.cmp(&x),
                _ => x.cmp(&y),
            },
            _ => a.cmp(&b),
        }
    }

    /// Join of any finite family; the empty join is zero.
    pub fn sup<I: IntoIterator<Item = Value>>(&self, values: I) -> Value {
        values.into_iter().fold(Value::Bot, |acc, v| self.oplus(acc, v))
    }

    /// Meet of a nonempty finite family.
    pub fn inf<I: IntoIterator<Item = Value>>(&self, values: I) -> Result<Value> {
        values
            .into_iter()
            .reduce(|acc, v| self.meet(acc, v))
            .ok_or(Error::EmptyInfimum)
    }

    pub fn meet(&self, a: Value, b: Value) -> Value {
        match self.cmp(a, b) {
            Ordering::Greater => b,
            _ => a,
        }
    }

    pub fn contains(&self, v: Value) -> bool {
        let level = |q: Rational, lo: i64, hi: i64| q.is_integer() && (lo..=hi).contains(q.numer());
        match (self.instance, v) {
            (_, Value::Bot) => true,
            (Instance::Boolean, Value::Fin(q)) => level(q, 1, 1),
            (Instance::FuzzyChain(n), Value::Fin(q)) => level(q, 1, n as i64),
            (Instance::SaturatedNat(n), Value::Fin(q)) => level(q, 0, n as i64),
            (Instance::MaxPlus | Instance::MinPlus, Value::Fin(_)) => true,
            (Instance::MaxPlus | Instance::MinPlus, Value::Top) => self.completed,
            (_, Value::Top) => false,
        }
    }

    pub fn validate(&self, v: Value) -> Result<Value> {
        if self.contains(v) {
            Ok(v)
        } else {
            Err(Error::InvalidValue {
                semiring: self.name(),
                value: v.to_string(),
            })
        }
    }

    pub fn checked_oplus(&self, a: Value, b: Value) -> Result<Value> {
        Ok(self.oplus(self.validate(a)?, self.validate(b)?))
    }

    pub fn checked_otimes(&self, a: Value, b: Value) -> Result<Value> {
        Ok(self.otimes(self.validate(a)?, self.validate(b)?))
    }

    /// Human-facing rendering in the instance's own vocabulary.
    pub fn format(&self, v: Value) -> String {
        match (self.instance, v) {
            (Instance::Boolean | Instance::FuzzyChain(_), Value::Bot) => "0".into(),
            (Instance::MaxPlus, Value::Bot) | (Instance::MinPlus, Value::Top) => "-inf".into(),
            (Instance::MaxPlus, Value::Top) | (Instance::MinPlus, Value::Bot) => "+inf".into(),
            _ => v.to_string(),
        }
    }

    fn not_expressible(&self, a: Value, b: Value) -> Error {
        Error::ResidualNotExpressible {
            semiring: self.name(),
            a: self.format(a),
            b: self.format(b),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl SemiringOps for Semiring {
    fn name(&self) -> String {
        let suffix = if self.completed { "" } else { " (uncompleted)" };
        match self.instance {
            Instance::Boolean => "boolean".into(),
            Instance::MaxPlus => format!("max-plus{suffix}"),
            Instance::MinPlus => format!("min-plus{suffix}"),
            Instance::FuzzyChain(n) => format!("fuzzy-chain({n})"),
            Instance::SaturatedNat(n) => format!("saturated-nat({n})"),
        }
    }

    fn zero(&self) -> Value {
        Value::Bot
    }

    fn one(&self) -> Value {
        match self.instance {
            Instance::Boolean => Value::int(1),
            Instance::FuzzyChain(n) => Value::int(n as i64),
            Instance::SaturatedNat(_) | Instance::MaxPlus | Instance::MinPlus => Value::int(0),
        }
    }

    fn oplus(&self, a: Value, b: Value) -> Value {
        match self.cmp(a, b) {
            Ordering::Less => b,
            _ => a,
        }
    }

    fn otimes(&self, a: Value, b: Value) -> Value {
        let (x, y) = match (a, b) {
            (Value::Bot, _) | (_, Value::Bot) => return Value::Bot,
            (Value::Top, _) | (_, Value::Top) => return Value::Top,
            (Value::Fin(x), Value::Fin(y)) => (x, y),
        };
        match self.instance {
            Instance::Boolean => Value::int(1),
            Instance::FuzzyChain(_) => Value::Fin(x.min(y)),
            Instance::SaturatedNat(n) => Value::Fin((x + y).min(Rational::from_integer(n as i64))),
            Instance::MaxPlus | Instance::MinPlus => Value::Fin(x + y),
        }
    }

    fn residual(&self, a: Value, b: Value) -> Result<Value> {
        match self.instance {
            Instance::Boolean | Instance::FuzzyChain(_) => {
                let top = self.top_element().expect("finite chain has a top");
                Ok(if self.leq(a, b) { top } else { b })
            }
            Instance::SaturatedNat(n) => {
                let cap = n as i64;
                Ok(match (a, b) {
                    (Value::Bot, _) => Value::int(cap),
                    (_, Value::Bot) => Value::Bot,
                    (Value::Fin(x), Value::Fin(y)) => {
                        if *y.numer() == cap {
                            Value::int(cap)
                        } else if y >= x {
                            Value::Fin(y - x)
                        } else {
                            Value::Bot
                        }
                    }
                    _ => unreachable!("saturated-nat has no Top"),
                })
            }
            Instance::MaxPlus | Instance::MinPlus => match (a, b) {
                (Value::Bot, _) | (_, Value::Top) => {
                    if self.completed {
                        Ok(Value::Top)
                    } else {
                        Err(self.not_expressible(a, b))
                    }
                }
                (Value::Top, _) | (_, Value::Bot) => Ok(Value::Bot),
                (Value::Fin(x), Value::Fin(y)) => Ok(Value::Fin(y - x)),
            },
        }
    }

    fn invert(&self, a: Value) -> Result<Value> {
        if !self.is_semifield() && self.is_enumerable() {
            return Err(Error::NotSemifield(self.name()));
        }
        match a {
            Value::Bot => Err(Error::ZeroNotInvertible),
            Value::Top => Err(Error::NotInvertible(self.format(a))),
            Value::Fin(q) => Ok(match self.instance {
                Instance::Boolean => Value::int(1),
                _ => Value::Fin(-q),
            }),
        }
    }

    /// The completed Max-Plus / Min-Plus variants lose the semifield property
    /// only at `Top`; `invert` still serves their finite elements.
    fn is_semifield(&self) -> bool {
        match self.instance {
            Instance::Boolean => true,
            Instance::MaxPlus | Instance::MinPlus => !self.completed,
            Instance::FuzzyChain(_) | Instance::SaturatedNat(_) => false,
        }
    }

    fn elements(&self) -> Option<Vec<Value>> {
        let levels = |lo: i64, hi: i64| std::iter::once(Value::Bot).chain((lo..=hi).map(Value::int)).collect();
        match self.instance {
            Instance::Boolean => Some(levels(1, 1)),
            Instance::FuzzyChain(n) => Some(levels(1, n as i64)),
            Instance::SaturatedNat(n) => Some(levels(0, n as i64)),
            Instance::MaxPlus | Instance::MinPlus => None,
        }
    }

    fn sample(&self, rng: &mut dyn Rng) -> Value {
        if let Some(elems) = self.elements() {
            return elems[rng.random_range(0..elems.len())];
        }
        let roll: u32 = rng.random_range(0..100);
        if roll < 8 {
            Value::Bot
        } else if roll < 12 && self.completed {
            Value::Top
        } else {
            let num: i64 = rng.random_range(-12..=12);
            let den: i64 = rng.random_range(1..=4);
            Value::ratio(num, den)
        }
    }
}

/// Wire form of a semiring spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringSpec {
    pub instance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default)]
    pub completed: bool,
}

impl TryFrom<&SemiringSpec> for Semiring {
    type Error = Error;

    fn try_from(spec: &SemiringSpec) -> Result<Self> {
        let need_n = || {
            spec.n
                .ok_or_else(|| Error::InvalidSemiring(format!("`{}` needs `n`", spec.instance)))
        };
        match spec.instance.as_str() {
            "boolean" => Ok(Semiring::boolean()),
            "max-plus" => Ok(Semiring::max_plus(spec.completed)),
            "min-plus" => Ok(Semiring::min_plus(spec.completed)),
            "fuzzy-chain" => Semiring::fuzzy_chain(need_n()?),
            "saturated-nat" => Semiring::saturated_nat(need_n()?),
            other => Err(Error::InvalidSemiring(format!("unknown instance `{other}`"))),
        }
    }
}

impl From<Semiring> for SemiringSpec {
    fn from(s: Semiring) -> Self {
        let (instance, n) = match s.instance {
            Instance::Boolean => ("boolean", None),
            Instance::MaxPlus => ("max-plus", None),
            Instance::MinPlus => ("min-plus", None),
            Instance::FuzzyChain(n) => ("fuzzy-chain", Some(n)),
            Instance::SaturatedNat(n) => ("saturated-nat", Some(n)),
        };
        SemiringSpec {
            instance: instance.into(),
            n,
            completed: s.completed,
        }
    }
}

impl Serialize for Semiring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SemiringSpec::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Semiring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = SemiringSpec::deserialize(d)?;
        Semiring::try_from(&spec).map_err(serde::de::Error::custom)
    }
}

/// A semiring law checked by [`check_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    OplusIdempotent,
    OplusCommutative,
    OplusAssociative,
    ZeroNeutral,
    OtimesAssociative,
    OneNeutral,
    LeftDistributive,
    RightDistributive,
    ZeroAnnihilates,
    OrderAntisymmetric,
    OrderTransitive,
    JoinIsLeastUpperBound,
    ResidualGalois,
    ResidualAttained,
    SemifieldInverse,
    ResidualMatchesInverse,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawViolation {
    pub law: Law,
    /// First triple `(a, b, c)` on which the law failed.
    pub witness: [Value; 3],
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub semiring: String,
    pub exhaustive: bool,
    pub triples: usize,
    pub violations: Vec<LawViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

/// Exhaustive triple enumeration stops being cheap beyond this carrier size.
const EXHAUSTIVE_LIMIT: usize = 64;

/// Runs every semiring law over all triples of a finite carrier, or over
/// `budget` sampled triples otherwise.
pub fn check_axioms<S: SemiringOps + ?Sized>(s: &S, budget: usize, seed: u64) -> AxiomReport {
    let mut recorder = LawRecorder::default();
    let mut triples = 0;
    let exhaustive = match s.elements() {
        Some(elems) if elems.len() <= EXHAUSTIVE_LIMIT => {
            for &a in &elems {
                for &b in &elems {
                    for &c in &elems {
                        check_triple(s, [a, b, c], &mut recorder);
                        triples += 1;
                    }
                }
            }
            true
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                let t = [s.sample(&mut rng), s.sample(&mut rng), s.sample(&mut rng)];
                check_triple(s, t, &mut recorder);
                triples += 1;
            }
            false
        }
    };
    AxiomReport {
        semiring: s.name(),
        exhaustive,
        triples,
        violations: recorder.finish(),
    }
}

#[derive(Default)]
struct LawRecorder {
    seen: Vec<LawViolation>,
}

impl LawRecorder {
    fn check(&mut self, law: Law, ok: bool, witness: [Value; 3]) {
        if ok {
            return;
        }
        match self.seen.iter_mut().find(|v| v.law == law) {
            Some(v) => v.count += 1,
            None => self.seen.push(LawViolation { law, witness, count: 1 }),
        }
    }

    fn finish(self) -> Vec<LawViolation> {
        self.seen
    }
}

fn check_triple<S: SemiringOps + ?Sized>(s: &S, t: [Value; 3], r: &mut LawRecorder) {
    let [a, b, c] = t;
    let (zero, one) = (s.zero(), s.one());
    let add = |x, y| s.oplus(x, y);
    let mul = |x, y| s.otimes(x, y);

    r.check(Law::OplusIdempotent, add(a, a) == a, t);
    r.check(Law::OplusCommutative, add(a, b) == add(b, a), t);
    r.check(Law::OplusAssociative, add(add(a, b), c) == add(a, add(b, c)), t);
    r.check(Law::ZeroNeutral, add(zero, a) == a && add(a, zero) == a, t);
    r.check(Law::OtimesAssociative, mul(mul(a, b), c) == mul(a, mul(b, c)), t);
    r.check(Law::OneNeutral, mul(one, a) == a && mul(a, one) == a, t);
    r.check(Law::LeftDistributive, mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), t);
    r.check(
        Law::RightDistributive,
        mul(add(a, b), c) == add(mul(a, c), mul(b, c)),
        t,
    );
    r.check(Law::ZeroAnnihilates, mul(zero, a) == zero && mul(a, zero) == zero, t);
    r.check(Law::OrderAntisymmetric, !(s.leq(a, b) && s.leq(b, a)) || a == b, t);
    r.check(Law::OrderTransitive, !(s.leq(a, b) && s.leq(b, c)) || s.leq(a, c), t);
    r.check(
        Law::JoinIsLeastUpperBound,
        s.leq(a, add(a, b)) && s.leq(b, add(a, b)) && (!(s.leq(a, c) && s.leq(b, c)) || s.leq(add(a, b), c)),
        t,
    );

    // (a, v, b) read off the triple as (a, b, c).
    if let Ok(res) = s.residual(a, c) {
        r.check(Law::ResidualGalois, s.leq(mul(a, b), c) == s.leq(b, res), t);
        r.check(Law::ResidualAttained, s.leq(mul(a, res), c), t);
    }

    if s.is_semifield() && a != zero {
        match s.invert(a) {
            Ok(inv) => {
                r.check(Law::SemifieldInverse, mul(a, inv) == one, t);
                if let Ok(res) = s.residual(a, b) {
                    r.check(Law::ResidualMatchesInverse, res == mul(inv, b), t);
                }
            }
            Err(_) => r.check(Law::SemifieldInverse, false, t),
        }
    }
}

/// Deliberately broken multiplications used to exercise [`check_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// `a ⊙ b := (a + b) / 2`; monotone, so distributivity survives while
    /// associativity and the unit law fail.
    Mean,
    /// `a ⊙ b := a · b`; negative factors reverse the order and break
    /// distributivity.
    Product,
}

/// A Max-Plus / Min-Plus instance whose `⊙` is replaced by a [`Corruption`].
#[derive(Clone, Copy, Debug)]
pub struct Corrupted {
    pub base: Semiring,
    pub corruption: Corruption,
}

impl Corrupted {
    pub fn new(base: Semiring, corruption: Corruption) -> Result<Self> {
        if base.is_enumerable() {
            return Err(Error::InvalidSemiring(
                "corruptions apply to max-plus and min-plus only".into(),
            ));
        }
        Ok(Self { base, corruption })
    }
}

impl SemiringOps for Corrupted {
    fn name(&self) -> String {
        let kind = match self.corruption {
            Corruption::Mean => "(x+y)/2",
            Corruption::Product => "x*y",
        };
        format!("{} with otimes replaced by {kind}", self.base.name())
    }

    fn zero(&self) -> Value {
        self.base.zero()
    }

    fn one(&self) -> Value {
        self.base.one()
    }

    fn oplus(&self, a: Value, b: Value) -> Value {
        self.base.oplus(a, b)
    }

    fn otimes(&self, a: Value, b: Value) -> Value {
        match (a, b) {
            (Value::Fin(x), Value::Fin(y)) => Value::Fin(match self.corruption {
                Corruption::Mean => (x + y) / Rational::from_integer(2),
                Corruption::Product => x * y,
            }),
            _ => self.base.otimes(a, b),
        }
    }

    fn residual(&self, a: Value, b: Value) -> Result<Value> {
        self.base.residual(a, b)
    }

    fn invert(&self, a: Value) -> Result<Value> {
        self.base.invert(a)
    }

    fn is_semifield(&self) -> bool {
        false
    }

    fn elements(&self) -> Option<Vec<Value>> {
        None
    }

    fn sample(&self, rng: &mut dyn Rng) -> Value {
        self.base.sample(rng)
    }
}
