//! Finite point sets, the function space `K(X)` and explicitly enumerated
//! idempotent functional semimodules.
//!
//! A [`FunctionalSemimodule`] is a scalar-closed subset of `K(X)` that is an
//! upper semilattice under the pointwise order. Its addition is the
//! *internal* join: the least carrier element above both arguments, which can
//! sit strictly above the pointwise supremum.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, SemiringOps, Value};

/// Default cap on carrier size for closures and enumerations.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// An ordered, duplicate-free, nonempty list of point labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    labels: Vec<String>,
}

impl PointSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidPointSet("a point set must be nonempty".into()));
        }
        let unique: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidPointSet("duplicate point label".into()));
        }
        Ok(Self { labels })
    }

    /// `prefix1, prefix2, ...`; panics if `n == 0`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        assert!(n > 0, "point set must be nonempty");
        Self {
            labels: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }
}

/// An element of `K(X)`, stored densely in point order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FiniteFunction(Vec<Value>);

impl FiniteFunction {
    pub fn new(values: Vec<Value>) -> Self {
        Self(values)
    }

    pub fn constant(v: Value, dim: usize) -> Self {
        Self(vec![v; dim])
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(Value::Bot, dim)
    }

    /// `value` at `x`, zero elsewhere.
    pub fn indicator(dim: usize, x: usize, value: Value) -> Self {
        let mut vals = vec![Value::Bot; dim];
        vals[x] = value;
        Self(vals)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Value> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: usize) -> Value {
        self.0[x]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_bot())
    }

    pub fn scale(&self, s: &Semiring, lambda: Value) -> Self {
        Self(self.0.iter().map(|&v| s.otimes(lambda, v)).collect())
    }

    pub fn leq(&self, s: &Semiring, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| s.leq(a, b))
    }

    pub fn join(&self, s: &Semiring, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| s.oplus(a, b)).collect())
    }

    pub fn meet(&self, s: &Semiring, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| s.meet(a, b)).collect())
    }

    /// Compact rendering: `100` when every entry is one character, a tuple otherwise.
    pub fn render(&self, s: &Semiring) -> String {
        let parts: Vec<String> = self.0.iter().map(|&v| s.format(v)).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            format!("({})", parts.join(", "))
        }
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Value::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `δ_x(f) = f(x)`.
pub fn delta_eval(points: &PointSet, x: &str, f: &FiniteFunction) -> Result<Value> {
    if f.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: f.len(),
        });
    }
    Ok(f.get(points.index_of(x)?))
}

fn check_dims<'a, I>(dim: usize, fs: I) -> Result<()>
where
    I: IntoIterator<Item = &'a FiniteFunction>,
{
    match fs.into_iter().find(|f| f.len() != dim) {
        Some(f) => Err(Error::DimensionMismatch {
            expected: dim,
            got: f.len(),
        }),
        None => Ok(()),
    }
}

/// Coordinatewise supremum; the empty family gives the zero function.
pub fn pointwise_sup(s: &Semiring, dim: usize, fs: &[FiniteFunction]) -> Result<FiniteFunction> {
    check_dims(dim, fs)?;
    Ok(fs.iter().fold(FiniteFunction::zero(dim), |acc, f| acc.join(s, f)))
}

/// Coordinatewise infimum of a nonempty family.
pub fn pointwise_inf(s: &Semiring, fs: &[FiniteFunction]) -> Result<FiniteFunction> {
    let first = fs.first().ok_or(Error::EmptyInfimum)?;
    check_dims(first.len(), fs)?;
    Ok(fs[1..].iter().fold(first.clone(), |acc, f| acc.meet(s, f)))
}

/// All of `K(X)` for a finite semiring, little-endian in the point order
/// (the first point varies fastest).
pub fn enumerate_full_space(s: &Semiring, dim: usize, cap: usize) -> Result<Vec<FiniteFunction>> {
    let elems = s.elements().ok_or_else(|| Error::NotEnumerable(s.name()))?;
    let size = (elems.len() as u128).checked_pow(dim as u32);
    match size {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "full function space",
                cap,
            })
        }
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; dim];
    loop {
        out.push(FiniteFunction(digits.iter().map(|&d| elems[d]).collect()));
        let mut pos = 0;
        loop {
            if pos == dim {
                return Ok(out);
            }
            digits[pos] += 1;
            if digits[pos] < elems.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Cached structural predicates of an enumerated semimodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub upper_semilattice: bool,
    pub b_subsemimodule: bool,
    pub inf_closed: bool,
    pub nondegenerate: bool,
    pub admissible: bool,
    pub contains_zero: bool,
}

/// An explicitly enumerated idempotent functional semimodule over a finite semiring.
#[derive(Clone, Debug)]
pub struct FunctionalSemimodule {
    semiring: Semiring,
    points: PointSet,
    carrier: Vec<FiniteFunction>,
    index: HashMap<FiniteFunction, usize>,
    scalars: Vec<Value>,
    /// `join[i * n + j]` is the carrier index of the internal join.
    join: Vec<usize>,
    /// `scale[l * n + i]` is the carrier index of `scalars[l] ⊙ carrier[i]`.
    scale: Vec<usize>,
    top: usize,
    props: Properties,
}

impl PartialEq for FunctionalSemimodule {
    fn eq(&self, other: &Self) -> bool {
        self.semiring == other.semiring && self.points == other.points && self.carrier == other.carrier
    }
}

impl FunctionalSemimodule {
    /// Validates and canonicalizes a carrier (sorted, deduplicated).
    pub fn new(semiring: Semiring, points: PointSet, carrier: Vec<FiniteFunction>) -> Result<Self> {
        let scalars = semiring
            .elements()
            .ok_or_else(|| Error::NotEnumerable(semiring.name()))?;
        for f in &carrier {
            if f.len() != points.len() {
                return Err(Error::DimensionMismatch {
                    expected: points.len(),
                    got: f.len(),
                });
            }
            for &v in f.values() {
                semiring.validate(v)?;
            }
        }
        let carrier: Vec<FiniteFunction> = carrier.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if carrier.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let n = carrier.len();
        let index: HashMap<FiniteFunction, usize> = carrier.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();

        let mut scale = Vec::with_capacity(scalars.len() * n);
        for &lambda in &scalars {
            for f in &carrier {
                let g = f.scale(&semiring, lambda);
                match index.get(&g) {
                    Some(&k) => scale.push(k),
                    None => {
                        return Err(Error::NotScalarClosed {
                            scalar: semiring.format(lambda),
                            element: f.render(&semiring),
                        })
                    }
                }
            }
        }

        let join = join_table(&semiring, &carrier).map_err(|(i, j, bounded)| {
            let (a, b) = (carrier[i].render(&semiring), carrier[j].render(&semiring));
            if bounded {
                Error::NoLeastUpperBound(a, b)
            } else {
                Error::NoUpperBound(a, b)
            }
        })?;

        for (l, &lambda) in scalars.iter().enumerate() {
            for i in 0..n {
                for j in (i + 1)..n {
                    let lhs = scale[l * n + join[i * n + j]];
                    let rhs = join[scale[l * n + i] * n + scale[l * n + j]];
                    if lhs != rhs {
                        return Err(Error::ScalarNotDistributive {
                            scalar: semiring.format(lambda),
                            f: carrier[i].render(&semiring),
                            g: carrier[j].render(&semiring),
                        });
                    }
                }
            }
        }

        let top = (0..n).fold(0, |acc, i| join[acc * n + i]);
        let mut v = Self {
            semiring,
            points,
            carrier,
            index,
            scalars,
            join,
            scale,
            top,
            props: Properties {
                upper_semilattice: true,
                b_subsemimodule: false,
                inf_closed: false,
                nondegenerate: false,
                admissible: false,
                contains_zero: false,
            },
        };
        v.props = v.compute_properties();
        Ok(v)
    }

    /// The whole of `K(X)` for a finite semiring.
    pub fn full(semiring: Semiring, points: PointSet, cap: usize) -> Result<Self> {
        let carrier = enumerate_full_space(&semiring, points.len(), cap)?;
        Self::new(semiring, points, carrier)
    }

    /// Smallest superset of `generators` closed under scalar action and
    /// pointwise joins (and pointwise meets when `inf_close` is set).
    pub fn close_under(
        semiring: Semiring,
        points: PointSet,
        generators: &[FiniteFunction],
        inf_close: bool,
        cap: usize,
    ) -> Result<Self> {
        let closed = closure(&semiring, points.len(), generators, true, inf_close, cap)?;
        Self::new(semiring, points, closed)
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn carrier(&self) -> &[FiniteFunction] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, i: usize) -> &FiniteFunction {
        &self.carrier[i]
    }

    pub fn index_of(&self, f: &FiniteFunction) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn require_index(&self, f: &FiniteFunction) -> Result<usize> {
        self.index_of(f)
            .ok_or_else(|| Error::NotInCarrier(f.render(&self.semiring)))
    }

    pub fn scalars(&self) -> &[Value] {
        &self.scalars
    }

    pub fn join_idx(&self, i: usize, j: usize) -> usize {
        self.join[i * self.carrier.len() + j]
    }

    /// Index of `scalars()[l] ⊙ carrier[i]`.
    pub fn scale_idx(&self, l: usize, i: usize) -> usize {
        self.scale[l * self.carrier.len() + i]
    }

    pub fn scalar_position(&self, lambda: Value) -> Option<usize> {
        self.scalars.iter().position(|&s| s == lambda)
    }

    /// Least carrier element above both arguments.
    pub fn internal_join(&self, f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
        let (i, j) = (self.require_index(f)?, self.require_index(g)?);
        Ok(self.carrier[self.join_idx(i, j)].clone())
    }

    pub fn zero_idx(&self) -> Option<usize> {
        self.index_of(&FiniteFunction::zero(self.dim()))
    }

    /// Greatest carrier element.
    pub fn top_idx(&self) -> usize {
        self.top
    }

    pub fn properties(&self) -> Properties {
        self.props
    }

    pub fn is_upper_semilattice(&self) -> bool {
        self.props.upper_semilattice
    }

    pub fn is_b_subsemimodule(&self) -> bool {
        self.props.b_subsemimodule
    }

    pub fn is_inf_closed(&self) -> bool {
        self.props.inf_closed
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.props.nondegenerate
    }

    pub fn is_admissible(&self) -> bool {
        self.props.admissible
    }

    pub fn contains_zero(&self) -> bool {
        self.props.contains_zero
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.carrier.iter().map(|f| f.render(&self.semiring)).collect();
        format!("{{{}}}", parts.join(","))
    }

    fn compute_properties(&self) -> Properties {
        let s = &self.semiring;
        let n = self.carrier.len();
        let one = s.one();
        let b_sub = (0..n)
            .all(|i| (i..n).all(|j| self.carrier[self.join_idx(i, j)] == self.carrier[i].join(s, &self.carrier[j])));
        let contains_zero = self.zero_idx().is_some();
        let inf_closed = contains_zero && is_meet_closed(s, &self.carrier, &self.index);
        let nondegenerate = (0..self.dim()).all(|x| self.carrier.iter().any(|g| g.get(x) == one));
        let admissible = self.carrier.iter().all(|f| {
            (0..self.dim()).all(|x| {
                self.carrier
                    .iter()
                    .any(|g| g.get(x) == one && g.scale(s, f.get(x)).leq(s, f))
            })
        });
        Properties {
            upper_semilattice: true,
            b_subsemimodule: b_sub,
            inf_closed,
            nondegenerate,
            admissible,
            contains_zero,
        }
    }
}

fn is_meet_closed(s: &Semiring, carrier: &[FiniteFunction], index: &HashMap<FiniteFunction, usize>) -> bool {
    carrier
        .iter()
        .enumerate()
        .all(|(i, f)| carrier[i + 1..].iter().all(|g| index.contains_key(&f.meet(s, g))))
}

/// Internal join table, or the offending pair and whether it had any upper bound.
fn join_table(s: &Semiring, carrier: &[FiniteFunction]) -> std::result::Result<Vec<usize>, (usize, usize, bool)> {
    let n = carrier.len();
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in i..n {
            let bounds: Vec<usize> = (0..n)
                .filter(|&k| carrier[i].leq(s, &carrier[k]) && carrier[j].leq(s, &carrier[k]))
                .collect();
            if bounds.is_empty() {
                return Err((i, j, false));
            }
            let least = bounds
                .iter()
                .copied()
                .find(|&k| bounds.iter().all(|&m| carrier[k].leq(s, &carrier[m])))
                .ok_or((i, j, true))?;
            table[i * n + j] = least;
            table[j * n + i] = least;
        }
    }
    Ok(table)
}

/// Whether every pair of the (not necessarily valid) carrier has a least upper
/// bound inside it.
pub fn is_upper_semilattice(s: &Semiring, carrier: &[FiniteFunction]) -> bool {
    join_table(s, carrier).is_ok()
}

/// Whether `carrier` contains zero and is closed under pairwise pointwise meets.
pub fn is_inf_closed(s: &Semiring, carrier: &[FiniteFunction]) -> bool {
    let index: HashMap<FiniteFunction, usize> = carrier.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    match carrier.first() {
        Some(f) => index.contains_key(&FiniteFunction::zero(f.len())) && is_meet_closed(s, carrier, &index),
        None => false,
    }
}

/// Closure of a generator set under scalar action, and optionally under
/// pointwise joins and meets. Always contains the zero function.
pub fn closure(
    s: &Semiring,
    dim: usize,
    generators: &[FiniteFunction],
    sup_close: bool,
    inf_close: bool,
    cap: usize,
) -> Result<Vec<FiniteFunction>> {
    let scalars = s.elements().ok_or_else(|| Error::NotEnumerable(s.name()))?;
    check_dims(dim, generators)?;
    let mut set: BTreeSet<FiniteFunction> = BTreeSet::new();
    let mut elems: Vec<FiniteFunction> = Vec::new();
    let push = |f: FiniteFunction, set: &mut BTreeSet<FiniteFunction>, elems: &mut Vec<FiniteFunction>| {
        if set.insert(f.clone()) {
            elems.push(f);
        }
    };
    push(FiniteFunction::zero(dim), &mut set, &mut elems);
    for g in generators {
        push(g.clone(), &mut set, &mut elems);
    }
    let mut done = 0;
    while done < elems.len() {
        if elems.len() > cap {
            return Err(Error::CapExceeded { what: "closure", cap });
        }
        let f = elems[done].clone();
        for &lambda in &scalars {
            push(f.scale(s, lambda), &mut set, &mut elems);
        }
        if sup_close || inf_close {
            for k in 0..=done {
                let g = elems[k].clone();
                if sup_close {
                    push(f.join(s, &g), &mut set, &mut elems);
                }
                if inf_close {
                    push(f.meet(s, &g), &mut set, &mut elems);
                }
            }
        }
        done += 1;
    }
    if elems.len() > cap {
        return Err(Error::CapExceeded { what: "closure", cap });
    }
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(bits: &str) -> FiniteFunction {
        FiniteFunction::new(
            bits.chars()
                .map(|c| if c == '1' { Value::int(1) } else { Value::Bot })
                .collect(),
        )
    }

    fn boolean_v(bits: &[&str]) -> Result<FunctionalSemimodule> {
        let dim = bits[0].len();
        FunctionalSemimodule::new(
            Semiring::boolean(),
            PointSet::numbered("x", dim),
            bits.iter().map(|s| b(s)).collect(),
        )
    }

    #[test]
    fn delta_eval_projects() {
        let pts = PointSet::new(["a", "b", "c"]).unwrap();
        let f = FiniteFunction::new(vec![Value::int(1), Value::int(2), Value::Bot]);
        assert_eq!(delta_eval(&pts, "b", &f).unwrap(), Value::int(2));
        assert_eq!(delta_eval(&pts, "a", &FiniteFunction::zero(3)).unwrap(), Value::Bot);
        assert!(matches!(delta_eval(&pts, "z", &f), Err(Error::UnknownPoint(_))));
        let pts2 = PointSet::new(["a", "b"]).unwrap();
        assert_eq!(delta_eval(&pts2, "a", &b("10")).unwrap(), Value::int(1));
    }

    #[test]
    fn point_set_rules() {
        assert!(PointSet::new(Vec::<String>::new()).is_err());
        assert!(PointSet::new(["a", "a"]).is_err());
    }

    #[test]
    fn pointwise_ops() {
        let s = Semiring::boolean();
        assert_eq!(pointwise_sup(&s, 3, &[b("100"), b("010")]).unwrap(), b("110"));
        assert_eq!(pointwise_sup(&s, 2, &[]).unwrap(), b("00"));
        assert!(pointwise_inf(&s, &[]).is_err());
        assert!(pointwise_sup(&s, 2, &[b("100")]).is_err());
        let mp = Semiring::max_plus(true);
        let f = FiniteFunction::new(vec![Value::int(1), Value::int(4)]);
        let g = FiniteFunction::new(vec![Value::int(2), Value::int(0)]);
        assert_eq!(
            pointwise_inf(&mp, &[f, g]).unwrap(),
            FiniteFunction::new(vec![Value::int(1), Value::int(0)])
        );
    }

    #[test]
    fn diamond_semimodule() {
        let v = boolean_v(&["000", "100", "010", "111"]).unwrap();
        assert_eq!(v.internal_join(&b("100"), &b("010")).unwrap(), b("111"));
        assert_eq!(v.internal_join(&b("100"), &b("100")).unwrap(), b("100"));
        assert_eq!(v.internal_join(&b("000"), &b("010")).unwrap(), b("010"));
        assert!(v.is_upper_semilattice());
        assert!(!v.is_b_subsemimodule());
        assert!(v.is_inf_closed());
        assert!(v.is_nondegenerate() && v.is_admissible());
        assert_eq!(v.element(v.top_idx()), &b("111"));
    }

    #[test]
    fn semilattice_failures() {
        let s = Semiring::boolean();
        let bad = [b("000"), b("100"), b("010")];
        assert!(!is_upper_semilattice(&s, &bad));
        assert!(matches!(
            boolean_v(&["000", "100", "010"]),
            Err(Error::NoUpperBound(..))
        ));
        assert!(is_upper_semilattice(&s, &[b("000")]));
        assert!(!is_inf_closed(&s, &[b("100"), b("111")]));
        assert!(matches!(boolean_v(&["100", "111"]), Err(Error::NotScalarClosed { .. })));
    }

    #[test]
    fn full_space_predicates() {
        let v = FunctionalSemimodule::full(Semiring::boolean(), PointSet::numbered("x", 2), 64).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.is_b_subsemimodule());
        assert!(v.is_inf_closed());
        assert!(v.is_nondegenerate());
        assert!(v.is_admissible());
        let zero = boolean_v(&["00"]).unwrap();
        assert!(!zero.is_nondegenerate());
        assert!(zero.is_b_subsemimodule());
    }

    #[test]
    fn closures() {
        let s = Semiring::boolean();
        let pts = PointSet::numbered("x", 2);
        let v = FunctionalSemimodule::close_under(s, pts.clone(), &[b("10")], false, 64).unwrap();
        assert_eq!(v.carrier(), &[b("00"), b("10")]);
        let v = FunctionalSemimodule::close_under(s, pts, &[], false, 64).unwrap();
        assert_eq!(v.carrier(), &[b("00")]);

        let f2 = Semiring::fuzzy_chain(2).unwrap();
        let v = FunctionalSemimodule::close_under(
            f2,
            PointSet::numbered("x", 1),
            &[FiniteFunction::new(vec![Value::int(2)])],
            false,
            64,
        )
        .unwrap();
        let levels: Vec<Value> = v.carrier().iter().map(|f| f.get(0)).collect();
        assert_eq!(levels, vec![Value::Bot, Value::int(1), Value::int(2)]);

        let big =
            FunctionalSemimodule::close_under(s, PointSet::numbered("x", 3), &[b("100"), b("010"), b("001")], false, 4);
        assert!(matches!(big, Err(Error::CapExceeded { .. })));
        assert!(
            FunctionalSemimodule::close_under(Semiring::max_plus(true), PointSet::numbered("x", 1), &[], false, 8)
                .is_err()
        );
    }

    #[test]
    fn full_space_order_is_little_endian() {
        let all = enumerate_full_space(&Semiring::boolean(), 3, 64).unwrap();
        assert_eq!(all[1], b("100"));
        assert_eq!(all[2], b("010"));
        assert_eq!(all[4], b("001"));
        assert!(enumerate_full_space(&Semiring::boolean(), 10, 64).is_err());
    }

    #[test]
    fn admissible_over_semifield() {
        let v = boolean_v(&["000", "110", "001", "111"]).unwrap();
        assert!(v.is_nondegenerate());
        assert!(v.is_admissible());
    }
}
