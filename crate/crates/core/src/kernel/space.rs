use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semimodule::{FiniteFunction, FunctionalSemimodule, PointSet};
use crate::semiring::{Semiring, SemiringOps, Value};

/// Source or target of an operator: either a whole function space `K(X)`
/// (possibly infinite, joins are pointwise) or an enumerated semimodule with
/// its internal join.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Full { semiring: Semiring, points: PointSet },
    Enumerated(Arc<FunctionalSemimodule>),
}

impl Space {
    pub fn full(semiring: Semiring, points: PointSet) -> Self {
        Space::Full { semiring, points }
    }

    /// The semiring itself, viewed as `K({*})`.
    pub fn scalars(semiring: Semiring) -> Self {
        Space::full(semiring, PointSet::numbered("*", 1))
    }

    pub fn enumerated(v: FunctionalSemimodule) -> Self {
        Space::Enumerated(Arc::new(v))
    }

    pub fn semiring(&self) -> &Semiring {
        match self {
            Space::Full { semiring, .. } => semiring,
            Space::Enumerated(v) => v.semiring(),
        }
    }

    pub fn points(&self) -> &PointSet {
        match self {
            Space::Full { points, .. } => points,
            Space::Enumerated(v) => v.points(),
        }
    }

    pub fn dim(&self) -> usize {
        self.points().len()
    }

    pub fn module(&self) -> Option<&Arc<FunctionalSemimodule>> {
        match self {
            Space::Enumerated(v) => Some(v),
            Space::Full { .. } => None,
        }
    }

    pub fn carrier(&self) -> Option<&[FiniteFunction]> {
        self.module().map(|v| v.carrier())
    }

    /// Enumerates a full space over a finite semiring; other spaces pass through.
    pub fn materialize(&self, cap: usize) -> Result<Space> {
        match self {
            Space::Full { semiring, points } if semiring.is_enumerable() => Ok(Space::enumerated(
                FunctionalSemimodule::full(*semiring, points.clone(), cap)?,
            )),
            other => Ok(other.clone()),
        }
    }

    /// Like [`Space::materialize`] but insists on an enumerated result.
    pub fn require_module(&self, cap: usize) -> Result<Arc<FunctionalSemimodule>> {
        match self.materialize(cap)? {
            Space::Enumerated(v) => Ok(v),
            Space::Full { semiring, .. } => Err(Error::NotEnumerable(semiring.name())),
        }
    }

    pub fn zero(&self) -> FiniteFunction {
        FiniteFunction::zero(self.dim())
    }

    pub fn contains(&self, f: &FiniteFunction) -> bool {
        match self {
            Space::Full { semiring, points } => {
                f.len() == points.len() && f.values().iter().all(|&v| semiring.contains(v))
            }
            Space::Enumerated(v) => v.index_of(f).is_some(),
        }
    }

    pub fn check(&self, f: &FiniteFunction) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        if self.contains(f) {
            Ok(())
        } else {
            Err(Error::NotInCarrier(f.render(self.semiring())))
        }
    }

    pub fn leq(&self, f: &FiniteFunction, g: &FiniteFunction) -> bool {
        f.leq(self.semiring(), g)
    }

    /// The space's own addition.
    pub fn join(&self, f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
        match self {
            Space::Full { semiring, .. } => Ok(f.join(semiring, g)),
            Space::Enumerated(v) => v.internal_join(f, g),
        }
    }

    pub fn join_all<I: IntoIterator<Item = FiniteFunction>>(&self, items: I) -> Result<FiniteFunction> {
        let mut acc = self.zero();
        let mut first = true;
        for f in items {
            if first {
                self.check(&f)?;
                acc = f;
                first = false;
            } else {
                acc = self.join(&acc, &f)?;
            }
        }
        if first {
            self.check(&acc)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, lambda: Value, f: &FiniteFunction) -> Result<FiniteFunction> {
        let g = f.scale(self.semiring(), lambda);
        self.check(&g)?;
        Ok(g)
    }

    /// Greatest element, if any.
    pub fn top(&self) -> Option<FiniteFunction> {
        match self {
            Space::Full { semiring, points } => semiring
                .top_element()
                .map(|t| FiniteFunction::constant(t, points.len())),
            Space::Enumerated(v) => Some(v.element(v.top_idx()).clone()),
        }
    }

    pub fn is_b_subsemimodule(&self) -> bool {
        self.module().is_none_or(|v| v.is_b_subsemimodule())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.module().is_none_or(|v| v.is_nondegenerate())
    }

    pub fn is_inf_closed(&self) -> bool {
        self.module().is_none_or(|v| v.is_inf_closed())
    }

    pub fn is_admissible(&self) -> bool {
        self.module().is_none_or(|v| v.is_admissible())
    }

    pub fn render(&self) -> String {
        match self {
            Space::Full { semiring, points } => {
                format!("K({{{}}}) over {}", points.labels().join(","), semiring)
            }
            Space::Enumerated(v) => v.render(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_semantics_follow_the_space() {
        let s = Semiring::boolean();
        let one = Value::int(1);
        let f = FiniteFunction::new(vec![one, Value::Bot, Value::Bot]);
        let g = FiniteFunction::new(vec![Value::Bot, one, Value::Bot]);
        let full = Space::full(s, PointSet::numbered("x", 3));
        assert_eq!(
            full.join(&f, &g).unwrap(),
            FiniteFunction::new(vec![one, one, Value::Bot])
        );
        let diamond = FunctionalSemimodule::new(
            s,
            PointSet::numbered("x", 3),
            vec![
                FiniteFunction::zero(3),
                f.clone(),
                g.clone(),
                FiniteFunction::constant(one, 3),
            ],
        )
        .unwrap();
        let v = Space::enumerated(diamond);
        assert_eq!(v.join(&f, &g).unwrap(), FiniteFunction::constant(one, 3));
        assert_eq!(v.join_all(Vec::new()).unwrap(), FiniteFunction::zero(3));
        assert!(v.scale(one, &FiniteFunction::new(vec![one, one, Value::Bot])).is_err());
        assert_eq!(full.materialize(64).unwrap().carrier().unwrap().len(), 8);
        assert!(Space::scalars(Semiring::max_plus(false)).top().is_none());
    }
}
