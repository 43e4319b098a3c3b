use std::fmt;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::integral::{apply_integral, KernelMatrix};
use super::space::Space;
use crate::error::{Error, Result};
use crate::semimodule::FiniteFunction;
use crate::semiring::{SemiringOps, Value};

pub type OperatorFn = Arc<dyn Fn(&FiniteFunction) -> Result<FiniteFunction> + Send + Sync>;

/// How an operator computes its values.
#[derive(Clone)]
pub enum OperatorMap {
    /// Image of every source carrier element, in carrier order.
    Table(Vec<FiniteFunction>),
    /// Integral form with the given kernel.
    Integral(KernelMatrix),
    /// Arbitrary black box, typically over an infinite full space.
    Func(OperatorFn),
}

impl fmt::Debug for OperatorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorMap::Table(t) => f.debug_tuple("Table").field(t).finish(),
            OperatorMap::Integral(k) => f.debug_tuple("Integral").field(k).finish(),
            OperatorMap::Func(_) => f.write_str("Func(..)"),
        }
    }
}

/// A map `A: V → W`. Linearity is a property to test, not an invariant.
#[derive(Clone, Debug)]
pub struct Operator {
    source: Space,
    target: Space,
    map: OperatorMap,
}

/// Number of random inputs used where a source cannot be enumerated.
pub(crate) const SAMPLED_INPUTS: usize = 64;

impl Operator {
    /// Total value table over an enumerated source.
    pub fn table(source: Space, target: Space, images: Vec<FiniteFunction>) -> Result<Self> {
        let module = source.module().ok_or(Error::NeedsCarrier("an operator table"))?;
        if images.len() != module.len() {
            return Err(Error::IncompleteTable(format!(
                "{} images for {} carrier elements",
                images.len(),
                module.len()
            )));
        }
        check_semirings(&source, &target)?;
        for img in &images {
            target.check(img)?;
        }
        Ok(Self {
            source,
            target,
            map: OperatorMap::Table(images),
        })
    }

    pub fn from_kernel(source: Space, target: Space, kernel: KernelMatrix) -> Result<Self> {
        check_semirings(&source, &target)?;
        if kernel.rows() != source.dim() || kernel.cols() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim() * target.dim(),
                got: kernel.rows() * kernel.cols(),
            });
        }
        Ok(Self {
            source,
            target,
            map: OperatorMap::Integral(kernel),
        })
    }

    pub fn from_fn<F>(source: Space, target: Space, f: F) -> Result<Self>
    where
        F: Fn(&FiniteFunction) -> Result<FiniteFunction> + Send + Sync + 'static,
    {
        check_semirings(&source, &target)?;
        Ok(Self {
            source,
            target,
            map: OperatorMap::Func(Arc::new(f)),
        })
    }

    pub fn identity(space: Space) -> Self {
        match space.carrier() {
            Some(c) => {
                let images = c.to_vec();
                Self {
                    source: space.clone(),
                    target: space,
                    map: OperatorMap::Table(images),
                }
            }
            None => Self {
                source: space.clone(),
                target: space,
                map: OperatorMap::Func(Arc::new(|f| Ok(f.clone()))),
            },
        }
    }

    pub fn zero(source: Space, target: Space) -> Result<Self> {
        let z = target.zero();
        match source.carrier() {
            Some(c) => {
                let images = vec![z; c.len()];
                Self::table(source, target, images)
            }
            None => Self::from_fn(source, target, move |_| Ok(z.clone())),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn map(&self) -> &OperatorMap {
        &self.map
    }

    pub fn is_functional(&self) -> bool {
        self.target.dim() == 1
    }

    pub fn apply(&self, f: &FiniteFunction) -> Result<FiniteFunction> {
        self.source.check(f)?;
        match &self.map {
            OperatorMap::Table(images) => {
                let i = self.source.module().expect("table over carrier").require_index(f)?;
                Ok(images[i].clone())
            }
            OperatorMap::Integral(k) => apply_integral(k, f, &self.target),
            OperatorMap::Func(func) => {
                let g = func(f)?;
                self.target.check(&g)?;
                Ok(g)
            }
        }
    }

    /// Values of a functional, as scalars.
    pub fn apply_scalar(&self, f: &FiniteFunction) -> Result<Value> {
        Ok(self.apply(f)?.get(0))
    }

    /// Images of every source carrier element.
    pub fn images(&self) -> Result<Vec<FiniteFunction>> {
        if let OperatorMap::Table(t) = &self.map {
            return Ok(t.clone());
        }
        let carrier = self
            .source
            .carrier()
            .ok_or(Error::NeedsCarrier("tabulating an operator"))?;
        carrier.iter().map(|f| self.apply(f)).collect()
    }

    /// Same operator backed by an explicit table.
    pub fn to_table(&self) -> Result<Operator> {
        let images = self.images()?;
        Operator::table(self.source.clone(), self.target.clone(), images)
    }

    /// Inputs from which the maximal kernel is computed: the whole carrier of
    /// an enumerated source, or the unit indicators of a full space.
    pub fn probes(&self) -> Vec<FiniteFunction> {
        match self.source.carrier() {
            Some(c) => c.to_vec(),
            None => {
                let one = self.source.semiring().one();
                let n = self.source.dim();
                (0..n).map(|x| FiniteFunction::indicator(n, x, one)).collect()
            }
        }
    }

    /// Inputs on which a candidate representation is verified.
    pub fn verification_inputs(&self, seed: u64) -> Vec<FiniteFunction> {
        match self.source.carrier() {
            Some(c) => c.to_vec(),
            None => {
                let mut inputs = self.probes();
                inputs.push(self.source.zero());
                inputs.extend(sample_functions(&self.source, SAMPLED_INPUTS, seed));
                inputs
            }
        }
    }

    /// Equality of value tables over an enumerated source.
    pub fn same_values(&self, other: &Operator) -> Result<bool> {
        Ok(self.images()? == other.images()?)
    }
}

fn check_semirings(source: &Space, target: &Space) -> Result<()> {
    if source.semiring() != target.semiring() {
        return Err(Error::Input(format!(
            "source is over {} but target is over {}",
            source.semiring(),
            target.semiring()
        )));
    }
    Ok(())
}

pub(crate) fn sample_functions(space: &Space, count: usize, seed: u64) -> Vec<FiniteFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = *space.semiring();
    match space.carrier() {
        Some(c) => (0..count).map(|_| c[rng.random_range(0..c.len())].clone()).collect(),
        None => (0..count)
            .map(|_| FiniteFunction::new((0..space.dim()).map(|_| s.sample(&mut rng)).collect()))
            .collect(),
    }
}

/// The first law a non-b-linear operator breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LinearityViolation {
    Zero {
        image: String,
    },
    Join {
        f: String,
        g: String,
        image_of_join: String,
        join_of_images: String,
    },
    Scalar {
        scalar: String,
        f: String,
    },
    /// The join of two images does not exist in the target.
    Escapes {
        f: String,
        g: String,
    },
}

/// Checks preservation of joins, zero and scalar action. Exhaustive over an
/// enumerated source, sampled over an infinite one.
pub fn b_linearity_violation(a: &Operator) -> Result<Option<LinearityViolation>> {
    let src = &a.source;
    let tgt = &a.target;
    let s = *src.semiring();
    let render = |f: &FiniteFunction| f.render(&s);

    if let Some(v) = src.module() {
        let images = a.images()?;
        let n = v.len();
        if let Some(z) = v.zero_idx() {
            if !images[z].is_zero() {
                return Ok(Some(LinearityViolation::Zero {
                    image: render(&images[z]),
                }));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = &images[v.join_idx(i, j)];
                match tgt.join(&images[i], &images[j]) {
                    Ok(rhs) if &rhs == lhs => {}
                    Ok(rhs) => {
                        return Ok(Some(LinearityViolation::Join {
                            f: render(v.element(i)),
                            g: render(v.element(j)),
                            image_of_join: render(lhs),
                            join_of_images: render(&rhs),
                        }))
                    }
                    Err(_) => {
                        return Ok(Some(LinearityViolation::Escapes {
                            f: render(v.element(i)),
                            g: render(v.element(j)),
                        }))
                    }
                }
            }
        }
        for (l, &lambda) in v.scalars().iter().enumerate() {
            for i in 0..n {
                let lhs = &images[v.scale_idx(l, i)];
                if *lhs != images[i].scale(&s, lambda) {
                    return Ok(Some(LinearityViolation::Scalar {
                        scalar: s.format(lambda),
                        f: render(v.element(i)),
                    }));
                }
            }
        }
        return Ok(None);
    }

    let zero_img = a.apply(&src.zero())?;
    if !zero_img.is_zero() {
        return Ok(Some(LinearityViolation::Zero {
            image: render(&zero_img),
        }));
    }
    let fs = sample_functions(src, SAMPLED_INPUTS, 0x5eed);
    let gs = sample_functions(src, SAMPLED_INPUTS, 0x5eed + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + 2);
    for (f, g) in fs.iter().zip(&gs) {
        let lhs = a.apply(&src.join(f, g)?)?;
        let rhs = tgt.join(&a.apply(f)?, &a.apply(g)?)?;
        if lhs != rhs {
            return Ok(Some(LinearityViolation::Join {
                f: render(f),
                g: render(g),
                image_of_join: render(&lhs),
                join_of_images: render(&rhs),
            }));
        }
        let lambda = s.sample(&mut rng);
        if a.apply(&f.scale(&s, lambda))? != a.apply(f)?.scale(&s, lambda) {
            return Ok(Some(LinearityViolation::Scalar {
                scalar: s.format(lambda),
                f: render(f),
            }));
        }
    }
    Ok(None)
}

pub fn is_b_linear(a: &Operator) -> Result<bool> {
    Ok(b_linearity_violation(a)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semimodule::{FunctionalSemimodule, PointSet};
    use crate::semiring::Semiring;

    fn b(bits: &str) -> FiniteFunction {
        FiniteFunction::new(
            bits.chars()
                .map(|c| if c == '1' { Value::int(1) } else { Value::Bot })
                .collect(),
        )
    }

    fn diamond() -> Space {
        Space::enumerated(
            FunctionalSemimodule::new(
                Semiring::boolean(),
                PointSet::numbered("x", 3),
                vec![b("000"), b("100"), b("010"), b("111")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_on_full_boolean_is_b_linear() {
        let full = Space::full(Semiring::boolean(), PointSet::numbered("x", 2))
            .materialize(64)
            .unwrap();
        assert!(is_b_linear(&Operator::identity(full)).unwrap());
    }

    #[test]
    fn third_coordinate_is_not_b_linear_on_the_diamond() {
        let v = diamond();
        let k = Space::scalars(Semiring::boolean());
        let op = Operator::from_fn(v, k, |f| Ok(FiniteFunction::new(vec![f.get(2)]))).unwrap();
        let violation = b_linearity_violation(&op).unwrap().unwrap();
        assert_eq!(
            violation,
            LinearityViolation::Join {
                f: "010".into(),
                g: "100".into(),
                image_of_join: "1".into(),
                join_of_images: "0".into(),
            }
        );
    }

    #[test]
    fn tables_must_be_total_and_typed() {
        let v = diamond();
        let k = Space::scalars(Semiring::boolean());
        assert!(Operator::table(v.clone(), k.clone(), vec![b("0")]).is_err());
        assert!(Operator::table(v.clone(), v.clone(), vec![b("110"); 4]).is_err());
        let z = Operator::zero(v.clone(), k).unwrap();
        assert!(is_b_linear(&z).unwrap());
        let mp = Space::full(Semiring::max_plus(true), PointSet::numbered("x", 2));
        assert!(Operator::table(mp.clone(), mp, vec![]).is_err());
    }

    #[test]
    fn sampled_linearity_over_max_plus() {
        let s = Semiring::max_plus(true);
        let full = Space::full(s, PointSet::numbered("x", 2));
        let id = Operator::identity(full.clone());
        assert!(is_b_linear(&id).unwrap());
        let shift = Operator::from_fn(full.clone(), full, |f| {
            Ok(FiniteFunction::new(
                f.values()
                    .iter()
                    .map(|&v| Semiring::max_plus(true).oplus(v, Value::int(0)))
                    .collect(),
            ))
        })
        .unwrap();
        assert!(!is_b_linear(&shift).unwrap());
    }
}
