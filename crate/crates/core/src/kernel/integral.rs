//! Integral representations `Af = ⊕_x f(x) ⊙ k(x)` and maximal kernels.
//!
//! The sum is taken with the target's own join. For a target that is a
//! b-subsemimodule of `K(Y)` this is the familiar matrix formula
//! `Af(y) = ⊕_x f(x) ⊙ k(x, y)`.

use serde::Serialize;

use super::operator::Operator;
use super::space::Space;
use crate::error::{Error, Result};
use crate::semimodule::{FiniteFunction, PointSet};
use crate::semiring::{Semiring, SemiringOps, Value};

/// Upper bound on the number of kernel candidates tried when a target has
/// several maximal elements below the residual bound.
pub const KERNEL_SEARCH_CAP: usize = 1 << 14;

/// A kernel `k: X × Y → K`; row `x` is the target element `k(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelMatrix {
    semiring: Semiring,
    row_points: PointSet,
    col_points: PointSet,
    rows: Vec<FiniteFunction>,
}

impl KernelMatrix {
    pub fn new(
        semiring: Semiring,
        row_points: PointSet,
        col_points: PointSet,
        rows: Vec<FiniteFunction>,
    ) -> Result<Self> {
        if rows.len() != row_points.len() {
            return Err(Error::DimensionMismatch {
                expected: row_points.len(),
                got: rows.len(),
            });
        }
        for r in &rows {
            if r.len() != col_points.len() {
                return Err(Error::DimensionMismatch {
                    expected: col_points.len(),
                    got: r.len(),
                });
            }
            for &v in r.values() {
                semiring.validate(v)?;
            }
        }
        Ok(Self {
            semiring,
            row_points,
            col_points,
            rows,
        })
    }

    /// Builds a kernel from a dense row-major matrix with numbered labels.
    pub fn from_matrix(semiring: Semiring, matrix: Vec<Vec<Value>>) -> Result<Self> {
        let n = matrix.len();
        let m = matrix.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::Input("kernel matrix must be nonempty".into()));
        }
        Self::new(
            semiring,
            PointSet::numbered("x", n),
            PointSet::numbered("y", m),
            matrix.into_iter().map(FiniteFunction::new).collect(),
        )
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn row_points(&self) -> &PointSet {
        &self.row_points
    }

    pub fn col_points(&self) -> &PointSet {
        &self.col_points
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.col_points.len()
    }

    /// `k(x)` as an element of the target.
    pub fn row(&self, x: usize) -> &FiniteFunction {
        &self.rows[x]
    }

    pub fn row_elements(&self) -> &[FiniteFunction] {
        &self.rows
    }

    pub fn get(&self, x: usize, y: usize) -> Value {
        self.rows[x].get(y)
    }

    pub fn to_matrix(&self) -> Vec<Vec<Value>> {
        self.rows.iter().map(|r| r.values().to_vec()).collect()
    }

    /// Pointwise order on kernels.
    pub fn leq(&self, other: &KernelMatrix) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.leq(&self.semiring, b))
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = self.rows.iter().map(|r| r.render(&self.semiring)).collect();
        format!("({})", rows.join(", "))
    }
}

/// `⊕_x f(x) ⊙ k(x)` with the target's join.
pub fn apply_integral(kernel: &KernelMatrix, f: &FiniteFunction, target: &Space) -> Result<FiniteFunction> {
    if f.len() != kernel.rows() {
        return Err(Error::DimensionMismatch {
            expected: kernel.rows(),
            got: f.len(),
        });
    }
    if target.dim() != kernel.cols() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            got: kernel.cols(),
        });
    }
    let terms = (0..kernel.rows())
        .map(|x| target.scale(f.get(x), kernel.row(x)))
        .collect::<Result<Vec<_>>>()?;
    target.join_all(terms)
}

/// The matrix formula `Af(y) = ⊕_x f(x) ⊙ k(x, y)`, always pointwise.
pub fn apply_integral_pointwise(kernel: &KernelMatrix, f: &FiniteFunction) -> Result<FiniteFunction> {
    if f.len() != kernel.rows() {
        return Err(Error::DimensionMismatch {
            expected: kernel.rows(),
            got: f.len(),
        });
    }
    let s = kernel.semiring;
    Ok(FiniteFunction::new(
        (0..kernel.cols())
            .map(|y| s.sup((0..kernel.rows()).map(|x| s.otimes(f.get(x), kernel.get(x, y)))))
            .collect(),
    ))
}

/// Pointwise residual bound `r(x) = ⋀_f f(x) \ Af`, or `None` where no probe
/// is nonzero at `x` (the bound is then the top of the target).
fn residual_bounds(a: &Operator) -> Result<Vec<Option<FiniteFunction>>> {
    let s = *a.source().semiring();
    let probes = a.probes();
    let images = probes.iter().map(|f| a.apply(f)).collect::<Result<Vec<_>>>()?;
    let dim_y = a.target().dim();
    (0..a.source().dim())
        .map(|x| {
            let mut bound: Option<FiniteFunction> = None;
            for (f, af) in probes.iter().zip(&images) {
                let fx = f.get(x);
                if fx.is_bot() {
                    continue;
                }
                let r = FiniteFunction::new(
                    (0..dim_y)
                        .map(|y| s.residual(fx, af.get(y)))
                        .collect::<Result<Vec<_>>>()?,
                );
                bound = Some(match bound {
                    None => r,
                    Some(b) => b.meet(&s, &r),
                });
            }
            Ok(bound)
        })
        .collect()
}

fn reproduces(a: &Operator, rows: &[FiniteFunction], inputs: &[FiniteFunction]) -> Result<Option<FiniteFunction>> {
    let k = KernelMatrix::new(
        *a.source().semiring(),
        a.source().points().clone(),
        a.target().points().clone(),
        rows.to_vec(),
    )?;
    for f in inputs {
        match apply_integral(&k, f, a.target()) {
            Ok(g) if g == a.apply(f)? => {}
            _ => return Ok(Some(f.clone())),
        }
    }
    Ok(None)
}

/// The pointwise-largest kernel representing `a`, built by residuation.
///
/// For a full target the residual bound itself is the answer. For an
/// enumerated target the row `k(x)` must be a carrier element below the
/// bound; when that set has a single maximal element it is taken, otherwise
/// the combinations of maximal elements are searched, in order, for one that
/// reproduces `a`. If `a` is not integral the returned kernel is the best
/// candidate and fails verification.
pub fn max_kernel(a: &Operator) -> Result<KernelMatrix> {
    let s = *a.source().semiring();
    let bounds = residual_bounds(a)?;
    let target = a.target();
    let rows: Vec<FiniteFunction> = match target.module() {
        None => bounds
            .into_iter()
            .map(|b| match b {
                Some(r) => Ok(r),
                None => target.top().ok_or_else(|| Error::ResidualNotExpressible {
                    semiring: s.name(),
                    a: s.format(Value::Bot),
                    b: "the whole target".into(),
                }),
            })
            .collect::<Result<_>>()?,
        Some(w) => {
            let maximal: Vec<Vec<usize>> = bounds
                .iter()
                .map(|b| {
                    let below: Vec<usize> = (0..w.len())
                        .filter(|&i| b.as_ref().is_none_or(|r| w.element(i).leq(&s, r)))
                        .collect();
                    below
                        .iter()
                        .copied()
                        .filter(|&i| !below.iter().any(|&j| j != i && w.element(i).leq(&s, w.element(j))))
                        .collect()
                })
                .collect();
            let pick = |choice: &[usize]| -> Vec<FiniteFunction> {
                maximal
                    .iter()
                    .zip(choice)
                    .map(|(m, &c)| w.element(m[c]).clone())
                    .collect()
            };
            let combos: usize = maximal
                .iter()
                .map(Vec::len)
                .try_fold(1usize, |acc, n| acc.checked_mul(n))
                .unwrap_or(usize::MAX);
            let mut choice = vec![0usize; maximal.len()];
            if combos == 1 {
                pick(&choice)
            } else {
                if combos > KERNEL_SEARCH_CAP {
                    return Err(Error::CapExceeded {
                        what: "maximal kernel candidates",
                        cap: KERNEL_SEARCH_CAP,
                    });
                }
                let inputs = a.verification_inputs(0);
                let mut found = None;
                'search: loop {
                    let rows = pick(&choice);
                    if reproduces(a, &rows, &inputs)?.is_none() {
                        found = Some(rows);
                        break 'search;
                    }
                    let mut pos = 0;
                    loop {
                        if pos == choice.len() {
                            break 'search;
                        }
                        choice[pos] += 1;
                        if choice[pos] < maximal[pos].len() {
                            break;
                        }
                        choice[pos] = 0;
                        pos += 1;
                    }
                }
                found.unwrap_or_else(|| pick(&vec![0; maximal.len()]))
            }
        }
    };
    KernelMatrix::new(s, a.source().points().clone(), a.target().points().clone(), rows)
}

/// Outcome of [`has_integral_representation`].
#[derive(Clone, Debug, Serialize)]
pub struct IntegralVerdict {
    pub integral: bool,
    /// The maximal kernel; a witness when `integral` holds.
    pub kernel: KernelMatrix,
    /// First input on which the maximal kernel disagrees with the operator.
    pub mismatch: Option<FiniteFunction>,
}

/// Decides integrality by checking the maximal kernel against the operator.
pub fn has_integral_representation(a: &Operator) -> Result<IntegralVerdict> {
    let kernel = max_kernel(a)?;
    let inputs = a.verification_inputs(0);
    let mismatch = reproduces(a, kernel.row_elements(), &inputs)?;
    Ok(IntegralVerdict {
        integral: mismatch.is_none(),
        kernel,
        mismatch,
    })
}

/// Whether `k` represents `a` on every verification input.
pub fn is_kernel_of(a: &Operator, k: &KernelMatrix) -> Result<bool> {
    Ok(reproduces(a, k.row_elements(), &a.verification_inputs(0))?.is_none())
}
