//! `(p ⊛ q)(n) = ⊕_{i+j=n} p(i) ⊙ q(j)`, evaluated as the integral operator
//! on `q` with kernel `k(j, n) = p(n − j)`.

use crate::error::{Error, Result};
use crate::kernel::integral::{apply_integral, KernelMatrix};
use crate::kernel::space::Space;
use crate::semimodule::{FiniteFunction, PointSet};
use crate::semiring::{Semiring, SemiringOps, Value};

pub fn tropical_convolution(s: Semiring, p: &[Value], q: &[Value]) -> Result<Vec<Value>> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::Input("convolution needs nonempty coefficient lists".into()));
    }
    for &v in p.iter().chain(q) {
        s.validate(v)?;
    }
    let len = p.len() + q.len() - 1;
    let rows = (0..q.len())
        .map(|j| {
            FiniteFunction::new(
                (0..len)
                    .map(|n| n.checked_sub(j).and_then(|i| p.get(i).copied()).unwrap_or(s.zero()))
                    .collect(),
            )
        })
        .collect();
    let out_points = PointSet::numbered("n", len);
    let kernel = KernelMatrix::new(s, PointSet::numbered("j", q.len()), out_points.clone(), rows)?;
    let f = FiniteFunction::new(q.to_vec());
    Ok(apply_integral(&kernel, &f, &Space::full(s, out_points))?.into_values())
}
