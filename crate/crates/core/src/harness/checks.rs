//! One judge per structural statement. A judge sees a single instance
//! semimodule `V` plus the operators probing it and returns a verdict; the
//! same judge replays a recorded witness.

use std::cell::OnceCell;
use std::sync::Arc;

use super::config::CheckId;
use super::report::{Status, Witness};
use crate::error::{Error, Result};
use crate::kernel::delta::{i_delta, DeltaRepresentation};
use crate::kernel::integral::{has_integral_representation, KernelMatrix};
use crate::kernel::linear_maps::{enumerate_b_linear_functionals, DEFAULT_SCALAR_CAP};
use crate::kernel::nuclear::{evaluation_functional, is_b_nuclear_with};
use crate::kernel::operator::{is_b_linear, Operator};
use crate::kernel::space::Space;
use crate::semimodule::{enumerate_full_space, FiniteFunction, FunctionalSemimodule};

/// Kernels into the instance itself are enumerated exhaustively up to this
/// many; beyond it a fixed deterministic subset is used.
pub const SELF_KERNEL_CAP: usize = 64;

/// An operator probing the instance, either out of it or into it.
#[derive(Clone, Debug)]
pub struct Probe {
    pub op: Operator,
    /// b-linear functionals on the operator's source when that source is not
    /// the instance.
    pub source_functionals: Option<Arc<Vec<Operator>>>,
}

impl Probe {
    pub fn out_of(op: Operator) -> Self {
        Self {
            op,
            source_functionals: None,
        }
    }
}

/// Verdict of one judge on one instance.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub detail: Option<String>,
    pub witness: Option<Witness>,
}

impl Outcome {
    fn consistent(detail: impl Into<String>) -> Self {
        Self {
            status: Status::Consistent,
            detail: Some(detail.into()),
            witness: None,
        }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        Self {
            status: Status::Skipped,
            detail: Some(detail.into()),
            witness: None,
        }
    }

    fn failed(status: Status, detail: impl Into<String>, witness: Witness) -> Self {
        Self {
            status,
            detail: Some(detail.into()),
            witness: Some(witness),
        }
    }

    /// Caps and budgets skip the instance; any other error is an internal
    /// inconsistency.
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::BudgetExhausted(_) => Self::skipped(e.to_string()),
            other => Self {
                status: Status::Violation,
                detail: Some(format!("internal error: {other}")),
                witness: None,
            },
        }
    }
}

/// Lazily computed facts about one instance, shared by all judges.
pub struct Analysis {
    pub module: Arc<FunctionalSemimodule>,
    carrier_cap: usize,
    functionals: OnceCell<std::result::Result<Arc<Vec<Operator>>, String>>,
    functionals_integral: OnceCell<Option<Operator>>,
    identity: Operator,
    id_integral: OnceCell<bool>,
    id_nuclear: OnceCell<bool>,
    delta: OnceCell<std::result::Result<Arc<DeltaRepresentation>, String>>,
}

impl Analysis {
    pub fn new(module: Arc<FunctionalSemimodule>, carrier_cap: usize) -> Self {
        let identity = Operator::identity(Space::Enumerated(module.clone()));
        Self {
            module,
            carrier_cap,
            functionals: OnceCell::new(),
            functionals_integral: OnceCell::new(),
            identity,
            id_integral: OnceCell::new(),
            id_nuclear: OnceCell::new(),
            delta: OnceCell::new(),
        }
    }

    fn space(&self) -> Space {
        Space::Enumerated(self.module.clone())
    }

    fn witness(&self) -> Witness {
        Witness::of_module(&self.module)
    }

    pub fn functionals(&self) -> Result<Arc<Vec<Operator>>> {
        self.functionals
            .get_or_init(|| {
                enumerate_b_linear_functionals(&self.module, self.carrier_cap, DEFAULT_SCALAR_CAP)
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            })
            .clone()
            .map_err(|_| Error::CapExceeded {
                what: "carrier size for functional enumeration",
                cap: self.carrier_cap,
            })
    }

    /// The first b-linear functional without an integral representation.
    pub fn non_integral_functional(&self) -> Result<Option<Operator>> {
        if let Some(v) = self.functionals_integral.get() {
            return Ok(v.clone());
        }
        let mut found = None;
        for phi in self.functionals()?.iter() {
            if !integral(phi)? {
                found = Some(phi.clone());
                break;
            }
        }
        Ok(self.functionals_integral.get_or_init(|| found).clone())
    }

    pub fn id_integral(&self) -> Result<bool> {
        if let Some(&b) = self.id_integral.get() {
            return Ok(b);
        }
        let b = integral(&self.identity)?;
        Ok(*self.id_integral.get_or_init(|| b))
    }

    /// Whether `id: V → V` is b-nuclear (the approximation property).
    pub fn id_nuclear(&self) -> Result<bool> {
        if let Some(&b) = self.id_nuclear.get() {
            return Ok(b);
        }
        let b = is_b_nuclear_with(&self.identity, &self.functionals()?)?.nuclear;
        Ok(*self.id_nuclear.get_or_init(|| b))
    }

    pub fn delta(&self) -> Result<Arc<DeltaRepresentation>> {
        self.delta
            .get_or_init(|| {
                i_delta(&self.module, self.carrier_cap)
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            })
            .clone()
            .map_err(Error::Input)
    }

    fn nuclear(&self, probe: &Probe) -> Result<bool> {
        let functionals = match &probe.source_functionals {
            Some(f) => f.clone(),
            None => self.functionals()?,
        };
        Ok(is_b_nuclear_with(&probe.op, &functionals)?.nuclear)
    }

    fn is_out(&self, probe: &Probe) -> bool {
        probe.op.source().module().is_some_and(|m| **m == *self.module)
    }
}

pub(crate) fn integral(op: &Operator) -> Result<bool> {
    Ok(has_integral_representation(op)?.integral)
}

/// Functionals on an arbitrary enumerated source.
pub fn functionals_of(v: &Arc<FunctionalSemimodule>, cap: usize) -> Result<Arc<Vec<Operator>>> {
    Ok(Arc::new(enumerate_b_linear_functionals(v, cap, DEFAULT_SCALAR_CAP)?))
}

pub fn judge(check: CheckId, a: &Analysis, probes: &[Probe]) -> Outcome {
    let r = match check {
        CheckId::Prop1 => prop1(a),
        CheckId::Prop2 => prop2(a),
        CheckId::Thm1 => thm1(a, probes),
        CheckId::Thm2 => thm2(a, probes),
        CheckId::Prop3 => prop3(a, probes, true),
        CheckId::Corollary => prop3(a, probes, false),
        CheckId::Thm3 => thm3(a, probes),
        CheckId::Thm3a => thm3a(a, probes),
        CheckId::Prop4 => prop4(a),
        CheckId::Thm4 => thm4(a),
        CheckId::Prop5 => prop5(a),
    };
    r.unwrap_or_else(|e| Outcome::from_error(&e))
}

/// b-subsemimodule ⇔ every evaluation functional is b-linear.
fn prop1(a: &Analysis) -> Result<Outcome> {
    let lhs = a.module.is_b_subsemimodule();
    let mut first_bad = None;
    for x in 0..a.module.dim() {
        let delta = evaluation_functional(&a.space(), x)?;
        if !is_b_linear(&delta)? {
            first_bad = Some(a.module.points().label(x).to_string());
            break;
        }
    }
    let rhs = first_bad.is_none();
    if lhs == rhs {
        return Ok(Outcome::consistent(match first_bad {
            None => "b-subsemimodule; every evaluation functional is b-linear".to_string(),
            Some(x) => format!("not a b-subsemimodule; evaluation at {x} is not b-linear"),
        }));
    }
    Ok(Outcome::failed(
        Status::Violation,
        format!("b-subsemimodule={lhs} but evaluation functionals b-linear={rhs}"),
        a.witness(),
    ))
}

/// All kernels `X → K`, little-endian in the point order.
pub fn scalar_kernels(v: &FunctionalSemimodule) -> Result<Vec<KernelMatrix>> {
    let s = *v.semiring();
    let rows = enumerate_full_space(&s, v.dim(), 1 << 12)?;
    let k_points = crate::semimodule::PointSet::numbered("*", 1);
    rows.into_iter()
        .map(|f| {
            let rows = f.values().iter().map(|&x| FiniteFunction::new(vec![x])).collect();
            KernelMatrix::new(s, v.points().clone(), k_points.clone(), rows)
        })
        .collect()
}

/// b-subsemimodule ⇔ every integral operator on V is b-linear. Integral
/// operators are drawn from all scalar kernels and from kernels into V.
fn prop2(a: &Analysis) -> Result<Outcome> {
    let v = &a.module;
    let s = *v.semiring();
    let lhs = v.is_b_subsemimodule();
    let mut ops = Vec::new();
    for k in scalar_kernels(v)? {
        ops.push(Operator::from_kernel(a.space(), Space::scalars(s), k)?);
    }
    for rows in self_kernels(v) {
        let k = KernelMatrix::new(s, v.points().clone(), v.points().clone(), rows)?;
        ops.push(Operator::from_kernel(a.space(), a.space(), k)?);
    }
    let mut first_bad = None;
    for op in &ops {
        if !is_b_linear(op)? {
            first_bad = Some(op);
            break;
        }
    }
    let rhs = first_bad.is_none();
    if lhs == rhs {
        return Ok(Outcome::consistent(format!(
            "{} integral operators, b-subsemimodule={lhs}",
            ops.len()
        )));
    }
    let witness = match first_bad {
        Some(op) => Witness::with_operator(v, &op.to_table()?)?,
        None => a.witness(),
    };
    Ok(Outcome::failed(
        Status::Violation,
        format!("b-subsemimodule={lhs} but all integral operators b-linear={rhs}"),
        witness,
    ))
}

fn self_kernels(v: &FunctionalSemimodule) -> Vec<Vec<FiniteFunction>> {
    use rand::{RngExt, SeedableRng};
    let n = v.len();
    let dim = v.dim();
    let total = (n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total <= SELF_KERNEL_CAP as u128 {
        let mut out = Vec::new();
        let mut digits = vec![0usize; dim];
        loop {
            out.push(digits.iter().map(|&d| v.element(d).clone()).collect());
            let mut pos = 0;
            loop {
                if pos == dim {
                    return out;
                }
                digits[pos] += 1;
                if digits[pos] < n {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(v.len() as u64);
    (0..SELF_KERNEL_CAP)
        .map(|_| (0..dim).map(|_| v.element(rng.random_range(0..n)).clone()).collect())
        .collect()
}

/// Inf-closed V, admissible enumerated W: every b-linear `A: V → W` is integral.
fn thm1(a: &Analysis, probes: &[Probe]) -> Result<Outcome> {
    if !a.module.is_inf_closed() {
        return Ok(Outcome::skipped("V is not inf-closed"));
    }
    let mut checked = 0;
    for p in probes.iter().filter(|p| a.is_out(p)) {
        if !p.op.target().is_admissible() || !is_b_linear(&p.op)? {
            continue;
        }
        checked += 1;
        let verdict = has_integral_representation(&p.op)?;
        if !verdict.integral {
            let mut w = Witness::with_operator(&a.module, &p.op)?;
            if let Some(f) = &verdict.mismatch {
                w = w.with_element(f);
            }
            let source = if a.module.is_admissible() {
                "admissible"
            } else {
                "not admissible"
            };
            return Ok(Outcome::failed(
                Status::Violation,
                format!(
                    "b-linear operator from an inf-closed semimodule into an admissible one has no integral representation (V is {source})"
                ),
                w,
            ));
        }
    }
    Ok(Outcome::consistent(format!("{checked} operators integral")))
}

/// b-subsemimodule V whose functionals are all integral: integral ⇔ b-nuclear.
fn thm2(a: &Analysis, probes: &[Probe]) -> Result<Outcome> {
    if !a.module.is_b_subsemimodule() {
        return Ok(Outcome::skipped("V is not a b-subsemimodule"));
    }
    if a.non_integral_functional()?.is_some() {
        return Ok(Outcome::skipped("a b-linear functional on V is not integral"));
    }
    let mut checked = 0;
    for p in probes.iter().filter(|p| a.is_out(p)) {
        if !is_b_linear(&p.op)? {
            continue;
        }
        checked += 1;
        let int = integral(&p.op)?;
        let nuc = a.nuclear(p)?;
        if int != nuc {
            return Ok(Outcome::failed(
                Status::Violation,
                format!("integral={int} but b-nuclear={nuc}"),
                Witness::with_operator(&a.module, &p.op)?,
            ));
        }
    }
    Ok(Outcome::consistent(format!("{checked} operators agree")))
}

/// Approximation property ⇔ every b-linear map out of V is b-nuclear (and,
/// with `into`, ⇔ every b-linear map into V is b-nuclear). The identity is
/// among the maps, so only the forward implication can fail.
fn prop3(a: &Analysis, probes: &[Probe], into: bool) -> Result<Outcome> {
    let approx = a.id_nuclear()?;
    if !approx {
        return Ok(Outcome::consistent(
            "no approximation property; the identity itself is not b-nuclear",
        ));
    }
    let mut checked = 0;
    for p in probes {
        let out = a.is_out(p);
        if !out && !into {
            continue;
        }
        if !is_b_linear(&p.op)? {
            continue;
        }
        checked += 1;
        if !a.nuclear(p)? {
            let dir = if out { "out of" } else { "into" };
            return Ok(Outcome::failed(
                Status::Violation,
                format!("V has the approximation property but a b-linear map {dir} V is not b-nuclear"),
                Witness::with_operator(&a.module, &p.op)?,
            ));
        }
    }
    Ok(Outcome::consistent(format!(
        "approximation property; {checked} maps b-nuclear"
    )))
}

/// Whether every probe out of V, every functional and the identity are integral;
/// returns the first counterexample otherwise.
fn kernel_theorem_sample(a: &Analysis, probes: &[Probe]) -> Result<(usize, Option<Operator>)> {
    if let Some(phi) = a.non_integral_functional()? {
        return Ok((0, Some(phi)));
    }
    if !a.id_integral()? {
        return Ok((0, Some(a.identity.clone())));
    }
    let mut checked = a.functionals()?.len() + 1;
    for p in probes.iter().filter(|p| a.is_out(p)) {
        if !is_b_linear(&p.op)? {
            continue;
        }
        checked += 1;
        if !integral(&p.op)? {
            return Ok((checked, Some(p.op.clone())));
        }
    }
    Ok((checked, None))
}

/// b-subsemimodule V: kernel theorem ⇔ (functionals integral ∧ approximation property).
fn thm3(a: &Analysis, probes: &[Probe]) -> Result<Outcome> {
    if !a.module.is_b_subsemimodule() {
        return Ok(Outcome::skipped("V is not a b-subsemimodule"));
    }
    let (checked, failure) = kernel_theorem_sample(a, probes)?;
    let kt = failure.is_none();
    let rhs = a.non_integral_functional()?.is_none() && a.id_nuclear()?;
    if kt == rhs {
        return Ok(Outcome::consistent(format!("kernel theorem={kt} ({checked} maps)")));
    }
    let witness = match &failure {
        Some(op) => Witness::with_operator(&a.module, op)?,
        None => a.witness(),
    };
    Ok(Outcome::failed(
        Status::Violation,
        format!("kernel theorem on sampled maps={kt} but functionals integral and approximation property={rhs}"),
        witness,
    ))
}

/// b-subsemimodule V: kernel theorem ⇔ identity integral.
fn thm3a(a: &Analysis, probes: &[Probe]) -> Result<Outcome> {
    let (checked, failure) = kernel_theorem_sample(a, probes)?;
    let kt = failure.is_none();
    let id = a.id_integral()?;
    if kt == id {
        return Ok(Outcome::consistent(format!("identity integral={id} ({checked} maps)")));
    }
    let op = failure.expect("kernel theorem fails");
    let status = if a.module.is_b_subsemimodule() {
        Status::Violation
    } else {
        Status::Observation
    };
    Ok(Outcome::failed(
        status,
        format!(
            "identity integral but a b-linear map out of V is not (V b-subsemimodule={})",
            a.module.is_b_subsemimodule()
        ),
        Witness::with_operator(&a.module, &op)?,
    ))
}

/// Identity b-nuclear ⇔ (i_Δ an embedding ∧ identity of i_Δ(V) integral).
fn prop4(a: &Analysis) -> Result<Outcome> {
    let lhs = a.id_nuclear()?;
    let rep = a.delta()?;
    let embedding = rep.is_embedding();
    let image_integral = rep.image_identity_integral()?;
    let rhs = embedding && image_integral;
    if lhs == rhs {
        return Ok(Outcome::consistent(format!(
            "identity b-nuclear={lhs}; |Δ|={}, embedding={embedding}, image identity integral={image_integral}",
            rep.delta.deltas.len()
        )));
    }
    Ok(Outcome::failed(
        Status::Violation,
        format!("identity b-nuclear={lhs} but embedding={embedding}, image identity integral={image_integral}"),
        a.witness(),
    ))
}

/// V is isomorphic to an IFS with the kernel theorem ⇔ identity b-nuclear.
/// Forward: i_Δ(V) is such an IFS. Backward: V itself, when it is one.
fn thm4(a: &Analysis) -> Result<Outcome> {
    let nuclear = a.id_nuclear()?;
    let rep = a.delta()?;
    if nuclear {
        let ok = rep.is_embedding() && rep.image.is_b_subsemimodule() && rep.image_identity_integral()?;
        if !ok {
            return Ok(Outcome::failed(
                Status::Violation,
                "identity b-nuclear but i_Δ(V) is not an isomorphic copy with the kernel theorem",
                a.witness(),
            ));
        }
        return Ok(Outcome::consistent(
            "identity b-nuclear; i_Δ(V) is an isomorphic copy with the kernel theorem",
        ));
    }
    if a.module.is_b_subsemimodule() && a.id_integral()? {
        return Ok(Outcome::failed(
            Status::Violation,
            "kernel theorem holds in V but the identity is not b-nuclear",
            a.witness(),
        ));
    }
    Ok(Outcome::consistent(
        "identity not b-nuclear; no isomorphic copy with the kernel theorem",
    ))
}

/// b-subsemimodule V with the kernel theorem: `x ↦ δ_x` lands in Δ(V) and
/// pulling back along it maps i_Δ(V) onto V isomorphically.
fn prop5(a: &Analysis) -> Result<Outcome> {
    let b_sub = a.module.is_b_subsemimodule();
    if !a.id_integral()? {
        return Ok(Outcome::skipped("kernel theorem does not hold in V"));
    }
    let rep = a.delta()?;
    let recovers = rep.pullback_recovers();
    let ok = recovers == Some(true) && rep.injective;
    if ok {
        return Ok(Outcome::consistent(format!(
            "pullback along x ↦ δ_x recovers V (b-subsemimodule={b_sub})"
        )));
    }
    let missing: Vec<&str> = rep
        .point_map()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(x, _)| a.module.points().label(x))
        .collect();
    let detail = if missing.is_empty() {
        "pullback does not recover V".to_string()
    } else {
        format!("no δ-functional agrees with evaluation at {}", missing.join(","))
    };
    if b_sub {
        Ok(Outcome::failed(Status::Violation, detail, a.witness()))
    } else {
        Ok(Outcome::failed(Status::Observation, detail, a.witness()))
    }
}

/// Re-runs one check on a recorded witness.
pub fn replay(check: CheckId, witness: &Witness, carrier_cap: usize) -> Result<Outcome> {
    let (v, op) = witness.rebuild()?;
    let a = Analysis::new(v.clone(), carrier_cap.max(v.len()));
    let mut probes = Vec::new();
    if let Some(op) = op {
        let source = op.source().module().expect("rebuilt tables are enumerated").clone();
        let source_functionals = if *source == *v {
            None
        } else {
            Some(functionals_of(&source, carrier_cap.max(source.len()))?)
        };
        probes.push(Probe { op, source_functionals });
    }
    Ok(judge(check, &a, &probes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semimodule::PointSet;
    use crate::semiring::{Semiring, Value};

    fn bits(s: &str) -> FiniteFunction {
        FiniteFunction::new(
            s.chars()
                .map(|c| if c == '1' { Value::int(1) } else { Value::Bot })
                .collect(),
        )
    }

    fn module(n: usize, carrier: &[&str]) -> Arc<FunctionalSemimodule> {
        Arc::new(
            FunctionalSemimodule::new(
                Semiring::boolean(),
                PointSet::numbered("x", n),
                carrier.iter().map(|c| bits(c)).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn diamond_verdicts() {
        let v = module(3, &["000", "100", "010", "111"]);
        let a = Analysis::new(v.clone(), 8);
        for check in CheckId::ALL {
            let o = judge(check, &a, &[]);
            assert_ne!(o.status, Status::Violation, "{check}: {:?}", o.detail);
        }
        assert!(a.id_integral().unwrap());
        assert!(a.id_nuclear().unwrap());
        // Evaluation at the third point is integral yet not b-linear.
        let p1 = judge(CheckId::Prop1, &a, &[]);
        assert!(p1.detail.unwrap().contains("x3"));
        assert_eq!(judge(CheckId::Prop5, &a, &[]).status, Status::Observation);
    }

    #[test]
    fn replay_reproduces_a_forged_violation_shape() {
        // A b-linear map out of the full pair whose table we record and replay.
        let v = module(2, &["00", "10", "01", "11"]);
        let a = Analysis::new(v.clone(), 8);
        let op = Operator::identity(Space::Enumerated(v.clone()));
        let w = Witness::with_operator(&v, &op).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        for check in CheckId::ALL {
            let direct = judge(check, &a, &[Probe::out_of(op.clone())]).status;
            assert_eq!(replay(check, &back, 8).unwrap().status, direct);
        }
    }
}
