//! JSON file formats.
//!
//! Values are written in a per-instance shorthand: `"0"`/`"1"` for boolean,
//! levels `"0"..="N"` for fuzzy chains, `"bot"` and `"0"..="N"` for
//! saturated naturals, and rationals such as `"-3/2"` or `"0.25"` with
//! `"-inf"`/`"+inf"` for Max-Plus and Min-Plus. Integers may also be given as
//! JSON numbers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::apps::{Hmm, WeightedGraph};
use crate::error::{Error, Result};
use crate::kernel::integral::KernelMatrix;
use crate::kernel::operator::Operator;
use crate::kernel::space::Space;
use crate::semimodule::{FiniteFunction, FunctionalSemimodule, PointSet};
use crate::semiring::{Instance, Rational, Semiring, SemiringOps, SemiringSpec, Value};

/// Largest carrier materialized from a `"full": true` semimodule file.
pub const FULL_CARRIER_CAP: usize = 1 << 16;

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn parse_rational(text: &str) -> Option<Rational> {
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.trim_start().starts_with('-');
        let whole: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse().ok()?
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let f: i64 = frac.parse().ok()?;
        let mag = whole.checked_abs()?.checked_mul(scale)?.checked_add(f)?;
        return Some(Rational::new(if negative { -mag } else { mag }, scale));
    }
    text.trim().parse::<i64>().ok().map(Rational::from_integer)
}

/// Parses one value in the shorthand of `s`.
pub fn parse_value(s: &Semiring, text: &str) -> Result<Value> {
    let t = text.trim();
    let invalid = || Error::InvalidValue {
        semiring: s.name(),
        value: text.to_string(),
    };
    let v = match (s.instance(), t) {
        (_, "bot") => Value::Bot,
        (_, "top") => Value::Top,
        (Instance::MaxPlus, "-inf") | (Instance::MinPlus, "+inf" | "inf") => Value::Bot,
        (Instance::MaxPlus, "+inf" | "inf") | (Instance::MinPlus, "-inf") => Value::Top,
        (Instance::Boolean | Instance::FuzzyChain(_), "0") => Value::Bot,
        (Instance::MaxPlus | Instance::MinPlus, _) => Value::Fin(parse_rational(t).ok_or_else(invalid)?),
        _ => Value::Fin(Rational::from_integer(t.parse::<i64>().map_err(|_| invalid())?)),
    };
    s.validate(v).map_err(|_| invalid())
}

/// A value cell: a shorthand string or a JSON integer.
pub fn value_from_json(s: &Semiring, cell: &Json) -> Result<Value> {
    match cell {
        Json::String(t) => parse_value(s, t),
        Json::Number(n) if n.is_i64() => parse_value(s, &n.to_string()),
        other => Err(Error::InvalidValue {
            semiring: s.name(),
            value: other.to_string(),
        }),
    }
}

pub fn values_from_json(s: &Semiring, cells: &[Json]) -> Result<Vec<Value>> {
    cells.iter().map(|c| value_from_json(s, c)).collect()
}

pub fn value_to_json(s: &Semiring, v: Value) -> Json {
    Json::String(s.format(v))
}

pub fn values_to_json(s: &Semiring, vs: &[Value]) -> Json {
    Json::Array(vs.iter().map(|&v| value_to_json(s, v)).collect())
}

/// The semimodule part of a file; exactly one of `carrier`, `generators`
/// and `full` describes the elements.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ModuleBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<Vec<Vec<Json>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Json>>>,
    /// Close the generators under pointwise meets as well.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inf_close: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub full: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemimoduleFile {
    pub semiring: SemiringSpec,
    #[serde(flatten)]
    pub body: ModuleBody,
}

/// A parsed semimodule together with the carrier as listed in the file.
#[derive(Clone, Debug)]
pub struct LoadedModule {
    pub space: Space,
    /// File order of an explicit carrier; operator tables index into it.
    pub listed: Option<Vec<FiniteFunction>>,
}

impl LoadedModule {
    pub fn module(&self) -> Result<Arc<FunctionalSemimodule>> {
        self.space.require_module(FULL_CARRIER_CAP)
    }
}

impl ModuleBody {
    fn point_set(&self) -> Result<PointSet> {
        match (&self.points, self.dim) {
            (Some(p), Some(d)) if p.len() != d => Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            }),
            (Some(p), _) => PointSet::new(p.iter().cloned()),
            (None, Some(0)) => Err(bad("dim must be positive")),
            (None, Some(d)) => Ok(PointSet::numbered("x", d)),
            (None, None) => {
                let first = self
                    .carrier
                    .as_ref()
                    .or(self.generators.as_ref())
                    .and_then(|rows| rows.first())
                    .ok_or_else(|| bad("semimodule needs `points` or `dim`"))?;
                if first.is_empty() {
                    return Err(bad("functions must have at least one value"));
                }
                Ok(PointSet::numbered("x", first.len()))
            }
        }
    }

    pub fn load(&self, s: Semiring) -> Result<LoadedModule> {
        let points = self.point_set()?;
        let rows = |rows: &[Vec<Json>]| {
            rows.iter()
                .map(|r| values_from_json(&s, r).map(FiniteFunction::new))
                .collect::<Result<Vec<_>>>()
        };
        let given = [self.carrier.is_some(), self.generators.is_some(), self.full]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(bad("give exactly one of `carrier`, `generators`, `full`"));
        }
        if self.inf_close && self.generators.is_none() {
            return Err(bad("`inf_close` only applies to `generators`"));
        }
        if self.full {
            return Ok(LoadedModule {
                space: Space::full(s, points),
                listed: None,
            });
        }
        if let Some(c) = &self.carrier {
            let listed = rows(c)?;
            let v = FunctionalSemimodule::new(s, points, listed.clone())?;
            if v.len() != listed.len() {
                return Err(bad("carrier lists an element twice"));
            }
            return Ok(LoadedModule {
                space: Space::Enumerated(Arc::new(v)),
                listed: Some(listed),
            });
        }
        let gens = rows(self.generators.as_deref().unwrap_or_default())?;
        let v = FunctionalSemimodule::close_under(s, points, &gens, self.inf_close, FULL_CARRIER_CAP)?;
        Ok(LoadedModule {
            space: Space::Enumerated(Arc::new(v)),
            listed: None,
        })
    }

    pub fn of_module(v: &FunctionalSemimodule) -> Self {
        let s = v.semiring();
        Self {
            points: Some(v.points().labels().to_vec()),
            carrier: Some(
                v.carrier()
                    .iter()
                    .map(|f| f.values().iter().map(|&x| value_to_json(s, x)).collect())
                    .collect(),
            ),
            ..Self::default()
        }
    }
}

impl SemimoduleFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn semiring(&self) -> Result<Semiring> {
        Semiring::try_from(&self.semiring)
    }

    pub fn load(&self) -> Result<LoadedModule> {
        self.body.load(self.semiring()?)
    }

    pub fn of_module(v: &FunctionalSemimodule) -> Self {
        Self {
            semiring: SemiringSpec::from(*v.semiring()),
            body: ModuleBody::of_module(v),
        }
    }
}

/// An operator between two semimodules, by table or by kernel. Table rows
/// are `[index, image]` with `index` into the source carrier as listed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub semiring: SemiringSpec,
    pub source: ModuleBody,
    /// Defaults to the semiring itself, making the operator a functional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ModuleBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(usize, Vec<Json>)>>,
    /// Row `x` is `k(x)`, an element of the target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<Vec<Json>>>,
}

impl OperatorFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(&self) -> Result<Operator> {
        let s = Semiring::try_from(&self.semiring)?;
        let src = self.source.load(s)?;
        let dst = match &self.target {
            Some(t) => t.load(s)?.space,
            None => Space::scalars(s),
        };
        match (&self.table, &self.kernel) {
            (Some(table), None) => {
                let listed = match (&src.listed, src.space.module()) {
                    (Some(l), _) => l.clone(),
                    (None, Some(m)) => m.carrier().to_vec(),
                    (None, None) => src.module()?.carrier().to_vec(),
                };
                let mut images: Vec<Option<FiniteFunction>> = vec![None; listed.len()];
                for (i, vals) in table {
                    let slot = images
                        .get_mut(*i)
                        .ok_or_else(|| bad(format!("table index {i} out of range")))?;
                    if slot.is_some() {
                        return Err(bad(format!("table index {i} given twice")));
                    }
                    *slot = Some(FiniteFunction::new(values_from_json(&s, vals)?));
                }
                let module = src.module()?;
                let mut ordered = vec![None; module.len()];
                for (f, img) in listed.iter().zip(images) {
                    let img = img.ok_or_else(|| Error::IncompleteTable(f.render(&s)))?;
                    ordered[module.require_index(f)?] = Some(img);
                }
                let ordered = ordered.into_iter().map(|o| o.expect("carrier fully listed")).collect();
                Operator::table(Space::Enumerated(module), dst, ordered)
            }
            (None, Some(rows)) => {
                let rows = rows
                    .iter()
                    .map(|r| values_from_json(&s, r).map(FiniteFunction::new))
                    .collect::<Result<Vec<_>>>()?;
                let k = KernelMatrix::new(s, src.space.points().clone(), dst.points().clone(), rows)?;
                Operator::from_kernel(src.space, dst, k)
            }
            _ => Err(bad("give exactly one of `table`, `kernel`")),
        }
    }
}

/// Dense row-major kernel output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelFile {
    pub semiring: SemiringSpec,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub kernel: Vec<Vec<Json>>,
}

impl KernelFile {
    pub fn of(k: &KernelMatrix) -> Self {
        let s = k.semiring();
        Self {
            semiring: SemiringSpec::from(*s),
            rows: k.row_points().labels().to_vec(),
            cols: k.col_points().labels().to_vec(),
            kernel: k
                .to_matrix()
                .iter()
                .map(|r| r.iter().map(|&v| value_to_json(s, v)).collect())
                .collect(),
        }
    }

    pub fn load(&self) -> Result<KernelMatrix> {
        let s = Semiring::try_from(&self.semiring)?;
        let rows = self
            .kernel
            .iter()
            .map(|r| values_from_json(&s, r).map(FiniteFunction::new))
            .collect::<Result<Vec<_>>>()?;
        KernelMatrix::new(
            s,
            PointSet::new(self.rows.iter().cloned())?,
            PointSet::new(self.cols.iter().cloned())?,
            rows,
        )
    }
}

/// A node given by label or by index.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeRef {
    Index(usize),
    Label(String),
}

impl NodeRef {
    fn resolve(&self, nodes: &[String]) -> Result<usize> {
        match self {
            NodeRef::Index(i) if *i < nodes.len() => Ok(*i),
            NodeRef::Index(i) => Err(bad(format!("node index {i} out of range"))),
            NodeRef::Label(l) => nodes
                .iter()
                .position(|n| n == l)
                .ok_or_else(|| Error::UnknownPoint(l.clone())),
        }
    }
}

/// `{"nodes": [...], "edges": [[u, v, num, den], ...], "source": label}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<String>,
    pub edges: Vec<(NodeRef, NodeRef, i64, i64)>,
    pub source: NodeRef,
}

impl GraphFile {
    pub fn load(&self) -> Result<WeightedGraph> {
        let edges = self
            .edges
            .iter()
            .map(|(u, v, num, den)| {
                if *den == 0 {
                    return Err(bad("edge weight has a zero denominator"));
                }
                Ok((
                    u.resolve(&self.nodes)?,
                    v.resolve(&self.nodes)?,
                    Rational::new(*num, *den),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::new(self.nodes.clone(), edges, self.source.resolve(&self.nodes)?)
    }

    pub fn of(g: &WeightedGraph) -> Self {
        Self {
            nodes: g.nodes.clone(),
            edges: g
                .edges
                .iter()
                .map(|&(u, v, w)| (NodeRef::Index(u), NodeRef::Index(v), *w.numer(), *w.denom()))
                .collect(),
            source: NodeRef::Index(g.source),
        }
    }
}

/// Max-Plus log-weights in value shorthand; `sequence` holds symbol labels
/// or indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HmmFile {
    pub states: Vec<String>,
    pub symbols: Vec<String>,
    pub initial: Vec<Json>,
    pub transition: Vec<Vec<Json>>,
    pub emission: Vec<Vec<Json>>,
    pub sequence: Vec<NodeRef>,
}

impl HmmFile {
    pub fn load(&self) -> Result<Hmm> {
        let s = Semiring::max_plus(false);
        let matrix = |m: &[Vec<Json>]| m.iter().map(|r| values_from_json(&s, r)).collect::<Result<Vec<_>>>();
        let h = Hmm {
            states: self.states.clone(),
            symbols: self.symbols.clone(),
            initial: values_from_json(&s, &self.initial)?,
            transition: matrix(&self.transition)?,
            emission: matrix(&self.emission)?,
            sequence: self
                .sequence
                .iter()
                .map(|o| o.resolve(&self.symbols))
                .collect::<Result<Vec<_>>>()?,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn of(h: &Hmm) -> Self {
        let s = Semiring::max_plus(false);
        let row = |r: &[Value]| r.iter().map(|&v| value_to_json(&s, v)).collect::<Vec<_>>();
        Self {
            states: h.states.clone(),
            symbols: h.symbols.clone(),
            initial: row(&h.initial),
            transition: h.transition.iter().map(|r| row(r)).collect(),
            emission: h.emission.iter().map(|r| row(r)).collect(),
            sequence: h.sequence.iter().map(|&o| NodeRef::Index(o)).collect(),
        }
    }
}

/// `{"semiring": spec, "p": [...], "q": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvFile {
    pub semiring: SemiringSpec,
    pub p: Vec<Json>,
    pub q: Vec<Json>,
}

impl ConvFile {
    pub fn load(&self) -> Result<(Semiring, Vec<Value>, Vec<Value>)> {
        let s = Semiring::try_from(&self.semiring)?;
        Ok((s, values_from_json(&s, &self.p)?, values_from_json(&s, &self.q)?))
    }
}
