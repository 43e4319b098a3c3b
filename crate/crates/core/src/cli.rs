//! Command implementations shared by the `idemkern` binary and the C ABI.
//! Each command takes file contents and returns both renderings of its
//! result plus an exit status.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::apps::{shortest_paths, tropical_convolution, viterbi};
use crate::error::{Error, Result};
use crate::harness::search::{counterexample_search_in, Hypothesis, SearchSpace};
use crate::harness::{CheckId, TrialConfig};
use crate::io::{
    value_to_json, values_to_json, ConvFile, GraphFile, HmmFile, KernelFile, OperatorFile, SemimoduleFile,
};
use crate::kernel::delta::{i_delta_with, WitnessRule};
use crate::kernel::integral::has_integral_representation;
use crate::kernel::operator::Operator;
use crate::semiring::{check_axioms, Corrupted, Corruption, Semiring, SemiringSpec};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[repr(i32)]
pub enum Status {
    Ok = 0,
    /// The question was answered in the negative.
    Negative = 1,
    InputError = 2,
    /// A checked statement failed under its hypotheses.
    InternalInconsistency = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct Output {
    /// Pretty JSON, or JSON lines for suite runs; newline terminated.
    pub json: String,
    pub text: String,
    pub status: Status,
}

impl Output {
    fn new(json: &Json, text: String, status: Status) -> Self {
        let mut j = serde_json::to_string_pretty(json).expect("JSON values serialize");
        j.push('\n');
        Self { json: j, text, status }
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Text => &self.text,
        }
    }
}

/// A semiring spec, optionally with a corrupted product for self-tests.
#[derive(Clone, Debug, Deserialize)]
pub struct AxiomsFile {
    #[serde(flatten)]
    pub semiring: SemiringSpec,
    #[serde(default)]
    pub corrupt: Option<Corruption>,
}

pub const DEFAULT_AXIOM_BUDGET: usize = 10_000;

pub fn axioms(spec: &str, budget: usize, seed: u64) -> Result<Output> {
    let file: AxiomsFile = serde_json::from_str(spec)?;
    let base = Semiring::try_from(&file.semiring)?;
    let report = match file.corrupt {
        None => check_axioms(&base, budget, seed),
        Some(c) => check_axioms(&Corrupted::new(base, c)?, budget, seed),
    };
    let fmt = |v| base.format(v);
    let violations: Vec<Json> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "law": v.law,
                "count": v.count,
                "witness": v.witness.iter().map(|&x| fmt(x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let j = json!({
        "semiring": report.semiring,
        "exhaustive": report.exhaustive,
        "triples": report.triples,
        "passed": report.passed(),
        "violations": violations,
    });
    let mut text = format!(
        "{}: {} triples ({}), {}\n",
        report.semiring,
        report.triples,
        if report.exhaustive { "exhaustive" } else { "sampled" },
        if report.passed() {
            "all laws hold"
        } else {
            "laws violated"
        }
    );
    for v in &report.violations {
        text.push_str(&format!(
            "  {}: {} failures, first at ({}, {}, {})\n",
            serde_json::to_value(v.law)?.as_str().unwrap_or_default(),
            v.count,
            fmt(v.witness[0]),
            fmt(v.witness[1]),
            fmt(v.witness[2])
        ));
    }
    let status = if report.passed() { Status::Ok } else { Status::Negative };
    Ok(Output::new(&j, text, status))
}

fn render_rows(k: &crate::kernel::integral::KernelMatrix) -> String {
    let s = k.semiring();
    (0..k.rows())
        .map(|x| {
            let vals: Vec<String> = k.row(x).values().iter().map(|&v| s.format(v)).collect();
            format!("  {}: {}\n", k.row_points().label(x), vals.join(" "))
        })
        .collect()
}

/// Maximal kernel of an operator, when it has an integral representation.
pub fn kernel_extract(operator: &str) -> Result<Output> {
    let op = OperatorFile::parse(operator)?.load()?;
    let verdict = has_integral_representation(&op)?;
    let s = *op.source().semiring();
    let kernel = KernelFile::of(&verdict.kernel);
    if verdict.integral {
        let j = serde_json::to_value(&kernel)?;
        let text = format!("integral; maximal kernel\n{}", render_rows(&verdict.kernel));
        return Ok(Output::new(&j, text, Status::Ok));
    }
    let mismatch = verdict.mismatch.as_ref().map(|f| values_to_json(&s, f.values()));
    let j = json!({
        "integral": false,
        "mismatch": mismatch,
        "residual_kernel": kernel,
    });
    let text = format!(
        "no integral representation; the residual kernel fails at {}\n",
        verdict.mismatch.as_ref().map(|f| f.render(&s)).unwrap_or_default()
    );
    Ok(Output::new(&j, text, Status::Negative))
}

/// Whether the kernel theorem holds in a semimodule, decided by integrality
/// of its identity.
pub fn kernel_decide(semimodule: &str) -> Result<Output> {
    let loaded = SemimoduleFile::parse(semimodule)?.load()?;
    let space = loaded.space.clone();
    let s = *space.semiring();
    let b_sub = space.is_b_subsemimodule();
    let verdict = has_integral_representation(&Operator::identity(space.clone()))?;
    let holds = verdict.integral;
    let basis = if b_sub {
        "identity integral; exact for a b-subsemimodule"
    } else {
        "identity integral; V is not a b-subsemimodule, so this is the identity criterion only"
    };
    let j = json!({
        "verdict": if holds { "holds" } else { "fails" },
        "b_subsemimodule": b_sub,
        "basis": basis,
        "kernel": KernelFile::of(&verdict.kernel),
        "mismatch": verdict.mismatch.as_ref().map(|f| values_to_json(&s, f.values())),
    });
    let mut text = format!(
        "kernel theorem {} in {} ({basis})\n",
        if holds { "holds" } else { "fails" },
        space.render()
    );
    if holds {
        text.push_str("maximal kernel of the identity\n");
        text.push_str(&render_rows(&verdict.kernel));
    } else if let Some(f) = &verdict.mismatch {
        text.push_str(&format!("the maximal kernel fails to reproduce {}\n", f.render(&s)));
    }
    Ok(Output::new(&j, text, if holds { Status::Ok } else { Status::Negative }))
}

/// Overrides applied on top of a trial configuration file.
#[derive(Clone, Debug, Default)]
pub struct SuiteOverrides {
    pub seed: Option<u64>,
    pub cap: Option<usize>,
    pub checks: Option<Vec<CheckId>>,
}

pub fn suite_run(config: Option<&str>, overrides: &SuiteOverrides, timing: bool) -> Result<Output> {
    let mut c: TrialConfig = match config {
        Some(text) => serde_json::from_str(text)?,
        None => TrialConfig::default(),
    };
    if let Some(seed) = overrides.seed {
        c.seed = seed;
    }
    if let Some(cap) = overrides.cap {
        c.carrier_cap = cap;
    }
    if let Some(checks) = &overrides.checks {
        c.checks = checks.clone();
    }
    let report = crate::harness::run_suite(&c, timing)?;
    let status = if report.total_violations() > 0 {
        Status::InternalInconsistency
    } else {
        Status::Ok
    };
    Ok(Output {
        json: report.to_json_lines(),
        text: report.render_text(),
        status,
    })
}

pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// Counterexample search; a hit with every hypothesis kept is a failed
/// statement.
pub fn search(statement: CheckId, dropped: Hypothesis, budget: usize, space: Option<&str>) -> Result<Output> {
    let space: SearchSpace = match space {
        Some(text) => serde_json::from_str(text)?,
        None => SearchSpace::default(),
    };
    let report = counterexample_search_in(&space, statement, dropped, budget)?;
    let status = if report.found.is_some() && dropped == Hypothesis::None {
        Status::InternalInconsistency
    } else {
        Status::Ok
    };
    Ok(Output::new(
        &serde_json::to_value(&report)?,
        report.render_text(),
        status,
    ))
}

/// Δ(V) and the evaluation map `i_Δ`.
pub fn delta_enum(semimodule: &str, cap: usize, rule: WitnessRule) -> Result<Output> {
    let loaded = SemimoduleFile::parse(semimodule)?.load()?;
    let v = loaded.space.require_module(cap.max(1))?;
    let s = *v.semiring();
    let rep = i_delta_with(&v, cap, rule)?;
    let d = &rep.delta;
    let fmt_vals = |vals: &[crate::semiring::Value]| vals.iter().map(|&x| s.format(x)).collect::<Vec<_>>();
    let deltas: Vec<Json> = d
        .deltas
        .iter()
        .enumerate()
        .map(|(i, f)| {
            json!({
                "point": rep.points.label(i),
                "values": fmt_vals(&f.values),
                "witness": values_to_json(&s, f.witness.values()),
            })
        })
        .collect();
    let point_map: Vec<Json> = rep
        .point_map()
        .iter()
        .enumerate()
        .map(|(x, p)| {
            json!({
                "point": v.points().label(x),
                "delta": p.map(|i| rep.points.label(i).to_string()),
            })
        })
        .collect();
    let image = SemimoduleFile::of_module(&rep.image);
    let image_integral = rep.image_identity_integral()?;
    let j = json!({
        "semimodule": SemimoduleFile::of_module(&v),
        "witness_rule": rule,
        "b_linear_functionals": d.functionals,
        "deltas": deltas,
        "rejected": d.rejected,
        "image": image,
        "injective": rep.injective,
        "join_preserving": rep.join_preserving,
        "order_reflecting": rep.order_reflecting,
        "embedding": rep.is_embedding(),
        "image_identity_integral": image_integral,
        "point_map": point_map,
        "pullback_recovers": rep.pullback_recovers(),
    });
    let mut text = format!(
        "V = {} ({} b-linear functionals, {} δ-functionals)\n",
        v.render(),
        d.functionals,
        d.deltas.len()
    );
    for (i, f) in d.deltas.iter().enumerate() {
        text.push_str(&format!(
            "  {}: values {} witness {}\n",
            rep.points.label(i),
            fmt_vals(&f.values).join(" "),
            f.witness.render(&s)
        ));
    }
    for r in &d.rejected {
        text.push_str(&format!("  rejected: values {}\n", r.values.join(" ")));
    }
    text.push_str(&format!(
        "i_Δ: image {} injective={} join-preserving={} order-reflecting={} embedding={} image identity integral={}\n",
        rep.image.render(),
        rep.injective,
        rep.join_preserving,
        rep.order_reflecting,
        rep.is_embedding(),
        image_integral
    ));
    for (x, p) in rep.point_map().iter().enumerate() {
        text.push_str(&format!(
            "  {} -> {}\n",
            v.points().label(x),
            p.map_or("none", |i| rep.points.label(i))
        ));
    }
    Ok(Output::new(&j, text, Status::Ok))
}

pub fn app_shortest_path(graph: &str) -> Result<Output> {
    let g: GraphFile = serde_json::from_str(graph)?;
    let g = g.load()?;
    let s = Semiring::min_plus(false);
    match shortest_paths(&g) {
        Ok(r) => {
            let dist: serde_json::Map<String, Json> = g
                .nodes
                .iter()
                .zip(&r.distances)
                .map(|(n, &d)| (n.clone(), value_to_json(&s, d)))
                .collect();
            let text = g
                .nodes
                .iter()
                .zip(&r.distances)
                .map(|(n, &d)| format!("{n}\t{}\n", s.format(d)))
                .collect::<String>();
            let j = json!({
                "source": g.nodes[g.source],
                "distances": dist,
                "iterations": r.iterations,
            });
            Ok(Output::new(&j, text, Status::Ok))
        }
        Err(Error::NegativeCycle(cycle)) => {
            let text = format!("negative cycle reachable from the source: {}\n", cycle.join(" -> "));
            Ok(Output::new(&json!({ "negative_cycle": cycle }), text, Status::Negative))
        }
        Err(e) => Err(e),
    }
}

pub fn app_viterbi(hmm: &str) -> Result<Output> {
    let file: HmmFile = serde_json::from_str(hmm)?;
    let h = file.load()?;
    let s = Semiring::max_plus(false);
    let r = viterbi(&h)?;
    let path = r
        .path
        .as_ref()
        .map(|p| p.iter().map(|&q| h.states[q].clone()).collect::<Vec<_>>());
    let j = json!({ "score": value_to_json(&s, r.score), "path": path });
    let text = match &path {
        Some(p) => format!("score {}\npath {}\n", s.format(r.score), p.join(" ")),
        None => "every state path has weight -inf\n".to_string(),
    };
    let status = if path.is_some() { Status::Ok } else { Status::Negative };
    Ok(Output::new(&j, text, status))
}

pub fn app_conv(conv: &str) -> Result<Output> {
    let file: ConvFile = serde_json::from_str(conv)?;
    let (s, p, q) = file.load()?;
    let r = tropical_convolution(s, &p, &q)?;
    let text = format!("{}\n", r.iter().map(|&v| s.format(v)).collect::<Vec<_>>().join(" "));
    Ok(Output::new(
        &json!({ "result": values_to_json(&s, &r) }),
        text,
        Status::Ok,
    ))
}

/// Parses a comma-separated check list.
pub fn parse_checks(list: &str) -> Result<Vec<CheckId>> {
    list.split(',').map(|c| c.trim().parse()).collect()
}
