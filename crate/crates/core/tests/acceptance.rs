//! Acceptance suite. Prints one PASS/FAIL line per criterion; the process
//! fails if a criterion fails that is not listed in `KNOWN_FAILURES`, or if a
//! listed one starts passing.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use idemkern::harness::{
    counterexample_search, enumerate_semimodules, run_suite, CheckId, Family, Hypothesis, SuiteReport, TrialConfig,
};
use idemkern::kernel::{apply_integral, max_kernel, KernelMatrix, Operator, Space};
use idemkern::semiring::{check_axioms, Rational, SemiringSpec};
use idemkern::{FiniteFunction, FunctionalSemimodule, PointSet, Semiring, SemiringOps, Value};
use rand::seq::IndexedRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const SAMPLED_TRIPLES: usize = 10_000;
const ROUND_TRIP_MATRICES: usize = 1_000;
const ROUND_TRIP_INPUTS: usize = 100;
const ROUND_TRIP_MAX_DIM: usize = 6;
const KERNEL_OPERATORS_PER_SOURCE: usize = 2;
const SUITE_OPERATORS: usize = 50;
const ORACLE_GRAPHS: usize = 100;
const ORACLE_MAX_NODES: usize = 50;
const ORACLE_HMMS: usize = 100;

/// Criteria expected to fail, with the reason recorded for each.
const KNOWN_FAILURES: &[(&str, &str)] = &[(
    "AC4",
    "b-linear functionals out of inf-closed but non-admissible chains over fuzzy-chain(2) \
     (smallest: V={00,10,11,21}, W=K) have no integral representation",
)];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn suite(checks: &[CheckId], semirings: &[Semiring], family: Family) -> SuiteReport {
    let config = TrialConfig {
        semirings: semirings.iter().map(|&s| SemiringSpec::from(s)).collect(),
        points: (1, 3),
        carrier_cap: 8,
        operators: SUITE_OPERATORS,
        target_points: 2,
        target_carrier_cap: 8,
        seed: SEED,
        exhaustive: true,
        family,
        checks: checks.to_vec(),
        ..TrialConfig::default()
    };
    run_suite(&config, false).expect("valid configuration")
}

fn small_semirings() -> Vec<Semiring> {
    vec![Semiring::boolean(), Semiring::fuzzy_chain(2).unwrap()]
}

fn summary_line(r: &SuiteReport) -> String {
    r.reports
        .iter()
        .map(|c| {
            let s = &c.summary;
            format!(
                "{}: {} instances, {} violations, {} skipped",
                s.check, s.instances, s.violations, s.skipped
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn ac1_semiring_laws() -> Verdict {
    let instances = [
        Semiring::boolean(),
        Semiring::max_plus(false),
        Semiring::max_plus(true),
        Semiring::min_plus(false),
        Semiring::min_plus(true),
        Semiring::fuzzy_chain(2).unwrap(),
        Semiring::fuzzy_chain(5).unwrap(),
        Semiring::saturated_nat(3).unwrap(),
        Semiring::saturated_nat(6).unwrap(),
    ];
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for s in instances {
        let r = check_axioms(&s, SAMPLED_TRIPLES, SEED);
        let enough = r.exhaustive || r.triples >= SAMPLED_TRIPLES;
        if !r.passed() || !enough {
            failures.push(format!(
                "{}: {:?}",
                r.semiring,
                r.violations.iter().map(|v| v.law).collect::<Vec<_>>()
            ));
        }
        parts.push(format!(
            "{} {}{}",
            r.semiring,
            r.triples,
            if r.exhaustive { " exhaustive" } else { " sampled" }
        ));
    }
    if failures.is_empty() {
        Verdict::new(true, parts.join(", "))
    } else {
        Verdict::new(false, failures.join("; "))
    }
}

fn random_max_plus(rng: &mut impl Rng) -> Option<Rational> {
    (rng.random_range(0..5) != 0).then(|| common::random_weight(rng, -20, 20))
}

fn to_value(q: Option<Rational>) -> Value {
    q.map_or(Value::Bot, Value::Fin)
}

/// `Af(y) = max_x f(x) + k(x, y)` on plain rationals.
fn max_plus_apply(k: &[Vec<Option<Rational>>], f: &[Option<Rational>]) -> Vec<Option<Rational>> {
    (0..k[0].len())
        .map(|y| (0..k.len()).filter_map(|x| Some(f[x]? + k[x][y]?)).max())
        .collect()
}

/// Least upper bound of `terms` among the elements of `w`.
fn carrier_lub(w: &FunctionalSemimodule, terms: &[FiniteFunction]) -> Option<FiniteFunction> {
    let s = w.semiring();
    let uppers: Vec<&FiniteFunction> = w
        .carrier()
        .iter()
        .filter(|u| terms.iter().all(|t| t.leq(s, u)))
        .collect();
    uppers
        .iter()
        .find(|u| uppers.iter().all(|v| u.leq(s, v)))
        .map(|u| (*u).clone())
}

fn kernel_reproduces(
    v: &FunctionalSemimodule,
    w: &FunctionalSemimodule,
    rows: &[&FiniteFunction],
    a: &Operator,
) -> bool {
    let s = v.semiring();
    v.carrier().iter().all(|f| {
        let terms: Vec<FiniteFunction> = rows.iter().enumerate().map(|(x, r)| r.scale(s, f.get(x))).collect();
        carrier_lub(w, &terms).as_ref() == Some(&a.apply(f).unwrap())
    })
}

fn ac2_max_kernel_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let s = Semiring::max_plus(false);
    for i in 0..ROUND_TRIP_MATRICES {
        let n = rng.random_range(1..=ROUND_TRIP_MAX_DIM);
        let m: Vec<Vec<Option<Rational>>> = (0..n)
            .map(|_| (0..n).map(|_| random_max_plus(&mut rng)).collect())
            .collect();
        let k =
            KernelMatrix::from_matrix(s, m.iter().map(|r| r.iter().map(|&q| to_value(q)).collect()).collect()).unwrap();
        let space = Space::full(s, PointSet::numbered("x", n));
        let a = Operator::from_kernel(space.clone(), space.clone(), k.clone()).unwrap();
        let mk = max_kernel(&a).unwrap();
        if !k.leq(&mk) {
            return Verdict::new(
                false,
                format!("matrix {i}: generating kernel not below the maximal kernel"),
            );
        }
        for _ in 0..ROUND_TRIP_INPUTS {
            let f: Vec<Option<Rational>> = (0..n).map(|_| random_max_plus(&mut rng)).collect();
            let got = apply_integral(
                &mk,
                &FiniteFunction::new(f.iter().map(|&q| to_value(q)).collect()),
                &space,
            )
            .unwrap();
            let want: Vec<Value> = max_plus_apply(&m, &f).into_iter().map(to_value).collect();
            if got.values() != want.as_slice() {
                return Verdict::new(false, format!("matrix {i}: round trip differs on {f:?}"));
            }
        }
    }

    let mut operators = 0usize;
    let mut kernels = 0usize;
    let mut valid = 0usize;
    for s in small_semirings() {
        let targets: Vec<Arc<FunctionalSemimodule>> = (1..=2)
            .flat_map(|d| enumerate_semimodules(s, d, 8, Family::All).unwrap())
            .collect();
        for dim in 1..=3 {
            for v in enumerate_semimodules(s, dim, 8, Family::All).unwrap() {
                for _ in 0..KERNEL_OPERATORS_PER_SOURCE {
                    let w = targets.choose(&mut rng).unwrap();
                    let rows: Vec<FiniteFunction> = (0..dim)
                        .map(|_| w.carrier().choose(&mut rng).unwrap().clone())
                        .collect();
                    let k0 = KernelMatrix::new(s, v.points().clone(), w.points().clone(), rows).unwrap();
                    let a = Operator::from_kernel(Space::Enumerated(v.clone()), Space::Enumerated(w.clone()), k0)
                        .unwrap()
                        .to_table()
                        .unwrap();
                    let mk = max_kernel(&a).unwrap();
                    let mk_rows: Vec<&FiniteFunction> = mk.row_elements().iter().collect();
                    if !kernel_reproduces(&v, w, &mk_rows, &a) {
                        return Verdict::new(
                            false,
                            format!(
                                "{} V={} W={}: maximal kernel is not a kernel",
                                s.name(),
                                v.render(),
                                w.render()
                            ),
                        );
                    }
                    operators += 1;
                    // Every kernel X -> W, odometer order.
                    let mut idx = vec![0usize; dim];
                    loop {
                        kernels += 1;
                        let rows: Vec<&FiniteFunction> = idx.iter().map(|&i| w.element(i)).collect();
                        if kernel_reproduces(&v, w, &rows, &a) {
                            valid += 1;
                            if rows.iter().zip(&mk_rows).any(|(r, m)| !r.leq(&s, m)) {
                                return Verdict::new(
                                    false,
                                    format!(
                                        "{} V={} W={}: valid kernel {:?} exceeds the maximal kernel {}",
                                        s.name(),
                                        v.render(),
                                        w.render(),
                                        rows.iter().map(|r| r.render(&s)).collect::<Vec<_>>(),
                                        mk.render()
                                    ),
                                );
                            }
                        }
                        let mut pos = 0;
                        while pos < dim {
                            idx[pos] += 1;
                            if idx[pos] < w.len() {
                                break;
                            }
                            idx[pos] = 0;
                            pos += 1;
                        }
                        if pos == dim {
                            break;
                        }
                    }
                }
            }
        }
    }
    Verdict::new(
        true,
        format!(
            "{ROUND_TRIP_MATRICES} max-plus matrices x {ROUND_TRIP_INPUTS} inputs exact; \
             {operators} enumerated operators, {kernels} kernels tried, {valid} valid, all below the maximal kernel"
        ),
    )
}

/// Boolean IFS in `K(X)` as bitmask sets: scalar closure means containing 0,
/// and every pair needs a least upper bound in the set.
fn boolean_ifs(dim: usize) -> Vec<Vec<u8>> {
    let size = 1usize << dim;
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << size) {
        let set: Vec<u8> = (0..size as u8).filter(|&e| mask >> e & 1 == 1).collect();
        if set.contains(&0) && set.iter().all(|&f| set.iter().all(|&g| bool_lub(&set, f, g).is_some())) {
            out.push(set);
        }
    }
    out
}

fn bool_lub(set: &[u8], f: u8, g: u8) -> Option<u8> {
    let uppers: Vec<u8> = set.iter().copied().filter(|&u| u & (f | g) == f | g).collect();
    uppers.iter().copied().find(|&u| uppers.iter().all(|&v| u & v == u))
}

fn bool_module(dim: usize, set: &[u8]) -> FunctionalSemimodule {
    let carrier = set
        .iter()
        .map(|&e| {
            FiniteFunction::new(
                (0..dim)
                    .map(|x| if e >> x & 1 == 1 { Value::int(1) } else { Value::Bot })
                    .collect(),
            )
        })
        .collect();
    FunctionalSemimodule::new(Semiring::boolean(), PointSet::numbered("x", dim), carrier).unwrap()
}

fn ac3_b_subsemimodule_criterion() -> Verdict {
    let report = suite(&[CheckId::Prop1], &[Semiring::boolean()], Family::All);
    let prop1 = &report.reports[0];
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for rec in &prop1.records {
        *by_dim.entry(rec.points).or_default() += 1;
    }
    for dim in 1..=3 {
        let oracle = boolean_ifs(dim);
        if by_dim.get(&dim).copied().unwrap_or(0) != oracle.len() {
            return Verdict::new(
                false,
                format!(
                    "|X|={dim}: suite saw {:?}, oracle counts {}",
                    by_dim.get(&dim),
                    oracle.len()
                ),
            );
        }
        for set in &oracle {
            let b_sub = set
                .iter()
                .all(|&f| set.iter().all(|&g| bool_lub(set, f, g) == Some(f | g)));
            let deltas_linear = (0..dim).all(|x| {
                set.iter().all(|&f| {
                    set.iter()
                        .all(|&g| bool_lub(set, f, g).unwrap() >> x & 1 == (f | g) >> x & 1)
                })
            });
            if b_sub != deltas_linear || bool_module(dim, set).is_b_subsemimodule() != b_sub {
                return Verdict::new(false, format!("oracle disagreement on {set:?}"));
            }
        }
    }
    let diamond = bool_module(3, &[0b000, 0b001, 0b010, 0b111]);
    let diamond_ok = !diamond.is_b_subsemimodule() && bool_lub(&[0, 1, 2, 7], 1, 2) == Some(7);
    let pass = prop1.summary.violations == 0 && diamond_ok;
    Verdict::new(
        pass,
        format!(
            "{}; counts per |X| {:?} match the subset oracle; {} is an IFS and not a b-subsemimodule: {diamond_ok}",
            summary_line(&report),
            by_dim,
            diamond.render()
        ),
    )
}

fn ac4_inf_closed_and_identity() -> Verdict {
    let report = suite(&[CheckId::Thm1, CheckId::Thm3a], &small_semirings(), Family::InfClosed);
    let thm1 = report.report(CheckId::Thm1).unwrap();
    let thm3a = report.report(CheckId::Thm3a).unwrap();
    let mut admissible_sources = 0;
    let first = thm1
        .violations()
        .next()
        .map(|r| format!("{} V={}", r.semiring, r.carrier));
    for rec in thm1.violations() {
        let w = rec.witness.as_ref().unwrap();
        let s = w.semiring().unwrap();
        if w.module.build(s).unwrap().is_admissible() {
            admissible_sources += 1;
        }
    }
    let pass = thm1.summary.violations == 0 && thm3a.summary.violations == 0;
    let mut detail = summary_line(&report);
    if let Some(first) = first {
        detail.push_str(&format!(
            "; first thm1 violation {first}; violating sources that are admissible: {admissible_sources}"
        ));
    }
    Verdict::new(pass, detail)
}

fn ac5_instance_checks() -> Verdict {
    let report = suite(
        &[CheckId::Prop2, CheckId::Thm2, CheckId::Prop4],
        &small_semirings(),
        Family::All,
    );
    let clean = report.total_violations() == 0;
    let search = counterexample_search(CheckId::Prop2, Hypothesis::BSubsemimodule, 200_000).unwrap();
    let witness_ok = search.found.as_ref().is_some_and(|c| {
        let v = c.witness.module.build(Semiring::boolean());
        v.is_ok_and(|v| *v == bool_module(3, &[0b000, 0b001, 0b010, 0b111])) && c.description.contains("f ↦ f(x3)")
    });
    // f -> f(x3) on the diamond: the internal join of 100 and 010 is 111.
    let (f, g) = (0b001u8, 0b010u8);
    let at_x3 = |e: u8| e >> 2 & 1;
    let oracle = bool_lub(&[0, 1, 2, 7], f, g).is_some_and(|j| at_x3(j) != at_x3(f) | at_x3(g));
    Verdict::new(
        clean && witness_ok && oracle,
        format!(
            "{}; search witness {}",
            summary_line(&report),
            search.found.map_or("none".into(), |c| format!(
                "{} {}",
                c.witness.module.carrier.len(),
                c.description
            ))
        ),
    )
}

fn ac6_application_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cycles = 0;
    for i in 0..ORACLE_GRAPHS {
        let g = common::random_graph(&mut rng, ORACLE_MAX_NODES, true);
        match (idemkern::apps::shortest_paths(&g), common::bellman_ford(&g)) {
            (Ok(r), Some(d)) if r.distances == d.iter().copied().map(common::as_value).collect::<Vec<_>>() => {}
            (Err(idemkern::Error::NegativeCycle(c)), None)
                if common::cycle_weight(&g, &c).is_some_and(|w| w < Rational::from_integer(0)) =>
            {
                cycles += 1
            }
            (got, want) => return Verdict::new(false, format!("graph {i}: {got:?} vs {want:?}")),
        }
    }
    for i in 0..ORACLE_HMMS {
        let h = common::random_hmm(&mut rng, 4, 6);
        let r = idemkern::apps::viterbi(&h).unwrap();
        let best = common::exhaustive_viterbi(&h);
        let path_ok = match &r.path {
            Some(p) => common::path_score(&h, p) == best,
            None => best.is_none(),
        };
        if r.score != common::as_value(best) || !path_ok {
            return Verdict::new(false, format!("hmm {i}: {:?} vs {best:?}", r.score));
        }
    }
    Verdict::new(
        true,
        format!("{ORACLE_GRAPHS} graphs match Bellman-Ford ({cycles} with negative cycles); {ORACLE_HMMS} HMMs match exhaustive search"),
    )
}

fn ac7_determinism() -> Verdict {
    let config = TrialConfig {
        semirings: vec![
            SemiringSpec::from(Semiring::fuzzy_chain(3).unwrap()),
            SemiringSpec::from(Semiring::saturated_nat(2).unwrap()),
        ],
        points: (2, 3),
        operators: 6,
        exhaustive: false,
        instances: 12,
        seed: SEED,
        ..TrialConfig::default()
    };
    let in_pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_suite(&config, false).unwrap().to_json_lines())
    };
    let one = in_pool(1);
    let four = in_pool(4);
    let dir = tempfile::TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, serde_json::to_string(&config).unwrap()).unwrap();
    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_idemkern"))
            .args(["suite", "run", cfg.to_str().unwrap(), "--seed", &SEED.to_string()])
            .output()
            .unwrap()
            .stdout
    };
    let (a, b) = (cli(), cli());
    let pass = one == four && a == b && a == one.as_bytes() && !one.is_empty();
    Verdict::new(
        pass,
        format!(
            "{} bytes; 1 vs 4 threads identical: {}; two CLI runs identical: {}",
            one.len(),
            one == four,
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: "AC1",
            title: "semiring laws and residuation",
            budget: Duration::from_secs(10),
            run: ac1_semiring_laws,
        },
        Criterion {
            id: "AC2",
            title: "maximal kernel round trip",
            budget: Duration::from_secs(60),
            run: ac2_max_kernel_round_trip,
        },
        Criterion {
            id: "AC3",
            title: "b-subsemimodule criterion, exhaustive boolean",
            budget: Duration::from_secs(30),
            run: ac3_b_subsemimodule_criterion,
        },
        Criterion {
            id: "AC4",
            title: "inf-closed kernel theorem and identity criterion",
            budget: Duration::from_secs(300),
            run: ac4_inf_closed_and_identity,
        },
        Criterion {
            id: "AC5",
            title: "integral functionals, nuclearity, δ-functionals",
            budget: Duration::from_secs(120),
            run: ac5_instance_checks,
        },
        Criterion {
            id: "AC6",
            title: "applications against classical oracles",
            budget: Duration::from_secs(30),
            run: ac6_application_oracles,
        },
        Criterion {
            id: "AC7",
            title: "byte-identical reports",
            budget: Duration::from_secs(60),
            run: ac7_determinism,
        },
    ];
    let mut unexpected = Vec::new();
    for c in &criteria {
        let started = Instant::now();
        let v = (c.run)();
        let elapsed = started.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = v.pass && in_time;
        println!(
            "{} {} {} ({:.1}s, limit {}s): {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            v.detail
        );
        if !in_time {
            println!("{} over its time limit", c.id);
        }
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == c.id);
        match (pass, known) {
            (false, Some((_, reason))) => println!("{} known failure: {reason}", c.id),
            (false, None) => unexpected.push(format!("{} failed", c.id)),
            (true, Some(_)) => unexpected.push(format!("{} passed but is listed as a known failure", c.id)),
            (true, None) => {}
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("acceptance: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
