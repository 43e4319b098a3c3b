use std::sync::Arc;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{functionals_of, judge, Analysis, Probe};
use super::config::{CheckId, TrialConfig};
use super::families::{enumerate_semimodules, gen_b_linear_operator, gen_semimodule, random_operator, Family, GenMode};
use super::report::{CheckReport, InstanceRecord, SuiteReport};
use crate::error::Result;
use crate::kernel::operator::Operator;
use crate::semimodule::FunctionalSemimodule;
use crate::semiring::{Semiring, SemiringOps};

/// SplitMix64 finalizer; decorrelates sub-seeds derived from small integers.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn sub_seed(seed: u64, stream: u64, index: u64) -> u64 {
    mix(seed ^ mix(stream ^ mix(index)))
}

/// Target semimodules for one semiring, with their functionals.
pub struct TargetPool {
    pub modules: Vec<Arc<FunctionalSemimodule>>,
    pub functionals: Vec<Arc<Vec<Operator>>>,
    pub admissible: Vec<usize>,
}

impl TargetPool {
    pub fn build(s: Semiring, max_points: usize, cap: usize) -> Result<Self> {
        let mut modules = Vec::new();
        for dim in 1..=max_points {
            modules.extend(enumerate_semimodules(s, dim, cap, Family::All)?);
        }
        let functionals = modules
            .iter()
            .map(|w| functionals_of(w, cap))
            .collect::<Result<Vec<_>>>()?;
        let admissible = (0..modules.len()).filter(|&i| modules[i].is_admissible()).collect();
        Ok(Self {
            modules,
            functionals,
            admissible,
        })
    }
}

/// One source semimodule of the run.
pub struct SuiteInstance {
    pub index: usize,
    pub semiring: usize,
    pub module: Arc<FunctionalSemimodule>,
    pub seed: u64,
}

/// The instance stream of a configuration, in a fixed order, plus the
/// number of random instances that could not be generated.
pub fn instances(config: &TrialConfig, semirings: &[Semiring]) -> Result<(Vec<SuiteInstance>, usize)> {
    let mut out = Vec::new();
    let mut skips = 0;
    for (si, &s) in semirings.iter().enumerate() {
        for dim in config.points.0..=config.points.1 {
            let modules: Vec<Arc<FunctionalSemimodule>> = if config.exhaustive {
                enumerate_semimodules(s, dim, config.carrier_cap, config.family)?
            } else {
                let mut found: Vec<Arc<FunctionalSemimodule>> = Vec::new();
                let stream = (si as u64) << 32 | dim as u64;
                for i in 0..config.instances {
                    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, stream, i as u64));
                    let mode = match (config.family, i % 2) {
                        (Family::InfClosed, _) => GenMode::InfClosed,
                        (Family::All, 0) => GenMode::Pointwise,
                        (Family::All, _) => GenMode::Loose,
                    };
                    match gen_semimodule(s, dim, mode, config.carrier_cap, &mut rng) {
                        Ok(v) if !found.iter().any(|u| **u == *v) => found.push(v),
                        Ok(_) => {}
                        Err(_) => skips += 1,
                    }
                }
                found
            };
            for module in modules {
                let index = out.len();
                out.push(SuiteInstance {
                    index,
                    semiring: si,
                    module,
                    seed: sub_seed(config.seed, u64::MAX, index as u64),
                });
            }
        }
    }
    Ok((out, skips))
}

/// Operators probing one instance: maps out of it into arbitrary targets,
/// into admissible targets, and maps into it from arbitrary sources.
pub fn probes(config: &TrialConfig, pool: &TargetPool, inst: &SuiteInstance, checks: &[CheckId]) -> Vec<Probe> {
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
    let v = &inst.module;
    let mut out = Vec::new();
    let need_any = checks.iter().any(|c| {
        matches!(
            c,
            CheckId::Thm2 | CheckId::Prop3 | CheckId::Corollary | CheckId::Thm3 | CheckId::Thm3a
        )
    });
    let need_adm = checks.contains(&CheckId::Thm1) && v.is_inf_closed();
    let need_in = checks.contains(&CheckId::Prop3);
    let all: Vec<usize> = (0..pool.modules.len()).collect();
    let generate = |targets: &[usize], into: bool, rng: &mut ChaCha8Rng, out: &mut Vec<Probe>| {
        if targets.is_empty() {
            return;
        }
        for i in 0..config.operators {
            let t = targets[rng.random_range(0..targets.len())];
            let w = &pool.modules[t];
            let (src, dst) = if into { (w, v) } else { (v, w) };
            let op = if i % 2 == 0 {
                gen_b_linear_operator(src, dst, rng)
            } else {
                random_operator(src, dst, rng)
            };
            if let Ok(op) = op {
                out.push(Probe {
                    op,
                    source_functionals: into.then(|| pool.functionals[t].clone()),
                });
            }
        }
    };
    if need_any {
        generate(&all, false, &mut rng, &mut out);
    }
    if need_adm {
        generate(&pool.admissible, false, &mut rng, &mut out);
    }
    if need_in {
        generate(&all, true, &mut rng, &mut out);
    }
    out
}

fn run_instance(
    config: &TrialConfig,
    semirings: &[Semiring],
    pool: &TargetPool,
    inst: &SuiteInstance,
    checks: &[CheckId],
    timing: bool,
) -> Vec<(InstanceRecord, u64)> {
    let started = Instant::now();
    let probes = if checks.iter().any(|c| c.uses_operators()) {
        probes(config, pool, inst, checks)
    } else {
        Vec::new()
    };
    let setup = started.elapsed().as_micros() as u64;
    let analysis = Analysis::new(inst.module.clone(), config.carrier_cap);
    let s = semirings[inst.semiring];
    checks
        .iter()
        .map(|&check| {
            let t = Instant::now();
            let outcome = judge(check, &analysis, &probes);
            let micros = if timing {
                t.elapsed().as_micros() as u64 + if check.uses_operators() { setup / 6 } else { 0 }
            } else {
                0
            };
            (
                InstanceRecord {
                    check,
                    index: inst.index,
                    semiring: s.name(),
                    points: inst.module.dim(),
                    carrier: inst.module.render(),
                    status: outcome.status,
                    detail: outcome.detail,
                    witness: outcome.witness,
                },
                micros,
            )
        })
        .collect()
}

/// Runs every selected check over the configured instance stream. Results do
/// not depend on thread scheduling; `timing` adds per-check elapsed time.
pub fn run_suite(config: &TrialConfig, timing: bool) -> Result<SuiteReport> {
    let semirings = config.validate()?;
    let checks = config.selected_checks();
    let pools = semirings
        .iter()
        .map(|&s| TargetPool::build(s, config.target_points, config.target_carrier_cap))
        .collect::<Result<Vec<_>>>()?;
    let (insts, generation_skips) = instances(config, &semirings)?;
    let results: Vec<Vec<(InstanceRecord, u64)>> = insts
        .par_iter()
        .map(|inst| run_instance(config, &semirings, &pools[inst.semiring], inst, &checks, timing))
        .collect();
    let reports = checks
        .iter()
        .enumerate()
        .map(|(ci, &check)| {
            let mut micros = 0u64;
            let records = results
                .iter()
                .map(|per| {
                    micros += per[ci].1;
                    per[ci].0.clone()
                })
                .collect();
            CheckReport::new(check, records, timing.then_some(micros / 1000))
        })
        .collect();
    Ok(SuiteReport {
        reports,
        generation_skips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::checks::replay;
    use crate::harness::report::Status;
    use crate::semiring::SemiringSpec;

    fn small() -> TrialConfig {
        TrialConfig {
            semirings: vec![SemiringSpec::from(Semiring::boolean())],
            points: (1, 2),
            operators: 6,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn small_boolean_suite_is_clean_and_deterministic() {
        let c = small();
        let a = run_suite(&c, false).unwrap();
        assert_eq!(a.total_violations(), 0, "{}", a.render_text());
        let b = run_suite(&c, false).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        // 2 + 7 semimodules.
        assert_eq!(a.reports[0].summary.instances, 9);
    }

    #[test]
    fn sampling_mode_generates_distinct_instances() {
        let c = TrialConfig {
            exhaustive: false,
            instances: 10,
            points: (3, 3),
            checks: vec![CheckId::Prop1, CheckId::Thm3a],
            ..small()
        };
        let r = run_suite(&c, true).unwrap();
        assert_eq!(r.total_violations(), 0);
        assert!(r.reports[0].summary.wall_ms.is_some());
        for rec in &r.reports[0].records {
            assert_ne!(rec.status, Status::Violation);
        }
    }

    #[test]
    fn observations_replay() {
        let c = TrialConfig {
            points: (3, 3),
            checks: vec![CheckId::Prop5, CheckId::Thm3a],
            ..small()
        };
        let r = run_suite(&c, false).unwrap();
        let obs: Vec<_> = r
            .reports
            .iter()
            .flat_map(|rep| rep.records.iter())
            .filter(|rec| rec.status == Status::Observation)
            .collect();
        assert!(!obs.is_empty());
        for rec in obs {
            let w = rec.witness.as_ref().unwrap();
            assert_eq!(replay(rec.check, w, c.carrier_cap).unwrap().status, Status::Observation);
        }
    }
}
