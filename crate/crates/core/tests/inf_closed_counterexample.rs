//! An inf-closed source, an admissible target and a b-linear functional with
//! no integral representation. The oracle below works on raw levels of the
//! three-element fuzzy chain and searches every kernel by brute force.

use idemkern::kernel::{has_integral_representation, is_b_linear, Operator, Space};
use idemkern::{FiniteFunction, FunctionalSemimodule, PointSet, Semiring, Value};

type Pt = [u8; 2];

const V: [Pt; 4] = [[0, 0], [1, 0], [1, 1], [2, 1]];
/// The functional, listed in the order of `V`.
const PHI: [u8; 4] = [0, 0, 1, 2];
const LEVELS: [u8; 3] = [0, 1, 2];

fn phi(f: Pt) -> u8 {
    PHI[V.iter().position(|&g| g == f).expect("closed carrier")]
}

fn join(f: Pt, g: Pt) -> Pt {
    // V is a chain, so its internal join is the pointwise one.
    [f[0].max(g[0]), f[1].max(g[1])]
}

#[test]
fn oracle_confirms_the_hypotheses() {
    for &f in &V {
        for &g in &V {
            assert!(V.contains(&join(f, g)));
            assert!(V.contains(&[f[0].min(g[0]), f[1].min(g[1])]));
            assert_eq!(phi(join(f, g)), phi(f).max(phi(g)));
        }
        for l in LEVELS {
            let scaled = [l.min(f[0]), l.min(f[1])];
            assert!(V.contains(&scaled));
            assert_eq!(phi(scaled), l.min(phi(f)));
        }
    }
    // The chain {0,1,2} on one point is admissible: g = 2 works everywhere.
    for w in LEVELS {
        assert!(w.min(2) <= w);
    }
}

#[test]
fn oracle_finds_no_kernel() {
    for k0 in LEVELS {
        for k1 in LEVELS {
            let reproduces = V.iter().all(|&f| f[0].min(k0).max(f[1].min(k1)) == phi(f));
            assert!(!reproduces, "kernel ({k0}, {k1}) represents the functional");
        }
    }
}

#[test]
fn library_agrees_with_the_oracle() {
    let s = Semiring::fuzzy_chain(2).unwrap();
    let level = |l: u8| if l == 0 { Value::Bot } else { Value::int(l as i64) };
    let carrier: Vec<FiniteFunction> = V
        .iter()
        .map(|f| FiniteFunction::new(f.iter().map(|&l| level(l)).collect()))
        .collect();
    let v = FunctionalSemimodule::new(s, PointSet::numbered("x", 2), carrier.clone()).unwrap();
    assert!(v.is_inf_closed());
    let w = FunctionalSemimodule::full(s, PointSet::numbered("y", 1), 16).unwrap();
    assert!(w.is_admissible());
    let images = PHI.iter().map(|&l| FiniteFunction::new(vec![level(l)])).collect();
    let src = Space::enumerated(v);
    let a = Operator::table(src, Space::enumerated(w), images).unwrap();
    assert!(is_b_linear(&a).unwrap());
    let verdict = has_integral_representation(&a).unwrap();
    assert!(!verdict.integral);
    assert!(verdict.mismatch.is_some());
}
