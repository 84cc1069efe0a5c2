//! Acceptance gate: one test per shipping criterion. Each test name is the
//! pass/fail line for its criterion; a clean run of this target means the
//! library meets its contract end to end.

use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropcrys::fundrep::{basis_labels, build_v1, build_v2, closed_form_x, closed_form_y};
use tropcrys::geom::{self, geom_e0_via_conjugation, verify_suite, Suite, TorusPoint};
use tropcrys::pcrystal::{self, enumerate, perfectness_check};
use tropcrys::scalar::random_pos_rational;
use tropcrys::udiso::{verify_iso, verify_ud_mechanical, Region};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropcrys"))
}

#[test]
fn c01_chart_vectors_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0001);
    for n in 2..=6 {
        for _ in 0..200 {
            let x = TorusPoint::random_positive(n, &mut rng);
            assert_eq!(
                build_v1(&x).unwrap(),
                closed_form_x(&x).unwrap(),
                "first chart at n={n}, x={}",
                x.text()
            );
            assert_eq!(
                build_v2(&x).unwrap(),
                closed_form_y(&x).unwrap(),
                "second chart at n={n}, y={}",
                x.text()
            );
        }
        assert_eq!(basis_labels(n).len(), n * (n + 1) / 2);
    }
}

#[test]
fn c02_chart_change_matches_vectors_and_round_trips() {
    for n in 2..=6 {
        let report = verify_suite(Suite::Lemma41, n, 200, 0xACCE_0002).unwrap();
        assert!(report.passed(), "n={n}: {:?}", report.failures);
    }
}

#[test]
fn c03_action_axioms_hold_on_random_points() {
    for n in 2..=5 {
        for suite in [Suite::Axioms, Suite::Eq43, Suite::SigmaCommute] {
            let report = verify_suite(suite, n, 100, 0xACCE_0003).unwrap();
            assert!(
                report.passed(),
                "suite {} at n={n}: {:?}",
                report.suite,
                report.failures
            );
        }
    }
}

#[test]
fn c04_zero_action_closed_form_equals_conjugation_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);
    for n in 2..=5 {
        for _ in 0..100 {
            let x = TorusPoint::random_positive(n, &mut rng);
            let c = random_pos_rational(&mut rng);
            assert_eq!(
                geom::geom_e(0, &c, &x).unwrap(),
                geom_e0_via_conjugation(&c, &x).unwrap(),
                "n={n}, c={}, x={}",
                tropcrys::scalar::rational_to_text(&c),
                x.text()
            );
        }
    }
}

#[test]
fn c05_mechanical_tropicalization_matches_lattice_formulas() {
    let cases = [
        (2, Region::Box { radius: 4 }),
        (3, Region::Box { radius: 3 }),
        (4, Region::Sample { count: 10_000, seed: 0xACCE_0005 }),
        (5, Region::Sample { count: 10_000, seed: 0xACCE_0005 }),
    ];
    for (n, region) in cases {
        let report = verify_ud_mechanical(n, region).unwrap();
        assert!(
            report.passed(),
            "n={n} over {}: {:?}",
            report.region,
            report.failures
        );
        assert_eq!(report.failure_count, 0);
    }
}

#[test]
fn c06_lattice_chart_is_a_crystal_isomorphism() {
    let cases = [
        (2, Region::Box { radius: 4 }),
        (3, Region::Box { radius: 3 }),
        (4, Region::Sample { count: 10_000, seed: 0xACCE_0006 }),
        (5, Region::Sample { count: 10_000, seed: 0xACCE_0006 }),
    ];
    for (n, region) in cases {
        let report = verify_iso(n, region).unwrap();
        assert!(
            report.passed(),
            "n={n} over {}: {:?}",
            report.region,
            report.failures
        );
    }
}

#[test]
fn c07_crystal_axioms_exhaustive_at_desk_scale() {
    for (n, l) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let violations = pcrystal::axiom_scan(n, l).unwrap();
        assert!(violations.is_empty(), "(n,l)=({n},{l}): {violations:?}");
    }
}

#[test]
fn c08_minimal_elements_biject_onto_dominant_tuples() {
    for (n, l, expected) in [(2, 1, 3), (2, 2, 6), (3, 1, 4), (3, 2, 10)] {
        let report = perfectness_check(n, l).unwrap();
        assert!(report.passed(), "(n,l)=({n},{l}): {:?}", report.failures);
        assert_eq!(report.minimal_count, expected, "(n,l)=({n},{l})");
        assert!(report.eps_bijective && report.phi_bijective);
    }
}

#[test]
fn c09_level_one_cardinalities_match_the_binomial() {
    for (n, expected) in [(2, 3), (3, 6), (4, 10), (5, 15)] {
        assert_eq!(enumerate(n, 1).unwrap().len(), expected, "n={n}");
    }
}

#[test]
fn c10_cli_output_is_byte_identical_across_runs() {
    let runs: Vec<_> = (0..3)
        .map(|_| {
            let out = exe()
                .args([
                    "geom", "verify", "--suite", "axioms", "--n", "3", "--trials", "20",
                    "--seed", "99",
                ])
                .output()
                .expect("binary runs");
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);

    let runs: Vec<_> = (0..3)
        .map(|_| {
            let out = exe()
                .args(["ud", "check", "--suite", "iso", "--n", "4", "--trials", "200", "--seed", "5"])
                .output()
                .expect("binary runs");
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);

    let runs: Vec<_> = (0..3)
        .map(|_| {
            let out = exe()
                .args(["crystal", "graph", "--n", "3", "--l", "2", "--format", "dot"])
                .output()
                .expect("binary runs");
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
}
