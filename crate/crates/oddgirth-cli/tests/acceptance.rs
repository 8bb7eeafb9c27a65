//! Acceptance suite: ten end-to-end criteria covering the constructions,
//! the certificates, the exhaustive verifiers, and the sequence
//! arithmetic, each with its runtime budget. Run with
//! `cargo test --test acceptance -- --nocapture` to see one line per
//! criterion.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use oddgirth::colouring::read_colouring;
use oddgirth::girth::{self, Budget};
use oddgirth::product::{self, WitnessOptions};
use oddgirth::{builder, certify, schedule};

fn criterion(name: &str, time_limit: Option<Duration>, body: impl FnOnce() + UnwindSafe) {
    let started = Instant::now();
    let result = catch_unwind(body);
    let elapsed = started.elapsed();
    match result {
        Ok(()) => {
            if let Some(limit) = time_limit {
                if elapsed > limit {
                    println!("{name}: FAIL (took {elapsed:?}, limit {limit:?})");
                    panic!("{name} exceeded its runtime budget");
                }
            }
            println!("{name}: PASS ({elapsed:?})");
        }
        Err(cause) => {
            println!("{name}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn oddgirth_cmd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddgirth"))
        .args(args)
        .env("OGC_OUT_DIR", dir)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

#[test]
fn criterion_01_base_construction() {
    criterion(
        "acceptance 01 base construction",
        Some(Duration::from_secs(1)),
        || {
            let dir = tempfile::tempdir().unwrap();
            let out = oddgirth_cmd(dir.path(), &["construct", "base"]);
            assert_eq!(out.status.code(), Some(0));
            let c = read_colouring(
                &std::fs::read_to_string(dir.path().join("base.ogc")).unwrap(),
            )
            .unwrap();
            assert_eq!((c.n(), c.k()), (5, 2));
            let cert = certify::read_certificate(
                &std::fs::read_to_string(dir.path().join("base.ogcert")).unwrap(),
            )
            .unwrap();
            assert!(certify::verify_rrc(&c, &cert).unwrap().passed());
            let report = girth::colouring_odd_girth(&c);
            assert_eq!(report.per_colour, vec![(1, Some(5)), (2, Some(5))]);
        },
    );
}

#[test]
fn criterion_02_single_doubling_step() {
    criterion(
        "acceptance 02 doubling step to K9",
        Some(Duration::from_secs(1)),
        || {
            let step = builder::doubling_step(&builder::base_k5()).unwrap();
            assert_eq!((step.n(), step.k()), (9, 3));
            assert_eq!(step.signature(), vec![7, 5, 9]);
            assert!(certify::verify_rrc(step.colouring(), step.certificate())
                .unwrap()
                .passed());
            for (i, &bound) in step.signature().iter().enumerate() {
                let class = step.colouring().colour_class(i as u32 + 1).unwrap();
                let girth = girth::shortest_odd_cycle(&class).expect("classes have odd cycles");
                assert!(girth >= bound, "colour {} girth {girth} below {bound}", i + 1);
            }
        },
    );
}

#[test]
fn criterion_03_iterated_builds_to_k1025() {
    criterion(
        "acceptance 03 iterated builds, steps 0..8",
        Some(Duration::from_secs(120)),
        || {
            for steps in 0..=8u32 {
                let build = builder::build_iterated(steps).unwrap();
                let report =
                    certify::verify_rrc(build.colouring(), build.certificate()).unwrap();
                assert!(report.passed(), "steps {steps} certificate rejected");
                if build.n() <= 257 {
                    for (i, &bound) in build.signature().iter().enumerate() {
                        let class = build.colouring().colour_class(i as u32 + 1).unwrap();
                        let girth = girth::shortest_odd_cycle(&class);
                        assert!(
                            girth.is_none_or(|g| g >= bound),
                            "steps {steps} colour {} girth {girth:?} below {bound}",
                            i + 1
                        );
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_04_doubling_law() {
    criterion("acceptance 04 doubling law", None, || {
        for steps in 0..=8u32 {
            let build = builder::build_iterated(steps).unwrap();
            assert_eq!(
                build.n(),
                (1usize << (steps + 2)) + 1,
                "steps {steps}: wrong vertex count"
            );
        }
    });
}

#[test]
fn criterion_05_sequence_arithmetic() {
    criterion(
        "acceptance 05 sequence arithmetic",
        Some(Duration::from_secs(10)),
        || {
            assert_eq!(schedule::growth_index(2).unwrap(), 2);
            assert_eq!(schedule::growth_index(3).unwrap(), 6);
            assert_eq!(schedule::growth_index(4).unwrap(), 30);
            for t in 2..=7 {
                let check = schedule::check_min_growth(t).unwrap();
                assert!(
                    check.pass,
                    "t = {t}: min {} below bound {}",
                    check.min, check.bound
                );
            }
            let c = schedule::growth_constant(4).unwrap();
            assert_eq!(c.value(), 4.7685);
            assert!(c.lower > 4.7684 && c.upper < 4.7686);
        },
    );
}

#[test]
fn criterion_06_builder_and_sequence_agree() {
    criterion("acceptance 06 builder/sequence agreement", None, || {
        for j in 2..=13u64 {
            let build = builder::build_iterated(j as u32 - 2).unwrap();
            let mut sorted: Vec<u64> =
                build.signature().iter().map(|&r| r as u64).collect();
            sorted.sort_unstable();
            assert_eq!(
                sorted,
                schedule::signature_at(j).unwrap().to_vec(),
                "j = {j}"
            );
        }
    });
}

#[test]
fn criterion_07_product_members_keep_odd_girth() {
    criterion(
        "acceptance 07 product members keep odd girth",
        Some(Duration::from_secs(5)),
        || {
            let base = builder::base_k5();
            let a = base.colouring();
            for seed in 0..20u64 {
                let member = product::random_product_member(a, a, seed).unwrap();
                assert_eq!(member.n(), 25);
                let report = girth::colouring_odd_girth(&member);
                for (colour, girth) in report.per_colour {
                    assert!(
                        girth.is_none_or(|g| g >= 5),
                        "seed {seed} colour {colour} girth {girth:?}"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_08_headline_witness_k68() {
    criterion(
        "acceptance 08 headline witness on K68",
        Some(Duration::from_secs(300)),
        || {
            let dir = tempfile::tempdir().unwrap();
            let out = oddgirth_cmd(
                dir.path(),
                &[
                    "construct", "witness", "--r", "5", "--colours", "5", "--materialise",
                ],
            );
            assert_eq!(out.status.code(), Some(0));
            let c = read_colouring(
                &std::fs::read_to_string(dir.path().join("witness_r5_k5.ogc")).unwrap(),
            )
            .unwrap();
            assert_eq!((c.n(), c.k()), (68, 5));
            // exhaustive monochromatic C5 search over every colour
            assert!(girth::is_cr_free(&c, 5, &Budget::unlimited())
                .unwrap()
                .is_free());
            // strictly beyond the doubling baseline
            let baseline = product::doubling_baseline(5, 5).unwrap();
            assert_eq!(baseline, 65);
            assert!(68 > baseline - 1 && 68 > baseline);
            // growth-rate margin, reproduced to 3 decimals
            let report = product::ramsey_witness(5, 5, &WitnessOptions::default())
                .unwrap()
                .report;
            assert!(report.epsilon_bound > 0.0);
            assert_eq!((report.epsilon_bound * 1000.0).round(), 31.0);
        },
    );
}

#[test]
fn criterion_09_witness_scaling_reports() {
    criterion(
        "acceptance 09 witness scaling reports",
        Some(Duration::from_secs(1)),
        || {
            for k in 5..=13u32 {
                let report = product::ramsey_witness(5, k, &WitnessOptions::default())
                    .unwrap()
                    .report;
                let m = (k - 1) / 4;
                let c = (k - 1) % 4;
                assert_eq!((report.m, report.c, report.f), (m, c, 4), "k = {k}");
                assert_eq!(
                    report.n,
                    4u128 * (1u128 << c) * 17u128.pow(m),
                    "k = {k}: wrong vertex count"
                );
                assert!(m >= 1);
                assert!(
                    report.n > report.baseline,
                    "k = {k}: {} not above baseline {}",
                    report.n,
                    report.baseline
                );
            }
        },
    );
}

#[test]
fn criterion_10_doubling_freeness_and_bipartite_classes() {
    criterion(
        "acceptance 10 doubling freeness and bipartite classes",
        Some(Duration::from_secs(30)),
        || {
            let eg = product::erdos_graham_colouring(5, 3).unwrap();
            assert_eq!((eg.n(), eg.k()), (16, 3));
            assert!(girth::is_cr_free(&eg, 5, &Budget::unlimited())
                .unwrap()
                .is_free());
            for k in 1..=6u32 {
                let c = product::bipartite_colouring(k).unwrap();
                let report = girth::colouring_odd_girth(&c);
                assert_eq!(report.overall, None, "k = {k} has an odd cycle");
                assert!(report.per_colour.iter().all(|&(_, g)| g.is_none()));
            }
        },
    );
}
