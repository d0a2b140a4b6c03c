//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime. Every comparison is exact symbolic equality after
//! canonicalization; no tolerances apply anywhere.
//!
//! Criteria:
//! 1. toda(3) regression through `casimir construct` (six brackets, f, g).
//! 2. volterra_companion(3) regression (six brackets, g = 0, Poisson,
//!    Casimirs verified).
//! 3. gl3 odd-case regression (15 brackets, f, g, suspension agreement).
//! 4. Dirac property suite on Darboux charts.
//! 5. Nonholonomic dichotomy (holonomic passes Jacobi, nonholonomic fails,
//!    kernel annihilation both ways, 20 randomized bracket pairs agree).
//! 6. Operator identity suites (>= 100 random tensors per identity, dims 4
//!    and 6).
//! 7. Equivalence oracle across criteria 1-5 constructions.
//! 8. The rank-2 Jacobian reduction on R^3 and the k = 1 dispatch.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use casimir_core::cosymplectic::OddProblem;
use casimir_core::dirac::DiracData;
use casimir_core::even::{bracket_with_kernel, jacobian_bracket, EvenProblem};
use casimir_core::exterior::{bivector_bracket, interior_by_multivector, Form};
use casimir_core::fixtures::{self, FixtureProblem};
use casimir_core::nonholonomic::NonholonomicData;
use casimir_core::volume::{is_poisson, VolumeStructure};
use casimir_core::{AlmostSymplectic, Chart, Scalar};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
}

fn pass(criterion: usize, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
    println!("criterion {criterion}: PASS ({what}; {} ms)", elapsed.as_millis());
}

/// Runs `fixture <name>` then `construct --format machine` on the emitted
/// file, returning the parsed result document.
fn construct_fixture(name: &str, dir: &std::path::Path) -> serde_json::Value {
    let status = binary().args(["fixture", name, "--out"]).arg(dir).status().unwrap();
    assert!(status.success(), "fixture {name} failed");
    let stem = name.replace(['(', ')'], "_");
    let stem = stem.trim_matches('_');
    let problem: PathBuf = dir.join(format!("{stem}.toml"));
    let output = binary()
        .args(["construct"])
        .arg(&problem)
        .args(["--format", "machine"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "construct {name} exited with {:?}\n{}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout)
    );
    serde_json::from_slice(&output.stdout).unwrap()
}

fn table_of(doc: &serde_json::Value) -> Vec<(String, String, String)> {
    doc["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            (
                row["left"].as_str().unwrap().to_string(),
                row["right"].as_str().unwrap().to_string(),
                row["value"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

fn assert_exact_table(chart: &Chart, actual: &[(String, String, String)], expected: &[(&str, &str, &str)]) {
    assert_eq!(actual.len(), expected.len(), "table size: {actual:?}");
    for ((al, ar, av), (el, er, ev)) in actual.iter().zip(expected) {
        assert_eq!((al.as_str(), ar.as_str()), (*el, *er));
        assert_eq!(
            chart.parse(av).unwrap(),
            chart.parse(ev).unwrap(),
            "value at ({el}, {er}): got {av}, want {ev}"
        );
    }
}

fn all_checks_passed(doc: &serde_json::Value) {
    assert!(doc["ok"].as_bool().unwrap(), "checks failed: {}", doc["checks"]);
}

#[test]
fn criterion_1_toda_regression() {
    let started = Instant::now();
    let dir = std::env::temp_dir().join("casimir-acceptance-toda");
    let _ = std::fs::remove_dir_all(&dir);
    let doc = construct_fixture("toda(3)", &dir);
    let chart = Chart::new(["a1", "a2", "a3", "b1", "b2", "b3"]).unwrap();
    assert_exact_table(
        &chart,
        &table_of(&doc),
        &[
            ("a1", "b1", "a1"),
            ("a1", "b2", "-a1"),
            ("a2", "b2", "a2"),
            ("a2", "b3", "-a2"),
            ("a3", "b1", "-a3"),
            ("a3", "b3", "a3"),
        ],
    );
    assert_eq!(
        chart.parse(doc["f"].as_str().unwrap()).unwrap(),
        chart.parse("-(a1*a2 + a2*a3 + a1*a3)").unwrap()
    );
    assert_eq!(
        chart.parse(doc["g"].as_str().unwrap()).unwrap(),
        chart.parse("-(a1 + a2 + a3)").unwrap()
    );
    all_checks_passed(&doc);
    pass(1, "toda(3) six brackets, f, g exact via construct", started, Duration::from_secs(10));
}

#[test]
fn criterion_2_volterra_regression() {
    let started = Instant::now();
    let dir = std::env::temp_dir().join("casimir-acceptance-volterra");
    let _ = std::fs::remove_dir_all(&dir);
    let doc = construct_fixture("volterra_companion(3)", &dir);
    let chart = Chart::new(["a1", "a2", "a3", "b1", "b2", "b3"]).unwrap();
    assert_exact_table(
        &chart,
        &table_of(&doc),
        &[
            ("a1", "a2", "a1*a2"),
            ("a1", "a3", "-a1*a3"),
            ("a2", "a3", "a2*a3"),
            ("b1", "b2", "1"),
            ("b1", "b3", "-1"),
            ("b2", "b3", "1"),
        ],
    );
    assert_eq!(doc["g"].as_str().unwrap(), "0");
    // the full check level verified the Jacobi identity and both Casimirs
    let checks = doc["checks"].as_array().unwrap();
    let passed = |needle: &str| {
        checks
            .iter()
            .any(|c| c["name"].as_str().unwrap().contains(needle) && c["passed"].as_bool().unwrap())
    };
    assert!(passed("jacobi identity"));
    assert!(passed("casimir b1 + b2 + b3"));
    assert!(passed("casimir a1*a2*a3"));
    all_checks_passed(&doc);
    pass(2, "volterra companion table, g = 0, Poisson, Casimirs", started, Duration::from_secs(10));
}

#[test]
fn criterion_3_gl3_regression() {
    let started = Instant::now();
    let dir = std::env::temp_dir().join("casimir-acceptance-gl3");
    let _ = std::fs::remove_dir_all(&dir);
    let doc = construct_fixture("gl3", &dir);
    let chart = Chart::new(["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3"]).unwrap();
    assert_exact_table(
        &chart,
        &table_of(&doc),
        &[
            ("x1", "y1", "-y1"),
            ("x1", "y3", "y3"),
            ("x1", "z1", "-z1"),
            ("x1", "z2", "z2"),
            ("x2", "y1", "y1"),
            ("x2", "y2", "-y2"),
            ("x2", "z2", "-z2"),
            ("x2", "z3", "z3"),
            ("x3", "y2", "y2"),
            ("x3", "y3", "-y3"),
            ("x3", "z1", "z1"),
            ("x3", "z3", "-z3"),
            ("y1", "y2", "-z1"),
            ("y1", "y3", "z3"),
            ("y2", "y3", "-z2"),
        ],
    );
    assert_eq!(
        chart.parse(doc["g"].as_str().unwrap()).unwrap(),
        chart.parse("y1 + y2 + y3").unwrap()
    );
    all_checks_passed(&doc);

    // factor bookkeeping: the odd-route factor is the negative of the
    // suspended one, and the displayed value lives on the suspension
    let fixture = fixtures::gl3().unwrap();
    let FixtureProblem::Odd(problem) = &fixture.problem else { panic!() };
    let suspended = problem.suspend().unwrap();
    let chart10 = suspended.chart().clone();
    assert_eq!(
        *suspended.f(),
        chart10.parse("-z1*z2^2 - z1^2*z2 - z1*z2*z3").unwrap()
    );
    assert_eq!(
        chart.parse(doc["f"].as_str().unwrap()).unwrap().extend_vars(10),
        suspended.f().neg_ref()
    );
    // suspension route yields identical values on every nonzero pair
    for (i, j, value) in fixture.bracket_table().unwrap() {
        let lifted = suspended
            .bracket(&Scalar::var(10, i), &Scalar::var(10, j))
            .unwrap();
        assert_eq!(lifted, value.extend_vars(10), "suspension differs at ({i}, {j})");
    }
    pass(3, "gl3 15 brackets, f, g, suspension agreement", started, Duration::from_secs(60));
}

fn darboux(n: usize) -> (Chart, AlmostSymplectic) {
    let chart = Chart::new(
        (1..=n)
            .map(|i| format!("q{i}"))
            .chain((1..=n).map(|i| format!("p{i}")))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let s = AlmostSymplectic::standard(&chart).unwrap();
    (chart, s)
}

fn dirac_property_bundle(data: &DiracData, random_seed: u64) {
    let s = data.structure();
    let chart = s.chart().clone();
    let m = chart.dim();
    let k = data.k();
    let sigma = data.sigma().unwrap();
    // g = -k exactly
    let g = s.contract_lambda0(&sigma).unwrap().as_scalar().unwrap();
    assert_eq!(g, Scalar::from_int(m, -(k as i64)));
    // delta sigma = -(1/f) i_{X_f} sigma exactly
    let f = casimir_core::even::casimir_factor(s, data.constraints()).unwrap();
    let x_f = s.hamiltonian_field(&f).unwrap();
    let lhs = s.codifferential(&sigma).unwrap();
    let rhs = interior_by_multivector(&x_f, &sigma)
        .unwrap()
        .scale(&f.inverse().unwrap().neg_ref());
    assert_eq!(lhs, rhs);
    // the complementary condition holds
    assert!(s.check_complementary(&sigma).unwrap());
    // constraints are Casimirs against random functions, Jacobi passes
    let lambda = data.bivector().unwrap();
    assert!(is_poisson(&lambda).unwrap());
    let mut rng = casimir_core::random::rng(random_seed);
    for constraint in data.constraints() {
        for _ in 0..5 {
            let h = casimir_core::random::rational(&mut rng, m);
            assert!(data.bracket(constraint, &h).unwrap().is_zero());
            assert!(bivector_bracket(&lambda, constraint, &h).unwrap().is_zero());
        }
    }
}

#[test]
fn criterion_4_dirac_property_suite() {
    let started = Instant::now();
    // R^4, constraints (q2, p2): the classical plane reduction
    let (c4, s4) = darboux(2);
    let data4 = DiracData::new(s4.clone(), vec![c4.var("q2").unwrap(), c4.var("p2").unwrap()]).unwrap();
    dirac_property_bundle(&data4, 41);
    // R^4 with nonconstant constraint bracket, so the delta-sigma identity
    // is exercised away from the constant case
    let data4b = DiracData::new(
        s4,
        vec![c4.parse("q2 - q1^2").unwrap(), c4.parse("p1 + p2").unwrap()],
    )
    .unwrap();
    dirac_property_bundle(&data4b, 43);
    // R^6, constraints (q3, p3), k = 2
    let (c6, s6) = darboux(3);
    let data6 = DiracData::new(s6, vec![c6.var("q3").unwrap(), c6.var("p3").unwrap()]).unwrap();
    assert_eq!(data6.k(), 2);
    dirac_property_bundle(&data6, 47);
    pass(4, "Dirac g = -k, delta-sigma identity, Casimirs, Jacobi", started, Duration::from_secs(30));
}

fn nonholonomic_toy(holonomic: bool) -> NonholonomicData {
    let chart = Chart::new(["Q1", "Q2", "Q3", "P1", "P2", "P3"]).unwrap();
    let h = chart.parse("(P1^2 + P2^2 + P3^2)/2").unwrap();
    let zeta = if holonomic {
        vec![Scalar::zero(6), Scalar::zero(6), Scalar::one(6)]
    } else {
        vec![Scalar::zero(6), chart.parse("-Q1").unwrap(), Scalar::one(6)]
    };
    NonholonomicData::new(&chart, h, vec![zeta]).unwrap()
}

#[test]
fn criterion_5_nonholonomic_dichotomy() {
    let started = Instant::now();
    let holonomic = nonholonomic_toy(true);
    let nonholonomic = nonholonomic_toy(false);
    assert!(is_poisson(&holonomic.bivector().unwrap()).unwrap());
    assert!(!is_poisson(&nonholonomic.bivector().unwrap()).unwrap());
    // kernel annihilation holds in both cases
    for data in [&holonomic, &nonholonomic] {
        let lambda = data.bivector().unwrap();
        let chart = data.chart();
        for f in data.constraint_functions() {
            assert!(casimir_core::exterior::bivector_sharp_one(&lambda, &Form::differential(chart, f))
                .unwrap()
                .is_zero());
        }
        for zeta in data.constraint_forms() {
            assert!(casimir_core::exterior::bivector_sharp_one(&lambda, zeta).unwrap().is_zero());
        }
    }
    // direct expansion equals the prescribed-kernel route on 20 random pairs
    let mut rng = casimir_core::random::rng(55);
    for case in 0..20 {
        let h1 = casimir_core::random::polynomial(&mut rng, 6, 3);
        let h2 = casimir_core::random::polynomial(&mut rng, 6, 3);
        let direct = nonholonomic.bracket_direct(&h1, &h2).unwrap();
        let kernel = nonholonomic.bracket_via_kernel(&h1, &h2).unwrap();
        assert_eq!(direct, kernel, "case {case}");
    }
    pass(5, "holonomic Jacobi passes, nonholonomic fails, 20 bracket pairs agree", started, Duration::from_secs(60));
}

#[test]
fn criterion_6_operator_identity_suites() {
    let started = Instant::now();
    let report = casimir_core::suite::full_suite(&[2, 3], 100, 0xACCE97).unwrap();
    assert!(report.all_passed(), "{report}");
    assert_eq!(report.items.len(), 20, "ten identities on each of two charts");
    pass(6, "100 random tensors per identity on dims 4 and 6", started, Duration::from_secs(300));
}

#[test]
fn criterion_7_equivalence_oracle() {
    let started = Instant::now();
    // even fixtures: delta-condition <=> coordinate Jacobi, and the
    // duality route equals the sharp route for k >= 2
    for fixture in [fixtures::toda(3).unwrap(), fixtures::volterra_companion(3).unwrap()] {
        let FixtureProblem::Even(problem) = &fixture.problem else { panic!() };
        let s = problem.structure();
        let lambda = problem.bivector().unwrap();
        assert_eq!(
            s.check_complementary(problem.sigma()).unwrap(),
            is_poisson(&lambda).unwrap(),
            "{}",
            fixture.name
        );
        let phi = problem.build_phi().unwrap();
        assert_eq!(s.volume().psi_inverse(&phi).unwrap(), lambda);
    }
    // dirac instances
    let (c4, s4) = darboux(2);
    let dirac = DiracData::new(s4, vec![c4.var("q2").unwrap(), c4.var("p2").unwrap()]).unwrap();
    assert_eq!(
        dirac.structure().check_complementary(&dirac.sigma().unwrap()).unwrap(),
        is_poisson(&dirac.bivector().unwrap()).unwrap()
    );
    let (c6, s6) = darboux(3);
    let dirac6 = DiracData::new(s6, vec![c6.var("q3").unwrap(), c6.var("p3").unwrap()]).unwrap();
    let problem6 = dirac6.problem().unwrap();
    let phi6 = problem6.build_phi().unwrap();
    assert_eq!(
        problem6.structure().volume().psi_inverse(&phi6).unwrap(),
        dirac6.bivector().unwrap()
    );
    // odd fixture: the sigma-tau system <=> coordinate Jacobi
    let fixture = fixtures::gl3().unwrap();
    let FixtureProblem::Odd(problem) = &fixture.problem else { panic!() };
    assert_eq!(
        problem.check_sigma_tau().unwrap().all_passed(),
        is_poisson(&problem.bivector().unwrap()).unwrap()
    );
    assert!(problem.suspended_complementary().unwrap());
    // nonholonomic instances: the delta-condition must agree with the
    // Jacobi oracle in both directions of the dichotomy
    for holonomic in [true, false] {
        let data = nonholonomic_toy(holonomic);
        let condition = data.structure().check_complementary(&data.sigma().unwrap()).unwrap();
        let jacobi = is_poisson(&data.bivector().unwrap()).unwrap();
        assert_eq!(condition, jacobi);
        assert_eq!(condition, holonomic);
    }
    pass(7, "condition checks match the Jacobi oracle; duality = sharp route", started, Duration::from_secs(120));
}

#[test]
fn criterion_8_jacobian_reduction() {
    let started = Instant::now();
    let chart = Chart::new(["x", "y", "z"]).unwrap();
    let f = chart.parse("x^2 + y^2 + z^2").unwrap();
    // independent symbolic-differentiation oracle, computed before the
    // engine route: {x,y} = df/dz, {x,z} = -df/dy, {y,z} = df/dx
    let oracle = [
        ("x", "y", f.partial(2)),
        ("x", "z", f.partial(1).neg_ref()),
        ("y", "z", f.partial(0)),
    ];
    let volume = VolumeStructure::standard(&chart);
    let one = Scalar::one(3);
    for (a, b, expected) in &oracle {
        let got = jacobian_bracket(
            &volume,
            &[f.clone()],
            &one,
            &chart.var(a).unwrap(),
            &chart.var(b).unwrap(),
        )
        .unwrap();
        assert_eq!(got, *expected, "({a}, {b})");
    }
    assert_eq!(oracle[0].2, chart.parse("2*z").unwrap());
    assert_eq!(oracle[1].2, chart.parse("-2*y").unwrap());
    assert_eq!(oracle[2].2, chart.parse("2*x").unwrap());

    // even-module k = 1 dispatch: same Jacobian form with coefficient -g/f
    let (c4, s4) = darboux(2);
    let sigma = Form::from_terms(&c4, 2, [(vec![0, 2], Scalar::one(4))]).unwrap();
    let casimirs = vec![c4.var("q2").unwrap(), c4.var("p2").unwrap()];
    let problem = EvenProblem::new(s4.clone(), casimirs.clone(), 1, sigma.clone()).unwrap();
    let coefficient = problem.g().neg_ref().checked_div(problem.f()).unwrap();
    let mut rng = casimir_core::random::rng(88);
    for _ in 0..10 {
        let h1 = casimir_core::random::polynomial(&mut rng, 4, 3);
        let h2 = casimir_core::random::polynomial(&mut rng, 4, 3);
        let dispatched = problem.bracket(&h1, &h2).unwrap();
        let direct = jacobian_bracket(s4.volume(), &casimirs, &coefficient, &h1, &h2).unwrap();
        assert_eq!(dispatched, direct);
        // and the kernel-form route reduces to the same values
        let alphas: Vec<Form> = casimirs.iter().map(|c| Form::differential(&c4, c)).collect();
        assert_eq!(
            bracket_with_kernel(&s4, &alphas, &sigma, &h1, &h2).unwrap(),
            dispatched
        );
    }
    // odd k = 1 dispatch goes through the same reduction
    let c3 = Chart::new(["x", "y", "z"]).unwrap();
    let theta0 = Form::coordinate(&c3, 2);
    let big = Form::from_terms(&c3, 2, [(vec![0, 1], Scalar::one(3))]).unwrap();
    let s3 = casimir_core::cosymplectic::AlmostCosymplectic::new(&c3, theta0, big).unwrap();
    let sigma3 = Form::from_terms(&c3, 2, [(vec![0, 1], c3.parse("x").unwrap())]).unwrap();
    let odd = OddProblem::new(s3.clone(), vec![c3.var("z").unwrap()], 1, sigma3, Form::zero(&c3, 1)).unwrap();
    let coefficient3 = odd.g().neg_ref().checked_div(odd.f()).unwrap();
    let x = c3.var("x").unwrap();
    let y = c3.var("y").unwrap();
    assert_eq!(
        odd.bracket(&x, &y).unwrap(),
        jacobian_bracket(s3.volume(), &[c3.var("z").unwrap()], &coefficient3, &x, &y).unwrap()
    );
    pass(8, "R^3 oracle values and the k = 1 dispatch agree", started, Duration::from_secs(5));
}
