//! Randomized operator-identity suites.
//!
//! Every identity the calculus relies on, checked with exact equality on
//! seeded random sparse tensors: the star involution, the square-zero
//! operators, the volume duality, the duality/star compatibility, the two
//! interior-product sign relations, the Lepage reconstruction, and the
//! three-route agreement of the Schouten bracket. Cases fan out across
//! threads with the `parallel` feature.

use rand::rngs::StdRng;
use rand::Rng;

use crate::chart::Chart;
use crate::error::Result;
use crate::exterior::{
    interior_by_form, interior_by_multivector, interior_sign, pair, Form,
};
use crate::par;
use crate::random;
use crate::report::{CheckItem, VerificationReport};
use crate::scalar::Scalar;
use crate::symplectic::AlmostSymplectic;
use crate::volume::{schouten, schouten_via_generator, schouten_via_koszul};

/// A Darboux chart of dimension `2n` with coordinates `q1..qn, p1..pn`.
fn chart(n: usize) -> Chart {
    Chart::new(
        (1..=n)
            .map(|i| format!("q{i}"))
            .chain((1..=n).map(|i| format!("p{i}")))
            .collect::<Vec<_>>(),
    )
    .expect("valid names")
}

/// The standard structure and a non-closed perturbation of it, both exactly
/// invertible.
fn structures(c: &Chart) -> Result<Vec<AlmostSymplectic>> {
    let n = c.dim() / 2;
    let standard = AlmostSymplectic::standard(c)?;
    // perturb with a q-only term: the matrix stays invertible and d(omega0)
    // is nonzero, so the almost (not genuinely) symplectic branch is covered
    let perturbation = Form::from_terms(
        c,
        2,
        [(vec![0, 1], Scalar::var(c.dim(), 0))],
    )?;
    let perturbed = AlmostSymplectic::new(c, standard.omega0().add(&perturbation))?;
    let _ = n;
    Ok(vec![standard, perturbed])
}

fn run_cases<F>(name: &str, cases: usize, seed: u64, body: F) -> CheckItem
where
    F: Fn(&mut StdRng) -> bool + Sync + Send,
{
    let failures: usize = par::map_collect(
        (0..cases).collect::<Vec<_>>(),
        |case| {
            let mut r = random::rng(seed ^ ((case as u64) << 17) ^ 0x9e37_79b9);
            usize::from(!body(&mut r))
        },
    )
    .into_iter()
    .sum();
    CheckItem::from_bool(
        format!("{name} ({cases} cases)"),
        failures == 0,
        format!("{failures} failing cases"),
    )
}

/// Runs every identity with `cases` random tensors each on the `2n`-chart.
pub fn operator_identity_suite(n: usize, cases: usize, seed: u64) -> Result<VerificationReport> {
    let c = chart(n);
    let m = c.dim();
    let structures = structures(&c)?;
    let mut report = VerificationReport::new();
    let dim_tag = format!("dim {m}");

    report.push(run_cases(&format!("star involution: **phi = phi [{dim_tag}]"), cases, seed, |r| {
        let s = &structures[r.random_range(0..structures.len())];
        let grade = r.random_range(0..=m);
        let phi = random::form(r, &c, grade, 3);
        s.star(&s.star(&phi).unwrap()).unwrap() == phi
    }));

    report.push(run_cases(&format!("d*d = 0 on rational coefficients [{dim_tag}]"), cases, seed ^ 1, |r| {
        let grade = r.random_range(0..m);
        let phi = random::form_rational(r, &c, grade, 3);
        phi.exterior_derivative().exterior_derivative().is_zero()
    }));

    report.push(run_cases(&format!("delta*delta = 0 [{dim_tag}]"), cases, seed ^ 2, |r| {
        let s = &structures[r.random_range(0..structures.len())];
        let grade = r.random_range(1..=m);
        let phi = random::form(r, &c, grade, 2);
        s.codifferential(&s.codifferential(&phi).unwrap()).unwrap().is_zero()
    }));

    report.push(run_cases(&format!("D*D = 0 [{dim_tag}]"), cases, seed ^ 3, |r| {
        let s = &structures[r.random_range(0..structures.len())];
        let grade = r.random_range(1..=m);
        let p = random::multivector(r, &c, grade, 2);
        let volume = s.volume();
        volume.koszul_d(&volume.koszul_d(&p).unwrap()).unwrap().is_zero()
    }));

    report.push(run_cases(&format!("psi_inverse(psi(P)) = P [{dim_tag}]"), cases, seed ^ 4, |r| {
        let s = &structures[r.random_range(0..structures.len())];
        let grade = r.random_range(0..=m);
        let p = random::multivector(r, &c, grade, 3);
        let volume = s.volume();
        volume.psi_inverse(&volume.psi(&p).unwrap()).unwrap() == p
    }));

    report.push(run_cases(
        &format!("psi_inverse(zeta) = sharp(star(zeta)) [{dim_tag}]"),
        cases,
        seed ^ 5,
        |r| {
            let s = &structures[r.random_range(0..structures.len())];
            let grade = r.random_range(0..=m);
            let zeta = random::form(r, &c, grade, 3);
            s.volume().psi_inverse(&zeta).unwrap() == s.sharp(&s.star(&zeta).unwrap()).unwrap()
        },
    ));

    report.push(run_cases(
        &format!("<i_P eta, Q> = (-1)^(p(p-1)/2) <eta, P^Q> [{dim_tag}]"),
        cases,
        seed ^ 6,
        |r| {
            let p_grade = r.random_range(1..=2.min(m));
            let e_grade = r.random_range(p_grade..=m);
            let p = random::multivector(r, &c, p_grade, 2);
            let eta = random::form(r, &c, e_grade, 3);
            let q = random::multivector(r, &c, e_grade - p_grade, 2);
            let lhs = pair(&interior_by_multivector(&p, &eta).unwrap(), &q).unwrap();
            let rhs = pair(&eta, &p.wedge(&q).unwrap()).unwrap().mul_int(interior_sign(p_grade));
            lhs == rhs
        },
    ));

    report.push(run_cases(
        &format!("<zeta, j_eta P> = <zeta ^ eta, P> [{dim_tag}]"),
        cases,
        seed ^ 7,
        |r| {
            let e_grade = r.random_range(1..=2.min(m));
            let p_grade = r.random_range(e_grade..=m);
            let eta = random::form(r, &c, e_grade, 2);
            let p = random::multivector(r, &c, p_grade, 3);
            let zeta = random::form(r, &c, p_grade - e_grade, 2);
            let lhs = pair(&zeta, &interior_by_form(&eta, &p).unwrap()).unwrap();
            let rhs = pair(&zeta.wedge(&eta).unwrap(), &p).unwrap();
            lhs == rhs
        },
    ));

    report.push(run_cases(
        &format!("Lepage decomposition reconstructs and is effective [{dim_tag}]"),
        cases,
        seed ^ 8,
        |r| {
            let s = &structures[r.random_range(0..structures.len())];
            let n_half = m / 2;
            let grade = r.random_range(1..=n_half);
            let phi = random::form(r, &c, grade, 3);
            let parts = match s.lepage_decompose(&phi) {
                Ok(parts) => parts,
                Err(_) => return false,
            };
            let mut rebuilt = Form::zero(&c, grade);
            for (idx, psi) in parts.iter().enumerate() {
                if !s.is_effective(psi).unwrap() {
                    return false;
                }
                rebuilt = rebuilt.add(&psi.wedge(&s.omega_power(idx).unwrap()).unwrap());
            }
            rebuilt == phi
        },
    ));

    report.push(run_cases(
        &format!("Schouten: expansion = commutator route = generator route [{dim_tag}]"),
        cases,
        seed ^ 9,
        |r| {
            let s = &structures[r.random_range(0..structures.len())];
            let grades = [(1, 1), (1, 2), (2, 2)][r.random_range(0..3)];
            let p = random::multivector(r, &c, grades.0, 2);
            let q = random::multivector(r, &c, grades.1, 2);
            let direct = schouten(&p, &q).unwrap();
            let commutator = schouten_via_koszul(&p, &q).unwrap();
            let generator = schouten_via_generator(s.volume(), &p, &q).unwrap();
            direct == commutator && direct == generator
        },
    ));

    Ok(report)
}

/// Convenience: one report per requested operation count for each of a set
/// of chart dimensions.
pub fn full_suite(half_dims: &[usize], cases: usize, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    for &n in half_dims {
        report.extend(operator_identity_suite(n, cases, seed + n as u64)?);
    }
    Ok(report)
}
