//! Seeded random generators for sparse symbolic tensors.
//!
//! Used by the property suites, the acceptance tests and the benches. All
//! generation is deterministic for a fixed seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::chart::Chart;
use crate::exterior::{increasing_tuples, Form, Multivector};
use crate::scalar::{poly::MultiPoly, Scalar};

/// Deterministic generator seeded for reproducibility.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A sparse polynomial: up to `terms` monomials of total degree at most 2
/// with small integer coefficients (never identically zero).
pub fn polynomial(r: &mut StdRng, nvars: usize, terms: usize) -> Scalar {
    loop {
        let mut p = MultiPoly::zero(nvars);
        for _ in 0..terms.max(1) {
            let coeff: i64 = r.random_range(-3..=3);
            if coeff == 0 {
                continue;
            }
            let mut exps = vec![0u16; nvars];
            for _ in 0..r.random_range(0..=2) {
                exps[r.random_range(0..nvars)] += 1;
            }
            p.insert_term(crate::scalar::poly::Monomial(exps), num::BigRational::from_integer(coeff.into()));
        }
        if !p.is_zero() {
            return Scalar::from_poly(p);
        }
    }
}

/// A rational function: a sparse polynomial over a simple nonzero
/// denominator (roughly half the time the denominator is 1).
pub fn rational(r: &mut StdRng, nvars: usize) -> Scalar {
    let num = polynomial(r, nvars, 2);
    if r.random_bool(0.5) {
        return num;
    }
    // denominators like x_i + c keep gcd work bounded
    let var = Scalar::var(nvars, r.random_range(0..nvars));
    let shift = Scalar::from_int(nvars, r.random_range(1..=3));
    num.checked_div(&var.add_ref(&shift)).expect("nonzero denominator")
}

/// A sparse form of the given grade with `terms` random components.
pub fn form(r: &mut StdRng, chart: &Chart, grade: usize, terms: usize) -> Form {
    let tuples = increasing_tuples(chart.dim(), grade);
    let mut entries = Vec::new();
    for _ in 0..terms {
        let key = tuples[r.random_range(0..tuples.len())].clone();
        entries.push((key, polynomial(r, chart.dim(), 2)));
    }
    Form::from_terms(chart, grade, entries).expect("valid terms")
}

/// A sparse multivector of the given grade.
pub fn multivector(r: &mut StdRng, chart: &Chart, grade: usize, terms: usize) -> Multivector {
    let tuples = increasing_tuples(chart.dim(), grade);
    let mut entries = Vec::new();
    for _ in 0..terms {
        let key = tuples[r.random_range(0..tuples.len())].clone();
        entries.push((key, polynomial(r, chart.dim(), 2)));
    }
    Multivector::from_terms(chart, grade, entries).expect("valid terms")
}

/// A sparse form with rational-function coefficients.
pub fn form_rational(r: &mut StdRng, chart: &Chart, grade: usize, terms: usize) -> Form {
    let tuples = increasing_tuples(chart.dim(), grade);
    let mut entries = Vec::new();
    for _ in 0..terms {
        let key = tuples[r.random_range(0..tuples.len())].clone();
        entries.push((key, rational(r, chart.dim())));
    }
    Form::from_terms(chart, grade, entries).expect("valid terms")
}
