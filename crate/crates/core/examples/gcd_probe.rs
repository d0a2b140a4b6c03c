use casimir_core::scalar::gcd::poly_gcd;
use casimir_core::scalar::poly::{Monomial, MultiPoly};
use num::BigRational;
use rand::{Rng, SeedableRng};

fn random_poly(r: &mut rand::rngs::StdRng, nvars: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    for _ in 0..r.random_range(0..4) {
        let exps: Vec<u16> = (0..nvars).map(|_| r.random_range(0..2)).collect();
        let c: i64 = r.random_range(-4..=4);
        p.insert_term(Monomial(exps), BigRational::from_integer(c.into()));
    }
    p
}

fn main() {
    let mut r = rand::rngs::StdRng::seed_from_u64(1);
    for case in 0..200000 {
        let a = random_poly(&mut r, 3);
        let b = random_poly(&mut r, 3);
        let m = random_poly(&mut r, 3);
        if m.is_zero() || b.is_zero() {
            continue;
        }
        let start = std::time::Instant::now();
        let _ = poly_gcd(&a.mul(&m), &b.mul(&m));
        if start.elapsed().as_millis() > 500 {
            println!("slow case {case}: a={a} b={b} m={m} took {:?}", start.elapsed());
            return;
        }
        if case % 20000 == 0 {
            println!("case {case} ok");
        }
    }
    println!("all fast");
}
