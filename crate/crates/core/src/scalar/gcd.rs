//! Multivariate polynomial gcd over the rationals.
//!
//! The engine only needs gcds to keep rational functions reduced, so the
//! classic primitive polynomial remainder sequence is enough: pick the
//! highest occurring variable as the main one, take contents recursively,
//! and run pseudo-division on the primitive parts. Every intermediate step
//! is made primitive to keep coefficient growth in check.
//!
//! The result is normalized so that, over the integers, its coefficients are
//! coprime and the leading coefficient (graded-lex) is positive. Constants
//! normalize to 1, so unit factors never survive a reduction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use super::poly::MultiPoly;

/// Rational content: the positive rational `c` such that `p / c` has coprime
/// integer coefficients and positive leading coefficient. Zero for the zero
/// polynomial.
pub fn rational_content(p: &MultiPoly) -> BigRational {
    if p.is_zero() {
        return BigRational::zero();
    }
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for (_, c) in p.terms() {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut content = BigRational::new(num_gcd, den_lcm);
    if p.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        content = -content;
    }
    content
}

/// Divides out the rational content. The zero polynomial maps to itself.
pub fn primitive_part(p: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = rational_content(p);
    p.mul_rat(&c.recip())
}

/// Greatest common divisor, normalized to be integer-primitive with positive
/// leading coefficient (`1` when the inputs are coprime or both constant).
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    if a.is_zero() {
        return primitive_part(b);
    }
    if b.is_zero() {
        return primitive_part(a);
    }
    // Fast path: either side constant, or equal up to a constant.
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MultiPoly::one(a.nvars());
    }
    gcd_primitive(&primitive_part(a), &primitive_part(b))
}

/// Gcd of two nonzero integer-primitive polynomials.
fn gcd_primitive(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a == b {
        return a.clone();
    }
    // Main variable: the highest-index variable occurring in either input.
    let var = match a.used_vars().into_iter().chain(b.used_vars()).max() {
        Some(v) => v,
        None => return MultiPoly::one(a.nvars()),
    };
    let au = a.as_univariate(var);
    let bu = b.as_univariate(var);
    // Variable occurs in only one input: the gcd divides the other's
    // coefficients.
    if au.len() == 1 {
        return gcd_many(std::iter::once(a.clone()).chain(bu));
    }
    if bu.len() == 1 {
        return gcd_many(std::iter::once(b.clone()).chain(au));
    }

    let cont_a = gcd_many(au.iter().cloned());
    let cont_b = gcd_many(bu.iter().cloned());
    let content = gcd_primitive(&cont_a, &cont_b);

    let pp_a = a.div_exact(&cont_a).expect("content divides");
    let pp_b = b.div_exact(&cont_b).expect("content divides");

    // Subresultant PRS on the primitive parts: every remainder is divided
    // by a predicted factor (exact in the coefficient ring), so contents
    // are extracted only once at the end rather than at every step.
    let (mut u, mut v) = if pp_a.degree_in(var) >= pp_b.degree_in(var) {
        (pp_a, pp_b)
    } else {
        (pp_b, pp_a)
    };
    let one = MultiPoly::one(a.nvars());
    let mut g = one.clone();
    let mut h = one;
    loop {
        let delta = (u.degree_in(var) - v.degree_in(var)) as u32;
        let r = pseudo_rem(&u, &v, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == 0 {
            // nonzero remainder free of the main variable: the primitive
            // parts are coprime
            return primitive_part(&content);
        }
        let divisor = g.mul(&h.pow(delta));
        // the subresultant theory guarantees exactness; falling back to the
        // primitive part keeps the sequence valid regardless
        let r = r.div_exact(&divisor).unwrap_or_else(|| primitive_in(&r, var));
        u = v;
        v = r;
        let dv = u.as_univariate(var);
        g = dv.last().expect("nonzero").clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .unwrap_or_else(|| g.clone()),
        };
    }
    primitive_part(&content.mul(&primitive_in(&v, var)))
}

/// Gcd of an iterator of polynomials (zero entries ignored).
fn gcd_many<I: IntoIterator<Item = MultiPoly>>(polys: I) -> MultiPoly {
    let mut iter = polys.into_iter().filter(|p| !p.is_zero());
    let first = match iter.next() {
        Some(p) => primitive_part(&p),
        None => panic!("gcd of an empty set"),
    };
    let mut acc = first;
    for p in iter {
        if acc.is_one() {
            return acc;
        }
        acc = poly_gcd(&acc, &p);
    }
    acc
}

/// Removes, from a polynomial viewed as univariate in `var`, the gcd of its
/// coefficients.
fn primitive_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs = p.as_univariate(var);
    let cont = gcd_many(coeffs.into_iter());
    p.div_exact(&cont).expect("content divides")
}

/// Pseudo-remainder of `f` by `g` in the variable `var`:
/// `lc(g)^(deg f - deg g + 1) * f = q*g + r` with `deg_var r < deg_var g`.
fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    let nvars = f.nvars();
    let dg = g.degree_in(var) as usize;
    let gu = g.as_univariate(var);
    let lcg = gu[dg].clone();
    let mut ru = f.as_univariate(var);
    while ru.len() - 1 >= dg && !ru.iter().all(|c| c.is_zero()) {
        let df = ru.len() - 1;
        let lead = ru[df].clone();
        if lead.is_zero() {
            ru.pop();
            continue;
        }
        // r <- lc(g)*r - lead * x^(df-dg) * g
        for c in ru.iter_mut() {
            *c = c.mul(&lcg);
        }
        for (i, gc) in gu.iter().enumerate() {
            let t = lead.mul(gc);
            ru[df - dg + i] = ru[df - dg + i].sub(&t);
        }
        debug_assert!(ru[df].is_zero());
        while ru.len() > 1 && ru.last().map(|c| c.is_zero()).unwrap_or(false) {
            ru.pop();
        }
        if ru.iter().all(|c| c.is_zero()) {
            break;
        }
        if ru.len() - 1 < dg {
            break;
        }
    }
    MultiPoly::from_univariate(nvars, var, &ru)
}
