//! Property tests of the coefficient field: field axioms, canonical-form
//! uniqueness and commuting partial derivatives on generated inputs.

use casimir_core::scalar::poly::{Monomial, MultiPoly};
use casimir_core::scalar::Scalar;
use num::BigRational;
use proptest::prelude::*;

const NVARS: usize = 3;

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0u16..3, NVARS),
            -4i64..=4,
        ),
        0..5,
    )
    .prop_map(|terms| {
        let mut p = MultiPoly::zero(NVARS);
        for (exps, coeff) in terms {
            p.insert_term(Monomial(exps), BigRational::from_integer(coeff.into()));
        }
        p
    })
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_poly(), arb_poly()).prop_map(|(num, den)| {
        if den.is_zero() {
            Scalar::from_poly(num)
        } else {
            Scalar::from_fraction(num, den).expect("nonzero denominator")
        }
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(
            a.mul_ref(&b.add_ref(&c)),
            a.mul_ref(&b).add_ref(&a.mul_ref(&c))
        );
        prop_assert!(a.sub_ref(&a).is_zero());
    }

    #[test]
    fn multiplicative_inverses(a in arb_scalar()) {
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!(a.mul_ref(&inv).is_one());
            prop_assert_eq!(a.pow(-2).unwrap(), inv.mul_ref(&inv));
        }
    }

    #[test]
    fn canonical_form_is_unique(a in arb_scalar(), m in arb_poly()) {
        // multiplying numerator and denominator by the same nonzero
        // polynomial produces the identical representation
        if !m.is_zero() {
            let scaled = Scalar::from_fraction(
                a.numerator().mul(&m),
                a.denominator().mul(&m),
            )
            .unwrap();
            prop_assert_eq!(&scaled, &a);
            let rendered_equal = format!("{scaled}") == format!("{a}");
            prop_assert!(rendered_equal);
        }
    }

    #[test]
    fn partials_commute(a in arb_scalar()) {
        for x in 0..NVARS {
            for y in (x + 1)..NVARS {
                prop_assert_eq!(a.partial(x).partial(y), a.partial(y).partial(x));
            }
        }
    }

    #[test]
    fn derivative_is_a_derivation(a in arb_scalar(), b in arb_scalar()) {
        let product = a.mul_ref(&b);
        for v in 0..NVARS {
            let lhs = product.partial(v);
            let rhs = a.partial(v).mul_ref(&b).add_ref(&a.mul_ref(&b.partial(v)));
            prop_assert_eq!(&lhs, &rhs);
        }
    }
}
