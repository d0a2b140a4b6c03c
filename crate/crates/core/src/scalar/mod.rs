//! The coefficient field: exact multivariate rational functions over ℚ.
//!
//! A [`Scalar`] is a reduced fraction of two [`MultiPoly`]s. The
//! representation is canonical — numerator and denominator share no factor
//! and the denominator is monic under the graded-lex order — so two scalars
//! are equal as rational functions iff their representations are identical.
//! Division by a nonzero rational function is formal: the result is valid on
//! the open dense set where denominators do not vanish.
//!
//! All arithmetic is exact; there is no floating point anywhere in this
//! module (or crate).

pub mod gcd;
pub mod parse;
pub mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::rational::BigRational;
use num::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use gcd::poly_gcd;
use poly::MultiPoly;

/// An exact rational function in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    num: MultiPoly,
    den: MultiPoly,
}

impl Scalar {
    fn reduced(num: MultiPoly, den: MultiPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar { den: MultiPoly::one(num.nvars()), num });
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() {
            let g = poly_gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
            // Make the denominator monic so the representation is unique.
            let lc = den.leading().expect("nonzero").1.clone();
            if !lc.is_one() {
                let inv = lc.recip();
                num = num.mul_rat(&inv);
                den = den.mul_rat(&inv);
            }
        }
        Ok(Scalar { num, den })
    }

    pub fn zero(nvars: usize) -> Scalar {
        Scalar { num: MultiPoly::zero(nvars), den: MultiPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Scalar {
        Scalar { num: MultiPoly::one(nvars), den: MultiPoly::one(nvars) }
    }

    pub fn from_int(nvars: usize, c: i64) -> Scalar {
        Scalar { num: MultiPoly::from_int(nvars, c), den: MultiPoly::one(nvars) }
    }

    pub fn from_rational(nvars: usize, c: BigRational) -> Scalar {
        Scalar { num: MultiPoly::constant(nvars, c), den: MultiPoly::one(nvars) }
    }

    pub fn var(nvars: usize, index: usize) -> Scalar {
        Scalar { num: MultiPoly::var(nvars, index), den: MultiPoly::one(nvars) }
    }

    pub fn from_poly(num: MultiPoly) -> Scalar {
        Scalar { den: MultiPoly::one(num.nvars()), num }
    }

    /// Builds `num/den`, reducing to canonical form.
    pub fn from_fraction(num: MultiPoly, den: MultiPoly) -> Result<Scalar> {
        Scalar::reduced(num, den)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// As a rational constant, when the scalar is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::reduced(self.num.add(&other.num), self.den.clone())
                .expect("nonzero denominator");
        }
        // reduce through gcd(d1, d2): any common factor of the new
        // numerator and denominator divides it, which keeps the final gcd
        // call small
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            // coprime denominators: the sum is already reduced up to the
            // monic normalization
            return Scalar::reduced_coprime(num, den);
        }
        let d1_red = self.den.div_exact(&g).expect("gcd divides");
        let d2_red = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2_red).add(&other.num.mul(&d1_red));
        let h = poly_gcd(&num, &g);
        if h.is_one() {
            return Scalar::reduced_coprime(num, self.den.mul(&d2_red));
        }
        let num = num.div_exact(&h).expect("gcd divides");
        let den = self.den.div_exact(&h).expect("gcd divides").mul(&d2_red);
        Scalar::reduced_coprime(num, den)
    }

    /// Normalizes a fraction already known to be reduced (monic denominator
    /// only).
    fn reduced_coprime(num: MultiPoly, mut den: MultiPoly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero(num.nvars());
        }
        let mut num = num;
        if !den.is_one() {
            let lc = den.leading().expect("nonzero").1.clone();
            if !num::One::is_one(&lc) {
                let inv = lc.recip();
                num = num.mul_rat(&inv);
                den = den.mul_rat(&inv);
            }
        }
        Scalar { num, den }
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        if self.is_zero() || other.is_zero() {
            return Scalar::zero(self.nvars());
        }
        // Cross-reduce before multiplying to limit intermediate growth.
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Scalar::reduced(n1.mul(&n2), d1.mul(&d2)).expect("nonzero denominator")
    }

    pub fn mul_rat(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(self.nvars());
        }
        Scalar { num: self.num.mul_rat(c), den: self.den.clone() }
    }

    pub fn mul_int(&self, c: i64) -> Scalar {
        self.mul_rat(&BigRational::from_integer(c.into()))
    }

    /// Division with an explicit error on a zero divisor.
    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// Multiplicative inverse, erroring on zero.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::reduced(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents invert (erroring on zero).
    pub fn pow(&self, exp: i32) -> Result<Scalar> {
        if exp == 0 {
            return Ok(Scalar::one(self.nvars()));
        }
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let e = exp.unsigned_abs();
        Ok(Scalar {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Partial derivative by variable index (quotient rule, canonicalized).
    pub fn partial(&self, index: usize) -> Scalar {
        let dn = self.num.partial(index);
        if self.den.is_one() {
            return Scalar::from_poly(dn);
        }
        let dd = self.den.partial(index);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        let den = self.den.mul(&self.den);
        Scalar::reduced(num, den).expect("nonzero denominator")
    }

    /// Partial derivative by coordinate name on a chart.
    pub fn partial_named(&self, chart: &Chart, name: &str) -> Result<Scalar> {
        assert_eq!(self.nvars(), chart.dim(), "scalar does not live on this chart");
        Ok(self.partial(chart.index_of(name)?))
    }

    /// The same scalar on a chart with extra trailing coordinates.
    pub fn extend_vars(&self, new_nvars: usize) -> Scalar {
        Scalar {
            num: self.num.extend_vars(new_nvars),
            den: self.den.extend_vars(new_nvars),
        }
    }

    /// Drops trailing coordinates; `None` when the scalar depends on them.
    pub fn truncate_vars(&self, new_nvars: usize) -> Option<Scalar> {
        Some(Scalar {
            num: self.num.truncate_vars(new_nvars)?,
            den: self.den.truncate_vars(new_nvars)?,
        })
    }

    /// Canonical string in the chart's coordinate names. Re-parses to an
    /// equal scalar.
    pub fn render(&self, chart: &Chart) -> String {
        assert_eq!(self.nvars(), chart.dim(), "scalar does not live on this chart");
        let names = chart.coords();
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$impl(rhs)
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$impl(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$impl(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on a zero divisor; use [`Scalar::checked_div`] to handle it.
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by the zero scalar")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl fmt::Display for Scalar {
    /// Debug-style rendering with generic names `x0, x1, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
