//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by monomials under the graded
//! lexicographic order on the chart's coordinate order, so iteration order,
//! leading terms and rendered strings are all deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exponent vector of a monomial. Ordered by total degree first, then
/// lexicographically (earlier coordinates weigh more).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` when not divisible.
    fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A multivariate polynomial over the rationals in a fixed number of
/// variables. The zero polynomial has no stored terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(nvars), c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, index), BigRational::one());
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// As a constant, when the polynomial has degree zero.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn insert_term(&mut self, m: Monomial, c: BigRational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_rat(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> MultiPoly {
        assert!(index < self.nvars, "variable index out of range");
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[index] = e - 1;
            out.insert_term(Monomial(exps), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero(self.nvars));
        }
        if let Some(c) = other.as_constant() {
            return Some(self.mul_rat(&c.recip()));
        }
        let (lm, lc) = other.leading().unwrap();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.try_div(&lm)?;
            let qc = rc / &lc;
            let mut t = MultiPoly::zero(self.nvars);
            t.insert_term(qm, qc);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
            if rem.is_zero() {
                return Some(quot);
            }
        }
        Some(quot)
    }

    /// Highest power of variable `index` appearing in the polynomial.
    pub fn degree_in(&self, index: usize) -> u16 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    /// Coefficients as polynomials in the remaining variables, viewing the
    /// polynomial as univariate in `index`. Entry `d` is the coefficient of
    /// the `d`-th power.
    pub fn as_univariate(&self, index: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(index) as usize;
        let mut coeffs = vec![MultiPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let d = m.0[index] as usize;
            let mut exps = m.0.clone();
            exps[index] = 0;
            coeffs[d].insert_term(Monomial(exps), c.clone());
        }
        coeffs
    }

    /// Rebuilds a polynomial from univariate coefficients in `index`.
    pub fn from_univariate(nvars: usize, index: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (d, coeff) in coeffs.iter().enumerate() {
            for (m, c) in &coeff.terms {
                let mut exps = m.0.clone();
                exps[index] += d as u16;
                out.insert_term(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// The same polynomial over a larger variable set (new variables appended
    /// with exponent zero).
    pub fn extend_vars(&self, new_nvars: usize) -> MultiPoly {
        assert!(new_nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.0.clone();
                exps.resize(new_nvars, 0);
                (Monomial(exps), c.clone())
            })
            .collect();
        MultiPoly { nvars: new_nvars, terms }
    }

    /// Drops trailing variables; `None` when any of them actually occurs.
    pub fn truncate_vars(&self, new_nvars: usize) -> Option<MultiPoly> {
        assert!(new_nvars <= self.nvars);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[new_nvars..].iter().any(|&e| e != 0) {
                return None;
            }
            terms.insert(Monomial(m.0[..new_nvars].to_vec()), c.clone());
        }
        Some(MultiPoly { nvars: new_nvars, terms })
    }

    /// Renders with the given variable names, terms in descending graded-lex
    /// order. The output re-parses to the same polynomial.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&render_term(&abs, m, names));
        }
        out
    }
}

fn render_rat(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_term(abs_coeff: &BigRational, m: &Monomial, names: &[String]) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (v, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(names[v].clone()),
            _ => factors.push(format!("{}^{}", names[v], e)),
        }
    }
    if factors.is_empty() {
        render_rat(abs_coeff)
    } else if abs_coeff.is_one() {
        factors.join("*")
    } else {
        format!("{}*{}", render_rat(abs_coeff), factors.join("*"))
    }
}

impl fmt::Display for MultiPoly {
    /// Debug-style rendering with generic names `x0, x1, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}
