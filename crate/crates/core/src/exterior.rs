//! Grade-homogeneous differential forms and multivector fields.
//!
//! Both kinds are stored sparsely as maps from strictly increasing index
//! tuples to scalar coefficients; terms given with unordered indices are
//! normalized on insertion with the permutation sign. Grades above the chart
//! dimension are legal but necessarily zero objects, matching the convention
//! that the spaces vanish there.
//!
//! Sign conventions (fixed once here, used everywhere else):
//! - pairing of equal-grade objects is the determinant pairing, which on the
//!   sparse representation is the coefficient dot product over common index
//!   tuples;
//! - the interior product `i_P` of a form by a p-vector satisfies
//!   `<i_P eta, Q> = (-1)^{(p-1)p/2} <eta, P wedge Q>`;
//! - the interior product `j_eta` of a multivector by a q-form satisfies
//!   `<zeta, j_eta P> = <zeta wedge eta, P>`.
//!
//! The two interior products are implemented independently from their
//! defining relations (not one from the other); the relations themselves are
//! re-checked as randomized identities in the test suites.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Key = Vec<usize>;
type Terms = BTreeMap<Key, Scalar>;

/// Sign of the shuffle placing `first` before `second` relative to the fully
/// sorted order: parity of the number of pairs (a, b) with a in `first`,
/// b in `second`, a > b. Both slices are strictly increasing and disjoint.
pub(crate) fn shuffle_sign(first: &[usize], second: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for &a in first {
        inversions += second.iter().take_while(|&&b| b < a).count();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the term is zero).
fn sort_indices(mut indices: Vec<usize>) -> Option<(Key, i64)> {
    let mut swaps = 0usize;
    // insertion sort, counting swaps; tuples are tiny
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((indices, if swaps % 2 == 0 { 1 } else { -1 }))
}

/// Merges two strictly increasing disjoint tuples into one sorted tuple.
fn merge_keys(a: &[usize], b: &[usize]) -> Key {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

fn set_difference(big: &[usize], small: &[usize]) -> Key {
    big.iter().filter(|i| !small.contains(i)).copied().collect()
}

/// All strictly increasing `r`-tuples over `0..m`, in lexicographic order.
pub fn increasing_tuples(m: usize, r: usize) -> Vec<Vec<usize>> {
    if r > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..r).collect();
    loop {
        out.push(current.clone());
        // advance to the next combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + m - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..r {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// `(-1)^{(p-1)p/2}`: the sign relating `i_P` to the pairing.
pub(crate) fn interior_sign(p: usize) -> i64 {
    if ((p.saturating_sub(1)) * p / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn add_term(terms: &mut Terms, key: Key, value: Scalar) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(value);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add_ref(&value);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Shared sparse antisymmetric-tensor body for forms and multivectors.
#[derive(Debug, Clone)]
struct Tensor {
    chart: Chart,
    grade: usize,
    terms: Terms,
}

impl PartialEq for Tensor {
    /// Zero objects are grade-polymorphic: two empty tensors on the same
    /// chart are equal whatever their recorded grades.
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart
            && (self.grade == other.grade || (self.is_zero() && other.is_zero()))
            && self.terms == other.terms
    }
}

impl Tensor {
    fn zero(chart: Chart, grade: usize) -> Tensor {
        Tensor { chart, grade, terms: Terms::new() }
    }

    fn insert(&mut self, indices: Vec<usize>, coeff: Scalar) -> Result<()> {
        if indices.len() != self.grade {
            return Err(Error::InvalidGrade {
                grade: indices.len(),
                reason: format!("term has {} indices but the object has grade {}", indices.len(), self.grade),
            });
        }
        for &i in &indices {
            if i >= self.chart.dim() {
                return Err(Error::InvalidProblem(format!(
                    "index {i} out of range for chart of dimension {}",
                    self.chart.dim()
                )));
            }
        }
        if let Some((key, sign)) = sort_indices(indices) {
            add_term(&mut self.terms, key, coeff.mul_int(sign));
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        // zero objects are grade-polymorphic: adopt the other grade
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.grade, other.grade, "grade mismatch in addition");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            add_term(&mut out.terms, k.clone(), v.clone());
        }
        out
    }

    fn neg(&self) -> Tensor {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v.neg_ref())).collect();
        Tensor { chart: self.chart.clone(), grade: self.grade, terms }
    }

    fn scale(&self, s: &Scalar) -> Tensor {
        if s.is_zero() {
            return Tensor::zero(self.chart.clone(), self.grade);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v.mul_ref(s))).collect();
        Tensor { chart: self.chart.clone(), grade: self.grade, terms }
    }

    fn wedge(&self, other: &Tensor) -> Result<Tensor> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let mut out = Tensor::zero(self.chart.clone(), self.grade + other.grade);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if ka.iter().any(|i| kb.contains(i)) {
                    continue;
                }
                let sign = shuffle_sign(ka, kb);
                add_term(&mut out.terms, merge_keys(ka, kb), va.mul_ref(vb).mul_int(sign));
            }
        }
        Ok(out)
    }

    fn pair(&self, other: &Tensor) -> Result<Scalar> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let nvars = self.chart.dim();
        if self.grade != other.grade {
            return Ok(Scalar::zero(nvars));
        }
        let mut acc = Scalar::zero(nvars);
        for (k, v) in &self.terms {
            if let Some(w) = other.terms.get(k) {
                acc = acc.add_ref(&v.mul_ref(w));
            }
        }
        Ok(acc)
    }

    fn coefficient(&self, indices: &[usize]) -> Scalar {
        match sort_indices(indices.to_vec()) {
            Some((key, sign)) => self
                .terms
                .get(&key)
                .map(|c| c.mul_int(sign))
                .unwrap_or_else(|| Scalar::zero(self.chart.dim())),
            None => Scalar::zero(self.chart.dim()),
        }
    }

    fn extend_to(&self, chart: &Chart) -> Tensor {
        let nvars = chart.dim();
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.extend_vars(nvars)))
            .collect();
        Tensor { chart: chart.clone(), grade: self.grade, terms }
    }

    fn render(&self, factor_prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        if self.grade == 0 {
            return self.terms.values().next().unwrap().render(&self.chart);
        }
        let mut parts = Vec::new();
        for (k, v) in &self.terms {
            let factors: Vec<String> = k.iter().map(|&i| format!("{factor_prefix}{}", self.chart.name(i))).collect();
            parts.push(format!("({})*{}", v.render(&self.chart), factors.join("^")));
        }
        parts.join(" + ")
    }
}

/// A grade-homogeneous differential form with rational-function coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Form(Tensor);

/// A grade-homogeneous multivector field with rational-function coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector(Tensor);

macro_rules! tensor_kind {
    ($T:ident) => {
        impl $T {
            /// The zero object of the given grade.
            pub fn zero(chart: &Chart, grade: usize) -> $T {
                $T(Tensor::zero(chart.clone(), grade))
            }

            /// A grade-0 object holding one scalar.
            pub fn constant(chart: &Chart, value: Scalar) -> $T {
                assert_eq!(value.nvars(), chart.dim(), "scalar does not live on this chart");
                let mut t = Tensor::zero(chart.clone(), 0);
                add_term(&mut t.terms, Vec::new(), value);
                $T(t)
            }

            /// The grade-0 unit.
            pub fn one(chart: &Chart) -> $T {
                $T::constant(chart, Scalar::one(chart.dim()))
            }

            /// Builds from `(indices, coefficient)` terms; indices may be in
            /// any order and are sign-normalized.
            pub fn from_terms<I>(chart: &Chart, grade: usize, terms: I) -> Result<$T>
            where
                I: IntoIterator<Item = (Vec<usize>, Scalar)>,
            {
                let mut t = Tensor::zero(chart.clone(), grade);
                for (indices, coeff) in terms {
                    if coeff.nvars() != chart.dim() {
                        return Err(Error::InvalidProblem(
                            "coefficient does not live on this chart".into(),
                        ));
                    }
                    t.insert(indices, coeff)?;
                }
                Ok($T(t))
            }

            pub fn chart(&self) -> &Chart {
                &self.0.chart
            }

            pub fn grade(&self) -> usize {
                self.0.grade
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            /// Iterates stored terms in canonical (index-tuple) order.
            pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
                self.0.terms.iter().map(|(k, v)| (k.as_slice(), v))
            }

            pub fn num_terms(&self) -> usize {
                self.0.terms.len()
            }

            /// The coefficient on the given index tuple (any order; the
            /// permutation sign is applied).
            pub fn coefficient(&self, indices: &[usize]) -> Scalar {
                self.0.coefficient(indices)
            }

            pub fn add(&self, other: &$T) -> $T {
                $T(self.0.add(&other.0))
            }

            pub fn sub(&self, other: &$T) -> $T {
                $T(self.0.add(&other.0.neg()))
            }

            pub fn neg(&self) -> $T {
                $T(self.0.neg())
            }

            pub fn scale(&self, s: &Scalar) -> $T {
                $T(self.0.scale(s))
            }

            pub fn scale_int(&self, s: i64) -> $T {
                self.scale(&Scalar::from_int(self.chart().dim(), s))
            }

            pub fn scale_rat(&self, s: &num::rational::BigRational) -> $T {
                self.scale(&Scalar::from_rational(self.chart().dim(), s.clone()))
            }

            /// Wedge product. `a ^ b = (-1)^{pq} b ^ a`; errors on a chart
            /// mismatch.
            pub fn wedge(&self, other: &$T) -> Result<$T> {
                Ok($T(self.0.wedge(&other.0)?))
            }

            /// Wedge power divided by `k!` (exact).
            pub fn wedge_power_over_factorial(&self, k: usize) -> Result<$T> {
                let mut acc = $T::one(self.chart());
                for _ in 0..k {
                    acc = acc.wedge(self)?;
                }
                let mut fact = num::BigInt::from(1);
                for i in 2..=k {
                    fact *= i;
                }
                let inv = num::rational::BigRational::new(1.into(), fact);
                Ok(acc.scale_rat(&inv))
            }

            /// As a grade-0 scalar. Errors when the grade is not zero.
            pub fn as_scalar(&self) -> Result<Scalar> {
                if self.grade() != 0 {
                    return Err(Error::GradeMismatch(self.grade(), 0));
                }
                Ok(self.coefficient(&[]))
            }

            /// The same object on a chart extended by trailing coordinates.
            pub fn extend_to(&self, chart: &Chart) -> Result<$T> {
                if chart.dim() < self.chart().dim()
                    || chart.coords()[..self.chart().dim()] != *self.chart().coords()
                {
                    return Err(Error::InvalidProblem(
                        "target chart does not extend the source chart".into(),
                    ));
                }
                Ok($T(self.0.extend_to(chart)))
            }

            /// Projects to a prefix chart. Errors when any term uses a
            /// dropped index or a coefficient depends on a dropped
            /// coordinate.
            pub fn restrict_to(&self, chart: &Chart) -> Result<$T> {
                let m = chart.dim();
                if m > self.chart().dim() || self.chart().coords()[..m] != *chart.coords() {
                    return Err(Error::InvalidProblem(
                        "target chart is not a prefix of the source chart".into(),
                    ));
                }
                let mut out = Tensor::zero(chart.clone(), self.grade());
                for (key, coeff) in self.terms() {
                    if key.iter().any(|&i| i >= m) {
                        return Err(Error::InvalidProblem(
                            "object has components along dropped coordinates".into(),
                        ));
                    }
                    let coeff = coeff.truncate_vars(m).ok_or_else(|| {
                        Error::InvalidProblem(
                            "coefficient depends on a dropped coordinate".into(),
                        )
                    })?;
                    add_term(&mut out.terms, key.to_vec(), coeff);
                }
                Ok($T(out))
            }
        }
    };
}

tensor_kind!(Form);
tensor_kind!(Multivector);

impl Form {
    /// The differential of a scalar function.
    pub fn differential(chart: &Chart, f: &Scalar) -> Form {
        assert_eq!(f.nvars(), chart.dim(), "scalar does not live on this chart");
        let mut t = Tensor::zero(chart.clone(), 1);
        for i in 0..chart.dim() {
            add_term(&mut t.terms, vec![i], f.partial(i));
        }
        Form(t)
    }

    /// A coordinate 1-form `dx_i`.
    pub fn coordinate(chart: &Chart, index: usize) -> Form {
        let mut t = Tensor::zero(chart.clone(), 1);
        add_term(&mut t.terms, vec![index], Scalar::one(chart.dim()));
        Form(t)
    }

    /// Exterior derivative: grade +1, `d(d(eta)) = 0`, graded Leibniz over
    /// the wedge.
    pub fn exterior_derivative(&self) -> Form {
        let chart = self.chart().clone();
        let m = chart.dim();
        let mut t = Tensor::zero(chart, self.grade() + 1);
        for (key, coeff) in &self.0.terms {
            for v in 0..m {
                if key.contains(&v) {
                    continue;
                }
                let dc = coeff.partial(v);
                if dc.is_zero() {
                    continue;
                }
                // dx_v moved past the indices of `key` smaller than v
                let below = key.iter().take_while(|&&i| i < v).count();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                let mut new_key = key.clone();
                new_key.push(v);
                new_key.sort_unstable();
                add_term(&mut t.terms, new_key, dc.mul_int(sign));
            }
        }
        Form(t)
    }

    /// Evaluates `<self, X1 ^ ... ^ Xp>` for grade-1 fields via the pairing.
    pub fn apply(&self, fields: &[Multivector]) -> Result<Scalar> {
        let mut wedge = Multivector::one(self.chart());
        for x in fields {
            wedge = wedge.wedge(x)?;
        }
        pair(self, &wedge)
    }
}

impl Multivector {
    /// A coordinate field `∂_i`.
    pub fn coordinate(chart: &Chart, index: usize) -> Multivector {
        let mut t = Tensor::zero(chart.clone(), 1);
        add_term(&mut t.terms, vec![index], Scalar::one(chart.dim()));
        Multivector(t)
    }

    /// Applies a vector field (grade 1) to a scalar: `X(f)`.
    pub fn apply_to_scalar(&self, f: &Scalar) -> Result<Scalar> {
        if self.grade() != 1 {
            return Err(Error::GradeMismatch(self.grade(), 1));
        }
        let mut acc = Scalar::zero(self.chart().dim());
        for (k, v) in self.terms() {
            acc = acc.add_ref(&v.mul_ref(&f.partial(k[0])));
        }
        Ok(acc)
    }

    /// The antisymmetric coefficient matrix of a grade-2 object.
    pub fn coefficient_matrix(&self) -> Result<crate::linalg::Matrix> {
        if self.grade() != 2 {
            return Err(Error::GradeMismatch(self.grade(), 2));
        }
        let m = self.chart().dim();
        Ok(crate::linalg::Matrix::from_fn(m, m, m, |r, c| self.coefficient(&[r, c])))
    }

    /// Generic rank over the fraction field (grade 2 only).
    pub fn rank(&self) -> Result<usize> {
        Ok(self.coefficient_matrix()?.rank())
    }
}

impl Form {
    /// The antisymmetric coefficient matrix of a grade-2 form.
    pub fn coefficient_matrix(&self) -> Result<crate::linalg::Matrix> {
        if self.grade() != 2 {
            return Err(Error::GradeMismatch(self.grade(), 2));
        }
        let m = self.chart().dim();
        Ok(crate::linalg::Matrix::from_fn(m, m, m, |r, c| self.coefficient(&[r, c])))
    }

    /// Generic rank over the fraction field (grade 2 only).
    pub fn rank(&self) -> Result<usize> {
        Ok(self.coefficient_matrix()?.rank())
    }
}

/// The determinant pairing `<eta, P>`. Zero when the grades differ.
pub fn pair(eta: &Form, p: &Multivector) -> Result<Scalar> {
    eta.0.pair(&p.0)
}

/// Interior product of a form by a multivector (`i_P eta`): the unique
/// (q-p)-form with `<i_P eta, Q> = (-1)^{(p-1)p/2} <eta, P ^ Q>` for all Q.
/// Returns the zero form when `grade(P) > grade(eta)`.
pub fn interior_by_multivector(p: &Multivector, eta: &Form) -> Result<Form> {
    if p.chart() != eta.chart() {
        return Err(Error::ChartMismatch);
    }
    let (gp, ge) = (p.grade(), eta.grade());
    if gp > ge {
        return Ok(Form::zero(eta.chart(), 0));
    }
    let sign_p = interior_sign(gp);
    let mut out = Tensor::zero(eta.chart().clone(), ge - gp);
    for (kp, vp) in &p.0.terms {
        for (ke, ve) in &eta.0.terms {
            if !is_subset(kp, ke) {
                continue;
            }
            let rest = set_difference(ke, kp);
            let sign = sign_p * shuffle_sign(kp, &rest);
            add_term(&mut out.terms, rest, vp.mul_ref(ve).mul_int(sign));
        }
    }
    Ok(Form(out))
}

/// Interior product of a multivector by a form (`j_eta P`): the unique
/// (p-q)-multivector with `<zeta, j_eta P> = <zeta ^ eta, P>` for all zeta.
/// Returns the zero multivector when `grade(eta) > grade(P)`.
pub fn interior_by_form(eta: &Form, p: &Multivector) -> Result<Multivector> {
    if p.chart() != eta.chart() {
        return Err(Error::ChartMismatch);
    }
    let (gp, ge) = (p.grade(), eta.grade());
    if ge > gp {
        return Ok(Multivector::zero(p.chart(), 0));
    }
    let mut out = Tensor::zero(p.chart().clone(), gp - ge);
    for (ke, ve) in &eta.0.terms {
        for (kp, vp) in &p.0.terms {
            if !is_subset(ke, kp) {
                continue;
            }
            let rest = set_difference(kp, ke);
            let sign = shuffle_sign(&rest, ke);
            add_term(&mut out.terms, rest, ve.mul_ref(vp).mul_int(sign));
        }
    }
    Ok(Multivector(out))
}

/// The vector field `L^#(alpha)` of a bivector `L` and a 1-form `alpha`,
/// characterized by `<beta, L^#(alpha)> = L(alpha, beta)`.
pub fn bivector_sharp_one(l: &Multivector, alpha: &Form) -> Result<Multivector> {
    if l.chart() != alpha.chart() {
        return Err(Error::ChartMismatch);
    }
    if l.grade() != 2 {
        return Err(Error::GradeMismatch(l.grade(), 2));
    }
    if alpha.grade() != 1 {
        return Err(Error::GradeMismatch(alpha.grade(), 1));
    }
    let mut out = Tensor::zero(l.chart().clone(), 1);
    for (kl, vl) in &l.0.terms {
        let (a, b) = (kl[0], kl[1]);
        // L = v ∂_a∧∂_b contributes v*alpha_a ∂_b - v*alpha_b ∂_a
        let ca = alpha.coefficient(&[a]);
        let cb = alpha.coefficient(&[b]);
        add_term(&mut out.terms, vec![b], vl.mul_ref(&ca));
        add_term(&mut out.terms, vec![a], vl.mul_ref(&cb).mul_int(-1));
    }
    Ok(Multivector(out))
}

/// The multiplicative extension of `L^#` to forms of any grade:
/// `L^#(zeta)(a_1,...,a_p) = (-1)^p zeta(L^#(a_1),...,L^#(a_p))`, equivalently
/// `L^#(zeta ^ eta) = L^#(zeta) ^ L^#(eta)` with the grade-1 map above.
pub fn bivector_sharp(l: &Multivector, zeta: &Form) -> Result<Multivector> {
    if l.chart() != zeta.chart() {
        return Err(Error::ChartMismatch);
    }
    if l.grade() != 2 {
        return Err(Error::GradeMismatch(l.grade(), 2));
    }
    let chart = zeta.chart().clone();
    // images of the coordinate 1-forms, computed once
    let images: Vec<Multivector> = (0..chart.dim())
        .map(|i| bivector_sharp_one(l, &Form::coordinate(&chart, i)))
        .collect::<Result<_>>()?;
    let mut out = Tensor::zero(chart.clone(), zeta.grade());
    for (k, v) in &zeta.0.terms {
        let mut product = Multivector::one(&chart);
        for &i in k {
            product = product.wedge(&images[i])?;
        }
        for (kp, vp) in &product.0.terms {
            add_term(&mut out.terms, kp.clone(), v.mul_ref(vp));
        }
    }
    Ok(Multivector(out))
}

/// The function bracket `{f, g} = L(df, dg) = <df ^ dg, L>` of a bivector.
pub fn bivector_bracket(l: &Multivector, f: &Scalar, g: &Scalar) -> Result<Scalar> {
    let chart = l.chart();
    let df = Form::differential(chart, f);
    let dg = Form::differential(chart, g);
    pair(&df.wedge(&dg)?, l)
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render("d"))
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render("\u{2202}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart2() -> Chart {
        Chart::new(["x", "y"]).unwrap()
    }

    fn chart4() -> Chart {
        // a Darboux-style chart (a1, a2, b1, b2)
        Chart::new(["a1", "a2", "b1", "b2"]).unwrap()
    }

    fn s(c: &Chart, src: &str) -> Scalar {
        c.parse(src).unwrap()
    }

    #[test]
    fn wedge_anticommutes_on_one_forms() {
        let c = chart2();
        let dx = Form::coordinate(&c, 0);
        let dy = Form::coordinate(&c, 1);
        let xy = dx.wedge(&dy).unwrap();
        let yx = dy.wedge(&dx).unwrap();
        assert_eq!(xy, yx.neg());
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }

    #[test]
    fn wedge_square_of_standard_symplectic_form() {
        let c = chart4();
        // omega = da1^db1 + da2^db2; omega^omega = 2 da1^db1^da2^db2
        let one = Scalar::one(4);
        let omega = Form::from_terms(&c, 2, [
            (vec![0, 2], one.clone()),
            (vec![1, 3], one.clone()),
        ])
        .unwrap();
        let sq = omega.wedge(&omega).unwrap();
        assert_eq!(sq.coefficient(&[0, 2, 1, 3]), Scalar::from_int(4, 2));
        // omega^2/2! = -da1^da2^db1^db2 once sorted into index order
        let vol = omega.wedge_power_over_factorial(2).unwrap();
        assert_eq!(vol.coefficient(&[0, 1, 2, 3]), Scalar::from_int(4, -1));
    }

    #[test]
    fn pairing_is_the_determinant_pairing() {
        let c = chart2();
        let dxdy = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::one(2))]).unwrap();
        let bivector = Multivector::from_terms(&c, 2, [(vec![0, 1], Scalar::one(2))]).unwrap();
        assert!(pair(&dxdy, &bivector).unwrap().is_one());
        // mismatched grades pair to zero
        let dx = Form::coordinate(&c, 0);
        assert!(pair(&dx, &bivector).unwrap().is_zero());
    }

    #[test]
    fn toda_pairing_value() {
        // <dC1 ^ dC2, Lambda0> = -(a1*a2 + a2*a3 + a1*a3) on the 6-chart
        let c = Chart::new(["a1", "a2", "a3", "b1", "b2", "b3"]).unwrap();
        let c1 = s(&c, "b1 + b2 + b3");
        let c2 = s(&c, "a1*a2*a3");
        let dc1 = Form::differential(&c, &c1);
        let dc2 = Form::differential(&c, &c2);
        let lambda0 = Multivector::from_terms(&c, 2, (0..3).map(|i| (vec![i, i + 3], Scalar::one(6))))
            .unwrap();
        let f = pair(&dc1.wedge(&dc2).unwrap(), &lambda0).unwrap();
        assert_eq!(f, s(&c, "-(a1*a2 + a2*a3 + a1*a3)"));
    }

    #[test]
    fn single_contraction() {
        let c = chart2();
        let dxdy = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::one(2))]).unwrap();
        let dx_field = Multivector::coordinate(&c, 0);
        let contracted = interior_by_multivector(&dx_field, &dxdy).unwrap();
        assert_eq!(contracted, Form::coordinate(&c, 1));
    }

    #[test]
    fn contraction_of_standard_pair_gives_minus_n() {
        // i_{Lambda0} omega0 = -n on a 2n-chart
        let c = chart4();
        let one = Scalar::one(4);
        let omega = Form::from_terms(&c, 2, [(vec![0, 2], one.clone()), (vec![1, 3], one.clone())]).unwrap();
        let lambda = Multivector::from_terms(&c, 2, [(vec![0, 2], one.clone()), (vec![1, 3], one)]).unwrap();
        let value = interior_by_multivector(&lambda, &omega).unwrap().as_scalar().unwrap();
        assert_eq!(value, Scalar::from_int(4, -2));
    }

    #[test]
    fn j_contraction_matches_frozen_oracle() {
        // j_{dx}(∂x ^ ∂y) = -∂y, frozen from the defining relation
        let c = chart2();
        let dx = Form::coordinate(&c, 0);
        let p = Multivector::from_terms(&c, 2, [(vec![0, 1], Scalar::one(2))]).unwrap();
        let j = interior_by_form(&dx, &p).unwrap();
        assert_eq!(j, Multivector::coordinate(&c, 1).neg());
    }

    #[test]
    fn equal_grade_interiors_agree_with_pairing() {
        // j_eta P = (-1)^{(p-1)p/2} i_P eta = <eta, P> at equal grades
        let c = chart4();
        let eta = Form::from_terms(&c, 2, [
            (vec![0, 1], s(&c, "a1")),
            (vec![1, 2], s(&c, "b2 - a2")),
        ])
        .unwrap();
        let p = Multivector::from_terms(&c, 2, [
            (vec![0, 1], s(&c, "b1")),
            (vec![0, 3], s(&c, "2")),
        ])
        .unwrap();
        let expected = pair(&eta, &p).unwrap();
        let ip = interior_by_multivector(&p, &eta).unwrap().as_scalar().unwrap();
        let je = interior_by_form(&eta, &p).unwrap();
        assert_eq!(ip.mul_int(interior_sign(2)), expected);
        assert_eq!(je, Multivector::constant(&c, expected));
    }

    #[test]
    fn exterior_derivative_basics() {
        let c = chart2();
        // d(x dy) = dx ^ dy
        let x_dy = Form::from_terms(&c, 1, [(vec![1], s(&c, "x"))]).unwrap();
        let d = x_dy.exterior_derivative();
        assert_eq!(d.coefficient(&[0, 1]), Scalar::one(2));
        // d^2 = 0 on a messier form
        let eta = Form::from_terms(&c, 0, [(vec![], s(&c, "x^2*y/(y - 1)"))]).unwrap();
        assert!(eta.exterior_derivative().exterior_derivative().is_zero());
        // closed constant-coefficient form
        let omega = Form::from_terms(&chart4(), 2, [(vec![0, 2], Scalar::one(4)), (vec![1, 3], Scalar::one(4))]).unwrap();
        assert!(omega.exterior_derivative().is_zero());
    }

    #[test]
    fn unordered_term_input_normalizes() {
        let c = chart2();
        let a = Form::from_terms(&c, 2, [(vec![1, 0], Scalar::one(2))]).unwrap();
        let b = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::from_int(2, -1))]).unwrap();
        assert_eq!(a, b);
        // repeated index collapses to zero
        let z = Form::from_terms(&c, 2, [(vec![0, 0], Scalar::one(2))]).unwrap();
        assert!(z.is_zero());
        // arity mismatch is rejected
        assert!(Form::from_terms(&c, 2, [(vec![0], Scalar::one(2))]).is_err());
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let c = chart2();
        let other = Chart::new(["u", "v"]).unwrap();
        let a = Form::coordinate(&c, 0);
        let b = Form::coordinate(&other, 0);
        assert!(matches!(a.wedge(&b), Err(Error::ChartMismatch)));
    }

    #[test]
    fn bivector_sharp_on_standard_structure() {
        // Lambda0 = ∂a1^∂b1 + ∂a2^∂b2: sharp(da_i) = ∂b_i, sharp(db_i) = -∂a_i
        let c = chart4();
        let one = Scalar::one(4);
        let l = Multivector::from_terms(&c, 2, [(vec![0, 2], one.clone()), (vec![1, 3], one)]).unwrap();
        assert_eq!(
            bivector_sharp_one(&l, &Form::coordinate(&c, 0)).unwrap(),
            Multivector::coordinate(&c, 2)
        );
        assert_eq!(
            bivector_sharp_one(&l, &Form::coordinate(&c, 2)).unwrap(),
            Multivector::coordinate(&c, 0).neg()
        );
        // hamiltonian field of a1*b1: {a1*b1, .}
        let h = s(&c, "a1*b1");
        let x_h = bivector_sharp_one(&l, &Form::differential(&c, &h)).unwrap();
        assert_eq!(x_h.coefficient(&[2]), s(&c, "b1"));
        assert_eq!(x_h.coefficient(&[0]), s(&c, "-a1"));
    }
}
