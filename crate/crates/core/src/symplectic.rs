//! Almost symplectic structures and the star calculus they induce.
//!
//! An [`AlmostSymplectic`] bundles a nondegenerate 2-form with its inverse
//! bivector (under the convention that the grade-1 sharp inverts
//! `X -> -omega0(X, ·)`), the induced volume form `omega0^n / n!` and its
//! dual. On top of it live the sharp extension to all grades, the star
//! operator, effective forms, the Lepage decomposition, the codifferential
//! `delta = star d star`, and the complementary-form condition
//! `2 sigma ^ delta(sigma) = delta(sigma ^ sigma)` that characterizes when
//! `sharp(sigma)` is Poisson.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{bivector_sharp, bivector_sharp_one, interior_by_multivector, Form, Multivector};
use crate::scalar::Scalar;
use crate::volume::VolumeStructure;

/// A nondegenerate 2-form with its inverse bivector and induced volume.
#[derive(Debug, Clone)]
pub struct AlmostSymplectic {
    chart: Chart,
    half_dim: usize,
    omega0: Form,
    lambda0: Multivector,
    volume: VolumeStructure,
}

impl AlmostSymplectic {
    /// Builds the structure from a 2-form, inverting its coefficient matrix
    /// exactly. Errors when the chart dimension is odd or the form is
    /// degenerate as a rational-function matrix.
    pub fn new(chart: &Chart, omega0: Form) -> Result<Self> {
        let m = chart.dim();
        if m % 2 != 0 {
            return Err(Error::OddDimension(m));
        }
        if omega0.chart() != chart {
            return Err(Error::ChartMismatch);
        }
        if omega0.grade() != 2 {
            return Err(Error::GradeMismatch(omega0.grade(), 2));
        }
        let n = m / 2;
        // W[i][j] = omega0(∂_i, ∂_j); lambda0's matrix is -W^{-1}, which
        // makes sharp on 1-forms invert X -> -omega0(X, ·).
        let w = omega0.coefficient_matrix()?;
        let det = w.det(m);
        if det.is_zero() {
            return Err(Error::Degenerate(
                "omega0 has identically vanishing determinant".into(),
            ));
        }
        let w_inv = w.inverse(m)?;
        let mut terms = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                terms.push((vec![i, j], w_inv.at(i, j).neg_ref()));
            }
        }
        let lambda0 = Multivector::from_terms(chart, 2, terms)?;
        let omega_top = omega0.wedge_power_over_factorial(n)?;
        let volume = VolumeStructure::new(chart, omega_top)
            .map_err(|_| Error::Degenerate("omega0^n/n! vanishes".into()))?;
        let structure = AlmostSymplectic {
            chart: chart.clone(),
            half_dim: n,
            omega0,
            lambda0,
            volume,
        };
        // construction invariant: the full contraction equals -n
        let trace = structure.contract_lambda0(&structure.omega0)?.as_scalar()?;
        if trace != Scalar::from_int(m, -(n as i64)) {
            return Err(Error::Degenerate(format!(
                "i_lambda0(omega0) = {trace} instead of -{n}"
            )));
        }
        Ok(structure)
    }

    /// The standard structure `sum dq_i ^ dp_i` on a chart ordered as
    /// `(q_1..q_n, p_1..p_n)`.
    pub fn standard(chart: &Chart) -> Result<Self> {
        let m = chart.dim();
        if m % 2 != 0 {
            return Err(Error::OddDimension(m));
        }
        let n = m / 2;
        let omega0 = Form::from_terms(chart, 2, (0..n).map(|i| (vec![i, n + i], Scalar::one(m))))?;
        AlmostSymplectic::new(chart, omega0)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Half the chart dimension.
    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn omega0(&self) -> &Form {
        &self.omega0
    }

    pub fn lambda0(&self) -> &Multivector {
        &self.lambda0
    }

    pub fn volume(&self) -> &VolumeStructure {
        &self.volume
    }

    /// `omega0^k / k!`.
    pub fn omega_power(&self, k: usize) -> Result<Form> {
        self.omega0.wedge_power_over_factorial(k)
    }

    /// `lambda0^k / k!`.
    pub fn lambda_power(&self, k: usize) -> Result<Multivector> {
        self.lambda0.wedge_power_over_factorial(k)
    }

    /// `i_{lambda0} phi`.
    pub fn contract_lambda0(&self, phi: &Form) -> Result<Form> {
        interior_by_multivector(&self.lambda0, phi)
    }

    /// The sharp extension `lambda0^#` on forms of any grade; multiplicative
    /// over the wedge, inverts the flat map on grade 1.
    pub fn sharp(&self, zeta: &Form) -> Result<Multivector> {
        bivector_sharp(&self.lambda0, zeta)
    }

    /// Inverse of [`Self::sharp`]: the form corresponding to a multivector.
    pub fn sharp_inverse(&self, p: &Multivector) -> Result<Form> {
        if p.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let m = self.chart.dim();
        // flat images of the coordinate fields: flat(∂_b) = sum_i W[i][b] dx_i
        let w = self.omega0.coefficient_matrix()?;
        let flats: Vec<Form> = (0..m)
            .map(|b| Form::from_terms(&self.chart, 1, (0..m).map(|i| (vec![i], w.at(i, b).clone()))))
            .collect::<Result<_>>()?;
        let mut acc = Form::zero(&self.chart, p.grade());
        for (key, coeff) in p.terms() {
            let mut product = Form::one(&self.chart);
            for &b in key {
                product = product.wedge(&flats[b])?;
            }
            acc = acc.add(&product.scale(coeff));
        }
        Ok(acc)
    }

    /// The hamiltonian vector field `sharp(df)`.
    pub fn hamiltonian_field(&self, f: &Scalar) -> Result<Multivector> {
        bivector_sharp_one(&self.lambda0, &Form::differential(&self.chart, f))
    }

    /// The bracket induced by `omega0`: `{f, g} = lambda0(df, dg)`.
    pub fn bracket0(&self, f: &Scalar, g: &Scalar) -> Result<Scalar> {
        crate::exterior::bivector_bracket(&self.lambda0, f, g)
    }

    /// The star operator
    /// `star(phi) = (-1)^{(p-1)p/2} i_{sharp(phi)} omega0^n/n!`,
    /// an involution mapping grade p to grade 2n-p.
    pub fn star(&self, phi: &Form) -> Result<Form> {
        if phi.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        self.volume.psi(&self.sharp(phi)?)
    }

    /// A form is effective when `i_{lambda0} phi = 0`.
    pub fn is_effective(&self, phi: &Form) -> Result<bool> {
        Ok(self.contract_lambda0(phi)?.is_zero())
    }

    /// Lepage decomposition of a form of grade `p <= n`: the unique list
    /// `[psi_p, psi_{p-2}, ...]` of effective forms with
    /// `phi = sum_s psi_{p-2s} ^ omega0^s/s!`.
    ///
    /// Components are peeled top-down by iterating `i_{lambda0}`: on the
    /// component `psi ^ omega0^s/s!` the s-fold contraction acts as a
    /// rational multiple of `psi`, and that multiple depends only on
    /// (n, grade, s), so it is computed once on a scratch Darboux chart
    /// where an explicit effective form is available.
    pub fn lepage_decompose(&self, phi: &Form) -> Result<Vec<Form>> {
        if phi.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let n = self.half_dim;
        let p = phi.grade();
        if p > n {
            return Err(Error::InvalidGrade {
                grade: p,
                reason: format!("the decomposition applies to grades <= n = {n}"),
            });
        }
        let q = p / 2;
        let mut components = vec![Form::zero(&self.chart, 0); q + 1];
        let mut rest = phi.clone();
        for s in (0..=q).rev() {
            let mut contracted = rest.clone();
            for _ in 0..s {
                contracted = self.contract_lambda0(&contracted)?;
            }
            let kappa = lepage_trace_constant(n, p - 2 * s, s)?;
            if kappa == num::BigRational::from_integer(0.into()) {
                if !contracted.is_zero() {
                    return Err(Error::Degenerate(
                        "contraction trace vanished on a nonzero component".into(),
                    ));
                }
                components[s] = Form::zero(&self.chart, p - 2 * s);
                continue;
            }
            let inv = Scalar::from_rational(self.chart.dim(), kappa).inverse()?;
            let psi = contracted.scale(&inv);
            rest = rest.sub(&psi.wedge(&self.omega_power(s)?)?);
            components[s] = psi;
        }
        if !rest.is_zero() {
            return Err(Error::Degenerate("decomposition did not exhaust the form".into()));
        }
        // components[s] is psi_{p-2s}, i.e. the list reads [psi_p, psi_{p-2}, ...]
        Ok(components)
    }

    /// The codifferential `delta = star d star`, of degree -1 and square 0.
    pub fn codifferential(&self, phi: &Form) -> Result<Form> {
        self.star(&self.star(phi)?.exterior_derivative())
    }

    /// The complementary-form condition:
    /// `2 sigma ^ delta(sigma) = delta(sigma ^ sigma)`. Exactly when it
    /// holds, `sharp(sigma)` is a Poisson bivector.
    pub fn check_complementary(&self, sigma: &Form) -> Result<bool> {
        if sigma.grade() != 2 {
            return Err(Error::GradeMismatch(sigma.grade(), 2));
        }
        let delta_sigma = self.codifferential(sigma)?;
        let square = sigma.wedge(sigma)?;
        let lhs = sigma.wedge(&delta_sigma)?.scale_int(2);
        let rhs = self.codifferential(&square)?;
        Ok(lhs.sub(&rhs).is_zero())
    }
}

/// The scalar by which the s-fold contraction `(i_{lambda0})^s` acts on
/// `psi ^ omega0^s/s!` for an effective r-form `psi`. Depends only on
/// (n, r, s); computed exactly on a scratch Darboux chart using the
/// effective form `dq_1 ^ ... ^ dq_r`.
fn lepage_trace_constant(n: usize, r: usize, s: usize) -> Result<num::BigRational> {
    use num::Zero;
    if s == 0 {
        return Ok(num::BigRational::from_integer(1.into()));
    }
    let names: Vec<String> = (0..n)
        .map(|i| format!("q{i}"))
        .chain((0..n).map(|i| format!("p{i}")))
        .collect();
    let chart = Chart::new(names)?;
    let structure = AlmostSymplectic::standard(&chart)?;
    let psi = if r == 0 {
        Form::one(&chart)
    } else {
        Form::from_terms(&chart, r, [((0..r).collect(), Scalar::one(2 * n))])?
    };
    let mut probe = psi.wedge(&structure.omega_power(s)?)?;
    for _ in 0..s {
        probe = structure.contract_lambda0(&probe)?;
    }
    if probe.is_zero() {
        return Ok(num::BigRational::zero());
    }
    let lead = probe.coefficient(&(0..r).collect::<Vec<_>>());
    lead.as_constant()
        .ok_or_else(|| Error::Degenerate("contraction trace is not constant".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{increasing_tuples, pair};

    fn darboux(n: usize) -> (Chart, AlmostSymplectic) {
        let names: Vec<String> = (1..=n)
            .map(|i| format!("q{i}"))
            .chain((1..=n).map(|i| format!("p{i}")))
            .collect();
        let chart = Chart::new(names).unwrap();
        let s = AlmostSymplectic::standard(&chart).unwrap();
        (chart, s)
    }

    #[test]
    fn standard_inverse_pair() {
        let (c, s) = darboux(2);
        // lambda0 = ∂q1^∂p1 + ∂q2^∂p2
        assert_eq!(s.lambda0().coefficient(&[0, 2]), Scalar::one(4));
        assert_eq!(s.lambda0().coefficient(&[1, 3]), Scalar::one(4));
        assert_eq!(s.lambda0().num_terms(), 2);
        // sharp(dq1) = ∂p1
        let x = s.sharp(&Form::coordinate(&c, 0)).unwrap();
        assert_eq!(x, Multivector::coordinate(&c, 2));
        // volume pairs to one with its dual
        assert!(pair(s.volume().omega(), s.volume().omega_dual()).unwrap().is_one());
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let c = Chart::new(["x", "y", "u", "v"]).unwrap();
        let omega = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::one(4))]).unwrap();
        assert!(matches!(AlmostSymplectic::new(&c, omega), Err(Error::Degenerate(_))));
        let odd = Chart::new(["x", "y", "z"]).unwrap();
        let bad = Form::zero(&odd, 2);
        assert!(matches!(AlmostSymplectic::new(&odd, bad), Err(Error::OddDimension(3))));
    }

    #[test]
    fn sharp_inverse_round_trips() {
        let (c, s) = darboux(2);
        assert_eq!(s.sharp(s.omega0()).unwrap(), *s.lambda0());
        assert_eq!(s.sharp_inverse(s.lambda0()).unwrap(), *s.omega0());
        let sigma = Form::from_terms(&c, 2, [
            (vec![0, 1], c.parse("q1*p2").unwrap()),
            (vec![0, 2], c.parse("1 - q2").unwrap()),
            (vec![2, 3], c.parse("p1^2").unwrap()),
        ])
        .unwrap();
        let round = s.sharp_inverse(&s.sharp(&sigma).unwrap()).unwrap();
        assert_eq!(round, sigma);
    }

    #[test]
    fn sharp_matches_sign_definition() {
        // lambda^#(zeta)(a1,..,ap) = (-1)^p zeta(lambda^#(a1),..,lambda^#(ap))
        let (c, s) = darboux(2);
        let zeta = Form::from_terms(&c, 2, [
            (vec![0, 3], c.parse("q1").unwrap()),
            (vec![1, 2], c.parse("p1 - q2").unwrap()),
        ])
        .unwrap();
        let image = s.sharp(&zeta).unwrap();
        for pair_idx in increasing_tuples(4, 2) {
            let a1 = Form::coordinate(&c, pair_idx[0]);
            let a2 = Form::coordinate(&c, pair_idx[1]);
            let lhs = pair(&a1.wedge(&a2).unwrap(), &image).unwrap();
            let v1 = s.sharp(&a1).unwrap();
            let v2 = s.sharp(&a2).unwrap();
            // (-1)^2 zeta(v1, v2)
            let rhs = zeta.apply(&[v1, v2]).unwrap();
            assert_eq!(lhs, rhs, "sign definition fails on {pair_idx:?}");
        }
    }

    #[test]
    fn star_powers_of_omega() {
        // star(omega^k/k!) = omega^{n-k}/(n-k)! for n = 3, k = 1
        let (_, s) = darboux(3);
        let lhs = s.star(&s.omega_power(1).unwrap()).unwrap();
        let rhs = s.omega_power(2).unwrap();
        assert_eq!(lhs, rhs);
        // star(1) = volume
        let one = Form::one(s.chart());
        assert_eq!(s.star(&one).unwrap(), *s.volume().omega());
    }

    #[test]
    fn star_is_an_involution() {
        let (c, s) = darboux(2);
        let phi = Form::from_terms(&c, 2, [
            (vec![0, 1], c.parse("q1^2").unwrap()),
            (vec![1, 3], c.parse("p2 + 1").unwrap()),
            (vec![2, 3], c.parse("q2*p1").unwrap()),
        ])
        .unwrap();
        assert_eq!(s.star(&s.star(&phi).unwrap()).unwrap(), phi);
        let psi = Form::from_terms(&c, 1, [(vec![2], c.parse("q1/(p1 - 1)").unwrap())]).unwrap();
        assert_eq!(s.star(&s.star(&psi).unwrap()).unwrap(), psi);
    }

    #[test]
    fn effective_forms() {
        let (c, s) = darboux(2);
        // dq1 ^ dq2 pairs no q with p: effective
        let psi = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::one(4))]).unwrap();
        assert!(s.is_effective(&psi).unwrap());
        // omega0 itself satisfies i_{lambda0} omega0 = -n != 0
        assert!(!s.is_effective(s.omega0()).unwrap());
        let trace = s.contract_lambda0(s.omega0()).unwrap().as_scalar().unwrap();
        assert_eq!(trace, Scalar::from_int(4, -2));
    }

    #[test]
    fn effective_adjoint_formula() {
        // star(psi) = (-1)^{p(p+1)/2} psi ^ omega^{n-p}/(n-p)! for effective psi
        let (c, s) = darboux(3);
        let psi = Form::from_terms(&c, 2, [
            (vec![0, 1], c.parse("q3").unwrap()),
            (vec![1, 2], c.parse("q1 - 1").unwrap()),
        ])
        .unwrap();
        assert!(s.is_effective(&psi).unwrap());
        let lhs = s.star(&psi).unwrap();
        let sign = if (2 * 3 / 2) % 2 == 0 { 1 } else { -1 };
        let rhs = psi.wedge(&s.omega_power(1).unwrap()).unwrap().scale_int(sign);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lepage_decomposition_of_a_two_form() {
        // grade 2: psi0 = i_lambda(sigma)/i_lambda(omega) = -g/n, psi2 = sigma - psi0*omega
        let (c, s) = darboux(2);
        let sigma = Form::from_terms(&c, 2, [
            (vec![0, 2], c.parse("q1*q2").unwrap()),
            (vec![0, 1], c.parse("p1").unwrap()),
            (vec![1, 3], c.parse("2").unwrap()),
        ])
        .unwrap();
        let parts = s.lepage_decompose(&sigma).unwrap();
        assert_eq!(parts.len(), 2);
        let (psi2, psi0) = (&parts[0], &parts[1]);
        assert!(s.is_effective(psi2).unwrap());
        let g = s.contract_lambda0(&sigma).unwrap().as_scalar().unwrap();
        let minus_g_over_n = g.mul_rat(&num::BigRational::new((-1).into(), 2.into()));
        assert_eq!(psi0.as_scalar().unwrap(), minus_g_over_n);
        let rebuilt = psi2.add(&psi0.wedge(s.omega0()).unwrap());
        assert_eq!(rebuilt, sigma);
    }

    #[test]
    fn lepage_reconstructs_grade_three() {
        let (c, s) = darboux(3);
        let phi = Form::from_terms(&c, 3, [
            (vec![0, 1, 2], c.parse("q1").unwrap()),
            (vec![0, 3, 4], c.parse("p2 - q3").unwrap()),
            (vec![2, 4, 5], c.parse("1/2").unwrap()),
            (vec![1, 2, 5], c.parse("q2*p3").unwrap()),
        ])
        .unwrap();
        let parts = s.lepage_decompose(&phi).unwrap();
        assert_eq!(parts.len(), 2);
        let mut rebuilt = Form::zero(&c, 3);
        for (idx, psi) in parts.iter().enumerate() {
            assert!(s.is_effective(psi).unwrap(), "component {idx} not effective");
            rebuilt = rebuilt.add(&psi.wedge(&s.omega_power(idx).unwrap()).unwrap());
        }
        assert_eq!(rebuilt, phi);
        // effective input decomposes as itself
        let eff = Form::from_terms(&c, 2, [(vec![0, 1], c.parse("p3").unwrap())]).unwrap();
        let single = s.lepage_decompose(&eff).unwrap();
        assert_eq!(single[0], eff);
        assert!(single[1].is_zero());
    }

    #[test]
    fn codifferential_squares_to_zero() {
        let (c, s) = darboux(2);
        // constant-coefficient form with constant omega0: delta = 0
        let constant = Form::from_terms(&c, 2, [(vec![0, 1], Scalar::one(4))]).unwrap();
        assert!(s.codifferential(&constant).unwrap().is_zero());
        let phi = Form::from_terms(&c, 2, [
            (vec![0, 2], c.parse("q1^2*p2").unwrap()),
            (vec![1, 2], c.parse("q2 + p1").unwrap()),
        ])
        .unwrap();
        let d1 = s.codifferential(&phi).unwrap();
        assert!(s.codifferential(&d1).unwrap().is_zero());
    }

    #[test]
    fn complementary_condition_on_omega() {
        let (_, s) = darboux(2);
        assert!(s.check_complementary(s.omega0()).unwrap());
    }

    #[test]
    fn psi_inverse_equals_sharp_of_star() {
        // cross-module identity: psi_inverse(zeta) = sharp(star(zeta))
        let (c, s) = darboux(2);
        let zeta = Form::from_terms(&c, 2, [
            (vec![0, 1], c.parse("q1*p1").unwrap()),
            (vec![0, 3], c.parse("q2 - p2").unwrap()),
        ])
        .unwrap();
        let lhs = s.volume().psi_inverse(&zeta).unwrap();
        let rhs = s.sharp(&s.star(&zeta).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // and psi(P) = star(sharp_inverse(P))
        let p = Multivector::from_terms(&c, 2, [(vec![1, 2], c.parse("q1").unwrap())]).unwrap();
        assert_eq!(
            s.volume().psi(&p).unwrap(),
            s.star(&s.sharp_inverse(&p).unwrap()).unwrap()
        );
    }
}
