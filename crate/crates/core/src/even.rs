//! Poisson brackets with prescribed Casimirs on even-dimensional charts.
//!
//! Given an almost symplectic structure, a list of 2n-2k prescribed Casimir
//! functions and a compatible 2-form `sigma`, the construction builds the
//! bivector `sharp(sigma)` two independent ways — through the top-form
//! expression `Phi` pulled back by the volume duality, and directly through
//! the sharp isomorphism — and verifies eagerly that the two agree, that the
//! prescribed functions are Casimirs, that the coordinate Jacobi sums vanish
//! and that the rank bound holds.
//!
//! Odd-rank corner: for k = 1 the interpolation term `g/(k-1)` is singular
//! and the bracket degenerates to the Jacobian form
//! `{h1,h2} Omega = -(g/f) dh1 ^ dh2 ^ df_1 ^ ... ^ df_{2n-2}`; `bracket`
//! dispatches there automatically.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{bivector_bracket, bivector_sharp_one, increasing_tuples, pair, Form, Multivector};
use crate::linalg::Matrix;
use crate::par;
use crate::report::{CheckItem, VerificationReport};
use crate::scalar::Scalar;
use crate::symplectic::AlmostSymplectic;
use crate::volume::{is_poisson, jacobi_report, VolumeStructure};

/// The Casimir pairing factor
/// `f = <df_1 ^ ... ^ df_{2n-2k}, lambda0^{n-k}/(n-k)!>`, computed both as
/// stated and through the dual expression
/// `<omega0^{n-k}/(n-k)!, X_{f_1} ^ ... ^ X_{f_{2n-2k}}>`; the two must
/// agree identically. Errors when the factor vanishes identically.
pub fn casimir_factor(structure: &AlmostSymplectic, casimirs: &[Scalar]) -> Result<Scalar> {
    let n = structure.half_dim();
    if casimirs.is_empty() || casimirs.len() % 2 != 0 || casimirs.len() / 2 > n {
        return Err(Error::InvalidProblem(format!(
            "need a positive even number of Casimirs, at most {}, got {}",
            2 * n,
            casimirs.len()
        )));
    }
    let k = n - casimirs.len() / 2;
    let chart = structure.chart();
    let mut dfs = Form::one(chart);
    let mut fields = Multivector::one(chart);
    for f in casimirs {
        dfs = dfs.wedge(&Form::differential(chart, f))?;
        fields = fields.wedge(&structure.hamiltonian_field(f)?)?;
    }
    let primary = pair(&dfs, &structure.lambda_power(n - k)?)?;
    let dual = pair(&structure.omega_power(n - k)?, &fields)?;
    if primary != dual {
        return Err(Error::RouteMismatch(format!(
            "casimir factor: pairing route gives {primary}, hamiltonian route gives {dual}"
        )));
    }
    if primary.is_zero() {
        return Err(Error::DegenerateCasimirs);
    }
    Ok(primary)
}

/// An even-dimensional prescribed-Casimir problem with its derived data.
#[derive(Debug, Clone)]
pub struct EvenProblem {
    structure: AlmostSymplectic,
    casimirs: Vec<Scalar>,
    k: usize,
    sigma: Form,
    f: Scalar,
    g: Scalar,
    hamiltonian_fields: Vec<Multivector>,
}

impl EvenProblem {
    /// Assembles the problem, computing `f` (erroring when it vanishes),
    /// `g = i_{lambda0} sigma` and the hamiltonian fields of the Casimirs.
    /// Compatibility of `sigma` is *not* enforced here; see
    /// [`EvenProblem::verify_casimir_section`] and
    /// [`EvenProblem::build_poisson`].
    pub fn new(
        structure: AlmostSymplectic,
        casimirs: Vec<Scalar>,
        k: usize,
        sigma: Form,
    ) -> Result<Self> {
        let n = structure.half_dim();
        if casimirs.len() != 2 * n - 2 * k {
            return Err(Error::InvalidProblem(format!(
                "k = {k} on a {}-dimensional chart needs {} Casimirs, got {}",
                2 * n,
                2 * n - 2 * k,
                casimirs.len()
            )));
        }
        if sigma.chart() != structure.chart() || sigma.grade() != 2 {
            return Err(Error::InvalidProblem("sigma must be a 2-form on the structure chart".into()));
        }
        let f = casimir_factor(&structure, &casimirs)?;
        let g = structure.contract_lambda0(&sigma)?.as_scalar()?;
        let hamiltonian_fields = casimirs
            .iter()
            .map(|c| structure.hamiltonian_field(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvenProblem { structure, casimirs, k, sigma, f, g, hamiltonian_fields })
    }

    pub fn structure(&self) -> &AlmostSymplectic {
        &self.structure
    }

    pub fn chart(&self) -> &Chart {
        self.structure.chart()
    }

    pub fn casimirs(&self) -> &[Scalar] {
        &self.casimirs
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> &Form {
        &self.sigma
    }

    /// The Casimir pairing factor.
    pub fn f(&self) -> &Scalar {
        &self.f
    }

    /// `g = i_{lambda0} sigma`.
    pub fn g(&self) -> &Scalar {
        &self.g
    }

    pub fn hamiltonian_fields(&self) -> &[Multivector] {
        &self.hamiltonian_fields
    }

    /// The bivector `sharp(sigma)` (the sharp route).
    pub fn bivector(&self) -> Result<Multivector> {
        self.structure.sharp(&self.sigma)
    }

    /// Checks that `sigma` is a valid section for the prescribed Casimirs:
    /// it annihilates every hamiltonian field `X_{f_i}`, has rank exactly
    /// `2k` over the fraction field, and the factor satisfies
    /// `f^2 = det({f_i, f_j}_0)`.
    pub fn verify_casimir_section(&self) -> Result<VerificationReport> {
        let mut report = VerificationReport::new();
        let chart = self.chart();
        for (i, field) in self.hamiltonian_fields.iter().enumerate() {
            let contraction = crate::exterior::interior_by_multivector(field, &self.sigma)?;
            report.push(CheckItem::from_bool(
                format!("sigma annihilates X_f{}", i + 1),
                contraction.is_zero(),
                format!("sigma(X_f{}, .) = {contraction}", i + 1),
            ));
        }
        let rank = self.sigma.rank()?;
        report.push(CheckItem::from_bool(
            format!("rank(sigma) = 2k = {}", 2 * self.k),
            rank == 2 * self.k,
            format!("rank over the fraction field is {rank}"),
        ));
        let r = self.casimirs.len();
        let gram = Matrix::from_fn(chart.dim(), r, r, |i, j| {
            self.structure
                .bracket0(&self.casimirs[i], &self.casimirs[j])
                .expect("same chart")
        });
        let det = gram.det(chart.dim());
        let f_squared = self.f.mul_ref(&self.f);
        report.push(CheckItem::from_bool(
            "f^2 = det({f_i, f_j}_0)",
            det == f_squared,
            format!("det = {det}, f^2 = {f_squared}"),
        ));
        Ok(report)
    }

    /// The `(2n-2)`-form
    /// `Phi = -(1/f)(sigma + g/(k-1) omega0) ^ omega0^{k-2}/(k-2)!
    ///        ^ df_1 ^ ... ^ df_{2n-2k}`
    /// whose image under the volume duality is the bivector. Requires
    /// `k >= 2`; the construction errors when the duality image disagrees
    /// with `sharp(sigma)` (which happens exactly when `sigma` is not a
    /// section annihilating the Casimir fields).
    pub fn build_phi(&self) -> Result<Form> {
        if self.k < 2 {
            return Err(Error::NeedsJacobianRoute(self.k));
        }
        let chart = self.chart();
        let m = chart.dim();
        let g_over = self.g.mul_rat(&num::BigRational::new(1.into(), ((self.k - 1) as i64).into()));
        let core = self.sigma.add(&self.structure.omega0().scale(&g_over));
        let mut phi = core.wedge(&self.structure.omega_power(self.k - 2)?)?;
        for c in &self.casimirs {
            phi = phi.wedge(&Form::differential(chart, c))?;
        }
        phi = phi.scale(&self.f.inverse()?.neg_ref());
        debug_assert_eq!(phi.grade(), m - 2);
        // the theorem's core identity: the duality image of Phi is sharp(sigma)
        let via_duality = self.structure.volume().psi_inverse(&phi)?;
        let via_sharp = self.bivector()?;
        if via_duality != via_sharp {
            return Err(Error::RouteMismatch(
                "psi_inverse(Phi) != sharp(sigma); sigma is not a section annihilating the Casimir fields"
                    .into(),
            ));
        }
        Ok(phi)
    }

    /// The bracket `{h1, h2}` by the top-form route:
    /// `{h1,h2} Omega = dh1 ^ dh2 ^ Phi`. For `k = 1` this dispatches to the
    /// Jacobian form with coefficient `-g/f`.
    pub fn bracket(&self, h1: &Scalar, h2: &Scalar) -> Result<Scalar> {
        let chart = self.chart();
        if self.k == 1 {
            let coefficient = self.g.neg_ref().checked_div(&self.f)?;
            return jacobian_bracket(
                self.structure.volume(),
                &self.casimirs,
                &coefficient,
                h1,
                h2,
            );
        }
        let phi = self.build_phi()?;
        let top = Form::differential(chart, h1)
            .wedge(&Form::differential(chart, h2))?
            .wedge(&phi)?;
        self.structure.volume().top_coefficient(&top)
    }

    /// Builds the Poisson bivector with its eager verification bundle.
    /// Errors when `sigma` fails the complementary condition.
    pub fn build_poisson(&self) -> Result<PoissonCandidate> {
        if !self.structure.check_complementary(&self.sigma)? {
            return Err(Error::ComplementaryConditionFailed);
        }
        let lambda = self.bivector()?;
        let mut checks = VerificationReport::new();
        checks.push(CheckItem::pass("2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})"));
        checks.extend(jacobi_report(&lambda)?);
        for (i, (c, field)) in self.casimirs.iter().zip(&self.hamiltonian_fields).enumerate() {
            let _ = field;
            let image = bivector_sharp_one(&lambda, &Form::differential(self.chart(), c))?;
            checks.push(CheckItem::from_bool(
                format!("prescribed Casimir f{} is annihilated", i + 1),
                image.is_zero(),
                format!("sharp(df{}) = {image}", i + 1),
            ));
        }
        let rank = lambda.rank()?;
        checks.push(CheckItem::from_bool(
            format!("rank(bivector) <= 2k = {}", 2 * self.k),
            rank <= 2 * self.k,
            format!("rank = {rank}"),
        ));
        if self.k >= 2 {
            // two-route agreement is enforced inside build_phi
            let phi_ok = self.build_phi().is_ok();
            checks.push(CheckItem::from_bool(
                "psi_inverse(Phi) = sharp(sigma)",
                phi_ok,
                "duality route disagrees with the sharp route",
            ));
        }
        Ok(PoissonCandidate {
            problem: self.clone(),
            lambda,
            rank,
            checks,
        })
    }

    /// Bracket table over coordinate pairs `i < j`, listing nonzero entries
    /// only. Pairs fan out across threads with the `parallel` feature.
    pub fn bracket_table(&self) -> Result<Vec<(usize, usize, Scalar)>> {
        let chart = self.chart().clone();
        let m = chart.dim();
        // bind Phi once (k >= 2) so each pair is a single wedge
        let phi = if self.k >= 2 { Some(self.build_phi()?) } else { None };
        let volume = self.structure.volume();
        let pairs = increasing_tuples(m, 2);
        let entries = par::map_collect(pairs, |idx| {
            let (i, j) = (idx[0], idx[1]);
            let value = match &phi {
                Some(phi) => {
                    let top = Form::coordinate(&chart, i)
                        .wedge(&Form::coordinate(&chart, j))
                        .and_then(|w| w.wedge(phi))
                        .expect("same chart");
                    volume.top_coefficient(&top).expect("top grade")
                }
                None => self
                    .bracket(&Scalar::var(m, i), &Scalar::var(m, j))
                    .expect("k = 1 route"),
            };
            (i, j, value)
        });
        Ok(entries.into_iter().filter(|(_, _, v)| !v.is_zero()).collect())
    }
}

/// A constructed bivector together with its cached verification bundle.
#[derive(Debug, Clone)]
pub struct PoissonCandidate {
    problem: EvenProblem,
    lambda: Multivector,
    rank: usize,
    checks: VerificationReport,
}

impl PoissonCandidate {
    pub fn problem(&self) -> &EvenProblem {
        &self.problem
    }

    pub fn bivector(&self) -> &Multivector {
        &self.lambda
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn checks(&self) -> &VerificationReport {
        &self.checks
    }

    pub fn all_verified(&self) -> bool {
        self.checks.all_passed()
    }

    /// The bracket through the bivector: `{h1, h2} = lambda(dh1, dh2)`.
    pub fn bracket(&self, h1: &Scalar, h2: &Scalar) -> Result<Scalar> {
        bivector_bracket(&self.lambda, h1, h2)
    }
}

/// The Jacobian-type bracket on an arbitrary chart with a volume form:
/// `{g, h} Omega = coefficient * dg ^ dh ^ df_1 ^ ... ^ df_l`.
/// Poisson of rank at most 2, with every `f_i` a Casimir.
pub fn jacobian_bracket(
    volume: &VolumeStructure,
    casimirs: &[Scalar],
    coefficient: &Scalar,
    h1: &Scalar,
    h2: &Scalar,
) -> Result<Scalar> {
    let chart = volume.chart();
    let m = chart.dim();
    if casimirs.len() + 2 != m {
        return Err(Error::InvalidProblem(format!(
            "the Jacobian bracket on a {m}-dimensional chart needs {} Casimirs, got {}",
            m - 2,
            casimirs.len()
        )));
    }
    let mut top = Form::differential(chart, h1).wedge(&Form::differential(chart, h2))?;
    for c in casimirs {
        top = top.wedge(&Form::differential(chart, c))?;
    }
    Ok(volume.top_coefficient(&top)?.mul_ref(coefficient))
}

/// The Jacobian bracket as a bivector (for verification): the unique `L`
/// with `L(dx_i, dx_j)` equal to the bracket of the coordinates.
pub fn jacobian_bivector(
    volume: &VolumeStructure,
    casimirs: &[Scalar],
    coefficient: &Scalar,
) -> Result<Multivector> {
    let chart = volume.chart();
    let m = chart.dim();
    let mut terms = Vec::new();
    for idx in increasing_tuples(m, 2) {
        let value = jacobian_bracket(
            volume,
            casimirs,
            coefficient,
            &Scalar::var(m, idx[0]),
            &Scalar::var(m, idx[1]),
        )?;
        terms.push((idx, value));
    }
    Multivector::from_terms(chart, 2, terms)
}

/// The prescribed-kernel generalization: the same top-form bracket with the
/// exact differentials `df_i` replaced by arbitrary independent 1-forms
/// `alpha_i`. The resulting bivector annihilates every `alpha_i` but carries
/// no Jacobi guarantee.
pub fn bracket_with_kernel(
    structure: &AlmostSymplectic,
    alphas: &[Form],
    sigma: &Form,
    h1: &Scalar,
    h2: &Scalar,
) -> Result<Scalar> {
    let chart = structure.chart();
    let n = structure.half_dim();
    if alphas.is_empty() || alphas.len() % 2 != 0 || alphas.len() / 2 > n {
        return Err(Error::InvalidProblem(format!(
            "need a positive even number of kernel forms, at most {}, got {}",
            2 * n,
            alphas.len()
        )));
    }
    let k = n - alphas.len() / 2;
    let mut alpha_wedge = Form::one(chart);
    for a in alphas {
        if a.grade() != 1 {
            return Err(Error::GradeMismatch(a.grade(), 1));
        }
        alpha_wedge = alpha_wedge.wedge(a)?;
    }
    let f = pair(&alpha_wedge, &structure.lambda_power(n - k)?)?;
    if f.is_zero() {
        return Err(Error::DegenerateCasimirs);
    }
    let g = structure.contract_lambda0(sigma)?.as_scalar()?;
    let dh = Form::differential(chart, h1).wedge(&Form::differential(chart, h2))?;
    if k == 1 {
        let top = dh.wedge(&alpha_wedge)?;
        let coefficient = g.neg_ref().checked_div(&f)?;
        return Ok(structure.volume().top_coefficient(&top)?.mul_ref(&coefficient));
    }
    let g_over = g.mul_rat(&num::BigRational::new(1.into(), ((k - 1) as i64).into()));
    let core = sigma.add(&structure.omega0().scale(&g_over));
    let top = dh
        .wedge(&core)?
        .wedge(&structure.omega_power(k - 2)?)?
        .wedge(&alpha_wedge)?;
    let value = structure.volume().top_coefficient(&top)?;
    value.checked_div(&f.neg_ref())
}

/// Convenience: full three-route Poisson verdict for a bivector built by
/// this module (coordinate Jacobi, Schouten square, volume condition).
pub fn poisson_verdicts(structure: &AlmostSymplectic, l: &Multivector) -> Result<(bool, bool, bool)> {
    crate::volume::poisson_three_routes(structure.volume(), l)
}

/// Re-exported here for callers working at the even-problem level.
pub fn bivector_is_poisson(l: &Multivector) -> Result<bool> {
    is_poisson(l)
}
