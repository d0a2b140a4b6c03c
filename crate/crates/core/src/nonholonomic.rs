//! Almost Poisson brackets of nonholonomically constrained systems.
//!
//! On the cotangent chart `(q^1..q^n, p_1..p_n)` with the structure
//! `omega0 = sum dp_s ^ dq^s`, a hamiltonian `H` and constraint 1-forms
//! `zeta^i = zeta^i_s(q) dq^s` determine the constraint functions
//! `f^i = zeta^i_s dH/dp_s`, the vertical fields `Z^i = zeta^i_s d/dp_s`
//! and the symmetric matrix `C^{ij} = zeta^i_s (d2H/dp_s dp_t) zeta^j_t`.
//! When `C` is invertible the constrained bracket is the bivector
//!
//! ```text
//! lambda_nh = lambda0 + C_lm X_{f^l} ^ Z^m
//!             + 1/2 C_ij {f^j, f^l}_0 C_lm Z^i ^ Z^m
//! ```
//!
//! whose kernel is spanned by the `df^i` and the (pulled back) `zeta^i`.
//! The bracket satisfies the Jacobi identity exactly when the constraints
//! are holonomic; both outcomes are exercised in the tests.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::even::bracket_with_kernel;
use crate::exterior::{Form, Multivector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symplectic::AlmostSymplectic;

/// A constrained mechanical system on a cotangent chart.
#[derive(Debug, Clone)]
pub struct NonholonomicData {
    structure: AlmostSymplectic,
    dof: usize,
    hamiltonian: Scalar,
    /// Constraint 1-forms `zeta^i`, pulled back to the full chart.
    constraint_forms: Vec<Form>,
    /// `f^i = zeta^i_s dH/dp_s`.
    constraint_functions: Vec<Scalar>,
    /// `Z^i = zeta^i_s d/dp_s`.
    vertical_fields: Vec<Multivector>,
    /// Inverse of `C^{ij}`.
    c_inverse: Matrix,
}

impl NonholonomicData {
    /// `chart` must be ordered `(q^1..q^n, p_1..p_n)`; each constraint is
    /// given by its coefficients `zeta^i_s` (functions of `q` only, one per
    /// configuration coordinate).
    pub fn new(chart: &Chart, hamiltonian: Scalar, constraints: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = chart.dim();
        if m % 2 != 0 {
            return Err(Error::OddDimension(m));
        }
        let dof = m / 2;
        if constraints.is_empty() || constraints.len() >= dof {
            return Err(Error::InvalidProblem(format!(
                "need between 1 and {} constraints, got {}",
                dof - 1,
                constraints.len()
            )));
        }
        // omega0 = sum dp_s ^ dq^s
        let omega0 = Form::from_terms(
            chart,
            2,
            (0..dof).map(|s| (vec![dof + s, s], Scalar::one(m))),
        )?;
        let structure = AlmostSymplectic::new(chart, omega0)?;
        let mut constraint_forms = Vec::new();
        let mut vertical_fields = Vec::new();
        let mut constraint_functions = Vec::new();
        for (idx, coeffs) in constraints.iter().enumerate() {
            if coeffs.len() != dof {
                return Err(Error::InvalidProblem(format!(
                    "constraint {idx} must have exactly {dof} coefficients"
                )));
            }
            for c in coeffs {
                for p_index in dof..m {
                    if !c.partial(p_index).is_zero() {
                        return Err(Error::InvalidProblem(format!(
                            "constraint {idx} coefficients must depend on configuration coordinates only"
                        )));
                    }
                }
            }
            constraint_forms.push(Form::from_terms(
                chart,
                1,
                coeffs.iter().enumerate().map(|(s, c)| (vec![s], c.clone())),
            )?);
            vertical_fields.push(Multivector::from_terms(
                chart,
                1,
                coeffs.iter().enumerate().map(|(s, c)| (vec![dof + s], c.clone())),
            )?);
            let f_i = coeffs
                .iter()
                .enumerate()
                .fold(Scalar::zero(m), |acc, (s, c)| {
                    acc.add_ref(&c.mul_ref(&hamiltonian.partial(dof + s)))
                });
            constraint_functions.push(f_i);
        }
        // C^{ij} = zeta^i_s (d2H / dp_s dp_t) zeta^j_t
        let r = constraints.len();
        let cmatrix = Matrix::from_fn(m, r, r, |i, j| {
            let mut acc = Scalar::zero(m);
            for s in 0..dof {
                for t in 0..dof {
                    let hess = hamiltonian.partial(dof + s).partial(dof + t);
                    if hess.is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&constraints[i][s].mul_ref(&hess).mul_ref(&constraints[j][t]));
                }
            }
            acc
        });
        let c_inverse = cmatrix
            .inverse(m)
            .map_err(|_| Error::Degenerate("the constraint matrix C is singular".into()))?;
        Ok(NonholonomicData {
            structure,
            dof,
            hamiltonian,
            constraint_forms,
            constraint_functions,
            vertical_fields,
            c_inverse,
        })
    }

    pub fn structure(&self) -> &AlmostSymplectic {
        &self.structure
    }

    pub fn chart(&self) -> &Chart {
        self.structure.chart()
    }

    pub fn hamiltonian(&self) -> &Scalar {
        &self.hamiltonian
    }

    pub fn constraint_forms(&self) -> &[Form] {
        &self.constraint_forms
    }

    pub fn constraint_functions(&self) -> &[Scalar] {
        &self.constraint_functions
    }

    pub fn vertical_fields(&self) -> &[Multivector] {
        &self.vertical_fields
    }

    /// Rank parameter: the kernel has `2(n - k)` generators where `n - k` is
    /// the constraint count, so `k = dof - constraints`.
    pub fn k(&self) -> usize {
        self.dof - self.constraint_functions.len()
    }

    /// The constrained bivector (see the module docs).
    pub fn bivector(&self) -> Result<Multivector> {
        let r = self.constraint_functions.len();
        let fields: Vec<Multivector> = self
            .constraint_functions
            .iter()
            .map(|f| self.structure.hamiltonian_field(f))
            .collect::<Result<_>>()?;
        let mut lambda = self.structure.lambda0().clone();
        for l in 0..r {
            for mm in 0..r {
                let c_lm = self.c_inverse.at(l, mm);
                if c_lm.is_zero() {
                    continue;
                }
                lambda = lambda.add(&fields[l].wedge(&self.vertical_fields[mm])?.scale(c_lm));
            }
        }
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    for mm in 0..r {
                        let c_ij = self.c_inverse.at(i, j);
                        let c_lm = self.c_inverse.at(l, mm);
                        if c_ij.is_zero() || c_lm.is_zero() {
                            continue;
                        }
                        let jl = self
                            .structure
                            .bracket0(&self.constraint_functions[j], &self.constraint_functions[l])?;
                        let coeff = c_ij
                            .mul_ref(&jl)
                            .mul_ref(c_lm)
                            .mul_rat(&num::BigRational::new(1.into(), 2.into()));
                        lambda = lambda.add(
                            &self.vertical_fields[i].wedge(&self.vertical_fields[mm])?.scale(&coeff),
                        );
                    }
                }
            }
        }
        Ok(lambda)
    }

    /// The section whose sharp is the constrained bivector:
    /// `sigma = omega0 - C_lm df^l ^ zeta^m
    ///          + 1/2 C_ij {f^j,f^l}_0 C_lm zeta^i ^ zeta^m`.
    pub fn sigma(&self) -> Result<Form> {
        let chart = self.chart();
        let r = self.constraint_functions.len();
        let dfs: Vec<Form> = self
            .constraint_functions
            .iter()
            .map(|f| Form::differential(chart, f))
            .collect();
        let mut sigma = self.structure.omega0().clone();
        for l in 0..r {
            for mm in 0..r {
                let c_lm = self.c_inverse.at(l, mm);
                if c_lm.is_zero() {
                    continue;
                }
                sigma = sigma.sub(&dfs[l].wedge(&self.constraint_forms[mm])?.scale(c_lm));
            }
        }
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    for mm in 0..r {
                        let c_ij = self.c_inverse.at(i, j);
                        let c_lm = self.c_inverse.at(l, mm);
                        if c_ij.is_zero() || c_lm.is_zero() {
                            continue;
                        }
                        let jl = self
                            .structure
                            .bracket0(&self.constraint_functions[j], &self.constraint_functions[l])?;
                        let coeff = c_ij
                            .mul_ref(&jl)
                            .mul_ref(c_lm)
                            .mul_rat(&num::BigRational::new(1.into(), 2.into()));
                        sigma = sigma.add(
                            &self.constraint_forms[i]
                                .wedge(&self.constraint_forms[mm])?
                                .scale(&coeff),
                        );
                    }
                }
            }
        }
        Ok(sigma)
    }

    /// All `2(n-k)` kernel 1-forms: the `df^i` followed by the `zeta^i`.
    pub fn kernel_forms(&self) -> Vec<Form> {
        let chart = self.chart();
        self.constraint_functions
            .iter()
            .map(|f| Form::differential(chart, f))
            .chain(self.constraint_forms.iter().cloned())
            .collect()
    }

    /// The constrained bracket by direct expansion:
    /// `{H1,H2}_nh = {H1,H2}_0 + C_lm {f^l,H1}_0 <dH2, Z^m>
    ///               - C_lm {f^l,H2}_0 <dH1, Z^m>
    ///               + C_ij {f^j,f^l}_0 C_lm <dH1,Z^i> <dH2,Z^m>`.
    pub fn bracket_direct(&self, h1: &Scalar, h2: &Scalar) -> Result<Scalar> {
        let r = self.constraint_functions.len();
        let z_h1: Vec<Scalar> = self
            .vertical_fields
            .iter()
            .map(|z| z.apply_to_scalar(h1))
            .collect::<Result<_>>()?;
        let z_h2: Vec<Scalar> = self
            .vertical_fields
            .iter()
            .map(|z| z.apply_to_scalar(h2))
            .collect::<Result<_>>()?;
        let mut acc = self.structure.bracket0(h1, h2)?;
        for l in 0..r {
            for mm in 0..r {
                let c_lm = self.c_inverse.at(l, mm);
                if c_lm.is_zero() {
                    continue;
                }
                let fl_h1 = self.structure.bracket0(&self.constraint_functions[l], h1)?;
                let fl_h2 = self.structure.bracket0(&self.constraint_functions[l], h2)?;
                acc = acc.add_ref(&c_lm.mul_ref(&fl_h1).mul_ref(&z_h2[mm]));
                acc = acc.sub_ref(&c_lm.mul_ref(&fl_h2).mul_ref(&z_h1[mm]));
            }
        }
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    for mm in 0..r {
                        let c_ij = self.c_inverse.at(i, j);
                        let c_lm = self.c_inverse.at(l, mm);
                        if c_ij.is_zero() || c_lm.is_zero() {
                            continue;
                        }
                        let jl = self
                            .structure
                            .bracket0(&self.constraint_functions[j], &self.constraint_functions[l])?;
                        acc = acc.add_ref(
                            &c_ij.mul_ref(&jl).mul_ref(c_lm).mul_ref(&z_h1[i]).mul_ref(&z_h2[mm]),
                        );
                    }
                }
            }
        }
        Ok(acc)
    }

    /// The constrained bracket through the prescribed-kernel top-form route.
    pub fn bracket_via_kernel(&self, h1: &Scalar, h2: &Scalar) -> Result<Scalar> {
        bracket_with_kernel(&self.structure, &self.kernel_forms(), &self.sigma()?, h1, h2)
    }
}
