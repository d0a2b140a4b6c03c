//! Dirac brackets for second-class constraints.
//!
//! Given a symplectic structure and constraints `f_1, ..., f_{2n-2k}` whose
//! mutual bracket matrix is invertible over the fraction field, the 2-form
//! `sigma = omega0 + sum_{i<j} c_ij df_i ^ df_j` (with `c` the inverse
//! matrix) is a maximal-rank section annihilating every constraint field,
//! and the induced bivector `lambda0 + sum_{i<j} c_ij X_{f_i} ^ X_{f_j}` is
//! the constrained bracket.

use crate::error::{Error, Result};
use crate::even::EvenProblem;
use crate::exterior::{Form, Multivector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symplectic::AlmostSymplectic;

/// A constrained-bracket instance: structure, constraints and the exact
/// inverse of their mutual bracket matrix.
#[derive(Debug, Clone)]
pub struct DiracData {
    structure: AlmostSymplectic,
    constraints: Vec<Scalar>,
    k: usize,
    /// `cmatrix[i][j] = c_ij`, inverse of `({f_i, f_j}_0)`.
    cmatrix: Matrix,
}

impl DiracData {
    pub fn new(structure: AlmostSymplectic, constraints: Vec<Scalar>) -> Result<Self> {
        let n = structure.half_dim();
        let r = constraints.len();
        if r == 0 || r % 2 != 0 || r / 2 > n {
            return Err(Error::InvalidProblem(format!(
                "need a positive even number of constraints, at most {}, got {r}",
                2 * n
            )));
        }
        let k = n - r / 2;
        let m = structure.chart().dim();
        let gram = Matrix::from_fn(m, r, r, |i, j| {
            structure
                .bracket0(&constraints[i], &constraints[j])
                .expect("same chart")
        });
        let cmatrix = gram
            .inverse(m)
            .map_err(|_| Error::Degenerate("the constraint bracket matrix ({f_i,f_j}_0) is singular".into()))?;
        Ok(DiracData { structure, constraints, k, cmatrix })
    }

    pub fn structure(&self) -> &AlmostSymplectic {
        &self.structure
    }

    pub fn constraints(&self) -> &[Scalar] {
        &self.constraints
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c_entry(&self, i: usize, j: usize) -> &Scalar {
        self.cmatrix.at(i, j)
    }

    /// The 2-form `sigma = omega0 + sum_{i<j} c_ij df_i ^ df_j`.
    pub fn sigma(&self) -> Result<Form> {
        let chart = self.structure.chart();
        let mut sigma = self.structure.omega0().clone();
        let dfs: Vec<Form> = self
            .constraints
            .iter()
            .map(|f| Form::differential(chart, f))
            .collect();
        for i in 0..self.constraints.len() {
            for j in (i + 1)..self.constraints.len() {
                sigma = sigma.add(&dfs[i].wedge(&dfs[j])?.scale(self.c_entry(i, j)));
            }
        }
        Ok(sigma)
    }

    /// The constrained problem: the prescribed-Casimir instance built on
    /// `sigma()` with the constraints as Casimirs.
    pub fn problem(&self) -> Result<EvenProblem> {
        EvenProblem::new(
            self.structure.clone(),
            self.constraints.clone(),
            self.k,
            self.sigma()?,
        )
    }

    /// The constrained bivector
    /// `lambda0 + sum_{i<j} c_ij X_{f_i} ^ X_{f_j}` (the classical
    /// expression; equals `sharp(sigma)`).
    pub fn bivector(&self) -> Result<Multivector> {
        let mut lambda = self.structure.lambda0().clone();
        let fields: Vec<Multivector> = self
            .constraints
            .iter()
            .map(|f| self.structure.hamiltonian_field(f))
            .collect::<Result<_>>()?;
        for i in 0..fields.len() {
            for j in (i + 1)..fields.len() {
                lambda = lambda.add(&fields[i].wedge(&fields[j])?.scale(self.c_entry(i, j)));
            }
        }
        Ok(lambda)
    }

    /// The constrained bracket by the top-form expression
    /// `{h1,h2} Omega = (1/f) dh1 ^ dh2 ^ omega0^{k-1}/(k-1)!
    ///                  ^ df_1 ^ ... ^ df_{2n-2k}`.
    pub fn bracket(&self, h1: &Scalar, h2: &Scalar) -> Result<Scalar> {
        let chart = self.structure.chart();
        let f = crate::even::casimir_factor(&self.structure, &self.constraints)?;
        let mut top = Form::differential(chart, h1)
            .wedge(&Form::differential(chart, h2))?
            .wedge(&self.structure.omega_power(self.k - 1)?)?;
        for c in &self.constraints {
            top = top.wedge(&Form::differential(chart, c))?;
        }
        self.structure.volume().top_coefficient(&top)?.checked_div(&f)
    }
}
