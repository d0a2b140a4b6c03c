//! Worked structures used as exact regression instances.
//!
//! Each fixture carries its problem data together with the expected nonzero
//! bracket table (canonical coordinate-name pairs, `i < j`), the expected
//! pairing factor and trace, and the expected generic rank, all as data so
//! regressions are byte-comparable after canonicalization.

use crate::chart::Chart;
use crate::cosymplectic::{AlmostCosymplectic, OddProblem};
use crate::error::{Error, Result};
use crate::even::EvenProblem;
use crate::exterior::Form;
use crate::scalar::Scalar;
use crate::symplectic::AlmostSymplectic;
use crate::volume::VolumeStructure;

/// The problem payload of a fixture.
#[derive(Debug, Clone)]
pub enum FixtureProblem {
    Even(EvenProblem),
    Odd(OddProblem),
    /// A Jacobian-type bracket: volume, Casimirs, coefficient function.
    Jacobian {
        volume: VolumeStructure,
        casimirs: Vec<Scalar>,
        coefficient: Scalar,
    },
}

/// A named instance with frozen expected values.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub problem: FixtureProblem,
    /// Expected nonzero brackets `(left, right, value)` by coordinate name,
    /// left index < right index, in index order.
    pub expected_table: Vec<(String, String, String)>,
    /// Expected pairing factor `f`, when the fixture has one.
    pub expected_f: Option<String>,
    /// Expected trace `g = i_{lambda0} sigma`, when applicable.
    pub expected_g: Option<String>,
    /// Expected generic rank of the constructed bivector.
    pub expected_rank: usize,
}

impl Fixture {
    pub fn chart(&self) -> &Chart {
        match &self.problem {
            FixtureProblem::Even(p) => p.chart(),
            FixtureProblem::Odd(p) => p.chart(),
            FixtureProblem::Jacobian { volume, .. } => volume.chart(),
        }
    }

    /// The computed nonzero bracket table in canonical order.
    pub fn bracket_table(&self) -> Result<Vec<(usize, usize, Scalar)>> {
        match &self.problem {
            FixtureProblem::Even(p) => p.bracket_table(),
            FixtureProblem::Odd(p) => p.bracket_table(),
            FixtureProblem::Jacobian { volume, casimirs, coefficient } => {
                let m = volume.chart().dim();
                let mut out = Vec::new();
                for idx in crate::exterior::increasing_tuples(m, 2) {
                    let value = crate::even::jacobian_bracket(
                        volume,
                        casimirs,
                        coefficient,
                        &Scalar::var(m, idx[0]),
                        &Scalar::var(m, idx[1]),
                    )?;
                    if !value.is_zero() {
                        out.push((idx[0], idx[1], value));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Renders the computed table with coordinate names, for comparison with
    /// `expected_table`.
    pub fn rendered_table(&self) -> Result<Vec<(String, String, String)>> {
        let chart = self.chart().clone();
        Ok(self
            .bracket_table()?
            .into_iter()
            .map(|(i, j, v)| {
                (chart.name(i).to_string(), chart.name(j).to_string(), v.render(&chart))
            })
            .collect())
    }
}

/// Chart `(a_1..a_n, b_1..b_n)` used by the lattice fixtures.
fn lattice_chart(n: usize) -> Result<Chart> {
    Chart::new(
        (1..=n)
            .map(|i| format!("a{i}"))
            .chain((1..=n).map(|i| format!("b{i}")))
            .collect::<Vec<_>>(),
    )
}

fn lattice_casimirs(chart: &Chart, n: usize) -> Result<(Scalar, Scalar)> {
    let m = chart.dim();
    let mut c1 = Scalar::zero(m);
    for i in 0..n {
        c1 = c1.add_ref(&Scalar::var(m, n + i));
    }
    let mut c2 = Scalar::one(m);
    for i in 0..n {
        c2 = c2.mul_ref(&Scalar::var(m, i));
    }
    Ok((c1, c2))
}

/// The linear lattice structure with nearest-neighbour couplings on the
/// periodic chain of `n` particles (n >= 3): the prescribed Casimirs are the
/// momentum sum and the product of the off-diagonal variables, and the
/// section is built from the differences `da_j - da_{j+1}` and
/// `a_j db_j - a_{j+1} db_{j+1}`.
pub fn toda(n: usize) -> Result<Fixture> {
    if n < 3 {
        return Err(Error::InvalidProblem("the periodic lattice needs n >= 3".into()));
    }
    let chart = lattice_chart(n)?;
    let m = chart.dim();
    let structure = AlmostSymplectic::standard(&chart)?;
    let (c1, c2) = lattice_casimirs(&chart, n)?;
    // sigma = sum_{j<n} (da_j - da_{j+1}) ^ (sum_{l=j..n-1} a_l db_l - a_{l+1} db_{l+1})
    let mut sigma = Form::zero(&chart, 2);
    for j in 0..(n - 1) {
        let step = Form::from_terms(
            &chart,
            1,
            [(vec![j], Scalar::one(m)), (vec![j + 1], Scalar::from_int(m, -1))],
        )?;
        // telescoping sum: a_j db_j - a_n db_n
        let momenta = Form::from_terms(
            &chart,
            1,
            [
                (vec![n + j], Scalar::var(m, j)),
                (vec![2 * n - 1], Scalar::var(m, n - 1).neg_ref()),
            ],
        )?;
        sigma = sigma.add(&step.wedge(&momenta)?);
    }
    let problem = EvenProblem::new(structure, vec![c1, c2], n - 1, sigma)?;

    let mut expected_table = Vec::new();
    for i in 1..=n {
        let next = if i == n { 1 } else { i + 1 };
        expected_table.push((format!("a{i}"), format!("b{i}"), format!("a{i}")));
        if i < n {
            expected_table.push((format!("a{i}"), format!("b{next}"), format!("-a{i}")));
        } else {
            // wraps around: stored as (a_n, b_1) with i < j in index order
            expected_table.push((format!("a{n}"), "b1".to_string(), format!("-a{n}")));
        }
    }
    // canonical order: sort by (left index, right index)
    expected_table.sort_by_key(|(l, r, _)| {
        (chart.index_of(l).unwrap(), chart.index_of(r).unwrap())
    });
    let expected_f = render_lattice_factor(&chart, n)?;
    let expected_g = {
        let terms: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        format!("-{}", terms.join(" - "))
    };
    Ok(Fixture {
        name: format!("toda({n})"),
        problem: FixtureProblem::Even(problem),
        expected_table,
        expected_f: Some(expected_f),
        expected_g: Some(expected_g),
        expected_rank: 2 * n - 2,
    })
}

/// `f = -(sum over i of prod_{j != i} a_j)` rendered canonically.
fn render_lattice_factor(chart: &Chart, n: usize) -> Result<String> {
    let m = chart.dim();
    let mut f = Scalar::zero(m);
    for i in 0..n {
        let mut term = Scalar::one(m);
        for j in 0..n {
            if j != i {
                term = term.mul_ref(&Scalar::var(m, j));
            }
        }
        f = f.sub_ref(&term);
    }
    Ok(f.render(chart))
}

/// The quadratic companion structure on the same chart: the section
/// `sum_j (da_j ^ da_{j+1} + a_j a_{j+1} db_j ^ db_{j+1})` (indices cyclic)
/// yields the product of the quadratic lattice bracket in the `a` variables
/// with a constant bracket in the `b` variables. Rank drops by 2 when `n`
/// is even.
pub fn volterra_companion(n: usize) -> Result<Fixture> {
    if n < 3 {
        return Err(Error::InvalidProblem("the periodic lattice needs n >= 3".into()));
    }
    let chart = lattice_chart(n)?;
    let m = chart.dim();
    let structure = AlmostSymplectic::standard(&chart)?;
    let (c1, c2) = lattice_casimirs(&chart, n)?;
    let mut sigma_terms = Vec::new();
    for j in 0..n {
        let jn = (j + 1) % n;
        sigma_terms.push((vec![j, jn], Scalar::one(m)));
        sigma_terms.push((
            vec![n + j, n + jn],
            Scalar::var(m, j).mul_ref(&Scalar::var(m, jn)),
        ));
    }
    let sigma = Form::from_terms(&chart, 2, sigma_terms)?;
    let problem = EvenProblem::new(structure, vec![c1, c2], n - 1, sigma)?;

    let mut expected_table = Vec::new();
    for j in 1..=n {
        let jn = if j == n { 1 } else { j + 1 };
        let (l, r, sign) = if j < n { (j, jn, "") } else { (1, n, "-") };
        expected_table.push((format!("a{l}"), format!("a{r}"), format!("{sign}a{l}*a{r}")));
        expected_table.push((format!("b{l}"), format!("b{r}"), format!("{sign}1")));
    }
    expected_table.sort_by_key(|(l, r, _)| {
        (chart.index_of(l).unwrap(), chart.index_of(r).unwrap())
    });
    Ok(Fixture {
        name: format!("volterra_companion({n})"),
        problem: FixtureProblem::Even(problem),
        expected_table,
        expected_f: Some(render_lattice_factor(&chart, n)?),
        expected_g: Some("0".to_string()),
        expected_rank: if n % 2 == 0 { 2 * n - 4 } else { 2 * n - 2 },
    })
}

/// The linear bracket on the 9-dimensional matrix chart
/// `(x1, x2, x3, y1, y2, y3, z1, z2, z3)` built from the cosymplectic pair
/// `theta0 = dz3`, `Theta0 = dx1^dy1 + dx2^dy2 + dx3^dy3 + dz1^dz2`, with
/// the trace, the cyclic quadratic invariant and the `z` product as
/// prescribed Casimirs.
pub fn gl3() -> Result<Fixture> {
    let chart = Chart::new(["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3"])?;
    let m = chart.dim();
    let theta0 = Form::coordinate(&chart, 8);
    let big_theta0 = Form::from_terms(
        &chart,
        2,
        [
            (vec![0, 3], Scalar::one(m)),
            (vec![1, 4], Scalar::one(m)),
            (vec![2, 5], Scalar::one(m)),
            (vec![6, 7], Scalar::one(m)),
        ],
    )?;
    let structure = AlmostCosymplectic::new(&chart, theta0, big_theta0)?;
    let casimirs = vec![
        chart.parse("x1 + x2 + x3")?,
        chart.parse("y1*z2 + y2*z3 + y3*z1")?,
        chart.parse("z1*z2*z3")?,
    ];
    let term = |coeff: &str, a: &str, b: &str| -> Result<(Vec<usize>, Scalar)> {
        Ok((vec![chart.index_of(a)?, chart.index_of(b)?], chart.parse(coeff)?))
    };
    let sigma = Form::from_terms(
        &chart,
        2,
        [
            term("-z1", "x1", "x2")?,
            term("-z2", "x2", "x3")?,
            term("z3", "x1", "x3")?,
            term("-y1", "x1", "y1")?,
            term("y1", "x1", "y2")?,
            term("-y2", "x2", "y2")?,
            term("y2", "x2", "y3")?,
            term("-y3", "x3", "y3")?,
            term("y3", "x3", "y1")?,
            term("-z2", "y1", "z1")?,
            term("-z1", "y1", "z2")?,
            term("z2", "y2", "z1")?,
            term("z1", "y3", "z2")?,
        ],
    )?;
    let tau = Form::from_terms(
        &chart,
        1,
        [
            (vec![chart.index_of("y2")?], chart.parse("-z3")?),
            (vec![chart.index_of("y3")?], chart.parse("z3")?),
        ],
    )?;
    let problem = OddProblem::new(structure, casimirs, 3, sigma, tau)?;
    let expected_pairs = [
        ("x1", "y1", "-y1"),
        ("x1", "y3", "y3"),
        ("x1", "z1", "-z1"),
        ("x1", "z2", "z2"),
        ("x2", "y1", "y1"),
        ("x2", "y2", "-y2"),
        ("x2", "z2", "-z2"),
        ("x2", "z3", "z3"),
        ("x3", "y2", "y2"),
        ("x3", "y3", "-y3"),
        ("x3", "z1", "z1"),
        ("x3", "z3", "-z3"),
        ("y1", "y2", "-z1"),
        ("y1", "y3", "z3"),
        ("y2", "y3", "-z2"),
    ];
    let mut expected_table: Vec<(String, String, String)> = expected_pairs
        .iter()
        .map(|(l, r, v)| (l.to_string(), r.to_string(), v.to_string()))
        .collect();
    expected_table.sort_by_key(|(l, r, _)| {
        (chart.index_of(l).unwrap(), chart.index_of(r).unwrap())
    });
    Ok(Fixture {
        name: "gl3".to_string(),
        problem: FixtureProblem::Odd(problem),
        expected_table,
        // the odd-route factor; its suspension to M x R is the negative
        expected_f: Some("z1^2*z2 + z1*z2^2 + z1*z2*z3".to_string()),
        expected_g: Some("y1 + y2 + y3".to_string()),
        expected_rank: 6,
    })
}

/// The rank-2 Jacobian bracket on `(x, y, z)` with one prescribed Casimir
/// and unit coefficient; the expected table is derived on the spot from the
/// partial derivatives of the Casimir.
pub fn r3_jacobian(casimir: &str) -> Result<Fixture> {
    let chart = Chart::new(["x", "y", "z"])?;
    let f = chart.parse(casimir)?;
    let volume = VolumeStructure::standard(&chart);
    // {x,y} = f_z, {x,z} = -f_y, {y,z} = f_x
    let fx = f.partial(0);
    let fy = f.partial(1);
    let fz = f.partial(2);
    let mut expected_table = Vec::new();
    for (l, r, v) in [("x", "y", fz), ("x", "z", fy.neg_ref()), ("y", "z", fx)] {
        if !v.is_zero() {
            expected_table.push((l.to_string(), r.to_string(), v.render(&chart)));
        }
    }
    Ok(Fixture {
        name: format!("r3_jacobian({casimir})"),
        problem: FixtureProblem::Jacobian {
            volume,
            casimirs: vec![f],
            coefficient: Scalar::one(3),
        },
        expected_table,
        expected_f: None,
        expected_g: None,
        expected_rank: 2,
    })
}

/// Names understood by [`by_name`].
pub const FIXTURE_NAMES: &[&str] = &[
    "toda(n)      e.g. toda(3)",
    "volterra_companion(n)  e.g. volterra_companion(3)",
    "gl3",
    "r3_jacobian(expr)      e.g. r3_jacobian(x^2+y^2+z^2)",
];

/// Looks a fixture up by name: `toda(3)`, `toda3`, `volterra_companion(4)`,
/// `volterra4`, `gl3`, `r3_jacobian(x^2+y^2+z^2)`, `r3_jacobian`.
pub fn by_name(name: &str) -> Result<Fixture> {
    let name = name.trim();
    let unknown = || {
        Error::InvalidProblem(format!(
            "unknown fixture `{name}`; available fixtures:\n  {}",
            FIXTURE_NAMES.join("\n  ")
        ))
    };
    if name == "gl3" {
        return gl3();
    }
    if name == "r3_jacobian" {
        return r3_jacobian("x^2 + y^2 + z^2");
    }
    if let Some(rest) = name.strip_prefix("r3_jacobian(") {
        let expr = rest.strip_suffix(')').ok_or_else(unknown)?;
        return r3_jacobian(expr);
    }
    for (prefix, builder) in [
        ("toda", toda as fn(usize) -> Result<Fixture>),
        ("volterra_companion", volterra_companion),
        ("volterra", volterra_companion),
    ] {
        if let Some(rest) = name.strip_prefix(prefix) {
            let digits = rest.trim_start_matches('(').trim_end_matches(')');
            if let Ok(n) = digits.parse::<usize>() {
                return builder(n);
            }
        }
    }
    Err(unknown())
}
