//! Problem files: the on-disk description of a construction or verification
//! run, and its conversion to engine objects.
//!
//! The format is TOML with named sections; every scalar is an expression
//! string in the chart's coordinates, and every tensor is a list of
//! `{ coeff, wedge }` terms where `wedge` names the coordinate factors in
//! any order. Files emitted by `fixture` re-parse to equal problems.

use casimir_core::cosymplectic::{AlmostCosymplectic, OddProblem};
use casimir_core::dirac::DiracData;
use casimir_core::even::EvenProblem;
use casimir_core::fixtures::{Fixture, FixtureProblem};
use casimir_core::nonholonomic::NonholonomicData;
use casimir_core::volume::VolumeStructure;
use casimir_core::{AlmostSymplectic, Chart, Form, Multivector, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermEntry {
    pub coeff: String,
    pub wedge: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub omega0: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta0: Vec<TermEntry>,
    #[serde(default, rename = "Theta0", skip_serializing_if = "Vec::is_empty")]
    pub big_theta0: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintRow {
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneFormRow {
    pub terms: Vec<TermEntry>,
}

/// The declarative problem description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub mode: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub casimirs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tau: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bivector: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<OneFormRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

/// A problem file resolved into engine objects.
pub enum LoadedProblem {
    Even(EvenProblem),
    Odd(OddProblem),
    VerifyEven {
        structure: AlmostSymplectic,
        bivector: Multivector,
        casimirs: Vec<Scalar>,
        k: Option<usize>,
    },
    VerifyOdd {
        structure: AlmostCosymplectic,
        bivector: Multivector,
        casimirs: Vec<Scalar>,
        k: Option<usize>,
    },
    Dirac(DiracData),
    Nonholonomic(NonholonomicData),
    Kernel {
        structure: AlmostSymplectic,
        alphas: Vec<Form>,
        sigma: Form,
    },
    Jacobian {
        volume: VolumeStructure,
        casimirs: Vec<Scalar>,
        coefficient: Scalar,
    },
}

fn bail(msg: impl Into<String>) -> anyhow::Error {
    anyhow::anyhow!("{}", msg.into())
}

fn parse_terms_as<T>(
    chart: &Chart,
    grade: usize,
    terms: &[TermEntry],
    build: impl Fn(&Chart, usize, Vec<(Vec<usize>, Scalar)>) -> casimir_core::Result<T>,
) -> anyhow::Result<T> {
    let mut parsed = Vec::new();
    for t in terms {
        let coeff = chart.parse(&t.coeff)?;
        let mut indices = Vec::new();
        for name in &t.wedge {
            indices.push(chart.index_of(name)?);
        }
        if indices.len() != grade {
            return Err(bail(format!(
                "term {{{} ; {:?}}} must have {grade} wedge factors",
                t.coeff, t.wedge
            )));
        }
        parsed.push((indices, coeff));
    }
    Ok(build(chart, grade, parsed)?)
}

pub fn parse_form(chart: &Chart, grade: usize, terms: &[TermEntry]) -> anyhow::Result<Form> {
    parse_terms_as(chart, grade, terms, |c, g, t| Form::from_terms(c, g, t))
}

pub fn parse_multivector(
    chart: &Chart,
    grade: usize,
    terms: &[TermEntry],
) -> anyhow::Result<Multivector> {
    parse_terms_as(chart, grade, terms, |c, g, t| Multivector::from_terms(c, g, t))
}

fn form_to_terms(chart: &Chart, form: &Form) -> Vec<TermEntry> {
    form.terms()
        .map(|(key, coeff)| TermEntry {
            coeff: coeff.render(chart),
            wedge: key.iter().map(|&i| chart.name(i).to_string()).collect(),
        })
        .collect()
}

impl ProblemFile {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn chart(&self) -> anyhow::Result<Chart> {
        if self.coordinates.len() != self.dimension {
            return Err(bail(format!(
                "dimension = {} but {} coordinates given",
                self.dimension,
                self.coordinates.len()
            )));
        }
        Ok(Chart::new(self.coordinates.clone())?)
    }

    fn even_structure(&self, chart: &Chart) -> anyhow::Result<AlmostSymplectic> {
        let section = self
            .structure
            .as_ref()
            .ok_or_else(|| bail("missing [structure] section"))?;
        if section.kind != "even" {
            return Err(bail(format!("mode `{}` needs an even structure", self.mode)));
        }
        let omega0 = parse_form(chart, 2, &section.omega0)?;
        Ok(AlmostSymplectic::new(chart, omega0)?)
    }

    fn odd_structure(&self, chart: &Chart) -> anyhow::Result<AlmostCosymplectic> {
        let section = self
            .structure
            .as_ref()
            .ok_or_else(|| bail("missing [structure] section"))?;
        if section.kind != "odd" {
            return Err(bail(format!("mode `{}` needs an odd structure", self.mode)));
        }
        let theta0 = parse_form(chart, 1, &section.theta0)?;
        let big = parse_form(chart, 2, &section.big_theta0)?;
        Ok(AlmostCosymplectic::new(chart, theta0, big)?)
    }

    fn parsed_casimirs(&self, chart: &Chart) -> anyhow::Result<Vec<Scalar>> {
        self.casimirs
            .iter()
            .map(|c| Ok(chart.parse(c)?))
            .collect()
    }

    /// Resolves the file into engine objects, validating consistency.
    pub fn load(&self) -> anyhow::Result<LoadedProblem> {
        if let Some(name) = &self.fixture {
            if self.mode == "fixture" {
                let fixture = casimir_core::fixtures::by_name(name)?;
                return Ok(match fixture.problem {
                    FixtureProblem::Even(p) => LoadedProblem::Even(p),
                    FixtureProblem::Odd(p) => LoadedProblem::Odd(p),
                    FixtureProblem::Jacobian { volume, casimirs, coefficient } => {
                        LoadedProblem::Jacobian { volume, casimirs, coefficient }
                    }
                });
            }
        }
        let chart = self.chart()?;
        let kind = self
            .structure
            .as_ref()
            .map(|s| s.kind.as_str())
            .unwrap_or("none");
        match self.mode.as_str() {
            "construct" => {
                let casimirs = self.parsed_casimirs(&chart)?;
                let k = self.k.ok_or_else(|| bail("construct mode needs k"))?;
                if kind == "even" {
                    if self.dimension % 2 != 0 {
                        return Err(bail("even structure on an odd-dimensional chart"));
                    }
                    let structure = self.even_structure(&chart)?;
                    let sigma = parse_form(&chart, 2, &self.sigma)?;
                    Ok(LoadedProblem::Even(EvenProblem::new(structure, casimirs, k, sigma)?))
                } else if kind == "odd" {
                    let structure = self.odd_structure(&chart)?;
                    let sigma = parse_form(&chart, 2, &self.sigma)?;
                    let tau = if self.tau.is_empty() {
                        Form::zero(&chart, 1)
                    } else {
                        parse_form(&chart, 1, &self.tau)?
                    };
                    Ok(LoadedProblem::Odd(OddProblem::new(structure, casimirs, k, sigma, tau)?))
                } else {
                    Err(bail("construct mode needs a [structure] with kind = \"even\" or \"odd\""))
                }
            }
            "verify" => {
                let casimirs = self.parsed_casimirs(&chart)?;
                if self.bivector.is_empty() && !self.sigma.is_empty() {
                    // sigma-level input verifies through the construct path
                    let mut as_construct = self.clone();
                    as_construct.mode = "construct".into();
                    return as_construct.load();
                }
                let bivector = parse_multivector(&chart, 2, &self.bivector)?;
                if kind == "even" {
                    Ok(LoadedProblem::VerifyEven {
                        structure: self.even_structure(&chart)?,
                        bivector,
                        casimirs,
                        k: self.k,
                    })
                } else if kind == "odd" {
                    Ok(LoadedProblem::VerifyOdd {
                        structure: self.odd_structure(&chart)?,
                        bivector,
                        casimirs,
                        k: self.k,
                    })
                } else {
                    Err(bail("verify mode needs a [structure] section"))
                }
            }
            "dirac" => {
                let structure = self.even_structure(&chart)?;
                let constraints = self.parsed_casimirs(&chart)?;
                Ok(LoadedProblem::Dirac(DiracData::new(structure, constraints)?))
            }
            "nonholonomic" => {
                let hamiltonian = chart.parse(
                    self.hamiltonian
                        .as_ref()
                        .ok_or_else(|| bail("nonholonomic mode needs a hamiltonian"))?,
                )?;
                let mut rows = Vec::new();
                for row in &self.constraints {
                    let coeffs: Vec<Scalar> = row
                        .coeffs
                        .iter()
                        .map(|c| Ok::<_, anyhow::Error>(chart.parse(c)?))
                        .collect::<anyhow::Result<_>>()?;
                    rows.push(coeffs);
                }
                Ok(LoadedProblem::Nonholonomic(NonholonomicData::new(
                    &chart,
                    hamiltonian,
                    rows,
                )?))
            }
            "kernel" => {
                let structure = self.even_structure(&chart)?;
                let sigma = parse_form(&chart, 2, &self.sigma)?;
                let alphas: Vec<Form> = self
                    .alphas
                    .iter()
                    .map(|row| parse_form(&chart, 1, &row.terms))
                    .collect::<anyhow::Result<_>>()?;
                if alphas.is_empty() {
                    return Err(bail("kernel mode needs at least one alpha 1-form"));
                }
                Ok(LoadedProblem::Kernel { structure, alphas, sigma })
            }
            "jacobian" => {
                let casimirs = self.parsed_casimirs(&chart)?;
                let coefficient = chart.parse(self.coefficient.as_deref().unwrap_or("1"))?;
                Ok(LoadedProblem::Jacobian {
                    volume: VolumeStructure::standard(&chart),
                    casimirs,
                    coefficient,
                })
            }
            other => Err(bail(format!(
                "unknown mode `{other}` (expected construct, verify, dirac, nonholonomic, kernel, jacobian or fixture)"
            ))),
        }
    }

    /// The declarative form of a fixture, suitable for writing to disk.
    pub fn from_fixture(fixture: &Fixture) -> anyhow::Result<ProblemFile> {
        let chart = fixture.chart().clone();
        let coordinates: Vec<String> = chart.coords().to_vec();
        match &fixture.problem {
            FixtureProblem::Even(p) => Ok(ProblemFile {
                mode: "construct".into(),
                dimension: chart.dim(),
                coordinates,
                k: Some(p.k()),
                structure: Some(StructureSection {
                    kind: "even".into(),
                    omega0: form_to_terms(&chart, p.structure().omega0()),
                    theta0: Vec::new(),
                    big_theta0: Vec::new(),
                }),
                casimirs: p.casimirs().iter().map(|c| c.render(&chart)).collect(),
                sigma: form_to_terms(&chart, p.sigma()),
                tau: Vec::new(),
                bivector: Vec::new(),
                alphas: Vec::new(),
                coefficient: None,
                hamiltonian: None,
                constraints: Vec::new(),
                fixture: None,
            }),
            FixtureProblem::Odd(p) => Ok(ProblemFile {
                mode: "construct".into(),
                dimension: chart.dim(),
                coordinates,
                k: Some(p.k()),
                structure: Some(StructureSection {
                    kind: "odd".into(),
                    omega0: Vec::new(),
                    theta0: form_to_terms(&chart, p.structure().theta0()),
                    big_theta0: form_to_terms(&chart, p.structure().big_theta0()),
                }),
                casimirs: p.casimirs().iter().map(|c| c.render(&chart)).collect(),
                sigma: form_to_terms(&chart, p.sigma()),
                tau: form_to_terms(&chart, p.tau()),
                bivector: Vec::new(),
                alphas: Vec::new(),
                coefficient: None,
                hamiltonian: None,
                constraints: Vec::new(),
                fixture: None,
            }),
            FixtureProblem::Jacobian { volume, casimirs, coefficient } => {
                let chart = volume.chart();
                Ok(ProblemFile {
                    mode: "jacobian".into(),
                    dimension: chart.dim(),
                    coordinates: chart.coords().to_vec(),
                    k: None,
                    structure: None,
                    casimirs: casimirs.iter().map(|c| c.render(chart)).collect(),
                    sigma: Vec::new(),
                    tau: Vec::new(),
                    bivector: Vec::new(),
                    alphas: Vec::new(),
                    coefficient: Some(coefficient.render(chart)),
                    hamiltonian: None,
                    constraints: Vec::new(),
                    fixture: None,
                })
            }
        }
    }
}
