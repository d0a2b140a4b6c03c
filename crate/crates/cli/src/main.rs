//! Command-line front end for the prescribed-Casimir bracket engine.
//!
//! ```text
//! casimir construct <file> [--format human|machine] [--check-level fast|full] [--out path]
//! casimir verify    <file> [--format human|machine] [--check-level fast|full]
//! casimir fixture   <name> [--out dir]
//! ```
//!
//! Exit codes: 0 on success, 1 when any verification fails, 2 on input
//! errors (unparsable files, unknown coordinates, degenerate structures).

mod output;
mod problem;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use casimir_core::even::jacobian_bivector;
use casimir_core::exterior::{bivector_sharp_one, increasing_tuples};
use casimir_core::report::{CheckItem, VerificationReport};
use casimir_core::volume::jacobi_report;
use casimir_core::{Chart, Form, Multivector, Scalar};
use clap::{Parser, ValueEnum};
use output::{RunResult, TableRow};
use problem::{LoadedProblem, ProblemFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckLevel {
    /// Casimir annihilation and rank bounds only.
    Fast,
    /// Adds Jacobi triples and the compatibility conditions.
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "casimir", about = "Exact Poisson brackets with prescribed Casimir functions")]
enum Command {
    /// Build the bracket from a problem file and print the table.
    Construct {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long, value_enum, default_value_t = CheckLevel::Full)]
        check_level: CheckLevel,
        /// Also write the output document to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification bundle only; no table.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long, value_enum, default_value_t = CheckLevel::Full)]
        check_level: CheckLevel,
    },
    /// Write a named fixture's problem file and expected table.
    Fixture {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let command = Command::parse();
    match run(command) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Construct { file, format, check_level, out } => {
            let spec = ProblemFile::from_toml(&std::fs::read_to_string(&file)?)?;
            let loaded = spec.load()?;
            let result = execute(&spec, &loaded, check_level, true)?;
            emit(&result, format, out.as_deref())?;
            Ok(result.ok)
        }
        Command::Verify { file, format, check_level } => {
            let spec = ProblemFile::from_toml(&std::fs::read_to_string(&file)?)?;
            let loaded = spec.load()?;
            let result = execute(&spec, &loaded, check_level, false)?;
            emit(&result, format, None)?;
            Ok(result.ok)
        }
        Command::Fixture { name, out } => {
            write_fixture(&name, &out)?;
            Ok(true)
        }
    }
}

fn emit(result: &RunResult, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Human => result.human(),
        Format::Machine => result.machine(),
    };
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

fn table_rows(chart: &Chart, entries: &[(usize, usize, Scalar)]) -> Vec<TableRow> {
    entries
        .iter()
        .map(|(i, j, v)| TableRow {
            left: chart.name(*i).to_string(),
            right: chart.name(*j).to_string(),
            value: v.render(chart),
        })
        .collect()
}

/// Nonzero brackets of a bivector over coordinate pairs.
fn bivector_table(lambda: &Multivector) -> Vec<(usize, usize, Scalar)> {
    let m = lambda.chart().dim();
    increasing_tuples(m, 2)
        .into_iter()
        .filter_map(|idx| {
            let v = lambda.coefficient(&idx);
            (!v.is_zero()).then(|| (idx[0], idx[1], v))
        })
        .collect()
}

fn casimir_checks(
    lambda: &Multivector,
    casimirs: &[Scalar],
    report: &mut VerificationReport,
) -> anyhow::Result<()> {
    let chart = lambda.chart();
    for (i, c) in casimirs.iter().enumerate() {
        let image = bivector_sharp_one(lambda, &Form::differential(chart, c))?;
        report.push(CheckItem::from_bool(
            format!("casimir {} is annihilated", label(chart, c, i)),
            image.is_zero(),
            "the bivector does not annihilate it",
        ));
    }
    Ok(())
}

fn label(chart: &Chart, c: &Scalar, index: usize) -> String {
    let rendered = c.render(chart);
    if rendered.len() <= 24 {
        rendered
    } else {
        format!("f{}", index + 1)
    }
}

fn rank_check(
    lambda: &Multivector,
    k: Option<usize>,
    report: &mut VerificationReport,
) -> anyhow::Result<usize> {
    let rank = lambda.rank()?;
    if let Some(k) = k {
        report.push(CheckItem::from_bool(
            format!("rank {rank} <= 2k = {}", 2 * k),
            rank <= 2 * k,
            "rank bound violated",
        ));
    }
    Ok(rank)
}

fn two_route_check(
    name: &str,
    formula: &[(usize, usize, Scalar)],
    direct: &[(usize, usize, Scalar)],
    report: &mut VerificationReport,
) {
    report.push(CheckItem::from_bool(name, formula == direct, "the two routes disagree"));
}

fn execute(
    spec: &ProblemFile,
    loaded: &LoadedProblem,
    level: CheckLevel,
    with_table: bool,
) -> anyhow::Result<RunResult> {
    let full = level == CheckLevel::Full;
    let mut report = VerificationReport::new();
    let mut result = RunResult {
        mode: spec.mode.clone(),
        dimension: 0,
        coordinates: Vec::new(),
        k: None,
        f: None,
        g: None,
        rank: None,
        table: None,
        checks: Vec::new(),
        ok: true,
    };

    let chart;
    match loaded {
        LoadedProblem::Even(problem) => {
            chart = problem.chart().clone();
            let lambda = problem.bivector()?;
            result.k = Some(problem.k());
            result.f = Some(problem.f().render(&chart));
            result.g = Some(problem.g().render(&chart));
            casimir_checks(&lambda, problem.casimirs(), &mut report)?;
            result.rank = Some(rank_check(&lambda, Some(problem.k()), &mut report)?);
            let direct = bivector_table(&lambda);
            if full {
                report.extend(problem.verify_casimir_section()?);
                report.push(CheckItem::from_bool(
                    "2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})",
                    problem.structure().check_complementary(problem.sigma())?,
                    "sigma fails the complementary condition",
                ));
                report.extend(jacobi_report(&lambda)?);
                match problem.bracket_table() {
                    Ok(formula) => two_route_check(
                        "top-form bracket route = bivector route",
                        &formula,
                        &direct,
                        &mut report,
                    ),
                    Err(err) => report.push(CheckItem::fail(
                        "top-form bracket route = bivector route",
                        err.to_string(),
                    )),
                }
            }
            if with_table {
                result.table = Some(table_rows(&chart, &direct));
            }
        }
        LoadedProblem::Odd(problem) => {
            chart = problem.chart().clone();
            let lambda = problem.bivector()?;
            result.k = Some(problem.k());
            result.f = Some(problem.f().render(&chart));
            result.g = Some(problem.g().render(&chart));
            casimir_checks(&lambda, problem.casimirs(), &mut report)?;
            result.rank = Some(rank_check(&lambda, Some(problem.k()), &mut report)?);
            let direct = bivector_table(&lambda);
            if full {
                report.extend(problem.check_sigma_tau()?);
                report.push(CheckItem::from_bool(
                    "suspended complementary condition",
                    problem.suspended_complementary()?,
                    "the suspension fails the complementary condition",
                ));
                match problem.bracket_table() {
                    Ok(formula) => two_route_check(
                        "top-form bracket route = bivector route",
                        &formula,
                        &direct,
                        &mut report,
                    ),
                    Err(err) => report.push(CheckItem::fail(
                        "top-form bracket route = bivector route",
                        err.to_string(),
                    )),
                }
            }
            if with_table {
                result.table = Some(table_rows(&chart, &direct));
            }
        }
        LoadedProblem::VerifyEven { structure, bivector, casimirs, k } => {
            chart = structure.chart().clone();
            casimir_checks(bivector, casimirs, &mut report)?;
            result.k = *k;
            result.rank = Some(rank_check(bivector, *k, &mut report)?);
            if full {
                report.extend(jacobi_report(bivector)?);
                let sigma = structure.sharp_inverse(bivector)?;
                report.push(CheckItem::from_bool(
                    "2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})",
                    structure.check_complementary(&sigma)?,
                    "the corresponding sigma fails the complementary condition",
                ));
            }
        }
        LoadedProblem::VerifyOdd { structure, bivector, casimirs, k } => {
            chart = structure.chart().clone();
            casimir_checks(bivector, casimirs, &mut report)?;
            result.k = *k;
            result.rank = Some(rank_check(bivector, *k, &mut report)?);
            if full {
                report.extend(jacobi_report(bivector)?);
            }
        }
        LoadedProblem::Dirac(data) => {
            chart = data.structure().chart().clone();
            let lambda = data.bivector()?;
            let problem = data.problem()?;
            result.k = Some(data.k());
            result.f = Some(problem.f().render(&chart));
            result.g = Some(problem.g().render(&chart));
            casimir_checks(&lambda, data.constraints(), &mut report)?;
            result.rank = Some(rank_check(&lambda, Some(data.k()), &mut report)?);
            report.push(CheckItem::from_bool(
                format!("g = -k = -{}", data.k()),
                *problem.g() == Scalar::from_int(chart.dim(), -(data.k() as i64)),
                "trace differs",
            ));
            if full {
                report.extend(jacobi_report(&lambda)?);
                report.push(CheckItem::from_bool(
                    "2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})",
                    data.structure().check_complementary(&data.sigma()?)?,
                    "sigma fails the complementary condition",
                ));
            }
            if with_table {
                result.table = Some(table_rows(&chart, &bivector_table(&lambda)));
            }
        }
        LoadedProblem::Nonholonomic(data) => {
            chart = data.chart().clone();
            let lambda = data.bivector()?;
            result.k = Some(data.k());
            for (i, f) in data.constraint_functions().iter().enumerate() {
                let image = bivector_sharp_one(&lambda, &Form::differential(&chart, f))?;
                report.push(CheckItem::from_bool(
                    format!("constraint function f{} is annihilated", i + 1),
                    image.is_zero(),
                    "kernel annihilation fails",
                ));
            }
            for (i, zeta) in data.constraint_forms().iter().enumerate() {
                let image = bivector_sharp_one(&lambda, zeta)?;
                report.push(CheckItem::from_bool(
                    format!("constraint form zeta{} is annihilated", i + 1),
                    image.is_zero(),
                    "kernel annihilation fails",
                ));
            }
            result.rank = Some(rank_check(&lambda, Some(data.k()), &mut report)?);
            if full {
                report.extend(jacobi_report(&lambda)?);
            }
            if with_table {
                result.table = Some(table_rows(&chart, &bivector_table(&lambda)));
            }
        }
        LoadedProblem::Kernel { structure, alphas, sigma } => {
            chart = structure.chart().clone();
            let lambda = structure.sharp(sigma)?;
            for (i, alpha) in alphas.iter().enumerate() {
                let image = bivector_sharp_one(&lambda, alpha)?;
                report.push(CheckItem::from_bool(
                    format!("kernel form alpha{} is annihilated", i + 1),
                    image.is_zero(),
                    "the bivector does not annihilate it",
                ));
            }
            result.rank = Some(lambda.rank()?);
            if with_table {
                // the prescribed-kernel top-form route, pair by pair
                let m = chart.dim();
                let mut entries = Vec::new();
                for idx in increasing_tuples(m, 2) {
                    let value = casimir_core::even::bracket_with_kernel(
                        structure,
                        alphas,
                        sigma,
                        &Scalar::var(m, idx[0]),
                        &Scalar::var(m, idx[1]),
                    )?;
                    if !value.is_zero() {
                        entries.push((idx[0], idx[1], value));
                    }
                }
                two_route_check(
                    "kernel bracket route = bivector route",
                    &entries,
                    &bivector_table(&lambda),
                    &mut report,
                );
                result.table = Some(table_rows(&chart, &entries));
            }
        }
        LoadedProblem::Jacobian { volume, casimirs, coefficient } => {
            chart = volume.chart().clone();
            let lambda = jacobian_bivector(volume, casimirs, coefficient)?;
            casimir_checks(&lambda, casimirs, &mut report)?;
            result.rank = Some(rank_check(&lambda, Some(1), &mut report)?);
            if full {
                report.extend(jacobi_report(&lambda)?);
            }
            if with_table {
                result.table = Some(table_rows(&chart, &bivector_table(&lambda)));
            }
        }
    }
    result.dimension = chart.dim();
    result.coordinates = chart.coords().to_vec();
    result.attach_report(&report);
    Ok(result)
}

fn write_fixture(name: &str, out_dir: &Path) -> anyhow::Result<()> {
    let fixture = casimir_core::fixtures::by_name(name)?;
    let file = ProblemFile::from_fixture(&fixture)?;
    std::fs::create_dir_all(out_dir)?;
    let stem: String = fixture
        .name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string();
    let problem_path = out_dir.join(format!("{stem}.toml"));
    std::fs::write(&problem_path, file.to_toml()?)?;
    let expected = serde_json::json!({
        "name": fixture.name,
        "table": fixture
            .expected_table
            .iter()
            .map(|(l, r, v)| serde_json::json!({ "left": l, "right": r, "value": v }))
            .collect::<Vec<_>>(),
        "f": fixture.expected_f,
        "g": fixture.expected_g,
        "rank": fixture.expected_rank,
    });
    let expected_path = out_dir.join(format!("{stem}.expected.json"));
    std::fs::write(&expected_path, serde_json::to_string_pretty(&expected)? + "\n")?;
    println!("wrote {}", problem_path.display());
    println!("wrote {}", expected_path.display());
    Ok(())
}
