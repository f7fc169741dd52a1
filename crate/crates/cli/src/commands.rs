use std::io::Write;
use std::path::Path;

use footrule_dir::coefficients::{
    closed_form, direction_table, phi_best, phi_dir_decompose, phi_dir_quadrature, CoefficientValue,
};
use footrule_dir::copulas::validate_copula_with_tol;
use footrule_dir::estimators::{phi_hat, phi_hat_all, ranks, EstimateValue, TiePolicy};
use footrule_dir::experiments::{
    convergence_csv, report_csv, reproduce_table, run_experiment, sweep_csv, theta_sweep,
    ConvergenceStudy, DirectionSpec, ExperimentConfig, Flag, ReportRow, TableId,
};
use footrule_dir::numfmt::{fixed5, sig17};
use footrule_dir::sampling::sample_model;
use footrule_dir::{CopulaModel, Dataset, Direction, Error, Execution, Family, QuadratureSpec, RngStream};

use crate::args::*;
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let command = cli.command;
    footrule_dir::exec::with_threads(cli.threads, move || dispatch(command, exec))
}

fn dispatch(command: Command, exec: Execution) -> Result<()> {
    match command {
        Command::PhiExact(a) => phi_exact(a, exec),
        Command::PhiEstimate(a) => phi_estimate(a),
        Command::Sample(a) => sample(a),
        Command::Simulate(a) => simulate(a, exec),
        Command::Reproduce(a) => reproduce(a, exec),
        Command::Sweep(a) => sweep(a, exec),
        Command::Validate(a) => validate(a),
    }
}

fn model(m: &ModelArgs) -> Result<CopulaModel> {
    let family: Family = m.family.parse()?;
    if !family.has_parameter() && m.theta.is_some() {
        return Err(CliError::Usage(format!("family {family} takes no parameter")));
    }
    Ok(CopulaModel::new(family, m.d, m.theta)?)
}

fn theta_field(model: &CopulaModel) -> String {
    model.param().map(|t| t.to_string()).unwrap_or_default()
}

/// `None` for `all`.
fn direction_or_all(s: &str, d: usize) -> Result<Option<Direction>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    let a: Direction = s.parse()?;
    if a.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: a.dim() }.into());
    }
    Ok(Some(a))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn phi_exact(a: PhiExactArgs, exec: Execution) -> Result<()> {
    let model = model(&a.model)?;
    let spec = QuadratureSpec {
        abs_tol: a.tol,
        max_panels: a.max_panels,
        ..QuadratureSpec::default()
    };
    spec.check()?;
    let one = |alpha: &Direction| -> Result<CoefficientValue> {
        Ok(match a.method.as_str() {
            "auto" => phi_best(&model, alpha, &spec)?,
            "closed" | "closed_form" => closed_form(&model, alpha)?.ok_or_else(|| {
                CliError::Usage(format!("no closed form for family {}", model.family()))
            })?,
            "decomposition" => phi_dir_decompose(&model, alpha, &spec)?,
            "quadrature" => phi_dir_quadrature(&model, alpha, &spec)?,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown method `{other}` (expected auto, closed, decomposition, quadrature)"
                )))
            }
        })
    };
    let prefix = format!("{},{},{}", model.family().name(), theta_field(&model), model.dim());
    let mut text = String::from("family,theta,d,alpha,value,method,abs_error_estimate\n");
    let row = |alpha: &str, v: &CoefficientValue| {
        format!(
            "{prefix},{alpha},{},{},{}\n",
            sig17(v.value),
            v.method.name(),
            sig17(v.abs_error_estimate)
        )
    };
    match direction_or_all(&a.alpha, model.dim())? {
        Some(alpha) => text.push_str(&row(&alpha.to_string(), &one(&alpha)?)),
        None if a.method == "auto" => {
            let table = direction_table(&model, &spec, exec)?;
            for (alpha, v) in &table.rows {
                text.push_str(&row(&alpha.to_string(), v));
            }
            text.push_str(&format!("{prefix},sum,{},,{}\n", sig17(table.sum), sig17(table.error_budget)));
        }
        None => {
            let (mut sum, mut budget) = (0.0, 0.0);
            for alpha in Direction::all(model.dim())? {
                let v = one(&alpha)?;
                sum += v.value;
                budget += v.abs_error_estimate;
                text.push_str(&row(&alpha.to_string(), &v));
            }
            text.push_str(&format!("{prefix},sum,{},,{}\n", sig17(sum), sig17(budget)));
        }
    }
    write_output(None, &text)
}

fn phi_estimate(a: PhiEstimateArgs) -> Result<()> {
    let policy: TiePolicy = a.ties.parse()?;
    let data = Dataset::load_csv(&a.input)?;
    let alpha = direction_or_all(&a.alpha, data.d())?;
    let rk = match (policy, ranks(&data, TiePolicy::Strict)) {
        (_, Ok(r)) => r,
        (TiePolicy::FirstOccurrence, Err(Error::Tie { column, rows })) => {
            eprintln!(
                "warning: tied values in column {column} (rows {rows:?}); ranking ties by row order"
            );
            ranks(&data, TiePolicy::FirstOccurrence)?
        }
        (_, Err(e)) => return Err(e.into()),
    };
    let estimates: Vec<EstimateValue> = match alpha {
        Some(alpha) => vec![phi_hat(&rk, &alpha)?],
        None => phi_hat_all(&rk)?,
    };
    let mut text = String::from("alpha,value,n\n");
    for e in &estimates {
        text.push_str(&format!("{},{},{}\n", e.direction, sig17(e.value), e.n));
    }
    if estimates.len() > 1 {
        let sum: f64 = estimates.iter().map(|e| e.value).sum();
        text.push_str(&format!("sum,{},{}\n", sig17(sum), rk.n()));
    }
    write_output(None, &text)
}

fn sample(a: SampleArgs) -> Result<()> {
    let model = model(&a.model)?;
    let data = sample_model(&model, a.n, &mut RngStream::new(a.seed, a.stream))?;
    write_output(a.out.as_deref(), &data.to_csv_string())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad {what} `{t}`"))))
        .collect()
}

fn simulate(a: SimulateArgs, exec: Execution) -> Result<()> {
    let model = model(&a.model)?;
    let directions = if a.alpha.eq_ignore_ascii_case("all") {
        DirectionSpec::All
    } else {
        DirectionSpec::List(
            a.alpha
                .split(',')
                .map(|s| s.trim().parse::<Direction>())
                .collect::<std::result::Result<_, _>>()?,
        )
    };
    let sizes: Vec<usize> = parse_list(&a.n, "sample size")?;
    let config = ExperimentConfig::new(model, directions, sizes, a.reps, a.seed);
    let cells = run_experiment(&config, exec)?;
    let rows: Vec<ReportRow> = cells.iter().cloned().map(|s| ReportRow::new(s, None)).collect();
    let mismatches = rows.iter().filter(|r| r.flag == Flag::ExactMismatch).count();
    if mismatches > 0 {
        eprintln!("note: {mismatches} cell(s) outside the acceptance band around the exact value");
    }
    let study = ConvergenceStudy { cells };
    if let Some(p) = &a.boxplot {
        write_output(Some(p), &convergence_csv(&study))?;
    }
    if let Some(p) = &a.chart {
        let distinct = study.cells.iter().filter(|c| c.direction == study.cells[0].direction).count();
        if distinct != study.cells.len() {
            return Err(CliError::Usage("--chart needs a single direction".into()));
        }
        write_output(Some(p), &study.chart().to_svg())?;
    }
    write_output(a.out.as_deref(), &report_csv(&rows))
}

fn reproduce(a: ReproduceArgs, exec: Execution) -> Result<()> {
    let ids: Vec<TableId> = if a.table.eq_ignore_ascii_case("all") {
        TableId::ALL.to_vec()
    } else {
        a.table
            .split(',')
            .map(|t| t.parse::<TableId>())
            .collect::<std::result::Result<_, _>>()?
    };
    std::fs::create_dir_all(&a.out).map_err(|source| CliError::Io {
        path: a.out.clone(),
        source,
    })?;
    let (mut mismatch, mut unreconciled) = (0, 0);
    for id in ids {
        let table = reproduce_table(id, a.seed, a.reps, exec)?;
        let path = a.out.join(table.file_name());
        write_output(Some(&path), &table.to_csv())?;
        mismatch += table.count(Flag::ExactMismatch);
        unreconciled += table.count(Flag::Unreconciled);
        if !a.quiet {
            println!("{id}: {} cells -> {}", table.rows.len(), path.display());
            println!("{:>8} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9}  flag", "alpha", "theta", "n", "mean", "sd", "exact", "published");
            for r in &table.rows {
                let s = &r.stats;
                println!(
                    "{:>8} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9}  {}",
                    s.direction.to_string(),
                    theta_field(&s.model),
                    s.n,
                    fixed5(s.summary.mean),
                    fixed5(s.summary.sd),
                    fixed5(s.exact.value),
                    r.paper_ref_value.map(fixed5).unwrap_or_else(|| "-".into()),
                    r.flag
                );
            }
        }
    }
    if mismatch > 0 {
        return Err(CliError::Policy(format!(
            "{mismatch} cell(s) outside the acceptance band around our exact values"
        )));
    }
    if a.strict_paper && unreconciled > 0 {
        return Err(CliError::Policy(format!(
            "{unreconciled} cell(s) disagree with the published values"
        )));
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let bad = || CliError::Usage(format!("bad grid `{s}` (expected start:stop:count)"));
            let start: f64 = start.trim().parse().map_err(|_| bad())?;
            let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            match count {
                0 => Err(bad()),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                    .collect()),
            }
        }
        [_] => parse_list(s, "grid value"),
        _ => Err(CliError::Usage(format!("bad grid `{s}`"))),
    }
}

fn sweep(a: SweepArgs, exec: Execution) -> Result<()> {
    let family: Family = a.family.parse()?;
    if !family.has_parameter() {
        return Err(CliError::Usage(format!("family {family} has no parameter to sweep")));
    }
    let grid = parse_grid(&a.grid)?;
    let classes: Vec<usize> = match &a.classes {
        Some(c) => parse_list(c, "class")?,
        None => (0..=a.d).collect(),
    };
    let spec = QuadratureSpec::with_tol(a.tol);
    let sweep = theta_sweep(family, a.d, &grid, &classes, &spec, exec)?;
    if let Some(p) = &a.chart {
        write_output(Some(p), &sweep.chart().to_svg())?;
    }
    write_output(a.out.as_deref(), &sweep_csv(&sweep))
}

fn validate(a: ValidateArgs) -> Result<()> {
    let model = model(&a.model)?;
    let report = validate_copula_with_tol(&model, a.resolution, a.tol)?;
    let text = format!(
        "family,theta,d,resolution,tolerance,points_checked,cells_checked,violations,worst\n{},{},{},{},{},{},{},{},{}\n",
        model.family().name(),
        theta_field(&model),
        model.dim(),
        report.resolution,
        report.tolerance,
        report.points_checked,
        report.cells_checked,
        report.violation_count,
        sig17(report.worst)
    );
    write_output(None, &text)?;
    for v in report.violations.iter().take(10) {
        eprintln!("{} at {:?}: {:e}", v.kind.name(), v.point, v.magnitude);
    }
    if !report.is_valid() {
        return Err(CliError::Numeric(format!(
            "{} violation(s) above tolerance {}",
            report.violation_count, report.tolerance
        )));
    }
    Ok(())
}
