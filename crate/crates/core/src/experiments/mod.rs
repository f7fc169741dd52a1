//! Seeded Monte Carlo harness.
//!
//! Replication `r` of every cell draws from `RngStream::new(master_seed, r)`,
//! so a run is reproducible and each replication is independent of how work
//! is scheduled. Per-replication estimates are collected in replication order
//! before any aggregation.

mod chart;
pub mod published;
mod report;
mod stats;
mod tables;

use crate::coefficients::{phi_best, CoefficientValue, QuadratureSpec};
use crate::copulas::{CopulaModel, Family};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::estimators::{phi_hat, phi_hat_all, ranks, TiePolicy};
use crate::exec::Execution;
use crate::sampling::{sample_model, RngStream};

pub use chart::{Chart, Series};
pub use report::{
    acceptance_band, convergence_csv, report_csv, sweep_csv, Flag, ReportRow, ACCEPTANCE_FLOOR,
    ACCEPTANCE_SIGMAS, REPORT_HEADER,
};
pub use stats::{summarize, Summary};
pub use tables::{reproduce_table, TableId, TableReport, DEFAULT_REPLICATIONS};

#[derive(Debug, Clone, PartialEq)]
pub enum DirectionSpec {
    /// Every direction, lexicographic with `-` before `+`.
    All,
    List(Vec<Direction>),
}

impl DirectionSpec {
    pub fn resolve(&self, d: usize) -> Result<Vec<Direction>> {
        match self {
            DirectionSpec::All => Direction::all(d),
            DirectionSpec::List(list) => {
                if list.is_empty() {
                    return Err(Error::invalid("no directions requested"));
                }
                for a in list {
                    if a.dim() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            got: a.dim(),
                        });
                    }
                }
                Ok(list.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: CopulaModel,
    pub directions: DirectionSpec,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub tie_policy: TiePolicy,
    pub quadrature: QuadratureSpec,
}

impl ExperimentConfig {
    pub fn new(
        model: CopulaModel,
        directions: DirectionSpec,
        sample_sizes: Vec<usize>,
        replications: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentConfig {
            model,
            directions,
            sample_sizes,
            replications,
            master_seed,
            tie_policy: TiePolicy::FirstOccurrence,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<Vec<Direction>> {
        if self.replications < 1 {
            return Err(Error::invalid("replications must be at least 1"));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::invalid("no sample sizes requested"));
        }
        if let Some(n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("sample size {n} is below 2")));
        }
        self.quadrature.check()?;
        self.directions.resolve(self.model.dim())
    }
}

/// Replicate summary for one `(direction, n)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationStats {
    pub model: CopulaModel,
    pub direction: Direction,
    pub n: usize,
    pub summary: Summary,
    pub exact: CoefficientValue,
}

impl ReplicationStats {
    pub fn band(&self) -> f64 {
        acceptance_band(self.summary.sd, self.summary.count)
    }

    /// `|mean - exact|` within [`acceptance_band`].
    pub fn within_band(&self) -> bool {
        (self.summary.mean - self.exact.value).abs() <= self.band()
    }
}

/// Exact values for every direction, in order.
pub fn exact_values(
    model: &CopulaModel,
    directions: &[Direction],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Vec<CoefficientValue>> {
    exec.try_map_range(directions.len(), |k| phi_best(model, &directions[k], spec))
}

/// Estimates of every direction for replication `r` at sample size `n`.
fn replicate(
    config: &ExperimentConfig,
    directions: &[Direction],
    n: usize,
    r: u64,
) -> Result<Vec<f64>> {
    let mut rng = RngStream::new(config.master_seed, r);
    let data = sample_model(&config.model, n, &mut rng)?;
    let rk = ranks(&data, config.tie_policy)?;
    match config.directions {
        DirectionSpec::All => Ok(phi_hat_all(&rk)?.into_iter().map(|e| e.value).collect()),
        DirectionSpec::List(_) => directions
            .iter()
            .map(|a| phi_hat(&rk, a).map(|e| e.value))
            .collect(),
    }
}

/// Runs every `(n, replication)` pair and summarizes per direction.
/// Output order: sample sizes as given, then directions.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<Vec<ReplicationStats>> {
    let directions = config.validate()?;
    let exact = exact_values(&config.model, &directions, &config.quadrature, exec)?;
    let mut out = Vec::with_capacity(directions.len() * config.sample_sizes.len());
    for &n in &config.sample_sizes {
        let per_rep = exec.try_map_range(config.replications, |r| {
            replicate(config, &directions, n, r as u64).map_err(|e| Error::Replication {
                n,
                replication: r as u64,
                source: Box::new(e),
            })
        })?;
        for (k, alpha) in directions.iter().enumerate() {
            let xs: Vec<f64> = per_rep.iter().map(|row| row[k]).collect();
            out.push(ReplicationStats {
                model: config.model.clone(),
                direction: alpha.clone(),
                n,
                summary: summarize(&xs, exact[k].value)?,
                exact: exact[k].clone(),
            });
        }
    }
    Ok(out)
}

/// Box-plot summaries of one direction across sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub cells: Vec<ReplicationStats>,
}

impl ConvergenceStudy {
    /// Standard deviations in sample-size order.
    pub fn sds(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.summary.sd).collect()
    }

    pub fn sd_strictly_decreasing(&self) -> bool {
        self.sds().windows(2).all(|w| w[1] < w[0])
    }

    pub fn chart(&self) -> Chart {
        let pick = |f: fn(&ReplicationStats) -> f64| {
            self.cells.iter().map(|c| (c.n as f64, f(c))).collect::<Vec<_>>()
        };
        let name = self
            .cells
            .first()
            .map(|c| format!("{} {}", c.model, c.direction))
            .unwrap_or_default();
        Chart {
            title: format!("estimates by sample size, {name}"),
            x_label: "n".into(),
            y_label: "estimate".into(),
            series: vec![
                Series::new("q25", pick(|c| c.summary.q25)),
                Series::new("median", pick(|c| c.summary.median)),
                Series::new("q75", pick(|c| c.summary.q75)),
                Series::new("exact", pick(|c| c.exact.value)),
            ],
        }
    }
}

/// [`run_experiment`] for one direction, sample sizes sorted ascending.
pub fn convergence_study(
    model: &CopulaModel,
    alpha: &Direction,
    sample_sizes: &[usize],
    replications: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<ConvergenceStudy> {
    let mut sizes = sample_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let config = ExperimentConfig::new(
        model.clone(),
        DirectionSpec::List(vec![alpha.clone()]),
        sizes,
        replications,
        master_seed,
    );
    Ok(ConvergenceStudy {
        cells: run_experiment(&config, exec)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub theta: f64,
    /// Number of `+1` entries of the representative direction.
    pub positive: usize,
    pub direction: Direction,
    pub value: CoefficientValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSweep {
    pub family: Family,
    pub d: usize,
    pub points: Vec<SweepPoint>,
}

impl ThetaSweep {
    /// Values for one `|J|` class, in grid order.
    pub fn curve(&self, positive: usize) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.positive == positive)
            .map(|p| (p.theta, p.value.value))
            .collect()
    }

    pub fn chart(&self) -> Chart {
        let mut classes: Vec<usize> = self.points.iter().map(|p| p.positive).collect();
        classes.sort_unstable();
        classes.dedup();
        Chart {
            title: format!("{} d={} coefficient by parameter", self.family.name(), self.d),
            x_label: "theta".into(),
            y_label: "phi".into(),
            series: classes
                .into_iter()
                .map(|j| Series::new(format!("|J|={j}"), self.curve(j)))
                .collect(),
        }
    }
}

/// Exact coefficients on a parameter grid, one representative direction per
/// requested `|J|` (the families are exchangeable, so the class determines the
/// value). No simulation.
pub fn theta_sweep(
    family: Family,
    d: usize,
    theta_grid: &[f64],
    classes: &[usize],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<ThetaSweep> {
    if theta_grid.is_empty() {
        return Err(Error::invalid("empty parameter grid"));
    }
    if let Some(j) = classes.iter().find(|&&j| j > d) {
        return Err(Error::invalid(format!("class |J|={j} exceeds d={d}")));
    }
    let models = theta_grid
        .iter()
        .map(|&t| CopulaModel::new(family, d, Some(t)))
        .collect::<Result<Vec<_>>>()?;
    let reps: Vec<Direction> = classes
        .iter()
        .map(|&j| Direction::with_positive(d, &(d - j..d).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let cells = models.len() * reps.len();
    let values = exec.try_map_range(cells, |k| {
        phi_best(&models[k / reps.len()], &reps[k % reps.len()], spec)
    })?;
    let points = values
        .into_iter()
        .enumerate()
        .map(|(k, value)| SweepPoint {
            theta: theta_grid[k / reps.len()],
            positive: classes[k % reps.len()],
            direction: reps[k % reps.len()].clone(),
            value,
        })
        .collect();
    Ok(ThetaSweep { family, d, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let m = CopulaModel::clayton(3, 2.0).unwrap();
        let ok = ExperimentConfig::new(m.clone(), DirectionSpec::All, vec![10], 5, 1);
        assert_eq!(ok.validate().unwrap().len(), 8);
        let mut bad = ok.clone();
        bad.replications = 0;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.sample_sizes = vec![10, 1];
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.directions = DirectionSpec::List(vec![Direction::upper(4)]);
        assert!(matches!(bad.validate(), Err(Error::DimensionMismatch { .. })));
        let mut bad = ok;
        bad.directions = DirectionSpec::List(vec![]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let m = CopulaModel::cuadras_auge(3, 0.6).unwrap();
        let cfg = ExperimentConfig::new(m, DirectionSpec::All, vec![15, 40], 37, 99);
        let a = run_experiment(&cfg, Execution::Sequential).unwrap();
        let b = run_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert_eq!((a[0].n, a[8].n), (15, 40));
    }

    #[test]
    fn list_and_all_give_the_same_numbers() {
        let m = CopulaModel::clayton(3, 1.0).unwrap();
        let all = run_experiment(
            &ExperimentConfig::new(m.clone(), DirectionSpec::All, vec![30], 20, 4),
            Execution::Sequential,
        )
        .unwrap();
        let pick: Direction = "+-+".parse().unwrap();
        let one = run_experiment(
            &ExperimentConfig::new(m, DirectionSpec::List(vec![pick.clone()]), vec![30], 20, 4),
            Execution::Sequential,
        )
        .unwrap();
        let from_all = all.iter().find(|s| s.direction == pick).unwrap();
        assert_eq!(from_all.summary, one[0].summary);
    }

    #[test]
    fn sweep_shapes() {
        let s = theta_sweep(
            Family::CuadrasAuge,
            4,
            &[0.0, 0.4, 0.8],
            &[0, 1, 2, 3, 4],
            &QuadratureSpec::default(),
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(s.points.len(), 15);
        for (_, v) in s.curve(2).iter().take(1) {
            assert_eq!(*v, 0.0);
        }
        let upper = s.curve(4);
        assert!((upper[1].1 - 0.402834).abs() < 1e-6);
        assert_eq!(s.chart().series.len(), 5);
        assert!(theta_sweep(Family::Clayton, 3, &[], &[0], &QuadratureSpec::default(), Execution::Sequential).is_err());
        assert!(theta_sweep(Family::Clayton, 3, &[1.0], &[4], &QuadratureSpec::default(), Execution::Sequential).is_err());
    }
}
