use std::fmt;
use std::str::FromStr;

use crate::copulas::CopulaModel;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::exec::Execution;

use super::published::{self, GRID_SIZES};
use super::report::{report_csv, Flag, ReportRow};
use super::{run_experiment, DirectionSpec, ExperimentConfig};

pub const DEFAULT_REPLICATIONS: usize = 1000;

/// Reproduction grids.
///
/// * `T1`: Clayton `d = 3`, `θ = 5`, every direction, `n = 500`.
/// * `T3`: Clayton `d = 4`, `α = -++-`, `θ ∈ {0.4, 0.6, 1, 2, 5}`, `n ∈ {20, 50, 100, 500}`.
/// * `T4`: Clayton `d = 5`, `α = +-+-+`, same `θ` and `n` grid.
/// * `T6`: Cuadras–Augé `d = 4`, `θ ∈ {0.4, 0.8}`, every direction, `n = 500`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    T1,
    T3,
    T4,
    T6,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T1, TableId::T3, TableId::T4, TableId::T6];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T6 => "T6",
        }
    }

    /// Experiment configurations with the published value of each cell.
    fn plan(self, master_seed: u64, replications: usize) -> Result<Vec<(ExperimentConfig, CellLookup)>> {
        let cfg = |model, directions, sizes: &[usize]| {
            ExperimentConfig::new(model, directions, sizes.to_vec(), replications, master_seed)
        };
        Ok(match self {
            TableId::T1 => vec![(
                cfg(
                    CopulaModel::clayton(3, published::T1_THETA)?,
                    DirectionSpec::All,
                    &[published::T1_SIZE],
                ),
                CellLookup::T1,
            )],
            TableId::T3 | TableId::T4 => {
                let (d, alpha, rows) = if self == TableId::T3 {
                    (4, published::T3_DIRECTION, &published::T3_ROWS)
                } else {
                    (5, published::T4_DIRECTION, &published::T4_ROWS)
                };
                let alpha: Direction = alpha.parse()?;
                rows.iter()
                    .map(|row| {
                        Ok((
                            cfg(
                                CopulaModel::clayton(d, row.theta)?,
                                DirectionSpec::List(vec![alpha.clone()]),
                                &GRID_SIZES,
                            ),
                            CellLookup::Grid(*row),
                        ))
                    })
                    .collect::<Result<_>>()?
            }
            TableId::T6 => published::T6_THETAS
                .iter()
                .map(|&theta| {
                    Ok((
                        cfg(
                            CopulaModel::cuadras_auge(4, theta)?,
                            DirectionSpec::All,
                            &[published::T6_SIZE],
                        ),
                        CellLookup::T6(theta),
                    ))
                })
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum CellLookup {
    T1,
    Grid(published::ThetaRow),
    T6(f64),
}

impl CellLookup {
    fn value(&self, alpha: &Direction, n: usize) -> Option<f64> {
        match self {
            CellLookup::T1 => published::T1_ROWS
                .iter()
                .find(|(a, _, _)| *a == alpha.to_string())
                .filter(|_| n == published::T1_SIZE)
                .map(|(_, _, mean)| *mean),
            CellLookup::Grid(row) => published::grid_mean(row, n),
            CellLookup::T6(theta) => published::t6_mean(*theta, &alpha.to_string(), n),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TableId::T1),
            "T3" | "3" => Ok(TableId::T3),
            "T4" | "4" => Ok(TableId::T4),
            "T6" | "6" => Ok(TableId::T6),
            _ => Err(Error::invalid(format!("unknown table `{s}` (expected T1, T3, T4 or T6)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub id: TableId,
    pub rows: Vec<ReportRow>,
}

impl TableReport {
    pub fn to_csv(&self) -> String {
        report_csv(&self.rows)
    }

    pub fn count(&self, flag: Flag) -> usize {
        self.rows.iter().filter(|r| r.flag == flag).count()
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.id.name().to_ascii_lowercase())
    }
}

/// Simulates every cell of a grid, attaches our exact values and the
/// published means, and flags each cell.
pub fn reproduce_table(
    id: TableId,
    master_seed: u64,
    replications: usize,
    exec: Execution,
) -> Result<TableReport> {
    let mut rows = Vec::new();
    for (config, lookup) in id.plan(master_seed, replications)? {
        for stats in run_experiment(&config, exec)? {
            let published = lookup.value(&stats.direction, stats.n);
            rows.push(ReportRow::new(stats, published));
        }
    }
    Ok(TableReport { id, rows })
}
