use std::fmt;

use crate::numfmt::sig17;

use super::{ConvergenceStudy, ReplicationStats, ThetaSweep};

pub const ACCEPTANCE_FLOOR: f64 = 0.01;
pub const ACCEPTANCE_SIGMAS: f64 = 4.0;

pub const REPORT_HEADER: [&str; 17] = [
    "family",
    "theta",
    "d",
    "alpha",
    "n",
    "replications",
    "mean",
    "sd",
    "bias",
    "rmse",
    "q25",
    "median",
    "q75",
    "exact",
    "exact_method",
    "paper_ref_value",
    "flag",
];

/// `max(0.01, 4 sd / √R)`.
pub fn acceptance_band(sd: f64, replications: usize) -> f64 {
    ACCEPTANCE_FLOOR.max(ACCEPTANCE_SIGMAS * sd / (replications as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Ok,
    /// Simulated mean agrees with our exact value but not with the
    /// published reference.
    Unreconciled,
    /// Simulated mean outside the band around our exact value.
    ExactMismatch,
}

impl Flag {
    pub fn name(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Unreconciled => "unreconciled",
            Flag::ExactMismatch => "exact_mismatch",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub stats: ReplicationStats,
    pub paper_ref_value: Option<f64>,
    pub flag: Flag,
}

impl ReportRow {
    pub fn new(stats: ReplicationStats, paper_ref_value: Option<f64>) -> Self {
        let band = stats.band();
        let flag = if !stats.within_band() {
            Flag::ExactMismatch
        } else if paper_ref_value.is_some_and(|p| (stats.summary.mean - p).abs() > band) {
            Flag::Unreconciled
        } else {
            Flag::Ok
        };
        ReportRow {
            stats,
            paper_ref_value,
            flag,
        }
    }

    pub fn fields(&self) -> Vec<String> {
        let s = &self.stats;
        let m = &s.summary;
        vec![
            s.model.family().name().to_string(),
            s.model.param().map(|t| t.to_string()).unwrap_or_default(),
            s.model.dim().to_string(),
            s.direction.to_string(),
            s.n.to_string(),
            m.count.to_string(),
            sig17(m.mean),
            sig17(m.sd),
            sig17(m.bias),
            sig17(m.rmse),
            sig17(m.q25),
            sig17(m.median),
            sig17(m.q75),
            sig17(s.exact.value),
            s.exact.method.name().to_string(),
            self.paper_ref_value.map(sig17).unwrap_or_default(),
            self.flag.name().to_string(),
        ]
    }
}

fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory")).expect("CSV output is UTF-8")
}

/// Report CSV with [`REPORT_HEADER`].
pub fn report_csv(rows: &[ReportRow]) -> String {
    write_table(&REPORT_HEADER, rows.iter().map(ReportRow::fields))
}

/// Box-plot data, one line per sample size.
pub fn convergence_csv(study: &ConvergenceStudy) -> String {
    let header = [
        "family", "theta", "d", "alpha", "n", "replications", "mean", "sd", "min",
        "lower_whisker", "q25", "median", "q75", "upper_whisker", "max", "exact",
    ];
    write_table(
        &header,
        study.cells.iter().map(|c| {
            let m = &c.summary;
            vec![
                c.model.family().name().to_string(),
                c.model.param().map(|t| t.to_string()).unwrap_or_default(),
                c.model.dim().to_string(),
                c.direction.to_string(),
                c.n.to_string(),
                m.count.to_string(),
                sig17(m.mean),
                sig17(m.sd),
                sig17(m.min),
                sig17(m.lower_whisker),
                sig17(m.q25),
                sig17(m.median),
                sig17(m.q75),
                sig17(m.upper_whisker),
                sig17(m.max),
                sig17(c.exact.value),
            ]
        }),
    )
}

/// Exact curves, one line per `(θ, |J|)`.
pub fn sweep_csv(sweep: &ThetaSweep) -> String {
    let header = ["family", "d", "theta", "positive", "alpha", "value", "method", "abs_error_estimate"];
    write_table(
        &header,
        sweep.points.iter().map(|p| {
            vec![
                sweep.family.name().to_string(),
                sweep.d.to_string(),
                p.theta.to_string(),
                p.positive.to_string(),
                p.direction.to_string(),
                sig17(p.value.value),
                p.value.method.name().to_string(),
                sig17(p.value.abs_error_estimate),
            ]
        }),
    )
}
