use super::Copula;
use crate::error::{Error, Result};

/// Default tolerance for closed-form families.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// At most this many violations are kept in a report; the count is exact.
const MAX_RECORDED: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `C(u) ≠ 0` although some `u_i = 0`.
    NotGrounded,
    /// `C(1, …, u_k, …, 1) ≠ u_k`.
    NonUniformMargin,
    /// `C(u) ∉ [0, 1]`.
    OutOfRange,
    /// Negative `C`-volume on a grid cell.
    NegativeVolume,
}

impl ViolationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ViolationKind::NotGrounded => "not_grounded",
            ViolationKind::NonUniformMargin => "non_uniform_margin",
            ViolationKind::OutOfRange => "out_of_range",
            ViolationKind::NegativeVolume => "negative_volume",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Grid point, or lower corner of the offending cell.
    pub point: Vec<f64>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub resolution: usize,
    pub tolerance: f64,
    pub points_checked: usize,
    pub cells_checked: usize,
    /// Largest deviation seen over all checks, including ones under tolerance.
    pub worst: f64,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, kind: ViolationKind, point: Vec<f64>, magnitude: f64) {
        self.worst = self.worst.max(magnitude);
        if magnitude > self.tolerance {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(Violation {
                    kind,
                    point,
                    magnitude,
                });
            }
        }
    }
}

/// Checks the copula axioms on the uniform grid `{0, 1/r, …, 1}^k` with the
/// default tolerance.
pub fn validate_copula(c: &dyn Copula, resolution: usize) -> Result<ValidationReport> {
    validate_copula_with_tol(c, resolution, DEFAULT_TOLERANCE)
}

pub fn validate_copula_with_tol(
    c: &dyn Copula,
    resolution: usize,
    tolerance: f64,
) -> Result<ValidationReport> {
    if resolution < 2 {
        return Err(Error::invalid(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let k = c.dim();
    let side = resolution + 1;
    let total = side
        .checked_pow(k as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::invalid("validation grid too large"))?;

    let coord = |idx: usize| idx as f64 / resolution as f64;
    let decode = |mut flat: usize, digits: &mut [usize]| {
        for slot in digits.iter_mut().rev() {
            *slot = flat % side;
            flat /= side;
        }
    };

    let mut report = ValidationReport {
        resolution,
        tolerance,
        points_checked: total,
        cells_checked: resolution.pow(k as u32),
        worst: 0.0,
        violation_count: 0,
        violations: Vec::new(),
    };

    let mut values = vec![0.0; total];
    let mut digits = vec![0usize; k];
    let mut point = vec![0.0; k];
    for (flat, slot) in values.iter_mut().enumerate() {
        decode(flat, &mut digits);
        for (p, &g) in point.iter_mut().zip(&digits) {
            *p = coord(g);
        }
        let v = c.eval(&point);
        *slot = v;

        let range_dev = if v < 0.0 { -v } else { (v - 1.0).max(0.0) };
        if range_dev > 0.0 || !v.is_finite() {
            report.record(ViolationKind::OutOfRange, point.clone(), range_dev.max(if v.is_finite() { 0.0 } else { f64::INFINITY }));
        }
        if digits.contains(&0) {
            report.record(ViolationKind::NotGrounded, point.clone(), v.abs());
        }
        let ones = digits.iter().filter(|&&g| g == resolution).count();
        if ones + 1 >= k {
            // all coordinates but (at most) one equal 1
            let free = digits
                .iter()
                .position(|&g| g != resolution)
                .map_or(1.0, |i| point[i]);
            report.record(ViolationKind::NonUniformMargin, point.clone(), (v - free).abs());
        }
    }

    // cell volumes from the tabulated vertex values
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * side;
    }
    let mut cell = vec![0usize; k];
    for cell_flat in 0..report.cells_checked {
        let mut rem = cell_flat;
        for slot in cell.iter_mut().rev() {
            *slot = rem % resolution;
            rem /= resolution;
        }
        let base: usize = cell.iter().zip(&strides).map(|(g, s)| g * s).sum();
        let mut vol = 0.0;
        for mask in 0u64..(1u64 << k) {
            // bit clear = lower corner
            let mut offset = 0;
            let mut lower = 0;
            for (i, s) in strides.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    offset += s;
                } else {
                    lower += 1;
                }
            }
            let v = values[base + offset];
            if lower % 2 == 1 {
                vol -= v;
            } else {
                vol += v;
            }
        }
        if vol < 0.0 {
            let corner = cell.iter().map(|&g| coord(g)).collect();
            report.record(ViolationKind::NegativeVolume, corner, -vol);
        }
    }
    Ok(report)
}
