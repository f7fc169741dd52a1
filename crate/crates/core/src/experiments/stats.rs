use crate::error::{Error, Result};

/// Distribution summary of replicate estimates against a reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `R - 1`; 0 when `R = 1`).
    pub sd: f64,
    pub bias: f64,
    pub rmse: f64,
    pub min: f64,
    pub max: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    /// Most extreme observations within 1.5 IQR of the quartiles.
    pub lower_whisker: f64,
    pub upper_whisker: f64,
}

/// Linear-interpolation quantile of sorted data (type 7).
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summarizes `xs` in the given order; `reference` is the value bias and RMSE
/// are measured against.
pub fn summarize(xs: &[f64], reference: f64) -> Result<Summary> {
    if xs.is_empty() {
        return Err(Error::invalid("nothing to summarize"));
    }
    let count = xs.len();
    let r = count as f64;
    let mean = xs.iter().sum::<f64>() / r;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    let sd = if count > 1 { (ss / (r - 1.0)).sqrt() } else { 0.0 };
    let rmse = (xs.iter().map(|x| (x - reference).powi(2)).sum::<f64>() / r).sqrt();
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q25 = quantile(&sorted, 0.25);
    let q75 = quantile(&sorted, 0.75);
    let reach = 1.5 * (q75 - q25);
    let lower_whisker = *sorted.iter().find(|&&x| x >= q25 - reach).unwrap();
    let upper_whisker = *sorted.iter().rev().find(|&&x| x <= q75 + reach).unwrap();
    Ok(Summary {
        count,
        mean,
        sd,
        bias: mean - reference,
        rmse,
        min: sorted[0],
        max: sorted[count - 1],
        q25,
        median: quantile(&sorted, 0.5),
        q75,
        lower_whisker,
        upper_whisker,
    })
}
