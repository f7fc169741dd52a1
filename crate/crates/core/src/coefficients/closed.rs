//! Closed and semi-closed forms for the parametric families.

use super::{independence_offset, integrate, prefactor, CoefficientValue, Method, QuadratureSpec};
use crate::copulas::{model_clayton_diagonal, CopulaModel, Family};
use crate::direction::Direction;
use crate::error::{Error, Result};

/// `C(n, k)` in floating point; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_alpha(d: usize, alpha: &Direction) -> Result<()> {
    check_d(d)?;
    if alpha.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alpha.dim(),
        });
    }
    Ok(())
}

/// Comonotone copula `M_d` with `k` entries equal to `-1`:
/// 1 for `k ∈ {0, d}`, otherwise `-2 / ((d-1) C(d,k))`.
pub fn phi_m_closed(d: usize, k: usize) -> Result<CoefficientValue> {
    check_d(d)?;
    if k > d {
        return Err(Error::invalid(format!("k = {k} exceeds d = {d}")));
    }
    let v = if k == 0 || k == d {
        1.0
    } else {
        -independence_offset(d, k)
    };
    Ok(CoefficientValue::closed(v))
}

/// `(d!)² / (2d+1)!` as `∏_{k=1}^{d} k/(d+k) / (2d+1)`, free of overflow.
fn beta_ratio(d: usize) -> f64 {
    (1..=d).fold(1.0, |acc, k| acc * k as f64 / (d + k) as f64) / (2 * d + 1) as f64
}

/// FGM: `2λ(-1)^{|J|}(d+1)(d!)² / ((d-1)(2d+1)!)`.
pub fn phi_fgm_closed(d: usize, lambda: f64, alpha: &Direction) -> Result<CoefficientValue> {
    check_alpha(d, alpha)?;
    if !(-1.0..=1.0).contains(&lambda) {
        return Err(Error::invalid(format!("FGM parameter {lambda} outside [-1, 1]")));
    }
    let sign = if alpha.count_positive() % 2 == 0 { 1.0 } else { -1.0 };
    let df = d as f64;
    Ok(CoefficientValue::closed(
        sign * 2.0 * lambda * (df + 1.0) / (df - 1.0) * beta_ratio(d),
    ))
}

/// `∫₀¹ δ_m(u) du − 1/(m+1)` for the size-`m` Cuadras–Augé diagonal
/// `u^{m - θ(m-1)}`, i.e. `θ(m-1) / ((m+1)² − θ(m² − 1))`; zero for `m = 0`.
fn ca_excess(m: usize, theta: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let mf = m as f64;
    theta * (mf - 1.0) / ((mf + 1.0).powi(2) - theta * (mf * mf - 1.0))
}

/// Cuadras–Augé: `2(d+1)/(d-1) Σ_{k=0}^{|J|} (-1)^k C(|J|,k) T(|I|+k)`.
pub fn phi_ca_closed(d: usize, theta: f64, alpha: &Direction) -> Result<CoefficientValue> {
    check_alpha(d, alpha)?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid(format!(
            "Cuadras-Auge parameter {theta} outside [0, 1]"
        )));
    }
    let i = alpha.count_negative();
    let j = alpha.count_positive();
    let sum: f64 = (0..=j)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(j, k) * ca_excess(i + k, theta)
        })
        .sum();
    Ok(CoefficientValue::closed(prefactor(d) * sum))
}

/// Clayton: alternating sum of one-dimensional integrals of the size-`m`
/// diagonals `(m u^{-θ} + 1 - m)^{-1/θ}`, minus the independence offset.
pub fn phi_clayton_semi(
    d: usize,
    theta: f64,
    alpha: &Direction,
    spec: &QuadratureSpec,
) -> Result<CoefficientValue> {
    check_alpha(d, alpha)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::invalid(format!("Clayton parameter {theta} must be positive")));
    }
    let i = alpha.count_negative();
    let j = alpha.count_positive();
    let mut sum = 0.0;
    let mut err = 0.0;
    for k in 0..=j {
        let m = i + k;
        let integral = match m {
            0 => integrate(|_| 1.0, spec)?,
            1 => integrate(|u| u, spec)?,
            _ => integrate(|u| model_clayton_diagonal(m as f64, theta, u), spec)?,
        };
        let w = binomial(j, k);
        sum += if k % 2 == 0 { w } else { -w } * integral.value;
        err += w * integral.error_estimate;
    }
    let a = prefactor(d);
    Ok(CoefficientValue {
        value: a * sum - independence_offset(d, j),
        method: Method::Quadrature,
        abs_error_estimate: a * err,
    })
}

/// Exact value for families with a closed form, `None` otherwise.
pub fn closed_form(model: &CopulaModel, alpha: &Direction) -> Result<Option<CoefficientValue>> {
    let d = model.dim();
    check_alpha(d, alpha)?;
    let p = model.param().unwrap_or(0.0);
    Ok(match model.family() {
        Family::Independence => Some(CoefficientValue::closed(0.0)),
        Family::Comonotone => Some(phi_m_closed(d, alpha.count_negative())?),
        Family::Fgm => Some(phi_fgm_closed(d, p, alpha)?),
        Family::CuadrasAuge => Some(phi_ca_closed(d, p, alpha)?),
        Family::Clayton | Family::Countermonotone => None,
    })
}
