//! Theoretical directional footrule coefficients `φ_d^α(C)`.
//!
//! For `α ∈ {-1,1}^d` with negative set `I` and positive set `J`,
//!
//! ```text
//! φ_d^α(C) = 2(d+1)/(d-1) ∫₀¹ P[α_i U_i > α_i u ∀i] du − 2 / ((d-1) C(d,|J|))
//! ```
//!
//! and the orthant probability expands by inclusion–exclusion into marginal
//! diagonals, `Σ_{S ⊆ J} (-1)^{|S|} δ_{C_{I∪S}}(u)`. Three routes are
//! provided: direct quadrature of that expansion, the decomposition into
//! lower-dimensional `φ⁻` coefficients, and family closed forms.

mod closed;
mod quadrature;

use std::fmt;

use crate::copulas::{for_each_subset, Copula, CopulaModel, Family};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub use closed::{
    binomial, closed_form, phi_ca_closed, phi_clayton_semi, phi_fgm_closed, phi_m_closed,
};
pub use quadrature::{gauss_legendre, integrate, integrate_over, Integral, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ClosedForm,
    Decomposition,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Decomposition => "decomposition",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coefficient with the route that produced it and an absolute error bound
/// (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValue {
    pub value: f64,
    pub method: Method,
    pub abs_error_estimate: f64,
}

impl CoefficientValue {
    pub fn closed(value: f64) -> Self {
        CoefficientValue {
            value,
            method: Method::ClosedForm,
            abs_error_estimate: 0.0,
        }
    }
}

/// `2(d+1)/(d-1)`.
pub(crate) fn prefactor(d: usize) -> f64 {
    2.0 * (d as f64 + 1.0) / (d as f64 - 1.0)
}

/// `2 / ((d-1) C(d, j))`, the value of the orthant term under independence.
pub(crate) fn independence_offset(d: usize, j: usize) -> f64 {
    2.0 / ((d as f64 - 1.0) * binomial(d, j))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!(
            "coefficients need dimension at least 2, got {d}"
        )));
    }
    Ok(())
}

fn check_direction(d: usize, alpha: &Direction) -> Result<()> {
    check_dim(d)?;
    if alpha.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alpha.dim(),
        });
    }
    Ok(())
}

/// `φ⁻` of the marginal over `subset` (at least two indices).
fn phi_minus_subset(c: &dyn Copula, subset: &[usize], spec: &QuadratureSpec) -> Result<CoefficientValue> {
    let m = subset.len();
    check_dim(m)?;
    let integral = integrate(|u| c.subset_diagonal(subset, u), spec)?;
    let a = prefactor(m);
    Ok(CoefficientValue {
        value: a * integral.value - 2.0 / (m as f64 - 1.0),
        method: Method::Quadrature,
        abs_error_estimate: a * integral.error_estimate,
    })
}

/// Downward diagonal index `φ⁻ = 2(d+1)/(d-1) ∫ δ_C − 2/(d-1)`.
pub fn phi_minus(c: &dyn Copula, spec: &QuadratureSpec) -> Result<CoefficientValue> {
    let all: Vec<usize> = (0..c.dim()).collect();
    phi_minus_subset(c, &all, spec)
}

/// Upward diagonal index, integrating the survival diagonal
/// `δ_Ĉ(u) = Σ_K (-1)^{|K|} δ_{C_K}(1 - u)`.
pub fn phi_plus(c: &dyn Copula, spec: &QuadratureSpec) -> Result<CoefficientValue> {
    let d = c.dim();
    check_dim(d)?;
    let all: Vec<usize> = (0..d).collect();
    let survival_diagonal = |u: f64| -> f64 {
        let v = 1.0 - u;
        if c.exchangeable() {
            (0..=d)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(d, k) * c.subset_diagonal(&all[..k], v)
                })
                .sum()
        } else {
            let mut acc = 0.0;
            for_each_subset(&all, |k, odd| {
                let x = c.subset_diagonal(k, v);
                acc += if odd { -x } else { x };
            });
            acc
        }
    };
    let integral = integrate(survival_diagonal, spec)?;
    let a = prefactor(d);
    Ok(CoefficientValue {
        value: a * integral.value - 2.0 / (d as f64 - 1.0),
        method: Method::Quadrature,
        abs_error_estimate: a * integral.error_estimate,
    })
}

/// Multivariate Spearman footrule `φ_d = (φ⁺ + φ⁻) / 2`.
pub fn phi_footrule(c: &dyn Copula, spec: &QuadratureSpec) -> Result<CoefficientValue> {
    let plus = phi_plus(c, spec)?;
    let minus = phi_minus(c, spec)?;
    Ok(CoefficientValue {
        value: 0.5 * (plus.value + minus.value),
        method: Method::Quadrature,
        abs_error_estimate: 0.5 * (plus.abs_error_estimate + minus.abs_error_estimate),
    })
}

/// `φ_d^α` by one-dimensional quadrature of the inclusion–exclusion
/// expansion of the directional orthant probability.
pub fn phi_dir_quadrature(
    c: &dyn Copula,
    alpha: &Direction,
    spec: &QuadratureSpec,
) -> Result<CoefficientValue> {
    let d = c.dim();
    check_direction(d, alpha)?;
    let negative = alpha.negative_set();
    let positive = alpha.positive_set();
    let j = positive.len();
    let order: Vec<usize> = negative.iter().chain(&positive).copied().collect();

    let orthant = |u: f64| -> f64 {
        if c.exchangeable() {
            (0..=j)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(j, k) * c.subset_diagonal(&order[..negative.len() + k], u)
                })
                .sum()
        } else {
            let mut acc = 0.0;
            let mut subset = Vec::with_capacity(d);
            for_each_subset(&positive, |s, odd| {
                subset.clear();
                subset.extend_from_slice(&negative);
                subset.extend_from_slice(s);
                let x = c.subset_diagonal(&subset, u);
                acc += if odd { -x } else { x };
            });
            acc
        }
    };
    let integral = integrate(orthant, spec)?;
    let a = prefactor(d);
    Ok(CoefficientValue {
        value: a * integral.value - independence_offset(d, j),
        method: Method::Quadrature,
        abs_error_estimate: a * integral.error_estimate,
    })
}

/// Weight of `φ⁻_{X_{I∪S}}` in the decomposition, `(m-1) / (2(m+1))` with
/// `m = |I ∪ S|`; zero for `m <= 1`.
pub(crate) fn decomposition_weight(m: usize) -> f64 {
    if m <= 1 {
        0.0
    } else {
        (m as f64 - 1.0) / (2.0 * (m as f64 + 1.0))
    }
}

/// `φ_d^α = 2(d+1)/(d-1) Σ_{S ⊆ J} (-1)^{|S|} (m-1)/(2(m+1)) φ⁻_{X_{I∪S}}`,
/// with each marginal `φ⁻` computed on the size-`m` marginal model.
pub fn phi_dir_decompose(
    model: &CopulaModel,
    alpha: &Direction,
    spec: &QuadratureSpec,
) -> Result<CoefficientValue> {
    let d = model.dim();
    check_direction(d, alpha)?;
    let i = alpha.count_negative();
    let j = alpha.count_positive();
    let mut value = 0.0;
    let mut err = 0.0;
    for k in 0..=j {
        let m = i + k;
        let w = decomposition_weight(m);
        if w == 0.0 {
            continue;
        }
        let minus = phi_minus(&model.marginal_model(m)?, spec)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mult = binomial(j, k) * w;
        value += sign * mult * minus.value;
        err += mult * minus.abs_error_estimate;
    }
    let a = prefactor(d);
    Ok(CoefficientValue {
        value: a * value,
        method: Method::Decomposition,
        abs_error_estimate: a * err,
    })
}

/// The decomposition for an arbitrary evaluator, enumerating every subset
/// `S ⊆ J` and integrating each marginal diagonal separately.
pub fn phi_dir_decompose_general(
    c: &dyn Copula,
    alpha: &Direction,
    spec: &QuadratureSpec,
) -> Result<CoefficientValue> {
    let d = c.dim();
    check_direction(d, alpha)?;
    let negative = alpha.negative_set();
    let positive = alpha.positive_set();
    let mut terms = Vec::new();
    for_each_subset(&positive, |s, odd| {
        let mut subset = negative.clone();
        subset.extend_from_slice(s);
        subset.sort_unstable();
        terms.push((subset, odd));
    });
    let mut value = 0.0;
    let mut err = 0.0;
    for (subset, odd) in terms {
        let w = decomposition_weight(subset.len());
        if w == 0.0 {
            continue;
        }
        let minus = phi_minus_subset(c, &subset, spec)?;
        value += if odd { -w } else { w } * minus.value;
        err += w * minus.abs_error_estimate;
    }
    let a = prefactor(d);
    Ok(CoefficientValue {
        value: a * value,
        method: Method::Decomposition,
        abs_error_estimate: a * err,
    })
}

/// Best available route: closed form, then decomposition, then quadrature.
pub fn phi_best(
    model: &CopulaModel,
    alpha: &Direction,
    spec: &QuadratureSpec,
) -> Result<CoefficientValue> {
    check_direction(model.dim(), alpha)?;
    if let Some(v) = closed_form(model, alpha)? {
        return Ok(v);
    }
    match phi_dir_decompose(model, alpha, spec) {
        Ok(v) => Ok(v),
        Err(Error::QuadratureBudget { .. }) => phi_dir_quadrature(model, alpha, spec),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionTable {
    /// All `2^d` directions in lexicographic order.
    pub rows: Vec<(Direction, CoefficientValue)>,
    pub sum: f64,
    /// Accumulated error estimates of the rows; `|sum|` should not exceed it
    /// by more than round-off.
    pub error_budget: f64,
}

impl DirectionTable {
    /// `|Σ_α φ^α|`; zero in exact arithmetic.
    pub fn sum_deviation(&self) -> f64 {
        self.sum.abs()
    }

    pub fn get(&self, alpha: &Direction) -> Option<&CoefficientValue> {
        self.rows.iter().find(|(a, _)| a == alpha).map(|(_, v)| v)
    }
}

/// Coefficients over every direction, by the best route for the family.
pub fn direction_table(
    model: &CopulaModel,
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<DirectionTable> {
    let directions = Direction::all(model.dim())?;
    let values = exec.try_map_range(directions.len(), |k| phi_best(model, &directions[k], spec))?;
    let sum = values.iter().map(|v| v.value).sum();
    let error_budget = values.iter().map(|v| v.abs_error_estimate).sum();
    Ok(DirectionTable {
        rows: directions.into_iter().zip(values).collect(),
        sum,
        error_budget,
    })
}

/// Whether `family` has a closed form for every direction.
pub fn has_closed_form(family: Family) -> bool {
    matches!(
        family,
        Family::Independence | Family::Comonotone | Family::Fgm | Family::CuadrasAuge
    )
}
