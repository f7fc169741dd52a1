//! Copulas as evaluable objects.
//!
//! [`CopulaModel`] covers the parametric families. Anything implementing
//! [`Copula`] can be reflected ([`reflect`]), turned into its survival copula
//! ([`Survival`]), measured over boxes ([`c_volume`]) and checked on a grid
//! ([`validate_copula`]).

mod model;
pub(crate) use model::clayton_diagonal as model_clayton_diagonal;
mod validate;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use model::{CopulaModel, Family};
pub use validate::{validate_copula, validate_copula_with_tol, ValidationReport, Violation, ViolationKind};

/// Where an evaluator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Model,
    Reflected,
    Survival,
    Custom,
}

/// A `k`-dimensional copula `C: [0,1]^k → [0,1]`.
///
/// Implementations are immutable and may be evaluated concurrently.
pub trait Copula: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    /// `C(u)`. Callers guarantee `u.len() == self.dim()` and `u ∈ [0,1]^k`.
    fn eval(&self, u: &[f64]) -> f64;

    fn provenance(&self) -> Provenance;

    /// Diagonal of the marginal over `subset`: `C_K(u, …, u)`, with the
    /// empty marginal equal to 1.
    fn subset_diagonal(&self, subset: &[usize], u: f64) -> f64 {
        if subset.is_empty() {
            return 1.0;
        }
        let mut point = vec![1.0; self.dim()];
        for &i in subset {
            point[i] = u;
        }
        self.eval(&point)
    }

    /// Exchangeable copulas have marginals that depend on `|K|` only.
    fn exchangeable(&self) -> bool {
        false
    }
}

impl<C: Copula + ?Sized> Copula for Arc<C> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, u: &[f64]) -> f64 {
        (**self).eval(u)
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
    fn subset_diagonal(&self, subset: &[usize], u: f64) -> f64 {
        (**self).subset_diagonal(subset, u)
    }
    fn exchangeable(&self) -> bool {
        (**self).exchangeable()
    }
}

impl<C: Copula + ?Sized> Copula for &C {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, u: &[f64]) -> f64 {
        (**self).eval(u)
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
    fn subset_diagonal(&self, subset: &[usize], u: f64) -> f64 {
        (**self).subset_diagonal(subset, u)
    }
    fn exchangeable(&self) -> bool {
        (**self).exchangeable()
    }
}

/// Evaluates `C` with bounds and length checks.
pub fn checked_eval(c: &dyn Copula, u: &[f64]) -> Result<f64> {
    check_point(c.dim(), u)?;
    Ok(c.eval(u))
}

pub(crate) fn check_point(d: usize, u: &[f64]) -> Result<()> {
    if u.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.len(),
        });
    }
    if let Some(x) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::invalid(format!("coordinate {x} outside [0, 1]")));
    }
    Ok(())
}

/// Iterates over the subsets of `items` as `(subset, |subset| is odd)`.
pub(crate) fn for_each_subset(items: &[usize], mut f: impl FnMut(&[usize], bool)) {
    let mut buf = Vec::with_capacity(items.len());
    for mask in 0u64..(1u64 << items.len()) {
        buf.clear();
        buf.extend(
            items
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i),
        );
        f(&buf, mask.count_ones() % 2 == 1);
    }
}

/// `Ĉ(u) = P[U > 1 - u] = Σ_{K ⊆ {1..d}} (-1)^{|K|} C_K((1 - u_i)_{i ∈ K})`.
fn survival_value(c: &dyn Copula, u: &[f64]) -> f64 {
    let d = c.dim();
    let all: Vec<usize> = (0..d).collect();
    let mut point = vec![1.0; d];
    let mut acc = 0.0;
    for_each_subset(&all, |k, odd| {
        point.iter_mut().for_each(|x| *x = 1.0);
        for &i in k {
            point[i] = 1.0 - u[i];
        }
        let v = if k.is_empty() { 1.0 } else { c.eval(&point) };
        if odd {
            acc -= v;
        } else {
            acc += v;
        }
    });
    acc
}

/// The survival copula `Ĉ` of a base copula.
#[derive(Debug, Clone)]
pub struct Survival<C> {
    base: C,
}

impl<C: Copula> Survival<C> {
    pub fn new(base: C) -> Self {
        Survival { base }
    }

    pub fn base(&self) -> &C {
        &self.base
    }
}

impl<C: Copula> Copula for Survival<C> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn eval(&self, u: &[f64]) -> f64 {
        survival_value(&self.base, u)
    }
    fn provenance(&self) -> Provenance {
        Provenance::Survival
    }
    fn exchangeable(&self) -> bool {
        self.base.exchangeable()
    }
}

/// Copula of the vector whose coordinates in `flip` are replaced by `1 - X_j`.
///
/// Each evaluation costs `2^{|flip|}` base evaluations.
#[derive(Debug, Clone)]
pub struct Reflected<C> {
    base: C,
    flip: Vec<usize>,
}

impl<C: Copula> Reflected<C> {
    pub fn flipped(&self) -> &[usize] {
        &self.flip
    }
}

/// `C^{(𝒥)}(u) = Σ_{𝒦 ⊆ 𝒥} (-1)^{|𝒦|} C_{ℐ ∪ 𝒦}(ν(u, ℐ, 𝒦))` with `ℐ` the
/// complement of `𝒥`; `ν` keeps `u_i` on `ℐ` and uses `1 - u_i` on `𝒦`.
pub fn reflect<C: Copula>(base: C, flip: &[usize]) -> Result<Reflected<C>> {
    let d = base.dim();
    let mut flip = flip.to_vec();
    flip.sort_unstable();
    flip.dedup();
    if let Some(&bad) = flip.iter().find(|&&i| i >= d) {
        return Err(Error::invalid(format!(
            "reflection index {bad} out of range for dimension {d}"
        )));
    }
    Ok(Reflected { base, flip })
}

impl<C: Copula> Copula for Reflected<C> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, u: &[f64]) -> f64 {
        let d = self.base.dim();
        let mut point = vec![1.0; d];
        let mut acc = 0.0;
        for_each_subset(&self.flip, |k, odd| {
            for i in 0..d {
                point[i] = if self.flip.binary_search(&i).is_ok() {
                    1.0
                } else {
                    u[i]
                };
            }
            for &i in k {
                point[i] = 1.0 - u[i];
            }
            let v = self.base.eval(&point);
            if odd {
                acc -= v;
            } else {
                acc += v;
            }
        });
        acc
    }

    fn provenance(&self) -> Provenance {
        Provenance::Reflected
    }
}

/// A user-supplied copula given by a closure.
pub struct FnCopula<F> {
    dim: usize,
    f: F,
}

impl<F> FnCopula<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnCopula { dim, f }
    }
}

impl<F> fmt::Debug for FnCopula<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCopula").field("dim", &self.dim).finish()
    }
}

impl<F> Copula for FnCopula<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, u: &[f64]) -> f64 {
        (self.f)(u)
    }
    fn provenance(&self) -> Provenance {
        Provenance::Custom
    }
}

/// A box `[a, b] ⊆ [0,1]^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl UnitBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (a, b) in lower.iter().zip(&upper) {
            if !(0.0..=1.0).contains(a) || !(0.0..=1.0).contains(b) || a > b {
                return Err(Error::invalid(format!("invalid box side [{a}, {b}]")));
            }
        }
        Ok(UnitBox { lower, upper })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// `V_C([a, b]) = Σ_c sgn(c) C(c)` over the `2^k` vertices, with `sgn(c) = -1`
/// when an odd number of coordinates sit at the lower corner.
pub fn c_volume(c: &dyn Copula, bx: &UnitBox) -> Result<f64> {
    if bx.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: bx.dim(),
        });
    }
    let k = bx.dim();
    let mut vertex = vec![0.0; k];
    let mut acc = 0.0;
    for mask in 0u64..(1u64 << k) {
        // bit set = lower corner
        for (i, v) in vertex.iter_mut().enumerate() {
            *v = if mask >> i & 1 == 1 {
                bx.lower[i]
            } else {
                bx.upper[i]
            };
        }
        let val = c.eval(&vertex);
        if mask.count_ones() % 2 == 1 {
            acc -= val;
        } else {
            acc += val;
        }
    }
    Ok(acc)
}
