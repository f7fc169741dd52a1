use std::fmt;
use std::str::FromStr;

use super::{check_point, for_each_subset, Copula, Provenance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Independence,
    Comonotone,
    /// Lower Fréchet bound `W`; a copula only for `d = 2`.
    Countermonotone,
    Fgm,
    Clayton,
    CuadrasAuge,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Independence => "independence",
            Family::Comonotone => "comonotone",
            Family::Countermonotone => "countermonotone",
            Family::Fgm => "fgm",
            Family::Clayton => "clayton",
            Family::CuadrasAuge => "ca",
        }
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, Family::Fgm | Family::Clayton | Family::CuadrasAuge)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "independence" | "pi" | "product" => Ok(Family::Independence),
            "comonotone" | "m" | "upper" => Ok(Family::Comonotone),
            "countermonotone" | "w" | "lower" => Ok(Family::Countermonotone),
            "fgm" => Ok(Family::Fgm),
            "clayton" => Ok(Family::Clayton),
            "ca" | "cuadras-auge" | "cuadras_auge" | "cuadrasauge" => Ok(Family::CuadrasAuge),
            other => Err(Error::invalid(format!("unknown copula family `{other}`"))),
        }
    }
}

/// A parametric copula: family, dimension and (when the family has one)
/// its parameter. `λ ∈ [-1, 1]` for FGM, `θ > 0` for Clayton and
/// `θ ∈ [0, 1]` for Cuadras–Augé.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopulaModel {
    family: Family,
    d: usize,
    param: Option<f64>,
}

impl CopulaModel {
    pub fn new(family: Family, d: usize, param: Option<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
        }
        let param = if family.has_parameter() {
            let p = param.ok_or_else(|| {
                Error::invalid(format!("family {family} requires a parameter"))
            })?;
            if !p.is_finite() {
                return Err(Error::invalid(format!("parameter {p} is not finite")));
            }
            let ok = match family {
                Family::Fgm => (-1.0..=1.0).contains(&p),
                Family::Clayton => p > 0.0,
                Family::CuadrasAuge => (0.0..=1.0).contains(&p),
                _ => unreachable!(),
            };
            if !ok {
                return Err(Error::invalid(format!(
                    "parameter {p} outside the admissible range for {family}"
                )));
            }
            Some(p)
        } else {
            None
        };
        if family == Family::Countermonotone && d != 2 {
            return Err(Error::invalid(
                "the countermonotone copula exists only for d = 2",
            ));
        }
        Ok(CopulaModel { family, d, param })
    }

    pub fn independence(d: usize) -> Result<Self> {
        Self::new(Family::Independence, d, None)
    }

    pub fn comonotone(d: usize) -> Result<Self> {
        Self::new(Family::Comonotone, d, None)
    }

    pub fn countermonotone() -> Result<Self> {
        Self::new(Family::Countermonotone, 2, None)
    }

    pub fn fgm(d: usize, lambda: f64) -> Result<Self> {
        Self::new(Family::Fgm, d, Some(lambda))
    }

    pub fn clayton(d: usize, theta: f64) -> Result<Self> {
        Self::new(Family::Clayton, d, Some(theta))
    }

    pub fn cuadras_auge(d: usize, theta: f64) -> Result<Self> {
        Self::new(Family::CuadrasAuge, d, Some(theta))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn param(&self) -> Option<f64> {
        self.param
    }

    fn p(&self) -> f64 {
        self.param.unwrap_or(0.0)
    }

    /// The same copula in another dimension.
    pub fn with_dim(&self, d: usize) -> Result<Self> {
        Self::new(self.family, d, self.param)
    }

    /// The copula of any `m` of the `d` coordinates, `2 <= m <= d`.
    ///
    /// Families are exchangeable, so only `m` matters. The FGM form used here
    /// carries a single `d`-fold product term, hence its proper marginals are
    /// independence copulas.
    pub fn marginal_model(&self, m: usize) -> Result<Self> {
        if m < 2 || m > self.d {
            return Err(Error::invalid(format!(
                "marginal size {m} outside 2..={}",
                self.d
            )));
        }
        match self.family {
            Family::Fgm if m < self.d => Self::independence(m),
            _ => self.with_dim(m),
        }
    }

    /// `C(u)` with argument validation.
    pub fn cdf(&self, u: &[f64]) -> Result<f64> {
        check_point(self.d, u)?;
        Ok(self.cdf_unchecked(u))
    }

    fn cdf_unchecked(&self, u: &[f64]) -> f64 {
        match self.family {
            Family::Independence => u.iter().product(),
            Family::Comonotone => min_of(u),
            Family::Countermonotone => (u[0] + u[1] - 1.0).max(0.0),
            Family::Fgm => {
                let prod: f64 = u.iter().product();
                let tail: f64 = u.iter().map(|x| 1.0 - x).product();
                prod * (1.0 + self.p() * tail)
            }
            Family::Clayton => clayton_cdf(u, self.p()),
            Family::CuadrasAuge => {
                let theta = self.p();
                if theta == 0.0 {
                    u.iter().product()
                } else if theta == 1.0 {
                    min_of(u)
                } else {
                    let prod: f64 = u.iter().product();
                    prod.powf(1.0 - theta) * min_of(u).powf(theta)
                }
            }
        }
    }

    /// Diagonal of any size-`m` marginal, `δ_{C_K}(u)` with `|K| = m`.
    ///
    /// `m = 0` gives 1 and `m = 1` gives `u`.
    pub fn diagonal_of_size(&self, m: usize, u: f64) -> f64 {
        match m {
            0 => return 1.0,
            1 => return u,
            _ => {}
        }
        let mf = m as f64;
        match self.family {
            Family::Independence => u.powi(m as i32),
            Family::Comonotone => u,
            Family::Countermonotone => (2.0 * u - 1.0).max(0.0),
            Family::Fgm => {
                let base = u.powi(m as i32);
                if m == self.d {
                    base * (1.0 + self.p() * (1.0 - u).powi(m as i32))
                } else {
                    base
                }
            }
            Family::Clayton => clayton_diagonal(mf, self.p(), u),
            Family::CuadrasAuge => {
                let theta = self.p();
                if theta == 0.0 {
                    u.powi(m as i32)
                } else if theta == 1.0 {
                    u
                } else {
                    u.powf(mf - theta * (mf - 1.0))
                }
            }
        }
    }

    /// `δ_{C_K}(u)` for an index set `K` (zero-based, may be empty).
    pub fn marginal_diagonal(&self, subset: &[usize], u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::invalid(format!("u = {u} outside [0, 1]")));
        }
        let mut seen = vec![false; self.d];
        for &i in subset {
            if i >= self.d || seen[i] {
                return Err(Error::invalid(format!(
                    "subset {subset:?} is not a set of indices below {}",
                    self.d
                )));
            }
            seen[i] = true;
        }
        Ok(self.diagonal_of_size(subset.len(), u))
    }

    /// Survival copula `Ĉ(u) = P[U > 1 - u]` by inclusion–exclusion over marginals.
    pub fn survival_cdf(&self, u: &[f64]) -> Result<f64> {
        check_point(self.d, u)?;
        let all: Vec<usize> = (0..self.d).collect();
        let mut point = vec![1.0; self.d];
        let mut acc = 0.0;
        for_each_subset(&all, |k, odd| {
            let v = if k.is_empty() {
                1.0
            } else {
                point.iter_mut().for_each(|x| *x = 1.0);
                for &i in k {
                    point[i] = 1.0 - u[i];
                }
                self.cdf_unchecked(&point)
            };
            if odd {
                acc -= v;
            } else {
                acc += v;
            }
        });
        Ok(acc)
    }
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}(d={}, {})", self.family, self.d, p),
            None => write!(f, "{}(d={})", self.family, self.d),
        }
    }
}

impl Copula for CopulaModel {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, u: &[f64]) -> f64 {
        self.cdf_unchecked(u)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Model
    }

    fn subset_diagonal(&self, subset: &[usize], u: f64) -> f64 {
        self.diagonal_of_size(subset.len(), u)
    }

    fn exchangeable(&self) -> bool {
        true
    }
}

fn min_of(u: &[f64]) -> f64 {
    u.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `(Σ u_i^{-θ} - d + 1)^{-1/θ}` rewritten around `m = min u_i` as
/// `m (1 + m^θ Σ_{i≠min} (u_i^{-θ} - 1))^{-1/θ}`. Nothing overflows near the
/// origin and coordinates equal to 1 drop out exactly.
fn clayton_cdf(u: &[f64], theta: f64) -> f64 {
    let (lo, m) = u
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, x)| if x < acc.1 { (i, x) } else { acc });
    if m <= 0.0 {
        return 0.0;
    }
    // m^θ Σ_{i≠lo} (u_i^{-θ} - 1), scaled by the smallest coordinate
    let m_theta = m.powf(theta);
    let excess: f64 = u
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != lo)
        .map(|(_, &x)| {
            let t = (-theta * x.ln()).exp_m1();
            if t.is_finite() {
                m_theta * t
            } else {
                (m / x).powf(theta) - m_theta
            }
        })
        .sum();
    m * (-excess.max(0.0).ln_1p() / theta).exp()
}

/// `(m u^{-θ} + 1 - m)^{-1/θ} = u (m + (1 - m) u^θ)^{-1/θ}`; equals 0 at `u = 0`.
pub(crate) fn clayton_diagonal(m: f64, theta: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let bracket = m + (1.0 - m) * u.powf(theta);
    u * bracket.max(1.0).powf(-1.0 / theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn all_models() -> Vec<CopulaModel> {
        vec![
            CopulaModel::independence(3).unwrap(),
            CopulaModel::comonotone(4).unwrap(),
            CopulaModel::countermonotone().unwrap(),
            CopulaModel::fgm(3, -0.8).unwrap(),
            CopulaModel::fgm(2, 1.0).unwrap(),
            CopulaModel::clayton(3, 5.0).unwrap(),
            CopulaModel::clayton(4, 0.05).unwrap(),
            CopulaModel::cuadras_auge(4, 0.4).unwrap(),
            CopulaModel::cuadras_auge(3, 0.0).unwrap(),
            CopulaModel::cuadras_auge(3, 1.0).unwrap(),
        ]
    }

    #[test]
    fn cdf_examples() {
        let m = CopulaModel::comonotone(3).unwrap();
        assert_eq!(m.cdf(&[0.3, 0.7, 0.5]).unwrap(), 0.3);
        let pi = CopulaModel::independence(3).unwrap();
        assert_eq!(pi.cdf(&[0.5, 0.5, 0.5]).unwrap(), 0.125);
        let cl = CopulaModel::clayton(2, 1.0).unwrap();
        assert_abs_diff_eq!(cl.cdf(&[0.5, 0.5]).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let fgm = CopulaModel::fgm(2, 1.0).unwrap();
        assert_abs_diff_eq!(fgm.cdf(&[0.5, 0.5]).unwrap(), 0.3125, epsilon = 1e-15);
        assert!(matches!(
            pi.cdf(&[0.5, 0.5]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
        assert!(pi.cdf(&[0.5, 1.5, 0.2]).is_err());
    }

    #[test]
    fn parameter_ranges() {
        assert!(CopulaModel::fgm(3, 1.01).is_err());
        assert!(CopulaModel::clayton(3, 0.0).is_err());
        assert!(CopulaModel::cuadras_auge(3, -0.1).is_err());
        assert!(CopulaModel::new(Family::Countermonotone, 3, None).is_err());
        assert!(CopulaModel::independence(1).is_err());
        assert!(CopulaModel::new(Family::Clayton, 3, None).is_err());
        assert!(CopulaModel::clayton(3, f64::NAN).is_err());
    }

    #[test]
    fn boundary_conditions_hold_for_every_family() {
        let probes = [0.0, 0.13, 0.5, 0.77, 1.0];
        for model in all_models() {
            let d = model.dim();
            for k in 0..d {
                for &x in &probes {
                    let mut p = vec![0.6; d];
                    p[k] = 0.0;
                    assert_eq!(model.cdf(&p).unwrap(), 0.0, "{model} grounded");
                    let mut q = vec![1.0; d];
                    q[k] = x;
                    assert_abs_diff_eq!(model.cdf(&q).unwrap(), x, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn marginal_diagonal_examples() {
        let ca = CopulaModel::cuadras_auge(4, 0.4).unwrap();
        assert_abs_diff_eq!(
            ca.marginal_diagonal(&[0, 1, 2, 3], 0.5).unwrap(),
            0.5f64.powf(2.8),
            epsilon = 1e-15
        );
        for model in all_models() {
            assert_eq!(model.marginal_diagonal(&[], 0.7).unwrap(), 1.0);
            assert_eq!(model.marginal_diagonal(&[1], 0.42).unwrap(), 0.42);
        }
        assert!(ca.marginal_diagonal(&[0, 0], 0.5).is_err());
        assert!(ca.marginal_diagonal(&[4], 0.5).is_err());
    }

    #[test]
    fn marginal_diagonal_is_cdf_of_marginal_model() {
        for model in all_models() {
            for m in 2..=model.dim() {
                let sub = model.marginal_model(m).unwrap();
                for u in [0.0, 0.01, 0.3, 0.5, 0.8, 1.0] {
                    let via_cdf = sub.cdf(&vec![u; m]).unwrap();
                    assert_abs_diff_eq!(model.diagonal_of_size(m, u), via_cdf, epsilon = 1e-14);
                    // and against the full-dimensional cdf with ones elsewhere
                    let mut p = vec![1.0; model.dim()];
                    p[..m].iter_mut().for_each(|x| *x = u);
                    assert_abs_diff_eq!(model.diagonal_of_size(m, u), model.cdf(&p).unwrap(), epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn clayton_diagonal_near_origin() {
        let m = CopulaModel::clayton(5, 10.0).unwrap();
        assert_eq!(m.diagonal_of_size(5, 0.0), 0.0);
        let tiny = m.diagonal_of_size(5, 1e-300);
        assert!(tiny > 0.0 && tiny < 1e-300);
        let c = m.cdf(&[1e-200, 1e-250, 0.5, 0.9, 1e-300]).unwrap();
        assert!(c.is_finite() && c >= 0.0 && c <= 1e-300);
    }

    #[test]
    fn survival_examples() {
        let pi = CopulaModel::independence(2).unwrap();
        assert_abs_diff_eq!(pi.survival_cdf(&[0.5, 0.5]).unwrap(), 0.25, epsilon = 1e-15);
        let m = CopulaModel::comonotone(3).unwrap();
        for t in [0.0, 0.2, 0.65, 1.0] {
            assert_abs_diff_eq!(m.survival_cdf(&[t, t, t]).unwrap(), t, epsilon = 1e-15);
        }
        let w = CopulaModel::countermonotone().unwrap();
        for (a, b) in [(0.2, 0.3), (0.7, 0.6), (0.5, 0.5), (1.0, 0.25)] {
            assert_abs_diff_eq!(
                w.survival_cdf(&[a, b]).unwrap(),
                (a + b - 1.0f64).max(0.0),
                epsilon = 1e-15
            );
        }
        for model in all_models() {
            let d = model.dim();
            assert_abs_diff_eq!(model.survival_cdf(&vec![1.0; d]).unwrap(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(model.survival_cdf(&vec![0.0; d]).unwrap(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn cuadras_auge_endpoints_are_exact() {
        let p = [0.3, 0.9, 0.55];
        let ca0 = CopulaModel::cuadras_auge(3, 0.0).unwrap();
        let ca1 = CopulaModel::cuadras_auge(3, 1.0).unwrap();
        assert_eq!(ca0.cdf(&p).unwrap(), CopulaModel::independence(3).unwrap().cdf(&p).unwrap());
        assert_eq!(ca1.cdf(&p).unwrap(), 0.3);
    }

    #[test]
    fn family_names_parse() {
        for f in [
            Family::Independence,
            Family::Comonotone,
            Family::Countermonotone,
            Family::Fgm,
            Family::Clayton,
            Family::CuadrasAuge,
        ] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("Cuadras-Auge".parse::<Family>().unwrap(), Family::CuadrasAuge);
        assert!("gumbel".parse::<Family>().is_err());
    }
}
