//! Seeded samplers for the copula families.
//!
//! Randomness comes from [`RngStream`]: ChaCha8 keyed by a 64-bit master seed,
//! with the 64-bit stream index selecting the ChaCha nonce. Equal
//! `(master_seed, stream_index)` pairs replay the same sequence on every
//! platform and thread schedule; distinct pairs give independent streams.

mod dataset;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::copulas::{CopulaModel, Family};
use crate::error::{Error, Result};

pub use dataset::Dataset;

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        RngStream {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Clayton by gamma frailty: `W ~ Gamma(1/θ, 1)`, `E_i ~ Exp(1)`,
/// `U_i = (1 + E_i / W)^{-1/θ}`.
pub fn sample_clayton(d: usize, theta: f64, n: usize, rng: &mut RngStream) -> Result<Dataset> {
    check_d(d)?;
    check_n(n)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::invalid(format!("Clayton parameter {theta} must be positive")));
    }
    let frailty = Gamma::new(1.0 / theta, 1.0)
        .map_err(|e| Error::invalid(format!("gamma frailty: {e}")))?;
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        let w: f64 = frailty.sample(rng.rng());
        for _ in 0..d {
            let e: f64 = Exp1.sample(rng.rng());
            values.push((-(e / w).ln_1p() / theta).exp());
        }
    }
    Dataset::from_rows(n, d, values)
}

/// Cuadras–Augé by the max construction `U_i = max(V_i^{1/(1-θ)}, Z^{1/θ})`
/// with `Z, V_1..V_d` independent uniforms. Every row draws `Z` first, then
/// the `V_i`, whatever `θ` is.
pub fn sample_cuadras_auge(d: usize, theta: f64, n: usize, rng: &mut RngStream) -> Result<Dataset> {
    check_d(d)?;
    check_n(n)?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid(format!(
            "Cuadras-Auge parameter {theta} outside [0, 1]"
        )));
    }
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        let z = rng.uniform();
        for _ in 0..d {
            let v = rng.uniform();
            values.push(if theta == 0.0 {
                v
            } else if theta == 1.0 {
                z
            } else {
                v.powf(1.0 / (1.0 - theta)).max(z.powf(1.0 / theta))
            });
        }
    }
    Dataset::from_rows(n, d, values)
}

/// FGM by rejection from independent uniforms, accepting a proposal with
/// probability `(1 + λ ∏(1 - 2u_i)) / 2`.
pub fn sample_fgm(d: usize, lambda: f64, n: usize, rng: &mut RngStream) -> Result<Dataset> {
    sample_fgm_counted(d, lambda, n, rng).map(|(data, _)| data)
}

/// [`sample_fgm`] that also reports the number of proposals drawn.
pub fn sample_fgm_counted(
    d: usize,
    lambda: f64,
    n: usize,
    rng: &mut RngStream,
) -> Result<(Dataset, u64)> {
    check_d(d)?;
    check_n(n)?;
    if !(-1.0..=1.0).contains(&lambda) {
        return Err(Error::invalid(format!("FGM parameter {lambda} outside [-1, 1]")));
    }
    let mut values = Vec::with_capacity(n * d);
    let mut proposal = vec![0.0; d];
    let mut proposals = 0u64;
    let mut accepted = 0;
    while accepted < n {
        proposals += 1;
        for p in proposal.iter_mut() {
            *p = rng.uniform();
        }
        let tilt: f64 = proposal.iter().map(|u| 1.0 - 2.0 * u).product();
        if 2.0 * rng.uniform() < 1.0 + lambda * tilt {
            values.extend_from_slice(&proposal);
            accepted += 1;
        }
    }
    Ok((Dataset::from_rows(n, d, values)?, proposals))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    Independence,
    Comonotone,
    Countermonotone,
}

/// `Π`: i.i.d. uniforms; `M`: one uniform per row repeated; `W`: `(Z, 1 - Z)`.
pub fn sample_reference(
    kind: ReferenceKind,
    d: usize,
    n: usize,
    rng: &mut RngStream,
) -> Result<Dataset> {
    check_d(d)?;
    check_n(n)?;
    let mut values = Vec::with_capacity(n * d);
    match kind {
        ReferenceKind::Independence => {
            values.extend((0..n * d).map(|_| rng.uniform()));
        }
        ReferenceKind::Comonotone => {
            for _ in 0..n {
                let z = rng.uniform();
                values.extend(std::iter::repeat_n(z, d));
            }
        }
        ReferenceKind::Countermonotone => {
            if d != 2 {
                return Err(Error::invalid(
                    "the countermonotone sampler exists only for d = 2",
                ));
            }
            for _ in 0..n {
                let z = rng.uniform();
                values.push(z);
                values.push(1.0 - z);
            }
        }
    }
    Dataset::from_rows(n, d, values)
}

/// Dispatches to the family sampler.
pub fn sample_model(model: &CopulaModel, n: usize, rng: &mut RngStream) -> Result<Dataset> {
    let d = model.dim();
    let p = model.param().unwrap_or(0.0);
    match model.family() {
        Family::Independence => sample_reference(ReferenceKind::Independence, d, n, rng),
        Family::Comonotone => sample_reference(ReferenceKind::Comonotone, d, n, rng),
        Family::Countermonotone => sample_reference(ReferenceKind::Countermonotone, d, n, rng),
        Family::Fgm => sample_fgm(d, p, n, rng),
        Family::Clayton => sample_clayton(d, p, n, rng),
        Family::CuadrasAuge => sample_cuadras_auge(d, p, n, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_replay_and_differ() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        let mut c = RngStream::new(42, 8);
        let mut e = RngStream::new(43, 7);
        let xa: Vec<f64> = (0..16).map(|_| a.uniform()).collect();
        let xb: Vec<f64> = (0..16).map(|_| b.uniform()).collect();
        let xc: Vec<f64> = (0..16).map(|_| c.uniform()).collect();
        let xe: Vec<f64> = (0..16).map(|_| e.uniform()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert_ne!(xa, xe);
        assert_eq!(a.stream_index(), 7);
        assert_eq!(a.master_seed(), 42);
    }

    #[test]
    fn shapes_and_ranges() {
        let models = [
            CopulaModel::clayton(3, 2.0).unwrap(),
            CopulaModel::cuadras_auge(4, 0.5).unwrap(),
            CopulaModel::fgm(3, -0.5).unwrap(),
            CopulaModel::independence(5).unwrap(),
            CopulaModel::comonotone(2).unwrap(),
            CopulaModel::countermonotone().unwrap(),
        ];
        for m in models {
            let data = sample_model(&m, 257, &mut RngStream::new(1, 0)).unwrap();
            assert_eq!((data.n(), data.d()), (257, m.dim()));
            assert!(data.values().iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn degenerate_constructions() {
        let mut rng = RngStream::new(3, 0);
        let ca1 = sample_cuadras_auge(4, 1.0, 100, &mut rng).unwrap();
        for row in ca1.rows() {
            assert!(row.iter().all(|x| *x == row[0]));
        }
        let m = sample_reference(ReferenceKind::Comonotone, 3, 100, &mut rng).unwrap();
        for row in m.rows() {
            assert!(row.iter().all(|x| *x == row[0]));
        }
        let w = sample_reference(ReferenceKind::Countermonotone, 2, 100, &mut rng).unwrap();
        for row in w.rows() {
            assert_eq!(row[0] + row[1], 1.0);
        }
        assert!(sample_reference(ReferenceKind::Countermonotone, 3, 10, &mut rng).is_err());
    }

    #[test]
    fn dispatch_matches_direct_samplers() {
        let m = CopulaModel::clayton(3, 1.5).unwrap();
        let a = sample_model(&m, 50, &mut RngStream::new(9, 4)).unwrap();
        let b = sample_clayton(3, 1.5, 50, &mut RngStream::new(9, 4)).unwrap();
        assert_eq!(a, b);
        let m = CopulaModel::fgm(4, 0.3).unwrap();
        let a = sample_model(&m, 50, &mut RngStream::new(9, 4)).unwrap();
        let b = sample_fgm(4, 0.3, 50, &mut RngStream::new(9, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_parameters() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_clayton(3, 0.0, 10, &mut rng).is_err());
        assert!(sample_clayton(3, 1.0, 0, &mut rng).is_err());
        assert!(sample_cuadras_auge(3, 1.5, 10, &mut rng).is_err());
        assert!(sample_fgm(3, -1.5, 10, &mut rng).is_err());
        assert!(sample_fgm(1, 0.5, 10, &mut rng).is_err());
    }

    #[test]
    fn fgm_at_zero_accepts_half() {
        let (data, proposals) = sample_fgm_counted(3, 0.0, 50_000, &mut RngStream::new(5, 0)).unwrap();
        assert_eq!(data.n(), 50_000);
        let rate = 50_000.0 / proposals as f64;
        assert!((rate - 0.5).abs() < 0.01, "{rate}");
    }
}
