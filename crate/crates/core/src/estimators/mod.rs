//! Rank-based estimation of the directional footrule coefficients.
//!
//! With pseudo-observations `R_ij / (n + 1)` the estimator is
//!
//! ```text
//! φ̃ = 2(d+1) / ((d-1)(n+1)) · [ (1/n) Σ_j (min_J R_j - max_I R_j)₊ - (n+1)|I|!|J|!/(d+1)! ]
//! ```
//!
//! with `min` over an empty set equal to `n + 1` and `max` over an empty set
//! equal to 0. Everything is an integer until the final division, so the
//! estimator, its process form and its decomposition agree to the last bit.

use std::path::Path;

use num_integer::Integer;

use crate::direction::{Direction, MAX_ENUMERATION_DIM};
use crate::error::{Error, Result};
use crate::sampling::Dataset;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TiePolicy {
    /// Equal values are ranked by row order.
    #[default]
    FirstOccurrence,
    /// Any within-column tie is an error.
    Strict,
}

impl TiePolicy {
    pub fn name(self) -> &'static str {
        match self {
            TiePolicy::FirstOccurrence => "first_occurrence",
            TiePolicy::Strict => "strict",
        }
    }
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "first_occurrence" | "first" => Ok(TiePolicy::FirstOccurrence),
            "strict" => Ok(TiePolicy::Strict),
            _ => Err(Error::invalid(format!(
                "unknown tie policy `{s}` (expected first_occurrence or strict)"
            ))),
        }
    }
}

/// Column-wise ranks, row-major. Every column is a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    n: usize,
    d: usize,
    ranks: Vec<u32>,
}

impl RankMatrix {
    pub fn new(n: usize, d: usize, ranks: Vec<u32>) -> Result<Self> {
        if n < 1 || d < 2 {
            return Err(Error::Data(format!("rank matrix must be at least 1 x 2, got {n} x {d}")));
        }
        if ranks.len() != n * d {
            return Err(Error::Data(format!("{} ranks do not fill {n} x {d}", ranks.len())));
        }
        for c in 0..d {
            let mut seen = vec![false; n];
            for r in 0..n {
                let v = ranks[r * d + c] as usize;
                if v < 1 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                    return Err(Error::Data(format!(
                        "column {} is not a permutation of 1..={n}",
                        c + 1
                    )));
                }
            }
        }
        Ok(RankMatrix { n, d, ranks })
    }

    /// Builds from per-column rank vectors.
    pub fn from_columns(columns: &[Vec<u32>]) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Data("rank columns differ in length".into()));
        }
        let ranks = (0..n).flat_map(|r| columns.iter().map(move |c| c[r])).collect();
        Self::new(n, d, ranks)
    }

    /// Every column equal to `1..=n`.
    pub fn comonotone(n: usize, d: usize) -> Result<Self> {
        Self::from_columns(&vec![(1..=n as u32).collect(); d])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.ranks[row * self.d + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.ranks[row * self.d..(row + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u32> {
        self.ranks.chunks_exact(self.d)
    }

    pub fn column(&self, col: usize) -> Vec<u32> {
        self.rows().map(|r| r[col]).collect()
    }

    /// `n + 1 - R` in every cell.
    pub fn reversed(&self) -> RankMatrix {
        let top = self.n as u32 + 1;
        RankMatrix {
            n: self.n,
            d: self.d,
            ranks: self.ranks.iter().map(|r| top - r).collect(),
        }
    }

    /// Columns reordered so that new column `k` is old column `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RankMatrix> {
        let cols: Vec<Vec<u32>> = perm.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(&cols)
    }
}

/// Ranks each column, 1 for the smallest value.
pub fn ranks(data: &Dataset, policy: TiePolicy) -> Result<RankMatrix> {
    let (n, d) = (data.n(), data.d());
    if n < 2 {
        return Err(Error::Data(format!("ranking needs at least 2 rows, got {n}")));
    }
    let mut out = vec![0u32; n * d];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for c in 0..d {
        order.clear();
        order.extend(0..n);
        order.sort_by(|&a, &b| data.get(a, c).total_cmp(&data.get(b, c)));
        if policy == TiePolicy::Strict {
            if let Some(w) = order.windows(2).find(|w| data.get(w[0], c) == data.get(w[1], c)) {
                let value = data.get(w[0], c);
                let rows = (0..n).filter(|&r| data.get(r, c) == value).map(|r| r + 1).collect();
                return Err(Error::Tie { column: c + 1, rows });
            }
        }
        for (rank, &row) in order.iter().enumerate() {
            out[row * d + c] = rank as u32 + 1;
        }
    }
    RankMatrix::new(n, d, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateValue {
    pub value: f64,
    pub direction: Direction,
    pub n: usize,
}

fn check_dim(ranks: &RankMatrix, alpha: &Direction) -> Result<()> {
    if ranks.d() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: ranks.d(),
            got: alpha.dim(),
        });
    }
    Ok(())
}

/// `num / den` after cancelling the common factor.
fn ratio(num: i128, den: i128) -> f64 {
    let g = num.gcd(&den).max(1);
    (num / g) as f64 / (den / g) as f64
}

fn binom(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `(min_J R - max_I R)₊` for one row.
fn gap(row: &[u32], alpha: &Direction, top: u32) -> u32 {
    let mut lo = 0;
    let mut hi = top;
    for (i, &r) in row.iter().enumerate() {
        if alpha.is_positive(i) {
            hi = hi.min(r);
        } else {
            lo = lo.max(r);
        }
    }
    hi.saturating_sub(lo)
}

/// Turns the total gap `S = Σ_j (min_J R - max_I R)₊` into the estimate,
/// `2 (S (d+1) B - n (n+1)) / ((d-1) n (n+1) B)` with `B = C(d, |J|)`.
fn from_gap_total(total: u64, n: usize, alpha: &Direction) -> f64 {
    let d = alpha.dim() as i128;
    let n = n as i128;
    let b = binom(alpha.dim(), alpha.count_positive());
    ratio(
        2 * (total as i128 * (d + 1) * b - n * (n + 1)),
        (d - 1) * n * (n + 1) * b,
    )
}

pub fn phi_hat(ranks: &RankMatrix, alpha: &Direction) -> Result<EstimateValue> {
    check_dim(ranks, alpha)?;
    let top = ranks.n() as u32 + 1;
    let total: u64 = ranks.rows().map(|row| gap(row, alpha, top) as u64).sum();
    Ok(EstimateValue {
        value: from_gap_total(total, ranks.n(), alpha),
        direction: alpha.clone(),
        n: ranks.n(),
    })
}

/// All `2^d` directions in lexicographic order (`-` before `+`).
pub fn phi_hat_all(ranks: &RankMatrix) -> Result<Vec<EstimateValue>> {
    if ranks.d() > MAX_ENUMERATION_DIM {
        return Err(Error::invalid(format!(
            "enumerating all directions needs d <= {MAX_ENUMERATION_DIM}, got {}",
            ranks.d()
        )));
    }
    Direction::all(ranks.d())?
        .iter()
        .map(|a| phi_hat(ranks, a))
        .collect()
}

/// `(1/(n+1)) Σ_j ∏_i 1{α_i R_ij/(n+1) ≤ α_i u_i}`.
pub fn empirical_dir_copula(ranks: &RankMatrix, alpha: &Direction, u: &[f64]) -> Result<f64> {
    check_dim(ranks, alpha)?;
    if u.len() != ranks.d() {
        return Err(Error::DimensionMismatch {
            expected: ranks.d(),
            got: u.len(),
        });
    }
    let scale = (ranks.n() + 1) as f64;
    let hits = ranks
        .rows()
        .filter(|row| {
            row.iter().zip(u).enumerate().all(|(i, (&r, &x))| {
                let p = r as f64 / scale;
                if alpha.is_positive(i) {
                    p <= x
                } else {
                    p >= x
                }
            })
        })
        .count();
    Ok(hits as f64 / scale)
}

/// Same estimate from the diagonal of the empirical process in the opposite
/// direction. Row `j` is counted while `u` lies in `[max_I R, min_J R] / (n+1)`,
/// so the step integral is a sweep over the sorted interval endpoints,
/// done in units of `1/(n+1)`.
pub fn phi_hat_via_process(ranks: &RankMatrix, alpha: &Direction) -> Result<EstimateValue> {
    check_dim(ranks, alpha)?;
    let top = ranks.n() as u32 + 1;
    let mut events: Vec<(u32, i64)> = Vec::with_capacity(2 * ranks.n());
    for row in ranks.rows() {
        let mut lo = 0;
        let mut hi = top;
        for (i, &r) in row.iter().enumerate() {
            if alpha.is_positive(i) {
                hi = hi.min(r);
            } else {
                lo = lo.max(r);
            }
        }
        if hi > lo {
            events.push((lo, 1));
            events.push((hi, -1));
        }
    }
    events.sort_unstable();
    let mut active = 0i64;
    let mut last = 0u32;
    // (n+1)^2 times the integral of the process diagonal
    let mut area = 0i64;
    for (at, step) in events {
        area += active * (at - last) as i64;
        active += step;
        last = at;
    }
    Ok(EstimateValue {
        value: from_gap_total(area as u64, ranks.n(), alpha),
        direction: alpha.clone(),
        n: ranks.n(),
    })
}

/// Lower-orthant estimates on column subsets `I ∪ K`, `K ⊆ J`, combined with
/// the alternating weights `(m-1)/(2(m+1))`; subsets with `m ≤ 1` drop out.
/// Each lower-orthant term uses the reversed ranks, `min R̄ = n + 1 - max R`.
pub fn phi_hat_decompose(ranks: &RankMatrix, alpha: &Direction) -> Result<EstimateValue> {
    check_dim(ranks, alpha)?;
    let d = ranks.d();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::invalid(format!(
            "decomposition needs d <= {MAX_ENUMERATION_DIM}, got {d}"
        )));
    }
    let reversed = ranks.reversed();
    let negative = alpha.negative_set();
    let positive = alpha.positive_set();
    let n = ranks.n() as i128;
    let lcm = (1..=d as i128 + 1).fold(1i128, |acc, k| acc.lcm(&k));
    // Σ_K (-1)^{|K|} [ L Σ_j min R̄ - n(n+1) L/(m+1) ], with L = lcm(1..=d+1)
    let mut numerator = 0i128;
    let mut subset = Vec::with_capacity(d);
    for mask in 0u32..(1 << positive.len()) {
        subset.clear();
        subset.extend_from_slice(&negative);
        subset.extend(
            positive
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &c)| c),
        );
        let m = subset.len() as i128;
        if m <= 1 {
            continue;
        }
        let mins: i128 = reversed
            .rows()
            .map(|row| subset.iter().map(|&c| row[c]).min().unwrap() as i128)
            .sum();
        let term = lcm * mins - n * (n + 1) * (lcm / (m + 1));
        if mask.count_ones() % 2 == 0 {
            numerator += term;
        } else {
            numerator -= term;
        }
    }
    let d = d as i128;
    Ok(EstimateValue {
        value: ratio(2 * (d + 1) * numerator, (d - 1) * n * (n + 1) * lcm),
        direction: alpha.clone(),
        n: ranks.n(),
    })
}

/// Exact mean of [`phi_hat`] over samples of size `n` from the independence
/// copula. Within a row the ranks are independent and uniform on `1..=n`, so
/// `E (min_J R - max_I R)₊ = Σ_{t=1}^{n+1} ((t-1)/n)^{|I|} ((n+1-t)/n)^{|J|}`.
/// Differs from 0 by `O(1/n)`.
pub fn independence_mean(n: usize, alpha: &Direction) -> Result<f64> {
    if n < 1 || alpha.dim() < 2 {
        return Err(Error::invalid("independence_mean needs n >= 1 and d >= 2"));
    }
    let (i, j) = (alpha.count_negative() as i32, alpha.count_positive() as i32);
    let nf = n as f64;
    let gap: f64 = (1..=n + 1)
        .map(|t| ((t - 1) as f64 / nf).powi(i) * ((n + 1 - t) as f64 / nf).powi(j))
        .sum();
    let d = alpha.dim() as f64;
    let b = binom(alpha.dim(), alpha.count_positive()) as f64;
    Ok(2.0 * (d + 1.0) / ((d - 1.0) * (nf + 1.0)) * (gap - (nf + 1.0) / ((d + 1.0) * b)))
}

/// Loads a dataset CSV, ranks it and estimates.
pub fn phi_hat_from_csv(path: &Path, alpha: &Direction, policy: TiePolicy) -> Result<EstimateValue> {
    let data = Dataset::load_csv(path)?;
    if data.d() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.d(),
            got: alpha.dim(),
        });
    }
    phi_hat(&ranks(&data, policy)?, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RngStream;
    use proptest::prelude::*;

    fn dir(s: &str) -> Direction {
        s.parse().unwrap()
    }

    fn random_ranks(n: usize, d: usize, rng: &mut RngStream) -> RankMatrix {
        let values: Vec<f64> = (0..n * d).map(|_| rng.uniform()).collect();
        ranks(&Dataset::from_rows(n, d, values).unwrap(), TiePolicy::FirstOccurrence).unwrap()
    }

    /// Every matrix whose columns are permutations of 1..=n, first column fixed
    /// to the identity when `fix_first`.
    fn all_rank_matrices(n: usize, d: usize, fix_first: bool) -> Vec<RankMatrix> {
        fn perms(n: usize) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n as u32);
                    out.push(q);
                }
            }
            out
        }
        let ps = perms(n);
        let mut combos: Vec<Vec<Vec<u32>>> = vec![vec![]];
        for c in 0..d {
            let choices: Vec<Vec<u32>> = if c == 0 && fix_first {
                vec![(1..=n as u32).collect()]
            } else {
                ps.clone()
            };
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |p| {
                        let mut next = prefix.clone();
                        next.push(p.clone());
                        next
                    })
                })
                .collect();
        }
        combos.iter().map(|cols| RankMatrix::from_columns(cols).unwrap()).collect()
    }

    /// Straight transcription of the estimator in floating point.
    fn phi_hat_float(ranks: &RankMatrix, alpha: &Direction) -> f64 {
        let (n, d) = (ranks.n() as f64, ranks.d() as f64);
        let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
        let s: f64 = ranks
            .rows()
            .map(|row| {
                let min_j = alpha.positive_set().iter().map(|&i| row[i]).min().unwrap_or(ranks.n() as u32 + 1);
                let max_i = alpha.negative_set().iter().map(|&i| row[i]).max().unwrap_or(0);
                (min_j as f64 - max_i as f64).max(0.0)
            })
            .sum();
        let c = fact(alpha.count_negative()) * fact(alpha.count_positive()) / fact(ranks.d() + 1);
        2.0 * (d + 1.0) / ((d - 1.0) * (n + 1.0)) * (s / n - (n + 1.0) * c)
    }

    #[test]
    fn rank_examples() {
        let data = Dataset::from_rows(3, 2, vec![0.3, 5.0, 0.1, 5.0, 0.9, 1.0]).unwrap();
        let r = ranks(&data, TiePolicy::FirstOccurrence).unwrap();
        assert_eq!(r.column(0), vec![2, 1, 3]);
        assert_eq!(r.column(1), vec![2, 3, 1]);
        match ranks(&data, TiePolicy::Strict).unwrap_err() {
            Error::Tie { column, rows } => {
                assert_eq!(column, 2);
                assert_eq!(rows, vec![1, 2]);
            }
            other => panic!("{other:?}"),
        }
        let one = Dataset::from_rows(1, 2, vec![0.1, 0.2]).unwrap();
        assert!(ranks(&one, TiePolicy::FirstOccurrence).is_err());
        assert_eq!("strict".parse::<TiePolicy>().unwrap(), TiePolicy::Strict);
        assert_eq!("first-occurrence".parse::<TiePolicy>().unwrap(), TiePolicy::FirstOccurrence);
        assert!("loose".parse::<TiePolicy>().is_err());
    }

    #[test]
    fn rank_matrix_validation() {
        assert!(RankMatrix::new(2, 2, vec![1, 1, 1, 2]).is_err());
        assert!(RankMatrix::new(2, 2, vec![1, 2, 2, 3]).is_err());
        assert!(RankMatrix::new(2, 1, vec![1, 2]).is_err());
        let r = RankMatrix::new(2, 2, vec![1, 2, 2, 1]).unwrap();
        assert_eq!(r.reversed(), RankMatrix::new(2, 2, vec![2, 1, 1, 2]).unwrap());
    }

    #[test]
    fn comonotone_is_exactly_one() {
        for n in [2, 3, 10, 97, 1000] {
            for d in 2..=6 {
                let r = RankMatrix::comonotone(n, d).unwrap();
                assert_eq!(phi_hat(&r, &Direction::upper(d)).unwrap().value, 1.0);
                assert_eq!(phi_hat(&r, &Direction::lower(d)).unwrap().value, 1.0);
            }
        }
        let r = RankMatrix::comonotone(7, 2).unwrap();
        let values: Vec<f64> = phi_hat_all(&r).unwrap().iter().map(|e| e.value).collect();
        // lexicographic: --, -+, +-, ++
        assert_eq!(values, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn countermonotone_examples() {
        let counter = |n: usize| {
            RankMatrix::from_columns(&[(1..=n as u32).collect(), (1..=n as u32).rev().collect()]).unwrap()
        };
        assert!((phi_hat(&counter(4), &dir("-+")).unwrap().value - 0.2).abs() < 1e-15);
        for n in [2usize, 6, 10, 50] {
            let expected = 3.0 * n as f64 / (2.0 * (n as f64 + 1.0)) - 1.0;
            assert!((phi_hat(&counter(n), &dir("-+")).unwrap().value - expected).abs() < 1e-14);
        }
        assert_eq!(phi_hat(&counter(2), &dir("++")).unwrap().value, 0.0);
        assert_eq!(phi_hat_decompose(&counter(2), &dir("-+")).unwrap().value, 0.0);
        let co = RankMatrix::comonotone(2, 2).unwrap();
        assert_eq!(phi_hat_decompose(&co, &dir("-+")).unwrap().value, -1.0);
    }

    #[test]
    fn dimension_mismatch() {
        let r = RankMatrix::comonotone(4, 3).unwrap();
        assert!(matches!(
            phi_hat(&r, &dir("+-")),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
        assert!(phi_hat_via_process(&r, &dir("+-")).is_err());
        assert!(phi_hat_decompose(&r, &dir("+-")).is_err());
        assert!(empirical_dir_copula(&r, &dir("+++"), &[0.5, 0.5]).is_err());
    }

    #[test]
    fn empirical_process_examples() {
        let r = RankMatrix::comonotone(2, 2).unwrap();
        assert!((empirical_dir_copula(&r, &dir("++"), &[0.9, 0.9]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let mut rng = RngStream::new(11, 0);
        let r = random_ranks(20, 3, &mut rng);
        assert_eq!(empirical_dir_copula(&r, &dir("+++"), &[1.0; 3]).unwrap(), 20.0 / 21.0);
        assert_eq!(empirical_dir_copula(&r, &dir("+++"), &[0.5, 0.04, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn exhaustive_identities_small_n() {
        // n=3, d=2: 36 matrices, every direction
        let mut worst = 0.0f64;
        for r in all_rank_matrices(3, 2, false) {
            for a in Direction::all(2).unwrap() {
                let base = phi_hat(&r, &a).unwrap().value;
                worst = worst.max((phi_hat_via_process(&r, &a).unwrap().value - base).abs());
                assert_eq!(phi_hat_decompose(&r, &a).unwrap().value, base, "{r:?} {a}");
                assert!((phi_hat_float(&r, &a) - base).abs() < 1e-13);
            }
        }
        assert!(worst < 1e-13);
        for (n, d) in [(3, 3), (4, 2), (4, 3)] {
            for r in all_rank_matrices(n, d, d == 3) {
                for a in Direction::all(d).unwrap() {
                    let base = phi_hat(&r, &a).unwrap().value;
                    assert_eq!(phi_hat_decompose(&r, &a).unwrap().value, base);
                    assert_eq!(phi_hat_via_process(&r, &a).unwrap().value, base);
                }
            }
        }
    }

    #[test]
    fn process_sweep_matches_pointwise_process() {
        let mut rng = RngStream::new(5, 2);
        for (n, d) in [(7, 2), (12, 3), (9, 4)] {
            let r = random_ranks(n, d, &mut rng);
            for a in Direction::all(d).unwrap() {
                let opposite = a.negated();
                // the diagonal is constant on each open cell (k, k+1)/(n+1)
                let integral: f64 = (0..=n)
                    .map(|k| {
                        let mid = (k as f64 + 0.5) / (n as f64 + 1.0);
                        empirical_dir_copula(&r, &opposite, &vec![mid; d]).unwrap() / (n as f64 + 1.0)
                    })
                    .sum();
                let (nf, df) = (n as f64, d as f64);
                let b = binom(d, a.count_positive()) as f64;
                let from_process = 2.0 * (df + 1.0) * (nf + 1.0) / ((df - 1.0) * nf) * integral
                    - 2.0 / ((df - 1.0) * b);
                let via = phi_hat_via_process(&r, &a).unwrap().value;
                assert!((from_process - via).abs() < 1e-12, "{a}: {from_process} vs {via}");
            }
        }
    }

    #[test]
    fn independent_ranks_are_near_zero() {
        let mut rng = RngStream::new(2024, 0);
        let r = random_ranks(5000, 3, &mut rng);
        for e in phi_hat_all(&r).unwrap() {
            assert!(e.value.abs() < 0.05, "{} {}", e.direction, e.value);
        }
    }

    #[test]
    fn independence_mean_matches_enumeration() {
        // all 36 matrices with n = 3, d = 2 are equally likely under independence
        for a in Direction::all(2).unwrap() {
            let all = all_rank_matrices(3, 2, false);
            let avg = all.iter().map(|r| phi_hat(r, &a).unwrap().value).sum::<f64>() / all.len() as f64;
            assert!((avg - independence_mean(3, &a).unwrap()).abs() < 1e-14, "{a}");
        }
        let total: f64 = Direction::all(4)
            .unwrap()
            .iter()
            .map(|a| independence_mean(500, a).unwrap())
            .sum();
        assert!(total.abs() < 1e-12);
        let upper = independence_mean(500, &Direction::upper(4)).unwrap();
        assert!(upper > 0.0019 && upper < 0.0021, "{upper}");
    }

    #[test]
    fn csv_entry_point() {
        let dir_ = tempfile::tempdir().unwrap();
        let path = dir_.path().join("co.csv");
        let data = Dataset::from_rows(4, 3, vec![0.1, 1.0, -3.0, 0.4, 2.0, -1.0, 0.2, 1.5, -2.0, 0.9, 9.0, 0.0]).unwrap();
        data.save_csv(&path).unwrap();
        let e = phi_hat_from_csv(&path, &dir("+++"), TiePolicy::Strict).unwrap();
        assert_eq!((e.value, e.n), (1.0, 4));
        assert!(matches!(
            phi_hat_from_csv(&path, &dir("++"), TiePolicy::Strict),
            Err(Error::DimensionMismatch { .. })
        ));
        std::fs::write(&path, "a,b\n1,2\n3,oops\n").unwrap();
        assert!(matches!(
            phi_hat_from_csv(&path, &dir("++"), TiePolicy::Strict),
            Err(Error::Parse { row: 3, column: 2, .. })
        ));
    }

    proptest! {
        #[test]
        fn sum_over_directions_is_zero(n in 2usize..60, d in 2usize..7, seed in any::<u64>()) {
            let r = random_ranks(n, d, &mut RngStream::new(seed, 1));
            let sum: f64 = phi_hat_all(&r).unwrap().iter().map(|e| e.value).sum();
            prop_assert!(sum.abs() < 1e-12, "{}", sum);
        }

        #[test]
        fn identities_hold_on_random_ranks(n in 2usize..=50, d in 2usize..=5, seed in any::<u64>()) {
            let r = random_ranks(n, d, &mut RngStream::new(seed, 2));
            for a in Direction::all(d).unwrap() {
                let base = phi_hat(&r, &a).unwrap().value;
                prop_assert_eq!(phi_hat_decompose(&r, &a).unwrap().value, base);
                prop_assert_eq!(phi_hat_via_process(&r, &a).unwrap().value, base);
                prop_assert!((phi_hat_float(&r, &a) - base).abs() < 1e-12);
            }
        }

        #[test]
        fn column_permutation_equivariance(n in 2usize..40, seed in any::<u64>(), signs in proptest::collection::vec(any::<bool>(), 4)) {
            let r = random_ranks(n, 4, &mut RngStream::new(seed, 3));
            let a = Direction::from_bools(signs).unwrap();
            let perm = [2, 0, 3, 1];
            let lhs = phi_hat(&r, &a).unwrap().value;
            let rhs = phi_hat(&r.permuted(&perm).unwrap(), &a.permuted(&perm)).unwrap().value;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn increasing_transforms_leave_estimate_unchanged(n in 2usize..40, seed in any::<u64>()) {
            let mut rng = RngStream::new(seed, 4);
            let values: Vec<f64> = (0..n * 3).map(|_| rng.uniform()).collect();
            let data = Dataset::from_rows(n, 3, values).unwrap();
            let moved = data
                .map_column(0, |x| (5.0 * x).exp())
                .unwrap()
                .map_column(2, |x| x.powi(3) - 7.0)
                .unwrap();
            for a in Direction::all(3).unwrap() {
                let before = phi_hat(&ranks(&data, TiePolicy::Strict).unwrap(), &a).unwrap().value;
                let after = phi_hat(&ranks(&moved, TiePolicy::Strict).unwrap(), &a).unwrap().value;
                prop_assert_eq!(before, after);
            }
        }
    }
}
