//! Distributional checks on the samplers.

use footrule_dir::estimators::{phi_hat, ranks, TiePolicy};
use footrule_dir::sampling::{
    sample_clayton, sample_cuadras_auge, sample_fgm, sample_fgm_counted, sample_model,
    sample_reference, ReferenceKind,
};
use footrule_dir::{CopulaModel, Dataset, Direction, RngStream};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Asymptotic 1% critical value of the one-sample KS statistic.
const KS_CRIT_1PCT: f64 = 1.6276;

fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i as f64 + 1.0) / n - x).max(x - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

fn empirical_cdf(data: &Dataset, u: &[f64]) -> f64 {
    let hits = data
        .rows()
        .filter(|r| r.iter().zip(u).all(|(x, p)| x <= p))
        .count();
    hits as f64 / data.n() as f64
}

fn models() -> Vec<CopulaModel> {
    vec![
        CopulaModel::clayton(3, 5.0).unwrap(),
        CopulaModel::clayton(4, 0.4).unwrap(),
        CopulaModel::cuadras_auge(4, 0.4).unwrap(),
        CopulaModel::cuadras_auge(3, 0.8).unwrap(),
        CopulaModel::fgm(3, 1.0).unwrap(),
        CopulaModel::fgm(2, -0.7).unwrap(),
        CopulaModel::independence(3).unwrap(),
        CopulaModel::comonotone(3).unwrap(),
        CopulaModel::countermonotone().unwrap(),
    ]
}

#[test]
fn margins_pass_ks_in_most_seeds() {
    let n = 10_000;
    let crit = KS_CRIT_1PCT / (n as f64).sqrt();
    let seeds = 20u64;
    for model in models() {
        for col in 0..model.dim() {
            let passes = (0..seeds)
                .filter(|&s| {
                    let data = sample_model(&model, n, &mut RngStream::new(1000 + s, s)).unwrap();
                    ks_uniform(data.column(col).collect()) < crit
                })
                .count();
            assert!(
                passes as f64 >= 0.95 * seeds as f64,
                "{model} column {col}: {passes}/{seeds}"
            );
        }
    }
}

#[test]
fn cdf_agreement_on_probe_grid() {
    let n = 200_000;
    for (k, model) in models().into_iter().enumerate() {
        let data = sample_model(&model, n, &mut RngStream::new(77, k as u64)).unwrap();
        let d = model.dim();
        let probes: Vec<Vec<f64>> = vec![
            vec![0.5; d],
            vec![0.2; d],
            vec![0.85; d],
            (0..d).map(|i| 0.3 + 0.5 * i as f64 / d as f64).collect(),
            (0..d).map(|i| if i % 2 == 0 { 0.9 } else { 0.4 }).collect(),
        ];
        for p in probes {
            let want = model.cdf(&p).unwrap();
            let got = empirical_cdf(&data, &p);
            let se = (want * (1.0 - want) / n as f64).sqrt();
            assert!(
                (got - want).abs() <= 4.0 * se.max(1e-12),
                "{model} at {p:?}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn clayton_and_fgm_cdf_at_centre() {
    let n = 200_000;
    let data = sample_clayton(3, 5.0, n, &mut RngStream::new(3, 0)).unwrap();
    let want = CopulaModel::clayton(3, 5.0).unwrap().cdf(&[0.5; 3]).unwrap();
    let se = (want * (1.0 - want) / n as f64).sqrt();
    assert!((empirical_cdf(&data, &[0.5; 3]) - want).abs() < 3.0 * se);

    let data = sample_fgm(3, 1.0, n, &mut RngStream::new(3, 1)).unwrap();
    let want = 0.140625;
    let se = (want * (1.0 - want) / n as f64).sqrt();
    assert!((empirical_cdf(&data, &[0.5; 3]) - want).abs() < 3.0 * se);
}

#[test]
fn cuadras_auge_endpoints_and_singular_part() {
    let data = sample_cuadras_auge(2, 0.5, 10_000, &mut RngStream::new(8, 0)).unwrap();
    let ties = data.rows().filter(|r| r[0] == r[1]).count() as f64 / 10_000.0;
    assert!(ties > 0.2, "{ties}");

    // θ = 0: 4x4 contingency table of each pair against independence
    let n = 10_000;
    let data = sample_cuadras_auge(3, 0.0, n, &mut RngStream::new(8, 1)).unwrap();
    let crit = ChiSquared::new(9.0).unwrap().inverse_cdf(0.99);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut table = [[0.0f64; 4]; 4];
        for r in data.rows() {
            table[(r[a] * 4.0) as usize][(r[b] * 4.0) as usize] += 1.0;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = table.iter().flatten().map(|o| (o - expected).powi(2) / expected).sum();
        assert!(chi2 < crit, "pair ({a},{b}): {chi2} >= {crit}");
    }
}

#[test]
fn cuadras_auge_construction_matches_cdf() {
    // P(max(V^{1/(1-θ)}, Z^{1/θ}) <= u_i for all i) = min(u)^θ ∏ u_i^{1-θ}
    for theta in [0.1, 0.4, 0.8] {
        let model = CopulaModel::cuadras_auge(4, theta).unwrap();
        for u in [[0.3, 0.7, 0.5, 0.9], [0.05, 0.5, 0.95, 0.6], [0.5; 4]] {
            let min = u.iter().copied().fold(1.0, f64::min);
            let construction = min.powf(theta) * u.iter().map(|x| x.powf(1.0 - theta)).product::<f64>();
            assert!((model.cdf(&u).unwrap() - construction).abs() < 1e-15);
        }
    }
}

#[test]
fn fgm_acceptance_rate_is_one_half() {
    for lambda in [-1.0, -0.3, 0.0, 0.5, 1.0] {
        let (_, proposals) = sample_fgm_counted(3, lambda, 50_000, &mut RngStream::new(4, 0)).unwrap();
        let rate = 50_000.0 / proposals as f64;
        assert!((rate - 0.5).abs() < 0.01, "λ={lambda}: {rate}");
    }
}

#[test]
fn near_independence_estimates() {
    let up = Direction::upper(2);
    let data = sample_clayton(2, 0.01, 5000, &mut RngStream::new(6, 0)).unwrap();
    let est = phi_hat(&ranks(&data, TiePolicy::Strict).unwrap(), &up).unwrap().value;
    assert!(est.abs() < 0.05, "{est}");

    let data = sample_reference(ReferenceKind::Independence, 4, 10_000, &mut RngStream::new(6, 1)).unwrap();
    for a in 0..4 {
        for b in a + 1..4 {
            let pair = data.select_columns(&[a, b]).unwrap();
            let est = phi_hat(&ranks(&pair, TiePolicy::Strict).unwrap(), &up).unwrap().value;
            assert!(est.abs() < 0.05, "({a},{b}) {est}");
        }
    }
}

#[test]
fn replay_is_bit_identical() {
    for model in models() {
        let a = sample_model(&model, 500, &mut RngStream::new(42, 9)).unwrap();
        let b = sample_model(&model, 500, &mut RngStream::new(42, 9)).unwrap();
        assert_eq!(a.to_csv_string(), b.to_csv_string());
    }
}
