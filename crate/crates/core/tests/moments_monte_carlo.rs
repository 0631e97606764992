use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use pfopt::measures::{monomial_moment, MeasureKind, MeasureSpec};
use pfopt::poly::{rational_to_f64, Monomial};

const SAMPLES: usize = 1_000_000;

fn sample(kind: MeasureKind, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let normal = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.sample(StandardNormal)).collect() };
    match kind {
        MeasureKind::BoxUniform => (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        MeasureKind::GaussianStd => normal(rng),
        MeasureKind::ExponentialStd => (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect(),
        MeasureKind::SphereUniform | MeasureKind::BallUniform => {
            let g = normal(rng);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let radius = if kind == MeasureKind::BallUniform {
                rng.random::<f64>().powf(1.0 / n as f64)
            } else {
                1.0
            };
            g.iter().map(|v| v / norm * radius).collect()
        }
        MeasureKind::SimplexUniform => {
            let e: Vec<f64> = (0..=n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = e.iter().sum();
            e[..n].iter().map(|v| v / total).collect()
        }
        MeasureKind::HypercubeCounting01 => (0..n).map(|_| rng.random_range(0..2) as f64).collect(),
        MeasureKind::HypercubePM1 => (0..n).map(|_| (2 * rng.random_range(0..2) - 1) as f64).collect(),
    }
}

fn check(kind: MeasureKind, n: usize, exponents: &[Vec<u32>], seed: u64) {
    let spec = MeasureSpec::new(kind, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos: Vec<Monomial> = exponents.iter().map(|e| Monomial::new(e.clone())).collect();
    let mut sum = vec![0.0; monos.len()];
    let mut sum_sq = vec![0.0; monos.len()];
    for _ in 0..SAMPLES {
        let x = sample(kind, n, &mut rng);
        for (k, m) in monos.iter().enumerate() {
            let v = m.eval_f64(&x);
            sum[k] += v;
            sum_sq[k] += v * v;
        }
    }
    let count = SAMPLES as f64;
    for (k, m) in monos.iter().enumerate() {
        let mean = sum[k] / count;
        let var = (sum_sq[k] / count - mean * mean).max(0.0);
        let se = (var / count).sqrt();
        let exact = rational_to_f64(&monomial_moment(&spec, m).unwrap());
        assert!(
            (mean - exact).abs() <= 4.0 * se + 1e-12,
            "{spec} x^{:?}: sample mean {mean} vs closed form {exact} (se {se})",
            m.exponents()
        );
    }
}

fn exponent_set(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    let mut e = vec![0; n];
    e[0] = 2;
    out.push(e.clone());
    e[0] = 4;
    out.push(e.clone());
    e[0] = 1;
    out.push(e.clone());
    if n >= 2 {
        out.push({
            let mut e = vec![0; n];
            e[0] = 2;
            e[1] = 2;
            e
        });
        out.push({
            let mut e = vec![0; n];
            e[0] = 1;
            e[1] = 1;
            e
        });
        out.push({
            let mut e = vec![0; n];
            e[0] = 3;
            e[n - 1] += 1;
            e
        });
    }
    out
}

#[test]
fn continuous_closed_forms_match_sampling() {
    let kinds = [
        MeasureKind::BoxUniform,
        MeasureKind::BallUniform,
        MeasureKind::SphereUniform,
        MeasureKind::SimplexUniform,
        MeasureKind::GaussianStd,
        MeasureKind::ExponentialStd,
    ];
    for (i, kind) in kinds.into_iter().enumerate() {
        for n in [2usize, 3] {
            check(kind, n, &exponent_set(n), 100 + 10 * i as u64 + n as u64);
        }
    }
}

#[test]
fn discrete_closed_forms_match_sampling() {
    for kind in [MeasureKind::HypercubeCounting01, MeasureKind::HypercubePM1] {
        check(kind, 3, &exponent_set(3), 7);
    }
}
