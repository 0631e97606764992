//! Brute-force reference values for `min f` and `max f` over a measure's support.
//!
//! Discrete supports are enumerated exactly. Continuous sets get a dense grid
//! followed by coordinate pattern search from the best grid points; the result
//! is an estimate only.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::measures::{MeasureKind, MeasureSpec, MomentFunctional};
use crate::poly::{rational_to_f64, Monomial, Poly};

/// Default grid size.
pub const DEFAULT_BUDGET: usize = 1_000_000;
const STARTS: usize = 16;
const SWEEPS: usize = 200;
/// Half-width of the sampling box for unbounded sets, in standard deviations.
const UNBOUNDED_SPREAD: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub min_est: f64,
    pub max_est: f64,
    /// True only for exhaustive enumeration.
    pub certified: bool,
}

struct FloatPoly {
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPoly {
    fn new(p: &Poly) -> Self {
        FloatPoly {
            terms: p.to_f64_terms(),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut t = *c;
                for (xi, &ei) in x.iter().zip(e) {
                    if ei > 0 {
                        t *= xi.powi(ei as i32);
                    }
                }
                t
            })
            .sum()
    }
}

#[derive(Clone, Copy)]
enum Region {
    Cube { lo: f64, hi: f64 },
    Ball,
    Sphere,
    Simplex,
}

impl Region {
    fn project(&self, x: &mut [f64]) {
        match *self {
            Region::Cube { lo, hi } => {
                for v in x.iter_mut() {
                    *v = v.clamp(lo, hi);
                }
            }
            Region::Ball => {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1.0 {
                    x.iter_mut().for_each(|v| *v /= norm);
                }
            }
            Region::Sphere => {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 0.0 {
                    x.iter_mut().for_each(|v| *v /= norm);
                } else if let Some(first) = x.first_mut() {
                    *first = 1.0;
                }
            }
            Region::Simplex => project_simplex(x),
        }
    }

    fn grid_box(&self) -> (f64, f64) {
        match *self {
            Region::Cube { lo, hi } => (lo, hi),
            Region::Ball | Region::Sphere => (-1.0, 1.0),
            Region::Simplex => (0.0, 1.0),
        }
    }

    fn admits(&self, x: &[f64]) -> bool {
        match *self {
            Region::Cube { .. } => true,
            Region::Ball => x.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12,
            Region::Sphere => x.iter().any(|v| *v != 0.0),
            Region::Simplex => x.iter().sum::<f64>() <= 1.0 + 1e-12,
        }
    }
}

/// Euclidean projection onto `{x >= 0, sum x <= 1}`.
fn project_simplex(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    let sum: f64 = x.iter().sum();
    if sum <= 1.0 {
        return;
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cum += u;
        let t = (cum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    for v in x.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}

fn region_for(spec: &MeasureSpec) -> Region {
    match spec.kind {
        MeasureKind::BoxUniform => Region::Cube { lo: -1.0, hi: 1.0 },
        MeasureKind::BallUniform => Region::Ball,
        MeasureKind::SphereUniform => Region::Sphere,
        MeasureKind::SimplexUniform => Region::Simplex,
        MeasureKind::GaussianStd | MeasureKind::ExponentialStd => {
            // scale the box from the second moment of one coordinate
            let mut functional = MomentFunctional::new(*spec);
            let mut e = vec![0u32; spec.n];
            e[0] = 2;
            let m2 = functional
                .moment(&Monomial::new(e))
                .map(|v| rational_to_f64(&v))
                .unwrap_or(1.0);
            let half = UNBOUNDED_SPREAD * m2.sqrt();
            if spec.kind == MeasureKind::GaussianStd {
                Region::Cube { lo: -half, hi: half }
            } else {
                Region::Cube { lo: 0.0, hi: 2.0 * half }
            }
        }
        // discrete kinds are enumerated
        MeasureKind::HypercubeCounting01 | MeasureKind::HypercubePM1 => Region::Cube { lo: -1.0, hi: 1.0 },
    }
}

/// Keeps the `cap` best points seen under `better`.
struct Best {
    cap: usize,
    items: Vec<(f64, Vec<f64>)>,
}

impl Best {
    fn new(cap: usize) -> Self {
        Best {
            cap,
            items: Vec::with_capacity(cap + 1),
        }
    }

    fn offer(&mut self, value: f64, x: &[f64]) {
        if self.items.len() == self.cap && value >= self.items[self.cap - 1].0 {
            return;
        }
        let pos = self.items.partition_point(|(v, _)| *v <= value);
        self.items.insert(pos, (value, x.to_vec()));
        self.items.truncate(self.cap);
    }
}

/// Pattern search along coordinate directions, projecting back onto the
/// region; minimizes `sign · f`.
fn refine(f: &FloatPoly, region: Region, start: &[f64], step0: f64, sign: f64) -> f64 {
    let mut x = start.to_vec();
    region.project(&mut x);
    let mut best = sign * f.eval(&x);
    let mut step = step0;
    let mut trial = x.clone();
    for _ in 0..SWEEPS {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[i] += dir * step;
                region.project(&mut trial);
                let v = sign * f.eval(&trial);
                if v < best {
                    best = v;
                    x.copy_from_slice(&trial);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-15 {
                break;
            }
        }
    }
    sign * best
}

/// Reference `(min, max)` of `f` over the support of `measure`.
pub fn oracle_minmax(f: &Poly, measure: &MeasureSpec, budget: usize) -> OracleResult {
    if let Some(c) = f.as_constant() {
        let v = rational_to_f64(&c);
        return OracleResult {
            min_est: v,
            max_est: v,
            certified: true,
        };
    }
    if let Some(points) = measure.support_points() {
        let mut min = BigRational::from_integer(BigInt::from(0));
        let mut max = min.clone();
        for (k, p) in points.iter().enumerate() {
            let x: Vec<BigRational> = p.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
            let v = f.eval(&x).expect("dimension checked by caller");
            if k == 0 || v < min {
                min = v.clone();
            }
            if k == 0 || v > max {
                max = v;
            }
        }
        return OracleResult {
            min_est: rational_to_f64(&min),
            max_est: rational_to_f64(&max),
            certified: true,
        };
    }

    let n = measure.n;
    let fp = FloatPoly::new(f);
    let region = region_for(measure);
    let (lo, hi) = region.grid_box();
    let per_dim = ((budget.max(1) as f64).powf(1.0 / n as f64).floor() as usize).max(2);
    let spacing = (hi - lo) / (per_dim - 1) as f64;

    let mut lows = Best::new(STARTS);
    let mut highs = Best::new(STARTS);
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for (xi, &k) in x.iter_mut().zip(&idx) {
            *xi = lo + k as f64 * spacing;
        }
        if region.admits(&x) {
            let mut p = x.clone();
            region.project(&mut p);
            let v = fp.eval(&p);
            lows.offer(v, &p);
            highs.offer(-v, &p);
        }
        // odometer increment
        let mut d = 0;
        while d < n {
            idx[d] += 1;
            if idx[d] < per_dim {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == n {
            break;
        }
    }

    let min_est = lows
        .items
        .iter()
        .map(|(_, p)| refine(&fp, region, p, spacing, 1.0))
        .fold(f64::INFINITY, f64::min);
    let max_est = highs
        .items
        .iter()
        .map(|(_, p)| refine(&fp, region, p, spacing, -1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    OracleResult {
        min_est,
        max_est,
        certified: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn spec(kind: MeasureKind, n: usize) -> MeasureSpec {
        MeasureSpec::new(kind, n).unwrap()
    }

    #[test]
    fn motzkin_minimum_is_zero() {
        let f = Poly::from_int_terms(2, &[(64, 1, &[4, 2]), (64, 1, &[2, 4]), (-48, 1, &[2, 2]), (1, 1, &[0, 0])]).unwrap();
        let res = oracle_minmax(&f, &spec(MeasureKind::BoxUniform, 2), 40_000);
        assert!(res.min_est.abs() < 1e-10, "{res:?}");
        assert!(!res.certified);
        // max on the box at (±1, ±1): 64·2 − 48 + 1
        assert!((res.max_est - 81.0).abs() < 1e-9);
        // stationary check at (1/2, 1/2): both partials vanish exactly
        let dx = Poly::from_int_terms(2, &[(256, 1, &[3, 2]), (128, 1, &[1, 4]), (-96, 1, &[1, 2])]).unwrap();
        assert_eq!(dx.eval(&[rat(1, 2), rat(1, 2)]).unwrap(), rat(0, 1));
    }

    #[test]
    fn cube_enumeration_is_certified() {
        let f = Poly::from_int_terms(2, &[(1, 1, &[1, 0]), (1, 1, &[0, 1])]).unwrap();
        let res = oracle_minmax(&f, &spec(MeasureKind::HypercubeCounting01, 2), 1);
        assert_eq!(res, OracleResult { min_est: 0.0, max_est: 2.0, certified: true });
    }

    #[test]
    fn constant_oracle() {
        let c = Poly::constant(3, rat(5, 4));
        let res = oracle_minmax(&c, &spec(MeasureKind::SphereUniform, 3), 100);
        assert_eq!((res.min_est, res.max_est), (1.25, 1.25));
    }

    #[test]
    fn ball_sphere_simplex_linear() {
        let f = Poly::from_int_terms(3, &[(1, 1, &[1, 0, 0]), (2, 1, &[0, 1, 0]), (-2, 1, &[0, 0, 1])]).unwrap();
        for kind in [MeasureKind::BallUniform, MeasureKind::SphereUniform] {
            let res = oracle_minmax(&f, &spec(kind, 3), 20_000);
            assert!((res.min_est + 3.0).abs() < 1e-8, "{kind:?} {res:?}");
            assert!((res.max_est - 3.0).abs() < 1e-8, "{kind:?} {res:?}");
        }
        let res = oracle_minmax(&f, &spec(MeasureKind::SimplexUniform, 3), 20_000);
        assert!((res.min_est + 2.0).abs() < 1e-12 && (res.max_est - 2.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_projection() {
        let mut x = vec![0.8, 0.6, -0.2];
        project_simplex(&mut x);
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((x[0] - 0.6).abs() < 1e-15 && (x[1] - 0.4).abs() < 1e-15 && x[2] == 0.0);
    }
}
