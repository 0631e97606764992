#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use pfopt::measures::{MeasureKind, MeasureSpec, MomentSequence};
use pfopt::poly::{rat, Poly};

/// Sparse polynomial with 1..=4 terms of total degree <= `max_deg` and small
/// rational coefficients; never constant.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Poly {
    let nterms = rng.random_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let deg = rng.random_range(0..=max_deg);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.random_range(0..n)] += 1;
        }
        let mut num = rng.random_range(-5i64..=5);
        if num == 0 {
            num = 1;
        }
        let den = rng.random_range(1i64..=3);
        terms.push((rat(num, den), e));
    }
    let p = Poly::from_terms(n, terms).unwrap();
    if p.as_constant().is_some() {
        p.checked_add(&Poly::var(n, 0).unwrap()).unwrap()
    } else {
        p
    }
}

/// Multilinear polynomial with random integer coefficients in `-9..=9`.
pub fn random_multilinear<R: Rng>(rng: &mut R, n: usize) -> Poly {
    let mut terms = Vec::new();
    for mask in 0u32..(1 << n) {
        if rng.random_bool(0.6) {
            let e: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
            terms.push((rat(rng.random_range(-9..=9), 1), e));
        }
    }
    let p = Poly::from_terms(n, terms).unwrap();
    if p.as_constant().is_some() {
        p.checked_add(&Poly::var(n, 0).unwrap()).unwrap()
    } else {
        p
    }
}

pub fn random_spec<R: Rng>(rng: &mut R, n: usize) -> MeasureSpec {
    let kind = MeasureKind::ALL[rng.random_range(0..MeasureKind::ALL.len())];
    MeasureSpec::new(kind, n).unwrap()
}

/// `atoms` points with small rational locations and positive weights.
pub fn random_atomic<R: Rng>(rng: &mut R, atoms: usize, k_max: usize) -> MomentSequence {
    let pts: Vec<(BigRational, BigRational)> = (0..atoms)
        .map(|_| {
            (
                rat(rng.random_range(-20..=20), rng.random_range(1..=7)),
                rat(rng.random_range(1..=9), rng.random_range(1..=5)),
            )
        })
        .collect();
    MomentSequence::atomic(&pts, k_max)
}

/// Determinant by permutation expansion (Heap's algorithm).
pub fn leibniz_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return rat(1, 1);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    let term = |perm: &[usize], sign: i64| {
        let mut t = BigRational::from_integer(BigInt::from(sign));
        for (i, &p) in perm.iter().enumerate() {
            t *= &m[i][p];
        }
        t
    };
    let mut total = term(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            total += term(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

/// `d_j = det(m_{i+k})_{0 <= i,k < j}`.
pub fn hankel_det(seq: &MomentSequence, j: usize) -> BigRational {
    let m: Vec<Vec<BigRational>> = (0..j)
        .map(|i| (0..j).map(|k| seq.values[i + k].clone()).collect())
        .collect();
    leibniz_det(&m)
}

/// `P_m(x)` by the three-term Legendre recurrence.
pub fn legendre(m: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return p0;
    }
    for k in 1..m {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Largest root of `P_m`: scan down from 1 for the first sign change, then bisect.
pub fn legendre_largest_root(m: usize) -> f64 {
    let step = 1e-4;
    let mut hi = 1.0;
    let sign_hi = legendre(m, hi).signum();
    let mut lo = hi - step;
    while legendre(m, lo).signum() == sign_hi {
        hi = lo;
        lo -= step;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if legendre(m, mid).signum() == sign_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
