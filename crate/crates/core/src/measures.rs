//! Reference measures on simple sets and the pushforward moments
//! `#λ_k = ∫ f^k dλ`.
//!
//! Every measure is normalized to a probability measure and every moment is an
//! exact rational; factorials are big integers, never floating Gamma values.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    /// `[-1,1]^n`, normalized Lebesgue.
    #[serde(rename = "box")]
    BoxUniform,
    /// Unit Euclidean ball, normalized Lebesgue.
    #[serde(rename = "ball")]
    BallUniform,
    /// Unit sphere, normalized rotation-invariant measure.
    #[serde(rename = "sphere")]
    SphereUniform,
    /// `{x >= 0, sum x <= 1}`, normalized Lebesgue.
    #[serde(rename = "simplex")]
    SimplexUniform,
    /// `{0,1}^n`, normalized counting.
    #[serde(rename = "cube01")]
    HypercubeCounting01,
    /// `{-1,1}^n`, normalized counting.
    #[serde(rename = "cubepm1")]
    HypercubePM1,
    /// Standard normal on `R^n`.
    #[serde(rename = "gaussian")]
    GaussianStd,
    /// Product of unit exponentials on `R_+^n`.
    #[serde(rename = "exponential")]
    ExponentialStd,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 8] = [
        MeasureKind::BoxUniform,
        MeasureKind::BallUniform,
        MeasureKind::SphereUniform,
        MeasureKind::SimplexUniform,
        MeasureKind::HypercubeCounting01,
        MeasureKind::HypercubePM1,
        MeasureKind::GaussianStd,
        MeasureKind::ExponentialStd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::BoxUniform => "box",
            MeasureKind::BallUniform => "ball",
            MeasureKind::SphereUniform => "sphere",
            MeasureKind::SimplexUniform => "simplex",
            MeasureKind::HypercubeCounting01 => "cube01",
            MeasureKind::HypercubePM1 => "cubepm1",
            MeasureKind::GaussianStd => "gaussian",
            MeasureKind::ExponentialStd => "exponential",
        }
    }
}

/// A simple set together with its (probability) reference measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub n: usize,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("measure dimension must be at least 1".into()));
        }
        Ok(MeasureSpec { kind, n })
    }

    /// Finite support: the discrete cubes, and the 0-sphere `{-1, 1}`.
    pub fn is_discrete(&self) -> bool {
        match self.kind {
            MeasureKind::HypercubeCounting01 | MeasureKind::HypercubePM1 => true,
            MeasureKind::SphereUniform => self.n == 1,
            _ => false,
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self.kind, MeasureKind::GaussianStd | MeasureKind::ExponentialStd)
    }

    /// All support points of a discrete measure, each carrying equal mass.
    pub fn support_points(&self) -> Option<Vec<Vec<i64>>> {
        let (lo, hi) = match self.kind {
            MeasureKind::HypercubeCounting01 => (0, 1),
            MeasureKind::HypercubePM1 => (-1, 1),
            MeasureKind::SphereUniform if self.n == 1 => (-1, 1),
            _ => return None,
        };
        let n = self.n;
        Some(
            (0..1usize << n)
                .map(|mask| {
                    (0..n)
                        .map(|i| if mask >> i & 1 == 1 { hi } else { lo })
                        .collect()
                })
                .collect(),
        )
    }

    /// Rewrites `p` into an equivalent polynomial on the support, using
    /// `x_i^2 = x_i` on `{0,1}^n` and `x_i^2 = 1` on `{-1,1}^n`. Identity for
    /// continuous measures.
    pub fn reduce_on_support(&self, p: &Poly) -> Poly {
        match self.kind {
            MeasureKind::HypercubeCounting01 => {
                p.map_exponents(|e| e.iter().map(|&a| a.min(1)).collect())
            }
            MeasureKind::HypercubePM1 => p.map_exponents(|e| e.iter().map(|&a| a % 2).collect()),
            MeasureKind::SphereUniform if self.n == 1 => {
                p.map_exponents(|e| e.iter().map(|&a| a % 2).collect())
            }
            _ => p.clone(),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.kind.name(), self.n)
    }
}

/// `∫ x^α dλ` for the normalized measure `spec`.
pub fn monomial_moment(spec: &MeasureSpec, alpha: &Monomial) -> Result<BigRational> {
    MomentFunctional::new(*spec).moment(alpha)
}

/// Applies the moment functional of one measure, caching factorials.
#[derive(Clone, Debug)]
pub struct MomentFunctional {
    spec: MeasureSpec,
    factorial: Vec<BigInt>,
    double_factorial: Vec<BigInt>,
}

impl MomentFunctional {
    pub fn new(spec: MeasureSpec) -> Self {
        MomentFunctional {
            spec,
            factorial: vec![BigInt::one()],
            double_factorial: vec![BigInt::one(), BigInt::one()],
        }
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    fn fact(&mut self, k: usize) -> BigInt {
        while self.factorial.len() <= k {
            let i = self.factorial.len();
            let next = &self.factorial[i - 1] * BigInt::from(i);
            self.factorial.push(next);
        }
        self.factorial[k].clone()
    }

    /// `(k-1)!!` for even `k >= 0`, with `(-1)!! = 1`.
    fn odd_double_fact(&mut self, k: usize) -> BigInt {
        debug_assert!(k.is_multiple_of(2));
        if k == 0 {
            return BigInt::one();
        }
        let m = k - 1;
        while self.double_factorial.len() <= m {
            let i = self.double_factorial.len();
            let next = &self.double_factorial[i - 2] * BigInt::from(i);
            self.double_factorial.push(next);
        }
        self.double_factorial[m].clone()
    }

    /// Quick structural zero test, before any big-integer work.
    fn vanishes(&self, e: &[u32]) -> bool {
        match self.spec.kind {
            MeasureKind::BoxUniform
            | MeasureKind::BallUniform
            | MeasureKind::SphereUniform
            | MeasureKind::HypercubePM1
            | MeasureKind::GaussianStd => e.iter().any(|a| a % 2 == 1),
            _ => false,
        }
    }

    pub fn moment(&mut self, alpha: &Monomial) -> Result<BigRational> {
        let n = self.spec.n;
        if alpha.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: alpha.n(),
            });
        }
        let e = alpha.exponents();
        if self.vanishes(e) {
            return Ok(BigRational::zero());
        }
        let total = alpha.degree() as usize;
        let one = BigInt::one();
        Ok(match self.spec.kind {
            MeasureKind::BoxUniform => {
                let den: BigInt = e.iter().map(|&a| BigInt::from(a + 1)).product();
                BigRational::new(one, den)
            }
            MeasureKind::SimplexUniform => {
                let mut num = self.fact(n);
                for &a in e {
                    num *= self.fact(a as usize);
                }
                BigRational::new(num, self.fact(total + n))
            }
            MeasureKind::SphereUniform => self.sphere(e, total),
            MeasureKind::BallUniform => {
                self.sphere(e, total) * BigRational::new(BigInt::from(n), BigInt::from(n + total))
            }
            MeasureKind::HypercubeCounting01 => {
                let s = e.iter().filter(|&&a| a > 0).count();
                BigRational::new(one, BigInt::one() << s)
            }
            MeasureKind::HypercubePM1 => BigRational::one(),
            MeasureKind::GaussianStd => {
                let mut v = BigInt::one();
                for &a in e {
                    v *= self.odd_double_fact(a as usize);
                }
                BigRational::from_integer(v)
            }
            MeasureKind::ExponentialStd => {
                let mut v = BigInt::one();
                for &a in e {
                    v *= self.fact(a as usize);
                }
                BigRational::from_integer(v)
            }
        })
    }

    fn sphere(&mut self, e: &[u32], total: usize) -> BigRational {
        let n = self.spec.n;
        let mut num = BigInt::one();
        for &a in e {
            num *= self.odd_double_fact(a as usize);
        }
        let den: BigInt = (0..total / 2).map(|j| BigInt::from(n + 2 * j)).product();
        BigRational::new(num, den)
    }

    /// `∫ p dλ`.
    pub fn integrate(&mut self, p: &Poly) -> Result<BigRational> {
        if p.n() != self.spec.n {
            return Err(Error::DimensionMismatch {
                expected: self.spec.n,
                found: p.n(),
            });
        }
        let mut sum = BigRational::zero();
        for (m, c) in p.terms() {
            if self.vanishes(m.exponents()) {
                continue;
            }
            sum += c * self.moment(m)?;
        }
        Ok(sum)
    }
}

/// Exact moments `values[k] = #λ_k` of a pushforward measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub values: Vec<BigRational>,
    pub source: String,
}

impl MomentSequence {
    pub fn new(values: Vec<BigRational>, source: impl Into<String>) -> Self {
        MomentSequence {
            values,
            source: source.into(),
        }
    }

    /// Moments of the Dirac measure at `c`, up to index `k_max`.
    pub fn dirac(c: &BigRational, k_max: usize) -> Self {
        let mut values = Vec::with_capacity(k_max + 1);
        let mut v = BigRational::one();
        for _ in 0..=k_max {
            values.push(v.clone());
            v *= c;
        }
        MomentSequence::new(values, format!("dirac({c})"))
    }

    /// Moments of a finitely supported measure `sum w_i δ_{z_i}` (weights need not sum to 1).
    pub fn atomic(atoms: &[(BigRational, BigRational)], k_max: usize) -> Self {
        let mut values = vec![BigRational::zero(); k_max + 1];
        for (z, w) in atoms {
            let mut p = w.clone();
            for v in values.iter_mut() {
                *v += &p;
                p *= z;
            }
        }
        MomentSequence::new(values, format!("atomic({} atoms)", atoms.len()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> Result<&BigRational> {
        self.values.get(k).ok_or(Error::SequenceTooShort {
            needed: k,
            available: self.values.len(),
        })
    }

    /// Fails unless entries `0..=k` exist.
    pub fn require(&self, k: usize) -> Result<()> {
        self.get(k).map(|_| ())
    }

    /// The sequence of the measure scaled by `c`, i.e. every moment times `c`.
    pub fn scaled(&self, c: &BigRational) -> MomentSequence {
        MomentSequence::new(
            self.values.iter().map(|v| v * c).collect(),
            format!("{} * {c}", self.source),
        )
    }

    /// Moments of the image measure under `z -> z + c`.
    pub fn shifted(&self, c: &BigRational) -> MomentSequence {
        let len = self.values.len();
        let mut out = Vec::with_capacity(len);
        let mut binom: Vec<BigInt> = vec![BigInt::one()];
        for k in 0..len {
            if k > 0 {
                let mut next = vec![BigInt::one(); k + 1];
                for i in 1..k {
                    next[i] = &binom[i - 1] + &binom[i];
                }
                binom = next;
            }
            // sum_i C(k,i) c^(k-i) m_i
            let mut s = BigRational::zero();
            let mut cp = BigRational::one();
            for i in (0..=k).rev() {
                s += &self.values[i] * &cp * BigRational::from_integer(binom[i].clone());
                cp *= c;
            }
            out.push(s);
        }
        MomentSequence::new(out, format!("{} shifted by {c}", self.source))
    }

    pub fn is_probability(&self) -> bool {
        self.values.first().is_some_and(|v| v.is_one())
    }
}

/// `#λ_k = ∫ f^k dλ` for `k = 0..=k_max`, exactly.
///
/// `f` is scaled to integer coefficients before powering so the inner products
/// stay in integer arithmetic; the common denominator is divided back out per
/// moment. On discrete supports every power is reduced modulo the support
/// relations, which keeps it multilinear.
pub fn pushforward_moments(f: &Poly, spec: &MeasureSpec, k_max: usize) -> Result<MomentSequence> {
    if f.n() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            found: f.n(),
        });
    }
    let source = format!("f = {f} on {spec}");
    if let Some(c) = f.as_constant() {
        let mut seq = MomentSequence::dirac(&c, k_max);
        seq.source = source;
        return Ok(seq);
    }
    let den = f.common_denominator();
    let scaled = spec.reduce_on_support(&f.scale(&BigRational::from_integer(den.clone())));
    let mut functional = MomentFunctional::new(*spec);
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(BigRational::one());
    let mut power = Poly::one(spec.n);
    let mut den_power = BigInt::one();
    for _ in 1..=k_max {
        power = spec.reduce_on_support(&power.checked_mul(&scaled)?);
        den_power *= &den;
        let v = functional.integrate(&power)?;
        values.push(v / BigRational::from_integer(den_power.clone()));
    }
    Ok(MomentSequence::new(values, source))
}

/// Exact LDLᵀ pivots of the Hankel matrix `H_r` built from `seq`. Stops at the
/// first non-positive pivot, which is included in the output.
pub fn hankel_pivots(seq: &MomentSequence, r: usize) -> Result<Vec<BigRational>> {
    seq.require(2 * r)?;
    let size = r + 1;
    let h = |i: usize, j: usize| &seq.values[i + j];
    let mut l: Vec<Vec<BigRational>> = vec![Vec::new(); size];
    let mut d: Vec<BigRational> = Vec::with_capacity(size);
    for i in 0..size {
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            let mut v = h(i, j).clone();
            for k in 0..j {
                v -= &row[k] * &l[j][k] * &d[k];
            }
            row.push(v / &d[j]);
        }
        let mut piv = h(i, i).clone();
        for k in 0..i {
            piv -= &row[k] * &row[k] * &d[k];
        }
        l[i] = row;
        let stop = !piv.is_positive();
        d.push(piv);
        if stop {
            break;
        }
    }
    Ok(d)
}

/// Caches monomial moments for repeated lookups (moment matrices reuse `α+β`).
#[derive(Debug)]
pub struct MomentCache {
    functional: MomentFunctional,
    cache: HashMap<Monomial, BigRational>,
}

impl MomentCache {
    pub fn new(spec: MeasureSpec) -> Self {
        MomentCache {
            functional: MomentFunctional::new(spec),
            cache: HashMap::new(),
        }
    }

    pub fn get(&mut self, alpha: &Monomial) -> Result<BigRational> {
        if let Some(v) = self.cache.get(alpha) {
            return Ok(v.clone());
        }
        let v = self.functional.moment(alpha)?;
        self.cache.insert(alpha.clone(), v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn spec(kind: MeasureKind, n: usize) -> MeasureSpec {
        MeasureSpec::new(kind, n).unwrap()
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn closed_form_examples() {
        use MeasureKind::*;
        assert_eq!(monomial_moment(&spec(BoxUniform, 2), &m(&[2, 0])).unwrap(), rat(1, 3));
        assert_eq!(monomial_moment(&spec(SphereUniform, 2), &m(&[2, 2])).unwrap(), rat(1, 8));
        assert_eq!(monomial_moment(&spec(HypercubeCounting01, 2), &m(&[1, 1])).unwrap(), rat(1, 4));
        assert_eq!(monomial_moment(&spec(SimplexUniform, 2), &m(&[1, 1])).unwrap(), rat(1, 12));
        assert_eq!(monomial_moment(&spec(BoxUniform, 1), &m(&[3])).unwrap(), rat(0, 1));
    }

    #[test]
    fn every_measure_has_unit_mass() {
        for kind in MeasureKind::ALL {
            for n in 1..=4 {
                assert_eq!(monomial_moment(&spec(kind, n), &Monomial::one(n)).unwrap(), rat(1, 1), "{kind:?} n={n}");
            }
        }
    }

    #[test]
    fn one_dimensional_sanity() {
        use MeasureKind::*;
        // ball in 1d is the interval
        assert_eq!(monomial_moment(&spec(BallUniform, 1), &m(&[4])).unwrap(), rat(1, 5));
        // circle: E[cos^4] = 3/8
        assert_eq!(monomial_moment(&spec(SphereUniform, 2), &m(&[4, 0])).unwrap(), rat(3, 8));
        // unit disk: E[x^2] = 1/4
        assert_eq!(monomial_moment(&spec(BallUniform, 2), &m(&[2, 0])).unwrap(), rat(1, 4));
        // simplex in 1d is [0,1]
        assert_eq!(monomial_moment(&spec(SimplexUniform, 1), &m(&[3])).unwrap(), rat(1, 4));
        assert_eq!(monomial_moment(&spec(GaussianStd, 1), &m(&[6])).unwrap(), rat(15, 1));
        assert_eq!(monomial_moment(&spec(ExponentialStd, 2), &m(&[3, 2])).unwrap(), rat(12, 1));
        assert_eq!(monomial_moment(&spec(HypercubePM1, 3), &m(&[2, 1, 0])).unwrap(), rat(0, 1));
    }

    #[test]
    fn sphere_moment_by_angular_quadrature() {
        // average of cos^2 sin^2 over the circle, midpoint rule
        let steps = 200_000;
        let mut s = 0.0;
        for i in 0..steps {
            let t = (i as f64 + 0.5) * std::f64::consts::TAU / steps as f64;
            s += (t.cos() * t.sin()).powi(2);
        }
        let quad = s / steps as f64;
        assert!((quad - 0.125).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(monomial_moment(&spec(MeasureKind::BoxUniform, 2), &m(&[1])).is_err());
        assert!(pushforward_moments(&Poly::one(3), &spec(MeasureKind::BoxUniform, 2), 2).is_err());
    }

    #[test]
    fn pushforward_of_identity_on_interval() {
        let x = Poly::var(1, 0).unwrap();
        let seq = pushforward_moments(&x, &spec(MeasureKind::BoxUniform, 1), 4).unwrap();
        assert_eq!(seq.values, vec![rat(1, 1), rat(0, 1), rat(1, 3), rat(0, 1), rat(1, 5)]);
    }

    #[test]
    fn pushforward_on_discrete_cube_matches_enumeration() {
        let f = Poly::from_int_terms(2, &[(1, 1, &[1, 0]), (1, 1, &[0, 1])]).unwrap();
        let seq = pushforward_moments(&f, &spec(MeasureKind::HypercubeCounting01, 2), 4).unwrap();
        assert_eq!(seq.values, vec![rat(1, 1), rat(1, 1), rat(3, 2), rat(5, 2), rat(9, 2)]);
    }

    #[test]
    fn pushforward_of_constant_is_dirac() {
        let c = Poly::constant(2, rat(-3, 2));
        for kind in MeasureKind::ALL {
            let seq = pushforward_moments(&c, &spec(kind, 2), 3).unwrap();
            assert_eq!(seq.values, vec![rat(1, 1), rat(-3, 2), rat(9, 4), rat(-27, 8)]);
        }
    }

    #[test]
    fn shifted_matches_direct_pushforward() {
        let f = Poly::from_int_terms(2, &[(1, 2, &[2, 1]), (-3, 1, &[0, 1])]).unwrap();
        let sp = spec(MeasureKind::SimplexUniform, 2);
        let c = rat(7, 3);
        let direct = pushforward_moments(&f.checked_add(&Poly::constant(2, c.clone())).unwrap(), &sp, 6).unwrap();
        let via = pushforward_moments(&f, &sp, 6).unwrap().shifted(&c);
        assert_eq!(direct.values, via.values);
    }

    #[test]
    fn hankel_pivots_detect_atoms() {
        let seq = MomentSequence::atomic(&[(rat(0, 1), rat(1, 4)), (rat(1, 1), rat(1, 2)), (rat(2, 1), rat(1, 4))], 8);
        let d = hankel_pivots(&seq, 4).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d[..3].iter().all(|p| p.is_positive()));
        assert!(d[3].is_zero());
    }
}
