//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic, so iteration and serialized output are deterministic.
//! Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Default cap on the number of terms any single operation may produce.
pub const DEFAULT_TERM_CAP: usize = 5_000_000;

/// Exponent vector `α` of a monomial `x^α`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Product of monomials, i.e. the sum of exponent vectors.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `n` variables over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        let mut p = Self::zero(n);
        p.terms.insert(Monomial::var(n, i), BigRational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Self::zero(n);
        for (c, e) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer-ratio triples `(num, den, exponents)`.
    pub fn from_int_terms(n: usize, terms: &[(i64, i64, &[u32])]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for &(num, den, e) in terms {
            if den == 0 {
                return Err(Error::Invalid("zero denominator".into()));
            }
            out.push((
                BigRational::new(BigInt::from(num), BigInt::from(den)),
                e.to_vec(),
            ));
        }
        Self::from_terms(n, out)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_dim(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Exact product, failing if the result would hold more than `cap` terms.
    pub fn mul_capped(&self, other: &Poly, cap: usize) -> Result<Poly> {
        self.check_dim(other)?;
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len().saturating_mul(other.terms.len()).min(cap));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(m, prod);
                        if acc.len() > cap {
                            return Err(Error::TermCapExceeded {
                                terms: acc.len(),
                                cap,
                            });
                        }
                    }
                }
            }
        }
        Ok(Poly {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// `self^k` by repeated multiplication; `p^0 = 1`.
    pub fn pow(&self, k: u32) -> Result<Poly> {
        let mut out = Poly::one(self.n);
        for _ in 0..k {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    /// Merges terms after rewriting every exponent vector with `map`.
    pub fn map_exponents<F>(&self, map: F) -> Poly
    where
        F: Fn(&[u32]) -> Vec<u32>,
    {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(Monomial(map(&m.0)), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| rational_to_f64(c) * m.eval_f64(point))
            .sum())
    }

    /// Float copy of the term list, for fast repeated evaluation.
    pub fn to_f64_terms(&self) -> Vec<(f64, Vec<u32>)> {
        self.terms
            .iter()
            .map(|(m, c)| (rational_to_f64(c), m.0.clone()))
            .collect()
    }

    /// Returns `q` with `q(x) = p(Ax + b)`. `a` is row-major `n × n`.
    pub fn compose_affine(&self, a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Poly> {
        let n = self.n;
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if a.len() != n { a.len() } else { b.len() },
            });
        }
        if let Some(row) = a.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        // Each coordinate becomes the affine form sum_j a_ij x_j + b_i.
        let forms: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::constant(n, b[i].clone());
                for (j, aij) in a[i].iter().enumerate() {
                    p.add_term(Monomial::var(n, j), aij.clone());
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Poly>> = forms.iter().map(|f| vec![Poly::one(n), f.clone()]).collect();
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().expect("non-empty").checked_mul(&forms[i])?;
                    powers[i].push(next);
                }
                t = t.checked_mul(&powers[i][e])?;
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Smallest positive integer `D` such that `D·p` has integer coefficients.
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (int_to_json(c.numer()), int_to_json(c.denom()), m.0.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Poly> {
        let mut terms = Vec::with_capacity(json.terms.len());
        for (num, den, e) in &json.terms {
            let num = json_to_int(num)?;
            let den = json_to_int(den)?;
            if !den.is_positive() {
                return Err(Error::Invalid("polynomial denominators must be positive".into()));
            }
            terms.push((BigRational::new(num, den), e.clone()));
        }
        Poly::from_terms(json.n, terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", j + 1)?,
                    _ => write!(f, "*x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Wire form: `{"n": int, "terms": [[num, den, [e1, ..., en]], ...]}`.
///
/// `num`/`den` are JSON integers; values outside the `i64` range may be
/// given as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<(Value, Value, Vec<u32>)>,
}

fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(v.to_string()),
    }
}

fn json_to_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Invalid(format!("coefficient {n} is not an integer")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("coefficient {s:?} is not an integer"))),
        other => Err(Error::Invalid(format!("coefficient {other} is not an integer"))),
    }
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Shorthand for `num/den` as a [`BigRational`].
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
