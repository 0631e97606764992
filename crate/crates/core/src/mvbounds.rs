//! Multivariate moment-pencil bounds `θ_r` on the extrema of `f`, used as the
//! comparison baseline for the pushforward bounds.
//!
//! `θ̲_r = λ_min(H_r(f; λ), H_r(λ))` over the monomial basis of degree `<= r`
//! in `n` variables. Matrices have order `C(n+r, n)` instead of `r+1`.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::measures::{MeasureSpec, MomentCache};
use crate::pencil::{pencil_extremes_exact, PencilOptions, PencilResult, SymMatrix};
use crate::poly::{Monomial, Poly};

/// Refuse moment matrices larger than this by default.
pub const DEFAULT_SIZE_CAP: usize = 2000;

/// All exponent vectors of total degree `<= t`, graded then lexicographically
/// descending within a degree: `1, x1, x2, x1², x1x2, x2², …`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasis {
    pub n: usize,
    pub t: usize,
    pub elements: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(n: usize, t: usize) -> Self {
        let mut elements = Vec::with_capacity(basis_size(n, t));
        for deg in 0..=t {
            let mut current = vec![0u32; n];
            push_with_degree(&mut elements, &mut current, 0, deg as u32);
        }
        MonomialBasis { n, t, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn push_with_degree(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    let n = current.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        push_with_degree(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// `s(t) = C(n+t, n)`; saturates on overflow.
pub fn basis_size(n: usize, t: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (t as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn check_size(n: usize, r: usize, cap: usize) -> Result<MonomialBasis> {
    let size = basis_size(n, r);
    if size > cap {
        return Err(Error::SizeCapExceeded { size, cap });
    }
    Ok(MonomialBasis::new(n, r))
}

/// `H_r(λ)` with entry `(α, β) = ∫ x^{α+β} dλ`.
pub fn mv_moment_matrix(spec: &MeasureSpec, r: usize) -> Result<SymMatrix<BigRational>> {
    let basis = check_size(spec.n, r, DEFAULT_SIZE_CAP)?;
    let mut cache = MomentCache::new(*spec);
    let mut failure = None;
    let m = SymMatrix::from_upper(basis.len(), |i, j| {
        cache
            .get(&basis.elements[i].mul(&basis.elements[j]))
            .unwrap_or_else(|e| {
                failure = Some(e);
                BigRational::zero()
            })
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(m),
    }
}

/// `H_r(f; λ)` with entry `(α, β) = Σ_γ f_γ ∫ x^{γ+α+β} dλ`, the moment
/// matrix of the signed measure `f dλ`.
pub fn mv_localizing_matrix(f: &Poly, spec: &MeasureSpec, r: usize) -> Result<SymMatrix<BigRational>> {
    if f.n() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            found: f.n(),
        });
    }
    let basis = check_size(spec.n, r, DEFAULT_SIZE_CAP)?;
    let mut cache = MomentCache::new(*spec);
    let terms: Vec<(&Monomial, &BigRational)> = f.terms().collect();
    let mut failure = None;
    let m = SymMatrix::from_upper(basis.len(), |i, j| {
        let ab = basis.elements[i].mul(&basis.elements[j]);
        let mut s = BigRational::zero();
        for (g, c) in &terms {
            match cache.get(&ab.mul(g)) {
                Ok(v) => {
                    if !v.is_zero() {
                        s += *c * v;
                    }
                }
                Err(e) => failure = Some(e),
            }
        }
        s
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(m),
    }
}

/// Pencil result for `(H_r(f; λ), H_r(λ))`.
pub fn theta_pencil(f: &Poly, spec: &MeasureSpec, r: usize, opts: &PencilOptions) -> Result<PencilResult> {
    let c = mv_moment_matrix(spec, r)?;
    let a = mv_localizing_matrix(f, spec, r)?;
    pencil_extremes_exact(&a, &c, opts)
}

/// `(θ̲_r, θ̄_r)`: an upper bound on `min f` and a lower bound on `max f`.
pub fn theta_bounds(f: &Poly, spec: &MeasureSpec, r: usize) -> Result<(f64, f64)> {
    let res = theta_pencil(f, spec, r, &PencilOptions::default())?;
    Ok((res.lambda_min, res.lambda_max))
}
