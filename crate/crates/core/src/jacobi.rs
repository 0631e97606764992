//! Three-term recurrences and Jacobi matrices of a moment sequence.
//!
//! The monic orthogonal polynomials of `#λ` satisfy
//! `p_{j+1}(x) = (x − alpha[j]) p_j(x) − beta[j] p_{j−1}(x)`, and the
//! orthonormal ones `T_j = p_j / sqrt(beta[0]·…·beta[j])` satisfy
//! `x T_j = a_j T_{j+1} + b_j T_j + a_{j−1} T_{j−1}` with `b_j = alpha[j]`,
//! `a_j = sqrt(beta[j+1])`. The extreme eigenvalues of the truncated Jacobi
//! matrix `J_r` are the bounds `τ^ℓ_r`, `τ^u_r`.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::poly::rational_to_f64;
use crate::scalar::{DoubleDouble, Scalar};

/// Default absolute bisection tolerance, relative to `max(1, spectral radius bound)`.
pub const BISECTION_TOL: f64 = 1e-13;

/// Exact monic recurrence coefficients.
///
/// `beta[0]` holds the total mass `#λ_0`; `beta[j]` for `j >= 1` is `a_{j−1}²`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicRecurrence {
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
    /// Largest `r` with `H_r` positive definite, as far as the input reached.
    pub max_valid_r: usize,
    /// True when a zero Hankel pivot was met, i.e. the measure has exactly
    /// `max_valid_r + 1` atoms.
    pub rank_limited: bool,
}

impl MonicRecurrence {
    /// CSV rows `j,alpha_num,alpha_den,beta_num,beta_den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,alpha_num,alpha_den,beta_num,beta_den\n");
        for (j, (a, b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            let _ = writeln!(out, "{j},{},{},{},{}", a.numer(), a.denom(), b.numer(), b.denom());
        }
        out
    }

    /// `‖p_j‖² = beta[0]·…·beta[j]`.
    pub fn norm_sq(&self, j: usize) -> Result<BigRational> {
        if j > self.max_valid_r {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.max_valid_r,
            });
        }
        Ok(self.beta[..=j].iter().fold(BigRational::one(), |acc, b| acc * b))
    }

    /// Exact coefficients (ascending powers) of the monic `p_j`.
    pub fn monic_coeffs(&self, j: usize) -> Result<Vec<BigRational>> {
        if j > self.max_valid_r + 1 {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.max_valid_r + 1,
            });
        }
        let mut prev: Vec<BigRational> = Vec::new();
        let mut cur = vec![BigRational::one()];
        for k in 0..j {
            let mut next = vec![BigRational::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &self.alpha[k] * c;
            }
            if k > 0 {
                for (i, c) in prev.iter().enumerate() {
                    next[i] -= &self.beta[k] * c;
                }
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }
}

/// Recurrence coefficients up to degree `r` from an exact LDLᵀ of the Hankel
/// matrix. Needs `seq[0..=2r+1]`.
///
/// The unit lower factor `L` expresses `x^k = sum_j L[k][j] p_j`, so
/// `L[j+1][j] = alpha[0] + … + alpha[j]` and the pivots are `‖p_j‖²`. The
/// factorization runs over rows `0..=r+1` and columns `0..=r`.
pub fn monic_recurrence_from_moments(seq: &MomentSequence, r: usize) -> Result<MonicRecurrence> {
    seq.require(2 * r + 1)?;
    let m0 = &seq.values[0];
    if !m0.is_positive() {
        return Err(Error::InvalidMomentSequence { index: 0 });
    }
    let h = |i: usize, j: usize| &seq.values[i + j];
    let mut l: Vec<Vec<BigRational>> = Vec::with_capacity(r + 2);
    let mut d: Vec<BigRational> = Vec::with_capacity(r + 1);
    let mut rank_limited = false;
    for i in 0..=r + 1 {
        let cols = i.min(d.len());
        let mut row: Vec<BigRational> = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut v = h(i, j).clone();
            for k in 0..j {
                v -= &row[k] * &l[j][k] * &d[k];
            }
            row.push(v / &d[j]);
        }
        if i <= r && d.len() == i {
            let mut piv = h(i, i).clone();
            for k in 0..i {
                piv -= &row[k] * &row[k] * &d[k];
            }
            l.push(row);
            if piv.is_negative() {
                return Err(Error::InvalidMomentSequence { index: i });
            }
            if piv.is_zero() {
                rank_limited = true;
                break;
            }
            d.push(piv);
        } else {
            l.push(row);
        }
    }
    // rows 0..=len(d) of L are complete
    let valid = d.len() - 1;
    let mut alpha = Vec::with_capacity(valid + 1);
    for j in 0..=valid {
        let above = if j == 0 { BigRational::zero() } else { l[j][j - 1].clone() };
        alpha.push(&l[j + 1][j] - above);
    }
    let mut beta = Vec::with_capacity(valid + 1);
    beta.push(d[0].clone());
    for j in 1..=valid {
        beta.push(&d[j] / &d[j - 1]);
    }
    Ok(MonicRecurrence {
        alpha,
        beta,
        max_valid_r: valid,
        rank_limited,
    })
}

/// Symmetric tridiagonal matrix: `diag` has one more entry than `offdiag`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriDiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TriDiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                found: offdiag.len(),
            });
        }
        Ok(TriDiag { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let e2 = self.offdiag.iter().map(|e| e * e).fold(1.0f64, f64::max);
        f64::MIN_POSITIVE * e2
    }

    /// Number of eigenvalues strictly below `x`: the count of negative pivots
    /// in the LDLᵀ factorization of `J − xI`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i > 0 { self.offdiag[i - 1] * self.offdiag[i - 1] } else { 0.0 };
            q = if i > 0 { self.diag[i] - x - e2 / q } else { self.diag[i] - x };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `p(x)/p'(x)` for the characteristic polynomial, via pivot ratios.
    /// `None` when `x` is (numerically) an eigenvalue.
    fn newton_ratio(&self, x: f64) -> Option<f64> {
        let mut q = 0.0;
        let mut dq = 0.0;
        let mut log_deriv = 0.0;
        for i in 0..self.diag.len() {
            if i == 0 {
                q = self.diag[0] - x;
                dq = -1.0;
            } else {
                let e2 = self.offdiag[i - 1] * self.offdiag[i - 1];
                let new_dq = -1.0 + e2 * dq / (q * q);
                q = self.diag[i] - x - e2 / q;
                dq = new_dq;
            }
            if q == 0.0 || !q.is_finite() {
                return None;
            }
            log_deriv += dq / q;
        }
        (log_deriv != 0.0 && log_deriv.is_finite()).then(|| 1.0 / log_deriv)
    }

    /// Bisect for the `k`-th smallest eigenvalue (0-based) inside `[lo, hi]`.
    fn bisect(&self, k: usize, mut lo: f64, mut hi: f64, abs_tol: f64) -> (f64, f64, f64) {
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= abs_tol || mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..2 {
            match self.newton_ratio(x) {
                Some(step) => {
                    let next = x - step;
                    if next >= lo && next <= hi {
                        x = next;
                    } else {
                        break;
                    }
                }
                None => break,
            }
        }
        (x, lo, hi)
    }
}

/// `(λ_min, λ_max)` of `j` by Sturm-count bisection from Gershgorin brackets,
/// to absolute tolerance `tol · max(1, spectral radius bound)`, then two
/// guarded Newton steps.
pub fn tridiag_extreme_eigs(j: &TriDiag, tol: f64) -> (f64, f64) {
    let n = j.order();
    if n == 1 {
        return (j.diag[0], j.diag[0]);
    }
    let (g_lo, g_hi) = j.gershgorin();
    let radius = g_lo.abs().max(g_hi.abs());
    let abs_tol = tol * radius.max(1.0);
    let pad = f64::EPSILON * radius.max(1.0);
    let (lo, hi) = (g_lo - pad, g_hi + pad);
    let (min, _, _) = j.bisect(0, lo, hi, abs_tol);
    let (max, _, _) = j.bisect(n - 1, lo, hi, abs_tol);
    (min, max)
}

fn sqrt_rational(q: &BigRational) -> f64 {
    DoubleDouble::from_rational(q).sqrt().to_f64()
}

/// `J_r` in floats: `diag = (b_0..b_r)`, `offdiag = (a_0..a_{r−1})`.
pub fn jacobi_truncation(rec: &MonicRecurrence, r: usize) -> Result<TriDiag> {
    if r > rec.max_valid_r {
        return Err(Error::RankDeficient {
            max_valid_r: rec.max_valid_r,
        });
    }
    let diag = rec.alpha[..=r].iter().map(rational_to_f64).collect();
    let offdiag = rec.beta[1..=r].iter().map(sqrt_rational).collect();
    TriDiag::new(diag, offdiag)
}

/// Orthonormal `T_j(x)`, from the monic recurrence and the exact norm.
pub fn orthonormal_eval(rec: &MonicRecurrence, j: usize, x: f64) -> Result<f64> {
    let norm = rec.norm_sq(j)?;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..j {
        let a = rational_to_f64(&rec.alpha[k]);
        let b = if k > 0 { rational_to_f64(&rec.beta[k]) } else { 0.0 };
        let next = (x - a) * cur - b * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur / sqrt_rational(&norm))
}

/// `(τ^ℓ_r, τ^u_r)` as the extreme eigenvalues of `J_r`.
pub fn tau_bounds_jacobi(seq: &MomentSequence, r: usize) -> Result<(f64, f64)> {
    let rec = monic_recurrence_from_moments(seq, r)?;
    tau_from_recurrence(&rec, r)
}

pub fn tau_from_recurrence(rec: &MonicRecurrence, r: usize) -> Result<(f64, f64)> {
    let j = jacobi_truncation(rec, r)?;
    Ok(tridiag_extreme_eigs(&j, BISECTION_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn legendre_seq(k_max: usize) -> MomentSequence {
        let values = (0..=k_max)
            .map(|k| if k % 2 == 1 { rat(0, 1) } else { rat(1, k as i64 + 1) })
            .collect();
        MomentSequence::new(values, "legendre")
    }

    #[test]
    fn legendre_recurrence() {
        let rec = monic_recurrence_from_moments(&legendre_seq(21), 10).unwrap();
        assert_eq!(rec.max_valid_r, 10);
        assert!(!rec.rank_limited);
        assert!(rec.alpha.iter().all(Zero::is_zero));
        assert_eq!(rec.beta[0], rat(1, 1));
        assert_eq!(rec.beta[1], rat(1, 3));
        assert_eq!(rec.beta[2], rat(4, 15));
        for j in 1..=10i64 {
            assert_eq!(rec.beta[j as usize], rat(j * j, 4 * j * j - 1));
        }
    }

    #[test]
    fn dirac_and_three_atoms() {
        let c = rat(5, 3);
        let rec = monic_recurrence_from_moments(&MomentSequence::dirac(&c, 5), 2).unwrap();
        assert_eq!(rec.alpha, vec![c.clone()]);
        assert_eq!(rec.max_valid_r, 0);
        assert!(rec.rank_limited);

        let seq = MomentSequence::atomic(&[(rat(0, 1), rat(1, 4)), (rat(1, 1), rat(1, 2)), (rat(2, 1), rat(1, 4))], 9);
        let rec = monic_recurrence_from_moments(&seq, 4).unwrap();
        assert_eq!(rec.alpha[0], rat(1, 1));
        assert_eq!(rec.max_valid_r, 2);
        let (lo, hi) = tau_from_recurrence(&rec, 2).unwrap();
        assert!(lo.abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert!(matches!(tau_from_recurrence(&rec, 3), Err(Error::RankDeficient { max_valid_r: 2 })));
    }

    #[test]
    fn invalid_sequence_is_detected() {
        // variance would be negative
        let seq = MomentSequence::new(vec![rat(1, 1), rat(2, 1), rat(1, 1), rat(0, 1)], "bad");
        assert!(matches!(
            monic_recurrence_from_moments(&seq, 1),
            Err(Error::InvalidMomentSequence { index: 1 })
        ));
        assert!(matches!(
            monic_recurrence_from_moments(&legendre_seq(4), 2),
            Err(Error::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn truncation_values() {
        let rec = monic_recurrence_from_moments(&legendre_seq(5), 2).unwrap();
        let j1 = jacobi_truncation(&rec, 1).unwrap();
        assert_eq!(j1.diag(), &[0.0, 0.0]);
        assert!((j1.offdiag()[0] - 0.577_350_269_189_625_8).abs() < 1e-15);
        let j2 = jacobi_truncation(&rec, 2).unwrap();
        assert!((j2.offdiag()[1] - (4.0f64 / 15.0).sqrt()).abs() < 1e-15);
        let rec0 = monic_recurrence_from_moments(&MomentSequence::dirac(&rat(2, 1), 3), 1).unwrap();
        let j0 = jacobi_truncation(&rec0, 0).unwrap();
        assert_eq!(j0.diag(), &[2.0]);
        assert!(j0.offdiag().is_empty());
        assert!(jacobi_truncation(&rec0, 1).is_err());
    }

    #[test]
    fn extreme_eigs_small_cases() {
        let s = 1.0 / 3f64.sqrt();
        let j = TriDiag::new(vec![0.0, 0.0], vec![s]).unwrap();
        let (lo, hi) = tridiag_extreme_eigs(&j, BISECTION_TOL);
        assert!((lo + s).abs() < 1e-15 && (hi - s).abs() < 1e-15);
        let j = TriDiag::new(vec![0.0; 3], vec![s, (4.0f64 / 15.0).sqrt()]).unwrap();
        let (lo, hi) = tridiag_extreme_eigs(&j, BISECTION_TOL);
        assert!((lo + 0.6f64.sqrt()).abs() < 1e-15 && (hi - 0.6f64.sqrt()).abs() < 1e-15);
        let j = TriDiag::new(vec![-4.25], vec![]).unwrap();
        assert_eq!(tridiag_extreme_eigs(&j, BISECTION_TOL), (-4.25, -4.25));
        assert!(TriDiag::new(vec![1.0, 2.0], vec![]).is_err());
    }

    #[test]
    fn sturm_count_brackets_spectrum() {
        let j = TriDiag::new(vec![2.0, -1.0, 0.5, 3.0, 1.0], vec![0.3, 1.2, 0.01, 2.0]).unwrap();
        let (lo, hi) = tridiag_extreme_eigs(&j, BISECTION_TOL);
        assert_eq!(j.sturm_count(lo - 1e-9), 0);
        assert_eq!(j.sturm_count(hi + 1e-9), 5);
        assert_eq!(j.sturm_count(lo + 1e-9), 1);
        assert_eq!(j.sturm_count(hi - 1e-9), 4);
    }

    #[test]
    fn orthonormal_values() {
        let rec = monic_recurrence_from_moments(&legendre_seq(7), 3).unwrap();
        assert!((orthonormal_eval(&rec, 1, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(orthonormal_eval(&rec, 0, 0.37).unwrap(), 1.0);
        assert!(orthonormal_eval(&rec, 2, 1.0 / 3f64.sqrt()).unwrap().abs() < 1e-10);
        assert!(orthonormal_eval(&rec, 4, 0.0).is_err());
    }

    #[test]
    fn monic_coefficients() {
        let rec = monic_recurrence_from_moments(&legendre_seq(7), 3).unwrap();
        // p_2 = x^2 - 1/3, p_3 = x^3 - 3/5 x
        assert_eq!(rec.monic_coeffs(2).unwrap(), vec![rat(-1, 3), rat(0, 1), rat(1, 1)]);
        assert_eq!(rec.monic_coeffs(3).unwrap(), vec![rat(0, 1), rat(-3, 5), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn csv_rows() {
        let rec = monic_recurrence_from_moments(&legendre_seq(5), 2).unwrap();
        let csv = rec.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,alpha_num,alpha_den,beta_num,beta_den");
        assert_eq!(lines[2], "1,0,1,1,3");
        assert_eq!(lines[3], "2,0,1,4,15");
    }
}
