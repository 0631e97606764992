#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::manual_memcpy)]
//! Hankel moment/localizing matrices and the symmetric-definite generalized
//! eigenproblem `A x = λ C x`.
//!
//! `λ_min(H_r(x; #λ), H_r(#λ))` is an upper bound on the minimum of `f` and
//! `λ_max` a lower bound on its maximum. Matrices are assembled in exact
//! rationals and rounded entry-wise to the working scalar only when solved.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::scalar::{DoubleDouble, Scalar};

/// Dense symmetric matrix, stored in full and mirrored on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    order: usize,
    data: Vec<T>,
}

impl<T: Clone> SymMatrix<T> {
    /// Builds from the upper triangle: `entry(i, j)` is called for `i <= j`.
    pub fn from_upper<F>(order: usize, mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> T,
    {
        let mut data: Vec<Option<T>> = vec![None; order * order];
        for i in 0..order {
            for j in i..order {
                let v = entry(i, j);
                data[j * order + i] = Some(v.clone());
                data[i * order + j] = Some(v);
            }
        }
        SymMatrix {
            order,
            data: data.into_iter().map(|v| v.expect("filled")).collect(),
        }
    }

    /// Fails unless `rows` is square and exactly symmetric.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self>
    where
        T: PartialEq,
    {
        let order = rows.len();
        for row in &rows {
            if row.len() != order {
                return Err(Error::DimensionMismatch {
                    expected: order,
                    found: row.len(),
                });
            }
        }
        for i in 0..order {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Invalid(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymMatrix {
            order,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.order + j]
    }

    pub fn map<U: Clone, F: FnMut(&T) -> U>(&self, f: F) -> SymMatrix<U> {
        SymMatrix {
            order: self.order,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.order.max(1)).map(<[T]>::to_vec).collect()
    }
}

impl SymMatrix<BigRational> {
    /// Entry-wise round-to-nearest into the scalar `S`.
    pub fn to_scalar<S: Scalar>(&self) -> SymMatrix<S> {
        self.map(S::from_rational)
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        self.to_scalar::<f64>()
    }
}

impl<T: std::fmt::Display> SymMatrix<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.order {
            for j in 0..self.order {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", self.data[i * self.order + j]);
            }
            out.push('\n');
        }
        out
    }
}

/// `H_r(#λ)`: entry `(i, j)` is `seq[i + j]`.
pub fn hankel_moment(seq: &MomentSequence, r: usize) -> Result<SymMatrix<BigRational>> {
    seq.require(2 * r)?;
    Ok(SymMatrix::from_upper(r + 1, |i, j| seq.values[i + j].clone()))
}

/// `H_r(x; #λ)`: entry `(i, j)` is `seq[i + j + 1]`.
pub fn hankel_localizing(seq: &MomentSequence, r: usize) -> Result<SymMatrix<BigRational>> {
    seq.require(2 * r + 1)?;
    Ok(SymMatrix::from_upper(r + 1, |i, j| seq.values[i + j + 1].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    F64,
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilOptions {
    pub precision: Precision,
    /// Relative off-diagonal deflation threshold of the QL iteration.
    pub deflation_tol: f64,
    /// Smallest admissible Cholesky pivot of the unit-diagonal-scaled `C`,
    /// relative to `trace/order`.
    pub pd_tol: f64,
    /// Largest admissible normwise backward error of the returned eigenpairs.
    pub residual_tol: f64,
}

impl PencilOptions {
    pub fn f64() -> Self {
        PencilOptions {
            precision: Precision::F64,
            deflation_tol: 1e-12,
            pd_tol: 1e-10,
            residual_tol: 1e-8,
        }
    }

    pub fn double_double() -> Self {
        PencilOptions {
            precision: Precision::DoubleDouble,
            deflation_tol: 1e-28,
            pd_tol: 1e-22,
            residual_tol: 1e-8,
        }
    }
}

impl Default for PencilOptions {
    fn default() -> Self {
        Self::double_double()
    }
}

/// Extreme generalized eigenvalues of a pencil.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilResult {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Max over both eigenpairs of `‖Ax − λCx‖ / ((‖A‖_F + |λ|‖C‖_F) ‖x‖)`.
    pub residual: f64,
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues, and
/// eigenvectors as columns of `vectors` (row-major `n × n`).
#[derive(Clone, Debug)]
pub struct SymEigen<S> {
    pub values: Vec<S>,
    pub vectors: Vec<Vec<S>>,
}

/// Householder tridiagonalization followed by implicit QL with shifts.
///
/// Deflation happens once `|e_i| <= tol · max_j(|d_j| + |e_j|)`, with `tol`
/// floored at the scalar's unit roundoff.
pub fn sym_eigen<S: Scalar>(m: &SymMatrix<S>, tol: f64) -> Result<SymEigen<S>> {
    let n = m.order();
    if n == 0 {
        return Ok(SymEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut v = m.rows();
    let mut d = vec![S::zero(); n];
    let mut e = vec![S::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e);
    ql_implicit(&mut v, &mut d, &mut e, tol.max(S::epsilon()))?;
    Ok(SymEigen { values: d, vectors: v })
}

fn tridiagonalize<S: Scalar>(v: &mut [Vec<S>], d: &mut [S], e: &mut [S]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = S::zero();
        let mut h = S::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == S::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = S::zero();
                v[j][i] = S::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > S::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = S::zero();
            }
            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = S::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    let t = f * e[k] + g * d[k];
                    v[k][j] -= t;
                }
                d[j] = v[i - 1][j];
                v[i][j] = S::zero();
            }
        }
        d[i] = h;
    }
    // accumulate transformations
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = S::one();
        let h = d[i + 1];
        if h != S::zero() {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = S::zero();
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    let t = g * d[k];
                    v[k][j] -= t;
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = S::zero();
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = S::zero();
    }
    v[n - 1][n - 1] = S::one();
    e[0] = S::zero();
}

fn ql_implicit<S: Scalar>(v: &mut [Vec<S>], d: &mut [S], e: &mut [S], tol: f64) -> Result<()> {
    let n = d.len();
    let max_iter = 60 * n.max(1);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = S::zero();
    let eps = S::from_f64(tol);
    let two = S::from_f64(2.0);
    let mut f = S::zero();
    let mut tst1 = S::zero();
    for l in 0..n {
        let cand = d[l].abs() + e[l].abs();
        if cand > tst1 {
            tst1 = cand;
        }
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence { iterations: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(S::one());
                if p < S::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = S::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = S::zero();
                let mut s2 = S::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = S::zero();
    }
    // selection sort, carrying eigenvectors
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in v.iter_mut() {
                row.swap(i, k);
            }
        }
    }
    Ok(())
}

/// Cholesky factor `L` (lower, row-major) of `c`, checking every pivot
/// against `floor`.
fn cholesky<S: Scalar>(c: &[Vec<S>], floor: S) -> Result<Vec<Vec<S>>> {
    let n = c.len();
    let mut l = vec![vec![S::zero(); n]; n];
    for j in 0..n {
        let mut piv = c[j][j];
        for k in 0..j {
            piv -= l[j][k] * l[j][k];
        }
        if !(piv > floor) {
            return Err(Error::NotPositiveDefinite {
                order: n,
                index: j,
                pivot: piv.to_f64(),
            });
        }
        let ljj = piv.sqrt();
        l[j][j] = ljj;
        for i in j + 1..n {
            let mut s = c[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / ljj;
        }
    }
    Ok(l)
}

fn frobenius<S: Scalar>(m: &[Vec<S>]) -> S {
    let mut s = S::zero();
    for row in m {
        for &x in row {
            s += x * x;
        }
    }
    s.sqrt()
}

fn residual<S: Scalar>(a: &[Vec<S>], c: &[Vec<S>], lambda: S, x: &[S], norm_a: S, norm_c: S) -> f64 {
    let n = x.len();
    let mut r2 = S::zero();
    let mut x2 = S::zero();
    for i in 0..n {
        let mut ri = S::zero();
        for j in 0..n {
            ri += (a[i][j] - lambda * c[i][j]) * x[j];
        }
        r2 += ri * ri;
        x2 += x[i] * x[i];
    }
    let denom = (norm_a + lambda.abs() * norm_c) * x2.sqrt();
    if denom == S::zero() {
        return 0.0;
    }
    (r2.sqrt() / denom).to_f64()
}

/// Extreme generalized eigenvalues of `(a, c)` computed in scalar `S`.
///
/// `c` is scaled to unit diagonal by a diagonal congruence, factored as
/// `LLᵀ`, and the standard problem `L⁻¹ A L⁻ᵀ` is solved in full.
pub fn pencil_extremes_in<S: Scalar>(
    a: &SymMatrix<S>,
    c: &SymMatrix<S>,
    opts: &PencilOptions,
) -> Result<PencilResult> {
    let n = c.order();
    if a.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.order(),
        });
    }
    if n == 0 {
        return Err(Error::Invalid("empty pencil".into()));
    }
    let a_rows = a.rows();
    let c_rows = c.rows();
    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let cii = c_rows[i][i];
        if !(cii > S::zero()) {
            return Err(Error::NotPositiveDefinite {
                order: n,
                index: i,
                pivot: cii.to_f64(),
            });
        }
        scale.push(S::one() / cii.sqrt());
    }
    let scaled = |m: &[Vec<S>]| -> Vec<Vec<S>> {
        (0..n)
            .map(|i| (0..n).map(|j| scale[i] * m[i][j] * scale[j]).collect())
            .collect()
    };
    let a_s = scaled(&a_rows);
    let c_s = scaled(&c_rows);
    // unit diagonal: trace/order is 1
    let l = cholesky(&c_s, S::from_f64(opts.pd_tol))?;

    // X = L⁻¹ A_s, then M = X L⁻ᵀ = (L⁻¹ Xᵀ)ᵀ
    let forward = |b: &[Vec<S>]| -> Vec<Vec<S>> {
        let mut x = b.to_vec();
        for col in 0..n {
            for i in 0..n {
                let mut s = x[i][col];
                for k in 0..i {
                    s -= l[i][k] * x[k][col];
                }
                x[i][col] = s / l[i][i];
            }
        }
        x
    };
    let x = forward(&a_s);
    let xt: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| x[j][i]).collect()).collect();
    let mt = forward(&xt);
    let half = S::from_f64(0.5);
    let m = SymMatrix::from_upper(n, |i, j| half * (mt[i][j] + mt[j][i]));

    let eig = sym_eigen(&m, opts.deflation_tol)?;
    let norm_a = frobenius(&a_rows);
    let norm_c = frobenius(&c_rows);
    let mut worst = 0.0f64;
    for idx in [0, n - 1] {
        let y: Vec<S> = (0..n).map(|i| eig.vectors[i][idx]).collect();
        // back substitution Lᵀ z = y, then undo the diagonal scaling
        let mut z = y;
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= l[k][i] * z[k];
            }
            z[i] = s / l[i][i];
        }
        let xv: Vec<S> = z.iter().zip(&scale).map(|(&zi, &si)| zi * si).collect();
        worst = worst.max(residual(&a_rows, &c_rows, eig.values[idx], &xv, norm_a, norm_c));
    }
    if !(worst <= opts.residual_tol) {
        return Err(Error::ResidualTooLarge {
            residual: worst,
            tol: opts.residual_tol,
        });
    }
    Ok(PencilResult {
        lambda_min: eig.values[0].to_f64(),
        lambda_max: eig.values[n - 1].to_f64(),
        residual: worst,
    })
}

/// `f64` pencil with deflation tolerance `tol` and the default `f64` pivot floor.
pub fn pencil_extremes(a: &SymMatrix<f64>, c: &SymMatrix<f64>, tol: f64) -> Result<PencilResult> {
    let opts = PencilOptions {
        deflation_tol: tol,
        ..PencilOptions::f64()
    };
    pencil_extremes_in(a, c, &opts)
}

/// Rounds exact matrices to the precision in `opts` and solves.
pub fn pencil_extremes_exact(
    a: &SymMatrix<BigRational>,
    c: &SymMatrix<BigRational>,
    opts: &PencilOptions,
) -> Result<PencilResult> {
    match opts.precision {
        Precision::F64 => pencil_extremes_in(&a.to_scalar::<f64>(), &c.to_scalar::<f64>(), opts),
        Precision::DoubleDouble => pencil_extremes_in(
            &a.to_scalar::<DoubleDouble>(),
            &c.to_scalar::<DoubleDouble>(),
            opts,
        ),
    }
}

/// `λ_min`/`λ_max` of `(H_r(x; #λ), H_r(#λ))` with explicit options.
pub fn pencil_bounds(seq: &MomentSequence, r: usize, opts: &PencilOptions) -> Result<PencilResult> {
    let c = hankel_moment(seq, r)?;
    let a = hankel_localizing(seq, r)?;
    pencil_extremes_exact(&a, &c, opts)
}

/// `(τ^ℓ_r, τ^u_r)` from the Hankel pencil, in double-double precision.
pub fn tau_bounds_pencil(seq: &MomentSequence, r: usize) -> Result<(f64, f64)> {
    let res = pencil_bounds(seq, r, &PencilOptions::default())?;
    Ok((res.lambda_min, res.lambda_max))
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
    fn hankel_placement() {
        let seq = legendre_seq(5);
        let h = hankel_moment(&seq, 2).unwrap();
        assert_eq!(
            h.rows(),
            vec![
                vec![rat(1, 1), rat(0, 1), rat(1, 3)],
                vec![rat(0, 1), rat(1, 3), rat(0, 1)],
                vec![rat(1, 3), rat(0, 1), rat(1, 5)]
            ]
        );
        let l = hankel_localizing(&seq, 1).unwrap();
        assert_eq!(l.rows(), vec![vec![rat(0, 1), rat(1, 3)], vec![rat(1, 3), rat(0, 1)]]);
        assert_eq!(hankel_moment(&seq, 0).unwrap().rows(), vec![vec![rat(1, 1)]]);
        assert_eq!(hankel_localizing(&seq, 0).unwrap().rows(), vec![vec![rat(0, 1)]]);
    }

    #[test]
    fn hankel_of_dirac() {
        let c = rat(3, 2);
        let seq = MomentSequence::dirac(&c, 3);
        let h = hankel_moment(&seq, 1).unwrap();
        let l = hankel_localizing(&seq, 1).unwrap();
        assert_eq!(l, h.map(|v| v * &c));
        // rank one
        let r = h.rows();
        assert_eq!(&r[0][0] * &r[1][1] - &r[0][1] * &r[1][0], rat(0, 1));
    }

    #[test]
    fn sequence_too_short() {
        let seq = legendre_seq(3);
        assert!(matches!(hankel_moment(&seq, 2), Err(Error::SequenceTooShort { .. })));
        assert!(matches!(hankel_localizing(&seq, 2), Err(Error::SequenceTooShort { .. })));
        assert!(hankel_localizing(&seq, 1).is_ok());
    }

    #[test]
    fn two_by_two_pencil() {
        let a = SymMatrix::from_rows(vec![vec![0.0, 1.0 / 3.0], vec![1.0 / 3.0, 0.0]]).unwrap();
        let c = SymMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0 / 3.0]]).unwrap();
        let res = pencil_extremes(&a, &c, 1e-12).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((res.lambda_min + s).abs() < 1e-14);
        assert!((res.lambda_max - s).abs() < 1e-14);
        assert!(res.residual < 1e-14);
    }

    #[test]
    fn identity_and_scaled_pencils() {
        let c = SymMatrix::from_rows(vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.25],
            vec![0.5, 0.25, 2.0],
        ])
        .unwrap();
        let res = pencil_extremes(&c, &c, 1e-12).unwrap();
        assert!((res.lambda_min - 1.0).abs() < 1e-13 && (res.lambda_max - 1.0).abs() < 1e-13);
        let a = c.map(|v| -2.5 * v);
        let res = pencil_extremes(&a, &c, 1e-12).unwrap();
        assert!((res.lambda_min + 2.5).abs() < 1e-13 && (res.lambda_max + 2.5).abs() < 1e-13);
    }

    #[test]
    fn indefinite_c_is_rejected() {
        let a = SymMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let c = SymMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(pencil_extremes(&a, &c, 1e-12), Err(Error::NotPositiveDefinite { .. })));
        let singular = SymMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(pencil_extremes(&a, &singular, 1e-12), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn legendre_tau_matches_roots() {
        let seq = legendre_seq(5);
        let (lo, hi) = tau_bounds_pencil(&seq, 1).unwrap();
        assert!((lo + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((hi - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        let (lo, hi) = tau_bounds_pencil(&seq, 2).unwrap();
        assert!((lo + 0.6f64.sqrt()).abs() < 1e-14);
        assert!((hi - 0.6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn dirac_tau_is_the_atom() {
        let seq = MomentSequence::dirac(&rat(-7, 4), 1);
        assert_eq!(tau_bounds_pencil(&seq, 0).unwrap(), (-1.75, -1.75));
        // one step further the moment matrix is singular
        let seq = MomentSequence::dirac(&rat(-7, 4), 3);
        assert!(matches!(tau_bounds_pencil(&seq, 1), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn sym_eigen_diagonalizes() {
        let m = SymMatrix::from_rows(vec![
            vec![2.0, -1.0, 0.0, 0.5],
            vec![-1.0, 2.0, -1.0, 0.0],
            vec![0.0, -1.0, 2.0, -1.0],
            vec![0.5, 0.0, -1.0, 2.0],
        ])
        .unwrap();
        let eig = sym_eigen(&m, 1e-15).unwrap();
        let rows = m.rows();
        for (k, &lam) in eig.values.iter().enumerate() {
            for i in 0..4 {
                let mv: f64 = (0..4).map(|j| rows[i][j] * eig.vectors[j][k]).sum();
                assert!((mv - lam * eig.vectors[i][k]).abs() < 1e-13);
            }
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = eig.values.iter().sum();
        assert!((trace - 8.0).abs() < 1e-13);
    }

    #[test]
    fn csv_dump() {
        let h = hankel_moment(&legendre_seq(2), 1).unwrap();
        assert_eq!(h.to_csv(), "1,0\n0,1/3\n");
    }
}
