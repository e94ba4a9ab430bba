//! Dense complex linear algebra helpers used throughout the library.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use ndarray_linalg::{Determinant, Eig, Inverse, Solve, SVD};
use num_complex::Complex64;

pub type C = Complex64;
pub type CMat = Array2<C>;
pub type CVec = Array1<C>;

pub const ONE: C = C::new(1.0, 0.0);
pub const ZERO: C = C::new(0.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

pub fn eye(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    Array2::zeros((r, c))
}

/// Kronecker product.
pub fn kron2(a: &CMat, b: &CMat) -> CMat {
    ndarray::linalg::kron(a, b)
}

/// Kronecker product of a list of factors, left factor most significant.
pub fn kron_all(factors: &[&CMat]) -> CMat {
    assert!(!factors.is_empty());
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = kron2(&acc, f);
    }
    acc
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Commutator `[a, b] = ab - ba`.
pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn fro_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative Frobenius error `‖x-y‖ / max(‖x‖, ‖y‖)`, with an absolute
/// fallback when both operands are tiny.
pub fn rel_mat_err(x: &CMat, y: &CMat) -> f64 {
    let scale = fro(x).max(fro(y));
    if scale < 1e-200 {
        return 0.0;
    }
    fro(&(x - y)) / scale
}

/// Relative scalar error with the same convention.
pub fn rel_scalar_err(x: C, y: C) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale < 1e-200 {
        return 0.0;
    }
    (x - y).norm() / scale
}

/// Residual of `m` against a multiple of the identity: returns the best
/// scalar `c` and the relative defect `‖m - c·Id‖/‖m‖`.
pub fn scalar_matrix_defect(m: &CMat) -> (C, f64) {
    let n = m.nrows();
    let c = m.diag().sum() / C::new(n as f64, 0.0);
    let mut dev = m.clone();
    for i in 0..n {
        dev[(i, i)] -= c;
    }
    let scale = fro(m).max(1e-200);
    (c, fro(&dev) / scale)
}

/// Best collinearity coefficient `c` minimizing `‖v - c·w‖` and the relative
/// defect `‖v - c·w‖/‖v‖`.
pub fn collinearity(v: &CVec, w: &CVec) -> (C, f64) {
    let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    if wn < 1e-280 {
        return (ZERO, 1.0);
    }
    // c = <w, v> / <w, w> in the usual Hermitian inner product.
    let num: C = w
        .iter()
        .zip(v.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let c = num / C::new(wn, 0.0);
    let diff: f64 = v
        .iter()
        .zip(w.iter())
        .map(|(a, b)| (a - c * b).norm_sqr())
        .sum();
    let vs: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (c, (diff / vs.max(1e-280)).sqrt())
}

pub fn mat_inv(m: &CMat) -> Result<CMat> {
    m.inv().map_err(Error::from)
}

pub fn mat_det(m: &CMat) -> Result<C> {
    m.det().map_err(Error::from)
}

pub fn solve_lin(a: &CMat, b: &CVec) -> Result<CVec> {
    a.solve(b).map_err(Error::from)
}

/// Right eigenpairs of a general complex matrix.
pub fn eig_pairs(m: &CMat) -> Result<(CVec, CMat)> {
    m.eig().map_err(Error::from)
}

/// Singular value decomposition; returns `(u, s, v†)`.
pub fn svd_full(m: &CMat) -> Result<(CMat, Array1<f64>, CMat)> {
    let (u, s, vt) = m.svd(true, true).map_err(Error::from)?;
    Ok((
        u.ok_or_else(|| Error::Linalg("svd: missing U".into()))?,
        s,
        vt.ok_or_else(|| Error::Linalg("svd: missing V^H".into()))?,
    ))
}

/// Kernel vector of a (numerically) rank-deficient square matrix: the right
/// singular vector of the smallest singular value.  Also returns the ratio
/// `s_min / s_max` as a rank-deficiency witness.
pub fn kernel_vector(m: &CMat) -> Result<(CVec, f64)> {
    let (_, s, vt) = svd_full(m)?;
    let n = s.len();
    let smin = s[n - 1];
    let smax = s[0].max(1e-300);
    let v = vt.row(n - 1).mapv(|z| z.conj());
    Ok((v, smin / smax))
}

/// Solve a generalized Laurent-fit problem: find coefficients `c_e` with
/// `Σ_e c_e x_j^{e}` equal to `f_j` on the sample points.  `exps` lists the
/// integer exponents; requires `len(points) == len(exps)`.
pub fn laurent_fit(points: &[C], values: &[C], exps: &[i64]) -> Result<CVec> {
    let n = exps.len();
    assert_eq!(points.len(), n);
    assert_eq!(values.len(), n);
    let mut a = zeros(n, n);
    for (j, &x) in points.iter().enumerate() {
        for (k, &e) in exps.iter().enumerate() {
            a[(j, k)] = x.powi(e as i32);
        }
    }
    let b = CVec::from(values.to_vec());
    solve_lin(&a, &b)
}

/// Evaluate a Laurent polynomial with the given exponents.
pub fn laurent_eval(coeffs: &CVec, exps: &[i64], x: C) -> C {
    coeffs
        .iter()
        .zip(exps.iter())
        .map(|(c, &e)| c * x.powi(e as i32))
        .sum()
}

/// Ascending Vandermonde product `∏_{a<b} (x_b - x_a)`.
pub fn vandermonde_asc(xs: &[C]) -> C {
    let mut acc = ONE;
    for b in 1..xs.len() {
        for a in 0..b {
            acc *= xs[b] - xs[a];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kron_and_dagger_behave() {
        let mut a = zeros(2, 2);
        a[(0, 1)] = ONE;
        let id = eye(2);
        let k = kron2(&a, &id);
        assert_eq!(k.nrows(), 4);
        assert_eq!(k[(0, 2)], ONE);
        let d = dagger(&k);
        assert_eq!(d[(2, 0)], ONE);
    }

    #[test]
    fn collinearity_detects_scaling() {
        let v = CVec::from(vec![ONE, 2.0 * ONE, 3.0 * ONE]);
        let w = CVec::from(vec![0.5 * ONE, ONE, 1.5 * ONE]);
        let (c, defect) = collinearity(&v, &w);
        assert_abs_diff_eq!((c - 2.0 * ONE).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(defect, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn laurent_fit_roundtrip() {
        let exps = [-2i64, 0, 2];
        let coeffs = CVec::from(vec![ONE, 2.0 * ONE, C::new(0.0, 1.0)]);
        let pts: Vec<C> = vec![C::new(1.1, 0.3), C::new(0.7, -0.2), C::new(1.4, 0.9)];
        let vals: Vec<C> = pts
            .iter()
            .map(|&x| laurent_eval(&coeffs, &exps, x))
            .collect();
        let fit = laurent_fit(&pts, &vals, &exps).unwrap();
        for (a, b) in fit.iter().zip(coeffs.iter()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn vandermonde_sign_convention() {
        // ascending convention: ∏_{a<b}(x_b - x_a)
        let xs = [ONE, 3.0 * ONE];
        assert_abs_diff_eq!((vandermonde_asc(&xs) - 2.0 * ONE).norm(), 0.0, epsilon = 1e-15);
        let xs3 = [ONE, 2.0 * ONE, 4.0 * ONE];
        // (2-1)(4-1)(4-2) = 6
        assert_abs_diff_eq!((vandermonde_asc(&xs3) - 6.0 * ONE).norm(), 0.0, epsilon = 1e-15);
    }
}
