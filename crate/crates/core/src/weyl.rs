//! Local Weyl-pair operators and lattice embeddings.
//!
//! Single-site conventions on `ℂ^p` with basis `|0⟩, ..., |p-1⟩` (indices
//! mod p):
//!
//! * `v |j⟩ = q^j |j⟩`   (clock),
//! * `u |j⟩ = |j-1⟩`     (shift),
//!
//! so that `u v = q v u` and `u^p = v^p = 1`.  On an `N`-site lattice the
//! computational index is big-endian in the site digits: site 1 is the most
//! significant digit (leftmost Kronecker factor).

use crate::matrix::{eye, kron2, zeros, CMat, C};
use crate::phase::RootOfUnity;

/// Shift generator `u` on one site: `u|j⟩ = |j-1⟩`.
pub fn shift_u(p: usize) -> CMat {
    let mut m = zeros(p, p);
    for j in 0..p {
        m[((j + p - 1) % p, j)] = C::new(1.0, 0.0);
    }
    m
}

/// Clock generator `v` on one site: `v|j⟩ = q^j|j⟩`.
pub fn clock_v(rou: &RootOfUnity) -> CMat {
    let p = rou.p;
    let mut m = zeros(p, p);
    for j in 0..p {
        m[(j, j)] = rou.q_pow(j as i64);
    }
    m
}

/// Exact integer power `u^m` (negative `m` allowed).
pub fn u_pow(p: usize, m: i64) -> CMat {
    let shift = m.rem_euclid(p as i64) as usize;
    let mut out = zeros(p, p);
    for j in 0..p {
        out[((j + p - shift % p) % p, j)] = C::new(1.0, 0.0);
    }
    out
}

/// Exact integer power `v^m` (negative `m` allowed).
pub fn v_pow(rou: &RootOfUnity, m: i64) -> CMat {
    let p = rou.p;
    let mut out = zeros(p, p);
    for j in 0..p {
        out[(j, j)] = rou.q_pow(m * j as i64);
    }
    out
}

/// Embed a single-site operator at site `n` (1-based) of an `N`-site chain.
pub fn site_op(op: &CMat, n: usize, n_sites: usize) -> CMat {
    assert!(n >= 1 && n <= n_sites);
    let p = op.nrows();
    let left = p.pow((n - 1) as u32);
    let right = p.pow((n_sites - n) as u32);
    kron2(&kron2(&eye(left), op), &eye(right))
}

/// Global charge operator `Θ = ∏_n v_n` (diagonal).
pub fn theta(rou: &RootOfUnity, n_sites: usize) -> CMat {
    let p = rou.p;
    let dim = p.pow(n_sites as u32);
    let mut m = zeros(dim, dim);
    for idx in 0..dim {
        let total: i64 = digits(idx, p, n_sites).iter().map(|&d| d as i64).sum();
        m[(idx, idx)] = rou.q_pow(total);
    }
    m
}

/// `Θ^m` exactly.
pub fn theta_pow(rou: &RootOfUnity, n_sites: usize, m: i64) -> CMat {
    let p = rou.p;
    let dim = p.pow(n_sites as u32);
    let mut mat = zeros(dim, dim);
    for idx in 0..dim {
        let total: i64 = digits(idx, p, n_sites).iter().map(|&d| d as i64).sum();
        mat[(idx, idx)] = rou.q_pow(m * total);
    }
    mat
}

/// Single-site discrete Fourier matrix `F[k, m] = q^{mk}/√p`: its columns
/// are the shift-eigenvectors `|m̂⟩` with `u|m̂⟩ = q^m|m̂⟩`.
pub fn fourier(rou: &RootOfUnity) -> CMat {
    let p = rou.p;
    let s = C::new(1.0 / (p as f64).sqrt(), 0.0);
    let mut f = zeros(p, p);
    for k in 0..p {
        for m in 0..p {
            f[(k, m)] = rou.q_pow((m * k) as i64) * s;
        }
    }
    f
}

/// Inverse of `fourier` (`F^{-1}[m, k] = q^{-mk}/√p`).
pub fn fourier_inv(rou: &RootOfUnity) -> CMat {
    let p = rou.p;
    let s = C::new(1.0 / (p as f64).sqrt(), 0.0);
    let mut f = zeros(p, p);
    for m in 0..p {
        for k in 0..p {
            f[(m, k)] = rou.q_pow(-((m * k) as i64)) * s;
        }
    }
    f
}

/// Big-endian digit expansion of a lattice index: `digits[0]` is site 1.
pub fn digits(idx: usize, p: usize, n_sites: usize) -> Vec<usize> {
    let mut out = vec![0usize; n_sites];
    let mut rest = idx;
    for a in (0..n_sites).rev() {
        out[a] = rest % p;
        rest /= p;
    }
    out
}

/// Inverse of `digits`.
pub fn idx_of(ds: &[usize], p: usize) -> usize {
    ds.iter().fold(0usize, |acc, &d| acc * p + d)
}

/// Shift digit `a` (0-based) of the index by `delta` cyclically.
pub fn step_digit(idx: usize, a: usize, delta: i64, p: usize, n_sites: usize) -> usize {
    let mut ds = digits(idx, p, n_sites);
    let v = (ds[a] as i64 + delta).rem_euclid(p as i64) as usize;
    ds[a] = v;
    idx_of(&ds, p)
}
