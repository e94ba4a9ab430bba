//! Scalar products of separate states.
//!
//! A *separate state* of charge `k` is determined by one function per
//! separate variable, tabulated on its grid orbit:
//!
//! `⟨α_k| = Σ_h q^{+k h_N} p^{-1/2} ∏_a α_a(η_a^{(h_a)}) · (V/W)(h) · ⟨η_h|`
//!
//! (right states carry `q^{-k h_N}`).  Because the measure factorizes over
//! the separate variables up to the Vandermonde `V(h)`, the pairing of two
//! separate states collapses by multilinearity to a single
//! `(N-1) × (N-1)` determinant of one-variable moment sums:
//!
//! `⟨α_k|β_{k'}⟩ = δ_{k,k'} det ℳ`,
//! `ℳ_{a,b} = Σ_{h=0}^{p-1} α_a(η_a^{(h)}) β_a(η_a^{(h)}) (η_a^{(h)})^{2(b-1)} / ω_a(η_a^{(h)})`
//!
//! with the local weight `ω_a(η) = η^{N-2}`.  Transfer eigenstates are the
//! separate states built from the Baxter tables, so their norms and mutual
//! orthogonality reduce to these determinants.

use crate::error::Result;
use crate::matrix::{mat_det, zeros, CMat, CVec, C, ONE, ZERO};
use crate::sov::SovBasis;
use crate::spectrum::SovState;
use crate::weyl::digits;

/// Assemble a left separate state from per-variable tables
/// (`tables[(a, h)] = α_a(η_a^{(h)})`).
pub fn left_separate_state(sb: &SovBasis, charge: usize, tables: &CMat) -> CVec {
    let p = sb.p();
    let n = sb.n_sites();
    let dim = sb.dim();
    let inv_sqrt_p = 1.0 / (p as f64).sqrt();
    let mut bra = CVec::from(vec![ZERO; dim]);
    for h in 0..dim {
        let ds = digits(h, p, n);
        let mut prod = ONE;
        for a in 0..n - 1 {
            prod *= tables[(a, ds[a])];
        }
        let coef = sb.mp.rou.q_pow(charge as i64 * ds[n - 1] as i64)
            * prod
            * sb.v_weight(h)
            / sb.w_weight(h)
            * inv_sqrt_p;
        bra = bra + sb.left.row(h).mapv(|z| z * coef);
    }
    bra
}

/// Assemble a right separate state from per-variable tables.
pub fn right_separate_state(sb: &SovBasis, charge: usize, tables: &CMat) -> CVec {
    let p = sb.p();
    let n = sb.n_sites();
    let dim = sb.dim();
    let inv_sqrt_p = 1.0 / (p as f64).sqrt();
    let mut ket = CVec::from(vec![ZERO; dim]);
    for h in 0..dim {
        let ds = digits(h, p, n);
        let mut prod = ONE;
        for a in 0..n - 1 {
            prod *= tables[(a, ds[a])];
        }
        let coef = sb.mp.rou.q_pow(-(charge as i64) * ds[n - 1] as i64)
            * prod
            * sb.v_weight(h)
            / sb.w_weight(h)
            * inv_sqrt_p;
        ket = ket + sb.right.column(h).mapv(|z| z * coef);
    }
    ket
}

/// One-variable moment sum
/// `Σ_h α(η^{(h)}) β(η^{(h)}) (η^{(h)})^{2(b-1)} / ω(η^{(h)})` for variable
/// `a` (0-based) and column `b` (1-based).
pub fn moment_sum(sb: &SovBasis, a: usize, alpha: &[C], beta: &[C], b: usize) -> C {
    let p = sb.p();
    let w_exp = sb.n_sites() as i32 - 2;
    let mut acc = ZERO;
    for h in 0..p {
        let e = sb.eta(a, h as i64);
        acc += alpha[h] * beta[h] * e.powi(2 * (b as i32 - 1) - w_exp);
    }
    acc
}

/// The pairing matrix `ℳ` of two table families.
pub fn pairing_matrix(sb: &SovBasis, alpha: &CMat, beta: &CMat) -> CMat {
    let n_sep = sb.n_sites() - 1;
    let p = sb.p();
    let mut m = zeros(n_sep, n_sep);
    for a in 0..n_sep {
        let al: Vec<C> = (0..p).map(|h| alpha[(a, h)]).collect();
        let be: Vec<C> = (0..p).map(|h| beta[(a, h)]).collect();
        for b in 1..=n_sep {
            m[(a, b - 1)] = moment_sum(sb, a, &al, &be, b);
        }
    }
    m
}

/// Determinant form of the scalar product `⟨α_k|β_{k'}⟩` (without the
/// charge selection rule — callers multiply by `δ_{k,k'}`).
pub fn pairing_det(sb: &SovBasis, alpha: &CMat, beta: &CMat) -> Result<C> {
    mat_det(&pairing_matrix(sb, alpha, beta))
}

/// Norm `⟨t|t⟩` of an assembled eigenstate via the determinant formula.
pub fn eigenstate_norm(sb: &SovBasis, s: &SovState) -> Result<C> {
    pairing_det(sb, &s.qbar_tab, &s.q_tab)
}

/// The telescoping orthogonality witness: for two eigenstates `t ≠ t'` of
/// equal charge, `Σ_h Q̄_t Q_{t'} (t' - t)(η_a^{(h)}) = 0` on every orbit.
/// Returns the worst normalized residual over the separate variables.
pub fn orthogonality_witness(sb: &SovBasis, s1: &SovState, s2: &SovState) -> f64 {
    let p = sb.p();
    let mp = &sb.mp;
    let mut worst: f64 = 0.0;
    for a in 0..sb.n_sites() - 1 {
        let mut acc = ZERO;
        let mut scale: f64 = 1e-280;
        for h in 0..p {
            let e = sb.eta(a, h as i64);
            let term = s1.qbar_tab[(a, h)]
                * s2.q_tab[(a, h)]
                * (s2.t_at(mp, e) - s1.t_at(mp, e));
            acc += term;
            scale += term.norm();
        }
        worst = worst.max(acc.norm() / scale);
    }
    worst
}
