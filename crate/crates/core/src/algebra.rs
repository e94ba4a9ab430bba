//! The cyclic six-vertex Yang–Baxter algebra: Lax operators, monodromy
//! matrix, transfer matrix, quantum determinant, operator averages, and the
//! gauged amplitude functions that drive the separated spectral problem.
//!
//! Conventions (multiplicative spectral parameter `λ`):
//!
//! * Site Lax operator
//!   `L_n(λ) = [[λ α v - β v⁻¹/λ,  u(q^{-1/2} a v + q^{1/2} b v⁻¹)],
//!              [u⁻¹(q^{1/2} c v + q^{-1/2} d v⁻¹),  γ v/λ - λ δ v⁻¹]]`.
//! * Monodromy `M(λ) = L_N(λ) ··· L_1(λ) = [[A, B], [C, D]]`,
//!   transfer matrix `τ(λ) = A + D`.
//! * `R(λ) = diag(qλ - 1/(qλ), λ - 1/λ, λ - 1/λ, qλ - 1/(qλ))` plus the
//!   constant `(q - q⁻¹)` block on the middle anti-diagonal.
//! * Averages: `O(Λ) = ∏_{k=1..p} O(q^k λ)` with `Λ = λ^p` is central for
//!   each monodromy entry and equals the corresponding entry of the product
//!   of averaged Lax matrices.

use crate::error::{Error, Result};
use crate::matrix::{eye, kron2, mat_det, rel_mat_err, zeros, CMat, C, ONE, ZERO};
use crate::params::ModelParams;
use crate::phase::csqrt;
use crate::weyl::{site_op, u_pow, v_pow};

/// Monodromy matrix as a 2×2 block of lattice operators.
#[derive(Debug, Clone)]
pub struct Mono {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
}

impl Mono {
    pub fn identity(dim: usize) -> Self {
        Self {
            a: eye(dim),
            b: zeros(dim, dim),
            c: zeros(dim, dim),
            d: eye(dim),
        }
    }

    /// Block product `self · other`.
    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            a: self.a.dot(&other.a) + self.b.dot(&other.c),
            b: self.a.dot(&other.b) + self.b.dot(&other.d),
            c: self.c.dot(&other.a) + self.d.dot(&other.c),
            d: self.c.dot(&other.b) + self.d.dot(&other.d),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &CMat {
        match (i, j) {
            (0, 0) => &self.a,
            (0, 1) => &self.b,
            (1, 0) => &self.c,
            (1, 1) => &self.d,
            _ => panic!("monodromy block index out of range"),
        }
    }
}

/// Lax operator of site `n` (1-based), embedded in the chain.
pub fn lax_embedded(mp: &ModelParams, n: usize, lambda: C) -> Mono {
    let rou = &mp.rou;
    let s = &mp.sites[n - 1];
    let n_sites = mp.n_sites();
    let p = rou.p;
    let u = u_pow(p, 1);
    let ui = u_pow(p, -1);
    let v = v_pow(rou, 1);
    let vi = v_pow(rou, -1);
    let li = 1.0 / lambda;

    let a11 = v.mapv(|z| z * lambda * s.alpha) - vi.mapv(|z| z * li * s.beta);
    let a12 = u.dot(&(v.mapv(|z| z * rou.q_half_pow(-1) * s.a) + vi.mapv(|z| z * rou.q_half_pow(1) * s.b)));
    let a21 = ui.dot(&(v.mapv(|z| z * rou.q_half_pow(1) * s.c) + vi.mapv(|z| z * rou.q_half_pow(-1) * s.d)));
    let a22 = v.mapv(|z| z * li * s.gamma) - vi.mapv(|z| z * lambda * s.delta);

    Mono {
        a: site_op(&a11, n, n_sites),
        b: site_op(&a12, n, n_sites),
        c: site_op(&a21, n, n_sites),
        d: site_op(&a22, n, n_sites),
    }
}

/// Full monodromy `M(λ) = L_N(λ) ··· L_1(λ)`.
pub fn monodromy(mp: &ModelParams, lambda: C) -> Mono {
    let mut acc = lax_embedded(mp, 1, lambda);
    for n in 2..=mp.n_sites() {
        acc = lax_embedded(mp, n, lambda).mul(&acc);
    }
    acc
}

/// Transfer matrix `τ(λ) = A(λ) + D(λ)`.
pub fn tau2(mp: &ModelParams, lambda: C) -> CMat {
    let m = monodromy(mp, lambda);
    m.a + m.d
}

/// Six-vertex R-matrix on the two-dimensional auxiliary pair.
pub fn r_matrix(mp: &ModelParams, lambda: C) -> CMat {
    let q = mp.rou.q();
    let qi = mp.rou.q_inv();
    let li = 1.0 / lambda;
    let outer = q * lambda - qi * li;
    let inner = lambda - li;
    let hop = q - qi;
    let mut r = zeros(4, 4);
    r[(0, 0)] = outer;
    r[(3, 3)] = outer;
    r[(1, 1)] = inner;
    r[(2, 2)] = inner;
    r[(1, 2)] = hop;
    r[(2, 1)] = hop;
    r
}

/// `M(λ) ⊗ 1` on aux1 ⊗ aux2 ⊗ quantum.
fn m_outer_first(m: &Mono, dim: usize) -> CMat {
    let mut out = zeros(4 * dim, 4 * dim);
    for i1 in 0..2 {
        for j1 in 0..2 {
            let blk = m.entry(i1, j1);
            for i2 in 0..2 {
                let (r0, c0) = ((2 * i1 + i2) * dim, (2 * j1 + i2) * dim);
                out.slice_mut(ndarray::s![r0..r0 + dim, c0..c0 + dim])
                    .assign(blk);
            }
        }
    }
    out
}

/// `1 ⊗ M(μ)` on aux1 ⊗ aux2 ⊗ quantum.
fn m_outer_second(m: &Mono, dim: usize) -> CMat {
    let mut out = zeros(4 * dim, 4 * dim);
    for i2 in 0..2 {
        for j2 in 0..2 {
            let blk = m.entry(i2, j2);
            for i1 in 0..2 {
                let (r0, c0) = ((2 * i1 + i2) * dim, (2 * i1 + j2) * dim);
                out.slice_mut(ndarray::s![r0..r0 + dim, c0..c0 + dim])
                    .assign(blk);
            }
        }
    }
    out
}

/// Relative residual of the RLL exchange relation
/// `R(λ/μ) (M(λ)⊗1) (1⊗M(μ)) = (1⊗M(μ)) (M(λ)⊗1) R(λ/μ)`.
pub fn yba_residual(mp: &ModelParams, lambda: C, mu: C) -> f64 {
    let dim = mp.dim();
    let r = kron2(&r_matrix(mp, lambda / mu), &eye(dim));
    let m1 = m_outer_first(&monodromy(mp, lambda), dim);
    let m2 = m_outer_second(&monodromy(mp, mu), dim);
    let lhs = r.dot(&m1).dot(&m2);
    let rhs = m2.dot(&m1).dot(&r);
    rel_mat_err(&lhs, &rhs)
}

/// Quantum determinant as an operator: `A(λ)D(λ/q) - B(λ)C(λ/q)`.
pub fn qdet_matrix(mp: &ModelParams, lambda: C) -> CMat {
    let m1 = monodromy(mp, lambda);
    let m2 = monodromy(mp, lambda * mp.rou.q_inv());
    m1.a.dot(&m2.d) - m1.b.dot(&m2.c)
}

/// Quantum determinant in factorized scalar form:
/// `∏_n k_n (λ/μ_{n,+} - μ_{n,+}/λ)(λ/μ_{n,-} - μ_{n,-}/λ)`.
pub fn qdet_scalar(mp: &ModelParams, lambda: C) -> C {
    let rou = &mp.rou;
    let mut acc = ONE;
    for s in &mp.sites {
        let mp_ = s.mu_plus(rou);
        let mm_ = s.mu_minus(rou);
        acc *= s.k_det() * (lambda / mp_ - mp_ / lambda) * (lambda / mm_ - mm_ / lambda);
    }
    acc
}

/// Averaged Lax matrix of one site: a 2×2 scalar matrix in `Λ = λ^p`.
pub fn avg_lax(mp: &ModelParams, n: usize, cap_lambda: C) -> [[C; 2]; 2] {
    let rou = &mp.rou;
    let s = &mp.sites[n - 1];
    let p = rou.p as i32;
    let qp2 = rou.q_half_pow(rou.p as i64); // (-1)^{p'/2}, real
    [
        [
            cap_lambda * s.alpha.powi(p) - s.beta.powi(p) / cap_lambda,
            qp2 * (s.a.powi(p) + s.b.powi(p)),
        ],
        [
            qp2 * (s.c.powi(p) + s.d.powi(p)),
            s.gamma.powi(p) / cap_lambda - cap_lambda * s.delta.powi(p),
        ],
    ]
}

/// Averaged monodromy `⟨M⟩(Λ) = 𝓛_N ··· 𝓛_1` (2×2 scalar matrix).
pub fn avg_mono(mp: &ModelParams, cap_lambda: C) -> [[C; 2]; 2] {
    let mut acc = avg_lax(mp, 1, cap_lambda);
    for n in 2..=mp.n_sites() {
        let l = avg_lax(mp, n, cap_lambda);
        let mut next = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = l[i][0] * acc[0][j] + l[i][1] * acc[1][j];
            }
        }
        acc = next;
    }
    acc
}

/// Eigenvalues of the averaged monodromy, ordered by the branch rule:
/// the first returned value is the eigenvalue closer to the diagonal entry
/// `⟨A⟩(Λ)` (at the separated grid, where `⟨B⟩` vanishes, it *is* `⟨A⟩`).
pub fn avg_eigen_branch(mp: &ModelParams, cap_lambda: C) -> (C, C) {
    let m = avg_mono(mp, cap_lambda);
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = csqrt(tr * tr - 4.0 * det);
    let w1 = (tr + disc) / 2.0;
    let w2 = (tr - disc) / 2.0;
    if (w1 - m[0][0]).norm() <= (w2 - m[0][0]).norm() {
        (w1, w2)
    } else {
        (w2, w1)
    }
}

/// Ungauged amplitude `a(λ) = ∏_n (β_n α_n)^{1/2} (λ/μ_{n,+} - μ_{n,+}/λ)`.
pub fn amp_a_raw(mp: &ModelParams, lambda: C) -> C {
    let rou = &mp.rou;
    let mut acc = ONE;
    for s in &mp.sites {
        let m = s.mu_plus(rou);
        acc *= csqrt(s.beta * s.alpha) * (lambda / m - m / lambda);
    }
    acc
}

/// Ungauged amplitude
/// `d(λ) = ∏_n (abcd/(αβ))^{1/2} (qλ/μ_{n,-} - μ_{n,-}/(qλ))`.
pub fn amp_d_raw(mp: &ModelParams, lambda: C) -> C {
    let rou = &mp.rou;
    let q = rou.q();
    let mut acc = ONE;
    for s in &mp.sites {
        let m = s.mu_minus(rou);
        acc *= csqrt(s.a * s.b * s.c * s.d / (s.alpha * s.beta)) * (q * lambda / m - m / (q * lambda));
    }
    acc
}

/// Gauge constant of the orbit of `λ`: the p-th root `g` with
/// `g^p ∏_k a(q^k λ) = ⟨Ω⟩(Λ)` (principal branch; any p-th root gives an
/// equivalent gauge).
pub fn gauge_g(mp: &ModelParams, lambda: C) -> C {
    let rou = &mp.rou;
    let p = rou.p;
    let cap = lambda.powi(p as i32);
    let (omega, _) = avg_eigen_branch(mp, cap);
    let mut prod = ONE;
    for k in 1..=p {
        prod *= amp_a_raw(mp, rou.q_pow(k as i64) * lambda);
    }
    crate::phase::RootOfUnity::principal_root(omega / prod, p as u32)
}

/// Gauged amplitude `ā(λ) = g(Λ) a(λ)`: satisfies
/// `∏_k ā(q^k λ) = ⟨Ω⟩(Λ)` and `det_q M(λ) = ā(λ) d̄(λ/q)`.
pub fn amp_a_bar(mp: &ModelParams, lambda: C) -> C {
    gauge_g(mp, lambda) * amp_a_raw(mp, lambda)
}

/// Gauged amplitude `d̄(λ) = d(λ)/g(Λ)`.
pub fn amp_d_bar(mp: &ModelParams, lambda: C) -> C {
    amp_d_raw(mp, lambda) / gauge_g(mp, lambda)
}

/// Laurent coefficient matrices of a matrix-valued Laurent polynomial with
/// known exponents, from evaluations at `exps.len()` sample points.
pub fn laurent_matrix_coeffs(evals: &[CMat], points: &[C], exps: &[i64]) -> Result<Vec<CMat>> {
    let n = exps.len();
    if evals.len() != n || points.len() != n {
        return Err(Error::InvalidParams("laurent_matrix_coeffs: size mismatch".into()));
    }
    let mut v = zeros(n, n);
    for (j, &x) in points.iter().enumerate() {
        for (k, &e) in exps.iter().enumerate() {
            v[(j, k)] = x.powi(e as i32);
        }
    }
    let w = crate::matrix::mat_inv(&v)?;
    let dim = evals[0].nrows();
    let mut out = Vec::with_capacity(n);
    for e in 0..n {
        let mut acc = zeros(dim, dim);
        for j in 0..n {
            acc = acc + evals[j].mapv(|z| z * w[(e, j)]);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Transfer-matrix Laurent exponents `(-N, -N+2, ..., N)`.
pub fn tau_exponents(n_sites: usize) -> Vec<i64> {
    (0..=n_sites).map(|b| -(n_sites as i64) + 2 * b as i64).collect()
}

/// Sample points for transfer-matrix interpolation (deterministic, away
/// from small moduli and from each other).
pub fn tau_sample_points(n_points: usize) -> Vec<C> {
    (0..n_points)
        .map(|j| C::from_polar(0.85 + 0.11 * j as f64, 0.17 + 0.41 * j as f64))
        .collect()
}

/// Interpolated coefficient matrices of `τ(λ)`.
pub fn tau_coeff_matrices(mp: &ModelParams) -> Result<Vec<CMat>> {
    let exps = tau_exponents(mp.n_sites());
    let pts = tau_sample_points(exps.len());
    let evals: Vec<CMat> = pts.iter().map(|&x| tau2(mp, x)).collect();
    laurent_matrix_coeffs(&evals, &pts, &exps)
}

/// Check that the quantum determinant is central (a scalar multiple of the
/// identity); returns the scalar and the relative defect.
pub fn qdet_centrality(mp: &ModelParams, lambda: C) -> (C, f64) {
    crate::matrix::scalar_matrix_defect(&qdet_matrix(mp, lambda))
}

/// Determinant of the averaged monodromy.
pub fn avg_mono_det(mp: &ModelParams, cap_lambda: C) -> C {
    let m = avg_mono(mp, cap_lambda);
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Operator average `∏_{k=1..p} E(q^k λ)` of a monodromy entry
/// (`entry ∈ {(0,0),(0,1),(1,0),(1,1)}`).
pub fn operator_average(mp: &ModelParams, entry: (usize, usize), lambda: C) -> CMat {
    let rou = &mp.rou;
    let dim = mp.dim();
    let mut acc = eye(dim);
    for k in 1..=rou.p {
        let m = monodromy(mp, rou.q_pow(k as i64) * lambda);
        acc = m.entry(entry.0, entry.1).dot(&acc);
    }
    acc
}

/// Determinant of a p^N-dimensional matrix (wrapper used by spectral
/// checks).
pub fn det(m: &CMat) -> Result<C> {
    mat_det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{comm, fro, rel_scalar_err, scalar_matrix_defect};
    use crate::phase::RootOfUnity;
    use crate::weyl::theta;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn sample(p: usize, pp: usize, n: usize, seed: u64) -> ModelParams {
        let rou = RootOfUnity::new(p, pp).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        ModelParams::sample_generic(rou, n, &mut rng)
    }

    #[test]
    fn rll_exchange_relation_holds() {
        for (p, pp, n, seed) in [(3, 2, 2, 11), (5, 2, 2, 12), (3, 2, 3, 13)] {
            let mp = sample(p, pp, n, seed);
            let l = C::new(1.13, 0.21);
            let m = C::new(0.82, -0.33);
            let res = yba_residual(&mp, l, m);
            assert!(res < 1e-11, "yba residual {res} at p={p} N={n}");
        }
    }

    #[test]
    fn quantum_determinant_is_central_and_factorized() {
        for (p, pp, n, seed) in [(3, 2, 1, 21), (3, 2, 2, 22), (5, 2, 2, 23), (3, 2, 3, 24)] {
            let mp = sample(p, pp, n, seed);
            let l = C::new(0.93, 0.4);
            let (scalar, defect) = qdet_centrality(&mp, l);
            assert!(defect < 1e-11, "qdet not scalar: {defect}");
            let expect = qdet_scalar(&mp, l);
            let err = rel_scalar_err(scalar, expect);
            assert!(err < 1e-11, "qdet factorization mismatch {err} at p={p} N={n}");
        }
    }

    #[test]
    fn charge_commutation_with_monodromy() {
        let mp = sample(3, 2, 2, 31);
        let th = theta(&mp.rou, mp.n_sites());
        let m = monodromy(&mp, C::new(1.07, 0.12));
        // [A, Θ] = [D, Θ] = 0
        assert!(fro(&comm(&m.a, &th)) / fro(&m.a) < 1e-13);
        assert!(fro(&comm(&m.d, &th)) / fro(&m.d) < 1e-13);
        // Θ C = q C Θ and B Θ = q Θ B
        let lhs_c = th.dot(&m.c);
        let rhs_c = m.c.dot(&th).mapv(|z| z * mp.rou.q());
        assert!(rel_mat_err(&lhs_c, &rhs_c) < 1e-13);
        let lhs_b = m.b.dot(&th);
        let rhs_b = th.dot(&m.b).mapv(|z| z * mp.rou.q());
        assert!(rel_mat_err(&lhs_b, &rhs_b) < 1e-13);
    }

    #[test]
    fn commuting_transfer_family_and_b_family() {
        let mp = sample(3, 2, 2, 32);
        let l = C::new(1.21, 0.05);
        let m = C::new(0.77, -0.41);
        let ml = monodromy(&mp, l);
        let mm = monodromy(&mp, m);
        let tl = tau2(&mp, l);
        let tm = tau2(&mp, m);
        assert!(fro(&comm(&tl, &tm)) / (fro(&tl) * fro(&tm)) < 1e-13);
        assert!(fro(&comm(&ml.b, &mm.b)) / (fro(&ml.b) * fro(&mm.b)) < 1e-13);
        assert!(fro(&comm(&ml.a, &mm.a)) / (fro(&ml.a) * fro(&mm.a)) < 1e-13);
    }

    #[test]
    fn ab_exchange_and_shifted_product_identities() {
        let mp = sample(5, 2, 2, 33);
        let q = mp.rou.q();
        let qi = mp.rou.q_inv();
        let l = C::new(1.11, 0.19);
        let m = C::new(0.9, -0.27);
        let ml = monodromy(&mp, l);
        let mm = monodromy(&mp, m);
        // (λ/μ - μ/λ) A(λ)B(μ) = (λ/qμ - μq/λ) B(μ)A(λ) + (q - q⁻¹) B(λ)A(μ)
        let lhs = ml.a.dot(&mm.b).mapv(|z| z * (l / m - m / l));
        let rhs = mm.b.dot(&ml.a).mapv(|z| z * (l / (q * m) - m * q / l))
            + ml.b.dot(&mm.a).mapv(|z| z * (q - qi));
        assert!(rel_mat_err(&lhs, &rhs) < 1e-12);
        // B(λ)A(λ/q) = A(λ)B(λ/q)
        let msh = monodromy(&mp, l * qi);
        let lhs2 = ml.b.dot(&msh.a);
        let rhs2 = ml.a.dot(&msh.b);
        assert!(rel_mat_err(&lhs2, &rhs2) < 1e-12);
    }

    #[test]
    fn asymptotic_coefficients_carry_charges() {
        for (p, pp, n, seed) in [(3, 2, 2, 41), (3, 2, 3, 42)] {
            let mp = sample(p, pp, n, seed);
            let coeffs = tau_coeff_matrices(&mp).unwrap();
            let th = theta(&mp.rou, mp.n_sites());
            let thi = crate::weyl::theta_pow(&mp.rou, mp.n_sites(), -1);
            let top = coeffs.last().unwrap();
            let bottom = coeffs.first().unwrap();
            let expect_top = th.mapv(|z| z * mp.a_plus()) + thi.mapv(|z| z * mp.d_plus());
            let expect_bot = thi.mapv(|z| z * mp.a_minus()) + th.mapv(|z| z * mp.d_minus());
            assert!(rel_mat_err(top, &expect_top) < 1e-10);
            assert!(rel_mat_err(bottom, &expect_bot) < 1e-10);
        }
    }

    #[test]
    fn operator_averages_are_central_and_match_avg_monodromy() {
        let mp = sample(3, 2, 2, 51);
        let l = C::new(1.04, 0.23);
        let cap = l.powi(mp.rou.p as i32);
        let avg = avg_mono(&mp, cap);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let op = operator_average(&mp, (i, j), l);
            let (scalar, defect) = scalar_matrix_defect(&op);
            assert!(defect < 1e-11, "average of entry ({i},{j}) not central: {defect}");
            let err = rel_scalar_err(scalar, avg[i][j]);
            assert!(err < 1e-10, "average entry ({i},{j}) mismatch: {err}");
        }
    }

    #[test]
    fn average_of_quantum_determinant_is_det_of_average() {
        let mp = sample(3, 2, 2, 52);
        let l = C::new(0.96, -0.31);
        let cap = l.powi(mp.rou.p as i32);
        let mut prod = ONE;
        for k in 1..=mp.rou.p {
            prod *= qdet_scalar(&mp, mp.rou.q_pow(k as i64) * l);
        }
        let det_avg = avg_mono_det(&mp, cap);
        assert!(rel_scalar_err(prod, det_avg) < 1e-10);
    }

    #[test]
    fn gauged_amplitudes_satisfy_average_and_determinant_constraints() {
        for (p, pp, n, seed) in [(3, 2, 2, 61), (5, 2, 2, 62), (3, 2, 3, 63)] {
            let mp = sample(p, pp, n, seed);
            let rou = mp.rou;
            let l = C::new(1.09, 0.14);
            let cap = l.powi(rou.p as i32);
            let (om_a, om_d) = avg_eigen_branch(&mp, cap);
            let mut prod_a = ONE;
            let mut prod_d = ONE;
            for k in 1..=rou.p {
                let x = rou.q_pow(k as i64) * l;
                prod_a *= amp_a_bar(&mp, x);
                prod_d *= amp_d_bar(&mp, x);
            }
            assert!(rel_scalar_err(prod_a, om_a) < 1e-10, "ā average");
            assert!(
                rel_scalar_err(prod_d, om_d) < 1e-9,
                "d̄ average: {} vs {}",
                prod_d,
                om_d
            );
            // det_q M(λ) = ā(λ) d̄(λ/q)
            let lhs = qdet_scalar(&mp, l);
            let rhs = amp_a_bar(&mp, l) * amp_d_bar(&mp, l * rou.q_inv());
            assert!(rel_scalar_err(lhs, rhs) < 1e-10, "qdet = ā·d̄ shift");
        }
    }

    #[test]
    fn gauge_constant_is_orbit_invariant() {
        let mp = sample(3, 2, 2, 71);
        let l = C::new(0.88, 0.21);
        let g0 = gauge_g(&mp, l);
        for k in 1..mp.rou.p {
            let gk = gauge_g(&mp, mp.rou.q_pow(k as i64) * l);
            assert!(rel_scalar_err(g0, gk) < 1e-11);
        }
    }
}
