//! Brute-force dense reference ("oracle") for every analytic formula.
//!
//! The oracle diagonalizes the transfer matrix directly in the
//! computational basis, sector by sector of the global charge `Θ` (which
//! commutes with the whole transfer family and is diagonal), producing for
//! each eigenstate:
//!
//! * its charge `k` (`Θ`-eigenvalue `q^k`),
//! * left and right eigenvectors (biorthogonal pair),
//! * the Laurent coefficients of its transfer eigenvalue function
//!   `t(λ) = Σ_b c_b λ^{-N+2b}`, fitted from Rayleigh quotients and
//!   validated at held-out points.
//!
//! Everything downstream (separated spectrum, states, form factors) is
//! cross-checked against these dense objects.

use crate::algebra::{tau2, tau_exponents, tau_sample_points};
use crate::error::{Error, Result};
use crate::matrix::{eig_pairs, laurent_eval, laurent_fit, mat_inv, CMat, CVec, C, ZERO};
use crate::params::ModelParams;
use crate::tol::SIMPLICITY_FLOOR;
use crate::weyl::digits;

/// One dense eigenstate of the transfer family.
#[derive(Debug, Clone)]
pub struct OracleState {
    /// Charge sector: `Θ`-eigenvalue is `q^charge`.
    pub charge: usize,
    /// Laurent coefficients of `t(λ)` on `tau_exponents(N)`.
    pub t_coeffs: CVec,
    /// Right eigenvector (computational basis, dimension `p^N`).
    pub right: CVec,
    /// Left eigenvector, normalized so that `left · right = 1`.
    pub left: CVec,
}

/// Dense spectral data of a sampled chain.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub states: Vec<OracleState>,
    pub exps: Vec<i64>,
    /// Residual of the Laurent fit at held-out evaluation points
    /// (worst case over states) — validates the exponent set.
    pub fit_residual: f64,
    /// Smallest relative gap between same-sector eigenvalues at the
    /// reference point (simplicity witness).
    pub min_gap: f64,
}

/// Indices of the computational basis belonging to charge sector `k`
/// (digit sum ≡ k mod p).
pub fn sector_indices(p: usize, n_sites: usize, k: usize) -> Vec<usize> {
    let dim = p.pow(n_sites as u32);
    (0..dim)
        .filter(|&idx| digits(idx, p, n_sites).iter().sum::<usize>() % p == k)
        .collect()
}

fn submatrix(m: &CMat, ix: &[usize]) -> CMat {
    let n = ix.len();
    let mut out = CMat::zeros((n, n));
    for (r, &i) in ix.iter().enumerate() {
        for (c, &j) in ix.iter().enumerate() {
            out[(r, c)] = m[(i, j)];
        }
    }
    out
}

fn embed(v: &CVec, ix: &[usize], dim: usize) -> CVec {
    let mut out = CVec::from(vec![ZERO; dim]);
    for (r, &i) in ix.iter().enumerate() {
        out[i] = v[r];
    }
    out
}

impl Oracle {
    pub fn build(mp: &ModelParams) -> Result<Oracle> {
        let p = mp.rou.p;
        let n_sites = mp.n_sites();
        let dim = mp.dim();
        let exps = tau_exponents(n_sites);
        let n_fit = exps.len();
        // Evaluate τ at fit points plus two held-out validation points.
        let pts = tau_sample_points(n_fit + 2);
        let taus: Vec<CMat> = pts.iter().map(|&x| tau2(mp, x)).collect();

        let mut states = Vec::with_capacity(dim);
        let mut fit_residual: f64 = 0.0;
        let mut min_gap = f64::INFINITY;

        for k in 0..p {
            let ix = sector_indices(p, n_sites, k);
            let t0 = submatrix(&taus[0], &ix);
            let (vals, vecs) = eig_pairs(&t0)?;
            // simplicity witness within the sector
            let scale = vals.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
            for i in 0..vals.len() {
                for j in (i + 1)..vals.len() {
                    min_gap = min_gap.min((vals[i] - vals[j]).norm() / scale);
                }
            }
            let left_all = mat_inv(&vecs)?;
            for s in 0..vals.len() {
                let right = vecs.column(s).to_owned();
                let left = left_all.row(s).to_owned();
                // Rayleigh samples of t(λ_j) for this eigenvector.
                let mut samples = Vec::with_capacity(pts.len());
                for tau in &taus {
                    let sub = submatrix(tau, &ix);
                    let num: C = left.dot(&sub.dot(&right));
                    let den: C = left.dot(&right);
                    samples.push(num / den);
                }
                let coeffs = laurent_fit(&pts[..n_fit], &samples[..n_fit], &exps)?;
                // validate at held-out points
                for j in n_fit..pts.len() {
                    let pred = laurent_eval(&coeffs, &exps, pts[j]);
                    let err = (pred - samples[j]).norm() / samples[j].norm().max(1e-300);
                    fit_residual = fit_residual.max(err);
                }
                states.push(OracleState {
                    charge: k,
                    t_coeffs: coeffs,
                    right: embed(&right, &ix, dim),
                    left: embed(&left, &ix, dim),
                });
            }
        }
        if min_gap < SIMPLICITY_FLOOR {
            return Err(Error::Regularity(format!(
                "transfer spectrum not simple enough: min sector gap {min_gap:.3e}"
            )));
        }
        Ok(Oracle {
            states,
            exps,
            fit_residual,
            min_gap,
        })
    }

    /// Evaluate the fitted eigenvalue function of state `i` at `λ`.
    pub fn eval_t(&self, i: usize, lambda: C) -> C {
        laurent_eval(&self.states[i].t_coeffs, &self.exps, lambda)
    }

    /// Indices of the states in charge sector `k`.
    pub fn sector_states(&self, k: usize) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.charge == k)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Distance between the full sorted spectra of two chains at a reference
/// point: used as a sensitivity witness (a perturbed chain must move).
pub fn spectrum_distance(mp1: &ModelParams, mp2: &ModelParams, lambda: C) -> Result<f64> {
    let (v1, _) = eig_pairs(&tau2(mp1, lambda))?;
    let (v2, _) = eig_pairs(&tau2(mp2, lambda))?;
    let mut a: Vec<C> = v1.to_vec();
    let mut b: Vec<C> = v2.to_vec();
    let key = |z: &C| (z.re, z.im);
    a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::fro_vec;
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
    fn oracle_states_are_eigenstates_with_fitted_eigenvalue() {
        for (p, pp, n, seed) in [(3usize, 2usize, 2usize, 101u64), (3, 2, 3, 102), (5, 2, 2, 103)] {
            let mp = sample(p, pp, n, seed);
            let or = Oracle::build(&mp).unwrap();
            assert_eq!(or.states.len(), mp.dim());
            assert!(or.fit_residual < 1e-9, "fit residual {}", or.fit_residual);
            // check a few states against a fresh λ
            let l = C::new(1.18, -0.22);
            let tau = tau2(&mp, l);
            for i in (0..or.states.len()).step_by(or.states.len() / 5 + 1) {
                let st = &or.states[i];
                let t = or.eval_t(i, l);
                let resid = &tau.dot(&st.right) - &st.right.mapv(|z| z * t);
                let rel = fro_vec(&resid) / (fro_vec(&st.right) * t.norm().max(1.0));
                assert!(rel < 1e-9, "eigen residual {rel} at state {i}");
                // left eigenvector too
                let lres = &st.left.dot(&tau) - &st.left.mapv(|z| z * t);
                let lrel = fro_vec(&lres) / (fro_vec(&st.left) * t.norm().max(1.0));
                assert!(lrel < 1e-9, "left eigen residual {lrel} at state {i}");
            }
        }
    }

    #[test]
    fn charges_match_theta_action() {
        let mp = sample(3, 2, 2, 111);
        let or = Oracle::build(&mp).unwrap();
        let th = theta(&mp.rou, mp.n_sites());
        for st in or.states.iter().step_by(2) {
            let tv = th.dot(&st.right);
            let expect = st.right.mapv(|z| z * mp.rou.q_pow(st.charge as i64));
            let rel = fro_vec(&(&tv - &expect)) / fro_vec(&st.right);
            assert!(rel < 1e-12);
        }
        // sector sizes: p^{N-1} states per sector
        for k in 0..mp.rou.p {
            assert_eq!(or.sector_states(k).len(), mp.dim() / mp.rou.p);
        }
    }

    #[test]
    fn perturbation_moves_the_spectrum() {
        let mp = sample(3, 2, 2, 121);
        let mut mp2 = mp.clone();
        mp2.sites[0].alpha *= C::new(1.01, 0.0);
        // keep constraints exact
        mp2.sites[0].c = mp2.sites[0].alpha * mp2.sites[0].gamma / mp2.sites[0].a;
        let d = spectrum_distance(&mp, &mp2, C::new(1.11, 0.08)).unwrap();
        assert!(d > crate::tol::PERTURBATION_FLOOR, "distance {d}");
    }
}
