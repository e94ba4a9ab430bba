//! Representation parameters of the cyclic chain.
//!
//! Each site `n` carries eight complex parameters
//! `(α, β, γ, δ, a, b, c, d)` subject to the two constraints
//! `α γ = a c` and `β δ = b d`, so six are free.  The derived inhomogeneities
//!
//! * `μ_+ = i q^{1/2} (a β / (α b))^{1/2}`,
//! * `μ_- = i q^{1/2} (c β / (α d))^{1/2}`,
//!
//! are the zeros of the two factors of the quantum determinant at that site.
//!
//! Generic parameters are sampled with moduli in `[0.7, 1.3]` and phases in
//! `(-π/16, π/16)` so that every principal branch taken downstream (square
//! and fourth roots in prefactors and reconstruction formulas) is coherent
//! across factors without per-sample branch hunting; the two constraints are
//! then imposed exactly by solving for `c` and `d`.

use crate::error::{Error, Result};
use crate::matrix::{C, I, ONE};
use crate::phase::{cqrt4, csqrt, RootOfUnity};
use rand::Rng;

/// Parameters of one lattice site.
#[derive(Debug, Clone, Copy)]
pub struct SiteParams {
    pub alpha: C,
    pub beta: C,
    pub gamma: C,
    pub delta: C,
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl SiteParams {
    /// Build from the six free parameters, imposing the constraints exactly.
    pub fn from_free(alpha: C, beta: C, gamma: C, delta: C, a: C, b: C) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
            a,
            b,
            c: alpha * gamma / a,
            d: beta * delta / b,
        }
    }

    /// Residual of the two site constraints (should be exactly 0 for
    /// `from_free`-built sites; curve-parametrized sites satisfy them
    /// analytically and are checked at build time).
    pub fn constraint_residual(&self) -> f64 {
        let r1 = self.alpha * self.gamma - self.a * self.c;
        let r2 = self.beta * self.delta - self.b * self.d;
        let s1 = (self.alpha * self.gamma).norm().max(1e-200);
        let s2 = (self.beta * self.delta).norm().max(1e-200);
        (r1.norm() / s1).max(r2.norm() / s2)
    }

    /// First quantum-determinant zero `μ_+ = i q^{1/2} (aβ/(αb))^{1/2}`.
    pub fn mu_plus(&self, rou: &RootOfUnity) -> C {
        I * rou.q_half_pow(1) * csqrt(self.a * self.beta / (self.alpha * self.b))
    }

    /// Second quantum-determinant zero `μ_- = i q^{1/2} (cβ/(αd))^{1/2}`.
    pub fn mu_minus(&self, rou: &RootOfUnity) -> C {
        I * rou.q_half_pow(1) * csqrt(self.c * self.beta / (self.alpha * self.d))
    }

    /// Quantum-determinant normalization `k_n = (a b c d)^{1/2}`.
    pub fn k_det(&self) -> C {
        csqrt(self.a * self.b * self.c * self.d)
    }

    /// Rank-one factorization scale `f_n = (-αβ/(ab))^{1/4}`.
    pub fn f_factor(&self) -> C {
        cqrt4(-self.alpha * self.beta / (self.a * self.b))
    }

    /// Rank-one factorization scale `g_n = (-αβ/(cd))^{1/4}`.
    pub fn g_factor(&self) -> C {
        cqrt4(-self.alpha * self.beta / (self.c * self.d))
    }
}

/// Full chain: root-of-unity data plus per-site parameters.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub rou: RootOfUnity,
    pub sites: Vec<SiteParams>,
}

impl ModelParams {
    pub fn new(rou: RootOfUnity, sites: Vec<SiteParams>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidParams("need at least one site".into()));
        }
        Ok(Self { rou, sites })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Hilbert-space dimension `p^N`.
    pub fn dim(&self) -> usize {
        self.rou.p.pow(self.n_sites() as u32)
    }

    /// Leading asymptotic charge `a_+ = ∏ α_n`.
    pub fn a_plus(&self) -> C {
        self.sites.iter().map(|s| s.alpha).product()
    }

    /// Subleading asymptotic charge `a_- = (-1)^N ∏ β_n`.
    pub fn a_minus(&self) -> C {
        let sign = if self.n_sites() % 2 == 0 { ONE } else { -ONE };
        sign * self.sites.iter().map(|s| s.beta).product::<C>()
    }

    /// Leading asymptotic charge `d_+ = (-1)^N ∏ δ_n`.
    pub fn d_plus(&self) -> C {
        let sign = if self.n_sites() % 2 == 0 { ONE } else { -ONE };
        sign * self.sites.iter().map(|s| s.delta).product::<C>()
    }

    /// Subleading asymptotic charge `d_- = ∏ γ_n`.
    pub fn d_minus(&self) -> C {
        self.sites.iter().map(|s| s.gamma).product()
    }

    /// Sample a generic chain with branch-coherent parameters (see module
    /// docs).  Deterministic given the RNG state.
    pub fn sample_generic<R: Rng>(rou: RootOfUnity, n_sites: usize, rng: &mut R) -> Self {
        let mut sites = Vec::with_capacity(n_sites);
        for _ in 0..n_sites {
            let mut draw = || -> C {
                let modulus = 0.7 + 0.6 * rng.gen::<f64>();
                let phase = (rng.gen::<f64>() - 0.5) * std::f64::consts::PI / 8.0;
                C::from_polar(modulus, phase)
            };
            sites.push(SiteParams::from_free(
                draw(),
                draw(),
                draw(),
                draw(),
                draw(),
                draw(),
            ));
        }
        Self { rou, sites }
    }
}
