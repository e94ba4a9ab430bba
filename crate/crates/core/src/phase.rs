//! Exact arithmetic with the primitive root of unity of the model.
//!
//! The deformation parameter is `q = exp(-i π p'/p)` with `p = 2l+1` odd and
//! `p'` even, coprime with `p`.  Then `q^p = 1` exactly and `q^{1/2}` is
//! itself an integer power of `ζ = exp(-i π/p)`, so *every* phase appearing
//! in the model (`q^{k/2}`, `k ∈ ℤ`) can be evaluated after exact integer
//! reduction of the exponent modulo `2p`.  This keeps collapses like
//! `q^p - 1 = 0` or `[p]_q = 0` exact in floating point.

use crate::error::{Error, Result};
use num_complex::Complex64 as C;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The root-of-unity data of a cyclic representation: `q = exp(-iπ p'/p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    /// Odd integer `p ≥ 3`; the local Weyl algebra has dimension `p`.
    pub p: usize,
    /// Even integer coprime with `p`.
    pub p_prime: usize,
}

impl RootOfUnity {
    pub fn new(p: usize, p_prime: usize) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidParams(format!("p must be odd and ≥ 3, got {p}")));
        }
        if p_prime == 0 || p_prime % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "p' must be even and nonzero, got {p_prime}"
            )));
        }
        if gcd(p, p_prime) != 1 {
            return Err(Error::InvalidParams(format!(
                "p = {p} and p' = {p_prime} must be coprime"
            )));
        }
        Ok(Self { p, p_prime })
    }

    /// `ζ^k` with `ζ = exp(-iπ/p)`, exponent reduced mod `2p` exactly.
    pub fn zeta_pow(&self, k: i64) -> C {
        let two_p = 2 * self.p as i64;
        let r = k.rem_euclid(two_p);
        if r == 0 {
            return C::new(1.0, 0.0);
        }
        if r == self.p as i64 {
            return C::new(-1.0, 0.0);
        }
        let angle = -std::f64::consts::PI * (r as f64) / (self.p as f64);
        C::from_polar(1.0, angle)
    }

    /// `q^k` for integer `k`.
    pub fn q_pow(&self, k: i64) -> C {
        self.zeta_pow(k * self.p_prime as i64)
    }

    /// `q^{k/2}` for integer `k` (exact because `p'` is even).
    pub fn q_half_pow(&self, k: i64) -> C {
        self.zeta_pow(k * (self.p_prime as i64 / 2))
    }

    pub fn q(&self) -> C {
        self.q_pow(1)
    }

    pub fn q_inv(&self) -> C {
        self.q_pow(-1)
    }

    /// Symmetric q-number `[a] = (q^a - q^{-a})/(q - q^{-1})`.
    /// Exactly zero when `a ≡ 0 (mod p)`.
    pub fn q_num(&self, a: i64) -> C {
        if a.rem_euclid(self.p as i64) == 0 {
            return C::new(0.0, 0.0);
        }
        (self.q_pow(a) - self.q_pow(-a)) / (self.q() - self.q_inv())
    }

    /// Symmetric q-binomial `[n choose k] = ∏_{s=1..k} [n-k+s]/[s]`.
    ///
    /// Safe for `n ≤ p` (the only vanishing factor is `[p]` in the numerator,
    /// giving an exact zero; no `0/0` occurs).
    pub fn q_binomial(&self, n: i64, k: i64) -> C {
        assert!((0..=n).contains(&k), "q_binomial range");
        if k == 0 || k == n {
            // exact boundary (avoids the 0/0 of the product form at n = p)
            return C::new(1.0, 0.0);
        }
        let mut acc = C::new(1.0, 0.0);
        for s in 1..=k {
            acc = acc * self.q_num(n - k + s) / self.q_num(s);
        }
        acc
    }

    /// Symmetric q-multinomial `[i+j+k; i,j,k]`.
    pub fn q_multinomial3(&self, i: i64, j: i64, k: i64) -> C {
        let m = i + j + k;
        self.q_binomial(m, i) * self.q_binomial(m - i, j)
    }

    /// Principal `n`-th root: `|z|^{1/n} exp(i arg(z)/n)` with `arg ∈ (-π, π]`.
    pub fn principal_root(z: C, n: u32) -> C {
        if z == C::new(0.0, 0.0) {
            return z;
        }
        C::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
    }
}

/// Principal square root (wrapper for readability at call sites).
pub fn csqrt(z: C) -> C {
    z.sqrt()
}

/// Principal fourth root.
pub fn cqrt4(z: C) -> C {
    RootOfUnity::principal_root(z, 4)
}
