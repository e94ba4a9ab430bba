//! Discrete-curve Boltzmann weights and the cyclic transfer matrices they
//! generate.
//!
//! A point of the curve is a triple `(x, y, s)` with
//!
//! * `x^p + y^p = k (1 + x^p y^p)`,
//! * `k x^p = 1 - k' s^{-p}`,
//! * `k y^p = 1 - k' s^{p}`,
//!
//! where the moduli satisfy `k² + k'² = 1`.  Only the `p`-th powers of the
//! coordinates are constrained, so multiplying `x`, `y` or `s` by any `p`-th
//! root of unity stays on the curve; since `q²` generates all of them, the
//! natural discrete moves are `x → q^{±2} x` and `y → q^{±2} y`.
//!
//! Two one-parameter weight tables `W_ab(n)`, `W̄_ab(n)` (n mod p) are
//! attached to an ordered pair of curve points.  Products of their entries,
//! indexed by differences of base-`p` digit strings, form the kernels of a
//! commuting family of transfer matrices acting on the chain.  A
//! parametrization dictionary maps a curve point to the eight site parameters
//! of the six-vertex chain of [`crate::algebra`]; under it the kernel
//! transfer matrix joins the six-vertex commuting family and satisfies a
//! second-order finite-difference equation in the spectral parameter whose
//! coefficients are the gauged amplitudes `ā`, `d̄`.
//!
//! Everything in this module works on the self-dual subvariety where the two
//! curve points attached to each lattice site coincide (one point per site);
//! the commutation and difference-equation statements are specific to it.

use crate::algebra;
use crate::error::{Error, Result};
use crate::matrix::{self, C, CMat, CVec, ONE};
use crate::params::{ModelParams, SiteParams};
use crate::phase::{csqrt, RootOfUnity};
use crate::weyl;

/// Elliptic-like modulus pair `k² + k'² = 1`.
#[derive(Debug, Clone, Copy)]
pub struct CurveModulus {
    pub k: C,
    pub k_prime: C,
}

impl CurveModulus {
    /// Build from `k`, taking the principal square root for `k'`.
    pub fn new(k: C) -> Self {
        Self {
            k,
            k_prime: csqrt(ONE - k * k),
        }
    }

    /// Residual of `k² + k'² = 1`.
    pub fn residual(&self) -> f64 {
        (self.k * self.k + self.k_prime * self.k_prime - ONE).norm()
    }
}

/// A point `(x, y, s)` of the discrete curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub x: C,
    pub y: C,
    pub s: C,
}

impl CurvePoint {
    /// The product `t = x y`; the square of the spectral-parameter map is
    /// `λ² = c₀² / t`.
    pub fn t(&self) -> C {
        self.x * self.y
    }

    /// Maximal relative residual of the three defining equations.
    pub fn residual(&self, m: &CurveModulus, rou: &RootOfUnity) -> f64 {
        let p = rou.p as i32;
        let xp = self.x.powi(p);
        let yp = self.y.powi(p);
        let sp = self.s.powi(p);
        let e1 = xp + yp - m.k * (ONE + xp * yp);
        let e2 = m.k * xp - (ONE - m.k_prime / sp);
        let e3 = m.k * yp - (ONE - m.k_prime * sp);
        let scale = 1.0 + xp.norm() + yp.norm() + sp.norm() + (ONE / sp).norm();
        e1.norm().max(e2.norm()).max(e3.norm()) / scale
    }

    /// Point over a given `s`, with the `p`-th roots for `x` and `y` taken as
    /// `q^{2 jx}`, `q^{2 jy}` times the principal branch.
    pub fn from_s(m: &CurveModulus, rou: &RootOfUnity, s: C, jx: i64, jy: i64) -> Self {
        let p = rou.p as u32;
        let sp = s.powi(rou.p as i32);
        let x = rou.q_pow(2 * jx) * RootOfUnity::principal_root((ONE - m.k_prime / sp) / m.k, p);
        let y = rou.q_pow(2 * jy) * RootOfUnity::principal_root((ONE - m.k_prime * sp) / m.k, p);
        Self { x, y, s }
    }

    /// Multiply `x` by `q^{2·steps}` (stays on the curve).
    pub fn shift_x(&self, rou: &RootOfUnity, steps: i64) -> Self {
        Self {
            x: rou.q_pow(2 * steps) * self.x,
            ..*self
        }
    }

    /// Multiply `y` by `q^{2·steps}` (stays on the curve).
    pub fn shift_y(&self, rou: &RootOfUnity, steps: i64) -> Self {
        Self {
            y: rou.q_pow(2 * steps) * self.y,
            ..*self
        }
    }
}

/// Point of the self-conjugate slice: real `k ∈ (0,1)`, unimodular
/// `s = e^{iφ}` and `y = q x̄`.  In projective site coordinates
/// `(a, b, c, d) = μ(xs, y, 1, s)` with `μ = e^{-iφ/2}` this is exactly the
/// slice `b = q ā`, `c = d̄`, on which the kernel transfer matrices admit an
/// adjoint within the same family.
pub fn q_s_adjoint_point(rou: &RootOfUnity, k: f64, phi: f64) -> (CurveModulus, CurvePoint) {
    let m = CurveModulus::new(C::new(k, 0.0));
    let s = C::from_polar(1.0, phi);
    let sp = s.powi(rou.p as i32);
    let x = RootOfUnity::principal_root((ONE - m.k_prime / sp) / m.k, rou.p as u32);
    let y = rou.q() * x.conj();
    (m, CurvePoint { x, y, s })
}

/// The distinguished point with `x = y` real and `x^p = y^p = (1+k')/k`
/// (reached at `s^p = -1`); there the chain Hamiltonian angles degenerate to
/// `θ = θ̄ = π/2`.
pub fn superintegrable_point(rou: &RootOfUnity, k: f64) -> (CurveModulus, CurvePoint) {
    let m = CurveModulus::new(C::new(k, 0.0));
    let s = C::from_polar(1.0, std::f64::consts::PI / rou.p as f64);
    let x = RootOfUnity::principal_root((ONE + m.k_prime) / m.k, rou.p as u32);
    (m, CurvePoint { x, y: x, s })
}

/// First weight table `W_ab(n)`, `n = 0..p-1`, normalized to `W_ab(0) = 1`
/// and built multiplicatively from the step ratio
/// `W(n)/W(n-1) = (s_a/s_b) (y_b - q^{-2n} x_a) / (y_a - q^{-2n} x_b)`.
/// `W_aa ≡ 1` identically.
pub fn w_table(rou: &RootOfUnity, a: &CurvePoint, b: &CurvePoint) -> Vec<C> {
    let p = rou.p;
    let mut t = vec![ONE; p];
    for n in 1..p {
        let qn = rou.q_pow(-2 * n as i64);
        let ratio = (a.s / b.s) * (b.y - qn * a.x) / (a.y - qn * b.x);
        t[n] = t[n - 1] * ratio;
    }
    t
}

/// Second weight table `W̄_ab(n)` with step ratio
/// `(s_a s_b) (q^{-2} x_a - q^{-2n} x_b) / (y_b - q^{-2n} y_a)`.
/// For coinciding points it degenerates to `W̄_aa(n) = δ_{n,0}`.
pub fn wbar_table(rou: &RootOfUnity, a: &CurvePoint, b: &CurvePoint) -> Vec<C> {
    let p = rou.p;
    let q2 = rou.q_pow(-2);
    let mut t = vec![ONE; p];
    for n in 1..p {
        let qn = rou.q_pow(-2 * n as i64);
        let ratio = (a.s * b.s) * (q2 * a.x - qn * b.x) / (b.y - qn * a.y);
        t[n] = t[n - 1] * ratio;
    }
    t
}

/// Residual of the cyclic closure `∏_{n=1}^{p} ratio(n) = 1` for both weight
/// tables on a pair of distinct points (the closure degenerates to `0·∞` for
/// coinciding points and is not tested there).
pub fn table_cyclicity_residual(rou: &RootOfUnity, a: &CurvePoint, b: &CurvePoint) -> f64 {
    let p = rou.p;
    let q2 = rou.q_pow(-2);
    let mut w = ONE;
    let mut wb = ONE;
    for n in 1..=p {
        let qn = rou.q_pow(-2 * n as i64);
        w *= (a.s / b.s) * (b.y - qn * a.x) / (a.y - qn * b.x);
        wb *= (a.s * b.s) * (q2 * a.x - qn * b.x) / (b.y - qn * a.y);
    }
    (w - ONE).norm().max((wb - ONE).norm())
}

/// Kernel transfer matrix in the index basis.  Row index `m`, column index
/// `m'` are base-`p` digit strings over the sites (digit 0 = site 1, matching
/// [`weyl::digits`]); with `d(i,j) = (m_i - m'_j) mod p`,
///
/// * plain:  `∏_n W_n(d(n,n)) · W̄_n(d(n,n+1))`,
/// * hatted: `∏_n W_n(d(n+1,n)) · W̄_n(d(n,n))`,
///
/// with site `n+1` understood cyclically and both tables taken between the
/// site point and the argument point.
pub fn chp_transfer_z(
    rou: &RootOfUnity,
    sites: &[CurvePoint],
    arg: &CurvePoint,
    hat: bool,
) -> CMat {
    let n_sites = sites.len();
    let p = rou.p;
    let dim = p.pow(n_sites as u32);
    let w: Vec<Vec<C>> = sites.iter().map(|pt| w_table(rou, pt, arg)).collect();
    let wb: Vec<Vec<C>> = sites.iter().map(|pt| wbar_table(rou, pt, arg)).collect();
    let mut t = matrix::zeros(dim, dim);
    for row in 0..dim {
        let md = weyl::digits(row, p, n_sites);
        for col in 0..dim {
            let mpd = weyl::digits(col, p, n_sites);
            let mut acc = ONE;
            for site in 0..n_sites {
                let nxt = (site + 1) % n_sites;
                if hat {
                    acc *= w[site][(md[nxt] + p - mpd[site]) % p]
                        * wb[site][(md[site] + p - mpd[site]) % p];
                } else {
                    acc *= w[site][(md[site] + p - mpd[site]) % p]
                        * wb[site][(md[site] + p - mpd[nxt]) % p];
                }
            }
            t[[row, col]] = acc;
        }
    }
    t
}

/// Two-site swap kernel in the index basis.  With both tables taken between
/// the second and the first site point,
/// `S[(m₁,m₂),(m'₁,m'₂)] = W̄₂₁(m₁-m'₂) W₂₁(m'₁-m'₂) W̄₂₁(m₂-m'₁) W₂₁(m₂-m₁)`.
pub fn s_operator_z(rou: &RootOfUnity, pt1: &CurvePoint, pt2: &CurvePoint) -> CMat {
    let p = rou.p;
    let w21 = w_table(rou, pt2, pt1);
    let wb21 = wbar_table(rou, pt2, pt1);
    let dim = p * p;
    let mut s = matrix::zeros(dim, dim);
    for row in 0..dim {
        let md = weyl::digits(row, p, 2);
        for col in 0..dim {
            let mpd = weyl::digits(col, p, 2);
            s[[row, col]] = wb21[(md[0] + p - mpd[1]) % p]
                * w21[(mpd[0] + p - mpd[1]) % p]
                * wb21[(md[1] + p - mpd[0]) % p]
                * w21[(md[1] + p - md[0]) % p];
        }
    }
    s
}

/// Pairing exponent between the kernel index and the clock label: the change
/// of basis from the kernel index basis to the computational (clock) basis
/// is `G = ⊗ G₁` with `G₁[k, m] = q^{E·k·m}/√p`.  The value is fixed by
/// requiring the kernel transfer matrix to commute with the six-vertex
/// family under the parametrization dictionary; the commutator scan over all
/// unit multipliers at both `p = 3` and `p = 5` singles out `E = -2`.
const KERNEL_FOURIER_EXP: i64 = -2;

/// Whether the kernel is the transpose of the operator in the index basis
/// (row ↔ column swap).  Fixed by the same commutator scan as
/// [`KERNEL_FOURIER_EXP`]: no transposition.
const KERNEL_TRANSPOSE: bool = false;

fn z_to_comp_with(rou: &RootOfUnity, n_sites: usize, exp: i64) -> CMat {
    let p = rou.p;
    let scale = 1.0 / (p as f64).sqrt();
    let mut g1 = matrix::zeros(p, p);
    for k in 0..p {
        for m in 0..p {
            g1[[k, m]] = rou.q_pow(exp * (k as i64) * (m as i64)) * scale;
        }
    }
    let factors: Vec<&CMat> = (0..n_sites).map(|_| &g1).collect();
    matrix::kron_all(&factors)
}

/// Change of basis from the kernel index basis to the computational basis.
pub fn z_to_comp(rou: &RootOfUnity, n_sites: usize) -> CMat {
    z_to_comp_with(rou, n_sites, KERNEL_FOURIER_EXP)
}

fn conjugate_to_comp(rou: &RootOfUnity, n_sites: usize, kernel: &CMat) -> Result<CMat> {
    let g = z_to_comp(rou, n_sites);
    let gi = matrix::mat_inv(&g)?;
    let k = if KERNEL_TRANSPOSE {
        kernel.t().to_owned()
    } else {
        kernel.clone()
    };
    Ok(g.dot(&k).dot(&gi))
}

/// Kernel transfer matrix expressed in the computational basis.
pub fn chp_transfer(
    rou: &RootOfUnity,
    sites: &[CurvePoint],
    arg: &CurvePoint,
    hat: bool,
) -> Result<CMat> {
    conjugate_to_comp(rou, sites.len(), &chp_transfer_z(rou, sites, arg, hat))
}

/// Two-site swap operator expressed in the computational basis.
pub fn s_operator(rou: &RootOfUnity, pt1: &CurvePoint, pt2: &CurvePoint) -> Result<CMat> {
    conjugate_to_comp(rou, 2, &s_operator_z(rou, pt1, pt2))
}

/// Site parameters generated by a curve point (self-dual subvariety), with a
/// free overall constant `c₀`.  In the projective coordinates
/// `(a,b,c,d) = (xs, y, 1, s)`:
///
/// `α = -b²/c₀`, `β = -c₀ d²`, `γ = c₀ c²`, `δ = a² q^{-2}/c₀`,
/// `𝖺 = -bc q^{-1/2}`, `𝖻 = -ad q^{-3/2}`, `𝖼 = bc q^{1/2}`, `𝖽 = ad q^{-1/2}`;
///
/// the two site constraints `αγ = 𝖺𝖼`, `βδ = 𝖻𝖽` hold identically.
pub fn site_params_from_curve(rou: &RootOfUnity, pt: &CurvePoint, c0: C) -> SiteParams {
    let (x, y, s) = (pt.x, pt.y, pt.s);
    let ad = x * s * s;
    SiteParams {
        alpha: -y * y / c0,
        beta: -c0 * s * s,
        gamma: c0,
        delta: x * x * s * s * rou.q_pow(-2) / c0,
        a: -y * rou.q_half_pow(-1),
        b: -ad * rou.q_half_pow(-3),
        c: y * rou.q_half_pow(1),
        d: ad * rou.q_half_pow(-1),
    }
}

/// Whole chain from one curve point per site.
pub fn model_from_curve(rou: &RootOfUnity, pts: &[CurvePoint], c0: C) -> Result<ModelParams> {
    let sites = pts
        .iter()
        .map(|pt| site_params_from_curve(rou, pt, c0))
        .collect();
    ModelParams::new(rou.clone(), sites)
}

/// Spectral parameter attached to a curve point: `λ = c₀ / √(x y)`
/// (principal branch).  Both quantum-determinant zeros of the generated site
/// sit at `±i q λ`.
pub fn lambda_of(pt: &CurvePoint, c0: C) -> C {
    c0 / csqrt(pt.x * pt.y)
}

/// Curve move realizing the spectral shift `λ → q^{-steps} λ` on kernel
/// arguments, i.e. `t → q^{2·steps} t`.  The difference-equation scan singles
/// out the move acting on `x`; the move acting on `y` with the same `t`-shift
/// produces a different point whose kernel does not close the equation.
pub fn tq_shift(rou: &RootOfUnity, pt: &CurvePoint, steps: i64) -> CurvePoint {
    pt.shift_x(rou, steps)
}

/// Least-squares solve of `target = s_a·term_a + s_d·term_d` over all matrix
/// entries; returns `(s_a, s_d, relative residual)`.
pub fn two_term_fit(target: &CMat, term_a: &CMat, term_d: &CMat) -> Result<(C, C, f64)> {
    let ip = |u: &CMat, v: &CMat| -> C {
        u.iter()
            .zip(v.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C>()
    };
    let g = ndarray::array![
        [ip(term_a, term_a), ip(term_a, term_d)],
        [ip(term_d, term_a), ip(term_d, term_d)]
    ];
    let rhs: CVec = ndarray::array![ip(term_a, target), ip(term_d, target)];
    let sol = matrix::solve_lin(&g, &rhs)?;
    let mut res = 0.0f64;
    let mut scale = 0.0f64;
    for ((t, a), d) in target.iter().zip(term_a.iter()).zip(term_d.iter()) {
        res += (t - sol[0] * a - sol[1] * d).norm_sqr();
        scale += t.norm_sqr();
    }
    Ok((sol[0], sol[1], (res / scale.max(1e-300)).sqrt()))
}

/// One step of the finite-difference equation at argument point `pt` with
/// spectral value `λ`: solves
/// `τ₂(λ)·T(pt) = s_a·T(pt_a) + s_d·T(pt_d)` where `pt_a = tq_shift(pt, +1)`
/// carries `λ/q` and `pt_d = tq_shift(pt, -1)` carries `qλ`.  Returns
/// `(s_a, s_d, relative residual)`.
pub fn tq_step(
    mp: &ModelParams,
    sites: &[CurvePoint],
    pt: &CurvePoint,
    lambda: C,
) -> Result<(C, C, f64)> {
    let rou = &mp.rou;
    let t0 = chp_transfer(rou, sites, pt, false)?;
    let ta = chp_transfer(rou, sites, &tq_shift(rou, pt, 1), false)?;
    let td = chp_transfer(rou, sites, &tq_shift(rou, pt, -1), false)?;
    let lhs = algebra::tau2(mp, lambda).dot(&t0);
    two_term_fit(&lhs, &ta, &td)
}

/// Branch of the angle `θ` with `e^{i(2θ-π)/p} = x/y`: the principal
/// determination `θ = (π - i p Ln(x/y))/2`.  Fixed by the Hamiltonian
/// commutator scan (the alternative determinations `θ + πp` and `-θ (+ πp)`
/// do not commute with the kernel family).
pub fn vgr_theta(rou: &RootOfUnity, pt: &CurvePoint) -> C {
    let w = (pt.x / pt.y).ln();
    (C::new(std::f64::consts::PI, 0.0) - C::new(0.0, rou.p as f64) * w) / 2.0
}

fn f_coeff(p: usize, r: usize, theta: C) -> C {
    let arg = C::new(0.0, (2 * r as i64 - p as i64) as f64 / p as f64) * theta;
    arg.exp() / C::new((std::f64::consts::PI * r as f64 / p as f64).sin(), 0.0)
}

/// Nearest-neighbour chain Hamiltonian `H = H₀ + k H₁` generated by the
/// homogeneous kernel family at site point `pt`:
///
/// `H₀ = Σ_n Σ_{r=1}^{p-1} f_r(θ) u_n^r u_{n+1}^{-r}`,
/// `H₁ = Σ_n Σ_{r=1}^{p-1} f_r(θ̄) v_n^r`,
///
/// with `f_r(θ) = e^{i(2r-p)θ/p} / sin(πr/p)`, `cos θ̄ = cos θ / k`, and `θ`
/// from [`vgr_theta`].  The `θ̄` branch is the principal `acos` (scan-fixed).
/// At the superintegrable point both angles equal `π/2`.
pub fn vgr_hamiltonian(
    rou: &RootOfUnity,
    m: &CurveModulus,
    pt: &CurvePoint,
    n_sites: usize,
) -> CMat {
    let theta = vgr_theta(rou, pt);
    let theta_bar = (theta.cos() / m.k).acos();
    vgr_hamiltonian_with(rou, m, n_sites, theta, theta_bar)
}

fn vgr_hamiltonian_with(
    rou: &RootOfUnity,
    m: &CurveModulus,
    n_sites: usize,
    theta: C,
    theta_bar: C,
) -> CMat {
    let p = rou.p;
    let dim = p.pow(n_sites as u32);
    let mut h = matrix::zeros(dim, dim);
    for n in 1..=n_sites {
        let nxt = n % n_sites + 1;
        for r in 1..p {
            let hop = weyl::site_op(&weyl::u_pow(p, r as i64), n, n_sites)
                .dot(&weyl::site_op(&weyl::u_pow(p, -(r as i64)), nxt, n_sites));
            let field = weyl::site_op(&weyl::v_pow(rou, r as i64), n, n_sites);
            h = h + hop * f_coeff(p, r, theta) + field * (m.k * f_coeff(p, r, theta_bar));
        }
    }
    h
}

/// Relative size of a commutator, `‖XY - YX‖ / ‖XY‖`.
pub fn comm_residual(x: &CMat, y: &CMat) -> f64 {
    let xy = x.dot(y);
    matrix::fro(&(&xy - &y.dot(x))) / matrix::fro(&xy).max(1e-300)
}

/// Check that a square matrix is invertible and return its inverse together
/// with the smallest singular value (conditioning witness).
pub fn checked_inverse(m: &CMat) -> Result<(CMat, f64)> {
    let (_, sv, _) = matrix::svd_full(m)?;
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    if smin < 1e-10 * smax.max(1e-300) {
        return Err(Error::Linalg(format!(
            "matrix numerically singular: smin/smax = {:.3e}",
            smin / smax
        )));
    }
    Ok((matrix::mat_inv(m)?, smin))
}
