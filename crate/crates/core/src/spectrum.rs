//! Spectrum of the transfer matrix through the separated-variable
//! functional equation.
//!
//! An entire function of the form
//!
//! `t(λ) = (q^k a₊ + q^{-k} d₊) λ^N + (q^{-k} a₋ + q^k d₋) λ^{-N}
//!         + Σ_{b=1..N-1} c_b λ^{-N+2b}`
//!
//! is a transfer-matrix eigenvalue iff the p×p cyclic tridiagonal matrix
//!
//! `D(λ)[j,j] = t(q^j λ)`, `D[j,j-1] = -ā(q^j λ)`, `D[j,j+1] = -d̄(q^j λ)`
//!
//! has identically vanishing determinant as a function of `Λ = λ^p`.  The
//! determinant is a Laurent polynomial `Σ_{m=-N..N} e_m(c) Λ^m` whose
//! coefficients are polynomials of total degree ≤ p in the undetermined
//! middle coefficients `c`; the spectrum in a fixed charge sector is the
//! common zero locus of all the `e_m`.  For one unknown (N = 2) this is a
//! root-finding problem, for two unknowns (N = 3) a resultant elimination;
//! both are solved here without reference to the dense diagonalization,
//! which stays available as an independent cross-check.
//!
//! Kernel vectors of `D(η_a^{(0)})` and of its left-gauge companion `D̄`
//! tabulate the Baxter function `Q` on each separate-variable orbit, and
//! the eigenstates are assembled as separate states over the basis.

use crate::algebra::{amp_a_bar, amp_d_bar};
use crate::error::{Error, Result};
use crate::matrix::{eig_pairs, kernel_vector, mat_det, solve_lin, zeros, CMat, CVec, C, ONE, ZERO};
use crate::params::ModelParams;
use crate::sov::SovBasis;
use crate::weyl::digits;

/// Which gauge companion of the functional-equation matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Row kernel tabulates the right Baxter function `Q`.
    Right,
    /// Row kernel tabulates the left Baxter function `Q̄`.
    Left,
}

/// Evaluate the candidate eigenvalue function from its charge and middle
/// coefficients.
pub fn t_eval(mp: &ModelParams, charge: usize, mid: &[C], lambda: C) -> C {
    let n = mp.n_sites() as i32;
    let qk = mp.rou.q_pow(charge as i64);
    let qmk = mp.rou.q_pow(-(charge as i64));
    let top = (qk * mp.a_plus() + qmk * mp.d_plus()) * lambda.powi(n);
    let bot = (qmk * mp.a_minus() + qk * mp.d_minus()) * lambda.powi(-n);
    let mut acc = top + bot;
    for (b, &c) in mid.iter().enumerate() {
        acc += c * lambda.powi(-n + 2 * (b as i32 + 1));
    }
    acc
}

/// The p×p functional-equation matrix at spectral parameter `λ`.
pub fn d_matrix(
    mp: &ModelParams,
    charge: usize,
    mid: &[C],
    lambda: C,
    side: Side,
) -> CMat {
    let p = mp.rou.p;
    let mut m = zeros(p, p);
    for j in 0..p {
        let lj = lambda * mp.rou.q_pow(j as i64);
        m[(j, j)] = t_eval(mp, charge, mid, lj);
        let jm = (j + p - 1) % p;
        let jp = (j + 1) % p;
        match side {
            Side::Right => {
                m[(j, jm)] = -amp_a_bar(mp, lj);
                m[(j, jp)] = -amp_d_bar(mp, lj);
            }
            Side::Left => {
                m[(j, jm)] = -amp_d_bar(mp, lambda * mp.rou.q_pow(j as i64 - 1));
                m[(j, jp)] = -amp_a_bar(mp, lambda * mp.rou.q_pow(j as i64 + 1));
            }
        }
    }
    m
}

/// Determinant of the functional-equation matrix.
pub fn det_d(mp: &ModelParams, charge: usize, mid: &[C], lambda: C, side: Side) -> Result<C> {
    mat_det(&d_matrix(mp, charge, mid, lambda, side))
}

/// A magnitude reference for the determinant: the sizes of its diagonal and
/// cyclic off-diagonal permutation terms.
pub fn det_scale(mp: &ModelParams, charge: usize, mid: &[C], lambda: C) -> f64 {
    let p = mp.rou.p;
    let mut diag = 1.0;
    let mut lower = 1.0;
    let mut upper = 1.0;
    for j in 0..p {
        let lj = lambda * mp.rou.q_pow(j as i64);
        diag *= t_eval(mp, charge, mid, lj).norm();
        lower *= amp_a_bar(mp, lj).norm();
        upper *= amp_d_bar(mp, lj).norm();
    }
    diag + lower + upper
}

// ---------------------------------------------------------------------------
// small polynomial utilities (ascending coefficients)
// ---------------------------------------------------------------------------

fn poly_eval(coeffs: &[C], x: C) -> C {
    let mut acc = ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_trim(coeffs: &[C]) -> Vec<C> {
    let mx = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-280);
    let mut out = coeffs.to_vec();
    while out.len() > 1 && out.last().unwrap().norm() < 1e-9 * mx {
        out.pop();
    }
    out
}

fn poly_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let c = poly_trim(coeffs);
    let d = c.len() - 1;
    if d == 0 {
        return Ok(vec![]);
    }
    let lead = c[d];
    let mut comp = zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i] / lead;
    }
    let (vals, _) = eig_pairs(&comp)?;
    Ok(vals.to_vec())
}

// ---------------------------------------------------------------------------
// determinant as a polynomial in (Λ, middle coefficients)
// ---------------------------------------------------------------------------

/// Monomial exponent tuples of total degree ≤ `deg` in `nv` variables.
fn monomials(nv: usize, deg: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0usize; nv]];
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &out {
            // raise each variable position ≥ the last raised one to avoid
            // duplicates; simpler: collect and dedupe
            for v in 0..nv {
                let mut mm = m.clone();
                mm[v] += 1;
                next.push(mm);
            }
        }
        next.sort();
        next.dedup();
        out.extend(next.into_iter());
        out.sort();
        out.dedup();
    }
    out.sort();
    out
}

fn mono_eval(mono: &[usize], c: &[C]) -> C {
    let mut acc = ONE;
    for (v, &e) in mono.iter().enumerate() {
        for _ in 0..e {
            acc *= c[v];
        }
    }
    acc
}

/// Fit `det D(Λ; c) = Σ_{m,α} e_{m,α} Λ^m mono_α(c)` from samples on a
/// product grid; returns `e[m][α]` with `m` indexed `0..2N+1` for exponents
/// `-N..N`.
fn fit_det_poly(
    mp: &ModelParams,
    charge: usize,
    monos: &[Vec<usize>],
    cpts: &[Vec<C>],
) -> Result<Vec<CVec>> {
    let n = mp.n_sites();
    let n_lam = 2 * n + 1;
    let lams: Vec<C> = (0..n_lam)
        .map(|j| C::from_polar(0.83 + 0.11 * j as f64, 0.31 + 0.47 * j as f64))
        .collect();
    let n_mono = monos.len();
    assert_eq!(cpts.len(), n_mono);
    let rows = n_lam * n_mono;
    let mut design = zeros(rows, rows);
    let mut rhs = CVec::from(vec![ZERO; rows]);
    let mut r = 0usize;
    for &lam in &lams {
        let big = lam.powi(mp.rou.p as i32);
        for cp in cpts {
            for (mi, m) in (0..n_lam).map(|m| m as i32 - n as i32).enumerate() {
                let lm = big.powi(m);
                for (ai, mono) in monos.iter().enumerate() {
                    design[(r, mi * n_mono + ai)] = lm * mono_eval(mono, cp);
                }
            }
            rhs[r] = det_d(mp, charge, cp, lam, Side::Right)?;
            r += 1;
        }
    }
    let sol = solve_lin(&design, &rhs)?;
    let mut out = Vec::with_capacity(n_lam);
    for mi in 0..n_lam {
        out.push(CVec::from(
            (0..n_mono).map(|ai| sol[mi * n_mono + ai]).collect::<Vec<_>>(),
        ));
    }
    Ok(out)
}

/// Normalized residual of a candidate `c` against every Λ-coefficient.
///
/// Coefficient polynomials that vanish identically (relative to the largest
/// one) carry no spectral condition — the gauge construction cancels them —
/// and are skipped.
fn coeff_residual(e_all: &[CVec], monos: &[Vec<usize>], c: &[C]) -> f64 {
    let global: f64 = e_all
        .iter()
        .flat_map(|e| e.iter().map(|z| z.norm()))
        .fold(0.0, f64::max)
        .max(1e-280);
    let mut worst: f64 = 0.0;
    for e in e_all {
        let mx: f64 = e.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if mx < 1e-8 * global {
            continue;
        }
        let val: C = e
            .iter()
            .zip(monos.iter())
            .map(|(&coef, mono)| coef * mono_eval(mono, c))
            .sum();
        let scale: f64 = e
            .iter()
            .zip(monos.iter())
            .map(|(coef, mono)| coef.norm() * mono_eval(mono, c).norm().max(1e-280))
            .sum::<f64>()
            .max(1e-280);
        worst = worst.max(val.norm() / scale);
    }
    worst
}

// ---------------------------------------------------------------------------
// Gauss-Newton polish on the sampled determinant system
// ---------------------------------------------------------------------------

fn gn_points(mp: &ModelParams) -> Vec<C> {
    (0..2 * mp.n_sites() + 1)
        .map(|j| C::from_polar(0.78 + 0.07 * j as f64, 0.19 + 0.59 * j as f64))
        .collect()
}

fn polish(mp: &ModelParams, charge: usize, seed: &[C]) -> Result<(Vec<C>, f64)> {
    let pts = gn_points(mp);
    let scales: Vec<f64> = pts
        .iter()
        .map(|&l| det_scale(mp, charge, seed, l))
        .collect();
    let nv = seed.len();
    let f_vec = |c: &[C]| -> Result<CVec> {
        let mut out = CVec::from(vec![ZERO; pts.len()]);
        for (i, &l) in pts.iter().enumerate() {
            out[i] = det_d(mp, charge, c, l, Side::Right)? / scales[i];
        }
        Ok(out)
    };
    let mut c: Vec<C> = seed.to_vec();
    let mut fval = f_vec(&c)?;
    for _ in 0..16 {
        let step = 1e-7;
        let mut jac = zeros(pts.len(), nv);
        for v in 0..nv {
            let h = step * (1.0 + c[v].norm());
            let mut cp = c.clone();
            cp[v] += C::new(h, 0.0);
            let fp = f_vec(&cp)?;
            for i in 0..pts.len() {
                jac[(i, v)] = (fp[i] - fval[i]) / C::new(h, 0.0);
            }
        }
        // least-squares step: (Jᴴ J) δ = -Jᴴ F
        let jh = crate::matrix::dagger(&jac);
        let jhj = jh.dot(&jac);
        let jhf = jh.dot(&fval);
        let delta = solve_lin(&jhj, &jhf.mapv(|z| -z))?;
        for v in 0..nv {
            c[v] += delta[v];
        }
        fval = f_vec(&c)?;
        let dn: f64 = delta.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cn: f64 = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if dn < 1e-13 * cn {
            break;
        }
    }
    let res = fval.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((c, res))
}

// ---------------------------------------------------------------------------
// standalone sector solves
// ---------------------------------------------------------------------------

fn cgrid(nv: usize, count: usize) -> Vec<Vec<C>> {
    (0..count)
        .map(|j| {
            (0..nv)
                .map(|v| {
                    C::from_polar(
                        0.9 + 0.23 * ((j * nv + v) % 7) as f64,
                        -2.9 + 0.83 * ((j * (v + 3) + 2 * j + v) % 13) as f64,
                    )
                })
                .collect()
        })
        .collect()
}

/// Solve one charge sector when a single middle coefficient is unknown.
fn solve_sector_univariate(mp: &ModelParams, charge: usize) -> Result<Vec<Vec<C>>> {
    let p = mp.rou.p;
    let monos = monomials(1, p);
    let cpts = cgrid(1, monos.len());
    let e_all = fit_det_poly(mp, charge, &monos, &cpts)?;
    // pick the best-conditioned coefficient polynomial
    let best = e_all
        .iter()
        .enumerate()
        .max_by(|a, b| {
            let na: f64 = a.1.iter().map(|z| z.norm()).sum();
            let nb: f64 = b.1.iter().map(|z| z.norm()).sum();
            na.partial_cmp(&nb).unwrap()
        })
        .unwrap()
        .0;
    // monomials(1, p) is sorted by degree: coefficient r is degree r
    let coeffs: Vec<C> = e_all[best].to_vec();
    let roots = poly_roots(&coeffs)?;
    let mut out = Vec::new();
    for r in roots {
        if coeff_residual(&e_all, &monos, &[r]) < 1e-5 {
            let (c, res) = polish(mp, charge, &[r])?;
            if res < 1e-9 && !out.iter().any(|o: &Vec<C>| (o[0] - c[0]).norm() < 1e-6 * (1.0 + c[0].norm())) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Coefficients (polynomials in `c₁`) of `e(c₁, c₂)` viewed in `c₂`.
fn bivar_to_c2_polys(e: &CVec, monos: &[Vec<usize>], p: usize) -> Vec<Vec<C>> {
    let mut out = vec![vec![ZERO; p + 1]; p + 1]; // out[r2][r1]
    for (coef, mono) in e.iter().zip(monos.iter()) {
        out[mono[1]][mono[0]] = *coef;
    }
    out
}

fn sylvester_det(f: &[Vec<C>], g: &[Vec<C>], c1: C) -> Result<C> {
    let fc: Vec<C> = f.iter().map(|pr| poly_eval(pr, c1)).collect();
    let gc: Vec<C> = g.iter().map(|pr| poly_eval(pr, c1)).collect();
    let df = fc.len() - 1;
    let dg = gc.len() - 1;
    let dim = df + dg;
    let mut s = zeros(dim, dim);
    for r in 0..dg {
        for k in 0..=df {
            s[(r, r + k)] = fc[df - k];
        }
    }
    for r in 0..df {
        for k in 0..=dg {
            s[(dg + r, r + k)] = gc[dg - k];
        }
    }
    mat_det(&s)
}

/// Solve one charge sector with two unknown middle coefficients by
/// resultant elimination.
fn solve_sector_bivariate(mp: &ModelParams, charge: usize) -> Result<Vec<Vec<C>>> {
    let p = mp.rou.p;
    let monos = monomials(2, p);
    let cpts = cgrid(2, monos.len());
    let e_all = fit_det_poly(mp, charge, &monos, &cpts)?;
    // two best-conditioned coefficient polynomials
    let mut order: Vec<usize> = (0..e_all.len()).collect();
    order.sort_by(|&a, &b| {
        let na: f64 = e_all[a].iter().map(|z| z.norm()).sum();
        let nb: f64 = e_all[b].iter().map(|z| z.norm()).sum();
        nb.partial_cmp(&na).unwrap()
    });
    let n0: f64 = e_all[order[0]].iter().map(|z| z.norm()).sum();
    let n1: f64 = e_all[order[1]].iter().map(|z| z.norm()).sum();
    if n1 < 1e-8 * n0 {
        return Err(Error::Regularity(
            "fewer than two independent spectral conditions".into(),
        ));
    }
    let f = bivar_to_c2_polys(&e_all[order[0]], &monos, p);
    let g = bivar_to_c2_polys(&e_all[order[1]], &monos, p);
    // resultant in c₂ is a polynomial in c₁ of degree ≤ 2p²; recover it by
    // inverse DFT on a circle
    let deg = 2 * p * p;
    let nn = deg + 1;
    let radius = 1.37;
    let omega = C::from_polar(1.0, std::f64::consts::TAU / nn as f64);
    let mut samples = Vec::with_capacity(nn);
    let mut maxs: f64 = 0.0;
    for j in 0..nn {
        let x = omega.powi(j as i32) * radius;
        let v = sylvester_det(&f, &g, x)?;
        maxs = maxs.max(v.norm());
        samples.push(v);
    }
    if maxs < 1e-200 {
        return Err(Error::Regularity("resultant vanished identically".into()));
    }
    let mut res_poly = vec![ZERO; nn];
    for m in 0..nn {
        let mut acc = ZERO;
        for (j, &s) in samples.iter().enumerate() {
            acc += s * omega.powi(-((j * m) as i32 % nn as i32));
        }
        res_poly[m] = acc / C::new(nn as f64 * radius.powi(m as i32), 0.0);
    }
    let c1_roots = poly_roots(&res_poly)?;
    let mut out: Vec<Vec<C>> = Vec::new();
    for c1 in c1_roots {
        // candidate c₂: near-common roots of the two slice polynomials
        let fr = poly_roots(&f.iter().map(|pr| poly_eval(pr, c1)).collect::<Vec<_>>())?;
        let gr = poly_roots(&g.iter().map(|pr| poly_eval(pr, c1)).collect::<Vec<_>>())?;
        for &c2 in &fr {
            let near = gr.iter().any(|&r| (r - c2).norm() < 1e-3 * (1.0 + c2.norm()));
            if !near {
                continue;
            }
            if coeff_residual(&e_all, &monos, &[c1, c2]) > 1e-4 {
                continue;
            }
            let (c, res) = polish(mp, charge, &[c1, c2])?;
            if res < 1e-9 {
                let dup = out.iter().any(|o| {
                    (o[0] - c[0]).norm() + (o[1] - c[1]).norm()
                        < 1e-6 * (1.0 + c[0].norm() + c[1].norm())
                });
                if !dup {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// assembled states
// ---------------------------------------------------------------------------

/// One solved transfer-matrix eigenstate in separated form.
#[derive(Debug, Clone)]
pub struct SovState {
    pub charge: usize,
    /// Middle Laurent coefficients `c_1..c_{N-1}` of `t(λ)`.
    pub mid: Vec<C>,
    /// `q_tab[(a, h)] = Q(η_a^{(h)})`, rows `a = 0..N-2`.
    pub q_tab: CMat,
    /// `qbar_tab[(a, h)] = Q̄(η_a^{(h)})`.
    pub qbar_tab: CMat,
    /// Eigenvector in the computational basis.
    pub ket: CVec,
    /// Left eigencovector in the computational basis.
    pub bra: CVec,
    /// Worst relative determinant residual at independent validation points
    /// (both gauge sides).
    pub det_residual: f64,
    /// Worst kernel-gap ratio `σ_min/σ_max` of the functional matrices used
    /// for the Q-tables.
    pub kernel_gap: f64,
}

impl SovState {
    pub fn t_at(&self, mp: &ModelParams, lambda: C) -> C {
        t_eval(mp, self.charge, &self.mid, lambda)
    }
}

/// The assembled spectrum over a separated basis.
#[derive(Debug)]
pub struct SovSpectrum {
    pub states: Vec<SovState>,
}

fn normalize_kernel(mut v: CVec) -> CVec {
    let mut best = 0usize;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let s = v[best];
    v.mapv_inplace(|z| z / s);
    v
}

/// Build the Q/Q̄ tables and the eigenstate for a solved `(charge, mid)`.
pub fn assemble_state(sb: &SovBasis, charge: usize, mid: &[C]) -> Result<SovState> {
    let mp = &sb.mp;
    let p = sb.p();
    let n = sb.n_sites();
    let n_sep = n - 1;
    let mut q_tab = zeros(n_sep, p);
    let mut qbar_tab = zeros(n_sep, p);
    let mut kernel_gap: f64 = 0.0;
    for a in 0..n_sep {
        let lam = sb.eta(a, 0);
        let (kr, gap_r) = kernel_vector(&d_matrix(mp, charge, mid, lam, Side::Right))?;
        let (kl, gap_l) = kernel_vector(&d_matrix(mp, charge, mid, lam, Side::Left))?;
        kernel_gap = kernel_gap.max(gap_r).max(gap_l);
        let kr = normalize_kernel(kr);
        let kl = normalize_kernel(kl);
        for h in 0..p {
            q_tab[(a, h)] = kr[h];
            qbar_tab[(a, h)] = kl[h];
        }
    }
    // validation at independent points, both sides
    let mut det_residual: f64 = 0.0;
    for j in 0..3 {
        let l = C::from_polar(1.21 + 0.05 * j as f64, -0.41 + 0.77 * j as f64);
        for side in [Side::Right, Side::Left] {
            let d = det_d(mp, charge, mid, l, side)?.norm();
            det_residual = det_residual.max(d / det_scale(mp, charge, mid, l));
        }
    }
    // separate-state assembly
    let dim = sb.dim();
    let inv_sqrt_p = 1.0 / (p as f64).sqrt();
    let mut ket = CVec::from(vec![ZERO; dim]);
    let mut bra = CVec::from(vec![ZERO; dim]);
    for h in 0..dim {
        let ds = digits(h, p, n);
        let weight = sb.v_weight(h) / sb.w_weight(h);
        let mut qp = ONE;
        let mut qbp = ONE;
        for a in 0..n_sep {
            qp *= q_tab[(a, ds[a])];
            qbp *= qbar_tab[(a, ds[a])];
        }
        let hn = ds[n - 1] as i64;
        let coef_ket = mp.rou.q_pow(-(charge as i64) * hn) * qp * weight * inv_sqrt_p;
        let coef_bra = mp.rou.q_pow(charge as i64 * hn) * qbp * weight * inv_sqrt_p;
        ket = ket + sb.right.column(h).mapv(|z| z * coef_ket);
        bra = bra + sb.left.row(h).mapv(|z| z * coef_bra);
    }
    Ok(SovState {
        charge,
        mid: mid.to_vec(),
        q_tab,
        qbar_tab,
        ket,
        bra,
        det_residual,
        kernel_gap,
    })
}

impl SovSpectrum {
    /// Solve every charge sector of the functional equation from scratch and
    /// assemble all p^N eigenstates.  Supports one or two undetermined
    /// middle coefficients (chains of 2 or 3 sites).
    pub fn solve(sb: &SovBasis) -> Result<Self> {
        let mp = &sb.mp;
        let p = sb.p();
        let n = sb.n_sites();
        let expect = p.pow((n - 1) as u32);
        let mut states = Vec::new();
        for k in 0..p {
            let mut sols = match n {
                2 => solve_sector_univariate(mp, k)?,
                3 => solve_sector_bivariate(mp, k)?,
                _ => {
                    return Err(Error::InvalidParams(
                        "standalone solve implemented for 2- and 3-site chains".into(),
                    ))
                }
            };
            if sols.len() != expect {
                return Err(Error::Regularity(format!(
                    "sector {k}: found {} states, expected {expect}",
                    sols.len()
                )));
            }
            sols.sort_by(|a, b| {
                let ka: Vec<(f64, f64)> = a.iter().map(|z| (z.re, z.im)).collect();
                let kb: Vec<(f64, f64)> = b.iter().map(|z| (z.re, z.im)).collect();
                ka.partial_cmp(&kb).unwrap()
            });
            for mid in sols {
                states.push(assemble_state(sb, k, &mid)?);
            }
        }
        Ok(SovSpectrum { states })
    }
}
