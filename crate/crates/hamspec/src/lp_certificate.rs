//! Dual linear-programming certificates from eigenfunction data.
//!
//! A nonnegative function f with `Af >= lambda f` pointwise yields
//! `G = (Af) * f - (lambda - 1)(f * f)`, which is nonnegative on the cube
//! (convolutions of nonnegative functions preserve the pointwise order), and
//! whose transform factors as `Ghat(a) = (n - 2|a| - lambda + 1) fhat(a)^2`,
//! so `Ghat <= 0` on all weights `|a| >= d = (n - lambda + 1)/2`. That sign
//! pattern is dual feasibility for codes of minimal distance d, and it gives
//! the cardinality bound `|C| <= 2^n Ghat(0) / G(0)`.
//!
//! Two ratios are reported: the direct certificate ratio above, and the
//! smaller `s = 2^n (E f)^2 / (E f^2)`. They differ by exactly the factor
//! `2d` for ball eigenfunctions; the brute-force A(n,d) oracle at n <= 6
//! pins the certificate ratio as the sound one (see `extract_bound`).

use serde::Serialize;

use crate::ball_spectrum::{ball_top_eigen, radius_search};
use crate::cube_fourier::{BooleanFunction, Domain};
use crate::error::{HamspecError, Result};
use crate::rate_bounds::first_lp_bound;

/// A verified dual certificate.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub n: usize,
    /// The input function, rescaled to `||f||_2 = 1`.
    pub f: BooleanFunction,
    pub lambda: f64,
    /// Target distance `(n - lambda + 1)/2` (need not be an integer).
    pub d_target: f64,
    /// Smallest integer distance covered by the sign condition.
    pub d_int: usize,
    pub g: BooleanFunction,
    pub ghat: BooleanFunction,
    pub feasible: bool,
    /// Most negative value of G (feasibility wants >= -1e-10).
    pub min_g: f64,
    /// Largest Ghat value on weights >= d_int (feasibility wants <= 1e-10).
    pub max_ghat_high: f64,
    pub ghat_at_zero: f64,
}

const SIGN_TOL: f64 = 1e-10;

/// Assemble and check the certificate for a nonnegative `f` with
/// `Af >= lambda f` pointwise.
pub fn build_certificate(f: &BooleanFunction, lambda: f64) -> Result<DualCertificate> {
    if f.domain() != Domain::Point {
        return Err(HamspecError::WrongDomain { expected: "point", found: "Fourier" });
    }
    let n = f.dimension();
    let d_target = (n as f64 - lambda + 1.0) / 2.0;
    if d_target < 1.0 {
        return Err(HamspecError::InvalidParameter(format!(
            "target distance (n - lambda + 1)/2 = {d_target} is below 1"
        )));
    }
    let norm = f.norms_and_inner()?.l2;
    if norm == 0.0 {
        return Err(HamspecError::InvalidParameter("f is identically zero".into()));
    }
    let f = f.scale(1.0 / norm);
    if let Some((x, &v)) = f.values().iter().enumerate().find(|(_, &v)| v < -SIGN_TOL) {
        return Err(HamspecError::InvalidParameter(format!(
            "f is negative at x = {x}: f(x) = {v}"
        )));
    }
    let af = f.adjacency_apply()?;
    if let Some((x, _)) = af
        .values()
        .iter()
        .zip(f.values())
        .enumerate()
        .find(|(_, (&a, &fv))| a < lambda * fv - SIGN_TOL)
        .map(|(x, _)| (x, ()))
    {
        return Err(HamspecError::InvalidParameter(format!(
            "Af >= lambda f fails at x = {x}"
        )));
    }
    let g = af.convolve(&f)?.add_scaled(&f.convolve(&f)?, -(lambda - 1.0))?;
    let ghat = g.walsh_transform()?;

    // transform identity: Ghat(a) = (n - 2|a| - lambda + 1) fhat(a)^2
    let fhat = f.walsh_transform()?;
    for (a, &gv) in ghat.values().iter().enumerate() {
        let weight = (a as u32).count_ones() as f64;
        let expected = (n as f64 - 2.0 * weight - lambda + 1.0) * fhat.values()[a].powi(2);
        if (gv - expected).abs() > 1e-10 {
            return Err(HamspecError::Internal(format!(
                "certificate transform identity fails at alpha = {a}: {gv} vs {expected}"
            )));
        }
    }

    let d_int = d_target.ceil() as usize;
    let min_g = g.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let max_ghat_high = ghat
        .values()
        .iter()
        .enumerate()
        .filter(|(a, _)| (*a as u32).count_ones() as usize >= d_int)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let ghat_at_zero = ghat.values()[0];
    let feasible = min_g >= -SIGN_TOL
        && (max_ghat_high <= SIGN_TOL || max_ghat_high == f64::NEG_INFINITY)
        && ghat_at_zero > 0.0;
    Ok(DualCertificate {
        n,
        f,
        lambda,
        d_target,
        d_int,
        g,
        ghat,
        feasible,
        min_g,
        max_ghat_high,
        ghat_at_zero,
    })
}

/// The two cardinality ratios extracted from a feasible certificate.
#[derive(Debug, Clone, Serialize)]
pub struct BoundExtraction {
    /// `2^n (E f)^2 / E f^2`.
    pub s_ratio: f64,
    /// `2^n Ghat(0) / G(0)`: the dual-program value of the certificate.
    /// Validated against the exact A(n,d) oracle at n <= 6; this is the
    /// operative bound.
    pub delsarte_ratio: f64,
    pub d_target: f64,
    pub d_int: usize,
    pub s_exponent: f64,
    pub delsarte_exponent: f64,
}

pub fn extract_bound(cert: &DualCertificate) -> Result<BoundExtraction> {
    if !cert.feasible {
        return Err(HamspecError::VerificationFailed(format!(
            "certificate infeasible: min G = {}, max Ghat above d = {}",
            cert.min_g, cert.max_ghat_high
        )));
    }
    let n = cert.n;
    let two_n = 2.0f64.powi(n as i32);
    let mean: f64 = cert.f.values().iter().sum::<f64>() / two_n;
    // ||f||_2 = 1 after normalization, so E f^2 = 1
    let s_ratio = two_n * mean * mean;
    let delsarte_ratio = two_n * cert.ghat_at_zero / cert.g.values()[0];
    Ok(BoundExtraction {
        s_ratio,
        delsarte_ratio,
        d_target: cert.d_target,
        d_int: cert.d_int,
        s_exponent: s_ratio.log2() / n as f64,
        delsarte_exponent: delsarte_ratio.log2() / n as f64,
    })
}

/// Certificate built from the ball eigenfunction: `r` is the smallest radius
/// with `lambda_r >= n - 2d + 1`, `f = phi_r`, `lambda = n - 2d + 1` (so the
/// target distance is exactly d).
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub lambda: f64,
    pub lambda_ball: f64,
    pub feasible: bool,
    pub s_ratio: f64,
    pub delsarte_ratio: f64,
    pub s_exponent: f64,
    pub delsarte_exponent: f64,
    /// `H(1/2 - sqrt(delta(1-delta)))` at `delta = d/n` (asymptotic curve;
    /// desk-scale exponents sit well above it).
    pub analytic_exponent: f64,
    pub exponent_gap: f64,
}

pub fn certificate_from_ball(n: usize, d: usize) -> Result<(DualCertificate, CertificateReport)> {
    if d < 1 || 2 * d > n {
        return Err(HamspecError::InvalidParameter(format!(
            "need 1 <= d <= n/2, got d = {d}, n = {n}"
        )));
    }
    let lambda = n as f64 - 2.0 * d as f64 + 1.0;
    let r = radius_search(n, lambda)?;
    let ball = ball_top_eigen(n, r)?;
    let mut levels = ball.profile.clone();
    levels.resize(n + 1, 0.0);
    let phi = BooleanFunction::from_levels(n, &levels)?;
    let cert = build_certificate(&phi, lambda)?;
    let bounds = extract_bound(&cert)?;
    let analytic_exponent = first_lp_bound(d as f64 / n as f64)?;
    let report = CertificateReport {
        n,
        d,
        r,
        lambda,
        lambda_ball: ball.lambda,
        feasible: cert.feasible,
        s_ratio: bounds.s_ratio,
        delsarte_ratio: bounds.delsarte_ratio,
        s_exponent: bounds.s_exponent,
        delsarte_exponent: bounds.delsarte_exponent,
        analytic_exponent,
        exponent_gap: bounds.delsarte_exponent - analytic_exponent,
    };
    Ok((cert, report))
}

/// Exact `A(n,d)` for n <= 6 by branch-and-bound maximum clique on the
/// distance->=d graph (greedy-coloring bound, bitset candidate sets).
pub fn max_code_size_bruteforce(n: usize, d: usize) -> Result<usize> {
    if n == 0 || n > 6 {
        return Err(HamspecError::Capacity { n, max: 6 });
    }
    if d == 0 || d > n {
        return Err(HamspecError::InvalidParameter(format!("need 1 <= d <= n, got {d}")));
    }
    let m = 1usize << n;
    let adj: Vec<u64> = (0..m)
        .map(|x| {
            let mut mask = 0u64;
            for y in 0..m {
                if x != y && ((x ^ y) as u64).count_ones() as usize >= d {
                    mask |= 1 << y;
                }
            }
            mask
        })
        .collect();
    let mut best = 1usize; // a single word is always a code
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    clique_expand(&adj, all, 0, &mut best);
    Ok(best)
}

/// Greedy coloring: vertices in one class are pairwise non-adjacent, so a
/// clique takes at most one per class; returns (vertex, class index) in
/// class order.
fn clique_color_order(adj: &[u64], mut cand: u64) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut color = 0usize;
    while cand != 0 {
        color += 1;
        let mut avail = cand;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            avail &= !adj[v];
            cand &= !(1u64 << v);
            order.push((v, color));
        }
    }
    order
}

fn clique_expand(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
    let order = clique_color_order(adj, cand);
    let mut cand = cand;
    for &(v, color) in order.iter().rev() {
        if size + color <= *best {
            return;
        }
        let next = cand & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            clique_expand(adj, next, size + 1, best);
        }
        cand &= !(1u64 << v);
    }
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let feasible_small = certificate_from_ball(10, 2)
        .map(|(cert, rep)| cert.feasible && rep.delsarte_ratio > 0.0)
        .unwrap_or(false);
    results.push(("ball certificate feasible (n=10, d=2)".into(), feasible_small));
    let oracle_ok = max_code_size_bruteforce(5, 3).map(|a| a == 4).unwrap_or(false)
        && max_code_size_bruteforce(6, 2).map(|a| a == 32).unwrap_or(false);
    results.push(("clique oracle reproduces A(5,3), A(6,2)".into(), oracle_ok));
    let sound = (|| -> Result<bool> {
        let (_, rep) = certificate_from_ball(6, 2)?;
        Ok(rep.delsarte_ratio + 1e-9 >= max_code_size_bruteforce(6, 2)? as f64)
    })()
    .unwrap_or(false);
    results.push(("certificate ratio dominates A(6,2)".into(), sound));
    results
}
