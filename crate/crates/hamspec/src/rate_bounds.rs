//! Analytic rate-versus-distance calculus: the binary entropy function and
//! its inverse, the Gilbert-Varshamov and first linear-programming curves,
//! the norm-ratio conjecture constant c(delta) in both of its published
//! forms, the eps-improved bound, and the grid/bisection verifications of
//! the analytic inequalities behind the sphere-intersection volume bound.
//!
//! Everything here is low-dimensional and smooth, so the checks are grids
//! (1e-4 step) plus bisection (1e-12); no symbolic algebra.

use serde::Serialize;

use crate::error::{HamspecError, Result};

/// Binary entropy `H(t) = t log2(1/t) + (1-t) log2(1/(1-t))`, with the
/// `0 log 0 = 0` convention.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(HamspecError::InvalidParameter(format!(
            "entropy argument {x} outside [0,1]"
        )));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// `H'(x) = log2((1-x)/x)` on (0,1).
pub fn entropy_derivative(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(HamspecError::InvalidParameter(format!(
            "entropy derivative argument {x} outside (0,1)"
        )));
    }
    Ok(((1.0 - x) / x).log2())
}

/// Inverse of the entropy on the branch [0, 1/2], by bisection to 1e-12.
pub fn entropy_inverse(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(HamspecError::InvalidParameter(format!(
            "entropy inverse argument {y} outside [0,1]"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gilbert-Varshamov lower bound `1 - H(delta)`.
pub fn gv_bound(delta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(HamspecError::InvalidParameter(format!(
            "delta {delta} outside [0, 1/2]"
        )));
    }
    Ok(1.0 - entropy(delta)?)
}

/// First linear programming bound `H(1/2 - sqrt(delta(1-delta)))`.
pub fn first_lp_bound(delta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(HamspecError::InvalidParameter(format!(
            "delta {delta} outside [0, 1/2]"
        )));
    }
    entropy(0.5 - (delta * (1.0 - delta)).sqrt())
}

/// The two published forms of the conjecture constant c(delta) and their
/// numerically measured agreement.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantReport {
    pub delta: f64,
    /// `delta(1-2delta) log2((1/2 + s)/(1/2 - s)) / (16 s)`, `s = sqrt(delta(1-delta))`.
    pub c_explicit: f64,
    /// `(1/8) (H'(rho0)/g'(rho0)) 2 delta` with `rho0 = 1/2 - s`, `g = 2 sqrt(x(1-x))`.
    pub c_derivative: f64,
    pub relative_gap: f64,
    /// Relative error of the closed-form `H'(rho0)/g'(rho0)` against central
    /// finite differences at step 1e-6.
    pub finite_difference_gap: f64,
}

fn g_of(x: f64) -> f64 {
    2.0 * (x * (1.0 - x)).sqrt()
}

fn g_derivative(x: f64) -> f64 {
    (1.0 - 2.0 * x) / (x * (1.0 - x)).sqrt()
}

pub fn conjecture_constant(delta: f64) -> Result<ConstantReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(HamspecError::InvalidParameter(format!(
            "delta {delta} outside the open interval (0, 1/2)"
        )));
    }
    let s = (delta * (1.0 - delta)).sqrt();
    let c_explicit = delta * (1.0 - 2.0 * delta) * ((0.5 + s) / (0.5 - s)).log2() / (16.0 * s);
    let rho0 = 0.5 - s;
    let ratio = entropy_derivative(rho0)? / g_derivative(rho0);
    let c_derivative = 0.125 * ratio * 2.0 * delta;
    let relative_gap =
        (c_explicit - c_derivative).abs() / c_explicit.abs().max(c_derivative.abs());
    // central differences at step 1e-6, clamped so rho0 - h stays in (0,1)
    let h = 1e-6f64.min(rho0 / 2.0);
    let dh = (entropy(rho0 + h)? - entropy(rho0 - h)?) / (2.0 * h);
    let dg = (g_of(rho0 + h) - g_of(rho0 - h)) / (2.0 * h);
    let finite_difference_gap = (dh / dg - ratio).abs() / ratio.abs();
    Ok(ConstantReport { delta, c_explicit, c_derivative, relative_gap, finite_difference_gap })
}

/// The eps-improved bound: the exact value `H(rho) + 4 c eps` with rho
/// solving `g(rho) = 1 - 2delta - 2delta eps`, and the first-order value
/// `H(rho0) - 4 c eps`.
#[derive(Debug, Clone, Serialize)]
pub struct ImprovedBound {
    pub delta: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub exact: f64,
    pub first_order: f64,
}

pub fn improved_bound(delta: f64, epsilon: f64) -> Result<ImprovedBound> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(HamspecError::InvalidParameter(format!(
            "delta {delta} outside (0, 1/2)"
        )));
    }
    if epsilon < 0.0 {
        return Err(HamspecError::InvalidParameter(format!("epsilon {epsilon} negative")));
    }
    let target = 1.0 - 2.0 * delta - 2.0 * delta * epsilon;
    if !(0.0..=1.0).contains(&target) {
        return Err(HamspecError::InvalidParameter(format!(
            "no rho in [0, 1/2] solves g(rho) = {target}; epsilon too large"
        )));
    }
    // g is increasing on [0, 1/2] with g(0) = 0, g(1/2) = 1
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g_of(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let c = conjecture_constant(delta)?.c_explicit;
    let rho0 = 0.5 - (delta * (1.0 - delta)).sqrt();
    Ok(ImprovedBound {
        delta,
        epsilon,
        rho,
        exact: entropy(rho)? + 4.0 * c * epsilon,
        first_order: entropy(rho0)? - 4.0 * c * epsilon,
    })
}

/// `h(delta) = delta + (1-delta) H(delta/(2-2delta)) - H(delta)`, the
/// boundary case of the volume-exponent comparison.
pub fn h_boundary(delta: f64) -> Result<f64> {
    Ok(delta + (1.0 - delta) * entropy(delta / (2.0 - 2.0 * delta))? - entropy(delta)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticReport {
    /// `max(|h(0)|, |h(1/2)|)`.
    pub h_endpoint_dev: f64,
    pub h_endpoints_ok: bool,
    /// `max h` over the grid on (0.001, 0.499); must be < 0.
    pub h_max_interior: f64,
    pub h_negative_ok: bool,
    pub h_min_location: f64,
    pub h_min_value: f64,
    /// `max of 1 - H(x) - (1/2 - x) log2((1-x)/x)` on the (0,1) grid; <= 0.
    pub dg_dtau_max: f64,
    pub dg_dtau_ok: bool,
    /// Exact integer coefficient identity for the quartic P(delta).
    pub p_identity_ok: bool,
    pub q_at_0: f64,
    pub q_at_half: f64,
    pub q_sign_changes: usize,
    pub q_root: f64,
    pub q_ok: bool,
    pub pass: bool,
}

/// `Q(delta) = 14 delta^3 - 22 delta^2 + 10 delta - 1`.
fn q_poly(x: f64) -> f64 {
    ((14.0 * x - 22.0) * x + 10.0) * x - 1.0
}

/// Multiply two integer polynomials (coefficient vectors, low degree first).
fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0))
        .collect()
}

/// The five analytic checks behind the volume-exponent lemma:
/// endpoint zeros and interior negativity of h, the monotonicity inequality
/// for the tau-derivative, the exact factorization of P, and the sign
/// pattern of Q.
pub fn analytic_checks() -> Result<AnalyticReport> {
    // (i) endpoints of h
    let h0 = h_boundary(0.0)?.abs();
    let h_half = h_boundary(0.5)?.abs();
    let h_endpoint_dev = h0.max(h_half);
    let h_endpoints_ok = h_endpoint_dev <= 1e-10;

    // (ii) strict negativity away from the endpoints, 1e-4 grid
    let mut h_max_interior = f64::NEG_INFINITY;
    let mut x = 0.001;
    while x <= 0.499 + 1e-12 {
        h_max_interior = h_max_interior.max(h_boundary(x)?);
        x += 1e-4;
    }
    let h_negative_ok = h_max_interior < 0.0;

    // minimum of h by grid + golden-section refinement
    let mut best_x = 0.001;
    let mut best_v = f64::INFINITY;
    let mut x = 0.001;
    while x <= 0.499 + 1e-12 {
        let v = h_boundary(x)?;
        if v < best_v {
            best_v = v;
            best_x = x;
        }
        x += 1e-4;
    }
    let (mut lo, mut hi) = ((best_x - 2e-4).max(0.0), (best_x + 2e-4).min(0.5));
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if h_boundary(m1)? < h_boundary(m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let h_min_location = 0.5 * (lo + hi);
    let h_min_value = h_boundary(h_min_location)?;

    // (iii) (1/2) log2(1/(x(1-x))) >= 1, written as the tau-derivative bound
    let mut dg_dtau_max = f64::NEG_INFINITY;
    let mut x = 1e-4;
    while x < 1.0 - 1e-12 {
        let v = 1.0 - entropy(x)? - (0.5 - x) * ((1.0 - x) / x).log2();
        dg_dtau_max = dg_dtau_max.max(v);
        x += 1e-4;
    }
    let dg_dtau_ok = dg_dtau_max <= 1e-12;

    // (iv) delta(2-3delta)^3 - (1-delta)^4 = (1-2delta)(14d^3 - 22d^2 + 10d - 1)
    let lhs = poly_sub(
        &poly_mul(&[0, 1], &poly_mul(&[2, -3], &poly_mul(&[2, -3], &[2, -3]))),
        &poly_mul(&poly_mul(&[1, -1], &[1, -1]), &poly_mul(&[1, -1], &[1, -1])),
    );
    let rhs = poly_mul(&[1, -2], &[-1, 10, -22, 14]);
    let p_identity_ok = lhs == rhs;

    // (v) sign pattern of Q on [0, 1/2]
    let q_at_0 = q_poly(0.0);
    let q_at_half = q_poly(0.5);
    let mut q_sign_changes = 0usize;
    let mut prev = q_at_0;
    let mut bracket = None;
    let mut x = 1e-4;
    while x <= 0.5 + 1e-12 {
        let v = q_poly(x);
        if prev.signum() != v.signum() && v != 0.0 {
            q_sign_changes += 1;
            bracket = Some((x - 1e-4, x));
        }
        prev = v;
        x += 1e-4;
    }
    let q_root = if let Some((mut lo, mut hi)) = bracket {
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if q_poly(mid).signum() == q_poly(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        f64::NAN
    };
    let q_ok = q_at_0 == -1.0 && (q_at_half - 0.25).abs() < 1e-12 && q_sign_changes == 1;

    let pass = h_endpoints_ok && h_negative_ok && dg_dtau_ok && p_identity_ok && q_ok;
    Ok(AnalyticReport {
        h_endpoint_dev,
        h_endpoints_ok,
        h_max_interior,
        h_negative_ok,
        h_min_location,
        h_min_value,
        dg_dtau_max,
        dg_dtau_ok,
        p_identity_ok,
        q_at_0,
        q_at_half,
        q_sign_changes,
        q_root,
        q_ok,
        pass,
    })
}

/// Margin of the sphere-intersection volume exponent over its admissible
/// domain: with `delta = H^{-1}(1-R)`, scan
/// `f(xi, tau) = tau + (1-tau) H((2 xi - tau)/(2 - 2 tau))` over
/// `delta <= xi <= (1+eps) delta`, `delta <= tau <= 2 xi` and report
/// `max f - (1 - R)` (negative means the volume bound has slack) together
/// with the implied exponent alpha.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentMargin {
    pub rate: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub max_margin: f64,
    pub alpha: f64,
    pub argmax_xi: f64,
    pub argmax_tau: f64,
}

pub fn exponent_margin_check(rate: f64, epsilon: f64) -> Result<ExponentMargin> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(HamspecError::InvalidParameter(format!("rate {rate} outside (0,1)")));
    }
    if epsilon < 0.0 {
        return Err(HamspecError::InvalidParameter("epsilon must be >= 0".into()));
    }
    let delta = entropy_inverse(1.0 - rate)?;
    let steps = 200usize;
    let mut max_margin = f64::NEG_INFINITY;
    let (mut argmax_xi, mut argmax_tau) = (delta, delta);
    for i in 0..=steps {
        let xi = delta + (epsilon * delta) * i as f64 / steps as f64;
        for j in 0..=steps {
            let tau = delta + (2.0 * xi - delta) * j as f64 / steps as f64;
            let arg = (2.0 * xi - tau) / (2.0 - 2.0 * tau);
            let value = tau + (1.0 - tau) * entropy(arg.clamp(0.0, 1.0))?;
            let margin = value - (1.0 - rate);
            if margin > max_margin {
                max_margin = margin;
                argmax_xi = xi;
                argmax_tau = tau;
            }
        }
    }
    Ok(ExponentMargin {
        rate,
        epsilon,
        delta,
        max_margin,
        alpha: -max_margin,
        argmax_xi,
        argmax_tau,
    })
}

/// Largest epsilon (step 0.005, up to 1) at which the exponent margin stays
/// negative; the empirical analogue of the lemma's unspecified eps0(R).
pub fn empirical_epsilon_threshold(rate: f64) -> Result<f64> {
    let mut last_good = 0.0;
    let mut eps = 0.005;
    while eps <= 1.0 {
        if exponent_margin_check(rate, eps)?.max_margin < 0.0 {
            last_good = eps;
        } else {
            break;
        }
        eps += 0.005;
    }
    Ok(last_good)
}

/// One row of the rate-curve CSV: delta, GV, firstLP, c(delta), improved.
pub fn rate_curve_rows(grid: usize, epsilon: f64) -> Result<Vec<(f64, f64, f64, f64, f64)>> {
    if grid < 2 {
        return Err(HamspecError::InvalidParameter("grid must be >= 2".into()));
    }
    let mut rows = Vec::with_capacity(grid);
    for i in 0..grid {
        // open grid: endpoints of (0, 1/2) are singular for c(delta)
        let delta = 0.5 * (i as f64 + 1.0) / (grid as f64 + 1.0);
        let gv = gv_bound(delta)?;
        let lp = first_lp_bound(delta)?;
        let c = conjecture_constant(delta)?.c_explicit;
        let improved = improved_bound(delta, epsilon)?.exact;
        rows.push((delta, gv, lp, c, improved));
    }
    Ok(rows)
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    results.push((
        "H(1/2) = 1, H(0) = 0".into(),
        entropy(0.5).map(|v| (v - 1.0).abs() < 1e-14).unwrap_or(false)
            && entropy(0.0).map(|v| v == 0.0).unwrap_or(false),
    ));
    let inv_ok = (0..=10).all(|i| {
        let y = i as f64 / 10.0;
        entropy_inverse(y)
            .and_then(entropy)
            .map(|v| (v - y).abs() < 1e-10)
            .unwrap_or(false)
    });
    results.push(("entropy inverse round trip".into(), inv_ok));
    results.push((
        "analytic suite".into(),
        analytic_checks().map(|r| r.pass).unwrap_or(false),
    ));
    results.push((
        "volume exponent margin negative at R=0.5".into(),
        exponent_margin_check(0.5, 0.01).map(|m| m.max_margin < 0.0).unwrap_or(false),
    ));
    results
}
