//! Maximal eigenpairs of Hamming-ball induced subgraphs.
//!
//! The subgraph of the cube induced by the ball `B_r` of radius r around 0 is
//! invariant under coordinate permutations, so its top eigenfunction `phi` is
//! symmetric: it only depends on the weight of a point. On the level space
//! the adjacency operator reduces to the (r+1) x (r+1) tridiagonal operator
//! `T[i][i-1] = i`, `T[i][i+1] = n - i` (a weight-i point has i neighbors one
//! level down and n-i one level up). Conjugating by `sqrt(C(n,i))` makes it a
//! symmetric tridiagonal matrix with off-diagonal `sqrt((i+1)(n-i))`, which
//! is the Jacobi matrix of the Krawchouk recurrence, so the ball spectrum is
//! `{n - 2x : K_{r+1}(x) = 0}`.
//!
//! Convention: the ball of radius 0 induces a single vertex with no edges,
//! so `lambda_0 = 0` here. Level reduction is the primary path; the explicit
//! induced-subgraph eigenvalue exists as a brute-force oracle for n <= 20.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HamspecError, Result};
use crate::krawchouk::{binomial, KrawchoukTable};

/// Iteration caps for the power method, per the module contract:
/// stop when the eigenvalue moves by less than `1e-13 * n`, or after 1e5
/// iterations.
const EIGEN_TOL_FACTOR: f64 = 1e-13;
const EIGEN_MAX_ITERS: usize = 100_000;

/// Top eigenpair of a ball subgraph, in level form.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BallEigenData {
    pub n: usize,
    pub r: usize,
    /// Top adjacency eigenvalue of the induced subgraph.
    pub lambda: f64,
    /// `profile[i]` = eigenfunction value on the weight-i sphere, normalized
    /// so that `||phi||_2^2 = 2^-n sum_i C(n,i) profile[i]^2 = 1`.
    pub profile: Vec<f64>,
    /// `f_levels[k] = sum_i profile[i] K_i(k)`, the level function of
    /// `2^n phihat`.
    pub f_levels: Vec<f64>,
}

/// Symmetric tridiagonal off-diagonal for the level-reduced operator.
fn offdiagonal(n: usize, r: usize) -> Vec<f64> {
    (0..r).map(|i| (((i + 1) * (n - i)) as f64).sqrt()).collect()
}

/// Power iteration for the top eigenpair of the zero-diagonal symmetric
/// tridiagonal matrix with the given off-diagonal, shifted by `n` to separate
/// the top eigenvalue from its mirror image (the matrix is bipartite).
fn tridiagonal_top_eigen(n: usize, beta: &[f64]) -> (f64, Vec<f64>) {
    let m = beta.len() + 1;
    if m == 1 {
        return (0.0, vec![1.0]);
    }
    let shift = n as f64;
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut lambda_old = f64::INFINITY;
    let tol = EIGEN_TOL_FACTOR * n as f64;
    for _ in 0..EIGEN_MAX_ITERS {
        let mut w = vec![0.0; m];
        for i in 0..m {
            let mut acc = shift * v[i];
            if i > 0 {
                acc += beta[i - 1] * v[i - 1];
            }
            if i + 1 < m {
                acc += beta[i] * v[i + 1];
            }
            w[i] = acc;
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut w {
            *x /= norm;
        }
        // Rayleigh quotient of the unshifted matrix
        let mut lambda = 0.0;
        for i in 0..m - 1 {
            lambda += 2.0 * beta[i] * w[i] * w[i + 1];
        }
        v = w;
        if (lambda - lambda_old).abs() < tol {
            return (lambda, v);
        }
        lambda_old = lambda;
    }
    (lambda_old, v)
}

/// Shooting solve of the level eigenproblem at a trial eigenvalue: returns
/// the profile satisfying rows 0..r-1 exactly, the residual of row r
/// (`r a_{r-1} - lambda a_r`, zero exactly at an eigenvalue), and the
/// residual's lambda-derivative for Newton refinement.
fn shooting(n: usize, r: usize, lambda: f64) -> (Vec<f64>, f64, f64) {
    let mut a = vec![1.0f64];
    let mut da = vec![0.0f64];
    for i in 0..r {
        let prev = if i == 0 { 0.0 } else { a[i - 1] };
        let dprev = if i == 0 { 0.0 } else { da[i - 1] };
        let next = (lambda * a[i] - i as f64 * prev) / (n - i) as f64;
        let dnext = (a[i] + lambda * da[i] - i as f64 * dprev) / (n - i) as f64;
        a.push(next);
        da.push(dnext);
    }
    let residual = r as f64 * a[r - 1] - lambda * a[r];
    let dresidual = r as f64 * da[r - 1] - a[r] - lambda * da[r];
    (a, residual, dresidual)
}

/// Evaluate `sum_i coeffs[i] K_i(k)` with the float Krawchouk recurrence.
fn krawchouk_combination(n: usize, coeffs: &[f64], k: usize) -> f64 {
    let n_f = n as f64;
    let x = k as f64;
    let mut prev = 1.0f64;
    let mut acc = coeffs[0] * prev;
    if coeffs.len() == 1 {
        return acc;
    }
    let mut cur = n_f - 2.0 * x;
    acc += coeffs[1] * cur;
    for s in 1..coeffs.len() - 1 {
        let s_f = s as f64;
        let next = ((n_f - 2.0 * x) * cur - (n_f - s_f + 1.0) * prev) / (s_f + 1.0);
        prev = cur;
        cur = next;
        acc += coeffs[s + 1] * cur;
    }
    acc
}

/// Top eigenpair of the radius-r ball subgraph via the level-reduced
/// operator.
pub fn ball_top_eigen(n: usize, r: usize) -> Result<BallEigenData> {
    if n == 0 {
        return Err(HamspecError::InvalidParameter("n >= 1 required".into()));
    }
    if r > n {
        return Err(HamspecError::InvalidParameter(format!(
            "radius r = {r} exceeds dimension n = {n}"
        )));
    }
    let (lambda, raw_profile) = if r == 0 {
        (0.0, vec![1.0])
    } else {
        let beta = offdiagonal(n, r);
        let (coarse, _) = tridiagonal_top_eigen(n, &beta);
        // Newton refinement on the shooting residual sharpens both the
        // eigenvalue and the profile to machine precision; the top
        // eigenvalue is separated from the rest of the spectrum, so the
        // power-iteration estimate is already inside the Newton basin.
        let mut lambda = if r == n { n as f64 } else { coarse };
        let mut solved = shooting(n, r, lambda);
        for _ in 0..60 {
            let step = solved.1 / solved.2;
            if !step.is_finite() {
                break;
            }
            lambda -= step;
            solved = shooting(n, r, lambda);
            if step.abs() < 1e-15 * n as f64 {
                break;
            }
        }
        if (lambda - coarse).abs() > 1e-6 * n as f64 {
            return Err(HamspecError::Internal(format!(
                "eigenvalue refinement diverged at n = {n}, r = {r}: {coarse} -> {lambda}"
            )));
        }
        (lambda, solved.0)
    };
    // normalize ||phi||_2 = 1, i.e. sum_i C(n,i) a_i^2 = 2^n
    let weights: Vec<f64> = (0..=r)
        .map(|i| binomial(n, i as i64).to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mass: f64 = raw_profile
        .iter()
        .zip(&weights)
        .map(|(a, w)| w * a * a)
        .sum::<f64>()
        / 2.0f64.powi(n as i32);
    let scale = 1.0 / mass.sqrt();
    let profile: Vec<f64> = raw_profile.iter().map(|a| a * scale).collect();
    if profile.iter().any(|&a| !(a > 0.0)) {
        return Err(HamspecError::Internal(format!(
            "ball eigenvector lost positivity at n = {n}, r = {r}"
        )));
    }
    let f_levels = (0..=n).map(|k| krawchouk_combination(n, &profile, k)).collect();
    Ok(BallEigenData { n, r, lambda, profile, f_levels })
}

/// Smallest r with `lambda_r >= threshold`; the scan exploits strict
/// monotonicity of `lambda_r` in r. Thresholds above n are unreachable
/// (`lambda_n = n`).
pub fn radius_search(n: usize, threshold: f64) -> Result<usize> {
    if threshold > n as f64 + 1e-12 {
        return Err(HamspecError::InvalidParameter(format!(
            "threshold {threshold} exceeds lambda_n = {n}; no radius exists"
        )));
    }
    let tol = 1e-9 * (n as f64).max(1.0);
    for r in 0..=n {
        let lambda = ball_top_eigen(n, r)?.lambda;
        if lambda >= threshold - tol {
            return Ok(r);
        }
    }
    // unreachable: lambda_n = n
    Err(HamspecError::Internal("radius scan exhausted".into()))
}

/// Report from the eigen-identity verification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityReport {
    /// Constant recovered from `(n - lambda - 2k) f(k) = c K_{r+1}(k)`.
    pub c_recovered: f64,
    /// The predicted value `(r+1) a_r`.
    pub c_predicted: f64,
    /// Max relative deviation of the identity over k = 0..n.
    pub identity_dev: f64,
    /// Distance from `(n - lambda)/2` to the nearest root of `K_{r+1}`.
    pub root_gap: f64,
    /// `lambda_r - 2 sqrt(r(n-r))`, reported without a sign assertion.
    pub lambda_minus_two_sqrt: f64,
    /// Max deviation of the level-wise slack of `A phi - lambda phi` from its
    /// predicted support (value `(r+1) a_r` on the weight-(r+1) sphere, zero
    /// elsewhere), relative.
    pub slack_dev: f64,
}

/// Check the structural identities tying the ball eigenpair to Krawchouk
/// polynomials:
///
/// 1. `(n - lambda - 2k) f(k) = c K_{r+1}(k)` for a single positive c,
/// 2. `(n - lambda)/2` is a root of `K_{r+1}`,
/// 3. the gap `lambda - 2 sqrt(r(n-r))` (reported only),
/// 4. `A phi - lambda phi` is supported on the weight-(r+1) sphere with
///    value `(r+1) a_r`.
pub fn verify_eigen_identities(
    data: &BallEigenData,
    table: &KrawchoukTable,
) -> Result<IdentityReport> {
    let n = data.n;
    if table.n() != n {
        return Err(HamspecError::DimensionMismatch { left: table.n(), right: n });
    }
    if data.r >= n {
        return Err(HamspecError::InvalidParameter(format!(
            "identities need r < n, got r = {} = n",
            data.r
        )));
    }
    let r = data.r;
    let lambda = data.lambda;

    // (1) single-constant identity
    let kr1: Vec<f64> = (0..=n).map(|k| table.value_f64(r + 1, k)).collect();
    let lhs: Vec<f64> = (0..=n)
        .map(|k| (n as f64 - lambda - 2.0 * k as f64) * data.f_levels[k])
        .collect();
    let k_star = (0..=n)
        .max_by(|&a, &b| kr1[a].abs().partial_cmp(&kr1[b].abs()).unwrap())
        .unwrap();
    let c_recovered = lhs[k_star] / kr1[k_star];
    if !(c_recovered > 0.0) {
        return Err(HamspecError::VerificationFailed(format!(
            "recovered constant c = {c_recovered} is not positive"
        )));
    }
    let scale = lhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut identity_dev = 0.0f64;
    for k in 0..=n {
        let dev = (lhs[k] - c_recovered * kr1[k]).abs() / scale;
        if dev > 1e-8 {
            return Err(HamspecError::VerificationFailed(format!(
                "eigen identity fails at k = {k}: ({} - lambda - 2k) f(k) = {}, c K_{}({k}) = {}",
                n,
                lhs[k],
                r + 1,
                c_recovered * kr1[k]
            )));
        }
        identity_dev = identity_dev.max(dev);
    }
    let c_predicted = (r as f64 + 1.0) * data.profile[r];

    // (2) (n - lambda)/2 is a root of K_{r+1}
    let x0 = (n as f64 - lambda) / 2.0;
    let root = table.refine_root_near(r + 1, x0)?;
    let root_gap = (root - x0).abs();
    if root_gap > 1e-6 {
        return Err(HamspecError::VerificationFailed(format!(
            "(n - lambda)/2 = {x0} is {root_gap:e} away from the nearest root of K_{}",
            r + 1
        )));
    }

    // (3) reported gap
    let lambda_minus_two_sqrt = lambda - 2.0 * ((r * (n - r)) as f64).sqrt();

    // (4) level-wise slack of A phi - lambda phi
    let a = |i: i64| -> f64 {
        if i < 0 || i as usize > r {
            0.0
        } else {
            data.profile[i as usize]
        }
    };
    let slack_scale = lambda.abs().max(1.0) * data.profile.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut slack_dev = 0.0f64;
    for k in 0..=n {
        let applied = k as f64 * a(k as i64 - 1) + (n - k) as f64 * a(k as i64 + 1);
        let slack = applied - lambda * a(k as i64);
        let expected = if k == r + 1 { (r as f64 + 1.0) * data.profile[r] } else { 0.0 };
        let dev = (slack - expected).abs() / slack_scale;
        if dev > 1e-8 {
            return Err(HamspecError::VerificationFailed(format!(
                "slack of A phi - lambda phi deviates at level k = {k}: {slack} vs {expected}"
            )));
        }
        slack_dev = slack_dev.max(dev);
    }

    Ok(IdentityReport {
        c_recovered,
        c_predicted,
        identity_dev,
        root_gap,
        lambda_minus_two_sqrt,
        slack_dev,
    })
}

/// Brute-force oracle: top adjacency eigenvalue of the explicit induced
/// subgraph on the ball's `sum_{i<=r} C(n,i)` vertices (power iteration on
/// the sparse neighbor structure). Only for n <= 20.
pub fn ball_top_eigen_dense(n: usize, r: usize) -> Result<f64> {
    if n == 0 || n > 20 {
        return Err(HamspecError::Capacity { n, max: 20 });
    }
    if r > n {
        return Err(HamspecError::InvalidParameter(format!("r = {r} > n = {n}")));
    }
    let size = 1usize << n;
    let mut index = vec![usize::MAX; size];
    let mut points: Vec<u32> = Vec::new();
    for x in 0..size as u32 {
        if (x.count_ones() as usize) <= r {
            index[x as usize] = points.len();
            points.push(x);
        }
    }
    let m = points.len();
    if m == 1 {
        return Ok(0.0);
    }
    let shift = n as f64;
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut lambda_old = f64::INFINITY;
    let tol = EIGEN_TOL_FACTOR * n as f64;
    for _ in 0..EIGEN_MAX_ITERS {
        let mut w = vec![0.0; m];
        for (j, &x) in points.iter().enumerate() {
            let mut acc = shift * v[j];
            for i in 0..n {
                let y = (x ^ (1 << i)) as usize;
                let jy = index[y];
                if jy != usize::MAX {
                    acc += v[jy];
                }
            }
            w[j] = acc;
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut w {
            *x /= norm;
        }
        let mut lambda = 0.0;
        for (j, &x) in points.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..n {
                let y = (x ^ (1 << i)) as usize;
                let jy = index[y];
                if jy != usize::MAX {
                    acc += w[jy];
                }
            }
            lambda += acc * w[j];
        }
        v = w;
        if (lambda - lambda_old).abs() < tol {
            return Ok(lambda);
        }
        lambda_old = lambda;
    }
    Ok(lambda_old)
}

/// Rational stand-in for the ball eigenpair, used by the exact rank
/// computations: `lambda` approximates the true eigenvalue to better than
/// 2^-100 (exactly rational when the minimal Krawchouk root is an integer),
/// and the profile solves the first r rows of the level eigenproblem exactly
/// for that lambda, scaled so `coeffs[0] = 1`.
#[derive(Debug, Clone)]
pub struct RationalProfile {
    pub lambda: BigRational,
    pub coeffs: Vec<BigRational>,
}

pub fn rational_profile(table: &KrawchoukTable, r: usize) -> Result<RationalProfile> {
    let n = table.n();
    if r > n {
        return Err(HamspecError::InvalidParameter(format!("r = {r} > n = {n}")));
    }
    let lambda = if r == 0 {
        BigRational::zero()
    } else if r == n {
        BigRational::from(BigInt::from(n))
    } else {
        let root = table.min_root_rational(r + 1, 110)?;
        BigRational::from(BigInt::from(n)) - BigRational::from(BigInt::from(2)) * root
    };
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(r + 1);
    coeffs.push(BigRational::one());
    // rows i = 0..r-1 of the level eigenproblem:
    //   i a_{i-1} + (n-i) a_{i+1} = lambda a_i
    for i in 0..r {
        let prev = if i == 0 { BigRational::zero() } else { coeffs[i - 1].clone() };
        let next = (&lambda * &coeffs[i] - BigRational::from(BigInt::from(i)) * prev)
            / BigRational::from(BigInt::from(n - i));
        if !next.is_positive() {
            return Err(HamspecError::Internal(format!(
                "rational profile lost positivity at level {} (n = {n}, r = {r})",
                i + 1
            )));
        }
        coeffs.push(next);
    }
    Ok(RationalProfile { lambda, coeffs })
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let full = ball_top_eigen(6, 6).map(|d| (d.lambda - 6.0).abs() < 1e-9).unwrap_or(false);
    results.push(("lambda_n = n (n=6)".into(), full));
    let star = ball_top_eigen(4, 1).map(|d| (d.lambda - 2.0).abs() < 1e-9).unwrap_or(false);
    results.push(("lambda_1 = 2 at n=4".into(), star));
    let dense_match = (|| -> Result<bool> {
        let level = ball_top_eigen(10, 3)?.lambda;
        let dense = ball_top_eigen_dense(10, 3)?;
        Ok((level - dense).abs() < 1e-8)
    })()
    .unwrap_or(false);
    results.push(("level vs induced-subgraph eigenvalue (n=10, r=3)".into(), dense_match));
    let identities = (|| -> Result<bool> {
        let table = KrawchoukTable::build(10)?;
        let data = ball_top_eigen(10, 3)?;
        verify_eigen_identities(&data, &table).map(|_| true)
    })()
    .unwrap_or(false);
    results.push(("eigen identities (n=10, r=3)".into(), identities));
    results
}
