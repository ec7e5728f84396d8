//! The Gram-matrix rank argument on concrete codes.
//!
//! For a code C with minimal distance d, let r be the smallest radius whose
//! ball eigenvalue reaches n - 2d + 1, and let phi be the ball eigenfunction
//! with level profile a_0..a_r. The |C| x |B_r| sign matrix
//! `M(y,S) = (-1)^<y,S>` and the diagonal D of phi values give the Gram
//! matrix `M D M^t` with entries `m_{y,z} = f(y+z)` where
//! `f(k) = sum_i a_i K_i(k)`. Its rank is bounded below by |C|/(2d), which
//! follows from the trace inequality
//! `(2d) N f(0)^2 >= sum_{y,z} f(y+z)^2`.
//!
//! Rank over floats is ill-posed, so the primary rank path is exact: the
//! profile is replaced by the rational shadow from
//! [`crate::ball_spectrum::rational_profile`] (eigenvalue accurate to
//! 2^-100), levels are scaled to integers, and
//!
//! * for linear codes the Gram matrix is a group-invariant matrix on
//!   C = F_2^k, so its eigenvalues are the Walsh transform of the level
//!   values over the code's coordinate space - exact integers; the rank is
//!   the number of nonzero transforms;
//! * for general codes the rank is computed by Gaussian elimination modulo
//!   two large primes (a nonzero minor mod p certifies the rank bound over
//!   the rationals).

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ball_spectrum::{ball_top_eigen, radius_search, rational_profile, BallEigenData};
use crate::codes::{distance, Code, LinearCode};
use crate::cube_fourier::BooleanFunction;
use crate::error::{HamspecError, Result};
use crate::krawchouk::{binomial, KrawchoukTable};

/// Materialization cap for the |C| x |C| Gram matrix.
pub const MAX_GRAM_SIZE: usize = 4096;
/// Dimension cap for the full-cube Fourier cross-check inside build_gram.
const MAX_IDENTITY_DIM: usize = 20;

const RANK_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 9_223_372_036_854_775_783];

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub size: usize,
    pub lambda: f64,
    /// Levels of f (normalized profile), `f(k) = sum_i a_i K_i(k)`.
    pub f_levels: Vec<f64>,
    /// Ordered pair counts of the code per distance.
    pub pair_counts: Vec<u64>,
    /// Exact rank of the rationalized Gram matrix (None above the
    /// materialization cap).
    pub rank: Option<usize>,
    /// Rank certified against the rationalization error margin.
    pub certified_rank: Option<usize>,
    pub rank_method: String,
    /// Set when exact and certified counts disagree (never observed; would
    /// indicate an eigenvalue too close to the error margin).
    pub rank_ambiguous: bool,
    /// `|C| / (2d)`.
    pub rank_bound: f64,
    pub rank_bound_ceil: usize,
    pub rank_ok: Option<bool>,
    /// `(2d) N f(0)^2`.
    pub trace_lhs: f64,
    /// `sum_{y,z} f(y+z)^2`.
    pub trace_rhs: f64,
    /// `(lhs - rhs) / max(lhs, |rhs|)`.
    pub trace_slack_rel: f64,
    /// `sum_{y,z} (n - 2|y+z|) f(y+z)^2` via the pair counts.
    pub identity_levels: Option<f64>,
    /// The same quantity through the Fourier route
    /// `2^{3n} <(A phi)*phi, (1_C hat)^2>_F` (full-cube work, n <= 20).
    pub identity_fourier: Option<f64>,
    pub identity_gap: Option<f64>,
}

/// Exact integer level values: the rational profile's `f(k)` with cleared
/// denominators (common scale does not affect rank).
fn integer_levels(table: &KrawchoukTable, r: usize) -> Result<Vec<BigInt>> {
    let profile = rational_profile(table, r)?;
    let n = table.n();
    let mut rationals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = num_rational::BigRational::zero();
        for (i, a) in profile.coeffs.iter().enumerate() {
            acc += a * num_rational::BigRational::from(table.value(i, k).clone());
        }
        rationals.push(acc);
    }
    let mut denom = BigInt::from(1);
    for q in &rationals {
        denom = denom.lcm(q.denom());
    }
    Ok(rationals
        .iter()
        .map(|q| q.numer() * (&denom / q.denom()))
        .collect())
}

/// If the words form a linear code, return a basis with |C| = 2^dim.
fn detect_linear_basis(words: &[u64]) -> Option<Vec<u64>> {
    if words.binary_search(&0).is_err() {
        return None;
    }
    let mut pivots = [0u64; 64];
    let mut dim = 0usize;
    for &word in words {
        let mut w = word;
        while w != 0 {
            let lead = 63 - w.leading_zeros() as usize;
            if pivots[lead] == 0 {
                pivots[lead] = w;
                dim += 1;
                break;
            }
            w ^= pivots[lead];
        }
    }
    if 1usize << dim != words.len() {
        return None;
    }
    Some(pivots.iter().copied().filter(|&x| x != 0).collect())
}

/// Rank of the group-invariant Gram matrix of a linear code: the number of
/// nonzero Walsh transforms of the level values over the code coordinates.
fn rank_linear(words: &[u64], basis: &[u64], levels: &[BigInt]) -> (usize, usize, bool) {
    let k = basis.len();
    let mut span_words = vec![0u64; 1 << k];
    for (j, &b) in basis.iter().enumerate() {
        for i in 0..1usize << j {
            span_words[(1 << j) + i] = span_words[i] ^ b;
        }
    }
    debug_assert_eq!(span_words.len(), words.len());
    let mut values: Vec<BigInt> = span_words
        .iter()
        .map(|&w| levels[w.count_ones() as usize].clone())
        .collect();
    // in-place Walsh butterfly over the code's coordinate space
    let size = values.len();
    let mut h = 1;
    while h < size {
        let mut block = 0;
        while block < size {
            for i in block..block + h {
                let a = values[i].clone();
                let b = values[i + h].clone();
                values[i] = &a + &b;
                values[i + h] = a - b;
            }
            block += 2 * h;
        }
        h *= 2;
    }
    // margin for the 2^-100 eigenvalue rationalization, with generous slack
    let max_level = levels.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
    let margin = (max_level * BigInt::from(size)) >> 80;
    let rank = values.iter().filter(|v| !v.is_zero()).count();
    let certified = values.iter().filter(|v| v.abs() > margin).count();
    (rank, certified, rank != certified)
}

fn mod_reduce(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced residue fits")
}

fn rank_mod_p(words: &[u64], levels_mod: &[u64], p: u64) -> usize {
    let m = words.len();
    let mut rows: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| levels_mod[distance(words[i], words[j])])
                .collect()
        })
        .collect();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    let mut rank = 0usize;
    for col in 0..m {
        let Some(pivot) = (rank..m).find(|&row| rows[row][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = powmod(rows[rank][col], p - 2);
        for row in rank + 1..m {
            if rows[row][col] != 0 {
                let factor = mulmod(rows[row][col], inv);
                for c in col..m {
                    let sub = mulmod(factor, rows[rank][c]);
                    rows[row][c] = (rows[row][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Assemble the Gram report for a code and its matching ball eigenpair.
/// `ball.r` must equal `radius_search(n, n - 2d + 1)`.
pub fn build_gram(code: &Code, ball: &BallEigenData) -> Result<GramReport> {
    let n = code.n();
    if ball.n != n {
        return Err(HamspecError::DimensionMismatch { left: ball.n, right: n });
    }
    let d = code.min_distance()?;
    if d == 0 {
        return Err(HamspecError::InvalidParameter("code has distance 0".into()));
    }
    let threshold = n as f64 - 2.0 * d as f64 + 1.0;
    let expected_r = radius_search(n, threshold)?;
    if ball.r != expected_r {
        return Err(HamspecError::InvalidParameter(format!(
            "ball radius {} does not match radius_search(n, n-2d+1) = {expected_r}",
            ball.r
        )));
    }
    let size = code.len();
    let f = &ball.f_levels;
    let pair_counts = code.pair_counts();

    let trace_lhs = 2.0 * d as f64 * size as f64 * f[0] * f[0];
    let trace_rhs: f64 =
        pair_counts.iter().enumerate().map(|(k, &c)| c as f64 * f[k] * f[k]).sum();
    let trace_slack_rel = (trace_lhs - trace_rhs) / trace_lhs.abs().max(trace_rhs.abs()).max(1e-300);

    // identity cross-check: sum (n-2|y+z|) f^2(y+z) = 2^{3n} <(A phi)*phi, (1_C hat)^2>_F
    let (identity_levels, identity_fourier, identity_gap) = if n <= MAX_IDENTITY_DIM {
        let levels_side: f64 = pair_counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * (n as f64 - 2.0 * k as f64) * f[k] * f[k])
            .sum();
        let mut phi_levels = ball.profile.clone();
        phi_levels.resize(n + 1, 0.0);
        let phi = BooleanFunction::from_levels(n, &phi_levels)?;
        let conv = phi.adjacency_apply()?.convolve(&phi)?;
        let one_c = BooleanFunction::indicator(n, code.words().iter().map(|&w| w as u32))?;
        let chat = one_c.walsh_transform()?;
        let inner: f64 = conv
            .values()
            .iter()
            .zip(chat.values())
            .map(|(a, b)| a * b * b)
            .sum();
        let fourier_side = 2.0f64.powi(3 * n as i32) * inner;
        let gap = (levels_side - fourier_side).abs()
            / levels_side.abs().max(fourier_side.abs()).max(1e-300);
        (Some(levels_side), Some(fourier_side), Some(gap))
    } else {
        (None, None, None)
    };

    let rank_bound = size as f64 / (2.0 * d as f64);
    let rank_bound_ceil = size.div_ceil(2 * d);

    let (rank, certified_rank, rank_method, rank_ambiguous) = if size <= MAX_GRAM_SIZE {
        let table = KrawchoukTable::build(n)?;
        let levels = integer_levels(&table, ball.r)?;
        if let Some(basis) = detect_linear_basis(code.words()) {
            let (rank, certified, ambiguous) = rank_linear(code.words(), &basis, &levels);
            (Some(rank), Some(certified), "linear-character-transform".to_string(), ambiguous)
        } else {
            let ranks: Vec<usize> = RANK_PRIMES
                .iter()
                .map(|&p| {
                    let levels_mod: Vec<u64> =
                        levels.iter().map(|v| mod_reduce(v, p)).collect();
                    rank_mod_p(code.words(), &levels_mod, p)
                })
                .collect();
            let rank = *ranks.iter().max().unwrap();
            (
                Some(rank),
                Some(rank),
                "modular-elimination".to_string(),
                ranks.iter().any(|&r| r != rank),
            )
        }
    } else {
        (None, None, "trace-only".to_string(), false)
    };
    let rank_ok = rank.map(|r| r >= rank_bound_ceil);

    Ok(GramReport {
        n,
        d,
        r: ball.r,
        size,
        lambda: ball.lambda,
        f_levels: f.clone(),
        pair_counts,
        rank,
        certified_rank,
        rank_method,
        rank_ambiguous,
        rank_bound,
        rank_bound_ceil,
        rank_ok,
        trace_lhs,
        trace_rhs,
        trace_slack_rel,
        identity_levels,
        identity_fourier,
        identity_gap,
    })
}

/// Convenience: run the full pipeline for a code (ball radius included).
pub fn verify_code(code: &Code) -> Result<GramReport> {
    let n = code.n();
    let d = code.min_distance()?;
    let r = radius_search(n, n as f64 - 2.0 * d as f64 + 1.0)?;
    let ball = ball_top_eigen(n, r)?;
    build_gram(code, &ball)
}

/// Check the trace inequality `(2d) N f(0)^2 >= sum f(y+z)^2` with
/// nonnegative slack (>= -1e-9 relative), and the Fourier/levels identity
/// when it was computed. A violation is flagged as an error: the statement
/// is proved, so failure indicates an implementation bug.
pub fn verify_trace_inequality(report: &GramReport) -> Result<()> {
    if report.trace_slack_rel < -1e-9 {
        return Err(HamspecError::VerificationFailed(format!(
            "trace inequality violated: lhs = {}, rhs = {}, slack = {}",
            report.trace_lhs, report.trace_rhs, report.trace_slack_rel
        )));
    }
    if let Some(gap) = report.identity_gap {
        if gap > 1e-9 {
            return Err(HamspecError::VerificationFailed(format!(
                "levels/Fourier identity gap {gap:e} exceeds 1e-9"
            )));
        }
    }
    Ok(())
}

/// Dimension-count diagnostics around the rank bound.
#[derive(Debug, Clone, Serialize)]
pub struct RateDiagnostic {
    pub size: usize,
    /// `2d sum_{k<=r} C(n,k)`.
    pub dimension_bound: f64,
    /// `(1/n) log2` of the two quantities above.
    pub size_exponent: f64,
    pub bound_exponent: f64,
    /// `sum_{k<=r} C(n,k)` (the column count of M).
    pub ball_volume: f64,
    pub rank_le_volume: Option<bool>,
    /// `H(r/n)`, the entropy bound on `(1/n) log2` of the ball volume.
    pub entropy_of_radius: f64,
    pub volume_exponent: f64,
    pub volume_exponent_le_entropy: bool,
}

pub fn rank_vs_dimension_bound(report: &GramReport) -> Result<RateDiagnostic> {
    let n = report.n;
    let volume: f64 = (0..=report.r)
        .map(|k| binomial(n, k as i64).to_f64().unwrap_or(f64::INFINITY))
        .sum();
    let bound = 2.0 * report.d as f64 * volume;
    let entropy_of_radius = crate::rate_bounds::entropy(report.r as f64 / n as f64)?;
    let volume_exponent = volume.log2() / n as f64;
    Ok(RateDiagnostic {
        size: report.size,
        dimension_bound: bound,
        size_exponent: (report.size as f64).log2() / n as f64,
        bound_exponent: bound.log2() / n as f64,
        ball_volume: volume,
        rank_le_volume: report.rank.map(|r| r as f64 <= volume),
        entropy_of_radius,
        volume_exponent,
        volume_exponent_le_entropy: volume_exponent <= entropy_of_radius + 1e-12,
    })
}

/// For linear codes, the projection span dimension has a covering
/// description: `dim <{Lambda_r delta_x}> = |Union_{z in Cperp} (z + B_r)| / |Cperp|`.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub rank: usize,
    pub covered_points: u64,
    pub dual_size: u64,
    pub equal: bool,
}

/// Verify the covering identity by computing both sides exactly: the rank of
/// the sign matrix M (over the rationals, via the group transform of
/// `sum_{k<=r} K_k`) and the explicit union of dual-centered balls.
pub fn verify_covering_equivalence(code: &LinearCode, r: usize) -> Result<CoveringReport> {
    let n = code.n();
    if n > MAX_IDENTITY_DIM {
        return Err(HamspecError::Capacity { n, max: MAX_IDENTITY_DIM });
    }
    if r > n {
        return Err(HamspecError::InvalidParameter(format!("r = {r} > n = {n}")));
    }
    let table = KrawchoukTable::build(n)?;
    // rank(M) = rank(M M^t); M M^t is the group matrix of sum_{k<=r} K_k
    let levels: Vec<BigInt> = (0..=n)
        .map(|k| (0..=r).fold(BigInt::zero(), |acc, s| acc + table.value(s, k)))
        .collect();
    let words = code.span()?;
    let basis = detect_linear_basis(&words).ok_or_else(|| {
        HamspecError::Internal("span of a linear code must be linear".into())
    })?;
    let (rank, _, _) = rank_linear(&words, &basis, &levels);

    let dual = code.dual()?;
    let dual_words = dual.span()?;
    let ball: Vec<u64> = (0..1u64 << n)
        .filter(|x| (x.count_ones() as usize) <= r)
        .collect();
    if dual_words.len().saturating_mul(ball.len()) > 1 << 26 {
        return Err(HamspecError::Capacity {
            n: dual_words.len() * ball.len(),
            max: 1 << 26,
        });
    }
    let mut covered = vec![false; 1 << n];
    for &z in &dual_words {
        for &b in &ball {
            covered[(z ^ b) as usize] = true;
        }
    }
    let covered_points = covered.iter().filter(|&&c| c).count() as u64;
    let dual_size = dual_words.len() as u64;
    let equal = covered_points == rank as u64 * dual_size;
    if !equal {
        return Err(HamspecError::VerificationFailed(format!(
            "covering identity fails: rank = {rank}, covered/|Cperp| = {covered_points}/{dual_size}"
        )));
    }
    Ok(CoveringReport { rank, covered_points, dual_size, equal })
}

/// Dense Gram matrix for diagnostics (PSD and spectrum tests).
pub fn gram_matrix_f64(report: &GramReport, code: &Code) -> DMatrix<f64> {
    let m = code.len();
    DMatrix::from_fn(m, m, |i, j| {
        report.f_levels[distance(code.words()[i], code.words()[j])]
    })
}

/// Numeric rank with the diagnostic SVD tolerance (1e-9 relative to the top
/// singular value).
pub fn svd_rank(matrix: &DMatrix<f64>) -> usize {
    let svd = matrix.clone().svd(false, false);
    let top = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > 1e-9 * top).count()
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let pair = Code::new(2, vec![0b00, 0b11]).unwrap();
    let pair_ok = verify_code(&pair)
        .map(|rep| rep.rank == Some(1) && rep.rank_ok == Some(true))
        .unwrap_or(false);
    results.push(("two-word code rank bound".into(), pair_ok));
    let ham = crate::codes::hamming_7_4().to_code().unwrap();
    let ham_ok = verify_code(&ham)
        .map(|rep| {
            rep.rank_ok == Some(true)
                && verify_trace_inequality(&rep).is_ok()
                && rep.rank.unwrap() >= 3
        })
        .unwrap_or(false);
    results.push(("[7,4] Hamming rank and trace".into(), ham_ok));
    let covering = verify_covering_equivalence(&crate::codes::hamming_7_4(), 1)
        .map(|c| c.equal)
        .unwrap_or(false);
    results.push(("covering identity at r=1".into(), covering));
    results
}
