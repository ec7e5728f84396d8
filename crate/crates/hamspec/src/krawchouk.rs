//! Exact Krawchouk polynomial tables, their roots, and the ratio bounds used
//! by the distance-graph density estimates.
//!
//! `K_s` is the degree-s univariate polynomial with
//! `K_s(k) = sum_j (-1)^j C(k,j) C(n-k, s-j)`; on integer points it equals
//! the level function of the sum of all weight-s Walsh characters. Values at
//! integer points are kept as arbitrary-precision integers: they overflow 64
//! bits beyond n around 35, and exactness turns the orthogonality relation
//! `2^-n sum_k C(n,k) K_s(k) K_t(k) = delta_st C(n,s)` into a hard test.
//!
//! Floating point enters only for root location, which uses sign changes of
//! the exact integer values followed by bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HamspecError, Result};

/// Exact binomial coefficient C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: i64) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Table of exact values K_s(k) for 0 <= s, k <= n.
#[derive(Debug, Clone)]
pub struct KrawchoukTable {
    n: usize,
    /// `values[s][k] = K_s(k)`.
    values: Vec<Vec<BigInt>>,
}

/// Roots of one Krawchouk polynomial, in increasing order.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RootData {
    pub s: usize,
    pub roots: Vec<f64>,
    pub min_root: f64,
}

/// Outcome of the two bounds on `g = K_s / (x - a)` for a root `a`:
/// a norm lower bound and a pointwise upper bound with explicit constants.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub s: usize,
    pub a: f64,
    /// `||g||_2^2 = 2^-n sum_k C(n,k) g(k)^2`.
    pub norm_sq: f64,
    /// The claimed lower bound `C(n,s) / n^2`.
    pub norm_lower: f64,
    pub norm_lower_ok: bool,
    /// `max_k g(k)^2 C(n,k) / (2^n C(n,s))`, to be compared against `4 n^3`.
    pub pointwise_ratio_max: f64,
    pub pointwise_limit: f64,
    pub pointwise_ok: bool,
    /// Sanity: `||g||_2^2 <= n^2 C(n,s)` (all roots lie in (0,n)).
    pub norm_upper_ok: bool,
}

impl KrawchoukTable {
    /// Build the exact table via the three-term recurrence
    /// `(s+1) K_{s+1}(k) = (n-2k) K_s(k) - (n-s+1) K_{s-1}(k)`,
    /// cross-checked against the defining alternating sum for s <= 6.
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HamspecError::InvalidParameter("table needs n >= 1".into()));
        }
        let mut values: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        values.push(vec![BigInt::one(); n + 1]);
        let row1: Vec<BigInt> =
            (0..=n).map(|k| BigInt::from(n as i64 - 2 * k as i64)).collect();
        if n >= 1 {
            values.push(row1);
        }
        for s in 1..n {
            let mut next = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let lead = BigInt::from(n as i64 - 2 * k as i64) * &values[s][k];
                let tail = BigInt::from((n - s + 1) as i64) * &values[s - 1][k];
                let num = lead - tail;
                let (q, r) = num_integer::Integer::div_rem(&num, &BigInt::from((s + 1) as i64));
                if !r.is_zero() {
                    return Err(HamspecError::Internal(format!(
                        "recurrence for K_{}({k}) not divisible by {}",
                        s + 1,
                        s + 1
                    )));
                }
                next.push(q);
            }
            values.push(next);
        }
        let table = KrawchoukTable { n, values };
        for s in 0..=n.min(6) {
            for k in 0..=n {
                if table.values[s][k] != defining_sum(n, s, k) {
                    return Err(HamspecError::Internal(format!(
                        "recurrence disagrees with defining sum at K_{s}({k})"
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact value K_s(k).
    pub fn value(&self, s: usize, k: usize) -> &BigInt {
        &self.values[s][k]
    }

    pub fn value_f64(&self, s: usize, k: usize) -> f64 {
        self.values[s][k].to_f64().unwrap_or(f64::INFINITY)
    }

    /// Evaluate K_s at a real point by running the recurrence in `x`.
    pub fn eval_real(&self, s: usize, x: f64) -> f64 {
        self.eval_with_derivative(s, x).0
    }

    /// `(K_s(x), K_s'(x))`, both from the differentiated recurrence.
    pub fn eval_with_derivative(&self, s: usize, x: f64) -> (f64, f64) {
        let n = self.n as f64;
        let (mut prev, mut dprev) = (1.0f64, 0.0f64);
        if s == 0 {
            return (prev, dprev);
        }
        let (mut cur, mut dcur) = (n - 2.0 * x, -2.0f64);
        for t in 1..s {
            let t_f = t as f64;
            let next = ((n - 2.0 * x) * cur - (n - t_f + 1.0) * prev) / (t_f + 1.0);
            let dnext =
                (-2.0 * cur + (n - 2.0 * x) * dcur - (n - t_f + 1.0) * dprev) / (t_f + 1.0);
            prev = cur;
            dprev = dcur;
            cur = next;
            dcur = dnext;
        }
        (cur, dcur)
    }

    /// Exact rational evaluation of K_s at a rational point.
    pub fn eval_rational(&self, s: usize, x: &BigRational) -> BigRational {
        let n = BigRational::from(BigInt::from(self.n));
        let two = BigRational::from(BigInt::from(2));
        let mut prev = BigRational::one();
        if s == 0 {
            return prev;
        }
        let mut cur = &n - &two * x;
        for t in 1..s {
            let t_r = BigRational::from(BigInt::from(t));
            let next = ((&n - &two * x) * &cur - (&n - &t_r + BigRational::one()) * &prev)
                / (&t_r + BigRational::one());
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Level function `k -> sum_i coeffs[i] * K_i(k)` for k = 0..n.
    pub fn symmetric_to_pointwise(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() > self.n + 1 {
            return Err(HamspecError::InvalidParameter(format!(
                "{} coefficients exceed degree cap n = {}",
                coeffs.len(),
                self.n
            )));
        }
        Ok((0..=self.n)
            .map(|k| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a * self.value_f64(i, k))
                    .sum()
            })
            .collect())
    }

    /// Locate the s simple roots of K_s by sign changes of the exact integer
    /// values at integer points, refined by bisection to 1e-9.
    pub fn find_roots(&self, s: usize) -> Result<RootData> {
        if s == 0 || 2 * s > self.n {
            return Err(HamspecError::InvalidParameter(format!(
                "find_roots needs 1 <= s <= n/2, got s = {s}, n = {}",
                self.n
            )));
        }
        let mut roots = Vec::with_capacity(s);
        let mut last_sign: Option<(usize, i32)> = None;
        for k in 0..=self.n {
            let v = &self.values[s][k];
            if v.is_zero() {
                roots.push(k as f64);
                last_sign = None;
                continue;
            }
            let sign = if v.is_positive() { 1 } else { -1 };
            if let Some((k0, s0)) = last_sign {
                if s0 != sign {
                    roots.push(self.bisect(s, k0 as f64, k as f64));
                }
            }
            last_sign = Some((k, sign));
        }
        if roots.len() != s {
            return Err(HamspecError::Internal(format!(
                "K_{s} (n = {}): found {} roots, expected {s}",
                self.n,
                roots.len()
            )));
        }
        for w in roots.windows(2) {
            if w[1] - w[0] < 2.0 - 1e-6 {
                return Err(HamspecError::Internal(format!(
                    "consecutive roots {} and {} of K_{s} closer than 2",
                    w[0], w[1]
                )));
            }
        }
        if roots[0] <= 0.0 || roots[s - 1] >= self.n as f64 {
            return Err(HamspecError::Internal(format!(
                "roots of K_{s} escaped the open interval (0, {})",
                self.n
            )));
        }
        Ok(RootData { s, min_root: roots[0], roots })
    }

    fn bisect(&self, s: usize, mut lo: f64, mut hi: f64) -> f64 {
        let sign_lo = self.eval_real(s, lo).signum();
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.eval_real(s, mid);
            if f_mid == 0.0 {
                return mid;
            }
            if f_mid.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Refine the root of K_s nearest to `x0` (must lie within 0.75 of one).
    pub fn refine_root_near(&self, s: usize, x0: f64) -> Result<f64> {
        let (v, d) = self.eval_with_derivative(s, x0);
        if d == 0.0 {
            return Err(HamspecError::InvalidParameter(format!(
                "K_{s}'({x0}) vanishes; no simple root nearby"
            )));
        }
        // Newton step bound for a simple root, then safeguarded bisection.
        let guess = x0 - v / d;
        let (mut lo, mut hi) = (guess - 0.75, guess + 0.75);
        let f_lo = self.eval_real(s, lo);
        let f_hi = self.eval_real(s, hi);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.signum() == f_hi.signum() {
            return Err(HamspecError::InvalidParameter(format!(
                "no sign change of K_{s} near {x0}"
            )));
        }
        let sign_lo = f_lo.signum();
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.eval_real(s, mid);
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Rational enclosure of the minimal root of K_s, to `2^-precision_bits`.
    ///
    /// The bracket comes from the exact integer sign pattern, so the interval
    /// is certified; the midpoint is returned. An exact integer root is
    /// returned exactly.
    pub fn min_root_rational(&self, s: usize, precision_bits: u32) -> Result<BigRational> {
        if s == 0 || s > self.n {
            return Err(HamspecError::InvalidParameter(format!(
                "min_root_rational needs 1 <= s <= n, got {s}"
            )));
        }
        let mut bracket: Option<(usize, usize)> = None;
        let mut prev: Option<(usize, bool)> = None;
        for k in 0..=self.n {
            let v = &self.values[s][k];
            if v.is_zero() {
                return Ok(BigRational::from(BigInt::from(k)));
            }
            let pos = v.is_positive();
            if let Some((k0, p0)) = prev {
                if p0 != pos {
                    bracket = Some((k0, k));
                    break;
                }
            }
            prev = Some((k, pos));
        }
        let (k0, k1) = bracket.ok_or_else(|| {
            HamspecError::Internal(format!("no sign change found for K_{s}"))
        })?;
        let mut lo = BigRational::from(BigInt::from(k0));
        let mut hi = BigRational::from(BigInt::from(k1));
        let lo_positive = self.values[s][k0].is_positive();
        let two = BigRational::from(BigInt::from(2));
        for _ in 0..precision_bits {
            let mid = (&lo + &hi) / &two;
            let v = self.eval_rational(s, &mid);
            if v.is_zero() {
                return Ok(mid);
            }
            if v.is_positive() == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((&lo + &hi) / &two)
    }

    /// Bounds on `g = K_s/(x-a)` at a root `a`: the norm lower bound
    /// `||g||_2^2 >= C(n,s)/n^2` with constant 1, and the pointwise bound
    /// `g^2(k) <= 4 n^3 2^n C(n,s) / C(n,k)` with the explicit constant 4n^3.
    pub fn check_ratio_bounds(&self, s: usize, a: f64) -> Result<BoundReport> {
        let (v, d) = self.eval_with_derivative(s, a);
        if d == 0.0 || (v / d).abs() > 1e-8 {
            return Err(HamspecError::InvalidParameter(format!(
                "a = {a} is not a root of K_{s} to 1e-9 (residual step {:e})",
                if d == 0.0 { f64::INFINITY } else { (v / d).abs() }
            )));
        }
        let n = self.n;
        let n_f = n as f64;
        let cns = binomial(n, s as i64).to_f64().unwrap_or(f64::INFINITY);
        let two_n = 2.0f64.powi(n as i32);
        let mut norm_sq = 0.0;
        let mut pointwise_ratio_max = 0.0f64;
        for k in 0..=n {
            let g = if (k as f64 - a).abs() < 1e-6 {
                // derivative limit at (numerically) integer roots
                self.eval_with_derivative(s, k as f64).1
            } else {
                self.value_f64(s, k) / (k as f64 - a)
            };
            let cnk = binomial(n, k as i64).to_f64().unwrap_or(f64::INFINITY);
            norm_sq += cnk * g * g / two_n;
            pointwise_ratio_max = pointwise_ratio_max.max(g * g * cnk / (two_n * cns));
        }
        let norm_lower = cns / (n_f * n_f);
        let pointwise_limit = 4.0 * n_f.powi(3);
        Ok(BoundReport {
            s,
            a,
            norm_sq,
            norm_lower,
            norm_lower_ok: norm_sq >= norm_lower * (1.0 - 1e-12),
            pointwise_ratio_max,
            pointwise_limit,
            pointwise_ok: pointwise_ratio_max <= pointwise_limit,
            norm_upper_ok: norm_sq <= n_f * n_f * cns * (1.0 + 1e-12),
        })
    }
}

/// The defining alternating sum, used as an independent cross-check of the
/// recurrence for small degrees.
fn defining_sum(n: usize, s: usize, k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=s {
        let term = binomial(k, j as i64) * binomial(n - k, (s - j) as i64);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Exact orthogonality defect: `sum_k C(n,k) K_s(k) K_t(k) - delta_st 2^n C(n,s)`.
pub fn orthogonality_defect(table: &KrawchoukTable, s: usize, t: usize) -> BigInt {
    let n = table.n();
    let mut acc = BigInt::zero();
    for k in 0..=n {
        acc += binomial(n, k as i64) * table.value(s, k) * table.value(t, k);
    }
    if s == t {
        acc -= (BigInt::one() << n) * binomial(n, s as i64);
    }
    acc
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let table = match KrawchoukTable::build(14) {
        Ok(t) => t,
        Err(_) => {
            results.push(("table build (n=14)".into(), false));
            return results;
        }
    };
    results.push(("recurrence vs defining sum (n=14, s<=6)".into(), true));
    let ortho = (0..=14).all(|s| {
        (0..=14).all(|t| orthogonality_defect(&table, s, t).is_zero())
    });
    results.push(("exact orthogonality (n=14)".into(), ortho));
    let roots_ok = (1..=7).all(|s| table.find_roots(s).is_ok());
    results.push(("root counts and gaps (n=14, s<=7)".into(), roots_ok));
    let bounds_ok = table
        .find_roots(4)
        .and_then(|r| table.check_ratio_bounds(4, r.min_root))
        .map(|b| b.norm_lower_ok && b.pointwise_ok)
        .unwrap_or(false);
    results.push(("ratio bounds at min root (n=14, s=4)".into(), bounds_ok));
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn degree_one_and_value_at_zero() {
        let table = KrawchoukTable::build(9).unwrap();
        for k in 0..=9 {
            assert_eq!(*table.value(1, k), BigInt::from(9i64 - 2 * k as i64));
            assert_eq!(*table.value(0, k), BigInt::one());
        }
        for s in 0..=9 {
            assert_eq!(*table.value(s, 0), binomial(9, s as i64));
        }
    }

    #[test]
    fn recurrence_matches_defining_sum_everywhere() {
        // the table itself cross-checks s <= 6; push further here
        for n in [5usize, 12, 20] {
            let table = KrawchoukTable::build(n).unwrap();
            for s in 0..=n {
                for k in 0..=n {
                    assert_eq!(*table.value(s, k), defining_sum(n, s, k), "n={n} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_diagonal_small() {
        let table = KrawchoukTable::build(6).unwrap();
        // 2^-6 sum_k C(6,k) K_2(k)^2 = C(6,2) = 15
        let mut acc = BigInt::zero();
        for k in 0..=6 {
            acc += binomial(6, k as i64) * table.value(2, k) * table.value(2, k);
        }
        assert_eq!(acc, BigInt::from(15i64 * 64));
        for s in 0..=6 {
            for t in 0..=6 {
                assert!(orthogonality_defect(&table, s, t).is_zero());
            }
        }
    }

    #[test]
    fn orthogonality_exact_up_to_12() {
        for n in 1..=12 {
            let table = KrawchoukTable::build(n).unwrap();
            for s in 0..=n {
                for t in 0..=n {
                    assert!(
                        orthogonality_defect(&table, s, t).is_zero(),
                        "n={n} s={s} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_root_of_k1() {
        let table = KrawchoukTable::build(8).unwrap();
        let roots = table.find_roots(1).unwrap();
        assert_eq!(roots.roots.len(), 1);
        assert!((roots.min_root - 4.0).abs() < 1e-9);
    }

    #[test]
    fn quadratic_roots_match_formula() {
        // n=6: K_2(x) = 2x^2 - 12x + 15, roots 3 -+ sqrt(6)/2
        let table = KrawchoukTable::build(6).unwrap();
        let roots = table.find_roots(2).unwrap();
        let offset = (6.0f64).sqrt() / 2.0;
        assert!((roots.roots[0] - (3.0 - offset)).abs() < 1e-8);
        assert!((roots.roots[1] - (3.0 + offset)).abs() < 1e-8);
    }

    #[test]
    fn root_gaps_at_least_two() {
        for n in 4..=20 {
            let table = KrawchoukTable::build(n).unwrap();
            for s in 1..=n / 2 {
                let data = table.find_roots(s).unwrap();
                assert_eq!(data.roots.len(), s);
                for w in data.roots.windows(2) {
                    assert!(w[1] - w[0] >= 2.0 - 1e-6, "n={n} s={s}");
                }
                assert!(data.roots[0] > 0.0 && data.roots[s - 1] < n as f64);
            }
        }
    }

    #[test]
    fn find_roots_preconditions() {
        let table = KrawchoukTable::build(10).unwrap();
        assert!(table.find_roots(0).is_err());
        assert!(table.find_roots(6).is_err());
    }

    #[test]
    fn rational_min_root_brackets_float_root() {
        let table = KrawchoukTable::build(14).unwrap();
        for s in 1..=7 {
            let float_root = table.find_roots(s).unwrap().min_root;
            let rational = table.min_root_rational(s, 110).unwrap();
            let approx = rational.to_f64().unwrap();
            assert!((approx - float_root).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn rational_min_root_exact_integer_case() {
        // n=4: K_2(1) = 0 exactly, so the minimal root is the integer 1
        let table = KrawchoukTable::build(4).unwrap();
        let root = table.min_root_rational(2, 110).unwrap();
        assert_eq!(root, BigRational::from_i64(1).unwrap());
    }

    #[test]
    fn ratio_bounds_hold_at_all_roots() {
        let table = KrawchoukTable::build(10).unwrap();
        let data = table.find_roots(3).unwrap();
        let report = table.check_ratio_bounds(3, data.min_root).unwrap();
        assert!(report.norm_lower_ok && report.pointwise_ok && report.norm_upper_ok);

        let table14 = KrawchoukTable::build(14).unwrap();
        let data4 = table14.find_roots(4).unwrap();
        for &a in &data4.roots {
            let rep = table14.check_ratio_bounds(4, a).unwrap();
            assert!(rep.norm_lower_ok, "norm bound at a={a}");
            assert!(rep.pointwise_ok, "pointwise bound at a={a}");
            assert!(rep.norm_upper_ok, "norm sanity at a={a}");
        }
    }

    #[test]
    fn ratio_bounds_reject_non_root() {
        let table = KrawchoukTable::build(10).unwrap();
        assert!(table.check_ratio_bounds(3, 1.0).is_err());
    }

    #[test]
    fn symmetric_to_pointwise_basics() {
        let table = KrawchoukTable::build(7).unwrap();
        let constant = table.symmetric_to_pointwise(&[1.0]).unwrap();
        assert!(constant.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let linear = table.symmetric_to_pointwise(&[0.0, 1.0]).unwrap();
        for (k, v) in linear.iter().enumerate() {
            assert!((v - (7.0 - 2.0 * k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_to_pointwise_matches_cube_transform() {
        // random coefficients, n = 10: the level function of sum_i a_i K_i
        // equals 2^n * inverse-transform of the symmetric profile a_{|alpha|<=r}
        use crate::cube_fourier::BooleanFunction;
        let mut r = crate::testutil::rng(41);
        let n = 10;
        let table = KrawchoukTable::build(n).unwrap();
        let coeffs: Vec<f64> =
            (0..4).map(|_| rand::Rng::gen_range(&mut r, -1.0..1.0)).collect();
        let levels = table.symmetric_to_pointwise(&coeffs).unwrap();
        // build fhat(alpha) = a_{|alpha|} / C(n,|alpha|) * ... : the sum of all
        // weight-i characters with coefficient a_i is the Fourier profile
        // fhat(alpha) = a_i for |alpha| = i.
        let mut fh = vec![0.0; 1 << n];
        for (alpha, slot) in fh.iter_mut().enumerate() {
            let w = (alpha as u32).count_ones() as usize;
            if w < coeffs.len() {
                *slot = coeffs[w];
            }
        }
        let fhat =
            BooleanFunction::from_values(n, crate::cube_fourier::Domain::Fourier, fh).unwrap();
        let f = fhat.inverse_walsh_transform().unwrap();
        for (x, v) in f.values().iter().enumerate() {
            let k = (x as u32).count_ones() as usize;
            assert!((v - levels[k]).abs() < 1e-9, "x={x}");
        }
    }
}
