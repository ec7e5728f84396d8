//! Binary codes: distance computations, GF(2) span and dual, and the two
//! random-code ensembles (random linear codes of prescribed dimension, and
//! general random codes with pairwise erasure below a cutoff distance).
//!
//! Codewords are bit words (`u64`, so n <= 64); coordinate i is bit i. The
//! plain-text file format is one 0/1 string per line, leftmost character =
//! coordinate 0, preceded by a `n=<int>` header line and, for generator
//! matrices, a `linear k=<int>` line.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HamspecError, Result};
use crate::krawchouk::binomial;

pub const MAX_WORD_BITS: usize = 64;
/// Span materialization cap: 2^k words.
pub const MAX_SPAN_DIM: usize = 24;

fn word_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_WORD_BITS {
        return Err(HamspecError::Capacity { n, max: MAX_WORD_BITS });
    }
    Ok(())
}

pub fn distance(a: u64, b: u64) -> usize {
    (a ^ b).count_ones() as usize
}

/// A code: a set of distinct n-bit words, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    words: Vec<u64>,
}

impl Code {
    pub fn new(n: usize, mut words: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        let mask = word_mask(n);
        if words.iter().any(|&w| w & !mask != 0) {
            return Err(HamspecError::InvalidParameter(format!(
                "codeword does not fit in {n} coordinates"
            )));
        }
        words.sort_unstable();
        words.dedup();
        if words.is_empty() {
            return Err(HamspecError::InvalidParameter("code must be nonempty".into()));
        }
        Ok(Code { n, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exact minimum pairwise Hamming distance (needs at least two words).
    pub fn min_distance(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(HamspecError::InvalidParameter(
                "minimal distance needs |C| >= 2".into(),
            ));
        }
        let mut best = self.n + 1;
        for (i, &x) in self.words.iter().enumerate() {
            for &y in &self.words[i + 1..] {
                best = best.min(distance(x, y));
            }
        }
        Ok(best)
    }

    /// Ordered pair counts per distance: `counts[k] = #{(x,y) : |x-y| = k}`.
    pub fn pair_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n + 1];
        counts[0] = self.words.len() as u64;
        for (i, &x) in self.words.iter().enumerate() {
            for &y in &self.words[i + 1..] {
                counts[distance(x, y)] += 2;
            }
        }
        counts
    }

    /// Distance distribution `B_k = (1/|C|) #{(x,y) in C^2 : |x-y| = k}`.
    pub fn distance_distribution(&self) -> Vec<f64> {
        let size = self.words.len() as f64;
        self.pair_counts().iter().map(|&c| c as f64 / size).collect()
    }
}

/// A linear code, stored through its generators; the reduced basis is kept
/// alongside.
#[derive(Debug, Clone)]
pub struct LinearCode {
    n: usize,
    generators: Vec<u64>,
    basis: Vec<u64>,
}

fn gf2_basis(words: &[u64]) -> Vec<u64> {
    let mut pivots = [0u64; 64];
    for &word in words {
        let mut w = word;
        while w != 0 {
            let lead = 63 - w.leading_zeros() as usize;
            if pivots[lead] == 0 {
                pivots[lead] = w;
                break;
            }
            w ^= pivots[lead];
        }
    }
    pivots.iter().copied().filter(|&x| x != 0).collect()
}

impl LinearCode {
    pub fn new(n: usize, generators: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        let mask = word_mask(n);
        if generators.iter().any(|&w| w & !mask != 0) {
            return Err(HamspecError::InvalidParameter(format!(
                "generator does not fit in {n} coordinates"
            )));
        }
        let basis = gf2_basis(&generators);
        Ok(LinearCode { n, generators, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        1usize << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Materialize the span (2^dim words, capped at 2^24), sorted.
    pub fn span(&self) -> Result<Vec<u64>> {
        let k = self.basis.len();
        if k > MAX_SPAN_DIM {
            return Err(HamspecError::Capacity { n: k, max: MAX_SPAN_DIM });
        }
        let mut words = Vec::with_capacity(1 << k);
        words.push(0u64);
        for (j, &b) in self.basis.iter().enumerate() {
            for i in 0..1usize << j {
                let w = words[i] ^ b;
                words.push(w);
            }
        }
        words.sort_unstable();
        Ok(words)
    }

    pub fn to_code(&self) -> Result<Code> {
        Code::new(self.n, self.span()?)
    }

    /// Minimum nonzero weight; equals the minimum pairwise distance.
    pub fn min_distance(&self) -> Result<usize> {
        if self.basis.is_empty() {
            return Err(HamspecError::InvalidParameter(
                "minimal distance needs a nonzero code".into(),
            ));
        }
        Ok(self
            .span()?
            .iter()
            .filter(|&&w| w != 0)
            .map(|&w| w.count_ones() as usize)
            .min()
            .unwrap())
    }

    /// The weight-i slice `A = {x in C : |x| = i}`; may be empty.
    pub fn weight_slice(&self, i: usize) -> Result<Vec<u64>> {
        if i > self.n {
            return Err(HamspecError::InvalidParameter(format!(
                "weight {i} exceeds length {}",
                self.n
            )));
        }
        Ok(self
            .span()?
            .into_iter()
            .filter(|w| w.count_ones() as usize == i)
            .collect())
    }

    /// The dual code `{y : <x,y> = 0 mod 2 for all x in C}`.
    pub fn dual(&self) -> Result<LinearCode> {
        if self.n > MAX_SPAN_DIM {
            return Err(HamspecError::Capacity { n: self.n, max: MAX_SPAN_DIM });
        }
        // reduced row echelon form of the basis, then read off the null space
        let mut rows = self.basis.clone();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.n {
            if let Some(row) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) {
                rows.swap(rank, row);
                for r in 0..rows.len() {
                    if r != rank && rows[r] >> col & 1 == 1 {
                        rows[r] ^= rows[rank];
                    }
                }
                pivot_cols.push(col);
                rank += 1;
            }
        }
        let mut dual_basis = Vec::new();
        for free in 0..self.n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = 1u64 << free;
            for (row, &p) in pivot_cols.iter().enumerate() {
                if rows[row] >> free & 1 == 1 {
                    v |= 1u64 << p;
                }
            }
            dual_basis.push(v);
        }
        LinearCode::new(self.n, dual_basis)
    }
}

/// Parameters of the general random-code model: prescribed cardinality
/// `N = floor(2^{R n})`, erasure threshold constant tau, the derived cutoff
/// `d_0` (maximal with `(N/2^n) sum_{l < d_0} C(n,l) <= tau`) and
/// `theta = C(n,d_0) N / 2^n`.
#[derive(Debug, Clone, Serialize)]
pub struct RandomModelParams {
    pub n: usize,
    pub rate: f64,
    pub tau: f64,
    pub cardinality: usize,
    pub d0: usize,
    pub theta: f64,
}

impl RandomModelParams {
    pub fn new(n: usize, rate: f64, tau: f64) -> Result<Self> {
        check_n(n)?;
        if !(rate > 0.0 && rate < 1.0) {
            return Err(HamspecError::InvalidParameter(format!(
                "rate must lie in (0,1), got {rate}"
            )));
        }
        if !(tau > 0.0) {
            return Err(HamspecError::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        let cardinality = 2.0f64.powf(rate * n as f64).floor() as usize;
        if cardinality < 2 {
            return Err(HamspecError::InvalidParameter(format!(
                "prescribed cardinality floor(2^(Rn)) = {cardinality} is too small"
            )));
        }
        let two_n = 2.0f64.powi(n as i32);
        let n_over = cardinality as f64 / two_n;
        // d0 = maximal integer in [1, min(N, n)] with
        // (N/2^n) * sum_{l=0}^{d0-1} C(n,l) <= tau
        let mut d0 = 0usize;
        let mut partial = BigInt::from(0);
        for cand in 1..=n.min(cardinality) {
            partial += binomial(n, (cand - 1) as i64);
            let mass = n_over * partial.to_f64().unwrap_or(f64::INFINITY);
            if mass <= tau {
                d0 = cand;
            } else {
                break;
            }
        }
        if d0 < 1 {
            return Err(HamspecError::InvalidParameter(format!(
                "tau = {tau} is too small: even d0 = 1 violates the volume bound"
            )));
        }
        let theta =
            binomial(n, d0 as i64).to_f64().unwrap_or(f64::INFINITY) * cardinality as f64 / two_n;
        if theta > 0.5 {
            return Err(HamspecError::InvalidParameter(format!(
                "theta = {theta:.4} exceeds 1/2; lower tau or the rate"
            )));
        }
        Ok(RandomModelParams { n, rate, tau, cardinality, d0, theta })
    }
}

/// Span of k words drawn uniformly from a seeded generator. Rank-deficient
/// draws are kept: the model prescribes the generators, not the dimension.
pub fn sample_random_linear(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    check_n(n)?;
    if k > n.min(MAX_SPAN_DIM) {
        return Err(HamspecError::InvalidParameter(format!(
            "dimension k = {k} exceeds min(n, {MAX_SPAN_DIM})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = word_mask(n);
    let generators = (0..k).map(|_| rng.gen::<u64>() & mask).collect();
    LinearCode::new(n, generators)
}

/// The pre-erasure list of the general model: N points drawn uniformly and
/// independently (duplicates possible).
pub fn draw_point_list(params: &RandomModelParams, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = word_mask(params.n);
    (0..params.cardinality).map(|_| rng.gen::<u64>() & mask).collect()
}

/// General random code: draw N uniform points, then erase BOTH endpoints of
/// every pair at distance <= d0 - 1 (duplicates are distance-0 pairs and are
/// erased by the same rule). The survivors have minimal distance >= d0.
pub fn sample_random_general(params: &RandomModelParams, n: usize, seed: u64) -> Result<Code> {
    if n != params.n {
        return Err(HamspecError::DimensionMismatch { left: n, right: params.n });
    }
    if params.cardinality > 1 << 20 {
        return Err(HamspecError::Capacity { n: params.cardinality, max: 1 << 20 });
    }
    let list = draw_point_list(params, seed);
    let survivors = erase_close_pairs(&list, params.d0);
    let code = Code::new(n, survivors)?;
    if code.len() >= 2 && code.min_distance()? < params.d0 {
        return Err(HamspecError::Internal(
            "erasure step left a pair below the cutoff distance".into(),
        ));
    }
    Ok(code)
}

fn erase_close_pairs(list: &[u64], d0: usize) -> Vec<u64> {
    let mut erased = vec![false; list.len()];
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if distance(list[i], list[j]) <= d0.saturating_sub(1) {
                erased[i] = true;
                erased[j] = true;
            }
        }
    }
    list.iter()
        .zip(&erased)
        .filter(|(_, &e)| !e)
        .map(|(&w, _)| w)
        .collect()
}

/// Per-distance statistics of the pre-erasure list over an ensemble of
/// trials, compared against the exact pair-count moments, plus the
/// post-erasure survivor statistics.
///
/// Thresholds below marked "artifact choice" operationalize asymptotic O(.)
/// statements at desk scale and are not claims from the source material:
/// survivor fraction >= 1 - 5 tau, post-erasure pair-count factor in
/// [1 - 5 tau, 1.25], triple-count constant <= 10, covariance z-score <= 5.
#[derive(Debug, Clone, Serialize)]
pub struct EllStats {
    pub ell: usize,
    pub p_ell: f64,
    /// `M p_ell` with `M = C(N,2)`.
    pub expected_mean: f64,
    pub mean_x: f64,
    /// z-score of the observed mean against sigma/sqrt(trials).
    pub mean_z: f64,
    pub mean_within_4se: bool,
    pub var_x: f64,
    pub expected_var: f64,
    pub var_within_factor2: bool,
    /// Mean count of triples with one pairwise distance = ell and one below
    /// the cutoff, divided by `tau * M * p_ell`.
    pub mean_y: f64,
    pub y_constant: f64,
    pub y_ok: bool,
    /// Empirical covariance of the two indicator variables attached to two
    /// disjoint index pairs (pairwise independence makes it vanish).
    pub cov_disjoint: f64,
    pub cov_ok: bool,
    /// Post-erasure mean pair count divided by `M p_ell`.
    pub post_pair_factor: f64,
    pub post_pair_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub trials: usize,
    pub n: usize,
    pub tau: f64,
    pub cardinality: usize,
    pub d0: usize,
    pub theta: f64,
    pub ells: Vec<EllStats>,
    pub mean_survivor_fraction: f64,
    pub survivor_ok: bool,
    pub fraction_min_dist_eq_d0: f64,
    pub pass: bool,
}

/// Seeded ensemble run of the general model. Trial t uses seed
/// `master_seed ^ t`; trials run in parallel and are aggregated in trial
/// order, so the report does not depend on the thread count.
pub fn ensemble_statistics(
    trials: usize,
    params: &RandomModelParams,
    n: usize,
    master_seed: u64,
) -> Result<StatsReport> {
    if trials < 30 {
        return Err(HamspecError::InvalidParameter(format!(
            "need at least 30 trials, got {trials}"
        )));
    }
    if n != params.n {
        return Err(HamspecError::DimensionMismatch { left: n, right: params.n });
    }
    let size = params.cardinality;
    let ells = [params.d0, n / 2];

    struct TrialOutcome {
        x_counts: Vec<u64>,
        y_counts: Vec<u64>,
        indicators: Vec<(f64, f64)>,
        survivors: usize,
        post_counts: Vec<u64>,
        min_dist_is_d0: bool,
    }

    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let list = draw_point_list(params, master_seed ^ t);
            let mut pair_hist = vec![0u64; n + 1];
            for i in 0..list.len() {
                for j in i + 1..list.len() {
                    pair_hist[distance(list[i], list[j])] += 1;
                }
            }
            let x_counts: Vec<u64> = ells.iter().map(|&l| pair_hist[l]).collect();
            let y_counts: Vec<u64> = ells
                .iter()
                .map(|&l| count_mixed_triples(&list, l, params.d0))
                .collect();
            let indicators: Vec<(f64, f64)> = ells
                .iter()
                .map(|&l| {
                    if size >= 4 {
                        (
                            (distance(list[0], list[1]) == l) as u8 as f64,
                            (distance(list[2], list[3]) == l) as u8 as f64,
                        )
                    } else {
                        (0.0, 0.0)
                    }
                })
                .collect();
            let surv = erase_close_pairs(&list, params.d0);
            let mut post_hist = vec![0u64; n + 1];
            for i in 0..surv.len() {
                for j in i + 1..surv.len() {
                    post_hist[distance(surv[i], surv[j])] += 1;
                }
            }
            let post_counts: Vec<u64> = ells.iter().map(|&l| post_hist[l]).collect();
            let min_dist_is_d0 = (params.d0..=n).find(|&k| post_hist[k] > 0) == Some(params.d0);
            TrialOutcome {
                x_counts,
                y_counts,
                indicators,
                survivors: surv.len(),
                post_counts,
                min_dist_is_d0,
            }
        })
        .collect();

    let t_f = trials as f64;
    let m_pairs = (size * (size - 1) / 2) as f64;
    let two_n = 2.0f64.powi(n as i32);
    let mut ell_stats = Vec::new();
    let mut pass = true;
    for (idx, &l) in ells.iter().enumerate() {
        let p = binomial(n, l as i64).to_f64().unwrap_or(f64::INFINITY) / two_n;
        let xs: Vec<f64> = outcomes.iter().map(|o| o.x_counts[idx] as f64).collect();
        let mean_x = xs.iter().sum::<f64>() / t_f;
        let var_x = xs.iter().map(|x| (x - mean_x).powi(2)).sum::<f64>() / (t_f - 1.0);
        let expected_mean = m_pairs * p;
        let expected_var = m_pairs * p * (1.0 - p);
        let se = (expected_var / t_f).sqrt();
        let mean_z = (mean_x - expected_mean).abs() / se;
        let mean_within_4se = mean_z <= 4.0;
        let var_within_factor2 = var_x <= 2.0 * expected_var && var_x >= expected_var / 2.0;
        let mean_y =
            outcomes.iter().map(|o| o.y_counts[idx] as f64).sum::<f64>() / t_f;
        let y_constant = mean_y / (params.tau * m_pairs * p);
        let y_ok = y_constant <= 10.0;
        let (sum_a, sum_b, sum_ab) = outcomes.iter().fold((0.0, 0.0, 0.0), |acc, o| {
            let (a, b) = o.indicators[idx];
            (acc.0 + a, acc.1 + b, acc.2 + a * b)
        });
        let cov_disjoint = sum_ab / t_f - (sum_a / t_f) * (sum_b / t_f);
        // the indicator covariance concentrates around 0 at rate p/sqrt(T)
        let cov_ok = cov_disjoint.abs() <= 5.0 * (p * (1.0 - p) / t_f).sqrt().max(1e-12);
        let post_mean =
            outcomes.iter().map(|o| o.post_counts[idx] as f64).sum::<f64>() / t_f;
        let post_pair_factor = post_mean / expected_mean;
        // the 1 -+ 5 tau window is a statement about the mean; allow the same
        // 4-standard-error sampling slack as the mean check (it matters when
        // M p_ell is only a handful of pairs)
        let post_slack = 4.0 * se / expected_mean;
        let post_pair_ok = post_pair_factor >= 1.0 - 5.0 * params.tau - post_slack
            && post_pair_factor <= 1.25 + post_slack;
        pass &= mean_within_4se && var_within_factor2 && y_ok && cov_ok && post_pair_ok;
        ell_stats.push(EllStats {
            ell: l,
            p_ell: p,
            expected_mean,
            mean_x,
            mean_z,
            mean_within_4se,
            var_x,
            expected_var,
            var_within_factor2,
            mean_y,
            y_constant,
            y_ok,
            cov_disjoint,
            cov_ok,
            post_pair_factor,
            post_pair_ok,
        });
    }
    let mean_survivor_fraction =
        outcomes.iter().map(|o| o.survivors as f64).sum::<f64>() / t_f / size as f64;
    let survivor_ok = mean_survivor_fraction >= 1.0 - 5.0 * params.tau;
    let fraction_min_dist_eq_d0 =
        outcomes.iter().filter(|o| o.min_dist_is_d0).count() as f64 / t_f;
    pass &= survivor_ok;
    Ok(StatsReport {
        trials,
        n,
        tau: params.tau,
        cardinality: size,
        d0: params.d0,
        theta: params.theta,
        ells: ell_stats,
        mean_survivor_fraction,
        survivor_ok,
        fraction_min_dist_eq_d0,
        pass,
    })
}

/// Triples {a,b,c} with one pairwise distance equal to `ell` and one at most
/// `d0 - 1`.
fn count_mixed_triples(list: &[u64], ell: usize, d0: usize) -> u64 {
    let m = list.len();
    let mut count = 0u64;
    for a in 0..m {
        for b in a + 1..m {
            let dab = distance(list[a], list[b]);
            for c in b + 1..m {
                let dac = distance(list[a], list[c]);
                let dbc = distance(list[b], list[c]);
                let has_ell = dab == ell || dac == ell || dbc == ell;
                let has_close = dab < d0 || dac < d0 || dbc < d0;
                if has_ell && has_close {
                    count += 1;
                }
            }
        }
    }
    count
}

/// One parsed code file: either a plain word list or a generator matrix.
#[derive(Debug, Clone)]
pub enum CodeFile {
    General(Code),
    Linear(LinearCode),
}

impl CodeFile {
    pub fn to_code(&self) -> Result<Code> {
        match self {
            CodeFile::General(c) => Ok(c.clone()),
            CodeFile::Linear(l) => l.to_code(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeFile::General(c) => c.n(),
            CodeFile::Linear(l) => l.n(),
        }
    }
}

fn word_to_string(w: u64, n: usize) -> String {
    (0..n).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn word_from_string(s: &str, n: usize) -> Result<u64> {
    if s.len() != n {
        return Err(HamspecError::Parse(format!(
            "codeword '{s}' has length {}, expected {n}",
            s.len()
        )));
    }
    let mut w = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '1' => w |= 1u64 << i,
            '0' => {}
            _ => {
                return Err(HamspecError::Parse(format!(
                    "codeword '{s}' contains non-binary character '{ch}'"
                )))
            }
        }
    }
    Ok(w)
}

pub fn write_code<W: std::io::Write>(code: &Code, mut out: W) -> Result<()> {
    writeln!(out, "n={}", code.n())?;
    for &w in code.words() {
        writeln!(out, "{}", word_to_string(w, code.n()))?;
    }
    Ok(())
}

pub fn write_linear<W: std::io::Write>(code: &LinearCode, mut out: W) -> Result<()> {
    writeln!(out, "n={}", code.n())?;
    writeln!(out, "linear k={}", code.generators().len())?;
    for &w in code.generators() {
        writeln!(out, "{}", word_to_string(w, code.n()))?;
    }
    Ok(())
}

pub fn read_code_file<R: std::io::BufRead>(reader: R) -> Result<CodeFile> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| HamspecError::Parse("empty code file".into()))??;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .ok_or_else(|| HamspecError::Parse(format!("expected 'n=<int>' header, got '{header}'")))?
        .parse()
        .map_err(|e| HamspecError::Parse(format!("bad dimension: {e}")))?;
    let mut words = Vec::new();
    let mut linear_k: Option<usize> = None;
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("linear k=") {
            if !words.is_empty() {
                return Err(HamspecError::Parse(
                    "'linear k=' header must precede the rows".into(),
                ));
            }
            linear_k = Some(
                rest.parse()
                    .map_err(|e| HamspecError::Parse(format!("bad dimension k: {e}")))?,
            );
            continue;
        }
        words.push(word_from_string(trimmed, n)?);
    }
    match linear_k {
        Some(k) => {
            if words.len() != k {
                return Err(HamspecError::Parse(format!(
                    "generator matrix announces k={k} rows but has {}",
                    words.len()
                )));
            }
            Ok(CodeFile::Linear(LinearCode::new(n, words)?))
        }
        None => Ok(CodeFile::General(Code::new(n, words)?)),
    }
}

/// The [7,4] Hamming code (distance 3), used across tests and demos.
pub fn hamming_7_4() -> LinearCode {
    // rows: identity on coordinates 0..3, parity bits on 4..6
    let rows = vec![
        0b0110001u64, // 1000 110
        0b1010010,    // 0100 101
        0b1100100,    // 0010 011
        0b1111000,    // 0001 111
    ];
    LinearCode::new(7, rows).expect("static generator fits")
}

/// The length-n repetition code {0^n, 1^n}.
pub fn repetition(n: usize) -> Result<Code> {
    check_n(n)?;
    Code::new(n, vec![0, word_mask(n)])
}

/// Greedy random packing: draw seeded uniform words and keep those at
/// distance >= d from everything kept so far, until `size` words are found.
pub fn greedy_packing(n: usize, d: usize, size: usize, seed: u64) -> Result<Code> {
    check_n(n)?;
    if d == 0 || d > n {
        return Err(HamspecError::InvalidParameter(format!("need 1 <= d <= n, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = word_mask(n);
    let mut words: Vec<u64> = Vec::with_capacity(size);
    let budget = size.saturating_mul(2000);
    for _ in 0..budget {
        if words.len() == size {
            break;
        }
        let w = rng.gen::<u64>() & mask;
        if words.iter().all(|&x| distance(x, w) >= d) {
            words.push(w);
        }
    }
    if words.len() < size {
        return Err(HamspecError::InvalidParameter(format!(
            "could not pack {size} words at distance {d} in n = {n}"
        )));
    }
    Code::new(n, words)
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let ham = hamming_7_4();
    results.push((
        "[7,4] Hamming has distance 3".into(),
        ham.min_distance().map(|d| d == 3).unwrap_or(false),
    ));
    let dual_ok = ham
        .dual()
        .and_then(|d| {
            let weights_ok = d
                .span()?
                .iter()
                .all(|&w| w == 0 || w.count_ones() == 4);
            Ok(weights_ok && d.dimension() + ham.dimension() == 7)
        })
        .unwrap_or(false);
    results.push(("dual of [7,4] is the simplex code".into(), dual_ok));
    let det = {
        let a = sample_random_linear(12, 6, 99).unwrap();
        let b = sample_random_linear(12, 6, 99).unwrap();
        a.generators() == b.generators()
    };
    results.push(("seeded sampling is deterministic".into(), det));
    let general_ok = RandomModelParams::new(18, 0.25, 0.05)
        .and_then(|p| {
            let c = sample_random_general(&p, 18, 7)?;
            Ok(c.len() < 2 || c.min_distance()? >= p.d0)
        })
        .unwrap_or(false);
    results.push(("erasure model enforces the cutoff distance".into(), general_ok));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_code_distance() {
        for n in [2usize, 7, 14] {
            let code = repetition(n).unwrap();
            assert_eq!(code.min_distance().unwrap(), n);
            let b = code.distance_distribution();
            assert_eq!(b[0], 1.0);
            assert_eq!(b[n], 1.0);
            assert!((b.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_word_code() {
        let code = Code::new(2, vec![0b00, 0b11]).unwrap();
        assert_eq!(code.min_distance().unwrap(), 2);
        assert_eq!(code.distance_distribution(), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn hamming_weight_enumerator() {
        let ham = hamming_7_4();
        assert_eq!(ham.dimension(), 4);
        assert_eq!(ham.min_distance().unwrap(), 3);
        let mut enumerator = [0usize; 8];
        for w in ham.span().unwrap() {
            enumerator[w.count_ones() as usize] += 1;
        }
        assert_eq!(enumerator, [1, 0, 0, 7, 7, 0, 0, 1]);
        // distance distribution of a linear code = weight enumerator
        let code = ham.to_code().unwrap();
        let b = code.distance_distribution();
        for (k, &e) in enumerator.iter().enumerate() {
            assert!((b[k] - e as f64).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn weight_slices() {
        let ham = hamming_7_4();
        assert_eq!(ham.weight_slice(0).unwrap(), vec![0]);
        assert_eq!(ham.weight_slice(3).unwrap().len(), 7);
        assert_eq!(ham.weight_slice(1).unwrap().len(), 0);
        let rep = LinearCode::new(5, vec![0b11111]).unwrap();
        assert_eq!(rep.weight_slice(5).unwrap(), vec![0b11111]);
    }

    #[test]
    fn dual_codes() {
        // dual of {0} is the full cube
        let zero = LinearCode::new(4, vec![]).unwrap();
        let dual = zero.dual().unwrap();
        assert_eq!(dual.dimension(), 4);
        // dual of the repetition code is the even-weight code
        let rep = LinearCode::new(6, vec![0b111111]).unwrap();
        let even = rep.dual().unwrap();
        assert_eq!(even.dimension(), 5);
        assert!(even.span().unwrap().iter().all(|w| w.count_ones() % 2 == 0));
        // dual of [7,4] Hamming is the [7,3] simplex: all nonzero weights 4
        let simplex = hamming_7_4().dual().unwrap();
        assert_eq!(simplex.dimension(), 3);
        for w in simplex.span().unwrap() {
            assert!(w == 0 || w.count_ones() == 4);
        }
        // |C| * |Cperp| = 2^n
        for dim in 0..=4 {
            let c = sample_random_linear(9, dim, 1234 + dim as u64).unwrap();
            let d = c.dual().unwrap();
            assert_eq!(c.len() * d.len(), 1 << 9);
            // every pair is orthogonal
            for &x in c.span().unwrap().iter() {
                for &y in d.span().unwrap().iter() {
                    assert_eq!((x & y).count_ones() % 2, 0);
                }
            }
        }
    }

    #[test]
    fn linear_min_distance_equals_pairwise() {
        for seed in 0..20u64 {
            let lc = sample_random_linear(14, 6, seed).unwrap();
            if lc.dimension() == 0 {
                continue;
            }
            let as_code = lc.to_code().unwrap();
            if as_code.len() < 2 {
                continue;
            }
            assert_eq!(lc.min_distance().unwrap(), as_code.min_distance().unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic_and_dimension_zero_works() {
        let a = sample_random_linear(16, 8, 42).unwrap();
        let b = sample_random_linear(16, 8, 42).unwrap();
        assert_eq!(a.generators(), b.generators());
        let zero = sample_random_linear(16, 0, 42).unwrap();
        assert_eq!(zero.span().unwrap(), vec![0]);
    }

    #[test]
    fn random_linear_distance_concentrates_at_gv() {
        // n=30, k=9: distance within H^{-1}(1-R) n +- 0.15 n for >= 90% of seeds
        let n = 30usize;
        let k = 9usize;
        let rate = k as f64 / n as f64;
        let center = crate::rate_bounds::entropy_inverse(1.0 - rate).unwrap() * n as f64;
        let mut hits = 0;
        let trials = 200;
        for seed in 0..trials {
            let lc = sample_random_linear(n, k, seed).unwrap();
            let d = lc.min_distance().unwrap() as f64;
            if (d - center).abs() <= 0.15 * n as f64 {
                hits += 1;
            }
        }
        assert!(hits * 10 >= trials * 9, "only {hits}/{trials} inside the GV window");
    }

    #[test]
    fn general_model_parameters() {
        let p = RandomModelParams::new(20, 0.25, 0.05).unwrap();
        assert_eq!(p.cardinality, 32);
        assert_eq!(p.d0, 4);
        assert!(p.theta <= 0.5);
        // the defining inequality is tight at d0 and fails at d0+1
        let two_n = 2.0f64.powi(20);
        let vol = |d: usize| -> f64 {
            (0..d).map(|l| binomial(20, l as i64).to_f64().unwrap()).sum::<f64>()
        };
        assert!(32.0 / two_n * vol(p.d0) <= 0.05);
        assert!(32.0 / two_n * vol(p.d0 + 1) > 0.05);
        // tau too small for any cutoff
        assert!(RandomModelParams::new(8, 0.5, 1e-9).is_err());
    }

    #[test]
    fn general_model_respects_cutoff_and_seed() {
        let p = RandomModelParams::new(16, 0.3, 0.05).unwrap();
        let a = sample_random_general(&p, 16, 5).unwrap();
        let b = sample_random_general(&p, 16, 5).unwrap();
        assert_eq!(a.words(), b.words());
        for seed in 0..50u64 {
            let c = sample_random_general(&p, 16, seed).unwrap();
            if c.len() >= 2 {
                assert!(c.min_distance().unwrap() >= p.d0, "seed {seed}");
            }
        }
    }

    #[test]
    fn small_tau_erases_nothing_unless_collisions() {
        // expected violating pairs are at most tau N / 2, so with tau N small
        // most draws survive whole
        let p = RandomModelParams::new(24, 0.2, 0.01).unwrap();
        let mut full = 0;
        for seed in 0..30 {
            let c = sample_random_general(&p, 24, seed).unwrap();
            if c.len() == p.cardinality {
                full += 1;
            }
        }
        assert!(full >= 25, "survivor lists should usually be complete, got {full}/30");
    }

    #[test]
    fn pair_counts_are_even_off_diagonal() {
        let p = RandomModelParams::new(14, 0.3, 0.1).unwrap();
        let c = sample_random_general(&p, 14, 11).unwrap();
        let counts = c.pair_counts();
        for &count in &counts[1..] {
            assert_eq!(count % 2, 0);
        }
        assert_eq!(counts.iter().sum::<u64>() as usize, c.len() * c.len());
    }

    #[test]
    fn ensemble_statistics_match_pair_moments() {
        let p = RandomModelParams::new(18, 0.25, 0.05).unwrap();
        let report = ensemble_statistics(100, &p, 18, 0xfeed).unwrap();
        assert!(report.pass, "{report:#?}");
        for ell in &report.ells {
            assert!(ell.mean_within_4se);
            assert!(ell.var_within_factor2);
        }
        assert!(report.mean_survivor_fraction >= 1.0 - 5.0 * p.tau);
        assert!(ensemble_statistics(10, &p, 18, 1).is_err());
    }

    #[test]
    fn code_file_round_trip() {
        let code = sample_random_general(
            &RandomModelParams::new(12, 0.3, 0.1).unwrap(),
            12,
            3,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_code(&code, &mut buf).unwrap();
        match read_code_file(std::io::BufReader::new(buf.as_slice())).unwrap() {
            CodeFile::General(back) => assert_eq!(back.words(), code.words()),
            _ => panic!("expected a general code"),
        }
        let lin = hamming_7_4();
        let mut buf = Vec::new();
        write_linear(&lin, &mut buf).unwrap();
        match read_code_file(std::io::BufReader::new(buf.as_slice())).unwrap() {
            CodeFile::Linear(back) => {
                assert_eq!(back.generators(), lin.generators());
                assert_eq!(back.span().unwrap(), lin.span().unwrap());
            }
            _ => panic!("expected a linear code"),
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        let cases = [
            "",
            "n=x\n0101",
            "n=4\n010",
            "n=4\n01a1",
            "n=4\nlinear k=2\n0101",
        ];
        for case in cases {
            assert!(
                read_code_file(std::io::BufReader::new(case.as_bytes())).is_err(),
                "case {case:?}"
            );
        }
    }
}
