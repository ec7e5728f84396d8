//! Real-valued functions on the Hamming cube {0,1}^n and their Walsh-Fourier
//! analysis.
//!
//! Conventions used by every module in this crate:
//!
//! * inner product averages over points: `<f,g> = 2^-n * sum_x f(x) g(x)`,
//! * the Fourier expansion sums over characters: `f = sum_a fhat(a) W_a`,
//!   so `fhat(a) = 2^-n * sum_x f(x) (-1)^<a,x>`,
//! * Parseval: `<f,g> = sum_a fhat(a) ghat(a)`,
//! * convolution carries the averaging prefactor:
//!   `(f * g)(x) = 2^-n * sum_y f(y) g(x+y)`, and `(f*g)^ = fhat . ghat`,
//! * the cube adjacency operator acts on characters by
//!   `(A W_a) = (n - 2|a|) W_a`.
//!
//! Points are identified with integers: bit `i` of the word is coordinate
//! `i`. This indexing is stable and is the one used by the CSV dump format
//! (`index,value` with index in `[0, 2^n)`).

use crate::error::{HamspecError, Result};

/// Largest dimension for which full-cube arrays (2^n doubles) are allowed.
pub const MAX_FULL_CUBE_DIM: usize = 24;

/// A point of the Hamming cube, stored as a bit word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubePoint {
    bits: u32,
    n: usize,
}

impl CubePoint {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_dimension(n)?;
        if n < 32 && bits >> n != 0 {
            return Err(HamspecError::InvalidParameter(format!(
                "point {bits:#x} does not fit in {n} coordinates"
            )));
        }
        Ok(CubePoint { bits, n })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Hamming weight |x|.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Modulo-2 sum. The weight of `x + y` equals the Hamming distance
    /// between `x` and `y`.
    pub fn xor(&self, other: &CubePoint) -> Result<CubePoint> {
        if self.n != other.n {
            return Err(HamspecError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(CubePoint { bits: self.bits ^ other.bits, n: self.n })
    }

    pub fn distance(&self, other: &CubePoint) -> Result<usize> {
        Ok(self.xor(other)?.weight())
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FULL_CUBE_DIM {
        return Err(HamspecError::Capacity { n, max: MAX_FULL_CUBE_DIM });
    }
    Ok(())
}

/// Which basis the stored values refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `values[x] = f(x)` for cube points `x`.
    Point,
    /// `values[a] = fhat(a)` for characters `W_a`.
    Fourier,
}

impl Domain {
    fn name(self) -> &'static str {
        match self {
            Domain::Point => "point",
            Domain::Fourier => "Fourier",
        }
    }
}

/// Norms of a point-domain function under the uniform probability measure,
/// together with the Parseval cross-check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormReport {
    pub l1: f64,
    pub l4_3: f64,
    pub l2: f64,
    pub l4: f64,
    /// `<f,f> = l2^2`.
    pub inner: f64,
    /// `|<f,f> - sum_a fhat(a)^2|`, absolute.
    pub parseval_error: f64,
}

/// A real-valued function on the cube, in either domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanFunction {
    n: usize,
    domain: Domain,
    values: Vec<f64>,
}

impl BooleanFunction {
    pub fn from_values(n: usize, domain: Domain, values: Vec<f64>) -> Result<Self> {
        check_dimension(n)?;
        if values.len() != 1usize << n {
            return Err(HamspecError::InvalidParameter(format!(
                "expected 2^{n} = {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(BooleanFunction { n, domain, values })
    }

    pub fn from_point_values(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::from_values(n, Domain::Point, values)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_dimension(n)?;
        Ok(BooleanFunction { n, domain: Domain::Point, values: vec![c; 1 << n] })
    }

    /// Indicator of the single point `x`.
    pub fn delta(n: usize, x: u32) -> Result<Self> {
        check_dimension(n)?;
        let mut values = vec![0.0; 1 << n];
        values[x as usize] = 1.0;
        Ok(BooleanFunction { n, domain: Domain::Point, values })
    }

    /// The Walsh character `W_a(x) = (-1)^<a,x>`.
    pub fn character(n: usize, a: u32) -> Result<Self> {
        check_dimension(n)?;
        let values = (0..1u32 << n)
            .map(|x| if (x & a).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Ok(BooleanFunction { n, domain: Domain::Point, values })
    }

    /// Indicator function of a set of points.
    pub fn indicator<I: IntoIterator<Item = u32>>(n: usize, points: I) -> Result<Self> {
        check_dimension(n)?;
        let mut values = vec![0.0; 1 << n];
        for p in points {
            let idx = p as usize;
            if idx >= values.len() {
                return Err(HamspecError::InvalidParameter(format!(
                    "point {p:#x} does not fit in {n} coordinates"
                )));
            }
            values[idx] = 1.0;
        }
        Ok(BooleanFunction { n, domain: Domain::Point, values })
    }

    /// A symmetric point function `x -> levels[|x|]`.
    pub fn from_levels(n: usize, levels: &[f64]) -> Result<Self> {
        check_dimension(n)?;
        if levels.len() != n + 1 {
            return Err(HamspecError::InvalidParameter(format!(
                "expected {} level values, got {}",
                n + 1,
                levels.len()
            )));
        }
        let values = (0..1u32 << n).map(|x| levels[x.count_ones() as usize]).collect();
        Ok(BooleanFunction { n, domain: Domain::Point, values })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(HamspecError::WrongDomain {
                expected: expected.name(),
                found: self.domain.name(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &BooleanFunction) -> Result<()> {
        if self.n != other.n {
            return Err(HamspecError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Forward transform: `fhat(a) = 2^-n sum_x f(x)(-1)^<a,x>`.
    ///
    /// Butterfly recursion, O(n 2^n).
    pub fn walsh_transform(&self) -> Result<BooleanFunction> {
        self.expect_domain(Domain::Point)?;
        let mut values = self.values.clone();
        fwht_in_place(&mut values);
        let scale = 1.0 / (1u64 << self.n) as f64;
        for v in &mut values {
            *v *= scale;
        }
        Ok(BooleanFunction { n: self.n, domain: Domain::Fourier, values })
    }

    /// Inverse transform: `f(x) = sum_a fhat(a)(-1)^<a,x>`.
    pub fn inverse_walsh_transform(&self) -> Result<BooleanFunction> {
        self.expect_domain(Domain::Fourier)?;
        let mut values = self.values.clone();
        fwht_in_place(&mut values);
        Ok(BooleanFunction { n: self.n, domain: Domain::Point, values })
    }

    /// `(f * g)(x) = 2^-n sum_y f(y) g(x+y)`, computed through the transform
    /// so that the convolution theorem holds by construction.
    pub fn convolve(&self, other: &BooleanFunction) -> Result<BooleanFunction> {
        self.expect_domain(Domain::Point)?;
        other.expect_domain(Domain::Point)?;
        self.check_compatible(other)?;
        let fh = self.walsh_transform()?;
        let gh = other.walsh_transform()?;
        let mut values: Vec<f64> =
            fh.values.iter().zip(&gh.values).map(|(a, b)| a * b).collect();
        fwht_in_place(&mut values);
        Ok(BooleanFunction { n: self.n, domain: Domain::Point, values })
    }

    /// Apply the cube adjacency operator: `(Af)(x) = sum_{|e|=1} f(x+e)`.
    pub fn adjacency_apply(&self) -> Result<BooleanFunction> {
        self.expect_domain(Domain::Point)?;
        let size = self.values.len();
        let mut out = vec![0.0; size];
        for x in 0..size {
            let mut acc = 0.0;
            for i in 0..self.n {
                acc += self.values[x ^ (1 << i)];
            }
            out[x] = acc;
        }
        Ok(BooleanFunction { n: self.n, domain: Domain::Point, values: out })
    }

    /// Orthogonal projection onto the span of characters of weight <= r.
    pub fn project_low_degree(&self, r: usize) -> Result<BooleanFunction> {
        self.expect_domain(Domain::Point)?;
        if r > self.n {
            return Err(HamspecError::InvalidParameter(format!(
                "projection level r = {r} out of range 0..={}",
                self.n
            )));
        }
        let mut fh = self.walsh_transform()?;
        for (a, v) in fh.values.iter_mut().enumerate() {
            if (a as u32).count_ones() as usize > r {
                *v = 0.0;
            }
        }
        fh.inverse_walsh_transform()
    }

    /// `<f,g> = 2^-n sum_x f(x) g(x)` (both functions in point domain).
    pub fn inner(&self, other: &BooleanFunction) -> Result<f64> {
        self.expect_domain(Domain::Point)?;
        other.expect_domain(Domain::Point)?;
        self.check_compatible(other)?;
        let scale = 1.0 / self.values.len() as f64;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * scale)
    }

    /// `sum_a fhat(a) ghat(a)` for two Fourier-domain functions.
    pub fn fourier_inner(&self, other: &BooleanFunction) -> Result<f64> {
        self.expect_domain(Domain::Fourier)?;
        other.expect_domain(Domain::Fourier)?;
        self.check_compatible(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }

    /// p-norms under the uniform probability measure, plus the Parseval
    /// cross-check `<f,f> = sum fhat^2`.
    pub fn norms_and_inner(&self) -> Result<NormReport> {
        self.expect_domain(Domain::Point)?;
        let scale = 1.0 / self.values.len() as f64;
        let moment = |p: f64| -> f64 {
            self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * scale
        };
        let inner = self.values.iter().map(|v| v * v).sum::<f64>() * scale;
        let fh = self.walsh_transform()?;
        let fourier_energy: f64 = fh.values.iter().map(|v| v * v).sum();
        let report = NormReport {
            l1: moment(1.0),
            l4_3: moment(4.0 / 3.0).powf(0.75),
            l2: inner.sqrt(),
            l4: moment(4.0).powf(0.25),
            inner,
            parseval_error: (inner - fourier_energy).abs(),
        };
        let tol = 1e-10 * inner.max(1.0);
        if report.parseval_error > tol {
            return Err(HamspecError::Internal(format!(
                "Parseval identity violated: |<f,f> - sum fhat^2| = {:e}",
                report.parseval_error
            )));
        }
        Ok(report)
    }

    /// Pointwise linear combination `self + c * other`.
    pub fn add_scaled(&self, other: &BooleanFunction, c: f64) -> Result<BooleanFunction> {
        if self.domain != other.domain {
            return Err(HamspecError::WrongDomain {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect();
        Ok(BooleanFunction { n: self.n, domain: self.domain, values })
    }

    pub fn scale(&self, c: f64) -> BooleanFunction {
        let values = self.values.iter().map(|v| v * c).collect();
        BooleanFunction { n: self.n, domain: self.domain, values }
    }
}

/// In-place Walsh-Hadamard butterfly (unnormalized).
fn fwht_in_place(values: &mut [f64]) {
    let size = values.len();
    let mut h = 1;
    while h < size {
        let mut block = 0;
        while block < size {
            for i in block..block + h {
                let a = values[i];
                let b = values[i + h];
                values[i] = a + b;
                values[i + h] = a - b;
            }
            block += 2 * h;
        }
        h *= 2;
    }
}

/// Write a function as `index,value` CSV rows.
pub fn write_csv<W: std::io::Write>(f: &BooleanFunction, mut out: W) -> Result<()> {
    writeln!(out, "index,value")?;
    for (i, v) in f.values().iter().enumerate() {
        writeln!(out, "{i},{v}")?;
    }
    Ok(())
}

/// Parse the `index,value` CSV format back into a point-domain function.
pub fn read_csv<R: std::io::BufRead>(reader: R) -> Result<BooleanFunction> {
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (lineno == 0 && trimmed.starts_with("index")) {
            continue;
        }
        let mut parts = trimmed.split(',');
        let idx: usize = parts
            .next()
            .ok_or_else(|| HamspecError::Parse(format!("line {}: missing index", lineno + 1)))?
            .trim()
            .parse()
            .map_err(|e| HamspecError::Parse(format!("line {}: {e}", lineno + 1)))?;
        let val: f64 = parts
            .next()
            .ok_or_else(|| HamspecError::Parse(format!("line {}: missing value", lineno + 1)))?
            .trim()
            .parse()
            .map_err(|e| HamspecError::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push((idx, val));
    }
    let size = rows.len();
    if size == 0 || !size.is_power_of_two() {
        return Err(HamspecError::Parse(format!(
            "function dump must have 2^n rows, got {size}"
        )));
    }
    let n = size.trailing_zeros() as usize;
    let mut values = vec![f64::NAN; size];
    for (idx, val) in rows {
        if idx >= size {
            return Err(HamspecError::Parse(format!("index {idx} out of range")));
        }
        values[idx] = val;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(HamspecError::Parse("missing indices in function dump".into()));
    }
    BooleanFunction::from_point_values(n, values)
}

/// Quick invariant suite used by the CLI `--selftest` flag.
pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let mut rng = crate::testutil::rng(0x00f0_u64);
    let f = crate::testutil::random_function(&mut rng, 8);
    let roundtrip = f
        .walsh_transform()
        .and_then(|fh| fh.inverse_walsh_transform())
        .map(|g| crate::testutil::max_abs_diff(f.values(), g.values()) < 1e-12)
        .unwrap_or(false);
    results.push(("transform round trip (n=8)".into(), roundtrip));
    let parseval = f.norms_and_inner().map(|r| r.parseval_error < 1e-10).unwrap_or(false);
    results.push(("Parseval identity (n=8)".into(), parseval));
    let g = crate::testutil::random_function(&mut rng, 8);
    let conv_ok = (|| -> Result<bool> {
        let conv = f.convolve(&g)?;
        let lhs = conv.walsh_transform()?;
        let fh = f.walsh_transform()?;
        let gh = g.walsh_transform()?;
        let prod: Vec<f64> = fh.values().iter().zip(gh.values()).map(|(a, b)| a * b).collect();
        Ok(crate::testutil::max_abs_diff(lhs.values(), &prod) < 1e-10)
    })()
    .unwrap_or(false);
    results.push(("convolution theorem (n=8)".into(), conv_ok));
    let adj_ok = (|| -> Result<bool> {
        let af = f.adjacency_apply()?;
        let afh = af.walsh_transform()?;
        let fh = f.walsh_transform()?;
        let expected: Vec<f64> = fh
            .values()
            .iter()
            .enumerate()
            .map(|(a, v)| (8.0 - 2.0 * (a as u32).count_ones() as f64) * v)
            .collect();
        Ok(crate::testutil::max_abs_diff(afh.values(), &expected) < 1e-10)
    })()
    .unwrap_or(false);
    results.push(("adjacency Fourier action (n=8)".into(), adj_ok));
    results
}
