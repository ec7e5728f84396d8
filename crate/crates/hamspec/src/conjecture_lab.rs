//! Norm-ratio experiments for weight slices and distance graphs.
//!
//! Two families of quantities are computed here:
//!
//! * for a set A of codewords of one weight, the function `f = sum_{a in A} W_a`
//!   has `||f||_2^2 = |A|` and `||f||_4^4 = #{(a,b,c,d) in A^4 : a+b+c+d = 0}`,
//!   so the 4-vs-2 norm ratio is a pure counting problem (pair-sum hashing,
//!   O(|A|^2));
//! * for the distance-i graph G(C,i) on a code C, the eigenvalue vector
//!   (under the uniform measure on C) has `||l||_2^2 = Tr B^2 / |C|` and
//!   `||l||_4^4 = Tr B^4 / |C|`, and the traces are closed-walk counts:
//!   `Tr B^2` is twice the edge count and `Tr B^4` is the sum of squared
//!   common-neighbor counts. No eigendecomposition is needed, and `Tr B^4`
//!   is also exactly the number of rhombic 4-tuples (cyclic quadruples with
//!   all four consecutive distances equal to i).
//!
//! The balancedness estimator only certifies LOWER bounds on the graph
//! parameter t (max induced edge-density ratio): exact subset enumeration up
//! to 20 vertices, greedy peeling plus seeded local search beyond.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

use crate::codes::{distance, Code, LinearCode};
use crate::error::{HamspecError, Result};
use crate::krawchouk::binomial;

/// A weight slice viewed as the Fourier support of `f = sum_{a in A} W_a`.
#[derive(Debug, Clone)]
pub struct SliceFunction {
    n: usize,
    words: Vec<u64>,
}

impl SliceFunction {
    pub fn new(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(HamspecError::Capacity { n, max: 64 });
        }
        words.sort_unstable();
        words.dedup();
        Ok(SliceFunction { n, words })
    }

    pub fn from_code_slice(code: &LinearCode, i: usize) -> Result<Self> {
        Self::new(code.n(), code.weight_slice(i)?)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceRatioReport {
    pub a_size: usize,
    /// `#{(a,b,c,d) in A^4 : a+b+c+d = 0}` (exact).
    pub quadruple_count: u128,
    /// `||f||_4 / ||f||_2 = quadruple_count^{1/4} / |A|^{1/2}`.
    pub ratio: f64,
    /// The always-valid bound `|A|^{1/4}`.
    pub support_bound: f64,
    pub within_bound: bool,
}

/// Exact quadruple count by hashing pair sums: `sum_x #{(a,b): a+b=x}^2`.
pub fn quadruple_count(words: &[u64]) -> u128 {
    let mut pair_sums: HashMap<u64, u64> = HashMap::with_capacity(words.len() * words.len());
    for &a in words {
        for &b in words {
            *pair_sums.entry(a ^ b).or_insert(0) += 1;
        }
    }
    pair_sums.values().map(|&c| (c as u128) * (c as u128)).sum()
}

pub fn slice_norm_ratio(slice: &SliceFunction) -> Result<SliceRatioReport> {
    if slice.is_empty() {
        return Err(HamspecError::InvalidParameter("slice A is empty".into()));
    }
    if slice.len() > 4096 {
        return Err(HamspecError::Capacity { n: slice.len(), max: 4096 });
    }
    let quad = quadruple_count(&slice.words);
    let a_size = slice.len();
    let ratio = (quad as f64).powf(0.25) / (a_size as f64).sqrt();
    let support_bound = (a_size as f64).powf(0.25);
    Ok(SliceRatioReport {
        a_size,
        quadruple_count: quad,
        ratio,
        support_bound,
        within_bound: ratio <= support_bound * (1.0 + 1e-12),
    })
}

/// The distance-i graph of a code: vertices are codewords, edges join pairs
/// at distance exactly i.
#[derive(Debug, Clone)]
pub struct DistanceGraph {
    n: usize,
    i: usize,
    words: Vec<u64>,
    adjacency: Vec<Vec<u32>>,
    edges: u64,
}

impl DistanceGraph {
    pub fn new(code: &Code, i: usize) -> Result<Self> {
        if i == 0 || i > code.n() {
            return Err(HamspecError::InvalidParameter(format!(
                "distance i = {i} outside 1..={}",
                code.n()
            )));
        }
        if code.len() > 100_000 {
            return Err(HamspecError::Capacity { n: code.len(), max: 100_000 });
        }
        let words = code.words().to_vec();
        let m = words.len();
        let mut adjacency = vec![Vec::new(); m];
        let mut edges = 0u64;
        for x in 0..m {
            for y in x + 1..m {
                if distance(words[x], words[y]) == i {
                    adjacency[x].push(y as u32);
                    adjacency[y].push(x as u32);
                    edges += 1;
                }
            }
        }
        Ok(DistanceGraph { n: code.n(), i, words, adjacency, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn distance_label(&self) -> usize {
        self.i
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(|a| a.len()).collect()
    }

    /// Dense adjacency matrix, for eigensolver cross-checks.
    pub fn dense_adjacency(&self) -> Result<DMatrix<f64>> {
        let m = self.words.len();
        if m > 2048 {
            return Err(HamspecError::Capacity { n: m, max: 2048 });
        }
        let mut mat = DMatrix::zeros(m, m);
        for (x, nbrs) in self.adjacency.iter().enumerate() {
            for &y in nbrs {
                mat[(x, y as usize)] = 1.0;
            }
        }
        Ok(mat)
    }

    /// `Tr B^2` (= sum of degrees) and `Tr B^4` (= sum over vertex pairs of
    /// squared common-neighbor counts), both exact.
    pub fn walk_moments(&self) -> (u64, u128) {
        let m = self.words.len();
        let tr2: u64 = self.adjacency.iter().map(|a| a.len() as u64).sum();
        let mut tr4: u128 = 0;
        let mut counts = vec![0u32; m];
        let mut touched = Vec::new();
        for x in 0..m {
            for &z in &self.adjacency[x] {
                for &y in &self.adjacency[z as usize] {
                    if counts[y as usize] == 0 {
                        touched.push(y);
                    }
                    counts[y as usize] += 1;
                }
            }
            for &y in &touched {
                let c = counts[y as usize] as u128;
                tr4 += c * c;
                counts[y as usize] = 0;
            }
            touched.clear();
        }
        (tr2, tr4)
    }

    /// Largest common-neighbor count over distinct vertex pairs.
    pub fn max_common_neighbors(&self) -> (usize, (usize, usize)) {
        let m = self.words.len();
        let mut best = 0usize;
        let mut pair = (0usize, 0usize);
        let mut counts = vec![0u32; m];
        let mut touched = Vec::new();
        for x in 0..m {
            for &z in &self.adjacency[x] {
                for &y in &self.adjacency[z as usize] {
                    if counts[y as usize] == 0 {
                        touched.push(y);
                    }
                    counts[y as usize] += 1;
                }
            }
            for &y in &touched {
                let c = counts[y as usize] as usize;
                if y as usize != x && c > best {
                    best = c;
                    pair = (x, y as usize);
                }
                counts[y as usize] = 0;
            }
            touched.clear();
        }
        (best, pair)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub vertices: usize,
    pub edges: u64,
    pub tr_b2: u64,
    pub tr_b4: u128,
    /// `||l||_2^2 = Tr B^2 / |C|`.
    pub l2_sq: f64,
    /// `||l||_4^4 = Tr B^4 / |C|`.
    pub l4_fourth: f64,
    /// `||l||_4 / ||l||_2`; None for an empty (edgeless) graph.
    pub ratio: Option<f64>,
}

pub fn distance_graph_moments(graph: &DistanceGraph) -> MomentReport {
    let m = graph.vertex_count();
    let (tr2, tr4) = graph.walk_moments();
    let l2_sq = tr2 as f64 / m as f64;
    let l4_fourth = tr4 as f64 / m as f64;
    let ratio = if tr2 > 0 {
        Some(l4_fourth.powf(0.25) / l2_sq.sqrt())
    } else {
        None
    };
    MomentReport { vertices: m, edges: graph.edge_count(), tr_b2: tr2, tr_b4: tr4, l2_sq, l4_fourth, ratio }
}

/// Rhombic 4-tuples `(x,y,z,w)` with `|x-y| = |y-z| = |z-w| = |w-x| = i`.
/// By the closed-walk identity this equals `Tr B^4` for the distance-i
/// graph.
pub fn count_rhombic(code: &Code, i: usize) -> Result<u128> {
    if code.len() > 10_000 {
        return Err(HamspecError::Capacity { n: code.len(), max: 10_000 });
    }
    let graph = DistanceGraph::new(code, i)?;
    Ok(graph.walk_moments().1)
}

/// Multiset comparison of the distance-graph spectrum of a linear code with
/// the values of the weight-slice character sum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub code_size: usize,
    pub slice_size: usize,
    /// Max |eigensolver eigenvalue - integer character value| after sorting.
    pub max_deviation: f64,
    /// Both multisets agree and the cube distribution is constant on dual
    /// cosets with multiplicity |Cperp|.
    pub pass: bool,
}

pub fn linear_code_spectrum_equivalence(code: &LinearCode, i: usize) -> Result<SpectrumReport> {
    let n = code.n();
    if n > 16 {
        return Err(HamspecError::Capacity { n, max: 16 });
    }
    if code.dimension() > 11 {
        // the dense eigensolver route dominates the cost; 2^11 vertices is
        // the practical cap
        return Err(HamspecError::Capacity { n: code.dimension(), max: 11 });
    }
    let span = code.span()?;
    let as_code = Code::new(n, span.clone())?;
    let graph = DistanceGraph::new(&as_code, i)?;
    let dense = graph.dense_adjacency()?;
    let eigen = nalgebra::SymmetricEigen::new(dense);
    let mut solver_values: Vec<f64> = eigen.eigenvalues.iter().cloned().collect();
    solver_values.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // character route: eigenvalues of a Cayley graph on F_2^k are the Walsh
    // transforms of the connection-set indicator
    let k = code.dimension();
    let basis: Vec<u64> = {
        // reconstruct a basis in span order
        let mut pivots = [0u64; 64];
        let mut basis = Vec::new();
        for &word in &span {
            let mut w = word;
            while w != 0 {
                let lead = 63 - w.leading_zeros() as usize;
                if pivots[lead] == 0 {
                    pivots[lead] = w;
                    basis.push(w);
                    break;
                }
                w ^= pivots[lead];
            }
        }
        basis
    };
    let mut coord_words = vec![0u64; 1 << k];
    for (j, &b) in basis.iter().enumerate() {
        for c in 0..1usize << j {
            coord_words[(1 << j) + c] = coord_words[c] ^ b;
        }
    }
    let mut char_values: Vec<i64> = coord_words
        .iter()
        .map(|&w| (w.count_ones() as usize == i) as i64)
        .collect();
    let size = char_values.len();
    let mut h = 1;
    while h < size {
        let mut block = 0;
        while block < size {
            for idx in block..block + h {
                let a = char_values[idx];
                let b = char_values[idx + h];
                char_values[idx] = a + b;
                char_values[idx + h] = a - b;
            }
            block += 2 * h;
        }
        h *= 2;
    }
    let mut char_sorted: Vec<f64> = char_values.iter().map(|&v| v as f64).collect();
    char_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let slice_size = code.weight_slice(i)?.len();
    let scale = (slice_size as f64).max(1.0);
    let max_deviation = solver_values
        .iter()
        .zip(&char_sorted)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    // cube-side distribution: F(u) = sum_{a in A} (-1)^{<u,a>} takes each
    // coset value |Cperp| times
    let mut cube_values = vec![0i64; 1 << n];
    for &a in &code.weight_slice(i)? {
        cube_values[a as usize] = 1;
    }
    let size = cube_values.len();
    let mut h = 1;
    while h < size {
        let mut block = 0;
        while block < size {
            for idx in block..block + h {
                let x = cube_values[idx];
                let y = cube_values[idx + h];
                cube_values[idx] = x + y;
                cube_values[idx + h] = x - y;
            }
            block += 2 * h;
        }
        h *= 2;
    }
    cube_values.sort_unstable();
    let dual_size = 1usize << (n - k);
    let mut replicated: Vec<i64> = Vec::with_capacity(1 << n);
    for v in &char_sorted {
        for _ in 0..dual_size {
            replicated.push(*v as i64);
        }
    }
    let cube_matches = replicated == cube_values;

    let pass = max_deviation <= 1e-6 * scale && cube_matches;
    if !pass {
        return Err(HamspecError::VerificationFailed(format!(
            "spectrum mismatch: max deviation {max_deviation:e}, cube distribution match = {cube_matches}"
        )));
    }
    Ok(SpectrumReport { code_size: span.len(), slice_size, max_deviation, pass })
}

/// Lower bound on the balancedness parameter t, with the method used.
#[derive(Debug, Clone, Serialize)]
pub struct BalancednessEstimate {
    pub t_lower: f64,
    pub method: String,
    pub best_subset_size: usize,
    pub best_subset_edges: u64,
}

/// Search for dense induced subgraphs. Exact over all subsets when the graph
/// has at most 20 vertices; greedy peeling plus seeded local search within
/// `budget` iterations otherwise. The result is a certified LOWER bound on
/// t (the true maximum may be larger in the heuristic regime).
pub fn estimate_balancedness(graph: &DistanceGraph, budget: usize) -> Result<BalancednessEstimate> {
    if graph.edge_count() == 0 {
        return Err(HamspecError::InvalidParameter(
            "balancedness is undefined for an empty graph".into(),
        ));
    }
    if graph.vertex_count() <= 20 {
        exact_balancedness(graph)
    } else {
        heuristic_balancedness(graph, budget)
    }
}

/// Brute force over all 2^|V| induced subgraphs (|V| <= 20).
pub fn exact_balancedness(graph: &DistanceGraph) -> Result<BalancednessEstimate> {
    let m = graph.vertex_count();
    if m > 20 {
        return Err(HamspecError::Capacity { n: m, max: 20 });
    }
    if graph.edge_count() == 0 {
        return Err(HamspecError::InvalidParameter(
            "balancedness is undefined for an empty graph".into(),
        ));
    }
    let global_density = graph.edge_count() as f64 / m as f64;
    let masks: Vec<u32> = (0..m)
        .map(|v| {
            graph.adjacency[v]
                .iter()
                .fold(0u32, |acc, &y| acc | 1u32 << y)
        })
        .collect();
    let mut best_ratio = 0.0f64;
    let mut best = (0usize, 0u64);
    for subset in 1u32..(1u32 << m) {
        let size = subset.count_ones() as u64;
        let mut twice_edges = 0u64;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (masks[v] & subset).count_ones() as u64;
        }
        let density = (twice_edges / 2) as f64 / size as f64;
        if density > best_ratio {
            best_ratio = density;
            best = (size as usize, twice_edges / 2);
        }
    }
    Ok(BalancednessEstimate {
        t_lower: best_ratio / global_density,
        method: "exact".into(),
        best_subset_size: best.0,
        best_subset_edges: best.1,
    })
}

/// Greedy densest-subgraph peeling plus seeded local search.
pub fn heuristic_balancedness(
    graph: &DistanceGraph,
    budget: usize,
) -> Result<BalancednessEstimate> {
    let m = graph.vertex_count();
    if graph.edge_count() == 0 {
        return Err(HamspecError::InvalidParameter(
            "balancedness is undefined for an empty graph".into(),
        ));
    }
    let global_density = graph.edge_count() as f64 / m as f64;
    // greedy peeling: repeatedly drop a minimum-degree vertex, tracking the
    // densest prefix
    let mut alive = vec![true; m];
    let mut degree = graph.degrees();
    let mut edges_left = graph.edge_count();
    let mut count_left = m;
    let mut best_density = edges_left as f64 / m as f64;
    let mut best_set: Vec<usize> = (0..m).collect();
    let mut current: Vec<usize> = (0..m).collect();
    while count_left > 1 {
        let &v = current
            .iter()
            .filter(|&&v| alive[v])
            .min_by_key(|&&v| degree[v])
            .unwrap();
        alive[v] = false;
        edges_left -= degree[v] as u64;
        count_left -= 1;
        for &y in &graph.adjacency[v] {
            if alive[y as usize] {
                degree[y as usize] -= 1;
            }
        }
        current.retain(|&x| alive[x]);
        let density = edges_left as f64 / count_left as f64;
        if density > best_density {
            best_density = density;
            best_set = current.clone();
        }
    }

    // seeded local search around the peeled set
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut in_set = vec![false; m];
    for &v in &best_set {
        in_set[v] = true;
    }
    let mut set_size = best_set.len() as u64;
    let mut set_edges = {
        let mut e = 0u64;
        for v in 0..m {
            if in_set[v] {
                e += graph.adjacency[v].iter().filter(|&&y| in_set[y as usize]).count() as u64;
            }
        }
        e / 2
    };
    let mut best_pair = (set_edges, set_size);
    for _ in 0..budget {
        let v = rng.gen_range(0..m);
        let inside_deg =
            graph.adjacency[v].iter().filter(|&&y| in_set[y as usize]).count() as u64;
        let (new_edges, new_size) = if in_set[v] {
            if set_size == 1 {
                continue;
            }
            (set_edges - inside_deg, set_size - 1)
        } else {
            (set_edges + inside_deg, set_size + 1)
        };
        // accept if the density does not decrease
        if new_edges as f64 * set_size as f64 >= set_edges as f64 * new_size as f64 {
            in_set[v] = !in_set[v];
            set_edges = new_edges;
            set_size = new_size;
            if set_edges as f64 * best_pair.1 as f64 > best_pair.0 as f64 * set_size as f64 {
                best_pair = (set_edges, set_size);
            }
        }
    }
    let best_density = best_density.max(best_pair.0 as f64 / best_pair.1 as f64);
    Ok(BalancednessEstimate {
        t_lower: best_density / global_density,
        method: "peel+local-search".into(),
        best_subset_size: best_pair.1 as usize,
        best_subset_edges: best_pair.0,
    })
}

/// Outcome of the 3-eigenvalue construction: two points y, z at distance
/// k = floor(d/3) from a codeword x and from each other are appended, so the
/// distance-k graph of the result is a triangle plus isolated vertices.
#[derive(Debug, Clone)]
pub struct CounterexampleOutcome {
    pub code: Code,
    pub k: usize,
    pub triangle: [u64; 3],
}

pub fn build_counterexample(code: &Code, seed: u64) -> Result<CounterexampleOutcome> {
    let d = code.min_distance()?;
    let k = d / 3;
    if k < 1 || k % 2 != 0 {
        return Err(HamspecError::InvalidParameter(format!(
            "construction needs k = floor(d/3) even and positive, got k = {k} from d = {d}"
        )));
    }
    let n = code.n();
    if 3 * k / 2 > n {
        return Err(HamspecError::InvalidParameter(format!(
            "need n >= 3k/2 = {} coordinates",
            3 * k / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = code.words()[rng.gen_range(0..code.len())];
    // choose 3k/2 distinct coordinates, split into three k/2-blocks
    let mut coords: Vec<usize> = (0..n).collect();
    for i in (1..coords.len()).rev() {
        let j = rng.gen_range(0..=i);
        coords.swap(i, j);
    }
    let block = |lo: usize| -> u64 {
        coords[lo..lo + k / 2].iter().fold(0u64, |acc, &c| acc | 1u64 << c)
    };
    let (s1, s2, s3) = (block(0), block(k / 2), block(k));
    let y = x ^ s1 ^ s2;
    let z = x ^ s2 ^ s3;
    debug_assert_eq!(distance(x, y), k);
    debug_assert_eq!(distance(x, z), k);
    debug_assert_eq!(distance(y, z), k);
    let mut words = code.words().to_vec();
    words.push(y);
    words.push(z);
    let new_code = Code::new(n, words)?;
    if new_code.len() != code.len() + 2 {
        return Err(HamspecError::Internal("added points collided with the code".into()));
    }
    Ok(CounterexampleOutcome { code: new_code, k, triangle: [x, y, z] })
}

/// Largest `M_{x,y} = #{z in C : |x-z| = |y-z| = i}` over distinct pairs,
/// plus the closed-form sphere-intersection size for reference.
#[derive(Debug, Clone, Serialize)]
pub struct CommonNeighborReport {
    pub max_common: usize,
    pub pair_distance: usize,
    /// `|D(x)| = C(t, t/2) C(n-t, i - t/2)` at t = pair_distance (the
    /// ambient count of points at distance i from both endpoints).
    pub ambient_intersection: f64,
}

pub fn pairwise_common_neighbors(code: &Code, i: usize) -> Result<CommonNeighborReport> {
    if code.len() > 10_000 {
        return Err(HamspecError::Capacity { n: code.len(), max: 10_000 });
    }
    let graph = DistanceGraph::new(code, i)?;
    let (max_common, (x, y)) = graph.max_common_neighbors();
    let pair_distance = if max_common > 0 {
        distance(code.words()[x], code.words()[y])
    } else {
        0
    };
    let ambient = sphere_intersection_size(code.n(), pair_distance, i)
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    Ok(CommonNeighborReport { max_common, pair_distance, ambient_intersection: ambient })
}

/// `|D(x)| = C(t, t/2) C(n-t, i - t/2)` for |x| = t: the number of points at
/// distance i from both 0 and x. Zero when t is odd or the binomials are out
/// of range.
pub fn sphere_intersection_size(n: usize, t: usize, i: usize) -> BigInt {
    if t % 2 != 0 || t > n {
        return BigInt::zero();
    }
    let half = (t / 2) as i64;
    binomial(t, half) * binomial(n - t, i as i64 - half)
}

/// `E_x D_{x,k}^2 / (E_x D_{x,k})^2` over uniform x in C; undefined when the
/// code has no pairs at distance k.
pub fn moment_ratio_dxk(code: &Code, k: usize) -> Result<f64> {
    let graph = DistanceGraph::new(code, k)?;
    if graph.edge_count() == 0 {
        return Err(HamspecError::InvalidParameter(format!(
            "no pairs at distance {k}: moment ratio undefined"
        )));
    }
    let degrees = graph.degrees();
    let m = degrees.len() as f64;
    let mean = degrees.iter().map(|&d| d as f64).sum::<f64>() / m;
    let mean_sq = degrees.iter().map(|&d| (d * d) as f64).sum::<f64>() / m;
    Ok(mean_sq / (mean * mean))
}

pub fn selftest() -> Vec<(String, bool)> {
    let mut results = Vec::new();
    let singleton = SliceFunction::new(6, vec![0b111])
        .and_then(|s| slice_norm_ratio(&s))
        .map(|r| (r.ratio - 1.0).abs() < 1e-12)
        .unwrap_or(false);
    results.push(("singleton slice has ratio 1".into(), singleton));
    let ham = crate::codes::hamming_7_4();
    let ham_ok = SliceFunction::from_code_slice(&ham, 3)
        .and_then(|s| slice_norm_ratio(&s))
        .map(|r| r.within_bound && r.a_size == 7)
        .unwrap_or(false);
    results.push(("Hamming weight-3 slice within |A|^(1/4)".into(), ham_ok));
    let spectrum = linear_code_spectrum_equivalence(&ham, 3).map(|r| r.pass).unwrap_or(false);
    results.push(("spectrum equals character distribution".into(), spectrum));
    let triangle = (|| -> Result<bool> {
        let code = Code::new(10, vec![0b0, 0b11, 0b101, 0b10000000])?;
        let graph = DistanceGraph::new(&code, 2)?;
        let (tr2, tr4) = graph.walk_moments();
        Ok(tr2 == 6 && tr4 == 18)
    })()
    .unwrap_or(false);
    results.push(("triangle walk moments".into(), triangle));
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{greedy_packing, hamming_7_4, sample_random_linear};

    /// Greedily pad `seed_words` with random points at distance >= min_gap
    /// from everything so far; the pads cannot create extra short-distance
    /// pairs.
    fn padded_code(n: usize, seed_words: &[u64], total: usize, min_gap: usize) -> Code {
        let mut rng = crate::testutil::rng(0x9a9a);
        let mut words = seed_words.to_vec();
        while words.len() < total {
            let w = rand::Rng::gen::<u64>(&mut rng) & ((1u64 << n) - 1);
            if words.iter().all(|&x| distance(x, w) >= min_gap) {
                words.push(w);
            }
        }
        Code::new(n, words).unwrap()
    }

    fn triangle_plus_isolated(total: usize) -> Code {
        // words 0, 0b011, 0b101 are pairwise at distance 2; pads sit at
        // distance >= 5 from everything, so the distance-2 graph is exactly
        // a triangle plus isolated vertices
        padded_code(40, &[0u64, 0b011, 0b101], total, 5)
    }

    #[test]
    fn singleton_and_pair_slices() {
        let s = SliceFunction::new(8, vec![0b1]).unwrap();
        let r = slice_norm_ratio(&s).unwrap();
        assert_eq!(r.quadruple_count, 1);
        assert!((r.ratio - 1.0).abs() < 1e-13);
        // |A| = 2: quadruples with a+b+c+d = 0 number 8 (all pairings)
        let s2 = SliceFunction::new(8, vec![0b1, 0b10]).unwrap();
        let r2 = slice_norm_ratio(&s2).unwrap();
        assert_eq!(r2.quadruple_count, 8);
        assert!(r2.within_bound);
    }

    #[test]
    fn quadruple_count_matches_cube_integral() {
        // ||f||_4^4 for f = sum_{a in A} W_a equals 2^-n sum_x f(x)^4, an
        // exact integer; check on Hamming slices over the full 7-cube
        let ham = hamming_7_4();
        for i in [3usize, 4] {
            let slice = SliceFunction::from_code_slice(&ham, i).unwrap();
            let quad = quadruple_count(slice.words());
            let n = 7;
            let mut f = vec![0i64; 1 << n];
            for x in 0..1u64 << n {
                let mut acc = 0i64;
                for &a in slice.words() {
                    acc += if ((x & a).count_ones()) % 2 == 0 { 1 } else { -1 };
                }
                f[x as usize] = acc;
            }
            let integral: i128 = f.iter().map(|&v| (v as i128).pow(4)).sum();
            assert_eq!(integral % (1 << n), 0);
            assert_eq!(quad as i128, integral / (1 << n), "i = {i}");
        }
    }

    #[test]
    fn slice_ratio_within_support_bound_random() {
        for seed in 0..30u64 {
            let lc = sample_random_linear(12, 6, 777 + seed).unwrap();
            let Ok(d) = lc.min_distance() else { continue };
            for i in d..=(d + d / 5).min(12) {
                let slice = SliceFunction::from_code_slice(&lc, i).unwrap();
                if slice.is_empty() {
                    continue;
                }
                let r = slice_norm_ratio(&slice).unwrap();
                assert!(r.within_bound, "seed {seed} i {i}");
            }
        }
    }

    #[test]
    fn empty_slice_is_an_error() {
        let s = SliceFunction::new(6, vec![]).unwrap();
        assert!(slice_norm_ratio(&s).is_err());
    }

    #[test]
    fn single_edge_walk_moments() {
        let code = Code::new(4, vec![0b0000, 0b0011]).unwrap();
        let graph = DistanceGraph::new(&code, 2).unwrap();
        let (tr2, tr4) = graph.walk_moments();
        assert_eq!(tr2, 2);
        assert_eq!(tr4, 2);
        assert_eq!(count_rhombic(&code, 2).unwrap(), 2);
    }

    #[test]
    fn triangle_moments_and_ratio() {
        let code = triangle_plus_isolated(16);
        let graph = DistanceGraph::new(&code, 2).unwrap();
        let (tr2, tr4) = graph.walk_moments();
        assert_eq!(tr2, 6, "triangle has 3 edges");
        assert_eq!(tr4, 18);
        let report = distance_graph_moments(&graph);
        let expected = (16.0f64 / 2.0).powf(0.25);
        assert!((report.ratio.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn perfect_matching_ratio_is_one() {
        // 4 disjoint edges: all eigenvalues are +-1. Each pair flips two
        // bits inside its own 8-bit block; distances across blocks are >= 12.
        let mut words = Vec::new();
        for j in 0..4u64 {
            let base = 0xFFu64 << (8 * j);
            words.push(base);
            words.push(base ^ (0b11 << (8 * j)));
        }
        let code = Code::new(32, words).unwrap();
        let graph = DistanceGraph::new(&code, 2).unwrap();
        assert_eq!(graph.edge_count(), 4);
        let report = distance_graph_moments(&graph);
        assert!((report.ratio.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_graph_reports_no_ratio() {
        let code = Code::new(8, vec![0, 0xFF]).unwrap();
        let graph = DistanceGraph::new(&code, 3).unwrap();
        assert!(distance_graph_moments(&graph).ratio.is_none());
    }

    #[test]
    fn walk_moments_match_eigensolver() {
        let p = crate::codes::RandomModelParams::new(16, 0.35, 0.05).unwrap();
        let code = crate::codes::sample_random_general(&p, 16, 13).unwrap();
        let d = code.min_distance().unwrap();
        let graph = DistanceGraph::new(&code, d).unwrap();
        let dense = graph.dense_adjacency().unwrap();
        let eigen = nalgebra::SymmetricEigen::new(dense);
        let sum2: f64 = eigen.eigenvalues.iter().map(|l| l * l).sum();
        let sum4: f64 = eigen.eigenvalues.iter().map(|l| l.powi(4)).sum();
        let (tr2, tr4) = graph.walk_moments();
        assert!((sum2 - tr2 as f64).abs() <= 1e-8 * (tr2 as f64).max(1.0));
        assert!((sum4 - tr4 as f64).abs() <= 1e-8 * (tr4 as f64).max(1.0));
    }

    #[test]
    fn rhombic_count_matches_matrix_power() {
        let p = crate::codes::RandomModelParams::new(14, 0.3, 0.08).unwrap();
        let code = crate::codes::sample_random_general(&p, 14, 21).unwrap();
        let d = code.min_distance().unwrap();
        let graph = DistanceGraph::new(&code, d).unwrap();
        let dense = graph.dense_adjacency().unwrap();
        let fourth = &dense * &dense * &dense * &dense;
        let trace: f64 = (0..code.len()).map(|j| fourth[(j, j)]).sum();
        assert_eq!(count_rhombic(&code, d).unwrap() as f64, trace);
    }

    #[test]
    fn spectrum_equivalence_cases() {
        // full cube with i = 1: hypercube graph, eigenvalues n - 2|u|
        let full = LinearCode::new(4, vec![1, 2, 4, 8]).unwrap();
        let rep = linear_code_spectrum_equivalence(&full, 1).unwrap();
        assert!(rep.pass);
        // repetition code at i = n: a single edge, eigenvalues +-1
        let rep_code = LinearCode::new(6, vec![0b111111]).unwrap();
        let rep = linear_code_spectrum_equivalence(&rep_code, 6).unwrap();
        assert!(rep.pass);
        // Hamming code, i = 3
        let rep = linear_code_spectrum_equivalence(&hamming_7_4(), 3).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.slice_size, 7);
    }

    #[test]
    fn hypercube_spectrum_values() {
        // direct check of the full-cube case: sorted eigenvalues of the
        // hypercube graph are n - 2|u| with binomial multiplicities
        let full = LinearCode::new(4, vec![1, 2, 4, 8]).unwrap();
        let span = full.span().unwrap();
        let code = Code::new(4, span).unwrap();
        let graph = DistanceGraph::new(&code, 1).unwrap();
        let eigen = nalgebra::SymmetricEigen::new(graph.dense_adjacency().unwrap());
        let mut values: Vec<f64> = eigen.eigenvalues.iter().cloned().collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected: Vec<f64> = (0..16u32)
            .map(|u| 4.0 - 2.0 * u.count_ones() as f64)
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn balancedness_exact_on_regular_and_triangle() {
        // distance graph of a linear code is regular: t = 1
        let ham = hamming_7_4().to_code().unwrap();
        let graph = DistanceGraph::new(&ham, 3).unwrap();
        let est = estimate_balancedness(&graph, 0).unwrap();
        assert_eq!(est.method, "exact");
        assert!((est.t_lower - 1.0).abs() < 1e-12, "t = {}", est.t_lower);
        // triangle + isolated vertices: the 3-clique gives t = |C|/3
        let code = triangle_plus_isolated(15);
        let graph = DistanceGraph::new(&code, 2).unwrap();
        let est = estimate_balancedness(&graph, 0).unwrap();
        assert!((est.t_lower - 5.0).abs() < 1e-12);
    }

    #[test]
    fn balancedness_heuristic_agrees_with_exact_on_small_graphs() {
        let p = crate::codes::RandomModelParams::new(12, 0.3, 0.1).unwrap();
        for seed in [3u64, 5, 8] {
            let code = crate::codes::sample_random_general(&p, 12, seed).unwrap();
            if code.len() < 4 || code.len() > 18 {
                continue;
            }
            let d = code.min_distance().unwrap();
            let graph = DistanceGraph::new(&code, d).unwrap();
            if graph.edge_count() == 0 {
                continue;
            }
            let exact = estimate_balancedness(&graph, 0).unwrap();
            assert!(exact.t_lower >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn linear_code_slice_ratio_equals_moment_ratio() {
        // for a linear code the eigenvalue distribution of G(C,i) on C equals
        // the distribution of f = sum_{a in A} W_a on the cube, so the two
        // norm-ratio routes must agree
        let cases: Vec<(LinearCode, usize)> = vec![
            (hamming_7_4(), 3),
            (hamming_7_4(), 4),
            (sample_random_linear(10, 5, 4242).unwrap(), 4),
        ];
        for (lc, i) in cases {
            let slice = SliceFunction::from_code_slice(&lc, i).unwrap();
            if slice.is_empty() {
                continue;
            }
            let slice_ratio = slice_norm_ratio(&slice).unwrap().ratio;
            let code = lc.to_code().unwrap();
            let graph = DistanceGraph::new(&code, i).unwrap();
            let moments = distance_graph_moments(&graph);
            let Some(graph_ratio) = moments.ratio else { continue };
            assert!(
                (slice_ratio - graph_ratio).abs() <= 1e-9 * slice_ratio,
                "i={i}: slice {slice_ratio} vs graph {graph_ratio}"
            );
            // and the degree regularity pins ||lambda||_2^2 = |A|
            assert!((moments.l2_sq - slice.len() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn heuristic_bound_never_exceeds_exact() {
        let p = crate::codes::RandomModelParams::new(14, 0.28, 0.1).unwrap();
        let mut checked = 0;
        for seed in 0..40u64 {
            let code = crate::codes::sample_random_general(&p, 14, seed).unwrap();
            if code.len() < 6 || code.len() > 20 {
                continue;
            }
            let d = code.min_distance().unwrap();
            let graph = DistanceGraph::new(&code, d).unwrap();
            if graph.edge_count() == 0 {
                continue;
            }
            let exact = exact_balancedness(&graph).unwrap();
            let heuristic = heuristic_balancedness(&graph, 5_000).unwrap();
            assert!(
                heuristic.t_lower <= exact.t_lower + 1e-9,
                "seed {seed}: heuristic {} above exact {}",
                heuristic.t_lower,
                exact.t_lower
            );
            assert!(heuristic.t_lower >= 1.0 - 1e-9);
            checked += 1;
        }
        assert!(checked >= 5, "only {checked} usable graphs");
    }

    #[test]
    fn random_code_balancedness_stays_small() {
        // empirical observation, not a theorem: t_lower <= 10 across seeds.
        // Tested at i = n/2 where the graph carries Theta(|C|^2 p) edges; at
        // i = d the graph can degenerate to a single edge, which forces
        // t = |C|/2 for any graph.
        let p = crate::codes::RandomModelParams::new(20, 0.25, 0.05).unwrap();
        for seed in 0..15u64 {
            let code = crate::codes::sample_random_general(&p, 20, seed).unwrap();
            let graph = DistanceGraph::new(&code, 10).unwrap();
            if graph.edge_count() == 0 {
                continue;
            }
            let est = estimate_balancedness(&graph, 20_000).unwrap();
            assert!(est.t_lower <= 10.0, "seed {seed}: t_lower = {}", est.t_lower);
        }
    }

    #[test]
    fn random_code_common_neighbors_bounded() {
        let p = crate::codes::RandomModelParams::new(24, 0.2, 0.05).unwrap();
        for seed in 0..20u64 {
            let code = crate::codes::sample_random_general(&p, 24, seed).unwrap();
            if code.len() < 4 {
                continue;
            }
            let d = code.min_distance().unwrap();
            let rep = pairwise_common_neighbors(&code, d).unwrap();
            assert!(rep.max_common <= 10, "seed {seed}: M = {}", rep.max_common);
        }
    }

    #[test]
    fn counterexample_triangle_structure() {
        let base = greedy_packing(30, 6, 30, 99).unwrap();
        let out = build_counterexample(&base, 4).unwrap();
        assert_eq!(out.k, 2);
        assert_eq!(out.code.min_distance().unwrap(), 2);
        let graph = DistanceGraph::new(&out.code, 2).unwrap();
        assert_eq!(graph.edge_count(), 3, "exactly the added triangle");
        // exactly 3 nonzero eigenvalues
        let eigen = nalgebra::SymmetricEigen::new(graph.dense_adjacency().unwrap());
        let nonzero = eigen.eigenvalues.iter().filter(|l| l.abs() > 1e-8).count();
        assert_eq!(nonzero, 3);
        // moment ratio matches (|C|/2)^{1/4}
        let report = distance_graph_moments(&graph);
        let expected = (out.code.len() as f64 / 2.0).powf(0.25);
        assert!((report.ratio.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn counterexample_requires_even_k() {
        // d = 3 gives k = 1 (odd): infeasible
        let base = greedy_packing(20, 3, 10, 1).unwrap();
        if base.min_distance().unwrap() == 3 {
            assert!(build_counterexample(&base, 0).is_err());
        }
    }

    #[test]
    fn sphere_intersection_reference_values() {
        // n=10, t=4, i=4: C(4,2) C(6,2) = 90
        assert_eq!(sphere_intersection_size(10, 4, 4), BigInt::from(90));
        // odd t: empty
        assert_eq!(sphere_intersection_size(10, 3, 4), BigInt::zero());
        // out of range second binomial
        assert_eq!(sphere_intersection_size(6, 4, 1), BigInt::zero());
    }

    #[test]
    fn common_neighbors_on_triangle() {
        let code = triangle_plus_isolated(10);
        let rep = pairwise_common_neighbors(&code, 2).unwrap();
        // any two triangle vertices share exactly the third
        assert_eq!(rep.max_common, 1);
        assert_eq!(rep.pair_distance, 2);
    }

    #[test]
    fn moment_ratio_cases() {
        // regular graph: ratio exactly 1
        let ham = hamming_7_4().to_code().unwrap();
        assert!((moment_ratio_dxk(&ham, 3).unwrap() - 1.0).abs() < 1e-12);
        // a single edge among m vertices: ratio = m/2
        let code = padded_code(40, &[0u64, 0b11], 12, 5);
        let m = code.len() as f64;
        let ratio = moment_ratio_dxk(&code, 2).unwrap();
        assert!((ratio - m / 2.0).abs() < 1e-12);
        // undefined when B_k = 0
        assert!(moment_ratio_dxk(&code, 39).is_err());
    }
}
