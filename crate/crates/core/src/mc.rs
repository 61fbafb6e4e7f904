//! Tail probabilities of `G(N, p)`: exact enumeration, plain and tilted
//! Monte Carlo, and empirical checks of the probability inequalities.
//!
//! Sample `s` of a study with master seed `m` uses sub-seed
//! `derive_seed(m, s)`. Per-sample contributions are reduced by pairwise
//! summation in sample order, so totals do not depend on how the samples
//! were split across workers.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graphs::{Known, PatternGraph};
use crate::homcount;
use crate::matrices::{MatrixKind, SymMatrix};
use crate::problem::{Direction, Functional, TailProblem};
use crate::rates::{ip, RateParams};
use crate::rng;
use crate::varsolve::{self, SolveOptions, VarProblem};

/// Largest `N` for exhaustive enumeration (`2^21` graphs).
pub const MAX_ENUM_N: usize = 7;

/// `G(N, p)` adjacency matrix; edge `e` (row-major over `i < j`) reads the
/// `e`-th draw of stream 0 of `seed`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<SymMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
    }
    let mut r = rng::stream(seed, 0);
    SymMatrix::from_upper_fn(n, MatrixKind::Adjacency, |_, _| if rng::bernoulli(&mut r, p) { 1.0 } else { 0.0 })
}

/// Sum in a fixed binary tree; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn graph_of_mask(n: usize, pairs: &[(usize, usize)], mask: u32) -> SymMatrix {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(e, _)| mask >> e & 1 == 1)
        .map(|(_, &pair)| pair)
        .collect();
    SymMatrix::adjacency(n, &edges).expect("pairs are distinct off-diagonal edges")
}

/// `counts[k]` = number of labelled graphs on `N` vertices with `k` edges in
/// which `inside` holds. `P = Σ_k counts[k] p^k (1 − p)^{d − k}`.
pub fn enumerate_counts(n: usize, mut inside: impl FnMut(&SymMatrix) -> Result<bool>) -> Result<Vec<u64>> {
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge {
            what: "N for exhaustive enumeration",
            got: n,
            max: MAX_ENUM_N,
        });
    }
    let pairs = edge_pairs(n);
    let d = pairs.len();
    let mut counts = vec![0u64; d + 1];
    for mask in 0u32..(1u32 << d) {
        let g = graph_of_mask(n, &pairs, mask);
        if inside(&g)? {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

/// `Σ_k counts[k] p^k (1 − p)^{d − k}`.
pub fn probability_from_counts(counts: &[u64], p: f64) -> f64 {
    let d = counts.len() - 1;
    let terms: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 * libm::pow(p, k as f64) * libm::pow(1.0 - p, (d - k) as f64))
        .collect();
    pairwise_sum(&terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
    ImportanceSampling,
}

impl EstimateMode {
    pub fn label(self) -> &'static str {
        match self {
            EstimateMode::Exact => "exact",
            EstimateMode::MonteCarlo => "monte-carlo",
            EstimateMode::ImportanceSampling => "importance-sampling",
        }
    }
}

/// An estimated or exact tail probability.
#[derive(Clone, Debug)]
pub struct TailEstimate {
    pub problem: TailProblem,
    /// In `[0, 1]`.
    pub value: f64,
    pub mode: EstimateMode,
    /// Zero for exact values.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// `(Σ w)² / Σ w²` over the weighted indicators; the sample count for exact values.
    pub ess: f64,
    /// Sample mean of `dμ_p / dq`, which is 1 in expectation.
    pub mean_lr: f64,
    pub mean_lr_se: f64,
    pub hits: u64,
}

/// Exact tail probability by summing `μ_p` over all graphs. `N ≤ 7`.
pub fn enumerate_tail(problem: &TailProblem) -> Result<TailEstimate> {
    let counts = enumerate_counts(problem.n, |g| problem.contains(g))?;
    let value = probability_from_counts(&counts, problem.p).clamp(0.0, 1.0);
    let graphs = 1u64 << (problem.n * problem.n.saturating_sub(1) / 2);
    Ok(TailEstimate {
        problem: problem.clone(),
        value,
        mode: EstimateMode::Exact,
        std_error: 0.0,
        samples: graphs,
        seed: 0,
        ess: graphs as f64,
        mean_lr: 1.0,
        mean_lr_se: 0.0,
        hits: counts.iter().sum(),
    })
}

/// Proposal distribution for importance sampling.
#[derive(Clone, Debug, PartialEq)]
pub enum TiltSpec {
    /// Independent Bernoulli(`r`) edges, `r ∈ (0, 1)`.
    Product(f64),
    /// `G(N, p)` with every edge of a uniformly chosen `N_0`-set forced present.
    PlantedClique(usize),
    /// `G(N, p)` with every edge at a uniformly chosen `k`-set forced present.
    PlantedHub(usize),
    /// Draw component `i` with probability `w_i`; weights sum to 1.
    Mixture(Vec<(f64, TiltSpec)>),
}

impl TiltSpec {
    pub fn label(&self) -> String {
        match self {
            TiltSpec::Product(r) => format!("product({r})"),
            TiltSpec::PlantedClique(k) => format!("clique({k})"),
            TiltSpec::PlantedHub(k) => format!("hub({k})"),
            TiltSpec::Mixture(parts) => {
                let inner: Vec<String> = parts.iter().map(|(w, t)| format!("{w}*{}", t.label())).collect();
                format!("mixture[{}]", inner.join("+"))
            }
        }
    }

    fn validate(&self, n: usize, p: f64) -> Result<()> {
        match self {
            TiltSpec::Product(r) => {
                if !(*r > 0.0 && *r < 1.0) {
                    return Err(Error::Domain(format!("product tilt needs r in (0, 1), got {r}")));
                }
            }
            TiltSpec::PlantedClique(k) | TiltSpec::PlantedHub(k) => {
                if *k > n {
                    return Err(Error::Domain(format!("planted size {k} exceeds N = {n}")));
                }
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::Domain(format!("planted tilts need p in (0, 1), got {p}")));
                }
            }
            TiltSpec::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::Domain("empty mixture".into()));
                }
                let total: f64 = parts.iter().map(|(w, _)| *w).sum();
                if parts.iter().any(|(w, _)| !(*w > 0.0)) || (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!("mixture weights must be positive and sum to 1, got {total}")));
                }
                for (_, t) in parts {
                    t.validate(n, p)?;
                }
            }
        }
        Ok(())
    }

    /// Draws from the proposal using sub-seed `seed`.
    pub fn sample(&self, n: usize, p: f64, seed: u64) -> Result<SymMatrix> {
        let mut structure = rng::stream(seed, rng::STRUCTURE_BIT);
        self.sample_with(n, p, seed, &mut structure)
    }

    fn sample_with(&self, n: usize, p: f64, seed: u64, structure: &mut rand_chacha::ChaCha8Rng) -> Result<SymMatrix> {
        match self {
            TiltSpec::Product(r) => sample_gnp(n, *r, seed),
            TiltSpec::PlantedClique(k) => {
                let mut g = sample_gnp(n, p, seed)?;
                let s = rng::subset(structure, n, *k);
                for (a, &i) in s.iter().enumerate() {
                    for &j in &s[a + 1..] {
                        g.set(i, j, 1.0)?;
                    }
                }
                Ok(g)
            }
            TiltSpec::PlantedHub(k) => {
                let mut g = sample_gnp(n, p, seed)?;
                for i in rng::subset(structure, n, *k) {
                    for j in 0..n {
                        if j != i {
                            g.set(i, j, 1.0)?;
                        }
                    }
                }
                Ok(g)
            }
            TiltSpec::Mixture(parts) => {
                let u = rng::unit(structure);
                let mut acc = 0.0;
                let mut chosen = &parts[parts.len() - 1].1;
                for (w, t) in parts {
                    acc += w;
                    if u < acc {
                        chosen = t;
                        break;
                    }
                }
                chosen.sample_with(n, p, seed, structure)
            }
        }
    }

    /// `(dq/dμ_p)(A)`, the inverse likelihood ratio; zero where `q` has no mass.
    pub fn inverse_lr(&self, a: &SymMatrix, p: f64) -> Result<f64> {
        let n = a.n();
        match self {
            TiltSpec::Product(r) => Ok(libm::exp(-product_log_lr(a, p, *r))),
            TiltSpec::PlantedClique(k) => {
                let cliques = count_cliques(a, *k);
                let log_norm = log_binom(n, *k) + (k * k.saturating_sub(1) / 2) as f64 * libm::log(p);
                Ok(cliques as f64 * libm::exp(-log_norm))
            }
            TiltSpec::PlantedHub(k) => {
                let universal = (0..n).filter(|&i| (0..n).all(|j| j == i || a.get(i, j) == 1.0)).count();
                if universal < *k {
                    return Ok(0.0);
                }
                let forced = k * k.saturating_sub(1) / 2 + k * (n - k);
                let log_norm = log_binom(n, *k) + forced as f64 * libm::log(p);
                Ok(libm::exp(log_binom(universal, *k) - log_norm))
            }
            TiltSpec::Mixture(parts) => {
                let mut s = 0.0;
                for (w, t) in parts {
                    s += w * t.inverse_lr(a, p)?;
                }
                Ok(s)
            }
        }
    }
}

/// `log (dμ_p/dμ_r)(A)` in the tilting form
/// `−[κ Σ_{i<j} (r − A_ij) + C(N,2) I_p(r)]`, `κ = log((1−r)/(1−p)) + log(p/r)`.
pub fn product_log_lr(a: &SymMatrix, p: f64, r: f64) -> f64 {
    let n = a.n() as f64;
    let d = n * (n - 1.0) / 2.0;
    let kappa = libm::log((1.0 - r) / (1.0 - p)) + libm::log(p / r);
    let centred: f64 = a.upper().map(|(_, _, x)| r - x).sum();
    -(kappa * centred + d * ip(p, r))
}

/// `log (dμ_p/dμ_r)(A)` edge by edge.
pub fn product_log_lr_direct(a: &SymMatrix, p: f64, r: f64) -> f64 {
    a.upper()
        .map(|(_, _, x)| {
            if x == 1.0 {
                libm::log(p / r)
            } else {
                libm::log((1.0 - p) / (1.0 - r))
            }
        })
        .sum()
}

fn log_binom(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| libm::log((n - i) as f64) - libm::log((i + 1) as f64)).sum()
}

/// Number of `k`-cliques of an adjacency matrix. `N ≤ 64`.
pub fn count_cliques(a: &SymMatrix, k: usize) -> u64 {
    let n = a.n();
    assert!(n <= 64, "clique counting uses 64-bit vertex masks");
    let adj: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && a.get(i, j) == 1.0).fold(0u64, |m, j| m | 1 << j))
        .collect();
    fn rec(adj: &[u64], cand: u64, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        if (cand.count_ones() as usize) < left {
            return 0;
        }
        let mut total = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += rec(adj, rest & adj[v], left - 1);
        }
        total
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(&adj, all, k)
}

/// `log μ_p(a fixed N_0-set spans a clique) = C(N_0, 2) log p`.
pub fn clique_event_log_prob(n0: usize, p: f64) -> f64 {
    (n0 * n0.saturating_sub(1) / 2) as f64 * libm::log(p)
}

/// `log μ_p(a fixed k-set is universal) = (C(k,2) + k(N − k)) log p`.
pub fn hub_event_log_prob(n: usize, k: usize, p: f64) -> f64 {
    (k * k.saturating_sub(1) / 2 + k * (n - k)) as f64 * libm::log(p)
}

/// One importance-sampling draw: the weighted indicator and the likelihood ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsRecord {
    pub weight: f64,
    pub lr: f64,
    pub hit: bool,
}

/// Draws samples `range` of a study; records depend only on `(seed, index)`.
pub fn is_records(problem: &TailProblem, tilt: &TiltSpec, seed: u64, range: core::ops::Range<u64>) -> Result<Vec<IsRecord>> {
    tilt.validate(problem.n, problem.p)?;
    range
        .map(|s| {
            let sub = rng::derive_seed(seed, s);
            let a = tilt.sample(problem.n, problem.p, sub)?;
            let inv = tilt.inverse_lr(&a, problem.p)?;
            if !(inv > 0.0) {
                return Err(Error::Precondition(format!("proposal {} produced a graph it cannot weight", tilt.label())));
            }
            let lr = 1.0 / inv;
            let hit = problem.contains(&a)?;
            Ok(IsRecord {
                weight: if hit { lr } else { 0.0 },
                lr,
                hit,
            })
        })
        .collect()
}

/// Reduces records (in sample order) to an estimate.
pub fn estimate_from_records(problem: &TailProblem, tilt: &TiltSpec, seed: u64, records: &[IsRecord]) -> Result<TailEstimate> {
    let m = records.len();
    if m == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let mf = m as f64;
    let w: Vec<f64> = records.iter().map(|r| r.weight).collect();
    let w2: Vec<f64> = w.iter().map(|x| x * x).collect();
    let lr: Vec<f64> = records.iter().map(|r| r.lr).collect();
    let lr2: Vec<f64> = lr.iter().map(|x| x * x).collect();
    let (sw, sw2) = (pairwise_sum(&w), pairwise_sum(&w2));
    if sw2 == 0.0 {
        return Err(Error::ZeroEffectiveSampleSize);
    }
    let mean = sw / mf;
    let var = if m > 1 { ((sw2 - mf * mean * mean) / (mf - 1.0)).max(0.0) } else { 0.0 };
    let mean_lr = pairwise_sum(&lr) / mf;
    let var_lr = if m > 1 {
        ((pairwise_sum(&lr2) - mf * mean_lr * mean_lr) / (mf - 1.0)).max(0.0)
    } else {
        0.0
    };
    let plain = *tilt == TiltSpec::Product(problem.p);
    Ok(TailEstimate {
        problem: problem.clone(),
        value: mean.clamp(0.0, 1.0),
        mode: if plain {
            EstimateMode::MonteCarlo
        } else {
            EstimateMode::ImportanceSampling
        },
        std_error: libm::sqrt(var / mf),
        samples: m as u64,
        seed,
        ess: sw * sw / sw2,
        mean_lr,
        mean_lr_se: libm::sqrt(var_lr / mf),
        hits: records.iter().filter(|r| r.hit).count() as u64,
    })
}

/// Importance-sampling estimate of `μ_p(problem)` under proposal `tilt`.
pub fn is_tail(problem: &TailProblem, tilt: &TiltSpec, samples: u64, seed: u64) -> Result<TailEstimate> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let records = is_records(problem, tilt, seed, 0..samples)?;
    estimate_from_records(problem, tilt, seed, &records)
}

/// Plain Monte Carlo (`tilt = product(p)`).
pub fn mc_tail(problem: &TailProblem, samples: u64, seed: u64) -> Result<TailEstimate> {
    is_tail(problem, &TiltSpec::Product(problem.p), samples, seed)
}

/// A closed convex subset of `[0, 1]^{C(N,2)}` (coordinates row-major over `i < j`).
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSet {
    Cube,
    /// `{x : A x ≤ b}`; `interior` satisfies every constraint.
    Linear {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        interior: Vec<f64>,
    },
    /// `{X : ‖X‖_{S_α} ≤ radius}`.
    SchattenBall { alpha: f64, radius: f64 },
}

impl ConvexSet {
    pub fn label(&self) -> String {
        match self {
            ConvexSet::Cube => String::from("cube"),
            ConvexSet::Linear { a, .. } => format!("linear[{}]", a.len()),
            ConvexSet::SchattenBall { alpha, radius } if alpha.is_infinite() => format!("schatten-ball[inf,{radius}]"),
            ConvexSet::SchattenBall { alpha, radius } => format!("schatten-ball[{alpha},{radius}]"),
        }
    }

    pub fn contains(&self, x: &SymMatrix) -> Result<bool> {
        match self {
            ConvexSet::Cube => Ok(true),
            ConvexSet::Linear { a, b, .. } => {
                let xs: Vec<f64> = x.upper().map(|(_, _, v)| v).collect();
                Ok(a.iter().zip(b).all(|(row, &bk)| {
                    let ax: f64 = row.iter().zip(&xs).map(|(u, v)| u * v).sum();
                    ax <= bk + 1e-12 * bk.abs().max(1.0)
                }))
            }
            ConvexSet::SchattenBall { alpha, radius } => Ok(Direction::Lower.holds(x.schatten(*alpha)?, *radius)),
        }
    }
}

/// Outcome of checking `μ_p(K) ≤ exp(−I_p(K))`.
#[derive(Clone, Debug)]
pub struct ConvexBoundReport {
    pub set: String,
    pub n: usize,
    pub p: f64,
    /// Exact `μ_p(K)`.
    pub mu: f64,
    /// Certified lower bound on `I_p(K)`.
    pub i_lower: f64,
    /// `I_p` at a feasible point of `K`.
    pub i_upper: f64,
    /// `−I_upper − log μ`; nonnegative when the check is certified.
    pub log_margin: f64,
    pub holds: bool,
}

/// Tolerance (in log space) granted to the minimiser.
pub const CONVEX_TOL: f64 = 1e-6;

/// Checks the convex-set bound against exact enumeration. Passing uses the
/// feasible-point value `I_upper ≥ I_p(K)`, which is the stronger requirement.
pub fn verify_convex_bound(set: &ConvexSet, n: usize, p: f64) -> Result<ConvexBoundReport> {
    if n > 6 {
        return Err(Error::TooLarge {
            what: "N for the convex-set check",
            got: n,
            max: 6,
        });
    }
    let counts = enumerate_counts(n, |g| set.contains(g))?;
    let mu = probability_from_counts(&counts, p);
    let d = n * (n - 1) / 2;
    let df = d as f64;
    let (i_lower, i_upper) = match set {
        ConvexSet::Cube => (0.0, 0.0),
        ConvexSet::Linear { a, b, interior } => {
            let r = varsolve::min_ip_linear(p, a, b, interior)?;
            (r.lower, r.upper)
        }
        ConvexSet::SchattenBall { alpha, radius } => {
            let q = radius / (n as f64 - 1.0);
            let lower = if q < p { df * ip(p, q.max(0.0)) } else { 0.0 };
            if alpha.is_infinite() {
                // q J attains the bound: ‖q J‖_op = q (N − 1)
                (lower, lower)
            } else if q >= p && SymMatrix::constant(n, p)?.schatten(*alpha)? <= *radius {
                (0.0, 0.0)
            } else {
                let params = RateParams {
                    n,
                    p,
                    t: q,
                    direction: Direction::Lower,
                };
                let sol = varsolve::solve_psi(&VarProblem::new(Functional::Schatten(*alpha), params), &SolveOptions::default())?;
                (lower, sol.objective)
            }
        }
    };
    let log_margin = if mu > 0.0 { -i_upper - libm::log(mu) } else { f64::INFINITY };
    Ok(ConvexBoundReport {
        set: set.label(),
        n,
        p,
        mu,
        i_lower,
        i_upper,
        log_margin,
        holds: log_margin >= -CONVEX_TOL,
    })
}

/// A deterministic family of convex sets for `(N, p)`: the cube, edge-count
/// half-spaces, random one to three half-space polytopes and Schatten balls.
pub fn random_convex_sets(n: usize, p: f64, count: usize, seed: u64) -> Vec<ConvexSet> {
    let d = n * (n - 1) / 2;
    let mut r = rng::stream(seed, rng::STRUCTURE_BIT | 1);
    let mut sets = Vec::with_capacity(count);
    for i in 0..count {
        let set = match i % 5 {
            0 if i == 0 => ConvexSet::Cube,
            0 | 1 => {
                let level = p * (0.2 + 0.7 * rng::unit(&mut r));
                ConvexSet::Linear {
                    a: vec![vec![1.0; d]],
                    b: vec![level * d as f64],
                    interior: vec![level; d],
                }
            }
            2 | 3 => {
                let k = 1 + rng::below(&mut r, 3) as usize;
                let interior: Vec<f64> = (0..d).map(|_| p * rng::unit(&mut r)).collect();
                let signed = i % 5 == 3;
                let a: Vec<Vec<f64>> = (0..k)
                    .map(|_| {
                        (0..d)
                            .map(|_| {
                                let u = rng::unit(&mut r);
                                if signed {
                                    2.0 * u - 1.0
                                } else {
                                    u
                                }
                            })
                            .collect()
                    })
                    .collect();
                // a margin keeps `interior` strictly inside every half-space
                let b = a
                    .iter()
                    .map(|row| row.iter().zip(&interior).map(|(u, v)| u * v).sum::<f64>() + 0.01 * row.iter().map(|u| u.abs()).sum::<f64>())
                    .collect();
                ConvexSet::Linear { a, b, interior }
            }
            _ => {
                let alpha = [2.0, 4.0, f64::INFINITY][rng::below(&mut r, 3) as usize];
                let q = p * (0.2 + 0.7 * rng::unit(&mut r));
                ConvexSet::SchattenBall {
                    alpha,
                    radius: q * (n as f64 - 1.0),
                }
            }
        };
        sets.push(set);
    }
    sets
}

/// A two-sided lower-tail inequality `P ≤ e^{−ψ} ≤ e^{−C(N,2) I_p(q)}` checked exactly.
#[derive(Clone, Debug)]
pub struct LowerTailCheck {
    pub statistic: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub probability: f64,
    /// Solver value of `ψ` (an upper bound on the infimum).
    pub psi: f64,
    /// `C(N,2) I_p(q)`.
    pub closed_form: f64,
    /// `P ≤ e^{−ψ}` up to [`CONVEX_TOL`] in log space.
    pub first_holds: bool,
    /// `P ≤ e^{−C(N,2) I_p(q)}`.
    pub second_holds: bool,
    /// `ψ ≥ C(N,2) I_p(q)` up to `1e-8`.
    pub sandwich_holds: bool,
}

impl LowerTailCheck {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds && self.sandwich_holds
    }
}

fn lower_check(statistic: String, problem: &TailProblem, vp: &VarProblem, q: f64) -> Result<LowerTailCheck> {
    let probability = enumerate_tail(problem)?.value;
    let sol = varsolve::solve_psi(vp, &SolveOptions::default())?;
    let n = problem.n as f64;
    let closed_form = n * (n - 1.0) / 2.0 * ip(problem.p, q);
    let log_p = libm::log(probability);
    Ok(LowerTailCheck {
        statistic,
        n: problem.n,
        p: problem.p,
        q,
        probability,
        psi: sol.objective,
        closed_form,
        first_holds: probability == 0.0 || log_p <= -sol.objective + CONVEX_TOL,
        second_holds: probability == 0.0 || log_p <= -closed_form + CONVEX_TOL,
        sandwich_holds: sol.objective >= closed_form - 1e-8,
    })
}

/// `P(‖A‖_{S_α} ≤ q (N − 1))` against `e^{−ψ}` and `e^{−C(N,2) I_p(q)}`, `0 < q < p`.
pub fn check_schatten_lower(n: usize, p: f64, alpha: f64, q: f64) -> Result<LowerTailCheck> {
    if !(q > 0.0 && q < p) {
        return Err(Error::Domain(format!("need 0 < q < p, got q = {q}, p = {p}")));
    }
    let f = Functional::Schatten(alpha);
    let problem = TailProblem {
        functional: f.clone(),
        n,
        p,
        direction: Direction::Lower,
        threshold: q * (n as f64 - 1.0),
    };
    let params = RateParams {
        n,
        p,
        t: q,
        direction: Direction::Lower,
    };
    lower_check(f.label(), &problem, &VarProblem::new(f, params), q)
}

/// `P(hom_H ≤ q̂^m N^n)`, `q̂ = q − q/N`, for seminorming `H`.
pub fn check_semi_lower(h: &PatternGraph, n: usize, p: f64, q: f64) -> Result<LowerTailCheck> {
    if h.classify().seminorming != Known::Yes {
        return Err(Error::NoConvexityCertificate(format!("{h} is not known to be seminorming")));
    }
    if !(q > 0.0 && q < p) {
        return Err(Error::Domain(format!("need 0 < q < p, got q = {q}, p = {p}")));
    }
    let m = h.n_edges() as f64;
    let q_hat = q - q / n as f64;
    let threshold = libm::pow(q_hat, m) * libm::pow(n as f64, h.n_vertices() as f64);
    let f = Functional::Hom(h.clone());
    let problem = TailProblem {
        functional: f.clone(),
        n,
        p,
        direction: Direction::Lower,
        threshold,
    };
    let params = RateParams {
        n,
        p,
        t: libm::pow(q_hat / p, m),
        direction: Direction::Lower,
    };
    lower_check(f.label(), &problem, &VarProblem::new(f, params), q)
}

/// Caller constants for the descriptive spectral study. Each bound is
/// `constant × shape`, with the shapes of the refined tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralConstants {
    pub c_lambda: f64,
    pub c_tail: f64,
    pub c_hs: f64,
}

impl Default for SpectralConstants {
    fn default() -> Self {
        Self {
            c_lambda: 1.0,
            c_tail: 1.0,
            c_hs: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralStudyParams {
    pub n: usize,
    pub p: f64,
    pub r_list: Vec<usize>,
    pub k: f64,
    /// Exponent of the spectral tail sums, `α > 2`.
    pub alpha: f64,
    pub samples: u64,
    pub seed: u64,
    pub constants: SpectralConstants,
}

/// Spectral quantities of one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample {
    /// `|λ_j|` in decreasing order.
    pub abs_eigs: Vec<f64>,
    pub edges: u64,
    /// `‖A‖²_HS` from the spectrum.
    pub hs_sq: f64,
}

pub fn spectral_sample(params: &SpectralStudyParams, index: u64) -> Result<SpectralSample> {
    let a = sample_gnp(params.n, params.p, rng::derive_seed(params.seed, index))?;
    let mut abs_eigs: Vec<f64> = a.spectrum()?.values().iter().map(|l| l.abs()).collect();
    abs_eigs.sort_by(|x, y| y.total_cmp(x));
    let edges = a.upper().filter(|&(_, _, x)| x == 1.0).count() as u64;
    let hs_sq = pairwise_sum(&abs_eigs.iter().map(|l| l * l).collect::<Vec<_>>());
    Ok(SpectralSample { abs_eigs, edges, hs_sq })
}

/// Violation counts for one `R`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralRow {
    pub r: usize,
    pub lambda_bd: u64,
    pub tail_refined: u64,
    /// `‖A‖_{HS,R}` above `c_hs (√(R N p) + K N p)`.
    pub hs_k_exceed: u64,
    /// `|λ_R| > K N √p / √R` on the event `‖A‖_HS < K N √p`.
    pub ahs_r: u64,
    /// `Σ_{j ≥ R} |λ_j|^α > (K N √p / R^{1/2 − 1/α})^α` on the same event.
    pub ahs_ell: u64,
    /// `|λ_{R+1}| > N / √(R + 1)`.
    pub rapprox_basic: u64,
    /// Samples with `|λ_{R+1}| > |λ_R|`.
    pub monotonicity: u64,
    pub mean_abs_lambda: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralStudy {
    pub params: SpectralStudyParams,
    pub rows: Vec<SpectralRow>,
    /// Samples with `‖A‖_HS ≥ K N √p`.
    pub hs_exceed: u64,
    /// Samples with `‖A‖²_HS ≠ 2 · edges` beyond rounding.
    pub hs_identity_failures: u64,
}

impl SpectralStudy {
    /// Violations of the deterministic statements: the basic rank bound,
    /// ordering, the Hilbert–Schmidt identity and the two bounds implied by a
    /// small Hilbert–Schmidt norm.
    pub fn deterministic_violations(&self) -> u64 {
        self.hs_identity_failures + self.rows.iter().map(|r| r.rapprox_basic + r.monotonicity + r.ahs_r + r.ahs_ell).sum::<u64>()
    }

    pub fn hs_exceed_frequency(&self) -> f64 {
        self.hs_exceed as f64 / self.params.samples as f64
    }
}

/// Aggregates samples (in index order) into the study report.
pub fn spectral_aggregate(params: &SpectralStudyParams, samples: &[SpectralSample]) -> Result<SpectralStudy> {
    let n = params.n;
    let nf = n as f64;
    let (p, k, alpha) = (params.p, params.k, params.alpha);
    for &r in &params.r_list {
        if r == 0 || r > n {
            return Err(Error::OutOfRange {
                what: "R",
                got: r,
                lo: 1,
                hi: n,
            });
        }
    }
    let c = params.constants;
    let hs_level = k * nf * libm::sqrt(p);
    let mut rows: Vec<SpectralRow> = params
        .r_list
        .iter()
        .map(|&r| SpectralRow {
            r,
            ..SpectralRow::default()
        })
        .collect();
    let mut sums = vec![Vec::with_capacity(samples.len()); rows.len()];
    let mut hs_exceed = 0;
    let mut hs_identity_failures = 0;
    for s in samples {
        if (s.hs_sq - 2.0 * s.edges as f64).abs() > 1e-9 * (1.0 + s.hs_sq) {
            hs_identity_failures += 1;
        }
        let hs = libm::sqrt(s.hs_sq);
        let small_hs = hs < hs_level;
        if !small_hs {
            hs_exceed += 1;
        }
        for (row, acc) in rows.iter_mut().zip(sums.iter_mut()) {
            let r = row.r;
            let rf = r as f64;
            let lam_r = s.abs_eigs[r - 1];
            let lam_next = s.abs_eigs.get(r).copied().unwrap_or(0.0);
            acc.push(lam_r);
            if lam_r > c.c_lambda * (libm::sqrt(nf * p) + k * nf * p / libm::sqrt(rf)) {
                row.lambda_bd += 1;
            }
            let tail: f64 = s.abs_eigs[r..].iter().map(|l| libm::pow(*l, alpha)).sum();
            let tail_bound = c.c_tail
                * (libm::pow(nf, 1.0 + alpha / 2.0) * libm::pow(p, alpha / 2.0)
                    + libm::pow(k * nf * p, alpha) / libm::pow(rf, alpha / 2.0 - 1.0));
            if tail > tail_bound {
                row.tail_refined += 1;
            }
            let top: f64 = s.abs_eigs[..r].iter().map(|l| l * l).sum();
            if libm::sqrt(top) > c.c_hs * (libm::sqrt(rf * nf * p) + k * nf * p) {
                row.hs_k_exceed += 1;
            }
            if small_hs {
                if lam_r > hs_level / libm::sqrt(rf) * (1.0 + 1e-12) {
                    row.ahs_r += 1;
                }
                let ell: f64 = s.abs_eigs[r - 1..].iter().map(|l| libm::pow(*l, alpha)).sum();
                let bound = libm::pow(hs_level / libm::pow(rf, 0.5 - 1.0 / alpha), alpha);
                if ell > bound * (1.0 + 1e-9) {
                    row.ahs_ell += 1;
                }
            }
            if lam_next > nf / libm::sqrt(rf + 1.0) * (1.0 + 1e-12) {
                row.rapprox_basic += 1;
            }
            if lam_next > lam_r {
                row.monotonicity += 1;
            }
        }
    }
    for (row, acc) in rows.iter_mut().zip(&sums) {
        row.mean_abs_lambda = if acc.is_empty() { 0.0 } else { pairwise_sum(acc) / acc.len() as f64 };
    }
    Ok(SpectralStudy {
        params: params.clone(),
        rows,
        hs_exceed,
        hs_identity_failures,
    })
}

/// Sequential spectral study.
pub fn spectral_tail_study(params: &SpectralStudyParams) -> Result<SpectralStudy> {
    if !(params.alpha > 2.0) {
        return Err(Error::Domain(format!("tail exponent must exceed 2, got {}", params.alpha)));
    }
    let samples = (0..params.samples).map(|i| spectral_sample(params, i)).collect::<Result<Vec<_>>>()?;
    spectral_aggregate(params, &samples)
}

/// Estimate of `μ_p(B_r(ε, α))`, `B_r = {‖X − r J‖_{S_α} ≤ ε r N}`, by sampling `μ_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct TiltBallReport {
    pub n: usize,
    pub p: f64,
    pub r: f64,
    pub eps: f64,
    pub alpha: f64,
    pub samples: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// Fraction of `μ_r` samples inside the ball.
    pub ball_mass_r: f64,
    /// `½ exp(−C(N,2) I_p(r) − ε p N²)`.
    pub bound: f64,
    pub ratio: f64,
    /// `μ_r(B) exp(−mean over B of log dμ_r/dμ_p)`, the Jensen lower bound.
    pub jensen_lower: f64,
}

pub fn tilt_ball_probability(n: usize, p: f64, r: f64, eps: f64, alpha: f64, samples: u64, seed: u64) -> Result<TiltBallReport> {
    if !(r > 0.0 && r <= p && p <= 0.5) {
        return Err(Error::Domain(format!("need 0 < r ≤ p ≤ 1/2, got r = {r}, p = {p}")));
    }
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let radius = eps * r * n as f64;
    let rj = SymMatrix::constant(n, r)?;
    let mut w = Vec::with_capacity(samples as usize);
    let mut logs = Vec::new();
    for s in 0..samples {
        let a = sample_gnp(n, r, rng::derive_seed(seed, s))?;
        let dist = a.sub(&rj)?.schatten(alpha)?;
        if Direction::Lower.holds(dist, radius) {
            let log_lr = product_log_lr(&a, p, r);
            w.push(libm::exp(log_lr));
            logs.push(-log_lr);
        } else {
            w.push(0.0);
        }
    }
    let m = samples as f64;
    let est = pairwise_sum(&w) / m;
    let sq: Vec<f64> = w.iter().map(|x| x * x).collect();
    let var = if samples > 1 { ((pairwise_sum(&sq) - m * est * est) / (m - 1.0)).max(0.0) } else { 0.0 };
    let nf = n as f64;
    let bound = 0.5 * libm::exp(-nf * (nf - 1.0) / 2.0 * ip(p, r) - eps * p * nf * nf);
    let ball_mass_r = logs.len() as f64 / m;
    let jensen_lower = if logs.is_empty() {
        0.0
    } else {
        ball_mass_r * libm::exp(-pairwise_sum(&logs) / logs.len() as f64)
    };
    Ok(TiltBallReport {
        n,
        p,
        r,
        eps,
        alpha,
        samples,
        seed,
        estimate: est,
        std_error: libm::sqrt(var / m),
        ball_mass_r,
        bound,
        ratio: est / bound,
        jensen_lower,
    })
}

/// Exact `P(hom_H ≥ c)` by enumeration; used by the counting oracle of the CLI.
pub fn exact_hom_tail(h: &PatternGraph, n: usize, p: f64, threshold: f64, direction: Direction) -> Result<TailEstimate> {
    enumerate_tail(&TailProblem {
        functional: Functional::Hom(h.clone()),
        n,
        p,
        direction,
        threshold,
    })
}

/// Triangle count of an adjacency matrix, `hom_{C3} / 6`.
pub fn triangles(a: &SymMatrix) -> Result<u64> {
    let c3 = PatternGraph::cycle(3)?;
    let h = homcount::hom(&c3, a)?;
    Ok(h.exact.unwrap_or(libm::round(h.value) as u64) / 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_problem(n: usize, p: f64, thr: f64) -> TailProblem {
        TailProblem {
            functional: Functional::Hom(PatternGraph::cycle(3).unwrap()),
            n,
            p,
            direction: Direction::Upper,
            threshold: thr,
        }
    }

    #[test]
    fn sampler_edge_cases_and_determinism() {
        assert_eq!(sample_gnp(6, 0.0, 1).unwrap().upper_sum(), 0.0);
        assert_eq!(sample_gnp(6, 1.0, 1).unwrap().upper_sum(), 15.0);
        assert_eq!(sample_gnp(30, 0.3, 9).unwrap(), sample_gnp(30, 0.3, 9).unwrap());
        assert_ne!(sample_gnp(30, 0.3, 9).unwrap(), sample_gnp(30, 0.3, 10).unwrap());
    }

    #[test]
    fn triangle_oracle_by_inclusion_exclusion() {
        // P(at least one of the four triangles of K4 is present), p = 1/2:
        // 4 p³ − 6 p⁵ + 4 p⁶ − p⁶ (pairs share one edge, triples and the
        // quadruple need all six edges)
        let p: f64 = 0.5;
        let incl = 4.0 * p.powi(3) - 6.0 * p.powi(5) + 4.0 * p.powi(6) - p.powi(6);
        let e = enumerate_tail(&c3_problem(4, 0.5, 6.0)).unwrap();
        assert_eq!(e.value, 23.0 / 64.0);
        assert!((incl - 23.0 / 64.0).abs() < 1e-15);
        let all = enumerate_tail(&c3_problem(4, 0.3, 0.0)).unwrap();
        assert!((all.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn edge_count_closed_form() {
        for p in [0.1, 0.5, 0.8] {
            let prob = TailProblem {
                functional: Functional::EdgeCount,
                n: 3,
                p,
                direction: Direction::Upper,
                threshold: 1.0,
            };
            let e = enumerate_tail(&prob).unwrap();
            assert!((e.value - (1.0 - (1.0 - p) * (1.0 - p) * (1.0 - p))).abs() < 1e-14);
        }
    }

    #[test]
    fn tilting_form_matches_direct_ratio() {
        let a = sample_gnp(9, 0.4, 3).unwrap();
        for r in [0.1, 0.25, 0.4, 0.7] {
            let x = product_log_lr(&a, 0.4, r);
            let y = product_log_lr_direct(&a, 0.4, r);
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn planted_ratios_are_normalised() {
        // Σ_A μ_p(A) (dq/dμ_p)(A) = 1 over all graphs for each proposal
        let (n, p) = (5usize, 0.3f64);
        let pairs = edge_pairs(n);
        for tilt in [
            TiltSpec::PlantedClique(3),
            TiltSpec::PlantedHub(2),
            TiltSpec::Mixture(vec![(0.5, TiltSpec::Product(0.5)), (0.5, TiltSpec::PlantedClique(4))]),
        ] {
            let mut total = 0.0;
            for mask in 0u32..(1 << pairs.len()) {
                let g = graph_of_mask(n, &pairs, mask);
                let k = mask.count_ones() as f64;
                let mu = p.powf(k) * (1.0 - p).powf(10.0 - k);
                total += mu * tilt.inverse_lr(&g, p).unwrap();
            }
            assert!((total - 1.0).abs() < 1e-12, "{}: {total}", tilt.label());
        }
    }

    #[test]
    fn planted_event_probabilities() {
        let (n, p) = (5, 0.4);
        let clique = enumerate_counts(n, |g| Ok(g.get(0, 1) == 1.0 && g.get(0, 2) == 1.0 && g.get(1, 2) == 1.0)).unwrap();
        let v = probability_from_counts(&clique, p);
        assert!((v.ln() - clique_event_log_prob(3, p)).abs() < 1e-12);
        let hub = enumerate_counts(n, |g| Ok((1..n).all(|j| g.get(0, j) == 1.0))).unwrap();
        let v = probability_from_counts(&hub, p);
        assert!((v.ln() - hub_event_log_prob(n, 1, p)).abs() < 1e-12);
    }

    #[test]
    fn plain_mc_matches_oracle() {
        let prob = c3_problem(4, 0.5, 6.0);
        let e = mc_tail(&prob, 20_000, 11).unwrap();
        assert_eq!(e.mode, EstimateMode::MonteCarlo);
        assert!((e.value - 23.0 / 64.0).abs() <= 4.0 * e.std_error);
        assert_eq!(e.mean_lr, 1.0);
    }

    #[test]
    fn product_tilt_lower_edge_tail() {
        let prob = TailProblem {
            functional: Functional::EdgeCount,
            n: 6,
            p: 0.5,
            direction: Direction::Lower,
            threshold: 3.0,
        };
        let exact = enumerate_tail(&prob).unwrap().value;
        assert_eq!(exact, 576.0 / 32768.0);
        let e = is_tail(&prob, &TiltSpec::Product(0.2), 20_000, 5).unwrap();
        assert!((e.value - exact).abs() <= 4.0 * e.std_error);
        assert!((e.mean_lr - 1.0).abs() <= 4.0 * e.mean_lr_se);
    }

    #[test]
    fn zero_hits_is_an_error() {
        let prob = c3_problem(4, 0.01, 6.0);
        assert_eq!(mc_tail(&prob, 10, 1).unwrap_err(), Error::ZeroEffectiveSampleSize);
    }

    #[test]
    fn chunked_records_agree() {
        let prob = c3_problem(5, 0.4, 6.0);
        let tilt = TiltSpec::Mixture(vec![(0.5, TiltSpec::Product(0.4)), (0.5, TiltSpec::PlantedClique(3))]);
        let whole = is_records(&prob, &tilt, 4, 0..300).unwrap();
        let mut parts = is_records(&prob, &tilt, 4, 0..120).unwrap();
        parts.extend(is_records(&prob, &tilt, 4, 120..300).unwrap());
        assert_eq!(whole, parts);
    }

    #[test]
    fn convex_bound_examples() {
        let cube = verify_convex_bound(&ConvexSet::Cube, 4, 0.3).unwrap();
        assert!((cube.mu - 1.0).abs() < 1e-14 && cube.i_upper == 0.0);
        assert!(cube.holds);
        let c = 2.0;
        let set = ConvexSet::Linear {
            a: vec![vec![1.0; 6]],
            b: vec![c],
            interior: vec![c / 6.0; 6],
        };
        let r = verify_convex_bound(&set, 4, 0.5).unwrap();
        let want = 6.0 * ip(0.5, c / 6.0);
        assert!((r.i_upper - want).abs() < 1e-9 && (r.i_lower - want).abs() < 1e-9);
        assert!(r.holds);
        let ball = ConvexSet::SchattenBall {
            alpha: f64::INFINITY,
            radius: 0.2 * 4.0,
        };
        assert!(verify_convex_bound(&ball, 5, 0.4).unwrap().holds);
    }

    #[test]
    fn lower_tail_checks_small() {
        let s = check_schatten_lower(4, 0.5, 2.0, 0.3).unwrap();
        assert!(s.holds(), "{s:?}");
        let c4 = PatternGraph::cycle(4).unwrap();
        let t = check_semi_lower(&c4, 4, 0.5, 0.3).unwrap();
        assert!(t.holds(), "{t:?}");
    }

    #[test]
    fn spectral_study_deterministic_parts() {
        let params = SpectralStudyParams {
            n: 40,
            p: 0.2,
            r_list: vec![1, 2, 5, 10],
            k: 2.0,
            alpha: 3.0,
            samples: 30,
            seed: 2,
            constants: SpectralConstants::default(),
        };
        let s = spectral_tail_study(&params).unwrap();
        assert_eq!(s.deterministic_violations(), 0);
    }

    #[test]
    fn tilt_ball_reduces_to_direct_estimate() {
        let rep = tilt_ball_probability(12, 0.3, 0.3, 0.8, 2.0, 500, 3).unwrap();
        assert!((rep.estimate - rep.ball_mass_r).abs() < 1e-12);
        let huge = tilt_ball_probability(12, 0.4, 0.2, 1e6, 2.0, 2000, 3).unwrap();
        assert_eq!(huge.ball_mass_r, 1.0);
    }
}
