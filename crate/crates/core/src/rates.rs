//! Closed-form rate quantities: the Bernoulli divergence `I_p`, the constants
//! `θ_H(u)` and `c_H(u)`, planted candidate matrices and the bookkeeping
//! terms of the quantitative cycle-count bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::vec;

use crate::error::{Error, Result};
use crate::graphs::PatternGraph;
use crate::homcount;
use crate::matrices::{MatrixKind, SymMatrix};
use crate::problem::Direction;

/// `N`, `p` and the tail threshold `t` (`t = 1 + u` for upper tails).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateParams {
    pub n: usize,
    pub p: f64,
    pub t: f64,
    pub direction: Direction,
}

impl RateParams {
    /// Upper tail `hom ≥ (1 + u) N^n p^m`, `u > 0`.
    pub fn upper(n: usize, p: f64, u: f64) -> Result<Self> {
        check_p(p)?;
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Domain(format!("upper tail needs u > 0, got {u}")));
        }
        Ok(Self {
            n,
            p,
            t: 1.0 + u,
            direction: Direction::Upper,
        })
    }

    /// Lower tail `hom ≤ t N^n p^m`, `t ∈ [0, 1)`.
    pub fn lower(n: usize, p: f64, t: f64) -> Result<Self> {
        check_p(p)?;
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("lower tail needs t in [0, 1), got {t}")));
        }
        Ok(Self {
            n,
            p,
            t,
            direction: Direction::Lower,
        })
    }

    pub fn u(&self) -> f64 {
        self.t - 1.0
    }

    /// `t N^{v(H)} p^{e(H)}`.
    pub fn threshold(&self, h: &PatternGraph) -> f64 {
        self.t * libm::pow(self.n as f64, h.n_vertices() as f64) * libm::pow(self.p, h.n_edges() as f64)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// `x log(x/p) + (1−x) log((1−x)/(1−p))` with `0 log 0 = 0`; no range checks.
#[inline]
pub(crate) fn ip(p: f64, x: f64) -> f64 {
    let a = if x > 0.0 { x * libm::log(x / p) } else { 0.0 };
    let b = if x < 1.0 { (1.0 - x) * libm::log((1.0 - x) / (1.0 - p)) } else { 0.0 };
    a + b
}

/// Bernoulli relative entropy `I_p(x)` in nats.
pub fn ip_scalar(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(ip(p, x))
}

/// `I_p(X) = Σ_{i<j} I_p(x_ij)`.
pub fn ip_matrix(p: f64, x: &SymMatrix) -> Result<f64> {
    check_p(p)?;
    let mut s = 0.0;
    for (i, j, v) in x.upper() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("entry {v} at ({i}, {j}) outside [0, 1]")));
        }
        s += ip(p, v);
    }
    Ok(s)
}

fn poly_eval(coeffs: &[u64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// The root `θ > 0` of `P_{H★}(θ) = 1 + u`, by bisection on `[0, u]`.
pub fn theta(h: &PatternGraph, u: f64) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("theta needs u > 0, got {u}")));
    }
    if !h.is_connected() {
        return Err(Error::Domain(format!("{h} is not connected")));
    }
    let profile = h.degree_profile()?;
    if profile.max_degree < 2 {
        return Err(Error::Domain(format!("{h} has maximum degree < 2")));
    }
    let poly = profile.max_degree_core.independence_polynomial()?;
    let target = 1.0 + u;
    let f = |x: f64| poly_eval(&poly, x) - target;
    // P(0) = 1 < 1 + u and P(u) >= 1 + a_1 u >= 1 + u
    let (mut lo, mut hi) = (0.0f64, u);
    if f(hi) < 0.0 {
        return Err(Error::NoConvergence {
            lo,
            hi,
            residual: f(hi),
        });
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let residual = f(root);
    if residual.abs() > 1e-12 * target {
        return Err(Error::NoConvergence { lo, hi, residual });
    }
    Ok(root)
}

/// `c_H(u)`: `min(θ_H(u), ½ u^{2/v(H)})` for regular `H`, otherwise `θ_H(u)`.
pub fn c_h(h: &PatternGraph, u: f64) -> Result<f64> {
    let th = theta(h, u)?;
    if h.is_regular() {
        Ok(th.min(0.5 * libm::pow(u, 2.0 / h.n_vertices() as f64)))
    } else {
        Ok(th)
    }
}

/// `c_H(u) N² p^Δ log(1/p)`.
pub fn predicted_upper_rate(h: &PatternGraph, params: &RateParams) -> Result<f64> {
    if params.direction != Direction::Upper {
        return Err(Error::Precondition("predicted rate is for upper tails".into()));
    }
    let c = c_h(h, params.u())?;
    let n = params.n as f64;
    let delta = h.degree_profile()?.max_degree;
    Ok(c * n * n * libm::pow(params.p, delta as f64) * libm::log(1.0 / params.p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CandidateKind {
    Clique,
    Hub,
    Uniform,
}

impl CandidateKind {
    pub fn label(self) -> &'static str {
        match self {
            CandidateKind::Clique => "clique",
            CandidateKind::Hub => "hub",
            CandidateKind::Uniform => "uniform",
        }
    }
}

/// A planted or uniform point of `X_N` with its cost and tail feasibility.
#[derive(Clone, Debug)]
pub struct CandidateMatrix {
    pub kind: CandidateKind,
    pub matrix: SymMatrix,
    /// `I_p(matrix)`.
    pub ip_cost: f64,
    /// `(pattern label, hom value)` for the target and every extra pattern.
    pub hom_values: Vec<(String, f64)>,
    /// Block size for clique/hub, the level `b p` for uniform.
    pub size: f64,
    /// `hom_target(matrix)`.
    pub constraint_value: f64,
    /// `t N^n p^m`.
    pub threshold: f64,
    /// Whether the declared tail constraint holds.
    pub feasible: bool,
}

fn finish(
    kind: CandidateKind,
    matrix: SymMatrix,
    size: f64,
    (sizes, blocks): (&[usize], &[Vec<f64>]),
    params: &RateParams,
    target: &PatternGraph,
    extra: &[PatternGraph],
) -> Result<CandidateMatrix> {
    // the matrix is block-constant, so costs and counts come from the blocks
    check_p(params.p)?;
    let mut ip_cost = 0.0;
    for c in 0..sizes.len() {
        for d in c..sizes.len() {
            let pairs = if c == d { sizes[c] * sizes[c].saturating_sub(1) / 2 } else { sizes[c] * sizes[d] };
            if pairs > 0 {
                ip_cost += pairs as f64 * ip(params.p, blocks[c][d]);
            }
        }
    }
    let constraint_value = homcount::hom_blocks(target, sizes, blocks)?;
    let mut hom_values = Vec::with_capacity(extra.len() + 1);
    hom_values.push((target.label(), constraint_value));
    for h in extra {
        hom_values.push((h.label(), homcount::hom_blocks(h, sizes, blocks)?));
    }
    let threshold = params.threshold(target);
    let feasible = match params.direction {
        Direction::Upper => constraint_value >= threshold,
        Direction::Lower => constraint_value <= threshold,
    };
    Ok(CandidateMatrix {
        kind,
        matrix,
        ip_cost,
        hom_values,
        size,
        constraint_value,
        threshold,
        feasible,
    })
}

fn block_matrix(n: usize, p: f64, inside: impl Fn(usize, usize) -> bool) -> Result<SymMatrix> {
    SymMatrix::from_upper_fn(n, MatrixKind::Weights, |i, j| if inside(i, j) { 1.0 } else { p })
}

/// `p J` with ones on the first `n0` coordinates' off-diagonal block.
pub fn clique_of_size(params: &RateParams, n0: usize, target: &PatternGraph, extra: &[PatternGraph]) -> Result<CandidateMatrix> {
    if n0 > params.n {
        return Err(Error::OutOfRange {
            what: "clique size",
            got: n0,
            lo: 0,
            hi: params.n,
        });
    }
    let m = block_matrix(params.n, params.p, |i, j| i < n0 && j < n0)?;
    let blocks = [vec![1.0, params.p], vec![params.p, params.p]];
    finish(CandidateKind::Clique, m, n0 as f64, (&[n0, params.n - n0], &blocks), params, target, extra)
}

/// Clique candidate with `N_0 = ⌊a N p⌋`.
pub fn clique_candidate(params: &RateParams, a: f64, target: &PatternGraph, extra: &[PatternGraph]) -> Result<CandidateMatrix> {
    let n0 = libm::floor(a * params.n as f64 * params.p);
    if !(n0 >= 0.0) {
        return Err(Error::Domain(format!("clique scale a = {a}")));
    }
    clique_of_size(params, n0 as usize, target, extra)
}

/// `p J` with the rows and columns of the first `k` vertices set to one.
pub fn hub_of_size(params: &RateParams, k: usize, target: &PatternGraph, extra: &[PatternGraph]) -> Result<CandidateMatrix> {
    if k > params.n {
        return Err(Error::OutOfRange {
            what: "hub size",
            got: k,
            lo: 0,
            hi: params.n,
        });
    }
    let m = block_matrix(params.n, params.p, |i, _| i < k)?;
    let blocks = [vec![1.0, 1.0], vec![1.0, params.p]];
    finish(CandidateKind::Hub, m, k as f64, (&[k, params.n - k], &blocks), params, target, extra)
}

/// Hub candidate with `k = ⌊b N p^{Δ−1}⌋`, `Δ = Δ(target)`.
pub fn hub_candidate(params: &RateParams, b: f64, target: &PatternGraph, extra: &[PatternGraph]) -> Result<CandidateMatrix> {
    let delta = target.degree_profile()?.max_degree;
    let k = libm::floor(b * params.n as f64 * libm::pow(params.p, delta as f64 - 1.0));
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("hub scale b = {b}")));
    }
    hub_of_size(params, k as usize, target, extra)
}

/// Uniform candidate `b p J`.
pub fn uniform_candidate(params: &RateParams, b: f64, target: &PatternGraph, extra: &[PatternGraph]) -> Result<CandidateMatrix> {
    let level = b * params.p;
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::Domain(format!("uniform level b p = {level} outside [0, 1]")));
    }
    let m = SymMatrix::constant(params.n, level)?;
    finish(CandidateKind::Uniform, m, level, (&[params.n], &[vec![level]]), params, target, extra)
}

/// Smallest `size` in `0..=n` with `feasible(build(size))`, assuming monotonicity.
fn smallest_feasible(n: usize, build: impl Fn(usize) -> Result<CandidateMatrix>) -> Result<Option<CandidateMatrix>> {
    let top = build(n)?;
    if !top.feasible {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, n);
    let mut best = top;
    // invariant: build(hi) feasible, every size < lo infeasible
    while lo < hi {
        let mid = (lo + hi) / 2;
        let c = build(mid)?;
        if c.feasible {
            hi = mid;
            best = c;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(best))
}

/// Cheapest feasible clique candidate for an upper tail, if any.
pub fn min_feasible_clique(params: &RateParams, target: &PatternGraph) -> Result<Option<CandidateMatrix>> {
    smallest_feasible(params.n, |k| clique_of_size(params, k, target, &[]))
}

/// Cheapest feasible hub candidate for an upper tail, if any.
pub fn min_feasible_hub(params: &RateParams, target: &PatternGraph) -> Result<Option<CandidateMatrix>> {
    smallest_feasible(params.n, |k| hub_of_size(params, k, target, &[]))
}

/// The uniform matrix `c J` with `hom_H(cJ) = t N^n p^m` (nudged to the
/// feasible side), or `None` if that needs `c > 1`.
pub fn uniform_on_boundary(params: &RateParams, target: &PatternGraph) -> Result<Option<CandidateMatrix>> {
    let m = target.n_edges();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let hom_j = homcount::hom(target, &SymMatrix::complete(params.n))?.value;
    let mut level = libm::pow(params.threshold(target) / hom_j, 1.0 / m as f64);
    let step = match params.direction {
        Direction::Upper => 1.0 + 1e-13,
        Direction::Lower => 1.0 - 1e-13,
    };
    for _ in 0..64 {
        if level > 1.0 {
            return Ok(None);
        }
        let c = uniform_candidate(params, level / params.p, target, &[])?;
        if c.feasible {
            return Ok(Some(c));
        }
        level *= step;
    }
    Ok(None)
}

/// Caller-supplied absolute constants of the exceptional-probability bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantConstants {
    pub c_plus: f64,
    pub c_minus: f64,
}

impl Default for QuantConstants {
    /// Non-normative placeholders; the true constants are only known to exist.
    fn default() -> Self {
        Self {
            c_plus: 1.0,
            c_minus: 1.0,
        }
    }
}

/// Error, complexity and exceptional-probability terms of the quantitative
/// cycle-count bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantTerms {
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub complexity: f64,
    pub p_excep_plus: f64,
    pub p_excep_minus: f64,
}

pub fn quant_terms(ell: u32, params: &RateParams, k: f64, r: usize, constants: QuantConstants) -> Result<QuantTerms> {
    if ell < 3 {
        return Err(Error::Domain(format!("cycle length {ell} < 3")));
    }
    if r == 0 || r > params.n {
        return Err(Error::OutOfRange {
            what: "R",
            got: r,
            lo: 1,
            hi: params.n,
        });
    }
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("K must be at least 1, got {k}")));
    }
    let n = params.n as f64;
    let p = params.p;
    let gamma = 0.5 - 1.0 / ell as f64;
    let r_decay = libm::pow(r as f64, -gamma);
    Ok(QuantTerms {
        eps_plus: 1.0 / (libm::pow(n, gamma) * libm::sqrt(p)) + k * r_decay,
        eps_minus: k / libm::sqrt(p) * r_decay,
        complexity: ell as f64 * r as f64 * n * libm::log(n),
        p_excep_plus: 4.0 * n * libm::exp(-constants.c_plus * k * k * n * n * p * p),
        p_excep_minus: libm::exp(-constants.c_minus * k * k * n * n * p),
    })
}

/// Upper-tail choice `K = (W² log(1/p))^{1/2}`, `R = (W⁴ log N)^{ℓ/(ℓ−2)}`.
pub fn take_kr_upper(w: f64, n: usize, p: f64, ell: u32) -> (f64, f64) {
    let k = libm::sqrt(w * w * libm::log(1.0 / p));
    let r = libm::pow(libm::pow(w, 4.0) * libm::log(n as f64), ell as f64 / (ell as f64 - 2.0));
    (k, r)
}

/// Lower-tail choice `K = W`, `R = (W⁴/p)^{ℓ/(ℓ−2)}`.
pub fn take_kr_lower(w: f64, p: f64, ell: u32) -> (f64, f64) {
    let r = libm::pow(libm::pow(w, 4.0) / p, ell as f64 / (ell as f64 - 2.0));
    (w, r)
}

/// One line of a rate table.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateRow {
    pub pattern: String,
    pub n: usize,
    pub p: f64,
    pub u: f64,
    pub theta: f64,
    pub c_h: f64,
    pub predicted_rate: f64,
    /// Cost of the smallest feasible planted clique (`inf` if none fits).
    pub clique_cost: f64,
    /// Cost of the smallest feasible hub (`inf` if none fits).
    pub hub_cost: f64,
}

pub fn rate_row(h: &PatternGraph, n: usize, p: f64, u: f64) -> Result<RateRow> {
    let params = RateParams::upper(n, p, u)?;
    let cost = |c: Option<CandidateMatrix>| c.map_or(f64::INFINITY, |c| c.ip_cost);
    Ok(RateRow {
        pattern: h.label(),
        n,
        p,
        u,
        theta: theta(h, u)?,
        c_h: c_h(h, u)?,
        predicted_rate: predicted_upper_rate(h, &params)?,
        clique_cost: cost(min_feasible_clique(&params, h)?),
        hub_cost: cost(min_feasible_hub(&params, h)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> PatternGraph {
        PatternGraph::cycle(3).unwrap()
    }

    fn c4() -> PatternGraph {
        PatternGraph::cycle(4).unwrap()
    }

    // closed forms quoted for triangles and 4-cycles
    fn c3_closed(u: f64) -> f64 {
        if u <= 27.0 / 8.0 {
            u / 3.0
        } else {
            0.5 * libm::pow(u, 2.0 / 3.0)
        }
    }

    fn c4_closed(u: f64) -> f64 {
        if u <= 16.0 {
            -1.0 + libm::sqrt(1.0 + u / 2.0)
        } else {
            0.5 * libm::sqrt(u)
        }
    }

    #[test]
    fn ip_examples() {
        assert_eq!(ip_scalar(0.3, 0.3).unwrap(), 0.0);
        assert!((ip_scalar(0.3, 1.0).unwrap() - libm::log(1.0 / 0.3)).abs() < 1e-15);
        assert!((ip_scalar(0.5, 0.0).unwrap() - libm::log(2.0)).abs() < 1e-15);
        assert!(ip_scalar(0.0, 0.5).is_err());
        assert!(ip_scalar(0.5, 1.5).is_err());
    }

    #[test]
    fn ip_matrix_examples() {
        let n = 12;
        let p = 0.2;
        assert_eq!(ip_matrix(p, &SymMatrix::constant(n, p).unwrap()).unwrap(), 0.0);
        let b = 1.7;
        let got = ip_matrix(p, &SymMatrix::constant(n, b * p).unwrap()).unwrap();
        let want = 66.0 * ip(p, b * p);
        assert!((got - want).abs() < 1e-12 * want);
        let params = RateParams::upper(n, p, 1.0).unwrap();
        let c = clique_of_size(&params, 5, &c3(), &[]).unwrap();
        assert!((c.ip_cost - 10.0 * libm::log(1.0 / p)).abs() < 1e-12 * c.ip_cost);
    }

    #[test]
    fn theta_examples() {
        for u in [0.1, 1.0, 3.0, 50.0] {
            assert!((theta(&c3(), u).unwrap() - u / 3.0).abs() < 1e-12 * (1.0 + u));
        }
        assert!((theta(&c4(), 16.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(theta(&c3(), 1e-12).unwrap() < 1e-12);
        assert!(theta(&PatternGraph::complete(2).unwrap(), 1.0).is_err());
        assert!(theta(&c3(), 0.0).is_err());
    }

    #[test]
    fn c_h_examples() {
        assert!((c_h(&c3(), 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((c_h(&c3(), 27.0 / 8.0).unwrap() - 9.0 / 8.0).abs() < 1e-12);
        assert!((27.0 / 8.0 / 3.0 - 0.5 * libm::pow(27.0 / 8.0, 2.0 / 3.0)).abs() < 1e-12);
        assert!((c_h(&c4(), 16.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((-1.0 + libm::sqrt(9.0) - 0.5 * libm::sqrt(16.0)).abs() < 1e-15);
    }

    #[test]
    fn c_h_matches_closed_forms_on_grid() {
        for k in 0..200 {
            let u = libm::pow(10.0, -3.0 + 6.0 * k as f64 / 199.0);
            assert!((c_h(&c3(), u).unwrap() - c3_closed(u)).abs() <= 1e-10, "C3 u={u}");
            assert!((c_h(&c4(), u).unwrap() - c4_closed(u)).abs() <= 1e-10, "C4 u={u}");
        }
    }

    #[test]
    fn irregular_pattern_uses_theta() {
        let star = PatternGraph::star(3).unwrap();
        // core is the centre alone: P = 1 + x
        assert!((c_h(&star, 2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_rate_examples() {
        let params = RateParams::upper(100, 0.1, 1.0).unwrap();
        let r = predicted_upper_rate(&c3(), &params).unwrap();
        let want = 1.0 / 3.0 * 1e4 * 0.01 * libm::log(10.0);
        assert!((r - want).abs() < 1e-10 * want);
        let below = RateParams::upper(100, 0.1, 27.0 / 8.0 - 1e-9).unwrap();
        let above = RateParams::upper(100, 0.1, 27.0 / 8.0 + 1e-9).unwrap();
        let d = predicted_upper_rate(&c3(), &above).unwrap() - predicted_upper_rate(&c3(), &below).unwrap();
        assert!(d.abs() < 1e-6);
        // p² scaling for Δ = 2
        let a = predicted_upper_rate(&c4(), &RateParams::upper(50, 0.2, 1.0).unwrap()).unwrap();
        let b = predicted_upper_rate(&c4(), &RateParams::upper(50, 0.1, 1.0).unwrap()).unwrap();
        let ratio = (a / libm::log(5.0)) / (b / libm::log(10.0));
        assert!((ratio - 4.0).abs() < 1e-10);
        assert!(predicted_upper_rate(&c3(), &RateParams::lower(50, 0.2, 0.5).unwrap()).is_err());
    }

    #[test]
    fn candidate_examples() {
        let t = 2.0;
        let params = RateParams::upper(60, 0.2, t - 1.0).unwrap();
        let a = libm::pow(2.0 * t, 1.0 / 3.0);
        let c = clique_candidate(&params, a, &c3(), &[]).unwrap();
        let n0 = (a * 60.0 * 0.2) as u64;
        assert_eq!(c.size as u64, n0);
        assert!(c.constraint_value >= (n0 * (n0 - 1) * (n0 - 2)) as f64);
        assert!((c.ip_cost - (n0 * (n0 - 1) / 2) as f64 * libm::log(5.0)).abs() < 1e-9);

        for ell in 3..=6usize {
            let b = libm::pow(0.5, 1.0 / ell as f64);
            let lp = RateParams::lower(20, 0.3, 0.5).unwrap();
            let cyc = PatternGraph::cycle(ell).unwrap();
            let u = uniform_candidate(&lp, b, &cyc, &[]).unwrap();
            let falling: f64 = (0..ell).map(|i| (20 - i) as f64).product();
            let want = libm::pow(b * 0.3, ell as f64) * falling;
            assert!(u.constraint_value >= want * (1.0 - 1e-12));
            assert!(u.feasible);
        }

        let h = hub_candidate(&params, 1.0, &c3(), &[c4()]).unwrap();
        assert_eq!(h.size as usize, (60.0 * 0.2) as usize);
        assert_eq!(h.hom_values.len(), 2);
        assert!(clique_of_size(&params, 61, &c3(), &[]).is_err());
    }

    #[test]
    fn clique_feasible_on_grid() {
        for &n in &[40usize, 80] {
            for &p in &[0.1, 0.2, 0.25] {
                for &t in &[1.5, 2.0, 4.0] {
                    for ell in [3usize, 4] {
                        let params = RateParams::upper(n, p, t - 1.0).unwrap();
                        let a = libm::pow(2.0 * t, 1.0 / ell as f64);
                        let n0 = libm::floor(a * n as f64 * p) as usize;
                        if n0 < 2 * ell || n0 > n {
                            continue;
                        }
                        let cyc = PatternGraph::cycle(ell).unwrap();
                        let c = clique_candidate(&params, a, &cyc, &[]).unwrap();
                        assert!(c.feasible, "n={n} p={p} t={t} ell={ell}");
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_candidates_are_minimal() {
        let params = RateParams::upper(30, 0.2, 1.0).unwrap();
        let c = min_feasible_clique(&params, &c3()).unwrap().unwrap();
        let k = c.size as usize;
        assert!(!clique_of_size(&params, k - 1, &c3(), &[]).unwrap().feasible);
        let h = min_feasible_hub(&params, &c3()).unwrap().unwrap();
        let k = h.size as usize;
        assert!(!hub_of_size(&params, k - 1, &c3(), &[]).unwrap().feasible);
        let u = uniform_on_boundary(&params, &c3()).unwrap().unwrap();
        assert!(u.feasible);
        assert!((u.constraint_value / u.threshold - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quant_terms_examples() {
        let params = RateParams::upper(1000, 0.05, 1.0).unwrap();
        let q = quant_terms(3, &params, 2.0, 1000, QuantConstants::default()).unwrap();
        let base = 1.0 / (libm::pow(1000.0, 1.0 / 6.0) * libm::sqrt(0.05));
        assert!(q.eps_plus > base);
        let q1 = quant_terms(3, &params, 2.0, 1, QuantConstants::default()).unwrap();
        assert!((q1.complexity - 3.0 * 1000.0 * libm::log(1000.0)).abs() < 1e-9);
        assert!(q1.eps_plus > q.eps_plus);
        assert!(quant_terms(3, &params, 0.5, 1, QuantConstants::default()).is_err());
        assert!(quant_terms(3, &params, 2.0, 1001, QuantConstants::default()).is_err());

        for &w in &[1.5, 3.0, 10.0] {
            for &(n, p) in &[(1000usize, 0.01), (1e6 as usize, 1e-3)] {
                let (k, r) = take_kr_upper(w, n, p, 3);
                assert!(k / libm::pow(r, 1.0 / 6.0) <= 1.0 / w * (1.0 + 1e-12));
            }
            let (k, r) = take_kr_lower(w, 0.1, 4);
            let eps_minus = k / libm::sqrt(0.1) * libm::pow(r, -0.25);
            assert!((eps_minus - 1.0 / w).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_row_example() {
        let r = rate_row(&c3(), 40, 0.2, 1.0).unwrap();
        assert!((r.c_h - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.clique_cost.is_finite() && r.hub_cost.is_finite());
    }
}
