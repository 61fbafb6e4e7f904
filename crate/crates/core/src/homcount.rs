//! Homomorphism counts `hom_H(X) = Σ_φ Π_{(v,w)∈E} X_{φ(v)φ(w)}`, injective
//! counts, spectral cycle counts and derivatives.
//!
//! Counting is a tensor contraction over the vertices of `H`, eliminated in
//! greedy minimum-degree order; the cost is `N^{w+1}` for elimination width `w`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::{PatternGraph, QuotientEntry};
use crate::matrices::{powi, MatrixKind, SymMatrix};

/// Largest pattern accepted by [`hom`].
pub const MAX_HOM_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HomMethod {
    Contraction,
    Spectral,
    InjectiveSum,
}

/// A count together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct HomValue {
    pub value: f64,
    /// Exact integer value when computed in integer arithmetic.
    pub exact: Option<u64>,
    pub method: HomMethod,
    pub pattern: String,
}

/// Semiring used by the contraction engine.
pub trait Scalar: Copy + Add<Output = Self> + Mul<Output = Self> {
    const ZERO: Self;
    const ONE: Self;
    fn from_count(n: usize) -> Self;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl Scalar for u64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn from_count(n: usize) -> Self {
        n as u64
    }
}

struct Factor<T> {
    scope: Vec<usize>,
    data: Vec<T>,
}

/// Row-major strides of `scope` laid out over the positions of `over`.
fn strides(scope: &[usize], over: &[usize], n: usize) -> Vec<usize> {
    let mut out = vec![0; over.len()];
    let mut s = 1;
    for &v in scope.iter().rev() {
        let k = over.iter().position(|&u| u == v).expect("scope inside union");
        out[k] = s;
        s *= n;
    }
    out
}

/// Sums the product of `factors` over every assignment of `over`, keeping
/// the variables of `keep` (in that order) as output indices.
fn sum_product<T: Scalar>(factors: &[&Factor<T>], over: &[usize], keep: &[usize], n: usize) -> Vec<T> {
    let fs: Vec<Vec<usize>> = factors.iter().map(|f| strides(&f.scope, over, n)).collect();
    let os = strides(keep, over, n);
    let mut out = vec![T::ZERO; n.pow(keep.len() as u32)];
    let mut assign = vec![0usize; over.len()];
    let mut idx = vec![0usize; factors.len()];
    let mut oidx = 0usize;
    loop {
        let mut prod = T::ONE;
        for (f, &i) in factors.iter().zip(&idx) {
            prod = prod * f.data[i];
        }
        out[oidx] = out[oidx] + prod;
        // odometer, last position fastest
        let mut k = over.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            assign[k] += 1;
            for (i, s) in idx.iter_mut().zip(&fs) {
                *i += s[k];
            }
            oidx += os[k];
            if assign[k] < n {
                break;
            }
            assign[k] = 0;
            for (i, s) in idx.iter_mut().zip(&fs) {
                *i -= n * s[k];
            }
            oidx -= n * os[k];
        }
    }
}

/// Contracts pairwise factors on `n_vars` variables with domain `0..n`.
///
/// Each factor `(a, b, m)` has `m` row-major `n × n`, indexed `m[x_a n + x_b]`.
/// Variables in `free` are not summed; the result is indexed row-major in
/// the order of `free`.
pub fn contract<T: Scalar>(n_vars: usize, n: usize, factors: &[(usize, usize, &[T])], free: &[usize]) -> Vec<T> {
    let mut live: Vec<Factor<T>> = factors
        .iter()
        .map(|&(a, b, m)| Factor {
            scope: vec![a, b],
            data: m.to_vec(),
        })
        .collect();
    let mut eliminated = vec![false; n_vars];
    for &v in free {
        eliminated[v] = true;
    }
    let mut remaining = n_vars - free.len();
    while remaining > 0 {
        // greedy minimum degree in the current interaction graph
        let mut best = None;
        for v in (0..n_vars).filter(|&v| !eliminated[v]) {
            let mut nb: Vec<usize> = live
                .iter()
                .filter(|f| f.scope.contains(&v))
                .flat_map(|f| f.scope.iter().copied())
                .filter(|&u| u != v)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            if best.map_or(true, |(_, d)| nb.len() < d) {
                best = Some((v, nb.len()));
            }
        }
        let (v, _) = best.expect("a variable remains");
        let (with, without): (Vec<Factor<T>>, Vec<Factor<T>>) = live.into_iter().partition(|f| f.scope.contains(&v));
        let mut over: Vec<usize> = with.iter().flat_map(|f| f.scope.iter().copied()).collect();
        over.push(v);
        over.sort_unstable();
        over.dedup();
        let keep: Vec<usize> = over.iter().copied().filter(|&u| u != v).collect();
        let refs: Vec<&Factor<T>> = with.iter().collect();
        let data = sum_product(&refs, &over, &keep, n);
        live = without;
        live.push(Factor { scope: keep, data });
        eliminated[v] = true;
        remaining -= 1;
    }
    let refs: Vec<&Factor<T>> = live.iter().collect();
    sum_product(&refs, free, free, n)
}

fn check_pattern(h: &PatternGraph, max: usize) -> Result<()> {
    if h.n_vertices() > max {
        return Err(Error::TooLarge {
            what: "pattern vertices",
            got: h.n_vertices(),
            max,
        });
    }
    Ok(())
}

fn check_nonempty(x: &SymMatrix) -> Result<()> {
    if x.n() == 0 {
        return Err(Error::InvalidMatrix("N must be at least 1".into()));
    }
    Ok(())
}

/// Whether integer arithmetic cannot overflow: `n log2 N <= 62`.
fn fits_u64(n_vertices: usize, n: usize) -> bool {
    (n_vertices as f64) * libm::log2(n as f64) <= 62.0
}

fn dense_u64(x: &SymMatrix) -> Vec<u64> {
    x.to_dense().into_iter().map(|v| v as u64).collect()
}

/// `hom_H(X)` by contraction; exact integers for adjacency input when they fit.
pub fn hom(h: &PatternGraph, x: &SymMatrix) -> Result<HomValue> {
    check_pattern(h, MAX_HOM_VERTICES)?;
    check_nonempty(x)?;
    let n = x.n();
    if x.kind() == MatrixKind::Adjacency && fits_u64(h.n_vertices(), n) {
        let a = dense_u64(x);
        let factors: Vec<(usize, usize, &[u64])> = h.edges().iter().map(|&(u, v)| (u, v, a.as_slice())).collect();
        let v = contract(h.n_vertices(), n, &factors, &[])[0];
        return Ok(HomValue {
            value: v as f64,
            exact: Some(v),
            method: HomMethod::Contraction,
            pattern: h.label(),
        });
    }
    let d = x.to_dense();
    let factors: Vec<(usize, usize, &[f64])> = h.edges().iter().map(|&(u, v)| (u, v, d.as_slice())).collect();
    Ok(HomValue {
        value: contract(h.n_vertices(), n, &factors, &[])[0],
        exact: None,
        method: HomMethod::Contraction,
        pattern: h.label(),
    })
}

/// `hom_H(X)` for the zero-diagonal matrix with `X_xy = blocks[c(x)][c(y)]`
/// (`x ≠ y`), where the first `sizes[0]` vertices form class 0, the next
/// `sizes[1]` class 1, and so on. Costs `k^n` for `k` classes, independent of `N`.
///
/// Sums over class assignments `κ` of the pattern's vertices; within a class the
/// diagonal forbids adjacent pattern vertices from sharing an image, so the
/// count of maps is the chromatic polynomial of the induced subgraph.
pub fn hom_blocks(h: &PatternGraph, sizes: &[usize], blocks: &[Vec<f64>]) -> Result<f64> {
    check_pattern(h, MAX_HOM_VERTICES)?;
    let k = sizes.len();
    if k == 0 || sizes.iter().sum::<usize>() == 0 {
        return Err(Error::InvalidMatrix("N must be at least 1".into()));
    }
    if blocks.len() != k || blocks.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: blocks.len(),
        });
    }
    let nv = h.n_vertices();
    let full = (1usize << nv) - 1;
    // parts[mask][j]: partitions of `mask` into j nonempty independent sets
    let independent = |m: usize| (0..nv).all(|v| m >> v & 1 == 0 || h.neighbors_mask(v) as usize & m == 0);
    let mut parts = vec![vec![0.0f64; nv + 1]; full + 1];
    parts[0][0] = 1.0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // subsets `t` of `mask` that contain its lowest vertex
        let mut sub = rest;
        loop {
            let t = sub | low;
            if independent(t) {
                for j in 1..=nv {
                    parts[mask][j] += parts[mask ^ t][j - 1];
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let chromatic = |mask: usize, s: usize| {
        let mut total = 0.0;
        let mut falling = 1.0;
        for j in 0..=nv {
            total += parts[mask][j] * falling;
            falling *= s as f64 - j as f64;
        }
        total
    };
    let mut kappa = vec![0usize; nv];
    let mut total = 0.0;
    loop {
        let weight: f64 = h.edges().iter().map(|&(u, v)| blocks[kappa[u]][kappa[v]]).product();
        if weight != 0.0 {
            let mut term = weight;
            for (c, &s) in sizes.iter().enumerate() {
                let mask = (0..nv).filter(|&v| kappa[v] == c).fold(0, |m, v| m | 1 << v);
                term *= chromatic(mask, s);
            }
            total += term;
        }
        // next assignment in base-k counting order
        let mut i = 0;
        while i < nv && kappa[i] == k - 1 {
            kappa[i] = 0;
            i += 1;
        }
        if i == nv {
            break;
        }
        kappa[i] += 1;
    }
    Ok(total)
}

/// `Σ_j λ_j^ℓ = Tr X^ℓ = hom_{C_ℓ}(X)`.
pub fn hom_cycle_spectral(ell: u32, x: &SymMatrix) -> Result<HomValue> {
    if ell < 3 {
        return Err(Error::Domain(alloc::format!("cycle length {ell} < 3")));
    }
    let s = x.spectrum()?;
    Ok(HomValue {
        value: s.trace_power(ell),
        exact: None,
        method: HomMethod::Spectral,
        pattern: alloc::format!("C{ell}"),
    })
}

/// `inj_H(X)`: the sum over injective maps, by backtracking with zero pruning.
pub fn inj(h: &PatternGraph, x: &SymMatrix) -> Result<HomValue> {
    check_pattern(h, 6)?;
    check_nonempty(x)?;
    if x.n() > 64 {
        return Err(Error::TooLarge {
            what: "N for injective sums",
            got: x.n(),
            max: 64,
        });
    }
    let order = search_order(h);
    let n = x.n();
    if x.kind() == MatrixKind::Adjacency && fits_u64(h.n_vertices(), n) {
        let a = dense_u64(x);
        let v = inj_rec(h, &order, &a, n, &mut vec![usize::MAX; h.n_vertices()], 0, 0u64);
        return Ok(HomValue {
            value: v as f64,
            exact: Some(v),
            method: HomMethod::InjectiveSum,
            pattern: h.label(),
        });
    }
    let d = x.to_dense();
    let v = inj_rec(h, &order, &d, n, &mut vec![usize::MAX; h.n_vertices()], 0, 0u64);
    Ok(HomValue {
        value: v,
        exact: None,
        method: HomMethod::InjectiveSum,
        pattern: h.label(),
    })
}

/// Vertices in BFS order from 0, unreached components appended, so each
/// vertex after the first of its component has an earlier neighbour.
fn search_order(h: &PatternGraph) -> Vec<usize> {
    let mut order = Vec::with_capacity(h.n_vertices());
    let mut seen = vec![false; h.n_vertices()];
    for s in 0..h.n_vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in 0..h.n_vertices() {
                if !seen[w] && h.has_edge(v, w) {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

fn inj_rec<T: Scalar + PartialEq>(
    h: &PatternGraph,
    order: &[usize],
    m: &[T],
    n: usize,
    phi: &mut Vec<usize>,
    depth: usize,
    used: u64,
) -> T {
    if depth == order.len() {
        return T::ONE;
    }
    let v = order[depth];
    let mut total = T::ZERO;
    for i in 0..n {
        if used >> i & 1 == 1 {
            continue;
        }
        let mut w = T::ONE;
        for &u in &order[..depth] {
            if h.has_edge(u, v) {
                w = w * m[phi[u] * n + i];
            }
        }
        if w == T::ZERO {
            continue;
        }
        phi[v] = i;
        total = total + w * inj_rec(h, order, m, n, phi, depth + 1, used | 1 << i);
    }
    phi[v] = usize::MAX;
    total
}

/// Outcome of checking `hom_H(A) = Σ_P inj_{H/P}(A)`.
#[derive(Clone, Debug)]
pub struct QuotientIdentityReport {
    pub holds: bool,
    pub hom: u64,
    pub sum: u64,
    /// `(quotient, inj_{H/P}(A))` for each loop-free quotient.
    pub contributions: Vec<(QuotientEntry, u64)>,
}

/// Checks the quotient decomposition of `hom` in exact integer arithmetic.
pub fn hom_quotient_identity_check(h: &PatternGraph, a: &SymMatrix) -> Result<QuotientIdentityReport> {
    check_pattern(h, 5)?;
    if a.kind() != MatrixKind::Adjacency {
        return Err(Error::Precondition("adjacency matrix required".into()));
    }
    if a.n() > 16 {
        return Err(Error::TooLarge {
            what: "N for the quotient identity",
            got: a.n(),
            max: 16,
        });
    }
    let lhs = hom(h, a)?.exact.expect("small adjacency input is counted exactly");
    let mut contributions = Vec::new();
    let mut sum = 0u64;
    for q in h.quotients()?.entries {
        let c = inj(&q.graph, a)?.exact.expect("small adjacency input is counted exactly");
        sum += c;
        contributions.push((q, c));
    }
    Ok(QuotientIdentityReport {
        holds: sum == lhs,
        hom: lhs,
        sum,
        contributions,
    })
}

fn same_size(w: &SymMatrix, z: &SymMatrix) -> Result<()> {
    if w.n() != z.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: z.n(),
        });
    }
    Ok(())
}

/// `D_H(W, Z) = Σ_{i<j} Z_ij ∂hom_H/∂W_ij`: the sum over edges `e` of the
/// count with the factor on `e` replaced by `Z`.
pub fn dir_derivative(h: &PatternGraph, w: &SymMatrix, z: &SymMatrix) -> Result<f64> {
    check_pattern(h, MAX_HOM_VERTICES)?;
    check_nonempty(w)?;
    same_size(w, z)?;
    let n = w.n();
    let wd = w.to_dense();
    let zd = z.to_dense();
    let mut total = 0.0;
    for k in 0..h.n_edges() {
        let factors: Vec<(usize, usize, &[f64])> = h
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, if i == k { zd.as_slice() } else { wd.as_slice() }))
            .collect();
        total += contract(h.n_vertices(), n, &factors, &[])[0];
    }
    Ok(total)
}

/// `N ‖Z‖_op Σ_{e ∈ E} hom_{H_(e)}(W)`, which dominates `|D_H(W, Z)|` for `W ∈ X_N`.
/// `H_(e)` is `H` with both endpoints of `e` deleted.
pub fn dir_derivative_bound(h: &PatternGraph, w: &SymMatrix, z: &SymMatrix) -> Result<f64> {
    same_size(w, z)?;
    let mut total = 0.0;
    for &(u, v) in h.edges() {
        total += hom(&h.remove_edge_closure(&[(u, v)])?, w)?.value;
    }
    Ok(w.n() as f64 * z.op_norm()? * total)
}

/// Gradient of `hom_H` with respect to the independent entries `W_ij`, `i < j`,
/// returned as a symmetric matrix with zero diagonal.
pub fn gradient(h: &PatternGraph, w: &SymMatrix) -> Result<SymMatrix> {
    check_pattern(h, MAX_HOM_VERTICES)?;
    check_nonempty(w)?;
    let n = w.n();
    let wd = w.to_dense();
    let mut g = vec![0.0; n * n];
    for k in 0..h.n_edges() {
        let (a, b) = h.edges()[k];
        let factors: Vec<(usize, usize, &[f64])> = h
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, &(u, v))| (u, v, wd.as_slice()))
            .collect();
        let two_point = contract(h.n_vertices(), n, &factors, &[a, b]);
        for (gi, t) in g.iter_mut().zip(&two_point) {
            *gi += t;
        }
    }
    SymMatrix::from_upper_fn(n, MatrixKind::General, |i, j| g[i * n + j] + g[j * n + i])
}

/// `N^{−v(H)} hom_H(X)`, the density of `H` in the step graphon of `X`.
pub fn hom_density(h: &PatternGraph, x: &SymMatrix) -> Result<f64> {
    let v = hom(h, x)?.value;
    Ok(v / libm::pow(x.n() as f64, h.n_vertices() as f64))
}

/// Cycle length if `h` is a single cycle.
pub fn cycle_length(h: &PatternGraph) -> Option<u32> {
    let n = h.n_vertices();
    (n >= 3 && h.n_edges() == n && h.is_connected() && h.degrees().iter().all(|&d| d == 2)).then_some(n as u32)
}

/// `hom_H(X)` and its gradient in one pass, using matrix powers when `H` is a
/// cycle (`Tr X^ℓ`, gradient `2ℓ (X^{ℓ−1})_ij`). Works on dense input.
pub fn hom_and_gradient_dense(h: &PatternGraph, x: &DMatrix<f64>) -> Result<(f64, DMatrix<f64>)> {
    if let Some(ell) = cycle_length(h) {
        let p = matrix_power(x, ell - 1);
        let value = p.dot(x);
        let mut g = p * (2.0 * ell as f64);
        g.fill_diagonal(0.0);
        return Ok((value, g));
    }
    let sym = SymMatrix::from_dmatrix(x)?;
    let value = hom(h, &sym.clone().into_general())?.value;
    let g = gradient(h, &sym)?;
    Ok((value, g.to_dmatrix()))
}

/// `hom_H(X)` on dense input, with the cycle fast path.
pub fn hom_dense(h: &PatternGraph, x: &DMatrix<f64>) -> Result<f64> {
    if let Some(ell) = cycle_length(h) {
        let half = matrix_power(x, ell / 2);
        return Ok(if ell % 2 == 0 {
            half.norm_squared()
        } else {
            (&half * x).dot(&half)
        });
    }
    Ok(hom(h, &SymMatrix::from_dmatrix(x)?.into_general())?.value)
}

/// `X^k` for `k >= 1` by repeated multiplication.
pub(crate) fn matrix_power(x: &DMatrix<f64>, k: u32) -> DMatrix<f64> {
    let mut p = x.clone();
    for _ in 1..k {
        p = &p * x;
    }
    p
}

/// Trace power `Σ λ^ℓ` helper on eigenvalues.
pub fn trace_power_of(values: &[f64], ell: u32) -> f64 {
    values.iter().map(|&x| powi(x, ell)).sum()
}

#[cfg(test)]
mod tests {

    #[test]
    fn block_formula_matches_contraction() {
        let (sizes, blocks) = ([3usize, 0, 4], vec![vec![0.9, 0.2, 0.4], vec![0.2, 0.0, 0.7], vec![0.4, 0.7, 0.3]]);
        let class = |x: usize| if x < 3 { 0 } else { 2 };
        let x = SymMatrix::from_upper_fn(7, MatrixKind::Weights, |i, j| blocks[class(i)][class(j)]).unwrap();
        for name in ["K2", "C3", "C4", "K4", "K_{2,3}", "star_3", "path_4"] {
            let h = PatternGraph::from_name(name).unwrap();
            let want = hom(&h, &x).unwrap().value;
            let got = hom_blocks(&h, &sizes, &blocks).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{name}: {got} vs {want}");
        }
        let iso = PatternGraph::new(3, &[(0, 1)]).unwrap();
        assert!((hom_blocks(&iso, &sizes, &blocks).unwrap() - hom(&iso, &x).unwrap().value).abs() < 1e-10);
    }

    use super::*;
    use crate::rng;

    fn adj(g: &PatternGraph) -> SymMatrix {
        SymMatrix::adjacency(g.n_vertices(), g.edges()).unwrap()
    }

    /// Brute force over all maps `[n] → [N]`.
    fn brute_hom(h: &PatternGraph, x: &SymMatrix) -> f64 {
        let n = x.n();
        let v = h.n_vertices();
        let mut total = 0.0;
        let mut phi = vec![0usize; v];
        loop {
            total += h.edges().iter().map(|&(a, b)| x.get(phi[a], phi[b])).product::<f64>();
            let mut k = 0;
            loop {
                if k == v {
                    return total;
                }
                phi[k] += 1;
                if phi[k] < n {
                    break;
                }
                phi[k] = 0;
                k += 1;
            }
        }
    }

    fn falling(n: u64, k: u64) -> u64 {
        (0..k).map(|i| n - i).product()
    }

    #[test]
    fn hom_examples() {
        let c3 = PatternGraph::cycle(3).unwrap();
        let k3 = SymMatrix::complete(3);
        let h = hom(&c3, &k3).unwrap();
        assert_eq!(h.exact, Some(6));
        assert_eq!(brute_hom(&c3, &k3), 6.0);

        let e = PatternGraph::empty(3).unwrap();
        let mut r = rng::stream(1, 0);
        let x = SymMatrix::random_weights(5, &mut r);
        assert_eq!(hom(&e, &x).unwrap().value, 125.0);

        for n0 in 4..9u64 {
            let block = SymMatrix::complete(n0 as usize);
            for ell in 3..=n0.min(8) {
                let c = PatternGraph::cycle(ell as usize).unwrap();
                assert!(hom(&c, &block).unwrap().exact.unwrap() >= falling(n0, ell));
            }
        }
    }

    #[test]
    fn hom_matches_brute_force() {
        let mut r = rng::stream(2, 0);
        let patterns = [
            PatternGraph::cycle(4).unwrap(),
            PatternGraph::complete(4).unwrap(),
            PatternGraph::star(3).unwrap(),
            PatternGraph::path(4).unwrap(),
            PatternGraph::new(4, &[(0, 1), (2, 3)]).unwrap(),
        ];
        for h in &patterns {
            let x = SymMatrix::random_weights(5, &mut r);
            let a = hom(h, &x).unwrap().value;
            let b = brute_hom(h, &x);
            assert!((a - b).abs() <= 1e-10 * b.max(1.0), "{h}: {a} vs {b}");
            let g = SymMatrix::random_adjacency(5, 0.5, &mut r);
            assert_eq!(hom(h, &g).unwrap().value, brute_hom(h, &g));
        }
    }

    #[test]
    fn spectral_examples() {
        let k4 = SymMatrix::complete(4);
        assert!((hom_cycle_spectral(3, &k4).unwrap().value - 24.0).abs() < 1e-9);
        let c4 = adj(&PatternGraph::cycle(4).unwrap());
        assert!((hom_cycle_spectral(4, &c4).unwrap().value - 32.0).abs() < 1e-9);
        let z = SymMatrix::zeros(6, MatrixKind::Weights);
        assert_eq!(hom_cycle_spectral(5, &z).unwrap().value, 0.0);
        assert!(hom_cycle_spectral(2, &z).is_err());
    }

    #[test]
    fn inj_examples() {
        let mut r = rng::stream(3, 0);
        let a = SymMatrix::random_adjacency(7, 0.4, &mut r);
        let k2 = PatternGraph::complete(2).unwrap();
        assert_eq!(inj(&k2, &a).unwrap().value, 2.0 * a.upper_sum());
        let c3 = PatternGraph::cycle(3).unwrap();
        assert_eq!(inj(&c3, &SymMatrix::complete(4)).unwrap().exact, Some(24));
        let c4 = PatternGraph::cycle(4).unwrap();
        assert_eq!(inj(&c4, &SymMatrix::complete(3)).unwrap().exact, Some(0));
        assert!(inj(&PatternGraph::cycle(7).unwrap(), &a).is_err());
    }

    #[test]
    fn quotient_identity_examples() {
        let c4 = PatternGraph::cycle(4).unwrap();
        let rep = hom_quotient_identity_check(&c4, &SymMatrix::complete(4)).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.hom, 84);
        assert_eq!(rep.contributions.len(), 4);
        let mut r = rng::stream(4, 0);
        for _ in 0..5 {
            let a = SymMatrix::random_adjacency(6, 0.5, &mut r);
            for h in [PatternGraph::complete(2).unwrap(), PatternGraph::cycle(3).unwrap()] {
                let rep = hom_quotient_identity_check(&h, &a).unwrap();
                assert!(rep.holds);
                if h.n_vertices() == 2 {
                    assert_eq!(rep.contributions.len(), 1);
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let mut r = rng::stream(5, 0);
        let k2 = PatternGraph::complete(2).unwrap();
        let w = SymMatrix::random_weights(6, &mut r);
        let z = SymMatrix::random_gaussian(6, &mut r);
        let d = dir_derivative(&k2, &w, &z).unwrap();
        assert!((d - 2.0 * z.upper_sum()).abs() < 1e-10);

        // d/dt Tr(pJ + tJ)^3 at t = 0 equals 3 Tr((pJ)^2 J) = 3 p^2 Tr(J^3)
        let n = 7;
        let p = 0.3;
        let c3 = PatternGraph::cycle(3).unwrap();
        let d = dir_derivative(&c3, &SymMatrix::constant(n, p).unwrap(), &SymMatrix::complete(n)).unwrap();
        let trj3 = (n * (n - 1) * (n - 2)) as f64;
        assert!((d - 3.0 * p * p * trj3).abs() < 1e-9 * d);

        let c4 = PatternGraph::cycle(4).unwrap();
        let w = SymMatrix::random_weights(10, &mut r);
        let z = SymMatrix::random_gaussian(10, &mut r);
        let step = 1e-5;
        let plus = w.add(&z.scaled(step)).unwrap();
        let minus = w.sub(&z.scaled(step)).unwrap();
        let fd = (hom(&c4, &plus).unwrap().value - hom(&c4, &minus).unwrap().value) / (2.0 * step);
        let d = dir_derivative(&c4, &w, &z).unwrap();
        assert!((d - fd).abs() <= 1e-5 * d.abs().max(1.0));

        let g = gradient(&c4, &w).unwrap();
        let via_g: f64 = g.upper().map(|(i, j, gij)| gij * z.get(i, j)).sum();
        assert!((via_g - d).abs() <= 1e-9 * d.abs().max(1.0));
        for i in 0..10 {
            assert_eq!(g.get(i, i), 0.0);
        }
    }

    #[test]
    fn density_examples() {
        let k2 = PatternGraph::complete(2).unwrap();
        let n = 9;
        let p = 0.35;
        let d = hom_density(&k2, &SymMatrix::constant(n, p).unwrap()).unwrap();
        assert!((d - p * (n - 1) as f64 / n as f64).abs() < 1e-12);
        let c3 = PatternGraph::cycle(3).unwrap();
        assert_eq!(hom_density(&c3, &SymMatrix::zeros(4, MatrixKind::Weights)).unwrap(), 0.0);
        let d = hom_density(&PatternGraph::complete(4).unwrap(), &SymMatrix::complete(6)).unwrap();
        assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn dense_fast_paths_agree() {
        let mut r = rng::stream(6, 0);
        let x = SymMatrix::random_weights(9, &mut r);
        let d = x.to_dmatrix();
        for ell in 3..=8 {
            let c = PatternGraph::cycle(ell).unwrap();
            let a = hom(&c, &x).unwrap().value;
            let b = hom_dense(&c, &d).unwrap();
            assert!((a - b).abs() <= 1e-10 * a);
            let (v, g) = hom_and_gradient_dense(&c, &d).unwrap();
            assert!((v - a).abs() <= 1e-10 * a);
            let g2 = gradient(&c, &x).unwrap();
            for (i, j, gij) in g2.upper() {
                assert!((g[(i, j)] - gij).abs() <= 1e-9 * gij.abs().max(1.0));
            }
        }
    }
}
