//! Pattern graphs `H`: the small motifs whose homomorphism counts are studied.
//!
//! Vertices are `0..n` and edges are stored canonically as `(u, v)` with
//! `u < v`, sorted lexicographically, so every enumeration built on top of a
//! pattern is deterministic.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest vertex count a pattern may have (adjacency is a `u64` bitmask).
pub const MAX_PATTERN_VERTICES: usize = 64;

/// A small simple graph.
#[derive(Clone, Debug)]
pub struct PatternGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
    name: Option<String>,
}

impl PartialEq for PatternGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for PatternGraph {}

impl PatternGraph {
    /// Builds a simple graph, rejecting loops, duplicates and out-of-range labels.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_PATTERN_VERTICES {
            return Err(Error::TooLarge {
                what: "pattern vertices",
                got: n,
                max: MAX_PATTERN_VERTICES,
            });
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has a label outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in &canon {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self {
            n,
            edges: canon,
            adj,
            name: None,
        })
    }

    fn named(mut self, name: String) -> Self {
        self.name = Some(name);
        self
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Ok(Self::new(n, &[])?.named(format!("empty_{n}")))
    }

    /// The cycle `C_len`, `len >= 3`.
    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::InvalidGraph(format!("cycle length {len} < 3")));
        }
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Ok(Self::new(len, &edges)?.named(format!("C{len}")))
    }

    /// The complete graph `K_k`.
    pub fn complete(k: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Ok(Self::new(k, &edges)?.named(format!("K{k}")))
    }

    /// The complete bipartite graph `K_{a,b}`; sides are `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Ok(Self::new(a + b, &edges)?.named(format!("K_{{{a},{b}}}")))
    }

    /// The star `K_{1,k}` with centre 0 and `k` leaves.
    pub fn star(k: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=k).map(|v| (0, v)).collect();
        Ok(Self::new(k + 1, &edges)?.named(format!("star_{k}")))
    }

    /// The path on `k` vertices (`k - 1` edges).
    pub fn path(k: usize) -> Result<Self> {
        let edges: Vec<_> = (1..k).map(|v| (v - 1, v)).collect();
        Ok(Self::new(k, &edges)?.named(format!("path_{k}")))
    }

    /// Parses a built-in pattern name: `C3`..`C12`, `K<k>`, `K_{m,n}`,
    /// `star_k`, `path_k`, `empty_n`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::UnknownPattern(name.to_string());
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        let s = name.trim();
        if let Some(rest) = s.strip_prefix("K_{").and_then(|r| r.strip_suffix('}')) {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            return Self::complete_bipartite(num(a)?, num(b)?);
        }
        if let Some(rest) = s.strip_prefix("star_") {
            return Self::star(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("path_") {
            return Self::path(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("empty_") {
            return Self::empty(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix('C') {
            let len = num(rest)?;
            if !(3..=12).contains(&len) {
                return Err(bad());
            }
            return Self::cycle(len);
        }
        if let Some(rest) = s.strip_prefix('K') {
            let k = num(rest)?;
            if k < 2 {
                return Err(bad());
            }
            return Self::complete(k);
        }
        Err(bad())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Human-readable label: the built-in name if any, otherwise `n{n}m{m}`.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("n{}m{}", self.n, self.edges.len()),
        }
    }

    /// Connectivity by BFS from vertex 0. The empty vertex set counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let full = full_mask(self.n);
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & full == full
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    /// Proper 2-colouring if one exists (every component coloured from its
    /// smallest vertex with colour 0).
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in bits(self.adj[v]) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        stack.push(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Induced subgraph on the vertices of `mask`, relabelled in increasing order.
    pub fn induced(&self, mask: u64) -> PatternGraph {
        let keep: Vec<usize> = bits(mask & full_mask(self.n)).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        PatternGraph::new(keep.len(), &edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Degree data: `Δ`, `Δ⋆` and the core `H★` induced on max-degree vertices.
    pub fn degree_profile(&self) -> Result<DegreeProfile> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let deg = self.degrees();
        let max_degree = deg.iter().copied().max().unwrap_or(0);
        let by_adjacency = self
            .edges
            .iter()
            .map(|&(u, v)| deg[u] + deg[v] - 1)
            .max()
            .unwrap_or(0);
        let m = self.n_edges();
        let min_remaining = self
            .edges
            .iter()
            .map(|&e| {
                self.remove_edge_closure(&[e])
                    .expect("edge taken from the pattern")
                    .n_edges()
            })
            .min()
            .unwrap_or(0);
        let by_deletion = m - min_remaining;
        assert_eq!(
            by_adjacency, by_deletion,
            "the two characterisations of delta_star disagree"
        );
        let core_mask = (0..self.n)
            .filter(|&v| deg[v] == max_degree)
            .fold(0u64, |acc, v| acc | 1 << v);
        Ok(DegreeProfile {
            max_degree,
            delta_star: by_adjacency,
            max_degree_core: self.induced(core_mask),
        })
    }

    /// `H_(e_1,…,e_l)`: induced subgraph after deleting every endpoint of the listed edges.
    pub fn remove_edge_closure(&self, edges: &[(usize, usize)]) -> Result<PatternGraph> {
        let mut removed = 0u64;
        for &(u, v) in edges {
            if !self.has_edge(u, v) {
                return Err(Error::EdgeNotInPattern(u, v));
            }
            removed |= 1 << u | 1 << v;
        }
        Ok(self.induced(full_mask(self.n) & !removed))
    }

    /// All vertex partitions whose quotient is loop-free, with their quotients.
    pub fn quotients(&self) -> Result<QuotientFamily> {
        if self.n > 8 {
            return Err(Error::PatternTooLargeForQuotients(self.n));
        }
        let mut entries = Vec::new();
        for_each_partition(self.n, &mut |blocks: &[usize]| {
            let parts = 1 + blocks.iter().copied().max().unwrap_or(0);
            let parts = if self.n == 0 { 0 } else { parts };
            let mut masks = vec![0u64; parts];
            for (v, &b) in blocks.iter().enumerate() {
                masks[b] |= 1 << v;
            }
            // a part containing an edge would become a self-loop
            if masks.iter().any(|&m| bits(m).any(|v| self.adj[v] & m != 0)) {
                return;
            }
            let mut qedges: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(u, v)| (blocks[u].min(blocks[v]), blocks[u].max(blocks[v])))
                .collect();
            qedges.sort_unstable();
            qedges.dedup();
            let graph = PatternGraph::new(parts, &qedges).expect("loop-free quotient is simple");
            let partition = masks.iter().map(|&m| bits(m).collect()).collect();
            entries.push(QuotientEntry { partition, graph });
        });
        Ok(QuotientFamily { entries })
    }

    /// Coefficients `a_0..a_k` of the independence polynomial (trailing zeros trimmed).
    pub fn independence_polynomial(&self) -> Result<Vec<u64>> {
        if self.n > 24 {
            return Err(Error::TooLarge {
                what: "independence polynomial vertices",
                got: self.n,
                max: 24,
            });
        }
        let mut poly = independent_sets(&self.adj, full_mask(self.n));
        while poly.len() > 1 && *poly.last().unwrap() == 0 {
            poly.pop();
        }
        Ok(poly)
    }

    /// Structural flags used to decide which certified bounds apply.
    pub fn classify(&self) -> Classification {
        let bipartite = self.is_bipartite();
        let regular = self.is_regular();
        let seminorming = if !bipartite {
            Known::No
        } else if self.is_even_cycle() || self.is_even_complete_bipartite() {
            Known::Yes
        } else {
            Known::Unknown
        };
        let sidorenko = if seminorming == Known::Yes {
            Known::Yes
        } else {
            Known::Unknown
        };
        Classification {
            bipartite,
            regular,
            seminorming,
            sidorenko,
        }
    }

    fn is_even_cycle(&self) -> bool {
        self.n >= 4
            && self.n % 2 == 0
            && self.n_edges() == self.n
            && self.is_connected()
            && self.degrees().iter().all(|&d| d == 2)
    }

    fn is_even_complete_bipartite(&self) -> bool {
        if self.edges.is_empty() || !self.is_connected() {
            return false;
        }
        let Some(color) = self.two_coloring() else {
            return false;
        };
        let a = color.iter().filter(|&&c| c == 0).count();
        let b = self.n - a;
        a % 2 == 0 && b % 2 == 0 && self.n_edges() == a * b
    }

    /// Every labelled simple graph on `n` vertices (`n <= 6`), edges in canonical order.
    pub fn all_labeled(n: usize) -> Result<Vec<PatternGraph>> {
        if n > 6 {
            return Err(Error::TooLarge {
                what: "labelled enumeration vertices",
                got: n,
                max: 6,
            });
        }
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut out = Vec::with_capacity(1 << slots.len());
        for code in 0u32..(1 << slots.len()) {
            let edges: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(PatternGraph::new(n, &edges)?);
        }
        Ok(out)
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Degree data of a pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    /// `Δ(H)`.
    pub max_degree: usize,
    /// `Δ⋆(H)`: largest number of edges meeting a given edge, itself included.
    pub delta_star: usize,
    /// `H★`, induced on the vertices of degree `Δ`.
    pub max_degree_core: PatternGraph,
}

/// One loop-free quotient `H/P`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientEntry {
    /// Parts of the partition, each sorted, ordered by smallest element.
    pub partition: Vec<Vec<usize>>,
    /// Quotient graph; vertex `i` is part `i`.
    pub graph: PatternGraph,
}

impl QuotientEntry {
    pub fn is_identity(&self) -> bool {
        self.partition.iter().all(|p| p.len() == 1)
    }
}

/// All loop-free quotients of a pattern; the identity partition comes first.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientFamily {
    pub entries: Vec<QuotientEntry>,
}

/// Tri-state answer for properties only decided on named families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Known {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    pub bipartite: bool,
    pub regular: bool,
    pub seminorming: Known,
    pub sidorenko: Known,
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over set bit positions.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Visits every set partition of `0..n` as a restricted growth string.
/// The first string visited is the identity `0, 1, …, n-1`.
fn for_each_partition(n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, max: usize, visit: &mut dyn FnMut(&[usize])) {
        if i == n {
            visit(rgs);
            return;
        }
        // new block first so that the identity partition comes out first
        let choices = if i == 0 { 1 } else { max + 2 };
        for k in (0..choices).rev() {
            rgs.push(k);
            let next_max = if i == 0 { 0 } else { max.max(k) };
            rec(i + 1, n, rgs, next_max, visit);
            rgs.pop();
        }
    }
    let mut rgs = Vec::with_capacity(n);
    rec(0, n, &mut rgs, 0, visit);
}

fn independent_sets(adj: &[u64], mask: u64) -> Vec<u64> {
    if mask == 0 {
        return vec![1];
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    if adj[v] & rest == 0 {
        // isolated inside `mask`: multiply by (1 + x)
        let p = independent_sets(adj, rest);
        let mut out = vec![0u64; p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            out[k] += c;
            out[k + 1] += c;
        }
        return out;
    }
    let without = independent_sets(adj, rest);
    let with = independent_sets(adj, rest & !adj[v]);
    let mut out = vec![0u64; without.len().max(with.len() + 1)];
    for (k, &c) in without.iter().enumerate() {
        out[k] += c;
    }
    for (k, &c) in with.iter().enumerate() {
        out[k + 1] += c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn connected_up_to(n_max: usize) -> Vec<PatternGraph> {
        (1..=n_max)
            .flat_map(|n| PatternGraph::all_labeled(n).unwrap())
            .filter(|g| g.is_connected() && g.n_edges() > 0)
            .collect()
    }

    #[test]
    fn canonical_edges_and_validation() {
        let g = PatternGraph::new(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(PatternGraph::new(3, &[(1, 1)]).is_err());
        assert!(PatternGraph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(PatternGraph::new(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn named_patterns() {
        assert_eq!(PatternGraph::from_name("C5").unwrap().n_edges(), 5);
        assert_eq!(PatternGraph::from_name("K4").unwrap().n_edges(), 6);
        assert_eq!(PatternGraph::from_name("K2").unwrap().n_edges(), 1);
        let k24 = PatternGraph::from_name("K_{2,4}").unwrap();
        assert_eq!((k24.n_vertices(), k24.n_edges()), (6, 8));
        assert_eq!(PatternGraph::from_name("star_3").unwrap().max_degree(), 3);
        assert_eq!(PatternGraph::from_name("path_4").unwrap().n_edges(), 3);
        assert!(PatternGraph::from_name("C13").is_err());
        assert!(PatternGraph::from_name("Q7").is_err());
    }

    #[test]
    fn connectivity() {
        assert!(PatternGraph::cycle(5).unwrap().is_connected());
        assert!(!PatternGraph::new(4, &[(0, 1), (2, 3)]).unwrap().is_connected());
    }

    #[test]
    fn degree_profile_examples() {
        let c3 = PatternGraph::cycle(3).unwrap();
        let d = c3.degree_profile().unwrap();
        assert_eq!((d.max_degree, d.delta_star), (2, 3));
        assert_eq!(d.max_degree_core, c3);

        let c4 = PatternGraph::cycle(4).unwrap();
        let d = c4.degree_profile().unwrap();
        assert_eq!((d.max_degree, d.delta_star), (2, 3));
        assert_eq!(d.max_degree_core, c4);

        let k2 = PatternGraph::complete(2).unwrap();
        let d = k2.degree_profile().unwrap();
        assert_eq!((d.max_degree, d.delta_star), (1, 1));
        assert_eq!(d.max_degree_core, k2);

        let star = PatternGraph::star(3).unwrap();
        let d = star.degree_profile().unwrap();
        assert_eq!(d.max_degree_core.n_vertices(), 1);

        assert_eq!(PatternGraph::empty(3).unwrap().degree_profile(), Err(Error::NoEdges));
    }

    #[test]
    fn edge_closure_examples() {
        let c3 = PatternGraph::cycle(3).unwrap();
        let r = c3.remove_edge_closure(&[(0, 1)]).unwrap();
        assert_eq!((r.n_vertices(), r.n_edges()), (1, 0));

        let c4 = PatternGraph::cycle(4).unwrap();
        let r = c4.remove_edge_closure(&[(0, 1)]).unwrap();
        assert_eq!(r, PatternGraph::complete(2).unwrap());
        // idempotent under re-listing
        assert_eq!(c4.remove_edge_closure(&[(0, 1), (1, 0)]).unwrap(), r);

        let c5 = PatternGraph::cycle(5).unwrap();
        let r = c5.remove_edge_closure(&[(0, 1), (2, 3)]).unwrap();
        assert_eq!((r.n_vertices(), r.n_edges()), (1, 0));

        assert_eq!(c4.remove_edge_closure(&[(0, 2)]), Err(Error::EdgeNotInPattern(0, 2)));
    }

    #[test]
    fn quotient_examples() {
        let k2 = PatternGraph::complete(2).unwrap().quotients().unwrap();
        assert_eq!(k2.entries.len(), 1);
        assert!(k2.entries[0].is_identity());

        let c4 = PatternGraph::cycle(4).unwrap();
        let q = c4.quotients().unwrap();
        assert_eq!(q.entries.len(), 4);
        assert!(q.entries[0].is_identity());
        assert_eq!(q.entries[0].graph, c4);
        let mut shapes: Vec<_> = q.entries.iter().map(|e| (e.graph.n_vertices(), e.graph.n_edges())).collect();
        shapes.sort();
        assert_eq!(shapes, vec![(2, 1), (3, 2), (3, 2), (4, 4)]);

        assert_eq!(PatternGraph::cycle(3).unwrap().quotients().unwrap().entries.len(), 1);
        assert!(matches!(
            PatternGraph::cycle(9).unwrap().quotients(),
            Err(Error::PatternTooLargeForQuotients(9))
        ));
    }

    #[test]
    fn partition_count_is_bell() {
        let mut count = 0;
        for_each_partition(6, &mut |_| count += 1);
        assert_eq!(count, 203);
        let empty = PatternGraph::empty(5).unwrap();
        assert_eq!(empty.quotients().unwrap().entries.len(), 52);
    }

    #[test]
    fn independence_polynomial_examples() {
        assert_eq!(PatternGraph::cycle(3).unwrap().independence_polynomial().unwrap(), vec![1, 3]);
        assert_eq!(PatternGraph::cycle(4).unwrap().independence_polynomial().unwrap(), vec![1, 4, 2]);
        assert_eq!(PatternGraph::empty(3).unwrap().independence_polynomial().unwrap(), vec![1, 3, 3, 1]);
        assert!(PatternGraph::empty(25).unwrap().independence_polynomial().is_err());
        assert_eq!(PatternGraph::empty(24).unwrap().independence_polynomial().unwrap()[12], 2_704_156);
    }

    #[test]
    fn cycle_independence_recursion() {
        // P_{C_l} = P_{C_{l-1}} + x P_{C_{l-2}}, with P_{C_2} = 1 + 2x
        let mut prev2 = vec![1u64, 2];
        let mut prev1 = vec![1u64, 3];
        for len in 4..=12 {
            let mut expected = vec![0u64; prev1.len().max(prev2.len() + 1)];
            for (k, &c) in prev1.iter().enumerate() {
                expected[k] += c;
            }
            for (k, &c) in prev2.iter().enumerate() {
                expected[k + 1] += c;
            }
            while *expected.last().unwrap() == 0 {
                expected.pop();
            }
            let got = PatternGraph::cycle(len).unwrap().independence_polynomial().unwrap();
            assert_eq!(got, expected, "C{len}");
            prev2 = prev1;
            prev1 = expected;
        }
    }

    #[test]
    fn classification_examples() {
        let c4 = PatternGraph::cycle(4).unwrap().classify();
        assert!(c4.bipartite && c4.regular);
        assert_eq!(c4.seminorming, Known::Yes);
        assert_eq!(c4.sidorenko, Known::Yes);

        let c3 = PatternGraph::cycle(3).unwrap().classify();
        assert!(!c3.bipartite);
        assert_eq!(c3.seminorming, Known::No);

        let k24 = PatternGraph::complete_bipartite(2, 4).unwrap().classify();
        assert_eq!(k24.seminorming, Known::Yes);
        assert!(!k24.regular);

        let p4 = PatternGraph::path(4).unwrap().classify();
        assert!(p4.bipartite);
        assert_eq!(p4.seminorming, Known::Unknown);
        assert_eq!(p4.sidorenko, Known::Unknown);

        assert_eq!(PatternGraph::complete_bipartite(1, 3).unwrap().classify().seminorming, Known::Unknown);
    }

    #[test]
    fn delta_star_bounds_exhaustive() {
        for g in connected_up_to(6) {
            let d = g.degree_profile().unwrap();
            assert!(d.max_degree <= d.delta_star, "{g:?}");
            assert!(d.delta_star <= 2 * d.max_degree - 1, "{g:?}");
            assert!(d.max_degree <= g.n_vertices() - 1);
        }
    }

    #[test]
    fn quotient_edge_loss_bound_exhaustive() {
        for g in connected_up_to(6) {
            let delta = g.max_degree();
            for q in g.quotients().unwrap().entries {
                let f = &q.graph;
                if !q.is_identity() {
                    let lost_e = g.n_edges() - f.n_edges();
                    let lost_v = g.n_vertices() - f.n_vertices();
                    assert!(lost_e <= delta * lost_v, "{g:?} -> {f:?}");
                }
            }
        }
    }

    #[test]
    fn quotient_can_raise_max_degree() {
        // merging the two inner vertices at distance 2 on a 5-path
        let p5 = PatternGraph::path(5).unwrap();
        let q = p5
            .quotients()
            .unwrap()
            .entries
            .into_iter()
            .find(|q| q.partition.iter().any(|part| part == &vec![1, 3]) && q.graph.n_vertices() == 4)
            .unwrap();
        assert_eq!(p5.max_degree(), 2);
        assert_eq!(q.graph.max_degree(), 3);
    }
}
