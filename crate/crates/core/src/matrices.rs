//! Symmetric matrices, spectra and Schatten norms.
//!
//! [`SymMatrix`] stores the upper triangle (diagonal included) once, so
//! symmetry holds by construction. Its [`MatrixKind`] records which space it
//! lives in: weights in `[0, 1]` or adjacency entries in `{0, 1}`, both with
//! zero diagonal, or an unconstrained symmetric matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::rng;

/// Relative tolerance under which two eigenvalue moduli count as tied.
pub const TIE_TOL: f64 = 1e-10;

/// Which space a [`SymMatrix`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MatrixKind {
    /// Zero diagonal, entries in `[0, 1]`.
    Weights,
    /// Zero diagonal, entries in `{0, 1}`.
    Adjacency,
    /// Any finite symmetric matrix.
    General,
}

/// Dense symmetric matrix with packed upper-triangle storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
    kind: MatrixKind,
}

#[inline]
fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl SymMatrix {
    pub fn zeros(n: usize, kind: MatrixKind) -> Self {
        Self {
            n,
            data: vec![0.0; n * (n + 1) / 2],
            kind,
        }
    }

    /// Off-diagonal entries from `f(i, j)` for `i < j`; zero diagonal.
    pub fn from_upper_fn(n: usize, kind: MatrixKind, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n, MatrixKind::General);
        for i in 0..n {
            for j in i + 1..n {
                m.data[packed(n, i, j)] = f(i, j);
            }
        }
        m.with_kind(kind)
    }

    /// General symmetric matrix from `f(i, j)` for `i <= j`.
    pub fn from_fn_general(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n, MatrixKind::General);
        for i in 0..n {
            for j in i..n {
                m.data[packed(n, i, j)] = f(i, j);
            }
        }
        m.validate()?;
        Ok(m)
    }

    /// `c · J_N` with `J_N = 11ᵀ − I`.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_upper_fn(n, MatrixKind::Weights, |_, _| c)
    }

    /// `J_N`, the adjacency matrix of `K_N`.
    pub fn complete(n: usize) -> Self {
        Self::from_upper_fn(n, MatrixKind::Adjacency, |_, _| 1.0).expect("J_N is an adjacency matrix")
    }

    /// Adjacency matrix of a simple graph on `0..n`.
    pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::zeros(n, MatrixKind::Adjacency);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidMatrix(format!("bad edge ({u}, {v}) for N = {n}")));
            }
            m.data[packed(n, u, v)] = 1.0;
        }
        Ok(m)
    }

    /// From a row-major `n × n` array. Asymmetry above `1e-12` (relative to the
    /// largest entry) is rejected; the result is the exact average of both triangles.
    pub fn from_dense(n: usize, rows: &[f64], kind: MatrixKind) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: rows.len(),
            });
        }
        let scale = rows.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        let mut m = Self::zeros(n, MatrixKind::General);
        for i in 0..n {
            for j in i..n {
                let (a, b) = (rows[i * n + j], rows[j * n + i]);
                if (a - b).abs() > 1e-12 * scale {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                m.data[packed(n, i, j)] = 0.5 * (a + b);
            }
        }
        m.with_kind(kind)
    }

    /// General matrix from a dense one, averaging the two triangles.
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.ncols(),
            });
        }
        Self::from_fn_general(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    /// Random element of `X_N` with i.i.d. uniform entries.
    pub fn random_weights<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_upper_fn(n, MatrixKind::Weights, |_, _| rng::unit(rng)).expect("unit draws lie in [0, 1]")
    }

    /// Random adjacency matrix with independent Bernoulli(`p`) edges.
    pub fn random_adjacency<R: RngCore + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        Self::from_upper_fn(n, MatrixKind::Adjacency, |_, _| rng::bernoulli(rng, p) as u8 as f64)
            .expect("Bernoulli draws lie in {0, 1}")
    }

    /// Random symmetric matrix with standard normal entries and zero diagonal.
    pub fn random_gaussian<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_upper_fn(n, MatrixKind::General, |_, _| rng::normal(rng)).expect("normal draws are finite")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed(self.n, i, j)]
    }

    /// Sets `(i, j)` and `(j, i)`, keeping the declared kind valid.
    pub fn set(&mut self, i: usize, j: usize, x: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::OutOfRange {
                what: "matrix index",
                got: i.max(j),
                lo: 0,
                hi: self.n.saturating_sub(1),
            });
        }
        check_entry(self.kind, i, j, x)?;
        self.data[packed(self.n, i, j)] = x;
        Ok(())
    }

    /// Re-declares the kind after validating every entry against it.
    pub fn with_kind(mut self, kind: MatrixKind) -> Result<Self> {
        self.kind = kind;
        self.validate()?;
        Ok(self)
    }

    /// Same entries, kind `General`.
    pub fn into_general(mut self) -> Self {
        self.kind = MatrixKind::General;
        self
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i..self.n {
                check_entry(self.kind, i, j, self.get(i, j))?;
            }
        }
        Ok(())
    }

    /// Entries strictly above the diagonal in row-major order, `(i, j, x)`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Packed storage, row-major over the upper triangle including the diagonal.
    pub fn packed_data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x = self.get(i, j);
                out[i * n + j] = x;
                out[j * n + i] = x;
            }
        }
        out
    }

    /// Hilbert–Schmidt norm computed entrywise.
    pub fn hs_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let x = self.get(i, j);
                s += if i == j { x * x } else { 2.0 * x * x };
            }
        }
        libm::sqrt(s)
    }

    /// `Σ_{i<j} x_ij` (the edge count for adjacency matrices).
    pub fn upper_sum(&self) -> f64 {
        self.upper().map(|(_, _, x)| x).sum()
    }

    /// Entrywise combination; the result is `General`.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self {
            n: self.n,
            data,
            kind: MatrixKind::General,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `c · self`, kind `General`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| c * x).collect(),
            kind: MatrixKind::General,
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::of(self)
    }

    /// `‖X‖_{S_α}`; `alpha = f64::INFINITY` is the operator norm.
    pub fn schatten(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.spectrum()?.schatten(alpha)?)
    }

    pub fn op_norm(&self) -> Result<f64> {
        Ok(self.spectrum()?.op_norm())
    }
}

fn check_entry(kind: MatrixKind, i: usize, j: usize, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidMatrix(format!("non-finite entry at ({i}, {j})")));
    }
    match kind {
        MatrixKind::General => Ok(()),
        MatrixKind::Weights | MatrixKind::Adjacency if i == j && x != 0.0 => Err(Error::InvalidMatrix(
            format!("nonzero diagonal entry {x} at {i}"),
        )),
        MatrixKind::Weights if !(0.0..=1.0).contains(&x) => Err(Error::InvalidMatrix(format!(
            "entry {x} at ({i}, {j}) outside [0, 1]"
        ))),
        MatrixKind::Adjacency if x != 0.0 && x != 1.0 => Err(Error::InvalidMatrix(format!(
            "entry {x} at ({i}, {j}) not in {{0, 1}}"
        ))),
        _ => Ok(()),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 1.0 {
        return Err(Error::NotANorm(alpha));
    }
    Ok(())
}

/// Eigen-decomposition ordered by non-increasing modulus.
///
/// Eigenvalues whose moduli agree to [`TIE_TOL`] (relative to the largest)
/// are ordered by descending signed value, so positive ones come first.
/// Each eigenvector is signed so that its largest-magnitude entry is positive.
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn of(x: &SymMatrix) -> Result<Self> {
        if x.n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if x.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entries".into()));
        }
        Ok(Self::from_dense_symmetric(x.to_dmatrix()))
    }

    /// Decomposes a dense matrix assumed symmetric.
    pub(crate) fn from_dense_symmetric(m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..n).collect();
        let lam = &eig.eigenvalues;
        order.sort_by(|&a, &b| lam[b].abs().total_cmp(&lam[a].abs()).then(a.cmp(&b)));
        let top = order.first().map(|&k| lam[k].abs()).unwrap_or(0.0);
        let tol = TIE_TOL * top;
        // tie clusters: consecutive moduli within tol, resorted by signed value
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && lam[order[end - 1]].abs() - lam[order[end]].abs() <= tol {
                end += 1;
            }
            order[start..end].sort_by(|&a, &b| lam[b].total_cmp(&lam[a]).then(a.cmp(&b)));
            start = end;
        }
        let values: Vec<f64> = order.iter().map(|&k| lam[k]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (c, &k) in order.iter().enumerate() {
            let col = eig.eigenvectors.column(k);
            let mut arg = 0;
            for i in 1..n {
                if col[i].abs() > col[arg].abs() {
                    arg = i;
                }
            }
            let sign = if col[arg] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..n {
                vectors[(i, c)] = sign * col[i];
            }
        }
        Self { values, vectors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvalues, non-increasing in modulus.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors as columns, aligned with [`Self::values`].
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// Eigenvalues in non-increasing signed order (the order Weyl's inequality uses).
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn op_norm(&self) -> f64 {
        self.values.first().map(|x| x.abs()).unwrap_or(0.0)
    }

    /// `(Σ |λ_j|^α)^{1/α}`, evaluated with the largest modulus factored out.
    pub fn schatten(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(schatten_of(&self.values, alpha))
    }

    /// `(Σ_{j≤k} λ_j²)^{1/2}`.
    pub fn hs_k(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.len() {
            return Err(Error::OutOfRange {
                what: "k",
                got: k,
                lo: 1,
                hi: self.len(),
            });
        }
        Ok(libm::sqrt(self.values[..k].iter().map(|x| x * x).sum()))
    }

    /// `Σ_j λ_j^ℓ`.
    pub fn trace_power(&self, ell: u32) -> f64 {
        self.values.iter().map(|&x| powi(x, ell)).sum()
    }

    /// `Σ_{j<k} λ_j u_j u_jᵀ` as a general symmetric matrix.
    pub fn truncated(&self, k: usize) -> SymMatrix {
        let n = self.len();
        let k = k.min(n);
        let u = self.vectors.columns(0, k);
        SymMatrix::from_fn_general(n, |i, j| (0..k).map(|c| self.values[c] * u[(i, c)] * u[(j, c)]).sum())
            .expect("finite spectrum gives finite entries")
    }
}

pub(crate) fn powi(x: f64, e: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Schatten norm of a list of eigen/singular values, `alpha >= 1`.
pub(crate) fn schatten_of(values: &[f64], alpha: f64) -> f64 {
    let top = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if top == 0.0 {
        return 0.0;
    }
    if alpha.is_infinite() {
        return top;
    }
    let s: f64 = values.iter().map(|&x| libm::pow(x.abs() / top, alpha)).sum();
    top * libm::pow(s, 1.0 / alpha)
}

pub fn spectrum(x: &SymMatrix) -> Result<Spectrum> {
    Spectrum::of(x)
}

pub fn schatten(x: &SymMatrix, alpha: f64) -> Result<f64> {
    x.schatten(alpha)
}

pub fn hs_k(x: &SymMatrix, k: usize) -> Result<f64> {
    x.spectrum()?.hs_k(k)
}

/// Schatten norm of an arbitrary square matrix via its singular values.
pub fn schatten_general(m: &DMatrix<f64>, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let sv = m.clone().svd(false, false).singular_values;
    Ok(schatten_of(sv.as_slice(), alpha))
}

/// Split `X = X_≤ + X_>` at rank `R` of the modulus-ordered spectrum.
#[derive(Clone, Debug)]
pub struct RankSplit {
    /// `Σ_{j≤R} λ_j u_j u_jᵀ`.
    pub low: SymMatrix,
    /// `X − X_≤`.
    pub residual: SymMatrix,
    /// `‖X_>‖_op = |λ_{R+1}|`.
    pub residual_op: f64,
    pub spectrum: Spectrum,
}

pub fn rank_split(x: &SymMatrix, r: usize) -> Result<RankSplit> {
    let n = x.n();
    if r == 0 || r + 1 > n {
        return Err(Error::OutOfRange {
            what: "R",
            got: r,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    let spectrum = x.spectrum()?;
    let low = spectrum.truncated(r);
    let residual = x.sub(&low)?;
    Ok(RankSplit {
        low,
        residual,
        residual_op: spectrum.values()[r].abs(),
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::PatternGraph;

    fn k4() -> SymMatrix {
        SymMatrix::complete(4)
    }

    fn c4() -> SymMatrix {
        SymMatrix::adjacency(4, PatternGraph::cycle(4).unwrap().edges()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn packed_index_round_trip() {
        let n = 7;
        let mut seen = vec![false; n * (n + 1) / 2];
        for i in 0..n {
            for j in i..n {
                let k = packed(n, i, j);
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(packed(n, j, i), k);
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn kind_validation() {
        assert!(SymMatrix::constant(3, 1.5).is_err());
        let mut a = SymMatrix::zeros(3, MatrixKind::Adjacency);
        assert!(a.set(0, 1, 0.5).is_err());
        assert!(a.set(1, 1, 1.0).is_err());
        a.set(1, 0, 1.0).unwrap();
        assert_eq!(a.get(0, 1), 1.0);
        assert!(SymMatrix::from_dense(2, &[0.0, 1.0, 1.0 + 1e-9, 0.0], MatrixKind::General).is_err());
        let ok = SymMatrix::from_dense(2, &[0.0, 0.3, 0.3 + 1e-14, 0.0], MatrixKind::Weights).unwrap();
        assert_eq!(ok.get(0, 1), ok.get(1, 0));
    }

    #[test]
    fn spectrum_examples() {
        let s = k4().spectrum().unwrap();
        let expected = [3.0, -1.0, -1.0, -1.0];
        for (a, b) in s.values().iter().zip(expected) {
            assert!(close(*a, b, 1e-12), "{:?}", s.values());
        }
        let z = SymMatrix::zeros(5, MatrixKind::Weights).spectrum().unwrap();
        assert!(z.values().iter().all(|&x| x == 0.0));
        let s = c4().spectrum().unwrap();
        let expected = [2.0, -2.0, 0.0, 0.0];
        for (a, b) in s.values().iter().zip(expected) {
            assert!(close(*a, b, 1e-12), "{:?}", s.values());
        }
    }

    #[test]
    fn spectrum_reconstructs_and_is_orthonormal() {
        let mut r = rng::stream(5, 0);
        for n in [1, 2, 7, 20] {
            let x = SymMatrix::random_weights(n, &mut r);
            let s = x.spectrum().unwrap();
            let rec = s.truncated(n);
            let err = x.sub(&rec).unwrap().hs_norm();
            assert!(err <= 1e-8 * x.hs_norm().max(1e-300), "n={n} err={err}");
            let g = s.vectors().transpose() * s.vectors();
            let dev = (g - DMatrix::identity(n, n)).abs().max();
            assert!(dev <= 1e-10);
            assert!(s.values().windows(2).all(|w| w[0].abs() >= w[1].abs() - 1e-12));
        }
    }

    #[test]
    fn schatten_examples() {
        for n in [2usize, 5, 9] {
            let j = SymMatrix::complete(n);
            assert!(close(j.schatten(f64::INFINITY).unwrap(), (n - 1) as f64, 1e-10));
            for alpha in [1.0, 1.5, 2.0, 3.0, 4.0, 7.5] {
                let nm1 = (n - 1) as f64;
                let want = libm::pow(libm::pow(nm1, alpha) + nm1, 1.0 / alpha);
                assert!(close(j.schatten(alpha).unwrap(), want, 1e-10 * want), "n={n} alpha={alpha}");
            }
        }
        let mut r = rng::stream(6, 0);
        let x = SymMatrix::random_weights(12, &mut r);
        assert!(close(x.schatten(2.0).unwrap(), x.hs_norm(), 1e-8 * x.hs_norm()));
        assert_eq!(x.schatten(0.5), Err(Error::NotANorm(0.5)));
    }

    #[test]
    fn hs_k_examples() {
        assert!(close(hs_k(&k4(), 1).unwrap(), 3.0, 1e-12));
        assert!(close(hs_k(&c4(), 2).unwrap(), libm::sqrt(8.0), 1e-12));
        let mut r = rng::stream(7, 0);
        let x = SymMatrix::random_weights(9, &mut r);
        assert!(close(hs_k(&x, 9).unwrap(), x.hs_norm(), 1e-10));
        assert!(hs_k(&x, 0).is_err());
        assert!(hs_k(&x, 10).is_err());
    }

    #[test]
    fn rank_split_examples() {
        let s = rank_split(&k4(), 1).unwrap();
        assert!(close(s.residual_op, 1.0, 1e-12));
        for i in 0..4 {
            for j in 0..4 {
                assert!(close(s.low.get(i, j), 0.75, 1e-12));
            }
        }
        // rank-2 input
        let u = [1.0, 2.0, 0.0, -1.0, 0.5];
        let v = [0.0, 1.0, 1.0, 1.0, -2.0];
        let x = SymMatrix::from_fn_general(5, |i, j| 3.0 * u[i] * u[j] - v[i] * v[j]).unwrap();
        let s = rank_split(&x, 2).unwrap();
        assert!(s.residual.hs_norm() <= 1e-10 * x.hs_norm());
        let mut r = rng::stream(8, 0);
        let x = SymMatrix::random_weights(20, &mut r);
        let s = rank_split(&x, 4).unwrap();
        assert!(s.residual_op <= 20.0 / libm::sqrt(5.0));
        let back = s.low.add(&s.residual).unwrap();
        assert!(back.sub(&x).unwrap().hs_norm() <= 1e-8 * x.hs_norm());
        assert!(rank_split(&x, 0).is_err());
        assert!(rank_split(&x, 20).is_err());
    }

    #[test]
    fn schatten_general_matches_symmetric() {
        let mut r = rng::stream(9, 0);
        let x = SymMatrix::random_gaussian(8, &mut r);
        for alpha in [1.0, 2.0, 3.0, f64::INFINITY] {
            let a = x.schatten(alpha).unwrap();
            let b = schatten_general(&x.to_dmatrix(), alpha).unwrap();
            assert!(close(a, b, 1e-10 * a));
        }
    }
}
