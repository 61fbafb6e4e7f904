//! Covering arguments at test scale.
//!
//! The nets used in the large-deviation upper bounds have resolutions far
//! below double precision, so nothing here builds a net. Instead each
//! inequality chain of the covering proofs is evaluated at an achievable
//! perturbation size, with every slack term computed from actual norms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::PatternGraph;
use crate::homcount;
use crate::matrices::{self, MatrixKind, Spectrum, SymMatrix};
use crate::rng;

/// Gram deviation above which a frame is rejected.
pub const FRAME_TOL: f64 = 1e-8;

/// `(λ, u)` with `|λ_1| ≥ … ≥ |λ_R|` and orthonormal columns `u_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoint {
    lambdas: Vec<f64>,
    frame: DMatrix<f64>,
}

impl SpectralPoint {
    pub fn new(lambdas: Vec<f64>, frame: DMatrix<f64>) -> Result<Self> {
        if frame.ncols() != lambdas.len() {
            return Err(Error::DimensionMismatch {
                expected: lambdas.len(),
                got: frame.ncols(),
            });
        }
        if lambdas.windows(2).any(|w| w[0].abs() < w[1].abs()) {
            return Err(Error::Precondition("eigenvalues must be ordered by decreasing modulus".into()));
        }
        let dev = gram_deviation(&frame);
        if dev > FRAME_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { lambdas, frame })
    }

    /// The top `R` eigenpairs of `x` by modulus.
    pub fn top(x: &SymMatrix, r: usize) -> Result<Self> {
        let n = x.n();
        if r == 0 || r > n {
            return Err(Error::OutOfRange {
                what: "R",
                got: r,
                lo: 1,
                hi: n,
            });
        }
        let s = x.spectrum()?;
        let order = modulus_order(s.values());
        let lambdas = order[..r].iter().map(|&k| s.values()[k]).collect();
        let frame = DMatrix::from_fn(n, r, |i, j| s.vectors()[(i, order[j])]);
        Self::new(lambdas, frame)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }
}

fn modulus_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    order
}

/// `max_{jk} |(UᵀU − I)_{jk}|`.
pub fn gram_deviation(frame: &DMatrix<f64>) -> f64 {
    let g = frame.transpose() * frame;
    let r = g.nrows();
    let mut dev = 0.0f64;
    for j in 0..r {
        for k in 0..r {
            let target = if j == k { 1.0 } else { 0.0 };
            dev = dev.max((g[(j, k)] - target).abs());
        }
    }
    dev
}

/// Modified Gram–Schmidt, applied twice for stability.
pub fn orthonormalize(frame: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut q = frame.clone();
    for _pass in 0..2 {
        for j in 0..q.ncols() {
            for k in 0..j {
                let proj = q.column(k).dot(&q.column(j));
                let col_k = q.column(k).clone_owned();
                q.column_mut(j).axpy(-proj, &col_k, 1.0);
            }
            let norm = q.column(j).norm();
            if norm < 1e-12 {
                return Err(Error::Precondition(format!("frame column {j} is degenerate")));
            }
            q.column_mut(j).scale_mut(1.0 / norm);
        }
    }
    Ok(q)
}

/// `Σ_j λ_j u_j u_jᵀ`.
pub fn mat_assemble(point: &SpectralPoint) -> Result<SymMatrix> {
    let u = &point.frame;
    let n = u.nrows();
    let scaled = DMatrix::from_fn(n, point.rank(), |i, j| u[(i, j)] * point.lambdas[j]);
    let m = scaled * u.transpose();
    SymMatrix::from_fn_general(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

fn random_frame(n: usize, r: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<DMatrix<f64>> {
    let g = DMatrix::from_fn(n, r, |_, _| rng::normal(rng));
    orthonormalize(&g)
}

/// Random rank-`R` point with `‖λ‖_2 = radius · U`, `U` uniform.
pub fn random_point(n: usize, r: usize, radius: f64, seed: u64) -> Result<SpectralPoint> {
    let mut g = rng::stream(seed, rng::STRUCTURE_BIT | 2);
    let mut lambdas: Vec<f64> = (0..r).map(|_| rng::normal(&mut g)).collect();
    lambdas.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let norm = libm::sqrt(lambdas.iter().map(|l| l * l).sum::<f64>());
    let scale = radius * rng::unit(&mut g) / norm.max(f64::MIN_POSITIVE);
    let lambdas = lambdas.into_iter().map(|l| l * scale).collect();
    let frame = random_frame(n, r, &mut g)?;
    SpectralPoint::new(lambdas, frame)
}

fn hs_dense(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// One evaluation of the net perturbation chain.
#[derive(Clone, Debug, PartialEq)]
pub struct NetPerturbationRow {
    /// `‖X − Y‖_HS`.
    pub lhs: f64,
    /// `√R ‖λ − μ‖_2 + ‖μ‖_2 (Σ_j ‖u_j u_jᵀ − v_j v_jᵀ‖²_HS)^{1/2}`.
    pub middle: f64,
    /// `√R ‖λ − μ‖_2 + ‖μ‖_2 √2 ‖u − v‖_HS`.
    pub rhs: f64,
    /// Largest error in `‖u uᵀ − v vᵀ‖²_HS = 2 (1 − ⟨u, v⟩²)` over the columns.
    pub rank_one_identity_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetPerturbationReport {
    pub n: usize,
    pub r: usize,
    pub trials: usize,
    pub min_slack: f64,
    pub max_rank_one_error: f64,
    pub violations: usize,
    pub rows: Vec<NetPerturbationRow>,
}

/// Evaluates the chain at `(λ, u)` against `(μ, v)`.
pub fn net_chain(x: &SpectralPoint, y: &SpectralPoint) -> Result<NetPerturbationRow> {
    if x.rank() != y.rank() || x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.rank(),
            got: y.rank(),
        });
    }
    let r = x.rank();
    let xm = mat_assemble(x)?.to_dmatrix();
    let ym = mat_assemble(y)?.to_dmatrix();
    let lhs = hs_dense(&(&xm - &ym));
    let dl = libm::sqrt(x.lambdas.iter().zip(&y.lambdas).map(|(a, b)| (a - b) * (a - b)).sum::<f64>());
    let mu = libm::sqrt(y.lambdas.iter().map(|b| b * b).sum::<f64>());
    let mut proj_sq = 0.0;
    let mut rank_one_identity_error = 0.0f64;
    for j in 0..r {
        let u = x.frame.column(j);
        let v = y.frame.column(j);
        let d = hs_dense(&(u * u.transpose() - v * v.transpose()));
        let c = u.dot(&v);
        rank_one_identity_error = rank_one_identity_error.max((d * d - 2.0 * (1.0 - c * c)).abs());
        proj_sq += d * d;
    }
    let du = hs_dense(&(&x.frame - &y.frame));
    let sr = libm::sqrt(r as f64);
    Ok(NetPerturbationRow {
        lhs,
        middle: sr * dl + mu * libm::sqrt(proj_sq),
        rhs: sr * dl + mu * core::f64::consts::SQRT_2 * du,
        rank_one_identity_error,
    })
}

/// Perturbs `x` by `δ_λ` (Euclidean, in `λ`) and `δ_u` (Hilbert–Schmidt, in the
/// frame, then re-orthonormalised) and checks the chain on every trial.
pub fn net_perturbation_bound(x: &SpectralPoint, delta_lambda: f64, delta_frame: f64, trials: usize, seed: u64) -> Result<NetPerturbationReport> {
    let (n, r) = (x.dim(), x.rank());
    let mut rows = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut g = rng::stream(rng::derive_seed(seed, t as u64), rng::STRUCTURE_BIT | 3);
        let dl: Vec<f64> = (0..r).map(|_| rng::normal(&mut g)).collect();
        let dl_norm = libm::sqrt(dl.iter().map(|v| v * v).sum::<f64>()).max(f64::MIN_POSITIVE);
        // μ need not stay modulus-ordered: the chain pairs column j with column j
        let mu: Vec<f64> = x.lambdas.iter().zip(&dl).map(|(l, d)| l + delta_lambda * d / dl_norm).collect();
        let du = DMatrix::from_fn(n, r, |_, _| rng::normal(&mut g));
        let du = &du * (delta_frame / du.norm().max(f64::MIN_POSITIVE));
        let y = SpectralPoint {
            lambdas: mu,
            frame: orthonormalize(&(&x.frame + du))?,
        };
        rows.push(net_chain(x, &y)?);
    }
    let tol = |row: &NetPerturbationRow| 1e-12 * (1.0 + row.rhs);
    let violations = rows.iter().filter(|row| row.lhs > row.middle + tol(row) || row.middle > row.rhs + tol(row)).count();
    Ok(NetPerturbationReport {
        n,
        r,
        trials,
        min_slack: rows.iter().map(|row| row.rhs - row.lhs).fold(f64::INFINITY, f64::min),
        max_rank_one_error: rows.iter().map(|row| row.rank_one_identity_error).fold(0.0, f64::max),
        violations,
        rows,
    })
}

/// Orthogonal projection onto `ker(Y)`: eigenvectors with `|λ| ≤ 1e-10 · max|λ|`.
pub fn kernel_projection(y: &SymMatrix) -> Result<DMatrix<f64>> {
    let s = y.spectrum()?;
    let top = s.op_norm();
    let n = y.n();
    let mut pi = DMatrix::zeros(n, n);
    for (k, &l) in s.values().iter().enumerate() {
        if l.abs() <= 1e-10 * top.max(f64::MIN_POSITIVE) {
            let u = s.vectors().column(k);
            pi += u * u.transpose();
        }
    }
    Ok(pi)
}

/// `Π M Π` with `Π` the projection onto `ker(Y)`.
pub fn compress_to_kernel(y: &SymMatrix, m: &SymMatrix) -> Result<SymMatrix> {
    let pi = kernel_projection(y)?;
    let z = &pi * m.to_dmatrix() * &pi;
    SymMatrix::from_fn_general(y.n(), |i, j| 0.5 * (z[(i, j)] + z[(j, i)]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceIdentityReport {
    /// `‖Y Z‖_HS / (‖Y‖_HS ‖Z‖_HS)`.
    pub subspace_residual: f64,
    /// `(ℓ, |Tr(Y+Z)^ℓ − Tr Y^ℓ − Tr Z^ℓ| / ‖Y+Z‖^ℓ_{S_ℓ})`.
    pub trace_errors: Vec<(u32, f64)>,
    /// `(α, |‖Y+Z‖^α − ‖Y‖^α − ‖Z‖^α| / ‖Y+Z‖^α)` in Schatten norms.
    pub schatten_errors: Vec<(f64, f64)>,
    pub holds: bool,
}

/// `Tr(Y+Z)^ℓ = Tr Y^ℓ + Tr Z^ℓ` and Schatten additivity when `Im Z ⊆ ker Y`.
pub fn orthogonal_residual_trace_identity(y: &SymMatrix, z: &SymMatrix, ells: &[u32], alphas: &[f64]) -> Result<TraceIdentityReport> {
    let yd = y.to_dmatrix();
    let zd = z.to_dmatrix();
    let scale = (hs_dense(&yd) * hs_dense(&zd)).max(f64::MIN_POSITIVE);
    let subspace_residual = if hs_dense(&zd) == 0.0 { 0.0 } else { hs_dense(&(&yd * &zd)) / scale };
    if subspace_residual > 1e-8 {
        return Err(Error::SubspaceViolation(subspace_residual));
    }
    let sum = y.add(z)?;
    let (sy, sz, ss) = (y.spectrum()?, z.spectrum()?, sum.spectrum()?);
    let mut holds = true;
    let mut trace_errors = Vec::new();
    for &ell in ells {
        let total = ss.trace_power(ell);
        let denom = ss.values().iter().map(|l| matrices::powi(l.abs(), ell)).sum::<f64>().max(f64::MIN_POSITIVE);
        let err = (total - sy.trace_power(ell) - sz.trace_power(ell)).abs() / denom;
        holds &= err <= 1e-8;
        trace_errors.push((ell, err));
    }
    let mut schatten_errors = Vec::new();
    for &alpha in alphas {
        let p = |s: &Spectrum| -> Result<f64> { Ok(libm::pow(s.schatten(alpha)?, alpha)) };
        let total = p(&ss)?;
        let err = (total - p(&sy)? - p(&sz)?).abs() / total.max(f64::MIN_POSITIVE);
        holds &= err <= 1e-8;
        schatten_errors.push((alpha, err));
    }
    Ok(TraceIdentityReport {
        subspace_residual,
        trace_errors,
        schatten_errors,
        holds,
    })
}

/// One test point `X = Y + Z + noise` of a covering set.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleFluctuationRow {
    pub ell: u32,
    /// `|Tr X^ℓ − Tr Y^ℓ|`.
    pub difference: f64,
    /// `(ε N p)^ℓ`.
    pub main_term: f64,
    /// `ℓ ‖noise‖_HS (‖X‖^{ℓ−1}_HS + ‖Y+Z‖^{ℓ−1}_HS)`.
    pub slack: f64,
    /// `ℓ 2^ℓ ‖noise‖_HS N^{ℓ−1}`, the coarse form valid when `‖X‖_HS ≤ N`.
    pub coarse_slack: f64,
    /// `difference / (main_term + slack)`.
    pub ratio: f64,
}

/// Checks `|Tr X^ℓ − Tr Y^ℓ| ≤ (ε N p)^ℓ + slack` for `X = Y + Z + noise`,
/// requiring `Im Z ⊆ ker Y` and `‖Z‖_{S_ℓ} ≤ ε N p`.
pub fn cycle_fluctuation_check(y: &SymMatrix, z: &SymMatrix, noise: &SymMatrix, ell: u32, eps: f64, p: f64) -> Result<CycleFluctuationRow> {
    if ell < 3 {
        return Err(Error::Domain(format!("cycle length {ell} < 3")));
    }
    let n = y.n() as f64;
    let level = eps * n * p;
    let zs = z.schatten(ell as f64)?;
    if zs > level * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!("‖Z‖_S{ell} = {zs} exceeds ε N p = {level}")));
    }
    orthogonal_residual_trace_identity(y, z, &[], &[])?;
    let yz = y.add(z)?;
    let x = yz.add(noise)?;
    let tx = x.spectrum()?.trace_power(ell);
    let ty = y.spectrum()?.trace_power(ell);
    let difference = (tx - ty).abs();
    let e = noise.hs_norm();
    let l = ell as f64;
    let slack = l * e * (libm::pow(x.hs_norm(), l - 1.0) + libm::pow(yz.hs_norm(), l - 1.0));
    let coarse_slack = l * libm::pow(2.0, l) * e * libm::pow(n, l - 1.0);
    let main_term = libm::pow(level, l);
    let bound = main_term + slack;
    Ok(CycleFluctuationRow {
        ell,
        difference,
        main_term,
        slack,
        coarse_slack,
        ratio: if bound > 0.0 { difference / bound } else if difference == 0.0 { 0.0 } else { f64::INFINITY },
    })
}

/// Random `(Y, Z, noise)`: `Y` of rank `R` with `‖Y‖_HS ≤ N/2`, `Z = Π M Π`
/// scaled to `‖Z‖_{S_ℓ} = ε N p · U`, and noise of Hilbert–Schmidt norm `noise_hs`.
pub fn random_cover_configuration(n: usize, r: usize, ell: u32, eps: f64, p: f64, noise_hs: f64, seed: u64) -> Result<(SymMatrix, SymMatrix, SymMatrix)> {
    let y = mat_assemble(&random_point(n, r, n as f64 / 2.0, seed)?)?;
    let mut g = rng::stream(seed, rng::STRUCTURE_BIT | 4);
    let m = SymMatrix::random_gaussian(n, &mut g);
    let z = compress_to_kernel(&y, &m)?;
    let zs = z.schatten(ell as f64)?;
    let z = if zs > 0.0 { z.scaled(eps * n as f64 * p * rng::unit(&mut g) / zs) } else { z };
    let w = SymMatrix::random_gaussian(n, &mut g);
    let wn = w.hs_norm();
    let noise = if wn > 0.0 { w.scaled(noise_hs / wn) } else { w };
    Ok((y, z, noise))
}

/// Test-scale version of the containment `X ∈ B_{y(X)}(ε)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim1Report {
    /// `‖X_>‖_{S_ℓ} ≤ ε N p`, the hypothesis.
    pub hypothesis: bool,
    /// `‖Y Z‖_HS / (‖Y‖_HS ‖Z‖_HS)`.
    pub subspace_residual: f64,
    pub z_schatten: f64,
    pub z_bound: f64,
    /// `‖X − Y − Z‖_HS`.
    pub residual_hs: f64,
    /// `√R ‖λ − μ‖ + ‖μ‖ √2 ‖u − v‖ + 3 ‖u − v‖_HS ‖X_>‖_op`.
    pub residual_bound: f64,
    pub holds: bool,
}

/// `X_> = X − Mat(top R)`, built from the same eigenpairs as `X_≤` so ties in
/// modulus cannot mix them up. Callers choosing `ε` from `‖X_>‖_{S_ℓ}` should
/// use this exact matrix.
pub fn claim1_residual(x: &SymMatrix, top: &SpectralPoint) -> Result<SymMatrix> {
    x.sub(&mat_assemble(top)?)
}

/// Builds `y = (μ, v)` within `δ` of the top-`R` spectral data of `X`, sets
/// `Z = Π X_> Π` with `Π` the projection onto `ker Mat(y)`, and checks the
/// three membership conditions.
pub fn claim1_containment(x: &SymMatrix, r: usize, ell: u32, eps: f64, p: f64, delta: f64, seed: u64) -> Result<Claim1Report> {
    let n = x.n();
    let level = eps * n as f64 * p;
    let xp = SpectralPoint::top(x, r)?;
    let residual = claim1_residual(x, &xp)?;
    let residual_op = residual.op_norm()?;
    let hypothesis = residual.schatten(ell as f64)? <= level;
    let mut g = rng::stream(seed, rng::STRUCTURE_BIT | 5);
    let mu: Vec<f64> = xp.lambdas.iter().map(|l| l + delta / libm::sqrt(r as f64) * (2.0 * rng::unit(&mut g) - 1.0)).collect();
    let du = DMatrix::from_fn(n, r, |_, _| rng::normal(&mut g));
    let du = &du * (delta / du.norm().max(f64::MIN_POSITIVE));
    let v = orthonormalize(&(&xp.frame + du))?;
    let yp = SpectralPoint {
        lambdas: mu,
        frame: v.clone(),
    };
    let y = mat_assemble(&yp)?;
    // Π = I − V Vᵀ is the projection onto ker Mat(y) when every μ_j ≠ 0
    let pi = DMatrix::identity(n, n) - &v * v.transpose();
    let xr = residual.to_dmatrix();
    let zd = &pi * &xr * &pi;
    let z = SymMatrix::from_fn_general(n, |i, j| 0.5 * (zd[(i, j)] + zd[(j, i)]))?;
    let yd = y.to_dmatrix();
    let denom = (hs_dense(&yd) * hs_dense(&zd)).max(f64::MIN_POSITIVE);
    let subspace_residual = if hs_dense(&zd) == 0.0 { 0.0 } else { hs_dense(&(&yd * &zd)) / denom };
    let z_schatten = z.schatten(ell as f64)?;
    let residual_hs = hs_dense(&(x.to_dmatrix() - &yd - &zd));
    let chain = net_chain(&xp, &yp)?;
    let du_hs = hs_dense(&(&xp.frame - &v));
    let residual_bound = chain.rhs + 3.0 * du_hs * residual_op;
    let holds = !hypothesis
        || (subspace_residual <= 1e-8 && z_schatten <= level * (1.0 + 1e-12) && residual_hs <= residual_bound * (1.0 + 1e-9) + 1e-12);
    Ok(Claim1Report {
        hypothesis,
        subspace_residual,
        z_schatten,
        z_bound: level,
        residual_hs,
        residual_bound,
        holds,
    })
}

/// `{X ∈ X_N : ‖X − center‖_op ≤ radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpBall {
    pub center: SymMatrix,
    pub radius: f64,
}

impl OpBall {
    pub fn new(center: SymMatrix, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        if center.upper().any(|(_, _, x)| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidMatrix("ball center must have entries in [0, 1]".into()));
        }
        Ok(Self { center, radius })
    }

    /// A random point of the ball with entries in `[0, 1]`: a step along a
    /// random zero-diagonal direction, shortened to stay in both sets.
    pub fn sample(&self, seed: u64) -> Result<SymMatrix> {
        let n = self.center.n();
        let mut g = rng::stream(seed, rng::STRUCTURE_BIT | 6);
        let d = SymMatrix::random_gaussian(n, &mut g);
        let d = SymMatrix::from_upper_fn(n, MatrixKind::General, |i, j| d.get(i, j))?;
        let op = d.op_norm()?;
        if op == 0.0 {
            return Ok(self.center.clone());
        }
        let d = d.scaled(1.0 / op);
        let mut s_max = self.radius;
        for (i, j, dij) in d.upper() {
            let c = self.center.get(i, j);
            if dij > 0.0 {
                s_max = s_max.min((1.0 - c) / dij);
            } else if dij < 0.0 {
                s_max = s_max.min(c / -dij);
            }
        }
        let s = s_max * rng::unit(&mut g);
        SymMatrix::from_upper_fn(n, MatrixKind::Weights, |i, j| (self.center.get(i, j) + s * d.get(i, j)).clamp(0.0, 1.0))
    }

    /// Entrywise upper envelope `min(1, c_ij + radius)`; every entry of a
    /// ball point is within the operator-norm radius of the center.
    pub fn envelope(&self) -> Result<SymMatrix> {
        let r = self.radius;
        SymMatrix::from_upper_fn(self.center.n(), MatrixKind::Weights, |i, j| (self.center.get(i, j) + r).min(1.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomFluctuationReport {
    pub pattern: String,
    pub trials: usize,
    /// `ε_0 = 2 radius / (N p^{Δ⋆})`.
    pub eps0: f64,
    /// Certified `sup_B hom_{H_(e)}` per edge: `min(hom_{H_(e)}(envelope), N^{v−2})`.
    pub max_certified: Vec<f64>,
    /// Largest value of `hom_{H_(e)}` seen at sampled points, per edge.
    pub max_sampled: Vec<f64>,
    /// Largest `|Δhom| / (N ‖X − Y‖_op Σ_e Max_e)`.
    pub max_lemma_ratio: f64,
    pub violations: usize,
    /// Largest `|Δhom| / (ε_0 K N^n p^m)`; descriptive.
    pub max_prop_ratio: f64,
}

/// Random pairs in `ball ∩ X_N` against `|hom_H(X) − hom_H(Y)| ≤ N ‖X − Y‖_op Σ_e Max(H_(e))`.
pub fn hom_fluctuation_check(h: &PatternGraph, ball: &OpBall, p: f64, k: f64, trials: usize, seed: u64) -> Result<HomFluctuationReport> {
    let n = ball.center.n();
    let nf = n as f64;
    let profile = h.degree_profile()?;
    let eps0 = 2.0 * ball.radius / (nf * libm::pow(p, profile.delta_star as f64));
    let subs: Vec<PatternGraph> = h
        .edges()
        .iter()
        .map(|&e| h.remove_edge_closure(&[e]))
        .collect::<Result<_>>()?;
    let env = ball.envelope()?;
    let max_certified: Vec<f64> = subs
        .iter()
        .map(|f| Ok(homcount::hom(f, &env)?.value.min(libm::pow(nf, f.n_vertices() as f64))))
        .collect::<Result<_>>()?;
    let sum_max: f64 = max_certified.iter().sum();
    let mut max_sampled = alloc::vec![0.0f64; subs.len()];
    let scale = eps0 * k * libm::pow(nf, h.n_vertices() as f64) * libm::pow(p, h.n_edges() as f64);
    let (mut max_lemma_ratio, mut max_prop_ratio, mut violations) = (0.0f64, 0.0f64, 0usize);
    for t in 0..trials {
        let x = ball.sample(rng::derive_seed(seed, 2 * t as u64))?;
        let y = ball.sample(rng::derive_seed(seed, 2 * t as u64 + 1))?;
        for pt in [&x, &y] {
            for (m, f) in max_sampled.iter_mut().zip(&subs) {
                *m = m.max(homcount::hom(f, pt)?.value);
            }
        }
        let diff = (homcount::hom(h, &x)?.value - homcount::hom(h, &y)?.value).abs();
        let bound = nf * x.sub(&y)?.op_norm()? * sum_max;
        let ratio = if bound > 0.0 { diff / bound } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
        if diff > bound * (1.0 + 1e-9) + 1e-9 {
            violations += 1;
        }
        max_lemma_ratio = max_lemma_ratio.max(ratio);
        if scale > 0.0 {
            max_prop_ratio = max_prop_ratio.max(diff / scale);
        }
    }
    Ok(HomFluctuationReport {
        pattern: h.label(),
        trials,
        eps0,
        max_certified,
        max_sampled,
        max_lemma_ratio,
        violations,
        max_prop_ratio,
    })
}

/// For `H = K_2` the fluctuation bound reads `|1ᵀ(X − Y)1| ≤ N ‖X − Y‖_op`;
/// `X − Y = c J_N` attains it. Returns the ratio of the two sides.
pub fn k2_equality_ratio(n: usize, c: f64) -> Result<f64> {
    let k2 = PatternGraph::complete(2)?;
    let y = SymMatrix::constant(n, 0.25)?;
    let x = SymMatrix::constant(n, 0.25 + c)?;
    let diff = (homcount::hom(&k2, &x)?.value - homcount::hom(&k2, &y)?.value).abs();
    let bound = n as f64 * x.sub(&y)?.op_norm()?;
    Ok(diff / bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assemble_examples() {
        let n = 6;
        let u = DMatrix::from_element(n, 1, 1.0 / libm::sqrt(n as f64));
        let m = mat_assemble(&SpectralPoint::new(alloc::vec![(n - 1) as f64], u).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((m.get(i, j) - (n - 1) as f64 / n as f64).abs() < 1e-14);
            }
        }
        let p = random_point(10, 3, 5.0, 1).unwrap();
        let zero = SpectralPoint::new(alloc::vec![0.0; 3], p.frame().clone()).unwrap();
        assert_eq!(mat_assemble(&zero).unwrap().hs_norm(), 0.0);
    }

    #[test]
    fn assemble_round_trips_rank_split() {
        let mut g = rng::stream(3, 0);
        let x = SymMatrix::random_weights(15, &mut g);
        for r in [1, 3, 7] {
            let split = matrices::rank_split(&x, r).unwrap();
            let pt = SpectralPoint::top(&x, r).unwrap();
            let back = mat_assemble(&pt).unwrap();
            assert!(back.sub(&split.low).unwrap().hs_norm() < 1e-8);
        }
    }

    #[test]
    fn frames_are_checked() {
        let bad = DMatrix::from_element(4, 2, 0.5);
        assert!(matches!(SpectralPoint::new(alloc::vec![1.0, 0.5], bad), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn net_chain_examples() {
        let x = random_point(30, 5, 30.0, 7).unwrap();
        let zero = net_chain(&x, &x).unwrap();
        assert!(zero.lhs < 1e-12);
        let rep = net_perturbation_bound(&x, 1e-6, 1e-6, 50, 2).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.min_slack >= 0.0);
        assert!(rep.max_rank_one_error < 1e-10);
    }

    #[test]
    fn trace_identity_on_kernel_compression() {
        let y = mat_assemble(&random_point(20, 3, 10.0, 5).unwrap()).unwrap();
        let mut g = rng::stream(9, 0);
        let m = SymMatrix::random_gaussian(20, &mut g);
        let z = compress_to_kernel(&y, &m).unwrap();
        let rep = orthogonal_residual_trace_identity(&y, &z, &[3, 4, 5, 6, 7, 8], &[2.5, 3.0]).unwrap();
        assert!(rep.holds, "{rep:?}");
        let zero = SymMatrix::zeros(20, MatrixKind::General);
        assert!(orthogonal_residual_trace_identity(&y, &zero, &[3], &[2.5]).unwrap().holds);
        assert!(matches!(
            orthogonal_residual_trace_identity(&y, &m, &[3], &[]),
            Err(Error::SubspaceViolation(_))
        ));
    }

    #[test]
    fn cycle_fluctuation_examples() {
        let (y, z, noise) = random_cover_configuration(30, 4, 4, 0.3, 0.2, 1e-6, 1).unwrap();
        let row = cycle_fluctuation_check(&y, &z, &noise, 4, 0.3, 0.2).unwrap();
        assert!(row.ratio <= 1.0 + 1e-6, "{row:?}");
        let zero = SymMatrix::zeros(30, MatrixKind::General);
        assert_eq!(cycle_fluctuation_check(&y, &zero, &zero, 3, 0.3, 0.2).unwrap().difference, 0.0);
        // a single eigenvalue of size ε N p on ker Y attains the main term
        let pi = kernel_projection(&y).unwrap();
        let w = pi.column((0..30).max_by(|&a, &b| pi[(a, a)].total_cmp(&pi[(b, b)])).unwrap()).clone_owned();
        let w = &w / w.norm();
        let level = 0.3 * 30.0 * 0.2;
        let zz = SymMatrix::from_fn_general(30, |i, j| level * w[i] * w[j]).unwrap();
        let row = cycle_fluctuation_check(&y, &zz, &zero, 4, 0.3, 0.2).unwrap();
        assert!((row.ratio - 1.0).abs() < 1e-8, "{row:?}");
    }

    #[test]
    fn claim1_holds_for_low_rank_plus_small_residual() {
        let mut g = rng::stream(12, 0);
        let x = SymMatrix::random_adjacency(25, 0.3, &mut g);
        let rep = claim1_containment(&x, 4, 4, 10.0, 0.3, 1e-6, 3).unwrap();
        assert!(rep.hypothesis);
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn hom_fluctuation_lemma() {
        let (n, p) = (25, 0.3);
        let c3 = PatternGraph::cycle(3).unwrap();
        let mut g = rng::stream(4, 0);
        let center = SymMatrix::from_upper_fn(n, MatrixKind::Weights, |_, _| 0.2 + 0.6 * rng::unit(&mut g)).unwrap();
        let radius = 0.5 * n as f64 * p * p * p / 2.0;
        let ball = OpBall::new(center, radius).unwrap();
        let rep = hom_fluctuation_check(&c3, &ball, p, 1.0, 100, 8).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_lemma_ratio <= 1.0);
        for (s, c) in rep.max_sampled.iter().zip(&rep.max_certified) {
            assert!(s <= c);
        }
    }

    #[test]
    fn k2_is_extremal() {
        for n in [3, 10, 40] {
            assert!((k2_equality_ratio(n, 0.3).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
