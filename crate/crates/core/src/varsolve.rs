//! Numerical solution of the tail variational problems
//!
//! `φ = inf { I_p(X) : X ∈ X_N, F(X) ≥ T }` and `ψ = inf { I_p(X) : F(X) ≤ T }`.
//!
//! The engine is mirror descent in logit coordinates (the mirror map of the
//! bit entropy, which is the geometry of `I_p`) on an augmented Lagrangian,
//! followed by a feasibility polish. Every returned point is feasible, so
//! the objective is an upper bound on the infimum; nothing certifies global
//! optimality for nonconvex constraints.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::{Known, PatternGraph};
use crate::homcount;
use crate::matrices::{MatrixKind, Spectrum, SymMatrix};
use crate::problem::{Direction, Functional};
use crate::rates::{self, ip, CandidateMatrix, RateParams};
use crate::rng;

/// The polish aims this far inside the constraint so that rounding
/// differences between evaluation paths cannot flip feasibility.
const POLISH_MARGIN: f64 = 1e-11;

/// Largest `N` accepted by the dense solver.
pub const MAX_SOLVE_N: usize = 400;

/// A tail variational problem; the threshold is `t · F.scale(N, p)`.
#[derive(Clone, Debug)]
pub struct VarProblem {
    pub functional: Functional,
    pub params: RateParams,
}

impl VarProblem {
    pub fn new(functional: Functional, params: RateParams) -> Self {
        Self { functional, params }
    }

    pub fn scale(&self) -> f64 {
        self.functional.scale(self.params.n, self.params.p)
    }

    pub fn threshold(&self) -> f64 {
        self.params.t * self.scale()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Iteration budget per start, shared across multiplier rounds.
    pub max_iters: usize,
    pub rounds: usize,
    pub rho_factor: f64,
    pub seed: u64,
    /// Entries are kept in `[clip, 1 − clip]` while iterating.
    pub clip: f64,
    /// Entries this close to 0 or 1 are snapped afterwards.
    pub snap: f64,
    /// Relative amplitude of the `p J + noise` start.
    pub noise: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            rounds: 10,
            rho_factor: 10.0,
            seed: 0,
            clip: 1e-9,
            snap: 1e-7,
            noise: 0.5,
        }
    }
}

/// Outcome of one start.
#[derive(Clone, Debug)]
pub struct StartOutcome {
    pub label: String,
    pub x: DMatrix<f64>,
    pub objective: f64,
    pub constraint: f64,
    pub feasible: bool,
    pub iterations: usize,
}

/// Best feasible point found.
#[derive(Clone, Debug)]
pub struct VarSolution {
    pub x: SymMatrix,
    /// `I_p(x)`.
    pub objective: f64,
    /// `max(0, −c(x))` for the normalised constraint `c ≥ 0`.
    pub feasibility_gap: f64,
    pub kkt_residual: f64,
    pub starts_used: usize,
    /// Cheapest feasible warm start (`inf` if none).
    pub best_candidate_cost: f64,
    /// Label of the start or candidate that produced `x`.
    pub source: String,
    /// Certified lower bound when the problem is a certified convex lower tail.
    pub certified_lower: Option<f64>,
    pub starts: Vec<StartOutcome>,
}

/// Warm starts and feasible candidates for a problem.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub problem: VarProblem,
    pub options: SolveOptions,
    pub candidates: Vec<CandidateMatrix>,
    pub starts: Vec<(String, DMatrix<f64>)>,
}

fn dense_of(x: &SymMatrix) -> DMatrix<f64> {
    x.to_dmatrix()
}

/// `F(X)` and its gradient with respect to the independent entries `x_ij`, `i < j`
/// (stored symmetrically, zero diagonal).
fn eval_with_grad(f: &Functional, x: &DMatrix<f64>) -> Result<(f64, DMatrix<f64>)> {
    match f {
        Functional::Hom(h) => homcount::hom_and_gradient_dense(h, x),
        Functional::EdgeCount => {
            let n = x.nrows();
            let mut g = DMatrix::from_element(n, n, 1.0);
            g.fill_diagonal(0.0);
            Ok((upper_sum(x), g))
        }
        Functional::Schatten(alpha) => {
            let s = Spectrum::from_dense_symmetric(x.clone());
            let value = s.schatten(*alpha)?;
            let n = x.nrows();
            let u = s.vectors();
            let weights: Vec<f64> = if value == 0.0 {
                vec![0.0; n]
            } else if alpha.is_infinite() {
                let mut w = vec![0.0; n];
                w[0] = s.values()[0].signum();
                w
            } else {
                s.values()
                    .iter()
                    .map(|&l| l.signum() * libm::pow(l.abs() / value, alpha - 1.0))
                    .collect()
            };
            let scaled = DMatrix::from_fn(n, n, |i, k| u[(i, k)] * weights[k]);
            let mut g = scaled * u.transpose() * 2.0;
            g.fill_diagonal(0.0);
            Ok((value, g))
        }
    }
}

fn eval(f: &Functional, x: &DMatrix<f64>) -> Result<f64> {
    match f {
        Functional::Hom(h) => homcount::hom_dense(h, x),
        Functional::EdgeCount => Ok(upper_sum(x)),
        Functional::Schatten(alpha) => Spectrum::from_dense_symmetric(x.clone()).schatten(*alpha),
    }
}

fn upper_sum(x: &DMatrix<f64>) -> f64 {
    let n = x.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..j {
            s += x[(i, j)];
        }
    }
    s
}

fn ip_dense(p: f64, x: &DMatrix<f64>) -> f64 {
    let n = x.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..j {
            s += ip(p, x[(i, j)]);
        }
    }
    s
}

fn logit(x: f64) -> f64 {
    libm::log(x / (1.0 - x))
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + libm::exp(-t))
    } else {
        let e = libm::exp(t);
        e / (1.0 + e)
    }
}

struct Engine<'a> {
    problem: &'a VarProblem,
    n: usize,
    p: f64,
    sign: f64,
    threshold: f64,
    scale: f64,
    clip: f64,
}

struct Point {
    theta: DMatrix<f64>,
    x: DMatrix<f64>,
    f: f64,
    c: f64,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a VarProblem, clip: f64) -> Self {
        let sign = match problem.params.direction {
            Direction::Upper => 1.0,
            Direction::Lower => -1.0,
        };
        Self {
            problem,
            n: problem.params.n,
            p: problem.params.p,
            sign,
            threshold: problem.threshold(),
            scale: problem.scale().max(f64::MIN_POSITIVE),
            clip,
        }
    }

    /// Normalised constraint `c ≥ 0`.
    fn constraint(&self, value: f64) -> f64 {
        self.sign * (value - self.threshold) / self.scale
    }

    fn point_from_theta(&self, theta: DMatrix<f64>) -> Result<Point> {
        let lo = logit(self.clip);
        let theta = theta.map(|t| t.clamp(lo, -lo));
        let mut x = theta.map(sigmoid);
        x.fill_diagonal(0.0);
        let f = ip_dense(self.p, &x);
        let c = self.constraint(eval(&self.problem.functional, &x)?);
        Ok(Point { theta, x, f, c })
    }

    fn point_from_x(&self, x: &DMatrix<f64>) -> Result<Point> {
        let theta = x.map(|v| logit(v.clamp(self.clip, 1.0 - self.clip)));
        self.point_from_theta(theta)
    }

    /// Constraint evaluated by the exact (non-dense) evaluator.
    fn canonical_constraint(&self, x: &DMatrix<f64>) -> Result<f64> {
        let m = SymMatrix::from_upper_fn(self.n, MatrixKind::Weights, |i, j| x[(i, j)])?;
        Ok(self.constraint(self.problem.functional.eval(&m)?))
    }

    fn constraint_grad(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let (_, g) = eval_with_grad(&self.problem.functional, x)?;
        Ok(g * (self.sign / self.scale))
    }

    fn objective_grad(&self, pt: &Point) -> DMatrix<f64> {
        let lp = logit(self.p);
        let mut g = pt.theta.map(|t| t - lp);
        g.fill_diagonal(0.0);
        g
    }

    /// Powell–Hestenes–Rockafellar term for `c ≥ 0`.
    fn penalty(c: f64, lambda: f64, rho: f64) -> (f64, f64) {
        if c < lambda / rho {
            (-lambda * c + 0.5 * rho * c * c, -lambda + rho * c)
        } else {
            (-lambda * lambda / (2.0 * rho), 0.0)
        }
    }

    fn lagrangian(pt: &Point, lambda: f64, rho: f64) -> f64 {
        pt.f + Self::penalty(pt.c, lambda, rho).0
    }

    fn run(&self, start: &DMatrix<f64>, opts: &SolveOptions, rho0: f64) -> Result<(Point, usize)> {
        let d = (self.n * (self.n - 1) / 2).max(1) as f64;
        let mut pt = self.point_from_x(start)?;
        // a zero multiplier would send the first full step straight to p J
        let mut lambda = self.kkt(&pt.x)?.0;
        let mut rho = rho0;
        let mut iters = 0usize;
        let per_round = (opts.max_iters / opts.rounds.max(1)).max(1);
        for _ in 0..opts.rounds {
            let mut eta = 1.0f64;
            let mut stalls = 0;
            for _ in 0..per_round {
                iters += 1;
                let (_, dpen) = Self::penalty(pt.c, lambda, rho);
                let mut grad = self.objective_grad(&pt);
                if dpen != 0.0 {
                    grad += self.constraint_grad(&pt.x)? * dpen;
                }
                let l0 = Self::lagrangian(&pt, lambda, rho);
                eta = (2.0 * eta).min(1.0);
                let mut accepted = None;
                for _ in 0..60 {
                    let trial = self.point_from_theta(&pt.theta - &grad * eta)?;
                    let lin: f64 = grad.zip_map(&(&trial.x - &pt.x), |g, dx| g * dx).sum() * 0.5;
                    let l1 = Self::lagrangian(&trial, lambda, rho);
                    if l1 <= l0 + 1e-4 * lin {
                        accepted = Some((trial, l1));
                        break;
                    }
                    eta *= 0.5;
                }
                let Some((next, l1)) = accepted else { break };
                let moved: f64 = (&next.x - &pt.x).abs().sum() * 0.5;
                pt = next;
                if (l0 - l1).abs() <= 1e-13 * (1.0 + l0.abs()) {
                    stalls += 1;
                } else {
                    stalls = 0;
                }
                if (eta >= 1.0 && moved <= 1e-7 * d) || stalls >= 5 {
                    break;
                }
            }
            let new_lambda = (lambda - rho * pt.c).max(0.0);
            let settled = (new_lambda - lambda).abs() <= 1e-10 * lambda.max(1.0);
            lambda = new_lambda;
            if pt.c >= 0.0 && settled {
                break;
            }
            rho *= opts.rho_factor;
        }
        Ok((pt, iters))
    }

    /// Moves along the constraint gradient (in logit coordinates) until `c ≥ 0`.
    fn polish(&self, pt: Point) -> Result<Point> {
        if pt.c >= POLISH_MARGIN {
            return Ok(pt);
        }
        let g = self.constraint_grad(&pt.x)?;
        let gmax = g.amax();
        if gmax == 0.0 {
            return Ok(pt);
        }
        let dir = g / gmax;
        let mut hi = 1e-6;
        let mut found = None;
        for _ in 0..80 {
            let trial = self.point_from_theta(&pt.theta + &dir * hi)?;
            if trial.c >= POLISH_MARGIN {
                found = Some(trial);
                break;
            }
            hi *= 2.0;
        }
        let Some(mut best) = found else { return Ok(pt) };
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let trial = self.point_from_theta(&pt.theta + &dir * mid)?;
            if trial.c >= POLISH_MARGIN {
                hi = mid;
                best = trial;
            } else {
                lo = mid;
            }
        }
        Ok(best)
    }

    fn snap(&self, pt: Point, tol: f64) -> Result<Point> {
        let snapped = pt.x.map(|v| {
            if v < tol {
                0.0
            } else if v > 1.0 - tol {
                1.0
            } else {
                v
            }
        });
        let c = self.constraint(eval(&self.problem.functional, &snapped)?);
        if c >= 0.0 || c >= pt.c {
            let f = ip_dense(self.p, &snapped);
            return Ok(Point {
                theta: pt.theta,
                x: snapped,
                f,
                c,
            });
        }
        Ok(pt)
    }

    /// Least-squares multiplier `μ ≥ 0` for `∇I_p = μ ∇c` in the metric `x(1 − x)`
    /// and the norm of the remaining residual, divided by the number of free entries.
    fn kkt(&self, x: &DMatrix<f64>) -> Result<(f64, f64)> {
        let n = self.n;
        let lp = logit(self.p);
        let gc = self.constraint_grad(x)?;
        let (mut fc, mut cc) = (0.0, 0.0);
        let mut entries = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for j in 0..n {
            for i in 0..j {
                let v = x[(i, j)].clamp(self.clip, 1.0 - self.clip);
                let w = v * (1.0 - v);
                let gf = logit(v) - lp;
                fc += w * gf * gc[(i, j)];
                cc += w * gc[(i, j)] * gc[(i, j)];
                entries.push((w, gf, gc[(i, j)]));
            }
        }
        let mu = if cc > 0.0 { (fc / cc).max(0.0) } else { 0.0 };
        let r: f64 = entries.iter().map(|&(w, gf, g)| w * (gf - mu * g) * (gf - mu * g)).sum();
        Ok((mu, libm::sqrt(r) / (entries.len().max(1) as f64)))
    }
}

fn noise_start(n: usize, p: f64, amp: f64, seed: u64) -> DMatrix<f64> {
    let mut r = rng::stream(seed, rng::STRUCTURE_BIT);
    let m = SymMatrix::from_upper_fn(n, MatrixKind::Weights, |_, _| {
        (p * (1.0 + amp * (2.0 * rng::unit(&mut r) - 1.0))).clamp(0.0, 1.0)
    })
    .expect("clamped entries lie in [0, 1]");
    dense_of(&m)
}

fn schatten_uniform(problem: &VarProblem) -> Result<Option<CandidateMatrix>> {
    let Functional::Schatten(alpha) = problem.functional else {
        return Ok(None);
    };
    let n = problem.params.n;
    let jn = SymMatrix::complete(n).schatten(alpha)?;
    let mut level = problem.threshold() / jn;
    for _ in 0..64 {
        if !(0.0..=1.0).contains(&level) {
            return Ok(None);
        }
        let m = SymMatrix::constant(n, level)?;
        let value = m.schatten(alpha)?;
        let inside = match problem.params.direction {
            Direction::Upper => value >= problem.threshold(),
            Direction::Lower => value <= problem.threshold(),
        };
        if inside {
            return Ok(Some(CandidateMatrix {
                kind: rates::CandidateKind::Uniform,
                ip_cost: rates::ip_matrix(problem.params.p, &m)?,
                matrix: m,
                hom_values: Vec::new(),
                size: level,
                constraint_value: value,
                threshold: problem.threshold(),
                feasible: true,
            }));
        }
        level *= match problem.params.direction {
            Direction::Upper => 1.0 + 1e-13,
            Direction::Lower => 1.0 - 1e-13,
        };
    }
    Ok(None)
}

fn edge_uniform(problem: &VarProblem) -> Result<Option<CandidateMatrix>> {
    let n = problem.params.n;
    let d = (n * (n - 1) / 2) as f64;
    let level = problem.threshold() / d;
    if !(0.0..=1.0).contains(&level) {
        return Ok(None);
    }
    let m = SymMatrix::constant(n, level)?;
    let value = m.upper_sum();
    let feasible = match problem.params.direction {
        Direction::Upper => value >= problem.threshold(),
        Direction::Lower => value <= problem.threshold(),
    };
    Ok(feasible.then(|| CandidateMatrix {
        kind: rates::CandidateKind::Uniform,
        ip_cost: rates::ip_matrix(problem.params.p, &m).unwrap_or(f64::INFINITY),
        matrix: m,
        hom_values: Vec::new(),
        size: level,
        constraint_value: value,
        threshold: problem.threshold(),
        feasible,
    }))
}

/// Builds candidates and starts: clique, hub and uniform for homomorphism
/// upper tails, uniform otherwise, plus `p J + noise`.
pub fn prepare(problem: &VarProblem, options: &SolveOptions) -> Result<Prepared> {
    let n = problem.params.n;
    if n < 2 {
        return Err(Error::Domain(format!("N = {n} has no free entries")));
    }
    if n > MAX_SOLVE_N {
        return Err(Error::TooLarge {
            what: "N for the dense solver",
            got: n,
            max: MAX_SOLVE_N,
        });
    }
    let mut candidates = Vec::new();
    match &problem.functional {
        Functional::Hom(h) => {
            let hp = RateParams {
                t: problem.params.t,
                ..problem.params
            };
            if problem.params.direction == Direction::Upper {
                candidates.extend(rates::min_feasible_clique(&hp, h)?);
                candidates.extend(rates::min_feasible_hub(&hp, h)?);
            }
            candidates.extend(rates::uniform_on_boundary(&hp, h)?);
        }
        Functional::Schatten(_) => candidates.extend(schatten_uniform(problem)?),
        Functional::EdgeCount => candidates.extend(edge_uniform(problem)?),
    }
    let mut starts: Vec<(String, DMatrix<f64>)> = candidates
        .iter()
        .map(|c| (String::from(c.kind.label()), dense_of(&c.matrix)))
        .collect();
    starts.push((
        String::from("noise"),
        noise_start(n, problem.params.p, options.noise, rng::derive_seed(options.seed, 0)),
    ));
    Ok(Prepared {
        problem: problem.clone(),
        options: options.clone(),
        candidates,
        starts,
    })
}

impl Prepared {
    fn rho0(&self) -> f64 {
        let best = self
            .candidates
            .iter()
            .filter(|c| c.feasible)
            .map(|c| c.ip_cost)
            .fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            best.max(1.0)
        } else {
            let n = self.problem.params.n as f64;
            (n * (n - 1.0) / 2.0).max(1.0)
        }
    }

    /// Runs start `index`; independent of every other start.
    pub fn run_start(&self, index: usize) -> Result<StartOutcome> {
        let engine = Engine::new(&self.problem, self.options.clip);
        let (label, start) = &self.starts[index];
        let (pt, iterations) = engine.run(start, &self.options, self.rho0())?;
        let pt = engine.polish(pt)?;
        let pt = engine.snap(pt, self.options.snap)?;
        let constraint = engine.canonical_constraint(&pt.x)?;
        Ok(StartOutcome {
            label: label.clone(),
            objective: pt.f,
            constraint,
            feasible: constraint >= 0.0,
            x: pt.x,
            iterations,
        })
    }

    /// Picks the cheapest feasible point among the outcomes and the candidates.
    pub fn merge(&self, outcomes: Vec<StartOutcome>) -> Result<VarSolution> {
        let engine = Engine::new(&self.problem, self.options.clip);
        // re-checked with the evaluation used for the gap, which may round
        // differently from the candidate builder right at the boundary
        let mut feasible = Vec::new();
        for c in self.candidates.iter().filter(|c| c.feasible) {
            if engine.constraint(self.problem.functional.eval(&c.matrix)?) >= 0.0 {
                feasible.push(c);
            }
        }
        let best_candidate = feasible.into_iter().min_by(|a, b| a.ip_cost.total_cmp(&b.ip_cost));
        let best_candidate_cost = best_candidate.map_or(f64::INFINITY, |c| c.ip_cost);
        let best_start = outcomes
            .iter()
            .filter(|o| o.feasible)
            .min_by(|a, b| a.objective.total_cmp(&b.objective));
        let (x, objective, source) = match (best_start, best_candidate) {
            (Some(o), Some(c)) if c.ip_cost <= o.objective => (c.matrix.clone(), c.ip_cost, String::from(c.kind.label())),
            (Some(o), _) => {
                let m = SymMatrix::from_upper_fn(self.problem.params.n, MatrixKind::Weights, |i, j| o.x[(i, j)])?;
                (m, o.objective, format!("start:{}", o.label))
            }
            (None, Some(c)) => (c.matrix.clone(), c.ip_cost, String::from(c.kind.label())),
            (None, None) => return Err(Error::Infeasible),
        };
        let dx = dense_of(&x);
        let c = engine.constraint(self.problem.functional.eval(&x)?);
        let kkt_residual = engine.kkt(&dx)?.1;
        Ok(VarSolution {
            x,
            objective,
            feasibility_gap: (-c).max(0.0),
            kkt_residual,
            starts_used: outcomes.len(),
            best_candidate_cost,
            source,
            certified_lower: None,
            starts: outcomes,
        })
    }

    pub fn run_all(&self) -> Result<VarSolution> {
        let outcomes = (0..self.starts.len()).map(|i| self.run_start(i)).collect::<Result<Vec<_>>>()?;
        self.merge(outcomes)
    }
}

/// Upper-tail problem `φ`.
pub fn solve_phi(problem: &VarProblem, options: &SolveOptions) -> Result<VarSolution> {
    if problem.params.direction != Direction::Upper {
        return Err(Error::Precondition("solve_phi needs an upper-tail problem".into()));
    }
    prepare(problem, options)?.run_all()
}

/// Lower-tail problem `ψ`. For certified convex cases the solution carries
/// the certified lower bound, and an objective below it is reported as an error.
pub fn solve_psi(problem: &VarProblem, options: &SolveOptions) -> Result<VarSolution> {
    if problem.params.direction != Direction::Lower {
        return Err(Error::Precondition("solve_psi needs a lower-tail problem".into()));
    }
    certify(problem, prepare(problem, options)?.run_all()?)
}

/// Attaches the certified lower bound of a lower-tail problem to a merged
/// solution and rejects objectives below it.
pub fn certify(problem: &VarProblem, mut sol: VarSolution) -> Result<VarSolution> {
    if problem.params.direction != Direction::Lower {
        return Ok(sol);
    }
    sol.certified_lower = certified_bound_for(problem)?;
    if let Some(lb) = sol.certified_lower {
        if sol.objective < lb - 1e-8 {
            return Err(Error::Precondition(format!(
                "solver objective {} below certified bound {lb}",
                sol.objective
            )));
        }
    }
    Ok(sol)
}

/// The convex certificate for a lower-tail problem, when one applies.
fn certified_bound_for(problem: &VarProblem) -> Result<Option<f64>> {
    let params = &problem.params;
    let n = params.n as f64;
    match &problem.functional {
        Functional::Schatten(alpha) => {
            let q = params.t;
            if q > params.p {
                return Ok(None);
            }
            certified_convex_psi(Certificate::Schatten(*alpha), params, q).map(Some)
        }
        Functional::Hom(h) => {
            if h.classify().seminorming != Known::Yes {
                return Ok(None);
            }
            // threshold t N^n p^m = q̂^m N^n with q̂ = q (1 − 1/N)
            let q_hat = params.p * libm::pow(params.t, 1.0 / h.n_edges() as f64);
            let q = q_hat / (1.0 - 1.0 / n);
            if q > params.p {
                return Ok(None);
            }
            certified_convex_psi(Certificate::Pattern(h), params, q).map(Some)
        }
        Functional::EdgeCount => {
            // Σ x ≤ t C(N,2) p: Jensen gives the bound at mean level t p
            let q = params.t * params.p;
            Ok(Some(n * (n - 1.0) / 2.0 * ip(params.p, q.min(params.p))))
        }
    }
}

/// What makes the lower-tail sub-level set convex.
#[derive(Clone, Copy, Debug)]
pub enum Certificate<'a> {
    Schatten(f64),
    Pattern(&'a PatternGraph),
}

/// `C(N,2) I_p(q)`, a lower bound on `ψ` for Schatten balls of radius
/// `q (N − 1)` and for seminorming counts below `q̂^m N^n`, `q̂ = q − q/N`.
pub fn certified_convex_psi(cert: Certificate<'_>, params: &RateParams, q: f64) -> Result<f64> {
    match cert {
        Certificate::Schatten(alpha) => {
            if alpha.is_nan() || alpha < 1.0 {
                return Err(Error::NotANorm(alpha));
            }
        }
        Certificate::Pattern(h) => {
            if h.classify().seminorming != Known::Yes {
                return Err(Error::NoConvexityCertificate(format!("{h} is not known to be seminorming")));
            }
        }
    }
    if !(0.0..=params.p).contains(&q) {
        return Err(Error::Domain(format!("q = {q} must lie in [0, p]")));
    }
    let n = params.n as f64;
    Ok(n * (n - 1.0) / 2.0 * rates::ip_scalar(params.p, q)?)
}

/// Two-sided estimate of `inf { I_p(x) : A x ≤ b, x ∈ [0,1]^d }`.
#[derive(Clone, Debug)]
pub struct LinearIpBound {
    /// Dual value: a valid lower bound.
    pub lower: f64,
    /// `I_p` at a feasible point: a valid upper bound.
    pub upper: f64,
    pub x: Vec<f64>,
    pub multipliers: Vec<f64>,
}

/// Minimises `Σ_i I_p(x_i)` over `{A x ≤ b} ∩ [0,1]^d` by coordinate ascent on
/// the dual `g(λ) = −λ·b − Σ_i log(1 − p + p e^{−(Aᵀλ)_i})`, `λ ≥ 0`.
/// `interior` must satisfy every constraint, strictly for a useful upper value; it is used to repair the primal point.
pub fn min_ip_linear(p: f64, a: &[Vec<f64>], b: &[f64], interior: &[f64]) -> Result<LinearIpBound> {
    let d = interior.len();
    if a.len() != b.len() || a.iter().any(|row| row.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.first().map_or(0, |r| r.len()),
        });
    }
    let slack_ok = a.iter().zip(b).all(|(row, &bk)| dot(row, interior) <= bk + 1e-12);
    if !slack_ok || interior.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Precondition("interior point violates the constraints".into()));
    }
    let xs = |s: f64| {
        // p e^{−s} / (1 − p + p e^{−s}), written stably
        sigmoid(logit(p) - s)
    };
    let mut lambda = vec![0.0; a.len()];
    let mut s = vec![0.0; d];
    for _sweep in 0..500 {
        let mut change = 0.0f64;
        for k in 0..a.len() {
            let row = &a[k];
            let deriv = |lk: f64, s: &[f64]| -> f64 {
                let delta = lk - lambda[k];
                -b[k] + (0..d).map(|i| row[i] * xs(s[i] + row[i] * delta)).sum::<f64>()
            };
            let new = if deriv(0.0, &s) <= 0.0 {
                0.0
            } else {
                let mut hi = lambda[k].max(1.0);
                let mut guard = 0;
                while deriv(hi, &s) > 0.0 && guard < 200 {
                    hi *= 2.0;
                    guard += 1;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if deriv(mid, &s) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                // the feasible end: constraint k holds at x(s) after the step
                hi
            };
            let delta = new - lambda[k];
            if delta != 0.0 {
                for i in 0..d {
                    s[i] += row[i] * delta;
                }
                change = change.max(delta.abs() / new.abs().max(1.0));
                lambda[k] = new;
            }
        }
        if change <= 1e-13 {
            break;
        }
    }
    let lower = -dot(&lambda, b)
        - s.iter()
            .map(|&si| {
                // log(1 − p + p e^{−s}) = log(1 − p) + softplus(logit p − s)
                libm::log(1.0 - p) + softplus(logit(p) - si)
            })
            .sum::<f64>();
    let x0: Vec<f64> = s.iter().map(|&si| xs(si)).collect();
    // smallest mixing weight τ making (1 − τ) x0 + τ interior feasible
    let mut tau = 0.0f64;
    for (row, &bk) in a.iter().zip(b) {
        let ax = dot(row, &x0);
        if ax > bk {
            let ai = dot(row, interior);
            tau = tau.max(((ax - bk) / (ax - ai)).min(1.0));
        }
    }
    let x: Vec<f64> = x0
        .iter()
        .zip(interior)
        .map(|(&u, &v)| ((1.0 - tau) * u + tau * v).clamp(0.0, 1.0))
        .collect();
    let upper = x.iter().map(|&v| ip(p, v)).sum();
    Ok(LinearIpBound {
        lower,
        upper,
        x,
        multipliers: lambda,
    })
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
