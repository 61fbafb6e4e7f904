//! Tail events: a functional of the graph, a direction and a threshold.

use alloc::format;
use alloc::string::String;

use crate::error::Result;
use crate::graphs::PatternGraph;
use crate::homcount;
use crate::matrices::SymMatrix;

/// The statistic whose tail is studied.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    /// `hom_H(X)`.
    Hom(PatternGraph),
    /// `‖X‖_{S_α}`; `f64::INFINITY` is the operator norm.
    Schatten(f64),
    /// `Σ_{i<j} x_ij`.
    EdgeCount,
}

impl Functional {
    pub fn eval(&self, x: &SymMatrix) -> Result<f64> {
        match self {
            Functional::Hom(h) => Ok(homcount::hom(h, x)?.value),
            Functional::Schatten(alpha) => x.schatten(*alpha),
            Functional::EdgeCount => Ok(x.upper_sum()),
        }
    }

    /// Typical size used to normalise thresholds: `N^{v(H)} p^{e(H)}` for
    /// homomorphism counts, `N − 1` for Schatten norms (thresholds are
    /// `q (N − 1)`) and `C(N,2) p` for the edge count.
    pub fn scale(&self, n: usize, p: f64) -> f64 {
        let nf = n as f64;
        match self {
            Functional::Hom(h) => libm::pow(nf, h.n_vertices() as f64) * libm::pow(p, h.n_edges() as f64),
            Functional::Schatten(_) => nf - 1.0,
            Functional::EdgeCount => nf * (nf - 1.0) / 2.0 * p,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Functional::Hom(h) => format!("hom[{}]", h.label()),
            Functional::Schatten(a) if a.is_infinite() => String::from("schatten[inf]"),
            Functional::Schatten(a) => format!("schatten[{a}]"),
            Functional::EdgeCount => String::from("edges"),
        }
    }
}

/// `≥` (upper tail) or `≤` (lower tail).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Direction {
    Upper,
    Lower,
}

impl Direction {
    /// Whether `value` lies in the tail. Boundary values within a relative
    /// `1e-9` count as inside, so rounding never shrinks the event.
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        let slack = 1e-9 * threshold.abs().max(1.0);
        match self {
            Direction::Upper => value >= threshold - slack,
            Direction::Lower => value <= threshold + slack,
        }
    }
}

/// The event `{F(A) ≥ threshold}` or `{F(A) ≤ threshold}` under `G(N, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailProblem {
    pub functional: Functional,
    pub n: usize,
    pub p: f64,
    pub direction: Direction,
    /// Absolute threshold on the functional.
    pub threshold: f64,
}

impl TailProblem {
    /// Threshold given relative to [`Functional::scale`].
    pub fn normalized(functional: Functional, n: usize, p: f64, direction: Direction, t: f64) -> Self {
        let threshold = t * functional.scale(n, p);
        Self {
            functional,
            n,
            p,
            direction,
            threshold,
        }
    }

    pub fn contains(&self, x: &SymMatrix) -> Result<bool> {
        Ok(self.direction.holds(self.functional.eval(x)?, self.threshold))
    }
}
