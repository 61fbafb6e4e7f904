use anyhow::{bail, Result};
use ldgraphs_core::problem::Functional;
use ldgraphs_core::rates::{self, RateParams};
use ldgraphs_core::varsolve::{self, SolveOptions, VarProblem, VarSolution};
use ldgraphs_core::Direction;

use super::{check_p, dir_label, direction, functional};
use crate::args::{Dir, SolveArgs, Stat};
use crate::output::{Report, Table};
use crate::{par, row};

pub fn resolve(mut a: SolveArgs) -> Result<SolveArgs> {
    let stat = *a.stat.get_or_insert(Stat::Hom);
    if stat == Stat::Hom {
        a.pattern.get_or_insert_with(|| "C3".into());
    }
    if stat == Stat::Schatten {
        a.alpha.get_or_insert(2.0);
    }
    a.n.get_or_insert(30);
    a.p.get_or_insert(0.1);
    match *a.dir.get_or_insert(Dir::Ge) {
        Dir::Ge => {
            a.u.get_or_insert(1.0);
            if a.t.is_some() {
                bail!("--t is for lower tails; use --u with --dir ge");
            }
        }
        Dir::Le => {
            a.t.get_or_insert(0.5);
            if a.u.is_some() {
                bail!("--u is for upper tails; use --t with --dir le");
            }
        }
    }
    let defaults = SolveOptions::default();
    a.max_iters.get_or_insert(defaults.max_iters);
    a.rounds.get_or_insert(defaults.rounds);
    check_p(a.p.unwrap())?;
    Ok(a)
}

/// Runs every start in parallel and merges in start order; lower tails get
/// their certified bound attached.
pub fn solve(problem: &VarProblem, options: &SolveOptions) -> ldgraphs_core::Result<VarSolution> {
    let prepared = varsolve::prepare(problem, options)?;
    let outcomes = par::map(prepared.starts.len(), |i| prepared.run_start(i))?;
    varsolve::certify(problem, prepared.merge(outcomes)?)
}

pub fn run(a: &SolveArgs, seed: u64) -> Result<Report> {
    let f = functional(a.stat.unwrap(), a.pattern.as_deref(), a.alpha)?;
    let (n, p) = (a.n.unwrap(), a.p.unwrap());
    let params = match direction(a.dir.unwrap()) {
        Direction::Upper => RateParams::upper(n, p, a.u.unwrap())?,
        Direction::Lower => RateParams::lower(n, p, a.t.unwrap())?,
    };
    let problem = VarProblem::new(f.clone(), params);
    let options = SolveOptions {
        max_iters: a.max_iters.unwrap(),
        rounds: a.rounds.unwrap(),
        seed,
        ..SolveOptions::default()
    };
    let sol = solve(&problem, &options)?;
    let predicted = match (&f, params.direction) {
        (Functional::Hom(h), Direction::Upper) => Some(rates::predicted_upper_rate(h, &params)?),
        _ => None,
    };
    let mut summary = Table::new(
        "solve",
        &[
            "functional", "N", "p", "dir", "t", "threshold", "objective", "feasibility_gap", "kkt_residual", "source",
            "best_candidate_cost", "certified_lower", "predicted_rate", "starts_used",
        ],
    );
    summary.push(row![
        f.label(),
        n,
        p,
        dir_label(params.direction),
        params.t,
        problem.threshold(),
        sol.objective,
        sol.feasibility_gap,
        sol.kkt_residual,
        sol.source.clone(),
        sol.best_candidate_cost,
        sol.certified_lower,
        predicted,
        sol.starts_used
    ]);
    let mut starts = Table::new("solve_starts", &["start", "objective", "constraint", "feasible", "iterations"]);
    for s in &sol.starts {
        starts.push(row![s.label.clone(), s.objective, s.constraint, s.feasible, s.iterations]);
    }
    let mut matrix = Table::new("solve_matrix", &["i", "j", "x"]);
    for (i, j, x) in sol.x.upper() {
        matrix.push(row![i, j, x]);
    }
    let mut report = Report::new(vec![summary, starts, matrix]);
    report.summary.push(format!("objective {} from {}", sol.objective, sol.source));
    Ok(report)
}
