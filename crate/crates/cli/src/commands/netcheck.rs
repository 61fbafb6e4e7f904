use anyhow::{bail, Result};
use ldgraphs_core::netcover::{self, OpBall};
use ldgraphs_core::{rng, SymMatrix};

use super::{check_p, pattern};
use crate::args::NetcheckArgs;
use crate::output::{Report, Table};
use crate::{par, row};

pub const SUITES: [&str; 6] = ["perturbation", "trace", "cycle", "claim1", "hom", "k2"];

/// Perturbations drawn around each base point of the perturbation suite.
const PERTURBATIONS: usize = 10;

pub fn resolve(mut a: NetcheckArgs) -> Result<NetcheckArgs> {
    a.suite.get_or_insert_with(|| SUITES.iter().map(|s| s.to_string()).collect());
    a.n.get_or_insert(20);
    a.r.get_or_insert(3);
    a.p.get_or_insert(0.3);
    a.trials.get_or_insert(200);
    a.ell.get_or_insert(4);
    a.eps.get_or_insert(0.5);
    a.delta_lambda.get_or_insert(0.05);
    a.delta_frame.get_or_insert(0.05);
    a.noise_hs.get_or_insert(1e-6);
    a.pattern.get_or_insert_with(|| "C4".into());
    a.radius.get_or_insert(0.05);
    for s in a.suite.as_deref().unwrap() {
        if !SUITES.contains(&s.as_str()) {
            bail!("unknown suite `{s}`; expected one of {}", SUITES.join(", "));
        }
    }
    check_p(a.p.unwrap())?;
    let (n, r) = (a.n.unwrap(), a.r.unwrap());
    if r == 0 || r >= n {
        bail!("need 1 ≤ R < N, got R = {r}, N = {n}");
    }
    if a.ell.unwrap() < 3 {
        bail!("--ell must be at least 3");
    }
    Ok(a)
}

pub fn table() -> Table {
    Table::new("netcheck", &["suite", "case", "quantity", "value", "bound", "pass"])
}

/// Appends the rows of one suite; returns whether all of them passed.
pub fn suite(name: &str, a: &NetcheckArgs, seed: u64, out: &mut Table) -> Result<bool> {
    let (n, r, p, trials) = (a.n.unwrap(), a.r.unwrap(), a.p.unwrap(), a.trials.unwrap());
    let (ell, eps) = (a.ell.unwrap(), a.eps.unwrap());
    let sub = |t: usize| rng::derive_seed(seed, t as u64);
    let mut ok = true;
    match name {
        "perturbation" => {
            let reports = par::map(trials, |t| {
                let x = netcover::random_point(n, r, n as f64, sub(t))?;
                netcover::net_perturbation_bound(&x, a.delta_lambda.unwrap(), a.delta_frame.unwrap(), PERTURBATIONS, sub(t))
            })?;
            for (t, rep) in reports.iter().enumerate() {
                let pass = rep.violations == 0 && rep.max_rank_one_error <= 1e-10;
                ok &= pass;
                out.push(row![name, t, "min_slack", rep.min_slack, 0.0, pass]);
            }
        }
        "trace" => {
            let ells: Vec<u32> = (3..=8).collect();
            let alphas = [1.5, 2.0, 3.0, 4.0];
            let reports = par::map(trials, |t| {
                let (y, z, _) = netcover::random_cover_configuration(n, r, ell, eps, p, 0.0, sub(t))?;
                netcover::orthogonal_residual_trace_identity(&y, &z, &ells, &alphas)
            })?;
            for (t, rep) in reports.iter().enumerate() {
                let worst = rep
                    .trace_errors
                    .iter()
                    .map(|e| e.1)
                    .chain(rep.schatten_errors.iter().map(|e| e.1))
                    .fold(0.0, f64::max);
                ok &= rep.holds;
                out.push(row![name, t, "max_relative_error", worst, 1e-8, rep.holds]);
            }
        }
        "cycle" => {
            let rows = par::map(trials, |t| {
                let (y, z, noise) = netcover::random_cover_configuration(n, r, ell, eps, p, a.noise_hs.unwrap(), sub(t))?;
                netcover::cycle_fluctuation_check(&y, &z, &noise, ell, eps, p)
            })?;
            for (t, row) in rows.iter().enumerate() {
                let pass = row.ratio <= 1.0 + 1e-9;
                ok &= pass;
                out.push(row![name, t, "ratio", row.ratio, 1.0, pass]);
            }
        }
        "claim1" => {
            let reports = par::map(trials, |t| {
                let x = SymMatrix::random_adjacency(n, p, &mut rng::stream(sub(t), 0));
                // the smallest ε for which the hypothesis holds, unless the given one is larger
                let top = netcover::SpectralPoint::top(&x, r)?;
                let needed = netcover::claim1_residual(&x, &top)?.schatten(ell as f64)? / (n as f64 * p) * (1.0 + 1e-9);
                netcover::claim1_containment(&x, r, ell, eps.max(needed), p, 1e-6, sub(t))
            })?;
            for (t, rep) in reports.iter().enumerate() {
                ok &= rep.holds;
                out.push(row![name, t, "residual_hs", rep.residual_hs, rep.residual_bound, rep.holds]);
            }
        }
        "hom" => {
            let h = pattern(a.pattern.as_deref().unwrap())?;
            let ball = OpBall::new(SymMatrix::constant(n, p)?, a.radius.unwrap())?;
            let rep = netcover::hom_fluctuation_check(&h, &ball, p, 1.0, trials, seed)?;
            let pass = rep.violations == 0;
            ok &= pass;
            out.push(row![name, rep.pattern.clone(), "max_lemma_ratio", rep.max_lemma_ratio, 1.0, pass]);
            out.push(row![name, rep.pattern.clone(), "max_prop_ratio", rep.max_prop_ratio, "", true]);
        }
        "k2" => {
            for c in [0.05, 0.25, 0.5] {
                let ratio = netcover::k2_equality_ratio(n, c)?;
                let pass = (ratio - 1.0).abs() <= 1e-12;
                ok &= pass;
                out.push(row![name, format!("c={c}"), "ratio", ratio, 1.0, pass]);
            }
        }
        other => bail!("unknown suite `{other}`"),
    }
    Ok(ok)
}

pub fn run(a: &NetcheckArgs, seed: u64) -> Result<Report> {
    let mut t = table();
    let mut passed = true;
    let mut summary = Vec::new();
    for (i, name) in a.suite.as_deref().unwrap().iter().enumerate() {
        let ok = suite(name, a, rng::derive_seed(seed, i as u64), &mut t)?;
        summary.push(format!("{name}: {}", if ok { "pass" } else { "FAIL" }));
        passed &= ok;
    }
    let mut report = Report::new(vec![t]);
    report.passed = passed;
    report.summary = summary;
    Ok(report)
}
