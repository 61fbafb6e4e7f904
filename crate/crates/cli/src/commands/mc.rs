use anyhow::{bail, Result};
use ldgraphs_core::mc::{self, TailEstimate, TiltSpec};
use ldgraphs_core::TailProblem;

use super::{check_p, dir_label, direction, functional, parse_tilt, threshold};
use crate::args::{Dir, McArgs, Stat};
use crate::output::{Report, Table};
use crate::{par, row};

/// Samples per parallel work item; fixed so chunking never depends on threads.
pub const CHUNK: u64 = 2048;

/// Largest `N` for which the exact value is added next to the estimate.
const EXACT_COMPARE_N: usize = 6;

pub fn resolve(mut a: McArgs) -> Result<McArgs> {
    let stat = *a.stat.get_or_insert(Stat::Hom);
    if stat == Stat::Hom {
        a.pattern.get_or_insert_with(|| "C3".into());
    }
    if stat == Stat::Schatten {
        a.alpha.get_or_insert(2.0);
    }
    a.n.get_or_insert(4);
    a.p.get_or_insert(0.5);
    a.dir.get_or_insert(Dir::Ge);
    a.samples.get_or_insert(100_000);
    a.tilt.get_or_insert_with(|| "plain".into());
    check_p(a.p.unwrap())?;
    if a.samples == Some(0) {
        bail!("--samples must be positive");
    }
    Ok(a)
}

/// `estimate_from_records` over records drawn in parallel chunks.
pub fn estimate(problem: &TailProblem, tilt: &TiltSpec, samples: u64, seed: u64) -> ldgraphs_core::Result<TailEstimate> {
    let records = par::chunked(samples, CHUNK, |r| mc::is_records(problem, tilt, seed, r))?;
    mc::estimate_from_records(problem, tilt, seed, &records)
}

pub fn run(a: &McArgs, seed: u64) -> Result<Report> {
    let f = functional(a.stat.unwrap(), a.pattern.as_deref(), a.alpha)?;
    let (n, p) = (a.n.unwrap(), a.p.unwrap());
    let problem = TailProblem {
        threshold: threshold(&f, n, p, a.t_abs, a.t)?,
        functional: f,
        n,
        p,
        direction: direction(a.dir.unwrap()),
    };
    let tilt = parse_tilt(a.tilt.as_deref().unwrap(), p)?;
    let est = estimate(&problem, &tilt, a.samples.unwrap(), seed)?;
    let exact = if n <= EXACT_COMPARE_N { Some(mc::enumerate_tail(&problem)?.value) } else { None };
    let z = exact.map(|e| if est.std_error > 0.0 { (est.value - e) / est.std_error } else { f64::NAN });
    let mut table = Table::new(
        "mc",
        &[
            "statistic", "N", "p", "dir", "threshold", "proposal", "mode", "samples", "estimate", "std_error", "ess", "mean_lr",
            "mean_lr_se", "hits", "exact", "z",
        ],
    );
    table.push(row![
        problem.functional.label(),
        n,
        p,
        dir_label(problem.direction),
        problem.threshold,
        tilt.label(),
        est.mode.label(),
        est.samples,
        est.value,
        est.std_error,
        est.ess,
        est.mean_lr,
        est.mean_lr_se,
        est.hits,
        exact,
        z
    ]);
    let mut report = Report::new(vec![table]);
    report.summary.push(format!("estimate {} ± {} ({} samples)", est.value, est.std_error, est.samples));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldgraphs_core::Functional;

    #[test]
    fn parallel_estimate_matches_sequential() {
        let problem = TailProblem {
            functional: Functional::EdgeCount,
            n: 5,
            p: 0.5,
            direction: ldgraphs_core::Direction::Lower,
            threshold: 3.0,
        };
        let tilt = TiltSpec::Product(0.3);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let par = pool.install(|| estimate(&problem, &tilt, 5000, 11)).unwrap();
        let seq = mc::is_tail(&problem, &tilt, 5000, 11).unwrap();
        assert_eq!(par.value.to_bits(), seq.value.to_bits());
        assert_eq!(par.std_error.to_bits(), seq.std_error.to_bits());
        assert_eq!(par.mean_lr.to_bits(), seq.mean_lr.to_bits());
    }
}
