use anyhow::{bail, Result};
use ldgraphs_core::mc::{self, MAX_ENUM_N};
use ldgraphs_core::TailProblem;

use super::{check_p, dir_label, direction, functional, threshold};
use crate::args::{Dir, EnumerateArgs, Stat};
use crate::output::{Report, Table};
use crate::row;

pub fn resolve(mut a: EnumerateArgs) -> Result<EnumerateArgs> {
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
    check_p(a.p.unwrap())?;
    if a.n.unwrap() > MAX_ENUM_N {
        bail!("enumeration needs N ≤ {MAX_ENUM_N}, got {}", a.n.unwrap());
    }
    Ok(a)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `hits / 2^E` in lowest terms; every graph has mass `2^{−E}` when `p = 1/2`.
pub fn half_fraction(hits: u64, graphs: u64) -> String {
    let g = gcd(hits, graphs).max(1);
    format!("{}/{}", hits / g, graphs / g)
}

pub fn problem(a: &EnumerateArgs) -> Result<TailProblem> {
    let f = functional(a.stat.unwrap(), a.pattern.as_deref(), a.alpha)?;
    let (n, p) = (a.n.unwrap(), a.p.unwrap());
    let threshold = threshold(&f, n, p, a.t_abs, a.t)?;
    Ok(TailProblem {
        functional: f,
        n,
        p,
        direction: direction(a.dir.unwrap()),
        threshold,
    })
}

pub fn run(a: &EnumerateArgs) -> Result<Report> {
    let problem = problem(a)?;
    let est = mc::enumerate_tail(&problem)?;
    let fraction = (problem.p == 0.5).then(|| half_fraction(est.hits, est.samples));
    let mut table = Table::new(
        "enumerate",
        &["statistic", "N", "p", "dir", "threshold", "probability", "hits", "graphs", "fraction"],
    );
    table.push(row![
        problem.functional.label(),
        problem.n,
        problem.p,
        dir_label(problem.direction),
        problem.threshold,
        est.value,
        est.hits,
        est.samples,
        fraction
    ]);
    let mut report = Report::new(vec![table]);
    report.summary.push(format!("P = {}", est.value));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_example() {
        let a = resolve(EnumerateArgs {
            t_abs: Some(6.0),
            ..Default::default()
        })
        .unwrap();
        let r = run(&a).unwrap();
        let row = &r.tables[0].rows[0];
        assert_eq!(row[5], "0.359375");
        assert_eq!(row[8], "23/64");
    }
}
