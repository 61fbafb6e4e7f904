use anyhow::{bail, Result};
use ldgraphs_core::rates;

use super::{check_p, pattern};
use crate::args::RateArgs;
use crate::output::{Report, Table};
use crate::{par, row};

pub fn resolve(mut a: RateArgs) -> Result<RateArgs> {
    a.pattern.get_or_insert_with(|| vec!["C3".into()]);
    a.n.get_or_insert(1000);
    a.p.get_or_insert(0.1);
    if a.u.is_none() {
        a.u_min.get_or_insert(1e-2);
        a.u_max.get_or_insert(1e2);
        a.points.get_or_insert(41);
    }
    check_p(a.p.unwrap())?;
    Ok(a)
}

/// `points` values spaced evenly in `log u` from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && points >= 1) {
        bail!("log grid needs 0 < u-min ≤ u-max and at least one point");
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            i => {
                let t = i as f64 / (points - 1) as f64;
                (a * (1.0 - t) + b * t).exp()
            }
        })
        .collect())
}

pub fn run(a: &RateArgs) -> Result<Report> {
    let us = match &a.u {
        Some(u) => u.clone(),
        None => log_grid(a.u_min.unwrap(), a.u_max.unwrap(), a.points.unwrap())?,
    };
    let (n, p) = (a.n.unwrap(), a.p.unwrap());
    let mut table = Table::new(
        "rate",
        &["pattern", "N", "p", "u", "theta", "c_H", "predicted_rate", "clique_cost", "hub_cost"],
    );
    for name in a.pattern.as_deref().unwrap_or_default() {
        let h = pattern(name)?;
        let rows = par::map(us.len(), |i| rates::rate_row(&h, n, p, us[i]))?;
        for r in rows {
            table.push(row![r.pattern, r.n, r.p, r.u, r.theta, r.c_h, r.predicted_rate, r.clique_cost, r.hub_cost]);
        }
    }
    Ok(Report::new(vec![table]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = log_grid(1e-3, 1e3, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (1e-3, 1e3));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(log_grid(0.0, 1.0, 3).is_err());
    }
}
