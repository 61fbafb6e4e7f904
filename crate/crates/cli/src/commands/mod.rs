//! The data-producing subcommands.

pub mod enumerate;
pub mod mc;
pub mod netcheck;
pub mod rate;
pub mod solve;
pub mod spectra;

use anyhow::{anyhow, bail, Context, Result};
use ldgraphs_core::mc::TiltSpec;
use ldgraphs_core::{Direction, Functional, PatternGraph};

use crate::args::{Dir, Stat};

pub fn pattern(name: &str) -> Result<PatternGraph> {
    PatternGraph::from_name(name).with_context(|| format!("pattern `{name}`"))
}

pub fn functional(stat: Stat, pattern_name: Option<&str>, alpha: Option<f64>) -> Result<Functional> {
    Ok(match stat {
        Stat::Hom => Functional::Hom(pattern(pattern_name.ok_or_else(|| anyhow!("--pattern is required for hom"))?)?),
        Stat::Edges => Functional::EdgeCount,
        Stat::Schatten => {
            let a = alpha.ok_or_else(|| anyhow!("--alpha is required for schatten"))?;
            if !(a >= 1.0) {
                bail!("--alpha must be at least 1, got {a}");
            }
            Functional::Schatten(a)
        }
    })
}

pub fn direction(d: Dir) -> Direction {
    match d {
        Dir::Ge => Direction::Upper,
        Dir::Le => Direction::Lower,
    }
}

pub fn dir_label(d: Direction) -> &'static str {
    match d {
        Direction::Upper => "ge",
        Direction::Lower => "le",
    }
}

/// Absolute threshold from exactly one of `t_abs` and the relative `t`.
pub fn threshold(f: &Functional, n: usize, p: f64, t_abs: Option<f64>, t: Option<f64>) -> Result<f64> {
    match (t_abs, t) {
        (Some(a), None) => Ok(a),
        (None, Some(t)) => Ok(t * f.scale(n, p)),
        (Some(_), Some(_)) => bail!("give only one of --t-abs and --t"),
        (None, None) => bail!("one of --t-abs or --t is required"),
    }
}

pub fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        bail!("p must lie in (0, 1), got {p}");
    }
    Ok(())
}

/// Parses `plain`, `product(r)`, `clique(k)`, `hub(k)` and
/// `mixture[w*spec+w*spec+...]`; `plain` is `product(p)`.
pub fn parse_tilt(s: &str, p: f64) -> Result<TiltSpec> {
    let s = s.trim();
    if s == "plain" {
        return Ok(TiltSpec::Product(p));
    }
    if let Some(inner) = s.strip_prefix("mixture[").and_then(|r| r.strip_suffix(']')) {
        let mut parts = Vec::new();
        for piece in split_top(inner, '+') {
            let (w, spec) = piece.split_once('*').ok_or_else(|| anyhow!("mixture part `{piece}` needs the form w*spec"))?;
            let w: f64 = w.trim().parse().with_context(|| format!("mixture weight `{w}`"))?;
            parts.push((w, parse_tilt(spec, p)?));
        }
        return Ok(TiltSpec::Mixture(parts));
    }
    let (name, arg) = s
        .strip_suffix(')')
        .and_then(|r| r.split_once('('))
        .ok_or_else(|| anyhow!("unknown proposal `{s}`"))?;
    let int = || arg.trim().parse::<usize>().with_context(|| format!("size in `{s}`"));
    Ok(match name.trim() {
        "product" => TiltSpec::Product(arg.trim().parse().with_context(|| format!("r in `{s}`"))?),
        "clique" => TiltSpec::PlantedClique(int()?),
        "hub" => TiltSpec::PlantedHub(int()?),
        other => bail!("unknown proposal `{other}`"),
    })
}

/// Splits on `sep` outside brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
