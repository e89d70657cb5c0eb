//! Plain-text polynomial and point-list formats.
//!
//! Polynomial:
//!
//! ```text
//! vars: x0 x1 x2
//! 2 0 0 : 1/1
//! 0 1 1 : -3/2
//! ```
//!
//! Terms are written in descending graded-lex order, coefficients always as
//! `numerator/denominator` in lowest terms. Point lists start with
//! `dim: <n>` and carry one point per line as space-separated rationals.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Monomial, MultiPoly, Rational};
use crate::error::{Error, Result};

pub fn write_poly(p: &MultiPoly, names: &[String]) -> String {
    let mut out = String::from("vars:");
    for n in names {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
    for (m, c) in p.terms() {
        let exps: Vec<String> = m.exponents().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{} : {}/{}", exps.join(" "), c.numer(), c.denom());
    }
    out
}

/// Default variable names `x0 .. x{n-1}`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational> {
    let err = |msg: String| Error::Parse { line, msg };
    let (n, d) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err(format!("bad numerator {n:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| err(format!("bad denominator {d:?}")))?;
    if d.is_zero() {
        return Err(err("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// Parses the polynomial format, returning the polynomial and its variable
/// names. Zero coefficients are rejected.
pub fn parse_poly(text: &str) -> Result<(MultiPoly, Vec<String>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing vars header".into(),
    })?;
    let names: Vec<String> = header
        .trim()
        .strip_prefix("vars:")
        .ok_or(Error::Parse {
            line: 1,
            msg: "header must start with 'vars:'".into(),
        })?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let n = names.len();
    let mut terms = Vec::new();
    for (idx, l) in lines {
        let line = idx + 1;
        let (exps, coeff) = l.split_once(':').ok_or(Error::Parse {
            line,
            msg: "expected '<exponents> : <coefficient>'".into(),
        })?;
        let exps: Vec<u32> = exps
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad exponent {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if exps.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("{} exponents for {} variables", exps.len(), n),
            });
        }
        let c = parse_rational(coeff.trim(), line)?;
        if c.is_zero() {
            return Err(Error::Parse {
                line,
                msg: "zero coefficient".into(),
            });
        }
        terms.push((Monomial::new(exps), c));
    }
    Ok((MultiPoly::from_terms(n, terms)?, names))
}

pub fn write_point_list(points: &[Vec<Rational>], dim: usize) -> String {
    let mut out = format!("dim: {dim}\n");
    for p in points {
        let toks: Vec<String> = p
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_point_list(text: &str) -> Result<Vec<Vec<Rational>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing dim header".into(),
    })?;
    let dim: usize = header
        .trim()
        .strip_prefix("dim:")
        .and_then(|d| d.trim().parse().ok())
        .ok_or(Error::Parse {
            line: 1,
            msg: "header must be 'dim: <n>'".into(),
        })?;
    lines
        .map(|(idx, l)| {
            let pt: Vec<Rational> = l
                .split_whitespace()
                .map(|t| parse_rational(t, idx + 1))
                .collect::<Result<_>>()?;
            if pt.len() != dim {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("point has {} coordinates, expected {dim}", pt.len()),
                });
            }
            Ok(pt)
        })
        .collect()
}
