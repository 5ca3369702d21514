//! Line-oriented text format for polynomial forms.
//!
//! ```text
//! n=2 k=1
//! idx=[1]; poly=1/2*x1^2*x2 - 3*x2
//! idx=[2]; poly=x1 + 7/3
//! ```
//!
//! The header fixes the ambient dimension and degree; each following
//! non-empty line holds one component. Variables are written `x1..xn` and
//! `idx` lists 1-based axes, matching the usual dx₁∧…∧dx_k notation
//! (internally both are 0-based). Coefficients are exact rationals `p/q`
//! (`/1` omitted). Missing components are zero and the zero polynomial
//! prints as `0`. Parsing a printed form reproduces it bit for bit.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{PolyForm, Polynomial, Rat};
use crate::error::{Error, Result};
use crate::exterior::FormIndex;

pub(super) fn poly_to_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, coeff)) in p.terms().enumerate() {
        let negative = coeff.is_negative();
        let abs = coeff.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let vars: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(axis, &e)| {
                if e == 1 {
                    format!("x{}", axis + 1)
                } else {
                    format!("x{}^{}", axis + 1, e)
                }
            })
            .collect();
        let coeff_str = if abs.denom().is_one() {
            format!("{}", abs.numer())
        } else {
            format!("{}/{}", abs.numer(), abs.denom())
        };
        if vars.is_empty() {
            out.push_str(&coeff_str);
        } else if abs.is_one() {
            out.push_str(&vars.join("*"));
        } else {
            out.push_str(&coeff_str);
            out.push('*');
            out.push_str(&vars.join("*"));
        }
    }
    out
}

pub(super) fn form_to_text(f: &PolyForm) -> String {
    let mut out = format!("n={} k={}\n", f.ambient_dim(), f.degree());
    for (idx, p) in f.components() {
        let axes: Vec<String> = idx.axes().map(|a| (a + 1).to_string()).collect();
        out.push_str(&format!(
            "idx=[{}]; poly={}\n",
            axes.join(","),
            poly_to_text(p)
        ));
    }
    out
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num, den))
}

/// One product of an optional rational and `xi^e` factors.
fn parse_term(n: usize, term: &str) -> Result<(Vec<u32>, Rat)> {
    let mut coeff = Rat::one();
    let mut exps = vec![0u32; n];
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => (v, e),
                None => (rest, "1"),
            };
            let axis: usize = var
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
            if axis == 0 || axis > n {
                return Err(Error::Parse(format!(
                    "variable x{axis} out of range for n={n}"
                )));
            }
            let e: u32 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{factor}`")))?;
            exps[axis - 1] += e;
        } else {
            coeff *= parse_rat(factor)?;
        }
    }
    Ok((exps, coeff))
}

pub(super) fn parse_poly(n: usize, input: &str) -> Result<Polynomial> {
    let input = input.trim();
    if input.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split on top-level + and - that act as term separators; a sign glued
    // to the front of the first term is part of it.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut chars = input.chars().peekable();
    // Leading sign.
    if let Some(&c) = chars.peek() {
        if c == '-' {
            negative = true;
            chars.next();
        } else if c == '+' {
            chars.next();
        }
    }
    let mut prev_non_space: Option<char> = None;
    for c in chars {
        if (c == '+' || c == '-')
            && !matches!(prev_non_space, Some('^') | Some('*') | Some('/') | None)
        {
            terms.push((negative, std::mem::take(&mut current)));
            negative = c == '-';
        } else {
            if !c.is_whitespace() {
                prev_non_space = Some(c);
            }
            current.push(c);
        }
    }
    terms.push((negative, current));

    let mut p = Polynomial::zero(n);
    for (neg, term) in terms {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse("dangling sign".into()));
        }
        let (exps, coeff) = parse_term(n, term)?;
        let coeff = if neg { -coeff } else { coeff };
        p.add_term(exps, coeff);
    }
    Ok(p)
}

pub(super) fn parse_form(input: &str) -> Result<PolyForm> {
    let mut lines = input.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `n=.. k=..` header".into()))?;
    let mut n: Option<usize> = None;
    let mut k: Option<usize> = None;
    for part in header.split_whitespace() {
        if let Some(v) = part.strip_prefix("n=") {
            n = Some(
                v.parse()
                    .map_err(|_| Error::Parse(format!("bad n in `{header}`")))?,
            );
        } else if let Some(v) = part.strip_prefix("k=") {
            k = Some(
                v.parse()
                    .map_err(|_| Error::Parse(format!("bad k in `{header}`")))?,
            );
        } else {
            return Err(Error::Parse(format!("unexpected header token `{part}`")));
        }
    }
    let (n, k) = match (n, k) {
        (Some(n), Some(k)) => (n, k),
        _ => return Err(Error::Parse(format!("incomplete header `{header}`"))),
    };
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    if k > n {
        return Err(Error::Parse(format!("degree k={k} exceeds n={n}")));
    }
    let mut form = PolyForm::zero(n, k);
    for line in lines {
        let line = line.trim();
        let rest = line
            .strip_prefix("idx=[")
            .ok_or_else(|| Error::Parse(format!("expected `idx=[...]` in `{line}`")))?;
        let (axes_str, rest) = rest
            .split_once(']')
            .ok_or_else(|| Error::Parse(format!("unterminated idx list in `{line}`")))?;
        let rest = rest.trim_start();
        let poly_str = rest
            .strip_prefix(';')
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix("poly="))
            .ok_or_else(|| Error::Parse(format!("expected `; poly=` in `{line}`")))?;
        let mut axes: Vec<usize> = Vec::new();
        for a in axes_str.split(',') {
            let a = a.trim();
            if a.is_empty() {
                continue;
            }
            let one_based: usize = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad axis `{a}`")))?;
            if one_based == 0 || one_based > n {
                return Err(Error::Parse(format!(
                    "axis {one_based} out of range for n={n}"
                )));
            }
            axes.push(one_based - 1);
        }
        if axes.len() != k {
            return Err(Error::Parse(format!(
                "component has {} axes but the form has degree {k}",
                axes.len()
            )));
        }
        let idx = FormIndex::new(n, &axes).map_err(|e| Error::Parse(e.to_string()))?;
        if form.component(&idx) != Polynomial::zero(n) {
            return Err(Error::Parse(format!("duplicate component idx={axes:?}")));
        }
        let p = parse_poly(n, poly_str)?;
        form.set_component(idx, p);
    }
    Ok(form)
}
