//! Plain-text serialization of Witt vectors.
//!
//! Layout: a header line
//!     witt p=<p> d=<d> n=<n> m=<m> f=<monic polynomial in t, no spaces>
//! followed by n lines, one coordinate polynomial per line.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fq::{coeffs_to_string, FqField};
use crate::poly::parse::parse_poly_at;
use crate::poly::{default_names, Poly};
use crate::witt::{WittContext, WittVector};

pub fn print_witt(w: &WittVector) -> String {
    let ctx = w.context();
    let field = ctx.field();
    let names = default_names(ctx.m());
    let mut out = format!(
        "witt p={} d={} n={} m={} f={}",
        field.p(),
        field.degree(),
        ctx.n(),
        ctx.m(),
        coeffs_to_string(field.modulus()),
    );
    for coord in w.coords() {
        out.push('\n');
        out.push_str(&coord.to_string_with(&names));
    }
    out.push('\n');
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses `key=value`, returning the value slice.
fn expect_kv<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| parse_err(line, 1, format!("missing {}=... in header", key)))?;
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_err(line, 1, format!("expected {}=..., found '{}'", key, tok)))
}

fn parse_biguint(s: &str, what: &str, line: usize) -> Result<BigUint> {
    s.parse::<BigUint>()
        .map_err(|_| parse_err(line, 1, format!("invalid {} value '{}'", what, s)))
}

/// Parses a univariate polynomial in t with natural coefficients into a
/// constant-first coefficient vector of length d+1, reduced mod p except
/// for the leading term, which must be monic.
fn parse_field_modulus(src: &str, p: &BigUint, d: usize, line: usize) -> Result<Vec<BigUint>> {
    let mut coeffs = vec![BigUint::zero(); d + 1];
    for part in src.split('+') {
        let part = part.trim();
        if part.is_empty() {
            return Err(parse_err(line, 1, "empty term in f"));
        }
        let (coeff_str, power) = match part.find('t') {
            None => (part, 0usize),
            Some(tpos) => {
                let head = &part[..tpos];
                let tail = &part[tpos + 1..];
                let power = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| parse_err(line, 1, format!("invalid exponent in '{}'", part)))?
                } else {
                    return Err(parse_err(line, 1, format!("malformed term '{}'", part)));
                };
                let head = head.strip_suffix('*').unwrap_or(head);
                (head, power)
            }
        };
        let c = if coeff_str.is_empty() {
            BigUint::one()
        } else {
            parse_biguint(coeff_str, "coefficient in f", line)?
        };
        if power > d {
            return Err(parse_err(
                line,
                1,
                format!("f has degree {} but d={}", power, d),
            ));
        }
        coeffs[power] = (&coeffs[power] + c) % p;
    }
    if !coeffs[d].is_one() {
        return Err(parse_err(line, 1, "f must be monic of degree d"));
    }
    Ok(coeffs)
}

pub fn parse_witt(src: &str) -> Result<WittVector> {
    let mut lines = src.lines().enumerate();
    let (hline_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input"))?;
    let hline = hline_no + 1;
    let mut toks = header.split_whitespace();
    match toks.next() {
        Some("witt") => {}
        _ => return Err(parse_err(hline, 1, "header must start with 'witt'")),
    }
    let p = parse_biguint(expect_kv(toks.next(), "p", hline)?, "p", hline)?;
    let d = expect_kv(toks.next(), "d", hline)?
        .parse::<usize>()
        .map_err(|_| parse_err(hline, 1, "invalid d value"))?;
    let n = expect_kv(toks.next(), "n", hline)?
        .parse::<u32>()
        .map_err(|_| parse_err(hline, 1, "invalid n value"))?;
    let m = expect_kv(toks.next(), "m", hline)?
        .parse::<usize>()
        .map_err(|_| parse_err(hline, 1, "invalid m value"))?;
    let f_src = expect_kv(toks.next(), "f", hline)?;
    if let Some(extra) = toks.next() {
        return Err(parse_err(
            hline,
            1,
            format!("unexpected token '{}' in header", extra),
        ));
    }
    if n == 0 {
        return Err(parse_err(hline, 1, "n must be at least 1"));
    }
    let f = parse_field_modulus(f_src, &p, d, hline)?;
    let field = FqField::with_modulus(p, f)?;
    let ctx = WittContext::with_field(field.clone(), n, m)?;

    let mut coords: Vec<Poly<FqField>> = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_err(
                hline + coords.len() + 1,
                1,
                format!("expected {} coordinate lines, found {}", n, coords.len()),
            )
        })?;
        coords.push(parse_poly_at(line, field.clone(), m, lno + 1)?);
    }
    for (lno, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(parse_err(lno + 1, 1, "trailing content after coordinates"));
        }
    }
    WittVector::from_coords(ctx, coords)
}
