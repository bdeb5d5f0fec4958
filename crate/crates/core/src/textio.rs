//! Line-oriented curve and divisor files.
//!
//! Curve file:
//!
//! ```text
//! # y^2 = x^6 + x^4 + x^2 + 1
//! p: 2
//! f: 1 0 1 0 1 0 1
//! c0: 1
//! base: Q
//! ```
//!
//! Divisor file, one component per line and `---` between divisors:
//!
//! ```text
//! H 0 -1 1 ; 1 1 ; 1
//! F 2 ; -85 0 1 ; -1
//! ---
//! M 0 -1 1 ; 1 1
//! ```

use crate::basefield::FieldSpec;
use crate::curve::{Curve, DivisorComponent, GoodDivisor};
use crate::error::{Error, Result};
use crate::jacobian2::MumfordClass;
use crate::poly::Poly;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Attach a line number to errors raised without one.
fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

/// Content lines with their 1-based numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_base(s: &str) -> Result<FieldSpec> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| parse_err(0, format!("bad integer '{t}'")))
    };
    let spec = match toks.as_slice() {
        ["Q"] => FieldSpec::Rationals,
        ["Fq", q] => FieldSpec::FinitePrime(num(q)?),
        ["Zeta", p] => FieldSpec::Cyclotomic(num(p)? as u32),
        _ => {
            return Err(parse_err(
                0,
                format!("base must be 'Q', 'Fq <q>' or 'Zeta <p>', got '{s}'"),
            ))
        }
    };
    spec.validate().map_err(|e| parse_err(0, e.to_string()))
}

pub fn parse_curve(text: &str) -> Result<Curve> {
    let mut p = None;
    let mut f = None;
    let mut c0 = None;
    let mut base = (0, FieldSpec::Rationals);
    for (n, line) in content_lines(text) {
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(n, format!("expected 'key: value', got '{line}'")))?;
        let value = value.trim();
        let slot = match key.trim() {
            "p" => &mut p,
            "f" => &mut f,
            "c0" => &mut c0,
            "base" => {
                base = (n, parse_base(value).map_err(at_line(n))?);
                continue;
            }
            other => return Err(parse_err(n, format!("unknown key '{other}'"))),
        };
        if slot.is_some() {
            return Err(parse_err(n, format!("duplicate key '{}'", key.trim())));
        }
        *slot = Some((n, value.to_string()));
    }
    let spec = base.1;
    let (pn, p) = p.ok_or_else(|| parse_err(0, "missing 'p:'"))?;
    let p: u32 = p
        .parse()
        .map_err(|_| parse_err(pn, format!("bad prime '{p}'")))?;
    let (fn_, f) = f.ok_or_else(|| parse_err(0, "missing 'f:'"))?;
    let f = Poly::parse(spec, &f).map_err(at_line(fn_))?;
    let c0 = match c0 {
        Some((n, s)) => spec.parse_elem(&s).map_err(at_line(n))?,
        None => spec.one(),
    };
    Curve::new(p, f, c0).map_err(at_line(fn_))
}

/// `mult` field of a component line, default 1.
fn parse_mult(parts: &[&str], idx: usize, n: usize) -> Result<i64> {
    match parts.get(idx) {
        None => Ok(1),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| parse_err(n, format!("bad multiplicity '{}'", s.trim()))),
    }
}

fn parse_component_line(curve: &Curve, n: usize, line: &str) -> Result<GoodDivisor> {
    let spec = curve.base();
    let (tag, rest) = line.split_at(1);
    let parts: Vec<&str> = rest.split(';').collect();
    let poly = |s: &str| Poly::parse(spec, s).map_err(at_line(n));
    let fail = at_line(n);
    let arity = |lo: usize, hi: usize| {
        if parts.len() < lo || parts.len() > hi {
            Err(parse_err(
                n,
                format!("wrong number of ';' fields in '{line}'"),
            ))
        } else {
            Ok(())
        }
    };
    match tag {
        "H" => {
            arity(2, 3)?;
            let comp = DivisorComponent::Horizontal {
                a: poly(parts[0])?,
                b: poly(parts[1])?,
            };
            GoodDivisor::new(curve, vec![(comp, parse_mult(&parts, 2, n)?)]).map_err(fail)
        }
        "F" => {
            arity(2, 3)?;
            let comp = DivisorComponent::Fiber {
                r: spec.parse_elem(parts[0].trim()).map_err(at_line(n))?,
                m: poly(parts[1])?,
            };
            GoodDivisor::new(curve, vec![(comp, parse_mult(&parts, 2, n)?)]).map_err(fail)
        }
        "M" => {
            arity(2, 3)?;
            let class =
                MumfordClass::new(curve, poly(parts[0])?, poly(parts[1])?).map_err(at_line(n))?;
            let d = class.to_divisor(&curve.first_good_x()).map_err(fail)?;
            Ok(d.scale(parse_mult(&parts, 2, n)?))
        }
        _ => Err(parse_err(
            n,
            format!("expected a line starting with H, F or M, got '{line}'"),
        )),
    }
}

/// Divisors separated by `---`; an empty section is the zero divisor.
pub fn parse_divisors(curve: &Curve, text: &str) -> Result<Vec<GoodDivisor>> {
    let mut out = vec![GoodDivisor::zero(curve)];
    for (n, line) in content_lines(text) {
        if line == "---" {
            out.push(GoodDivisor::zero(curve));
            continue;
        }
        let d = parse_component_line(curve, n, line)?;
        let last = out.last_mut().unwrap();
        *last = last.add(&d);
    }
    Ok(out)
}
