//! Element literal syntax shared by the CLI and test fixtures.
//!
//! Canonical form: `x + y*s{p} + z*s{q} + w*s{r}` with rational coefficients
//! written as `num` or `num/den`, e.g. `44 + 1*s30 + 0*s35 + 1*s42`. A
//! bracketed quadruple `[x,y,z,w]` is accepted as an alternative input form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::Error;
use crate::field::{FieldElement, FieldSpec};

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.field();
        let c = self.coords();
        write!(
            f,
            "{} + {}*s{} + {}*s{} + {}*s{}",
            c[0], c[1], k.p, c[2], k.q, c[3], k.r
        )
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parse an element literal in the given field.
pub fn parse_element(field: &FieldSpec, input: &str) -> Result<FieldElement, Error> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty element literal".into()));
    }
    if let Some(body) = s.strip_prefix('[') {
        let body = body
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse("unterminated '[' quadruple".into()))?;
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "quadruple form needs 4 coordinates, got {}",
                parts.len()
            )));
        }
        let coords = [
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
            parse_rational(parts[3])?,
        ];
        return Ok(field.element(coords));
    }
    // split into signed terms at top level
    let mut coords = [
        BigRational::from_integer(BigInt::from(0)),
        BigRational::from_integer(BigInt::from(0)),
        BigRational::from_integer(BigInt::from(0)),
        BigRational::from_integer(BigInt::from(0)),
    ];
    let mut term = String::new();
    let mut terms: Vec<String> = Vec::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !term.trim().is_empty() {
            // sign that follows '*' or '/' would be part of a number; those
            // never appear mid-term in this grammar except as term leaders
            let prev = term.trim_end().chars().last();
            if !matches!(prev, Some('*') | Some('/') | Some('+') | Some('-')) {
                terms.push(std::mem::take(&mut term));
            }
        }
        term.push(ch);
    }
    if !term.trim().is_empty() {
        terms.push(term);
    }
    for t in terms {
        let t = t.trim();
        let (sign, body) = match t.strip_prefix('+') {
            Some(rest) => (BigRational::one(), rest.trim()),
            None => match t.strip_prefix('-') {
                Some(rest) => (-BigRational::one(), rest.trim()),
                None => (BigRational::one(), t),
            },
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{input}'")));
        }
        let is_bare_radical = body.starts_with('s')
            && body[1..].chars().all(|c| c.is_ascii_digit())
            && body.len() > 1;
        let (coef, radical): (BigRational, Option<&str>) = match body.split_once('*') {
            Some((c, r)) => (parse_rational(c)?, Some(r.trim())),
            None if is_bare_radical => (BigRational::one(), Some(body)),
            None => (parse_rational(body)?, None),
        };
        let slot = match radical {
            None => 0,
            Some(rad) => {
                let n: i64 = rad
                    .strip_prefix('s')
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("invalid radical term '{rad}'")))?;
                if n == field.p {
                    1
                } else if n == field.q {
                    2
                } else if n == field.r {
                    3
                } else {
                    return Err(Error::Parse(format!(
                        "s{n} is not one of s{}, s{}, s{} for this field",
                        field.p, field.q, field.r
                    )));
                }
            }
        };
        coords[slot] += sign * coef;
    }
    Ok(field.element(coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn k() -> FieldSpec {
        FieldSpec::new(30, 35).unwrap()
    }

    #[test]
    fn parses_canonical_form() {
        let e = parse_element(&k(), "44 + 1*s30 + 0*s35 + 1*s42").unwrap();
        assert_eq!(e, k().from_integers([44, 1, 0, 1]));
        let e2 = parse_element(&k(), "44+1*s30+0*s35+1*s42").unwrap();
        assert_eq!(e, e2);
    }

    #[test]
    fn parses_quadruple_and_fractions() {
        let e = parse_element(&k(), "[1/2, -3/2, 0, 2]").unwrap();
        assert_eq!(e, k().element([ratio(1, 2), ratio(-3, 2), rat(0), rat(2)]));
        let e = parse_element(&k(), "7").unwrap();
        assert_eq!(e, k().from_integers([7, 0, 0, 0]));
        let e = parse_element(&k(), "-1/2 + -1/2*s30 - 2*s42").unwrap();
        assert_eq!(
            e,
            k().element([ratio(-1, 2), ratio(-1, 2), rat(0), rat(-2)])
        );
        let e = parse_element(&k(), "s30 - s35").unwrap();
        assert_eq!(e, k().from_integers([0, 1, -1, 0]));
    }

    #[test]
    fn rejects_foreign_radical() {
        assert!(parse_element(&k(), "1 + 1*s7").is_err());
        assert!(parse_element(&k(), "").is_err());
        assert!(parse_element(&k(), "[1,2,3]").is_err());
        assert!(parse_element(&k(), "1/0").is_err());
    }

    #[test]
    fn display_round_trips() {
        let cases = [
            k().from_integers([44, 1, 0, 1]),
            k().element([ratio(-1, 2), ratio(3, 4), rat(0), ratio(-7, 3)]),
            k().zero(),
        ];
        for e in cases {
            let s = e.to_string();
            let back = parse_element(&k(), &s).unwrap();
            assert_eq!(back, e, "round trip through '{s}'");
        }
    }
}
