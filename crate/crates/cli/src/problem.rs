//! Problem files.
//!
//! Line-oriented text; `#` starts a comment; blank lines are ignored. Each
//! line is a keyword followed by whitespace-separated fields:
//!
//! ```text
//! file     := line*
//! line     := "modulus" INT
//!           | "factors" PP+            PP := INT "^" INT    (e.g. 2^3)
//!           | "dims" INT INT           k rows, l columns
//!           | "row" INT{l}             exactly k of these, in order
//!           | "b" INT{k}
//!           | "w" INT{l}               optional constraint functional
//!           | "field" ("prime" INT | "rational")
//! INT      := ["-"|"+"] DIGIT+         arbitrary precision, decimal
//! ```
//!
//! `dims` must precede `row`, `b` and `w`. Each keyword except `row` may
//! appear at most once.

use std::fmt;

use modlin_core::arith::{parse_bigint, PrimePowerFactorization};
use modlin_core::{BigInt, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(BigInt),
    Rational,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub modulus: Option<BigInt>,
    pub factors: Option<PrimePowerFactorization>,
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    pub w: Option<Vec<BigInt>>,
    pub field: Option<FieldSpec>,
}

fn ints(line: usize, what: &str, fields: &[&str]) -> Result<Vec<BigInt>, ParseError> {
    fields
        .iter()
        .map(|t| parse_bigint(t).or_else(|_| err(line, format!("{what}: '{t}' is not an integer"))))
        .collect()
}

fn exact<T>(line: usize, what: &str, v: Vec<T>, want: usize) -> Result<Vec<T>, ParseError> {
    if v.len() != want {
        return err(line, format!("{what}: expected {want} entries, found {}", v.len()));
    }
    Ok(v)
}

/// Parses `p^r` tokens, e.g. `2^3 5^1`.
pub fn parse_factor_list(tokens: &[&str]) -> Result<Vec<(BigInt, u64)>, String> {
    tokens
        .iter()
        .map(|t| {
            let (p, r) = t.split_once('^').ok_or_else(|| format!("'{t}' is not of the form p^r"))?;
            let p = parse_bigint(p).map_err(|_| format!("'{t}': bad prime"))?;
            let r = r.parse::<u64>().map_err(|_| format!("'{t}': bad exponent"))?;
            Ok((p, r))
        })
        .collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut modulus: Option<(usize, BigInt)> = None;
        let mut factors: Option<(usize, Vec<(BigInt, u64)>)> = None;
        let mut dims: Option<(usize, usize)> = None;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut b = None;
        let mut w = None;
        let mut field = None;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let (key, rest) = (fields[0], &fields[1..]);
            let need_dims = || dims.ok_or(ParseError {
                line,
                message: format!("'{key}' before 'dims'"),
            });
            match key {
                "modulus" => {
                    if modulus.is_some() {
                        return err(line, "duplicate 'modulus'");
                    }
                    let v = exact(line, "modulus", ints(line, "modulus", rest)?, 1)?;
                    if v[0] < BigInt::from(2) {
                        return err(line, format!("modulus must be at least 2, got {}", v[0]));
                    }
                    modulus = Some((line, v[0].clone()));
                }
                "factors" => {
                    if factors.is_some() {
                        return err(line, "duplicate 'factors'");
                    }
                    if rest.is_empty() {
                        return err(line, "factors: expected at least one p^r");
                    }
                    let f = parse_factor_list(rest).or_else(|m| err(line, format!("factors: {m}")))?;
                    factors = Some((line, f));
                }
                "dims" => {
                    if dims.is_some() {
                        return err(line, "duplicate 'dims'");
                    }
                    let d = exact(line, "dims", rest.to_vec(), 2)?;
                    let parse = |t: &str| t.parse::<usize>().or_else(|_| err(line, format!("dims: '{t}' is not a count")));
                    let (k, l) = (parse(d[0])?, parse(d[1])?);
                    if k == 0 || l == 0 {
                        return err(line, "dims: both dimensions must be positive");
                    }
                    dims = Some((k, l));
                }
                "row" => {
                    let (k, l) = need_dims()?;
                    if rows.len() == k {
                        return err(line, format!("row: more than the declared {k} rows"));
                    }
                    rows.push(exact(line, "row", ints(line, "row", rest)?, l)?);
                }
                "b" => {
                    let (k, _) = need_dims()?;
                    if b.is_some() {
                        return err(line, "duplicate 'b'");
                    }
                    b = Some(exact(line, "b", ints(line, "b", rest)?, k)?);
                }
                "w" => {
                    let (_, l) = need_dims()?;
                    if w.is_some() {
                        return err(line, "duplicate 'w'");
                    }
                    w = Some(exact(line, "w", ints(line, "w", rest)?, l)?);
                }
                "field" => {
                    if field.is_some() {
                        return err(line, "duplicate 'field'");
                    }
                    field = Some(match rest {
                        ["rational"] => FieldSpec::Rational,
                        ["prime", p] => {
                            FieldSpec::Prime(parse_bigint(p).or_else(|_| err(line, format!("field: '{p}' is not an integer")))?)
                        }
                        _ => return err(line, "field: expected 'prime P' or 'rational'"),
                    });
                }
                other => return err(line, format!("unknown keyword '{other}'")),
            }
        }

        let end = last_line.max(1);
        let Some((k, _)) = dims else {
            return err(end, "missing 'dims'");
        };
        if rows.len() != k {
            return err(end, format!("declared {k} rows, found {}", rows.len()));
        }
        let Some(b) = b else {
            return err(end, "missing 'b'");
        };
        let cols = rows[0].len();
        let a = IntMatrix::from_rows(rows, cols).expect("row lengths checked");
        let factors = match (factors, &modulus) {
            (None, _) => None,
            (Some((line, _)), None) => return err(line, "'factors' given without 'modulus'"),
            (Some((line, f)), Some((_, n))) => {
                Some(PrimePowerFactorization::new(f, n).or_else(|e| err(line, format!("factors: {e}")))?)
            }
        };
        Ok(ProblemFile {
            modulus: modulus.map(|(_, n)| n),
            factors,
            a,
            b,
            w,
            field,
        })
    }
}
