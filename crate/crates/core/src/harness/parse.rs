//! Complex-number arguments for the command line: `a+bi`, `-2.5i`, `1e-3`, and the
//! structured forms `q^:<int>` and `z*q^:<int>` which keep exact q-exponents.

use crate::tracked::{sym, TrackedArg};
use crate::C64;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    /// Byte offset of the offending character.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\n  {}\n  {}^", self.msg, self.input, " ".repeat(self.pos))
    }
}

impl std::error::Error for ParseError {}

fn err(input: &str, pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        input: input.into(),
        pos,
        msg: msg.into(),
    }
}

/// Length of the longest prefix of `s` that parses as an unsigned float.
fn float_prefix(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let st = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > st
    };
    let mut any = digits(&mut i);
    if i < b.len() && b[i] == b'.' {
        i += 1;
        any |= digits(&mut i);
    }
    if !any {
        return 0;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if digits(&mut j) {
            i = j;
        }
    }
    i
}

/// Parse `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (whitespace ignored).
pub fn parse_complex(input: &str) -> Result<C64, ParseError> {
    // Stripped text plus the byte offset in `input` of each of its characters.
    let (s, at): (String, Vec<usize>) = input
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (c, i))
        .unzip();
    let orig = |i: usize| at.get(i).copied().unwrap_or(input.len());
    if s.is_empty() {
        return Err(err(input, 0, "empty number"));
    }
    if !s.is_ascii() {
        let bad = s.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(err(input, orig(s[..bad].chars().count()), "unexpected character"));
    }
    let b = s.as_bytes();
    let mut z = C64::new(0.0, 0.0);
    let mut pos = 0;
    let (mut seen_re, mut seen_im) = (false, false);
    while pos < b.len() {
        let start = pos;
        let mut sign = 1.0;
        match b[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1.0;
                pos += 1
            }
            _ if pos > 0 => return Err(err(input, orig(pos), "expected '+' or '-'")),
            _ => {}
        }
        let n = float_prefix(&s[pos..]);
        let mag = if n == 0 {
            1.0
        } else {
            s[pos..pos + n]
                .parse::<f64>()
                .map_err(|e| err(input, orig(pos), e.to_string()))?
        };
        pos += n;
        let imag = pos < b.len() && (b[pos] == b'i' || b[pos] == b'j');
        if imag {
            pos += 1;
        } else if n == 0 {
            return Err(err(input, orig(pos), "expected a number"));
        }
        if pos < b.len() && b[pos] != b'+' && b[pos] != b'-' {
            return Err(err(input, orig(pos), "unexpected character"));
        }
        let seen = if imag { &mut seen_im } else { &mut seen_re };
        if *seen {
            return Err(err(input, orig(start), "duplicate real or imaginary part"));
        }
        *seen = true;
        if imag {
            z.im = sign * mag;
        } else {
            z.re = sign * mag;
        }
    }
    Ok(z)
}

fn parse_int(input: &str, s: &str, offset: usize) -> Result<i64, ParseError> {
    s.parse::<i64>()
        .map_err(|_| err(input, offset, format!("expected an integer exponent, got '{s}'")))
}

/// Parse a theta argument. `q^:<int>` is an exact power of q, `z*q^:<int>` multiplies it by
/// the spectral variable (which must then be supplied), anything else is a raw constant.
pub fn parse_tracked(input: &str, z: Option<C64>) -> Result<TrackedArg, ParseError> {
    let s = input.trim();
    let lead = input.len() - input.trim_start().len();
    if let Some(rest) = s.strip_prefix("q^:") {
        return Ok(TrackedArg::qpow(parse_int(input, rest, lead + 3)?));
    }
    if let Some(rest) = s.strip_prefix("z*q^:") {
        let e = parse_int(input, rest, lead + 5)?;
        let z = z.ok_or_else(|| err(input, lead, "'z*q^:' needs --z"))?;
        return Ok(TrackedArg::monomial(e, &[(sym::Z, z, 1)]));
    }
    if s == "z" {
        let z = z.ok_or_else(|| err(input, lead, "'z' needs --z"))?;
        return Ok(TrackedArg::symbol(sym::Z, z));
    }
    parse_complex(input).map(TrackedArg::raw)
}
