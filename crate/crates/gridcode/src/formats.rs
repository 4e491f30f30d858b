//! Text formats for truth tables and polynomials.
//!
//! A truth table is a header line `n p` followed by `2^n` residues in
//! bitmask order, separated by any whitespace.
//!
//! A polynomial is a header line `n p` followed by one line per nonzero
//! term, `S:coeff`, where `S` lists the variables of the monomial as
//! comma-separated 1-based indices and the empty monomial is written
//! `0-mask`. Blank lines and lines starting with `#` are ignored in both
//! formats.

use std::fmt::Write as _;

use gridcode_core::{CubeFunction, MultilinearPoly, PrimeField};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] gridcode_core::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: usize, text: &str) -> Result<(u32, PrimeField), FormatError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let [n, p] = parts[..] else {
        return Err(parse_err(line, "header must be `n p`"));
    };
    let n: u32 = n.parse().map_err(|_| parse_err(line, format!("bad n `{n}`")))?;
    let p: u64 = p.parse().map_err(|_| parse_err(line, format!("bad p `{p}`")))?;
    Ok((n, PrimeField::new(p)?))
}

pub fn read_truth_table(text: &str) -> Result<CubeFunction, FormatError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, field) = parse_header(line, header)?;
    if n > gridcode_core::cube::MAX_VARIABLES {
        return Err(parse_err(line, format!("n = {n} is too large")));
    }
    let mut values = Vec::with_capacity(1 << n);
    for (line, text) in lines {
        for tok in text.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| parse_err(line, format!("bad residue `{tok}`")))?;
            if v >= field.modulus() {
                return Err(parse_err(line, format!("residue {v} not below p = {}", field.modulus())));
            }
            values.push(v);
        }
    }
    if values.len() != 1 << n {
        return Err(parse_err(0, format!("expected {} values, found {}", 1u64 << n, values.len())));
    }
    Ok(CubeFunction::new(n, field, values)?)
}

/// 32 residues per line.
pub fn write_truth_table(f: &CubeFunction) -> String {
    let mut out = format!("{} {}\n", f.n(), f.field().modulus());
    for chunk in f.values().chunks(32) {
        let row: Vec<String> = chunk.iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_monomial(mask: u64) -> String {
    if mask == 0 {
        return "0-mask".to_string();
    }
    let idx: Vec<String> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    idx.join(",")
}

fn parse_monomial(line: usize, n: u32, text: &str) -> Result<u64, FormatError> {
    if text == "0-mask" {
        return Ok(0);
    }
    let mut mask = 0u64;
    for tok in text.split(',') {
        let i: u32 = tok.trim().parse().map_err(|_| parse_err(line, format!("bad index `{tok}`")))?;
        if i == 0 || i > n {
            return Err(parse_err(line, format!("index {i} outside 1..={n}")));
        }
        if mask >> (i - 1) & 1 == 1 {
            return Err(parse_err(line, format!("index {i} repeated")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

pub fn read_polynomial(text: &str) -> Result<MultilinearPoly, FormatError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, field) = parse_header(line, header)?;
    if n > 63 {
        return Err(parse_err(line, format!("n = {n} is too large")));
    }
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (line, text) in lines {
        let (mono, coeff) = text.split_once(':').ok_or_else(|| parse_err(line, "term must be `S:coeff`"))?;
        let mask = parse_monomial(line, n, mono.trim())?;
        if !seen.insert(mask) {
            return Err(parse_err(line, format!("monomial `{}` repeated", mono.trim())));
        }
        let c: i64 = coeff.trim().parse().map_err(|_| parse_err(line, format!("bad coefficient `{coeff}`")))?;
        terms.push((mask, field.from_i64(c)));
    }
    Ok(MultilinearPoly::from_terms(n, field, terms)?)
}

/// Terms in ascending monomial order, zero coefficients omitted.
pub fn write_polynomial(p: &MultilinearPoly) -> String {
    let mut out = format!("{} {}\n", p.n(), p.field().modulus());
    for (mask, c) in p.terms() {
        writeln!(out, "{}:{}", format_monomial(mask), c.value()).expect("writing to a string");
    }
    out
}

/// Single-line form `S:c;S:c`, or `0` for the zero polynomial.
pub fn inline_polynomial(p: &MultilinearPoly) -> String {
    let terms: Vec<String> = p.terms().map(|(m, c)| format!("{}:{}", format_monomial(m), c.value())).collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(";")
    }
}
