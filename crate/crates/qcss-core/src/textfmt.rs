//! Compact text syntax for field elements and modulus polynomials, used by
//! the CLI flags and the matrix-file headers.
//!
//! Grammar (whitespace and `*` are ignored):
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := int | [int] var [['^'] int]
//! var   := 'x' | 'a' | 'alpha' | 'g'
//! ```
//!
//! `x`, `a` and `alpha` all denote the residue class of the modulus variable;
//! `g` denotes the field's primitive element and is only valid in element
//! expressions (not in modulus polynomials). Examples: `x4+x+2` is
//! x^4 + x + 2, `a2-2` is alpha^2 - 2, `1+2a` and `g+1` mean what they say.
//!
//! Canonical output (see [`format_element`]) prints alpha-form with the
//! variable `a` and no `^`, e.g. `1+2a`, `a3+2a`, `0`.

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
    #[error("unknown variable `{0}` (expected x, a, alpha, or g)")]
    UnknownVariable(String),
    #[error("`g` is not allowed in a modulus polynomial")]
    GeneratorInPolynomial,
    #[error("the residue class is undefined for a degree-1 field")]
    NoResidueClass,
}

#[derive(Debug, PartialEq, Eq)]
struct Term {
    sign_negative: bool,
    coefficient: u64,
    variable: Option<Variable>,
    power: u32,
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Variable {
    Residue,
    Generator,
}

fn tokenize(input: &str) -> Result<Vec<Term>, ParseError> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if cleaned.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut terms = Vec::new();
    let mut rest = cleaned.as_str();
    let mut negative = false;
    if let Some(r) = rest.strip_prefix('-') {
        negative = true;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let split = rest
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let (raw, tail) = rest.split_at(split);
        terms.push(parse_term(raw, negative)?);
        if let Some(t) = tail.strip_prefix('+') {
            negative = false;
            rest = t;
        } else if let Some(t) = tail.strip_prefix('-') {
            negative = true;
            rest = t;
        } else {
            rest = tail;
        }
    }
    if terms.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(terms)
}

fn parse_term(raw: &str, sign_negative: bool) -> Result<Term, ParseError> {
    if raw.is_empty() {
        return Err(ParseError::BadTerm(raw.to_string()));
    }
    let digits_end = raw.find(|c: char| !c.is_ascii_digit()).unwrap_or(raw.len());
    let (digits, rest) = raw.split_at(digits_end);
    let coefficient = if digits.is_empty() {
        1
    } else {
        digits
            .parse::<u64>()
            .map_err(|_| ParseError::BadTerm(raw.to_string()))?
    };
    if rest.is_empty() {
        if digits.is_empty() {
            return Err(ParseError::BadTerm(raw.to_string()));
        }
        return Ok(Term {
            sign_negative,
            coefficient,
            variable: None,
            power: 0,
        });
    }
    let name_end = rest
        .find(|c: char| !c.is_ascii_alphabetic())
        .unwrap_or(rest.len());
    let (name, mut pow_str) = rest.split_at(name_end);
    let variable = match name {
        "x" | "a" | "alpha" => Variable::Residue,
        "g" => Variable::Generator,
        other => return Err(ParseError::UnknownVariable(other.to_string())),
    };
    pow_str = pow_str.strip_prefix('^').unwrap_or(pow_str);
    let power = if pow_str.is_empty() {
        1
    } else {
        pow_str
            .parse::<u32>()
            .map_err(|_| ParseError::BadTerm(raw.to_string()))?
    };
    Ok(Term {
        sign_negative,
        coefficient,
        variable: Some(variable),
        power,
    })
}

/// Parse a modulus polynomial over F_p, e.g. `x4+x3+2x2+2`.
/// Returns constant-first coefficients up to the highest power present.
pub fn parse_modulus(input: &str, p: u64) -> Result<Vec<u64>, ParseError> {
    let terms = tokenize(input)?;
    let degree = terms
        .iter()
        .map(|t| if t.variable.is_some() { t.power } else { 0 })
        .max()
        .unwrap_or(0);
    let mut coeffs = vec![0u64; degree as usize + 1];
    for t in &terms {
        if t.variable == Some(Variable::Generator) {
            return Err(ParseError::GeneratorInPolynomial);
        }
        let idx = if t.variable.is_some() { t.power as usize } else { 0 };
        let c = t.coefficient % p;
        let signed = if t.sign_negative { (p - c) % p } else { c };
        coeffs[idx] = (coeffs[idx] + signed) % p;
    }
    Ok(coeffs)
}

/// Parse an element expression in the given field, e.g. `1+2a`, `g+1`, `-1`.
pub fn parse_element(input: &str, field: &FieldSpec) -> Result<FieldElement, ParseError> {
    let terms = tokenize(input)?;
    let p = field.p();
    let mut acc = FieldElement::ZERO;
    for t in &terms {
        let base = match t.variable {
            None => FieldElement::ONE,
            Some(Variable::Residue) => field.alpha().ok_or(ParseError::NoResidueClass)?,
            Some(Variable::Generator) => field.generator(),
        };
        let powed = field
            .pow(base, t.power as i64)
            .expect("nonzero base with nonnegative power");
        let coeff = field
            .element(t.coefficient % p)
            .expect("reduced coefficient is in range");
        let mut term = field.mul(coeff, powed);
        if t.sign_negative {
            term = field.neg(term);
        }
        acc = field.add(acc, term);
    }
    Ok(acc)
}

/// Canonical alpha-form of an element: `0`, `2`, `1+2a`, `a3+2a`, ...
/// Round-trips through [`parse_element`].
pub fn format_element(field: &FieldSpec, x: FieldElement) -> String {
    let coeffs = field.coeffs(x);
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "a".to_string(),
            (1, c) => format!("{c}a"),
            (i, 1) => format!("a{i}"),
            (i, c) => format!("{c}a{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Canonical form of a modulus polynomial with variable `x`, highest power
/// first, e.g. `x4+x3+2x2+2`.
pub fn format_modulus(p: u64, coeffs: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        let c = c % p;
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x{i}"),
            (i, c) => format!("{c}x{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}
