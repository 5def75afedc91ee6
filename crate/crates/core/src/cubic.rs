//! Integer cubic forms in five variables and their text format.
//!
//! One monomial per line, `e1 e2 e3 e4 e5 : c`, with `#` starting a comment.
//! Lines may come in any order; repeated exponent vectors are summed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{Fe, FieldOps};

pub const NVARS: usize = 5;

pub type Exponent = [u8; NVARS];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("line {line}: expected `e1 e2 e3 e4 e5 : c`")]
    Malformed { line: usize },
    #[error("line {line}: bad exponent {token:?}")]
    BadExponent { line: usize, token: String },
    #[error("line {line}: monomial has degree {degree}, expected 3")]
    WrongDegree { line: usize, degree: u32 },
    #[error("line {line}: malformed integer coefficient {token:?}")]
    BadCoefficient { line: usize, token: String },
    #[error("the form has no nonzero coefficient")]
    Empty,
    #[error("unknown builtin cubic {0:?} (expected paper-x, fermat or klein)")]
    UnknownBuiltin(String),
}

/// A nonzero homogeneous cubic with integer coefficients in `x1..x5`.
///
/// Monomials are kept sorted by exponent vector, which is also the order of
/// the canonical text used for hashing. Coefficients are never rescaled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    coeffs: BTreeMap<Exponent, BigInt>,
    pub name: Option<String>,
}

impl CubicForm {
    pub fn new<I>(terms: I) -> Result<Self, CubicError>
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut coeffs: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            let degree: u32 = e.iter().map(|&x| x as u32).sum();
            if degree != 3 {
                return Err(CubicError::WrongDegree { line: 0, degree });
            }
            *coeffs.entry(e).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        if coeffs.is_empty() {
            return Err(CubicError::Empty);
        }
        Ok(CubicForm { coeffs, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Canonical text: one sorted monomial per line, no comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.coeffs {
            let _ = writeln!(out, "{} {} {} {} {} : {}", e[0], e[1], e[2], e[3], e[4], c);
        }
        out
    }

    /// Hex SHA-256 of the canonical text; the label is not part of it.
    pub fn canonical_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Same form with variables renamed: variable `i` of the result is
    /// variable `perm[i]` of `self`.
    pub fn permute_variables(&self, perm: [usize; NVARS]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                let mut f = [0u8; NVARS];
                for i in 0..NVARS {
                    f[i] = e[perm[i]];
                }
                (f, c.clone())
            })
            .collect();
        CubicForm {
            coeffs,
            name: self.name.clone(),
        }
    }

    /// Formal partial derivative with respect to variable `var` (a quadric),
    /// as a list of terms.
    pub fn partial_derivative(&self, var: usize) -> Vec<(Exponent, BigInt)> {
        self.coeffs
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut f = *e;
                f[var] -= 1;
                (f, c * BigInt::from(e[var]))
            })
            .collect()
    }

    pub fn reduce<F: FieldOps + ?Sized>(&self, field: &F) -> FieldForm {
        FieldForm::from_terms(field, self.coeffs.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// Fermat cubic `x1^3 + ... + x5^3`.
    pub fn fermat() -> Self {
        let terms = (0..NVARS).map(|i| {
            let mut e = [0u8; NVARS];
            e[i] = 3;
            (e, BigInt::from(1))
        });
        Self::new(terms).unwrap().with_name("fermat")
    }

    /// Klein cubic `x1^2 x2 + x2^2 x3 + x3^2 x4 + x4^2 x5 + x5^2 x1`.
    pub fn klein() -> Self {
        let terms = (0..NVARS).map(|i| {
            let mut e = [0u8; NVARS];
            e[i] = 2;
            e[(i + 1) % NVARS] = 1;
            (e, BigInt::from(1))
        });
        Self::new(terms).unwrap().with_name("klein")
    }

    /// The integral cubic threefold whose reduction mod 3 has 22 points,
    /// one line and an absolutely simple intermediate Jacobian.
    pub fn paper_x() -> Self {
        Self::from_text(PAPER_X_TEXT).unwrap().with_name("paper-x")
    }

    pub fn builtin(name: &str) -> Result<Self, CubicError> {
        match name {
            "paper-x" => Ok(Self::paper_x()),
            "fermat" => Ok(Self::fermat()),
            "klein" => Ok(Self::klein()),
            other => Err(CubicError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn from_text(text: &str) -> Result<Self, CubicError> {
        parse_cubic(text)
    }
}

impl std::fmt::Display for CubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mut wrote = false;
            if a != BigInt::from(1) {
                write!(f, "{a}")?;
                wrote = true;
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                write!(f, "x{}", i + 1)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parses the monomial-per-line text format.
pub fn parse_cubic(text: &str) -> Result<CubicForm, CubicError> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (lhs, rhs) = body.split_once(':').ok_or(CubicError::Malformed { line })?;
        let exps: Vec<&str> = lhs.split_whitespace().collect();
        if exps.len() != NVARS {
            return Err(CubicError::Malformed { line });
        }
        let mut e = [0u8; NVARS];
        for (slot, tok) in e.iter_mut().zip(&exps) {
            *slot = tok.parse().map_err(|_| CubicError::BadExponent {
                line,
                token: tok.to_string(),
            })?;
        }
        let degree: u32 = e.iter().map(|&x| x as u32).sum();
        if degree != 3 {
            return Err(CubicError::WrongDegree { line, degree });
        }
        let tok = rhs.trim();
        let c: BigInt = tok.parse().map_err(|_| CubicError::BadCoefficient {
            line,
            token: tok.to_string(),
        })?;
        terms.push((e, c));
    }
    CubicForm::new(terms)
}

const PAPER_X_TEXT: &str = "\
3 0 0 0 0 : 1
2 1 0 0 0 : 2
1 2 0 0 0 : 2
2 0 1 0 0 : 1
1 1 1 0 0 : 2
1 0 2 0 0 : 2
0 1 2 0 0 : 2
0 0 3 0 0 : 1
2 0 0 1 0 : 1
1 1 0 1 0 : 2
0 2 0 1 0 : 1
0 1 1 1 0 : 1
1 0 0 2 0 : 1
0 0 1 2 0 : 2
0 0 0 3 0 : 1
0 2 0 0 1 : 1
0 1 1 0 1 : 2
0 0 2 0 1 : 2
1 0 0 1 1 : 1
0 1 0 1 1 : 1
0 0 0 2 1 : 1
0 1 0 0 2 : 1
0 0 0 1 2 : 2
0 0 0 0 3 : 1
";

/// A form reduced into a particular finite field, ready for evaluation.
#[derive(Clone, Debug)]
pub struct FieldForm {
    pub terms: Vec<(Exponent, Fe)>,
}

impl FieldForm {
    pub fn from_terms<F, I>(field: &F, terms: I) -> Self
    where
        F: FieldOps + ?Sized,
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let terms = terms
            .into_iter()
            .map(|(e, c)| (e, field.from_bigint(&c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        FieldForm { terms }
    }

    pub fn eval<F: FieldOps + ?Sized>(&self, field: &F, x: &[Fe; NVARS]) -> Fe {
        let mut pows = [[Fe::ONE; 4]; NVARS];
        for i in 0..NVARS {
            pows[i][1] = x[i];
            pows[i][2] = field.mul(x[i], x[i]);
            pows[i][3] = field.mul(pows[i][2], x[i]);
        }
        let mut acc = Fe::ZERO;
        for (e, c) in &self.terms {
            let mut t = *c;
            for i in 0..NVARS {
                if e[i] > 0 {
                    t = field.mul(t, pows[i][e[i] as usize]);
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
