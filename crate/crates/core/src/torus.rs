//! Exact arithmetic in the quantum torus with coefficients in Z[q^{±1/2}].
//!
//! Every q-exponent is stored as an integer multiple of q^{1/2}.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::seed::{LambdaForm, QuantumSeed};

pub type ExponentVector = Vec<i64>;

/// Laurent polynomial in q^{1/2}: exponent (in units of q^{1/2}) ↦ coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QHalfLaurent {
    terms: BTreeMap<i64, i64>,
}

impl QHalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::q_half_pow(0)
    }

    /// `q^{k/2}`.
    pub fn q_half_pow(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, 1);
        QHalfLaurent { terms }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in pairs {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(k).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, other: &QHalfLaurent) {
        for (&k, &c) in &other.terms {
            self.add_term(k, c);
        }
    }

    pub fn mul(&self, other: &QHalfLaurent) -> QHalfLaurent {
        let mut out = Self::zero();
        for (&a, &c) in &self.terms {
            for (&b, &e) in &other.terms {
                out.add_term(a + b, c * e);
            }
        }
        out
    }

    /// Multiplies by `q^{k/2}`.
    pub fn shift(&self, k: i64) -> QHalfLaurent {
        QHalfLaurent {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn neg(&self) -> QHalfLaurent {
        QHalfLaurent {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }

    /// q^{1/2} ↦ q^{-1/2}.
    pub fn bar(&self) -> QHalfLaurent {
        QHalfLaurent {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Value at q^{1/2} = 1.
    pub fn at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }
}

impl fmt::Display for QHalfLaurent {
    /// Signed sum of `q^{k/2}`, highest power first; `q^{0/2}` prints as 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().rev().enumerate() {
            let sign = match (i, c < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mag = c.unsigned_abs();
            if k == 0 {
                write!(f, "{sign}{mag}")?;
            } else if mag == 1 {
                write!(f, "{sign}q^{{{k}/2}}")?;
            } else {
                write!(f, "{sign}{mag}q^{{{k}/2}}")?;
            }
        }
        Ok(())
    }
}

/// Element of the quantum torus: normalized monomials X^a with Z[q^{±1/2}]
/// coefficients, kept in lexicographic order of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusElement {
    m: usize,
    terms: BTreeMap<ExponentVector, QHalfLaurent>,
}

impl TorusElement {
    pub fn zero(m: usize) -> Self {
        TorusElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(vec![0; m])
    }

    /// The normalized monomial X^a.
    pub fn monomial(a: ExponentVector) -> Self {
        let mut x = Self::zero(a.len());
        x.terms.insert(a, QHalfLaurent::one());
        x
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &QHalfLaurent)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &[i64]) -> Option<&QHalfLaurent> {
        self.terms.get(a)
    }

    pub fn add_term(&mut self, a: ExponentVector, c: &QHalfLaurent) -> Result<()> {
        self.check_len(a.len())?;
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(a).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_len(other.m)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.add(&other.map_coefficients(QHalfLaurent::neg))
    }

    /// Multiplies every coefficient by `q^{k/2}`.
    pub fn shift_q(&self, k: i64) -> TorusElement {
        self.map_coefficients(|c| c.shift(k))
    }

    /// Product using X^a X^b = q^{Λ(a,b)/2} X^{a+b}.
    pub fn multiply(&self, other: &TorusElement, lambda: &LambdaForm) -> Result<TorusElement> {
        self.check_len(other.m)?;
        self.check_len(lambda.size())?;
        let mut out = TorusElement::zero(self.m);
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                let sum: ExponentVector = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(sum, &c.mul(e).shift(lambda.pair(a, b)))?;
            }
        }
        Ok(out)
    }

    /// q^{1/2} ↦ q^{-1/2} on coefficients, normalized monomials fixed.
    pub fn bar(&self) -> TorusElement {
        self.map_coefficients(QHalfLaurent::bar)
    }

    /// Coefficients evaluated at q^{1/2} = 1, zero results dropped.
    pub fn specialize_q1(&self) -> BTreeMap<ExponentVector, i64> {
        self.terms
            .iter()
            .map(|(a, c)| (a.clone(), c.at_one()))
            .filter(|&(_, v)| v != 0)
            .collect()
    }

    fn map_coefficients(&self, f: impl Fn(&QHalfLaurent) -> QHalfLaurent) -> TorusElement {
        TorusElement {
            m: self.m,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), f(c))).collect(),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.m {
            return Err(Error::Dimension {
                expected: format!("length {}", self.m),
                found: format!("length {len}"),
            });
        }
        Ok(())
    }
}

/// Exponent vector rendered as `x^{(a_1,...,a_m)}`.
pub fn format_exponent(a: &[i64]) -> String {
    let parts: Vec<String> = a.iter().map(i64::to_string).collect();
    format!("x^{{({})}}", parts.join(","))
}

impl fmt::Display for TorusElement {
    /// Canonical text: one term per line, `(coefficient) x^{(a_1,...,a_m)}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "0");
        }
        for (a, c) in &self.terms {
            writeln!(f, "({c}) {}", format_exponent(a))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// n(λ) with Z_1⋯Z_d = q^{n(λ)/2} X^{Σ}, where Z_i = Π_- for `Minus` and
/// Π_+ for `Plus`, Π_± = X^{-e_τ + (b_τ)_±}.
pub fn product_sequence_q_exponent(signs: &[Sign], seed: &QuantumSeed, tau: usize) -> Result<i64> {
    if tau >= seed.n() {
        return Err(Error::OutOfRange {
            what: "direction",
            index: tau,
            valid: format!("0..{}", seed.n()),
        });
    }
    let m = seed.m();
    let mut plus = seed.btilde().column_positive(tau);
    let mut minus = seed.btilde().column_negative(tau);
    plus[tau] -= 1;
    minus[tau] -= 1;
    let mut acc = vec![0; m];
    let mut n = 0;
    for s in signs {
        let v = if *s == Sign::Plus { &plus } else { &minus };
        n += seed.lambda().pair(&acc, v);
        for (x, y) in acc.iter_mut().zip(v) {
            *x += y;
        }
    }
    Ok(n)
}
