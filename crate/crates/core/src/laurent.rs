//! Commutative Laurent polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::torus::{format_exponent, ExponentVector};

/// Exponent vector ↦ nonzero coefficient. Lexicographic order on exponents is
/// the monomial order used for division.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    m: usize,
    terms: BTreeMap<ExponentVector, i64>,
}

impl LaurentPolynomial {
    pub fn zero(m: usize) -> Self {
        LaurentPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(vec![0; m], 1)
    }

    pub fn monomial(a: ExponentVector, c: i64) -> Self {
        let mut p = Self::zero(a.len());
        p.add_term(a, c);
        p
    }

    pub fn variable(m: usize, i: usize) -> Self {
        let mut a = vec![0; m];
        a[i] = 1;
        Self::monomial(a, 1)
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (ExponentVector, i64)>) -> Self {
        let mut p = Self::zero(m);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, i64> {
        &self.terms
    }

    fn add_term(&mut self, a: ExponentVector, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(a.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (a, &c) in &self.terms {
            for (b, &e) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), c * e);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.m), |acc, _| acc.mul(self))
    }

    /// Exact quotient `self / d`; a nonzero remainder is an integrity error.
    ///
    /// Quotient terms are produced in decreasing lexicographic order. In an
    /// exact division every quotient exponent is at least
    /// `low(self) - low(d)`, so dropping below that bound proves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (Some((d_lead, &d_lc)), Some((d_low, _))) = (d.terms.iter().next_back(), d.terms.iter().next()) else {
            return Err(Error::Precondition("division by zero polynomial".into()));
        };
        let mut quotient = Self::zero(self.m);
        let mut rest = self.clone();
        let bound: Option<ExponentVector> = self
            .terms
            .keys()
            .next()
            .map(|low| low.iter().zip(d_low).map(|(a, b)| a - b).collect());
        while let Some((r_lead, &r_lc)) = rest.terms.iter().next_back() {
            let exp: ExponentVector = r_lead.iter().zip(d_lead).map(|(a, b)| a - b).collect();
            if r_lc % d_lc != 0 || bound.as_ref().is_some_and(|b| exp < *b) {
                return Err(Error::Integrity(format!(
                    "division leaves a remainder (stuck at {})",
                    format_exponent(r_lead)
                )));
            }
            let term = Self::monomial(exp, r_lc / d_lc);
            rest = rest.sub(&term.mul(d));
            quotient = quotient.add(&term);
        }
        Ok(quotient)
    }
}

impl fmt::Display for LaurentPolynomial {
    /// One term per line: `c x^{(a_1,...,a_m)}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (a, c) in &self.terms {
            writeln!(f, "{c} {}", format_exponent(a))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_recovers_factor() {
        let x = LaurentPolynomial::variable(2, 0);
        let y = LaurentPolynomial::variable(2, 1);
        let a = x.add(&y).pow(3);
        let b = x.sub(&LaurentPolynomial::monomial(vec![-1, 2], 3));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
    }

    #[test]
    fn remainder_is_detected() {
        let x = LaurentPolynomial::variable(1, 0);
        let one = LaurentPolynomial::one(1);
        assert!(matches!(one.div_exact(&x.add(&one)), Err(Error::Integrity(_))));
        let two = LaurentPolynomial::monomial(vec![0], 2);
        assert!(one.div_exact(&two).is_err());
    }

    #[test]
    fn monomial_division_is_exact() {
        let p = LaurentPolynomial::from_terms(2, [(vec![1, 0], 1), (vec![0, 1], 1)]);
        let q = p.div_exact(&LaurentPolynomial::variable(2, 0)).unwrap();
        assert_eq!(q, LaurentPolynomial::from_terms(2, [(vec![0, 0], 1), (vec![-1, 1], 1)]));
    }
}
