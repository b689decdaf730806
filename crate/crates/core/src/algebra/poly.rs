use std::collections::BTreeMap;
use std::fmt;

use super::field::PrimeField;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Sparse polynomial over `F_p`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u32) -> Self {
        Self::term(field, c, Monomial::one(nvars))
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Self::term(field, 1, Monomial::var(nvars, i))
    }

    pub fn term(field: PrimeField, c: u32, m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(field, nvars);
        p.add_term(m, field.from_u64(c as u64));
        p
    }

    pub fn from_terms(
        field: PrimeField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u32)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, field.from_u64(c as u64));
        }
        p
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if self.is_zero() || !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.terms.keys().next().map(Monomial::degree).unwrap_or(0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCount {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.check_compatible(other).is_ok());
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(1 % self.field.characteristic()))
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        let c = f.from_u64(c as u64);
        if c == 0 {
            return Poly::zero(f, self.nvars);
        }
        Poly {
            field: f,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), f.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.check_compatible(other).is_ok());
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), self.field.mul(*a, *b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (n, a) in &self.terms {
            out.add_term(n.mul(m), f.mul(*a, c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^q` for `q` a power of the characteristic: coefficients are fixed
    /// by Frobenius on `F_p`, so only the exponents scale.
    pub fn frobenius_power(&self, q: u32) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.pow(q), *c)).collect(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(
                Monomial::from_exponents(&exps),
                f.mul(*c, f.from_u64(e as u64)),
            );
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = super::parse::default_variable_names(self.nvars);
        f.write_str(&super::parse::format_poly(self, &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn arithmetic_cancels_zero_terms() {
        let k = f(5);
        let x = Poly::var(k, 2, 0);
        let y = Poly::var(k, 2, 1);
        let s = x.add(&y);
        let d = s.sub(&y);
        assert_eq!(d, x);
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn frobenius_power_matches_pow() {
        let k = f(3);
        let x = Poly::var(k, 3, 0);
        let y = Poly::var(k, 3, 1);
        let z = Poly::var(k, 3, 2);
        let g = x.add(&y.scale(2)).add(&z.mul(&x));
        assert_eq!(g.frobenius_power(3), g.pow(3));
        assert_eq!(g.frobenius_power(9), g.pow(9));
    }

    #[test]
    fn derivative_and_homogeneity() {
        let k = f(5);
        let x = Poly::var(k, 3, 0);
        let y = Poly::var(k, 3, 1);
        let cube = x.pow(3).add(&y.pow(3));
        assert_eq!(cube.homogeneous_degree().unwrap(), 3);
        assert_eq!(cube.partial_derivative(0), x.pow(2).scale(3));
        assert!(x.add(&Poly::one(k, 3)).homogeneous_degree().is_err());
        assert!(Poly::zero(k, 3).homogeneous_degree().is_err());
    }
}
