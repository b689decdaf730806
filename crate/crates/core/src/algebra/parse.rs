//! Text format for polynomials: sums of terms `c*x^a*y^b`, where `^1`, `*1`
//! and a unit coefficient may be left out. The printer is canonical: terms in
//! descending graded-lex order, coefficients as symmetric residues.

use super::field::PrimeField;
use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{Error, Result};

pub fn default_variable_names(nvars: usize) -> Vec<String> {
    const XYZ: [&str; 3] = ["x", "y", "z"];
    if nvars <= 3 {
        XYZ[..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

pub fn format_poly(poly: &Poly, names: &[String]) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let field = poly.field();
    let mut out = String::new();
    for (i, (m, c)) in poly.terms().rev().enumerate() {
        let s = field.signed(c);
        if s < 0 {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let abs = s.unsigned_abs();
        let mut factors: Vec<String> = Vec::new();
        if abs != 1 || m.degree() == 0 {
            factors.push(abs.to_string());
        }
        for (e, name) in m.exponents().iter().zip(names) {
            match e {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

pub fn parse_poly(text: &str, field: PrimeField, names: &[String]) -> Result<Poly> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
        names,
    }
    .parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: PrimeField,
    names: &'a [String],
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly> {
        let nvars = self.names.len();
        let mut poly = Poly::zero(self.field, nvars);
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if !first => break,
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{}'", c as char))),
                None => unreachable!(),
            };
            first = false;
            let (m, mut c) = self.term()?;
            if negative {
                c = self.field.neg(c);
            }
            poly.add_term(m, c);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(Monomial, u32)> {
        let mut coeff = 1 % self.field.characteristic();
        let mut exps = vec![0u32; self.names.len()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    coeff = self.field.mul(coeff, self.field.from_u64(n));
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let ident = self.ident().to_string();
                    let idx = self
                        .names
                        .iter()
                        .position(|n| *n == ident)
                        .ok_or_else(|| Error::Parse {
                            offset: start,
                            message: format!("unknown variable '{ident}'"),
                        })?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let n = self.number()?;
                        e = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .ok_or_else(|| self.err("exponent too large"))?;
                }
                Some(c) => return Err(self.err(format!("unexpected '{}'", c as char))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_exponents(&exps), coeff))
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse {
                offset: start,
                message: "number out of range".into(),
            })
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> Vec<String> {
        default_variable_names(3)
    }

    #[test]
    fn parses_elided_forms() {
        let k = PrimeField::new(7).unwrap();
        let p = parse_poly("x^3 + y^3 + z^3", k, &xyz()).unwrap();
        assert_eq!(p.len(), 3);
        let q = parse_poly("2*x^1*y - 3*z*1 + 1*x*y*5", k, &xyz()).unwrap();
        // 2xy + 5xy = 0 mod 7
        assert_eq!(format_poly(&q, &xyz()), "-3*z");
        assert_eq!(format_poly(&parse_poly("-x", k, &xyz()).unwrap(), &xyz()), "-x");
        assert_eq!(format_poly(&parse_poly("0", k, &xyz()).unwrap(), &xyz()), "0");
        assert_eq!(format_poly(&parse_poly("8", k, &xyz()).unwrap(), &xyz()), "1");
    }

    #[test]
    fn canonical_order() {
        let k = PrimeField::new(5).unwrap();
        let p = parse_poly("z^2 + x*y + x^2", k, &xyz()).unwrap();
        assert_eq!(format_poly(&p, &xyz()), "x^2+x*y+z^2");
    }

    #[test]
    fn reports_errors() {
        let k = PrimeField::new(5).unwrap();
        assert!(matches!(parse_poly("x + w", k, &xyz()), Err(Error::Parse { offset: 4, .. })));
        assert!(parse_poly("", k, &xyz()).is_err());
        assert!(parse_poly("x +", k, &xyz()).is_err());
        assert!(parse_poly("x y", k, &xyz()).is_err());
        assert!(parse_poly("x^", k, &xyz()).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = (u64, Vec<(Vec<u32>, u32)>)> {
        (
            prop::sample::select(vec![2u64, 3, 5, 7, 13]),
            prop::collection::vec((prop::collection::vec(0u32..5, 3), 0u32..100), 0..8),
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip((p, terms) in arb_poly()) {
            let k = PrimeField::new(p).unwrap();
            let poly = Poly::from_terms(k, 3, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)));
            let text = format_poly(&poly, &xyz());
            let back = parse_poly(&text, k, &xyz()).unwrap();
            prop_assert_eq!(&back, &poly);
            prop_assert_eq!(format_poly(&back, &xyz()), text);
        }
    }
}
