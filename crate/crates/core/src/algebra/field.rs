//! Arithmetic in the prime field `F_p`.
//!
//! Elements are plain `u32` residues in `0..p`; the field value only carries
//! the characteristic. All products are formed in `u64`, so every prime up to
//! `2^31 - 1` is safe.

use crate::error::{Error, Result};

pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&p) {
            return if p < 2 {
                Err(Error::NotPrime(p))
            } else {
                Err(Error::CharacteristicOutOfRange(p))
            };
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Residue of an arbitrary integer.
    #[inline]
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn from_u64(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a - b * c`
    #[inline]
    pub fn sub_mul(&self, a: u32, b: u32, c: u32) -> u32 {
        self.sub(a, self.mul(b, c))
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.from_i64(t0))
    }

    /// Symmetric representative in `(-p/2, p/2]`, used by the printer.
    pub fn signed(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(matches!(
            PrimeField::new(1 << 31),
            Err(Error::CharacteristicOutOfRange(_))
        ));
        assert!(PrimeField::new(MAX_CHARACTERISTIC).is_ok());
    }

    #[test]
    fn signed_representative() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.signed(6), -1);
        assert_eq!(f.signed(3), 3);
        assert_eq!(f.signed(4), -3);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.signed(1), 1);
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7, 101, 65521, MAX_CHARACTERISTIC]), a in 1u64..u64::MAX) {
            let f = PrimeField::new(p).unwrap();
            let a = f.from_u64(a);
            prop_assume!(a != 0);
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), 1);
        }

        #[test]
        fn fermat_little(a in 0u64..1_000_000) {
            let f = PrimeField::new(65521).unwrap();
            let a = f.from_u64(a);
            prop_assert_eq!(f.pow(a, 65521), a);
        }
    }
}
