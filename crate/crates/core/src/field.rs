//! Arithmetic in the prime field F_q.
//!
//! Elements are plain `u8` values in `0..q`; the field order on them is the
//! numeric order `0 < 1 < ... < q-1`, which is what the subspace order uses.

use crate::error::{input, Result};

/// The prime field with `q` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
    inv: Vec<u8>,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !(2..=251).contains(&q) || !is_prime(q) {
            return input(format!("field order {q} is not a prime below 256"));
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            // a^(q-2) = a^-1
            inv[a as usize] = pow_mod(a, q - 2, q) as u8;
        }
        Ok(PrimeField { q: q as u8, inv })
    }

    #[inline]
    pub fn order(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    /// `true` when `a` is a valid element of this field.
    #[inline]
    pub fn contains(&self, a: u8) -> bool {
        a < self.q
    }
}

fn pow_mod(base: u32, mut exp: u32, m: u32) -> u32 {
    let mut result = 1u64;
    let mut b = base as u64 % m as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m as u64;
        }
        b = b * b % m as u64;
        exp >>= 1;
    }
    result as u32
}

pub(crate) fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for q in [2, 3, 5, 7, 11] {
            let f = PrimeField::new(q).unwrap();
            for a in 1..q as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.inv(2), 2);
    }

    #[test]
    fn rejects_non_primes() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(257).is_err());
    }

    #[test]
    fn sub_and_neg() {
        let f = PrimeField::new(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(f.sub(a, b), b), a);
            }
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }
}
