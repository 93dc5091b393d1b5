//! Prime-field arithmetic: integers modulo a prime `p`, exact.
//!
//! Elements are plain `u64` values in `[0, p)`; all products go through
//! `u128` so any prime below 2^63 is safe.  The default modulus is the
//! Mersenne prime 2^31 - 1, large enough that counting arguments with at
//! most 2^31 - 2 terms transfer from the field back to the integers.

use crate::error::{Error, Result};

/// Default modulus: 2^31 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

/// Deterministic Miller-Rabin, valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |b: u64, mut e: u64| -> u64 {
        let m = n as u128;
        let mut acc: u128 = 1;
        let mut bb = b as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % m;
            }
            bb = bb * bb % m;
            e >>= 1;
        }
        acc as u64
    };
    // These witnesses decide primality for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime field, carrying its modulus.  Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf {
    p: u64,
}

impl Gf {
    /// Builds the field, refusing non-primes and primes that would overflow
    /// `u128` intermediates.
    pub fn new(p: u64) -> Result<Gf> {
        if p >= 1 << 63 {
            return Err(Error::Invalid(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!("modulus {p} is not prime")));
        }
        Ok(Gf { p })
    }

    pub fn default_field() -> Gf {
        Gf { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn el(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; zero is refused.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        Ok(self.pow(a, self.p - 2))
    }
}
