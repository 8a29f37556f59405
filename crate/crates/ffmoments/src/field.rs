use crate::error::{Error, Result};

/// The base field F_q for an odd prime q. Residues are plain `u32` in `[0, q)`;
/// all arithmetic widens through `u64`, which is safe for q up to 2^20.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCtx {
    q: u32,
    ln_q: f64,
}

pub const MAX_Q: u32 = 1 << 20;

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    pub fn new(q: u32) -> Result<Self> {
        if q < 3 || q > MAX_Q || q % 2 == 0 || !is_prime_u32(q) {
            return Err(Error::InvalidFieldOrder(q as u64));
        }
        Ok(Self::new_unchecked(q))
    }

    /// Skips the primality scan; for internal use where q was already
    /// validated (every `PolyFq` re-derives its context on the hot path).
    pub(crate) fn new_unchecked(q: u32) -> Self {
        FieldCtx {
            q,
            ln_q: (q as f64).ln(),
        }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem. Panics on 0.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.q != 0, "inverse of zero in F_{}", self.q);
        self.pow(a, self.q as u64 - 2)
    }

    /// Legendre symbol of a scalar: 0 for a = 0, else a^((q-1)/2) as +-1.
    pub fn legendre(&self, a: u32) -> i8 {
        let a = a % self.q;
        if a == 0 {
            return 0;
        }
        let r = self.pow(a, (self.q as u64 - 1) / 2);
        if r == 1 {
            1
        } else {
            debug_assert_eq!(r, self.q - 1);
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_orders() {
        assert!(FieldCtx::new(2).is_err());
        assert!(FieldCtx::new(9).is_err());
        assert!(FieldCtx::new(15).is_err());
        assert!(FieldCtx::new(1).is_err());
        assert!(FieldCtx::new(3).is_ok());
        assert!(FieldCtx::new(1048573).is_ok()); // largest prime below 2^20
    }

    #[test]
    fn arithmetic_mod_7() {
        let f = FieldCtx::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    fn legendre_mod_3_and_7() {
        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(f3.legendre(0), 0);
        assert_eq!(f3.legendre(1), 1);
        assert_eq!(f3.legendre(2), -1);
        // squares mod 7 are {1, 2, 4}
        let f7 = FieldCtx::new(7).unwrap();
        let squares: Vec<u32> = (1..7).filter(|&a| f7.legendre(a) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }
}
