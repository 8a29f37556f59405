//! Extension fields F_{q^n} used as point-counting scratch spaces.
//!
//! Elements are encoded as `u32` indices: the base-q digits of the index are
//! the coefficients of the residue polynomial modulo a fixed monic
//! irreducible of degree n. For small fields (q^n below a configurable
//! threshold, default 2^24) we build discrete-log tables over a generator of
//! the multiplicative group; multiplication is then two lookups and the
//! quadratic character is the parity of the logarithm. Above the threshold
//! all operations fall back to polynomial arithmetic, and the quadratic
//! character to an explicit e^{(q^n-1)/2} exponentiation.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{is_irreducible, PrimePoly};
use crate::field::FieldCtx;
use crate::poly::PolyFq;

pub const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 24;

/// Hard cap for the u32 element encoding.
const MAX_ORDER: u64 = 1 << 31;

pub type ExtElem = u32;

struct LogTables {
    /// exp[i] = generator^i, as an element index; length order - 1.
    exp: Vec<u32>,
    /// log[e] for e != 0; log[0] is a sentinel.
    log: Vec<u32>,
}

pub struct ExtFieldCtx {
    q: u32,
    n: usize,
    order: u64,
    modulus: PrimePoly,
    tables: Option<LogTables>,
}

impl ExtFieldCtx {
    pub fn new(field: &FieldCtx, n: usize) -> Result<Self> {
        Self::with_threshold(field, n, DEFAULT_TABLE_THRESHOLD)
    }

    pub fn with_threshold(field: &FieldCtx, n: usize, table_threshold: u64) -> Result<Self> {
        assert!(n >= 1);
        let q = field.q();
        let modulus = first_irreducible(q, n)?;
        Self::with_modulus(modulus, table_threshold)
    }

    pub fn with_modulus(modulus: PrimePoly, table_threshold: u64) -> Result<Self> {
        let q = modulus.poly().q();
        let n = modulus.degree();
        let mut order = 1u64;
        for _ in 0..n {
            order = order
                .checked_mul(q as u64)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or(Error::BudgetExceeded {
                    q,
                    exp: n,
                    budget: MAX_ORDER,
                })?;
        }
        let mut ctx = ExtFieldCtx {
            q,
            n,
            order,
            modulus,
            tables: None,
        };
        if order <= table_threshold {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &PrimePoly {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn decode(&self, e: ExtElem) -> PolyFq {
        let mut rest = e as u64;
        let mut coeffs = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            coeffs.push((rest % self.q as u64) as u32);
            rest /= self.q as u64;
        }
        PolyFq::from_coeffs(self.q, coeffs)
    }

    pub fn encode(&self, f: &PolyFq) -> ExtElem {
        debug_assert!(f.degree().map_or(true, |d| d < self.n));
        let mut idx = 0u64;
        for &c in f.coeffs().iter().rev() {
            idx = idx * self.q as u64 + c as u64;
        }
        idx as ExtElem
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let q = self.q as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            let s = (a % q + b % q) % q;
            out += s * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out as ExtElem
    }

    /// Add a base-field constant: only the constant digit changes.
    #[inline]
    pub fn add_base(&self, a: ExtElem, c: u32) -> ExtElem {
        let q = self.q;
        let low = a % q;
        a - low + (low + c) % q
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let m = self.order - 1;
                let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % m;
                t.exp[s as usize]
            }
            None => {
                let prod = self
                    .decode(a)
                    .mulmod(&self.decode(b), self.modulus.poly())
                    .expect("modulus is nonzero");
                self.encode(&prod)
            }
        }
    }

    pub fn pow(&self, base: ExtElem, exp: &BigUint) -> ExtElem {
        let f = self
            .decode(base)
            .powmod(exp, self.modulus.poly())
            .expect("modulus is nonzero");
        self.encode(&f)
    }

    /// Quadratic character of F_{q^n}: 0 at 0, +1 on nonzero squares,
    /// -1 otherwise. Uses log parity when tables exist, else Euler's
    /// criterion e^{(q^n-1)/2}.
    pub fn quad_char(&self, e: ExtElem) -> i8 {
        if e == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                if t.log[e as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => self.quad_char_by_exponentiation(e),
        }
    }

    /// The table-free fallback, public so the two routes can be compared.
    pub fn quad_char_by_exponentiation(&self, e: ExtElem) -> i8 {
        if e == 0 {
            return 0;
        }
        let exp = (BigUint::from(self.order) - BigUint::one()) / BigUint::from(2u32);
        let r = self.pow(e, &exp);
        if r == 1 {
            1
        } else {
            -1
        }
    }

    /// Evaluate a base-field polynomial at a point of F_{q^n} by Horner.
    pub fn eval_poly(&self, f: &PolyFq, pt: ExtElem) -> ExtElem {
        debug_assert_eq!(f.q(), self.q);
        let mut acc: ExtElem = 0;
        for &c in f.coeffs().iter().rev() {
            acc = self.add_base(self.mul(acc, pt), c);
        }
        acc
    }

    /// sum over c in F_{q^n} of quad_char(f(c)) — the affine character sum
    /// behind the point counts N_n.
    pub fn char_sum_over_points(&self, f: &PolyFq) -> i64 {
        let mut sum = 0i64;
        match &self.tables {
            Some(t) => {
                for pt in 0..self.order as ExtElem {
                    // inline Horner keeps the table lookups in-register
                    let mut acc: ExtElem = 0;
                    if pt == 0 {
                        acc = (f.coeff(0) % self.q) as ExtElem;
                    } else {
                        let log_pt = t.log[pt as usize] as u64;
                        let m = self.order - 1;
                        for &c in f.coeffs().iter().rev() {
                            if acc != 0 {
                                let s = (t.log[acc as usize] as u64 + log_pt) % m;
                                acc = t.exp[s as usize];
                            }
                            acc = self.add_base(acc, c);
                        }
                    }
                    if acc != 0 {
                        sum += if t.log[acc as usize] % 2 == 0 { 1 } else { -1 };
                    }
                }
            }
            None => {
                for pt in 0..self.order as ExtElem {
                    sum += self.quad_char(self.eval_poly(f, pt)) as i64;
                }
            }
        }
        sum
    }

    /// Count of nonzero squares, for diagnostics: (q^n - 1) / 2.
    pub fn square_count(&self) -> u64 {
        match &self.tables {
            Some(t) => (1..self.order)
                .filter(|&e| t.log[e as usize] % 2 == 0)
                .count() as u64,
            None => (1..self.order)
                .filter(|&e| self.quad_char_by_exponentiation(e as ExtElem) == 1)
                .count() as u64,
        }
    }

    fn build_tables(&self) -> LogTables {
        let gen = self.find_generator();
        let gen_poly = self.decode(gen);
        let m = (self.order - 1) as usize;
        let mut exp = vec![0u32; m];
        let mut log = vec![u32::MAX; self.order as usize];
        let mut cur = PolyFq::one(self.q);
        for (i, slot) in exp.iter_mut().enumerate() {
            let idx = self.encode(&cur);
            *slot = idx;
            log[idx as usize] = i as u32;
            cur = cur
                .mulmod(&gen_poly, self.modulus.poly())
                .expect("modulus is nonzero");
        }
        debug_assert_eq!(self.encode(&cur), 1, "generator order must be q^n - 1");
        LogTables { exp, log }
    }

    fn find_generator(&self) -> ExtElem {
        let m = self.order - 1;
        let prime_divs = u64_prime_divisors(m);
        'cand: for e in 2..self.order {
            let e = e as ExtElem;
            for &p in &prime_divs {
                if self.pow(e, &BigUint::from(m / p)) == 1 {
                    continue 'cand;
                }
            }
            return e;
        }
        unreachable!("F_{{q^n}}^* is cyclic, a generator exists");
    }
}

fn u64_prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn first_irreducible(q: u32, n: usize) -> Result<PrimePoly> {
    for f in crate::enumeration::monic_enumerate(q, n, MAX_ORDER)? {
        if is_irreducible(&f)? {
            return Ok(PrimePoly::new_unchecked(f));
        }
    }
    unreachable!("irreducibles exist in every degree");
}
