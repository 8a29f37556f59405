use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// A polynomial over F_q, stored as ascending coefficients with no trailing
/// zeros. The zero polynomial has an empty coefficient vector. Every value
/// carries its field order so mixed-field operations can be detected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFq {
    q: u32,
    coeffs: Vec<u32>,
}

impl PolyFq {
    pub fn from_coeffs(q: u32, mut coeffs: Vec<u32>) -> Self {
        for c in &mut coeffs {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFq { q, coeffs }
    }

    pub fn zero(q: u32) -> Self {
        PolyFq { q, coeffs: vec![] }
    }

    pub fn one(q: u32) -> Self {
        PolyFq { q, coeffs: vec![1] }
    }

    pub fn constant(q: u32, c: u32) -> Self {
        Self::from_coeffs(q, vec![c])
    }

    /// The monomial c x^d.
    pub fn monomial(q: u32, c: u32, d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Self::from_coeffs(q, v)
    }

    pub fn x(q: u32) -> Self {
        Self::monomial(q, 1, 1)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Norm |f| = q^{deg f} as a float (0 for the zero polynomial).
    pub fn norm(&self) -> f64 {
        match self.degree() {
            None => 0.0,
            Some(d) => (self.q as f64).powi(d as i32),
        }
    }

    fn ctx(&self) -> FieldCtx {
        FieldCtx::new_unchecked(self.q)
    }

    fn check_same_field(&self, other: &PolyFq) -> Result<()> {
        if self.q != other.q {
            Err(Error::MismatchedField(self.q, other.q))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &PolyFq) -> PolyFq {
        self.check_same_field(other).expect("same field");
        let f = self.ctx();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        PolyFq::from_coeffs(self.q, out)
    }

    pub fn sub(&self, other: &PolyFq) -> PolyFq {
        self.check_same_field(other).expect("same field");
        let f = self.ctx();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        PolyFq::from_coeffs(self.q, out)
    }

    pub fn neg(&self) -> PolyFq {
        let f = self.ctx();
        PolyFq {
            q: self.q,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyFq) -> PolyFq {
        self.check_same_field(other).expect("same field");
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero(self.q);
        }
        let q = self.q as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % q;
            }
        }
        PolyFq {
            q: self.q,
            coeffs: out.into_iter().map(|c| c as u32).collect(),
        }
    }

    pub fn mul_scalar(&self, c: u32) -> PolyFq {
        let f = self.ctx();
        let c = c % self.q;
        if c == 0 {
            return PolyFq::zero(self.q);
        }
        PolyFq {
            q: self.q,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Euclidean division: self = quot * div + rem with deg rem < deg div.
    pub fn divmod(&self, div: &PolyFq) -> Result<(PolyFq, PolyFq)> {
        self.check_same_field(div)?;
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.ctx();
        let dd = div.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((PolyFq::zero(self.q), self.clone()));
        }
        let lead_inv = f.inv(div.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        Ok((
            PolyFq::from_coeffs(self.q, quot),
            PolyFq::from_coeffs(self.q, rem),
        ))
    }

    pub fn rem(&self, div: &PolyFq) -> Result<PolyFq> {
        Ok(self.divmod(div)?.1)
    }

    /// Monic gcd. gcd(0, 0) = 0 by convention.
    pub fn gcd(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check_same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn make_monic(&self) -> PolyFq {
        match self.leading() {
            0 | 1 => self.clone(),
            l => self.mul_scalar(self.ctx().inv(l)),
        }
    }

    /// Formal derivative in characteristic q.
    pub fn derivative(&self) -> PolyFq {
        if self.coeffs.len() <= 1 {
            return PolyFq::zero(self.q);
        }
        let f = self.ctx();
        let out: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64 % self.q as u64) as u32))
            .collect();
        PolyFq::from_coeffs(self.q, out)
    }

    /// Evaluate at a base-field residue by Horner's rule.
    pub fn eval(&self, x: u32) -> u32 {
        let f = self.ctx();
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn mulmod(&self, other: &PolyFq, modulus: &PolyFq) -> Result<PolyFq> {
        self.mul(other).rem(modulus)
    }

    /// self^exp mod modulus by square-and-multiply; the exponent is a big
    /// integer because |P| - 1 can exceed machine range for large q^d.
    pub fn powmod(&self, exp: &BigUint, modulus: &PolyFq) -> Result<PolyFq> {
        let mut acc = PolyFq::one(self.q);
        let mut base = self.rem(modulus)?;
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.mulmod(&base, modulus)?;
            }
            if i + 1 < bits {
                base = base.mulmod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Canonical index of a degree-d monic polynomial within the
    /// lexicographic-by-ascending-coefficients enumeration of its degree
    /// (the constant term is the most significant digit).
    pub fn monic_lex_index(&self) -> u64 {
        debug_assert!(self.is_monic());
        let d = self.coeffs.len() - 1;
        let mut idx = 0u64;
        for i in 0..d {
            idx = idx * self.q as u64 + self.coeff(i) as u64;
        }
        idx
    }
}

/// Canonical order: by degree, then lexicographic on the ascending
/// coefficient vector (constant term compared first).
impl Ord for PolyFq {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.coeffs.len(), &self.coeffs).cmp(&(other.coeffs.len(), &other.coeffs))
    }
}

impl PartialOrd for PolyFq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(w, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(w, " + ")?;
            }
            first = false;
            match (c, i) {
                (c, 0) => write!(w, "{c}")?,
                (1, 1) => write!(w, "x")?,
                (c, 1) => write!(w, "{c}x")?,
                (1, i) => write!(w, "x^{i}")?,
                (c, i) => write!(w, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}
