//! Factorization in F_q[x]: square-free decomposition, distinct-degree and
//! equal-degree (Cantor-Zassenhaus) splitting, plus the predicates built on
//! top of it (irreducibility, square-freeness, Mobius).
//!
//! Correctness dominates speed here: desk-scale degrees stay below ~16, so
//! schoolbook polynomial arithmetic is plenty.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::PolyFq;

/// A monic irreducible polynomial, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePoly(PolyFq);

impl PrimePoly {
    pub fn new(poly: PolyFq) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::NonMonic);
        }
        if !is_irreducible(&poly)? {
            return Err(Error::NotIrreducible(poly.degree().unwrap_or(0)));
        }
        Ok(PrimePoly(poly))
    }

    /// Wrap a polynomial already known to be monic irreducible (e.g. straight
    /// out of the factorizer). Debug builds re-check.
    pub(crate) fn new_unchecked(poly: PolyFq) -> Self {
        debug_assert!(poly.is_monic() && is_irreducible(&poly).unwrap_or(false));
        PrimePoly(poly)
    }

    #[inline]
    pub fn poly(&self) -> &PolyFq {
        &self.0
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.degree().expect("irreducible is nonzero")
    }

    /// |P| = q^{deg P} as a big integer.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.0.q()).pow(self.degree() as u32)
    }
}

/// unit * prod P_i^{e_i} with monic, pairwise distinct primes sorted in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(PrimePoly, u32)>,
}

impl Factorization {
    /// Multiply the factorization back together.
    pub fn reconstruct(&self, q: u32) -> PolyFq {
        let mut acc = PolyFq::constant(q, self.unit);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(p.poly());
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Frobenius map x ↦ x^q composed d times, i.e. x^{q^d} mod f, computed by
/// iterated q-th powers (q fits u64, so each step is a plain powmod).
fn frobenius_power(f: &PolyFq, d: usize) -> Result<PolyFq> {
    let q = BigUint::from(f.q());
    let mut acc = PolyFq::x(f.q()).rem(f)?;
    for _ in 0..d {
        acc = acc.powmod(&q, f)?;
    }
    Ok(acc)
}

/// Rabin irreducibility test. Units and the zero polynomial are not
/// irreducible; errors only on the zero input.
pub fn is_irreducible(f: &PolyFq) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.make_monic();
    let x = PolyFq::x(f.q());
    // x^{q^n} == x mod f
    if frobenius_power(&f, n)?.sub(&x) != PolyFq::zero(f.q()) {
        return Ok(false);
    }
    // gcd(x^{q^{n/t}} - x, f) = 1 for every prime t | n
    let mut m = n;
    let mut t = 2;
    let mut prime_divs = vec![];
    while t * t <= m {
        if m % t == 0 {
            prime_divs.push(t);
            while m % t == 0 {
                m /= t;
            }
        }
        t += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for t in prime_divs {
        let h = frobenius_power(&f, n / t)?.sub(&x);
        if f.gcd(&h)?.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no prime polynomial divides f twice: gcd(f, f') is constant.
/// In characteristic p, f' = 0 means f is a p-th power, hence not
/// square-free for nonconstant f.
pub fn is_squarefree(f: &PolyFq) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(true);
    }
    let d = f.derivative();
    if d.is_zero() {
        return Ok(false);
    }
    Ok(f.gcd(&d)?.degree() == Some(0))
}

/// Replace f(x) = g(x^p) by g; over the prime field F_p the coefficients are
/// their own p-th roots.
fn pth_root(f: &PolyFq) -> PolyFq {
    let p = f.q() as usize;
    let out: Vec<u32> = f
        .coeffs()
        .iter()
        .step_by(p)
        .copied()
        .collect();
    PolyFq::from_coeffs(f.q(), out)
}

/// Square-free decomposition of a monic f: list of (g_i, m_i) with g_i monic
/// square-free, pairwise coprime, and f = prod g_i^{m_i}.
fn squarefree_decomposition(f: &PolyFq) -> Result<Vec<(PolyFq, u32)>> {
    let p = f.q();
    let mut out = vec![];
    let deriv = f.derivative();
    if deriv.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(f))? {
            out.push((g, m * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&deriv)?;
    let mut w = f.divmod(&c)?.0;
    let mut i = 1u32;
    while w.degree() != Some(0) {
        let y = w.gcd(&c)?;
        let z = w.divmod(&y)?.0;
        if z.degree() != Some(0) {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.divmod(&w)?.0;
    }
    if c.degree() != Some(0) {
        for (g, m) in squarefree_decomposition(&pth_root(&c))? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Split a monic square-free f into (per-degree) products of its prime
/// factors: returns (d, product of primes of degree d).
fn distinct_degree_split(f: &PolyFq) -> Result<Vec<(usize, PolyFq)>> {
    let mut out = vec![];
    let mut rest = f.clone();
    let mut d = 0usize;
    let q = BigUint::from(f.q());
    // running x^{q^d} mod f; reduced against the original modulus throughout
    let mut frob = PolyFq::x(f.q()).rem(f)?;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        frob = frob.powmod(&q, f)?;
        let g = rest.gcd(&frob.sub(&PolyFq::x(f.q())))?;
        if g.degree() != Some(0) {
            out.push((d, g.clone()));
            rest = rest.divmod(&g)?.0;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let dr = rest.degree().unwrap();
        out.push((dr, rest));
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting: f monic square-free, all prime
/// factors of degree d. The RNG is seeded from the input so factorization is
/// a pure function.
fn equal_degree_split(f: &PolyFq, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyFq>) -> Result<()> {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    let q = f.q();
    // exponent (q^d - 1) / 2 for the quadratic-residue splitting map
    let exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let r = PolyFq::from_coeffs(q, coeffs);
        if r.is_constant() {
            continue;
        }
        let g = f.gcd(&r)?;
        let split = if g.degree() != Some(0) {
            g
        } else {
            let h = r.powmod(&exp, f)?;
            let candidate = f.gcd(&h.sub(&PolyFq::one(q)))?;
            if candidate.degree() == Some(0) || candidate.degree() == f.degree() {
                continue;
            }
            candidate
        };
        let rest = f.divmod(&split)?.0;
        equal_degree_split(&split, d, rng, out)?;
        equal_degree_split(&rest, d, rng, out)?;
        return Ok(());
    }
}

fn seed_from_poly(f: &PolyFq) -> u64 {
    let mut h = DefaultHasher::new();
    f.hash(&mut h);
    h.finish() ^ 0x5eed_f0f0_1234_5678
}

/// Full factorization into unit times monic primes, sorted canonically.
pub fn factor(f: &PolyFq) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = if f.is_constant() {
        f.coeff(0)
    } else {
        f.leading()
    };
    let monic = f.make_monic();
    let mut factors: Vec<(PrimePoly, u32)> = vec![];
    if monic.degree() == Some(0) {
        return Ok(Factorization { unit, factors });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_poly(f));
    for (part, mult) in squarefree_decomposition(&monic)? {
        for (d, prod) in distinct_degree_split(&part)? {
            let mut primes = vec![];
            equal_degree_split(&prod, d, &mut rng, &mut primes)?;
            for p in primes {
                factors.push((PrimePoly::new_unchecked(p), mult));
            }
        }
    }
    factors.sort();
    debug_assert!(factors.windows(2).all(|w| w[0].0 != w[1].0));
    Ok(Factorization { unit, factors })
}

/// Mobius function of F_q[x]: (-1)^t for a unit times t distinct primes,
/// 0 when any square divides.
pub fn mobius(f: &PolyFq) -> Result<i8> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.derivative();
    if !f.is_constant() && (d.is_zero() || f.gcd(&d)?.degree() != Some(0)) {
        return Ok(0);
    }
    let fac = factor(f)?;
    Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
}
