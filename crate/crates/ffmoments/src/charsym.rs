//! Quadratic residue symbols, the polynomial Jacobi symbol and the character
//! chi_D of a square-free discriminant.
//!
//! The Jacobi symbol ships in two deliberately independent implementations:
//! a reference that factors the modulus and multiplies Euler-criterion
//! residue symbols, and a fast Euclidean ladder that uses the function-field
//! reciprocity law and never factors. The ladder is treated as untrusted
//! until the exhaustive cross-check against the reference passes (see the
//! acceptance suite); the unit tests here run a smaller version of the same
//! gate.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{factor, is_squarefree, PrimePoly};
use crate::field::FieldCtx;
use crate::poly::PolyFq;

/// A monic square-free polynomial of odd degree 2g + 1 >= 3; the discriminant
/// of the hyperelliptic curve y^2 = D(x).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    poly: PolyFq,
    genus: usize,
}

impl Discriminant {
    pub fn new(poly: PolyFq) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::InvalidDiscriminant("not monic"));
        }
        let deg = poly.degree().expect("monic implies nonzero");
        if deg < 3 || deg % 2 == 0 {
            return Err(Error::InvalidDiscriminant("degree must be odd and >= 3"));
        }
        if !is_squarefree(&poly)? {
            return Err(Error::InvalidDiscriminant("not square-free"));
        }
        Ok(Discriminant {
            genus: (deg - 1) / 2,
            poly,
        })
    }

    #[inline]
    pub fn poly(&self) -> &PolyFq {
        &self.poly
    }

    #[inline]
    pub fn genus(&self) -> usize {
        self.genus
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.poly.q()
    }

    /// log_q |D| = 2g + 1.
    #[inline]
    pub fn log_q_norm(&self) -> usize {
        2 * self.genus + 1
    }
}

/// Euler-criterion residue symbol (f/P) for prime P: 0 when P | f, else
/// f^{(|P|-1)/2} mod P read off as +-1.
pub fn residue_symbol(f: &PolyFq, p: &PrimePoly) -> i8 {
    residue_symbol_raw(f, p.poly())
}

/// Same computation with the irreducibility of `p` taken on faith; used by
/// the reference Jacobi path where the factors come out of the factorizer.
fn residue_symbol_raw(f: &PolyFq, p: &PolyFq) -> i8 {
    let r = f.rem(p).expect("prime modulus is nonzero");
    if r.is_zero() {
        return 0;
    }
    let q = BigUint::from(f.q());
    let exp = (q.pow(p.degree().unwrap() as u32) - BigUint::one()) / BigUint::from(2u32);
    let e = r.powmod(&exp, p).expect("prime modulus is nonzero");
    if e == PolyFq::one(f.q()) {
        1
    } else {
        debug_assert_eq!(e, PolyFq::constant(f.q(), f.q() - 1));
        -1
    }
}

/// Reference Jacobi symbol: factor Q and take prod_j (f/P_j)^{e_j}, with the
/// scalar rule (alpha/Q) = alpha^{((q-1)/2) deg Q} handled by the same
/// product (an empty product for constant Q).
pub fn jacobi_reference(f: &PolyFq, modulus: &PolyFq) -> Result<i8> {
    if modulus.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !modulus.is_monic() {
        return Err(Error::NonMonic);
    }
    if modulus.is_constant() {
        return Ok(1);
    }
    if f.is_zero() {
        return Ok(0);
    }
    let mut acc = 1i8;
    for (p, e) in &factor(modulus)?.factors {
        let s = residue_symbol(f, p);
        if s == 0 {
            return Ok(0);
        }
        if s == -1 && e % 2 == 1 {
            acc = -acc;
        }
    }
    Ok(acc)
}

/// Fast Jacobi symbol by the Euclidean reciprocity ladder; never factors.
///
/// Each round peels the leading unit c of the reduced numerator via
/// (c/Q) = legendre(c)^{deg Q} and then flips using the reciprocity law
/// (A/B)(B/A) = (-1)^{((q-1)/2) deg A deg B} for monic coprime A, B: the
/// sign changes exactly when q = 3 (mod 4) and both degrees are odd.
pub fn jacobi(f: &PolyFq, modulus: &PolyFq) -> Result<i8> {
    if modulus.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !modulus.is_monic() {
        return Err(Error::NonMonic);
    }
    let ctx = FieldCtx::new_unchecked(f.q());
    let q_is_3_mod_4 = f.q() % 4 == 3;
    let mut sign = 1i8;
    let mut num = f.clone();
    let mut den = modulus.clone();
    loop {
        if den.is_constant() {
            return Ok(sign);
        }
        num = num.rem(&den).expect("den is nonconstant");
        if num.is_zero() {
            return Ok(0);
        }
        let c = num.leading();
        if c != 1 {
            num = num.make_monic();
            if ctx.legendre(c) == -1 && den.degree().unwrap() % 2 == 1 {
                sign = -sign;
            }
        }
        if num.is_constant() {
            return Ok(sign);
        }
        if q_is_3_mod_4 && num.degree().unwrap() % 2 == 1 && den.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// chi_D(f) = (D/f) for monic nonzero f. Nonmonic arguments are rejected:
/// every ensemble sum ranges over monic f, and silently normalizing could
/// mask bugs upstream.
pub fn chi(d: &Discriminant, f: &PolyFq) -> Result<i8> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    jacobi(d.poly(), f)
}
