//! Counting and enumeration of monic and prime polynomials.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{is_irreducible, PrimePoly};
use crate::poly::PolyFq;

/// Mobius function on positive integers, by trial division.
pub fn integer_mobius(mut n: u64) -> i8 {
    debug_assert!(n >= 1);
    let mut primes = 0u32;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducibles of degree d over F_q:
/// pi_q(d) = (1/d) sum_{e | d} mu(e) q^{d/e}, exact.
pub fn prime_count(q: u32, d: usize) -> BigUint {
    assert!(d >= 1);
    let mut sum = BigInt::zero();
    for e in 1..=d as u64 {
        if d as u64 % e != 0 {
            continue;
        }
        let mu = integer_mobius(e);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(q).pow((d as u64 / e) as u32);
        if mu == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = num_integer_div_rem(sum, d as u64);
    assert!(rem.is_zero(), "prime-count sum must be divisible by d");
    quot.to_biguint().expect("prime counts are nonnegative")
}

fn num_integer_div_rem(a: BigInt, b: u64) -> (BigInt, BigInt) {
    let b = BigInt::from(b);
    (&a / &b, &a % &b)
}

pub fn prime_count_f64(q: u32, d: usize) -> f64 {
    prime_count(q, d).to_f64().expect("finite")
}

fn check_budget(q: u32, exp: usize, budget: u64) -> Result<()> {
    let mut total = 1u64;
    for _ in 0..exp {
        total = total
            .checked_mul(q as u64)
            .filter(|&t| t <= budget)
            .ok_or(Error::BudgetExceeded { q, exp, budget })?;
    }
    Ok(())
}

/// Iterator over all q^n monic polynomials of degree n, lexicographic by
/// ascending coefficient vector (the constant term is the most significant
/// digit, matching `PolyFq`'s canonical Ord). Index i maps to the base-q
/// digits of i, c_0 first.
pub struct MonicIter {
    q: u32,
    n: usize,
    next: u64,
    total: u64,
}

impl Iterator for MonicIter {
    type Item = PolyFq;

    fn next(&mut self) -> Option<PolyFq> {
        if self.next >= self.total {
            return None;
        }
        let mut coeffs = vec![0u32; self.n + 1];
        coeffs[self.n] = 1;
        let mut rest = self.next;
        for m in 0..self.n {
            coeffs[self.n - 1 - m] = (rest % self.q as u64) as u32;
            rest /= self.q as u64;
        }
        self.next += 1;
        Some(PolyFq::from_coeffs(self.q, coeffs))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for MonicIter {}

/// All monic polynomials of degree n in canonical order. Fails when q^n
/// exceeds the enumeration budget.
pub fn monic_enumerate(q: u32, n: usize, budget: u64) -> Result<MonicIter> {
    check_budget(q, n, budget)?;
    let total = (q as u64).pow(n as u32);
    Ok(MonicIter {
        q,
        n,
        next: 0,
        total,
    })
}

/// Monic irreducibles grouped by degree 1..=max_deg, each group in canonical
/// order. Group d has exactly prime_count(q, d) entries.
pub fn irreducible_enumerate(q: u32, max_deg: usize, budget: u64) -> Result<Vec<Vec<PrimePoly>>> {
    check_budget(q, max_deg, budget)?;
    let mut out = Vec::with_capacity(max_deg);
    for d in 1..=max_deg {
        let mut group = vec![];
        for f in monic_enumerate(q, d, budget)? {
            if is_irreducible(&f)? {
                group.push(PrimePoly::new_unchecked(f));
            }
        }
        out.push(group);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_counts_for_q3() {
        assert_eq!(prime_count(3, 1), BigUint::from(3u32));
        assert_eq!(prime_count(3, 2), BigUint::from(3u32)); // (9 - 3) / 2
        assert_eq!(prime_count(3, 3), BigUint::from(8u32)); // (27 - 3) / 3
        assert_eq!(prime_count(3, 4), BigUint::from(18u32));
    }

    #[test]
    fn gauss_identity_sum_of_d_pi_d() {
        // sum_{e | d} e * pi_q(e) = q^d, exact, for d <= 8
        for q in [3u32, 5, 7] {
            for d in 1..=8usize {
                let mut sum = BigUint::zero();
                for e in 1..=d {
                    if d % e == 0 {
                        sum += prime_count(q, e) * BigUint::from(e);
                    }
                }
                assert_eq!(sum, BigUint::from(q).pow(d as u32), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn monic_enumeration_order_and_count() {
        let degree0: Vec<_> = monic_enumerate(3, 0, 10).unwrap().collect();
        assert_eq!(degree0, vec![PolyFq::one(3)]);

        let degree1: Vec<_> = monic_enumerate(3, 1, 10).unwrap().collect();
        assert_eq!(
            degree1,
            vec![
                PolyFq::from_coeffs(3, vec![0, 1]),
                PolyFq::from_coeffs(3, vec![1, 1]),
                PolyFq::from_coeffs(3, vec![2, 1]),
            ]
        );

        for n in 0..=6usize {
            assert_eq!(
                monic_enumerate(3, n, 1 << 20).unwrap().count() as u64,
                3u64.pow(n as u32)
            );
        }
    }

    #[test]
    fn enumeration_budget_enforced() {
        assert!(matches!(
            monic_enumerate(3, 10, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<_> = monic_enumerate(5, 3, 1 << 20).unwrap().collect();
        let b: Vec<_> = monic_enumerate(5, 3, 1 << 20).unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn irreducibles_of_degree_2_over_f3() {
        let groups = irreducible_enumerate(3, 2, 1 << 20).unwrap();
        let quadratics: Vec<_> = groups[1].iter().map(|p| p.poly().clone()).collect();
        assert_eq!(
            quadratics,
            vec![
                PolyFq::from_coeffs(3, vec![1, 0, 1]), // x^2 + 1
                PolyFq::from_coeffs(3, vec![2, 1, 1]), // x^2 + x + 2
                PolyFq::from_coeffs(3, vec![2, 2, 1]), // x^2 + 2x + 2
            ]
        );
    }

    #[test]
    fn irreducible_counts_match_prime_count() {
        for q in [3u32, 5] {
            let max_d = if q == 3 { 6 } else { 5 };
            let groups = irreducible_enumerate(q, max_d, 1 << 24).unwrap();
            for (i, group) in groups.iter().enumerate() {
                assert_eq!(
                    BigUint::from(group.len()),
                    prime_count(q, i + 1),
                    "q={q} d={}",
                    i + 1
                );
                for p in group {
                    assert!(is_irreducible(p.poly()).unwrap());
                }
            }
        }
    }
}
