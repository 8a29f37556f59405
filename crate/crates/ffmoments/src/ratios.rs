//! Ratios of shifted L-values: the conjectural right-hand side for small
//! K, Q, its empirical counterpart over a sweep cache, and the
//! log-derivative average that feeds the one-level density.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eulerfact::{EulerProductTable, KahanC};
use crate::sweep::SweepCache;

/// Shifts for sum_D prod_k L(1/2+alpha_k) / prod_m L(1/2+gamma_m).
/// K, Q <= 2: the eps-sum and Euler factors are general, but desk-scale
/// empirical variance makes larger ranks uninformative.
#[derive(Debug, Clone)]
pub struct RatiosSpec {
    pub alpha: Vec<Complex64>,
    pub gamma: Vec<Complex64>,
}

impl RatiosSpec {
    pub fn new(alpha: Vec<Complex64>, gamma: Vec<Complex64>) -> Result<Self> {
        if alpha.len() > 2 || gamma.len() > 2 || alpha.is_empty() {
            return Err(Error::DomainViolation("K in 1..=2 and Q <= 2"));
        }
        for a in alpha.iter().chain(&gamma) {
            if a.re.abs() >= 0.25 {
                return Err(Error::DomainViolation("|Re shift| must be < 1/4"));
            }
        }
        for g in &gamma {
            if g.re <= 0.0 {
                return Err(Error::DomainViolation("Re gamma must be positive"));
            }
        }
        Ok(RatiosSpec { alpha, gamma })
    }

    pub fn conjugate(&self) -> RatiosSpec {
        RatiosSpec {
            alpha: self.alpha.iter().map(|a| a.conj()).collect(),
            gamma: self.gamma.iter().map(|g| g.conj()).collect(),
        }
    }
}

/// Conjectural main term:
/// #H sum_{eps in {-1,1}^K} |D|^{(1/2) sum (eps_k a_k - a_k)}
///   prod_k X(1/2 + (a_k - eps_k a_k)/2) Y(eps a; gamma) A_D(eps a; gamma).
/// Terms whose Y denominator hits the zeta_A pole vanish through the
/// 1/zeta_A(1) = 0 convention; a pole in a Y numerator is an error.
pub fn ratios_rhs(
    spec: &RatiosSpec,
    q: u32,
    g: usize,
    table: &EulerProductTable,
) -> Result<Complex64> {
    let k = spec.alpha.len();
    let ln_q = table.ln_q();
    let ln_norm = (2 * g + 1) as f64 * ln_q;
    let mut sum = Complex64::new(0.0, 0.0);
    for eps in 0..(1u32 << k) {
        let signed: Vec<Complex64> = spec
            .alpha
            .iter()
            .enumerate()
            .map(|(j, a)| if eps >> j & 1 == 1 { -a } else { *a })
            .collect();
        let y = table.y_factor(&signed, &spec.gamma)?;
        if y.norm() == 0.0 {
            continue;
        }
        let mut term = y * table.a_ratios(&signed, &spec.gamma)?;
        let mut exponent = Complex64::new(0.0, 0.0);
        for (a, sa) in spec.alpha.iter().zip(&signed) {
            exponent += 0.5 * (sa - a);
            // X(1/2 + (a - eps a)/2) = q^{(a - eps a)/2}
            term *= ((a - sa) * 0.5 * ln_q).exp();
        }
        term *= (exponent * ln_norm).exp();
        sum += term;
    }
    let size = (q as f64 - 1.0) * (q as f64).powi(2 * g as i32);
    Ok(sum * size)
}

/// Empirical side: sum_D prod L(1/2+alpha_k) / prod L(1/2+gamma_m) by direct
/// polynomial evaluation. Re gamma > 0 keeps the denominator evaluation
/// point strictly inside the zero circle, so L cannot vanish there; a guard
/// remains anyway.
pub fn ratios_empirical(cache: &SweepCache, spec: &RatiosSpec) -> Result<Complex64> {
    if cache.records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let lpolys = cache.lpolys()?;
    let half = Complex64::new(0.5, 0.0);
    let terms: Vec<Result<Complex64>> = lpolys
        .par_iter()
        .map(|l| {
            let mut v = Complex64::new(1.0, 0.0);
            for a in &spec.alpha {
                v *= l.evaluate(half + a);
            }
            for gm in &spec.gamma {
                let den = l.evaluate(half + gm);
                if den.norm() < 1e-12 {
                    return Err(Error::DenominatorZero);
                }
                v /= den;
            }
            Ok(v)
        })
        .collect();
    let mut acc = KahanC::default();
    for t in terms {
        acc.add(t?);
    }
    Ok(acc.value())
}

/// Both sides of the log-derivative average at s = 1/2 + r:
/// empirical sum_D L'/L against
/// #H (zeta_A'/zeta_A(1+2r) + A_D'(r;r)
///     - ln q |D|^{-r} X(1/2+r) zeta_A(1-2r) A_D(-r;r)).
pub struct LogDerivPair {
    pub empirical: Complex64,
    pub theory: Complex64,
}

pub fn logderiv_pair(
    r: Complex64,
    cache: &SweepCache,
    table: &EulerProductTable,
) -> Result<LogDerivPair> {
    let g = cache.header.g;
    let ln_q = table.ln_q();
    let lower = 0.5 / (2.0 * g as f64 * ln_q);
    if !(r.re >= lower && r.re < 0.25) {
        return Err(Error::DomainViolation(
            "need 1/(2 ln|D|) << Re r < 1/4 (lower cutoff c = 1/2)",
        ));
    }
    let lpolys = cache.lpolys()?;
    let half = Complex64::new(0.5, 0.0);
    let terms: Vec<Result<Complex64>> = lpolys.par_iter().map(|l| l.log_deriv(half + r)).collect();
    let mut acc = KahanC::default();
    for t in terms {
        acc.add(t?);
    }
    let theory = logderiv_theory_per_d(r, g, table)? * cache.records.len() as f64;
    Ok(LogDerivPair {
        empirical: acc.value(),
        theory,
    })
}

/// The per-D (D-independent) theory summand of the log-derivative formula.
pub fn logderiv_theory_per_d(
    r: Complex64,
    g: usize,
    table: &EulerProductTable,
) -> Result<Complex64> {
    let ln_q = table.ln_q();
    let ln_norm = (2 * g + 1) as f64 * ln_q;
    let one = Complex64::new(1.0, 0.0);
    let suite = table.one_ratio_suite(r, r, r)?;
    let zeta_term = table.zeta_a_log_deriv(one + 2.0 * r)?;
    let back = ln_q
        * (-r * ln_norm).exp()
        * (r * ln_q).exp()
        * table.zeta_a(one - 2.0 * r)?
        * suite.a_d_neg;
    Ok(zeta_term + suite.a_d_prime - back)
}
