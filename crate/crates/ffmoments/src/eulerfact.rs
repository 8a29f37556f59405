//! Degree-indexed truncated Euler products.
//!
//! Every arithmetic factor in the conjectural formulas is a product over
//! monic irreducibles P whose per-prime factor depends only on |P| = q^d.
//! Grouping by degree turns the product over O(q^N) primes into
//! prod_{d<=N} factor(q^{-d})^{pi_q(d)}, evaluated as
//! exp(sum_d pi_q(d) log factor) with compensated accumulation. The explicit
//! product over enumerated irreducibles is retained as the small-N oracle.
//!
//! Numerical care: the factors approach 1 like q^{-2d} while pi_q(d) grows
//! like q^d/d, so evaluating log(factor) after rounding the factor to 1+eps
//! would amplify representation noise by q^d. Every per-degree factor is
//! therefore computed in "1 + delta" form, with delta assembled from
//! product-minus-one accumulation and even elementary-symmetric tails so
//! that the leading cancellations happen algebraically, and the log goes
//! through a complex log1p.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::enumeration::{irreducible_enumerate, prime_count};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::FieldCtx;
use crate::poly::PolyFq;

pub const DEFAULT_CUTOFF: usize = 30;

/// Guard radius around the zeta_A pole.
const POLE_TOL: f64 = 1e-14;

// ----------------------------------------------------------------------
// stable complex helpers
// ----------------------------------------------------------------------

/// ln(1 + z) without loss near z = 0.
pub fn ln_1p(z: Complex64) -> Complex64 {
    // |1+z|^2 = 1 + 2 Re z + |z|^2; real ln_1p handles the small case
    let re = 0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p();
    let im = z.im.atan2(1.0 + z.re);
    Complex64::new(re, im)
}

/// exp(z) - 1 without loss near z = 0.
pub fn exp_m1(z: Complex64) -> Complex64 {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    // Taylor sum_{n>=1} z^n / n!
    let mut term = z;
    let mut acc = z;
    for n in 2..25u32 {
        term *= z / n as f64;
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
    }
    acc
}

/// prod (1 + t_i) - 1, accumulated as delta <- delta + t + delta t.
fn prod_m1(terms: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut delta = Complex64::new(0.0, 0.0);
    for t in terms {
        delta = delta + t + delta * t;
    }
    delta
}

/// Elementary symmetric functions e_0..e_k of the given values.
fn elementary_symmetric(w: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); w.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (j, &wj) in w.iter().enumerate() {
        for m in (1..=j + 1).rev() {
            let lower = e[m - 1];
            e[m] += wj * lower;
        }
    }
    e
}

/// sum_{m>=1} e_{2m}(w): the even tail of prod(1 +- w_j), so that
/// prod(1-w) + prod(1+w) = 2 (1 + even_tail) with no cancellation.
fn even_symmetric_tail(w: &[Complex64]) -> Complex64 {
    let e = elementary_symmetric(w);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut m = 2;
    while m < e.len() {
        acc += e[m];
        m += 2;
    }
    acc
}

/// Compensated complex accumulator (Neumaier, per component).
#[derive(Default, Clone, Copy)]
pub(crate) struct KahanC {
    sum: Complex64,
    comp: Complex64,
}

impl KahanC {
    pub(crate) fn add(&mut self, v: Complex64) {
        let t = self.sum + v;
        let cre = if self.sum.re.abs() >= v.re.abs() {
            (self.sum.re - t.re) + v.re
        } else {
            (v.re - t.re) + self.sum.re
        };
        let cim = if self.sum.im.abs() >= v.im.abs() {
            (self.sum.im - t.im) + v.im
        } else {
            (v.im - t.im) + self.sum.im
        };
        self.comp += Complex64::new(cre, cim);
        self.sum = t;
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone)]
pub struct EulerProductTable {
    q: u32,
    ln_q: f64,
    cutoff: usize,
    counts: Vec<BigUint>,
    counts_f64: Vec<f64>,
}

impl EulerProductTable {
    pub fn new(field: &FieldCtx, cutoff: usize) -> Self {
        assert!(cutoff >= 1);
        let counts: Vec<BigUint> = (1..=cutoff).map(|d| prime_count(field.q(), d)).collect();
        let counts_f64 = counts.iter().map(|c| c.to_f64().expect("finite")).collect();
        EulerProductTable {
            q: field.q(),
            ln_q: field.ln_q(),
            cutoff,
            counts,
            counts_f64,
        }
    }

    pub fn with_default_cutoff(field: &FieldCtx) -> Self {
        Self::new(field, DEFAULT_CUTOFF)
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
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn prime_count_exact(&self, d: usize) -> &BigUint {
        &self.counts[d - 1]
    }

    #[inline]
    pub fn pi(&self, d: usize) -> f64 {
        self.counts_f64[d - 1]
    }

    /// q^e for complex e.
    #[inline]
    pub fn q_pow(&self, e: Complex64) -> Complex64 {
        (e * self.ln_q).exp()
    }

    // ------------------------------------------------------------------
    // zeta_A
    // ------------------------------------------------------------------

    /// zeta_A(s) = 1 / (1 - q^{1-s}); errors within 1e-14 of a pole.
    pub fn zeta_a(&self, s: Complex64) -> Result<Complex64> {
        let denom = self.zeta_a_inv(s);
        if denom.norm() < POLE_TOL {
            return Err(Error::PoleProximity(s));
        }
        Ok(denom.inv())
    }

    /// 1/zeta_A(s) = 1 - q^{1-s}, entire in s. Evaluating the reciprocal is
    /// the "1/zeta_A(1) = 0" convention used to kill ratio terms at poles.
    pub fn zeta_a_inv(&self, s: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.q_pow(Complex64::new(1.0, 0.0) - s)
    }

    /// zeta_A'(s)/zeta_A(s) = -ln q * q^{1-s} / (1 - q^{1-s}).
    pub fn zeta_a_log_deriv(&self, s: Complex64) -> Result<Complex64> {
        let w = self.q_pow(Complex64::new(1.0, 0.0) - s);
        let denom = Complex64::new(1.0, 0.0) - w;
        if denom.norm() < POLE_TOL {
            return Err(Error::PoleProximity(s));
        }
        Ok(-self.ln_q * w / denom)
    }

    /// Laurent coefficients [c_{-1}, c_0, ..., c_order] of zeta_A(1+s) at
    /// s = 0: c_{n-1} = B_n^+ (ln q)^{n-1} / n! with B^+ the Bernoulli
    /// numbers taking B_1 = +1/2.
    pub fn zeta_a_laurent(&self, order: usize) -> Vec<f64> {
        // B_0 .. B_10 with B_1 = +1/2
        const BERNOULLI_PLUS: [f64; 11] = [
            1.0,
            0.5,
            1.0 / 6.0,
            0.0,
            -1.0 / 30.0,
            0.0,
            1.0 / 42.0,
            0.0,
            -1.0 / 30.0,
            0.0,
            5.0 / 66.0,
        ];
        assert!(order + 2 <= BERNOULLI_PLUS.len());
        let mut out = Vec::with_capacity(order + 2);
        let mut factorial = 1.0f64;
        for (n, &b) in BERNOULLI_PLUS.iter().enumerate().take(order + 2) {
            if n > 0 {
                factorial *= n as f64;
            }
            out.push(b * self.ln_q.powi(n as i32 - 1) / factorial);
        }
        out
    }

    // ------------------------------------------------------------------
    // generic degree-indexed machinery (delta form)
    // ------------------------------------------------------------------

    /// sum_{d<=N} pi_q(d) ln(1 + delta(d)), compensated.
    pub fn degree_indexed_log(&self, fac_delta: impl Fn(usize) -> Complex64) -> Complex64 {
        let mut acc = KahanC::default();
        for d in 1..=self.cutoff {
            acc.add(ln_1p(fac_delta(d)) * self.pi(d));
        }
        acc.value()
    }

    /// exp of [`Self::degree_indexed_log`].
    pub fn degree_indexed_product(&self, fac_delta: impl Fn(usize) -> Complex64) -> Complex64 {
        self.degree_indexed_log(fac_delta).exp()
    }

    /// sum_{d<=N} pi_q(d) * term(d), compensated.
    pub fn degree_indexed_sum(&self, term: impl Fn(usize) -> Complex64) -> Complex64 {
        let mut acc = KahanC::default();
        for d in 1..=self.cutoff {
            acc.add(term(d) * self.pi(d));
        }
        acc.value()
    }

    /// The small-N oracle: multiply (1 + delta(deg P)) once per enumerated
    /// monic irreducible of degree <= max_deg. Independent of the pi_q(d)
    /// counting formula and of the exp/log exponentiation.
    pub fn enumerated_product(
        &self,
        max_deg: usize,
        fac_delta: impl Fn(usize) -> Complex64,
    ) -> Result<Complex64> {
        let groups = irreducible_enumerate(self.q, max_deg, 1 << 26)?;
        let mut acc = Complex64::new(1.0, 0.0);
        for (i, group) in groups.iter().enumerate() {
            let f = Complex64::new(1.0, 0.0) + fac_delta(i + 1);
            for _ in group {
                acc *= f;
            }
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // the moment Euler product A(1/2; z_1..z_k)
    // ------------------------------------------------------------------

    /// Per-degree factor of A(1/2; z) at |P| = q^d, as factor - 1.
    pub fn moment_factor_delta(&self, d: usize, shifts: &[Complex64]) -> Complex64 {
        let x = (self.q as f64).powi(-(d as i32));
        let w: Vec<Complex64> = shifts
            .iter()
            .map(|z| self.q_pow(-(d as f64) * (z + 0.5)))
            .collect();
        moment_delta_from_pows(x, &w)
    }

    /// A(1/2; z_1,...,z_k), absolutely convergent for |Re z_j| < 1/2.
    pub fn a_shift(&self, shifts: &[Complex64]) -> Result<Complex64> {
        Ok(self.a_shift_log(shifts)?.exp())
    }

    pub fn a_shift_log(&self, shifts: &[Complex64]) -> Result<Complex64> {
        for z in shifts {
            if z.re.abs() >= 0.49 {
                return Err(Error::DomainViolation("|Re z| must stay below 1/2"));
            }
        }
        Ok(self.degree_indexed_log(|d| self.moment_factor_delta(d, shifts)))
    }

    /// A(1/2; 0,...,0) with k zeros: the generic route, cross-checked against
    /// the closed per-prime forms for k = 1, 2, 3 to 1e-10.
    pub fn moment_constant(&self, k: usize) -> Result<f64> {
        assert!(k >= 1);
        let generic = self.a_shift(&vec![Complex64::new(0.0, 0.0); k])?.re;
        if let Some(closed) = self.moment_constant_closed(k) {
            let tol = 1e-10;
            if (generic - closed).abs() > tol {
                return Err(Error::DualMismatch {
                    generic,
                    closed,
                    tol,
                });
            }
        }
        Ok(generic)
    }

    /// The explicit per-prime rational forms of the k = 1, 2, 3 constants,
    /// written as factor - 1 over a common denominator.
    pub fn moment_constant_closed(&self, k: usize) -> Option<f64> {
        let delta: fn(f64) -> f64 = match k {
            1 => |p| -1.0 / ((p + 1.0) * p),
            2 => |p| -(4.0 * p * p - 3.0 * p + 1.0) / (p.powi(4) + p.powi(3)),
            3 => |p| {
                -(12.0 * p.powi(5) - 23.0 * p.powi(4) + 23.0 * p.powi(3) - 15.0 * p * p
                    + 6.0 * p
                    - 1.0)
                    / (p.powi(6) * (p + 1.0))
            },
            _ => return None,
        };
        Some(
            self.degree_indexed_product(|d| {
                Complex64::new(delta((self.q as f64).powi(d as i32)), 0.0)
            })
            .re,
        )
    }

    /// P(1), the prime sum S = sum_P deg(P)/(|P|(|P|+1)-1), and
    /// A'(1/2; 0) = P(1) * 2 ln q * S.
    pub fn p1_suite(&self) -> P1Suite {
        let p1 = self
            .degree_indexed_product(|d| {
                let p = (self.q as f64).powi(d as i32);
                Complex64::new(-1.0 / ((p + 1.0) * p), 0.0)
            })
            .re;
        let s = self
            .degree_indexed_sum(|d| {
                let p = (self.q as f64).powi(d as i32);
                Complex64::new(d as f64 / (p * (p + 1.0) - 1.0), 0.0)
            })
            .re;
        P1Suite {
            p1,
            prime_sum: s,
            a_prime: p1 * 2.0 * self.ln_q * s,
        }
    }

    // ------------------------------------------------------------------
    // ratios factors
    // ------------------------------------------------------------------

    /// Y(alpha; gamma): zeta_A factors of the ratios conjecture. Denominator
    /// factors are evaluated through 1/zeta_A (entire), so a pole there
    /// yields a clean zero; a pole in the numerator is an error.
    pub fn y_factor(&self, alpha: &[Complex64], gamma: &[Complex64]) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for (j, a) in alpha.iter().enumerate() {
            for b in &alpha[j..] {
                acc *= self.zeta_a(Complex64::new(1.0, 0.0) + a + b)?;
            }
        }
        for (m, g1) in gamma.iter().enumerate() {
            for g2 in &gamma[m + 1..] {
                acc *= self.zeta_a(Complex64::new(1.0, 0.0) + g1 + g2)?;
            }
        }
        for a in alpha {
            for g in gamma {
                acc *= self.zeta_a_inv(Complex64::new(1.0, 0.0) + a + g);
            }
        }
        Ok(acc)
    }

    /// Per-degree factor of the closed-form ratios Euler product
    /// A_D(alpha; gamma) for general K, Q, as factor - 1.
    pub fn ratios_factor_delta(
        &self,
        d: usize,
        alpha: &[Complex64],
        gamma: &[Complex64],
    ) -> Complex64 {
        let u = (self.q as f64).powi(-(d as i32));
        let aw: Vec<Complex64> = alpha
            .iter()
            .map(|z| self.q_pow(-(d as f64) * (z + 0.5)))
            .collect();
        let gw: Vec<Complex64> = gamma
            .iter()
            .map(|z| self.q_pow(-(d as f64) * (z + 0.5)))
            .collect();

        // zeta-factor quotient as 1 + delta_zp
        let mut num_terms = vec![];
        for (j, a) in aw.iter().enumerate() {
            for b in &aw[j..] {
                num_terms.push(-a * b);
            }
        }
        for (m, g1) in gw.iter().enumerate() {
            for g2 in &gw[m + 1..] {
                num_terms.push(-g1 * g2);
            }
        }
        let den_terms: Vec<Complex64> = aw
            .iter()
            .flat_map(|a| gw.iter().map(move |g| -a * g))
            .collect();
        let dn = prod_m1(num_terms);
        let dd = prod_m1(den_terms);
        let delta_zp = (dn - dd) / (Complex64::new(1.0, 0.0) + dd);

        // bracket: (M- + M+)/2 + u over 1 + u, with
        // M-+ = prod_m(1 -+ gw_m) / prod_k(1 -+ aw_k).
        // (M- + M+)/2 = 1 + flat where
        //   flat = [ (n- + n+) - (d- + d+) + n- d+ + n+ d- - 2 d- d+ ]
        //          / (2 D- D+)
        // and the paired sums come from even symmetric tails so the O(w)
        // parts cancel algebraically.
        let n_minus = prod_m1(gw.iter().map(|g| -g));
        let n_plus = prod_m1(gw.iter().copied());
        let d_minus = prod_m1(aw.iter().map(|a| -a));
        let d_plus = prod_m1(aw.iter().copied());
        let n_pair = 2.0 * even_symmetric_tail(&gw); // n- + n+
        let d_pair = 2.0 * even_symmetric_tail(&aw); // d- + d+
        let numerator =
            n_pair - d_pair + n_minus * d_plus + n_plus * d_minus - 2.0 * d_minus * d_plus;
        let dm = Complex64::new(1.0, 0.0) + d_minus;
        let dp = Complex64::new(1.0, 0.0) + d_plus;
        let flat = numerator / (2.0 * dm * dp);
        let delta_inner = flat / (1.0 + u);

        delta_zp + delta_inner + delta_zp * delta_inner
    }

    /// Closed form of A_D(alpha; gamma) (general K, Q), degree-indexed.
    pub fn a_ratios(&self, alpha: &[Complex64], gamma: &[Complex64]) -> Result<Complex64> {
        for z in alpha.iter().chain(gamma) {
            if z.re.abs() > 0.25 {
                return Err(Error::DomainViolation("|Re shift| must be <= 1/4"));
            }
        }
        Ok(self.degree_indexed_product(|d| self.ratios_factor_delta(d, alpha, gamma)))
    }

    /// One-ratio A_D(alpha; gamma): the independent K = Q = 1 transcription
    /// prod_P (1 - |P|^{-1-a-g})^{-1} (1 - 1/((|P|+1)|P|^{1+2a})
    ///   - 1/((|P|+1)|P|^{a+g})), reduced per prime to
    /// factor - 1 = (|P|^{-1-a-g} - |P|^{-1-2a}) / ((|P|+1)(1 - |P|^{-1-a-g})).
    pub fn a_d_one_ratio(&self, alpha: Complex64, gamma: Complex64) -> Complex64 {
        self.degree_indexed_product(|d| self.one_ratio_factor_delta(d, alpha, gamma))
    }

    pub fn one_ratio_factor_delta(
        &self,
        d: usize,
        alpha: Complex64,
        gamma: Complex64,
    ) -> Complex64 {
        let df = d as f64;
        let p = (self.q as f64).powi(d as i32);
        // t/p - a2 = q^{-d(1+2a)} expm1(-d ln q (gamma - alpha)), stable
        // when gamma ~ alpha where the factor collapses to 1
        let t_over_p = self.q_pow(-df * (alpha + gamma + 1.0));
        let a2 = self.q_pow(-df * (2.0 * alpha + 1.0));
        let diff = a2 * exp_m1(-df * self.ln_q * (gamma - alpha));
        diff / ((p + 1.0) * (Complex64::new(1.0, 0.0) - t_over_p))
    }

    /// log A_D(-z; z); exactly 0 at z = 0.
    pub fn a_d_neg_log(&self, z: Complex64) -> Complex64 {
        self.degree_indexed_log(|d| self.one_ratio_factor_delta(d, -z, z))
    }

    /// A'_D(r; r) = sum_P ln|P| / ((|P|^{1+2r} - 1)(|P| + 1)).
    pub fn a_d_prime(&self, r: Complex64) -> Complex64 {
        self.degree_indexed_sum(|d| {
            let df = d as f64;
            let p = (self.q as f64).powi(d as i32);
            let grown = self.q_pow(df * (2.0 * r + 1.0));
            df * self.ln_q / ((grown - 1.0) * (p + 1.0))
        })
    }

    /// The three one-ratio quantities of the log-derivative formula.
    pub fn one_ratio_suite(
        &self,
        alpha: Complex64,
        gamma: Complex64,
        r: Complex64,
    ) -> Result<OneRatioSuite> {
        for z in [alpha, gamma, r] {
            if z.re.abs() > 0.25 {
                return Err(Error::DomainViolation("|Re shift| must be <= 1/4"));
            }
        }
        Ok(OneRatioSuite {
            a_d: self.a_d_one_ratio(alpha, gamma),
            a_d_neg: self.a_d_one_ratio(-r, r),
            a_d_prime: self.a_d_prime(r),
        })
    }

    // ------------------------------------------------------------------
    // tail bounds
    // ------------------------------------------------------------------

    /// Geometric bound on the log of the dropped tail of a degree-indexed
    /// product: sum_{d>N} pi_q(d) |log fac(q^{-d})| with pi_q(d) <= q^d / d
    /// and |log fac| <= C x^2 (origin-evaluated moment factors), giving
    /// C q^{-N} / ((N+1)(q-1)).
    pub fn tail_bound(&self, family: FactorFamily) -> f64 {
        self.tail_bound_at(family, self.cutoff)
    }

    pub fn tail_bound_at(&self, family: FactorFamily, cutoff: usize) -> f64 {
        let FactorFamily::Moment(k) = family;
        // |log fac(x)| ~ c(k) x^2 near 0; estimate c(k) at a reference point
        // small enough for the x^3 correction to be negligible, then double.
        let x_ref: f64 = 1e-5;
        let sqrt_x = x_ref.sqrt();
        let w = vec![Complex64::new(sqrt_x, 0.0); k];
        let c = -(ln_1p(moment_delta_from_pows(x_ref, &w)).re) / (x_ref * x_ref);
        let c = 2.0 * c.abs().max(1.0);
        let qf = self.q as f64;
        c * qf.powi(-(cutoff as i32)) / ((cutoff as f64 + 1.0) * (qf - 1.0))
    }
}

/// One per-prime moment factor at |P| = 1/x, as factor - 1, given
/// w_j = |P|^{-(1/2 + z_j)}:
///
///   fac = prod_{i<=j}(1 - w_i w_j)
///         * [ (prod(1-w)^{-1} + prod(1+w)^{-1})/2 + x ] / (1 + x).
///
/// The half-sum is rewritten through even symmetric tails so its distance
/// from 1 comes out without cancellation, and the final O(x) parts of the
/// bracket and the pair product cancel in the addition of deltas (exactly,
/// for k = 1 at the origin).
pub(crate) fn moment_delta_from_pows(x: f64, w: &[Complex64]) -> Complex64 {
    let mut pair_terms = Vec::with_capacity(w.len() * (w.len() + 1) / 2);
    for (i, wi) in w.iter().enumerate() {
        for wj in &w[i..] {
            pair_terms.push(-wi * wj);
        }
    }
    let delta_pair = prod_m1(pair_terms);

    // (S-^{-1} + S+^{-1})/2 - 1 = (even_tail - delta_sq) / (1 + delta_sq)
    // with S-+ = prod(1 -+ w_j) and delta_sq = prod(1 - w_j^2) - 1
    let delta_sq = prod_m1(w.iter().map(|wj| -wj * wj));
    let h = (even_symmetric_tail(w) - delta_sq) / (Complex64::new(1.0, 0.0) + delta_sq);

    (h + delta_pair + delta_pair * (h + x)) / (1.0 + x)
}

#[derive(Debug, Clone, Copy)]
pub struct P1Suite {
    /// P(1) = prod_P (1 - 1/((|P|+1)|P|)).
    pub p1: f64,
    /// S = sum_P deg(P)/(|P|(|P|+1)-1).
    pub prime_sum: f64,
    /// A'(1/2; 0) = P(1) * 2 ln q * S.
    pub a_prime: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct OneRatioSuite {
    pub a_d: Complex64,
    pub a_d_neg: Complex64,
    pub a_d_prime: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub enum FactorFamily {
    Moment(usize),
}

/// a_m = prod_{P | m} (1 + 1/|P|)^{-1} — the orthogonality constant of the
/// ensemble's character average. Multiplicative across coprime m.
pub fn a_constant(m: &PolyFq) -> Result<f64> {
    let fac = factor(m)?;
    let q = m.q() as f64;
    let mut acc = 1.0f64;
    for (p, _) in &fac.factors {
        acc /= 1.0 + q.powi(-(p.degree() as i32));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(q: u32, n: usize) -> EulerProductTable {
        EulerProductTable::new(&FieldCtx::new(q).unwrap(), n)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn stable_helpers() {
        let z = Complex64::new(1e-12, -3e-13);
        assert!((ln_1p(z) - z).norm() < 1e-24);
        assert!((exp_m1(z) - z).norm() < 1e-24);
        let big = Complex64::new(0.7, 1.1);
        assert!((ln_1p(big) - (Complex64::new(1.7, 1.1)).ln()).norm() < 1e-15);
        assert!((exp_m1(big) - (big.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn zeta_a_closed_form_values() {
        let t = table(3, 10);
        assert!((t.zeta_a(c(2.0)).unwrap() - c(1.5)).norm() < 1e-15);
        assert!(t.zeta_a(c(1.0)).is_err());
        // residue: s * zeta_A(1+s) -> 1/ln q
        let s = c(1e-7);
        let v = (s * t.zeta_a(c(1.0) + s).unwrap()).re;
        assert!((v - 1.0 / 3.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn zeta_a_laurent_model() {
        let t = table(3, 10);
        let co = t.zeta_a_laurent(1);
        let ln3 = 3.0f64.ln();
        assert!((co[0] - 1.0 / ln3).abs() < 1e-15);
        assert!((co[1] - 0.5).abs() < 1e-15);
        assert!((co[2] - ln3 / 12.0).abs() < 1e-15);
        // 3-term model matches the closed form to O(s^3) on |s| = 1e-3;
        // the tolerance allows ~1e-10 of cancellation noise in the closed
        // form itself (zeta ~ 1e3 there) on top of the ~2e-12 truncation
        for k in 0..8 {
            let s = Complex64::from_polar(1e-3, k as f64 * 0.7);
            let model = co[0] / s + co[1] + co[2] * s;
            let exact = t.zeta_a(c(1.0) + s).unwrap();
            assert!((exact - model).norm() < 1e-9, "s = {s}");
        }
    }

    #[test]
    fn a_shift_at_origin_equals_p1_for_k1() {
        let t = table(3, 30);
        let a = t.a_shift(&[c(0.0)]).unwrap().re;
        let p1 = t.p1_suite().p1;
        assert!((a - p1).abs() < 1e-14, "{a} vs {p1}");
    }

    #[test]
    fn degree_indexed_equals_enumerated_products() {
        // every implemented factor family, primes of degree <= 6, q = 3
        let t = table(3, 6);
        let z2 = [c(0.07), Complex64::new(-0.03, 0.11)];
        let z3 = [c(0.05), c(-0.08), Complex64::new(0.02, 0.04)];
        let families: Vec<(&str, Box<dyn Fn(usize) -> Complex64 + '_>)> = vec![
            (
                "moment k=1",
                Box::new(|d| t.moment_factor_delta(d, &[c(0.1)])),
            ),
            ("moment k=2", Box::new(|d| t.moment_factor_delta(d, &z2))),
            ("moment k=3", Box::new(|d| t.moment_factor_delta(d, &z3))),
            (
                "ratios K=Q=1",
                Box::new(|d| t.ratios_factor_delta(d, &[c(0.1)], &[Complex64::new(0.08, 0.05)])),
            ),
            (
                "one-ratio",
                Box::new(|d| t.one_ratio_factor_delta(d, c(0.06), c(0.09))),
            ),
        ];
        for (name, fac) in families {
            let indexed = t.degree_indexed_product(&fac);
            let enumerated = t.enumerated_product(6, &fac).unwrap();
            assert!(
                (indexed - enumerated).norm() < 1e-12 * enumerated.norm().max(1.0),
                "{name}: {indexed} vs {enumerated}"
            );
        }
    }

    #[test]
    fn a_shift_is_symmetric_and_domain_checked() {
        let t = table(3, 20);
        let z = [c(0.1), Complex64::new(-0.05, 0.2), c(0.02)];
        let zs = [z[2], z[0], z[1]];
        let a = t.a_shift(&z).unwrap();
        let b = t.a_shift(&zs).unwrap();
        assert!((a - b).norm() < 1e-14);
        assert!(t.a_shift(&[c(0.5)]).is_err());
    }

    #[test]
    fn p1_suite_positive_and_consistent() {
        for q in [3u32, 5, 7] {
            let t = table(q, 30);
            let suite = t.p1_suite();
            assert!(suite.p1 > 0.0 && suite.p1 < 1.0, "q={q}: {}", suite.p1);
            assert!(suite.prime_sum > 0.0);
            // S degree-indexed equals irreducible-enumerated S for N = 6
            if q == 3 {
                let t6 = table(3, 6);
                let s6 = t6.p1_suite().prime_sum;
                let groups = irreducible_enumerate(3, 6, 1 << 26).unwrap();
                let mut s_enum = 0.0;
                for (i, group) in groups.iter().enumerate() {
                    let d = (i + 1) as f64;
                    let p = 3.0f64.powi(i as i32 + 1);
                    s_enum += group.len() as f64 * d / (p * (p + 1.0) - 1.0);
                }
                assert!((s6 - s_enum).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn a_prime_matches_finite_difference() {
        let t = table(3, 30);
        let suite = t.p1_suite();
        let h = 1e-5;
        let fd = (t.a_shift(&[c(h)]).unwrap().re - t.a_shift(&[c(-h)]).unwrap().re) / (2.0 * h);
        assert!(
            (fd - suite.a_prime).abs() < 1e-6 * suite.a_prime.abs().max(1.0),
            "fd {fd} vs closed {}",
            suite.a_prime
        );
    }

    #[test]
    fn moment_constants_dual_evaluation() {
        let t = table(3, 30);
        for k in 1..=3usize {
            let v = t.moment_constant(k).unwrap();
            assert!(v > 0.0 && v < 1.0, "k={k}: {v}");
        }
        // k = 1 reduces to P(1)
        assert!((t.moment_constant(1).unwrap() - t.p1_suite().p1).abs() < 1e-14);
    }

    #[test]
    fn y_factor_specializations() {
        let t = table(3, 10);
        let alpha = c(0.1);
        // K=1, Q=0: Y = zeta_A(1 + 2 alpha)
        let y = t.y_factor(&[alpha], &[]).unwrap();
        assert!((y - t.zeta_a(c(1.2)).unwrap()).norm() < 1e-13);
        // K=Q=1 at gamma = alpha: zeta_A(1+2a)/zeta_A(1+2a) = 1
        let y1 = t.y_factor(&[alpha], &[alpha]).unwrap();
        assert!((y1 - c(1.0)).norm() < 1e-13);
        // 1/zeta_A(1) = 0 convention: denominator hits the pole cleanly
        let y0 = t.y_factor(&[-alpha], &[alpha]).unwrap();
        assert!(y0.norm() < 1e-13, "{y0}");
    }

    #[test]
    fn a_ratios_matches_one_ratio_transcription() {
        let t = table(3, 30);
        for (a, g) in [
            (c(0.1), c(0.08)),
            (Complex64::new(0.05, 0.12), c(0.1)),
            (c(-0.1), c(0.1)),
            (c(0.2), Complex64::new(0.03, -0.2)),
        ] {
            let general = t.a_ratios(&[a], &[g]).unwrap();
            let one = t.a_d_one_ratio(a, g);
            assert!(
                (general - one).norm() < 1e-12 * one.norm().max(1.0),
                "alpha={a} gamma={g}: {general} vs {one}"
            );
        }
    }

    #[test]
    fn a_d_at_equal_shifts_is_one() {
        let t = table(3, 30);
        for r in [0.05, 0.1] {
            let v = t.a_d_one_ratio(c(r), c(r));
            assert!((v - c(1.0)).norm() < 1e-12, "r={r}: {v}");
            let vg = t.a_ratios(&[c(r)], &[c(r)]).unwrap();
            assert!((vg - c(1.0)).norm() < 1e-12, "r={r}: {vg}");
        }
        assert!((t.a_d_one_ratio(c(0.0), c(0.0)) - c(1.0)).norm() < 1e-12);
        assert!(t.a_d_neg_log(c(0.0)).norm() < 1e-15);
    }

    #[test]
    fn a_ratios_with_no_denominator_reduces_to_moment_family() {
        // K=1, Q=0, alpha=0 collapses to the k=1 moment factor; compare at
        // N = 6 against the enumerated moment product
        let t = table(3, 6);
        let via_ratios = t.a_ratios(&[c(0.0)], &[]).unwrap();
        let enumerated = t
            .enumerated_product(6, |d| t.moment_factor_delta(d, &[c(0.0)]))
            .unwrap();
        assert!(
            (via_ratios - enumerated).norm() < 1e-12,
            "{via_ratios} vs {enumerated}"
        );
    }

    #[test]
    fn one_ratio_suite_properties() {
        let t = table(3, 30);
        // A'_D(r;r) > 0 on (0, 1/4): all summands positive
        for r in [0.01, 0.1, 0.2, 0.24] {
            let s = t.one_ratio_suite(c(r), c(r), c(r)).unwrap();
            assert!(s.a_d_prime.re > 0.0);
            assert!(s.a_d_prime.im.abs() < 1e-15);
        }
        // finite-difference d/dalpha A_D(alpha; gamma) at alpha = gamma = r
        let r = c(0.1);
        let h = 1e-5;
        let fd = (t.a_d_one_ratio(r + c(h), r) - t.a_d_one_ratio(r - c(h), r)) / (2.0 * h);
        let closed = t.a_d_prime(r);
        assert!(
            (fd - closed).norm() < 1e-6 * closed.norm().max(1.0),
            "fd {fd} vs {closed}"
        );
    }

    #[test]
    fn tail_bound_behaviour() {
        let t30 = table(3, 30);
        // decreasing in N
        let mut prev = f64::INFINITY;
        for n in [5usize, 10, 20, 30] {
            let b = t30.tail_bound_at(FactorFamily::Moment(1), n);
            assert!(b < prev);
            prev = b;
        }
        // observed |value(N) - value(N+10)| <= bound(N), q = 3, k <= 3
        for k in 1..=3usize {
            for n in [6usize, 10] {
                let tn = table(3, n);
                let tn10 = table(3, n + 10);
                let z = vec![c(0.0); k];
                let va = tn.a_shift(&z).unwrap().re;
                let vb = tn10.a_shift(&z).unwrap().re;
                // the bound is on log of the product; |v(N)-v(N+10)| ~ v |log tail|
                let bound = tn.tail_bound(FactorFamily::Moment(k)) * vb.abs() * 2.0;
                assert!(
                    (va - vb).abs() <= bound,
                    "k={k} N={n}: |{va} - {vb}| > {bound}"
                );
            }
        }
        // bound below 1e-12 at N = 30 for the k = 1 factor
        assert!(t30.tail_bound(FactorFamily::Moment(1)) < 1e-12);
    }

    #[test]
    fn a_constant_values_and_multiplicativity() {
        // a_{x^2} over F_3: only prime divisor is x
        let m = PolyFq::from_coeffs(3, vec![0, 0, 1]);
        assert!((a_constant(&m).unwrap() - 0.75).abs() < 1e-15);
        // multiplicative across coprime moduli, all monic pairs of deg <= 2
        let monics: Vec<PolyFq> = (1..=2usize)
            .flat_map(|d| crate::enumeration::monic_enumerate(3, d, 1 << 20).unwrap())
            .collect();
        for m1 in &monics {
            for m2 in &monics {
                if m1.gcd(m2).unwrap().degree() != Some(0) {
                    continue;
                }
                let lhs = a_constant(&m1.mul(m2)).unwrap();
                let rhs = a_constant(m1).unwrap() * a_constant(m2).unwrap();
                assert!((lhs - rhs).abs() < 1e-14, "m1={m1} m2={m2}");
            }
        }
    }
}
