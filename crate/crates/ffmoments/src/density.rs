//! One-level density of the zeros: empirical linear statistics over a sweep,
//! the full conjectural formula with lower-order terms, and the random-matrix
//! limit kernel 1 - sin(2 pi tau)/(2 pi tau).
//!
//! Scaling conventions, fixed once: a zero angle theta (of u q^{1/2}) has
//! ordinate t = -theta / ln q on the critical line s = 1/2 + i t, confined to
//! one period t in (-pi/ln q, pi/ln q]; the scaled ordinate is
//! tau = t (2 g ln q) / (2 pi) in (-g, g].

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::ensemble::parallel_mean;
use crate::error::{Error, Result};
use crate::eulerfact::{exp_m1, EulerProductTable};
use crate::sweep::SweepCache;

/// Even real test functions, evaluable on the scaled variable tau and on the
/// unscaled ordinate t (period 2 pi / ln q).
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// h(tau) = (sin(pi sigma tau) / (pi sigma tau))^2; Fourier transform
    /// supported in [-sigma, sigma].
    Fejer { sigma: f64 },
    /// f(t) = c_0 + sum_{m>=1} c_m cos(m t ln q): natively periodic in t.
    TrigPoly { cosine_coeffs: Vec<f64> },
    /// Smoothed indicator of [-half_width, half_width] with a cosine taper
    /// of the given width.
    IndicatorSmoothed { half_width: f64, taper: f64 },
}

impl TestFunction {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::DomainViolation("test function spec: fejer:S | trig:c0,c1,.. | indicator:A,EPS");
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "fejer" => Ok(TestFunction::Fejer {
                sigma: args.parse().map_err(|_| bad())?,
            }),
            "trig" => {
                let coeffs: std::result::Result<Vec<f64>, _> =
                    args.split(',').map(|c| c.parse()).collect();
                Ok(TestFunction::TrigPoly {
                    cosine_coeffs: coeffs.map_err(|_| bad())?,
                })
            }
            "indicator" => {
                let (a, eps) = args.split_once(',').ok_or_else(bad)?;
                Ok(TestFunction::IndicatorSmoothed {
                    half_width: a.parse().map_err(|_| bad())?,
                    taper: eps.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }

    /// h(tau) on the scaled variable.
    pub fn eval_scaled(&self, tau: f64, genus: usize, ln_q: f64) -> f64 {
        match self {
            TestFunction::Fejer { sigma } => {
                let x = std::f64::consts::PI * sigma * tau;
                if x.abs() < 1e-8 {
                    1.0 - x * x / 3.0
                } else {
                    let s = x.sin() / x;
                    s * s
                }
            }
            TestFunction::TrigPoly { .. } => {
                // exact conversion to the unscaled variable, not sampled
                let t = 2.0 * std::f64::consts::PI * tau / (2.0 * genus as f64 * ln_q);
                self.eval_unscaled(t, genus, ln_q)
            }
            TestFunction::IndicatorSmoothed { half_width, taper } => {
                let x = tau.abs();
                if x <= half_width - taper {
                    1.0
                } else if x >= half_width + taper {
                    0.0
                } else {
                    let ramp = (x - (half_width - taper)) / (2.0 * taper);
                    0.5 * (1.0 + (std::f64::consts::PI * ramp).cos())
                }
            }
        }
    }

    /// f(t) on the unscaled ordinate.
    pub fn eval_unscaled(&self, t: f64, genus: usize, ln_q: f64) -> f64 {
        match self {
            TestFunction::TrigPoly { cosine_coeffs } => {
                let mut acc = 0.0;
                for (m, c) in cosine_coeffs.iter().enumerate() {
                    if m == 0 {
                        acc += c;
                    } else {
                        acc += c * (m as f64 * ln_q * t).cos();
                    }
                }
                acc
            }
            _ => {
                let tau = t * (2.0 * genus as f64 * ln_q) / (2.0 * std::f64::consts::PI);
                self.eval_scaled(tau, genus, ln_q)
            }
        }
    }

    fn integrable_on_r(&self) -> bool {
        !matches!(self, TestFunction::TrigPoly { .. })
    }
}

/// Empirical one-level density: mean over D of sum_j h(tau_j).
pub fn density_empirical(
    cache: &SweepCache,
    h: &TestFunction,
    table: &EulerProductTable,
) -> Result<f64> {
    if cache.records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let g = cache.header.g;
    let ln_q = table.ln_q();
    let scale = g as f64 / std::f64::consts::PI;
    Ok(parallel_mean(&cache.records, |r| {
        r.zero_angles
            .iter()
            .map(|theta| h.eval_scaled(-theta * scale, g, ln_q))
            .sum()
    }))
}

/// The bracket of the density formula at ordinate t (per-D form):
///
///   ln|D| - X'/X
///   + 2 [ zeta_A'/zeta_A(1+2it) + A_D'(it; it)
///         - ln q |D|^{-it} X(1/2+it) zeta_A(1-2it) A_D(-it; it) ].
///
/// The constant term is ln|D| - ln q: the reflected line of the counting
/// integral contributes -XX'/XX(s) = ln|D| - X'/X(s), and X'/X = ln q.
/// (Plugging f = 1 reproduces the zero count 2g on the nose, which pins the
/// sign; so does agreement with the empirical density.)
///
/// The two singular terms are evaluated in paired form
/// psi(w) (e^{-i nu t} A_D(-it;it) - 1) with w = 2 i t ln q and
/// nu = 2 g ln q, which is regular at t = 0 (value -g ln q for the pair,
/// 0 for the whole bracket).
pub fn density_bracket(t: f64, genus: usize, table: &EulerProductTable) -> Complex64 {
    let ln_q = table.ln_q();
    let ln_norm = (2 * genus + 1) as f64 * ln_q;
    let z = Complex64::new(0.0, t);
    let a_prime = table.a_d_prime(z);
    let nu = 2.0 * genus as f64 * ln_q;
    let paired = if t.abs() < 1e-9 {
        Complex64::new(-(genus as f64) * ln_q, 0.0) - a_prime
    } else {
        // psi(w) phi(t) = [w/(e^w - 1)] phi(t) / (2 i t), all parts stable
        let w = Complex64::new(0.0, 2.0 * t * ln_q);
        let b_fn = w / exp_m1(w);
        let d1 = exp_m1(Complex64::new(0.0, -nu * t));
        let d2 = exp_m1(table.a_d_neg_log(z));
        let phi = d1 + d2 + d1 * d2;
        b_fn * phi / Complex64::new(0.0, 2.0 * t)
    };
    Complex64::new(ln_norm - ln_q, 0.0) + 2.0 * (a_prime + paired)
}

/// The same two singular terms without pairing; only safe away from t = 0.
/// Retained as the oracle that the paired form reproduces the raw formula.
pub fn density_bracket_raw(t: f64, genus: usize, table: &EulerProductTable) -> Result<Complex64> {
    let ln_q = table.ln_q();
    let ln_norm = (2 * genus + 1) as f64 * ln_q;
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, t);
    let t1 = table.zeta_a_log_deriv(one + 2.0 * z)?;
    let a_neg = table.a_d_neg_log(z).exp();
    let t3 = -ln_q
        * (-z * ln_norm).exp()
        * (z * ln_q).exp()
        * table.zeta_a(one - 2.0 * z)?
        * a_neg;
    Ok(Complex64::new(ln_norm - ln_q, 0.0) + 2.0 * (t1 + table.a_d_prime(z) + t3))
}

/// Full conjectural one-level density (mean form): the per-D bracket is
/// D-independent, so
///   (1/2pi) int_{-pi/ln q}^{pi/ln q} f(t) * bracket(t) dt.
/// Gauss-Legendre with node doubling until the value moves < 1e-6.
pub fn density_theory(
    h: &TestFunction,
    genus: usize,
    table: &EulerProductTable,
) -> Result<f64> {
    let ln_q = table.ln_q();
    let half_period = std::f64::consts::PI / ln_q;
    let integrand = |t: f64| -> f64 {
        h.eval_unscaled(t, genus, ln_q) * density_bracket(t, genus, table).re
    };
    let mut prev: Option<f64> = None;
    let mut nodes = 64;
    while nodes <= 2048 {
        let gl = GaussLegendre::new(nodes).expect("node count >= 2");
        let val = gl.integrate(-half_period, half_period, integrand)
            / (2.0 * std::f64::consts::PI);
        if let Some(p) = prev {
            if (val - p).abs() <= 1e-6 * (1.0 + val.abs()) {
                return Ok(val);
            }
        }
        prev = Some(val);
        nodes *= 2;
    }
    Err(Error::QuadratureDiverged(prev.unwrap_or(f64::NAN)))
}

/// Imaginary-part mass of the theory integral; the integrand is Hermitian in
/// t, so this must vanish to rounding.
pub fn density_theory_imag(h: &TestFunction, genus: usize, table: &EulerProductTable) -> f64 {
    let ln_q = table.ln_q();
    let half_period = std::f64::consts::PI / ln_q;
    let gl = GaussLegendre::new(256).expect("node count >= 2");
    gl.integrate(-half_period, half_period, |t| {
        h.eval_unscaled(t, genus, ln_q) * density_bracket(t, genus, table).im
    }) / (2.0 * std::f64::consts::PI)
}

/// int h(tau) (1 - sin(2 pi tau)/(2 pi tau)) dtau over the real line, by
/// panelized Gauss-Legendre plus an analytic tail estimate for the Fejer
/// kernel (h ~ 1/(pi sigma tau)^2 gives tail ~ 1/(pi^2 sigma^2 T)).
pub fn rmt_limit(h: &TestFunction) -> Result<f64> {
    if !h.integrable_on_r() {
        return Err(Error::NonIntegrableTestFunction);
    }
    let kernel = |tau: f64| {
        let x = 2.0 * std::f64::consts::PI * tau;
        if x.abs() < 1e-8 {
            x * x / 6.0
        } else {
            1.0 - x.sin() / x
        }
    };
    // the kernel argument never needs the scale parameters for these kinds
    let (reach, tail) = match h {
        TestFunction::Fejer { sigma } => {
            let t = 20_000.0;
            (t, 1.0 / (std::f64::consts::PI.powi(2) * sigma * sigma * t))
        }
        TestFunction::IndicatorSmoothed { half_width, taper } => (half_width + taper, 0.0),
        TestFunction::TrigPoly { .. } => unreachable!(),
    };
    let panel = match h {
        TestFunction::Fejer { sigma } => 0.25 / sigma.max(1.0),
        _ => 0.25,
    };
    let gl = GaussLegendre::new(8).expect("node count >= 2");
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    let mut left = 0.0f64;
    while left < reach {
        let right = (left + panel).min(reach);
        let v = gl.integrate(left, right, |tau| h.eval_scaled(tau, 1, 1.0) * kernel(tau));
        // Kahan over the panel sums
        let t = acc + v;
        comp += if acc.abs() >= v.abs() {
            (acc - t) + v
        } else {
            (v - t) + acc
        };
        acc = t;
        left = right;
    }
    // even integrand: double, then add the symmetric tail estimate
    Ok(2.0 * (acc + comp) + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::sweep::{run_sweep, SweepConfig};

    fn table(q: u32) -> EulerProductTable {
        EulerProductTable::new(&FieldCtx::new(q).unwrap(), 30)
    }

    #[test]
    fn paired_bracket_matches_raw_formula_off_origin() {
        let t = table(3);
        for g in [2usize, 5] {
            for tt in [0.05, 0.3, 0.9, -0.6] {
                let paired = density_bracket(tt, g, &t);
                let raw = density_bracket_raw(tt, g, &t).unwrap();
                assert!(
                    (paired - raw).norm() <= 1e-10 * raw.norm().max(1.0),
                    "g={g} t={tt}: {paired} vs {raw}"
                );
            }
        }
    }

    #[test]
    fn bracket_regular_at_origin() {
        let t = table(3);
        let g = 3usize;
        let at_zero = density_bracket(0.0, g, &t);
        // the singular parts cancel to exactly 0 at t = 0, matching the
        // vanishing of the limit kernel at tau = 0
        assert!(at_zero.re.abs() < 1e-10);
        assert!(at_zero.im.abs() < 1e-12);
        // 2-term series model: |B(t) - B(0) - B'(0) t| = O(t^2) at |t| = 1e-4
        let h = 1e-3;
        let deriv = (density_bracket(h, g, &t) - density_bracket(-h, g, &t)) / (2.0 * h);
        let probe = 1e-4;
        let model = at_zero + deriv * probe;
        let actual = density_bracket(probe, g, &t);
        assert!(
            (actual - model).norm() < 1e-4,
            "{actual} vs model {model}"
        );
        assert!(actual.norm().is_finite());
    }

    #[test]
    fn empirical_with_constant_one_counts_all_zeros() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 2)).unwrap();
        let t = table(3);
        let h = TestFunction::TrigPoly {
            cosine_coeffs: vec![1.0],
        };
        let v = density_empirical(&cache, &h, &t).unwrap();
        assert_eq!(v, 4.0); // exactly 2g per D
    }

    #[test]
    fn empirical_is_even_in_the_angles() {
        let mut cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        let t = table(3);
        let h = TestFunction::Fejer { sigma: 1.0 };
        let v1 = density_empirical(&cache, &h, &t).unwrap();
        for r in &mut cache.records {
            let mut negated: Vec<f64> = r.zero_angles.iter().map(|a| -a).collect();
            negated.sort_by(|a, b| a.partial_cmp(b).unwrap());
            r.zero_angles = negated;
        }
        let v2 = density_empirical(&cache, &h, &t).unwrap();
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn rmt_limit_fejer_is_one_half() {
        // Parseval: int h = 1/sigma and the sinc part contributes
        // (1/2) int_{-1}^{1} hhat = 1/2 at sigma = 1, so the limit is 1/2
        let v = rmt_limit(&TestFunction::Fejer { sigma: 1.0 }).unwrap();
        assert!((v - 0.5).abs() < 1e-5, "{v}");
    }

    #[test]
    fn rmt_limit_fejer_small_support() {
        // sigma = 1/2: int h = 2, Fourier support [-1/2, 1/2] strictly inside
        // (-1, 1): limit = int h - (1/2) int hhat = 2 - 1/2
        let v = rmt_limit(&TestFunction::Fejer { sigma: 0.5 }).unwrap();
        assert!((v - 1.5).abs() < 1e-5, "{v}");
    }

    #[test]
    fn rmt_limit_nonnegative_for_nonnegative_h() {
        let v = rmt_limit(&TestFunction::IndicatorSmoothed {
            half_width: 0.8,
            taper: 0.2,
        })
        .unwrap();
        assert!(v >= 0.0);
        assert!(rmt_limit(&TestFunction::TrigPoly {
            cosine_coeffs: vec![1.0]
        })
        .is_err());
    }

    #[test]
    fn theory_value_is_real_and_converges() {
        let t = table(5);
        let h = TestFunction::Fejer { sigma: 1.0 };
        let v = density_theory(&h, 4, &t).unwrap();
        assert!(v.is_finite());
        assert!(density_theory_imag(&h, 4, &t).abs() < 1e-10);
    }

    #[test]
    fn theory_counts_zeros_for_constant_test_function() {
        // f = 1 counts all 2g zeros; the conjectural formula reproduces the
        // count up to its o(1) error
        let t = table(3);
        let h = TestFunction::TrigPoly {
            cosine_coeffs: vec![1.0],
        };
        for g in [2usize, 4] {
            let v = density_theory(&h, g, &t).unwrap();
            assert!(
                (v - 2.0 * g as f64).abs() < 0.05,
                "g={g}: {v} vs {}",
                2 * g
            );
        }
    }

    #[test]
    fn theory_approaches_rmt_limit_in_genus() {
        let t = table(5);
        let h = TestFunction::Fejer { sigma: 1.0 };
        let rmt = rmt_limit(&h).unwrap();
        let d3 = (density_theory(&h, 3, &t).unwrap() - rmt).abs();
        let d6 = (density_theory(&h, 6, &t).unwrap() - rmt).abs();
        assert!(d6 < d3, "g=3: {d3}, g=6: {d6}");
    }

    #[test]
    fn test_function_parsing() {
        assert!(matches!(
            TestFunction::parse("fejer:1.0").unwrap(),
            TestFunction::Fejer { .. }
        ));
        assert!(matches!(
            TestFunction::parse("trig:1,0.5").unwrap(),
            TestFunction::TrigPoly { .. }
        ));
        assert!(matches!(
            TestFunction::parse("indicator:0.8,0.2").unwrap(),
            TestFunction::IndicatorSmoothed { .. }
        ));
        assert!(TestFunction::parse("gauss:1").is_err());
    }
}
