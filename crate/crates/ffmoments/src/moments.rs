//! The conjectural moment polynomials Q_k and the empirical ensemble moments
//! they predict.
//!
//! Q_k is the k-fold contour residue
//!
//!   Q_k(x) = (-1)^{k(k-1)/2} 2^k / k! * (2 pi i)^{-k}
//!            oint...oint G(z) Delta(z^2)^2 / prod z_j^{2k-1}
//!            * q^{(x/2) sum z_j} dz
//!
//! with G(z) = A(1/2; z) prod_j q^{-z_j/2} prod_{i<=j} zeta_A(1+z_i+z_j).
//! Expanding q^{(x/2) sum z_j} as a series in x turns one grid sweep into
//! all k(k+1)/2 + 1 coefficients at once. The trapezoid rule on circles is
//! spectrally accurate here: the integrand is analytic in an annulus around
//! each contour (the Vandermonde square kills the zeta poles at z_i = -z_j,
//! and distinct radii keep them off-contour).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::ensemble::{parallel_mean, SampleMode};
use crate::error::{Error, Result};
use crate::eulerfact::{ln_1p, moment_delta_from_pows, EulerProductTable, KahanC};
use crate::sweep::SweepCache;

/// Contour grid: one circle per variable, distinct radii, M nodes each.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    pub nodes: usize,
    pub radii: Vec<f64>,
}

impl ContourSpec {
    /// Default radii r_j = (0.04 / ln q)(1 + j/(2k)), j = 1..k — distinct,
    /// tiny, inside every convergence constraint — with M = 64 nodes.
    pub fn default_for(k: usize, ln_q: f64) -> Self {
        let radii = (1..=k)
            .map(|j| 0.04 / ln_q * (1.0 + j as f64 / (2 * k) as f64))
            .collect();
        ContourSpec { nodes: 64, radii }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn validate(&self, k: usize, ln_q: f64) -> Result<()> {
        if self.radii.len() != k {
            return Err(Error::InvalidContour("need one radius per variable"));
        }
        if self.nodes < 8 {
            return Err(Error::InvalidContour("need at least 8 nodes per circle"));
        }
        let cap = 0.25f64.min(std::f64::consts::FRAC_PI_2 / ln_q) * 0.999;
        for (i, &r) in self.radii.iter().enumerate() {
            if !(r > 0.0 && r < cap) {
                return Err(Error::InvalidContour(
                    "radii must lie in (0, min(1/4, pi/(2 ln q)))",
                ));
            }
            for &r2 in &self.radii[i + 1..] {
                if (r - r2).abs() < 1e-12 {
                    return Err(Error::InvalidContour("radii must be pairwise distinct"));
                }
            }
        }
        Ok(())
    }
}

/// Q_k as a coefficient vector of degree k(k+1)/2 (ascending), with the
/// evaluation metadata and the residual imaginary mass of the contour sweep.
#[derive(Debug, Clone)]
pub struct MomentPolynomial {
    pub k: usize,
    pub coeffs: Vec<f64>,
    pub cutoff: usize,
    pub nodes: usize,
    pub radii: Vec<f64>,
    pub max_imag_residual: f64,
}

impl MomentPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Q_0 = 1: the zeroth moment counts the ensemble itself.
    pub fn q0() -> Self {
        MomentPolynomial {
            k: 0,
            coeffs: vec![1.0],
            cutoff: 0,
            nodes: 0,
            radii: vec![],
            max_imag_residual: 0.0,
        }
    }
}

/// Q_1(x) = (1/2) P(1) (x + 1 + 4 S) in closed form.
pub fn q1_closed(table: &EulerProductTable) -> MomentPolynomial {
    let suite = table.p1_suite();
    MomentPolynomial {
        k: 1,
        coeffs: vec![
            0.5 * suite.p1 * (1.0 + 4.0 * suite.prime_sum),
            0.5 * suite.p1,
        ],
        cutoff: table.cutoff(),
        nodes: 0,
        radii: vec![],
        max_imag_residual: 0.0,
    }
}

/// Predicted leading coefficient of Q_k:
/// A(1/2; 0,...,0) * prod_{j=1}^k j!/(2j)!.
pub fn leading_coeff(k: usize, table: &EulerProductTable) -> Result<f64> {
    let mut factor = 1.0f64;
    for j in 1..=k {
        // j!/(2j)! = 1 / ((j+1)(j+2)...(2j))
        for m in j + 1..=2 * j {
            factor /= m as f64;
        }
    }
    Ok(table.moment_constant(k)? * factor)
}

/// Numerical contour evaluation of Q_k. One sweep over the M^k grid yields
/// every coefficient; the grid is data-parallel over the first index with a
/// deterministic ordered reduction.
pub fn qk_contour(
    k: usize,
    table: &EulerProductTable,
    spec: &ContourSpec,
) -> Result<MomentPolynomial> {
    assert!((1..=4).contains(&k), "contour moments implemented for k <= 4");
    spec.validate(k, table.ln_q())?;
    let m = spec.nodes;
    let deg = k * (k + 1) / 2;
    let ln_q = table.ln_q();

    let nodes: Vec<Vec<ContourNode>> = (0..k)
        .map(|j| {
            (0..m)
                .map(|i| {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    let z = Complex64::from_polar(spec.radii[j], theta);
                    let v = (-z * ln_q).exp();
                    let xh = (-z * ln_q / 2.0).exp();
                    let base = (-(z + 0.5) * ln_q).exp();
                    let mut w = Vec::with_capacity(table.cutoff());
                    let mut cur = Complex64::new(1.0, 0.0);
                    for _ in 0..table.cutoff() {
                        cur *= base;
                        w.push(cur);
                    }
                    ContourNode { z, v, xh, w }
                })
                .collect()
        })
        .collect();

    let sign = if (k * (k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut k_fact = 1.0f64;
    for j in 2..=k {
        k_fact *= j as f64;
    }
    let prefactor = sign * 2.0f64.powi(k as i32) / k_fact / (m as f64).powi(k as i32);

    let partials: Vec<Vec<KahanC>> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut acc = vec![KahanC::default(); deg + 1];
            let mut idx = vec![0usize; k];
            idx[0] = i0;
            let mut w_scratch = vec![Complex64::new(0.0, 0.0); k];
            loop {
                contour_term(
                    table,
                    &nodes,
                    &idx,
                    ln_q,
                    prefactor,
                    &mut w_scratch,
                    &mut acc,
                );
                // odometer over indices 1..k (index 0 is the parallel chunk)
                let mut pos = k - 1;
                loop {
                    if pos == 0 {
                        return acc;
                    }
                    idx[pos] += 1;
                    if idx[pos] < m {
                        break;
                    }
                    idx[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .collect();

    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut max_imag = 0.0f64;
    for mth in 0..=deg {
        let mut total = KahanC::default();
        for p in &partials {
            total.add(p[mth].value());
        }
        let v = total.value();
        let tol = 1e-8 * v.re.abs() + 1e-12;
        if v.im.abs() > tol {
            return Err(Error::ResidualImag(v.im.abs()));
        }
        max_imag = max_imag.max(v.im.abs());
        coeffs.push(v.re);
    }
    Ok(MomentPolynomial {
        k,
        coeffs,
        cutoff: table.cutoff(),
        nodes: m,
        radii: spec.radii.clone(),
        max_imag_residual: max_imag,
    })
}

/// Per-circle, per-node tables: z, q^{-z}, q^{-z/2}, and the powers
/// w_d = q^{-d(1/2+z)} for d = 1..N feeding the A-factor.
struct ContourNode {
    z: Complex64,
    v: Complex64,
    xh: Complex64,
    w: Vec<Complex64>,
}

#[allow(clippy::too_many_arguments)]
fn contour_term(
    table: &EulerProductTable,
    nodes: &[Vec<ContourNode>],
    idx: &[usize],
    ln_q: f64,
    prefactor: f64,
    w_scratch: &mut [Complex64],
    acc: &mut [KahanC],
) {
    let k = idx.len();
    let one = Complex64::new(1.0, 0.0);

    // A(1/2; z) truncated at the table cutoff
    let mut a_log = Complex64::new(0.0, 0.0);
    for d in 1..=table.cutoff() {
        let x = (table.q() as f64).powi(-(d as i32));
        for (j, &i) in idx.iter().enumerate() {
            w_scratch[j] = nodes[j][i].w[d - 1];
        }
        a_log += ln_1p(moment_delta_from_pows(x, w_scratch)) * table.pi(d);
    }
    let mut g = a_log.exp();

    // prod_j X(1/2+z_j)^{-1/2} = prod q^{-z_j/2}
    for (j, &i) in idx.iter().enumerate() {
        g *= nodes[j][i].xh;
    }
    // prod_{a<=b} zeta_A(1 + z_a + z_b) = prod 1/(1 - v_a v_b)
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate().skip(a) {
            g /= one - nodes[a][ia].v * nodes[b][ib].v;
        }
    }

    // Vandermonde in the squares, squared; trapezoid z_j folded against
    // the z^{2k-1} denominator leaves prod z_j^{2k-2}
    let mut weight = g * prefactor;
    for (a, &ia) in idx.iter().enumerate() {
        let za = nodes[a][ia].z;
        for (b, &ib) in idx.iter().enumerate().skip(a + 1) {
            let zb = nodes[b][ib].z;
            let diff = zb * zb - za * za;
            weight *= diff * diff;
        }
        weight /= za.powi(2 * k as i32 - 2);
    }

    // q^{(x/2) sum z_j} expanded: coefficient of x^m picks ((ln q / 2) S)^m / m!
    let mut powsum = Complex64::new(0.0, 0.0);
    for (j, &i) in idx.iter().enumerate() {
        powsum += nodes[j][i].z;
    }
    let y = powsum * (ln_q / 2.0);
    let mut term = weight;
    for (mth, slot) in acc.iter_mut().enumerate() {
        slot.add(term);
        term = term * y / (mth as f64 + 1.0);
    }
}

// ----------------------------------------------------------------------
// empirical moments
// ----------------------------------------------------------------------

/// Comparison of an ensemble moment sum against #H * Q_k(log_q |D|).
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub q: u32,
    pub g: usize,
    pub k: usize,
    pub count: usize,
    pub mode: SampleMode,
    pub empirical_sum: f64,
    pub empirical_mean: f64,
    /// Q_k(2g+1).
    pub predicted_mean: f64,
    /// #H * Q_k(2g+1).
    pub predicted_total: f64,
    /// empirical_mean / predicted_mean.
    pub ratio: f64,
}

/// Mean of L(1/2)^k over the cached records against the prediction.
pub fn empirical_moment(
    cache: &SweepCache,
    k: usize,
    qk: &MomentPolynomial,
) -> Result<MomentReport> {
    if cache.records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let g = cache.header.g;
    let x = (2 * g + 1) as f64;
    let mean = parallel_mean(&cache.records, |r| r.central.powi(k as i32));
    let size = cache.params()?.size() as f64;
    let predicted_mean = qk.eval(x);
    let ratio = mean / predicted_mean;
    Ok(MomentReport {
        q: cache.header.q,
        g,
        k,
        count: cache.records.len(),
        mode: cache.header.mode,
        empirical_sum: mean * cache.records.len() as f64,
        empirical_mean: mean,
        predicted_mean,
        predicted_total: size * predicted_mean,
        ratio,
    })
}

/// Element of Q(sqrt(q)): rational + surd * q^{-1/2}, for exactly
/// reproducible moment sums over full small ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadVal {
    pub rational: BigRational,
    pub surd: BigRational,
    pub q: u32,
}

impl QuadVal {
    pub fn one(q: u32) -> Self {
        QuadVal {
            rational: BigRational::one(),
            surd: BigRational::zero(),
            q,
        }
    }

    pub fn mul(&self, other: &QuadVal) -> QuadVal {
        debug_assert_eq!(self.q, other.q);
        // (a + b r)(c + d r) with r^2 = 1/q
        let qinv = BigRational::new(BigInt::one(), BigInt::from(self.q));
        QuadVal {
            rational: &self.rational * &other.rational + &self.surd * &other.surd * &qinv,
            surd: &self.rational * &other.surd + &self.surd * &other.rational,
            q: self.q,
        }
    }

    pub fn add_assign(&mut self, other: &QuadVal) {
        debug_assert_eq!(self.q, other.q);
        self.rational += &other.rational;
        self.surd += &other.surd;
    }

    pub fn pow(&self, k: usize) -> QuadVal {
        let mut acc = QuadVal::one(self.q);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().expect("finite")
            + self.surd.to_f64().expect("finite") / (self.q as f64).sqrt()
    }
}

/// Exact-rational moment sum sum_D L(1/2)^k over the cached records,
/// reconstructed from the integer coefficients.
pub fn empirical_moment_sum_exact(cache: &SweepCache, k: usize) -> Result<QuadVal> {
    let q = cache.header.q;
    let mut total = QuadVal {
        rational: BigRational::zero(),
        surd: BigRational::zero(),
        q,
    };
    for l in cache.lpolys()? {
        let cv = l.central_value_exact();
        let v = QuadVal {
            rational: cv.even,
            surd: cv.odd,
            q,
        };
        total.add_assign(&v.pow(k));
    }
    Ok(total)
}

// ----------------------------------------------------------------------
// shifted moments
// ----------------------------------------------------------------------

/// Conjecture side of the shifted first-through-k-th moment:
/// #H * sum_{eps} prod_j X(1/2+eps_j a_j)^{-1/2}
///   * prod_{i<=j} zeta_A(1+eps_i a_i+eps_j a_j)
///   * A(1/2; eps a) * |D|^{(1/2) sum eps_j a_j}.
/// Requires a_i != 0 and a_i +- a_j != 0 so every zeta argument misses the
/// pole and the raw eps-sum is directly evaluable.
pub fn shifted_conjecture(
    alpha: &[Complex64],
    q: u32,
    g: usize,
    table: &EulerProductTable,
) -> Result<Complex64> {
    let k = alpha.len();
    let ln_q = table.ln_q();
    let ln_norm = (2 * g + 1) as f64 * ln_q;
    // pole pre-check over every sign combination
    for eps in 0..(1u32 << k) {
        let signed: Vec<Complex64> = alpha
            .iter()
            .enumerate()
            .map(|(j, a)| if eps >> j & 1 == 1 { -a } else { *a })
            .collect();
        for (i, a) in signed.iter().enumerate() {
            for b in &signed[i..] {
                let inv = table.zeta_a_inv(Complex64::new(1.0, 0.0) + a + b);
                if inv.norm() < 1e-12 {
                    return Err(Error::PoleProximity(Complex64::new(1.0, 0.0) + a + b));
                }
            }
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for eps in 0..(1u32 << k) {
        let signed: Vec<Complex64> = alpha
            .iter()
            .enumerate()
            .map(|(j, a)| if eps >> j & 1 == 1 { -a } else { *a })
            .collect();
        let mut term = Complex64::new(1.0, 0.0);
        let mut shift_sum = Complex64::new(0.0, 0.0);
        for a in &signed {
            term *= (-a * ln_q / 2.0).exp(); // X(1/2 + a)^{-1/2}
            shift_sum += a;
        }
        for (i, a) in signed.iter().enumerate() {
            for b in &signed[i..] {
                term *= table.zeta_a(Complex64::new(1.0, 0.0) + a + b)?;
            }
        }
        term *= table.a_shift(&signed)?;
        term *= (shift_sum * 0.5 * ln_norm).exp();
        sum += term;
    }
    let size = (q as f64 - 1.0) * (q as f64).powi(2 * g as i32);
    Ok(sum * size)
}

/// Empirical side: sum_D prod_j Z_L(1/2 + a_j, chi_D) over the cache.
pub fn shifted_empirical(cache: &SweepCache, alpha: &[Complex64]) -> Result<Complex64> {
    if cache.records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let lpolys = cache.lpolys()?;
    let half = Complex64::new(0.5, 0.0);
    let terms: Vec<Complex64> = lpolys
        .par_iter()
        .map(|l| {
            let mut prod = Complex64::new(1.0, 0.0);
            for a in alpha {
                prod *= l.z_value(half + a);
            }
            prod
        })
        .collect();
    let mut acc = KahanC::default();
    for t in terms {
        acc.add(t);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::sweep::{run_sweep, SweepConfig};

    fn table(q: u32, n: usize) -> EulerProductTable {
        EulerProductTable::new(&FieldCtx::new(q).unwrap(), n)
    }

    #[test]
    fn q1_closed_form_shape() {
        let t = table(3, 30);
        let q1 = q1_closed(&t);
        let suite = t.p1_suite();
        assert_eq!(q1.degree(), 1);
        assert!((q1.coeffs[1] - suite.p1 / 2.0).abs() < 1e-15);
        assert!(q1.coeffs[0] > 0.0);
        // Theorem-5.4 consistency: leading coefficient = A * prod j!/(2j)!
        let lead = leading_coeff(1, &t).unwrap();
        assert!((q1.coeffs[1] - lead).abs() < 1e-13);
    }

    #[test]
    fn factorial_products_in_leading_coeff() {
        let t = table(3, 12);
        let a2 = t.moment_constant(2).unwrap();
        // prod_{j<=2} j!/(2j)! = (1/2)(2/24) = 1/24
        assert!((leading_coeff(2, &t).unwrap() - a2 / 24.0).abs() < 1e-15);
        let a3 = t.moment_constant(3).unwrap();
        assert!((leading_coeff(3, &t).unwrap() - a3 / 2880.0).abs() < 1e-15);
    }

    #[test]
    fn contour_q1_matches_closed_form() {
        let t = table(3, 30);
        let spec = ContourSpec::default_for(1, t.ln_q());
        let contour = qk_contour(1, &t, &spec).unwrap();
        let closed = q1_closed(&t);
        for (a, b) in contour.coeffs.iter().zip(&closed.coeffs) {
            assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn contour_q2_leading_and_invariants() {
        let t = table(3, 30);
        let spec = ContourSpec::default_for(2, t.ln_q()).with_nodes(32);
        let q2 = qk_contour(2, &t, &spec).unwrap();
        assert_eq!(q2.degree(), 3);
        assert!(q2.coeffs[3] > 0.0);
        let expected = t.moment_constant(2).unwrap() / 24.0;
        assert!(
            (q2.coeffs[3] - expected).abs() <= 1e-6,
            "{} vs {expected}",
            q2.coeffs[3]
        );
    }

    #[test]
    fn contour_node_doubling_is_stable() {
        let t = table(3, 30);
        for k in 1..=2usize {
            let a = qk_contour(k, &t, &ContourSpec::default_for(k, t.ln_q()).with_nodes(32))
                .unwrap();
            let b = qk_contour(k, &t, &ContourSpec::default_for(k, t.ln_q()).with_nodes(64))
                .unwrap();
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-6), "k={k}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn contour_radius_independence() {
        let t = table(3, 30);
        for k in 1..=2usize {
            let s1 = ContourSpec::default_for(k, t.ln_q());
            let radii2 = s1.radii.iter().map(|r| r * 1.7).collect();
            let s2 = ContourSpec {
                nodes: 64,
                radii: radii2,
            };
            let a = qk_contour(k, &t, &s1).unwrap();
            let b = qk_contour(k, &t, &s2).unwrap();
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).abs() <= 1e-8 * y.abs().max(1e-6), "k={k}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn contour_spec_validation() {
        let t = table(3, 10);
        let mut bad = ContourSpec::default_for(2, t.ln_q());
        bad.radii[1] = bad.radii[0];
        assert!(qk_contour(2, &t, &bad).is_err());
        let mut too_big = ContourSpec::default_for(1, t.ln_q());
        too_big.radii[0] = 0.3;
        assert!(too_big.validate(1, t.ln_q()).is_err());
    }

    #[test]
    fn zeroth_moment_ratio_is_exactly_one() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        let report = empirical_moment(&cache, 0, &MomentPolynomial::q0()).unwrap();
        assert_eq!(report.ratio, 1.0);
        assert!(report.ratio > 0.0);
    }

    #[test]
    fn exact_moment_sum_matches_float() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        for k in 1..=3usize {
            let exact = empirical_moment_sum_exact(&cache, k).unwrap().to_f64();
            let float: f64 = cache.records.iter().map(|r| r.central.powi(k as i32)).sum();
            assert!(
                (exact - float).abs() <= 1e-12 * exact.abs().max(1.0),
                "k={k}: {exact} vs {float}"
            );
        }
    }

    #[test]
    fn shifted_conjecture_symmetric_and_pole_guarded() {
        let t = table(3, 30);
        let a = [Complex64::new(0.11, 0.0), Complex64::new(0.05, 0.02)];
        let b = [a[1], a[0]];
        let va = shifted_conjecture(&a, 3, 3, &t).unwrap();
        let vb = shifted_conjecture(&b, 3, 3, &t).unwrap();
        assert!((va - vb).norm() <= 1e-10 * va.norm());
        // alpha_i = 0 hits the zeta pole
        assert!(shifted_conjecture(&[Complex64::new(0.0, 0.0)], 3, 3, &t).is_err());
        // alpha_1 = alpha_2 hits a pole in the mixed sign terms
        assert!(shifted_conjecture(&[a[0], a[0]], 3, 3, &t).is_err());
    }

    #[test]
    fn shifted_conjecture_limits_to_moment_polynomial() {
        // along alpha = (t, 2t, ..., kt), t -> 0+, the conjecture side
        // approaches #H Q_k(2g+1)
        let t = table(3, 30);
        let g = 3usize;
        let size = 2.0 * 3.0f64.powi(6);
        for k in 1..=2usize {
            let spec = ContourSpec::default_for(k, t.ln_q());
            let qk = qk_contour(k, &t, &spec).unwrap();
            let target = size * qk.eval((2 * g + 1) as f64);
            let mut prev_err = f64::INFINITY;
            for &step in &[4e-3, 2e-3, 1e-3] {
                let alpha: Vec<Complex64> = (1..=k)
                    .map(|j| Complex64::new(j as f64 * step, 0.0))
                    .collect();
                let v = shifted_conjecture(&alpha, 3, g, &t).unwrap();
                let err = (v.re - target).abs() / target.abs();
                assert!(err < prev_err * 1.2, "k={k} step={step}: {err} vs {prev_err}");
                prev_err = err;
            }
            assert!(prev_err < 0.01, "k={k}: final relative error {prev_err}");
        }
    }

    #[test]
    fn shifted_empirical_matches_direct_product() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        let alpha = [Complex64::new(0.1, 0.0)];
        let via_fn = shifted_empirical(&cache, &alpha).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        for l in cache.lpolys().unwrap() {
            direct += l.z_value(Complex64::new(0.6, 0.0));
        }
        assert!((via_fn - direct).norm() <= 1e-12 * direct.norm());
    }
}
