//! The hyperelliptic ensemble: all monic square-free D of degree 2g + 1 over
//! F_q with uniform probability, plus reproducible sampling, expectations and
//! the character-orthogonality diagnostic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::collections::HashSet;

use crate::charsym::{chi, Discriminant};
use crate::enumeration::monic_enumerate;
use crate::error::{Error, Result};
use crate::eulerfact::a_constant;
use crate::factor::{factor, is_squarefree};
use crate::field::FieldCtx;
use crate::poly::PolyFq;

pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone)]
pub struct EnsembleParams {
    field: FieldCtx,
    genus: usize,
    budget: u64,
}

impl EnsembleParams {
    pub fn new(field: FieldCtx, genus: usize) -> Self {
        assert!(genus >= 1);
        EnsembleParams {
            field,
            genus,
            budget: DEFAULT_ENUM_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    #[inline]
    pub fn genus(&self) -> usize {
        self.genus
    }

    #[inline]
    pub fn degree(&self) -> usize {
        2 * self.genus + 1
    }

    /// #H_{2g+1,q} = (q - 1) q^{2g}.
    pub fn size(&self) -> u64 {
        (self.q() as u64 - 1) * (self.q() as u64).pow(2 * self.genus as u32)
    }

    /// |D| = q^{2g+1}.
    pub fn norm(&self) -> f64 {
        (self.q() as f64).powi(self.degree() as i32)
    }

    pub fn ln_norm(&self) -> f64 {
        self.degree() as f64 * self.field.ln_q()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Exhaustive,
    WithReplacement,
    WithoutReplacement,
}

impl SampleMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleMode::Exhaustive => "exhaustive",
            SampleMode::WithReplacement => "with-replacement",
            SampleMode::WithoutReplacement => "without-replacement",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exhaustive" => Some(SampleMode::Exhaustive),
            "with-replacement" => Some(SampleMode::WithReplacement),
            "without-replacement" => Some(SampleMode::WithoutReplacement),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SampleSpec {
    pub count: u64,
    pub seed: u64,
    pub mode: SampleMode,
}

/// Every monic square-free polynomial of degree 2g + 1, in canonical order.
pub fn enumerate(params: &EnsembleParams) -> Result<Vec<Discriminant>> {
    let mut out = Vec::new();
    for f in monic_enumerate(params.q(), params.degree(), params.budget)? {
        if is_squarefree(&f)? {
            out.push(Discriminant::new(f)?);
        }
    }
    debug_assert_eq!(out.len() as u64, params.size());
    Ok(out)
}

/// Rejection sampling: draw uniform monic polynomials of degree 2g + 1 and
/// retry on square divisors; acceptance rate is 1 - 1/q. The entire stream is
/// a pure function of the seed.
pub fn sample(params: &EnsembleParams, spec: &SampleSpec) -> Result<Vec<Discriminant>> {
    Ok(sample_with_stats(params, spec)?.0)
}

/// Like [`sample`] but also reports the number of rejection-sampling
/// attempts, for acceptance-rate diagnostics.
pub fn sample_with_stats(
    params: &EnsembleParams,
    spec: &SampleSpec,
) -> Result<(Vec<Discriminant>, u64)> {
    if spec.mode == SampleMode::Exhaustive {
        let all = enumerate(params)?;
        let n = all.len() as u64;
        return Ok((all, n));
    }
    if spec.mode == SampleMode::WithoutReplacement && spec.count > params.size() {
        return Err(Error::SampleOverflow {
            count: spec.count,
            size: params.size(),
        });
    }
    let q = params.q();
    let deg = params.degree();
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count as usize);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut attempts = 0u64;
    while (out.len() as u64) < spec.count {
        attempts += 1;
        let mut coeffs: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
        coeffs.push(1);
        let f = PolyFq::from_coeffs(q, coeffs);
        if !is_squarefree(&f)? {
            continue;
        }
        if spec.mode == SampleMode::WithoutReplacement && !seen.insert(f.coeffs().to_vec()) {
            continue;
        }
        out.push(Discriminant::new(f)?);
    }
    Ok((out, attempts))
}

/// Compensated (Neumaier) summation with a fixed left-to-right order.
pub fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Shard size for deterministic parallel reductions: per-shard partial sums
/// are computed in parallel but combined in shard-index order, so results do
/// not depend on the thread count.
pub const REDUCTION_SHARD: usize = 4096;

/// Deterministic parallel map-reduce: mean of f over the items, computed with
/// compensated summation in fixed shard order.
pub fn parallel_mean<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    assert!(!items.is_empty());
    let partials: Vec<f64> = items
        .par_chunks(REDUCTION_SHARD)
        .map(|chunk| {
            let vals: Vec<f64> = chunk.iter().map(&f).collect();
            kahan_sum(&vals)
        })
        .collect();
    kahan_sum(&partials) / items.len() as f64
}

/// Arithmetic mean; the standard error is reported for sampled data
/// (`None` when the values cover the full ensemble).
pub fn expectation(values: &[f64], sampled: bool) -> Result<(f64, Option<f64>)> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let mean = kahan_sum(values) / n;
    let se = if sampled && values.len() > 1 {
        let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        Some((kahan_sum(&sq) / (n - 1.0)).sqrt() / n.sqrt())
    } else {
        None
    };
    Ok((mean, se))
}

/// Full-ensemble average of chi_D(m) next to its predicted large-g limit:
/// a_m when m is a perfect square, 0 otherwise (character orthogonality).
pub struct CharAverage {
    pub empirical: f64,
    pub predicted: f64,
    pub ensemble_size: u64,
}

pub fn char_average(m: &PolyFq, params: &EnsembleParams) -> Result<CharAverage> {
    if m.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !m.is_monic() {
        return Err(Error::NonMonic);
    }
    let ds = enumerate(params)?;
    let sum: i64 = ds
        .par_iter()
        .map(|d| chi(d, m).expect("m is monic nonzero") as i64)
        .sum();
    let fac = factor(m)?;
    let is_square = fac.factors.iter().all(|(_, e)| e % 2 == 0);
    let predicted = if is_square { a_constant(m)? } else { 0.0 };
    Ok(CharAverage {
        empirical: sum as f64 / params.size() as f64,
        predicted,
        ensemble_size: params.size(),
    })
}
