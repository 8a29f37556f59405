//! Command implementations behind the `ffmoments` binary, exposed as a
//! library so integration tests can drive them directly.

pub mod report;
pub mod selftest;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;

use ffmoments::density::{density_empirical, density_theory, rmt_limit, TestFunction};
use ffmoments::ensemble::SampleMode;
use ffmoments::eulerfact::{EulerProductTable, FactorFamily};
use ffmoments::field::FieldCtx;
use ffmoments::moments::{
    empirical_moment, q1_closed, qk_contour, ContourSpec, MomentPolynomial,
};
use ffmoments::ratios::{logderiv_pair, ratios_empirical, ratios_rhs, RatiosSpec};
use ffmoments::sweep::{run_sweep, SweepCache, SweepConfig};

use report::{complex_json, Report};

/// Flags shared by every command; names are part of the CLI contract.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub q: u32,
    pub g: usize,
    pub k: usize,
    pub cutoff: usize,
    pub nodes: usize,
    pub sample: Option<u64>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub cross_check: bool,
    pub alpha: Vec<Complex64>,
    pub gamma: Vec<Complex64>,
    pub r: f64,
    pub test: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 3,
            g: 1,
            k: 1,
            cutoff: 30,
            nodes: 64,
            sample: None,
            seed: 0,
            threads: None,
            out: None,
            cache: None,
            cross_check: false,
            alpha: vec![],
            gamma: vec![],
            r: 0.1,
            test: "fejer:1.0".into(),
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    Complex64::from_str(s).map_err(|e| anyhow!("bad complex shift `{s}`: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Moments,
    Ratios,
    Density,
    Conjecture,
    Selftest,
}

impl ReportKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "moments" => Ok(ReportKind::Moments),
            "ratios" => Ok(ReportKind::Ratios),
            "density" => Ok(ReportKind::Density),
            "conjecture" => Ok(ReportKind::Conjecture),
            "selftest" => Ok(ReportKind::Selftest),
            _ => bail!("unknown report kind `{s}` (moments|ratios|density|conjecture|selftest)"),
        }
    }
}

/// Run a sweep per the config and return the cache (also written to --out
/// when given). Idempotent: identical configs give byte-identical CSV.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepCache> {
    let sweep_cfg = SweepConfig {
        q: cfg.q,
        g: cfg.g,
        mode: if cfg.sample.is_some() {
            SampleMode::WithReplacement
        } else {
            SampleMode::Exhaustive
        },
        count: cfg.sample.unwrap_or(0),
        seed: cfg.seed,
        cross_check: cfg.cross_check,
        budget: ffmoments::ensemble::DEFAULT_ENUM_BUDGET,
    };
    let cache = run_sweep(&sweep_cfg).context("sweep failed")?;
    if let Some(path) = &cfg.out {
        cache
            .save(path)
            .with_context(|| format!("writing cache to {}", path.display()))?;
    }
    Ok(cache)
}

fn load_cache(cfg: &RunConfig) -> Result<SweepCache> {
    let path = cfg
        .cache
        .as_ref()
        .ok_or_else(|| anyhow!("this report kind needs --cache <file>"))?;
    SweepCache::load(path).with_context(|| format!("reading cache {}", path.display()))
}

fn table_for(cfg: &RunConfig, q: u32) -> Result<EulerProductTable> {
    Ok(EulerProductTable::new(&FieldCtx::new(q)?, cfg.cutoff))
}

/// Q_k for predictions: the exact closed form for k = 1, the contour for
/// k >= 2, and the constant 1 for k = 0.
fn moment_polynomial(k: usize, cfg: &RunConfig, table: &EulerProductTable) -> Result<MomentPolynomial> {
    Ok(match k {
        0 => MomentPolynomial::q0(),
        1 => q1_closed(table),
        _ => qk_contour(
            k,
            table,
            &ContourSpec::default_for(k, table.ln_q()).with_nodes(cfg.nodes),
        )?,
    })
}

pub fn cmd_report(kind: ReportKind, cfg: &RunConfig) -> Result<Report> {
    match kind {
        ReportKind::Moments => report_moments(cfg),
        ReportKind::Ratios => report_ratios(cfg),
        ReportKind::Density => report_density(cfg),
        ReportKind::Conjecture => report_conjecture(cfg),
        ReportKind::Selftest => Ok(selftest::run(cfg)),
    }
}

fn report_moments(cfg: &RunConfig) -> Result<Report> {
    let cache = load_cache(cfg)?;
    let table = table_for(cfg, cache.header.q)?;
    let qk = moment_polynomial(cfg.k, cfg, &table)?;
    let rep = empirical_moment(&cache, cfg.k, &qk)?;
    let tail = if cfg.k >= 1 {
        json!({ "moment_factor_log": table.tail_bound(FactorFamily::Moment(cfg.k)) })
    } else {
        json!({})
    };
    Ok(Report {
        params: json!({
            "q": rep.q, "g": rep.g, "k": rep.k,
            "cutoff": table.cutoff(), "nodes": qk.nodes,
            "count": rep.count, "mode": mode_str(rep.mode),
        }),
        predicted: json!({
            "mean": rep.predicted_mean,
            "total": rep.predicted_total,
            "coefficients": qk.coeffs,
        }),
        empirical: json!({
            "mean": rep.empirical_mean,
            "sum": rep.empirical_sum,
        }),
        ratio: json!(rep.ratio),
        tolerances: json!({
            "ratio_within": moment_tolerance(cfg.k),
        }),
        tail_bounds: tail,
    })
}

fn mode_str(m: SampleMode) -> &'static str {
    m.as_str()
}

/// Engineering tolerances from the acceptance gates; the conjecture's o(1)
/// carries no rate, so these are stated choices, not derived bounds.
fn moment_tolerance(k: usize) -> Option<f64> {
    match k {
        0 => Some(0.0),
        1 => Some(0.10),
        2 => Some(0.25),
        _ => None,
    }
}

fn report_ratios(cfg: &RunConfig) -> Result<Report> {
    let cache = load_cache(cfg)?;
    let table = table_for(cfg, cache.header.q)?;
    let spec = RatiosSpec::new(cfg.alpha.clone(), cfg.gamma.clone())?;
    let rhs = ratios_rhs(&spec, cache.header.q, cache.header.g, &table)?;
    let emp = ratios_empirical(&cache, &spec)?;
    let logderiv = logderiv_pair(Complex64::new(cfg.r, 0.0), &cache, &table).ok();
    Ok(Report {
        params: json!({
            "q": cache.header.q, "g": cache.header.g,
            "alpha": cfg.alpha.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "gamma": cfg.gamma.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "r": cfg.r,
            "cutoff": table.cutoff(),
            "count": cache.records.len(),
        }),
        predicted: json!({
            "rhs": complex_json(rhs),
            "logderiv_theory": logderiv.as_ref().map(|p| complex_json(p.theory)),
        }),
        empirical: json!({
            "lhs": complex_json(emp),
            "logderiv": logderiv.as_ref().map(|p| complex_json(p.empirical)),
        }),
        ratio: complex_json(emp / rhs),
        tolerances: json!({ "ratio_within": 0.15 }),
        tail_bounds: json!({ "euler_product_cutoff": table.cutoff() }),
    })
}

fn report_density(cfg: &RunConfig) -> Result<Report> {
    let cache = load_cache(cfg)?;
    let table = table_for(cfg, cache.header.q)?;
    let h = TestFunction::parse(&cfg.test)?;
    let emp = density_empirical(&cache, &h, &table)?;
    let theory = density_theory(&h, cache.header.g, &table)?;
    let rmt = rmt_limit(&h).ok();
    Ok(Report {
        params: json!({
            "q": cache.header.q, "g": cache.header.g,
            "test": cfg.test,
            "cutoff": table.cutoff(),
            "count": cache.records.len(),
        }),
        predicted: json!({
            "theory": theory,
            "rmt_limit": rmt,
        }),
        empirical: json!(emp),
        ratio: json!(emp / theory),
        tolerances: json!({ "vs_theory": 0.05, "vs_rmt_limit": 0.10 }),
        tail_bounds: json!({ "euler_product_cutoff": table.cutoff() }),
    })
}

fn report_conjecture(cfg: &RunConfig) -> Result<Report> {
    let table = table_for(cfg, cfg.q)?;
    let qk = moment_polynomial(cfg.k, cfg, &table)?;
    let leading = if cfg.k >= 1 {
        Some(ffmoments::moments::leading_coeff(cfg.k, &table)?)
    } else {
        None
    };
    Ok(Report {
        params: json!({
            "q": cfg.q, "k": cfg.k,
            "cutoff": table.cutoff(), "nodes": qk.nodes, "radii": qk.radii,
        }),
        predicted: json!({
            "coefficients": qk.coeffs,
            "degree": qk.degree(),
            "leading_coeff_theorem": leading,
        }),
        empirical: json!(null),
        ratio: json!(null),
        tolerances: json!({ "imag_residual": qk.max_imag_residual }),
        tail_bounds: json!({
            "moment_factor_log": if cfg.k >= 1 {
                Some(table.tail_bound(FactorFamily::Moment(cfg.k)))
            } else {
                None
            },
        }),
    })
}
