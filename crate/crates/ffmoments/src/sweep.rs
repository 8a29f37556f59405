//! Persisted per-D sweep records: the versioned CSV cache written by the CLI
//! and consumed by the empirical sides of the moment, ratio and density
//! comparisons.
//!
//! Format (diffable, append-friendly, language-neutral):
//!
//! ```text
//! # ffmoments-cache v1; q=3; g=1; mode=exhaustive; seed=0; count=18
//! D,A,central,zeros
//! 0;1;0;1,1;-3;3,0.2679491924311227,-3.0531...;3.0531...
//! ```
//!
//! Fields are comma-separated; list items inside a field are
//! semicolon-separated. Integers are decimal (exact), floats use Rust's
//! shortest round-trip formatting, so a write/read cycle reproduces every
//! record bit-for-bit.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::charsym::Discriminant;
use crate::ensemble::{sample_with_stats, EnsembleParams, SampleMode, SampleSpec};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::lfun::{lpoly_charsum, LPolynomial, PointCountCtx};
use crate::poly::PolyFq;

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepHeader {
    pub q: u32,
    pub g: usize,
    pub mode: SampleMode,
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// Coefficients of D, ascending, including the leading 1.
    pub d_coeffs: Vec<u32>,
    /// A_D(0..2g), exact.
    pub a_coeffs: Vec<BigInt>,
    /// L(1/2, chi_D).
    pub central: f64,
    /// Zero angles theta_j, sorted.
    pub zero_angles: Vec<f64>,
}

impl SweepRecord {
    pub fn lpoly(&self, q: u32) -> Result<LPolynomial> {
        let d = Discriminant::new(PolyFq::from_coeffs(q, self.d_coeffs.clone()))?;
        Ok(LPolynomial::from_coeffs(d, self.a_coeffs.clone()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCache {
    pub header: SweepHeader,
    pub records: Vec<SweepRecord>,
}

impl SweepCache {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let h = &self.header;
        writeln!(
            out,
            "# ffmoments-cache v{CACHE_VERSION}; q={}; g={}; mode={}; seed={}; count={}",
            h.q,
            h.g,
            h.mode.as_str(),
            h.seed,
            h.count
        )
        .expect("string write");
        out.push_str("D,A,central,zeros\n");
        for r in &self.records {
            let d: Vec<String> = r.d_coeffs.iter().map(|c| c.to_string()).collect();
            let a: Vec<String> = r.a_coeffs.iter().map(|c| c.to_string()).collect();
            let z: Vec<String> = r.zero_angles.iter().map(|c| c.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{}",
                d.join(";"),
                a.join(";"),
                r.central,
                z.join(";")
            )
            .expect("string write");
        }
        out
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("empty file".into()))??;
        let header = parse_header(&header_line)?;
        match lines.next() {
            Some(Ok(l)) if l == "D,A,central,zeros" => {}
            _ => return Err(Error::CacheFormat("missing column header".into())),
        }
        let mut records = Vec::with_capacity(header.count);
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            records.push(parse_record(&line, &header, i)?);
        }
        if records.len() != header.count {
            return Err(Error::CacheFormat(format!(
                "header claims {} records, found {}",
                header.count,
                records.len()
            )));
        }
        Ok(SweepCache { header, records })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }

    /// Reconstruct the L-polynomials of every record.
    pub fn lpolys(&self) -> Result<Vec<LPolynomial>> {
        self.records
            .iter()
            .map(|r| r.lpoly(self.header.q))
            .collect()
    }

    pub fn is_exhaustive(&self) -> bool {
        self.header.mode == SampleMode::Exhaustive
    }

    pub fn params(&self) -> Result<EnsembleParams> {
        Ok(EnsembleParams::new(
            FieldCtx::new(self.header.q)?,
            self.header.g,
        ))
    }
}

fn parse_header(line: &str) -> Result<SweepHeader> {
    let bad = |msg: &str| Error::CacheFormat(format!("bad header: {msg}"));
    let rest = line
        .strip_prefix("# ffmoments-cache v")
        .ok_or_else(|| bad("missing magic"))?;
    let mut parts = rest.split("; ");
    let version: u32 = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing version"))?;
    if version != CACHE_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let mut q = None;
    let mut g = None;
    let mut mode = None;
    let mut seed = None;
    let mut count = None;
    for kv in parts {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| bad("malformed key=value"))?;
        match key {
            "q" => q = value.parse().ok(),
            "g" => g = value.parse().ok(),
            "mode" => mode = SampleMode::parse(value),
            "seed" => seed = value.parse().ok(),
            "count" => count = value.parse().ok(),
            _ => return Err(bad(&format!("unknown key {key}"))),
        }
    }
    Ok(SweepHeader {
        q: q.ok_or_else(|| bad("missing q"))?,
        g: g.ok_or_else(|| bad("missing g"))?,
        mode: mode.ok_or_else(|| bad("missing mode"))?,
        seed: seed.ok_or_else(|| bad("missing seed"))?,
        count: count.ok_or_else(|| bad("missing count"))?,
    })
}

fn parse_list<T: FromStr>(s: &str, what: &str, row: usize) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(';')
        .map(|item| {
            item.parse::<T>()
                .map_err(|_| Error::CacheFormat(format!("row {row}: bad {what} item `{item}`")))
        })
        .collect()
}

fn parse_record(line: &str, header: &SweepHeader, row: usize) -> Result<SweepRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(Error::CacheFormat(format!(
            "row {row}: expected 4 fields, got {}",
            fields.len()
        )));
    }
    let d_coeffs: Vec<u32> = parse_list(fields[0], "D coefficient", row)?;
    let a_coeffs: Vec<BigInt> = parse_list(fields[1], "A coefficient", row)?;
    let central: f64 = fields[2]
        .parse()
        .map_err(|_| Error::CacheFormat(format!("row {row}: bad central value")))?;
    let zero_angles: Vec<f64> = parse_list(fields[3], "zero angle", row)?;
    if d_coeffs.len() != 2 * header.g + 2 {
        return Err(Error::CacheFormat(format!(
            "row {row}: D must have degree 2g+1 = {}",
            2 * header.g + 1
        )));
    }
    if a_coeffs.len() != 2 * header.g + 1 || zero_angles.len() != 2 * header.g {
        return Err(Error::CacheFormat(format!("row {row}: wrong list lengths")));
    }
    Ok(SweepRecord {
        d_coeffs,
        a_coeffs,
        central,
        zero_angles,
    })
}

// ----------------------------------------------------------------------
// sweep runner
// ----------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub q: u32,
    pub g: usize,
    pub mode: SampleMode,
    /// Sample count; ignored for exhaustive sweeps.
    pub count: u64,
    pub seed: u64,
    /// Also build every L-polynomial by character sums and demand exact
    /// integer equality with the point-count construction.
    pub cross_check: bool,
    pub budget: u64,
}

impl SweepConfig {
    pub fn exhaustive(q: u32, g: usize) -> Self {
        SweepConfig {
            q,
            g,
            mode: SampleMode::Exhaustive,
            count: 0,
            seed: 0,
            cross_check: false,
            budget: crate::ensemble::DEFAULT_ENUM_BUDGET,
        }
    }

    pub fn sampled(q: u32, g: usize, count: u64, seed: u64) -> Self {
        SweepConfig {
            q,
            g,
            mode: SampleMode::WithReplacement,
            count,
            seed,
            cross_check: false,
            budget: crate::ensemble::DEFAULT_ENUM_BUDGET,
        }
    }
}

/// Compute L-polynomials (point counts by default), central values and zero
/// angles for every D of the configured ensemble slice. Output order is the
/// enumeration/sample order, independent of thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepCache> {
    let field = FieldCtx::new(cfg.q)?;
    let params = EnsembleParams::new(field.clone(), cfg.g).with_budget(cfg.budget);
    let spec = SampleSpec {
        count: cfg.count,
        seed: cfg.seed,
        mode: cfg.mode,
    };
    let (ds, _) = sample_with_stats(&params, &spec)?;
    let ctx = PointCountCtx::new(&field, cfg.g)?;
    let records: Vec<Result<SweepRecord>> = ds
        .par_iter()
        .map(|d| {
            let l = ctx.lpoly(d)?;
            if cfg.cross_check {
                let by_charsum = lpoly_charsum(d, cfg.budget)?;
                if by_charsum != l {
                    return Err(Error::CrossCheckFailed(d.poly().to_string()));
                }
            }
            let zeros = l.zeros()?;
            Ok(SweepRecord {
                d_coeffs: d.poly().coeffs().to_vec(),
                a_coeffs: l.coeffs().to_vec(),
                central: l.central_value(),
                zero_angles: zeros.angles,
            })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepCache {
        header: SweepHeader {
            q: cfg.q,
            g: cfg.g,
            mode: cfg.mode,
            seed: cfg.seed,
            count: records.len(),
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_sweep_q3_g1_has_18_rows() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        assert_eq!(cache.records.len(), 18);
        assert_eq!(cache.header.count, 18);
        // canonical order: ascending-coefficient lex on D, constant term first
        for w in cache.records.windows(2) {
            assert!(w[0].d_coeffs < w[1].d_coeffs);
        }
    }

    #[test]
    fn cache_round_trip_is_exact() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        let csv = cache.to_csv();
        let back = SweepCache::read_from(csv.as_bytes()).unwrap();
        assert_eq!(cache, back);
        // and a second serialization is byte-identical
        assert_eq!(csv, back.to_csv());
    }

    #[test]
    fn sweep_is_idempotent() {
        let cfg = SweepConfig::sampled(3, 2, 25, 42);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn cross_check_mode_passes_q3_g2() {
        let mut cfg = SweepConfig::exhaustive(3, 2);
        cfg.cross_check = true;
        let cache = run_sweep(&cfg).unwrap();
        assert_eq!(cache.records.len(), 162);
    }

    #[test]
    fn rejects_malformed_caches() {
        assert!(SweepCache::read_from("".as_bytes()).is_err());
        assert!(SweepCache::read_from("# wrong magic\n".as_bytes()).is_err());
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        let mut csv = cache.to_csv();
        // drop the last record: count mismatch
        csv.truncate(csv.trim_end().rfind('\n').unwrap() + 1);
        assert!(SweepCache::read_from(csv.as_bytes()).is_err());
    }

    #[test]
    fn records_reconstruct_lpolys() {
        let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).unwrap();
        for l in cache.lpolys().unwrap() {
            assert!(l.fe_check());
        }
    }
}
