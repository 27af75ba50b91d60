//! Parameter-grid scans over the theorem families, with deterministic
//! ordering and append-only JSON-lines persistence.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::primes_between;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::rset::{mt1_certificate, mt31_certificate, mt3_certificate, Overall, RSetCertificate, SCHEMA};

/// Largest number of parameter points a single scan accepts.
pub const MAX_GRID: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Mt1,
    Mt3,
    Mt31,
}

impl ScanKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mt1" => Ok(ScanKind::Mt1),
            "mt3" => Ok(ScanKind::Mt3),
            "mt31" => Ok(ScanKind::Mt31),
            _ => Err(Error::Parse(format!("unknown scan kind {s:?}"))),
        }
    }
}

/// Inclusive ranges; `m` is ignored for `mt1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanJob {
    pub kind: ScanKind,
    pub m: (u64, u64),
    pub q: (u64, u64),
}

/// Parses `lo..hi` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad range {s:?}")));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub valid: usize,
    pub conditional: usize,
    pub invalid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema: &'static str,
    pub job: ScanJob,
    pub certificates: Vec<RSetCertificate>,
    pub summary: ScanSummary,
}

impl ScanReport {
    /// Certificates that are not `Invalid`.
    pub fn hits(&self) -> impl Iterator<Item = &RSetCertificate> {
        self.certificates.iter().filter(|c| c.overall != Overall::Invalid)
    }
}

/// Parameter points in sorted `(m, q)` order; `q` runs over odd primes.
fn grid(job: &ScanJob) -> Result<Vec<(u64, u64)>> {
    let qs: Vec<u64> = primes_between(job.q.0.max(3), job.q.1);
    let ms: Vec<u64> = match job.kind {
        ScanKind::Mt1 => vec![0],
        _ => (job.m.0..=job.m.1).collect(),
    };
    if ms.len().saturating_mul(qs.len()) > MAX_GRID {
        return Err(Error::OutOfRange(format!("scan grid exceeds {MAX_GRID} points")));
    }
    Ok(ms.iter().flat_map(|&m| qs.iter().map(move |&q| (m, q))).collect())
}

/// Runs every parameter point in parallel; output order is the grid order.
pub fn run_scan(cat: &Catalog, job: &ScanJob) -> Result<ScanReport> {
    let points = grid(job)?;
    let certificates: Vec<RSetCertificate> = points
        .par_iter()
        .map(|&(m, q)| match job.kind {
            ScanKind::Mt1 => mt1_certificate(cat, q),
            ScanKind::Mt3 => mt3_certificate(cat, m, q),
            ScanKind::Mt31 => mt31_certificate(cat, m, q),
        })
        .collect();
    let mut summary = ScanSummary { total: certificates.len(), ..Default::default() };
    for c in &certificates {
        match c.overall {
            Overall::Valid => summary.valid += 1,
            Overall::Conditional => summary.conditional += 1,
            Overall::Invalid => summary.invalid += 1,
        }
    }
    Ok(ScanReport { schema: SCHEMA, job: job.clone(), certificates, summary })
}

/// Same as [`run_scan`] on a pool of `workers` threads.
pub fn run_scan_with_workers(cat: &Catalog, job: &ScanJob, workers: usize) -> Result<ScanReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| run_scan(cat, job))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AppendOutcome {
    pub written: usize,
    pub skipped: usize,
}

fn line_key(line: &str) -> Result<String> {
    let v: Value = serde_json::from_str(line).map_err(|e| Error::Parse(format!("bad JSON line: {e}")))?;
    let theorem = v["theorem"].as_str().ok_or_else(|| Error::Parse("line without theorem".into()))?;
    let params = v["parameters"].as_object().ok_or_else(|| Error::Parse("line without parameters".into()))?;
    let parts: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!("{theorem}:{}", parts.join(",")))
}

/// Appends one certificate per line, skipping keys already present, so
/// repeating a scan leaves the file unchanged.
pub fn append_jsonl(path: &Path, certificates: &[RSetCertificate]) -> Result<AppendOutcome> {
    let mut seen = BTreeSet::new();
    if path.exists() {
        for line in BufReader::new(std::fs::File::open(path)?).lines() {
            let line = line?;
            if !line.trim().is_empty() {
                seen.insert(line_key(&line)?);
            }
        }
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut outcome = AppendOutcome { written: 0, skipped: 0 };
    for c in certificates {
        if !seen.insert(c.key()) {
            outcome.skipped += 1;
            continue;
        }
        let line = serde_json::to_string(c).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(file, "{line}")?;
        outcome.written += 1;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::embedded;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), (1, 3));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert_eq!(parse_range("1..=4").unwrap(), (1, 4));
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn mt31_grid_finds_known_fields() {
        let job = ScanJob { kind: ScanKind::Mt31, m: (1, 2), q: (3, 19) };
        let report = run_scan(embedded(), &job).unwrap();
        let hits: Vec<String> = report.hits().map(|c| c.key()).collect();
        assert_eq!(hits, ["mt31:m=1,q=11", "mt31:m=1,q=19", "mt31:m=2,q=7", "mt31:m=2,q=17", "mt31:m=2,q=19"]);
        assert!(report.hits().all(|c| c.overall == Overall::Conditional));
    }

    #[test]
    fn jsonl_is_idempotent() {
        let dir = std::env::temp_dir().join(format!("annihil-scan-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.jsonl");
        let _ = std::fs::remove_file(&path);
        let job = ScanJob { kind: ScanKind::Mt1, m: (0, 0), q: (3, 31) };
        let report = run_scan(embedded(), &job).unwrap();
        let first = append_jsonl(&path, &report.certificates).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let second = append_jsonl(&path, &report.certificates).unwrap();
        assert_eq!(first.written, report.certificates.len());
        assert_eq!((second.written, second.skipped), (0, report.certificates.len()));
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
