use anyhow::{Context, Result};
use posetkit::bounds::QueryBound;
use serde::Serialize;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

/// One row of a query-count report.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub n: usize,
    pub w: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub queries: u64,
    pub bound: String,
    pub within_bound: bool,
    pub wall_time_ms: String,
}

impl BenchRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        algorithm: &str,
        n: usize,
        w: usize,
        k: Option<usize>,
        seed: Option<u64>,
        queries: u64,
        bound: &QueryBound,
        elapsed: Duration,
    ) -> Self {
        BenchRecord {
            algorithm: algorithm.to_string(),
            n,
            w,
            k,
            seed,
            queries,
            bound: bound.to_string(),
            within_bound: bound.admits(queries),
            wall_time_ms: format!("{:.3}", elapsed.as_secs_f64() * 1000.0),
        }
    }
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes to `path`, or to standard output when `path` is `-`.
pub fn write_report(path: &Path, records: &[BenchRecord]) -> Result<()> {
    if path.as_os_str() == "-" {
        return write_csv(std::io::stdout().lock(), records);
    }
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(file, records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use posetkit::bounds::{mergesort_bound, minimals_det_bound};

    #[test]
    fn header_and_row() {
        let rec = BenchRecord::new("mergesort", 8, 2, None, Some(3), 40, &mergesort_bound(8, 2), Duration::ZERO);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("algorithm,n,w,k,seed,queries,bound,within_bound,wall_time_ms"));
        assert_eq!(lines.next(), Some("mergesort,8,2,,3,40,96,true,0.000"));
    }

    #[test]
    fn over_bound_is_flagged() {
        let rec = BenchRecord::new("minimals-det", 5, 1, Some(1), None, 6, &minimals_det_bound(5, 1), Duration::ZERO);
        assert!(!rec.within_bound);
    }
}
