//! CSV emission. Files are written under a `.partial` name and renamed once
//! complete, so an interrupted run leaves its unfinished outputs flagged.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::dynamics::TrajectorySummary;
use crate::error::Result;
use crate::graph::Graph;
use crate::robustness::RobustnessCurve;
use crate::strategies::SelectionTrace;

pub const TIMEOUT: &str = "timeout";

pub struct CsvSink {
    path: PathBuf,
    partial: PathBuf,
    writer: csv::Writer<File>,
}

impl CsvSink {
    pub fn create(path: impl AsRef<Path>, header: &[&str]) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut partial = path.clone().into_os_string();
        partial.push(".partial");
        let partial = PathBuf::from(partial);
        let mut writer = csv::Writer::from_path(&partial)?;
        writer.write_record(header)?;
        Ok(CsvSink { path, partial, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        drop(self.writer);
        std::fs::rename(&self.partial, &self.path)?;
        Ok(self.path)
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn fmt_ms(d: Duration) -> String {
    fmt_f64(d.as_secs_f64() * 1e3)
}

pub fn fmt_sync_time(s: &TrajectorySummary) -> String {
    s.sync_time.map_or_else(|| TIMEOUT.to_owned(), fmt_f64)
}

/// File-name-safe version of a network name.
pub fn slug(name: &str) -> String {
    let mut out: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect();
    while out.contains("__") {
        out = out.replace("__", "_");
    }
    out.trim_matches('_').to_owned()
}

/// Deterministic per-step columns; wall times go to the timing files.
pub const TRACE_HEADER: [&str; 5] = ["strategy", "step", "node_label", "lambda1", "score"];

pub fn write_trace(path: impl AsRef<Path>, graph: &Graph, trace: &SelectionTrace) -> Result<PathBuf> {
    let mut sink = CsvSink::create(path, &TRACE_HEADER)?;
    for (j, step) in trace.steps.iter().enumerate() {
        sink.row([
            trace.strategy.name().to_owned(),
            (j + 1).to_string(),
            graph.label(step.node).to_owned(),
            fmt_f64(step.lambda1),
            fmt_f64(step.score),
        ])?;
    }
    sink.finish()
}

pub const ROBUSTNESS_HEADER: [&str; 6] = ["strategy", "k", "failure_ratio", "lambda1_mean", "lambda1_std", "trials"];

pub fn robustness_rows(curve: &RobustnessCurve) -> impl Iterator<Item = [String; 6]> + '_ {
    curve.rows.iter().map(move |r| {
        [
            curve.strategy.name().to_owned(),
            r.k.to_string(),
            fmt_f64(r.failure_ratio),
            fmt_f64(r.lambda1_mean),
            fmt_f64(r.lambda1_std),
            r.trials.to_string(),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 22.816, 1e-12, 12345678.9] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("ER(1000,p=0.1)"), "ER_1000_p_0.1");
        assert_eq!(slug("c-elegans"), "c-elegans");
    }

    #[test]
    fn partial_file_renamed_on_finish() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let mut sink = CsvSink::create(&path, &["a", "b"]).unwrap();
        sink.row(["1", "2"]).unwrap();
        assert!(dir.path().join("x.csv.partial").exists());
        sink.finish().unwrap();
        assert!(!dir.path().join("x.csv.partial").exists());
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n1,2\n");
    }
}
