//! Result directories: one JSON file per stage plus a manifest.
//!
//! Layout of `<out>/<run>/`:
//! - `*.json` stage and report files (rationals as "p/q" strings)
//! - `zeta.tex` the final formula
//! - `zeros.csv` columns t, absf, multiplicity
//! - `line.csv` columns t, re_f (Re f(1/2+it) on the scan grid)
//! - `manifest.json` command, settings, file list, and a timestamp (the
//!   only field that varies between runs with the same seed)
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use parazeta_core::zerofind::ZeroList;
use parazeta_core::{Error, Result};
use serde::{Deserialize, Serialize};

fn io(e: impl std::fmt::Display) -> Error {
    Error::Internal(format!("i/o: {e}"))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    pub digits: u32,
    pub seed: u64,
    pub files: Vec<String>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub struct Artifacts {
    pub dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    /// Creates (or reuses) `root/name`.
    pub fn create(root: &Path, name: &str) -> Result<Artifacts> {
        let dir = root.join(name);
        fs::create_dir_all(&dir).map_err(io)?;
        Ok(Artifacts { dir, files: Vec::new() })
    }

    fn note(&mut self, name: &str) -> PathBuf {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.into());
        }
        self.dir.join(name)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, v: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v).map_err(io)?;
        s.push('\n');
        fs::write(self.note(name), s).map_err(io)
    }

    pub fn text(&mut self, name: &str, s: &str) -> Result<()> {
        fs::write(self.note(name), s).map_err(io)
    }

    pub fn zeros_csv(&mut self, z: &ZeroList) -> Result<()> {
        let mut w = csv::Writer::from_path(self.note("zeros.csv")).map_err(io)?;
        w.write_record(["t", "absf", "multiplicity"]).map_err(io)?;
        for x in &z.zeros {
            w.write_record([x.t.to_string(), x.absf.to_string(), x.multiplicity.to_string()]).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn line_csv(&mut self, z: &ZeroList) -> Result<()> {
        let mut w = csv::Writer::from_path(self.note("line.csv")).map_err(io)?;
        w.write_record(["t", "re_f"]).map_err(io)?;
        for (t, v) in &z.grid {
            w.write_record([t.to_string(), v.to_string()]).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// Writes `manifest.json` listing everything written so far.
    pub fn finish(mut self, command: &str, args: &[String], digits: u32, seed: u64) -> Result<PathBuf> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let m = Manifest {
            command: command.into(),
            args: args.to_vec(),
            digits,
            seed,
            files: self.files.clone(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
        };
        self.json("manifest.json", &m)?;
        Ok(self.dir)
    }
}

/// Reads back a zeros.csv as (t, multiplicity).
pub fn read_zeros_csv(path: &Path) -> Result<Vec<(f64, u32)>> {
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(io)?;
        let t = rec.get(0).and_then(|x| x.parse().ok()).ok_or_else(|| Error::Parse("bad t".into()))?;
        let m = rec.get(2).and_then(|x| x.parse().ok()).ok_or_else(|| Error::Parse("bad multiplicity".into()))?;
        out.push((t, m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use parazeta_core::zerofind::Zero;

    #[test]
    fn csv_round_trip_and_manifest() {
        let tmp = tempfile::tempdir().unwrap();
        let mut a = Artifacts::create(tmp.path(), "run").unwrap();
        let z = ZeroList {
            zeros: vec![Zero { t: 14.25, absf: 1e-20, multiplicity: 1, multiple: false }],
            t_min: 0.0,
            t_max: 20.0,
            step: 0.05,
            tol: 1e-10,
            excluded: vec![],
            grid: vec![(0.0, 1.0), (0.05, 0.9)],
        };
        a.zeros_csv(&z).unwrap();
        a.line_csv(&z).unwrap();
        let dir = a.finish("verify", &["SL2".into()], 30, 1).unwrap();
        assert_eq!(read_zeros_csv(&dir.join("zeros.csv")).unwrap(), vec![(14.25, 1)]);
        let m: Manifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m.files, ["zeros.csv", "line.csv"]);
    }
}
