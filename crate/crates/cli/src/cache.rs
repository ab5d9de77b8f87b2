//! Append-only JSON-lines cache of degree reports, keyed by canonical spec
//! and version tag.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use latcom_core::degrees::DegreeReport;
use serde::{Deserialize, Serialize};

pub const VERSION_TAG: &str = concat!("latcom-", env!("CARGO_PKG_VERSION"), "+schema1");

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    version: String,
    report: DegreeReport,
}

#[derive(Default)]
pub struct Cache {
    path: Option<PathBuf>,
    entries: HashMap<String, DegreeReport>,
    pending: Vec<String>,
}

impl Cache {
    /// Loads every record carrying the current version tag. Lines that do
    /// not parse are skipped with a warning.
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let mut cache = Cache {
            path: path.map(Path::to_path_buf),
            ..Cache::default()
        };
        let Some(path) = path else { return Ok(cache) };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e),
        };
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Record>(&line) {
                Ok(r) if r.version == VERSION_TAG => {
                    cache.entries.insert(r.key, r.report);
                }
                Ok(_) => {}
                Err(e) => eprintln!("latcom: skipping cache line {}: {e}", n + 1),
            }
        }
        Ok(cache)
    }

    pub fn get(&self, key: &str) -> Option<&DegreeReport> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: String, report: DegreeReport) {
        if self.path.is_some() && !self.entries.contains_key(&key) {
            self.pending.push(key.clone());
        }
        self.entries.insert(key, report);
    }

    /// Appends the records inserted since the last flush, in insertion order.
    pub fn flush(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if self.pending.is_empty() {
            return Ok(());
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut buf = Vec::new();
        for key in self.pending.drain(..) {
            let record = Record {
                version: VERSION_TAG.to_string(),
                report: self.entries[&key].clone(),
                key,
            };
            serde_json::to_writer(&mut buf, &record)?;
            buf.push(b'\n');
        }
        file.write_all(&buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use latcom_core::degrees::report;
    use latcom_core::FamilySpec;

    #[test]
    fn roundtrip_and_version_filter() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let g = "D(6)".parse::<FamilySpec>().unwrap().build().unwrap();
        let r = report(&g, false).unwrap();
        let mut c = Cache::open(Some(&path)).unwrap();
        assert!(c.get("D(6)").is_none());
        c.insert("D(6)".into(), r.clone());
        c.flush().unwrap();
        c.insert("D(6)".into(), r.clone());
        c.flush().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);

        let stale = text.replace(VERSION_TAG, "latcom-0.0.0+schema0");
        std::fs::write(&path, format!("{text}{stale}not json\n")).unwrap();
        let c = Cache::open(Some(&path)).unwrap();
        assert_eq!(c.get("D(6)"), Some(&r));
        assert_eq!(c.entries.len(), 1);
    }
}
