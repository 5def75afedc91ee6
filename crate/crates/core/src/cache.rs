//! Append-only store of completed point counts.
//!
//! One record per line: `hash p k n_points [n_lines] engine_version wall_time`.
//! Lines that do not parse are skipped with a warning. Later records win.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::counting::CountRecord;

pub struct CountCache {
    path: PathBuf,
    records: Mutex<Vec<CountRecord>>,
}

pub fn format_record(r: &CountRecord) -> String {
    let lines = r.n_lines.map(|n| format!(" {n}")).unwrap_or_default();
    format!(
        "{} {} {} {}{} {} {:.3}",
        r.cubic_hash, r.p, r.k, r.n_points, lines, r.engine_version, r.wall_time
    )
}

pub fn parse_record(line: &str) -> Option<CountRecord> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let (n_lines, rest) = match toks.len() {
        6 => (None, &toks[4..]),
        7 => (Some(toks[4].parse().ok()?), &toks[5..]),
        _ => return None,
    };
    let hash = toks[0];
    if hash.is_empty() || !hash.chars().all(|c| c.is_ascii_hexdigit()) {
        return None;
    }
    Some(CountRecord {
        cubic_hash: hash.to_string(),
        p: toks[1].parse().ok()?,
        k: toks[2].parse().ok()?,
        n_points: toks[3].parse().ok()?,
        n_lines,
        engine_version: rest[0].to_string(),
        wall_time: rest[1].parse().ok()?,
    })
}

impl CountCache {
    /// Opens the store at `path`; a missing file is an empty store.
    pub fn open(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = Vec::new();
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    match parse_record(line) {
                        Some(r) => records.push(r),
                        None => log::warn!("{}:{}: skipping corrupt cache line", path.display(), i + 1),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(CountCache {
            path,
            records: Mutex::new(records),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, hash: &str, p: u32, k: u32, version: &str) -> Option<CountRecord> {
        let records = self.records.lock().unwrap();
        records
            .iter()
            .rev()
            .find(|r| r.cubic_hash == hash && r.p == p && r.k == k && r.engine_version == version)
            .cloned()
    }

    /// Latest record for the key that also carries a line count.
    pub fn lookup_lines(&self, hash: &str, p: u32, k: u32, version: &str) -> Option<CountRecord> {
        let records = self.records.lock().unwrap();
        records
            .iter()
            .rev()
            .find(|r| {
                r.cubic_hash == hash && r.p == p && r.k == k && r.engine_version == version && r.n_lines.is_some()
            })
            .cloned()
    }

    /// Appends a record. Write failures are logged; the in-memory copy is kept either way.
    pub fn append(&self, record: &CountRecord) {
        let mut records = self.records.lock().unwrap();
        let res = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .and_then(|mut f| writeln!(f, "{}", format_record(record)));
        if let Err(e) = res {
            log::warn!("could not write cache {}: {e}", self.path.display());
        }
        records.push(record.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(k: u32, n: u64, lines: Option<u64>) -> CountRecord {
        CountRecord {
            cubic_hash: "ab12".into(),
            p: 3,
            k,
            n_points: n,
            n_lines: lines,
            wall_time: 0.5,
            engine_version: "v1".into(),
        }
    }

    #[test]
    fn format_and_parse() {
        let r = rec(1, 22, Some(1));
        assert_eq!(format_record(&r), "ab12 3 1 22 1 v1 0.500");
        assert_eq!(parse_record(&format_record(&r)), Some(r));
        let r = rec(2, 766, None);
        assert_eq!(format_record(&r), "ab12 3 2 766 v1 0.500");
        assert_eq!(parse_record(&format_record(&r)), Some(r));
        assert_eq!(parse_record("garbage"), None);
        assert_eq!(parse_record("zz 3 1 22 v1 0.1"), None);
        assert_eq!(parse_record("ab 3 x 22 v1 0.1"), None);
    }

    #[test]
    fn persists_and_skips_corrupt_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.txt");
        {
            let c = CountCache::open(&path).unwrap();
            assert!(c.is_empty());
            c.append(&rec(1, 22, None));
        }
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .and_then(|mut f| writeln!(f, "this line is broken"))
            .unwrap();
        let c = CountCache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.lookup("ab12", 3, 1, "v1").unwrap().n_points, 22);
        assert!(c.lookup("ab12", 3, 1, "v2").is_none());
        assert!(c.lookup_lines("ab12", 3, 1, "v1").is_none());
        c.append(&rec(1, 22, Some(1)));
        assert_eq!(c.lookup_lines("ab12", 3, 1, "v1").unwrap().n_lines, Some(1));
    }
}
