//! Evaluation cache: one JSON object per line, keyed by canonical index
//! string plus achieved precision. Purely an accelerator — a corrupt or
//! missing cache can cost time, never correctness. One process owns the
//! file during a run (advisory flock).

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::os::unix::io::AsRawFd;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::render::BallRepr;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: String,
    pub prec_bits: u32,
    #[serde(flatten)]
    pub ball: BallRepr,
}

pub struct EvalCache {
    path: PathBuf,
    // the open handle holds the advisory lock for the process lifetime
    _lock: File,
    entries: BTreeMap<(String, u32), CacheEntry>,
    pub warnings: Vec<String>,
}

impl EvalCache {
    /// Opens (creating if needed) and locks the cache file. Fails with
    /// WouldBlock if another process holds it.
    pub fn open(path: &Path) -> io::Result<EvalCache> {
        let lock = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)?;
        let rc = unsafe { libc::flock(lock.as_raw_fd(), libc::LOCK_EX | libc::LOCK_NB) };
        if rc != 0 {
            return Err(io::Error::new(
                io::ErrorKind::WouldBlock,
                "cache file is locked by another process",
            ));
        }
        let mut entries = BTreeMap::new();
        let mut warnings = Vec::new();
        for (lineno, line) in BufReader::new(&lock).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheEntry>(&line) {
                Ok(e) if e.ball.to_ball().is_some() => {
                    entries.insert((e.key.clone(), e.prec_bits), e);
                }
                _ => warnings.push(format!(
                    "cache line {} is corrupt and was ignored",
                    lineno + 1
                )),
            }
        }
        Ok(EvalCache {
            path: path.to_path_buf(),
            _lock: lock,
            entries,
            warnings,
        })
    }

    /// A stored ball qualifies only when its achieved precision covers
    /// the request.
    pub fn get(&self, key: &str, prec_bits: u32) -> Option<Ball> {
        self.entries
            .range((key.to_string(), prec_bits)..=(key.to_string(), u32::MAX))
            .next_back()
            .filter(|((k, p), _)| k == key && *p >= prec_bits)
            .and_then(|(_, e)| e.ball.to_ball())
    }

    /// Append-or-replace; the write is atomic at file level (temp file
    /// plus rename).
    pub fn put(&mut self, key: &str, ball: &Ball) -> io::Result<()> {
        let repr = BallRepr::from_ball(ball);
        let prec_bits = match repr.radius_exp {
            None => u32::MAX - 1,
            Some(e) if e < 0 => (-e).min(u32::MAX as i64 - 1) as u32,
            Some(_) => 0,
        };
        let entry = CacheEntry {
            key: key.to_string(),
            prec_bits,
            ball: repr,
        };
        self.entries.insert((key.to_string(), prec_bits), entry);
        self.save()
    }

    fn save(&self) -> io::Result<()> {
        let tmp = self.path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            for e in self.entries.values() {
                writeln!(f, "{}", serde_json::to_string(e)?)?;
            }
            f.sync_all()?;
        }
        std::fs::rename(&tmp, &self.path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeval::{eval_mzv, EvalConfig};
    use crate::rat::rat;

    #[test]
    fn empty_cache_misses() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let cache = EvalCache::open(&path).unwrap();
        assert!(cache.get("2", 64).is_none());
        assert!(cache.is_empty());
    }

    #[test]
    fn put_get_roundtrip_and_prec_contract() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut cache = EvalCache::open(&path).unwrap();
        let ball = eval_mzv(&crate::index::MzvIndex::of(&[2]), &EvalConfig::with_prec(96))
            .unwrap();
        cache.put("2", &ball).unwrap();

        let hit = cache.get("2", 90).expect("stored prec covers request");
        assert_eq!(hit.midpoint(), ball.midpoint());
        // re-reading from disk reconstructs bit-identically
        drop(cache);
        let cache2 = EvalCache::open(&path).unwrap();
        let hit2 = cache2.get("2", 90).unwrap();
        assert_eq!(hit2, hit);

        // higher precision than stored: miss, forcing re-evaluation
        assert!(cache2.get("2", 4000).is_none());
    }

    #[test]
    fn corrupt_lines_are_ignored_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let mut cache = EvalCache::open(&path).unwrap();
            cache
                .put("3", &Ball::from_rational(&rat(6, 5), 80))
                .unwrap();
        }
        // prepend garbage
        let good = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, format!("{{not json\n{good}")).unwrap();
        let cache = EvalCache::open(&path).unwrap();
        assert_eq!(cache.warnings.len(), 1);
        assert!(cache.get("3", 70).is_some());
    }

    #[test]
    fn lock_excludes_second_owner() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let _first = EvalCache::open(&path).unwrap();
        let second = EvalCache::open(&path);
        assert!(second.is_err());
    }
}
