//! Binary checkpoint: magic `SSLB1`, a 64-bit FNV-1a hash of the run's
//! configuration, counters, finished unit results and pending unit prefixes.
//! All integers are little-endian.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::Path;

use fnv::FnvHasher;

use super::engine::UnitResult;
use crate::error::{Error, Result};

const MAGIC: &[u8; 5] = b"SSLB1";

pub fn config_hash(text: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(text.as_bytes());
    h.finish()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Snapshot {
    pub hash: u64,
    pub best: u32,
    pub nodes: u64,
    pub pruned: u64,
    pub units_total: u64,
    pub done: BTreeMap<usize, UnitResult>,
    pub pending: Vec<(usize, Vec<u8>)>,
}

impl Snapshot {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.extend(self.hash.to_le_bytes());
        out.extend(self.best.to_le_bytes());
        out.extend(self.nodes.to_le_bytes());
        out.extend(self.pruned.to_le_bytes());
        out.extend(self.units_total.to_le_bytes());
        out.extend((self.done.len() as u64).to_le_bytes());
        for (&id, r) in &self.done {
            out.extend((id as u64).to_le_bytes());
            out.extend(r.min.unwrap_or(u32::MAX).to_le_bytes());
            out.push(r.truncated as u8);
            out.extend((r.hits.len() as u32).to_le_bytes());
            for h in &r.hits {
                out.extend(h.to_le_bytes());
            }
        }
        out.extend((self.pending.len() as u64).to_le_bytes());
        for (id, prefix) in &self.pending {
            out.extend((*id as u64).to_le_bytes());
            out.push(prefix.len() as u8);
            out.extend(prefix);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(5)? != MAGIC {
            return Err(Error::Checkpoint(
                "not a checkpoint file (bad magic)".into(),
            ));
        }
        let mut s = Snapshot {
            hash: r.u64()?,
            best: r.u32()?,
            nodes: r.u64()?,
            pruned: r.u64()?,
            units_total: r.u64()?,
            ..Snapshot::default()
        };
        for _ in 0..r.u64()? {
            let id = r.u64()? as usize;
            let min = r.u32()?;
            let truncated = r.take(1)?[0] != 0;
            let count = r.u32()? as usize;
            let hits = (0..count)
                .map(|_| {
                    Ok(u128::from_le_bytes(
                        r.take(16)?.try_into().expect("16 bytes"),
                    ))
                })
                .collect::<Result<Vec<u128>>>()?;
            let min = (min != u32::MAX).then_some(min);
            s.done.insert(
                id,
                UnitResult {
                    min,
                    hits,
                    truncated,
                },
            );
        }
        for _ in 0..r.u64()? {
            let id = r.u64()? as usize;
            let len = r.take(1)?[0] as usize;
            s.pending.push((id, r.take(len)?.to_vec()));
        }
        if r.pos != bytes.len() {
            return Err(Error::Checkpoint("trailing bytes after checkpoint".into()));
        }
        Ok(s)
    }

    /// Writes through a temporary file and a rename, so a crash never leaves
    /// a torn checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_bytes()).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    /// `None` for a missing or empty file, which means a fresh run.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match std::fs::read(path) {
            Ok(bytes) if bytes.is_empty() => Ok(None),
            Ok(bytes) => Self::from_bytes(&bytes).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let out = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Checkpoint("checkpoint is truncated".into()))?;
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(config_hash(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(config_hash("a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn round_trip_and_corruption() {
        let mut s = Snapshot {
            hash: 42,
            best: 20,
            nodes: 1000,
            pruned: 7,
            units_total: 3,
            ..Snapshot::default()
        };
        s.done.insert(
            1,
            UnitResult {
                min: Some(20),
                hits: vec![u128::MAX, 3],
                truncated: false,
            },
        );
        s.done.insert(2, UnitResult::default());
        s.pending.push((0, vec![0, 1, 5, 9]));
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..5], b"SSLB1");
        assert_eq!(Snapshot::from_bytes(&bytes).unwrap(), s);
        assert!(Snapshot::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Snapshot::from_bytes(&bad).is_err());
    }
}
