use std::path::Path;

use super::PointSet;
use crate::error::{Error, Result};
use crate::group::Modulus;

pub(super) fn parse_text(text: &str) -> Result<PointSet> {
    let mut modulus: Option<Modulus> = None;
    let mut indices = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match modulus {
            None => {
                let mut it = line.split_whitespace();
                let (Some(p), Some(r), None) = (it.next(), it.next(), it.next()) else {
                    return Err(bad(format!("expected header `p r`, found `{line}`")));
                };
                let p: u32 = p.parse().map_err(|_| bad(format!("bad prime `{p}`")))?;
                let r: u32 = r.parse().map_err(|_| bad(format!("bad rank `{r}`")))?;
                modulus = Some(Modulus::new(p, r).map_err(|e| bad(e.to_string()))?);
            }
            Some(m) => {
                let i: usize = line
                    .parse()
                    .map_err(|_| bad(format!("expected a flat index, found `{line}`")))?;
                if i >= m.order() {
                    return Err(bad(format!(
                        "index {i} out of range for order {}",
                        m.order()
                    )));
                }
                indices.push(i);
            }
        }
    }
    let m = modulus.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `p r` header".into(),
    })?;
    PointSet::from_indices(m, indices)
}

pub(super) fn parse_bytes(modulus: Modulus, bytes: &[u8]) -> Result<PointSet> {
    let n = modulus.order();
    if bytes.len() != n.div_ceil(8) {
        return Err(Error::usage(format!(
            "binary set for {modulus} needs {} bytes, got {}",
            n.div_ceil(8),
            bytes.len()
        )));
    }
    let mut s = PointSet::empty(modulus);
    for (k, &byte) in bytes.iter().enumerate() {
        for b in 0..8 {
            if byte >> b & 1 == 1 {
                let i = k * 8 + b;
                if i >= n {
                    return Err(Error::usage(format!("bit {i} set past order {n}")));
                }
                s.insert(i);
            }
        }
    }
    Ok(s)
}

/// Parses `0,1,2` (commas or whitespace) into flat indices for `modulus`.
pub fn parse_index_list(modulus: Modulus, text: &str) -> Result<PointSet> {
    let mut idx = Vec::new();
    for tok in text.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        let i: usize = tok.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected a flat index, found `{tok}`"),
        })?;
        idx.push(i);
    }
    PointSet::from_indices(modulus, idx)
}

/// Reads a text set file, or a raw `.pset` bit vector when `modulus` is given.
pub fn read_set_file(path: &Path, modulus: Option<Modulus>) -> Result<PointSet> {
    let binary = path.extension().is_some_and(|e| e == "pset");
    if binary {
        let m = modulus.ok_or_else(|| Error::usage("binary .pset files need --p and --r"))?;
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        return parse_bytes(m, &bytes);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let set = parse_text(&text)?;
    if let Some(m) = modulus {
        if m != set.modulus() {
            return Err(Error::usage(format!(
                "{} holds a set over {}, expected {m}",
                path.display(),
                set.modulus()
            )));
        }
    }
    Ok(set)
}
