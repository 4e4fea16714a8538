use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AccessError;
use crate::gf2core::BitVec;
use crate::setops::PointSet;

/// Ground-truth sidecar for planted cover instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSidecar {
    pub n: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    /// Echelon basis of the hidden subspace (kept alongside the spec'd
    /// fields so certificates can be checked against the truth).
    pub basis: Vec<BitVec>,
    pub reps: Vec<BitVec>,
    pub noise: f64,
    pub seed: u64,
}

/// Writes a set in the line format `n=<int> count=<int>` followed by one
/// big-endian bit string per element, in the set's iteration order.
pub fn write_set<W: Write>(mut out: W, set: &PointSet) -> std::io::Result<()> {
    writeln!(out, "n={} count={}", set.ambient(), set.len())?;
    for p in set.iter() {
        writeln!(out, "{p}")?;
    }
    Ok(())
}

pub fn write_set_to_path(path: &Path, set: &PointSet) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_set(std::io::BufWriter::new(file), set)
}

/// Parses the set format, reporting the offending line on malformed input.
pub fn read_set<R: BufRead>(reader: R, path: &str) -> Result<PointSet, AccessError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| fmt_err(path, 1, "empty file"))??;
    let (n, count) = parse_header(&header).ok_or_else(|| {
        fmt_err(path, 1, "expected header `n=<int> count=<int>`")
    })?;
    let mut set = PointSet::new(n);
    let mut line_no = 1;
    for line in lines {
        let line = line?;
        line_no += 1;
        if line.is_empty() {
            continue;
        }
        if line.len() != n {
            return Err(fmt_err(
                path,
                line_no,
                &format!("expected {n} bits, found {}", line.len()),
            ));
        }
        let v = BitVec::parse_bitstring(&line)
            .map_err(|_| fmt_err(path, line_no, "invalid bit character"))?;
        set.insert(v);
    }
    if set.len() != count {
        return Err(fmt_err(
            path,
            line_no,
            &format!("header promised {count} distinct elements, parsed {}", set.len()),
        ));
    }
    Ok(set)
}

pub fn read_set_from_path(path: &Path) -> Result<PointSet, AccessError> {
    let file = std::fs::File::open(path)?;
    read_set(std::io::BufReader::new(file), &path.display().to_string())
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut n = None;
    let mut count = None;
    for field in line.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        match key {
            "n" => n = value.parse().ok(),
            "count" => count = value.parse().ok(),
            _ => return None,
        }
    }
    Some((n?, count?))
}

fn fmt_err(path: &str, line: usize, msg: &str) -> AccessError {
    AccessError::Format {
        path: path.to_string(),
        line,
        msg: msg.to_string(),
    }
}
