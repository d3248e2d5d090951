//! OEIS b-file reading and index-aligned comparison against computed
//! prefixes.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::seq::IntSeq;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, BigInt)>,
}

impl BFile {
    /// Lines are `n a(n)`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<BFile> {
        let mut entries: Vec<(i64, BigInt)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(n), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::format(line_no, format!("expected `n a(n)`, found {line:?}")));
            };
            let n: i64 = n
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad index {n:?}")))?;
            let v: BigInt = v
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad value {v:?}")))?;
            if let Some(&(prev, _)) = entries.last() {
                if n <= prev {
                    return Err(Error::format(line_no, format!("index {n} does not increase")));
                }
            }
            entries.push((n, v));
        }
        Ok(BFile { entries })
    }

    /// Index of the first line, the sequence offset in OEIS convention.
    pub fn offset(&self) -> Option<i64> {
        self.entries.first().map(|&(n, _)| n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: i64,
    pub ours: BigUint,
    pub theirs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    /// b-file indices compared, in order.
    pub compared: Vec<i64>,
    pub mismatches: Vec<Mismatch>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && !self.compared.is_empty()
    }

    pub fn first_index(&self) -> Option<i64> {
        self.compared.first().copied()
    }

    pub fn last_index(&self) -> Option<i64> {
        self.compared.last().copied()
    }
}

/// Compares b-file entry `n` with `seq[n - shift]` wherever both exist.
/// With `shift = 0` the b-file's own indices are taken as the sequence
/// indices; a sequence stored from index 1 at position 0 uses `shift = 1`.
pub fn compare(seq: &IntSeq, bfile: &BFile, shift: i64) -> Comparison {
    let mut compared = Vec::new();
    let mut mismatches = Vec::new();
    for (n, theirs) in &bfile.entries {
        let idx = n - shift;
        if idx < 0 {
            continue;
        }
        let Some(ours) = seq.get(idx as usize) else { continue };
        compared.push(*n);
        if BigInt::from(ours.clone()) != *theirs {
            mismatches.push(Mismatch {
                n: *n,
                ours: ours.clone(),
                theirs: theirs.clone(),
            });
        }
    }
    Comparison {
        compared,
        mismatches,
    }
}
