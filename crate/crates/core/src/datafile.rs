//! Line-oriented data files with a trailing sha256 checksum line.

use crate::error::{Error, Result};
use crate::numkernel::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use sha2::{Digest, Sha256};

/// A content line and its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataLine {
    pub number: usize,
    pub text: String,
}

/// Returns the content lines after checking the `checksum sha256 <hex>` line,
/// which must be the last content line.
pub fn read_checksummed(file: &str, text: &str) -> Result<Vec<DataLine>> {
    let mut lines = Vec::new();
    let mut hasher = Sha256::new();
    let mut recorded = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if recorded.is_some() {
            return Err(Error::Parse { file: file.into(), line: i + 1, msg: "content after checksum line".into() });
        }
        if let Some(hex) = line.strip_prefix("checksum sha256 ") {
            recorded = Some(hex.trim().to_lowercase());
            continue;
        }
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
        lines.push(DataLine { number: i + 1, text: line.to_string() });
    }
    let computed = hex::encode(hasher.finalize());
    match recorded {
        None => Err(Error::Parse { file: file.into(), line: 0, msg: "missing checksum line".into() }),
        Some(r) if r != computed => Err(Error::Checksum { file: file.into(), recorded: r, computed }),
        Some(_) => Ok(lines),
    }
}

/// Appends a checksum line for `body` (used when writing data files).
pub fn with_checksum(body: &str) -> String {
    let mut hasher = Sha256::new();
    for line in body.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let mut out = body.trim_end().to_string();
    out.push_str(&format!("\nchecksum sha256 {}\n", hex::encode(hasher.finalize())));
    out
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper() {
        let body = "# header\na 1\n\nb 2\n";
        let full = with_checksum(body);
        let lines = read_checksummed("t", &full).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], DataLine { number: 4, text: "b 2".into() });
        let bad = full.replace("b 2", "b 3");
        assert!(matches!(read_checksummed("t", &bad), Err(Error::Checksum { .. })));
        assert!(read_checksummed("t", body).is_err());
    }
}
