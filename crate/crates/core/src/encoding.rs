//! Basis encodings and the single-matroid text format.
//!
//! ```text
//! qmatroid v1
//! q=2 n=4 k=2
//! enc=0011...
//! ```
//! Character i of the bitstring marks whether the i-th k-subspace (in the
//! subspace order) is a basis.

use std::cmp::Ordering;
use std::fmt;

use crate::ambient::gaussian_binomial;
use crate::error::{input, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Encoding {
    q: u8,
    n: usize,
    k: usize,
    bits: Vec<bool>,
}

impl Encoding {
    pub fn new(q: u8, n: usize, k: usize, bits: Vec<bool>) -> Result<Self> {
        if k > n {
            return input(format!("rank {k} exceeds dimension {n}"));
        }
        let len = gaussian_binomial(n, k, q as u64) as usize;
        if bits.len() != len {
            return input(format!("encoding has {} bits, expected {len}", bits.len()));
        }
        if !bits.iter().any(|&b| b) {
            return input("encoding marks no basis");
        }
        Ok(Encoding { q, n, k, bits })
    }

    pub(crate) fn from_parts(q: u8, n: usize, k: usize, bits: Vec<bool>) -> Self {
        Encoding { q, n, k, bits }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Parse a bare `0`/`1` string for the given parameters.
    pub fn from_bitstring(q: u8, n: usize, k: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => input(format!("invalid bit {c:?}")),
            })
            .collect::<Result<Vec<bool>>>()?;
        Encoding::new(q, n, k, bits)
    }

    /// The three-line `qmatroid v1` file body (with trailing newline).
    pub fn to_file_string(&self) -> String {
        format!("qmatroid v1\nq={} n={} k={}\nenc={}\n", self.q, self.n, self.k, self.bitstring())
    }

    /// Parse a `qmatroid v1` file.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
        if lines.next() != Some("qmatroid v1") {
            return input("missing `qmatroid v1` header");
        }
        let params = lines.next().ok_or_else(|| crate::Error::Input("missing parameter line".into()))?;
        let (q, n, k) = parse_params(params)?;
        let enc = lines.next().ok_or_else(|| crate::Error::Input("missing enc line".into()))?;
        let bits =
            enc.strip_prefix("enc=").ok_or_else(|| crate::Error::Input("enc line must start with `enc=`".into()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return input("trailing content after enc line");
        }
        check_params(q, n, k)?;
        Encoding::from_bitstring(q as u8, n, k, bits)
    }
}

/// Parses `q=<q> n=<n> k=<k>`.
pub(crate) fn parse_params(line: &str) -> Result<(u32, usize, usize)> {
    let mut it = line.split(' ');
    let mut field = |name: &str| -> Result<u64> {
        let tok = it.next().ok_or_else(|| crate::Error::Input(format!("missing {name}=")))?;
        let v = tok
            .strip_prefix(name)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| crate::Error::Input(format!("expected {name}=, got {tok:?}")))?;
        if v.is_empty() || v.len() > 9 || !v.bytes().all(|b| b.is_ascii_digit()) {
            return input(format!("bad value for {name}: {v:?}"));
        }
        Ok(v.parse().expect("checked digits"))
    };
    let q = field("q")? as u32;
    let n = field("n")? as usize;
    let k = field("k")? as usize;
    Ok((q, n, k))
}

pub(crate) fn check_params(q: u32, n: usize, k: usize) -> Result<()> {
    if !crate::field::is_prime(q) || q > 251 {
        return input(format!("q = {q} is not a supported prime"));
    }
    if n > 16 || k > n {
        return input(format!("unsupported dimensions n = {n}, k = {k}"));
    }
    if gaussian_binomial(n, k, q as u64) > crate::ambient::MAX_SUBSPACES as u64 {
        return input("encoding too long");
    }
    Ok(())
}

impl PartialOrd for Encoding {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the bit vector (0 < 1, first bit most significant) once
/// parameters agree.
impl Ord for Encoding {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n, self.k).cmp(&(other.q, other.n, other.k)).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_roundtrip() {
        let e = Encoding::from_bitstring(2, 3, 1, "0110111").unwrap();
        let text = e.to_file_string();
        assert_eq!(text, "qmatroid v1\nq=2 n=3 k=1\nenc=0110111\n");
        assert_eq!(Encoding::parse_file(&text).unwrap(), e);
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            "",
            "qmatroid v2\nq=2 n=3 k=1\nenc=0110111\n",
            "qmatroid v1\nq=4 n=3 k=1\nenc=0110111\n",
            "qmatroid v1\nq=2 n=3 k=1\nenc=011011\n",
            "qmatroid v1\nq=2 n=3 k=1\nenc=0000000\n",
            "qmatroid v1\nq=2 n=3 k=1\nenc=01101 11\n",
            "qmatroid v1\nq=2 n=3 k=4\nenc=1\n",
            "qmatroid v1\nq=2  n=3 k=1\nenc=0110111\n",
            "qmatroid v1\nq=2 n=3 k=1\nenc=0110111\nextra\n",
            "qmatroid v1\nq=2 n=99999999999 k=1\nenc=1\n",
        ] {
            assert!(Encoding::parse_file(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn order_is_lexicographic() {
        let a = Encoding::from_bitstring(2, 2, 1, "011").unwrap();
        let b = Encoding::from_bitstring(2, 2, 1, "101").unwrap();
        assert!(a < b);
    }
}
