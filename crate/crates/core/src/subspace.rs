//! Subspaces of F_q^n in reverse-canonical form, and the total order on them.
//!
//! A subspace is stored by a generator matrix whose rows satisfy:
//! the rightmost nonzero entry of each row is 1 (its pivot), pivots strictly
//! increase from the first row to the last, and every pivot column has exactly
//! one nonzero entry. Every subspace has exactly one such matrix.
//!
//! Text syntax: rows as digit strings, coordinate 1 first, joined by `;`.
//! The zero subspace is written as a single all-zero row.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{input, Error, Result};
use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    q: u8,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl Subspace {
    /// Reverse-canonical representative of the span of `rows`.
    pub fn span(q: u8, n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let field = PrimeField::new(q as u32)?;
        for r in rows {
            if r.len() != n {
                return input(format!("row of length {} in ambient of dimension {n}", r.len()));
            }
            if let Some(&bad) = r.iter().find(|&&c| !field.contains(c)) {
                return input(format!("entry {bad} is not an element of F_{q}"));
            }
        }
        Ok(Subspace { q, n, rows: reverse_canonical(&field, rows.to_vec()) })
    }

    pub fn zero(q: u8, n: usize) -> Self {
        Subspace { q, n, rows: Vec::new() }
    }

    /// The whole space F_q^n.
    pub fn full(q: u8, n: usize) -> Self {
        Self::coordinate(q, n, n)
    }

    /// The coordinate subspace U^(m): vectors whose coordinates after the m-th vanish.
    pub fn coordinate(q: u8, n: usize, m: usize) -> Self {
        assert!(m <= n);
        let rows = (0..m)
            .map(|i| {
                let mut r = vec![0u8; n];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { q, n, rows }
    }

    pub(crate) fn from_canonical_rows(q: u8, n: usize, rows: Vec<Vec<u8>>) -> Self {
        debug_assert!(is_reverse_canonical(&rows));
        Subspace { q, n, rows }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Pivot (trailing nonzero) positions, 0-based, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| trailing_nonzero(r).unwrap()).collect()
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            return input(format!("ambient mismatch: F_{}^{} vs F_{}^{}", self.q, self.n, other.q, other.n));
        }
        Ok(())
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.q as u32).expect("validated at construction")
    }

    /// Compare under the subspace order: dimension first, then reverse
    /// lexicographic order of the row-major flattening of the canonical matrix.
    pub fn compare(&self, other: &Subspace) -> Result<Ordering> {
        self.check_same_ambient(other)?;
        Ok(self.order_cmp(other))
    }

    fn order_cmp(&self, other: &Subspace) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            let a = self.rows.iter().rev().flat_map(|r| r.iter().rev());
            let b = other.rows.iter().rev().flat_map(|r| r.iter().rev());
            a.cmp(b)
        })
    }

    /// A + B.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Subspace { q: self.q, n: self.n, rows: reverse_canonical(&self.field(), rows) })
    }

    /// A ∩ B, computed as (A⊥ + B⊥)⊥.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(self.orthogonal_complement().sum(&other.orthogonal_complement())?.orthogonal_complement())
    }

    /// `true` iff `other` ≤ `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        reverse_canonical(&self.field(), rows).len() == self.dim()
    }

    /// Kernel of the standard dot product against this subspace.
    pub fn orthogonal_complement(&self) -> Subspace {
        let f = self.field();
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // Row i is e_{p_i} + sum over free f of a_{i,f} e_f. For each free
        // column f, v = e_f - sum_i a_{i,f} e_{p_i} is orthogonal to every row.
        let mut basis = Vec::with_capacity(self.n - pivots.len());
        for free in (0..self.n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.n];
            v[free] = 1;
            for (row, &p) in self.rows.iter().zip(&pivots) {
                v[p] = f.neg(row[free]);
            }
            basis.push(v);
        }
        Subspace { q: self.q, n: self.n, rows: reverse_canonical(&f, basis) }
    }

    /// Parse the `;`-separated row syntax over F_q.
    pub fn parse(q: u8, s: &str) -> Result<Subspace> {
        let s = s.trim();
        if s.is_empty() {
            return input("empty subspace syntax");
        }
        let mut rows = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                return input(format!("empty row in {s:?}"));
            }
            let row = part
                .chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d < q as u32 => Ok(d as u8),
                    _ => Err(Error::Input(format!("invalid digit {c:?} over F_{q}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        let n = rows[0].len();
        if q > 10 {
            return input("text syntax supports only q <= 10");
        }
        Subspace::span(q, n, &rows)
    }

    /// Same as [`Subspace::parse`] but also checks the ambient dimension.
    pub fn parse_in(q: u8, n: usize, s: &str) -> Result<Subspace> {
        let x = Subspace::parse(q, s)?;
        if x.n != n {
            return input(format!("expected rows of length {n}, got {}", x.n));
        }
        Ok(x)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order; subspaces from different ambients are ordered by (q, n) first.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n).cmp(&(other.q, other.n)).then_with(|| self.order_cmp(other))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "{}", "0".repeat(self.n));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for &c in r {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn trailing_nonzero(row: &[u8]) -> Option<usize> {
    row.iter().rposition(|&c| c != 0)
}

/// Reduce `rows` to the reverse-canonical basis of their span.
pub(crate) fn reverse_canonical(f: &PrimeField, mut rows: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivot_of: Vec<Option<usize>> = vec![None; rows.len()];
    for col in (0..n).rev() {
        let Some(pr) = (0..rows.len()).find(|&r| pivot_of[r].is_none() && rows[r][col] != 0) else {
            continue;
        };
        let s = f.inv(rows[pr][col]);
        for c in 0..n {
            rows[pr][c] = f.mul(rows[pr][c], s);
        }
        for r in 0..rows.len() {
            if r == pr || rows[r][col] == 0 {
                continue;
            }
            let m = rows[r][col];
            for c in 0..n {
                let t = f.mul(m, rows[pr][c]);
                rows[r][c] = f.sub(rows[r][c], t);
            }
        }
        pivot_of[pr] = Some(col);
    }
    let mut out: Vec<(usize, Vec<u8>)> =
        rows.into_iter().zip(pivot_of).filter_map(|(r, p)| p.map(|p| (p, r))).collect();
    out.sort_by_key(|(p, _)| *p);
    out.into_iter().map(|(_, r)| r).collect()
}

pub(crate) fn is_reverse_canonical(rows: &[Vec<u8>]) -> bool {
    let mut last = None;
    let mut pivots = Vec::new();
    for r in rows {
        let Some(p) = trailing_nonzero(r) else {
            return false;
        };
        if r[p] != 1 || last.is_some_and(|l| l >= p) {
            return false;
        }
        last = Some(p);
        pivots.push(p);
    }
    pivots.iter().all(|&p| rows.iter().filter(|r| r[p] != 0).count() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(q: u8, text: &str) -> Subspace {
        Subspace::parse(q, text).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(s(2, "0100;1110").to_string(), "0100;1010");
        assert_eq!(s(2, "1000;0100").to_string(), "1000;0100");
        assert_eq!(s(3, "120").to_string(), "210");
        assert_eq!(s(2, "1100;1100;0000").to_string(), "1100");
        assert_eq!(s(2, "000").dim(), 0);
        assert_eq!(s(2, "000").to_string(), "000");
    }

    #[test]
    fn canonical_is_idempotent_on_examples() {
        for t in ["0100;1010", "10010;01100;00001", "1100;1010"] {
            let x = s(2, t);
            assert_eq!(Subspace::span(2, x.ambient_dim(), x.rows()).unwrap(), x);
        }
    }

    #[test]
    fn chain_order() {
        let chain = ["1000;0100", "1000;0010", "0100;0010", "1100;0010", "0100;1010", "1100;1010", "1000;0110"];
        for w in chain.windows(2) {
            assert_eq!(s(2, w[0]).compare(&s(2, w[1])).unwrap(), Ordering::Less, "{w:?}");
        }
        let x = s(2, "1100;1010");
        assert_eq!(x.compare(&x).unwrap(), Ordering::Equal);
        assert!(s(2, "1000").compare(&s(2, "100")).is_err());
    }

    #[test]
    fn lower_dimension_first() {
        assert_eq!(s(2, "0001").cmp(&s(2, "1000;0100")), Ordering::Less);
    }

    #[test]
    fn sum_intersect_contains() {
        assert_eq!(s(2, "1000").sum(&s(2, "0100")).unwrap(), s(2, "1000;0100"));
        let a = s(2, "10000;01000;00001");
        let b = s(2, "10010;01100;00001");
        assert_eq!(a.intersect(&b).unwrap(), s(2, "00001"));
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(s(2, "1000;0100").contains(&s(2, "1000")).unwrap());
        assert!(!s(2, "1000").contains(&s(2, "0100")).unwrap());
        assert!(Subspace::full(2, 4).contains(&s(2, "1011;0110")).unwrap());
    }

    #[test]
    fn complements() {
        assert_eq!(s(2, "1000;0100").orthogonal_complement(), s(2, "0010;0001"));
        assert_eq!(Subspace::zero(2, 3).orthogonal_complement(), Subspace::full(2, 3));
        assert_eq!(s(3, "110").orthogonal_complement(), s(3, "210;001"));
    }

    #[test]
    fn parse_errors() {
        assert!(Subspace::parse(2, "102").is_err());
        assert!(Subspace::parse(2, "10;100").is_err());
        assert!(Subspace::parse(2, "").is_err());
        assert!(Subspace::parse(2, "1x").is_err());
        assert!(Subspace::parse(2, "10;;01").is_err());
        assert!(Subspace::parse_in(2, 4, "101").is_err());
    }

    #[test]
    fn representative_invariants() {
        let x = s(3, "1201;2110;0012");
        assert!(is_reverse_canonical(x.rows()));
    }
}
