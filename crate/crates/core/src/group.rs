//! The action of GL(n, q) on subspaces and q-matroids, plus an exact orbit
//! search for canonical forms, canonicality tests and automorphism counts.
//!
//! A matrix G acts on row vectors by x ↦ xG, so row i of G is the image of
//! e_i. The search chooses the images of e_1, e_2, ... in turn. Once the first
//! m images are fixed, the encoding bits of every k-subspace inside U^(m) are
//! known, and those form a prefix of the encoding. Each level therefore
//! extends the prefix and branches whose prefix already compares badly are cut.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::ambient::{AmbientSpace, Index};
use crate::error::{input, Result};
use crate::field::PrimeField;
use crate::qmatroid::QMatroid;
use crate::subspace::Subspace;

/// |GL(n, q)| = ∏_{i<n} (q^n - q^i).
pub fn gl_order(n: usize, q: u64) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// An invertible n×n matrix over F_q.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    q: u8,
    rows: Vec<Vec<u8>>,
}

impl GroupElement {
    pub fn identity(q: u8, n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect();
        GroupElement { q, rows }
    }

    pub fn from_rows(q: u8, rows: Vec<Vec<u8>>) -> Result<Self> {
        let f = PrimeField::new(q as u32)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return input("group element must be a square matrix");
        }
        if rows.iter().flatten().any(|&c| !f.contains(c)) {
            return input(format!("matrix entry out of range for F_{q}"));
        }
        if rank(&f, rows.clone()) != n {
            return input("matrix is singular");
        }
        Ok(GroupElement { q, rows })
    }

    /// Parse `n` lines of `n` digits each.
    pub fn parse(q: u8, text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| crate::Error::Input(format!("invalid digit {c:?}")))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupElement::from_rows(q, rows)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElement::identity(self.q, self.n())
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.q as u32).expect("validated on construction")
    }

    /// xG for a coordinate vector x.
    pub fn apply_vector(&self, x: &[u8]) -> Vec<u8> {
        let f = self.field();
        let n = self.n();
        let mut out = vec![0u8; n];
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for j in 0..n {
                out[j] = f.add(out[j], f.mul(c, self.rows[i][j]));
            }
        }
        out
    }

    /// Image of a subspace, in reverse-canonical form.
    pub fn apply(&self, x: &Subspace) -> Result<Subspace> {
        if x.q() != self.q || x.ambient_dim() != self.n() {
            return input(format!(
                "cannot apply a {}x{} matrix over F_{} to a subspace of F_{}^{}",
                self.n(),
                self.n(),
                self.q,
                x.q(),
                x.ambient_dim()
            ));
        }
        let rows: Vec<Vec<u8>> = x.rows().iter().map(|r| self.apply_vector(r)).collect();
        Subspace::span(self.q, self.n(), &rows)
    }

    /// self ∘ other, i.e. apply `other` first. As matrices this is other · self.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        assert_eq!((self.q, self.n()), (other.q, other.n()), "incompatible group elements");
        let rows = other.rows.iter().map(|r| self.apply_vector(r)).collect();
        GroupElement { q: self.q, rows }
    }

    pub fn inverse(&self) -> GroupElement {
        let f = self.field();
        let n = self.n();
        let mut a: Vec<Vec<u8>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| (i == j) as u8));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0).expect("invertible");
            a.swap(col, piv);
            let s = f.inv(a[col][col]);
            for c in a[col].iter_mut() {
                *c = f.mul(*c, s);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let t = a[r][col];
                    for c in 0..2 * n {
                        a[r][c] = f.sub(a[r][c], f.mul(t, a[col][c]));
                    }
                }
            }
        }
        GroupElement { q: self.q, rows: a.into_iter().map(|r| r[n..].to_vec()).collect() }
    }

    /// Induced permutation of point positions of `amb`.
    pub fn point_permutation(&self, amb: &AmbientSpace) -> Vec<usize> {
        let images = self.packed_images(amb);
        (0..amb.num_points())
            .map(|p| {
                let v = amb.packed_rows(amb.point_index(p))[0];
                amb.point_of_vector(image_of(amb, &images, v)).expect("nonzero image")
            })
            .collect()
    }

    fn packed_images(&self, amb: &AmbientSpace) -> Vec<u32> {
        self.rows.iter().map(|r| amb.pack(r)).collect()
    }

    /// Global index of the image of subspace `x`.
    pub fn apply_index(&self, amb: &AmbientSpace, x: Index) -> Index {
        let images = self.packed_images(amb);
        let rows: Vec<u32> = amb.packed_rows(x).iter().map(|&v| image_of(amb, &images, v)).collect();
        amb.index_of_span(&rows)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for c in r {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

fn image_of(amb: &AmbientSpace, images: &[u32], v: u32) -> u32 {
    amb.unpack(v).iter().zip(images).fold(0, |acc, (&c, &b)| amb.add_vec(acc, amb.scale_vec(b, c)))
}

fn rank(f: &PrimeField, mut a: Vec<Vec<u8>>) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let s = f.inv(a[r][c]);
        for i in r + 1..a.len() {
            if a[i][c] != 0 {
                let t = f.mul(a[i][c], s);
                for j in c..cols {
                    a[i][j] = f.sub(a[i][j], f.mul(t, a[r][j]));
                }
            }
        }
        r += 1;
    }
    r
}

/// The q-matroid X ↦ r(g⁻¹X).
pub fn transform(g: &GroupElement, m: &QMatroid) -> Result<QMatroid> {
    let amb = m.ambient();
    if g.q() != m.q() || g.n() != m.n() {
        return input("group element does not match the q-matroid's ambient space");
    }
    let h = g.inverse();
    let images = h.packed_images(amb);
    let ranks = (0..amb.len() as Index)
        .map(|x| {
            let rows: Vec<u32> = amb.packed_rows(x).iter().map(|&v| image_of(amb, &images, v)).collect();
            m.rank_idx(amb.index_of_span(&rows))
        })
        .collect();
    Ok(QMatroid::from_ranks_unchecked(amb.clone(), ranks))
}

/// Result of the canonicality sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalCheck {
    pub canonical: bool,
    /// Number of matrices fixing the q-matroid; known only when canonical.
    pub automorphism_order: Option<u128>,
}

/// Canonical form and a witness g with transform(g, M) equal to it.
pub fn canonical_form(m: &QMatroid) -> (QMatroid, GroupElement) {
    let bits = m.basis_bits();
    let sweep = SweepInput::new(m.ambient(), m.rank(), &bits);
    match sweep.minimize() {
        None => (m.clone(), GroupElement::identity(m.q(), m.n())),
        Some(h) => {
            let h = GroupElement { q: m.q(), rows: h.iter().map(|&v| m.ambient().unpack(v)).collect() };
            let g = h.inverse();
            let c = transform(&g, m).expect("same ambient");
            (c, g)
        }
    }
}

/// Lexicographically smallest encoding in the orbit of `bits`.
pub(crate) fn canonical_bits(amb: &AmbientSpace, k: usize, bits: &[bool]) -> Vec<bool> {
    let sweep = SweepInput::new(amb, k, bits);
    match sweep.minimize() {
        None => bits.to_vec(),
        Some(h) => sweep.image_bits(&h),
    }
}

pub fn is_canonical(m: &QMatroid) -> bool {
    check_bits(m.ambient(), m.rank(), &m.basis_bits(), false, true).canonical
}

pub fn canonical_check(m: &QMatroid) -> CanonicalCheck {
    check_bits(m.ambient(), m.rank(), &m.basis_bits(), true, true)
}

/// Number of matrices g with transform(g, M) = M.
pub fn automorphism_order(m: &QMatroid) -> u128 {
    let bits = m.basis_bits();
    SweepInput::new(m.ambient(), m.rank(), &bits).stabilizer_order()
}

/// Canonicality test on a basis encoding (`bits` over the k-subspaces).
///
/// The sequential form suits callers that already run many checks in
/// parallel.
pub(crate) fn check_bits(amb: &AmbientSpace, k: usize, bits: &[bool], count: bool, parallel: bool) -> CanonicalCheck {
    SweepInput::new(amb, k, bits).check(count, parallel)
}

/// Invariants that any isomorphism preserves.
fn invariant(m: &QMatroid) -> (usize, usize, Vec<(usize, u8)>) {
    let amb = m.ambient();
    let mut profile: Vec<(usize, u8)> = m.flats().indices().iter().map(|&f| (amb.dim_of(f), m.rank_idx(f))).collect();
    profile.sort_unstable();
    (m.rank(), m.bases().len(), profile)
}

/// A witness g with transform(g, M1) = M2, if the two are isomorphic.
pub fn is_isomorphic(m1: &QMatroid, m2: &QMatroid) -> Result<Option<GroupElement>> {
    if m1.q() != m2.q() || m1.n() != m2.n() {
        return input("q-matroids live in different ambient spaces");
    }
    if invariant(m1) != invariant(m2) {
        return Ok(None);
    }
    let (c1, g1) = canonical_form(m1);
    let (c2, g2) = canonical_form(m2);
    if c1 != c2 {
        return Ok(None);
    }
    Ok(Some(g2.inverse().compose(&g1)))
}

/// Shared data for one sweep over GL(n, q).
struct SweepInput<'a> {
    amb: &'a AmbientSpace,
    n: usize,
    target: &'a [bool],
    /// basis[x] for global index x.
    basis: Vec<bool>,
    /// Packed rows of the k-subspaces, in order.
    rows: Vec<&'a [u32]>,
    /// Encoding positions decided at level m (index m - 1).
    levels: Vec<std::ops::Range<usize>>,
}

enum Outcome {
    Smaller,
    Equal(u128),
}

impl<'a> SweepInput<'a> {
    fn new(amb: &'a AmbientSpace, k: usize, bits: &'a [bool]) -> Self {
        let n = amb.n();
        let off = amb.offset(k);
        let mut basis = vec![false; amb.len()];
        for (i, &b) in bits.iter().enumerate() {
            basis[off + i] = b;
        }
        let rows = amb.grassmannian_range(k).map(|x| amb.packed_rows(x as Index)).collect();
        let levels = (1..=n)
            .map(|m| {
                if m < k {
                    0..0
                } else {
                    let lo =
                        if m == k { 0 } else { crate::ambient::gaussian_binomial(m - 1, k, amb.q() as u64) as usize };
                    lo..crate::ambient::gaussian_binomial(m, k, amb.q() as u64) as usize
                }
            })
            .collect();
        SweepInput { amb, n, target: bits, basis, rows, levels }
    }

    /// The orbit is a single point when every k-subspace looks alike.
    fn trivial(&self) -> bool {
        self.n == 0 || self.target.iter().all(|&b| b) || self.target.iter().all(|&b| !b)
    }

    fn first_choices(&self) -> Vec<u32> {
        (0..self.amb.num_points()).map(|p| self.amb.packed_rows(self.amb.point_index(p))[0]).collect()
    }

    fn scalars(&self) -> u128 {
        self.amb.q() as u128 - 1
    }

    fn check(&self, count: bool, parallel: bool) -> CanonicalCheck {
        if self.trivial() {
            return CanonicalCheck { canonical: true, automorphism_order: Some(gl_order(self.n, self.amb.q() as u64)) };
        }
        let abort = AtomicBool::new(false);
        let results: Vec<Outcome> = if parallel {
            self.first_choices().into_par_iter().map(|v| Worker::new(self).check(v, true, &abort)).collect()
        } else {
            let mut w = Worker::new(self);
            let mut out = Vec::new();
            for v in self.first_choices() {
                let o = w.check(v, true, &abort);
                let stop = matches!(o, Outcome::Smaller);
                out.push(o);
                if stop {
                    break;
                }
            }
            out
        };
        if results.iter().any(|o| matches!(o, Outcome::Smaller)) || abort.load(AtomicOrdering::Relaxed) {
            return CanonicalCheck { canonical: false, automorphism_order: None };
        }
        let total: u128 = results
            .iter()
            .map(|o| match o {
                Outcome::Equal(c) => *c,
                Outcome::Smaller => 0,
            })
            .sum();
        CanonicalCheck { canonical: true, automorphism_order: count.then_some(total * self.scalars()) }
    }

    fn stabilizer_order(&self) -> u128 {
        if self.trivial() {
            return gl_order(self.n, self.amb.q() as u64);
        }
        let abort = AtomicBool::new(false);
        let total: u128 = self
            .first_choices()
            .into_par_iter()
            .map(|v| match Worker::new(self).check(v, false, &abort) {
                Outcome::Equal(c) => c,
                Outcome::Smaller => unreachable!("equality sweep never aborts"),
            })
            .sum();
        total * self.scalars()
    }

    /// Images of e_1..e_n of an element h reaching the minimum, when the
    /// minimum is strictly below the input encoding.
    fn minimize(&self) -> Option<Vec<u32>> {
        if self.trivial() {
            return None;
        }
        let found: Vec<Option<(Vec<bool>, Vec<u32>)>> =
            self.first_choices().into_par_iter().map(|v| Worker::new(self).minimize(v)).collect();
        found.into_iter().flatten().min_by(|a, b| a.0.cmp(&b.0)).map(|(_, h)| h)
    }

    fn image_bits(&self, h: &[u32]) -> Vec<bool> {
        let mut w = Worker::new(self);
        for (m, &v) in h.iter().enumerate() {
            w.chosen.push(v);
            w.extend_span(m + 1, v);
        }
        (0..self.rows.len()).map(|pos| w.bit_full(pos)).collect()
    }
}

/// Per-partition search state.
struct Worker<'s, 'a> {
    input: &'s SweepInput<'a>,
    /// imgvec[u] for u < q^(m-1): image of the packed vector u.
    imgvec: Vec<u32>,
    in_span: Vec<bool>,
    chosen: Vec<u32>,
    best: Vec<bool>,
    best_h: Option<Vec<u32>>,
}

impl<'s, 'a> Worker<'s, 'a> {
    fn new(input: &'s SweepInput<'a>) -> Self {
        let size = input.amb.num_vectors();
        let mut in_span = vec![false; size];
        in_span[0] = true;
        Worker {
            input,
            imgvec: vec![0; size],
            in_span,
            chosen: Vec::with_capacity(input.n),
            best: Vec::new(),
            best_h: None,
        }
    }

    /// Image of packed vector w < q^m while level m is being decided.
    #[inline]
    fn image(&self, w: u32, m: usize, vm: u32) -> u32 {
        let amb = self.input.amb;
        let low = amb.pow(m - 1);
        let c = w / low;
        let base = self.imgvec[(w % low) as usize];
        match c {
            0 => base,
            1 => amb.add_vec(base, vm),
            _ => amb.add_vec(base, amb.scale_vec(vm, c as u8)),
        }
    }

    #[inline]
    fn bit(&self, pos: usize, m: usize, vm: u32) -> bool {
        let amb = self.input.amb;
        let mut x: Index = 0;
        for &w in self.input.rows[pos] {
            let p = amb.point_of_vector(self.image(w, m, vm)).expect("independent images");
            x = amb.join_point(x, p);
        }
        self.input.basis[x as usize]
    }

    /// Bit once all n images are in `imgvec`.
    fn bit_full(&self, pos: usize) -> bool {
        let amb = self.input.amb;
        let x = self.input.rows[pos].iter().fold(0, |x, &w| {
            amb.join_point(x, amb.point_of_vector(self.imgvec[w as usize]).expect("independent images"))
        });
        self.input.basis[x as usize]
    }

    fn extend_span(&mut self, m: usize, v: u32) {
        let amb = self.input.amb;
        let low = amb.pow(m - 1) as usize;
        for c in 1..amb.q() as usize {
            let sv = amb.scale_vec(v, c as u8);
            for u in 0..low {
                let img = amb.add_vec(self.imgvec[u], sv);
                self.imgvec[c * low + u] = img;
                self.in_span[img as usize] = true;
            }
        }
    }

    fn retract_span(&mut self, m: usize) {
        let amb = self.input.amb;
        let low = amb.pow(m - 1) as usize;
        for i in low..low * amb.q() as usize {
            self.in_span[self.imgvec[i] as usize] = false;
        }
    }

    fn candidates(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.input.amb.num_vectors() as u32).filter(move |&v| !self.in_span[v as usize])
    }

    /// Sweep with fixed target. Cuts greater prefixes; smaller prefixes
    /// either abort (`stop_on_smaller`) or are cut as well.
    fn check(&mut self, first: u32, stop_on_smaller: bool, abort: &AtomicBool) -> Outcome {
        match self.check_level(1, first, stop_on_smaller, abort) {
            Some(c) => Outcome::Equal(c),
            None => Outcome::Smaller,
        }
    }

    /// Returns None on abort.
    fn check_level(&mut self, m: usize, v: u32, stop: bool, abort: &AtomicBool) -> Option<u128> {
        if stop && abort.load(AtomicOrdering::Relaxed) {
            return None;
        }
        for pos in self.input.levels[m - 1].clone() {
            let b = self.bit(pos, m, v);
            let t = self.input.target[pos];
            if b != t {
                if !b && stop {
                    abort.store(true, AtomicOrdering::Relaxed);
                    return None;
                }
                return Some(0);
            }
        }
        if m == self.input.n {
            return Some(1);
        }
        self.extend_span(m, v);
        let mut total = 0u128;
        let cands: Vec<u32> = self.candidates().collect();
        for c in cands {
            match self.check_level(m + 1, c, stop, abort) {
                None => {
                    self.retract_span(m);
                    return None;
                }
                Some(t) => total += t,
            }
        }
        self.retract_span(m);
        Some(total)
    }

    /// Best encoding strictly below the target within this partition.
    fn minimize(mut self, first: u32) -> Option<(Vec<bool>, Vec<u32>)> {
        self.best = self.input.target.to_vec();
        self.min_level(1, first, false);
        self.best_h.map(|h| (self.best, h))
    }

    /// `improved`: the prefix above this node is already below `best`, so
    /// every bit from here on overwrites it.
    fn min_level(&mut self, m: usize, v: u32, mut improved: bool) {
        for pos in self.input.levels[m - 1].clone() {
            let b = self.bit(pos, m, v);
            if !improved && b != self.best[pos] {
                if b {
                    return;
                }
                improved = true;
            }
            if improved {
                self.best[pos] = b;
            }
        }
        self.chosen.push(v);
        if m == self.input.n {
            if improved {
                self.best_h = Some(self.chosen.clone());
            }
        } else {
            self.extend_span(m, v);
            let cands: Vec<u32> = self.candidates().collect();
            for c in cands {
                // an improving child always reaches a leaf and rewrites `best`
                // completely, so later siblings just compare against it
                self.min_level(m + 1, c, improved);
                improved = false;
            }
            self.retract_span(m);
        }
        self.chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::Encoding;

    fn sub(q: u8, s: &str) -> Subspace {
        Subspace::parse(q, s).unwrap()
    }

    fn all_elements(q: u8, n: usize) -> Vec<GroupElement> {
        let f = PrimeField::new(q as u32).unwrap();
        let total = (q as usize).pow((n * n) as u32);
        (0..total)
            .filter_map(|mut code| {
                let rows: Vec<Vec<u8>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let c = (code % q as usize) as u8;
                                code /= q as usize;
                                c
                            })
                            .collect()
                    })
                    .collect();
                (rank(&f, rows.clone()) == n).then(|| GroupElement { q, rows })
            })
            .collect()
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_order(1, 3), 2);
        assert_eq!(gl_order(4, 2), 20160);
        assert_eq!(gl_order(5, 2), 9_999_360);
        assert_eq!(all_elements(2, 3).len() as u128, gl_order(3, 2));
        assert_eq!(all_elements(3, 2).len() as u128, gl_order(2, 3));
    }

    #[test]
    fn apply_examples() {
        let swap =
            GroupElement::from_rows(2, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
                .unwrap();
        assert_eq!(swap.apply(&sub(2, "1000")).unwrap(), sub(2, "0100"));
        let id = GroupElement::identity(2, 4);
        let x = sub(2, "1100;0011");
        assert_eq!(id.apply(&x).unwrap(), x);
        assert!(GroupElement::from_rows(2, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(id.apply(&sub(2, "100")).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        for g in all_elements(2, 3) {
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(&g).is_identity());
        }
        let els = all_elements(3, 2);
        let x = sub(3, "12");
        for g in &els[..10] {
            for h in &els[..10] {
                let gh = g.compose(h);
                assert_eq!(gh.apply(&x).unwrap(), g.apply(&h.apply(&x).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn witness_text_roundtrip() {
        let g = GroupElement::from_rows(3, vec![vec![0, 1], vec![2, 1]]).unwrap();
        assert_eq!(g.to_string(), "01\n21");
        assert_eq!(GroupElement::parse(3, &g.to_string()).unwrap(), g);
    }

    #[test]
    fn point_permutation_matches_apply() {
        let amb = AmbientSpace::shared(2, 3).unwrap();
        for g in all_elements(2, 3).iter().step_by(17) {
            let perm = g.point_permutation(&amb);
            for p in 0..amb.num_points() {
                let img = g.apply(&amb.subspace(amb.point_index(p))).unwrap();
                assert_eq!(amb.index_of(&img).unwrap(), amb.point_index(perm[p]));
            }
        }
    }

    /// Orbit minimum by running through all of GL(n, q).
    fn brute_min(m: &QMatroid) -> (Vec<bool>, u128) {
        let own = m.basis_bits();
        let mut best: Option<Vec<bool>> = None;
        let mut stab = 0;
        for g in all_elements(m.q(), m.n()) {
            let bits = transform(&g, m).unwrap().basis_bits();
            if bits == own {
                stab += 1;
            }
            if best.as_ref().map_or(true, |b| bits < *b) {
                best = Some(bits);
            }
        }
        (best.unwrap(), stab)
    }

    fn small_matroids() -> Vec<QMatroid> {
        let mut out = vec![
            QMatroid::uniform(1, 3, 2).unwrap(),
            QMatroid::uniform(2, 3, 2).unwrap(),
            QMatroid::uniform(1, 2, 3).unwrap(),
        ];
        for s in ["0111111", "1111110", "0001111", "1000000"] {
            if let Ok(m) = QMatroid::decode(&Encoding::from_bitstring(2, 3, 2, s).unwrap()) {
                out.push(m);
            }
        }
        for s in ["0001111", "1110000", "0111111", "1000000"] {
            if let Ok(m) = QMatroid::decode(&Encoding::from_bitstring(2, 3, 1, s).unwrap()) {
                out.push(m);
            }
        }
        for s in ["0111", "1000", "0011"] {
            if let Ok(m) = QMatroid::decode(&Encoding::from_bitstring(3, 2, 1, s).unwrap()) {
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn search_agrees_with_full_group_scan() {
        let ms = small_matroids();
        assert!(ms.len() >= 8);
        for m in ms {
            let (min, stab) = brute_min(&m);
            let (c, g) = canonical_form(&m);
            assert_eq!(c.basis_bits(), min, "{m:?}");
            assert_eq!(transform(&g, &m).unwrap(), c);
            assert_eq!(automorphism_order(&m), stab);
            let check = canonical_check(&m);
            assert_eq!(check.canonical, m.basis_bits() == min);
            if check.canonical {
                assert_eq!(check.automorphism_order, Some(stab));
            }
            assert!(is_canonical(&c));
            let amb = m.ambient();
            assert_eq!(canonical_bits(amb, m.rank(), &m.basis_bits()), min);
        }
    }

    #[test]
    fn transform_is_an_action() {
        let m = QMatroid::decode(&Encoding::from_bitstring(2, 3, 2, "0111111").unwrap()).unwrap();
        let els = all_elements(2, 3);
        let id = GroupElement::identity(2, 3);
        assert_eq!(transform(&id, &m).unwrap(), m);
        for g in els.iter().step_by(7) {
            for h in els.iter().step_by(11) {
                let lhs = transform(g, &transform(h, &m).unwrap()).unwrap();
                assert_eq!(lhs, transform(&g.compose(h), &m).unwrap());
            }
            // flats map to flats
            let t = transform(g, &m).unwrap();
            let mut want: Vec<Subspace> = m.flats().subspaces().iter().map(|f| g.apply(f).unwrap()).collect();
            want.sort();
            assert_eq!(t.flats().subspaces(), want);
        }
    }

    #[test]
    fn uniform_is_fixed_by_everything() {
        for (k, n, q) in [(2, 4, 2), (1, 3, 3), (0, 3, 2)] {
            let u = QMatroid::uniform(k, n, q).unwrap();
            assert_eq!(automorphism_order(&u), gl_order(n, q as u64));
            assert!(is_canonical(&u));
            assert_eq!(canonical_form(&u).0, u);
        }
    }

    #[test]
    fn isomorphism_examples() {
        let u12 = QMatroid::uniform(1, 2, 2).unwrap();
        let loopy = QMatroid::decode(&Encoding::from_bitstring(2, 2, 1, "011").unwrap()).unwrap();
        assert!(is_isomorphic(&u12, &loopy).unwrap().is_none());
        let m = QMatroid::decode(&Encoding::from_bitstring(2, 3, 2, "0111111").unwrap()).unwrap();
        let g = all_elements(2, 3)[101].clone();
        let t = transform(&g, &m).unwrap();
        let w = is_isomorphic(&m, &t).unwrap().unwrap();
        assert_eq!(transform(&w, &m).unwrap(), t);
        assert!(is_isomorphic(&m, &u12).is_err());
    }
}
