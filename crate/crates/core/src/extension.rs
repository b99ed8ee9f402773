//! One-dimensional extensions of a q-matroid.
//!
//! A q-matroid M on U^(n) extends to N on U^(n+1) through a modular cut
//! selector: one modular cut of M for each point of U^(n+1) outside U^(n).
//! Writing Z = Y + e with Y ≤ U^(n) and e a new point,
//! r_N(Z) = r_M(Y) + [cl_M(Y) ∉ μ(e)].

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::ambient::{AmbientSpace, Index};
use crate::error::{input, Error, Result};
use crate::qmatroid::{FlatFamily, QMatroid};
use crate::subspace::Subspace;

/// Default bound on the number of flats for which modular cuts are listed.
pub const DEFAULT_FLAT_LIMIT: usize = 2048;

/// A set of flats, as a bit vector over the owner's sorted flat list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModularCut {
    members: FixedBitSet,
}

impl ModularCut {
    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.members.contains(flat)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Membership bits, first flat first.
    pub fn key(&self) -> Vec<bool> {
        (0..self.members.len()).map(|i| self.members.contains(i)).collect()
    }
}

/// Minimal flats of a cut; their upward closure is the cut.
pub fn minimal_members(flats: &FlatFamily, cut: &ModularCut) -> Vec<Subspace> {
    minimal_positions(flats, cut).into_iter().map(|i| flats.ambient().subspace(flats.indices()[i])).collect()
}

fn minimal_positions(flats: &FlatFamily, cut: &ModularCut) -> Vec<usize> {
    cut.members.ones().filter(|&i| !cut.members.ones().any(|j| j != i && flats.le(j, i))).collect()
}

/// Checks upward closure and closure under meets of modular pairs.
pub fn is_modular_cut(m: &QMatroid, flatset: &[Subspace]) -> Result<bool> {
    let flats = m.flats();
    let mut members = FixedBitSet::with_capacity(flats.len());
    for s in flatset {
        match flats.position_of(s) {
            Some(i) => members.insert(i),
            None => return input(format!("{s} is not a flat")),
        }
    }
    Ok(cut_is_valid(m, &flats, &members))
}

fn cut_is_valid(m: &QMatroid, flats: &FlatFamily, members: &FixedBitSet) -> bool {
    let amb = m.ambient();
    for i in members.ones() {
        if !flats.above(i).is_subset(members) {
            return false;
        }
    }
    let idx = flats.indices();
    for a in members.ones() {
        for b in members.ones().filter(|&b| b > a) {
            if m.is_modular_pair_idx(idx[a], idx[b]) {
                let meet = flats.position(amb.intersect(idx[a], idx[b])).expect("flats are closed under meets");
                if !members.contains(meet) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn modular_cuts(m: &QMatroid) -> Result<Vec<ModularCut>> {
    modular_cuts_with_limit(m, &m.flats(), DEFAULT_FLAT_LIMIT)
}

/// All modular cuts, sorted by membership bits (first flat most significant).
///
/// Flats are decided from the top down. A flat is forced out when one of its
/// upper covers is out, and forced in when it is the meet of a modular pair
/// of members.
pub fn modular_cuts_with_limit(m: &QMatroid, flats: &FlatFamily, limit: usize) -> Result<Vec<ModularCut>> {
    let f = flats.len();
    if f > limit {
        return Err(Error::TooLarge(format!("{f} flats exceed the modular cut limit of {limit}")));
    }
    let amb = m.ambient();
    let idx = flats.indices();
    // pairs_by_meet[c]: incomparable modular pairs whose meet is flat c
    let mut pairs_by_meet: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f];
    for a in 0..f {
        for b in a + 1..f {
            if flats.le(a, b) || flats.le(b, a) || !m.is_modular_pair_idx(idx[a], idx[b]) {
                continue;
            }
            let c = flats.position(amb.intersect(idx[a], idx[b])).expect("flats are closed under meets");
            pairs_by_meet[c].push((a, b));
        }
    }
    let mut out = Vec::new();
    let mut inside = FixedBitSet::with_capacity(f);
    cut_dfs(flats, &pairs_by_meet, f, &mut inside, &mut out);
    out.sort_by_cached_key(|c: &ModularCut| c.key());
    Ok(out)
}

fn cut_dfs(
    flats: &FlatFamily,
    pairs: &[Vec<(usize, usize)>],
    remaining: usize,
    inside: &mut FixedBitSet,
    out: &mut Vec<ModularCut>,
) {
    if remaining == 0 {
        out.push(ModularCut { members: inside.clone() });
        return;
    }
    let i = remaining - 1;
    let must_out = flats.upper_covers(i).iter().any(|&c| !inside.contains(c));
    let must_in = pairs[i].iter().any(|&(a, b)| inside.contains(a) && inside.contains(b));
    if must_out && must_in {
        return;
    }
    if !must_in {
        cut_dfs(flats, pairs, i, inside, out);
    }
    if !must_out {
        inside.insert(i);
        cut_dfs(flats, pairs, i, inside, out);
        inside.set(i, false);
    }
}

/// A modular cut selector: `values[j]` is the index (into the owner's cut
/// list) of the cut assigned to the j-th new point.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Selector {
    pub values: Vec<usize>,
}

impl Selector {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in self.values.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{j}={v}")?;
        }
        Ok(())
    }
}

/// Everything needed to list and apply the selectors of one q-matroid.
pub struct Extender {
    m: QMatroid,
    flats: FlatFamily,
    cuts: Vec<ModularCut>,
    big: Arc<AmbientSpace>,
    new_points: Range<usize>,
    /// same[pair(i, j)]: flats F with F + e_i = F + e_j.
    same: Vec<FixedBitSet>,
    /// Words per cut-index mask.
    cut_words: usize,
    /// compat[(pair(i, j) * cuts + d) * cut_words ..]: cuts c at e_i that
    /// satisfy (QM) against cut d at e_j, for j < i.
    compat: Vec<u64>,
    /// tails[k]: for each k-subspace Z of U^(n+1) outside U^(n), in order,
    /// the split Z = Y + e_j into Y ≤ U^(n) (index in the parent) and j.
    tails: Vec<Vec<Tail>>,
}

#[derive(Clone, Copy)]
struct Tail {
    y: Index,
    point: u32,
}

impl Extender {
    pub fn new(m: &QMatroid) -> Result<Self> {
        Self::with_flat_limit(m, DEFAULT_FLAT_LIMIT)
    }

    pub fn with_flat_limit(m: &QMatroid, limit: usize) -> Result<Self> {
        let small = m.ambient();
        let flats = m.flats();
        let cuts = modular_cuts_with_limit(m, &flats, limit)?;
        let big = AmbientSpace::shared(m.q(), m.n() + 1)?;
        let new_points = big.new_point_range();
        let joins: Vec<Vec<Index>> = new_points
            .clone()
            .map(|p| flats.indices().iter().map(|&f| big.join_point(small.embed_into(&big, f), p)).collect())
            .collect();
        let np = new_points.len();
        let mut same = Vec::with_capacity(np * (np.saturating_sub(1)) / 2);
        for i in 0..np {
            for j in 0..i {
                let mut s = FixedBitSet::with_capacity(flats.len());
                for f in 0..flats.len() {
                    s.set(f, joins[i][f] == joins[j][f]);
                }
                same.push(s);
            }
        }
        let n = m.n();
        let tails = (0..=n + 1)
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                big.grassmannian_range(k)
                    .skip(small.grassmannian_range(k.min(n)).len() * (k <= n) as usize)
                    .map(|z| {
                        let rows = big.packed_rows(z as Index);
                        let y = big.index_of_span(&rows[..k - 1]);
                        let y = shrink(&big, small, y);
                        let p = big.point_of_vector(rows[k - 1]).expect("nonzero row");
                        Tail { y, point: (p - new_points.start) as u32 }
                    })
                    .collect()
            })
            .collect();
        let mut ext =
            Extender { m: m.clone(), flats, cuts, big, new_points, same, cut_words: 0, compat: Vec::new(), tails };
        ext.build_compat();
        Ok(ext)
    }

    pub fn matroid(&self) -> &QMatroid {
        &self.m
    }

    pub fn flats(&self) -> &FlatFamily {
        &self.flats
    }

    pub fn cuts(&self) -> &[ModularCut] {
        &self.cuts
    }

    pub fn big_ambient(&self) -> &Arc<AmbientSpace> {
        &self.big
    }

    /// Points of U^(n+1) outside U^(n), in order.
    pub fn new_points(&self) -> Vec<Subspace> {
        self.new_points.clone().map(|p| self.big.subspace(self.big.point_index(p))).collect()
    }

    pub fn num_new_points(&self) -> usize {
        self.new_points.len()
    }

    pub fn trivial_selector(&self) -> Selector {
        Selector { values: vec![0; self.num_new_points()] }
    }

    #[inline]
    fn same(&self, i: usize, j: usize) -> &FixedBitSet {
        debug_assert!(j < i);
        &self.same[i * (i - 1) / 2 + j]
    }

    /// (QM) between the cut `c` at new point i and cut `d` at new point j < i:
    /// for F in c ∪ d, F + e_i = F + e_j iff F lies in both.
    fn compatible(&self, i: usize, c: usize, j: usize, d: usize) -> bool {
        let a = &self.cuts[c].members;
        let b = &self.cuts[d].members;
        let s = self.same(i, j);
        a.ones().all(|f| s.contains(f) == b.contains(f)) && b.ones().all(|f| s.contains(f) == a.contains(f))
    }

    fn build_compat(&mut self) {
        let nc = self.cuts.len();
        let cw = nc.div_ceil(64).max(1);
        let fw = self.flats.len().div_ceil(64).max(1);
        let words = |b: &FixedBitSet| -> Vec<u64> {
            let mut w = vec![0u64; fw];
            for f in b.ones() {
                w[f / 64] |= 1 << (f % 64);
            }
            w
        };
        let cut_w: Vec<Vec<u64>> = self.cuts.iter().map(|c| words(&c.members)).collect();
        let pairs = self.same.len();
        let mut compat = vec![0u64; pairs * nc * cw];
        for (pair, s) in self.same.iter().enumerate() {
            let s = words(s);
            for d in 0..nc {
                let b = &cut_w[d];
                let out = &mut compat[(pair * nc + d) * cw..(pair * nc + d + 1) * cw];
                for (c, a) in cut_w.iter().enumerate() {
                    // for F in a ∪ b: F + e_i = F + e_j iff F ∈ a ∩ b
                    let ok = (0..fw).all(|w| (a[w] | b[w]) & s[w] == a[w] & b[w]);
                    if ok {
                        out[c / 64] |= 1 << (c % 64);
                    }
                }
            }
        }
        self.cut_words = cw;
        self.compat = compat;
    }

    #[inline]
    fn compat_mask(&self, i: usize, j: usize, d: usize) -> &[u64] {
        let cw = self.cut_words;
        let at = ((i * (i - 1) / 2 + j) * self.cuts.len() + d) * cw;
        &self.compat[at..at + cw]
    }

    /// Mask of all non-empty cuts.
    pub(crate) fn nontrivial_mask(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.cut_words];
        for c in 1..self.cuts.len() {
            m[c / 64] |= 1 << (c % 64);
        }
        m
    }

    /// Direct check of (QM) for an arbitrary assignment of cut indices.
    pub fn is_selector(&self, values: &[usize]) -> bool {
        values.len() == self.num_new_points()
            && values.iter().all(|&v| v < self.cuts.len())
            && (0..values.len()).all(|i| (0..i).all(|j| self.compatible(i, values[i], j, values[j])))
    }

    /// Lazy depth-first enumeration: the trivial selector, then the
    /// non-trivial ones in lexicographic order of their values.
    pub fn selectors(&self) -> SelectorIter<'_> {
        let mut it = SelectorIter::new(self, &self.nontrivial_mask(), None);
        it.emit_trivial = true;
        it
    }

    /// Non-trivial selectors with a fixed cut at the first new point.
    pub fn selectors_starting_with(&self, first: usize) -> SelectorIter<'_> {
        SelectorIter::new(self, &self.nontrivial_mask(), Some(first))
    }

    /// All selectors, computed in parallel over the value at the first new
    /// point. Same order as `selectors()`.
    pub fn all_selectors(&self) -> Vec<Selector> {
        let mut out = vec![self.trivial_selector()];
        let parts: Vec<Vec<Selector>> =
            (1..self.cuts.len()).into_par_iter().map(|c| self.selectors_starting_with(c).collect()).collect();
        out.extend(parts.into_iter().flatten());
        out
    }

    fn check_values(&self, sel: &Selector) -> Result<()> {
        if !self.is_selector(&sel.values) {
            return input(format!("`{sel}` is not a modular cut selector of this q-matroid"));
        }
        Ok(())
    }

    /// The extension N on U^(n+1); validated in debug builds.
    pub fn extend(&self, sel: &Selector) -> Result<QMatroid> {
        self.check_values(sel)?;
        let n = self.extend_unchecked(sel);
        if cfg!(debug_assertions) {
            n.validate()?;
        }
        Ok(n)
    }

    pub(crate) fn extend_unchecked(&self, sel: &Selector) -> QMatroid {
        let big = &self.big;
        let small = self.m.ambient();
        let cl = |y: Index| self.flats.position(self.m.closure_idx(y)).expect("closures are flats");
        let mut ranks = Vec::with_capacity(big.len());
        for k in 0..=big.n() {
            let inside = if k <= small.n() { small.grassmannian_range(k) } else { 0..0 };
            ranks.extend(inside.map(|x| self.m.rank_idx(x as Index)));
            if k > 0 {
                for t in &self.tails[k] {
                    let cut = &self.cuts[sel.values[t.point as usize]];
                    ranks.push(self.m.rank_idx(t.y) + !cut.contains(cl(t.y)) as u8);
                }
            }
        }
        QMatroid::from_ranks_unchecked(big.clone(), ranks)
    }

    /// Encoding bits of the extension by a non-trivial selector (same rank as
    /// the parent), computed without building the rank table.
    pub(crate) fn nontrivial_extension_bits(&self, sel: &Selector, closure_pos: &[u32]) -> Vec<bool> {
        let k = self.m.rank();
        let small = self.m.ambient();
        let mut bits: Vec<bool> =
            small.grassmannian_range(k).map(|x| self.m.rank_idx(x as Index) as usize == k).collect();
        bits.extend(self.tails[k].iter().map(|t| {
            self.m.rank_idx(t.y) as usize == k - 1
                && !self.cuts[sel.values[t.point as usize]].contains(closure_pos[t.y as usize] as usize)
        }));
        bits
    }

    /// Flat position of cl(X) for every subspace X of the parent.
    pub(crate) fn closure_positions(&self) -> Vec<u32> {
        self.m.closure_table().into_iter().map(|c| self.flats.position(c).expect("closures are flats") as u32).collect()
    }

    /// Index of the cut with exactly these members.
    pub fn cut_index(&self, members: &FixedBitSet) -> Option<usize> {
        self.cuts.iter().position(|c| &c.members == members)
    }
}

/// Global index in `small` of a subspace of `big` lying inside U^(small.n).
fn shrink(big: &AmbientSpace, small: &AmbientSpace, y: Index) -> Index {
    let d = big.dim_of(y);
    (small.offset(d) + (y as usize - big.offset(d))) as Index
}

/// Depth-first selector enumeration over the new points with forward
/// checking: each assignment narrows the candidate masks of all later points.
pub struct SelectorIter<'a> {
    ext: &'a Extender,
    np: usize,
    cw: usize,
    values: Vec<usize>,
    /// Level d holds candidate masks for points d..np given values[..d].
    masks: Vec<u64>,
    /// Next candidate per level; its length is the current depth + 1.
    next: Vec<usize>,
    emit_trivial: bool,
}

impl<'a> SelectorIter<'a> {
    fn new(ext: &'a Extender, allowed: &[u64], first: Option<usize>) -> Self {
        let np = ext.num_new_points();
        let cw = ext.cut_words;
        let mut masks = vec![0u64; (np + 1) * np * cw];
        for i in 0..np {
            masks[i * cw..(i + 1) * cw].copy_from_slice(allowed);
        }
        if let Some(f) = first {
            let keep = f < ext.cuts.len() && allowed[f / 64] >> (f % 64) & 1 == 1;
            for w in masks[..cw].iter_mut() {
                *w = 0;
            }
            if keep && np > 0 {
                masks[f / 64] = 1 << (f % 64);
            }
        }
        SelectorIter {
            ext,
            np,
            cw,
            values: Vec::with_capacity(np),
            masks,
            next: if np == 0 { Vec::new() } else { vec![0] },
            emit_trivial: false,
        }
    }

    fn advance(&mut self) -> Option<Selector> {
        let (np, cw) = (self.np, self.cw);
        let level = np * cw;
        while let Some(&start) = self.next.last() {
            let d = self.next.len() - 1;
            let base = d * level;
            let Some(c) = next_bit(&self.masks[base + d * cw..base + (d + 1) * cw], start) else {
                self.next.pop();
                continue;
            };
            *self.next.last_mut().unwrap() = c + 1;
            self.values.truncate(d);
            self.values.push(c);
            if d + 1 == np {
                return Some(Selector { values: self.values.clone() });
            }
            let (cur, child) = self.masks.split_at_mut(base + level);
            let cur = &cur[base..];
            let child = &mut child[..level];
            let mut dead = false;
            for i in d + 1..np {
                let m = self.ext.compat_mask(i, d, c);
                let mut any = 0;
                for w in 0..cw {
                    let v = cur[i * cw + w] & m[w];
                    child[i * cw + w] = v;
                    any |= v;
                }
                if any == 0 {
                    dead = true;
                    break;
                }
            }
            if !dead {
                self.next.push(0);
            }
        }
        None
    }
}

fn next_bit(mask: &[u64], start: usize) -> Option<usize> {
    let mut w = start / 64;
    if w >= mask.len() {
        return None;
    }
    let mut cur = mask[w] & (u64::MAX << (start % 64));
    loop {
        if cur != 0 {
            return Some(w * 64 + cur.trailing_zeros() as usize);
        }
        w += 1;
        if w >= mask.len() {
            return None;
        }
        cur = mask[w];
    }
}

impl Iterator for SelectorIter<'_> {
    type Item = Selector;

    fn next(&mut self) -> Option<Selector> {
        if self.emit_trivial {
            self.emit_trivial = false;
            return Some(self.ext.trivial_selector());
        }
        self.advance()
    }
}

/// The restriction M = N|U^(n) together with the selector that rebuilds N.
pub fn selector_of(n: &QMatroid) -> Result<(Extender, Selector)> {
    if n.n() == 0 {
        return input("selector_of needs an ambient space of dimension at least 1");
    }
    let m = n.restrict_to_prefix(n.n() - 1)?;
    let ext = Extender::new(&m)?;
    let small = m.ambient();
    let big = n.ambient();
    let mut values = Vec::with_capacity(ext.num_new_points());
    for p in ext.new_points.clone() {
        let mut members = FixedBitSet::with_capacity(ext.flats.len());
        for (i, &f) in ext.flats.indices().iter().enumerate() {
            let fb = small.embed_into(big, f);
            let fe = big.join_point(fb, p);
            if n.is_flat_idx(fe) && n.rank_idx(fe) == n.rank_idx(fb) {
                members.insert(i);
            }
        }
        match ext.cut_index(&members) {
            Some(c) => values.push(c),
            None => {
                return Err(Error::Axiom {
                    axiom: "modular cut",
                    witness: format!(
                        "flats induced by new point {} form no modular cut",
                        big.subspace(big.point_index(p))
                    ),
                })
            }
        }
    }
    let sel = Selector { values };
    ext.check_values(&sel)?;
    Ok((ext, sel))
}

/// The extension by the all-empty selector.
pub fn trivial_extension(m: &QMatroid) -> Result<QMatroid> {
    let big = AmbientSpace::shared(m.q(), m.n() + 1)?;
    let small = m.ambient();
    // r_N(Y + e) = r_M(Y) + 1 for every new point e
    let ranks = (0..big.len() as Index)
        .map(|z| {
            let rows = big.packed_rows(z);
            match rows.last() {
                Some(&last) if last >= small.num_vectors() as u32 => {
                    let y = big.index_of_span(&rows[..rows.len() - 1]);
                    m.rank_idx(shrink(&big, small, y)) + 1
                }
                _ => m.rank_idx(shrink(&big, small, z)),
            }
        })
        .collect();
    Ok(QMatroid::from_ranks_unchecked(big, ranks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::Encoding;

    fn sub(q: u8, s: &str) -> Subspace {
        Subspace::parse(q, s).unwrap()
    }

    /// All up-sets of the flat order that satisfy (M2), by brute force.
    fn brute_cuts(m: &QMatroid) -> Vec<Vec<bool>> {
        let flats = m.flats();
        let f = flats.len();
        assert!(f <= 16);
        let mut out = Vec::new();
        for mask in 0u32..1 << f {
            let mut s = FixedBitSet::with_capacity(f);
            for i in 0..f {
                s.set(i, mask >> i & 1 == 1);
            }
            if cut_is_valid(m, &flats, &s) {
                out.push((0..f).map(|i| s.contains(i)).collect());
            }
        }
        out.sort();
        out
    }

    fn example() -> QMatroid {
        QMatroid::uniform(1, 2, 2).unwrap()
    }

    #[test]
    fn restricted_u13_cuts() {
        let m = example();
        let cuts = modular_cuts(&m).unwrap();
        let flats = m.flats();
        let shown: Vec<Vec<String>> =
            cuts.iter().map(|c| minimal_members(&flats, c).iter().map(|s| s.to_string()).collect()).collect();
        assert_eq!(shown, vec![vec![], vec!["10;01".to_string()], vec!["00".to_string()]]);
        assert_eq!(cuts.iter().map(|c| c.len()).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn cut_counts() {
        assert_eq!(modular_cuts(&QMatroid::uniform(0, 2, 2).unwrap()).unwrap().len(), 2);
        assert_eq!(modular_cuts(&QMatroid::free(2, 2).unwrap()).unwrap().len(), 6);
    }

    #[test]
    fn cuts_match_brute_force() {
        let mut ms = vec![QMatroid::free(2, 2).unwrap(), QMatroid::uniform(1, 3, 2).unwrap()];
        for code in 1u32..128 {
            let bits = (0..7).map(|i| code >> i & 1 == 1).collect();
            if let Ok(m) = QMatroid::decode(&Encoding::new(2, 3, 2, bits).unwrap()) {
                ms.push(m);
            }
        }
        ms.push(QMatroid::decode(&Encoding::from_bitstring(2, 3, 1, "0001111").unwrap()).unwrap());
        for m in ms {
            let got: Vec<Vec<bool>> = modular_cuts(&m).unwrap().iter().map(|c| c.key()).collect();
            assert_eq!(got, brute_cuts(&m), "{m:?}");
        }
    }

    #[test]
    fn is_modular_cut_examples() {
        let m = example();
        for set in [vec![], vec![Subspace::full(2, 2)], vec![Subspace::zero(2, 2), Subspace::full(2, 2)]] {
            assert!(is_modular_cut(&m, &set).unwrap());
        }
        let free = QMatroid::free(2, 2).unwrap();
        assert!(!is_modular_cut(&free, &[sub(2, "10"), sub(2, "01"), Subspace::full(2, 2)]).unwrap());
        let all = free.flats().subspaces();
        assert!(is_modular_cut(&free, &all).unwrap());
        assert!(is_modular_cut(&m, &[sub(2, "10")]).is_err());
    }

    #[test]
    fn minimal_members_examples() {
        let m = example();
        let flats = m.flats();
        let cuts = modular_cuts(&m).unwrap();
        assert!(minimal_members(&flats, &cuts[0]).is_empty());
        assert_eq!(minimal_members(&flats, &cuts[1]), vec![Subspace::full(2, 2)]);
        assert_eq!(minimal_members(&flats, &cuts[2]), vec![Subspace::zero(2, 2)]);
    }

    #[test]
    fn restricted_u13_selectors() {
        let ext = Extender::new(&example()).unwrap();
        assert_eq!(ext.num_new_points(), 4);
        let sels: Vec<Selector> = ext.selectors().collect();
        let mut brute = Vec::new();
        for code in 0..81usize {
            let v: Vec<usize> = (0..4).map(|i| code / 3usize.pow(i) % 3).collect();
            if ext.is_selector(&v) {
                brute.push(Selector { values: v });
            }
        }
        brute.sort();
        assert_eq!(sels, brute);
        assert_eq!(sels.len(), 6);
        assert!(sels.contains(&Selector { values: vec![1; 4] }));
        assert_eq!(ext.all_selectors(), sels);
        for s in &sels {
            if !s.is_trivial() {
                assert!(s.values.iter().all(|&v| v != 0));
            }
        }
    }

    #[test]
    fn constant_e_selector_gives_u13() {
        let ext = Extender::new(&example()).unwrap();
        let n = ext.extend(&Selector { values: vec![1; 4] }).unwrap();
        assert_eq!(n, QMatroid::uniform(1, 3, 2).unwrap());
        let (back, sel) = selector_of(&n).unwrap();
        assert_eq!(back.matroid(), &example());
        assert_eq!(sel.values, vec![1; 4]);
    }

    #[test]
    fn trivial_extensions() {
        for (k, n, q) in [(0, 2, 2), (1, 3, 2), (2, 3, 2), (3, 3, 2), (1, 2, 3)] {
            let u = QMatroid::uniform(k, n, q).unwrap();
            let t = trivial_extension(&u).unwrap();
            t.validate().unwrap();
            assert_eq!(t.rank(), k + 1);
            assert_eq!(t.restrict_to_prefix(n).unwrap(), u);
            // uniform only when nothing inside U^(n) could reach rank k + 1
            assert_eq!(t == QMatroid::uniform(k + 1, n + 1, q).unwrap(), k == n);
            // the encoding is zeros on U^(n), then enc(M) on Y + e_(n+1)
            let bits = t.basis_bits();
            let head = crate::ambient::gaussian_binomial(n, k + 1, q as u64) as usize;
            assert!(bits[..head].iter().all(|&b| !b));
            assert_eq!(&bits[head..head + u.basis_bits().len()], &u.basis_bits()[..]);
        }
    }

    #[test]
    fn extension_roundtrips() {
        let mut ms = vec![example(), QMatroid::uniform(1, 2, 3).unwrap()];
        ms.push(QMatroid::decode(&Encoding::from_bitstring(2, 3, 2, "0111111").unwrap()).unwrap());
        for m in ms {
            let ext = Extender::new(&m).unwrap();
            let clp = ext.closure_positions();
            for sel in ext.selectors() {
                let n = ext.extend(&sel).unwrap();
                assert_eq!(n.restrict_to_prefix(m.n()).unwrap(), m);
                let (_, back) = selector_of(&n).unwrap();
                assert_eq!(back, sel);
                if sel.is_trivial() {
                    assert_eq!(n, trivial_extension(&m).unwrap());
                    assert_eq!(n.rank(), m.rank() + 1);
                } else {
                    assert_eq!(n.rank(), m.rank());
                    assert_eq!(ext.nontrivial_extension_bits(&sel, &clp), n.basis_bits());
                }
            }
        }
    }

    #[test]
    fn rejects_non_selectors() {
        let ext = Extender::new(&example()).unwrap();
        assert!(ext.extend(&Selector { values: vec![2, 2, 2, 2] }).is_err());
        assert!(ext.extend(&Selector { values: vec![1, 1] }).is_err());
        assert!(ext.extend(&Selector { values: vec![0, 1, 1, 1] }).is_err());
    }

    #[test]
    fn flat_limit() {
        let free = QMatroid::free(3, 2).unwrap();
        assert!(matches!(Extender::with_flat_limit(&free, 4), Err(Error::TooLarge(_))));
    }
}
