//! q-matroids as dense rank tables over the indexed subspace lattice.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::ambient::{AmbientSpace, Index};
use crate::encoding::Encoding;
use crate::error::{input, Error, Result};
use crate::subspace::Subspace;

/// A q-matroid on F_q^n. The rank table is indexed by global subspace index
/// and always satisfies the rank axioms (R1)-(R3).
#[derive(Clone)]
pub struct QMatroid {
    amb: Arc<AmbientSpace>,
    ranks: Vec<u8>,
}

impl PartialEq for QMatroid {
    fn eq(&self, other: &Self) -> bool {
        self.amb.q() == other.amb.q() && self.amb.n() == other.amb.n() && self.ranks == other.ranks
    }
}

impl Eq for QMatroid {}

impl fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatroid(q={}, n={}, k={}, enc={})", self.q(), self.n(), self.rank(), self.encode())
    }
}

impl QMatroid {
    /// Validate a full rank table (indexed by global subspace index).
    pub fn from_rank_table(q: u8, n: usize, table: Vec<u8>) -> Result<Self> {
        let amb = AmbientSpace::shared(q, n)?;
        if table.len() != amb.len() {
            return input(format!("rank table has {} entries, expected {}", table.len(), amb.len()));
        }
        let m = QMatroid { amb, ranks: table };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_ranks_unchecked(amb: Arc<AmbientSpace>, ranks: Vec<u8>) -> Self {
        debug_assert_eq!(ranks.len(), amb.len());
        QMatroid { amb, ranks }
    }

    /// The uniform q-matroid U_{k,n}: r(X) = min(dim X, k).
    pub fn uniform(k: usize, n: usize, q: u8) -> Result<Self> {
        if k > n {
            return input(format!("U_{{{k},{n}}} needs k <= n"));
        }
        let amb = AmbientSpace::shared(q, n)?;
        let ranks = (0..amb.len() as Index).map(|x| amb.dim_of(x).min(k) as u8).collect();
        Ok(QMatroid { amb, ranks })
    }

    /// r(X) = dim X.
    pub fn free(n: usize, q: u8) -> Result<Self> {
        Self::uniform(n, n, q)
    }

    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.amb
    }

    pub fn q(&self) -> u8 {
        self.amb.q()
    }

    pub fn n(&self) -> usize {
        self.amb.n()
    }

    /// r(E).
    pub fn rank(&self) -> usize {
        self.ranks[self.amb.full_index() as usize] as usize
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.ranks
    }

    #[inline]
    pub fn rank_idx(&self, x: Index) -> u8 {
        self.ranks[x as usize]
    }

    pub fn rank_of(&self, x: &Subspace) -> Result<usize> {
        Ok(self.ranks[self.amb.index_of(x)? as usize] as usize)
    }

    /// Check (R1)-(R3), reporting the first violation found.
    pub fn validate(&self) -> Result<()> {
        validate_ranks(&self.amb, &self.ranks)
    }

    /// cl(X) as a global index.
    pub fn closure_idx(&self, x: Index) -> Index {
        let r = self.ranks[x as usize];
        let mut acc = x;
        for p in 0..self.amb.num_points() {
            if self.ranks[self.amb.join_point(x, p) as usize] == r {
                acc = self.amb.join_point(acc, p);
            }
        }
        acc
    }

    /// Sum of all points whose addition does not raise the rank of X.
    pub fn closure(&self, x: &Subspace) -> Result<Subspace> {
        Ok(self.amb.subspace(self.closure_idx(self.amb.index_of(x)?)))
    }

    /// Closure of every subspace, by global index.
    pub fn closure_table(&self) -> Vec<Index> {
        (0..self.amb.len() as Index).map(|x| self.closure_idx(x)).collect()
    }

    pub fn is_flat_idx(&self, x: Index) -> bool {
        let r = self.ranks[x as usize];
        (0..self.amb.num_points())
            .all(|p| self.amb.has_point(x, p) || self.ranks[self.amb.join_point(x, p) as usize] > r)
    }

    pub fn flats(&self) -> FlatFamily {
        let idx = (0..self.amb.len() as Index).filter(|&x| self.is_flat_idx(x)).collect();
        FlatFamily::new(self.amb.clone(), idx)
    }

    /// Basis indicator over the r(E)-dimensional subspaces, in order.
    pub fn basis_bits(&self) -> Vec<bool> {
        let k = self.rank();
        self.amb.grassmannian_range(k).map(|x| self.ranks[x] as usize == k).collect()
    }

    pub fn bases(&self) -> Vec<Subspace> {
        let k = self.rank();
        self.amb
            .grassmannian_range(k)
            .filter(|&x| self.ranks[x] as usize == k)
            .map(|x| self.amb.subspace(x as Index))
            .collect()
    }

    pub fn encode(&self) -> Encoding {
        Encoding::from_parts(self.q(), self.n(), self.rank(), self.basis_bits())
    }

    /// Rebuild from a basis encoding via r(X) = max over bases B of dim(X ∩ B),
    /// then validate.
    pub fn decode(enc: &Encoding) -> Result<Self> {
        let amb = AmbientSpace::shared(enc.q(), enc.n())?;
        let start = amb.offset(enc.k());
        let bases: Vec<Index> =
            enc.bits().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (start + i) as Index).collect();
        if bases.is_empty() {
            return input("encoding marks no basis");
        }
        let ranks = (0..amb.len() as Index)
            .map(|x| bases.iter().map(|&b| amb.dim_of(amb.intersect(x, b))).max().unwrap() as u8)
            .collect();
        let m = QMatroid { amb, ranks };
        m.validate()?;
        if m.rank() != enc.k() || m.basis_bits() != enc.bits() {
            return Err(Error::Axiom {
                axiom: "bases",
                witness: "the marked subspaces are not the bases of any q-matroid".into(),
            });
        }
        Ok(m)
    }

    /// Restriction to a subspace E', expressed on F_q^{dim E'} through the
    /// coordinates of the reverse-canonical basis of E'.
    pub fn restriction(&self, sub: &Subspace) -> Result<QMatroid> {
        let sub_idx = self.amb.index_of(sub)?;
        let basis = self.amb.packed_rows(sub_idx).to_vec();
        let d = basis.len();
        let small = AmbientSpace::shared(self.q(), d)?;
        let ranks = (0..small.len() as Index)
            .map(|y| {
                let images: Vec<u32> =
                    small.packed_rows(y).iter().map(|&v| self.map_coords(&small, v, &basis)).collect();
                self.ranks[self.amb.index_of_span(&images) as usize]
            })
            .collect();
        Ok(QMatroid { amb: small, ranks })
    }

    fn map_coords(&self, small: &AmbientSpace, v: u32, basis: &[u32]) -> u32 {
        small.unpack(v).iter().zip(basis).fold(0, |acc, (&c, &b)| self.amb.add_vec(acc, self.amb.scale_vec(b, c)))
    }

    /// Restriction to the coordinate subspace U^(m).
    pub fn restrict_to_prefix(&self, m: usize) -> Result<QMatroid> {
        self.restriction(&Subspace::coordinate(self.q(), self.n(), m))
    }

    /// r*(X) = dim X - r(E) + r(X⊥).
    pub fn dual(&self) -> QMatroid {
        let k = self.rank() as i32;
        let ranks = (0..self.amb.len() as Index)
            .map(|x| (self.amb.dim_of(x) as i32 - k + self.ranks[self.amb.perp(x) as usize] as i32) as u8)
            .collect();
        QMatroid { amb: self.amb.clone(), ranks }
    }

    /// The unique q-matroid whose flats are `family`. Rank of X is the height
    /// of the smallest member containing X.
    pub fn from_flats(q: u8, n: usize, family: &[Subspace]) -> Result<QMatroid> {
        let amb = AmbientSpace::shared(q, n)?;
        let idx = family.iter().map(|s| amb.index_of(s)).collect::<Result<Vec<_>>>()?;
        let fam = FlatFamily::new(amb.clone(), idx);
        if fam.len() != family.len() {
            return input("flat family contains duplicates");
        }
        fam.verify()?;
        let heights = fam.heights();
        let ranks = (0..amb.len() as Index)
            .map(|x| {
                let i = fam.flats.iter().position(|&f| amb.contains(f, x)).expect("E is a member");
                heights[i] as u8
            })
            .collect();
        let m = QMatroid { amb, ranks };
        m.validate()?;
        if m.flats().flats != fam.flats {
            return Err(Error::FlatAxiom {
                axiom: "cryptomorphism",
                witness: "rebuilt q-matroid has a different flat family".into(),
            });
        }
        Ok(m)
    }

    /// r(F1 + F2) + r(F1 ∩ F2) = r(F1) + r(F2), for flats F1, F2.
    pub fn is_modular_pair(&self, f1: &Subspace, f2: &Subspace) -> Result<bool> {
        let a = self.amb.index_of(f1)?;
        let b = self.amb.index_of(f2)?;
        for (x, s) in [(a, f1), (b, f2)] {
            if !self.is_flat_idx(x) {
                return input(format!("{s} is not a flat"));
            }
        }
        Ok(self.is_modular_pair_idx(a, b))
    }

    pub(crate) fn is_modular_pair_idx(&self, a: Index, b: Index) -> bool {
        let r = |x: Index| self.ranks[x as usize] as u32;
        r(self.amb.sum(a, b)) + r(self.amb.intersect(a, b)) == r(a) + r(b)
    }

    /// The `qmatroid v1` text form.
    pub fn to_file_string(&self) -> String {
        self.encode().to_file_string()
    }

    pub fn parse_file(text: &str) -> Result<QMatroid> {
        QMatroid::decode(&Encoding::parse_file(text)?)
    }
}

pub(crate) fn validate_ranks(amb: &AmbientSpace, ranks: &[u8]) -> Result<()> {
    let show = |x: Index| amb.subspace(x).to_string();
    for x in 0..amb.len() as Index {
        if ranks[x as usize] as usize > amb.dim_of(x) {
            return Err(Error::Axiom { axiom: "R1", witness: format!("r({}) = {} > dim", show(x), ranks[x as usize]) });
        }
    }
    for x in 0..amb.len() as Index {
        for p in 0..amb.num_points() {
            let y = amb.join_point(x, p);
            if ranks[y as usize] < ranks[x as usize] {
                return Err(Error::Axiom {
                    axiom: "R2",
                    witness: format!("{} <= {} but rank drops", show(x), show(y)),
                });
            }
        }
    }
    for x in 0..amb.len() as Index {
        for y in x + 1..amb.len() as Index {
            let s = amb.sum(x, y);
            if s == x || s == y {
                continue;
            }
            let i = amb.intersect(x, y);
            let lhs = ranks[s as usize] as u32 + ranks[i as usize] as u32;
            if lhs > ranks[x as usize] as u32 + ranks[y as usize] as u32 {
                return Err(Error::Axiom { axiom: "R3", witness: format!("X = {}, Y = {}", show(x), show(y)) });
            }
        }
    }
    Ok(())
}

/// A family of subspaces sorted in the subspace order, with its containment
/// order precomputed. For `QMatroid::flats` this is the flat lattice.
#[derive(Clone, Debug)]
pub struct FlatFamily {
    amb: Arc<AmbientSpace>,
    flats: Vec<Index>,
    pos: Vec<u32>,
    /// `above[i]`: members containing member i (including i).
    above: Vec<FixedBitSet>,
    upper_covers: Vec<Vec<usize>>,
}

impl FlatFamily {
    pub(crate) fn new(amb: Arc<AmbientSpace>, mut flats: Vec<Index>) -> Self {
        flats.sort_unstable();
        flats.dedup();
        let mut pos = vec![u32::MAX; amb.len()];
        for (i, &f) in flats.iter().enumerate() {
            pos[f as usize] = i as u32;
        }
        let m = flats.len();
        let mut above = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            // members containing flat i have index >= i (dimension order)
            for j in i..m {
                if amb.contains(flats[j], flats[i]) {
                    above[i].insert(j);
                }
            }
        }
        let upper_covers = (0..m)
            .map(|i| {
                above[i]
                    .ones()
                    .filter(|&j| j != i)
                    .filter(|&j| !above[i].ones().any(|c| c != i && c != j && above[c].contains(j)))
                    .collect()
            })
            .collect();
        FlatFamily { amb, flats, pos, above, upper_covers }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.amb
    }

    /// Global indices of the members, ascending.
    pub fn indices(&self) -> &[Index] {
        &self.flats
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.flats.iter().map(|&f| self.amb.subspace(f)).collect()
    }

    /// Member position of a global index.
    pub fn position(&self, x: Index) -> Option<usize> {
        let p = self.pos[x as usize];
        (p != u32::MAX).then_some(p as usize)
    }

    pub fn position_of(&self, s: &Subspace) -> Option<usize> {
        self.amb.index_of(s).ok().and_then(|x| self.position(x))
    }

    /// `true` iff member j contains member i.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    pub fn above(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    /// Length of the longest chain from the bottom member to each member.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for i in 0..self.len() {
            for j in 0..i {
                if self.le(j, i) {
                    h[i] = h[i].max(h[j] + 1);
                }
            }
        }
        h
    }

    /// Check (F1) E present, (F2) closed under intersection, and (F3) every
    /// point outside a member lies in exactly one upper cover of it.
    pub fn verify(&self) -> Result<()> {
        let show = |x: Index| self.amb.subspace(x).to_string();
        if self.position(self.amb.full_index()).is_none() {
            return Err(Error::FlatAxiom { axiom: "F1", witness: "E is not a member".into() });
        }
        for (i, &a) in self.flats.iter().enumerate() {
            for &b in &self.flats[i + 1..] {
                let c = self.amb.intersect(a, b);
                if self.position(c).is_none() {
                    return Err(Error::FlatAxiom {
                        axiom: "F2",
                        witness: format!("{} ∩ {} = {} missing", show(a), show(b), show(c)),
                    });
                }
            }
        }
        for (i, &f) in self.flats.iter().enumerate() {
            for p in 0..self.amb.num_points() {
                if self.amb.has_point(f, p) {
                    continue;
                }
                let count = self.upper_covers[i].iter().filter(|&&j| self.amb.has_point(self.flats[j], p)).count();
                if count != 1 {
                    return Err(Error::FlatAxiom {
                        axiom: "F3",
                        witness: format!(
                            "point {} lies in {count} covers of {}",
                            show(self.amb.point_index(p)),
                            show(f)
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}
