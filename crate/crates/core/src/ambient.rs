//! The subspace lattice of F_q^n, fully enumerated and indexed.
//!
//! Every subspace gets a global index `offset(k) + position`, where position
//! is its rank in the ordered Grassmannian of dimension k. Vectors are packed
//! into `u32` as `sum c_j q^j` (coordinate 1 has weight 1), so the coordinate
//! space U^(m) is exactly the packed range `0..q^m`.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{input, Error, Result};
use crate::field::PrimeField;
use crate::subspace::{reverse_canonical, Subspace};

/// Upper bound on the number of subspaces an ambient will enumerate.
pub const MAX_SUBSPACES: usize = 1 << 19;

pub type Index = u32;

#[derive(Debug)]
pub struct AmbientSpace {
    field: PrimeField,
    q: u8,
    n: usize,
    pow: Vec<u32>,
    offsets: Vec<usize>,
    /// Canonical rows (packed) of every subspace, by global index.
    rows: Vec<Box<[u32]>>,
    lookup: HashMap<Box<[u32]>, Index>,
    /// Packed vector -> point position (u32::MAX for the zero vector).
    vec_point: Vec<u32>,
    /// `join[x * points + p]` = index of x + p.
    join: Vec<Index>,
    perp: Vec<Index>,
    /// Point membership bitsets, `words` u64 per subspace.
    point_bits: Vec<u64>,
    words: usize,
}

/// Number of k-dimensional subspaces of F_q^n (saturating at `u64::MAX`).
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    // G(m, j) = G(m-1, j-1) + q^j G(m-1, j)
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let qj = (q as u128).saturating_pow(j as u32);
            let v = (row[j - 1] as u128).saturating_add(qj.saturating_mul(row[j] as u128));
            row[j] = v.min(u64::MAX as u128) as u64;
        }
    }
    row[k]
}

impl AmbientSpace {
    /// Build (or fetch from the process-wide cache) the lattice of F_q^n.
    pub fn shared(q: u8, n: usize) -> Result<Arc<AmbientSpace>> {
        static CACHE: OnceLock<Mutex<HashMap<(u8, usize), Arc<AmbientSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(a) = cache.lock().unwrap().get(&(q, n)) {
            return Ok(a.clone());
        }
        let built = Arc::new(AmbientSpace::new(q, n)?);
        Ok(cache.lock().unwrap().entry((q, n)).or_insert(built).clone())
    }

    pub fn new(q: u8, n: usize) -> Result<Self> {
        let field = PrimeField::new(q as u32)?;
        let total: u64 = (0..=n).fold(0u64, |acc, k| acc.saturating_add(gaussian_binomial(n, k, q as u64)));
        if n > 16 || total > MAX_SUBSPACES as u64 || (q as u64).checked_pow(n as u32).map_or(true, |v| v > 1 << 24) {
            return Err(Error::TooLarge(format!("F_{q}^{n} has {total} subspaces (limit {MAX_SUBSPACES})")));
        }
        let pow: Vec<u32> = (0..=n).map(|j| (q as u32).pow(j as u32)).collect();

        let mut offsets = vec![0usize];
        let mut rows: Vec<Box<[u32]>> = Vec::with_capacity(total as usize);
        for k in 0..=n {
            let mut grass = enumerate_canonical(&field, n, k);
            grass.sort_by(|a, b| order_key(a).cmp(&order_key(b)));
            rows.extend(grass.iter().map(|m| m.iter().map(|r| pack(r, q)).collect::<Box<[u32]>>()));
            offsets.push(rows.len());
        }
        let lookup: HashMap<Box<[u32]>, Index> =
            rows.iter().enumerate().map(|(i, r)| (r.clone(), i as Index)).collect();

        // F_q^0 has no points; keep offsets[2] addressable.
        offsets.resize(offsets.len().max(3), rows.len());
        let points = offsets[2] - offsets[1];
        let nvec = pow[n] as usize;
        let mut vec_point = vec![u32::MAX; nvec];
        for v in 1..nvec {
            let mut c = unpack(v as u32, q, n);
            let t = c[c.iter().rposition(|&x| x != 0).unwrap()];
            let s = field.inv(t);
            for x in c.iter_mut() {
                *x = field.mul(*x, s);
            }
            let key: Box<[u32]> = vec![pack(&c, q)].into();
            vec_point[v] = lookup[&key] - offsets[1] as u32;
        }

        let words = points.div_ceil(64).max(1);
        let mut point_bits = vec![0u64; rows.len() * words];
        for (i, r) in rows.iter().enumerate() {
            // all vectors of the span
            let span = span_vectors(&field, q, n, &pow, r);
            for v in span.into_iter().filter(|&v| v != 0) {
                let p = vec_point[v as usize] as usize;
                point_bits[i * words + p / 64] |= 1 << (p % 64);
            }
        }

        let mut amb = AmbientSpace {
            field,
            q,
            n,
            pow,
            offsets,
            rows,
            lookup,
            vec_point,
            join: Vec::new(),
            perp: Vec::new(),
            point_bits,
            words,
        };

        let mut join = vec![0 as Index; amb.rows.len() * points];
        for x in 0..amb.rows.len() {
            for p in 0..points {
                let pidx = amb.offsets[1] + p;
                join[x * points + p] = if amb.has_point(x as Index, p) {
                    x as Index
                } else {
                    let mut r: Vec<Vec<u8>> = amb.rows[x].iter().map(|&v| unpack(v, q, n)).collect();
                    r.push(unpack(amb.rows[pidx][0], q, n));
                    amb.index_of_rows(reverse_canonical(&amb.field, r))
                };
            }
        }
        amb.join = join;

        let perp = (0..amb.rows.len())
            .map(|x| {
                let c = amb.subspace(x as Index).orthogonal_complement();
                amb.index_of(&c).expect("complement lies in the ambient")
            })
            .collect();
        amb.perp = perp;
        Ok(amb)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Total number of subspaces (all dimensions).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_points(&self) -> usize {
        self.offsets[2] - self.offsets[1]
    }

    pub fn num_vectors(&self) -> usize {
        self.pow[self.n] as usize
    }

    /// q^j for j in 0..=n.
    pub fn pow(&self, j: usize) -> u32 {
        self.pow[j]
    }

    /// Global indices of the k-dimensional subspaces, in order.
    pub fn grassmannian_range(&self, k: usize) -> Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn zero_index(&self) -> Index {
        0
    }

    pub fn full_index(&self) -> Index {
        (self.rows.len() - 1) as Index
    }

    pub fn dim_of(&self, x: Index) -> usize {
        self.offsets.partition_point(|&o| o <= x as usize) - 1
    }

    /// Canonical rows of subspace `x`, packed.
    pub fn packed_rows(&self, x: Index) -> &[u32] {
        &self.rows[x as usize]
    }

    pub fn subspace(&self, x: Index) -> Subspace {
        let rows = self.rows[x as usize].iter().map(|&v| unpack(v, self.q, self.n)).collect();
        Subspace::from_canonical_rows(self.q, self.n, rows)
    }

    pub fn index_of(&self, s: &Subspace) -> Result<Index> {
        if s.q() != self.q || s.ambient_dim() != self.n {
            return input(format!("subspace of F_{}^{} used in F_{}^{}", s.q(), s.ambient_dim(), self.q, self.n));
        }
        let key: Box<[u32]> = s.rows().iter().map(|r| pack(r, self.q)).collect();
        Ok(self.lookup[&key])
    }

    fn index_of_rows(&self, rows: Vec<Vec<u8>>) -> Index {
        let key: Box<[u32]> = rows.iter().map(|r| pack(r, self.q)).collect();
        self.lookup[&key]
    }

    /// Index of the span of arbitrary packed vectors.
    pub fn index_of_span(&self, vecs: &[u32]) -> Index {
        vecs.iter().filter_map(|&v| self.point_of_vector(v)).fold(0, |x, p| self.join_point(x, p))
    }

    /// Point position (0-based within the 1-dimensional Grassmannian) of the
    /// line through a nonzero packed vector.
    #[inline]
    pub fn point_of_vector(&self, v: u32) -> Option<usize> {
        let p = self.vec_point[v as usize];
        (p != u32::MAX).then_some(p as usize)
    }

    #[inline]
    pub fn point_index(&self, p: usize) -> Index {
        (self.offsets[1] + p) as Index
    }

    /// x + p for a point position p.
    #[inline]
    pub fn join_point(&self, x: Index, p: usize) -> Index {
        self.join[x as usize * self.num_points() + p]
    }

    #[inline]
    pub fn has_point(&self, x: Index, p: usize) -> bool {
        self.point_bits[x as usize * self.words + p / 64] >> (p % 64) & 1 == 1
    }

    pub fn point_bitset(&self, x: Index) -> &[u64] {
        &self.point_bits[x as usize * self.words..(x as usize + 1) * self.words]
    }

    /// Points of x, as positions.
    pub fn points_of(&self, x: Index) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_points()).filter(move |&p| self.has_point(x, p))
    }

    pub fn sum(&self, x: Index, y: Index) -> Index {
        self.rows[y as usize]
            .iter()
            .map(|&v| self.vec_point[v as usize] as usize)
            .fold(x, |acc, p| self.join_point(acc, p))
    }

    #[inline]
    pub fn perp(&self, x: Index) -> Index {
        self.perp[x as usize]
    }

    pub fn intersect(&self, x: Index, y: Index) -> Index {
        self.perp(self.sum(self.perp(x), self.perp(y)))
    }

    /// `true` iff y ≤ x.
    pub fn contains(&self, x: Index, y: Index) -> bool {
        self.point_bitset(y).iter().zip(self.point_bitset(x)).all(|(b, a)| b & !a == 0)
    }

    pub fn subset_of(&self, x: Index, y: Index) -> bool {
        self.contains(y, x)
    }

    /// k-subspaces in order.
    pub fn grassmannian(&self, k: usize) -> Result<Vec<Subspace>> {
        if k > self.n {
            return input(format!("k = {k} exceeds n = {}", self.n));
        }
        Ok(self.grassmannian_range(k).map(|i| self.subspace(i as Index)).collect())
    }

    /// Global index of the subspace with the same canonical rows in a larger
    /// ambient. Relies on the prefix property of the order.
    pub fn embed_into(&self, larger: &AmbientSpace, x: Index) -> Index {
        debug_assert!(larger.q == self.q && larger.n >= self.n);
        let k = self.dim_of(x);
        (larger.offsets[k] + (x as usize - self.offsets[k])) as Index
    }

    #[inline]
    pub fn add_vec(&self, a: u32, b: u32) -> u32 {
        if self.q == 2 {
            return a ^ b;
        }
        let q = self.q as u32;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for j in 0..self.n {
            let d = (a % q + b % q) % q;
            out += d * self.pow[j];
            a /= q;
            b /= q;
        }
        out
    }

    #[inline]
    pub fn scale_vec(&self, a: u32, s: u8) -> u32 {
        if self.q == 2 || s == 1 {
            return if s == 0 { 0 } else { a };
        }
        let q = self.q as u32;
        let mut a = a;
        let mut out = 0;
        for j in 0..self.n {
            out += (a % q * s as u32 % q) * self.pow[j];
            a /= q;
        }
        out
    }

    pub fn pack(&self, coords: &[u8]) -> u32 {
        pack(coords, self.q)
    }

    pub fn unpack(&self, v: u32) -> Vec<u8> {
        unpack(v, self.q, self.n)
    }

    /// New points of U^(n) relative to U^(n-1): the last q^(n-1) point positions.
    pub fn new_point_range(&self) -> Range<usize> {
        let before = gaussian_binomial(self.n.saturating_sub(1), 1, self.q as u64) as usize;
        before..self.num_points()
    }
}

pub fn pack(coords: &[u8], q: u8) -> u32 {
    coords.iter().rev().fold(0u32, |acc, &c| acc * q as u32 + c as u32)
}

pub fn unpack(mut v: u32, q: u8, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for c in out.iter_mut() {
        *c = (v % q as u32) as u8;
        v /= q as u32;
    }
    out
}

fn span_vectors(f: &PrimeField, q: u8, n: usize, pow: &[u32], rows: &[u32]) -> Vec<u32> {
    let mut span = vec![0u32];
    for &r in rows {
        let rv = unpack(r, q, n);
        let mut next = Vec::with_capacity(span.len() * q as usize);
        for &s in &span {
            let sv = unpack(s, q, n);
            for a in 0..q {
                let w: u32 = (0..n).map(|j| f.add(sv[j], f.mul(a, rv[j])) as u32 * pow[j]).sum();
                next.push(w);
            }
        }
        span = next;
    }
    span
}

/// Key realizing the subspace order among equal-dimensional canonical matrices.
fn order_key(m: &[Vec<u8>]) -> Vec<u8> {
    m.iter().rev().flat_map(|r| r.iter().rev().copied()).collect()
}

/// All reverse-canonical k×n matrices over F_q (unsorted).
fn enumerate_canonical(f: &PrimeField, n: usize, k: usize) -> Vec<Vec<Vec<u8>>> {
    let q = f.order();
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(n, k, 0, &mut pivots, &mut |piv| {
        // free slots: (row i, column c) with c < piv[i] and c not a pivot
        let slots: Vec<(usize, usize)> =
            (0..k).flat_map(|i| (0..piv[i]).filter(|c| !piv.contains(c)).map(move |c| (i, c))).collect();
        let total = (q as u64).pow(slots.len() as u32);
        for mut code in 0..total {
            let mut m = vec![vec![0u8; n]; k];
            for (i, &p) in piv.iter().enumerate() {
                m[i][p] = 1;
            }
            for &(i, c) in &slots {
                m[i][c] = (code % q as u64) as u8;
                code /= q as u64;
            }
            out.push(m);
        }
    });
    out
}

fn choose_pivots(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for p in start..n {
        cur.push(p);
        choose_pivots(n, k, p + 1, cur, f);
        cur.pop();
    }
}

/// All k-subspaces of F_q^n, sorted ascending.
pub fn grassmannian(n: usize, k: usize, q: u8) -> Result<Vec<Subspace>> {
    if k > n {
        return input(format!("k = {k} exceeds n = {n}"));
    }
    AmbientSpace::shared(q, n)?.grassmannian(k)
}

/// The q^n points of F_q^(n+1) outside U^(n), in order.
pub fn new_points(q: u8, n: usize) -> Result<Vec<Subspace>> {
    let amb = AmbientSpace::shared(q, n + 1)?;
    Ok(amb.new_point_range().map(|p| amb.subspace(amb.point_index(p))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Count k-subspaces by enumerating k-tuples of vectors and deduplicating spans.
    fn brute_count(n: usize, k: usize, q: u8) -> usize {
        let f = PrimeField::new(q as u32).unwrap();
        let nvec = (q as usize).pow(n as u32);
        let mut seen = std::collections::HashSet::new();
        let mut idx = vec![0usize; k];
        loop {
            let rows: Vec<Vec<u8>> = idx.iter().map(|&v| unpack(v as u32, q, n)).collect();
            let c = reverse_canonical(&f, rows);
            if c.len() == k {
                seen.insert(c);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return seen.len().max(usize::from(k == 0));
                }
                idx[i] += 1;
                if idx[i] < nvec {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn gaussian_matches_brute_force() {
        assert_eq!(gaussian_binomial(5, 2, 2), 155);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(7, 0, 3), 1);
        for (n, k, q) in [(5, 2, 2), (3, 2, 2), (4, 2, 2), (3, 1, 3), (4, 2, 3), (4, 0, 2)] {
            assert_eq!(gaussian_binomial(n, k, q as u64) as usize, brute_count(n, k, q), "{n} {k} {q}");
        }
    }

    #[test]
    fn first_seven_of_the_2_subspaces_of_f2_4() {
        let g = grassmannian(4, 2, 2).unwrap();
        assert_eq!(g.len(), 35);
        let got: Vec<String> = g[..7].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, ["1000;0100", "1000;0010", "0100;0010", "1100;0010", "0100;1010", "1100;1010", "1000;0110"]);
    }

    #[test]
    fn zero_dimensional_ambient() {
        for q in [2, 3] {
            let a = AmbientSpace::new(q, 0).unwrap();
            assert_eq!(a.len(), 1);
            assert_eq!(a.num_points(), 0);
            assert_eq!(a.full_index(), a.zero_index());
        }
    }

    #[test]
    fn small_grassmannians() {
        assert_eq!(grassmannian(3, 2, 2).unwrap().len(), 7);
        let z = grassmannian(4, 0, 3).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].dim(), 0);
        assert!(grassmannian(3, 4, 2).is_err());
    }

    #[test]
    fn sorted_and_prefix_closed() {
        for (q, n) in [(2u8, 5usize), (3, 4)] {
            let amb = AmbientSpace::shared(q, n).unwrap();
            for k in 0..=n {
                let g = amb.grassmannian(k).unwrap();
                for w in g.windows(2) {
                    assert!(w[0] < w[1]);
                }
                for m in 0..=n {
                    let u = Subspace::coordinate(q, n, m);
                    let prefix = gaussian_binomial(m, k, q as u64) as usize;
                    for (i, x) in g.iter().enumerate() {
                        assert_eq!(u.contains(x).unwrap(), i < prefix, "q={q} n={n} k={k} m={m} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn dropping_the_last_row_preserves_order() {
        let (q, n) = (2u8, 4usize);
        let amb = AmbientSpace::shared(q, n).unwrap();
        let sub = AmbientSpace::shared(q, n - 1).unwrap();
        for k in 1..=n {
            let start = gaussian_binomial(n - 1, k, q as u64) as usize;
            let len = gaussian_binomial(n - 1, k - 1, q as u64) as usize;
            let slice = &amb.grassmannian(k).unwrap()[start..start + len];
            for (j, x) in slice.iter().enumerate() {
                assert_eq!(x.rows().last().unwrap(), &vec![0, 0, 0, 1]);
                let head: Vec<Vec<u8>> = x.rows()[..k - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
                let y = Subspace::span(q, n - 1, &head).unwrap();
                assert_eq!(y, sub.grassmannian(k - 1).unwrap()[j]);
            }
        }
    }

    #[test]
    fn new_point_counts() {
        let pts = new_points(2, 2).unwrap();
        let got: std::collections::BTreeSet<String> = pts.iter().map(|p| p.to_string()).collect();
        let want: std::collections::BTreeSet<String> =
            ["001", "101", "011", "111"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
        assert_eq!(new_points(2, 4).unwrap().len(), 16);
        assert_eq!(new_points(3, 3).unwrap().len(), 27);
    }

    #[test]
    fn lattice_tables_agree_with_matrix_ops() {
        let amb = AmbientSpace::shared(3, 3).unwrap();
        for x in 0..amb.len() as Index {
            let sx = amb.subspace(x);
            assert_eq!(amb.index_of(&sx).unwrap(), x);
            assert_eq!(amb.subspace(amb.perp(x)), sx.orthogonal_complement());
            for y in 0..amb.len() as Index {
                let sy = amb.subspace(y);
                let s = amb.sum(x, y);
                let i = amb.intersect(x, y);
                assert_eq!(amb.subspace(s), sx.sum(&sy).unwrap());
                assert_eq!(amb.subspace(i), sx.intersect(&sy).unwrap());
                assert_eq!(amb.dim_of(s) + amb.dim_of(i), amb.dim_of(x) + amb.dim_of(y));
                assert_eq!(amb.contains(x, y), sx.contains(&sy).unwrap());
            }
        }
    }

    #[test]
    fn point_bitsets_match_matrix_form() {
        let amb = AmbientSpace::shared(2, 4).unwrap();
        for x in 0..amb.len() as Index {
            let sx = amb.subspace(x);
            let expect =
                (0..amb.num_points()).filter(|&p| sx.contains(&amb.subspace(amb.point_index(p))).unwrap()).count();
            assert_eq!(amb.points_of(x).count(), expect);
            let dim = amb.dim_of(x) as u32;
            assert_eq!(expect as u64, (2u64.pow(dim) - 1));
        }
    }

    #[test]
    fn vector_arithmetic() {
        let amb = AmbientSpace::shared(3, 4).unwrap();
        let a = amb.pack(&[1, 2, 0, 1]);
        let b = amb.pack(&[2, 2, 1, 0]);
        assert_eq!(amb.unpack(amb.add_vec(a, b)), vec![0, 1, 1, 1]);
        assert_eq!(amb.unpack(amb.scale_vec(a, 2)), vec![2, 1, 0, 2]);
    }
}
