//! Exhaustive rank-table search, used as an independent oracle for the
//! classification and extension machinery on very small ambients.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ambient::{AmbientSpace, Index};
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::group::canonical_form;
use crate::qmatroid::QMatroid;

/// Largest lattice the oracle accepts.
pub const MAX_SUBSPACES: usize = 80;

struct Search {
    amb: Arc<AmbientSpace>,
    hyperplanes: Vec<Vec<usize>>,
    /// Incomparable pairs (a, b) with a + b = x, keyed by x.
    pairs: Vec<Vec<(usize, usize, usize)>>,
    fixed: Vec<Option<u8>>,
    /// Assignment order: by last point contained, then dimension, so every
    /// subspace is decided right after its last point.
    order: Vec<usize>,
}

impl Search {
    fn new(amb: Arc<AmbientSpace>, fixed: Vec<Option<u8>>) -> Result<Self> {
        let len = amb.len();
        if len > MAX_SUBSPACES {
            return Err(Error::TooLarge(format!(
                "F_{}^{} has {} subspaces, oracle limit is {}",
                amb.q(),
                amb.n(),
                len,
                MAX_SUBSPACES
            )));
        }
        let mut hyperplanes = vec![Vec::new(); len];
        let mut pairs = vec![Vec::new(); len];
        for x in 0..len as Index {
            for y in 0..len as Index {
                if amb.dim_of(y) + 1 == amb.dim_of(x) && amb.contains(x, y) {
                    hyperplanes[x as usize].push(y as usize);
                }
            }
            for y in 0..x {
                if !amb.contains(x, y) && !amb.contains(y, x) {
                    let meet = amb.intersect(x, y) as usize;
                    pairs[amb.sum(x, y) as usize].push((x as usize, y as usize, meet));
                }
            }
        }
        let last_point = |x: usize| amb.points_of(x as Index).max().map_or(0, |p| p + 1);
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&x| (last_point(x), amb.dim_of(x as Index), x));
        Ok(Search { amb, hyperplanes, pairs, fixed, order })
    }

    fn run(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut ranks = vec![0u8; self.amb.len()];
        self.dfs(0, &mut ranks, &mut out);
        out.sort();
        out
    }

    fn dfs(&self, depth: usize, ranks: &mut [u8], out: &mut Vec<Vec<u8>>) {
        if depth == ranks.len() {
            out.push(ranks.to_vec());
            return;
        }
        let x = self.order[depth];
        let (lo, hi) = if self.hyperplanes[x].is_empty() {
            (0, 0)
        } else {
            let hs = self.hyperplanes[x].iter().map(|&h| ranks[h]);
            let lo = hs.clone().max().unwrap_or(0);
            let hi = (hs.min().unwrap_or(0) + 1).min(self.amb.dim_of(x as Index) as u8);
            (lo, hi)
        };
        let choices: Vec<u8> = match self.fixed[x] {
            Some(r) if r >= lo && r <= hi => vec![r],
            Some(_) => return,
            None if lo <= hi => (lo..=hi).collect(),
            None => return,
        };
        for r in choices {
            ranks[x] = r;
            let ok = self.pairs[x]
                .iter()
                .all(|&(a, b, meet)| r as u32 + ranks[meet] as u32 <= ranks[a] as u32 + ranks[b] as u32);
            if ok {
                self.dfs(depth + 1, ranks, out);
            }
        }
    }
}

/// Every rank table on F_q^n satisfying the rank axioms, in lexicographic
/// order of the table.
pub fn all_rank_tables(q: u8, n: usize) -> Result<Vec<Vec<u8>>> {
    let amb = AmbientSpace::shared(q, n)?;
    let len = amb.len();
    Ok(Search::new(amb, vec![None; len])?.run())
}

/// Every q-matroid on F_q^n.
pub fn all_qmatroids(q: u8, n: usize) -> Result<Vec<QMatroid>> {
    let amb = AmbientSpace::shared(q, n)?;
    let len = amb.len();
    let tables = Search::new(amb.clone(), vec![None; len])?.run();
    Ok(tables.into_iter().map(|t| QMatroid::from_ranks_unchecked(amb.clone(), t)).collect())
}

/// Canonical representatives of all q-matroids on F_q^n, ordered by rank and
/// then by encoding.
pub fn brute_force_classify(q: u8, n: usize) -> Result<Vec<Encoding>> {
    let mut seen = BTreeSet::new();
    for m in all_qmatroids(q, n)? {
        let (c, _) = canonical_form(&m);
        seen.insert((c.rank(), c.encode()));
    }
    Ok(seen.into_iter().map(|(_, e)| e).collect())
}

/// Every q-matroid on F_q^(n+1) whose restriction to the first n coordinates
/// is `m`, found by rank-table search with the restriction held fixed.
pub fn brute_force_extensions(m: &QMatroid) -> Result<Vec<QMatroid>> {
    let small = m.ambient();
    let big = AmbientSpace::shared(m.q(), m.n() + 1)?;
    let mut fixed = vec![None; big.len()];
    for x in 0..small.len() as Index {
        fixed[small.embed_into(&big, x) as usize] = Some(m.rank_idx(x));
    }
    let tables = Search::new(big.clone(), fixed)?.run();
    Ok(tables.into_iter().map(|t| QMatroid::from_ranks_unchecked(big.clone(), t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatroid::validate_ranks;

    fn counts(encs: &[Encoding], n: usize) -> Vec<usize> {
        (0..=n).map(|k| encs.iter().filter(|e| e.k() == k).count()).collect()
    }

    #[test]
    fn tables_satisfy_axioms() {
        for (q, n) in [(2, 2), (2, 3), (3, 2)] {
            let amb = AmbientSpace::shared(q, n).unwrap();
            let tables = all_rank_tables(q, n).unwrap();
            assert!(!tables.is_empty());
            for t in &tables {
                validate_ranks(&amb, t).unwrap();
            }
        }
    }

    #[test]
    fn tables_complete_on_tiny_ambient() {
        // F_2^2 has 5 subspaces; check every table with entries up to 2.
        let amb = AmbientSpace::shared(2, 2).unwrap();
        let mut count = 0;
        for code in 0..3usize.pow(5) {
            let t: Vec<u8> = (0..5).map(|i| (code / 3usize.pow(i) % 3) as u8).collect();
            if validate_ranks(&amb, &t).is_ok() {
                count += 1;
            }
        }
        assert_eq!(all_rank_tables(2, 2).unwrap().len(), count);
    }

    #[test]
    fn small_counts() {
        assert_eq!(counts(&brute_force_classify(2, 1).unwrap(), 1), vec![1, 1]);
        assert_eq!(counts(&brute_force_classify(2, 2).unwrap(), 2), vec![1, 2, 1]);
        assert_eq!(counts(&brute_force_classify(2, 3).unwrap(), 3), vec![1, 3, 3, 1]);
        assert_eq!(counts(&brute_force_classify(3, 3).unwrap(), 3), vec![1, 3, 3, 1]);
    }

    #[test]
    fn refuses_large() {
        assert!(matches!(all_rank_tables(2, 5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn extensions_restrict_back() {
        let m = QMatroid::uniform(1, 2, 2).unwrap();
        let exts = brute_force_extensions(&m).unwrap();
        assert!(!exts.is_empty());
        for e in &exts {
            assert_eq!(e.restrict_to_prefix(2).unwrap(), m);
        }
    }
}
