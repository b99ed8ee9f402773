//! q-Steiner systems, the q-matroids they induce, and the scan for
//! dimension-5 restrictions compatible with a binary q-Fano plane.
//!
//! A q-Steiner system S_q(t, k, n) is a family of k-subspaces ("blocks") of
//! F_q^n such that every t-subspace lies in exactly one block. The
//! intersections of all subfamilies of blocks are the flats of a rank t+1
//! q-matroid. Restricting the one induced by a putative S_2(2, 3, 7) to a
//! 5-space gives a rank 3 q-matroid whose rank 2 flats are five 3-spaces and
//! 120 2-spaces; [`fano_scan`] finds the classes with that profile.
//!
//! Blocks files hold one block per line in subspace syntax; blank lines and
//! lines starting with `#` are ignored.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::ambient::{AmbientSpace, Index};
use crate::classify::ClassTable;
use crate::encoding::Encoding;
use crate::error::{input, Error, Result};
use crate::group::automorphism_order;
use crate::qmatroid::QMatroid;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSystem {
    pub q: u8,
    pub t: usize,
    pub k: usize,
    pub n: usize,
    pub blocks: Vec<Subspace>,
}

impl SteinerSystem {
    /// Checks shapes only; use [`SteinerSystem::is_valid`] for the covering
    /// property.
    pub fn new(q: u8, t: usize, k: usize, n: usize, blocks: Vec<Subspace>) -> Result<Self> {
        check_blocks(q, k, n, &blocks)?;
        if t > k {
            return input(format!("t = {t} exceeds block dimension {k}"));
        }
        Ok(SteinerSystem { q, t, k, n, blocks })
    }

    /// Parse a blocks file; k and n are read off the blocks.
    pub fn parse(q: u8, t: usize, text: &str) -> Result<Self> {
        let blocks = parse_blocks(q, text)?;
        let (k, n) = (blocks[0].dim(), blocks[0].ambient_dim());
        SteinerSystem::new(q, t, k, n, blocks)
    }

    pub fn is_valid(&self) -> Result<bool> {
        is_q_steiner(self.q, self.t, self.k, self.n, &self.blocks)
    }

    pub fn to_file_string(&self) -> String {
        self.blocks.iter().map(|b| format!("{b}\n")).collect()
    }
}

/// Blocks in subspace syntax, one per line, all in the same ambient.
pub fn parse_blocks(q: u8, text: &str) -> Result<Vec<Subspace>> {
    let mut blocks: Vec<Subspace> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let b = Subspace::parse(q, line)?;
        if let Some(first) = blocks.first() {
            if first.ambient_dim() != b.ambient_dim() {
                return input(format!("block {line:?} is not in F_{q}^{}", first.ambient_dim()));
            }
        }
        blocks.push(b);
    }
    if blocks.is_empty() {
        return input("no blocks");
    }
    Ok(blocks)
}

fn check_blocks(q: u8, k: usize, n: usize, blocks: &[Subspace]) -> Result<()> {
    for b in blocks {
        if b.q() != q || b.ambient_dim() != n {
            return input(format!("block {b} is not a subspace of F_{q}^{n}"));
        }
        if b.dim() != k {
            return input(format!("block {b} has dimension {}, expected {k}", b.dim()));
        }
    }
    Ok(())
}

/// True iff every t-subspace of F_q^n lies in exactly one block.
pub fn is_q_steiner(q: u8, t: usize, k: usize, n: usize, blocks: &[Subspace]) -> Result<bool> {
    check_blocks(q, k, n, blocks)?;
    if t > n {
        return input(format!("t = {t} exceeds n = {n}"));
    }
    let amb = AmbientSpace::shared(q, n)?;
    let idx = blocks.iter().map(|b| amb.index_of(b)).collect::<Result<Vec<_>>>()?;
    Ok(amb.grassmannian_range(t).all(|x| idx.iter().filter(|&&b| amb.contains(b, x as Index)).count() == 1))
}

/// The q-matroid whose flats are the intersections of all subfamilies of
/// blocks, the empty intersection being E.
pub fn matroid_from_steiner(s: &SteinerSystem) -> Result<QMatroid> {
    if !s.is_valid()? {
        return input(format!("blocks do not form an S_{}({}, {}, {})", s.q, s.t, s.k, s.n));
    }
    let amb = AmbientSpace::shared(s.q, s.n)?;
    let mut flats: BTreeSet<Index> = BTreeSet::from([amb.full_index()]);
    for b in &s.blocks {
        let b = amb.index_of(b)?;
        let meets: Vec<Index> = flats.iter().map(|&f| amb.intersect(f, b)).collect();
        flats.extend(meets);
    }
    let family: Vec<Subspace> = flats.into_iter().map(|f| amb.subspace(f)).collect();
    QMatroid::from_flats(s.q, s.n, &family)
}

fn rank2_flats(m: &QMatroid) -> Vec<Index> {
    let fam = m.flats();
    fam.indices().iter().copied().filter(|&f| m.rank_idx(f) == 2).collect()
}

fn require_f25(m: &QMatroid) -> Result<()> {
    if m.q() != 2 || m.n() != 5 {
        return input(format!("expected a q-matroid on F_2^5, got F_{}^{}", m.q(), m.n()));
    }
    Ok(())
}

/// Rank 3 on F_2^5 with exactly five 3-dimensional and 120 2-dimensional
/// rank 2 flats.
pub fn residual_candidate(m: &QMatroid) -> Result<bool> {
    require_f25(m)?;
    if m.rank() != 3 {
        return Ok(false);
    }
    let amb = m.ambient();
    let flats = rank2_flats(m);
    let three = flats.iter().filter(|&&f| amb.dim_of(f) == 3).count();
    let two = flats.iter().filter(|&&f| amb.dim_of(f) == 2).count();
    Ok(three == 5 && two == 120 && flats.len() == 125)
}

/// The 3-dimensional rank 2 flats of a q-matroid on F_2^5, in order.
pub fn three_dim_flats(m: &QMatroid) -> Result<Vec<Subspace>> {
    require_f25(m)?;
    let amb = m.ambient();
    Ok(rank2_flats(m).into_iter().filter(|&f| amb.dim_of(f) == 3).map(|f| amb.subspace(f)).collect())
}

fn check_five(blocks: &[Subspace]) -> Result<()> {
    if blocks.len() != 5 {
        return input(format!("expected 5 subspaces, got {}", blocks.len()));
    }
    check_blocks(2, 3, 5, blocks)
}

/// Number of points of F_2^5 lying in at least two of the five 3-spaces.
pub fn intersection_points(blocks: &[Subspace]) -> Result<usize> {
    check_five(blocks)?;
    let amb = AmbientSpace::shared(2, 5)?;
    let idx = blocks.iter().map(|b| amb.index_of(b)).collect::<Result<Vec<_>>>()?;
    Ok((0..amb.num_points()).filter(|&p| idx.iter().filter(|&&b| amb.has_point(b, p)).count() >= 2).count())
}

/// True iff the five 3-spaces pairwise meet in dimension at most 1, so that
/// no 2-space lies in two of them.
pub fn pairwise_meet_in_points(blocks: &[Subspace]) -> Result<bool> {
    check_five(blocks)?;
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if a.intersect(b)?.dim() > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub matroid: Encoding,
    pub three_dim_flats: Vec<Subspace>,
    pub automorphism_order: u128,
    pub intersection_points: usize,
}

impl ResidualReport {
    pub fn of(m: &QMatroid) -> Result<Self> {
        let three_dim_flats = three_dim_flats(m)?;
        Ok(ResidualReport {
            matroid: m.encode(),
            intersection_points: intersection_points(&three_dim_flats)?,
            automorphism_order: automorphism_order(m),
            three_dim_flats,
        })
    }

    /// Columns: encoding, aut_order, intersection_points, flats.
    pub fn tsv_line(&self) -> String {
        let flats: Vec<String> = self.three_dim_flats.iter().map(|f| f.to_string()).collect();
        format!(
            "{}\t{}\t{}\t{}",
            self.matroid.bitstring(),
            self.automorphism_order,
            self.intersection_points,
            flats.join(" ")
        )
    }
}

pub const REPORT_HEADER: &str = "encoding\taut_order\tintersection_points\tflats";

/// Reports for the rank 3 classes on F_2^5 that pass
/// [`residual_candidate`], sorted by encoding.
pub fn fano_scan(table: &ClassTable) -> Result<Vec<ResidualReport>> {
    if table.q() != 2 {
        return input("the scan runs over the q = 2 table");
    }
    let classes = table.get(5, 3).ok_or_else(|| Error::Missing("no (q=2, n=5, k=3) classification in table".into()))?;
    scan_classes(classes)
}

pub fn scan_classes(classes: &[Encoding]) -> Result<Vec<ResidualReport>> {
    let mut reports = classes
        .par_iter()
        .map(|e| {
            let m = QMatroid::decode(e)?;
            if residual_candidate(&m)? {
                ResidualReport::of(&m).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    reports.sort_by(|a, b| a.matroid.cmp(&b.matroid));
    Ok(reports)
}

/// One of the ten known residual candidates, given by its five 3-dimensional
/// rank 2 flats.
#[derive(Clone, Copy, Debug)]
pub struct PrintedCandidate {
    pub label: usize,
    pub flats: [&'static str; 5],
    pub automorphism_order: u128,
    pub intersection_points: usize,
}

pub const PRINTED_CANDIDATES: [PrintedCandidate; 10] = [
    PrintedCandidate {
        label: 1,
        flats: [
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01100;00001",
            "10110;01010;00001",
            "10100;01110;00001",
        ],
        automorphism_order: 5760,
        intersection_points: 1,
    },
    PrintedCandidate {
        label: 2,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10001;01010;00100",
            "10000;01011;00110",
        ],
        automorphism_order: 5,
        intersection_points: 10,
    },
    PrintedCandidate {
        label: 3,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10001;01010;00100",
            "10010;01011;00110",
        ],
        automorphism_order: 8,
        intersection_points: 10,
    },
    PrintedCandidate {
        label: 4,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01011;00100",
            "10000;01011;00111",
        ],
        automorphism_order: 120,
        intersection_points: 10,
    },
    PrintedCandidate {
        label: 5,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10001;01010;00100",
            "10010;01001;00110",
        ],
        automorphism_order: 3,
        intersection_points: 10,
    },
    PrintedCandidate {
        label: 6,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10001;01010;00100",
            "10011;01011;00111",
        ],
        automorphism_order: 12,
        intersection_points: 10,
    },
    PrintedCandidate {
        label: 7,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01100;00001",
            "10011;01010;00100",
        ],
        automorphism_order: 2,
        intersection_points: 8,
    },
    PrintedCandidate {
        label: 8,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01100;00001",
            "10101;01100;00010",
        ],
        automorphism_order: 8,
        intersection_points: 6,
    },
    PrintedCandidate {
        label: 9,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01100;00001",
            "10001;01010;00100",
        ],
        automorphism_order: 2,
        intersection_points: 8,
    },
    PrintedCandidate {
        label: 10,
        flats: [
            "10100;01000;00010",
            "10000;01000;00001",
            "00100;00010;00001",
            "10010;01100;00001",
            "10100;01110;00001",
        ],
        automorphism_order: 48,
        intersection_points: 5,
    },
];

impl PrintedCandidate {
    pub fn blocks(&self) -> Result<Vec<Subspace>> {
        self.flats.iter().map(|s| Subspace::parse_in(2, 5, s)).collect()
    }

    /// Rebuild from the printed 3-dimensional flats: 0, all points, the five
    /// blocks, every 2-space inside none of them, and E.
    pub fn matroid(&self) -> Result<QMatroid> {
        let blocks = self.blocks()?;
        let amb = AmbientSpace::shared(2, 5)?;
        let idx = blocks.iter().map(|b| amb.index_of(b)).collect::<Result<Vec<_>>>()?;
        let mut family: Vec<Index> = vec![amb.zero_index(), amb.full_index()];
        family.extend(amb.grassmannian_range(1).map(|x| x as Index));
        family.extend(
            amb.grassmannian_range(2).map(|x| x as Index).filter(|&x| !idx.iter().any(|&b| amb.contains(b, x))),
        );
        family.extend(&idx);
        let family: Vec<Subspace> = family.into_iter().map(|x| amb.subspace(x)).collect();
        QMatroid::from_flats(2, 5, &family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{canonical_form, is_isomorphic};

    fn lines_of_f24() -> Vec<Subspace> {
        AmbientSpace::new(2, 4).unwrap().grassmannian(2).unwrap()
    }

    /// First line spread of F_2^4 found by exhaustive search.
    fn spread() -> Vec<Subspace> {
        fn go(lines: &[Subspace], from: usize, chosen: &mut Vec<Subspace>) -> bool {
            if chosen.len() == 5 {
                return true;
            }
            for i in from..lines.len() {
                if chosen.iter().all(|c| c.intersect(&lines[i]).unwrap().dim() == 0) {
                    chosen.push(lines[i].clone());
                    if go(lines, i + 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let mut chosen = Vec::new();
        assert!(go(&lines_of_f24(), 0, &mut chosen));
        chosen
    }

    #[test]
    fn steiner_examples() {
        let lines = lines_of_f24();
        assert!(is_q_steiner(2, 2, 2, 4, &lines).unwrap());
        let s = spread();
        assert!(is_q_steiner(2, 1, 2, 4, &s).unwrap());
        assert!(!is_q_steiner(2, 1, 2, 4, &s[..4]).unwrap());
        assert!(!is_q_steiner(2, 1, 2, 4, &lines).unwrap());
        assert!(is_q_steiner(2, 1, 3, 4, &s).is_err());
    }

    #[test]
    fn spread_matroid() {
        let s = SteinerSystem::new(2, 1, 2, 4, spread()).unwrap();
        let m = matroid_from_steiner(&s).unwrap();
        assert_eq!(m.rank(), 2);
        let amb = m.ambient().clone();
        let fam = m.flats();
        let rank1: Vec<Subspace> =
            fam.indices().iter().filter(|&&f| m.rank_idx(f) == 1).map(|&f| amb.subspace(f)).collect();
        let mut blocks = s.blocks.clone();
        blocks.sort();
        assert_eq!(rank1, blocks);
        let (c, _) = canonical_form(&m);
        let table = crate::classify::classify(2, 4, 2).unwrap();
        assert!(table.contains(&c.encode()));
    }

    #[test]
    fn trivial_system_gives_uniform() {
        for (k, n) in [(1, 3), (2, 3), (2, 4)] {
            let blocks = AmbientSpace::new(2, n).unwrap().grassmannian(k).unwrap();
            let s = SteinerSystem::new(2, k, k, n, blocks).unwrap();
            let m = matroid_from_steiner(&s).unwrap();
            assert_eq!(m.rank(), k + 1);
            assert_eq!(m, QMatroid::uniform(k + 1, n, 2).unwrap());
        }
    }

    #[test]
    fn rejects_non_systems() {
        let s = spread();
        let bad = SteinerSystem::new(2, 1, 2, 4, s[..4].to_vec()).unwrap();
        assert!(matroid_from_steiner(&bad).is_err());
        assert!(SteinerSystem::new(2, 3, 2, 4, s).is_err());
    }

    #[test]
    fn blocks_file_roundtrip() {
        let s = SteinerSystem::new(2, 1, 2, 4, spread()).unwrap();
        let text = format!("# spread\n\n{}", s.to_file_string());
        assert_eq!(SteinerSystem::parse(2, 1, &text).unwrap(), s);
        assert!(parse_blocks(2, "").is_err());
        assert!(parse_blocks(2, "100;010\n1000").is_err());
        assert!(parse_blocks(2, "102").is_err());
    }

    #[test]
    fn printed_intersection_points() {
        for c in &PRINTED_CANDIDATES {
            let b = c.blocks().unwrap();
            assert_eq!(intersection_points(&b).unwrap(), c.intersection_points, "candidate {}", c.label);
            assert!(pairwise_meet_in_points(&b).unwrap());
        }
        assert!(intersection_points(&PRINTED_CANDIDATES[0].blocks().unwrap()[..4]).is_err());
    }

    #[test]
    fn printed_candidates_are_residual() {
        for c in &PRINTED_CANDIDATES {
            let m = c.matroid().unwrap();
            assert!(residual_candidate(&m).unwrap(), "candidate {}", c.label);
            let mut want = c.blocks().unwrap();
            want.sort();
            assert_eq!(three_dim_flats(&m).unwrap(), want);
        }
    }

    #[test]
    fn printed_candidates_pairwise_distinct() {
        let ms: Vec<QMatroid> = PRINTED_CANDIDATES.iter().map(|c| c.matroid().unwrap()).collect();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                assert!(is_isomorphic(&ms[i], &ms[j]).unwrap().is_none(), "{} ~ {}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn non_candidates() {
        assert!(!residual_candidate(&QMatroid::uniform(3, 5, 2).unwrap()).unwrap());
        assert!(residual_candidate(&QMatroid::uniform(2, 4, 2).unwrap()).is_err());
        // A (4, 2) class with a 4-dim rank 2 flat: all of E_4 has rank 2.
        let t = crate::extension::trivial_extension(&QMatroid::uniform(2, 4, 2).unwrap()).unwrap();
        assert!(!residual_candidate(&t).unwrap());
    }
}
