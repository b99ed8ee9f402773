//! Classification of q-matroids up to GL(n, q)-isomorphism.
//!
//! Representatives at (n, k) are the canonical non-trivial extensions of the
//! representatives at (n-1, k) together with the trivial extensions of the
//! representatives at (n-1, k-1). Higher ranks come from duals.
//!
//! Result files are `q<q>_n<n>_k<k>.qmc`:
//! ```text
//! # qmat-classes v1 q=2 n=4 k=2 count=10
//! 000000000000001...
//! ```
//! with a `sha256sum`-style sidecar `q<q>_n<n>_k<k>.qmc.sha256`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use sha2::{Digest, Sha256};

use crate::ambient::{gaussian_binomial, AmbientSpace};
use crate::encoding::{check_params, Encoding};
use crate::error::{input, Error, Result};
use crate::extension::{trivial_extension, Extender};
use crate::group::{canonical_bits, check_bits};
use crate::qmatroid::QMatroid;

/// Where a row of the table came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Extensions of `nontrivial_parents` classes at (n-1, k) and
    /// `trivial_parents` at (n-1, k-1); `candidates` non-trivial extensions
    /// were generated in total.
    Extended {
        nontrivial_parents: usize,
        trivial_parents: usize,
        candidates: u64,
    },
    /// Canonical duals of the (n, n-k) classes.
    Dual,
    /// Single-class base case (k = 0 or k = n).
    Base,
    Loaded,
}

/// Sorted lists of canonical encodings per (n, k), for one q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    q: u8,
    rows: BTreeMap<(usize, usize), Vec<Encoding>>,
    provenance: BTreeMap<(usize, usize), Provenance>,
}

/// Progress of a classification run, reported once per finished parent.
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    pub n: usize,
    pub k: usize,
    pub parent: usize,
    pub parents: usize,
    pub found: usize,
}

#[derive(Default)]
pub struct ClassifyOptions<'a> {
    /// Directory for per-parent checkpoints.
    pub checkpoint_dir: Option<PathBuf>,
    /// Reuse checkpoints found in `checkpoint_dir`.
    pub resume: bool,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

impl ClassTable {
    pub fn new(q: u8) -> Result<Self> {
        check_params(q as u32, 0, 0)?;
        Ok(ClassTable { q, rows: BTreeMap::new(), provenance: BTreeMap::new() })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&[Encoding]> {
        self.rows.get(&(n, k)).map(Vec::as_slice)
    }

    pub fn provenance(&self, n: usize, k: usize) -> Option<&Provenance> {
        self.provenance.get(&(n, k))
    }

    /// All stored (n, k) cells.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), &[Encoding])> {
        self.rows.iter().map(|(&c, v)| (c, v.as_slice()))
    }

    pub fn insert(&mut self, n: usize, k: usize, mut encs: Vec<Encoding>, prov: Provenance) -> Result<()> {
        for e in &encs {
            if (e.q(), e.n(), e.k()) != (self.q, n, k) {
                return input(format!("encoding for q={} n={} k={} stored at n={n} k={k}", e.q(), e.n(), e.k()));
            }
        }
        encs.sort();
        encs.dedup();
        self.rows.insert((n, k), encs);
        self.provenance.insert((n, k), prov);
        Ok(())
    }

    /// Compute (n, k), and whatever it depends on, unless already present.
    pub fn ensure(&mut self, n: usize, k: usize, opts: &ClassifyOptions) -> Result<&[Encoding]> {
        if k > n {
            return input(format!("rank {k} exceeds dimension {n}"));
        }
        check_params(self.q as u32, n, k)?;
        if !self.rows.contains_key(&(n, k)) {
            if k == 0 || k == n {
                let enc = QMatroid::uniform(k, n, self.q)?.encode();
                self.insert(n, k, vec![enc], Provenance::Base)?;
            } else {
                self.ensure(n - 1, k, opts)?;
                self.ensure(n - 1, k - 1, opts)?;
                let (encs, prov) = extend_row(self, n, k, opts)?;
                self.insert(n, k, encs, prov)?;
            }
        }
        Ok(&self.rows[&(n, k)])
    }

    /// Fill (n, k) with canonical duals of the (n, n-k) classes.
    pub fn ensure_dual(&mut self, n: usize, k: usize, opts: &ClassifyOptions) -> Result<&[Encoding]> {
        if !self.rows.contains_key(&(n, k)) {
            if k > n {
                return input(format!("rank {k} exceeds dimension {n}"));
            }
            let src = self.ensure(n, n - k, opts)?.to_vec();
            let encs = dual_classes(&src)?;
            self.insert(n, k, encs, Provenance::Dual)?;
        }
        Ok(&self.rows[&(n, k)])
    }

    /// Every rank at dimension n: direct classification up to ⌊n/2⌋, duals
    /// above.
    pub fn ensure_full(&mut self, n: usize, opts: &ClassifyOptions) -> Result<Vec<usize>> {
        for k in 0..=n {
            if k <= n / 2 {
                self.ensure(n, k, opts)?;
            } else {
                self.ensure_dual(n, k, opts)?;
            }
        }
        Ok((0..=n).map(|k| self.rows[&(n, k)].len()).collect())
    }

    /// The count table with rows k and columns n = 1..=max_n.
    pub fn format_counts(&self, max_n: usize) -> String {
        let mut out = String::from("k\\n");
        for n in 1..=max_n {
            out.push_str(&format!("\t{n}"));
        }
        out.push('\n');
        for k in 0..=max_n {
            out.push_str(&k.to_string());
            for n in 1..=max_n {
                out.push('\t');
                if let Some(v) = self.get(n, k) {
                    out.push_str(&v.len().to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    /// Write every cell as a result file plus checksum sidecar.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (&(n, k), encs) in &self.rows {
            save_cell(dir, self.q, n, k, encs)?;
        }
        Ok(())
    }

    /// Read every `*.qmc` file in `dir`. All files must share one q.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut table: Option<ClassTable> = None;
        let mut names: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "qmc"))
            .collect();
        names.sort();
        if names.is_empty() {
            return Err(Error::Missing(format!("no .qmc files in {}", dir.display())));
        }
        for path in names {
            let cell = load_cell(&path)?;
            let t = match &mut table {
                Some(t) => t,
                None => table.insert(ClassTable::new(cell.q)?),
            };
            if t.q != cell.q {
                return Err(Error::Integrity { path, reason: "files for different q in one directory".into() });
            }
            t.rows.insert((cell.n, cell.k), cell.encodings);
            t.provenance.insert((cell.n, cell.k), Provenance::Loaded);
        }
        Ok(table.expect("at least one file"))
    }
}

/// Representatives at (q, n, k).
pub fn classify(q: u8, n: usize, k: usize) -> Result<Vec<Encoding>> {
    let mut t = ClassTable::new(q)?;
    Ok(t.ensure(n, k, &ClassifyOptions::default())?.to_vec())
}

/// Class counts for every rank at dimension n.
pub fn classify_full(q: u8, n: usize) -> Result<ClassTable> {
    let mut t = ClassTable::new(q)?;
    t.ensure_full(n, &ClassifyOptions::default())?;
    Ok(t)
}

/// Canonical encodings of the duals, sorted and deduplicated.
pub fn dual_classes(src: &[Encoding]) -> Result<Vec<Encoding>> {
    let mut out = src
        .par_iter()
        .map(|e| {
            let d = QMatroid::decode(e)?.dual();
            let bits = canonical_bits(d.ambient(), d.rank(), &d.basis_bits());
            Ok(Encoding::from_parts(d.q(), d.n(), d.rank(), bits))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn extend_row(t: &ClassTable, n: usize, k: usize, opts: &ClassifyOptions) -> Result<(Vec<Encoding>, Provenance)> {
    let q = t.q;
    let parents = &t.rows[&(n - 1, k)];
    let lower = &t.rows[&(n - 1, k - 1)];
    let ckpt = match &opts.checkpoint_dir {
        Some(d) => {
            let d = d.join(format!("q{q}_n{n}_k{k}"));
            fs::create_dir_all(&d)?;
            Some(d)
        }
        None => None,
    };
    let accepted: Mutex<FxHashSet<Vec<bool>>> = Mutex::new(FxHashSet::default());
    let done = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<(Vec<Vec<bool>>, u64)> = parents
        .par_iter()
        .enumerate()
        .map(|(i, parent)| {
            if let (Some(d), true) = (&ckpt, opts.resume) {
                if let Some(found) = read_checkpoint(d, i, parent)? {
                    accepted.lock().unwrap().extend(found.0.iter().cloned());
                    return Ok(found);
                }
            }
            let found = extend_parent(parent, &accepted)?;
            if let Some(d) = &ckpt {
                write_checkpoint(d, i, parent, &found)?;
            }
            let finished = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            if let Some(p) = opts.progress {
                p(Progress { n, k, parent: finished, parents: parents.len(), found: found.0.len() });
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut set: BTreeSet<Encoding> = BTreeSet::new();
    let mut candidates = 0;
    for (found, c) in results {
        candidates += c;
        set.extend(found.into_iter().map(|b| Encoding::from_parts(q, n, k, b)));
    }
    for m in lower {
        set.insert(trivial_extension(&QMatroid::decode(m)?)?.encode());
    }
    if let Some(d) = &ckpt {
        fs::remove_dir_all(d)?;
    }
    let prov = Provenance::Extended { nontrivial_parents: parents.len(), trivial_parents: lower.len(), candidates };
    Ok((set.into_iter().collect(), prov))
}

/// Canonical non-trivial extensions of one parent, and the candidate count.
fn extend_parent(parent: &Encoding, accepted: &Mutex<FxHashSet<Vec<bool>>>) -> Result<(Vec<Vec<bool>>, u64)> {
    let m = QMatroid::decode(parent)?;
    let ext = Extender::new(&m)?;
    let clp = ext.closure_positions();
    let big: &AmbientSpace = ext.big_ambient();
    let k = m.rank();
    let parts: Vec<(Vec<Vec<bool>>, u64)> = (1..ext.cuts().len())
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut count = 0u64;
            for sel in ext.selectors_starting_with(first) {
                count += 1;
                let bits = ext.nontrivial_extension_bits(&sel, &clp);
                if accepted.lock().unwrap().contains(&bits) {
                    continue;
                }
                if check_bits(big, k, &bits, false, false).canonical {
                    accepted.lock().unwrap().insert(bits.clone());
                    found.push(bits);
                }
            }
            (found, count)
        })
        .collect();
    let mut found: Vec<Vec<bool>> = Vec::new();
    let mut count = 0;
    for (f, c) in parts {
        found.extend(f);
        count += c;
    }
    found.sort();
    found.dedup();
    Ok((found, count))
}

fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn checkpoint_path(dir: &Path, i: usize) -> PathBuf {
    dir.join(format!("parent_{i:05}.ckpt"))
}

fn write_checkpoint(dir: &Path, i: usize, parent: &Encoding, found: &(Vec<Vec<bool>>, u64)) -> Result<()> {
    let mut body = format!("# parent {parent} candidates={}\n", found.1);
    for b in &found.0 {
        body.push_str(&bits_string(b));
        body.push('\n');
    }
    body.push_str("# end\n");
    write_atomic(&checkpoint_path(dir, i), body.as_bytes())
}

/// A checkpoint is used only if it is complete and belongs to this parent.
fn read_checkpoint(dir: &Path, i: usize, parent: &Encoding) -> Result<Option<(Vec<Vec<bool>>, u64)>> {
    let path = checkpoint_path(dir, i);
    let Ok(text) = fs::read_to_string(&path) else { return Ok(None) };
    let mut lines = text.lines();
    let head = format!("# parent {parent} candidates=");
    let Some(count) = lines.next().and_then(|l| l.strip_prefix(&head)).and_then(|c| c.parse().ok()) else {
        return Ok(None);
    };
    let mut found = Vec::new();
    for l in lines {
        if l == "# end" {
            return Ok(Some((found, count)));
        }
        match parse_bits(l) {
            Some(b) => found.push(b),
            None => return Ok(None),
        }
    }
    Ok(None)
}

/// Write via a temporary file in the same directory, then rename.
pub(crate) fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn cell_file_name(q: u8, n: usize, k: usize) -> String {
    format!("q{q}_n{n}_k{k}.qmc")
}

/// Body of a result file.
pub fn format_cell(q: u8, n: usize, k: usize, encs: &[Encoding]) -> String {
    let mut body = format!("# qmat-classes v1 q={q} n={n} k={k} count={}\n", encs.len());
    for e in encs {
        body.push_str(&e.bitstring());
        body.push('\n');
    }
    body
}

fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

fn save_cell(dir: &Path, q: u8, n: usize, k: usize, encs: &[Encoding]) -> Result<()> {
    let name = cell_file_name(q, n, k);
    let body = format_cell(q, n, k, encs);
    write_atomic(&dir.join(&name), body.as_bytes())?;
    let side = format!("{}  {name}\n", sha256_hex(body.as_bytes()));
    write_atomic(&dir.join(format!("{name}.sha256")), side.as_bytes())
}

/// One parsed result file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFile {
    pub q: u8,
    pub n: usize,
    pub k: usize,
    pub encodings: Vec<Encoding>,
}

/// Parse a result file body: header, count, bit lengths, strict ascending
/// order. Does not check canonicality.
pub fn parse_cell(text: &str) -> Result<ClassFile> {
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| Error::Input("empty class file".into()))?;
    let rest = head
        .strip_prefix("# qmat-classes v1 ")
        .ok_or_else(|| Error::Input("missing `# qmat-classes v1` header".into()))?;
    let (params, count) = rest.rsplit_once(" count=").ok_or_else(|| Error::Input("header lacks count=".into()))?;
    let (q, n, k) = crate::encoding::parse_params(params)?;
    check_params(q, n, k)?;
    if count.is_empty() || count.len() > 9 || !count.bytes().all(|b| b.is_ascii_digit()) {
        return input(format!("bad count {count:?}"));
    }
    let count: usize = count.parse().expect("checked digits");
    let len = gaussian_binomial(n, k, q as u64) as usize;
    let mut encodings: Vec<Encoding> = Vec::new();
    for line in lines {
        if line.len() != len {
            return input(format!("encoding of length {} where {len} expected", line.len()));
        }
        let e = Encoding::from_bitstring(q as u8, n, k, line)?;
        if encodings.last().is_some_and(|p| *p >= e) {
            return input("encodings are not strictly ascending");
        }
        encodings.push(e);
    }
    if encodings.len() != count {
        return input(format!("header says {count} encodings, file has {}", encodings.len()));
    }
    Ok(ClassFile { q: q as u8, n, k, encodings })
}

/// Number of entries whose canonicality is re-checked on load.
pub const LOAD_SAMPLE: usize = 4;

/// Load and verify one result file: sidecar checksum, format, name, and
/// canonicality of a sample chosen from the checksum.
pub fn load_cell(path: &Path) -> Result<ClassFile> {
    let bad = |reason: String| Error::Integrity { path: path.to_path_buf(), reason };
    let data = fs::read(path)?;
    let side_path = PathBuf::from(format!("{}.sha256", path.display()));
    let side = fs::read_to_string(&side_path).map_err(|e| bad(format!("checksum sidecar unreadable: {e}")))?;
    let want = side.split_whitespace().next().unwrap_or("");
    let got = sha256_hex(&data);
    if want != got {
        return Err(bad(format!("checksum mismatch: expected {want}, found {got}")));
    }
    let text = std::str::from_utf8(&data).map_err(|_| bad("not UTF-8".into()))?;
    let cell = parse_cell(text).map_err(|e| bad(e.to_string()))?;
    let expected_name = cell_file_name(cell.q, cell.n, cell.k);
    if path.file_name().and_then(|f| f.to_str()) != Some(expected_name.as_str()) {
        return Err(bad(format!("contents are for {expected_name}")));
    }
    let amb = AmbientSpace::shared(cell.q, cell.n)?;
    let digest = Sha256::digest(&data);
    let total = cell.encodings.len();
    let picks: BTreeSet<usize> = (0..LOAD_SAMPLE.min(total))
        .map(|i| u32::from_le_bytes(digest[4 * i..4 * i + 4].try_into().unwrap()) as usize % total)
        .collect();
    for i in picks {
        let e = &cell.encodings[i];
        QMatroid::decode(e).map_err(|err| bad(format!("entry {i}: {err}")))?;
        if !check_bits(&amb, cell.k, e.bits(), false, true).canonical {
            return Err(bad(format!("entry {i} is not canonical")));
        }
    }
    Ok(cell)
}
