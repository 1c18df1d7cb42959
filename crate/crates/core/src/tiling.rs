//! Tilings as edge bitmasks, and the exhaustive store of all tilings.

use std::fmt;

use hashbrown::HashTable;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::torus::{EdgeKind, Torus};

pub type Words = SmallVec<[u64; 2]>;

pub fn words_for(edge_count: usize) -> usize {
    edge_count.div_ceil(64)
}

/// A set of edges, bit `e` set when edge `e` is a domino of the tiling.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tiling {
    edge_count: usize,
    words: Words,
}

impl Tiling {
    pub fn empty(edge_count: usize) -> Self {
        Tiling {
            edge_count,
            words: smallvec::smallvec![0; words_for(edge_count)],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = usize>>(edge_count: usize, edges: I) -> Self {
        let mut t = Tiling::empty(edge_count);
        for e in edges {
            t.insert(e);
        }
        t
    }

    pub fn from_words(edge_count: usize, words: &[u64]) -> Self {
        assert_eq!(words.len(), words_for(edge_count));
        Tiling {
            edge_count,
            words: Words::from_slice(words),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e < self.edge_count, "edge {e} out of range");
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: usize) {
        self.words[e / 64] &= !(1 << (e % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Selected edges in increasing index order.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.words)
    }

    pub fn symmetric_difference(&self, other: &Tiling) -> Tiling {
        assert_eq!(self.edge_count, other.edge_count);
        Tiling {
            edge_count: self.edge_count,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn union(&self, other: &Tiling) -> Tiling {
        assert_eq!(self.edge_count, other.edge_count);
        Tiling {
            edge_count: self.edge_count,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Tiling) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Image under an edge permutation.
    pub fn permuted(&self, perm: &[usize]) -> Tiling {
        assert_eq!(perm.len(), self.edge_count);
        Tiling::from_edges(self.edge_count, self.edges().map(|e| perm[e]))
    }

    /// Checks that every vertex is covered exactly once and no loop is used.
    pub fn validate(&self, torus: &Torus) -> Result<()> {
        let invalid = |reason: String| Error::InvalidTiling {
            spec: torus.spec(),
            reason,
        };
        if self.edge_count != torus.edge_count() {
            return Err(invalid(format!(
                "tiling has {} edge slots, torus has {}",
                self.edge_count,
                torus.edge_count()
            )));
        }
        let mut cover = vec![0u8; torus.vertex_count()];
        for e in self.edges() {
            let edge = torus.edge(e);
            if edge.is_loop() {
                return Err(invalid(format!("loop edge {e} selected")));
            }
            for v in edge.ends {
                cover[v] += 1;
            }
        }
        if let Some(v) = cover.iter().position(|&c| c != 1) {
            return Err(invalid(format!(
                "vertex {v} covered {} times",
                cover[v]
            )));
        }
        Ok(())
    }

    /// Big-endian hexadecimal of the bitmask, `ceil(edges / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.edge_count.div_ceil(4).max(1);
        let mut s = String::with_capacity(self.words.len() * 16);
        for w in self.words.iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s[s.len() - digits..].to_string()
    }

    pub fn from_hex(edge_count: usize, hex: &str) -> Result<Tiling> {
        let hex = hex.trim().trim_start_matches("0x");
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Encoding(format!("not a hex string: {hex:?}")));
        }
        let mut t = Tiling::empty(edge_count);
        for (pos, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).expect("checked above") as u64;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let e = pos * 4 + b;
                    if e >= edge_count {
                        return Err(Error::Encoding(format!(
                            "bit {e} set but the torus has {edge_count} edges"
                        )));
                    }
                    t.insert(e);
                }
            }
        }
        Ok(t)
    }

    pub fn horizontal_count(&self, torus: &Torus) -> usize {
        self.edges()
            .filter(|&e| torus.edge(e).kind == EdgeKind::Horizontal)
            .count()
    }
}

impl fmt::Debug for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tiling({:?})", self.edges().collect::<Vec<_>>())
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + b)
        })
    })
}

pub(crate) fn hash_words(words: &[u64]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &w in words {
        h ^= w;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
        h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 29;
    }
    h
}

/// Default cap on the number of stored tilings.
pub const DEFAULT_CAP: usize = 1 << 23;

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: DEFAULT_CAP }
    }
}

/// All tilings of one torus, in enumeration order, with hashed lookup.
///
/// Tilings are stored as flat fixed-width word records.
#[derive(Clone)]
pub struct TilingStore {
    edge_count: usize,
    width: usize,
    words: Vec<u64>,
    table: HashTable<u32>,
}

impl TilingStore {
    pub fn new(edge_count: usize) -> Self {
        TilingStore {
            edge_count,
            width: words_for(edge_count),
            words: Vec::new(),
            table: HashTable::new(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.words.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self, idx: usize) -> &[u64] {
        &self.words[idx * self.width..(idx + 1) * self.width]
    }

    pub fn tiling(&self, idx: usize) -> Tiling {
        Tiling::from_words(self.edge_count, self.words(idx))
    }

    pub fn iter(&self) -> impl Iterator<Item = Tiling> + '_ {
        (0..self.len()).map(|i| self.tiling(i))
    }

    pub fn raw_words(&self) -> &[u64] {
        &self.words
    }

    pub fn index_of_words(&self, key: &[u64]) -> Option<usize> {
        let h = hash_words(key);
        self.table
            .find(h, |&i| self.words(i as usize) == key)
            .map(|&i| i as usize)
    }

    pub fn index_of(&self, t: &Tiling) -> Option<usize> {
        if t.edge_count() != self.edge_count {
            return None;
        }
        self.index_of_words(t.words())
    }

    /// Adds a tiling; returns its index and whether it was new.
    pub fn insert_words(&mut self, key: &[u64]) -> (usize, bool) {
        assert_eq!(key.len(), self.width);
        if let Some(i) = self.index_of_words(key) {
            return (i, false);
        }
        let idx = self.len();
        assert!(idx < u32::MAX as usize);
        self.words.extend_from_slice(key);
        let h = hash_words(key);
        let (words, width) = (&self.words, self.width);
        self.table.insert_unique(h, idx as u32, |&i| {
            let i = i as usize;
            hash_words(&words[i * width..(i + 1) * width])
        });
        (idx, true)
    }

    pub fn insert(&mut self, t: &Tiling) -> (usize, bool) {
        assert_eq!(t.edge_count(), self.edge_count);
        self.insert_words(t.words())
    }

    /// Rebuilds a store from raw records; fails on duplicates.
    pub fn from_raw(edge_count: usize, words: Vec<u64>) -> std::result::Result<Self, String> {
        let width = words_for(edge_count);
        if !words.len().is_multiple_of(width) {
            return Err("record stream is not a whole number of records".into());
        }
        let mut store = TilingStore::new(edge_count);
        store.words.reserve(words.len());
        for rec in words.chunks(width) {
            let (_, fresh) = store.insert_words(rec);
            if !fresh {
                return Err("duplicate record".into());
            }
        }
        Ok(store)
    }
}

impl fmt::Debug for TilingStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TilingStore")
            .field("edge_count", &self.edge_count)
            .field("len", &self.len())
            .finish()
    }
}

/// Backtracking over the lowest uncovered vertex, trying its edges in
/// increasing index order. Loops are never chosen.
struct Backtracker<'a> {
    torus: &'a Torus,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    current: Words,
}

impl<'a> Backtracker<'a> {
    fn new(torus: &'a Torus) -> Self {
        Backtracker {
            torus,
            covered: vec![false; torus.vertex_count()],
            chosen: Vec::new(),
            current: smallvec::smallvec![0; words_for(torus.edge_count())],
        }
    }

    /// Marks the forced edges; false if they overlap or include a loop.
    fn force(&mut self, edges: &[usize]) -> bool {
        for &e in edges {
            let edge = self.torus.edge(e);
            if edge.is_loop() {
                return false;
            }
            for v in edge.ends {
                if self.covered[v] {
                    return false;
                }
                self.covered[v] = true;
            }
            self.current[e / 64] |= 1 << (e % 64);
        }
        true
    }

    fn candidates(&self, v: usize) -> SmallVec<[usize; 4]> {
        let mut c: SmallVec<[usize; 4]> = self
            .torus
            .incident(v)
            .into_iter()
            .filter(|&e| {
                let edge = self.torus.edge(e);
                !edge.is_loop() && !self.covered[self.torus.other_end(e, v)]
            })
            .collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Calls `visit` for every completion; stops early when it returns false.
    fn run<F: FnMut(&[u64]) -> bool>(&mut self, start: usize, visit: &mut F) -> bool {
        let nv = self.covered.len();
        let mut v = start;
        while v < nv && self.covered[v] {
            v += 1;
        }
        if v == nv {
            return visit(&self.current);
        }
        for e in self.candidates(v) {
            let u = self.torus.other_end(e, v);
            self.covered[v] = true;
            self.covered[u] = true;
            self.current[e / 64] |= 1 << (e % 64);
            self.chosen.push(e);
            let go_on = self.run(v + 1, visit);
            self.chosen.pop();
            self.current[e / 64] &= !(1 << (e % 64));
            self.covered[v] = false;
            self.covered[u] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Enumerates every tiling of `torus`.
pub fn enumerate_tilings(torus: &Torus, opts: EnumerateOptions) -> Result<TilingStore> {
    let mut store = TilingStore::new(torus.edge_count());
    if !torus.spec().has_even_area() {
        return Ok(store);
    }
    let mut overflow = false;
    let mut bt = Backtracker::new(torus);
    bt.run(0, &mut |w| {
        if store.len() >= opts.cap {
            overflow = true;
            return false;
        }
        let (_, fresh) = store.insert_words(w);
        debug_assert!(fresh);
        true
    });
    if overflow {
        return Err(Error::StoreOverflow {
            spec: torus.spec(),
            cap: opts.cap,
        });
    }
    Ok(store)
}

/// Number of tilings containing all `forced` edges, counting at most `limit`.
pub fn count_completions(torus: &Torus, forced: &[usize], limit: usize) -> usize {
    let mut bt = Backtracker::new(torus);
    if !bt.force(forced) {
        return 0;
    }
    let mut count = 0;
    if limit == 0 {
        return 0;
    }
    bt.run(0, &mut |_| {
        count += 1;
        count < limit
    });
    count
}

/// Up to `limit` tilings containing all `forced` edges.
pub fn completions(torus: &Torus, forced: &[usize], limit: usize) -> Vec<Tiling> {
    let mut bt = Backtracker::new(torus);
    let mut out = Vec::new();
    if limit == 0 || !bt.force(forced) {
        return out;
    }
    let edge_count = torus.edge_count();
    bt.run(0, &mut |w| {
        out.push(Tiling::from_words(edge_count, w));
        out.len() < limit
    });
    out
}

fn require_even_m(torus: &Torus, what: &'static str) -> Result<()> {
    if !torus.m().is_multiple_of(2) {
        return Err(Error::Precondition {
            spec: torus.spec(),
            what,
            requirement: "an even number of columns",
        });
    }
    Ok(())
}

/// The two all-horizontal tilings `M1 = E0 ∪ E2 ∪ ...` and
/// `M2 = E1 ∪ E3 ∪ ...`, where `E_j` is the set of horizontal edges
/// between columns `j` and `j+1`.
pub fn canonical_horizontal(torus: &Torus) -> Result<(Tiling, Tiling)> {
    require_even_m(torus, "canonical horizontal tilings")?;
    let (n, m) = (torus.n(), torus.m());
    let pick = |parity: u32| {
        Tiling::from_edges(
            torus.edge_count(),
            (0..n).flat_map(|i| {
                (0..m)
                    .filter(move |j| j % 2 == parity)
                    .map(move |j| torus.h_edge(i, j))
            }),
        )
    };
    Ok((pick(0), pick(1)))
}

/// The base tiling used for flux, equal to `M1`.
pub fn base_tiling(torus: &Torus) -> Result<Tiling> {
    require_even_m(torus, "the base tiling")?;
    Ok(canonical_horizontal(torus)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::TorusSpec;

    fn torus(n: u32, m: u32, r: u32) -> Torus {
        Torus::new(TorusSpec::new(n, m, r).unwrap())
    }

    #[test]
    fn hex_round_trip() {
        let t = Tiling::from_edges(80, [0, 5, 63, 64, 79]);
        let hex = t.to_hex();
        assert_eq!(hex.len(), 20);
        assert_eq!(Tiling::from_hex(80, &hex).unwrap(), t);
        assert!(Tiling::from_hex(8, "1ff").is_err());
        assert!(Tiling::from_hex(8, "xyz").is_err());
    }

    #[test]
    fn golden_counts() {
        let count = |n, m, r| {
            enumerate_tilings(&torus(n, m, r), EnumerateOptions::default())
                .unwrap()
                .len()
        };
        assert_eq!(count(3, 4, 1), 80);
        assert_eq!(count(4, 4, 2), 260);
        assert_eq!(count(4, 4, 4), 272);
    }

    #[test]
    fn odd_area_has_no_tilings() {
        let store = enumerate_tilings(&torus(3, 5, 2), EnumerateOptions::default()).unwrap();
        assert!(store.is_empty());
    }

    #[test]
    fn cap_overflows() {
        let err = enumerate_tilings(&torus(4, 4, 4), EnumerateOptions { cap: 100 });
        assert!(matches!(err, Err(Error::StoreOverflow { cap: 100, .. })));
    }

    #[test]
    fn every_enumerated_tiling_is_valid() {
        let t = torus(4, 4, 2);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        for (i, tiling) in store.iter().enumerate() {
            tiling.validate(&t).unwrap();
            assert_eq!(store.index_of(&tiling), Some(i));
        }
    }

    #[test]
    fn loops_are_never_used() {
        let t = torus(2, 4, 4);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        assert!(!store.is_empty());
        for tiling in store.iter() {
            tiling.validate(&t).unwrap();
        }
        let t = torus(1, 4, 4);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        for tiling in store.iter() {
            assert!(tiling.edges().all(|e| !t.edge(e).is_loop()));
        }
    }

    #[test]
    fn canonical_horizontal_tilings() {
        let t = torus(5, 8, 4);
        let (m1, m2) = canonical_horizontal(&t).unwrap();
        m1.validate(&t).unwrap();
        m2.validate(&t).unwrap();
        assert!(m1.edges().all(|e| t.edge(e).j.is_multiple_of(2)));
        assert_eq!(t.phi(&m1), m2);
        let all_h = m1.union(&m2);
        assert_eq!(all_h.len(), t.vertex_count());
        assert!(all_h.edges().all(|e| t.edge(e).kind == EdgeKind::Horizontal));
        assert_eq!(base_tiling(&t).unwrap(), m1);
        assert!(canonical_horizontal(&torus(4, 5, 1)).is_err());
    }

    #[test]
    fn constrained_enumeration() {
        let t = torus(3, 4, 1);
        assert_eq!(count_completions(&t, &[], usize::MAX), 80);
        let m1 = base_tiling(&t).unwrap();
        let all: Vec<usize> = m1.edges().collect();
        assert_eq!(count_completions(&t, &all, 5), 1);
        assert_eq!(completions(&t, &all, 5), vec![m1]);
        // two edges sharing a vertex
        assert_eq!(count_completions(&t, &[t.h_edge(0, 0), t.h_edge(0, 1)], 5), 0);
    }

    #[test]
    fn phi_has_order_m() {
        let t = torus(3, 6, 2);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        let tiling = store.tiling(17);
        let mut img = tiling.clone();
        for _ in 0..6 {
            img = t.phi(&img);
            assert!(store.index_of(&img).is_some());
        }
        assert_eq!(img, tiling);
    }
}
