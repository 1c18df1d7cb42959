//! Forcing numbers and forcing spectra.
//!
//! A subset `S` of a perfect matching `M` forces `M` exactly when every
//! `M`-alternating cycle contains an edge of `S`: an alternating cycle that
//! misses `S` can be rotated to give a second matching containing `S`. The
//! forcing number is therefore a minimum hitting set over alternating
//! cycles. The solver grows a family of cycles lazily: it picks the
//! lexicographically first hitting set of the current size, asks an oracle
//! for an alternating cycle avoiding it, and adds that cycle until the
//! oracle finds none.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flipgraph::FaceMasks;
use crate::tiling::{count_completions, Tiling, TilingStore, Words};
use crate::torus::Torus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcingResult {
    pub index: Option<usize>,
    pub forcing_number: u32,
    /// Lexicographically smallest minimum forcing set, as edge indices.
    pub witness: Vec<usize>,
}

/// Shared per-torus data for forcing computations.
#[derive(Debug)]
pub struct ForcingSolver<'a> {
    torus: &'a Torus,
    adj: Vec<Vec<(usize, usize)>>,
    colors: Option<Vec<bool>>,
    masks: FaceMasks,
    verify: bool,
}

const NONE: usize = usize::MAX;

/// One matching, with edges addressed by their position in sorted order.
struct Instance {
    edges: Vec<usize>,
    /// Position of the matching edge covering each vertex.
    pos_of_vertex: Vec<usize>,
    /// Bipartite case: arcs between positions through one non-matching edge.
    arcs: Option<Vec<u64>>,
}

impl<'a> ForcingSolver<'a> {
    pub fn new(torus: &'a Torus) -> Result<Self> {
        if torus.vertex_count() > 128 {
            return Err(Error::TooManyEdges {
                spec: torus.spec(),
                edges: torus.vertex_count() / 2,
                max: 64,
            });
        }
        let mut adj = vec![Vec::new(); torus.vertex_count()];
        for (e, edge) in torus.edges().iter().enumerate() {
            if edge.is_loop() {
                continue;
            }
            let [a, b] = edge.ends;
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        Ok(ForcingSolver {
            torus,
            adj,
            colors: torus.coloring(),
            masks: FaceMasks::new(torus),
            verify: true,
        })
    }

    /// Skip the constrained-enumeration check of each witness.
    pub fn without_verification(mut self) -> Self {
        self.verify = false;
        self
    }

    fn instance(&self, t: &Tiling) -> Instance {
        let edges: Vec<usize> = t.edges().collect();
        let mut pos_of_vertex = vec![NONE; self.torus.vertex_count()];
        for (p, &e) in edges.iter().enumerate() {
            for v in self.torus.edge(e).ends {
                pos_of_vertex[v] = p;
            }
        }
        let arcs = self.colors.as_ref().map(|colors| {
            let mut arcs = vec![0u64; edges.len()];
            for (e, edge) in self.torus.edges().iter().enumerate() {
                if t.contains(e) || edge.is_loop() {
                    continue;
                }
                let [a, b] = edge.ends;
                let (black, white) = if colors[a] { (a, b) } else { (b, a) };
                arcs[pos_of_vertex[white]] |= 1 << pos_of_vertex[black];
            }
            arcs
        });
        Instance {
            edges,
            pos_of_vertex,
            arcs,
        }
    }

    /// Alternating 4-cycles, i.e. flippable faces.
    fn face_cycles(&self, t: &Tiling, inst: &Instance) -> Vec<u64> {
        let mut out = Vec::new();
        for f in 0..self.masks.face_count() {
            if !self.masks.flippable(t.words(), f) {
                continue;
            }
            let face = self.torus.face(f);
            let mut mask = 0u64;
            for e in face.slots() {
                if t.contains(e) {
                    let v = self.torus.edge(e).ends[0];
                    mask |= 1 << inst.pos_of_vertex[v];
                }
            }
            out.push(mask);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// A short alternating cycle avoiding every edge in `chosen`, as a mask
    /// of the matching edges it uses.
    fn find_cycle(&self, inst: &Instance, chosen: u64) -> Option<u64> {
        match &inst.arcs {
            Some(arcs) => shortest_directed_cycle(arcs, chosen),
            None => self.shortest_blossom_cycle(inst, chosen),
        }
    }

    fn shortest_blossom_cycle(&self, inst: &Instance, chosen: u64) -> Option<u64> {
        let nv = self.torus.vertex_count();
        let removed: Vec<bool> = (0..nv)
            .map(|v| chosen >> inst.pos_of_vertex[v] & 1 == 1)
            .collect();
        let mut mate = vec![NONE; nv];
        for &e in &inst.edges {
            let [a, b] = self.torus.edge(e).ends;
            mate[a] = b;
            mate[b] = a;
        }
        let mut best: Option<(usize, u64)> = None;
        let mut search = Blossom::new(nv);
        for (p, &e) in inst.edges.iter().enumerate() {
            if chosen >> p & 1 == 1 {
                continue;
            }
            let [u, v] = self.torus.edge(e).ends;
            mate[u] = NONE;
            mate[v] = NONE;
            let path = search.augmenting_path(&self.adj, &mate, &removed, e, u);
            mate[u] = v;
            mate[v] = u;
            if let Some(path) = path {
                let mask = path
                    .iter()
                    .fold(0u64, |acc, &x| acc | 1 << inst.pos_of_vertex[x]);
                if best.is_none_or(|(len, _)| path.len() < len) {
                    best = Some((path.len(), mask));
                }
            }
        }
        best.map(|(_, mask)| mask)
    }

    /// Exact forcing number and lexicographically smallest minimum witness.
    pub fn solve(&self, t: &Tiling) -> Result<ForcingResult> {
        let inst = self.instance(t);
        let k = inst.edges.len();
        let mut cycles = self.face_cycles(t, &inst);
        let mut size = packing_bound(&cycles, u64::MAX, 0);
        let chosen = loop {
            match first_hitting_set(&cycles, k, size) {
                None => size += 1,
                Some(s) => match self.find_cycle(&inst, s) {
                    Some(c) => cycles.push(c),
                    None => break s,
                },
            }
        };
        let witness: Vec<usize> = (0..k)
            .filter(|&p| chosen >> p & 1 == 1)
            .map(|p| inst.edges[p])
            .collect();
        if self.verify && count_completions(self.torus, &witness, 2) != 1 {
            return Err(Error::ClaimViolated {
                spec: self.torus.spec(),
                claim: "a forcing witness has a unique completion",
                detail: format!("witness {witness:?} of tiling {}", t.to_hex()),
            });
        }
        Ok(ForcingResult {
            index: None,
            forcing_number: size,
            witness,
        })
    }
}

/// Shortest directed cycle in a digraph on at most 64 nodes given by
/// out-neighbour masks; nodes in `removed` are deleted. Returns the node set.
fn shortest_directed_cycle(arcs: &[u64], removed: u64) -> Option<u64> {
    let n = arcs.len();
    let alive = !removed & if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(usize, u64)> = None;
    let mut parent = [0u8; 64];
    for s in 0..n {
        if alive >> s & 1 == 0 {
            continue;
        }
        let mut visited = 1u64 << s;
        let mut frontier = 1u64 << s;
        let mut depth = 1;
        'bfs: while frontier != 0 {
            if best.is_some_and(|(len, _)| depth >= len) {
                break;
            }
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let p = f.trailing_zeros() as usize;
                f &= f - 1;
                let out = arcs[p] & alive;
                if out >> s & 1 == 1 {
                    let mut mask = 1u64 << p;
                    let mut x = p;
                    while x != s {
                        x = parent[x] as usize;
                        mask |= 1 << x;
                    }
                    best = Some((depth, mask));
                    break 'bfs;
                }
                let mut fresh = out & !visited & !next;
                while fresh != 0 {
                    let q = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    parent[q] = p as u8;
                    next |= 1 << q;
                }
            }
            visited |= next;
            frontier = next;
            depth += 1;
        }
    }
    best.map(|(_, mask)| mask)
}

/// Greedy packing of pairwise disjoint cycles not yet hit, using only
/// positions in `avail`: a lower bound on the edges still needed.
fn packing_bound(cycles: &[u64], avail: u64, chosen: u64) -> u32 {
    let mut used = 0u64;
    let mut count = 0;
    for &c in cycles {
        if c & chosen != 0 {
            continue;
        }
        let c = c & avail;
        if c & used == 0 {
            used |= c;
            count += 1;
        }
    }
    count
}

/// Lexicographically first `size`-subset of positions `0..k` meeting every
/// cycle.
fn first_hitting_set(cycles: &[u64], k: usize, size: u32) -> Option<u64> {
    fn dfs(cycles: &[u64], k: usize, start: usize, left: u32, chosen: u64) -> Option<u64> {
        // The next pick cannot exceed the highest position of any cycle
        // still unhit, since later picks are larger still.
        let mut limit = k;
        let mut any = false;
        for &c in cycles {
            if c & chosen == 0 {
                any = true;
                let top = 63 - c.leading_zeros() as usize;
                if top < start {
                    return None;
                }
                limit = limit.min(top + 1);
            }
        }
        if !any {
            return Some(chosen);
        }
        if left == 0 {
            return None;
        }
        let avail = if start >= 64 { 0 } else { u64::MAX << start };
        if packing_bound(cycles, avail, chosen) > left {
            return None;
        }
        for p in start..limit {
            if let Some(s) = dfs(cycles, k, p + 1, left - 1, chosen | 1 << p) {
                return Some(s);
            }
        }
        None
    }
    dfs(cycles, k, 0, size, 0)
}

/// Edmonds' blossom search for an augmenting path between the two exposed
/// vertices of a near-perfect matching.
struct Blossom {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: std::collections::VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        Blossom {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: Default::default(),
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    /// Vertices of an augmenting path from `root`, skipping removed
    /// vertices and the edge `banned`.
    fn augmenting_path(
        &mut self,
        adj: &[Vec<(usize, usize)>],
        mate: &[usize],
        removed: &[bool],
        banned: usize,
        root: usize,
    ) -> Option<Vec<usize>> {
        let n = mate.len();
        self.parent.fill(NONE);
        self.used.fill(false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &(to, e) in &adj[v] {
                if e == banned || removed[to] || self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        let mut path = Vec::new();
                        let mut x = to;
                        while x != NONE {
                            let px = self.parent[x];
                            path.push(x);
                            path.push(px);
                            x = mate[px];
                        }
                        return Some(path);
                    }
                    let m = mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}

/// Forcing number of a tiling that must belong to `store`.
pub fn forcing_number(torus: &Torus, store: &TilingStore, t: &Tiling) -> Result<ForcingResult> {
    let idx = store.index_of(t).ok_or(Error::NotInStore(torus.spec()))?;
    let mut r = ForcingSolver::new(torus)?.solve(t)?;
    r.index = Some(idx);
    Ok(r)
}

/// Set of forcing numbers with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub counts: BTreeMap<u32, usize>,
}

impl Spectrum {
    pub fn values(&self) -> Vec<u32> {
        self.counts.keys().copied().collect()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Integers strictly between the minimum and maximum that do not occur.
    pub fn gaps(&self) -> Vec<u32> {
        match (self.counts.keys().next(), self.counts.keys().last()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).filter(|v| !self.counts.contains_key(v)).collect(),
            _ => Vec::new(),
        }
    }
}

pub fn is_integer_interval(s: &Spectrum) -> Result<bool> {
    if s.counts.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(s.gaps().is_empty())
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    /// Solve one tiling per orbit of the translation group and copy the
    /// value to the rest of the orbit.
    pub use_orbits: bool,
    pub verify_witnesses: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            use_orbits: true,
            verify_witnesses: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub spectrum: Spectrum,
    /// Forcing number of every tiling, by store index.
    pub forcing: Vec<u32>,
    /// Number of tilings actually solved.
    pub solved: usize,
}

/// Orbit label (index of the orbit representative) of every tiling under
/// the group generated by the column and row shifts.
pub fn translation_orbits(torus: &Torus, store: &TilingStore) -> Vec<u32> {
    let maps = [torus.phi_edges(), torus.psi_edges()];
    let mut rep = vec![u32::MAX; store.len()];
    let mut stack = Vec::new();
    let mut buf = Words::new();
    for i in 0..store.len() {
        if rep[i] != u32::MAX {
            continue;
        }
        rep[i] = i as u32;
        stack.push(i);
        while let Some(x) = stack.pop() {
            for map in &maps {
                buf.clear();
                buf.resize(store.width(), 0);
                for e in crate::tiling::iter_bits(store.words(x)) {
                    let p = map[e];
                    buf[p / 64] |= 1 << (p % 64);
                }
                let y = store
                    .index_of_words(&buf)
                    .expect("translations map tilings to tilings");
                if rep[y] == u32::MAX {
                    rep[y] = i as u32;
                    stack.push(y);
                }
            }
        }
    }
    rep
}

pub fn forcing_spectrum(
    torus: &Torus,
    store: &TilingStore,
    opts: SpectrumOptions,
) -> Result<SpectrumReport> {
    let mut solver = ForcingSolver::new(torus)?;
    solver.verify = opts.verify_witnesses;
    let reps: Vec<u32> = if opts.use_orbits {
        translation_orbits(torus, store)
    } else {
        (0..store.len() as u32).collect()
    };
    let todo: Vec<usize> = (0..store.len()).filter(|&i| reps[i] as usize == i).collect();
    let values: Vec<(usize, u32)> = todo
        .par_iter()
        .map(|&i| Ok((i, solver.solve(&store.tiling(i))?.forcing_number)))
        .collect::<Result<_>>()?;
    let mut by_rep = vec![0u32; store.len()];
    for &(i, f) in &values {
        by_rep[i] = f;
    }
    let forcing: Vec<u32> = reps.iter().map(|&r| by_rep[r as usize]).collect();
    let mut spectrum = Spectrum::default();
    for &f in &forcing {
        *spectrum.counts.entry(f).or_insert(0) += 1;
    }
    Ok(SpectrumReport {
        spectrum,
        forcing,
        solved: todo.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{canonical_horizontal, enumerate_tilings, EnumerateOptions};
    use crate::torus::TorusSpec;

    fn torus(n: u32, m: u32, r: u32) -> Torus {
        Torus::new(TorusSpec::new(n, m, r).unwrap())
    }

    #[test]
    fn interval_checks() {
        let s = |v: &[u32]| Spectrum {
            counts: v.iter().map(|&x| (x, 1)).collect(),
        };
        assert!(!is_integer_interval(&s(&[3, 5, 6, 7, 8])).unwrap());
        assert_eq!(s(&[3, 5, 6, 7, 8]).gaps(), vec![4]);
        assert!(is_integer_interval(&s(&[2, 3, 4])).unwrap());
        assert!(is_integer_interval(&s(&[7])).unwrap());
        assert!(matches!(is_integer_interval(&s(&[])), Err(Error::EmptySpectrum)));
    }

    #[test]
    fn directed_cycle_search() {
        // 0 -> 1 -> 2 -> 0 and a self loop at 3.
        let arcs = [0b10, 0b100, 0b1, 0b1000];
        assert_eq!(shortest_directed_cycle(&arcs, 0), Some(0b1000));
        assert_eq!(shortest_directed_cycle(&arcs, 0b1000), Some(0b111));
        assert_eq!(shortest_directed_cycle(&arcs, 0b1001), None);
    }

    #[test]
    fn hitting_set_is_lexicographic() {
        let cycles = [0b0011, 0b0110, 0b1100];
        assert_eq!(first_hitting_set(&cycles, 4, 1), None);
        assert_eq!(first_hitting_set(&cycles, 4, 2), Some(0b0101));
    }

    #[test]
    fn witnesses_force_uniquely() {
        for (n, m, r) in [(3, 4, 1), (3, 4, 2), (4, 4, 2)] {
            let t = torus(n, m, r);
            let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
            let solver = ForcingSolver::new(&t).unwrap();
            for x in store.iter() {
                let res = solver.solve(&x).unwrap();
                assert_eq!(res.witness.len() as u32, res.forcing_number);
                assert!(res.witness.iter().all(|&e| x.contains(e)));
                assert_eq!(count_completions(&t, &res.witness, 2), 1);
            }
        }
    }

    #[test]
    fn blossom_and_digraph_oracles_agree() {
        let t = torus(4, 4, 2);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        let solver = ForcingSolver::new(&t).unwrap();
        let mut general = ForcingSolver::new(&t).unwrap();
        general.colors = None;
        for x in store.iter() {
            assert_eq!(solver.solve(&x).unwrap(), general.solve(&x).unwrap());
        }
    }

    #[test]
    fn orbits_do_not_change_the_spectrum() {
        for (n, m, r) in [(3, 4, 1), (3, 4, 2), (4, 4, 4), (3, 6, 3)] {
            let t = torus(n, m, r);
            let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
            let fast = forcing_spectrum(&t, &store, SpectrumOptions::default()).unwrap();
            let slow = forcing_spectrum(
                &t,
                &store,
                SpectrumOptions {
                    use_orbits: false,
                    verify_witnesses: false,
                },
            )
            .unwrap();
            assert_eq!(fast.forcing, slow.forcing);
            assert!(fast.solved <= slow.solved);
        }
    }

    #[test]
    fn forcing_number_requires_membership() {
        let t = torus(3, 4, 1);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        let (m1, _) = canonical_horizontal(&t).unwrap();
        let res = forcing_number(&t, &store, &m1).unwrap();
        assert_eq!(res.index, store.index_of(&m1));
        let other = torus(3, 4, 2);
        let store2 = enumerate_tilings(&other, EnumerateOptions::default()).unwrap();
        let mut bogus = m1.clone();
        bogus.remove(m1.edges().next().unwrap());
        assert!(forcing_number(&other, &store2, &bogus).is_err());
    }
}
