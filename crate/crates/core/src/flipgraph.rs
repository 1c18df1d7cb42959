//! Flips, the flip graph and its components.

use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tiling::{canonical_horizontal, Tiling, TilingStore, Words};
use crate::torus::Torus;

/// Per-face bitmasks of the horizontal pair (top, bottom) and the vertical
/// pair (left, right). A pair whose two slots are the same edge never flips.
#[derive(Clone, Debug)]
pub struct FaceMasks {
    width: usize,
    horizontal: Vec<u64>,
    vertical: Vec<u64>,
    h_ok: Vec<bool>,
    v_ok: Vec<bool>,
}

impl FaceMasks {
    pub fn new(torus: &Torus) -> Self {
        let width = crate::tiling::words_for(torus.edge_count());
        let nf = torus.face_count();
        let mut horizontal = vec![0u64; nf * width];
        let mut vertical = vec![0u64; nf * width];
        let mut h_ok = vec![false; nf];
        let mut v_ok = vec![false; nf];
        for (f, face) in torus.faces().iter().enumerate() {
            for e in [face.top, face.bottom] {
                horizontal[f * width + e / 64] |= 1 << (e % 64);
            }
            for e in [face.left, face.right] {
                vertical[f * width + e / 64] |= 1 << (e % 64);
            }
            h_ok[f] = face.top != face.bottom;
            v_ok[f] = face.left != face.right
                && !torus.edge(face.left).is_loop()
                && !torus.edge(face.right).is_loop();
        }
        FaceMasks {
            width,
            horizontal,
            vertical,
            h_ok,
            v_ok,
        }
    }

    pub fn face_count(&self) -> usize {
        self.h_ok.len()
    }

    fn h(&self, f: usize) -> &[u64] {
        &self.horizontal[f * self.width..(f + 1) * self.width]
    }

    fn v(&self, f: usize) -> &[u64] {
        &self.vertical[f * self.width..(f + 1) * self.width]
    }

    /// Both horizontal slots of face `f` are dominoes of `t`.
    pub fn horizontal_pair(&self, t: &[u64], f: usize) -> bool {
        self.h_ok[f] && contains_all(t, self.h(f))
    }

    pub fn vertical_pair(&self, t: &[u64], f: usize) -> bool {
        self.v_ok[f] && contains_all(t, self.v(f))
    }

    /// True when face `f` alternates in `t`, i.e. can be flipped.
    pub fn flippable(&self, t: &[u64], f: usize) -> bool {
        self.horizontal_pair(t, f) || self.vertical_pair(t, f)
    }

    /// Writes `t` flipped at `f` into `out`. The face must be flippable.
    pub fn flip_into(&self, t: &[u64], f: usize, out: &mut Words) {
        out.clear();
        out.extend(
            t.iter()
                .zip(self.h(f).iter().zip(self.v(f).iter()))
                .map(|(w, (h, v))| w ^ h ^ v),
        );
    }

    pub fn flip(&self, t: &Tiling, f: usize) -> Option<Tiling> {
        if !self.flippable(t.words(), f) {
            return None;
        }
        let mut out = Words::new();
        self.flip_into(t.words(), f, &mut out);
        Some(Tiling::from_words(t.edge_count(), &out))
    }
}

fn contains_all(t: &[u64], mask: &[u64]) -> bool {
    t.iter().zip(mask.iter()).all(|(w, m)| w & m == *m)
}

/// One neighbour per alternating face of `t`.
pub fn flips_of(torus: &Torus, t: &Tiling) -> Vec<(usize, Tiling)> {
    let masks = FaceMasks::new(torus);
    (0..masks.face_count())
        .filter_map(|f| masks.flip(t, f).map(|n| (f, n)))
        .collect()
}

/// Components of the flip graph over a complete store.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    component: Vec<u32>,
    sizes: Vec<u32>,
}

const CHUNK: usize = 1 << 15;

/// Labels the components of the flip graph by union-find. Every flip edge is
/// generated once, from the endpoint holding the horizontal pair.
pub fn build_flip_graph(torus: &Torus, store: &TilingStore) -> FlipGraph {
    let masks = FaceMasks::new(torus);
    let n = store.len();
    let mut uf = UnionFind::<u32>::new(n);
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let pairs: Vec<(u32, u32)> = (start..end)
            .into_par_iter()
            .flat_map_iter(|i| {
                let t = store.words(i);
                let mut buf = Words::new();
                let mut out = Vec::new();
                for f in 0..masks.face_count() {
                    if masks.horizontal_pair(t, f) {
                        masks.flip_into(t, f, &mut buf);
                        let j = store
                            .index_of_words(&buf)
                            .expect("store is closed under flips");
                        out.push((i as u32, j as u32));
                    }
                }
                out
            })
            .collect();
        for (a, b) in pairs {
            uf.union(a, b);
        }
        start = end;
    }
    let mut root_label = vec![u32::MAX; n];
    let mut component = Vec::with_capacity(n);
    let mut sizes: Vec<u32> = Vec::new();
    for i in 0..n {
        let root = uf.find_mut(i as u32) as usize;
        if root_label[root] == u32::MAX {
            root_label[root] = sizes.len() as u32;
            sizes.push(0);
        }
        let c = root_label[root];
        sizes[c as usize] += 1;
        component.push(c);
    }
    FlipGraph { component, sizes }
}

impl FlipGraph {
    pub fn tiling_count(&self) -> usize {
        self.component.len()
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    /// Component labels are numbered in order of first appearance in the store.
    pub fn component_of(&self, idx: usize) -> usize {
        self.component[idx] as usize
    }

    pub fn component_size(&self, c: usize) -> usize {
        self.sizes[c] as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sizes.iter().map(|&s| s as usize).collect()
    }

    /// Component sizes in decreasing order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn singleton_count(&self) -> usize {
        self.sizes.iter().filter(|&&s| s == 1).count()
    }

    pub fn is_singleton(&self, idx: usize) -> bool {
        self.sizes[self.component[idx] as usize] == 1
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        self.component[a] == self.component[b]
    }

    pub fn summary(&self) -> ComponentSummary {
        let sizes = self.sorted_sizes();
        ComponentSummary {
            tilings: self.tiling_count(),
            components: self.component_count(),
            singletons: self.singleton_count(),
            largest_component: sizes.first().copied().unwrap_or(0),
            sizes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub tilings: usize,
    pub components: usize,
    pub singletons: usize,
    pub largest_component: usize,
    pub sizes: Vec<usize>,
}

/// Store indices of the flip neighbours of tiling `idx`.
pub fn neighbors(masks: &FaceMasks, store: &TilingStore, idx: usize) -> Vec<usize> {
    let t = store.words(idx);
    let mut buf = Words::new();
    let mut out: Vec<usize> = (0..masks.face_count())
        .filter(|&f| masks.flippable(t, f))
        .map(|f| {
            masks.flip_into(t, f, &mut buf);
            store
                .index_of_words(&buf)
                .expect("store is closed under flips")
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Graphviz rendering of the flip graph, coloured by component.
pub fn to_dot(torus: &Torus, store: &TilingStore, graph: &FlipGraph) -> String {
    let masks = FaceMasks::new(torus);
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{}\" {{", torus.spec());
    for i in 0..store.len() {
        let _ = writeln!(
            s,
            "  t{i} [label=\"{}\" group={}];",
            store.tiling(i).to_hex(),
            graph.component_of(i)
        );
    }
    for i in 0..store.len() {
        for j in neighbors(&masks, store, i) {
            if i < j {
                let _ = writeln!(s, "  t{i} -- t{j};");
            }
        }
    }
    s.push_str("}\n");
    s
}

/// A translation of the torus used as a component isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Translation {
    /// `v(i,j) -> v(i,j+1)`.
    Phi,
    /// `v(i,j) -> v(i+1,j)`, i.e. the column shift of the dual representation.
    Psi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoComponentReport {
    pub spec: String,
    pub tilings: usize,
    pub sizes: [usize; 2],
    pub automorphism: Translation,
    /// Whether `M1` and `M2` lie in different components; `None` for odd `m`.
    pub m1_m2_separated: Option<bool>,
}

/// Checks that a simple non-bipartite torus has exactly two flip components
/// of equal size, and that a face-preserving translation maps one onto the
/// other while preserving every flip edge.
///
/// The column shift is tried first; the row shift is the column shift of the
/// dual representation and is used when the column shift fixes both
/// components (always the case for odd `m`).
pub fn verify_two_components(
    torus: &Torus,
    store: &TilingStore,
    graph: &FlipGraph,
) -> Result<TwoComponentReport> {
    let spec = torus.spec();
    if spec.is_bipartite() || !torus.is_simple() {
        return Err(Error::Precondition {
            spec,
            what: "the two-component check",
            requirement: "a simple non-bipartite torus",
        });
    }
    let violated = |claim, detail: String| Error::ClaimViolated {
        spec,
        claim,
        detail,
    };
    if graph.component_count() != 2 {
        return Err(violated(
            "exactly two flip components",
            format!("found {} components", graph.component_count()),
        ));
    }
    let sizes = [graph.component_size(0), graph.component_size(1)];
    if sizes[0] != sizes[1] {
        return Err(violated(
            "components of equal size",
            format!("sizes {sizes:?}"),
        ));
    }

    let m1_m2_separated = if torus.m().is_multiple_of(2) {
        let (m1, m2) = canonical_horizontal(torus)?;
        let i1 = store.index_of(&m1).ok_or(Error::NotInStore(spec))?;
        let i2 = store.index_of(&m2).ok_or(Error::NotInStore(spec))?;
        Some(!graph.same_component(i1, i2))
    } else {
        None
    };
    // M1 and M2 are provably separated on T(odd, even, even).
    if torus.n() % 2 == 1 && m1_m2_separated == Some(false) {
        return Err(violated(
            "M1 and M2 lie in different components",
            "M1 and M2 share a component".into(),
        ));
    }

    let candidates = [
        (Translation::Phi, torus.phi_edges(), torus.phi_faces()),
        (Translation::Psi, torus.psi_edges(), torus.psi_faces()),
    ];
    let masks = FaceMasks::new(torus);
    for (which, edge_map, face_map) in candidates {
        if swaps_components(torus, store, graph, &edge_map)? {
            check_flip_preservation(torus, store, graph, &masks, &edge_map, &face_map)?;
            return Ok(TwoComponentReport {
                spec: spec.to_string(),
                tilings: store.len(),
                sizes,
                automorphism: which,
                m1_m2_separated,
            });
        }
    }
    Err(violated(
        "a translation maps one component onto the other",
        "neither the column shift nor the row shift swaps the components".into(),
    ))
}

fn image_words(t: &[u64], perm: &[usize], out: &mut Words) {
    out.clear();
    out.resize(t.len(), 0);
    for e in crate::tiling::iter_bits(t) {
        let p = perm[e];
        out[p / 64] |= 1 << (p % 64);
    }
}

/// True if the permutation sends every tiling of component 0 into component
/// 1 and vice versa.
fn swaps_components(
    torus: &Torus,
    store: &TilingStore,
    graph: &FlipGraph,
    perm: &[usize],
) -> Result<bool> {
    let mut buf = Words::new();
    for i in 0..store.len() {
        image_words(store.words(i), perm, &mut buf);
        let j = store.index_of_words(&buf).ok_or_else(|| Error::ClaimViolated {
            spec: torus.spec(),
            claim: "translations map tilings to tilings",
            detail: format!("image of tiling {i} missing from the store"),
        })?;
        if graph.same_component(i, j) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_flip_preservation(
    torus: &Torus,
    store: &TilingStore,
    graph: &FlipGraph,
    masks: &FaceMasks,
    edge_map: &[usize],
    face_map: &[usize],
) -> Result<()> {
    let spec = torus.spec();
    let mut img = Words::new();
    let mut flipped = Words::new();
    let mut img_of_flipped = Words::new();
    let mut flipped_img = Words::new();
    for i in 0..store.len() {
        let t = store.words(i);
        image_words(t, edge_map, &mut img);
        for (f, &g) in face_map.iter().enumerate() {
            if !masks.flippable(t, f) {
                continue;
            }
            if !masks.flippable(&img, g) {
                return Err(Error::ClaimViolated {
                    spec,
                    claim: "the translation preserves flips",
                    detail: format!("face {f} alternates in tiling {i} but its image {g} does not"),
                });
            }
            masks.flip_into(t, f, &mut flipped);
            image_words(&flipped, edge_map, &mut img_of_flipped);
            masks.flip_into(&img, g, &mut flipped_img);
            if img_of_flipped != flipped_img {
                return Err(Error::ClaimViolated {
                    spec,
                    claim: "the translation preserves flips",
                    detail: format!("flip of tiling {i} at face {f} is not mapped to a flip"),
                });
            }
            let a = store.index_of_words(&img).ok_or(Error::NotInStore(spec))?;
            let b = store
                .index_of_words(&flipped_img)
                .ok_or(Error::NotInStore(spec))?;
            if !graph.same_component(a, b) || graph.same_component(a, i) {
                return Err(Error::ClaimViolated {
                    spec,
                    claim: "the translation maps one component onto the other",
                    detail: format!("flip edge at tiling {i}, face {f}"),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{enumerate_tilings, EnumerateOptions};
    use crate::torus::TorusSpec;

    fn setup(n: u32, m: u32, r: u32) -> (Torus, TilingStore, FlipGraph) {
        let torus = Torus::new(TorusSpec::new(n, m, r).unwrap());
        let store = enumerate_tilings(&torus, EnumerateOptions::default()).unwrap();
        let graph = build_flip_graph(&torus, &store);
        (torus, store, graph)
    }

    #[test]
    fn golden_components() {
        for ((n, m, r), comps, singles) in [((3, 4, 1), 12, 8), ((4, 4, 2), 11, 4), ((4, 4, 4), 17, 12)] {
            let (_, _, g) = setup(n, m, r);
            assert_eq!((g.component_count(), g.singleton_count()), (comps, singles));
        }
    }

    #[test]
    fn flips_of_m1() {
        let torus = Torus::new(TorusSpec::new(5, 8, 4).unwrap());
        let (m1, _) = canonical_horizontal(&torus).unwrap();
        let flips = flips_of(&torus, &m1);
        // rows 0..4 stack inside the grid; the seam pairs row 4 with row 0
        // shifted by 4 columns, which keeps parity.
        assert_eq!(flips.len(), 5 * 4);
        for (f, t) in &flips {
            t.validate(&torus).unwrap();
            assert_eq!(t.symmetric_difference(&m1).len(), 4);
            let face = torus.face(*f);
            assert!(m1.contains(face.top) && m1.contains(face.bottom));
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let (torus, store, _) = setup(4, 4, 2);
        let masks = FaceMasks::new(&torus);
        for t in store.iter() {
            for (f, u) in flips_of(&torus, &t) {
                assert_eq!(masks.flip(&u, f), Some(t.clone()));
            }
        }
    }

    #[test]
    fn degree_matches_flip_count() {
        let (torus, store, _) = setup(3, 4, 1);
        let masks = FaceMasks::new(&torus);
        for i in 0..store.len() {
            let t = store.tiling(i);
            assert_eq!(neighbors(&masks, &store, i).len(), flips_of(&torus, &t).len());
        }
    }

    #[test]
    fn two_components_small() {
        for (n, m, r) in [(3, 4, 2), (5, 4, 2), (4, 3, 1), (4, 4, 1)] {
            let (torus, store, graph) = setup(n, m, r);
            let report = verify_two_components(&torus, &store, &graph).unwrap();
            assert_eq!(report.sizes[0], report.sizes[1]);
        }
        let (torus, store, graph) = setup(3, 4, 2);
        let report = verify_two_components(&torus, &store, &graph).unwrap();
        assert_eq!(report.automorphism, Translation::Phi);
        assert_eq!(report.m1_m2_separated, Some(true));
    }

    #[test]
    fn two_components_rejects_bipartite() {
        let (torus, store, graph) = setup(3, 4, 1);
        assert!(matches!(
            verify_two_components(&torus, &store, &graph),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn dot_export_mentions_every_tiling() {
        let (torus, store, graph) = setup(3, 4, 2);
        let dot = to_dot(&torus, &store, &graph);
        assert_eq!(dot.matches("label=").count(), store.len());
    }
}
