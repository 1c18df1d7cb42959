//! Ladders: closed staircases of parallel dominoes, which no flip can touch.
//!
//! A horizontal domino `(a, b)` continues a staircase through the domino
//! sitting under `b` and shifted one square right (down-right), or under `a`
//! and shifted one square left (down-left). Vertical dominoes continue to the
//! right, shifted one square down or up. Following one direction is a
//! translation of the edge set, so every chain either leaves the tiling or
//! closes up into a cycle; only closed chains are ladders.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{FluxClass, Homology};
use crate::tiling::Tiling;
use crate::torus::{EdgeKind, Torus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LadderDirection {
    DownRight,
    DownLeft,
    RightDown,
    RightUp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ladder {
    pub orientation: EdgeKind,
    pub direction: LadderDirection,
    /// Dominoes in chain order, starting from the smallest edge index.
    pub dominoes: Vec<usize>,
}

impl Ladder {
    pub fn edge_set(&self) -> Vec<usize> {
        let mut s = self.dominoes.clone();
        s.sort_unstable();
        s
    }
}

/// Staircase successor maps for one torus.
#[derive(Clone, Debug)]
pub struct LadderMaps {
    maps: [(LadderDirection, Vec<usize>); 2],
}

const RIGHT: usize = 0;
const LEFT: usize = 1;
const DOWN: usize = 2;
const UP: usize = 3;

impl LadderMaps {
    pub fn new(torus: &Torus) -> Self {
        let ne = torus.edge_count();
        let mut first = vec![usize::MAX; ne];
        let mut second = vec![usize::MAX; ne];
        for (e, edge) in torus.edges().iter().enumerate() {
            let [a, b] = edge.ends;
            match edge.kind {
                EdgeKind::Horizontal => {
                    first[e] = torus.incident(torus.down(b))[RIGHT];
                    second[e] = torus.incident(torus.down(a))[LEFT];
                }
                EdgeKind::Vertical => {
                    first[e] = torus.incident(torus.right(b))[DOWN];
                    second[e] = torus.incident(torus.right(a))[UP];
                }
            }
        }
        LadderMaps {
            maps: [
                (LadderDirection::DownRight, first),
                (LadderDirection::DownLeft, second),
            ],
        }
    }

    /// All ladders of `t`. A domino can lie on ladders of both directions.
    pub fn find(&self, torus: &Torus, t: &Tiling) -> Vec<Ladder> {
        let mut out = Vec::new();
        let mut seen_sets = BTreeSet::new();
        for (k, (dir, next)) in self.maps.iter().enumerate() {
            let mut visited = vec![false; torus.edge_count()];
            for start in t.edges() {
                if visited[start] {
                    continue;
                }
                let mut chain = vec![start];
                visited[start] = true;
                let mut e = next[start];
                let mut closed = true;
                while e != start {
                    if !t.contains(e) || visited[e] {
                        closed = false;
                        break;
                    }
                    visited[e] = true;
                    chain.push(e);
                    e = next[e];
                }
                if !closed || chain.len() < 2 {
                    continue;
                }
                // An edge on a failed chain shares its orbit with the start,
                // so it can never lie on a closed one.
                let orientation = torus.edge(start).kind;
                let direction = match (orientation, k) {
                    (EdgeKind::Horizontal, _) => *dir,
                    (EdgeKind::Vertical, 0) => LadderDirection::RightDown,
                    (EdgeKind::Vertical, _) => LadderDirection::RightUp,
                };
                let pos = chain
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &e)| e)
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                chain.rotate_left(pos);
                let ladder = Ladder {
                    orientation,
                    direction,
                    dominoes: chain,
                };
                if seen_sets.insert(ladder.edge_set()) {
                    out.push(ladder);
                }
            }
        }
        out.sort_by(|x, y| x.dominoes.cmp(&y.dominoes));
        out
    }

    /// Ladders as a set of edge-index sets, for comparing tilings.
    pub fn ladder_set(&self, torus: &Torus, t: &Tiling) -> BTreeSet<Vec<usize>> {
        self.find(torus, t).iter().map(Ladder::edge_set).collect()
    }
}

/// Finest partition of the laddered dominoes of `t` into ladders: the
/// largest set of pairwise disjoint ladders covering each of them exactly
/// once. Ladders of one direction are disjoint, but a domino can sit on two
/// crossing ladders; the partition resolves that overlap.
pub fn ladder_partition(torus: &Torus, t: &Tiling) -> Vec<Ladder> {
    let ladders = find_ladders(torus, t);
    let mut covered: Vec<usize> = ladders.iter().flat_map(|l| l.dominoes.clone()).collect();
    covered.sort_unstable();
    covered.dedup();
    let mut best: Option<Vec<usize>> = None;
    let mut chosen = Vec::new();
    let mut used = BTreeSet::new();
    exact_cover(&ladders, &covered, &mut used, &mut chosen, &mut best);
    best.unwrap_or_default()
        .into_iter()
        .map(|i| ladders[i].clone())
        .collect()
}

fn exact_cover(
    ladders: &[Ladder],
    covered: &[usize],
    used: &mut BTreeSet<usize>,
    chosen: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    let Some(&first) = covered.iter().find(|e| !used.contains(e)) else {
        if best.as_ref().is_none_or(|b| chosen.len() > b.len()) {
            *best = Some(chosen.clone());
        }
        return;
    };
    for (i, l) in ladders.iter().enumerate() {
        if l.dominoes.contains(&first) && l.dominoes.iter().all(|e| !used.contains(e)) {
            used.extend(l.dominoes.iter().copied());
            chosen.push(i);
            exact_cover(ladders, covered, used, chosen, best);
            chosen.pop();
            for e in &l.dominoes {
                used.remove(e);
            }
        }
    }
}

pub fn find_ladders(torus: &Torus, t: &Tiling) -> Vec<Ladder> {
    LadderMaps::new(torus).find(torus, t)
}

/// Predicts whether two tilings of a bipartite torus share a flip component:
/// equal flux and the same ladders.
pub fn same_component_criterion(
    torus: &Torus,
    homology: &Homology,
    maps: &LadderMaps,
    t1: &Tiling,
    t2: &Tiling,
) -> Result<bool> {
    if !torus.spec().is_bipartite() {
        return Err(Error::Precondition {
            spec: torus.spec(),
            what: "the flux and ladder criterion",
            requirement: "a bipartite torus",
        });
    }
    Ok(homology.flux(torus, t1, t2)? == FluxClass::ZERO
        && maps.ladder_set(torus, t1) == maps.ladder_set(torus, t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flipgraph::{build_flip_graph, FaceMasks};
    use crate::tiling::{base_tiling, enumerate_tilings, EnumerateOptions};
    use crate::torus::TorusSpec;

    fn torus(n: u32, m: u32, r: u32) -> Torus {
        Torus::new(TorusSpec::new(n, m, r).unwrap())
    }

    #[test]
    fn singletons_of_t341_split_into_two_ladders() {
        let t = torus(3, 4, 1);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        let graph = build_flip_graph(&t, &store);
        let mut singletons = 0;
        for i in 0..store.len() {
            if graph.is_singleton(i) {
                singletons += 1;
                let x = store.tiling(i);
                let parts = ladder_partition(&t, &x);
                assert_eq!(parts.len(), 2);
                let mut all: Vec<usize> = parts.iter().flat_map(|l| l.dominoes.clone()).collect();
                all.sort_unstable();
                assert_eq!(all, x.edges().collect::<Vec<_>>());
            }
        }
        assert_eq!(singletons, 8);
    }

    #[test]
    fn ladder_dominoes_never_flip() {
        for (n, m, r) in [(3, 4, 1), (4, 4, 2), (4, 4, 4)] {
            let t = torus(n, m, r);
            let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
            let masks = FaceMasks::new(&t);
            let maps = LadderMaps::new(&t);
            for x in store.iter() {
                let laddered: BTreeSet<usize> =
                    maps.find(&t, &x).iter().flat_map(|l| l.dominoes.clone()).collect();
                for f in 0..t.face_count() {
                    if masks.flippable(x.words(), f) {
                        let y = masks.flip(&x, f).unwrap();
                        for e in x.symmetric_difference(&y).edges() {
                            assert!(!laddered.contains(&e));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ladders_are_staircases() {
        let t = torus(4, 4, 4);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        for x in store.iter() {
            for l in find_ladders(&t, &x) {
                assert!(l.dominoes.len() >= 2);
                assert!(l.dominoes.iter().all(|&e| t.edge(e).kind == l.orientation && x.contains(e)));
            }
        }
    }

    #[test]
    fn criterion_is_reflexive_and_separates_fluxes() {
        let t = torus(4, 4, 4);
        let h = Homology::new(&t).unwrap();
        let maps = LadderMaps::new(&t);
        let base = base_tiling(&t).unwrap();
        assert!(same_component_criterion(&t, &h, &maps, &base, &base).unwrap());
        // Second row shifted by one column: flux (-1, 0).
        let shifted = Tiling::from_edges(
            t.edge_count(),
            (0..4).flat_map(|i| {
                let s = u32::from(i == 1);
                [t.h_edge(i, s), t.h_edge(i, s + 2)]
            }),
        );
        assert!(!same_component_criterion(&t, &h, &maps, &base, &shifted).unwrap());
    }
}
