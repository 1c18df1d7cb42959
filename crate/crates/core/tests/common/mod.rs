//! Slow, independent reference implementations used to cross-check the
//! library. Everything here works from the indexing formulas directly and
//! shares no code with the library's algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

/// Endpoints of every edge, by edge index: horizontal edges `i*m + j`
/// join `(i,j)` to `(i,j+1)`, vertical edges `nm + i*m + j` join `(i,j)` to
/// the square below, which for the last row is `(0, j+r)`.
pub fn edge_ends(n: usize, m: usize, r: usize) -> Vec<(usize, usize)> {
    let v = |i: usize, j: usize| i * m + j % m;
    let mut ends = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            ends.push((v(i, j), v(i, j + 1)));
        }
    }
    for i in 0..n {
        for j in 0..m {
            let below = if i + 1 < n { v(i + 1, j) } else { v(0, j + r) };
            ends.push((v(i, j), below));
        }
    }
    ends
}

/// Edge slots of face `(i,j)`: top, bottom, left, right.
pub fn face_slots(n: usize, m: usize, r: usize, i: usize, j: usize) -> [usize; 4] {
    let nm = n * m;
    let top = i * m + j;
    let bottom = if i + 1 < n { (i + 1) * m + j } else { (j + r) % m };
    [top, bottom, nm + i * m + j, nm + i * m + (j + 1) % m]
}

/// All perfect matchings as sorted edge lists, by plain recursion.
pub fn all_matchings(n: usize, m: usize, r: usize) -> Vec<Vec<usize>> {
    let ends = edge_ends(n, m, r);
    let nv = n * m;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, &(a, b)) in ends.iter().enumerate() {
        if a != b {
            incident[a].push(e);
            incident[b].push(e);
        }
    }
    let mut out = Vec::new();
    let mut covered = vec![false; nv];
    let mut chosen = Vec::new();
    fn rec(
        ends: &[(usize, usize)],
        incident: &[Vec<usize>],
        covered: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            let mut s = chosen.clone();
            s.sort_unstable();
            out.push(s);
            return;
        };
        for &e in &incident[v] {
            let (a, b) = ends[e];
            let w = if a == v { b } else { a };
            if covered[w] {
                continue;
            }
            covered[v] = true;
            covered[w] = true;
            chosen.push(e);
            rec(ends, incident, covered, chosen, out);
            chosen.pop();
            covered[v] = false;
            covered[w] = false;
        }
    }
    if nv.is_multiple_of(2) {
        rec(&ends, &incident, &mut covered, &mut chosen, &mut out);
    }
    out
}

/// 2-colouring by breadth-first search; `false` as soon as an edge joins two
/// vertices of the same colour (an odd cycle).
pub fn bipartite_by_search(n: usize, m: usize, r: usize) -> bool {
    let ends = edge_ends(n, m, r);
    let nv = n * m;
    let mut adj = vec![Vec::new(); nv];
    for &(a, b) in &ends {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color = vec![u8::MAX; nv];
    for s in 0..nv {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    q.push_back(y);
                } else if color[y] == color[x] {
                    return false;
                }
            }
        }
    }
    true
}

/// Component label per matching, found by breadth-first search where two
/// matchings are adjacent iff they differ in exactly the four slots of a face.
pub fn bfs_components(n: usize, m: usize, r: usize, matchings: &[Vec<usize>]) -> Vec<usize> {
    let index: HashMap<&Vec<usize>, usize> =
        matchings.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in 0..m {
            faces.push(face_slots(n, m, r, i, j));
        }
    }
    let neighbours = |t: &Vec<usize>| -> Vec<usize> {
        let set: HashSet<usize> = t.iter().copied().collect();
        let mut out = Vec::new();
        for &[top, bottom, left, right] in &faces {
            for (have, swap) in [([top, bottom], [left, right]), ([left, right], [top, bottom])] {
                if have[0] != have[1]
                    && swap[0] != swap[1]
                    && set.contains(&have[0])
                    && set.contains(&have[1])
                {
                    let mut u: Vec<usize> =
                        t.iter().copied().filter(|e| !have.contains(e)).collect();
                    u.extend(swap);
                    u.sort_unstable();
                    if let Some(&k) = index.get(&u) {
                        out.push(k);
                    }
                }
            }
        }
        out
    };
    let mut label = vec![usize::MAX; matchings.len()];
    let mut next = 0;
    for s in 0..matchings.len() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for y in neighbours(&matchings[x]) {
                if label[y] == usize::MAX {
                    label[y] = next;
                    q.push_back(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Forcing number and lexicographically smallest minimum forcing set of
/// `matchings[idx]`, growing subsets by size and testing each against every
/// other matching.
pub fn brute_force_forcing(matchings: &[Vec<usize>], idx: usize) -> (u32, Vec<usize>) {
    let me = &matchings[idx];
    let k = me.len();
    let pos: HashMap<usize, usize> = me.iter().enumerate().map(|(p, &e)| (e, p)).collect();
    // For every other matching, the positions of `me` it shares.
    let shared: Vec<u64> = matchings
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != idx)
        .map(|(_, t)| t.iter().filter_map(|e| pos.get(e)).fold(0u64, |a, &p| a | 1 << p))
        .collect();
    let forces = |s: u64| shared.iter().all(|&c| s & !c != 0);
    for size in 0..=k {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let s = combo.iter().fold(0u64, |a, &p| a | 1 << p);
            if forces(s) {
                return (size as u32, combo.iter().map(|&p| me[p]).collect());
            }
            // Next combination in lexicographic order.
            let Some(i) = (0..size).rev().find(|&i| combo[i] < k - size + i) else {
                break;
            };
            combo[i] += 1;
            for t in i + 1..size {
                combo[t] = combo[t - 1] + 1;
            }
        }
    }
    unreachable!("the full matching always forces itself")
}

/// Every spec in the sweep box `n <= 6`, `m <= 8` with an even number of
/// squares (odd areas have no tilings).
pub fn sweep_specs() -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for n in 1..=6u32 {
        for m in 2..=8u32 {
            for r in 1..=m {
                if (n * m) % 2 == 0 {
                    out.push((n, m, r));
                }
            }
        }
    }
    out
}
