//! Quadriculated tori `T(n,m,r)`.
//!
//! The torus is an `n x m` grid of vertices `v(i,j)` with the left and right
//! sides glued and the bottom row glued to the top row with a shift of `r`
//! columns: `v(n-1,j)` is adjacent to `v(0,j+r)`.
//!
//! Indexing is fixed so that tilings, caches and golden files stay stable:
//!
//! * vertex `v(i,j)` has index `i*m + j`;
//! * horizontal edge `H(i,j) = v(i,j) v(i,j+1)` has index `i*m + j`;
//! * vertical edge `V(i,j)` has index `n*m + i*m + j`. It joins `v(i,j)` to
//!   `v(i+1,j)` for `i < n-1` and `v(n-1,j)` to `v(0,(j+r) mod m)` on the seam;
//! * face `(i,j)` has top-left corner `v(i,j)` and index `i*m + j`.
//!
//! Edges are identified by structure, not by their end points, so loops and
//! parallel edges of degenerate tori are kept as distinct objects.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiling::Tiling;

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The triple `(n, m, r)` naming a quadriculated torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct TorusSpec {
    n: u32,
    m: u32,
    r: u32,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    n: u32,
    m: u32,
    r: u32,
}

impl TryFrom<SpecRepr> for TorusSpec {
    type Error = Error;
    fn try_from(s: SpecRepr) -> Result<Self> {
        TorusSpec::new(s.n, s.m, s.r)
    }
}

impl From<TorusSpec> for SpecRepr {
    fn from(s: TorusSpec) -> Self {
        SpecRepr {
            n: s.n,
            m: s.m,
            r: s.r,
        }
    }
}

impl TorusSpec {
    pub fn new(n: u32, m: u32, r: u32) -> Result<Self> {
        let invalid = |reason| Error::InvalidSpec {
            n: n.into(),
            m: m.into(),
            r: r.into(),
            reason,
        };
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if m < 2 {
            return Err(invalid("m must be at least 2"));
        }
        if r == 0 || r > m {
            return Err(invalid("r must satisfy 1 <= r <= m"));
        }
        Ok(TorusSpec { n, m, r })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `gcd(r, m)`, the number of I-cycles.
    pub fn g(&self) -> u32 {
        gcd(self.r.into(), self.m.into()) as u32
    }

    pub fn vertex_count(&self) -> usize {
        self.n as usize * self.m as usize
    }

    pub fn edge_count(&self) -> usize {
        2 * self.vertex_count()
    }

    /// Bipartite iff `m` and `n + r` are both even.
    pub fn is_bipartite(&self) -> bool {
        self.m.is_multiple_of(2) && (self.n + self.r).is_multiple_of(2)
    }

    /// A torus with an odd number of squares has no tiling at all.
    pub fn has_even_area(&self) -> bool {
        self.vertex_count().is_multiple_of(2)
    }

    pub fn is_simple(&self) -> bool {
        Torus::new(*self).is_simple()
    }

    /// The dual representation `T*(n,m,r)` of the same torus.
    ///
    /// Fails when the dual has a single column, which happens exactly for
    /// `T(1,m,m)`.
    pub fn dual(&self) -> Result<TorusSpec> {
        let d = dual_params(self.n, self.m, self.r);
        TorusSpec::new(d.n, d.m, d.r)
    }
}

impl fmt::Display for TorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{},{})", self.n, self.m, self.r)
    }
}

impl FromStr for TorusSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::SpecSyntax(s.to_string());
        let body = s
            .trim()
            .strip_prefix("T(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<u32> = body
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match parts[..] {
            [n, m, r] => TorusSpec::new(n, m, r),
            _ => Err(bad()),
        }
    }
}

/// Parameters of `T*(n,m,r)` together with the multiplier `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualParams {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    pub k: u32,
}

/// `T*(n,m,r) = T(g, mn/g, (m/g - k) n)` with `g = gcd(r,m)` and `k` the
/// unique `0 <= k < m/g` with `g = r k (mod m)`.
///
/// Works on raw triples with `n, m >= 1`, since the dual of a valid spec may
/// have a single column.
pub fn dual_params(n: u32, m: u32, r: u32) -> DualParams {
    assert!(n >= 1 && m >= 1 && (1..=m).contains(&r), "bad triple ({n},{m},{r})");
    let (n64, m64, r64) = (u64::from(n), u64::from(m), u64::from(r));
    let g = gcd(r64, m64);
    let period = m64 / g;
    let mut found = None;
    for k in 0..period {
        if (r64 * k) % m64 == g % m64 {
            assert!(found.is_none(), "multiplier k is not unique for ({n},{m},{r})");
            found = Some(k);
        }
    }
    let k = found.expect("gcd(r,m) is always a multiple of r modulo m");
    DualParams {
        n: g as u32,
        m: (m64 * n64 / g) as u32,
        r: ((period - k) * n64) as u32,
        k: k as u32,
    }
}

/// Cycle decomposition of `j -> j + r (mod m)`, each cycle listed from its
/// smallest element in successor order. Cycles are sorted by first element.
pub fn cycle_structure(m: u32, r: u32) -> Vec<Vec<u32>> {
    assert!(m >= 1 && (1..=m).contains(&r));
    let mut seen = vec![false; m as usize];
    let mut cycles = Vec::new();
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j as usize] {
            seen[j as usize] = true;
            cycle.push(j);
            j = (j + r) % m;
        }
        cycles.push(cycle);
    }
    cycles
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

/// A structural edge. `ends[0]` is the tail in the canonical direction
/// (rightward for horizontal edges, downward for vertical ones).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub i: u32,
    pub j: u32,
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn is_seam(&self, n: u32) -> bool {
        self.kind == EdgeKind::Vertical && self.i == n - 1
    }
}

/// Slots of a unit square. Its boundary, walked clockwise from the top-left
/// corner, is `top` forward, `right` forward, `bottom` backward, `left`
/// backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub i: u32,
    pub j: u32,
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

impl Face {
    pub fn slots(&self) -> [usize; 4] {
        [self.top, self.bottom, self.left, self.right]
    }
}

/// Full incidence structure of `T(n,m,r)`.
#[derive(Clone, Debug)]
pub struct Torus {
    spec: TorusSpec,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    /// Per vertex: edge going right, edge coming from the left, edge going
    /// down, edge coming from above.
    incidence: Vec<[usize; 4]>,
}

impl Torus {
    pub fn new(spec: TorusSpec) -> Self {
        let (n, m, r) = (spec.n, spec.m, spec.r);
        let nm = spec.vertex_count();
        let vid = |i: u32, j: u32| (i as usize) * (m as usize) + (j % m) as usize;

        let mut edges = Vec::with_capacity(2 * nm);
        for i in 0..n {
            for j in 0..m {
                edges.push(Edge {
                    kind: EdgeKind::Horizontal,
                    i,
                    j,
                    ends: [vid(i, j), vid(i, j + 1)],
                });
            }
        }
        for i in 0..n {
            for j in 0..m {
                let head = if i + 1 < n { vid(i + 1, j) } else { vid(0, j + r) };
                edges.push(Edge {
                    kind: EdgeKind::Vertical,
                    i,
                    j,
                    ends: [vid(i, j), head],
                });
            }
        }

        let h = |i: u32, j: u32| (i as usize) * (m as usize) + (j % m) as usize;
        let v = |i: u32, j: u32| nm + (i as usize) * (m as usize) + (j % m) as usize;
        let mut faces = Vec::with_capacity(nm);
        for i in 0..n {
            for j in 0..m {
                let bottom = if i + 1 < n { h(i + 1, j) } else { h(0, j + r) };
                faces.push(Face {
                    i,
                    j,
                    top: h(i, j),
                    bottom,
                    left: v(i, j),
                    right: v(i, j + 1),
                });
            }
        }

        let mut incidence = vec![[usize::MAX; 4]; nm];
        for (e, edge) in edges.iter().enumerate() {
            let (out_slot, in_slot) = match edge.kind {
                EdgeKind::Horizontal => (0, 1),
                EdgeKind::Vertical => (2, 3),
            };
            incidence[edge.ends[0]][out_slot] = e;
            incidence[edge.ends[1]][in_slot] = e;
        }
        debug_assert!(incidence.iter().all(|s| s.iter().all(|&e| e != usize::MAX)));

        Torus {
            spec,
            edges,
            faces,
            incidence,
        }
    }

    pub fn spec(&self) -> TorusSpec {
        self.spec
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    pub fn r(&self) -> u32 {
        self.spec.r
    }

    pub fn vertex_count(&self) -> usize {
        self.spec.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn vertex(&self, i: u32, j: u32) -> usize {
        (i % self.n()) as usize * self.m() as usize + (j % self.m()) as usize
    }

    pub fn coords(&self, v: usize) -> (u32, u32) {
        let m = self.m() as usize;
        ((v / m) as u32, (v % m) as u32)
    }

    pub fn h_edge(&self, i: u32, j: u32) -> usize {
        self.vertex(i, j)
    }

    pub fn v_edge(&self, i: u32, j: u32) -> usize {
        self.vertex_count() + self.vertex(i, j)
    }

    pub fn face_index(&self, i: u32, j: u32) -> usize {
        self.vertex(i, j)
    }

    /// Edges at `v`: right, left, down, up. A loop appears twice.
    pub fn incident(&self, v: usize) -> [usize; 4] {
        self.incidence[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn right(&self, v: usize) -> usize {
        self.edges[self.incidence[v][0]].ends[1]
    }

    pub fn left(&self, v: usize) -> usize {
        self.edges[self.incidence[v][1]].ends[0]
    }

    pub fn down(&self, v: usize) -> usize {
        self.edges[self.incidence[v][2]].ends[1]
    }

    pub fn up(&self, v: usize) -> usize {
        self.edges[self.incidence[v][3]].ends[0]
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// No loops and no two edges on the same pair of vertices.
    pub fn is_simple(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.is_loop() {
                return false;
            }
            let [a, b] = e.ends;
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    /// Vertex colouring with `true` meaning black: `v(i,j)` is black iff
    /// `i + j` is odd. `None` when the torus is not bipartite.
    pub fn coloring(&self) -> Option<Vec<bool>> {
        if !self.spec.is_bipartite() {
            return None;
        }
        let colors: Vec<bool> = (0..self.vertex_count())
            .map(|v| {
                let (i, j) = self.coords(v);
                (i + j) % 2 == 1
            })
            .collect();
        debug_assert!(self
            .edges
            .iter()
            .all(|e| colors[e.ends[0]] != colors[e.ends[1]]));
        Some(colors)
    }

    /// Edge permutation induced by the column shift `v(i,j) -> v(i,j+1)`.
    pub fn phi_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Horizontal => self.h_edge(e.i, e.j + 1),
                EdgeKind::Vertical => self.v_edge(e.i, e.j + 1),
            })
            .collect()
    }

    /// Face permutation induced by the column shift.
    pub fn phi_faces(&self) -> Vec<usize> {
        self.faces
            .iter()
            .map(|f| self.face_index(f.i, f.j + 1))
            .collect()
    }

    /// Edge permutation induced by the row shift `v(i,j) -> v(i+1,j)`, which
    /// sends `v(n-1,j)` to `v(0,j+r)`. It is the column shift of the dual
    /// representation.
    pub fn psi_edges(&self) -> Vec<usize> {
        let n = self.n();
        let r = self.r();
        self.edges
            .iter()
            .map(|e| {
                let (i, j) = if e.i + 1 < n { (e.i + 1, e.j) } else { (0, e.j + r) };
                match e.kind {
                    EdgeKind::Horizontal => self.h_edge(i, j),
                    EdgeKind::Vertical => self.v_edge(i, j),
                }
            })
            .collect()
    }

    pub fn psi_faces(&self) -> Vec<usize> {
        let n = self.n();
        let r = self.r();
        self.faces
            .iter()
            .map(|f| {
                if f.i + 1 < n {
                    self.face_index(f.i + 1, f.j)
                } else {
                    self.face_index(0, f.j + r)
                }
            })
            .collect()
    }

    /// Image of a tiling under the column shift.
    pub fn phi(&self, t: &Tiling) -> Tiling {
        t.permuted(&self.phi_edges())
    }

    pub fn psi(&self, t: &Tiling) -> Tiling {
        t.permuted(&self.psi_edges())
    }

    /// I-cycles and the relabelling of vertices along them.
    pub fn i_cycles(&self) -> IcycleDecomposition {
        IcycleDecomposition::new(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct JsonEdge {
            index: usize,
            kind: EdgeKind,
            i: u32,
            j: u32,
            ends: [usize; 2],
        }
        #[derive(Serialize)]
        struct JsonFace {
            index: usize,
            i: u32,
            j: u32,
            top: usize,
            right: usize,
            bottom: usize,
            left: usize,
        }
        let vertices: Vec<[u32; 2]> = (0..self.vertex_count())
            .map(|v| {
                let (i, j) = self.coords(v);
                [i, j]
            })
            .collect();
        let edges: Vec<JsonEdge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(index, e)| JsonEdge {
                index,
                kind: e.kind,
                i: e.i,
                j: e.j,
                ends: e.ends,
            })
            .collect();
        let faces: Vec<JsonFace> = self
            .faces
            .iter()
            .enumerate()
            .map(|(index, f)| JsonFace {
                index,
                i: f.i,
                j: f.j,
                top: f.top,
                right: f.right,
                bottom: f.bottom,
                left: f.left,
            })
            .collect();
        serde_json::json!({
            "spec": self.spec.to_string(),
            "n": self.n(),
            "m": self.m(),
            "r": self.r(),
            "bipartite": self.spec.is_bipartite(),
            "simple": self.is_simple(),
            "vertices": vertices,
            "edges": edges,
            "faces": faces,
        })
    }
}

/// I-cycle structure of a torus.
///
/// Cycle `C_c` (for `c < gcd(r,m)`) consists of the columns `c, c+r, c+2r, ...`.
/// Vertex `v(i, c + t r)` gets label `t n + i + 1` on `C_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcycleDecomposition {
    pub cycles: Vec<Vec<u32>>,
    /// `(cycle, label)` for every vertex, labels starting at 1.
    pub labels: Vec<(u32, u32)>,
    /// The multiplier with `gcd(r,m) = r k (mod m)`.
    pub k: u32,
    n: u32,
    m: u32,
}

impl IcycleDecomposition {
    fn new(torus: &Torus) -> Self {
        let (n, m, r) = (torus.n(), torus.m(), torus.r());
        let g = torus.spec().g();
        let cycles: Vec<Vec<u32>> = (0..g)
            .map(|c| {
                let len = m / g;
                (0..len).map(|t| (c + t * r) % m).collect()
            })
            .collect();
        let mut labels = vec![(0, 0); torus.vertex_count()];
        for (c, cols) in cycles.iter().enumerate() {
            for (t, &col) in cols.iter().enumerate() {
                for i in 0..n {
                    labels[torus.vertex(i, col)] = (c as u32, t as u32 * n + i + 1);
                }
            }
        }
        let k = dual_params(n, m, r).k;
        IcycleDecomposition {
            cycles,
            labels,
            k,
            n,
            m,
        }
    }

    pub fn cycle_of_column(&self, j: u32) -> usize {
        self.cycles
            .iter()
            .position(|c| c.contains(&j))
            .expect("every column lies on an I-cycle")
    }

    /// Expected label of the right end of a horizontal edge whose left end
    /// has label `x` on cycle `c`.
    pub fn horizontal_partner_label(&self, c: u32, x: u32) -> u32 {
        let g = self.cycles.len() as u32;
        if c + 1 < g {
            return x;
        }
        let period = self.m / g;
        if x <= (period - self.k) * self.n {
            x + self.n * self.k
        } else {
            x - (period - self.k) * self.n
        }
    }

    /// Checks the label relation on every horizontal edge of `torus`.
    pub fn horizontal_labels_consistent(&self, torus: &Torus) -> bool {
        let g = self.cycles.len() as u32;
        torus
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::Horizontal)
            .all(|e| {
                let (cx, x) = self.labels[e.ends[0]];
                let (cy, y) = self.labels[e.ends[1]];
                cy == (cx + 1) % g && y == self.horizontal_partner_label(cx, x)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, m: u32, r: u32) -> TorusSpec {
        TorusSpec::new(n, m, r).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TorusSpec::new(0, 4, 1).is_err());
        assert!(TorusSpec::new(3, 1, 1).is_err());
        assert!(TorusSpec::new(3, 4, 0).is_err());
        assert!(TorusSpec::new(3, 4, 5).is_err());
    }

    #[test]
    fn parses_and_prints() {
        let s: TorusSpec = "T(4, 8,2)".parse().unwrap();
        assert_eq!(s, spec(4, 8, 2));
        assert_eq!(s.to_string(), "T(4,8,2)");
        assert!("T(4,8)".parse::<TorusSpec>().is_err());
        assert!("(4,8,2)".parse::<TorusSpec>().is_err());
        assert!("T(4,8,9)".parse::<TorusSpec>().is_err());
    }

    #[test]
    fn counts_of_t482() {
        let t = Torus::new(spec(4, 8, 2));
        assert_eq!(t.vertex_count(), 32);
        assert_eq!(t.edge_count(), 64);
        assert_eq!(t.face_count(), 32);
        let t = Torus::new(spec(3, 12, 4));
        assert_eq!((t.vertex_count(), t.edge_count()), (36, 72));
    }

    #[test]
    fn seam_lands_with_torsion() {
        let t = Torus::new(spec(4, 8, 2));
        let e = t.edge(t.v_edge(3, 7));
        assert_eq!(e.ends, [t.vertex(3, 7), t.vertex(0, 1)]);
        assert_eq!(t.face(t.face_index(3, 7)).bottom, t.h_edge(0, 1));
    }

    #[test]
    fn degree_four_and_two_faces_per_edge() {
        for (n, m, r) in [(4, 8, 2), (1, 4, 4), (2, 2, 2), (3, 5, 3)] {
            let t = Torus::new(spec(n, m, r));
            let mut degree = vec![0; t.vertex_count()];
            for e in t.edges() {
                degree[e.ends[0]] += 1;
                degree[e.ends[1]] += 1;
            }
            assert!(degree.iter().all(|&d| d == 4));
            let mut on_faces = vec![0; t.edge_count()];
            for f in t.faces() {
                for s in f.slots() {
                    on_faces[s] += 1;
                }
            }
            assert!(on_faces.iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn loops_on_collapsed_seam() {
        let t = Torus::new(spec(1, 4, 4));
        assert!(t.has_loops());
        assert!(!t.is_simple());
    }

    #[test]
    fn simplicity_examples() {
        assert!(spec(1, 8, 2).is_simple());
        assert!(!spec(1, 8, 4).is_simple());
        assert!(!spec(2, 2, 2).is_simple());
        assert!(spec(3, 4, 1).is_simple());
    }

    #[test]
    fn bipartite_examples() {
        assert!(spec(3, 4, 1).is_bipartite());
        assert!(!spec(3, 8, 4).is_bipartite());
        assert!(spec(4, 10, 10).is_bipartite());
        assert!(Torus::new(spec(4, 10, 10)).coloring().is_some());
        assert!(Torus::new(spec(3, 8, 4)).coloring().is_none());
    }

    #[test]
    fn cycle_structure_examples() {
        let c = cycle_structure(12, 4);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|c| c.len() == 3));
        assert_eq!(cycle_structure(8, 8).len(), 8);
        assert_eq!(cycle_structure(8, 3), vec![vec![0, 3, 6, 1, 4, 7, 2, 5]]);
    }

    #[test]
    fn i_cycles_examples() {
        let t = Torus::new(spec(3, 12, 4));
        let d = t.i_cycles();
        assert_eq!(d.cycles.len(), 4);
        assert!(d.cycles.iter().all(|c| c.len() == 3));
        assert!(d.horizontal_labels_consistent(&t));
        let d = Torus::new(spec(5, 8, 8)).i_cycles();
        assert!(d.cycles.iter().all(|c| c.len() == 1));
        let d = Torus::new(spec(5, 8, 4)).i_cycles();
        assert_eq!(d.cycles, vec![vec![0, 4], vec![1, 5], vec![2, 6], vec![3, 7]]);
    }

    #[test]
    fn worked_duals() {
        assert_eq!(
            dual_params(3, 12, 4),
            DualParams { n: 4, m: 9, r: 6, k: 1 }
        );
        assert_eq!(
            dual_params(3, 12, 10),
            DualParams { n: 2, m: 18, r: 3, k: 5 }
        );
        let s = spec(5, 8, 4);
        assert_eq!(s.dual().unwrap().dual().unwrap(), s);
        assert!(spec(1, 5, 5).dual().is_err());
    }

    #[test]
    fn translations_are_face_preserving() {
        for (n, m, r) in [(3, 4, 1), (4, 6, 3), (2, 5, 2), (1, 6, 2)] {
            let t = Torus::new(spec(n, m, r));
            for (edges, faces) in [(t.phi_edges(), t.phi_faces()), (t.psi_edges(), t.psi_faces())] {
                for (f, face) in t.faces().iter().enumerate() {
                    let img = t.face(faces[f]);
                    assert_eq!(edges[face.top], img.top);
                    assert_eq!(edges[face.bottom], img.bottom);
                    assert_eq!(edges[face.left], img.left);
                    assert_eq!(edges[face.right], img.right);
                }
            }
        }
    }
}
