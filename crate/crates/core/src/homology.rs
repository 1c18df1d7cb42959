//! Tilings as 1-chains and their classes in the first homology of the torus.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiling::Tiling;
use crate::torus::{EdgeKind, Torus};

/// Integer 1-chain: one coefficient per edge, measured in the edge's
/// canonical direction (rightward / downward).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain1 {
    coeffs: Vec<i64>,
}

/// A unit move on the grid, used to describe closed walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Right,
    Left,
    Down,
    Up,
}

impl Chain1 {
    pub fn zero(edge_count: usize) -> Self {
        Chain1 {
            coeffs: vec![0; edge_count],
        }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        Chain1 { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> i64 {
        self.coeffs[e]
    }

    pub fn add_edge(&mut self, e: usize, c: i64) {
        self.coeffs[e] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Chain traced by walking from `start` along `steps`.
    pub fn walk(torus: &Torus, start: usize, steps: &[Step]) -> Self {
        let mut chain = Chain1::zero(torus.edge_count());
        let mut v = start;
        for step in steps {
            let [right, left, down, up] = torus.incident(v);
            let (e, sign) = match step {
                Step::Right => (right, 1),
                Step::Left => (left, -1),
                Step::Down => (down, 1),
                Step::Up => (up, -1),
            };
            chain.coeffs[e] += sign;
            v = if sign > 0 {
                torus.edge(e).ends[1]
            } else {
                torus.edge(e).ends[0]
            };
        }
        chain
    }

    /// Net inflow per vertex; zero everywhere iff the chain is closed.
    pub fn boundary(&self, torus: &Torus) -> Vec<i64> {
        let mut b = vec![0; torus.vertex_count()];
        for (e, &c) in self.coeffs.iter().enumerate() {
            let [tail, head] = torus.edge(e).ends;
            b[head] += c;
            b[tail] -= c;
        }
        b
    }

    pub fn is_closed(&self, torus: &Torus) -> bool {
        self.boundary(torus).iter().all(|&x| x == 0)
    }
}

impl Add for &Chain1 {
    type Output = Chain1;
    fn add(self, rhs: &Chain1) -> Chain1 {
        Chain1 {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Chain1 {
    type Output = Chain1;
    fn sub(self, rhs: &Chain1) -> Chain1 {
        Chain1 {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Chain1 {
    type Output = Chain1;
    fn neg(self) -> Chain1 {
        Chain1 {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Coordinates of a homology class in the basis `([z0], [z0'])`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct FluxClass {
    pub a: i64,
    pub b: i64,
}

impl FluxClass {
    pub const ZERO: FluxClass = FluxClass { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        FluxClass { a, b }
    }
}

impl fmt::Display for FluxClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Add for FluxClass {
    type Output = FluxClass;
    fn add(self, rhs: FluxClass) -> FluxClass {
        FluxClass::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for FluxClass {
    type Output = FluxClass;
    fn sub(self, rhs: FluxClass) -> FluxClass {
        FluxClass::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for FluxClass {
    type Output = FluxClass;
    fn neg(self) -> FluxClass {
        FluxClass::new(-self.a, -self.b)
    }
}

/// `z0`: row `n-1` walked rightward once around.
pub fn z0(torus: &Torus) -> Chain1 {
    z_row(torus, torus.n() - 1)
}

/// `z_i`: row `i` walked rightward once around.
pub fn z_row(torus: &Torus, i: u32) -> Chain1 {
    let steps = vec![Step::Right; torus.m() as usize];
    Chain1::walk(torus, torus.vertex(i, 0), &steps)
}

/// `z0'`: from `v(n-1,0)` straight up through the seam to `v(n-1,m-r)`,
/// then rightward back to `v(n-1,0)`. For `r = m` the horizontal part is
/// empty and the walk is the vertical loop of column 0.
pub fn z0_prime(torus: &Torus) -> Chain1 {
    let mut steps = vec![Step::Up; torus.n() as usize];
    steps.extend(std::iter::repeat_n(Step::Right, (torus.r() % torus.m()) as usize));
    Chain1::walk(torus, torus.vertex(torus.n() - 1, 0), &steps)
}

/// Boundary of face `f`, walked clockwise.
pub fn face_boundary(torus: &Torus, f: usize) -> Chain1 {
    let face = torus.face(f);
    let mut c = Chain1::zero(torus.edge_count());
    c.add_edge(face.top, 1);
    c.add_edge(face.right, 1);
    c.add_edge(face.bottom, -1);
    c.add_edge(face.left, -1);
    c
}

/// Chain of a tiling with every domino directed from black to white.
pub fn tiling_chain(torus: &Torus, t: &Tiling) -> Result<Chain1> {
    let colors = torus.coloring().ok_or(Error::Precondition {
        spec: torus.spec(),
        what: "a tiling chain",
        requirement: "a bipartite torus",
    })?;
    let mut c = Chain1::zero(torus.edge_count());
    for e in t.edges() {
        c.add_edge(e, if colors[torus.edge(e).ends[0]] { 1 } else { -1 });
    }
    Ok(c)
}

/// Evaluates homology classes of closed chains on one torus.
///
/// Two integer cocycles count seam crossings: `a` counts crossings of the
/// line between column `m-1` and column 0 (including torsion seam edges that
/// wrap around), `b` counts crossings of the seam between row `n-1` and row
/// 0, both positive in the canonical edge direction. The raw pair is then
/// expressed in the basis `([z0], [z0'])`.
#[derive(Clone, Debug)]
pub struct Homology {
    weight_a: Vec<i64>,
    weight_b: Vec<i64>,
    /// Inverse of the matrix with rows `raw(z0)`, `raw(z0')`.
    inverse: [[i64; 2]; 2],
}

impl Homology {
    pub fn new(torus: &Torus) -> Result<Self> {
        let n = torus.n();
        let m = torus.m();
        let shift = torus.r() % m;
        let mut weight_a = vec![0; torus.edge_count()];
        let mut weight_b = vec![0; torus.edge_count()];
        for (e, edge) in torus.edges().iter().enumerate() {
            match edge.kind {
                EdgeKind::Horizontal => weight_a[e] = i64::from(edge.j == m - 1),
                EdgeKind::Vertical if edge.i == n - 1 => {
                    weight_b[e] = 1;
                    weight_a[e] = i64::from(edge.j + shift >= m);
                }
                EdgeKind::Vertical => {}
            }
        }
        let mut h = Homology {
            weight_a,
            weight_b,
            inverse: [[1, 0], [0, 1]],
        };
        let (p, q) = h.raw(&z0(torus));
        let (s, t) = h.raw(&z0_prime(torus));
        let det = p * t - q * s;
        if det.abs() != 1 {
            return Err(Error::ClaimViolated {
                spec: torus.spec(),
                claim: "z0 and z0' form a homology basis",
                detail: format!("generator matrix [[{p},{q}],[{s},{t}]] has determinant {det}"),
            });
        }
        h.inverse = [[t * det, -q * det], [-s * det, p * det]];
        Ok(h)
    }

    fn raw(&self, c: &Chain1) -> (i64, i64) {
        let dot = |w: &[i64]| w.iter().zip(c.coeffs()).map(|(x, y)| x * y).sum::<i64>();
        (dot(&self.weight_a), dot(&self.weight_b))
    }

    /// Class of a closed chain.
    pub fn class(&self, torus: &Torus, c: &Chain1) -> Result<FluxClass> {
        if let Some(v) = c.boundary(torus).iter().position(|&x| x != 0) {
            return Err(Error::NotClosed { vertex: v });
        }
        Ok(self.class_unchecked(c))
    }

    /// Class of a chain already known to be closed.
    pub fn class_unchecked(&self, c: &Chain1) -> FluxClass {
        let (x, y) = self.raw(c);
        let inv = self.inverse;
        FluxClass::new(x * inv[0][0] + y * inv[1][0], x * inv[0][1] + y * inv[1][1])
    }

    /// `[t - base]` computed directly from the two edge sets.
    pub fn flux(&self, torus: &Torus, t: &Tiling, base: &Tiling) -> Result<FluxClass> {
        let c = &tiling_chain(torus, t)? - &tiling_chain(torus, base)?;
        Ok(self.class_unchecked(&c))
    }
}

/// Class of a closed chain on `torus`.
pub fn homology_class(torus: &Torus, c: &Chain1) -> Result<FluxClass> {
    Homology::new(torus)?.class(torus, c)
}

/// `Flux(t) = [t - base]`.
pub fn flux(torus: &Torus, t: &Tiling, base: &Tiling) -> Result<FluxClass> {
    Homology::new(torus)?.flux(torus, t, base)
}

/// True when the fluxes differ, which certifies that the tilings lie in
/// different flip components.
pub fn flux_separates(torus: &Torus, t1: &Tiling, t2: &Tiling, base: &Tiling) -> Result<bool> {
    let h = Homology::new(torus)?;
    Ok(h.flux(torus, t1, base)? != h.flux(torus, t2, base)?)
}

/// Face coefficients `a` with `c = sum_f a_f * boundary(f)`, normalised so
/// that face 0 has coefficient 0, or `None` if `c` is not a boundary.
pub fn boundary_decomposition(torus: &Torus, c: &Chain1) -> Option<Vec<i64>> {
    let nf = torus.face_count();
    // Each edge enters one face boundary positively (top/right) and one
    // negatively (bottom/left).
    let mut plus = vec![usize::MAX; torus.edge_count()];
    let mut minus = vec![usize::MAX; torus.edge_count()];
    let mut face_edges: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (f, face) in torus.faces().iter().enumerate() {
        plus[face.top] = f;
        plus[face.right] = f;
        minus[face.bottom] = f;
        minus[face.left] = f;
        face_edges[f].extend(face.slots());
    }
    let mut coef: Vec<Option<i64>> = vec![None; nf];
    coef[0] = Some(0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let af = coef[f].expect("queued faces are assigned");
        for &e in &face_edges[f] {
            let (g, ag) = if plus[e] == f {
                (minus[e], af - c.coeff(e))
            } else {
                (plus[e], af + c.coeff(e))
            };
            if coef[g].is_none() {
                coef[g] = Some(ag);
                queue.push_back(g);
            }
        }
    }
    let coef: Vec<i64> = coef.into_iter().map(|x| x.unwrap_or(0)).collect();
    let mut sum = Chain1::zero(torus.edge_count());
    for (f, &a) in coef.iter().enumerate() {
        if a != 0 {
            let face = torus.face(f);
            sum.add_edge(face.top, a);
            sum.add_edge(face.right, a);
            sum.add_edge(face.bottom, -a);
            sum.add_edge(face.left, -a);
        }
    }
    (sum == *c).then_some(coef)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{base_tiling, enumerate_tilings, EnumerateOptions};
    use crate::torus::TorusSpec;

    fn torus(n: u32, m: u32, r: u32) -> Torus {
        Torus::new(TorusSpec::new(n, m, r).unwrap())
    }

    #[test]
    fn generators_normalise() {
        for (n, m, r) in [(4, 4, 4), (3, 4, 1), (7, 4, 1), (5, 6, 3), (3, 5, 2), (2, 6, 6)] {
            let t = torus(n, m, r);
            let h = Homology::new(&t).unwrap();
            assert_eq!(h.class(&t, &z0(&t)).unwrap(), FluxClass::new(1, 0));
            assert_eq!(h.class(&t, &z0_prime(&t)).unwrap(), FluxClass::new(0, 1));
            for i in 0..n {
                assert_eq!(h.class(&t, &(&z_row(&t, i) - &z0(&t))).unwrap(), FluxClass::ZERO);
            }
        }
    }

    #[test]
    fn face_boundaries_are_null() {
        for (n, m, r) in [(4, 4, 4), (3, 4, 1), (3, 6, 5), (1, 6, 2), (5, 3, 2)] {
            let t = torus(n, m, r);
            let h = Homology::new(&t).unwrap();
            for f in 0..t.face_count() {
                let b = face_boundary(&t, f);
                assert!(b.is_closed(&t));
                assert_eq!(h.class(&t, &b).unwrap(), FluxClass::ZERO);
                assert!(boundary_decomposition(&t, &b).is_some());
            }
        }
    }

    #[test]
    fn z0_is_not_a_boundary() {
        let t = torus(4, 4, 4);
        assert!(boundary_decomposition(&t, &z0(&t)).is_none());
        assert!(boundary_decomposition(&t, &Chain1::zero(t.edge_count())).is_some());
    }

    #[test]
    fn open_chain_is_rejected() {
        let t = torus(4, 4, 4);
        let c = Chain1::walk(&t, 0, &[Step::Right]);
        assert!(matches!(homology_class(&t, &c), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn tiling_differences_are_closed() {
        let t = torus(3, 4, 1);
        let store = enumerate_tilings(&t, EnumerateOptions::default()).unwrap();
        let base = base_tiling(&t).unwrap();
        let cb = tiling_chain(&t, &base).unwrap();
        for x in store.iter() {
            let c = tiling_chain(&t, &x).unwrap();
            assert!((&c - &cb).is_closed(&t));
            assert!((&c - &c).is_zero());
        }
    }

    #[test]
    fn base_has_zero_flux() {
        let t = torus(4, 4, 4);
        let base = base_tiling(&t).unwrap();
        assert_eq!(flux(&t, &base, &base).unwrap(), FluxClass::ZERO);
        assert!(!flux_separates(&t, &base, &base, &base).unwrap());
    }

    #[test]
    fn non_bipartite_chain_rejected() {
        let t = torus(3, 4, 2);
        let base = base_tiling(&t).unwrap();
        assert!(tiling_chain(&t, &base).is_err());
    }
}
