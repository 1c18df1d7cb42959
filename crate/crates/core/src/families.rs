//! Explicit tilings: universal singletons, diagonal singletons of
//! `T(2n,2n,2n)`, and the horizontal and vertical flux families.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flipgraph::FaceMasks;
use crate::homology::{FluxClass, Homology};
use crate::tiling::{base_tiling, Tiling};
use crate::torus::{Torus, TorusSpec};

/// Row and column edge sets used to assemble the named tilings.
///
/// `X_i`/`Y_i` are the even/odd horizontal edges of row `i`. `W_j` pairs
/// column `j` as rows `(0,1), (2,3), ...`; `F_j` as `(1,2), (3,4), ...`
/// inside the grid, and `F'_j` adds the seam edge ending at `v(0,j)`.
#[derive(Clone, Debug)]
pub struct EdgeFamilySets<'a> {
    torus: &'a Torus,
}

impl<'a> EdgeFamilySets<'a> {
    pub fn new(torus: &'a Torus) -> Result<Self> {
        if !torus.m().is_multiple_of(2) {
            return Err(Error::Precondition {
                spec: torus.spec(),
                what: "row and column edge families",
                requirement: "an even number of columns",
            });
        }
        Ok(EdgeFamilySets { torus })
    }

    pub fn x(&self, i: u32) -> Vec<usize> {
        (0..self.torus.m() / 2)
            .map(|k| self.torus.h_edge(i, 2 * k))
            .collect()
    }

    pub fn y(&self, i: u32) -> Vec<usize> {
        (0..self.torus.m() / 2)
            .map(|k| self.torus.h_edge(i, 2 * k + 1))
            .collect()
    }

    pub fn f(&self, j: u32) -> Vec<usize> {
        let n = self.torus.n();
        // Vertical edges leaving odd rows 1, 3, ... whose lower end stays
        // inside the grid.
        (0..n.saturating_sub(1) / 2)
            .map(|k| self.torus.v_edge(2 * k + 1, j))
            .collect()
    }

    pub fn f_prime(&self, j: u32) -> Vec<usize> {
        let (n, m, r) = (self.torus.n(), self.torus.m(), self.torus.r());
        let mut s = self.f(j);
        s.push(self.torus.v_edge(n - 1, (m - r % m + j) % m));
        s
    }

    pub fn w(&self, j: u32) -> Vec<usize> {
        (0..self.torus.n() / 2)
            .map(|k| self.torus.v_edge(2 * k, j))
            .collect()
    }
}

fn flip_free(masks: &FaceMasks, t: &Tiling) -> bool {
    (0..masks.face_count()).all(|f| !masks.flippable(t.words(), f))
}

fn require_bipartite(torus: &Torus, what: &'static str) -> Result<()> {
    if torus.spec().is_bipartite() {
        Ok(())
    } else {
        Err(Error::Precondition {
            spec: torus.spec(),
            what,
            requirement: "a bipartite torus",
        })
    }
}

fn checked(torus: &Torus, edges: Vec<usize>) -> Result<Tiling> {
    let t = Tiling::from_edges(torus.edge_count(), edges);
    t.validate(torus)?;
    Ok(t)
}

/// `t1 = X0 Y1 X2 ...`, `t2 = Y0 X1 Y2 ...`, `t3 = F'0 W1 F'2 ...`,
/// `t4 = W0 F'1 W2 ...`: four flip-free tilings of any bipartite torus with
/// `n, m >= 3`.
pub fn four_singletons(torus: &Torus) -> Result<[Tiling; 4]> {
    require_bipartite(torus, "the four singletons")?;
    if torus.n() < 3 || torus.m() < 3 {
        return Err(Error::Precondition {
            spec: torus.spec(),
            what: "the four singletons",
            requirement: "n >= 3 and m >= 3",
        });
    }
    let sets = EdgeFamilySets::new(torus)?;
    let rows = |even_x: bool| -> Vec<usize> {
        (0..torus.n())
            .flat_map(|i| {
                if (i % 2 == 0) == even_x {
                    sets.x(i)
                } else {
                    sets.y(i)
                }
            })
            .collect()
    };
    let cols = |even_f: bool| -> Vec<usize> {
        (0..torus.m())
            .flat_map(|j| {
                if (j % 2 == 0) == even_f {
                    sets.f_prime(j)
                } else {
                    sets.w(j)
                }
            })
            .collect()
    };
    let out = [
        checked(torus, rows(true))?,
        checked(torus, rows(false))?,
        checked(torus, cols(true))?,
        checked(torus, cols(false))?,
    ];
    let masks = FaceMasks::new(torus);
    if !out.iter().all(|t| flip_free(&masks, t)) {
        return Err(Error::ClaimViolated {
            spec: torus.spec(),
            claim: "the four singletons admit no flip",
            detail: "a flippable face was found".into(),
        });
    }
    ensure_distinct(torus, &out, "the four singletons are distinct")?;
    Ok(out)
}

fn ensure_distinct(torus: &Torus, ts: &[Tiling], claim: &'static str) -> Result<()> {
    let set: HashSet<&Tiling> = ts.iter().collect();
    if set.len() != ts.len() {
        return Err(Error::ClaimViolated {
            spec: torus.spec(),
            claim,
            detail: format!("{} of {} tilings are distinct", set.len(), ts.len()),
        });
    }
    Ok(())
}

/// One diagonal tiling of `T(2n,2n,2n)`: `n` diagonal bands of width two,
/// all of one slope, each filled with horizontal or vertical dominoes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalPattern {
    /// `true` for bands running down-right.
    pub ascending: bool,
    /// Column of band 0 in row 0, either 0 or 1.
    pub offset: u32,
    /// Per band, `true` for horizontal dominoes.
    pub horizontal: Vec<bool>,
}

impl DiagonalPattern {
    pub fn tiling(&self, torus: &Torus) -> Result<Tiling> {
        let size = torus.n();
        let mut edges = Vec::with_capacity(torus.vertex_count() / 2);
        for (b, &h) in self.horizontal.iter().enumerate() {
            let b = 2 * b as u32;
            for i in 0..size {
                // Column of the band's first square in row i.
                let c = if self.ascending {
                    i + self.offset + b
                } else {
                    (size - i % size) + self.offset + b
                } % size;
                edges.push(match (h, self.ascending) {
                    (true, _) => torus.h_edge(i, c),
                    (false, true) => torus.v_edge(i, c + 1),
                    (false, false) => torus.v_edge(i, c),
                });
            }
        }
        checked(torus, edges)
    }
}

/// Diagonal patterns of `T(2n,2n,2n)` grown band by band: the eight mixed
/// patterns of `T(4,4,4)` (two slopes, two offsets, bands HV or VH), each
/// extended at every step by one more band in either orientation.
pub fn diagonal_patterns(n: u32) -> Result<Vec<DiagonalPattern>> {
    if n < 2 {
        return Err(Error::InvalidSpec {
            n: i64::from(2 * n),
            m: i64::from(2 * n),
            r: i64::from(2 * n),
            reason: "diagonal singletons need n >= 2",
        });
    }
    let mut patterns = Vec::new();
    for ascending in [true, false] {
        for offset in [0, 1] {
            for first in [true, false] {
                patterns.push(DiagonalPattern {
                    ascending,
                    offset,
                    horizontal: vec![first, !first],
                });
            }
        }
    }
    for _ in 2..n {
        patterns = patterns
            .into_iter()
            .flat_map(|p| {
                [true, false].map(|h| {
                    let mut q = p.clone();
                    q.horizontal.push(h);
                    q
                })
            })
            .collect();
    }
    Ok(patterns)
}

/// `4 + 2^(n+1)` distinct flip-free tilings of `T(2n,2n,2n)`: the four
/// universal singletons followed by the diagonal patterns.
pub fn diagonal_singletons(n: u32) -> Result<(Torus, Vec<Tiling>)> {
    let patterns = diagonal_patterns(n)?;
    let torus = Torus::new(TorusSpec::new(2 * n, 2 * n, 2 * n)?);
    let mut out: Vec<Tiling> = four_singletons(&torus)?.into();
    for p in &patterns {
        out.push(p.tiling(&torus)?);
    }
    let masks = FaceMasks::new(&torus);
    if !out.iter().all(|t| flip_free(&masks, t)) {
        return Err(Error::ClaimViolated {
            spec: torus.spec(),
            claim: "diagonal tilings admit no flip",
            detail: "a flippable face was found".into(),
        });
    }
    ensure_distinct(&torus, &out, "diagonal singletons are distinct")?;
    Ok((torus, out))
}

/// `(t_k, t'_k)` for `k < floor(n/2) - 1`: all-horizontal tilings using `Y`
/// on rows `1, 3, ..., 2k+1` (`t_k`) or `0, 2, ..., 2k` (`t'_k`) and `X`
/// elsewhere.
pub fn horizontal_flux_family(torus: &Torus) -> Result<Vec<(Tiling, Tiling)>> {
    require_bipartite(torus, "the horizontal flux family")?;
    if torus.n() < 4 || torus.m() < 4 {
        return Err(Error::Precondition {
            spec: torus.spec(),
            what: "the horizontal flux family",
            requirement: "n >= 4 and m >= 4",
        });
    }
    let sets = EdgeFamilySets::new(torus)?;
    let build = |k: u32, parity: u32| -> Result<Tiling> {
        let edges = (0..torus.n())
            .flat_map(|i| {
                if i % 2 == parity && i / 2 <= k {
                    sets.y(i)
                } else {
                    sets.x(i)
                }
            })
            .collect();
        checked(torus, edges)
    };
    (0..torus.n() / 2 - 1)
        .map(|k| Ok((build(k, 1)?, build(k, 0)?)))
        .collect()
}

/// `(t^k, t'^k)` for `k < m - 1` on `T(2n,2m,2m)`: all-vertical tilings
/// using `F'` on columns `1, 3, ..., 2k+1` (`t^k`) or `0, 2, ..., 2k`
/// (`t'^k`) and `W` elsewhere.
pub fn vertical_flux_family(torus: &Torus) -> Result<Vec<(Tiling, Tiling)>> {
    let (n, m, r) = (torus.n(), torus.m(), torus.r());
    if n % 2 != 0 || m % 2 != 0 || r != m || n < 4 || m < 4 {
        return Err(Error::Precondition {
            spec: torus.spec(),
            what: "the vertical flux family",
            requirement: "a torus T(2n,2m,2m) with n, m >= 2",
        });
    }
    let sets = EdgeFamilySets::new(torus)?;
    let build = |k: u32, parity: u32| -> Result<Tiling> {
        let edges = (0..m)
            .flat_map(|j| {
                if j % 2 == parity && j / 2 <= k {
                    sets.f_prime(j)
                } else {
                    sets.w(j)
                }
            })
            .collect();
        checked(torus, edges)
    };
    (0..m / 2 - 1)
        .map(|k| Ok((build(k, 1)?, build(k, 0)?)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedTiling {
    pub name: String,
    pub hex: String,
    pub flux: Option<FluxClass>,
    pub flip_free: bool,
    #[serde(skip)]
    pub tiling: Tiling,
}

/// Every named tiling that applies to `torus`, with fluxes relative to the
/// base tiling when the torus is bipartite.
pub fn named_tilings(torus: &Torus) -> Result<Vec<NamedTiling>> {
    let mut raw: Vec<(String, Tiling)> = Vec::new();
    if let Ok(base) = base_tiling(torus) {
        raw.push(("t_plus".into(), base));
    }
    if let Ok(ts) = four_singletons(torus) {
        for (i, t) in ts.into_iter().enumerate() {
            raw.push((format!("singleton_{}", i + 1), t));
        }
    }
    if let Ok(fam) = horizontal_flux_family(torus) {
        for (k, (t, tp)) in fam.into_iter().enumerate() {
            raw.push((format!("t_{k}"), t));
            raw.push((format!("t'_{k}"), tp));
        }
    }
    if let Ok(fam) = vertical_flux_family(torus) {
        for (k, (t, tp)) in fam.into_iter().enumerate() {
            raw.push((format!("t^{k}"), t));
            raw.push((format!("t'^{k}"), tp));
        }
    }
    let spec = torus.spec();
    if spec.n() == spec.m() && spec.m() == spec.r() && spec.n().is_multiple_of(2) && spec.n() >= 4 {
        for (i, p) in diagonal_patterns(spec.n() / 2)?.iter().enumerate() {
            raw.push((format!("diagonal_{i}"), p.tiling(torus)?));
        }
    }
    let homology = if spec.is_bipartite() {
        Some(Homology::new(torus)?)
    } else {
        None
    };
    let base = base_tiling(torus).ok();
    let masks = FaceMasks::new(torus);
    raw.into_iter()
        .map(|(name, tiling)| {
            let flux = match (&homology, &base) {
                (Some(h), Some(b)) => Some(h.flux(torus, &tiling, b)?),
                _ => None,
            };
            Ok(NamedTiling {
                name,
                hex: tiling.to_hex(),
                flux,
                flip_free: flip_free(&masks, &tiling),
                tiling,
            })
        })
        .collect()
}
