//! Target selection: explicit `T(n,m,r)` specs plus sweeps such as
//! `n=1..6 m=2..8 r=*`, narrowed by parity and simplicity filters.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use qtorus_core::TorusSpec;

/// Inclusive range of one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for Bounds {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parse = |x: &str| x.trim().parse::<u32>().with_context(|| format!("bad bound {x:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (parse(a)?, parse(b)?)
            }
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            bail!("empty range {s:?}");
        }
        Ok(Bounds { lo, hi })
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// A box of specs. `r: None` means every shift `1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sweep {
    pub n: Bounds,
    pub m: Bounds,
    pub r: Option<Bounds>,
}

impl FromStr for Sweep {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (mut n, mut m, mut r) = (None, None, None);
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .with_context(|| format!("sweep token {token:?} is not key=range"))?;
            let slot = match key {
                "n" => &mut n,
                "m" => &mut m,
                "r" => &mut r,
                _ => bail!("unknown sweep parameter {key:?}"),
            };
            if slot.is_some() {
                bail!("sweep parameter {key} given twice");
            }
            *slot = Some(if value == "*" { None } else { Some(value.parse()?) });
        }
        let required = |v: Option<Option<Bounds>>, key: &str| match v {
            Some(Some(b)) => Ok(b),
            Some(None) => bail!("{key}=* is only allowed for r"),
            None => bail!("sweep needs {key}=..."),
        };
        Ok(Sweep {
            n: required(n, "n")?,
            m: required(m, "m")?,
            r: r.flatten(),
        })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} r=", self.n, self.m)?;
        match self.r {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "*"),
        }
    }
}

impl Sweep {
    /// Valid specs in the box, ordered by `(n, m, r)`. Tori with an odd
    /// number of squares have no tilings and are left out.
    pub fn specs(&self) -> Vec<TorusSpec> {
        let mut out = Vec::new();
        for n in self.n.lo..=self.n.hi {
            for m in self.m.lo.max(2)..=self.m.hi {
                let (lo, hi) = match self.r {
                    Some(b) => (b.lo.max(1), b.hi.min(m)),
                    None => (1, m),
                };
                for r in lo..=hi {
                    if (u64::from(n) * u64::from(m)) % 2 == 0 {
                        out.extend(TorusSpec::new(n, m, r).ok());
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Filters {
    pub bipartite: bool,
    pub non_bipartite: bool,
    pub simple_only: bool,
}

impl Filters {
    pub fn admits(&self, spec: TorusSpec) -> bool {
        (!self.bipartite || spec.is_bipartite())
            && (!self.non_bipartite || !spec.is_bipartite())
            && (!self.simple_only || spec.is_simple())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_sweeps() {
        let s: Sweep = "n=1..6 m=2..8 r=*".parse().unwrap();
        assert_eq!(s.to_string(), "n=1..6 m=2..8 r=*");
        assert_eq!(s.n, Bounds { lo: 1, hi: 6 });
        let s: Sweep = "m=4 n=3 r=1..=2".parse().unwrap();
        assert_eq!(s.to_string(), "n=3 m=4 r=1..2");
        assert_eq!(s.specs().len(), 2);
        for bad in ["n=1..6", "n=* m=2 r=1", "n=1 m=2 q=3", "n=3..1 m=2", "n=1 n=2 m=2"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_skips_odd_areas_and_invalid_shifts() {
        let s: Sweep = "n=3 m=3..4 r=1..4".parse().unwrap();
        let got: Vec<String> = s.specs().iter().map(|t| t.to_string()).collect();
        assert_eq!(got, ["T(3,4,1)", "T(3,4,2)", "T(3,4,3)", "T(3,4,4)"]);
    }

    #[test]
    fn filters_combine() {
        let s: Sweep = "n=1..6 m=2..8 r=*".parse().unwrap();
        let f = Filters { non_bipartite: true, simple_only: true, ..Default::default() };
        let kept: Vec<TorusSpec> = s.specs().into_iter().filter(|&t| f.admits(t)).collect();
        assert_eq!(kept.len(), 91);
        assert!(kept.iter().all(|t| !t.is_bipartite() && t.is_simple()));
    }
}
