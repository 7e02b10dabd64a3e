//! Named graph families and the generator grammar used on the command line:
//! `path:10`, `cycle:8`, `star:6`, `complete:7`, `spider:n=13,legs=4`,
//! `kary:k=3,h=2`, `gnp:n=20,p=0.5,seed=7`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// P_n on `0 - 1 - ... - n-1`.
    Path {
        n: usize,
    },
    /// C_n, `n >= 3`.
    Cycle {
        n: usize,
    },
    /// K_{1,leaves}; the center is vertex 0.
    Star {
        leaves: usize,
    },
    Complete {
        n: usize,
    },
    /// Total order `n`, body vertex 0, legs as equal as possible with the
    /// longer legs first; leg vertices are numbered outward.
    Spider {
        n: usize,
        legs: usize,
    },
    /// Full `k`-ary tree of height `h`, root 0, breadth-first labels.
    KaryTree {
        k: usize,
        h: usize,
    },
    /// G(n, p) drawn from `ChaCha8Rng::seed_from_u64(seed)` over pairs in
    /// lexicographic order.
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    EdgeList {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &[])
    }

    /// Parses a generator string, then overrides named parameters
    /// (used by parameter sweeps, e.g. `("n", 7)`).
    pub fn parse_with(text: &str, overrides: &[(&str, &str)]) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let kind = kind.trim().to_ascii_lowercase();
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => params.insert(k.trim().to_string(), v.trim().to_string()),
                None => params.insert(positional_key(&kind).to_string(), item.to_string()),
            };
        }
        for (k, v) in overrides {
            params.insert((*k).to_string(), (*v).to_string());
        }
        let p = Params { kind: &kind, map: params };
        let spec = match kind.as_str() {
            "path" => FamilySpec::Path { n: p.usize("n")? },
            "cycle" => FamilySpec::Cycle { n: p.usize("n")? },
            "star" => FamilySpec::Star { leaves: p.usize("n")? },
            "complete" => FamilySpec::Complete { n: p.usize("n")? },
            "spider" => FamilySpec::Spider { n: p.usize("n")?, legs: p.usize("legs")? },
            "kary" => FamilySpec::KaryTree { k: p.usize("k")?, h: p.usize("h")? },
            "gnp" => FamilySpec::Gnp {
                n: p.usize("n")?,
                p: p.get("p")?.parse().map_err(|_| p.bad("p"))?,
                seed: p.map.get("seed").map_or(Ok(0), |s| s.parse().map_err(|_| p.bad("seed")))?,
            },
            other => return Err(Error::InvalidSpec(format!("unknown graph family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        match *self {
            FamilySpec::Path { n } | FamilySpec::Complete { n } if n < 1 => bad("need n >= 1".into()),
            FamilySpec::Cycle { n } if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            FamilySpec::Star { leaves } if leaves < 1 => bad("star needs at least one leaf".into()),
            FamilySpec::Spider { n, legs } if legs < 3 || n < legs + 1 => {
                bad(format!("spider needs legs >= 3 and n >= legs + 1, got n = {n}, legs = {legs}"))
            }
            FamilySpec::KaryTree { k, .. } if k < 1 => bad("k-ary tree needs k >= 1".into()),
            FamilySpec::Gnp { n, p, .. } if n < 1 || !(p > 0.0 && p < 1.0) => {
                bad(format!("gnp needs n >= 1 and 0 < p < 1, got n = {n}, p = {p}"))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Graph> {
        self.validate()?;
        match *self {
            FamilySpec::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
            FamilySpec::Cycle { n } => Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))),
            FamilySpec::Star { leaves } => Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))),
            FamilySpec::Complete { n } => Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
            FamilySpec::Spider { n, legs } => {
                let body = n - 1;
                let mut edges = Vec::with_capacity(body);
                let mut next = 1;
                for leg in 0..legs {
                    let len = body / legs + usize::from(leg < body % legs);
                    let mut prev = 0;
                    for _ in 0..len {
                        edges.push((prev, next));
                        prev = next;
                        next += 1;
                    }
                }
                Graph::from_edges(n, edges)
            }
            FamilySpec::KaryTree { k, h } => {
                let mut edges = Vec::new();
                let mut level = vec![0usize];
                let mut next = 1;
                for _ in 0..h {
                    let mut children = Vec::with_capacity(level.len() * k);
                    for &parent in &level {
                        for _ in 0..k {
                            edges.push((parent, next));
                            children.push(next);
                            next += 1;
                        }
                    }
                    level = children;
                }
                Graph::from_edges(next, edges)
            }
            FamilySpec::Gnp { n, p, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, edges)
            }
            FamilySpec::EdgeList { n, ref edges } => Graph::from_edges(n, edges.iter().copied()),
        }
    }
}

fn positional_key(kind: &str) -> &'static str {
    match kind {
        "kary" => "k",
        _ => "n",
    }
}

struct Params<'a> {
    kind: &'a str,
    map: BTreeMap<String, String>,
}

impl Params<'_> {
    fn bad(&self, key: &str) -> Error {
        Error::InvalidSpec(format!("bad value for {key:?} in {} spec", self.kind))
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidSpec(format!("{} spec is missing {key:?}", self.kind)))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?.parse().map_err(|_| self.bad(key))
    }
}
