//! Independent reference implementations used only by tests.
//!
//! Transitions are enumerated fire by fire: every (blue u, white neighbor w)
//! pair is an independent coin with probability `min(|N[u] ∩ B|, deg u) / deg u`.
//! Expected times are solved by Gaussian elimination on `(I - Q) e = 1`.
//! None of this shares code with the library engines beyond `Graph`.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Zero};
use pzf_core::{FamilySpec, Graph, Rational, VertexSet};

pub fn build(spec: &str) -> Graph {
    FamilySpec::parse(spec).unwrap().build().unwrap()
}

pub fn set(n: usize, v: &[usize]) -> VertexSet {
    VertexSet::from_vertices(n, v.iter().copied())
}

pub fn mask_of(s: &VertexSet) -> u64 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

fn adjacency(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u)).collect()
}

/// Successor distribution of `blue` by explicit enumeration of fire outcomes.
pub fn oracle_successors(g: &Graph, blue: u64) -> BTreeMap<u64, Rational> {
    let adj = adjacency(g);
    let mut fires: Vec<(usize, Rational)> = Vec::new();
    for u in 0..g.n() {
        if blue >> u & 1 == 0 {
            continue;
        }
        let deg = adj[u].count_ones() as i64;
        let closed = ((adj[u] & blue).count_ones() + 1) as i64;
        let p = Rational::new(closed.min(deg).into(), deg.into());
        for w in 0..g.n() {
            if adj[u] >> w & 1 == 1 && blue >> w & 1 == 0 {
                fires.push((w, p.clone()));
            }
        }
    }
    assert!(fires.len() <= 20, "oracle enumeration too large");
    let mut out = BTreeMap::new();
    for outcome in 0u64..(1 << fires.len()) {
        let mut next = blue;
        let mut prob = Rational::one();
        for (i, (w, p)) in fires.iter().enumerate() {
            if outcome >> i & 1 == 1 {
                next |= 1 << w;
                prob *= p.clone();
            } else {
                prob *= Rational::one() - p.clone();
            }
        }
        if !prob.is_zero() {
            *out.entry(next).or_insert_with(Rational::zero) += prob;
        }
    }
    out
}

pub struct OracleChain {
    pub states: Vec<u64>,
    pub index: HashMap<u64, usize>,
    pub rows: Vec<BTreeMap<u64, Rational>>,
    pub full: u64,
}

/// All blue sets reachable from `start`, with their oracle rows.
pub fn oracle_chain(g: &Graph, start: u64) -> OracleChain {
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut states = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut rows = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let row = oracle_successors(g, s);
        for &t in row.keys() {
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(t) {
                e.insert(states.len());
                states.push(t);
                queue.push_back(t);
            }
        }
        rows.push(row);
    }
    OracleChain { states, index, rows, full }
}

impl OracleChain {
    /// Expected absorption time from the start by dense Gaussian elimination.
    pub fn ept(&self) -> Rational {
        let transient: Vec<usize> = (0..self.states.len()).filter(|&i| self.states[i] != self.full).collect();
        if transient.is_empty() {
            return Rational::zero();
        }
        let pos: HashMap<usize, usize> = transient.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let m = transient.len();
        let mut a = vec![vec![Rational::zero(); m + 1]; m];
        for (r, &i) in transient.iter().enumerate() {
            a[r][r] = Rational::one();
            a[r][m] = Rational::one();
            for (t, p) in &self.rows[i] {
                if let Some(&c) = pos.get(&self.index[t]) {
                    a[r][c] -= p.clone();
                }
            }
        }
        for col in 0..m {
            let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("singular system");
            a.swap(col, piv);
            let inv = Rational::one() / a[col][col].clone();
            for c in col..=m {
                a[col][c] *= inv.clone();
            }
            for r in 0..m {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=m {
                        let v = a[col][c].clone() * f.clone();
                        a[r][c] -= v;
                    }
                }
            }
        }
        a[pos[&0]][m].clone()
    }

    /// Probability of being all blue after exactly `rounds` rounds.
    pub fn lround(&self, rounds: usize) -> Rational {
        let mut dist: HashMap<u64, Rational> = HashMap::from([(self.states[0], Rational::one())]);
        for _ in 0..rounds {
            let mut next: HashMap<u64, Rational> = HashMap::new();
            for (s, m) in &dist {
                for (t, p) in &self.rows[self.index[s]] {
                    *next.entry(*t).or_insert_with(Rational::zero) += m.clone() * p.clone();
                }
            }
            dist = next;
        }
        dist.get(&self.full).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Small connected graphs covering every family plus seeded gnp draws.
pub fn small_battery() -> Vec<(String, Graph)> {
    let mut specs: Vec<String> = Vec::new();
    for n in 2..=7 {
        specs.push(format!("path:{n}"));
        specs.push(format!("complete:{n}"));
    }
    for n in 3..=7 {
        specs.push(format!("cycle:{n}"));
    }
    for d in 1..=5 {
        specs.push(format!("star:{d}"));
    }
    specs.push("spider:n=7,legs=3".into());
    specs.push("kary:k=2,h=2".into());
    for seed in 0..12 {
        specs.push(format!("gnp:n=6,p=0.5,seed={seed}"));
    }
    specs.into_iter().map(|s| (s.clone(), build(&s))).filter(|(_, g)| g.is_connected()).collect()
}
