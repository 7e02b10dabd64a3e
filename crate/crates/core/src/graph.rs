//! Simple undirected graphs on vertices `0..n` with bitset adjacency, plus
//! the distance and domination utilities used by the bounds and heuristics.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    edge_count: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![VertexSet::empty(n); n], edge_count: 0 }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidSpec(format!("edge {u}-{v} out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidSpec(format!("repeated edge {u}-{v}")));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
    }

    /// Copy of `self` with the extra edge `u-v`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        if u >= self.n || v >= self.n || u == v || self.has_edge(u, v) {
            return Err(Error::InvalidArgument(format!("cannot add edge {u}-{v}")));
        }
        let mut g = self.clone();
        g.insert_edge(u, v);
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// N[v].
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances(&self, source: usize) -> Vec<Option<usize>> {
        self.distances_from_set(&VertexSet::from_vertices(self.n, [source]))
    }

    /// Multi-source BFS: `dist(u, S)` for every `u`.
    pub fn distances_from_set(&self, sources: &VertexSet) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in sources {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest distance from `v`, or `None` when some vertex is unreachable.
    pub fn eccentricity(&self, v: usize) -> Option<usize> {
        self.distances(v).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Largest `dist(u, S)`; `None` when `S` misses a component.
    pub fn covering_radius(&self, set: &VertexSet) -> Option<usize> {
        self.distances_from_set(set).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen.contains(v) {
                continue;
            }
            let comp = self.component_within(v, &self.vertices());
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// The connected component of `start` in the subgraph induced by `allowed`.
    pub fn component_within(&self, start: usize, allowed: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::from_vertices(self.n, [start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in &self.adj[u] {
                if allowed.contains(w) && comp.insert(w) {
                    stack.push(w);
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_within(0, &self.vertices()).is_full()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count + 1 == self.n
    }

    /// rad(G) and the set of vertices attaining it.
    pub fn radius_and_center(&self) -> Result<(usize, VertexSet)> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let ecc: Vec<usize> = (0..self.n).map(|v| self.eccentricity(v).unwrap_or(usize::MAX)).collect();
        let rad = *ecc.iter().min().unwrap_or(&0);
        let center = VertexSet::from_vertices(self.n, (0..self.n).filter(|&v| ecc[v] == rad));
        Ok((rad, center))
    }

    pub fn is_dominating(&self, set: &VertexSet) -> bool {
        let mut covered = set.clone();
        for v in set {
            covered.union_with(&self.adj[v]);
        }
        covered.is_full()
    }

    /// Greedy maximum-coverage dominating set; ties go to the lowest index.
    pub fn greedy_dominating_set(&self) -> VertexSet {
        let mut chosen = VertexSet::empty(self.n);
        let mut undominated = self.vertices();
        while !undominated.is_empty() {
            let mut best = (0, usize::MAX);
            for v in 0..self.n {
                let gain = self.closed_neighborhood(v).intersection_len(&undominated);
                if gain > best.0 {
                    best = (gain, v);
                }
            }
            let v = best.1;
            chosen.insert(v);
            undominated.difference_with(&self.closed_neighborhood(v));
        }
        chosen
    }

    /// A `k`-set with small covering radius. Exact by enumeration when
    /// `C(n, k) <= exact_limit`, otherwise greedy farthest-point.
    pub fn k_center_seed(&self, k: usize, exact_limit: u64) -> Result<KCenter> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", self.n)));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if binomial(self.n as u64, k as u64).is_some_and(|c| c <= exact_limit) {
            Ok(self.k_center_exact(k))
        } else {
            Ok(self.k_center_greedy(k))
        }
    }

    fn k_center_exact(&self, k: usize) -> KCenter {
        let mut best: Option<KCenter> = None;
        for combo in Combinations::new(self.n, k) {
            let set = VertexSet::from_vertices(self.n, combo.iter().copied());
            let r = self.covering_radius(&set).unwrap_or(usize::MAX);
            if best.as_ref().is_none_or(|b| r < b.covering_radius) {
                let done = r == 0;
                best = Some(KCenter { seeds: set, covering_radius: r, exact: true });
                if done {
                    break;
                }
            }
        }
        best.expect("k in 1..=n yields at least one subset")
    }

    fn k_center_greedy(&self, k: usize) -> KCenter {
        let start = self.radius_and_center().map(|(_, c)| c.first().unwrap_or(0)).unwrap_or(0);
        let mut seeds = VertexSet::from_vertices(self.n, [start]);
        while seeds.len() < k {
            let dist = self.distances_from_set(&seeds);
            let far = (0..self.n)
                .filter(|&v| !seeds.contains(v))
                .max_by_key(|&v| (dist[v].unwrap_or(0), std::cmp::Reverse(v)))
                .expect("fewer than n seeds leaves a candidate");
            seeds.insert(far);
        }
        let covering_radius = self.covering_radius(&seeds).unwrap_or(usize::MAX);
        KCenter { seeds, covering_radius, exact: false }
    }

    /// Parses the "n m" header followed by `m` lines "u v" (0-based).
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line =
                lines.next().ok_or_else(|| Error::Parse(format!("expected {m} edge lines, found {}", edges.len())))?;
            edges.push(parse_pair(line)?);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
        }
        Graph::from_edges(n, edges).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in {line:?}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer in {line:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("expected two integers in {line:?}")));
    }
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCenter {
    pub seeds: VertexSet,
    pub covering_radius: usize,
    pub exact: bool,
}

pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, cur: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
