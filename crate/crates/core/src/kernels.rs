//! Color-change rules: the probabilistic force kernel, deterministic zero
//! forcing and PSD zero forcing. Every rule evaluates all forces of a round
//! against the blue set at the start of that round.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::prob::{Rational, Weight};

/// Probability that blue `u` forces white neighbor `w` this round,
/// `|N[u] ∩ B| / deg u`.
pub fn force_probability(g: &Graph, u: usize, w: usize, blue: &VertexSet) -> Result<Rational> {
    if u >= g.n() || w >= g.n() {
        return Err(Error::Precondition(format!("vertex out of range 0..{}", g.n())));
    }
    if !blue.contains(u) {
        return Err(Error::Precondition(format!("vertex {u} is not blue")));
    }
    if blue.contains(w) {
        return Err(Error::Precondition(format!("vertex {w} is not white")));
    }
    if !g.has_edge(u, w) {
        return Err(Error::Precondition(format!("vertices {u} and {w} are not adjacent")));
    }
    let (num, den) = fire_ratio(g, u, blue);
    Ok(Rational::ratio(num, den))
}

/// Numerator and denominator of the fire probability of blue `u`, clamped to 1.
#[inline]
pub(crate) fn fire_ratio(g: &Graph, u: usize, blue: &VertexSet) -> (u64, u64) {
    let deg = g.degree(u) as u64;
    let blue_closed = g.neighbors(u).intersection_len(blue) as u64 + 1;
    (blue_closed.min(deg), deg)
}

/// Per-white-vertex probabilities of turning blue in the next round.
///
/// Entries are sorted by vertex and only list white vertices with at least
/// one blue neighbor.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundKernel<W> {
    entries: Vec<(usize, W)>,
}

impl<W: Weight> RoundKernel<W> {
    pub fn entries(&self) -> &[(usize, W)] {
        &self.entries
    }

    /// `p_w`, zero for whites without a blue neighbor.
    pub fn probability(&self, w: usize) -> W {
        self.entries.binary_search_by_key(&w, |e| e.0).map(|i| self.entries[i].1.clone()).unwrap_or_else(|_| W::zero())
    }

    /// White vertices forced with probability one.
    pub fn certain(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.entries.iter().filter(|e| e.1.is_one()).map(|e| e.0))
    }

    pub fn into_entries(self) -> Vec<(usize, W)> {
        self.entries
    }
}

/// `p_w = 1 - ∏_{u ∈ N(w) ∩ B} (1 - |N[u] ∩ B| / deg u)` for every white `w`
/// adjacent to the blue set.
pub fn round_kernel<W: Weight>(g: &Graph, blue: &VertexSet) -> RoundKernel<W> {
    let n = g.n();
    let white = blue.complement();
    let mut miss: Vec<Option<W>> = vec![None; n];
    for u in blue {
        if g.neighbors(u).intersects(&white) {
            let (num, den) = fire_ratio(g, u, blue);
            miss[u] = Some(W::one() - W::ratio(num, den));
        }
    }
    let mut entries = Vec::new();
    for w in &white {
        let mut product: Option<W> = None;
        for u in g.neighbors(w).intersection(blue).iter() {
            let q = miss[u].clone().expect("blue neighbor of a white vertex has a fire probability");
            product = Some(match product {
                None => q,
                Some(p) => p * q,
            });
        }
        if let Some(p) = product {
            entries.push((w, W::one() - p));
        }
    }
    RoundKernel { entries }
}

/// One simultaneous round of deterministic zero forcing.
pub fn zf_round(g: &Graph, blue: &VertexSet) -> VertexSet {
    let white = blue.complement();
    let mut next = blue.clone();
    for u in blue {
        let wn = g.neighbors(u).intersection(&white);
        if wn.len() == 1 {
            next.union_with(&wn);
        }
    }
    next
}

/// One simultaneous round of PSD zero forcing: a blue vertex forces `w` when
/// `w` is its only white neighbor inside `w`'s component of `G - B`.
pub fn psd_round(g: &Graph, blue: &VertexSet) -> VertexSet {
    let white = blue.complement();
    let mut next = blue.clone();
    let mut seen = VertexSet::empty(g.n());
    for start in &white {
        if seen.contains(start) {
            continue;
        }
        let comp = g.component_within(start, &white);
        seen.union_with(&comp);
        for u in blue {
            let wn = g.neighbors(u).intersection(&comp);
            if wn.len() == 1 {
                next.union_with(&wn);
            }
        }
    }
    next
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    ZeroForcing,
    Psd,
}

/// Rounds until every vertex is blue, or `None` when the rule stalls first.
pub fn propagation_time(g: &Graph, start: &VertexSet, rule: Rule) -> Option<usize> {
    let mut blue = start.clone();
    let mut rounds = 0;
    while !blue.is_full() {
        let next = match rule {
            Rule::ZeroForcing => zf_round(g, &blue),
            Rule::Psd => psd_round(g, &blue),
        };
        if next == blue {
            return None;
        }
        blue = next;
        rounds += 1;
    }
    Some(rounds)
}

pub fn is_zero_forcing_set(g: &Graph, set: &VertexSet) -> bool {
    propagation_time(g, set, Rule::ZeroForcing).is_some()
}
