//! Absorbing Markov chain over reachable blue sets.
//!
//! States are blue bitmasks reached from the start set; transitions come from
//! [`successor_distribution`]. Every transition goes to a superset, so the
//! chain is a DAG plus self-loops and expected absorption times follow by
//! back-substitution in decreasing order of blue count.

use std::collections::{HashMap, VecDeque};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernels::round_kernel;
use crate::prob::{check_open_unit, Weight};

/// Resource limits for chain construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_states: usize,
    /// Maximum number of white vertices with a force probability strictly
    /// between 0 and 1 in a single state.
    pub max_frontier: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_states: 2_000_000, max_frontier: 24 }
    }
}

/// Distribution of the blue set after one round from `blue`.
///
/// Vertices forced with probability one are added to every successor; the
/// remaining frontier is enumerated subset by subset.
pub fn successor_distribution<W: Weight>(g: &Graph, blue: &VertexSet, caps: &Caps) -> Result<Vec<(VertexSet, W)>> {
    let mut base = blue.clone();
    let mut uncertain = Vec::new();
    for (w, p) in round_kernel::<W>(g, blue).into_entries() {
        if p.is_one() {
            base.insert(w);
        } else if !p.is_zero() {
            uncertain.push((w, p));
        }
    }
    if uncertain.len() > caps.max_frontier {
        return Err(Error::FrontierCap { uncertain: uncertain.len(), cap: caps.max_frontier });
    }
    let mut out = Vec::with_capacity(1 << uncertain.len());
    out.push((base, W::one()));
    for (w, p) in uncertain {
        let q = W::one() - p.clone();
        let mut next = Vec::with_capacity(out.len() * 2);
        for (set, mass) in out {
            let mut hit = set.clone();
            hit.insert(w);
            next.push((hit, mass.clone() * p.clone()));
            next.push((set, mass * q.clone()));
        }
        out = next;
    }
    Ok(out)
}

/// Checks that `start` is a usable initial blue set for `g`.
pub fn validate_start(g: &Graph, start: &VertexSet) -> Result<()> {
    if start.universe() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "start set is over {} vertices but the graph has {}",
            start.universe(),
            g.n()
        )));
    }
    if start.is_empty() {
        return Err(Error::EmptyStart);
    }
    for comp in g.components() {
        if !comp.intersects(start) {
            return Err(Error::StartMissesComponent(comp.first().unwrap_or(0)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct StateChain<W> {
    states: Vec<VertexSet>,
    index: HashMap<VertexSet, usize>,
    transitions: Vec<Vec<(usize, W)>>,
    self_loop: Vec<W>,
    absorbing: usize,
}

/// Breadth-first construction of the chain reachable from `start`
/// (state 0 is `start`).
pub fn build_chain<W: Weight>(g: &Graph, start: &VertexSet, caps: &Caps) -> Result<StateChain<W>> {
    validate_start(g, start)?;
    let mut states = vec![start.clone()];
    let mut index = HashMap::from([(start.clone(), 0usize)]);
    let mut transitions = Vec::new();
    let mut self_loop = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let source = states[s].clone();
        let mut out = Vec::new();
        let mut stay = W::zero();
        for (next, p) in successor_distribution::<W>(g, &source, caps)? {
            if next == source {
                stay = stay + p;
                continue;
            }
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= caps.max_states {
                        return Err(Error::StateCap { cap: caps.max_states });
                    }
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
            };
            out.push((t, p));
        }
        debug_assert_eq!(transitions.len(), s);
        transitions.push(out);
        self_loop.push(stay);
    }
    let full = VertexSet::full(g.n());
    let absorbing =
        *index.get(&full).ok_or_else(|| Error::Internal("all-blue state unreachable from a valid start set".into()))?;
    Ok(StateChain { states, index, transitions, self_loop, absorbing })
}

impl<W: Weight> StateChain<W> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[VertexSet] {
        &self.states
    }

    pub fn state_index(&self, blue: &VertexSet) -> Option<usize> {
        self.index.get(blue).copied()
    }

    /// Index of the all-blue state.
    pub fn absorbing(&self) -> usize {
        self.absorbing
    }

    /// Transitions out of `s`, excluding the self-loop.
    pub fn transitions(&self, s: usize) -> &[(usize, W)] {
        &self.transitions[s]
    }

    pub fn self_loop(&self, s: usize) -> &W {
        &self.self_loop[s]
    }

    /// Expected rounds to absorption from every state.
    pub fn expected_times(&self) -> Result<Vec<W>> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&s| std::cmp::Reverse(self.states[s].len()));
        let mut e = vec![W::zero(); self.len()];
        for s in order {
            if s == self.absorbing {
                continue;
            }
            let leave = W::one() - self.self_loop[s].clone();
            if leave.is_zero() {
                return Err(Error::Internal(format!("state {} never changes", self.states[s])));
            }
            let mut acc = W::one();
            for (t, p) in &self.transitions[s] {
                acc = acc + p.clone() * e[*t].clone();
            }
            e[s] = acc / leave;
        }
        Ok(e)
    }

    /// Expected rounds to absorption from the start state.
    pub fn expected_time(&self) -> Result<W> {
        Ok(self.expected_times()?.swap_remove(0))
    }

    /// Distribution after `rounds` rounds from the start state.
    pub fn round_distribution(&self, rounds: usize) -> RoundDistribution<W> {
        self.walk().nth(rounds).expect("walk never ends")
    }

    /// Successive round distributions, starting at round 0.
    pub fn walk(&self) -> Walk<'_, W> {
        Walk { chain: self, current: None }
    }

    /// Least `t` whose all-blue probability reaches `alpha` (exact `>=`).
    pub fn confidence_time(&self, alpha: &W) -> Result<usize> {
        check_open_unit(alpha)?;
        const GUARD: usize = 10_000_000;
        for d in self.walk().take(GUARD) {
            if d.absorbed() >= *alpha {
                return Ok(d.round);
            }
        }
        Err(Error::Internal(format!("confidence level not reached within {GUARD} rounds")))
    }
}

/// Probability mass over chain states after `round` rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundDistribution<W> {
    pub round: usize,
    mass: Vec<W>,
    absorbing: usize,
}

impl<W: Weight> RoundDistribution<W> {
    pub fn mass(&self) -> &[W] {
        &self.mass
    }

    /// Probability that every vertex is blue.
    pub fn absorbed(&self) -> W {
        self.mass[self.absorbing].clone()
    }

    pub fn total(&self) -> W {
        self.mass.iter().cloned().fold(W::zero(), |a, b| a + b)
    }
}

pub struct Walk<'a, W> {
    chain: &'a StateChain<W>,
    current: Option<RoundDistribution<W>>,
}

impl<W: Weight> Iterator for Walk<'_, W> {
    type Item = RoundDistribution<W>;

    fn next(&mut self) -> Option<Self::Item> {
        let chain = self.chain;
        let next = match self.current.take() {
            None => {
                let mut mass = vec![W::zero(); chain.len()];
                mass[0] = W::one();
                RoundDistribution { round: 0, mass, absorbing: chain.absorbing }
            }
            Some(prev) => {
                let mut mass = vec![W::zero(); chain.len()];
                for (s, m) in prev.mass.iter().enumerate() {
                    if m.is_zero() {
                        continue;
                    }
                    mass[s] = mass[s].clone() + m.clone() * chain.self_loop[s].clone();
                    for (t, p) in &chain.transitions[s] {
                        mass[*t] = mass[*t].clone() + m.clone() * p.clone();
                    }
                }
                RoundDistribution { round: prev.round + 1, mass, absorbing: chain.absorbing }
            }
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// ept(G, Z).
pub fn ept_exact<W: Weight>(g: &Graph, start: &VertexSet, caps: &Caps) -> Result<W> {
    build_chain::<W>(g, start, caps)?.expected_time()
}

/// ept(G): the minimum over single-vertex starts, with the lowest-index
/// minimizer.
pub fn ept_graph<W: Weight>(g: &Graph, caps: &Caps) -> Result<(W, usize)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut best: Option<(W, usize)> = None;
    for v in 0..g.n() {
        let e = ept_exact::<W>(g, &VertexSet::from_vertices(g.n(), [v]), caps)?;
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, v));
        }
    }
    Ok(best.expect("connected graphs have a vertex"))
}

/// P^ℓ_B(G); zero for an empty `blue`.
pub fn lround_probability<W: Weight>(g: &Graph, blue: &VertexSet, rounds: usize, caps: &Caps) -> Result<W> {
    if blue.is_empty() {
        return Ok(W::zero());
    }
    Ok(build_chain::<W>(g, blue, caps)?.round_distribution(rounds).absorbed())
}

/// ptpf(G, Z, α).
pub fn confidence_time<W: Weight>(g: &Graph, start: &VertexSet, alpha: &W, caps: &Caps) -> Result<usize> {
    check_open_unit(alpha)?;
    build_chain::<W>(g, start, caps)?.confidence_time(alpha)
}
