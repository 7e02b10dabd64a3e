//! Parameters built on the engines: throttling numbers, the zero forcing
//! number and the Kang–Yi probability `P_B(G)`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::{build_chain, ept_exact, Caps};
use crate::graph::{Combinations, Graph};
use crate::kernels::{is_zero_forcing_set, propagation_time, Rule};
use crate::prob::{check_open_unit, Weight};

/// Default vertex cap for subset-enumeration searches.
pub const DEFAULT_SEARCH_CAP: usize = 12;

/// Exhaustive k-center enumeration is used while `C(n, k)` stays below this.
const K_CENTER_EXACT_LIMIT: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Every nonempty subset, up to the vertex cap.
    ExactExhaustive,
    /// k-center seeds for every k plus a greedy dominating set.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThrottleResult<V> {
    pub value: V,
    pub witness: VertexSet,
    pub mode: SearchMode,
}

/// `th_pzf(G, Z) = |Z| + ept(G, Z)`.
pub fn th_pzf<W: Weight>(g: &Graph, z: &VertexSet, caps: &Caps) -> Result<W> {
    Ok(W::ratio(z.len() as u64, 1) + ept_exact::<W>(g, z, caps)?)
}

/// `th_pzf(G)`, the minimum of `|Z| + ept(G, Z)` over nonempty `Z`.
pub fn th_pzf_graph<W: Weight>(g: &Graph, mode: SearchMode, caps: &Caps, cap: usize) -> Result<ThrottleResult<W>> {
    throttle_search(g, mode, cap, |k| W::ratio(k as u64, 1), |z| th_pzf::<W>(g, z, caps))
}

/// `th(G, α)`, the minimum of `|Z| + ptpf(G, Z, α)` over nonempty `Z`.
pub fn th_alpha<W: Weight>(
    g: &Graph,
    alpha: &W,
    mode: SearchMode,
    caps: &Caps,
    cap: usize,
) -> Result<ThrottleResult<usize>> {
    check_open_unit(alpha)?;
    throttle_search(g, mode, cap, |k| k, |z| Ok(z.len() + build_chain::<W>(g, z, caps)?.confidence_time(alpha)?))
}

/// Minimizes `eval` over seed sets. `floor(k)` is a lower bound on the value
/// of any set of size `k`, used to prune.
fn throttle_search<V, Fl, Ev>(g: &Graph, mode: SearchMode, cap: usize, floor: Fl, eval: Ev) -> Result<ThrottleResult<V>>
where
    V: PartialOrd + Clone + Send,
    Fl: Fn(usize) -> V,
    Ev: Fn(&VertexSet) -> Result<V> + Sync,
{
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut best: Option<(V, VertexSet)> = None;
    match mode {
        SearchMode::ExactExhaustive => {
            if n > cap {
                return Err(Error::SearchCap { n, cap });
            }
            for k in 1..=n {
                if best.as_ref().is_some_and(|(b, _)| floor(k) >= *b) {
                    break;
                }
                let sets: Vec<VertexSet> = Combinations::new(n, k).map(|c| VertexSet::from_vertices(n, c)).collect();
                let values: Vec<Result<V>> = sets.par_iter().map(&eval).collect();
                for (set, value) in sets.into_iter().zip(values) {
                    let value = value?;
                    if best.as_ref().is_none_or(|(b, _)| value < *b) {
                        best = Some((value, set));
                    }
                }
            }
        }
        SearchMode::Heuristic => {
            let mut candidates = Vec::with_capacity(n + 1);
            for k in 1..=n {
                candidates.push(g.k_center_seed(k, K_CENTER_EXACT_LIMIT)?.seeds);
            }
            candidates.push(g.greedy_dominating_set());
            candidates.sort_by_key(VertexSet::len);
            candidates.dedup();
            let mut last_err = None;
            for set in candidates {
                if best.as_ref().is_some_and(|(b, _)| floor(set.len()) >= *b) {
                    continue;
                }
                match eval(&set) {
                    Ok(value) => {
                        if best.as_ref().is_none_or(|(b, _)| value < *b) {
                            best = Some((value, set));
                        }
                    }
                    // A seed too large for the exact engine is skipped; others may fit.
                    Err(e) if e.is_resource() => last_err = Some(e),
                    Err(e) => return Err(e),
                }
            }
            if best.is_none() {
                if let Some(e) = last_err {
                    return Err(e);
                }
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| Error::InvalidArgument("graph has no vertices".into()))?;
    Ok(ThrottleResult { value, witness, mode })
}

/// `Z(G)` and a minimum zero forcing set, searched in increasing size.
pub fn zero_forcing_number(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    let n = g.n();
    if n > cap {
        return Err(Error::SearchCap { n, cap });
    }
    for k in 0..=n {
        for combo in Combinations::new(n, k) {
            let set = VertexSet::from_vertices(n, combo);
            if is_zero_forcing_set(g, &set) {
                return Ok((k, set));
            }
        }
    }
    Err(Error::Internal("the full vertex set is always zero forcing".into()))
}

/// `th₊(G)` by brute force: the minimum of `|Z| + pt₊(G, Z)` and a witness.
pub fn psd_throttling_number(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    let n = g.n();
    if n > cap {
        return Err(Error::SearchCap { n, cap });
    }
    if n == 0 {
        return Ok((0, VertexSet::empty(0)));
    }
    let mut best: Option<(usize, VertexSet)> = None;
    for k in 1..=n {
        if best.as_ref().is_some_and(|(b, _)| k >= *b) {
            break;
        }
        for combo in Combinations::new(n, k) {
            let set = VertexSet::from_vertices(n, combo);
            if let Some(t) = propagation_time(g, &set, Rule::Psd) {
                if best.as_ref().is_none_or(|(b, _)| k + t < *b) {
                    best = Some((k + t, set));
                }
            }
        }
    }
    best.ok_or_else(|| Error::Internal("the full vertex set is always PSD forcing".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KangYiResult<W> {
    /// First round at which some reachable blue set is a zero forcing set;
    /// `None` for an empty `B`.
    pub k0: Option<usize>,
    pub probability: W,
}

/// `P_B(G)`: the probability that the blue set at round `k₀` is a zero
/// forcing set. An empty `B` gives probability zero.
pub fn kang_yi_probability<W: Weight>(g: &Graph, b: &VertexSet, caps: &Caps) -> Result<KangYiResult<W>> {
    if b.is_empty() {
        return Ok(KangYiResult { k0: None, probability: W::zero() });
    }
    let chain = build_chain::<W>(g, b, caps)?;
    let mut verdicts: HashMap<usize, bool> = HashMap::new();
    for dist in chain.walk() {
        let mut hit = false;
        let mut probability = W::zero();
        for (s, m) in dist.mass().iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let zfs = *verdicts.entry(s).or_insert_with(|| is_zero_forcing_set(g, &chain.states()[s]));
            if zfs {
                hit = true;
                probability = probability + m.clone();
            }
        }
        if hit {
            return Ok(KangYiResult { k0: Some(dist.round), probability });
        }
        if dist.round > chain.len() + g.n() {
            break;
        }
    }
    Err(Error::Internal("no zero forcing state reached".into()))
}
