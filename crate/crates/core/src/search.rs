//! Evidence searches over small graphs: edge-addition monotonicity of
//! `ept(G)`, non-monotonicity of the Kang–Yi probability in the start set,
//! and ratio tables of `ept` against the radius.
//!
//! Exhaustive scans enumerate labeled connected graphs and keep one
//! representative per isomorphism class. Classes are found by canonical
//! relabeling restricted to permutations that respect a degree-based vertex
//! refinement, so two graphs are merged only when they really are isomorphic.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::derived::kang_yi_probability;
use crate::error::{Error, Result};
use crate::exact::{ept_exact, ept_graph, Caps};
use crate::family::FamilySpec;
use crate::graph::Graph;
use crate::montecarlo::{estimate_ept, McConfig};
use crate::prob::{format_rational, Rational, Weight};

/// Largest order accepted by exhaustive enumeration (`2^21` labeled graphs).
pub const MAX_EXHAUSTIVE_N: usize = 7;

/// Where the scanned graphs come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampler {
    /// All connected graphs on `1..=max_n` vertices, up to isomorphism.
    Exhaustive,
    /// `samples` draws of `G(n, p)` per order `n`, with seeds
    /// `base_seed, base_seed + 1, ...`; disconnected draws are skipped.
    Gnp { p: f64, samples: u64, base_seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphRecord {
    fn of(g: &Graph) -> Self {
        Self { n: g.n(), edges: g.edges().collect() }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    AddedEdge { u: usize, v: usize },
    SetPair { a: Vec<usize>, b: Vec<usize>, k0_a: Option<usize>, k0_b: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueRecord {
    pub label: String,
    pub exact: String,
    pub decimal: f64,
}

impl ValueRecord {
    fn new(label: &str, r: &Rational) -> Self {
        Self { label: label.to_string(), exact: format_rational(r), decimal: r.to_f64() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub graph: GraphRecord,
    pub witness: Witness,
    pub values: Vec<ValueRecord>,
    /// Set once a fresh computation confirmed the violation.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub search_space: String,
    pub instances_checked: u64,
    /// Instances abandoned because an engine cap was hit.
    pub instances_skipped: u64,
    pub violations_found: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub runtime_s: f64,
}

/// Canonical code of `g` (adjacency bits over pairs after relabeling), valid
/// for `n <= 16`.
pub fn canonical_code(g: &Graph) -> (usize, u128) {
    let n = g.n();
    assert!(n <= 16, "canonical_code supports n <= 16");
    let key = |v: usize| {
        let mut nd: Vec<usize> = g.neighbors(v).iter().map(|u| g.degree(u)).collect();
        nd.sort_unstable();
        (g.degree(v), nd)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    // class[i] = index of the first position sharing the key of position i
    let mut class_start = vec![0; n];
    for i in 1..n {
        class_start[i] = if keys[order[i]] == keys[order[i - 1]] { class_start[i - 1] } else { i };
    }
    let mut class_end = vec![n; n];
    for i in (0..n.saturating_sub(1)).rev() {
        class_end[i] = if class_start[i + 1] == class_start[i] { class_end[i + 1] } else { i + 1 };
    }

    struct Ctx<'a> {
        g: &'a Graph,
        order: Vec<usize>,
        class_start: Vec<usize>,
        class_end: Vec<usize>,
        label: Vec<usize>,
        placed: Vec<usize>,
        used: Vec<bool>,
        best: u128,
    }

    fn bit(a: usize, b: usize) -> u32 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        (b * (b - 1) / 2 + a) as u32
    }

    fn place(c: &mut Ctx<'_>, pos: usize, code: u128) {
        if code >= c.best && pos > 0 {
            // codes only gain bits, so this branch cannot improve
            return;
        }
        if pos == c.order.len() {
            c.best = code;
            return;
        }
        for i in c.class_start[pos]..c.class_end[pos] {
            let v = c.order[i];
            if c.used[v] {
                continue;
            }
            let mut next = code;
            for &u in &c.placed {
                if c.g.has_edge(u, v) {
                    next |= 1u128 << bit(c.label[u], pos);
                }
            }
            c.used[v] = true;
            c.label[v] = pos;
            c.placed.push(v);
            place(c, pos + 1, next);
            c.placed.pop();
            c.used[v] = false;
        }
    }

    let mut ctx = Ctx {
        g,
        order,
        class_start,
        class_end,
        label: vec![0; n],
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        best: u128::MAX,
    };
    place(&mut ctx, 0, 0);
    (n, if n == 0 { 0 } else { ctx.best })
}

/// One connected graph per isomorphism class on exactly `n` vertices, each
/// the first labeled member in edge-mask order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::SearchCap { n, cap: MAX_EXHAUSTIVE_N });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if n > 1 && (mask.count_ones() as usize) < n - 1 {
            continue;
        }
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges)?;
        if !g.is_connected() {
            continue;
        }
        if seen.insert(canonical_code(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Instances drawn by `sampler` for orders `1..=max_n`, plus the seeds used.
fn instances(max_n: usize, sampler: &Sampler) -> Result<(Vec<Graph>, Vec<u64>, String)> {
    match *sampler {
        Sampler::Exhaustive => {
            let mut all = Vec::new();
            for n in 1..=max_n {
                all.extend(connected_graphs(n)?);
            }
            let space = format!("connected graphs on 1..={max_n} vertices up to isomorphism");
            Ok((all, Vec::new(), space))
        }
        Sampler::Gnp { p, samples, base_seed } => {
            let mut all = Vec::new();
            let mut seeds = Vec::new();
            for n in 1..=max_n {
                for i in 0..samples {
                    let seed = base_seed + i;
                    let g = FamilySpec::Gnp { n, p, seed }.build()?;
                    if g.is_connected() {
                        all.push(g);
                        seeds.push(seed);
                    }
                }
            }
            let space =
                format!("connected G(n, {p}) samples, n in 1..={max_n}, {samples} seeds per n from {base_seed}");
            seeds.sort_unstable();
            seeds.dedup();
            Ok((all, seeds, space))
        }
    }
}

/// Per-instance outcome collected by the parallel scans.
enum Outcome {
    Checked(Vec<Violation>),
    Skipped,
}

fn assemble(space: String, seeds: Vec<u64>, outcomes: Vec<Result<Outcome>>, start: Instant) -> Result<SearchReport> {
    let mut checked = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    for o in outcomes {
        match o? {
            Outcome::Checked(v) => {
                checked += 1;
                violations.extend(v);
            }
            Outcome::Skipped => skipped += 1,
        }
    }
    Ok(SearchReport {
        search_space: space,
        instances_checked: checked,
        instances_skipped: skipped,
        violations_found: violations.len(),
        violations,
        seeds,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

fn skip_resource<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_resource() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Tests `ept(H + e) <= ept(H)` for every connected `H` and non-edge `e`.
pub fn scan_edge_monotonicity(max_n: usize, sampler: &Sampler, caps: &Caps) -> Result<SearchReport> {
    let start = Instant::now();
    let (graphs, seeds, space) = instances(max_n, sampler)?;
    let outcomes: Vec<Result<Outcome>> = graphs.par_iter().map(|h| check_edge_monotone(h, caps)).collect();
    assemble(format!("edge additions to {space}"), seeds, outcomes, start)
}

fn check_edge_monotone(h: &Graph, caps: &Caps) -> Result<Outcome> {
    let Some((base, _)) = skip_resource(ept_graph::<Rational>(h, caps))? else {
        return Ok(Outcome::Skipped);
    };
    let mut found = Vec::new();
    let n = h.n();
    for v in 0..n {
        for u in 0..v {
            if h.has_edge(u, v) {
                continue;
            }
            let g = h.with_edge(u, v)?;
            let Some((after, _)) = skip_resource(ept_graph::<Rational>(&g, caps))? else {
                return Ok(Outcome::Skipped);
            };
            if after > base {
                let verified = edge_violation_holds(h, u, v, caps)?;
                found.push(Violation {
                    graph: GraphRecord::of(h),
                    witness: Witness::AddedEdge { u, v },
                    values: vec![ValueRecord::new("ept(H)", &base), ValueRecord::new("ept(H+e)", &after)],
                    verified,
                });
            }
        }
    }
    Ok(Outcome::Checked(found))
}

/// Recomputes both sides with fresh chains and no shared state.
fn edge_violation_holds(h: &Graph, u: usize, v: usize, caps: &Caps) -> Result<bool> {
    let h = GraphRecord::of(h).to_graph()?;
    let g = h.with_edge(u, v)?;
    let (a, _) = ept_graph::<Rational>(&h, caps)?;
    let (b, _) = ept_graph::<Rational>(&g, caps)?;
    Ok(b > a)
}

/// Searches pairs `A ⊊ B` of nonempty start sets with `P_A(G) > P_B(G)`.
pub fn scan_kangyi_monotonicity(max_n: usize, sampler: &Sampler, caps: &Caps) -> Result<SearchReport> {
    let start = Instant::now();
    let (graphs, seeds, space) = instances(max_n, sampler)?;
    let outcomes: Vec<Result<Outcome>> = graphs.par_iter().map(|g| check_kangyi(g, caps)).collect();
    assemble(format!("nested start sets on {space}"), seeds, outcomes, start)
}

/// Kang–Yi probabilities for every nonempty subset, by bitmask.
fn kangyi_table(g: &Graph, caps: &Caps) -> Result<HashMap<u64, (Option<usize>, Rational)>> {
    let n = g.n();
    let mut table = HashMap::with_capacity(1 << n);
    for mask in 1u64..(1u64 << n) {
        let r = kang_yi_probability::<Rational>(g, &VertexSet::from_mask(n, mask), caps)?;
        table.insert(mask, (r.k0, r.probability));
    }
    Ok(table)
}

fn check_kangyi(g: &Graph, caps: &Caps) -> Result<Outcome> {
    let n = g.n();
    if n > 20 {
        return Err(Error::SearchCap { n, cap: 20 });
    }
    let Some(table) = skip_resource(kangyi_table(g, caps))? else {
        return Ok(Outcome::Skipped);
    };
    let full = (1u64 << n) - 1;
    let mut found = Vec::new();
    for b in 1..=full {
        let (k0_b, pb) = &table[&b];
        // proper nonempty submasks of b
        let mut a = (b - 1) & b;
        while a != 0 {
            let (k0_a, pa) = &table[&a];
            if pa > pb {
                let sa = VertexSet::from_mask(n, a);
                let sb = VertexSet::from_mask(n, b);
                let verified = kangyi_violation_holds(g, &sa, &sb, caps)?;
                found.push(Violation {
                    graph: GraphRecord::of(g),
                    witness: Witness::SetPair { a: sa.to_vec(), b: sb.to_vec(), k0_a: *k0_a, k0_b: *k0_b },
                    values: vec![ValueRecord::new("P_A", pa), ValueRecord::new("P_B", pb)],
                    verified,
                });
            }
            a = (a - 1) & b;
        }
    }
    Ok(Outcome::Checked(found))
}

fn kangyi_violation_holds(g: &Graph, a: &VertexSet, b: &VertexSet, caps: &Caps) -> Result<bool> {
    let g = GraphRecord::of(g).to_graph()?;
    let pa = kang_yi_probability::<Rational>(&g, a, caps)?.probability;
    let pb = kang_yi_probability::<Rational>(&g, b, caps)?.probability;
    Ok(pa > pb)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusRow {
    pub graph: String,
    pub n: usize,
    pub radius: usize,
    pub ept: f64,
    /// Monte Carlo standard error; zero for exact values.
    pub std_error: f64,
    pub engine: &'static str,
    pub ept_over_rad: f64,
    /// `ept / (rad · (ln n)²)`; `None` when the denominator vanishes.
    pub ept_over_rad_log2: Option<f64>,
}

/// Ratio rows for each labeled graph. The exact chain (float weights) gives
/// `ept(G)` over all single starts; when it hits a cap, Monte Carlo from the
/// lowest-index center vertex stands in.
pub fn radius_ratio_probe(graphs: &[(String, Graph)], caps: &Caps, mc: &McConfig) -> Result<Vec<RadiusRow>> {
    graphs
        .iter()
        .map(|(label, g)| {
            let (radius, center) = g.radius_and_center()?;
            let (ept, std_error, engine) = match ept_graph::<f64>(g, caps) {
                Ok((e, _)) => (e, 0.0, "exact"),
                Err(e) if e.is_resource() => {
                    let c = center.first().expect("center is nonempty");
                    let start = VertexSet::from_vertices(g.n(), [c]);
                    match ept_exact::<f64>(g, &start, caps) {
                        Ok(v) => (v, 0.0, "exact-center"),
                        Err(e) if e.is_resource() => {
                            let est = estimate_ept(g, &start, mc)?;
                            (est.mean, est.std_error, "mc-center")
                        }
                        Err(e) => return Err(e),
                    }
                }
                Err(e) => return Err(e),
            };
            let ln = (g.n() as f64).ln();
            let denom = radius as f64 * ln * ln;
            Ok(RadiusRow {
                graph: label.clone(),
                n: g.n(),
                radius,
                ept,
                std_error,
                engine,
                ept_over_rad: if radius > 0 { ept / radius as f64 } else { f64::INFINITY },
                ept_over_rad_log2: (denom > 0.0).then(|| ept / denom),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::rational;

    fn build(s: &str) -> Graph {
        FamilySpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn connected_graph_counts_match_known_sequence() {
        // unlabeled connected graphs: 1, 1, 2, 6, 21
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn six_vertex_classes() {
        assert_eq!(connected_graphs(6).unwrap().len(), 112);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let a = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let b = Graph::from_edges(5, [(4, 3), (3, 0), (0, 1), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&build("path:5")));
    }

    #[test]
    fn chord_and_completion_do_not_raise_ept() {
        let caps = Caps::default();
        let p4 = build("path:4");
        let (before, _) = ept_graph::<Rational>(&p4, &caps).unwrap();
        let (after, _) = ept_graph::<Rational>(&p4.with_edge(0, 2).unwrap(), &caps).unwrap();
        assert!(after <= before);
        let k4 = build("complete:4");
        let k4_minus = Graph::from_edges(4, k4.edges().filter(|&e| e != (0, 1))).unwrap();
        let (full, _) = ept_graph::<Rational>(&k4, &caps).unwrap();
        let (minus, _) = ept_graph::<Rational>(&k4_minus, &caps).unwrap();
        assert!(full <= minus);
    }

    #[test]
    fn kangyi_scan_finds_fork_pattern() {
        let report = scan_kangyi_monotonicity(5, &Sampler::Exhaustive, &Caps::default()).unwrap();
        assert!(report.violations_found >= 1);
        assert!(report.violations.iter().all(|v| v.verified));
        let fork = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let code = canonical_code(&fork);
        let hit = report.violations.iter().any(|v| {
            canonical_code(&v.graph.to_graph().unwrap()) == code
                && v.values[0].exact == "8/9"
                && v.values[1].exact == "5/9"
        });
        assert!(hit, "expected the (8/9, 5/9) pair on the fork");
    }

    #[test]
    fn kangyi_scan_on_k3_is_clean() {
        let table = kangyi_table(&build("complete:3"), &Caps::default()).unwrap();
        let Outcome::Checked(v) = check_kangyi(&build("complete:3"), &Caps::default()).unwrap() else {
            panic!("K3 should be checked");
        };
        assert!(v.is_empty());
        assert_eq!(table[&0b111].1, rational(1, 1));
    }

    #[test]
    fn gnp_sampler_records_seeds() {
        let s = Sampler::Gnp { p: 0.6, samples: 3, base_seed: 10 };
        let r = scan_edge_monotonicity(5, &s, &Caps::default()).unwrap();
        assert!(r.seeds.iter().all(|s| (10..13).contains(s)));
        assert!(r.instances_checked >= 1);
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        assert!(connected_graphs(MAX_EXHAUSTIVE_N + 1).is_err());
    }

    #[test]
    fn radius_probe_paths_near_one() {
        let graphs: Vec<(String, Graph)> =
            (5..=8).map(|n| (format!("path:{n}"), build(&format!("path:{n}")))).collect();
        let rows = radius_ratio_probe(&graphs, &Caps::default(), &McConfig::new(1000, 0)).unwrap();
        for r in rows {
            assert_eq!(r.engine, "exact");
            assert!(r.ept_over_rad >= 1.0 && r.ept_over_rad < 2.0, "{r:?}");
        }
    }
}
