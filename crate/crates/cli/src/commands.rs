use std::path::Path;

use pzf_core::derived::{kang_yi_probability, th_alpha, th_pzf_graph, zero_forcing_number, SearchMode};
use pzf_core::montecarlo::{estimate_confidence_time, estimate_ept, estimate_lround};
use pzf_core::prob::parse_open_probability;
use pzf_core::search::{radius_ratio_probe, scan_edge_monotonicity, scan_kangyi_monotonicity, Sampler};
use pzf_core::{
    build_chain, propagation_time, Caps, FamilySpec, Graph, McConfig, Rational, Rule, StateChain, VertexSet, Weight,
};
use serde_json::{json, Map, Value};

use crate::output::{rational_value, render, set_value, Format};
use crate::{Cli, CliError, Command, EngineOpt, GraphOpt, Mode, RuleArg, SamplerKind, ScanOpt, SearchKind, SearchOpt};

type Row = Map<String, Value>;
type CliResult<T> = Result<T, CliError>;

/// In auto mode, chains that might outgrow this many states are attempted
/// under this cap and handed to Monte Carlo when they hit it.
const AUTO_TRIAL_STATES: usize = 100_000;

pub fn run(cli: &Cli) -> CliResult<String> {
    let format = cli.format.unwrap_or(Format::Json);
    let (name, rows) = match &cli.command {
        Command::Ept { graph, engine, start } => {
            ("ept", per_graph(graph, |g, row| ept(g, row, engine, start.as_deref(), cli.threads))?)
        }
        Command::Lround { graph, engine, start, ell } => {
            ("lround", per_graph(graph, |g, row| lround(g, row, engine, start.as_deref(), *ell, cli.threads))?)
        }
        Command::Confidence { graph, engine, start, alpha } => {
            let alpha = parse_open_probability(alpha)?;
            (
                "confidence",
                per_graph(graph, |g, row| confidence(g, row, engine, start.as_deref(), &alpha, cli.threads))?,
            )
        }
        Command::Throttle { graph, engine, search } => {
            let caps = exact_only(engine, "throttle")?;
            ("throttle", per_graph(graph, |g, row| throttle(g, row, &caps, search))?)
        }
        Command::ThrottleAlpha { graph, engine, search, alpha } => {
            let caps = exact_only(engine, "throttle-alpha")?;
            let alpha = parse_open_probability(alpha)?;
            (
                "throttle-alpha",
                per_graph(graph, |g, mut row| {
                    let r = th_alpha::<Rational>(g, &alpha, search_mode(search), &caps, search.search_cap)?;
                    row.insert("alpha".into(), rational_value(&alpha));
                    row.insert("value".into(), r.value.into());
                    row.insert("witness".into(), set_value(&r.witness));
                    row.insert("search".into(), serde_json::to_value(r.mode).expect("enum serializes"));
                    Ok(row)
                })?,
            )
        }
        Command::Kangyi { graph, engine, start } => {
            let caps = exact_only(engine, "kangyi")?;
            (
                "kangyi",
                per_graph(graph, |g, mut row| {
                    let b = parse_start(g, start)?;
                    let r = kang_yi_probability::<Rational>(g, &b, &caps)?;
                    row.insert("start".into(), set_value(&b));
                    row.insert("k0".into(), r.k0.map_or(Value::Null, Value::from));
                    row.insert("probability".into(), rational_value(&r.probability));
                    Ok(row)
                })?,
            )
        }
        Command::ScanMonotone { scan } => {
            let report = scan_edge_monotonicity(scan.max_n, &sampler(scan)?, &scan_caps(scan))?;
            ("scan-monotone", vec![to_row(&report)])
        }
        Command::ScanKangyi { scan } => {
            let report = scan_kangyi_monotonicity(scan.max_n, &sampler(scan)?, &scan_caps(scan))?;
            ("scan-kangyi", vec![to_row(&report)])
        }
        Command::ProbeRadius { graph, sweep, engine } => {
            if engine.mode != Mode::Auto {
                return Err(CliError::Usage("probe-radius picks its engine per graph; drop --mode".into()));
            }
            let mut graphs = Vec::new();
            for spec in graph {
                let opt = GraphOpt { graph: spec.clone(), sweep: sweep.clone() };
                for inst in instances(&opt)? {
                    let label = match inst.sweep {
                        Some((k, v)) => format!("{} [{k}={v}]", inst.label),
                        None => inst.label,
                    };
                    graphs.push((label, inst.graph));
                }
            }
            let rows = radius_ratio_probe(&graphs, &caps(engine), &mc_config(engine, cli.threads))?;
            ("probe-radius", rows.iter().map(to_row).collect())
        }
        Command::Pt { graph, start, rule } => (
            "pt",
            per_graph(graph, |g, mut row| {
                let z = parse_start(g, start)?;
                let rule = match rule {
                    RuleArg::Zf => Rule::ZeroForcing,
                    RuleArg::Psd => Rule::Psd,
                };
                let t = propagation_time(g, &z, rule);
                row.insert("start".into(), set_value(&z));
                row.insert("rule".into(), if rule == Rule::Psd { "psd" } else { "zf" }.into());
                row.insert("forcing".into(), t.is_some().into());
                row.insert("rounds".into(), t.map_or(Value::Null, Value::from));
                Ok(row)
            })?,
        ),
        Command::Zfnumber { graph, search_cap } => (
            "zfnumber",
            per_graph(graph, |g, mut row| {
                let (z, witness) = zero_forcing_number(g, *search_cap)?;
                row.insert("value".into(), z.into());
                row.insert("witness".into(), set_value(&witness));
                Ok(row)
            })?,
        ),
        Command::Gen { graph } => {
            let insts = instances(graph)?;
            if format != Format::Json || cli.format.is_none() {
                return Ok(insts.iter().map(|i| i.graph.to_edge_list()).collect());
            }
            let rows = insts
                .into_iter()
                .map(|i| {
                    let mut row = base_row(&i);
                    let edges: Vec<[usize; 2]> = i.graph.edges().map(|(u, v)| [u, v]).collect();
                    row.insert("edge_list".into(), json!(edges));
                    row
                })
                .collect();
            ("gen", rows)
        }
    };
    Ok(render(format, name, &rows))
}

struct Instance {
    label: String,
    sweep: Option<(String, String)>,
    graph: Graph,
}

fn instances(opt: &GraphOpt) -> CliResult<Vec<Instance>> {
    let path = Path::new(&opt.graph);
    if path.is_file() {
        if opt.sweep.is_some() {
            return Err(CliError::Usage("--sweep needs a generator string, not an edge-list file".into()));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let graph = Graph::parse_edge_list(&text)?;
        return Ok(vec![Instance { label: opt.graph.clone(), sweep: None, graph }]);
    }
    let Some(sweep) = &opt.sweep else {
        let graph = FamilySpec::parse(&opt.graph)?.build()?;
        return Ok(vec![Instance { label: opt.graph.clone(), sweep: None, graph }]);
    };
    let (key, values) = parse_sweep(sweep)?;
    values
        .into_iter()
        .map(|v| {
            let graph = FamilySpec::parse_with(&opt.graph, &[(key.as_str(), v.as_str())])?.build()?;
            Ok(Instance { label: opt.graph.clone(), sweep: Some((key.clone(), v)), graph })
        })
        .collect()
}

/// `key=a..b` (inclusive) or `key=v1,v2,...`.
fn parse_sweep(text: &str) -> CliResult<(String, Vec<String>)> {
    let bad = || CliError::Usage(format!("--sweep expects key=a..b or key=v1,v2, got {text:?}"));
    let (key, range) = text.split_once('=').ok_or_else(bad)?;
    let key = key.trim();
    if key.is_empty() {
        return Err(bad());
    }
    let values: Vec<String> = match range.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            (a..=b).map(|v| v.to_string()).collect()
        }
        None => range.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect(),
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok((key.to_string(), values))
}

fn base_row(inst: &Instance) -> Row {
    let mut row = Row::new();
    row.insert("graph".into(), inst.label.clone().into());
    if let Some((k, v)) = &inst.sweep {
        let value = v.parse::<u64>().map_or_else(|_| Value::from(v.clone()), Value::from);
        row.insert(k.clone(), value);
    }
    row.insert("n".into(), inst.graph.n().into());
    row.insert("edges".into(), inst.graph.edge_count().into());
    row
}

fn per_graph(opt: &GraphOpt, mut f: impl FnMut(&Graph, Row) -> CliResult<Row>) -> CliResult<Vec<Row>> {
    instances(opt)?.iter().map(|inst| f(&inst.graph, base_row(inst))).collect()
}

fn parse_start(g: &Graph, text: &str) -> CliResult<VertexSet> {
    let mut set = VertexSet::empty(g.n());
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: usize = item
            .parse()
            .map_err(|_| CliError::Usage(format!("--start expects comma-separated vertex indices, got {item:?}")))?;
        if v >= g.n() {
            return Err(CliError::Usage(format!("start vertex {v} is out of range for {} vertices", g.n())));
        }
        set.insert(v);
    }
    Ok(set)
}

fn caps(engine: &EngineOpt) -> Caps {
    let mut caps = Caps::default();
    if let Some(s) = engine.max_states {
        caps.max_states = s;
    }
    if let Some(f) = engine.max_frontier {
        caps.max_frontier = f;
    }
    caps
}

fn exact_only(engine: &EngineOpt, command: &str) -> CliResult<Caps> {
    if engine.mode == Mode::Mc {
        return Err(CliError::Usage(format!("{command} has no Monte Carlo engine; use --mode exact")));
    }
    Ok(caps(engine))
}

fn mc_config(engine: &EngineOpt, threads: Option<usize>) -> McConfig {
    let cfg = McConfig::new(engine.trials, engine.seed);
    match threads {
        Some(t) => cfg.with_threads(t),
        None => cfg,
    }
}

fn search_mode(search: &SearchOpt) -> SearchMode {
    match search.search {
        SearchKind::Exhaustive => SearchMode::ExactExhaustive,
        SearchKind::Heuristic => SearchMode::Heuristic,
    }
}

fn sampler(scan: &ScanOpt) -> CliResult<Sampler> {
    Ok(match scan.sampler {
        SamplerKind::Exhaustive => Sampler::Exhaustive,
        SamplerKind::Gnp => {
            if !(scan.p > 0.0 && scan.p < 1.0) {
                return Err(CliError::Usage(format!("--p must lie in (0, 1), got {}", scan.p)));
            }
            Sampler::Gnp { p: scan.p, samples: scan.samples, base_seed: scan.seed }
        }
    })
}

fn scan_caps(scan: &ScanOpt) -> Caps {
    let mut caps = Caps::default();
    if let Some(s) = scan.max_states {
        caps.max_states = s;
    }
    if let Some(f) = scan.max_frontier {
        caps.max_frontier = f;
    }
    caps
}

fn to_row<T: serde::Serialize>(value: &T) -> Row {
    match serde_json::to_value(value).expect("reports serialize") {
        Value::Object(m) => m,
        other => Row::from_iter([("value".to_string(), other)]),
    }
}

/// Runs the exact computation or Monte Carlo according to `--mode`.
///
/// `free` is the number of initially white vertices; the chain has at most
/// `2^free` states, so auto mode runs exact under the user's cap when that
/// bound fits and otherwise tries a smaller cap before falling back.
fn dispatch(
    engine: &EngineOpt,
    free: usize,
    exact: impl FnOnce(&Caps) -> CliResult<Row>,
    mc: impl FnOnce() -> CliResult<Row>,
) -> CliResult<Row> {
    let caps = caps(engine);
    match engine.mode {
        Mode::Exact => exact(&caps),
        Mode::Mc => mc(),
        Mode::Auto => {
            let fits = free < 63 && (1u64 << free) <= caps.max_states as u64;
            let trial = if fits { caps } else { Caps { max_states: caps.max_states.min(AUTO_TRIAL_STATES), ..caps } };
            match exact(&trial) {
                Err(CliError::Core(e)) if e.is_resource() => {
                    eprintln!("note: exact engine stopped ({e}); using Monte Carlo");
                    mc()
                }
                other => other,
            }
        }
    }
}

/// Start set for Monte Carlo: the given one, or the lowest-index center vertex.
fn mc_start(g: &Graph, start: Option<&str>) -> CliResult<VertexSet> {
    match start {
        Some(s) => parse_start(g, s),
        None => {
            let (_, center) = g.radius_and_center()?;
            Ok(VertexSet::from_vertices(g.n(), center.first()))
        }
    }
}

fn free_vertices(g: &Graph, start: Option<&str>) -> CliResult<usize> {
    Ok(match start {
        Some(s) => g.n() - parse_start(g, s)?.len(),
        None => g.n().saturating_sub(1),
    })
}

/// Evaluates `eval` on the chain from every single vertex and keeps the best
/// value, earliest vertex on ties. Returns the value, its vertex and the
/// total number of states built.
fn over_starts<T>(
    g: &Graph,
    caps: &Caps,
    eval: impl Fn(&StateChain<Rational>) -> CliResult<T>,
    better: impl Fn(&T, &T) -> bool,
) -> CliResult<(T, usize, usize)> {
    if !g.is_connected() {
        return Err(pzf_core::Error::Disconnected.into());
    }
    let mut best: Option<(T, usize)> = None;
    let mut states = 0;
    for v in 0..g.n() {
        let chain = build_chain::<Rational>(g, &VertexSet::from_vertices(g.n(), [v]), caps)?;
        states += chain.len();
        let value = eval(&chain)?;
        if best.as_ref().is_none_or(|(b, _)| better(&value, b)) {
            best = Some((value, v));
        }
    }
    let (value, v) = best.ok_or_else(|| pzf_core::Error::Internal("graph has no vertices".into()))?;
    Ok((value, v, states))
}

/// Evaluates `eval` on the chain from `start`, or on every single vertex.
fn exact_row<T>(
    g: &Graph,
    mut row: Row,
    caps: &Caps,
    start: Option<&str>,
    eval: impl Fn(&StateChain<Rational>) -> CliResult<T>,
    better: impl Fn(&T, &T) -> bool,
    to_value: impl Fn(&T) -> Value,
) -> CliResult<Row> {
    let (value, best, states) = match start {
        Some(s) => {
            let z = parse_start(g, s)?;
            let chain = build_chain::<Rational>(g, &z, caps)?;
            row.insert("start".into(), set_value(&z));
            (eval(&chain)?, None, chain.len())
        }
        None => {
            let (value, v, states) = over_starts(g, caps, eval, better)?;
            (value, Some(v), states)
        }
    };
    row.insert("value".into(), to_value(&value));
    if let Some(v) = best {
        row.insert("best_start".into(), v.into());
    }
    row.insert("engine".into(), "exact".into());
    row.insert("states".into(), states.into());
    Ok(row)
}

fn mc_row(mut row: Row, start: &VertexSet, report: &pzf_core::EstimateReport) -> Row {
    row.insert("start".into(), set_value(start));
    row.insert("engine".into(), "mc".into());
    row.insert("mean".into(), report.mean.into());
    row.insert("std_error".into(), report.std_error.into());
    row.insert("trials".into(), report.trials.into());
    row.insert("seed".into(), report.seed.into());
    row
}

fn ept(g: &Graph, row: Row, engine: &EngineOpt, start: Option<&str>, threads: Option<usize>) -> CliResult<Row> {
    dispatch(
        engine,
        free_vertices(g, start)?,
        |caps| exact_row(g, row.clone(), caps, start, |c| Ok(c.expected_time()?), |a, b| a < b, rational_value),
        || {
            let z = mc_start(g, start)?;
            Ok(mc_row(row.clone(), &z, &estimate_ept(g, &z, &mc_config(engine, threads))?))
        },
    )
}

fn lround(
    g: &Graph,
    row: Row,
    engine: &EngineOpt,
    start: Option<&str>,
    ell: usize,
    threads: Option<usize>,
) -> CliResult<Row> {
    let mut row = row;
    row.insert("ell".into(), ell.into());
    dispatch(
        engine,
        free_vertices(g, start)?,
        |caps| {
            let eval = |c: &StateChain<Rational>| Ok(c.round_distribution(ell).absorbed());
            exact_row(g, row.clone(), caps, start, eval, |a, b| a > b, rational_value)
        },
        || {
            let z = mc_start(g, start)?;
            Ok(mc_row(row.clone(), &z, &estimate_lround(g, &z, ell as u64, &mc_config(engine, threads))?))
        },
    )
}

fn confidence(
    g: &Graph,
    row: Row,
    engine: &EngineOpt,
    start: Option<&str>,
    alpha: &Rational,
    threads: Option<usize>,
) -> CliResult<Row> {
    let mut row = row;
    row.insert("alpha".into(), rational_value(alpha));
    dispatch(
        engine,
        free_vertices(g, start)?,
        |caps| {
            let eval = |c: &StateChain<Rational>| Ok(c.confidence_time(alpha)?);
            exact_row(g, row.clone(), caps, start, eval, |a, b| a < b, |t| Value::from(*t))
        },
        || {
            let z = mc_start(g, start)?;
            let report = estimate_confidence_time(g, &z, alpha.to_f64(), &mc_config(engine, threads))?;
            let mut out = mc_row(row.clone(), &z, &report);
            let rounds = report.quantiles.as_ref().and_then(|q| q.first()).map(|q| q.rounds);
            out.insert("value".into(), rounds.map_or(Value::Null, Value::from));
            Ok(out)
        },
    )
}

fn throttle(g: &Graph, mut row: Row, caps: &Caps, search: &SearchOpt) -> CliResult<Row> {
    let r = th_pzf_graph::<Rational>(g, search_mode(search), caps, search.search_cap)?;
    row.insert("value".into(), rational_value(&r.value));
    row.insert("witness".into(), set_value(&r.witness));
    row.insert("search".into(), serde_json::to_value(r.mode).expect("enum serializes"));
    Ok(row)
}
