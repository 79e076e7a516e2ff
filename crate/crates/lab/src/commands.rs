//! Named experiments. Each command loads its inputs, calls library routines
//! and assembles a [`Report`]; no numerics live here.

use std::path::PathBuf;
use std::sync::Arc;

use holonomy_core::connections::{gauge_act_general, DiscreteGauge, GeneralizedConnection, DEFAULT_STEPS};
use holonomy_core::cylindrical::{evaluate, invariance_check, ChunkSum, CylFunction, HaarMean, TupleFunction, WilsonFunction, DEFAULT_CHUNK};
use holonomy_core::spectra::{
    abelian_obstruction_witness, approximation_experiment, closure_membership, q_star, theta, theta_inverse, ClosureDescriptor, ClosureMode,
    ClosureVerdict, ObstructionVerdict, ThetaData, DEFAULT_BOUND,
};
use holonomy_core::{Graph, Group, GroupElement, PathWord};
use serde_json::{json, Map, Value};

use crate::formats::{self, ConnectionDoc, DescriptorDoc, FamilyDoc, FunctionDoc, GeneralDoc, GraphDoc, SmoothDoc};
use crate::mc;
use crate::report::{self, Report};
use crate::LabError;

/// Default tolerance for the approximation experiment.
pub const APPROX_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_TRIALS: usize = 8;

/// Inputs shared by all commands; each command reads what it needs.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub graph: Option<PathBuf>,
    pub connection: Option<PathBuf>,
    pub function: Option<PathBuf>,
    pub family: Option<PathBuf>,
    pub group: Option<String>,
    pub path: Option<String>,
    pub loops: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub tolerance: Option<f64>,
    pub bound: Option<usize>,
    pub samples: Option<usize>,
    pub trials: Option<usize>,
}

impl RunConfig {
    fn graph(&self) -> Result<Arc<Graph>, LabError> {
        let path = self.graph.as_ref().ok_or_else(|| missing("--graph"))?;
        formats::load::<GraphDoc>(path)?.to_graph()
    }

    fn seed(&self) -> Result<u64, LabError> {
        self.seed.ok_or_else(|| missing("--seed"))
    }

    fn steps(&self) -> usize {
        self.steps.unwrap_or(DEFAULT_STEPS)
    }

    fn connection_doc(&self) -> Result<ConnectionDoc, LabError> {
        formats::load(self.connection.as_ref().ok_or_else(|| missing("--connection"))?)
    }

    fn group_for(&self, doc: Option<&ConnectionDoc>) -> Result<Group, LabError> {
        if let Some(name) = &self.group {
            return formats::parse_group_name(name);
        }
        match doc.and_then(|d| d.group_ref()) {
            Some(g) => g.to_group(),
            None => Err(missing("--group")),
        }
    }

    /// The connection's values on the graph's edges. Smooth connections are
    /// integrated edge by edge.
    fn generalized(&self, graph: &Arc<Graph>) -> Result<GeneralizedConnection, LabError> {
        let doc = self.connection_doc()?;
        let group = self.group_for(Some(&doc))?;
        match &doc {
            ConnectionDoc::General(g) => g.to_connection(graph, &group),
            ConnectionDoc::Smooth(s) => s
                .to_connection(&group)?
                .edge_holonomies(graph.clone(), self.steps())
                .map_err(|e| LabError::op("edge holonomies", e)),
        }
    }

    fn function(&self, graph: &Graph) -> Result<CylFunction, LabError> {
        formats::load::<FunctionDoc>(self.function.as_ref().ok_or_else(|| missing("--function"))?)?.to_function(graph)
    }

    fn path(&self, graph: &Graph) -> Result<PathWord, LabError> {
        let spec = self.path.as_ref().ok_or_else(|| missing("--path"))?;
        formats::path_from_ids(graph, &formats::parse_path_spec(spec)?)
    }
}

fn missing(flag: &str) -> LabError {
    LabError::Invalid(format!("this command needs {flag}"))
}

fn descriptor_json(g: &Group) -> Value {
    serde_json::to_value(DescriptorDoc::from_descriptor(g.descriptor())).expect("descriptors always serialize")
}

fn header(experiment: &str, group: &Group) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("experiment".into(), json!(experiment));
    m.insert("descriptor".into(), descriptor_json(group));
    m
}

pub const COMMANDS: [&str; 8] = ["holonomy", "wilson", "gauge-orbit", "haar-mean", "theta", "approx", "obstruction", "closure"];

pub fn run(command: &str, cfg: &RunConfig) -> Result<Report, LabError> {
    match command {
        "holonomy" => holonomy(cfg),
        "wilson" => wilson(cfg),
        "gauge-orbit" => gauge_orbit(cfg),
        "haar-mean" => haar_mean(cfg),
        "theta" => theta_report(cfg),
        "approx" => approx(cfg),
        "obstruction" => obstruction(cfg),
        "closure" => closure(cfg),
        other => Err(LabError::Invalid(format!("unknown command `{other}`"))),
    }
}

/// Holonomy matrix and trace along `--path`.
pub fn holonomy(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let p = cfg.path(&graph)?;
    let doc = cfg.connection_doc()?;
    let group = cfg.group_for(Some(&doc))?;
    let h = match &doc {
        ConnectionDoc::Smooth(s) => s.to_connection(&group)?.holonomy(&graph, &p, cfg.steps()).map_err(|e| LabError::op("holonomy", e))?,
        ConnectionDoc::General(g) => g.to_connection(&graph, &group)?.holonomy(&p).map_err(|e| LabError::op("holonomy", e))?,
    };
    let mut m = header("holonomy", &group);
    m.insert("path".into(), json!(p.to_signed()));
    m.insert("matrix".into(), report::matrix(h.matrix()));
    m.insert("trace".into(), report::complex(h.matrix().trace()));
    m.insert("unitarity_defect".into(), json!(h.matrix().unitarity_defect()));
    if matches!(doc, ConnectionDoc::Smooth(_)) {
        m.insert("steps".into(), json!(cfg.steps()));
    }
    Ok(Report::new("holonomy", Value::Object(m)))
}

/// Normalized trace along a loop at the basepoint.
pub fn wilson(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let p = cfg.path(&graph)?;
    let h = cfg.generalized(&graph)?;
    let value = WilsonFunction { path: p.clone() }.eval(&h).map_err(|e| LabError::op("wilson", e))?;
    let mut m = header("wilson", h.group());
    m.insert("path".into(), json!(p.to_signed()));
    m.insert("value".into(), report::complex(value));
    Ok(Report::new("wilson", Value::Object(m)))
}

/// Gauge orbit diagnostics: how much a cylindrical function (if given)
/// moves under random gauge transformations, and how far the orbit normal
/// form drifts.
pub fn gauge_orbit(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let seed = cfg.seed()?;
    let trials = cfg.trials.unwrap_or(DEFAULT_TRIALS);
    let h = cfg.generalized(&graph)?;
    let t = ThetaData::new(graph.clone());
    let base = q_star(&h, &t).map_err(|e| LabError::op("q_star", e))?;
    let mut spread: f64 = 0.0;
    let mut degenerate = base.degenerate;
    let mut rows = Vec::new();
    for k in 0..trials {
        let g = DiscreteGauge::random(&graph, h.group().clone(), seed.wrapping_add(k as u64));
        let moved = gauge_act_general(&h, &g).map_err(|e| LabError::op("gauge action", e))?;
        let q = q_star(&moved, &t).map_err(|e| LabError::op("q_star", e))?;
        degenerate |= q.degenerate;
        let d = base.loops.iter().zip(&q.loops).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
        spread = spread.max(d);
        rows.push((k as f64, d));
    }
    let mut m = header("gauge-orbit", h.group());
    m.insert("seed".into(), json!(seed));
    m.insert("trials".into(), json!(trials));
    m.insert("normal_form_spread".into(), json!(spread));
    m.insert("degenerate".into(), json!(degenerate));
    m.insert("normal_form".into(), Value::Array(base.loops.iter().map(report::matrix).collect()));
    if cfg.function.is_some() {
        let f = cfg.function(&graph)?;
        m.insert("value".into(), report::complex(evaluate(&f, &h).map_err(|e| LabError::op("evaluate", e))?));
        let dev = invariance_check(&f, &h, trials, seed).map_err(|e| LabError::op("invariance check", e))?;
        m.insert("invariance_deviation".into(), json!(dev));
    }
    let mut r = Report::new("gauge-orbit", Value::Object(m));
    r.plot = Some(report::plot(rows));
    Ok(r)
}

/// Monte Carlo mean value `⟨F⟩(H)` of a cylindrical function.
pub fn haar_mean(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let seed = cfg.seed()?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let h = cfg.generalized(&graph)?;
    let f = cfg.function(&graph)?;
    let hs = f
        .paths()
        .iter()
        .map(|p| h.holonomy(p).map(GroupElement::into_matrix))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| LabError::op("holonomy", e))?;
    let mean = HaarMean::new(f, h.group().clone(), samples, seed).map_err(|e| LabError::op("haar mean", e))?;
    let chunks = mc::with_pool(|| mc::chunk_sums(&mean, &hs))??;
    let est = ChunkSum::reduce(&chunks).estimate();
    let mut m = header("haar-mean", h.group());
    m.insert("seed".into(), json!(seed));
    m.insert("samples".into(), json!(est.samples));
    m.insert("chunk".into(), json!(DEFAULT_CHUNK));
    m.insert("mean".into(), report::complex(est.mean));
    m.insert("std_error".into(), json!(est.std_error));
    m.insert("endpoints".into(), json!(mean.endpoints().iter().map(|v| v.0).collect::<Vec<_>>()));
    // Running estimate after each chunk, for convergence plots.
    let mut running = Vec::with_capacity(chunks.len());
    let (mut sum, mut count) = (holonomy_core::linalg::c64(0.0, 0.0), 0usize);
    for c in &chunks {
        sum += c.sum;
        count += c.count;
        running.push((count as f64, (sum / count as f64).re));
    }
    let mut r = Report::new("haar-mean", Value::Object(m));
    r.plot = Some(report::plot(running));
    Ok(r)
}

/// The spanning-tree factorization `H ↦ (H_⋆, frame)` and its roundtrip.
pub fn theta_report(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let h = cfg.generalized(&graph)?;
    let t = ThetaData::new(graph.clone());
    let pair = theta(&h, &t).map_err(|e| LabError::op("theta", e))?;
    let back = theta_inverse(&pair, &t).map_err(|e| LabError::op("theta inverse", e))?;
    let roundtrip = h
        .values()
        .iter()
        .map(|(e, v)| back.value(*e).map_or(f64::INFINITY, |w| v.matrix().distance(w.matrix())))
        .fold(0.0, f64::max);
    let mut m = header("theta", h.group());
    m.insert("generators".into(), json!(t.generators().iter().map(|p| p.to_signed()).collect::<Vec<_>>()));
    m.insert("generator_edges".into(), json!(t.generator_edges().iter().map(|e| e.0).collect::<Vec<_>>()));
    m.insert("loops".into(), Value::Array(pair.loops.iter().map(|g| report::matrix(g.matrix())).collect()));
    let frame: Map<String, Value> = pair.frame.iter().map(|(v, g)| (v.0.to_string(), report::matrix(g.matrix()))).collect();
    m.insert("frame".into(), Value::Object(frame));
    m.insert("roundtrip_error".into(), json!(roundtrip));
    Ok(Report::new("theta", Value::Object(m)))
}

/// Haar targets for the approximation experiment: target `k` is drawn from
/// its own seed so that adding members does not change earlier targets.
pub fn approx_targets(group: &Group, seed: u64, count: usize) -> Vec<GroupElement> {
    (0..count as u64).map(|k| group.haar_sample(seed.wrapping_mul(1_000_003).wrapping_add(k))).collect()
}

/// Builds a smooth connection realizing Haar-random holonomies on an
/// independent family and reports the achieved errors.
pub fn approx(cfg: &RunConfig) -> Result<Report, LabError> {
    let group = formats::parse_group_name(cfg.group.as_deref().ok_or_else(|| missing("--group"))?)?;
    let seed = cfg.seed()?;
    let tolerance = cfg.tolerance.unwrap_or(APPROX_TOLERANCE);
    let steps = cfg.steps();
    let fdoc: FamilyDoc = formats::load(cfg.family.as_ref().ok_or_else(|| missing("--family"))?)?;
    let graph = match (&fdoc.graph, &cfg.graph) {
        (Some(g), _) => g.to_graph()?,
        (None, Some(_)) => cfg.graph()?,
        (None, None) => return Err(missing("--graph (or a graph inside the family file)")),
    };
    let family = fdoc.to_family(&graph)?;
    let targets = approx_targets(&group, seed, family.members().len());
    let rep = approximation_experiment(&group, &family, &targets, tolerance, steps).map_err(|e| LabError::op("approximation experiment", e))?;
    let mut m = header("approx", &group);
    m.insert("seed".into(), json!(seed));
    m.insert("steps".into(), json!(steps));
    m.insert("tolerance".into(), json!(tolerance));
    m.insert("errors".into(), json!(rep.errors));
    m.insert("max_error".into(), json!(rep.max_error));
    m.insert("verdict".into(), json!(if rep.met { "met" } else { "not met" }));
    m.insert("terms".into(), json!(rep.connection.terms().len()));
    let rows: Vec<Vec<String>> = rep.errors.iter().enumerate().map(|(k, e)| vec![(k + 1).to_string(), format!("{e:e}")]).collect();
    let mut r = Report::new("approx", Value::Object(m));
    r.csv = Some(report::csv_table(&["member", "error"], &rows)?);
    r.plot = Some(report::plot(rep.errors.iter().enumerate().map(|(k, e)| ((k + 1) as f64, *e))));
    let conn = serde_json::to_string_pretty(&SmoothDoc::from_connection(&rep.connection)).map_err(|e| LabError::op("serialize connection", e))?;
    r.extra.push(("connection.json".into(), conn + "\n"));
    r.failed = !rep.met;
    Ok(r)
}

/// Loops named by `--loops`: `generators`, `commutator` (of the first two
/// generators), or `;`-separated signed edge lists.
pub fn parse_loops(graph: &Arc<Graph>, spec: &str) -> Result<Vec<PathWord>, LabError> {
    let t = ThetaData::new(graph.clone());
    let gens = t.generators();
    match spec.trim() {
        "generators" => Ok(gens.to_vec()),
        "commutator" => {
            let [a, b] = gens.get(..2).and_then(|s| <&[PathWord; 2]>::try_from(s).ok()).ok_or_else(|| {
                LabError::Invalid(format!("the commutator needs two loop generators; the graph has {}", gens.len()))
            })?;
            let c = a.then(b).and_then(|p| p.then(&a.inverse())).and_then(|p| p.then(&b.inverse()));
            Ok(vec![c.map_err(|e| LabError::op("compose", e))?])
        }
        other => other
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| formats::path_from_ids(graph, &formats::parse_path_spec(s)?))
            .collect(),
    }
}

/// Which loops smooth Abelian holonomy cannot see.
pub fn obstruction(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let loops = parse_loops(&graph, cfg.loops.as_deref().ok_or_else(|| missing("--loops"))?)?;
    let entries = abelian_obstruction_witness(&graph, &loops).map_err(|e| LabError::op("obstruction witness", e))?;
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let verdict = match e.verdict {
            ObstructionVerdict::Obstructed => "obstructed",
            ObstructionVerdict::Unobstructed => "unobstructed",
        };
        let abel: Map<String, Value> = e.abelianization.iter().map(|(id, n)| (id.0.to_string(), json!(n))).collect();
        let mut entry = Map::new();
        entry.insert("path".into(), json!(e.path.to_signed()));
        entry.insert("abelianization".into(), Value::Object(abel));
        entry.insert("chain_support".into(), json!(e.chain.len()));
        entry.insert("verdict".into(), json!(verdict));
        if let Some(w) = &e.witness {
            let conn = w.connection.as_ref().map(|c| serde_json::to_value(GeneralDoc::from_connection(c)).expect("documents serialize"));
            entry.insert("witness".into(), json!({ "assignment": report::complex(w.assignment), "connection": conn }));
        }
        rows.push(vec![(k + 1).to_string(), e.path.to_string(), verdict.to_string()]);
        list.push(Value::Object(entry));
    }
    let mut m = header("obstruction", &Group::torus(1));
    m.insert("loops".into(), Value::Array(list));
    let mut r = Report::new("obstruction", Value::Object(m));
    r.csv = Some(report::csv_table(&["loop", "path", "verdict"], &rows)?);
    Ok(r)
}

pub fn parse_mode(s: &str) -> Result<ClosureMode, LabError> {
    Ok(match s {
        "semisimple" | "semisimple-full" => ClosureMode::SemisimpleFull,
        "torus" | "torus-abelianized" => ClosureMode::TorusAbelianized,
        "product" | "product-split" => ClosureMode::ProductSplit,
        "quotient" | "quotient-pushforward" => ClosureMode::QuotientPushforward,
        _ => return Err(LabError::Invalid(format!("unknown closure mode `{s}`; expected semisimple, torus, product or quotient"))),
    })
}

fn mode_name(m: ClosureMode) -> &'static str {
    match m {
        ClosureMode::SemisimpleFull => "semisimple-full",
        ClosureMode::TorusAbelianized => "torus-abelianized",
        ClosureMode::ProductSplit => "product-split",
        ClosureMode::QuotientPushforward => "quotient-pushforward",
    }
}

fn verdict_json(v: &ClosureVerdict) -> Value {
    match v {
        ClosureVerdict::Member => json!({ "member": true }),
        ClosureVerdict::NotMember { word, path, value } => json!({
            "member": false,
            "relation": word,
            "path": path.to_signed(),
            "value": report::complex(*value),
        }),
    }
}

/// Whether a generalized connection lies in the closure of the smooth
/// holonomies, at the level of the graph's loop generators.
pub fn closure(cfg: &RunConfig) -> Result<Report, LabError> {
    let graph = cfg.graph()?;
    let bound = cfg.bound.unwrap_or(DEFAULT_BOUND);
    let h = cfg.generalized(&graph)?;
    let desc = h.group().descriptor().clone();
    let cd = match &cfg.mode {
        Some(s) => ClosureDescriptor::new(desc, parse_mode(s)?).map_err(|e| LabError::op("closure descriptor", e))?,
        None => ClosureDescriptor::for_descriptor(desc),
    };
    let t = ThetaData::new(graph.clone());
    let rep = closure_membership(&h, &cd, &t, bound).map_err(|e| LabError::op("closure membership", e))?;
    let mut m = header("closure", h.group());
    m.insert("mode".into(), json!(mode_name(rep.mode)));
    m.insert("bound".into(), json!(rep.bound));
    m.insert("relations".into(), json!(rep.relations));
    m.insert("verdict".into(), verdict_json(&rep.verdict));
    let blocks: Vec<Value> = rep
        .blocks
        .iter()
        .map(|b| {
            json!({
                "offset": b.offset,
                "descriptor": serde_json::to_value(DescriptorDoc::from_descriptor(&b.descriptor)).expect("descriptors serialize"),
                "verdict": verdict_json(&b.verdict),
            })
        })
        .collect();
    m.insert("blocks".into(), Value::Array(blocks));
    m.insert("lift".into(), json!(rep.lift));
    let mut r = Report::new("closure", Value::Object(m));
    r.failed = !rep.verdict.is_member();
    Ok(r)
}
