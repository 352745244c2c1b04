use qsheaf::apps::paths::{shortest_paths, PathMode};
use qsheaf::apps::prefs::{bounded_confidence_flow, PrefLattice, Relation};
use qsheaf::gen::random_connected_graph;
use qsheaf::io::{parse_document, Document};
use qsheaf::oracle::classic_shortest_paths;
use qsheaf::sheaf::{FlowConfig, Graph};
use qsheaf::stalk::{Stalk, Value};
use qsheaf::{Elem, Quantale, TNorm, INF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const K3: &str = include_str!("../../core/fixtures/k3.json");

#[derive(Serialize)]
pub struct PathsView {
    pub vertices: usize,
    pub source: usize,
    pub edges: Vec<(usize, usize, Elem)>,
    /// Distances per iteration; `null` stands for unreached.
    pub frames: Vec<Vec<Option<Elem>>>,
    pub distances: Vec<Option<Elem>>,
    pub oracle: Vec<Option<Elem>>,
    pub extractions: usize,
    pub status: String,
}

#[derive(Serialize)]
pub struct K3View {
    pub vertices: Vec<String>,
    pub frames: Vec<Vec<Elem>>,
    pub suffix_levels: Vec<Option<Elem>>,
    pub status: String,
}

#[derive(Serialize)]
pub struct PrefsView {
    pub alternatives: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    /// One relation matrix per agent per iteration.
    pub frames: Vec<Vec<Vec<Vec<Elem>>>>,
    pub updates: usize,
    pub status: String,
}

fn finite(x: Elem) -> Option<Elem> {
    (x < INF).then_some(x)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Random weighted graph solved by diffusion with either schedule.
pub fn paths_view(n: usize, seed: u64, dijkstra: bool) -> Result<PathsView, String> {
    if !(2..=40).contains(&n) {
        return Err(format!("vertex count {n} outside 2..=40"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_connected_graph(&mut rng, n, n / 2);
    let weights: Vec<Elem> = (0..graph.edge_count()).map(|_| f64::from(rng.gen_range(1..=20u32))).collect();
    let mode = if dijkstra { PathMode::Dijkstra } else { PathMode::Synchronous };
    let r = shortest_paths(&graph, &weights, 0, mode, &FlowConfig::default()).map_err(|e| e.to_string())?;
    Ok(PathsView {
        vertices: n,
        source: 0,
        edges: graph.edges().iter().zip(&weights).map(|(&(a, b), &w)| (a, b, w)).collect(),
        frames: r.trace.iterations.iter().map(|it| it.cochain.0.iter().copied().map(finite).collect()).collect(),
        distances: r.distances.iter().copied().map(finite).collect(),
        oracle: classic_shortest_paths(&graph, &weights, 0).into_iter().map(finite).collect(),
        extractions: r.extractions,
        status: r.trace.status.name().into(),
    })
}

/// The triangle whose restrictions shift around the cycle; no fixed point exists.
pub fn k3_view(steps: usize) -> Result<K3View, String> {
    let Document::Sheaf(doc) = parse_document(K3).map_err(|e| e.to_string())? else {
        return Err("embedded triangle is not a sheaf".into());
    };
    let x0 = doc.initial.clone().ok_or("embedded triangle has no initial cochain")?;
    let cfg = FlowConfig {
        max_iter: steps.clamp(1, 500),
        divergence_bound: None,
    };
    let trace = doc.sheaf.unweighted_flow(&doc.weighting, x0, &cfg).map_err(|e| e.to_string())?;
    let scalar = |v: &Value| Stalk::scalar(v).unwrap_or(INF);
    Ok(K3View {
        vertices: doc.sheaf.graph().ids().to_vec(),
        frames: trace.iterations.iter().map(|it| it.cochain.0.iter().map(scalar).collect()).collect(),
        suffix_levels: trace.iterations.iter().map(|it| finite(it.suffix_level)).collect(),
        status: trace.status.name().into(),
    })
}

/// Four agents on a path ranking three alternatives under the min t-norm;
/// neighbours are heard only when they agree to degree at least `eps`.
pub fn prefs_view(eps: Elem, seed: u64) -> Result<PrefsView, String> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(format!("confidence {eps} outside [0, 1]"));
    }
    let q = Quantale::unit_interval(TNorm::Min);
    let alternatives: Vec<String> = ["red", "green", "blue"].map(String::from).to_vec();
    let lattice = PrefLattice::new(q, alternatives.clone());
    let pool = lattice.relations_on(&[0.0, 0.5, 1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let agents: Vec<Relation> = (0..4).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    let ids = (0..4).map(|i| format!("agent{i}")).collect();
    let graph = Graph::new(ids, vec![(0, 1), (1, 2), (2, 3)]).map_err(|e| e.to_string())?;
    let run = bounded_confidence_flow(&lattice, &graph, agents, vec![eps; 4], &FlowConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(PrefsView {
        alternatives,
        edges: graph.edges().to_vec(),
        frames: run.trace.iterations.iter().map(|it| it.cochain.0.iter().map(Relation::rows).collect()).collect(),
        updates: run.updates,
        status: run.trace.status.name().into(),
    })
}

#[wasm_bindgen]
pub fn shortest_paths_demo(n: usize, seed: u64, dijkstra: bool) -> Result<String, JsValue> {
    paths_view(n, seed, dijkstra).and_then(|v| to_json(&v)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn triangle_demo(steps: usize) -> Result<String, JsValue> {
    k3_view(steps).and_then(|v| to_json(&v)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn confidence_demo(eps: f64, seed: u64) -> Result<String, JsValue> {
    prefs_view(eps, seed).and_then(|v| to_json(&v)).map_err(|e| JsValue::from_str(&e))
}
