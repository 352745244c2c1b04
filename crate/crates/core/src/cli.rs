//! Command-line front end. Every command writes JSON lines: a header with
//! the command and seed, then records, then a summary.

use crate::apps::des::{
    closed_form_report, des_flow, des_laplacian_closed_form, des_sheaf, sync_inequalities, ClosedForm,
};
use crate::apps::paths::{shortest_paths, DijkstraSchedule, PathMode};
use crate::apps::prefs::{bounded_confidence_flow, pushforward};
use crate::error::{Error, Result};
use crate::gen::{random_connected_graph, random_diagram, random_lattice};
use crate::io::{parse_document, Document, SheafDoc};
use crate::oracle::{
    brute_global_sections, brute_weighted_join, brute_weighted_meet, classic_shortest_paths,
    grid_residual, transitive_closure, OracleConfig,
};
use crate::qcat::{FiniteQCategory, QCategory};
use crate::quantale::{check_quantale_laws, Elem, LawSamples, Quantale, TNorm};
use crate::report::LawReport;
use crate::sheaf::{Cochain, FlowConfig, FlowSchedule, FlowStatus, FlowTrace, StepWeights, Unweighted};
use crate::stalk::{elem_json, Stalk, Value};
use crate::wlattice::{weighted_meet_via_identity_join, WeightedDiagram, WeightedLattice};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "qsheaf", version, about = "Diffusion on quantale-enriched network sheaves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Run every law suite that applies to the input.
    Validate,
    /// Iterate harmonic flow on a sheaf and print one record per step.
    Flow,
    /// Enumerate the fuzzy global sections of a sheaf.
    Sections,
    /// Cross-check constructions against brute-force oracles.
    Verify,
    /// Synchronise a discrete-event system.
    Des,
    /// Shortest paths by harmonic flow.
    Paths,
    /// Preference diffusion under bounded confidence.
    Prefs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Unweighted,
    Dijkstra,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunConfig {
    /// Input document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the tolerance of the input's quantale.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = ScheduleKind::Unweighted)]
    pub schedule: ScheduleKind,
    /// Grid points per unit for residual oracles.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    pub grid: u32,
}

/// Output of one command: JSON lines plus whether every check passed.
pub struct Outcome {
    pub lines: Vec<Json>,
    pub ok: bool,
}

impl Outcome {
    fn new(command: &str, run: &RunConfig) -> Self {
        let mut header = json!({
            "record": "header",
            "command": command,
            "seed": run.seed,
            "max_iter": run.max_iter,
            "schedule": format!("{:?}", run.schedule).to_lowercase(),
            "grid": run.grid,
        });
        if let Some(p) = &run.input {
            header["input"] = json!(p.display().to_string());
        }
        if let Some(t) = run.tolerance {
            header["tolerance"] = json!(t);
        }
        Outcome {
            lines: vec![header],
            ok: true,
        }
    }

    fn push(&mut self, v: Json) {
        self.lines.push(v);
    }

    fn report(&mut self, rep: &LawReport) {
        self.ok &= rep.passed();
        let mut v = serde_json::to_value(rep).expect("reports serialize");
        v["record"] = json!("report");
        v["passed"] = json!(rep.passed());
        self.lines.push(v);
    }

    fn summary(&mut self, extra: Json) {
        let mut v = json!({"record": "summary", "ok": self.ok});
        if let (Json::Object(m), Json::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        self.lines.push(v);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(&l.to_string());
            s.push('\n');
        }
        s
    }
}

/// Parses the input, applying a tolerance override to its quantale.
fn load(run: &RunConfig) -> Result<Document> {
    let path = run
        .input
        .as_ref()
        .ok_or_else(|| Error::parse("--input", "this command needs an input file"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    match run.tolerance {
        None => parse_document(&text),
        Some(t) => {
            let mut doc: Json = serde_json::from_str(&text)
                .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
            if let Some(q) = doc.get_mut("quantale").and_then(Json::as_object_mut) {
                let exact = matches!(
                    q.get("kind").and_then(Json::as_str),
                    Some("finite_chain") | Some("finite_powerset")
                );
                if !exact {
                    q.insert("tolerance".into(), json!(t));
                }
            }
            parse_document(&doc.to_string())
        }
    }
}

fn flow_config(run: &RunConfig) -> FlowConfig {
    FlowConfig {
        max_iter: run.max_iter as usize,
        divergence_bound: None,
    }
}

fn cochain_json(ids: &[String], render: impl Fn(usize) -> Json) -> Json {
    let mut m = serde_json::Map::new();
    for (v, id) in ids.iter().enumerate() {
        m.insert(id.clone(), render(v));
    }
    Json::Object(m)
}

fn sheaf_cochain(doc: &SheafDoc, x: &Cochain<Value>) -> Json {
    let g = doc.sheaf.graph();
    cochain_json(g.ids(), |v| doc.sheaf.vertex_stalk(v).render(&x.0[v]))
}

fn trace_lines<O>(
    out: &mut Outcome,
    trace: &FlowTrace<O>,
    render: impl Fn(&Cochain<O>) -> Json,
) {
    let last = trace.iterations.len().saturating_sub(1);
    for (i, r) in trace.iterations.iter().enumerate() {
        let status = if i == last { trace.status.name() } else { "running" };
        out.push(json!({
            "record": "iteration",
            "t": r.t,
            "values": render(&r.cochain),
            "suffix_level": elem_json(r.suffix_level),
            "status": status,
        }));
    }
}

fn status_json(s: &FlowStatus) -> Json {
    match s {
        FlowStatus::Converged(t) => json!({"status": "converged", "at": t}),
        FlowStatus::MaxIterReached => json!({"status": "max_iter_reached"}),
        FlowStatus::Diverging(t) => json!({"status": "diverging", "at": t}),
    }
}

/// Runs the Dijkstra frontier schedule over scalar stalks.
struct ScalarDijkstra(DijkstraSchedule);

impl FlowSchedule<Value> for ScalarDijkstra {
    fn step(&mut self, t: usize, x: &Cochain<Value>) -> StepWeights {
        let xs = Cochain(x.0.iter().map(|v| Stalk::scalar(v).unwrap_or(f64::INFINITY)).collect());
        self.0.step(t, &xs)
    }

    fn settled(&self) -> bool {
        self.0.settled()
    }
}

pub fn cmd_validate(run: &RunConfig) -> Result<Outcome> {
    let doc = load(run)?;
    let mut out = Outcome::new("validate", run);
    out.push(json!({"record": "document", "type": doc.type_name()}));
    match &doc {
        Document::Quantale(q) => {
            let samples = match q.carrier() {
                Some(_) => LawSamples::Exhaustive,
                None => LawSamples::Random {
                    count: 10_000,
                    seed: run.seed,
                },
            };
            out.report(&check_quantale_laws(q, &samples)?);
        }
        Document::Category(c) => out.report(&c.validate()),
        Document::Sheaf(d) => {
            for v in 0..d.sheaf.graph().vertex_count() {
                if let Stalk::Finite(c) = d.sheaf.vertex_stalk(v) {
                    let mut rep = c.validate();
                    rep.subject = format!("stalk at {}", d.sheaf.graph().id(v));
                    out.report(&rep);
                }
            }
            out.report(&d.sheaf.validate());
            out.push(json!({"record": "level", "level": elem_json(d.sheaf.level())}));
        }
        Document::Des(d) => {
            let sheaf = crate::apps::des::des_sheaf(&d.system)?;
            out.report(&sheaf.validate());
            out.push(json!({"record": "level", "level": elem_json(sheaf.level())}));
        }
        Document::Paths(p) => {
            out.push(json!({"record": "graph", "vertices": p.graph.vertex_count(), "edges": p.graph.edge_count()}));
        }
        Document::Prefs(p) => {
            let mut rep = LawReport::new("agent preferences");
            for (v, r) in p.agents.iter().enumerate() {
                let res = r.validate(&p.lattice.quantale);
                rep.check("reflexive and transitive", res.is_ok(), || {
                    format!("{}: {}", p.graph.id(v), res.err().map(|e| e.to_string()).unwrap_or_default())
                });
            }
            out.report(&rep);
        }
    }
    out.summary(json!({}));
    Ok(out)
}

pub fn cmd_flow(run: &RunConfig) -> Result<Outcome> {
    let Document::Sheaf(doc) = load(run)? else {
        return Err(Error::parse("type", "flow needs a sheaf document"));
    };
    let x0 = doc
        .initial
        .clone()
        .ok_or_else(|| Error::parse("initial", "flow needs an initial cochain"))?;
    let n = doc.sheaf.graph().vertex_count();
    let q = *doc.sheaf.quantale();
    let trace = match run.schedule {
        ScheduleKind::Unweighted => {
            let mut s = Unweighted::new(q, n);
            doc.sheaf.harmonic_flow(&doc.weighting, x0, &flow_config(run), &mut s)?
        }
        ScheduleKind::Dijkstra => {
            if x0.0.iter().any(|v| Stalk::scalar(v).is_none()) {
                return Err(Error::parse("initial", "the dijkstra schedule needs scalar stalks"));
            }
            let mut s = ScalarDijkstra(DijkstraSchedule::new(n));
            doc.sheaf.harmonic_flow(&doc.weighting, x0, &flow_config(run), &mut s)?
        }
    };
    let mut out = Outcome::new("flow", run);
    trace_lines(&mut out, &trace, |x| sheaf_cochain(&doc, x));
    out.summary(json!({
        "flow": status_json(&trace.status),
        "iterations": trace.iterations.len(),
    }));
    Ok(out)
}

pub fn cmd_sections(run: &RunConfig) -> Result<Outcome> {
    let Document::Sheaf(doc) = load(run)? else {
        return Err(Error::parse("type", "sections needs a sheaf document"));
    };
    let sections = doc.sheaf.global_sections(&doc.weighting)?;
    let mut out = Outcome::new("sections", run);
    for (i, s) in sections.iter().enumerate() {
        out.push(json!({"record": "section", "index": i, "values": sheaf_cochain(&doc, s)}));
    }
    let hom: Vec<Vec<Json>> = sections
        .iter()
        .map(|a| sections.iter().map(|b| elem_json(doc.sheaf.cochain_hom(a, b))).collect())
        .collect();
    out.push(json!({"record": "hom", "matrix": hom}));
    out.summary(json!({"count": sections.len()}));
    Ok(out)
}

fn limits_agree<L>(lat: &L, d: &WeightedDiagram<L::Obj>, rep: &mut LawReport) -> Result<()>
where
    L: WeightedLattice,
{
    let meet = lat.weighted_meet(d);
    let via = weighted_meet_via_identity_join(lat, d);
    let brute = brute_weighted_meet(lat, d);
    let join = lat.weighted_join(d);
    let brute_join = brute_weighted_join(lat, d);
    let label = || format!("{} terms", d.len());
    match (&meet, &brute) {
        (Ok(m), Ok(b)) => {
            let b = b.first().expect("nonempty");
            rep.check("meet agrees with oracle", lat.iso(m, b), label);
        }
        (Err(_), Err(_)) => {}
        _ => rep.fail("meet agrees with oracle", format!("{}: existence differs", label())),
    }
    if let (Ok(m), Ok(v)) = (&meet, &via) {
        rep.check("meet agrees with join-based meet", lat.iso(m, v), label);
    }
    match (&join, &brute_join) {
        (Ok(j), Ok(b)) => {
            let b = b.first().expect("nonempty");
            rep.check("join agrees with oracle", lat.iso(j, b), label);
        }
        (Err(_), Err(_)) => {}
        _ => rep.fail("join agrees with oracle", format!("{}: existence differs", label())),
    }
    Ok(())
}

fn verify_paths(graph: &crate::sheaf::Graph, weights: &[Elem], source: usize, cfg: &FlowConfig, rep: &mut LawReport) -> Result<()> {
    let oracle = classic_shortest_paths(graph, weights, source);
    for mode in [PathMode::Dijkstra, PathMode::Synchronous] {
        let r = shortest_paths(graph, weights, source, mode, cfg)?;
        rep.check("flow distances equal classic distances", r.distances == oracle, || {
            format!("{mode:?}: {:?} vs {:?}", r.distances, oracle)
        });
        if mode == PathMode::Dijkstra {
            rep.check("one extraction per vertex", r.extractions == graph.vertex_count(), || {
                format!("{} extractions on {} vertices", r.extractions, graph.vertex_count())
            });
        }
    }
    Ok(())
}

fn verify_residuals(q: &Quantale, samples: &[Elem], grid: u32, rep: &mut LawReport) {
    for &p in samples {
        for &r in samples {
            let (a, b) = (q.hom(p, r), grid_residual(q, p, r, grid));
            let close = a == b || (a - b).abs() <= 1.0 / f64::from(grid);
            rep.check("closed-form hom equals grid residual", close, || {
                format!("[{}, {}]: {} vs {}", q.format(p), q.format(r), q.format(a), q.format(b))
            });
        }
    }
}

pub fn cmd_verify(run: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::new("verify", run);
    let cfg = flow_config(run);
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    if run.input.is_none() {
        let mut rep = LawReport::new("residuals");
        for q in [
            Quantale::unit_interval(TNorm::Product),
            Quantale::unit_interval(TNorm::Lukasiewicz),
            Quantale::unit_interval(TNorm::Min),
            Quantale::lawvere(),
            Quantale::chain(4),
            Quantale::powerset(2),
        ] {
            let mut samples = q.weight_grid();
            samples.extend((0..6).map(|_| q.random_element(&mut rng)));
            verify_residuals(&q, &samples, run.grid, &mut rep);
        }
        out.report(&rep);
        let mut rep = LawReport::new("weighted limits");
        for q in [Quantale::boolean(), Quantale::chain(3)] {
            for _ in 0..20 {
                let lat = random_lattice(&mut rng, q, 6);
                let objs: Vec<usize> = (0..lat.len()).collect();
                let d = random_diagram(&mut rng, &objs, &q.weight_grid(), 4);
                limits_agree(&lat, &d, &mut rep)?;
            }
        }
        out.report(&rep);
        let mut rep = LawReport::new("shortest paths");
        for _ in 0..10 {
            let n = rng.gen_range(1..=20);
            let g = random_connected_graph(&mut rng, n, n / 2);
            let w: Vec<Elem> = (0..g.edge_count()).map(|_| f64::from(rng.gen_range(1..=20u32))).collect();
            verify_paths(&g, &w, 0, &cfg, &mut rep)?;
        }
        out.report(&rep);
        out.summary(json!({}));
        return Ok(out);
    }
    match load(run)? {
        Document::Quantale(q) => {
            let mut rep = LawReport::new("residuals");
            let mut samples = q.weight_grid();
            samples.extend((0..10).map(|_| q.random_element(&mut rng)));
            verify_residuals(&q, &samples, run.grid, &mut rep);
            out.report(&rep);
        }
        Document::Category(c) => {
            out.report(&c.validate());
            let mut rep = LawReport::new("weighted limits");
            diagrams_on(&c, &mut rng, &mut rep)?;
            out.report(&rep);
        }
        Document::Sheaf(d) => {
            let mut rep = LawReport::new("global sections");
            match d.sheaf.global_sections(&d.weighting) {
                Ok(s) => {
                    let brute = brute_global_sections(&d.sheaf, &d.weighting, OracleConfig::default().max_cochains)?;
                    rep.check("sections equal exhaustive enumeration", s == brute, || {
                        format!("{} vs {} sections", s.len(), brute.len())
                    });
                }
                Err(Error::NotEnumerable(_)) => {}
                Err(e) => return Err(e),
            }
            out.report(&rep);
            let mut rep = LawReport::new("weighted limits");
            for v in 0..d.sheaf.graph().vertex_count() {
                if let Stalk::Finite(c) = d.sheaf.vertex_stalk(v) {
                    diagrams_on(c, &mut rng, &mut rep)?;
                }
            }
            out.report(&rep);
        }
        Document::Des(d) => {
            let trace = des_flow(&d.system, d.initial.clone(), &cfg)?;
            let mut samples: Vec<Cochain<Vec<Elem>>> =
                trace.iterations.iter().take(5).map(|r| r.cochain.clone()).collect();
            samples.extend(d.initial.clone());
            let full = closed_form_report(&d.system, &samples)?;
            let mut rep = LawReport::new("transport closed form");
            let generic = des_sheaf(&d.system)?;
            for x in &samples {
                let a = generic.laplacian(&d.system.weighting, x)?;
                let b = des_laplacian_closed_form(&d.system, x, ClosedForm::Transport)?;
                let r = Quantale::lawvere();
                let same = a.0.iter().flatten().zip(b.0.iter().flatten()).all(|(p, q)| r.eq(*p, *q));
                rep.check("closed form equals generic Laplacian", same, || {
                    format!("x={:?}: {:?} vs {:?}", x.0, a.0, b.0)
                });
            }
            out.report(&rep);
            let displayed: Vec<_> = full
                .violations
                .iter()
                .filter(|v| v.law.starts_with("displayed"))
                .map(|v| v.witness.clone())
                .collect();
            out.push(json!({"record": "displayed_closed_form", "matches": displayed.is_empty(), "mismatches": displayed}));
        }
        Document::Paths(p) => {
            let mut rep = LawReport::new("shortest paths");
            verify_paths(&p.graph, &p.weights, p.source, &cfg, &mut rep)?;
            out.report(&rep);
        }
        Document::Prefs(p) => {
            let q = p.lattice.quantale;
            let mut rep = LawReport::new("preference joins");
            for a in &p.agents {
                for b in &p.agents {
                    let joined = p.lattice.crisp_join(&[a.clone(), b.clone()]);
                    let raw: Vec<Vec<Elem>> = a.pointwise(b, |x, y| q.join2(x, y)).rows();
                    let oracle = transitive_closure(&q, &raw);
                    match joined {
                        Ok(j) => rep.check("join equals oracle closure", j.rows() == oracle, || {
                            format!("{:?} vs {:?}", j.rows(), oracle)
                        }),
                        Err(e) => rep.check("join equals oracle closure", false, || e.to_string()),
                    };
                }
            }
            let n = p.lattice.n();
            let ident: Vec<usize> = (0..n).collect();
            for a in &p.agents {
                let pushed = pushforward(&q, &ident, n, a);
                rep.check("identity pushforward is identity", pushed == *a, || format!("{:?}", a.rows()));
            }
            out.report(&rep);
        }
    }
    out.summary(json!({}));
    Ok(out)
}

fn diagrams_on(c: &FiniteQCategory, rng: &mut ChaCha8Rng, rep: &mut LawReport) -> Result<()> {
    let q = *c.quantale();
    let objs: Vec<usize> = (0..c.len()).collect();
    for _ in 0..20 {
        let d = random_diagram(rng, &objs, &q.weight_grid(), 4);
        limits_agree(c, &d, rep)?;
    }
    Ok(())
}

pub fn cmd_des(run: &RunConfig) -> Result<Outcome> {
    let Document::Des(d) = load(run)? else {
        return Err(Error::parse("type", "des needs a des document"));
    };
    let trace = des_flow(&d.system, d.initial.clone(), &flow_config(run))?;
    let ids = d.system.graph.ids().to_vec();
    let mut out = Outcome::new("des", run);
    let vec_json = |x: &Vec<Elem>| Json::Array(x.iter().map(|&p| elem_json(p)).collect());
    trace_lines(&mut out, &trace, |x| cochain_json(&ids, |v| vec_json(&x.0[v])));
    let mut extra = json!({"flow": status_json(&trace.status)});
    if let (FlowStatus::Converged(_), Some(x)) = (trace.status, trace.final_cochain()) {
        let tol = run.tolerance.unwrap_or(1e-9);
        let s = sync_inequalities(&d.system, x, tol)?;
        out.ok &= s.ok;
        out.push(json!({"record": "synchronization", "ok": s.ok, "min_slack": elem_json(s.min_slack)}));
        extra["synchronized"] = json!(s.ok);
    }
    let samples: Vec<Cochain<Vec<Elem>>> = trace.iterations.iter().map(|r| r.cochain.clone()).take(8).collect();
    let rep = closed_form_report(&d.system, &samples)?;
    let mut v = serde_json::to_value(&rep).expect("reports serialize");
    v["record"] = json!("closed_form");
    out.push(v);
    out.summary(extra);
    Ok(out)
}

pub fn cmd_paths(run: &RunConfig) -> Result<Outcome> {
    let Document::Paths(p) = load(run)? else {
        return Err(Error::parse("type", "paths needs a paths document"));
    };
    let mode = match run.schedule {
        ScheduleKind::Dijkstra => PathMode::Dijkstra,
        ScheduleKind::Unweighted => PathMode::Synchronous,
    };
    let r = shortest_paths(&p.graph, &p.weights, p.source, mode, &flow_config(run))?;
    let oracle = classic_shortest_paths(&p.graph, &p.weights, p.source);
    let ids = p.graph.ids().to_vec();
    let mut out = Outcome::new("paths", run);
    trace_lines(&mut out, &r.trace, |x| cochain_json(&ids, |v| elem_json(x.0[v])));
    out.ok &= r.distances == oracle;
    out.push(json!({
        "record": "distances",
        "values": cochain_json(&ids, |v| elem_json(r.distances[v])),
        "oracle": cochain_json(&ids, |v| elem_json(oracle[v])),
        "extractions": r.extractions,
    }));
    out.summary(json!({"flow": status_json(&r.trace.status), "matches_oracle": r.distances == oracle}));
    Ok(out)
}

pub fn cmd_prefs(run: &RunConfig) -> Result<Outcome> {
    let Document::Prefs(p) = load(run)? else {
        return Err(Error::parse("type", "prefs needs a prefs document"));
    };
    let res = bounded_confidence_flow(&p.lattice, &p.graph, p.agents.clone(), p.eps.clone(), &flow_config(run))?;
    let ids = p.graph.ids().to_vec();
    let mut out = Outcome::new("prefs", run);
    out.push(json!({"record": "alternatives", "names": p.lattice.alternatives}));
    let stalk = Stalk::Pref(p.lattice.clone());
    trace_lines(&mut out, &res.trace, |x| {
        cochain_json(&ids, |v| stalk.render(&Value::Relation(x.0[v].clone())))
    });
    out.summary(json!({"flow": status_json(&res.trace.status), "updates": res.updates}));
    Ok(out)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let run = &cli.run;
    match cli.command {
        Command::Validate => cmd_validate(run),
        Command::Flow => cmd_flow(run),
        Command::Sections => cmd_sections(run),
        Command::Verify => cmd_verify(run),
        Command::Des => cmd_des(run),
        Command::Paths => cmd_paths(run),
        Command::Prefs => cmd_prefs(run),
    }
}

/// Exit codes: 0 success, 1 a law or oracle check failed, 2 bad input.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let text = out.render();
            let written = match &cli.run.output {
                Some(p) => std::fs::write(p, text).map_err(|e| e.to_string()),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
