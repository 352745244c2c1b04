//! Input documents. Every file is a JSON object with a `"type"` field;
//! quantale elements are numbers or the string `"inf"`.

use crate::apps::des::DesSystem;
use crate::apps::prefs::{PrefLattice, Relation};
use crate::error::{Error, Result};
use crate::qcat::FiniteQCategory;
use crate::quantale::{Elem, Quantale, QuantaleDescriptor};
use crate::sheaf::{Cochain, Graph, NetworkSheaf, Transport, Weighting};
use crate::stalk::{parse_elem, parse_matrix, MapSpec, Stalk, Value};
use crate::wlattice::{PresheafPower, UnderlineQ};
use serde_json::{Map, Value as Json};
use std::collections::BTreeMap;
use std::path::Path;

pub enum Document {
    Quantale(Quantale),
    Category(FiniteQCategory),
    Sheaf(SheafDoc),
    Des(DesDoc),
    Paths(PathsDoc),
    Prefs(PrefsDoc),
}

impl Document {
    pub fn type_name(&self) -> &'static str {
        match self {
            Document::Quantale(_) => "quantale",
            Document::Category(_) => "category",
            Document::Sheaf(_) => "sheaf",
            Document::Des(_) => "des",
            Document::Paths(_) => "paths",
            Document::Prefs(_) => "prefs",
        }
    }
}

pub struct SheafDoc {
    pub sheaf: NetworkSheaf<Stalk>,
    pub weighting: Weighting,
    pub initial: Option<Cochain<Value>>,
}

pub struct DesDoc {
    pub system: DesSystem,
    pub initial: Option<Cochain<Vec<Elem>>>,
}

pub struct PathsDoc {
    pub graph: Graph,
    pub weights: Vec<Elem>,
    pub source: usize,
}

pub struct PrefsDoc {
    pub lattice: PrefLattice,
    pub graph: Graph,
    pub agents: Vec<Relation>,
    pub eps: Vec<Elem>,
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Json = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let obj = as_object(&doc, "$")?;
    let ty = field(obj, "type", "$")?
        .as_str()
        .ok_or_else(|| Error::parse("type", "expected a string"))?;
    match ty {
        "quantale" => Ok(Document::Quantale(quantale_of(obj)?)),
        "category" => Ok(Document::Category(parse_category(obj, &quantale_of(obj)?, "$")?)),
        "sheaf" => parse_sheaf(obj).map(Document::Sheaf),
        "des" => parse_des(obj).map(Document::Des),
        "paths" => parse_paths(obj).map(Document::Paths),
        "prefs" => parse_prefs(obj).map(Document::Prefs),
        other => Err(Error::parse("type", format!("unknown document type {other:?}"))),
    }
}

fn as_object<'a>(v: &'a Json, path: &str) -> Result<&'a Map<String, Json>> {
    v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json> {
    obj.get(key)
        .ok_or_else(|| Error::parse(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path == "$" {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn array<'a>(v: &'a Json, path: &str) -> Result<&'a Vec<Json>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn string(v: &Json, path: &str) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::parse(path, "expected a string"))
}

fn strings(v: &Json, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}[{i}]")))
        .collect()
}

fn quantale_of(obj: &Map<String, Json>) -> Result<Quantale> {
    let d: QuantaleDescriptor = serde_json::from_value(field(obj, "quantale", "$")?.clone())
        .map_err(|e| Error::parse("quantale", e.to_string()))?;
    Quantale::from_descriptor(&d).map_err(|e| Error::parse("quantale", e.to_string()))
}

fn parse_category(obj: &Map<String, Json>, q: &Quantale, path: &str) -> Result<FiniteQCategory> {
    let ids = strings(field(obj, "objects", path)?, &join(path, "objects"))?;
    let hom_path = join(path, "hom");
    let hom = parse_matrix(field(obj, "hom", path)?, &hom_path)?;
    for (i, row) in hom.iter().enumerate() {
        for (j, &h) in row.iter().enumerate() {
            if !q.contains(h) {
                return Err(Error::parse(
                    format!("{hom_path}[{i}][{j}]"),
                    format!("{h} is not in the carrier of {}", q.kind()),
                ));
            }
        }
    }
    FiniteQCategory::new(*q, ids, hom).map_err(|e| Error::parse(path, e.to_string()))
}

fn parse_stalk(v: &Json, q: &Quantale, path: &str) -> Result<Stalk> {
    let obj = as_object(v, path)?;
    let ty = string(field(obj, "type", path)?, &join(path, "type"))?;
    let opposite = obj.get("opposite").and_then(Json::as_bool).unwrap_or(false);
    Ok(match ty.as_str() {
        "finite" => Stalk::Finite(parse_category(obj, q, path)?),
        "underline" => Stalk::Underline(UnderlineQ {
            quantale: *q,
            opposite,
        }),
        "presheaf" => {
            let m = field(obj, "dim", path)?
                .as_u64()
                .ok_or_else(|| Error::parse(join(path, "dim"), "expected a nonnegative integer"))?;
            Stalk::Presheaf(PresheafPower {
                quantale: *q,
                m: m as usize,
                opposite,
            })
        }
        "pref" => Stalk::Pref(PrefLattice::new(
            *q,
            strings(field(obj, "alternatives", path)?, &join(path, "alternatives"))?,
        )),
        other => return Err(Error::parse(join(path, "type"), format!("unknown stalk type {other:?}"))),
    })
}

fn parse_map(v: &Json, path: &str) -> Result<MapSpec> {
    let obj = as_object(v, path)?;
    let kind = string(field(obj, "map", path)?, &join(path, "map"))?;
    let by = || parse_elem(field(obj, "by", path)?, &join(path, "by"));
    let matrix = || parse_matrix(field(obj, "matrix", path)?, &join(path, "matrix"));
    Ok(match kind.as_str() {
        "identity" => MapSpec::Identity,
        "shift" => MapSpec::Shift(by()?),
        "unshift" => MapSpec::Unshift(by()?),
        "maxplus" => MapSpec::MaxPlus(matrix()?),
        "minplus_transpose" => MapSpec::MinPlusTranspose(matrix()?),
        "table" => {
            let table = as_object(field(obj, "table", path)?, &join(path, "table"))?;
            let pairs = table
                .iter()
                .map(|(k, v)| Ok((k.clone(), string(v, &join(&join(path, "table"), k))?)))
                .collect::<Result<Vec<_>>>()?;
            MapSpec::Table(pairs)
        }
        other => return Err(Error::parse(join(path, "map"), format!("unknown map {other:?}"))),
    })
}

fn parse_edge_list(v: &Json, ids: &[String], path: &str) -> Result<Vec<(usize, usize)>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            let ends = match e {
                Json::Array(_) => strings(e, &p)?,
                _ => strings(field(as_object(e, &p)?, "ends", &p)?, &join(&p, "ends"))?,
            };
            if ends.len() != 2 {
                return Err(Error::parse(p, "an edge has exactly two ends"));
            }
            let idx = |s: &str| {
                ids.iter()
                    .position(|x| x == s)
                    .ok_or_else(|| Error::parse(&p, format!("unknown vertex {s:?}")))
            };
            Ok((idx(&ends[0])?, idx(&ends[1])?))
        })
        .collect()
}

/// Orders each edge with its smaller endpoint first and builds the graph.
fn graph_of(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::new(ids, edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect())
}

/// `{"default": q, "entries": [[v, w, q], ..]}` or a bare element.
fn parse_weighting(v: Option<&Json>, graph: &Graph, q: &Quantale, path: &str) -> Result<Weighting> {
    let Some(v) = v else {
        return Ok(Weighting::constant(graph, q.unit()));
    };
    if !v.is_object() {
        let c = parse_elem(v, path)?;
        return Ok(Weighting::constant(graph, q.check(c).map_err(|e| Error::parse(path, e.to_string()))?));
    }
    let obj = as_object(v, path)?;
    let default = match obj.get("default") {
        Some(d) => parse_elem(d, &join(path, "default"))?,
        None => q.unit(),
    };
    let mut w = BTreeMap::new();
    if let Some(es) = obj.get("entries") {
        let ep = join(path, "entries");
        for (i, e) in array(es, &ep)?.iter().enumerate() {
            let p = format!("{ep}[{i}]");
            let parts = array(e, &p)?;
            if parts.len() != 3 {
                return Err(Error::parse(p, "expected [from, to, weight]"));
            }
            let find = |j: usize| -> Result<usize> {
                let s = string(&parts[j], &format!("{p}[{j}]"))?;
                graph
                    .index_of(&s)
                    .ok_or_else(|| Error::parse(format!("{p}[{j}]"), format!("unknown vertex {s:?}")))
            };
            let (a, b) = (find(0)?, find(1)?);
            if !graph.neighbors(a).iter().any(|&(_, u)| u == b) {
                return Err(Error::parse(p, "weights are only defined on adjacent pairs"));
            }
            w.insert((a, b), parse_elem(&parts[2], &format!("{p}[2]"))?);
        }
    }
    for (&(_, _), &x) in &w {
        q.check(x).map_err(|e| Error::parse(path, e.to_string()))?;
    }
    q.check(default).map_err(|e| Error::parse(path, e.to_string()))?;
    Ok(Weighting::from_fn(graph, |a, b| *w.get(&(a, b)).unwrap_or(&default)))
}

fn parse_sheaf(obj: &Map<String, Json>) -> Result<SheafDoc> {
    let q = quantale_of(obj)?;
    let defs = as_object(field(obj, "stalks", "$")?, "stalks")?;
    let mut named = BTreeMap::new();
    for (name, def) in defs {
        named.insert(name.clone(), parse_stalk(def, &q, &format!("stalks.{name}"))?);
    }
    let lookup = |v: &Json, p: &str| -> Result<Stalk> {
        let name = string(v, p)?;
        named
            .get(&name)
            .cloned()
            .ok_or_else(|| Error::parse(p, format!("unknown stalk {name:?}")))
    };
    let default_stalk = obj.get("default_stalk");

    let mut ids = Vec::new();
    let mut vstalks = Vec::new();
    for (i, v) in array(field(obj, "vertices", "$")?, "vertices")?.iter().enumerate() {
        let p = format!("vertices[{i}]");
        match v {
            Json::String(s) => {
                ids.push(s.clone());
                let d = default_stalk.ok_or_else(|| Error::parse(&p, "no stalk and no default_stalk"))?;
                vstalks.push(lookup(d, "default_stalk")?);
            }
            _ => {
                let o = as_object(v, &p)?;
                ids.push(string(field(o, "id", &p)?, &join(&p, "id"))?);
                match o.get("stalk").or(default_stalk) {
                    Some(s) => vstalks.push(lookup(s, &join(&p, "stalk"))?),
                    None => return Err(Error::parse(p, "no stalk and no default_stalk")),
                }
            }
        }
    }

    let edge_json = array(field(obj, "edges", "$")?, "edges")?;
    let pairs = parse_edge_list(field(obj, "edges", "$")?, &ids, "edges")?;
    let graph = graph_of(ids.clone(), &pairs)?;
    let mut estalks: Vec<Option<Stalk>> = vec![None; graph.edge_count()];
    let mut maps: Vec<Option<[[Transport<Value>; 2]; 2]>> = vec![None; graph.edge_count()];
    for (i, (e_json, &(a, b))) in edge_json.iter().zip(&pairs).enumerate() {
        let p = format!("edges[{i}]");
        let e = graph
            .edges()
            .iter()
            .position(|&x| x == (a.min(b), a.max(b)))
            .expect("edge was inserted");
        let eobj = e_json.as_object();
        let estalk = match eobj.and_then(|o| o.get("stalk")).or(default_stalk) {
            Some(s) => lookup(s, &join(&p, "stalk"))?,
            None => vstalks[a].clone(),
        };
        let map_defs = eobj.and_then(|o| o.get("maps"));
        let mut pair: Vec<[Transport<Value>; 2]> = Vec::new();
        for v in [a.min(b), a.max(b)] {
            let vp = format!("{p}.maps.{}", ids[v]);
            let def = match map_defs {
                Some(m) => as_object(m, &join(&p, "maps"))?.get(&ids[v]),
                None => None,
            };
            let (res, cores) = match def {
                None => (MapSpec::Identity, None),
                Some(d) => {
                    let d = as_object(d, &vp)?;
                    let res = parse_map(field(d, "restriction", &vp)?, &join(&vp, "restriction"))?;
                    let cores = match d.get("corestriction") {
                        Some(c) => Some(parse_map(c, &join(&vp, "corestriction"))?),
                        None => None,
                    };
                    (res, cores)
                }
            };
            let r = res.build(&vstalks[v], &estalk, &join(&vp, "restriction"))?;
            let c = match cores {
                Some(c) => c.build(&estalk, &vstalks[v], &join(&vp, "corestriction"))?,
                None => res.build_adjoint(&vstalks[v], &estalk, &join(&vp, "corestriction"))?,
            };
            pair.push([r, c]);
        }
        let second = pair.pop().expect("two ends");
        let first = pair.pop().expect("two ends");
        estalks[e] = Some(estalk);
        maps[e] = Some([first, second]);
    }
    let estalks: Vec<Stalk> = estalks.into_iter().map(|s| s.expect("every edge parsed")).collect();
    let maps = maps.into_iter().map(|m| m.expect("every edge parsed")).collect();
    let sheaf = NetworkSheaf::new(graph.clone(), vstalks.clone(), estalks, maps)?;
    let weighting = parse_weighting(obj.get("weighting"), &graph, &q, "weighting")?;
    let initial = match obj.get("initial") {
        None => None,
        Some(init) => {
            let io = as_object(init, "initial")?;
            let mut xs = Vec::new();
            for (v, id) in ids.iter().enumerate() {
                let p = format!("initial.{id}");
                let raw = io.get(id).ok_or_else(|| Error::parse(&p, "missing value"))?;
                xs.push(vstalks[v].parse_value(raw, &p)?);
            }
            Some(Cochain(xs))
        }
    };
    Ok(SheafDoc {
        sheaf,
        weighting,
        initial,
    })
}

fn parse_des(obj: &Map<String, Json>) -> Result<DesDoc> {
    let ids = strings(field(obj, "vertices", "$")?, "vertices")?;
    let pairs = parse_edge_list(field(obj, "edges", "$")?, &ids, "edges")?;
    let graph = graph_of(ids.clone(), &pairs)?;
    let delays: Vec<Vec<Vec<Elem>>> = array(field(obj, "delays", "$")?, "delays")?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, &format!("delays[{i}]")))
        .collect::<Result<_>>()?;
    let m = delays.first().map_or(0, |a| a.len());
    let q = Quantale::lawvere();
    let weighting = parse_weighting(obj.get("weighting"), &graph, &q, "weighting")?;
    let system = DesSystem::new(m, delays, graph, weighting).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse("delays", other.to_string()),
    })?;
    let initial = match obj.get("initial") {
        None => None,
        Some(init) => {
            let io = as_object(init, "initial")?;
            let mut xs = Vec::new();
            for id in &ids {
                let p = format!("initial.{id}");
                let raw = io.get(id).ok_or_else(|| Error::parse(&p, "missing value"))?;
                let row = parse_matrix(&Json::Array(vec![raw.clone()]), &p)?.remove(0);
                if row.len() != m {
                    return Err(Error::parse(p, format!("expected {m} entries")));
                }
                xs.push(row);
            }
            Some(Cochain(xs))
        }
    };
    Ok(DesDoc { system, initial })
}

fn parse_paths(obj: &Map<String, Json>) -> Result<PathsDoc> {
    let ids = strings(field(obj, "vertices", "$")?, "vertices")?;
    let ej = field(obj, "edges", "$")?;
    let pairs = parse_edge_list(ej, &ids, "edges")?;
    let graph = graph_of(ids.clone(), &pairs)?;
    let mut weights = vec![0.0; graph.edge_count()];
    for (i, (e, &(a, b))) in array(ej, "edges")?.iter().zip(&pairs).enumerate() {
        let p = format!("edges[{i}]");
        let w = parse_elem(field(as_object(e, &p)?, "weight", &p)?, &join(&p, "weight"))?;
        if w.is_nan() || w < 0.0 {
            return Err(Error::parse(join(&p, "weight"), format!("weight must be nonnegative, got {w}")));
        }
        let k = graph
            .edges()
            .iter()
            .position(|&x| x == (a.min(b), a.max(b)))
            .expect("edge was inserted");
        weights[k] = w;
    }
    let src = string(field(obj, "source", "$")?, "source")?;
    let source = graph
        .index_of(&src)
        .ok_or_else(|| Error::parse("source", format!("unknown vertex {src:?}")))?;
    Ok(PathsDoc {
        graph,
        weights,
        source,
    })
}

fn parse_prefs(obj: &Map<String, Json>) -> Result<PrefsDoc> {
    let q = quantale_of(obj)?;
    let alternatives = strings(field(obj, "alternatives", "$")?, "alternatives")?;
    let lattice = PrefLattice::new(q, alternatives);
    let stalk = Stalk::Pref(lattice.clone());
    let ids = strings(field(obj, "vertices", "$")?, "vertices")?;
    let pairs = parse_edge_list(field(obj, "edges", "$")?, &ids, "edges")?;
    let graph = graph_of(ids.clone(), &pairs)?;
    let ao = as_object(field(obj, "agents", "$")?, "agents")?;
    let mut agents = Vec::new();
    for id in &ids {
        let p = format!("agents.{id}");
        let raw = ao.get(id).ok_or_else(|| Error::parse(&p, "missing relation"))?;
        match stalk.parse_value(raw, &p)? {
            Value::Relation(r) => agents.push(r),
            _ => unreachable!("pref stalks hold relations"),
        }
    }
    let eps = match obj.get("eps") {
        None => vec![q.unit(); ids.len()],
        Some(Json::Object(m)) => ids
            .iter()
            .map(|id| {
                let p = format!("eps.{id}");
                parse_elem(m.get(id).ok_or_else(|| Error::parse(&p, "missing value"))?, &p)
            })
            .collect::<Result<_>>()?,
        Some(v) => vec![parse_elem(v, "eps")?; ids.len()],
    };
    for (id, &e) in ids.iter().zip(&eps) {
        q.check(e).map_err(|err| Error::parse(format!("eps.{id}"), err.to_string()))?;
    }
    Ok(PrefsDoc {
        lattice,
        graph,
        agents,
        eps,
    })
}
