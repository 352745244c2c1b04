//! Stalks chosen at run time, for sheaves read from files.

use crate::adjunction::synthesize_right_adjoint;
use crate::apps::des::{maxplus_apply, minplus_transpose_apply, Matrix};
use crate::apps::prefs::{PrefLattice, Relation};
use crate::error::{Error, Result};
use crate::qcat::{FiniteFunctor, FiniteQCategory, QCategory};
use crate::quantale::{Elem, Quantale, INF};
use crate::sheaf::Transport;
use crate::wlattice::{PresheafPower, UnderlineQ, WeightedLattice};
use serde_json::{json, Value as Json};
use std::sync::Arc;

/// An object of some [`Stalk`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Object(usize),
    Scalar(Elem),
    Vector(Vec<Elem>),
    Relation(Relation),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stalk {
    Finite(FiniteQCategory),
    Underline(UnderlineQ),
    Presheaf(PresheafPower),
    Pref(PrefLattice),
}

pub fn elem_json(p: Elem) -> Json {
    if p == INF {
        json!("inf")
    } else {
        json!(p)
    }
}

pub fn parse_elem(v: &Json, path: &str) -> Result<Elem> {
    match v {
        Json::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::parse(path, "number out of range")),
        Json::String(s) if s == "inf" => Ok(INF),
        other => Err(Error::parse(path, format!("expected a number or \"inf\", got {other}"))),
    }
}

fn parse_vec(v: &Json, path: &str) -> Result<Vec<Elem>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_elem(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn parse_matrix(v: &Json, path: &str) -> Result<Vec<Vec<Elem>>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected an array of rows"))?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vec(r, &format!("{path}[{i}]")))
        .collect()
}

fn mismatch() -> ! {
    panic!("value does not belong to this stalk")
}

impl Stalk {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Stalk::Finite(_) => "finite",
            Stalk::Underline(_) => "underline",
            Stalk::Presheaf(_) => "presheaf",
            Stalk::Pref(_) => "pref",
        }
    }

    /// Reads an object in the stalk's file representation.
    pub fn parse_value(&self, v: &Json, path: &str) -> Result<Value> {
        let q = self.quantale();
        let checked = |x: Elem, p: &str| {
            if q.contains(x) {
                Ok(x)
            } else {
                Err(Error::parse(p, format!("{x} is not in the carrier of {}", q.kind())))
            }
        };
        match self {
            Stalk::Finite(c) => {
                let id = v
                    .as_str()
                    .ok_or_else(|| Error::parse(path, "expected an object identifier"))?;
                c.index_of(id)
                    .map(Value::Object)
                    .ok_or_else(|| Error::parse(path, format!("unknown object {id:?}")))
            }
            Stalk::Underline(_) => Ok(Value::Scalar(checked(parse_elem(v, path)?, path)?)),
            Stalk::Presheaf(p) => {
                let xs = parse_vec(v, path)?;
                if xs.len() != p.m {
                    return Err(Error::parse(path, format!("expected {} entries", p.m)));
                }
                for (i, &x) in xs.iter().enumerate() {
                    checked(x, &format!("{path}[{i}]"))?;
                }
                Ok(Value::Vector(xs))
            }
            Stalk::Pref(l) => {
                let rows = parse_matrix(v, path)?;
                let r = Relation::new(rows).map_err(|e| Error::parse(path, e.to_string()))?;
                if r.size() != l.n() {
                    return Err(Error::parse(path, format!("expected {} alternatives", l.n())));
                }
                r.validate(q).map_err(|e| Error::parse(path, e.to_string()))?;
                Ok(Value::Relation(r))
            }
        }
    }

    pub fn render(&self, x: &Value) -> Json {
        match (self, x) {
            (Stalk::Finite(c), Value::Object(i)) => json!(c.id(*i)),
            (_, Value::Scalar(p)) => elem_json(*p),
            (_, Value::Vector(v)) => Json::Array(v.iter().map(|&p| elem_json(p)).collect()),
            (_, Value::Relation(r)) => Json::Array(
                r.rows()
                    .iter()
                    .map(|row| Json::Array(row.iter().map(|&p| elem_json(p)).collect()))
                    .collect(),
            ),
            _ => mismatch(),
        }
    }

    /// The scalar underlying a one-dimensional stalk object.
    pub fn scalar(x: &Value) -> Option<Elem> {
        match x {
            Value::Scalar(p) => Some(*p),
            _ => None,
        }
    }
}

fn scalars(xs: &[Value]) -> Vec<Elem> {
    xs.iter()
        .map(|x| match x {
            Value::Scalar(p) => *p,
            _ => mismatch(),
        })
        .collect()
}

fn vectors(xs: &[Value]) -> Vec<Vec<Elem>> {
    xs.iter()
        .map(|x| match x {
            Value::Vector(v) => v.clone(),
            _ => mismatch(),
        })
        .collect()
}

fn indices(xs: &[Value]) -> Vec<usize> {
    xs.iter()
        .map(|x| match x {
            Value::Object(i) => *i,
            _ => mismatch(),
        })
        .collect()
}

fn relations(xs: &[Value]) -> Vec<Relation> {
    xs.iter()
        .map(|x| match x {
            Value::Relation(r) => r.clone(),
            _ => mismatch(),
        })
        .collect()
}

impl QCategory for Stalk {
    type Obj = Value;

    fn quantale(&self) -> &Quantale {
        match self {
            Stalk::Finite(c) => c.quantale(),
            Stalk::Underline(c) => c.quantale(),
            Stalk::Presheaf(c) => c.quantale(),
            Stalk::Pref(c) => c.quantale(),
        }
    }

    fn hom(&self, x: &Value, y: &Value) -> Elem {
        match (self, x, y) {
            (Stalk::Finite(c), Value::Object(a), Value::Object(b)) => c.hom(a, b),
            (Stalk::Underline(c), Value::Scalar(a), Value::Scalar(b)) => c.hom(a, b),
            (Stalk::Presheaf(c), Value::Vector(a), Value::Vector(b)) => c.hom(a, b),
            (Stalk::Pref(c), Value::Relation(a), Value::Relation(b)) => c.hom(a, b),
            _ => mismatch(),
        }
    }

    fn objects(&self) -> Result<Vec<Value>> {
        Ok(match self {
            Stalk::Finite(c) => c.objects()?.into_iter().map(Value::Object).collect(),
            Stalk::Underline(c) => c.objects()?.into_iter().map(Value::Scalar).collect(),
            Stalk::Presheaf(c) => c.objects()?.into_iter().map(Value::Vector).collect(),
            Stalk::Pref(c) => c.objects()?.into_iter().map(Value::Relation).collect(),
        })
    }

    fn label(&self, x: &Value) -> String {
        self.render(x).to_string()
    }

    fn name(&self) -> String {
        match self {
            Stalk::Finite(c) => c.name(),
            Stalk::Underline(c) => c.name(),
            Stalk::Presheaf(c) => c.name(),
            Stalk::Pref(c) => c.name(),
        }
    }
}

impl WeightedLattice for Stalk {
    fn tensor(&self, q: Elem, x: &Value) -> Result<Value> {
        Ok(match (self, x) {
            (Stalk::Finite(c), Value::Object(a)) => Value::Object(c.tensor(q, a)?),
            (Stalk::Underline(c), Value::Scalar(a)) => Value::Scalar(c.tensor(q, a)?),
            (Stalk::Presheaf(c), Value::Vector(a)) => Value::Vector(c.tensor(q, a)?),
            (Stalk::Pref(c), Value::Relation(a)) => Value::Relation(c.tensor(q, a)?),
            _ => mismatch(),
        })
    }

    fn cotensor(&self, q: Elem, y: &Value) -> Result<Value> {
        Ok(match (self, y) {
            (Stalk::Finite(c), Value::Object(a)) => Value::Object(c.cotensor(q, a)?),
            (Stalk::Underline(c), Value::Scalar(a)) => Value::Scalar(c.cotensor(q, a)?),
            (Stalk::Presheaf(c), Value::Vector(a)) => Value::Vector(c.cotensor(q, a)?),
            (Stalk::Pref(c), Value::Relation(a)) => Value::Relation(c.cotensor(q, a)?),
            _ => mismatch(),
        })
    }

    fn crisp_meet(&self, xs: &[Value]) -> Result<Value> {
        Ok(match self {
            Stalk::Finite(c) => Value::Object(c.crisp_meet(&indices(xs))?),
            Stalk::Underline(c) => Value::Scalar(c.crisp_meet(&scalars(xs))?),
            Stalk::Presheaf(c) => Value::Vector(c.crisp_meet(&vectors(xs))?),
            Stalk::Pref(c) => Value::Relation(c.crisp_meet(&relations(xs))?),
        })
    }

    fn crisp_join(&self, xs: &[Value]) -> Result<Value> {
        Ok(match self {
            Stalk::Finite(c) => Value::Object(c.crisp_join(&indices(xs))?),
            Stalk::Underline(c) => Value::Scalar(c.crisp_join(&scalars(xs))?),
            Stalk::Presheaf(c) => Value::Vector(c.crisp_join(&vectors(xs))?),
            Stalk::Pref(c) => Value::Relation(c.crisp_join(&relations(xs))?),
        })
    }

    fn sample_objects(&self) -> Vec<Value> {
        match self {
            Stalk::Finite(c) => c.sample_objects().into_iter().map(Value::Object).collect(),
            Stalk::Underline(c) => c.sample_objects().into_iter().map(Value::Scalar).collect(),
            Stalk::Presheaf(c) => c.sample_objects().into_iter().map(Value::Vector).collect(),
            Stalk::Pref(c) => c.sample_objects().into_iter().map(Value::Relation).collect(),
        }
    }

    fn magnitude(&self, x: &Value) -> Option<f64> {
        match (self, x) {
            (Stalk::Underline(c), Value::Scalar(a)) => c.magnitude(a),
            (Stalk::Presheaf(c), Value::Vector(a)) => c.magnitude(a),
            _ => None,
        }
    }
}

/// A restriction or corestriction map as written in input files.
#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Identity,
    /// `x ↦ x + c` on scalars or pointwise on vectors.
    Shift(Elem),
    /// `y ↦ (y − c)₊`, the right adjoint of a shift.
    Unshift(Elem),
    /// An object map between finite stalks, by identifier.
    Table(Vec<(String, String)>),
    /// `Fx(j) = max_i x(i) + A(i, j)`.
    MaxPlus(Matrix),
    /// `Gy(i) = min_j [A(i, j), y(j)]`, the right adjoint of `MaxPlus(A)`.
    MinPlusTranspose(Matrix),
}

fn shift(p: Elem, c: Elem) -> Elem {
    p + c
}

fn unshift(p: Elem, c: Elem) -> Elem {
    if p == INF {
        INF
    } else {
        (p - c).max(0.0)
    }
}

fn pointwise(x: &Value, f: impl Fn(Elem) -> Elem) -> Value {
    match x {
        Value::Scalar(p) => Value::Scalar(f(*p)),
        Value::Vector(v) => Value::Vector(v.iter().map(|&p| f(p)).collect()),
        _ => mismatch(),
    }
}

impl MapSpec {
    /// The canonical right adjoint, when one is known without search.
    pub fn default_adjoint(&self) -> Option<MapSpec> {
        match self {
            MapSpec::Identity => Some(MapSpec::Identity),
            MapSpec::Shift(c) => Some(MapSpec::Unshift(*c)),
            MapSpec::MaxPlus(a) => Some(MapSpec::MinPlusTranspose(a.clone())),
            _ => None,
        }
    }

    /// Builds the map `dom → cod`, checking that it fits the stalks.
    pub fn build(&self, dom: &Stalk, cod: &Stalk, path: &str) -> Result<Transport<Value>> {
        let numeric = |s: &Stalk| matches!(s, Stalk::Underline(_) | Stalk::Presheaf(_));
        match self {
            MapSpec::Identity => {
                if dom != cod {
                    return Err(Error::parse(path, "identity needs equal stalks"));
                }
                Ok(Arc::new(|x: &Value| x.clone()))
            }
            MapSpec::Shift(c) | MapSpec::Unshift(c) => {
                if dom != cod || !numeric(dom) {
                    return Err(Error::parse(path, "shifts need equal numeric stalks"));
                }
                if !matches!(dom.quantale().kind(), crate::quantale::QuantaleKind::LawvereReals) {
                    return Err(Error::parse(path, "shifts need extended-real stalks"));
                }
                if c.is_nan() || *c < 0.0 || *c == INF {
                    return Err(Error::parse(path, "shift must be finite and nonnegative"));
                }
                let c = *c;
                Ok(match self {
                    MapSpec::Shift(_) => Arc::new(move |x: &Value| pointwise(x, |p| shift(p, c))),
                    _ => Arc::new(move |x: &Value| pointwise(x, |p| unshift(p, c))),
                })
            }
            MapSpec::Table(pairs) => {
                let (Stalk::Finite(d), Stalk::Finite(e)) = (dom, cod) else {
                    return Err(Error::parse(path, "tables need finite stalks"));
                };
                let f = FiniteFunctor::from_ids(d, e, &pairs.iter().cloned().collect())
                    .map_err(|err| Error::parse(path, err.to_string()))?;
                Ok(Arc::new(move |x: &Value| match x {
                    Value::Object(i) => Value::Object(f.apply(*i)),
                    _ => mismatch(),
                }))
            }
            MapSpec::MaxPlus(a) | MapSpec::MinPlusTranspose(a) => {
                let (Stalk::Presheaf(d), Stalk::Presheaf(e)) = (dom, cod) else {
                    return Err(Error::parse(path, "max-plus maps need vector stalks"));
                };
                if a.len() != d.m || a.iter().any(|r| r.len() != e.m) || d.m != e.m {
                    return Err(Error::parse(path, format!("expected a {}x{} matrix", d.m, e.m)));
                }
                if let Some(bad) = a.iter().flatten().find(|v| v.is_nan() || **v < 0.0) {
                    return Err(Error::parse(path, format!("entries must be nonnegative, got {bad}")));
                }
                let a = a.clone();
                Ok(match self {
                    MapSpec::MaxPlus(_) => Arc::new(move |x: &Value| match x {
                        Value::Vector(v) => Value::Vector(maxplus_apply(&a, v).expect("checked dimensions")),
                        _ => mismatch(),
                    }),
                    _ => Arc::new(move |x: &Value| match x {
                        Value::Vector(v) => {
                            Value::Vector(minplus_transpose_apply(&a, v).expect("checked dimensions"))
                        }
                        _ => mismatch(),
                    }),
                })
            }
        }
    }

    /// The right adjoint used when a file omits the corestriction. Finite
    /// tables get a synthesized adjoint.
    pub fn build_adjoint(&self, dom: &Stalk, cod: &Stalk, path: &str) -> Result<Transport<Value>> {
        if let Some(adj) = self.default_adjoint() {
            return adj.build(cod, dom, path);
        }
        match (self, dom, cod) {
            (MapSpec::Table(pairs), Stalk::Finite(d), Stalk::Finite(e)) => {
                let f = FiniteFunctor::from_ids(d, e, &pairs.iter().cloned().collect())
                    .map_err(|err| Error::parse(path, err.to_string()))?;
                let (g, _) = synthesize_right_adjoint(d, e, &f)?;
                Ok(Arc::new(move |y: &Value| match y {
                    Value::Object(i) => Value::Object(g.apply(*i)),
                    _ => mismatch(),
                }))
            }
            _ => Err(Error::parse(path, "no default corestriction for this map; give one explicitly")),
        }
    }
}
