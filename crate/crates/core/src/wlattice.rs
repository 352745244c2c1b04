//! Complete weighted lattices: tensors, cotensors and weighted (co)limits.

use crate::error::{Error, Result};
use crate::qcat::{FiniteQCategory, QCategory};
use crate::quantale::{Elem, Quantale, INF};
use crate::report::LawReport;

/// A finite family of objects `S(c)` with weights `W(c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDiagram<O> {
    pub terms: Vec<(O, Elem)>,
}

impl<O: Clone> WeightedDiagram<O> {
    pub fn new(terms: Vec<(O, Elem)>) -> Self {
        WeightedDiagram { terms }
    }

    pub fn empty() -> Self {
        WeightedDiagram { terms: Vec::new() }
    }

    /// Every object weighted by `unit`.
    pub fn crisp(objs: &[O], unit: Elem) -> Self {
        WeightedDiagram {
            terms: objs.iter().map(|o| (o.clone(), unit)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map<P, F: Fn(&O) -> P>(&self, f: F) -> WeightedDiagram<P> {
        WeightedDiagram {
            terms: self.terms.iter().map(|(o, w)| (f(o), *w)).collect(),
        }
    }
}

/// A Q-category with all tensors, cotensors and crisp meets and joins, and
/// hence all weighted meets and joins.
pub trait WeightedLattice: QCategory {
    /// `q ⊗ x`, characterised by `hom(q ⊗ x, y) = [q, hom(x, y)]`.
    fn tensor(&self, q: Elem, x: &Self::Obj) -> Result<Self::Obj>;

    /// `q ⋔ y`, characterised by `hom(x, q ⋔ y) = [q, hom(x, y)]`.
    fn cotensor(&self, q: Elem, y: &Self::Obj) -> Result<Self::Obj>;

    fn crisp_meet(&self, xs: &[Self::Obj]) -> Result<Self::Obj>;

    fn crisp_join(&self, xs: &[Self::Obj]) -> Result<Self::Obj>;

    fn top(&self) -> Result<Self::Obj> {
        self.crisp_meet(&[])
    }

    fn bottom(&self) -> Result<Self::Obj> {
        self.crisp_join(&[])
    }

    /// `⋀_c W(c) ⋔ S(c)`.
    fn weighted_meet(&self, d: &WeightedDiagram<Self::Obj>) -> Result<Self::Obj> {
        let parts = d
            .terms
            .iter()
            .map(|(s, w)| self.cotensor(*w, s))
            .collect::<Result<Vec<_>>>()?;
        self.crisp_meet(&parts)
    }

    /// `⋁_c W(c) ⊗ S(c)`.
    fn weighted_join(&self, d: &WeightedDiagram<Self::Obj>) -> Result<Self::Obj> {
        let parts = d
            .terms
            .iter()
            .map(|(s, w)| self.tensor(*w, s))
            .collect::<Result<Vec<_>>>()?;
        self.crisp_join(&parts)
    }

    /// A reproducible sample of objects; all objects when enumerable.
    fn sample_objects(&self) -> Vec<Self::Obj> {
        self.objects().unwrap_or_default()
    }

    /// A size measure used to flag runaway flows; `None` when meaningless.
    fn magnitude(&self, _x: &Self::Obj) -> Option<f64> {
        None
    }
}

/// Lowest-identifier object among those satisfying `pred`.
fn search<F: Fn(usize) -> bool>(c: &FiniteQCategory, what: &str, pred: F) -> Result<usize> {
    (0..c.len())
        .filter(|&t| pred(t))
        .min_by(|&a, &b| c.id(a).cmp(c.id(b)))
        .ok_or_else(|| Error::NoSuchObject(what.to_string()))
}

impl WeightedLattice for FiniteQCategory {
    fn tensor(&self, q: Elem, x: &usize) -> Result<usize> {
        let qu = *self.quantale();
        search(self, "tensor", |t| {
            (0..self.len()).all(|y| qu.eq(self.hom(&t, &y), qu.hom(q, self.hom(x, &y))))
        })
    }

    fn cotensor(&self, q: Elem, y: &usize) -> Result<usize> {
        let qu = *self.quantale();
        search(self, "cotensor", |t| {
            (0..self.len()).all(|x| qu.eq(self.hom(&x, &t), qu.hom(q, self.hom(&x, y))))
        })
    }

    fn crisp_meet(&self, xs: &[usize]) -> Result<usize> {
        let qu = *self.quantale();
        search(self, "crisp meet", |m| {
            (0..self.len()).all(|z| {
                qu.eq(
                    self.hom(&z, &m),
                    qu.meet(xs.iter().map(|s| self.hom(&z, s))),
                )
            })
        })
    }

    fn crisp_join(&self, xs: &[usize]) -> Result<usize> {
        let qu = *self.quantale();
        search(self, "crisp join", |j| {
            (0..self.len()).all(|z| {
                qu.eq(
                    self.hom(&j, &z),
                    qu.meet(xs.iter().map(|s| self.hom(s, &z))),
                )
            })
        })
    }
}

/// The quantale viewed as a category over itself, `hom(p, q) = [p, q]`, or
/// its opposite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnderlineQ {
    pub quantale: Quantale,
    pub opposite: bool,
}

impl UnderlineQ {
    pub fn new(quantale: Quantale) -> Self {
        UnderlineQ {
            quantale,
            opposite: false,
        }
    }

    pub fn op(quantale: Quantale) -> Self {
        UnderlineQ {
            quantale,
            opposite: true,
        }
    }
}

impl QCategory for UnderlineQ {
    type Obj = Elem;

    fn quantale(&self) -> &Quantale {
        &self.quantale
    }

    fn hom(&self, x: &Elem, y: &Elem) -> Elem {
        if self.opposite {
            self.quantale.hom(*y, *x)
        } else {
            self.quantale.hom(*x, *y)
        }
    }

    fn objects(&self) -> Result<Vec<Elem>> {
        self.quantale
            .carrier()
            .ok_or_else(|| Error::NotEnumerable(self.name()))
    }

    fn label(&self, x: &Elem) -> String {
        self.quantale.format(*x)
    }

    fn name(&self) -> String {
        let suffix = if self.opposite { " (op)" } else { "" };
        format!("underlying {}{suffix}", self.quantale.kind())
    }
}

impl WeightedLattice for UnderlineQ {
    fn tensor(&self, q: Elem, x: &Elem) -> Result<Elem> {
        let qu = &self.quantale;
        Ok(if self.opposite { qu.hom(q, *x) } else { qu.mul(q, *x) })
    }

    fn cotensor(&self, q: Elem, y: &Elem) -> Result<Elem> {
        let qu = &self.quantale;
        Ok(if self.opposite { qu.mul(q, *y) } else { qu.hom(q, *y) })
    }

    fn crisp_meet(&self, xs: &[Elem]) -> Result<Elem> {
        let qu = &self.quantale;
        Ok(if self.opposite {
            qu.join(xs.iter().copied())
        } else {
            qu.meet(xs.iter().copied())
        })
    }

    fn crisp_join(&self, xs: &[Elem]) -> Result<Elem> {
        let qu = &self.quantale;
        Ok(if self.opposite {
            qu.meet(xs.iter().copied())
        } else {
            qu.join(xs.iter().copied())
        })
    }

    fn sample_objects(&self) -> Vec<Elem> {
        self.quantale.weight_grid()
    }

    fn magnitude(&self, x: &Elem) -> Option<f64> {
        Some(x.abs())
    }
}

/// Presheaves on a discrete `m`-object category, i.e. vectors in `Q^m` with
/// `hom(x, y) = ⋀_i [x_i, y_i]`, or the opposite category.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PresheafPower {
    pub quantale: Quantale,
    pub m: usize,
    pub opposite: bool,
}

impl PresheafPower {
    pub fn new(quantale: Quantale, m: usize) -> Self {
        PresheafPower {
            quantale,
            m,
            opposite: false,
        }
    }

    pub fn op(quantale: Quantale, m: usize) -> Self {
        PresheafPower {
            quantale,
            m,
            opposite: true,
        }
    }

    fn base(&self) -> UnderlineQ {
        UnderlineQ {
            quantale: self.quantale,
            opposite: self.opposite,
        }
    }

    fn pointwise<F: Fn(&UnderlineQ, &[Elem]) -> Result<Elem>>(
        &self,
        xs: &[Vec<Elem>],
        f: F,
    ) -> Result<Vec<Elem>> {
        let b = self.base();
        for x in xs {
            self.check_len(x)?;
        }
        (0..self.m)
            .map(|i| {
                let col: Vec<Elem> = xs.iter().map(|x| x[i]).collect();
                f(&b, &col)
            })
            .collect()
    }

    pub fn check_len(&self, x: &[Elem]) -> Result<()> {
        if x.len() == self.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            })
        }
    }
}

impl QCategory for PresheafPower {
    type Obj = Vec<Elem>;

    fn quantale(&self) -> &Quantale {
        &self.quantale
    }

    fn hom(&self, x: &Vec<Elem>, y: &Vec<Elem>) -> Elem {
        let b = self.base();
        self.quantale
            .meet(x.iter().zip(y).map(|(a, c)| b.hom(a, c)))
    }

    fn objects(&self) -> Result<Vec<Vec<Elem>>> {
        let carrier = self
            .quantale
            .carrier()
            .ok_or_else(|| Error::NotEnumerable(self.name()))?;
        Ok(cartesian_power(&carrier, self.m))
    }

    fn label(&self, x: &Vec<Elem>) -> String {
        let parts: Vec<String> = x.iter().map(|&v| self.quantale.format(v)).collect();
        format!("[{}]", parts.join(","))
    }

    fn name(&self) -> String {
        let suffix = if self.opposite { " (op)" } else { "" };
        format!("{}^{}{suffix}", self.quantale.kind(), self.m)
    }
}

impl WeightedLattice for PresheafPower {
    fn tensor(&self, q: Elem, x: &Vec<Elem>) -> Result<Vec<Elem>> {
        self.check_len(x)?;
        let b = self.base();
        x.iter().map(|v| b.tensor(q, v)).collect()
    }

    fn cotensor(&self, q: Elem, y: &Vec<Elem>) -> Result<Vec<Elem>> {
        self.check_len(y)?;
        let b = self.base();
        y.iter().map(|v| b.cotensor(q, v)).collect()
    }

    fn crisp_meet(&self, xs: &[Vec<Elem>]) -> Result<Vec<Elem>> {
        self.pointwise(xs, |b, col| b.crisp_meet(col))
    }

    fn crisp_join(&self, xs: &[Vec<Elem>]) -> Result<Vec<Elem>> {
        self.pointwise(xs, |b, col| b.crisp_join(col))
    }

    fn sample_objects(&self) -> Vec<Vec<Elem>> {
        let grid = match self.quantale.carrier() {
            Some(c) => c,
            None if self.quantale.kind() == crate::quantale::QuantaleKind::LawvereReals => {
                vec![0.0, 1.0, 2.5, 6.0, INF]
            }
            None => vec![0.0, 0.5, 1.0],
        };
        cartesian_power(&grid, self.m)
    }

    fn magnitude(&self, x: &Vec<Elem>) -> Option<f64> {
        x.iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v.abs(), |a| a.max(v.abs()))))
    }
}

pub fn cartesian_power(values: &[Elem], m: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |&a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Computes `⋀^W S` as the weighted join of the identity functor with
/// weight `V(x) = ⋀_c [W(c), hom(x, S(c))]`, over all objects.
pub fn weighted_meet_via_identity_join<L>(lat: &L, d: &WeightedDiagram<L::Obj>) -> Result<L::Obj>
where
    L: WeightedLattice + ?Sized,
{
    let q = *lat.quantale();
    let objs = lat.objects()?;
    let v = WeightedDiagram::new(
        objs.iter()
            .map(|x| {
                let w = q.meet(d.terms.iter().map(|(s, wc)| q.hom(*wc, lat.hom(x, s))));
                (x.clone(), w)
            })
            .collect(),
    );
    lat.weighted_join(&v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Meet,
    Join,
}

/// Checks the defining property of a weighted meet (or join) against every
/// object of an enumerable lattice, together with the weight bound
/// `W(c) ⪯ hom(⋀^W S, S(c))` (dually `W(c) ⪯ hom(S(c), ⋁^W S)`).
pub fn verify_universal_property<L>(
    lat: &L,
    d: &WeightedDiagram<L::Obj>,
    candidate: &L::Obj,
    kind: LimitKind,
) -> Result<LawReport>
where
    L: QCategory + ?Sized,
{
    let q = *lat.quantale();
    let objs = lat.objects()?;
    check_universal_property_on(lat, &objs, d, candidate, kind, &q)
}

/// As [`verify_universal_property`], quantifying over the given objects.
pub fn check_universal_property_on<L>(
    lat: &L,
    objs: &[L::Obj],
    d: &WeightedDiagram<L::Obj>,
    candidate: &L::Obj,
    kind: LimitKind,
    q: &Quantale,
) -> Result<LawReport>
where
    L: QCategory + ?Sized,
{
    let mut rep = LawReport::new(match kind {
        LimitKind::Meet => "weighted meet universal property",
        LimitKind::Join => "weighted join universal property",
    });
    for x in objs {
        let (lhs, rhs) = match kind {
            LimitKind::Meet => (
                lat.hom(x, candidate),
                q.meet(d.terms.iter().map(|(s, w)| q.hom(*w, lat.hom(x, s)))),
            ),
            LimitKind::Join => (
                lat.hom(candidate, x),
                q.meet(d.terms.iter().map(|(s, w)| q.hom(*w, lat.hom(s, x)))),
            ),
        };
        rep.check("universal property", q.eq(lhs, rhs), || {
            format!(
                "x={}: hom = {}, expected {}",
                lat.label(x),
                q.format(lhs),
                q.format(rhs)
            )
        });
    }
    for (s, w) in &d.terms {
        let h = match kind {
            LimitKind::Meet => lat.hom(candidate, s),
            LimitKind::Join => lat.hom(s, candidate),
        };
        rep.check("weight bound", q.leq(*w, h), || {
            format!("S(c)={}, W(c)={}", lat.label(s), q.format(*w))
        });
    }
    Ok(rep)
}

/// `⋀_c hom(S c, S' c) ⪯ hom(⋀^W S, ⋀^{W'} S')` for diagrams over a common
/// index with `W' ⪯ W`.
pub fn check_product_hom<L>(
    lat: &L,
    s: &[L::Obj],
    w: &[Elem],
    s2: &[L::Obj],
    w2: &[Elem],
) -> Result<LawReport>
where
    L: WeightedLattice + ?Sized,
{
    let q = *lat.quantale();
    let mut rep = LawReport::new("product hom");
    if s.len() != s2.len() || w.len() != s.len() || w2.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            found: s2.len(),
        });
    }
    let d = WeightedDiagram::new(s.iter().cloned().zip(w.iter().copied()).collect());
    let d2 = WeightedDiagram::new(s2.iter().cloned().zip(w2.iter().copied()).collect());
    let lhs = q.meet(s.iter().zip(s2).map(|(a, b)| lat.hom(a, b)));
    let m = lat.weighted_meet(&d)?;
    let m2 = lat.weighted_meet(&d2)?;
    let rhs = lat.hom(&m, &m2);
    rep.check("componentwise bound", q.leq(lhs, rhs), || {
        format!(
            "lhs {} exceeds hom {} for {} vs {}",
            q.format(lhs),
            q.format(rhs),
            lat.label(&m),
            lat.label(&m2)
        )
    });
    Ok(rep)
}
