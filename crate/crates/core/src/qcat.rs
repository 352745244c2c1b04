//! Quantale-enriched categories: finite hom matrices, functors and their
//! fuzziness defects.

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// A category enriched in a commutative affine quantale. Objects may range
/// over an infinite set, in which case [`QCategory::objects`] fails.
pub trait QCategory {
    type Obj: Clone + PartialEq + Debug;

    fn quantale(&self) -> &Quantale;

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Elem;

    fn objects(&self) -> Result<Vec<Self::Obj>> {
        Err(Error::NotEnumerable(self.name()))
    }

    fn label(&self, x: &Self::Obj) -> String {
        format!("{x:?}")
    }

    fn name(&self) -> String {
        "category".to_string()
    }

    /// `x ⪯_q y`, i.e. `hom(x, y) ⪰ q`.
    fn hom_leq_q(&self, x: &Self::Obj, y: &Self::Obj, q: Elem) -> bool {
        self.quantale().leq(q, self.hom(x, y))
    }

    /// `x ≈_q y`: both `x ⪯_q y` and `y ⪯_q x`.
    fn approx_q(&self, x: &Self::Obj, y: &Self::Obj, q: Elem) -> bool {
        self.hom_leq_q(x, y, q) && self.hom_leq_q(y, x, q)
    }

    /// `x ≈_1 y`.
    fn iso(&self, x: &Self::Obj, y: &Self::Obj) -> bool {
        self.approx_q(x, y, self.quantale().unit())
    }
}

/// A category on finitely many objects presented by its hom matrix.
/// Objects are addressed by index; `objects` holds their identifiers.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteQCategory {
    quantale: Quantale,
    ids: Vec<String>,
    hom: Vec<Vec<Elem>>,
}

impl FiniteQCategory {
    /// Builds a category without checking the enrichment axioms; see
    /// [`FiniteQCategory::validate`].
    pub fn new(quantale: Quantale, ids: Vec<String>, hom: Vec<Vec<Elem>>) -> Result<Self> {
        let n = ids.len();
        if hom.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: hom.len(),
            });
        }
        for row in &hom {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for &h in row {
                quantale.check(h)?;
            }
        }
        let mut seen = ids.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::Invalid("object identifiers must be distinct".into()));
        }
        Ok(FiniteQCategory { quantale, ids, hom })
    }

    /// The discrete category: `1` on the diagonal, bottom elsewhere.
    pub fn discrete(quantale: Quantale, ids: Vec<String>) -> Self {
        let n = ids.len();
        let hom = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { quantale.unit() } else { quantale.bottom() })
                    .collect()
            })
            .collect();
        FiniteQCategory { quantale, ids, hom }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn matrix(&self) -> &[Vec<Elem>] {
        &self.hom
    }

    /// Checks `hom(x,x) = 1` and `hom(x,y)·hom(y,z) ⪯ hom(x,z)`.
    pub fn validate(&self) -> LawReport {
        let q = &self.quantale;
        let n = self.len();
        let mut rep = LawReport::new("category axioms");
        for x in 0..n {
            rep.check("unit", q.eq(self.hom[x][x], q.unit()), || {
                format!("hom({0},{0}) = {1}", self.ids[x], q.format(self.hom[x][x]))
            });
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = q.mul(self.hom[x][y], self.hom[y][z]);
                    rep.check("composition", q.leq(lhs, self.hom[x][z]), || {
                        format!(
                            "hom({x},{y})·hom({y},{z}) = {} exceeds hom({x},{z}) = {}",
                            q.format(lhs),
                            q.format(self.hom[x][z]),
                            x = self.ids[x],
                            y = self.ids[y],
                            z = self.ids[z]
                        )
                    });
                }
            }
        }
        rep
    }

    /// `x ⪯ y` iff `hom(x, y) = 1`.
    pub fn underlying_preorder(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|x| (0..n).map(|y| self.hom_leq_q(&x, &y, self.quantale.unit())).collect())
            .collect()
    }

    pub fn opposite(&self) -> Self {
        let n = self.len();
        let hom = (0..n)
            .map(|x| (0..n).map(|y| self.hom[y][x]).collect())
            .collect();
        FiniteQCategory {
            quantale: self.quantale,
            ids: self.ids.clone(),
            hom,
        }
    }

    /// The product category with pairwise-meet homs. Object identifiers are
    /// tuples such as `(a,b)`, enumerated in lexicographic index order.
    pub fn product(cats: &[FiniteQCategory]) -> Result<Self> {
        let first = cats
            .first()
            .ok_or_else(|| Error::Invalid("product of no categories".into()))?;
        let q = first.quantale;
        for c in cats {
            q.same_kind(&c.quantale)?;
        }
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for c in cats {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..c.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        let ids = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(cats).map(|(&i, c)| c.id(i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let hom = tuples
            .iter()
            .map(|s| {
                tuples
                    .iter()
                    .map(|t| q.meet(cats.iter().enumerate().map(|(k, c)| c.hom[s[k]][t[k]])))
                    .collect()
            })
            .collect();
        Ok(FiniteQCategory { quantale: q, ids, hom })
    }

    pub fn set_hom(&mut self, x: usize, y: usize, value: Elem) {
        self.hom[x][y] = value;
    }

    /// The full subcategory on the given objects, keeping their identifiers.
    pub fn full_subcategory(&self, objs: &[usize]) -> Self {
        FiniteQCategory {
            quantale: self.quantale,
            ids: objs.iter().map(|&i| self.ids[i].clone()).collect(),
            hom: objs
                .iter()
                .map(|&x| objs.iter().map(|&y| self.hom[x][y]).collect())
                .collect(),
        }
    }

    /// Indices of `≈_1` class representatives (lowest identifier in each class).
    pub fn skeleton(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        let mut reps: Vec<usize> = Vec::new();
        for x in order {
            if !reps.iter().any(|&r| self.iso(&r, &x)) {
                reps.push(x);
            }
        }
        reps.sort_unstable();
        reps
    }
}

impl QCategory for FiniteQCategory {
    type Obj = usize;

    fn quantale(&self) -> &Quantale {
        &self.quantale
    }

    fn hom(&self, x: &usize, y: &usize) -> Elem {
        self.hom[*x][*y]
    }

    fn objects(&self) -> Result<Vec<usize>> {
        Ok((0..self.len()).collect())
    }

    fn label(&self, x: &usize) -> String {
        self.ids[*x].clone()
    }

    fn name(&self) -> String {
        format!("finite category on {} objects", self.len())
    }
}

/// A functor between finite categories given by its object table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFunctor {
    pub map: Vec<usize>,
}

impl FiniteFunctor {
    pub fn identity(n: usize) -> Self {
        FiniteFunctor {
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn compose(&self, after: &FiniteFunctor) -> FiniteFunctor {
        FiniteFunctor {
            map: self.map.iter().map(|&y| after.map[y]).collect(),
        }
    }

    /// Reads `{from: to}` identifier pairs.
    pub fn from_ids(
        dom: &FiniteQCategory,
        cod: &FiniteQCategory,
        table: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = Vec::with_capacity(dom.len());
        for id in dom.ids() {
            let target = table
                .get(id)
                .ok_or_else(|| Error::parse(format!("map.{id}"), "missing image"))?;
            let j = cod
                .index_of(target)
                .ok_or_else(|| Error::parse(format!("map.{id}"), format!("unknown object {target}")))?;
            map.push(j);
        }
        Ok(FiniteFunctor { map })
    }

    pub fn to_ids(&self, dom: &FiniteQCategory, cod: &FiniteQCategory) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| (dom.id(i).to_string(), cod.id(j).to_string()))
            .collect()
    }
}

/// All ordered pairs of the given objects.
pub fn all_pairs<O: Clone>(objs: &[O]) -> Vec<(O, O)> {
    let mut out = Vec::with_capacity(objs.len() * objs.len());
    for x in objs {
        for y in objs {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

/// The largest `q` for which `f` is a `q`-fuzzy functor on the sampled pairs:
/// the meet of `[hom_C(x,y), hom_D(fx,fy)]`.
pub fn functor_defect<C, D, F>(c: &C, d: &D, f: F, pairs: &[(C::Obj, C::Obj)]) -> Elem
where
    C: QCategory + ?Sized,
    D: QCategory + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
{
    let q = c.quantale();
    q.meet(
        pairs
            .iter()
            .map(|(x, y)| q.hom(c.hom(x, y), d.hom(&f(x), &f(y)))),
    )
}

/// The hom of the functor category: `⋀_x hom_D(Fx, Gx)` over the sample.
pub fn functor_category_hom<C, D, F, G>(d: &D, f: F, g: G, xs: &[C::Obj]) -> Elem
where
    C: QCategory + ?Sized,
    D: QCategory + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
    G: Fn(&C::Obj) -> D::Obj,
{
    d.quantale().meet(xs.iter().map(|x| d.hom(&f(x), &g(x))))
}

/// Checks that `x ≈_q y` holds exactly when `[hom(x,z), hom(y,z)] ⪰ q` and
/// `[hom(y,z), hom(x,z)] ⪰ q` for every `z`, over all pairs and levels.
pub fn check_fuzzy_yoneda(c: &FiniteQCategory, levels: &[Elem]) -> LawReport {
    let q = c.quantale();
    let n = c.len();
    let mut rep = LawReport::new("fuzzy Yoneda");
    for &lvl in levels {
        for x in 0..n {
            for y in 0..n {
                let direct = c.approx_q(&x, &y, lvl);
                let via = (0..n).all(|z| {
                    let (a, b) = (c.hom(&x, &z), c.hom(&y, &z));
                    q.leq(lvl, q.hom(a, b)) && q.leq(lvl, q.hom(b, a))
                });
                rep.check("representable characterization", direct == via, || {
                    format!("x={}, y={}, q={}", c.id(x), c.id(y), q.format(lvl))
                });
            }
        }
    }
    rep
}
