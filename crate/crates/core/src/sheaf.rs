//! Network sheaves of weighted lattices, fuzzy global sections, the Lawvere
//! Laplacian and harmonic flow.

use crate::adjunction::adjunction_defect;
use crate::error::{Error, Result};
use crate::qcat::{all_pairs, functor_defect, QCategory};
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;
use crate::wlattice::WeightedLattice;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A simple undirected graph. Edge `e` joins `edges[e].0 < edges[e].1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    ids: Vec<String>,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(ids: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = ids.len();
        let mut incident = vec![Vec::new(); n];
        let mut seen = std::collections::BTreeSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge {e} has a missing endpoint")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("edge {e} is a loop at {}", ids[a])));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {{{}, {}}}",
                    ids[key.0], ids[key.1]
                )));
            }
            incident[key.0].push((e, key.1));
            incident[key.1].push((e, key.0));
            norm.push(key);
        }
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidGraph("vertex identifiers must be distinct".into()));
        }
        Ok(Graph {
            ids,
            edges: norm,
            incident,
        })
    }

    /// A graph from identifiers, resolving edge endpoints by name.
    pub fn from_ids(ids: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let find = |s: &String| {
            ids.iter()
                .position(|v| v == s)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {s}")))
        };
        let idx = edges
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(ids, idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(edge, neighbour)` pairs at `v`, in edge order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    /// Which end of edge `e` the vertex `v` is: 0 or 1.
    pub fn side(&self, e: usize, v: usize) -> usize {
        if self.edges[e].0 == v {
            0
        } else {
            1
        }
    }
}

/// Quantale weights on ordered adjacent vertex pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighting {
    values: BTreeMap<(usize, usize), Elem>,
}

impl Weighting {
    /// Requires exactly one entry for every ordered adjacent pair.
    pub fn new(graph: &Graph, entries: &[((usize, usize), Elem)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for &((v, w), x) in entries {
            if v >= graph.vertex_count() || w >= graph.vertex_count() {
                return Err(Error::InvalidWeighting(format!("unknown vertex in ({v}, {w})")));
            }
            if !graph.neighbors(v).iter().any(|&(_, u)| u == w) {
                return Err(Error::InvalidWeighting(format!(
                    "({}, {}) is not an edge",
                    graph.id(v),
                    graph.id(w)
                )));
            }
            if values.insert((v, w), x).is_some() {
                return Err(Error::InvalidWeighting(format!(
                    "duplicate weight for ({}, {})",
                    graph.id(v),
                    graph.id(w)
                )));
            }
        }
        for &(a, b) in graph.edges() {
            for (v, w) in [(a, b), (b, a)] {
                if !values.contains_key(&(v, w)) {
                    return Err(Error::InvalidWeighting(format!(
                        "missing weight for ({}, {})",
                        graph.id(v),
                        graph.id(w)
                    )));
                }
            }
        }
        Ok(Weighting { values })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Elem>(graph: &Graph, mut f: F) -> Self {
        let mut values = BTreeMap::new();
        for &(a, b) in graph.edges() {
            values.insert((a, b), f(a, b));
            values.insert((b, a), f(b, a));
        }
        Weighting { values }
    }

    pub fn constant(graph: &Graph, q: Elem) -> Self {
        Weighting::from_fn(graph, |_, _| q)
    }

    /// One weight per edge, used in both orientations.
    pub fn symmetric(graph: &Graph, per_edge: &[Elem]) -> Result<Self> {
        if per_edge.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                found: per_edge.len(),
            });
        }
        let mut values = BTreeMap::new();
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            values.insert((a, b), per_edge[e]);
            values.insert((b, a), per_edge[e]);
        }
        Ok(Weighting { values })
    }

    pub fn get(&self, v: usize, w: usize) -> Elem {
        self.values[&(v, w)]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Elem)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

pub type Transport<O> = Arc<dyn Fn(&O) -> O + Send + Sync>;

/// Restriction `F_{v◁e}`, corestriction `F_{e▷v}` and their measured
/// adjunction level for one incidence.
#[derive(Clone)]
pub struct Incidence<O> {
    pub restriction: Transport<O>,
    pub corestriction: Transport<O>,
    pub level: Elem,
    /// Functor defects of the restriction and corestriction on the samples.
    pub defects: (Elem, Elem),
}

/// A vertex-indexed family of stalk objects.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cochain<O>(pub Vec<O>);

impl<O> Cochain<O> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A sheaf on a graph together with the dual cosheaf of corestrictions.
/// All stalks share one lattice type; their parameters may differ per cell.
pub struct NetworkSheaf<L: WeightedLattice> {
    graph: Graph,
    vertex_stalks: Vec<L>,
    edge_stalks: Vec<L>,
    incidences: Vec<[Incidence<L::Obj>; 2]>,
}

/// Outcome of a section test with the ordered edge of least slack.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionCheck {
    pub ok: bool,
    /// `(v, w, hom_e(F x_v, F x_w), W(v, w))` for the worst orientation.
    pub worst: Option<(usize, usize, Elem, Elem)>,
}

impl<L: WeightedLattice> NetworkSheaf<L> {
    /// Builds the sheaf and measures each incidence's adjunction level on
    /// the default samples: vertex stalk samples, and for edges either every
    /// object or the restriction images of both endpoint samples.
    pub fn new(
        graph: Graph,
        vertex_stalks: Vec<L>,
        edge_stalks: Vec<L>,
        maps: Vec<[[Transport<L::Obj>; 2]; 2]>,
    ) -> Result<Self> {
        if vertex_stalks.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                found: vertex_stalks.len(),
            });
        }
        if edge_stalks.len() != graph.edge_count() || maps.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                found: edge_stalks.len().min(maps.len()),
            });
        }
        let q = *vertex_stalks
            .first()
            .map(|s| s.quantale())
            .unwrap_or(&Quantale::boolean());
        for s in vertex_stalks.iter().chain(&edge_stalks) {
            q.same_kind(s.quantale())?;
        }
        let mut incidences = Vec::with_capacity(graph.edge_count());
        for (e, pair) in maps.into_iter().enumerate() {
            let (a, b) = graph.edges()[e];
            let estalk = &edge_stalks[e];
            let ys: Vec<L::Obj> = match estalk.objects() {
                Ok(objs) => objs,
                Err(_) => {
                    let mut ys = Vec::new();
                    for (k, v) in [a, b].into_iter().enumerate() {
                        for x in vertex_stalks[v].sample_objects() {
                            let y = (pair[k][0])(&x);
                            if !ys.contains(&y) {
                                ys.push(y);
                            }
                        }
                    }
                    ys
                }
            };
            let [p0, p1] = pair;
            let make = |v: usize, [res, cor]: [Transport<L::Obj>; 2]| {
                let vstalk = &vertex_stalks[v];
                let xs = vstalk.sample_objects();
                let level = adjunction_defect(vstalk, estalk, |x| res(x), |y| cor(y), &xs, &ys);
                let d_res = functor_defect(vstalk, estalk, |x| res(x), &all_pairs(&xs));
                let d_cor = functor_defect(estalk, vstalk, |y| cor(y), &all_pairs(&ys));
                Incidence {
                    restriction: res,
                    corestriction: cor,
                    level,
                    defects: (d_res, d_cor),
                }
            };
            let i0 = make(a, p0);
            let i1 = make(b, p1);
            incidences.push([i0, i1]);
        }
        Ok(NetworkSheaf {
            graph,
            vertex_stalks,
            edge_stalks,
            incidences,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn quantale(&self) -> &Quantale {
        self.vertex_stalks
            .first()
            .or(self.edge_stalks.first())
            .map(|s| s.quantale())
            .expect("sheaf has at least one cell")
    }

    pub fn vertex_stalk(&self, v: usize) -> &L {
        &self.vertex_stalks[v]
    }

    pub fn edge_stalk(&self, e: usize) -> &L {
        &self.edge_stalks[e]
    }

    pub fn incidence(&self, e: usize, v: usize) -> &Incidence<L::Obj> {
        &self.incidences[e][self.graph.side(e, v)]
    }

    /// The Laplacian fuzziness `ε`: the meet of all incidence levels.
    pub fn level(&self) -> Elem {
        let q = self.quantale();
        q.meet(self.incidences.iter().flat_map(|p| [p[0].level, p[1].level]))
    }

    /// Reports restriction and corestriction functor defects that fall
    /// short of the unit.
    pub fn validate(&self) -> LawReport {
        let q = *self.quantale();
        let mut rep = LawReport::new("network sheaf");
        for (e, pair) in self.incidences.iter().enumerate() {
            let (a, b) = self.graph.edges()[e];
            for (v, inc) in [a, b].into_iter().zip(pair) {
                let at = || format!("{} ◁ e{e}", self.graph.id(v));
                rep.check("restriction is a functor", q.eq(inc.defects.0, q.unit()), at);
                rep.check("corestriction is a functor", q.eq(inc.defects.1, q.unit()), at);
            }
        }
        rep
    }

    pub fn check_cochain(&self, x: &Cochain<L::Obj>) -> Result<()> {
        if x.len() == self.graph.vertex_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.graph.vertex_count(),
                found: x.len(),
            })
        }
    }

    /// `⋀_v hom_{Fv}(x_v, y_v)`.
    pub fn cochain_hom(&self, x: &Cochain<L::Obj>, y: &Cochain<L::Obj>) -> Elem {
        let q = self.quantale();
        q.meet(
            self.vertex_stalks
                .iter()
                .zip(x.0.iter().zip(&y.0))
                .map(|(s, (a, b))| s.hom(a, b)),
        )
    }

    pub fn cochain_iso(&self, x: &Cochain<L::Obj>, y: &Cochain<L::Obj>) -> bool {
        let q = self.quantale();
        let one = q.unit();
        q.leq(one, self.cochain_hom(x, y)) && q.leq(one, self.cochain_hom(y, x))
    }

    /// `hom_{Fe}(F_{v◁e} x_v, F_{w◁e} x_w)` for edge `e = {v, w}`.
    pub fn edge_hom(&self, e: usize, v: usize, w: usize, x: &Cochain<L::Obj>) -> Elem {
        let fv = (self.incidence(e, v).restriction)(&x.0[v]);
        let fw = (self.incidence(e, w).restriction)(&x.0[w]);
        self.edge_stalks[e].hom(&fv, &fw)
    }

    /// Tests the section inequalities in both orientations of every edge and
    /// returns the orientation with the least residual `[W(v,w), hom]`.
    pub fn is_fuzzy_global_section(&self, w: &Weighting, x: &Cochain<L::Obj>) -> SectionCheck {
        let q = self.quantale();
        let mut ok = true;
        let mut worst: Option<(usize, usize, Elem, Elem, Elem)> = None;
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            for (v, u) in [(a, b), (b, a)] {
                let h = self.edge_hom(e, v, u, x);
                let wt = w.get(v, u);
                ok &= q.leq(wt, h);
                let slack = q.hom(wt, h);
                let better = match worst {
                    None => true,
                    Some((.., s)) => q.leq(slack, s) && !q.eq(slack, s),
                };
                if better {
                    worst = Some((v, u, h, wt, slack));
                }
            }
        }
        SectionCheck {
            ok,
            worst: worst.map(|(v, u, h, wt, _)| (v, u, h, wt)),
        }
    }

    /// Every cochain of enumerated stalk objects, in lexicographic order.
    pub fn all_cochains(&self) -> Result<Vec<Cochain<L::Obj>>> {
        let mut out: Vec<Vec<L::Obj>> = vec![vec![]];
        for s in &self.vertex_stalks {
            let objs = s.objects()?;
            out = out
                .into_iter()
                .flat_map(|c| {
                    objs.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(Cochain).collect())
    }

    /// All W-fuzzy global sections, by exhaustive filtering.
    pub fn global_sections(&self, w: &Weighting) -> Result<Vec<Cochain<L::Obj>>> {
        Ok(self
            .all_cochains()?
            .into_iter()
            .filter(|x| self.is_fuzzy_global_section(w, x).ok)
            .collect())
    }

    /// `(L_W x)_v = ⋀_{w ∈ N_v} W(v,w) ⋔ F_{e▷v} F_{w◁e} x_w`; isolated
    /// vertices receive the stalk top.
    pub fn laplacian(&self, w: &Weighting, x: &Cochain<L::Obj>) -> Result<Cochain<L::Obj>> {
        self.check_cochain(x)?;
        let mut out = Vec::with_capacity(x.len());
        for v in 0..self.graph.vertex_count() {
            let stalk = &self.vertex_stalks[v];
            let mut parts = Vec::with_capacity(self.graph.neighbors(v).len());
            for &(e, u) in self.graph.neighbors(v) {
                let moved = (self.incidence(e, u).restriction)(&x.0[u]);
                let back = (self.incidence(e, v).corestriction)(&moved);
                parts.push(stalk.cotensor(w.get(v, u), &back)?);
            }
            out.push(stalk.crisp_meet(&parts)?);
        }
        Ok(Cochain(out))
    }

    /// One flow step: `(Φx)_v = (ω1(v) ⋔ (Lx)_v) ∧ (ω2(v) ⋔ x_v)`.
    pub fn flow_step(
        &self,
        w: &Weighting,
        omega1: &[Elem],
        omega2: &[Elem],
        x: &Cochain<L::Obj>,
    ) -> Result<Cochain<L::Obj>> {
        let lx = self.laplacian(w, x)?;
        self.combine(&lx, omega1, omega2, x)
    }

    fn combine(
        &self,
        lx: &Cochain<L::Obj>,
        omega1: &[Elem],
        omega2: &[Elem],
        x: &Cochain<L::Obj>,
    ) -> Result<Cochain<L::Obj>> {
        let n = self.graph.vertex_count();
        if omega1.len() != n || omega2.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: omega1.len().min(omega2.len()),
            });
        }
        (0..n)
            .map(|v| {
                let s = &self.vertex_stalks[v];
                let a = s.cotensor(omega1[v], &lx.0[v])?;
                let b = s.cotensor(omega2[v], &x.0[v])?;
                s.crisp_meet(&[a, b])
            })
            .collect::<Result<Vec<_>>>()
            .map(Cochain)
    }

    /// Iterates the flow functor from `x0` under a schedule of weights.
    pub fn harmonic_flow(
        &self,
        w: &Weighting,
        x0: Cochain<L::Obj>,
        config: &FlowConfig,
        schedule: &mut dyn FlowSchedule<L::Obj>,
    ) -> Result<FlowTrace<L::Obj>> {
        self.check_cochain(&x0)?;
        let mut iterations = Vec::new();
        let mut x = x0;
        for t in 0..config.max_iter {
            let step = schedule.step(t, &x);
            let wt = step.weighting.as_ref().unwrap_or(w);
            let lx = self.laplacian(wt, &x)?;
            let suffix_level = self.cochain_hom(&x, &lx);
            let next = self.combine(&lx, &step.omega1, &step.omega2, &x)?;
            iterations.push(FlowRecord {
                t,
                cochain: x,
                suffix_level,
            });
            let last = &iterations.last().expect("just pushed").cochain;
            if self.cochain_iso(&next, last) && schedule.settled() {
                return Ok(FlowTrace {
                    iterations,
                    status: FlowStatus::Converged(t),
                });
            }
            if let Some(bound) = config.divergence_bound {
                let grows = next
                    .0
                    .iter()
                    .enumerate()
                    .any(|(v, o)| self.vertex_stalks[v].magnitude(o).is_some_and(|m| m > bound));
                if grows {
                    return Ok(FlowTrace {
                        iterations,
                        status: FlowStatus::Diverging(t),
                    });
                }
            }
            x = next;
        }
        Ok(FlowTrace {
            iterations,
            status: FlowStatus::MaxIterReached,
        })
    }

    /// Runs the unweighted flow.
    pub fn unweighted_flow(
        &self,
        w: &Weighting,
        x0: Cochain<L::Obj>,
        config: &FlowConfig,
    ) -> Result<FlowTrace<L::Obj>> {
        let mut s = Unweighted::new(*self.quantale(), self.graph.vertex_count());
        self.harmonic_flow(w, x0, config, &mut s)
    }

    /// Section/suffix-point correspondence at Laplacian fuzziness `eps`:
    /// (a) edge homs `⪰ W·q` put `x` in `S_{eps·q}`; (b) `x ∈ S_q` gives
    /// edge homs `⪰ W·eps·q`; (c) for idempotent `eps`, edge homs
    /// `⪰ W·eps·q` iff `x ∈ S_{eps·q}`.
    pub fn check_suffix_section_lemmas(
        &self,
        w: &Weighting,
        eps: Elem,
        q: Elem,
        samples: &[Cochain<L::Obj>],
    ) -> Result<LawReport> {
        let qu = *self.quantale();
        let mut rep = LawReport::new("suffix points and sections");
        let lvl = self.level();
        rep.check("precondition: Laplacian level", qu.leq(eps, lvl), || {
            format!("measured level {} below {}", qu.format(lvl), qu.format(eps))
        });
        let eq = qu.mul(eps, q);
        let idempotent = qu.is_idempotent(eps);
        for x in samples {
            let lx = self.laplacian(w, x)?;
            let suffix = self.cochain_hom(x, &lx);
            let edges_at = |scale: Elem| {
                self.graph.edges().iter().enumerate().all(|(e, &(a, b))| {
                    [(a, b), (b, a)]
                        .iter()
                        .all(|&(v, u)| qu.leq(qu.mul(w.get(v, u), scale), self.edge_hom(e, v, u, x)))
                })
            };
            let label = || {
                let parts: Vec<String> = x
                    .0
                    .iter()
                    .enumerate()
                    .map(|(v, o)| self.vertex_stalks[v].label(o))
                    .collect();
                format!("x=({}), hom(x, Lx)={}", parts.join(", "), qu.format(suffix))
            };
            if edges_at(q) {
                rep.check("section to suffix", qu.leq(eq, suffix), label);
            }
            if qu.leq(q, suffix) {
                rep.check("suffix to section", edges_at(eq), label);
            }
            if idempotent {
                rep.check("idempotent correspondence", edges_at(eq) == qu.leq(eq, suffix), label);
            }
        }
        Ok(rep)
    }

    /// For crisp Laplacians whose unweighted flow from `x0` stops, checks
    /// `hom(y, x0) = hom(y, x[t*])` for every enumerated global section `y`.
    pub fn check_projection_property(
        &self,
        w: &Weighting,
        x0: &Cochain<L::Obj>,
        max_iter: usize,
    ) -> Result<LawReport> {
        let q = *self.quantale();
        let mut rep = LawReport::new("projection property");
        let lvl = self.level();
        rep.check("precondition: crisp Laplacian", q.eq(lvl, q.unit()), || {
            format!("level {}", q.format(lvl))
        });
        let trace = self.unweighted_flow(
            w,
            x0.clone(),
            &FlowConfig {
                max_iter,
                divergence_bound: None,
            },
        )?;
        let limit = match trace.status {
            FlowStatus::Converged(_) => trace.final_cochain().expect("nonempty trace").clone(),
            _ => {
                rep.fail("precondition: finite convergence", format!("{:?}", trace.status));
                return Ok(rep);
            }
        };
        for y in self.global_sections(w)? {
            let (a, b) = (self.cochain_hom(&y, x0), self.cochain_hom(&y, &limit));
            rep.check("hom from sections preserved", q.eq(a, b), || {
                format!("{y:?}: hom(y, x0) = {}, hom(y, x*) = {}", q.format(a), q.format(b))
            });
        }
        Ok(rep)
    }
}

impl<L: WeightedLattice + Clone> NetworkSheaf<L> {
    /// The sheaf with every stalk equal to `stalk` and identity maps.
    pub fn constant(graph: Graph, stalk: L) -> Result<Self> {
        let id: Transport<L::Obj> = Arc::new(|x: &L::Obj| x.clone());
        let maps = (0..graph.edge_count())
            .map(|_| [[id.clone(), id.clone()], [id.clone(), id.clone()]])
            .collect();
        let vs = vec![stalk.clone(); graph.vertex_count()];
        let es = vec![stalk; graph.edge_count()];
        NetworkSheaf::new(graph, vs, es, maps)
    }
}

/// The product of the vertex stalks as a weighted lattice.
pub struct CochainCategory<'a, L: WeightedLattice> {
    pub sheaf: &'a NetworkSheaf<L>,
}

impl<L: WeightedLattice> QCategory for CochainCategory<'_, L> {
    type Obj = Cochain<L::Obj>;

    fn quantale(&self) -> &Quantale {
        self.sheaf.quantale()
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Elem {
        self.sheaf.cochain_hom(x, y)
    }

    fn objects(&self) -> Result<Vec<Self::Obj>> {
        self.sheaf.all_cochains()
    }

    fn label(&self, x: &Self::Obj) -> String {
        let parts: Vec<String> = x
            .0
            .iter()
            .enumerate()
            .map(|(v, o)| self.sheaf.vertex_stalk(v).label(o))
            .collect();
        format!("({})", parts.join(","))
    }

    fn name(&self) -> String {
        "cochains".into()
    }
}

impl<L: WeightedLattice> WeightedLattice for CochainCategory<'_, L> {
    fn tensor(&self, q: Elem, x: &Self::Obj) -> Result<Self::Obj> {
        x.0.iter()
            .enumerate()
            .map(|(v, o)| self.sheaf.vertex_stalk(v).tensor(q, o))
            .collect::<Result<_>>()
            .map(Cochain)
    }

    fn cotensor(&self, q: Elem, y: &Self::Obj) -> Result<Self::Obj> {
        y.0.iter()
            .enumerate()
            .map(|(v, o)| self.sheaf.vertex_stalk(v).cotensor(q, o))
            .collect::<Result<_>>()
            .map(Cochain)
    }

    fn crisp_meet(&self, xs: &[Self::Obj]) -> Result<Self::Obj> {
        (0..self.sheaf.graph().vertex_count())
            .map(|v| {
                let col: Vec<L::Obj> = xs.iter().map(|x| x.0[v].clone()).collect();
                self.sheaf.vertex_stalk(v).crisp_meet(&col)
            })
            .collect::<Result<_>>()
            .map(Cochain)
    }

    fn crisp_join(&self, xs: &[Self::Obj]) -> Result<Self::Obj> {
        (0..self.sheaf.graph().vertex_count())
            .map(|v| {
                let col: Vec<L::Obj> = xs.iter().map(|x| x.0[v].clone()).collect();
                self.sheaf.vertex_stalk(v).crisp_join(&col)
            })
            .collect::<Result<_>>()
            .map(Cochain)
    }
}

#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub max_iter: usize,
    /// Flags divergence once any component's magnitude exceeds the bound.
    pub divergence_bound: Option<f64>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            max_iter: 10_000,
            divergence_bound: None,
        }
    }
}

/// Weights for one flow step. A `weighting` overrides the sheaf weighting.
#[derive(Clone, Debug)]
pub struct StepWeights {
    pub weighting: Option<Weighting>,
    pub omega1: Vec<Elem>,
    pub omega2: Vec<Elem>,
}

/// Supplies per-step flow weights, possibly depending on the state.
pub trait FlowSchedule<O> {
    fn step(&mut self, t: usize, x: &Cochain<O>) -> StepWeights;

    /// Whether the schedule has finished its own bookkeeping; flows only
    /// report convergence once it has.
    fn settled(&self) -> bool {
        true
    }
}

/// `ω1 = ω2 = 1`.
pub struct Unweighted {
    unit: Vec<Elem>,
}

impl Unweighted {
    pub fn new(q: Quantale, n: usize) -> Self {
        Unweighted {
            unit: vec![q.unit(); n],
        }
    }
}

impl<O> FlowSchedule<O> for Unweighted {
    fn step(&mut self, _t: usize, _x: &Cochain<O>) -> StepWeights {
        StepWeights {
            weighting: None,
            omega1: self.unit.clone(),
            omega2: self.unit.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowRecord<O> {
    pub t: usize,
    pub cochain: Cochain<O>,
    pub suffix_level: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    /// `x[t+1] ≈_1 x[t]` at the given `t`.
    Converged(usize),
    MaxIterReached,
    Diverging(usize),
}

impl FlowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            FlowStatus::Converged(_) => "converged",
            FlowStatus::MaxIterReached => "max_iter_reached",
            FlowStatus::Diverging(_) => "diverging",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrace<O> {
    pub iterations: Vec<FlowRecord<O>>,
    pub status: FlowStatus,
}

impl<O> FlowTrace<O> {
    pub fn final_cochain(&self) -> Option<&Cochain<O>> {
        self.iterations.last().map(|r| &r.cochain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{Quantale, INF};
    use crate::wlattice::UnderlineQ;

    fn path(n: usize) -> Graph {
        Graph::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (1..n).map(|i| (i - 1, i)).collect(),
        )
        .unwrap()
    }

    fn bool_chain() -> crate::qcat::FiniteQCategory {
        crate::qcat::FiniteQCategory::new(
            Quantale::boolean(),
            vec!["0".into(), "1".into()],
            vec![vec![1.0, 1.0], vec![0.0, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        let ids = vec!["a".to_string(), "b".to_string()];
        assert!(Graph::new(ids.clone(), vec![(0, 0)]).is_err());
        assert!(Graph::new(ids.clone(), vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(ids, vec![(0, 2)]).is_err());
    }

    #[test]
    fn weighting_must_cover_adjacent_pairs_exactly() {
        let g = path(3);
        assert!(Weighting::new(&g, &[((0, 1), 1.0)]).is_err());
        assert!(Weighting::new(&g, &[((0, 2), 1.0)]).is_err());
        let full = [((0, 1), 1.0), ((1, 0), 1.0), ((1, 2), 0.0), ((2, 1), 1.0)];
        assert_eq!(Weighting::new(&g, &full).unwrap().get(1, 2), 0.0);
    }

    #[test]
    fn cochain_hom_examples() {
        let s = NetworkSheaf::constant(path(2), UnderlineQ::new(Quantale::lawvere())).unwrap();
        let x = Cochain(vec![0.0, 0.0]);
        assert_eq!(s.cochain_hom(&x, &x), 0.0);
        assert_eq!(s.cochain_hom(&x, &Cochain(vec![3.0, 5.0])), 5.0);
        let single = NetworkSheaf::constant(path(1), UnderlineQ::new(Quantale::lawvere())).unwrap();
        assert_eq!(single.cochain_hom(&Cochain(vec![2.0]), &Cochain(vec![7.0])), 5.0);
    }

    #[test]
    fn constant_cochains_are_sections() {
        let s = NetworkSheaf::constant(path(3), UnderlineQ::new(Quantale::lawvere())).unwrap();
        let w = Weighting::constant(s.graph(), 0.0);
        assert!(s.is_fuzzy_global_section(&w, &Cochain(vec![4.0; 3])).ok);
        let check = s.is_fuzzy_global_section(&w, &Cochain(vec![4.0, 4.0, 6.0]));
        assert!(!check.ok);
        assert_eq!(check.worst.map(|(v, u, ..)| (v, u)), Some((1, 2)));
    }

    #[test]
    fn metric_sections_bound_consistency_radius() {
        let s = NetworkSheaf::constant(path(3), UnderlineQ::op(Quantale::lawvere())).unwrap();
        let w = Weighting::constant(s.graph(), 1.5);
        assert!(s.is_fuzzy_global_section(&w, &Cochain(vec![0.0, 1.0, 2.5])).ok);
        assert!(!s.is_fuzzy_global_section(&w, &Cochain(vec![0.0, 1.0, 2.6])).ok);
    }

    #[test]
    fn boolean_edge_sections() {
        let s = NetworkSheaf::constant(path(2), bool_chain()).unwrap();
        let w = Weighting::constant(s.graph(), 1.0);
        let secs = s.global_sections(&w).unwrap();
        assert_eq!(secs, vec![Cochain(vec![0, 0]), Cochain(vec![1, 1])]);
        let w = Weighting::new(s.graph(), &[((0, 1), 1.0), ((1, 0), 0.0)]).unwrap();
        let secs = s.global_sections(&w).unwrap();
        assert_eq!(
            secs,
            vec![Cochain(vec![0, 0]), Cochain(vec![0, 1]), Cochain(vec![1, 1])]
        );
        let w = Weighting::constant(s.graph(), 0.0);
        assert_eq!(s.global_sections(&w).unwrap().len(), 4);
    }

    #[test]
    fn shortest_path_laplacian_example() {
        let s = NetworkSheaf::constant(path(3), UnderlineQ::op(Quantale::lawvere())).unwrap();
        // s = v0, a = v1, t = v2
        let w = Weighting::symmetric(s.graph(), &[1.0, 2.0]).unwrap();
        let lx = s.laplacian(&w, &Cochain(vec![0.0, INF, INF])).unwrap();
        assert_eq!(lx.0[1], 1.0);
        assert_eq!(lx.0[0], INF);
    }

    #[test]
    fn isolated_vertex_gets_top() {
        let g = Graph::new(vec!["a".into()], vec![]).unwrap();
        let s = NetworkSheaf::constant(g, UnderlineQ::op(Quantale::lawvere())).unwrap();
        let w = Weighting::constant(s.graph(), 0.0);
        assert_eq!(s.laplacian(&w, &Cochain(vec![3.0])).unwrap().0, vec![INF]);
    }

    #[test]
    fn flow_step_weights() {
        let s = NetworkSheaf::constant(path(2), UnderlineQ::op(Quantale::lawvere())).unwrap();
        let w = Weighting::constant(s.graph(), 1.0);
        let x = Cochain(vec![0.0, 5.0]);
        let unit = vec![0.0, 0.0];
        assert_eq!(s.flow_step(&w, &unit, &unit, &x).unwrap().0, vec![0.0, 1.0]);
        let bottom = vec![INF, INF];
        assert_eq!(s.flow_step(&w, &bottom, &unit, &x).unwrap(), x);
        let shifted = s.flow_step(&w, &[2.0, 2.0], &[0.0, 0.5], &x).unwrap();
        assert_eq!(shifted.0, vec![0.0, 3.0]);
    }

    #[test]
    fn suffix_point_converges_immediately() {
        let s = NetworkSheaf::constant(path(3), bool_chain()).unwrap();
        let w = Weighting::constant(s.graph(), 1.0);
        let tr = s
            .unweighted_flow(&w, Cochain(vec![1, 1, 1]), &FlowConfig::default())
            .unwrap();
        assert_eq!(tr.status, FlowStatus::Converged(0));
        let tr = s
            .unweighted_flow(&w, Cochain(vec![1, 0, 1]), &FlowConfig::default())
            .unwrap();
        assert_eq!(tr.final_cochain().unwrap().0, vec![0, 0, 0]);
    }

    #[test]
    fn projection_on_boolean_path() {
        let s = NetworkSheaf::constant(path(3), bool_chain()).unwrap();
        let w = Weighting::constant(s.graph(), 1.0);
        for x0 in s.all_cochains().unwrap() {
            let rep = s.check_projection_property(&w, &x0, 100).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn lemmas_on_boolean_path() {
        let s = NetworkSheaf::constant(path(3), bool_chain()).unwrap();
        let w = Weighting::from_fn(s.graph(), |v, u| if v < u { 1.0 } else { 0.0 });
        let all = s.all_cochains().unwrap();
        for q in [0.0, 1.0] {
            let rep = s.check_suffix_section_lemmas(&w, 1.0, q, &all).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }
}
