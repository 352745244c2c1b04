//! Fuzzy preference relations and their diffusion under bounded confidence.

use crate::error::{Error, Result};
use crate::qcat::QCategory;
use crate::quantale::{Elem, Quantale};
use crate::sheaf::{
    Cochain, FlowConfig, FlowSchedule, FlowTrace, Graph, NetworkSheaf, StepWeights, Weighting,
};
use crate::wlattice::WeightedLattice;

/// A square quantale-valued relation on `n` alternatives, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    n: usize,
    values: Vec<Elem>,
}

impl Relation {
    pub fn new(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Ok(Relation { n, values })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Elem>(n: usize, mut f: F) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                values.push(f(a, b));
            }
        }
        Relation { n, values }
    }

    /// `1` on the diagonal, bottom elsewhere.
    pub fn discrete(q: &Quantale, n: usize) -> Self {
        Relation::from_fn(n, |a, b| if a == b { q.unit() } else { q.bottom() })
    }

    /// Every entry the top.
    pub fn full(q: &Quantale, n: usize) -> Self {
        Relation::from_fn(n, |_, _| q.top())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> Elem {
        self.values[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: Elem) {
        self.values[a * self.n + b] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.values.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn pointwise<F: Fn(Elem, Elem) -> Elem>(&self, other: &Relation, f: F) -> Relation {
        Relation {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map<F: Fn(Elem) -> Elem>(&self, f: F) -> Relation {
        Relation {
            n: self.n,
            values: self.values.iter().map(|&a| f(a)).collect(),
        }
    }

    /// `(R ∘ S)(a, c) = ⋁_b R(a, b) · S(b, c)`.
    pub fn compose(&self, other: &Relation, q: &Quantale) -> Relation {
        Relation::from_fn(self.n, |a, c| {
            q.join((0..self.n).map(|b| q.mul(self.get(a, b), other.get(b, c))))
        })
    }

    /// Fails with a witness unless the relation is reflexive and transitive.
    pub fn validate(&self, q: &Quantale) -> Result<()> {
        for a in 0..self.n {
            if !q.eq(self.get(a, a), q.unit()) {
                return Err(Error::ReflexivityFailure(format!("({a}, {a})")));
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if !q.leq(q.mul(self.get(a, b), self.get(b, c)), self.get(a, c)) {
                        return Err(Error::ClosureFailure {
                            a: a.to_string(),
                            b: b.to_string(),
                            c: c.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The least reflexive transitive relation above `self`, by iterating
    /// `R ← R ∨ R∘R` from `R ∨ 1`.
    pub fn closure(&self, q: &Quantale) -> Relation {
        let mut r = self.pointwise(&Relation::discrete(q, self.n), |a, b| q.join2(a, b));
        loop {
            let next = r.pointwise(&r.compose(&r, q), |a, b| q.join2(a, b));
            if next.values.iter().zip(&r.values).all(|(&a, &b)| q.eq(a, b)) {
                return r;
            }
            r = next;
        }
    }
}

/// Preference relations on a finite set of alternatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefLattice {
    pub quantale: Quantale,
    pub alternatives: Vec<String>,
}

impl PrefLattice {
    pub fn new(quantale: Quantale, alternatives: Vec<String>) -> Self {
        PrefLattice {
            quantale,
            alternatives,
        }
    }

    pub fn n(&self) -> usize {
        self.alternatives.len()
    }

    fn checked(&self, r: Relation) -> Result<Relation> {
        if r.size() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: r.size(),
            });
        }
        r.validate(&self.quantale).map_err(|e| match e {
            Error::ClosureFailure { a, b, c } => Error::ClosureFailure {
                a: self.name_of(&a),
                b: self.name_of(&b),
                c: self.name_of(&c),
            },
            other => other,
        })?;
        Ok(r)
    }

    fn name_of(&self, idx: &str) -> String {
        idx.parse::<usize>()
            .ok()
            .and_then(|i| self.alternatives.get(i).cloned())
            .unwrap_or_else(|| idx.to_string())
    }

    /// Every reflexive transitive relation with entries from `values`.
    pub fn relations_on(&self, values: &[Elem]) -> Vec<Relation> {
        let n = self.n();
        let q = &self.quantale;
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; off.len()];
        loop {
            let mut r = Relation::discrete(q, n);
            for (k, &(a, b)) in off.iter().enumerate() {
                r.set(a, b, values[idx[k]]);
            }
            if r.validate(q).is_ok() {
                out.push(r);
            }
            let mut k = 0;
            loop {
                if k == off.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

impl QCategory for PrefLattice {
    type Obj = Relation;

    fn quantale(&self) -> &Quantale {
        &self.quantale
    }

    /// `⋀_{a,b} [P(a,b), M(a,b)]`.
    fn hom(&self, p: &Relation, m: &Relation) -> Elem {
        let q = &self.quantale;
        q.meet(p.values.iter().zip(&m.values).map(|(&a, &b)| q.hom(a, b)))
    }

    fn objects(&self) -> Result<Vec<Relation>> {
        let carrier = self
            .quantale
            .carrier()
            .ok_or_else(|| Error::NotEnumerable(self.name()))?;
        Ok(self.relations_on(&carrier))
    }

    fn label(&self, p: &Relation) -> String {
        let rows: Vec<String> = p
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|&v| self.quantale.format(v)).collect();
                cells.join(" ")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    }

    fn name(&self) -> String {
        format!("preferences on {} alternatives", self.n())
    }
}

impl WeightedLattice for PrefLattice {
    /// `(q ⊗ P)(a,b) = (q · P(a,b)) ∨ 1(a,b)`.
    fn tensor(&self, w: Elem, p: &Relation) -> Result<Relation> {
        let q = &self.quantale;
        let scaled = p.map(|v| q.mul(w, v));
        self.checked(scaled.pointwise(&Relation::discrete(q, p.size()), |a, b| q.join2(a, b)))
    }

    /// `(q ⋔ P)(a,b) = [q, P(a,b)]`.
    fn cotensor(&self, w: Elem, p: &Relation) -> Result<Relation> {
        let q = &self.quantale;
        self.checked(p.map(|v| q.hom(w, v)))
    }

    fn crisp_meet(&self, xs: &[Relation]) -> Result<Relation> {
        let q = &self.quantale;
        let start = Relation::full(q, self.n());
        self.checked(xs.iter().fold(start, |acc, r| acc.pointwise(r, |a, b| q.meet2(a, b))))
    }

    /// Closure of the pointwise join.
    fn crisp_join(&self, xs: &[Relation]) -> Result<Relation> {
        let q = &self.quantale;
        let start = Relation::discrete(q, self.n());
        let joined = xs.iter().fold(start, |acc, r| acc.pointwise(r, |a, b| q.join2(a, b)));
        self.checked(joined.closure(q))
    }

    fn sample_objects(&self) -> Vec<Relation> {
        match self.objects() {
            Ok(all) if all.len() <= 64 => all,
            _ => vec![
                Relation::discrete(&self.quantale, self.n()),
                Relation::full(&self.quantale, self.n()),
            ],
        }
    }
}

/// `f*M(a, a') = M(f a, f a')`.
pub fn pullback(f: &[usize], m: &Relation) -> Relation {
    Relation::from_fn(f.len(), |a, b| m.get(f[a], f[b]))
}

/// The closure of `(b, b') ↦ ⋁ {P(a, a') : f a = b, f a' = b'}`.
pub fn pushforward(q: &Quantale, f: &[usize], nb: usize, p: &Relation) -> Relation {
    let mut image = Relation::from_fn(nb, |_, _| q.bottom());
    for a in 0..f.len() {
        for b in 0..f.len() {
            let (x, y) = (f[a], f[b]);
            image.set(x, y, q.join2(image.get(x, y), p.get(a, b)));
        }
    }
    image.closure(q)
}

/// Trust weights `W(v, w) = 1` when `x_v ≈_{ε_v} x_w` and bottom otherwise,
/// recomputed from the current state at every step.
pub struct BoundedConfidence {
    pub lattice: PrefLattice,
    pub graph: Graph,
    pub eps: Vec<Elem>,
    /// Steps so far whose weighting trusted at least one neighbour.
    pub active_steps: usize,
}

impl BoundedConfidence {
    pub fn new(lattice: PrefLattice, graph: Graph, eps: Vec<Elem>) -> Self {
        BoundedConfidence {
            lattice,
            graph,
            eps,
            active_steps: 0,
        }
    }

    pub fn weighting(&self, x: &Cochain<Relation>) -> Weighting {
        let q = self.lattice.quantale;
        Weighting::from_fn(&self.graph, |v, w| {
            if self.lattice.approx_q(&x.0[v], &x.0[w], self.eps[v]) {
                q.unit()
            } else {
                q.bottom()
            }
        })
    }
}

impl FlowSchedule<Relation> for BoundedConfidence {
    fn step(&mut self, _t: usize, x: &Cochain<Relation>) -> StepWeights {
        let q = self.lattice.quantale;
        let w = self.weighting(x);
        if w.entries().any(|(_, v)| q.eq(v, q.unit())) {
            self.active_steps += 1;
        }
        let n = self.graph.vertex_count();
        StepWeights {
            weighting: Some(w),
            omega1: vec![q.unit(); n],
            omega2: vec![q.unit(); n],
        }
    }
}

/// Result of a bounded-confidence run.
#[derive(Clone, Debug)]
pub struct PrefRun {
    pub trace: FlowTrace<Relation>,
    /// Steps in which some agent's relation changed.
    pub updates: usize,
}

/// Diffuses agent preferences over the graph with identity transports.
pub fn bounded_confidence_flow(
    lattice: &PrefLattice,
    graph: &Graph,
    prefs: Vec<Relation>,
    eps: Vec<Elem>,
    config: &FlowConfig,
) -> Result<PrefRun> {
    if eps.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            found: eps.len(),
        });
    }
    for (v, p) in prefs.iter().enumerate() {
        lattice
            .checked(p.clone())
            .map_err(|e| Error::parse(format!("agents[{v}]"), e.to_string()))?;
    }
    let sheaf = NetworkSheaf::constant(graph.clone(), lattice.clone())?;
    let base = Weighting::constant(graph, lattice.quantale.unit());
    let mut sched = BoundedConfidence::new(lattice.clone(), graph.clone(), eps);
    let trace = sheaf.harmonic_flow(&base, Cochain(prefs), config, &mut sched)?;
    let updates = trace
        .iterations
        .windows(2)
        .filter(|w| w[0].cochain != w[1].cochain)
        .count();
    Ok(PrefRun { trace, updates })
}
