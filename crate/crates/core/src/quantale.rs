//! Commutative affine unital quantales: the enrichment base.
//!
//! Elements are carried as `f64` regardless of instance. Finite carriers use
//! integer codes (chain position, powerset bitmask), so arithmetic on them is
//! exact; the unit interval and the extended reals compare with a tolerance.

use crate::error::{Error, Result};
use crate::report::LawReport;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A quantale element. Its meaning depends on the owning [`Quantale`].
pub type Elem = f64;

pub const INF: Elem = f64::INFINITY;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNorm {
    /// Goguen: `p * q`.
    Product,
    /// `max(0, p + q - 1)`.
    Lukasiewicz,
    /// Goedel: `min(p, q)`.
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantaleKind {
    Boolean,
    UnitInterval(TNorm),
    /// `[0, inf]` ordered by `>=` with addition.
    LawvereReals,
    /// `{0, .., n-1}` with `min` as multiplication.
    FiniteChain(u32),
    /// Subsets of a ground set of at most five points, as bitmasks.
    FinitePowerset(u32),
}

impl fmt::Display for QuantaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantaleKind::Boolean => write!(f, "boolean"),
            QuantaleKind::UnitInterval(t) => write!(f, "unit_interval({t:?})"),
            QuantaleKind::LawvereReals => write!(f, "lawvere_reals"),
            QuantaleKind::FiniteChain(n) => write!(f, "finite_chain({n})"),
            QuantaleKind::FinitePowerset(g) => write!(f, "finite_powerset({g})"),
        }
    }
}

/// Serialized form used by input files, e.g. `{"kind":"finite_chain","n":4}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantaleDescriptor {
    Boolean {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
    },
    UnitInterval {
        tnorm: TNorm,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
    },
    LawvereReals {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
    },
    FiniteChain {
        n: u32,
    },
    FinitePowerset {
        ground: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantale {
    kind: QuantaleKind,
    tolerance: f64,
}

impl Quantale {
    pub fn new(kind: QuantaleKind) -> Result<Self> {
        match kind {
            QuantaleKind::FiniteChain(n) if n < 2 => {
                return Err(Error::Invalid(format!("finite chain needs n >= 2, got {n}")))
            }
            QuantaleKind::FinitePowerset(g) if !(1..=5).contains(&g) => {
                return Err(Error::Invalid(format!(
                    "powerset ground set must have 1..=5 points, got {g}"
                )))
            }
            _ => {}
        }
        let tolerance = if kind.is_exact() {
            0.0
        } else {
            DEFAULT_TOLERANCE
        };
        Ok(Quantale { kind, tolerance })
    }

    pub fn boolean() -> Self {
        Quantale {
            kind: QuantaleKind::Boolean,
            tolerance: 0.0,
        }
    }

    pub fn lawvere() -> Self {
        Quantale {
            kind: QuantaleKind::LawvereReals,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn unit_interval(t: TNorm) -> Self {
        Quantale {
            kind: QuantaleKind::UnitInterval(t),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Panics when `n < 2`; use [`Quantale::new`] for fallible construction.
    pub fn chain(n: u32) -> Self {
        Quantale::new(QuantaleKind::FiniteChain(n)).expect("chain length")
    }

    /// Panics unless `1 <= ground <= 5`.
    pub fn powerset(ground: u32) -> Self {
        Quantale::new(QuantaleKind::FinitePowerset(ground)).expect("ground size")
    }

    /// Overrides the comparison tolerance. Exact carriers keep tolerance 0.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        if !self.kind.is_exact() {
            self.tolerance = tolerance.max(0.0);
        }
        self
    }

    pub fn from_descriptor(d: &QuantaleDescriptor) -> Result<Self> {
        let (kind, tol) = match *d {
            QuantaleDescriptor::Boolean { tolerance } => (QuantaleKind::Boolean, tolerance),
            QuantaleDescriptor::UnitInterval { tnorm, tolerance } => {
                (QuantaleKind::UnitInterval(tnorm), tolerance)
            }
            QuantaleDescriptor::LawvereReals { tolerance } => {
                (QuantaleKind::LawvereReals, tolerance)
            }
            QuantaleDescriptor::FiniteChain { n } => (QuantaleKind::FiniteChain(n), None),
            QuantaleDescriptor::FinitePowerset { ground } => {
                (QuantaleKind::FinitePowerset(ground), None)
            }
        };
        let q = Quantale::new(kind)?;
        Ok(match tol {
            Some(t) => q.with_tolerance(t),
            None => q,
        })
    }

    pub fn descriptor(&self) -> QuantaleDescriptor {
        let tolerance = (self.tolerance != DEFAULT_TOLERANCE && !self.kind.is_exact())
            .then_some(self.tolerance);
        match self.kind {
            QuantaleKind::Boolean => QuantaleDescriptor::Boolean { tolerance: None },
            QuantaleKind::UnitInterval(tnorm) => QuantaleDescriptor::UnitInterval { tnorm, tolerance },
            QuantaleKind::LawvereReals => QuantaleDescriptor::LawvereReals { tolerance },
            QuantaleKind::FiniteChain(n) => QuantaleDescriptor::FiniteChain { n },
            QuantaleKind::FinitePowerset(ground) => QuantaleDescriptor::FinitePowerset { ground },
        }
    }

    pub fn kind(&self) -> QuantaleKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn same_kind(&self, other: &Quantale) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::QuantaleMismatch(
                self.kind.to_string(),
                other.kind.to_string(),
            ))
        }
    }

    pub fn contains(&self, p: Elem) -> bool {
        if p.is_nan() {
            return false;
        }
        match self.kind {
            QuantaleKind::Boolean => p == 0.0 || p == 1.0,
            QuantaleKind::UnitInterval(_) => (0.0..=1.0).contains(&p),
            QuantaleKind::LawvereReals => p >= 0.0,
            QuantaleKind::FiniteChain(n) => p.fract() == 0.0 && p >= 0.0 && p < n as f64,
            QuantaleKind::FinitePowerset(g) => {
                p.fract() == 0.0 && p >= 0.0 && p < (1u32 << g) as f64
            }
        }
    }

    pub fn check(&self, p: Elem) -> Result<Elem> {
        if self.contains(p) {
            Ok(p)
        } else {
            Err(Error::NotInCarrier {
                value: p,
                quantale: self.kind.to_string(),
            })
        }
    }

    pub fn top(&self) -> Elem {
        match self.kind {
            QuantaleKind::Boolean | QuantaleKind::UnitInterval(_) => 1.0,
            QuantaleKind::LawvereReals => 0.0,
            QuantaleKind::FiniteChain(n) => (n - 1) as f64,
            QuantaleKind::FinitePowerset(g) => ((1u32 << g) - 1) as f64,
        }
    }

    pub fn bottom(&self) -> Elem {
        match self.kind {
            QuantaleKind::LawvereReals => INF,
            _ => 0.0,
        }
    }

    /// The monoidal unit; equal to the top because every instance is affine.
    pub fn unit(&self) -> Elem {
        self.top()
    }

    /// `p ⪯ q` in the instance order (numeric `>=` for the extended reals).
    pub fn leq(&self, p: Elem, q: Elem) -> bool {
        match self.kind {
            QuantaleKind::Boolean | QuantaleKind::FiniteChain(_) => p <= q,
            QuantaleKind::UnitInterval(_) => p <= q + self.tolerance,
            QuantaleKind::LawvereReals => p >= q - self.tolerance,
            QuantaleKind::FinitePowerset(_) => (bits(p) & !bits(q)) == 0,
        }
    }

    pub fn geq(&self, p: Elem, q: Elem) -> bool {
        self.leq(q, p)
    }

    /// Equality up to the instance tolerance.
    pub fn eq(&self, p: Elem, q: Elem) -> bool {
        self.leq(p, q) && self.leq(q, p)
    }

    pub fn join2(&self, p: Elem, q: Elem) -> Elem {
        match self.kind {
            QuantaleKind::LawvereReals => p.min(q),
            QuantaleKind::FinitePowerset(_) => (bits(p) | bits(q)) as f64,
            _ => p.max(q),
        }
    }

    pub fn meet2(&self, p: Elem, q: Elem) -> Elem {
        match self.kind {
            QuantaleKind::LawvereReals => p.max(q),
            QuantaleKind::FinitePowerset(_) => (bits(p) & bits(q)) as f64,
            _ => p.min(q),
        }
    }

    /// Least upper bound; the empty join is the bottom.
    pub fn join<I: IntoIterator<Item = Elem>>(&self, elems: I) -> Elem {
        elems
            .into_iter()
            .fold(self.bottom(), |acc, p| self.join2(acc, p))
    }

    /// Greatest lower bound; the empty meet is the top.
    pub fn meet<I: IntoIterator<Item = Elem>>(&self, elems: I) -> Elem {
        elems
            .into_iter()
            .fold(self.top(), |acc, p| self.meet2(acc, p))
    }

    pub fn mul(&self, p: Elem, q: Elem) -> Elem {
        match self.kind {
            QuantaleKind::Boolean | QuantaleKind::FiniteChain(_) => p.min(q),
            QuantaleKind::UnitInterval(TNorm::Product) => p * q,
            QuantaleKind::UnitInterval(TNorm::Lukasiewicz) => (p + q - 1.0).max(0.0),
            QuantaleKind::UnitInterval(TNorm::Min) => p.min(q),
            QuantaleKind::LawvereReals => p + q,
            QuantaleKind::FinitePowerset(_) => (bits(p) & bits(q)) as f64,
        }
    }

    /// The internal hom `[p, q]`: the largest `r` with `p · r ⪯ q`.
    pub fn hom(&self, p: Elem, q: Elem) -> Elem {
        match self.kind {
            QuantaleKind::Boolean | QuantaleKind::FiniteChain(_) => {
                if p <= q {
                    self.top()
                } else {
                    q
                }
            }
            QuantaleKind::UnitInterval(TNorm::Product) => {
                if p <= q {
                    1.0
                } else {
                    q / p
                }
            }
            QuantaleKind::UnitInterval(TNorm::Lukasiewicz) => (1.0 - p + q).min(1.0),
            QuantaleKind::UnitInterval(TNorm::Min) => {
                if p <= q {
                    1.0
                } else {
                    q
                }
            }
            QuantaleKind::LawvereReals => {
                if p == INF {
                    0.0
                } else if q == INF {
                    INF
                } else {
                    (q - p).max(0.0)
                }
            }
            QuantaleKind::FinitePowerset(g) => {
                let full = (1u32 << g) - 1;
                ((!bits(p) | bits(q)) & full) as f64
            }
        }
    }

    pub fn is_idempotent(&self, p: Elem) -> bool {
        self.eq(self.mul(p, p), p)
    }

    /// All elements, when the carrier is finite.
    pub fn carrier(&self) -> Option<Vec<Elem>> {
        match self.kind {
            QuantaleKind::Boolean => Some(vec![0.0, 1.0]),
            QuantaleKind::FiniteChain(n) => Some((0..n).map(f64::from).collect()),
            QuantaleKind::FinitePowerset(g) => Some((0..(1u32 << g)).map(f64::from).collect()),
            _ => None,
        }
    }

    /// A reproducible grid of weights: the carrier when finite, otherwise a
    /// mix of extremes and interior points.
    pub fn weight_grid(&self) -> Vec<Elem> {
        if let Some(c) = self.carrier() {
            return c;
        }
        match self.kind {
            QuantaleKind::LawvereReals => vec![0.0, 0.5, 1.0, 2.0, 3.0, 5.0, INF],
            _ => vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.kind {
            QuantaleKind::Boolean => rng.gen_range(0..2) as f64,
            QuantaleKind::FiniteChain(n) => rng.gen_range(0..n) as f64,
            QuantaleKind::FinitePowerset(g) => rng.gen_range(0..(1u32 << g)) as f64,
            QuantaleKind::UnitInterval(_) => {
                if rng.gen_bool(0.2) {
                    [0.0, 0.25, 0.5, 0.75, 1.0][rng.gen_range(0..5)]
                } else {
                    rng.gen::<f64>()
                }
            }
            QuantaleKind::LawvereReals => {
                if rng.gen_bool(0.2) {
                    [0.0, 0.5, 1.0, 2.0, 3.0, INF][rng.gen_range(0..6)]
                } else {
                    rng.gen::<f64>() * 10.0
                }
            }
        }
    }

    pub fn format(&self, p: Elem) -> String {
        if p == INF {
            "inf".to_string()
        } else {
            format!("{p}")
        }
    }
}

fn bits(p: Elem) -> u32 {
    p as u32
}

impl QuantaleKind {
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            QuantaleKind::Boolean | QuantaleKind::FiniteChain(_) | QuantaleKind::FinitePowerset(_)
        )
    }
}

/// The operations the law harness needs. Implemented by [`Quantale`] and by
/// [`TableQuantale`], which exists so that corrupted instances can be checked.
pub trait QuantaleOps {
    fn leq(&self, p: Elem, q: Elem) -> bool;
    fn join2(&self, p: Elem, q: Elem) -> Elem;
    fn meet2(&self, p: Elem, q: Elem) -> Elem;
    fn mul(&self, p: Elem, q: Elem) -> Elem;
    fn hom(&self, p: Elem, q: Elem) -> Elem;
    fn top(&self) -> Elem;
    fn bottom(&self) -> Elem;
    fn unit(&self) -> Elem;
    fn carrier(&self) -> Option<Vec<Elem>>;
    fn random_element(&self, rng: &mut dyn rand::RngCore) -> Elem;
    fn name(&self) -> String;

    fn eq(&self, p: Elem, q: Elem) -> bool {
        self.leq(p, q) && self.leq(q, p)
    }
}

impl QuantaleOps for Quantale {
    fn leq(&self, p: Elem, q: Elem) -> bool {
        Quantale::leq(self, p, q)
    }
    fn join2(&self, p: Elem, q: Elem) -> Elem {
        Quantale::join2(self, p, q)
    }
    fn meet2(&self, p: Elem, q: Elem) -> Elem {
        Quantale::meet2(self, p, q)
    }
    fn mul(&self, p: Elem, q: Elem) -> Elem {
        Quantale::mul(self, p, q)
    }
    fn hom(&self, p: Elem, q: Elem) -> Elem {
        Quantale::hom(self, p, q)
    }
    fn top(&self) -> Elem {
        Quantale::top(self)
    }
    fn bottom(&self) -> Elem {
        Quantale::bottom(self)
    }
    fn unit(&self) -> Elem {
        Quantale::unit(self)
    }
    fn carrier(&self) -> Option<Vec<Elem>> {
        Quantale::carrier(self)
    }
    fn random_element(&self, rng: &mut dyn rand::RngCore) -> Elem {
        Quantale::random_element(self, rng)
    }
    fn name(&self) -> String {
        self.kind.to_string()
    }
}

/// A finite quantale given by explicit tables over element codes `0..n`.
/// Joins and meets are read off the order; the hom is the exhaustive
/// residual join.
#[derive(Clone, Debug)]
pub struct TableQuantale {
    name: String,
    order: Vec<Vec<bool>>,
    mul: Vec<Vec<usize>>,
    unit: usize,
}

impl TableQuantale {
    pub fn from_quantale(q: &Quantale) -> Result<Self> {
        let carrier = q
            .carrier()
            .ok_or_else(|| Error::NotEnumerable(q.kind().to_string()))?;
        let n = carrier.len();
        let order = (0..n)
            .map(|i| (0..n).map(|j| q.leq(carrier[i], carrier[j])).collect())
            .collect();
        let mul = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| q.mul(carrier[i], carrier[j]) as usize)
                    .collect()
            })
            .collect();
        Ok(TableQuantale {
            name: format!("table({})", q.kind()),
            order,
            mul,
            unit: q.unit() as usize,
        })
    }

    /// Overwrites one (unordered) entry of the multiplication table.
    pub fn set_mul(&mut self, p: usize, q: usize, r: usize) {
        self.mul[p][q] = r;
        self.mul[q][p] = r;
    }

    fn size(&self) -> usize {
        self.order.len()
    }

    fn lub(&self, a: usize, b: usize) -> usize {
        let n = self.size();
        let uppers: Vec<usize> = (0..n)
            .filter(|&u| self.order[a][u] && self.order[b][u])
            .collect();
        *uppers
            .iter()
            .find(|&&u| uppers.iter().all(|&v| self.order[u][v]))
            .expect("table order is a lattice")
    }

    fn glb(&self, a: usize, b: usize) -> usize {
        let n = self.size();
        let lowers: Vec<usize> = (0..n)
            .filter(|&l| self.order[l][a] && self.order[l][b])
            .collect();
        *lowers
            .iter()
            .find(|&&l| lowers.iter().all(|&v| self.order[v][l]))
            .expect("table order is a lattice")
    }
}

impl QuantaleOps for TableQuantale {
    fn leq(&self, p: Elem, q: Elem) -> bool {
        self.order[p as usize][q as usize]
    }
    fn join2(&self, p: Elem, q: Elem) -> Elem {
        self.lub(p as usize, q as usize) as f64
    }
    fn meet2(&self, p: Elem, q: Elem) -> Elem {
        self.glb(p as usize, q as usize) as f64
    }
    fn mul(&self, p: Elem, q: Elem) -> Elem {
        self.mul[p as usize][q as usize] as f64
    }
    fn hom(&self, p: Elem, q: Elem) -> Elem {
        let (p, q) = (p as usize, q as usize);
        let mut acc = QuantaleOps::bottom(self) as usize;
        for r in 0..self.size() {
            if self.order[self.mul[p][r]][q] {
                acc = self.lub(acc, r);
            }
        }
        acc as f64
    }
    fn top(&self) -> Elem {
        let n = self.size();
        (0..n).find(|&t| (0..n).all(|x| self.order[x][t])).unwrap() as f64
    }
    fn bottom(&self) -> Elem {
        let n = self.size();
        (0..n).find(|&b| (0..n).all(|x| self.order[b][x])).unwrap() as f64
    }
    fn unit(&self) -> Elem {
        self.unit as f64
    }
    fn carrier(&self) -> Option<Vec<Elem>> {
        Some((0..self.size()).map(|i| i as f64).collect())
    }
    fn random_element(&self, rng: &mut dyn rand::RngCore) -> Elem {
        (rng.next_u32() as usize % self.size()) as f64
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

/// Which triples the law harness evaluates.
#[derive(Clone, Debug)]
pub enum LawSamples {
    /// Every triple of the (finite) carrier.
    Exhaustive,
    /// Every triple drawn from the given list.
    Elements(Vec<Elem>),
    /// `count` random triples from a seeded generator.
    Random { count: usize, seed: u64 },
}

/// Checks the residuation laws, distributivity, commutativity, associativity
/// and affineness on the requested samples. Violations are reported, not
/// raised.
pub fn check_quantale_laws<Q: QuantaleOps + ?Sized>(q: &Q, samples: &LawSamples) -> Result<LawReport> {
    use rand::SeedableRng;

    let mut report = LawReport::new(format!("quantale laws for {}", q.name()));
    let triples: Vec<(Elem, Elem, Elem)> = match samples {
        LawSamples::Exhaustive => {
            let c = q
                .carrier()
                .ok_or_else(|| Error::NotEnumerable(q.name()))?;
            cube(&c)
        }
        LawSamples::Elements(c) => cube(c),
        LawSamples::Random { count, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    (
                        q.random_element(&mut rng),
                        q.random_element(&mut rng),
                        q.random_element(&mut rng),
                    )
                })
                .collect()
        }
    };

    report.check("affine: unit is top", q.eq(q.unit(), q.top()), || {
        format!("unit {} top {}", q.unit(), q.top())
    });
    for &(p, a, r) in &triples {
        check_triple(q, &mut report, p, a, r);
    }
    Ok(report)
}

fn cube(c: &[Elem]) -> Vec<(Elem, Elem, Elem)> {
    let mut out = Vec::with_capacity(c.len().pow(3));
    for &p in c {
        for &q in c {
            for &r in c {
                out.push((p, q, r));
            }
        }
    }
    out
}

fn check_triple<Q: QuantaleOps + ?Sized>(qu: &Q, rep: &mut LawReport, p: Elem, q: Elem, r: Elem) {
    let w = || format!("p={p}, q={q}, r={r}");
    let one = qu.unit();

    // item 1: monotone in the second argument, antitone in the first
    if qu.leq(q, r) {
        rep.check("hom monotone in codomain", qu.leq(qu.hom(p, q), qu.hom(p, r)), w);
    }
    if qu.leq(p, r) {
        rep.check("hom antitone in domain", qu.leq(qu.hom(r, q), qu.hom(p, q)), w);
    }
    // item 2 on the two-element family {q, r}
    rep.check(
        "hom preserves meets in codomain",
        qu.eq(
            qu.hom(p, qu.meet2(q, r)),
            qu.meet2(qu.hom(p, q), qu.hom(p, r)),
        ),
        w,
    );
    rep.check(
        "hom sends joins in domain to meets",
        qu.eq(
            qu.hom(qu.join2(q, r), p),
            qu.meet2(qu.hom(q, p), qu.hom(r, p)),
        ),
        w,
    );
    rep.check("empty meet in codomain", qu.eq(qu.hom(p, qu.top()), qu.top()), w);
    rep.check("empty join in domain", qu.eq(qu.hom(qu.bottom(), p), qu.top()), w);
    // item 3
    rep.check("unit hom", qu.eq(qu.hom(one, q), q), w);
    // item 4
    rep.check(
        "order via hom",
        qu.leq(q, p) == qu.leq(one, qu.hom(q, p)),
        w,
    );
    // item 5
    rep.check(
        "tensor-hom inequality",
        qu.leq(qu.mul(qu.hom(p, q), r), qu.hom(p, qu.mul(q, r))),
        w,
    );
    // item 6
    let curried = qu.hom(p, qu.hom(q, r));
    rep.check("currying", qu.eq(curried, qu.hom(qu.mul(p, q), r)), w);
    rep.check("hom exchange", qu.eq(curried, qu.hom(q, qu.hom(p, r))), w);
    // residuation and its counit
    rep.check(
        "residuation",
        qu.leq(qu.mul(p, r), q) == qu.leq(r, qu.hom(p, q)),
        w,
    );
    rep.check("counit", qu.leq(qu.mul(p, qu.hom(p, q)), q), w);
    // monoid laws
    rep.check("commutativity", qu.eq(qu.mul(p, q), qu.mul(q, p)), w);
    rep.check(
        "associativity",
        qu.eq(qu.mul(qu.mul(p, q), r), qu.mul(p, qu.mul(q, r))),
        w,
    );
    rep.check("unit law", qu.eq(qu.mul(one, p), p), w);
    rep.check(
        "distributivity",
        qu.eq(
            qu.mul(p, qu.join2(q, r)),
            qu.join2(qu.mul(p, q), qu.mul(p, r)),
        ),
        w,
    );
    rep.check("annihilation", qu.eq(qu.mul(p, qu.bottom()), qu.bottom()), w);
    rep.check("affine", qu.leq(qu.mul(p, q), qu.meet2(p, q)), w);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leq_examples() {
        assert!(Quantale::boolean().leq(0.0, 1.0));
        assert!(Quantale::lawvere().leq(5.0, 2.0));
        assert!(!Quantale::chain(3).leq(2.0, 1.0));
    }

    #[test]
    fn join_meet_examples() {
        let b = Quantale::boolean();
        assert_eq!(b.join([0.0, 1.0]), 1.0);
        assert_eq!(b.join([]), b.bottom());
        let r = Quantale::lawvere();
        assert_eq!(r.join([2.0, 5.0]), 2.0);
        assert_eq!(r.join([]), INF);
        assert_eq!(r.meet([2.0, 5.0]), 5.0);
        assert_eq!(r.meet([]), r.top());
        let ps = Quantale::powerset(3);
        // {a,b} = 0b011, {b,c} = 0b110
        assert_eq!(ps.meet([3.0, 6.0]), 2.0);
    }

    #[test]
    fn mul_examples() {
        let l = Quantale::unit_interval(TNorm::Lukasiewicz);
        assert!((l.mul(0.7, 0.6) - 0.3).abs() < 1e-12);
        for q in [0.0, 0.3, 1.0] {
            assert!(l.eq(l.mul(1.0, q), q));
        }
        assert_eq!(Quantale::lawvere().mul(3.0, INF), INF);
    }

    #[test]
    fn hom_examples() {
        let r = Quantale::lawvere();
        assert_eq!(r.hom(3.0, 5.0), 2.0);
        assert_eq!(r.hom(INF, 4.0), 0.0);
        assert_eq!(r.hom(4.0, INF), INF);
        assert_eq!(r.hom(r.unit(), 7.0), 7.0);
        let l = Quantale::unit_interval(TNorm::Lukasiewicz);
        assert!((l.hom(0.7, 0.4) - 0.7).abs() < 1e-12);
        let g = Quantale::unit_interval(TNorm::Product);
        assert_eq!(g.hom(0.5, 0.25), 0.5);
        let m = Quantale::unit_interval(TNorm::Min);
        assert_eq!(m.hom(0.5, 0.25), 0.25);
        assert_eq!(m.hom(0.25, 0.5), 1.0);
    }

    #[test]
    fn carrier_membership() {
        assert!(Quantale::lawvere().contains(INF));
        assert!(!Quantale::lawvere().contains(-1.0));
        assert!(!Quantale::chain(3).contains(3.0));
        assert!(Quantale::powerset(2).contains(3.0));
        assert!(Quantale::powerset(2).check(4.0).is_err());
        assert!(Quantale::new(QuantaleKind::FinitePowerset(6)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"kind":"unit_interval","tnorm":"lukasiewicz"}"#;
        let d: QuantaleDescriptor = serde_json::from_str(json).unwrap();
        let q = Quantale::from_descriptor(&d).unwrap();
        assert_eq!(q.kind(), QuantaleKind::UnitInterval(TNorm::Lukasiewicz));
        let d2: QuantaleDescriptor =
            serde_json::from_str(r#"{"kind":"finite_chain","n":4}"#).unwrap();
        assert_eq!(Quantale::from_descriptor(&d2).unwrap(), Quantale::chain(4));
        assert_eq!(
            serde_json::to_string(&Quantale::lawvere().descriptor()).unwrap(),
            r#"{"kind":"lawvere_reals"}"#
        );
    }

    #[test]
    fn exhaustive_laws_on_small_frames() {
        for q in [Quantale::boolean(), Quantale::chain(4)] {
            let rep = check_quantale_laws(&q, &LawSamples::Exhaustive).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn table_quantale_matches_source() {
        let q = Quantale::powerset(2);
        let t = TableQuantale::from_quantale(&q).unwrap();
        for p in 0..4 {
            for r in 0..4 {
                let (p, r) = (p as f64, r as f64);
                assert_eq!(QuantaleOps::hom(&t, p, r), q.hom(p, r));
                assert_eq!(QuantaleOps::join2(&t, p, r), q.join2(p, r));
            }
        }
        assert!(check_quantale_laws(&t, &LawSamples::Exhaustive).unwrap().passed());
    }

    #[test]
    fn corrupted_table_reports_distributivity() {
        let mut t = TableQuantale::from_quantale(&Quantale::powerset(2)).unwrap();
        // {a} · {a,b} should be {a}
        t.set_mul(1, 3, 0);
        let rep = check_quantale_laws(&t, &LawSamples::Exhaustive).unwrap();
        assert!(!rep.passed());
        assert!(rep.violates("distributivity"), "{rep}");
    }
}
