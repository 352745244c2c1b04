//! Brute-force reference implementations. Nothing here calls the
//! constructions it is used to check: limits are found by scanning objects,
//! residuals by scanning a grid, distances by a binary heap, sections by
//! enumerating cochains and closures by path relaxation.

use crate::error::{Error, Result};
use crate::qcat::QCategory;
use crate::quantale::{Elem, Quantale, QuantaleKind, INF};
use crate::sheaf::{Cochain, Graph, NetworkSheaf, Weighting};
use crate::wlattice::{WeightedDiagram, WeightedLattice};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Grid points per unit for residual scans.
    pub grid_resolution: u32,
    pub seed: u64,
    /// Largest number of objects an exhaustive limit search will scan.
    pub max_objects: usize,
    /// Largest number of cochains a section enumeration will scan.
    pub max_cochains: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_resolution: 1000,
            seed: 0,
            max_objects: 100_000,
            max_cochains: 1_000_000,
        }
    }
}

/// Every object satisfying a universal property, in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteLimit<O> {
    pub solutions: Vec<O>,
}

impl<O: Clone> BruteLimit<O> {
    pub fn first(&self) -> Option<&O> {
        self.solutions.first()
    }

    /// Number of solutions; above one only when isomorphic copies exist.
    pub fn multiplicity(&self) -> usize {
        self.solutions.len()
    }
}

fn brute_limit<L: QCategory + ?Sized>(
    lat: &L,
    d: &WeightedDiagram<L::Obj>,
    meet: bool,
    cap: usize,
) -> Result<BruteLimit<L::Obj>> {
    let q = *lat.quantale();
    let objs = lat.objects()?;
    if objs.len() > cap {
        return Err(Error::Invalid(format!(
            "{} objects exceed the oracle cap {cap}",
            objs.len()
        )));
    }
    let expected = |x: &L::Obj| {
        let mut acc = q.top();
        for (s, w) in &d.terms {
            let h = if meet { lat.hom(x, s) } else { lat.hom(s, x) };
            acc = q.meet2(acc, q.hom(*w, h));
        }
        acc
    };
    let targets: Vec<Elem> = objs.iter().map(expected).collect();
    let solutions: Vec<L::Obj> = objs
        .iter()
        .filter(|c| {
            objs.iter().zip(&targets).all(|(x, &t)| {
                let h = if meet { lat.hom(x, c) } else { lat.hom(c, x) };
                q.eq(h, t)
            })
        })
        .cloned()
        .collect();
    if solutions.is_empty() {
        return Err(Error::NoSuchObject(format!(
            "weighted {} of {} terms",
            if meet { "meet" } else { "join" },
            d.len()
        )));
    }
    Ok(BruteLimit { solutions })
}

/// Objects `m` with `hom(x, m) = ⋀_i [W_i, hom(x, S_i)]` for every `x`.
pub fn brute_weighted_meet<L: QCategory + ?Sized>(
    lat: &L,
    d: &WeightedDiagram<L::Obj>,
) -> Result<BruteLimit<L::Obj>> {
    brute_limit(lat, d, true, OracleConfig::default().max_objects)
}

/// Objects `j` with `hom(j, x) = ⋀_i [W_i, hom(S_i, x)]` for every `x`.
pub fn brute_weighted_join<L: QCategory + ?Sized>(
    lat: &L,
    d: &WeightedDiagram<L::Obj>,
) -> Result<BruteLimit<L::Obj>> {
    brute_limit(lat, d, false, OracleConfig::default().max_objects)
}

/// Textbook single-source distances; unreachable vertices get `∞`.
pub fn classic_shortest_paths(graph: &Graph, weights: &[Elem], source: usize) -> Vec<Elem> {
    let n = graph.vertex_count();
    let mut adj: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); n];
    for (&(a, b), &w) in graph.edges().iter().zip(weights) {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut dist = vec![INF; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((OrdF64(0.0), source)));
    while let Some(Reverse((OrdF64(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, w) in &adj[v] {
            let nd = d + w;
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((OrdF64(nd), u)));
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// The exact order of each instance, without tolerance.
fn strict_leq(kind: QuantaleKind, p: Elem, q: Elem) -> bool {
    match kind {
        QuantaleKind::LawvereReals => p >= q,
        QuantaleKind::FinitePowerset(_) => (p as u32) & !(q as u32) == 0,
        _ => p <= q,
    }
}

/// The residual `[p, q]` as the supremum of `{r : p · r ⪯ q}`. Finite
/// carriers are scanned and joined; the unit interval is scanned at
/// `1/resolution` and the boundary refined by bisection; the extended reals
/// are bisected on the numeric line.
pub fn grid_residual(quantale: &Quantale, p: Elem, q: Elem, resolution: u32) -> Elem {
    let kind = quantale.kind();
    let ok = |r: Elem| strict_leq(kind, quantale.mul(p, r), q);
    if let Some(carrier) = quantale.carrier() {
        return match kind {
            QuantaleKind::FinitePowerset(_) => carrier
                .into_iter()
                .filter(|&r| ok(r))
                .fold(0.0, |acc, r| ((acc as u32) | (r as u32)) as f64),
            _ => carrier.into_iter().filter(|&r| ok(r)).fold(0.0, f64::max),
        };
    }
    match kind {
        QuantaleKind::LawvereReals => {
            // least numeric r with p + r >= q
            if ok(0.0) {
                return 0.0;
            }
            if q == INF {
                return INF;
            }
            let (mut lo, mut hi) = (0.0, q);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
        _ => {
            let n = resolution.max(1);
            let mut best = 0;
            for i in 0..=n {
                if ok(f64::from(i) / f64::from(n)) {
                    best = i;
                }
            }
            if best == n {
                return 1.0;
            }
            let (mut lo, mut hi) = (f64::from(best) / f64::from(n), f64::from(best + 1) / f64::from(n));
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    }
}

/// The least reflexive transitive relation above `r`, by relaxing paths
/// through each intermediate in turn.
pub fn transitive_closure(quantale: &Quantale, r: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = r.len();
    let mut c: Vec<Vec<Elem>> = r.to_vec();
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = quantale.top();
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = quantale.mul(c[i][k], c[k][j]);
                c[i][j] = quantale.join2(c[i][j], via);
            }
        }
    }
    c
}

/// All cochains satisfying the section inequalities, found by enumerating
/// stalk objects and comparing transported values edge by edge.
pub fn brute_global_sections<L: WeightedLattice>(
    sheaf: &NetworkSheaf<L>,
    w: &Weighting,
    cap: usize,
) -> Result<Vec<Cochain<L::Obj>>> {
    let g = sheaf.graph();
    let q = *sheaf.quantale();
    let stalks: Vec<Vec<L::Obj>> = (0..g.vertex_count())
        .map(|v| sheaf.vertex_stalk(v).objects())
        .collect::<Result<_>>()?;
    let total = stalks.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
    if total.map_or(true, |t| t > cap) {
        return Err(Error::Invalid(format!("cochain space exceeds the oracle cap {cap}")));
    }
    let mut idx = vec![0usize; stalks.len()];
    let mut out = Vec::new();
    if stalks.iter().any(|s| s.is_empty()) {
        return Ok(out);
    }
    loop {
        let x: Vec<L::Obj> = idx.iter().zip(&stalks).map(|(&i, s)| s[i].clone()).collect();
        let agrees = g.edges().iter().enumerate().all(|(e, &(a, b))| {
            let fa = (sheaf.incidence(e, a).restriction)(&x[a]);
            let fb = (sheaf.incidence(e, b).restriction)(&x[b]);
            let stalk = sheaf.edge_stalk(e);
            q.leq(w.get(a, b), stalk.hom(&fa, &fb)) && q.leq(w.get(b, a), stalk.hom(&fb, &fa))
        });
        if agrees {
            out.push(Cochain(x));
        }
        // the last vertex varies fastest, matching lexicographic order
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < stalks[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Row-major reflexive relations on `n` points with entries from `values`,
/// filtered to the transitive ones.
pub fn grid_relations(quantale: &Quantale, n: usize, values: &[Elem]) -> Vec<Vec<Vec<Elem>>> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let count = values.len().pow(off.len() as u32);
    let mut out = Vec::new();
    for code in 0..count {
        let mut r = vec![vec![quantale.bottom(); n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = quantale.top();
        }
        let mut c = code;
        for &(a, b) in &off {
            r[a][b] = values[c % values.len()];
            c /= values.len();
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| quantale.leq(quantale.mul(r[a][b], r[b][c]), r[a][c])))
        });
        if transitive {
            out.push(r);
        }
    }
    out
}

/// The pointwise-least relation in `candidates` above `r`, if one exists.
pub fn least_above(
    quantale: &Quantale,
    r: &[Vec<Elem>],
    candidates: &[Vec<Vec<Elem>>],
) -> Option<Vec<Vec<Elem>>> {
    let above = |m: &Vec<Vec<Elem>>, base: &[Vec<Elem>]| {
        m.iter()
            .zip(base)
            .all(|(mr, br)| mr.iter().zip(br).all(|(&x, &y)| quantale.leq(y, x)))
    };
    let ups: Vec<&Vec<Vec<Elem>>> = candidates.iter().filter(|m| above(m, r)).collect();
    ups.iter()
        .find(|m| ups.iter().all(|o| above(o, m)))
        .map(|m| (*m).clone())
}
