//! Seeded generators for random lattices, functors, diagrams, graphs and
//! sheaves.

use crate::adjunction::synthesize_right_adjoint;
use crate::qcat::{all_pairs, functor_defect, FiniteFunctor, FiniteQCategory, QCategory};
use crate::quantale::{Elem, Quantale, QuantaleKind};
use crate::sheaf::{Graph, NetworkSheaf, Transport, Weighting};
use crate::wlattice::{cartesian_power, WeightedDiagram, WeightedLattice};
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

/// A random diagram with between zero and `max_index` terms.
pub fn random_diagram<O: Clone, R: Rng + ?Sized>(
    rng: &mut R,
    objs: &[O],
    weights: &[Elem],
    max_index: usize,
) -> WeightedDiagram<O> {
    let k = rng.gen_range(0..=max_index);
    WeightedDiagram::new(
        (0..k)
            .map(|_| {
                (
                    objs[rng.gen_range(0..objs.len())].clone(),
                    weights[rng.gen_range(0..weights.len())],
                )
            })
            .collect(),
    )
}

/// A random complete weighted lattice with at most `max_objects` objects,
/// realised as a subset of `Q^k` closed under pointwise meets and
/// cotensors. Identifiers are shuffled, and with some probability an
/// isomorphic copy of one object is added.
pub fn random_lattice<R: Rng + ?Sized>(
    rng: &mut R,
    quantale: Quantale,
    max_objects: usize,
) -> FiniteQCategory {
    let carrier = quantale
        .carrier()
        .expect("random lattices need a finite quantale");
    let k = match quantale.kind() {
        QuantaleKind::Boolean => 3,
        _ => rng.gen_range(2..=3),
    };
    let space = cartesian_power(&carrier, k);
    loop {
        let gens = rng.gen_range(1..=3);
        let mut set: Vec<Vec<Elem>> = vec![vec![quantale.top(); k]];
        for _ in 0..gens {
            set.push(space[rng.gen_range(0..space.len())].clone());
        }
        if let Some(closed) = close(&quantale, &carrier, set, max_objects) {
            let mut objs = closed;
            let dup = objs.len() < max_objects && rng.gen_bool(0.3);
            if dup {
                let i = rng.gen_range(0..objs.len());
                objs.push(objs[i].clone());
            }
            let n = objs.len();
            let mut names: Vec<usize> = (0..n).collect();
            names.shuffle(rng);
            let ids = names.iter().map(|i| format!("o{i}")).collect();
            let hom = objs
                .iter()
                .map(|x| {
                    objs.iter()
                        .map(|y| quantale.meet(x.iter().zip(y).map(|(a, b)| quantale.hom(*a, *b))))
                        .collect()
                })
                .collect();
            return FiniteQCategory::new(quantale, ids, hom).expect("valid by construction");
        }
    }
}

fn close(q: &Quantale, carrier: &[Elem], mut set: Vec<Vec<Elem>>, cap: usize) -> Option<Vec<Vec<Elem>>> {
    set.sort_by(|a, b| a.partial_cmp(b).unwrap());
    set.dedup();
    loop {
        let mut added = Vec::new();
        for a in &set {
            for &w in carrier {
                let c: Vec<Elem> = a.iter().map(|&v| q.hom(w, v)).collect();
                if !set.contains(&c) && !added.contains(&c) {
                    added.push(c);
                }
            }
            for b in &set {
                let m: Vec<Elem> = a.iter().zip(b).map(|(&u, &v)| q.meet2(u, v)).collect();
                if !set.contains(&m) && !added.contains(&m) {
                    added.push(m);
                }
            }
        }
        if added.is_empty() {
            return Some(set);
        }
        set.extend(added);
        if set.len() > cap {
            return None;
        }
    }
}

/// The building blocks of random endofunctors.
#[derive(Clone, Copy, Debug)]
enum Piece {
    Const(usize),
    Id,
    MeetWith(usize),
    JoinWith(usize),
    Tensor(Elem),
    Cotensor(Elem),
}

/// A random Q-functor `L → L` composed of constants, the identity, binary
/// meets and joins with a fixed object, tensors and cotensors.
pub fn random_endofunctor<R: Rng + ?Sized>(rng: &mut R, lat: &FiniteQCategory) -> FiniteFunctor {
    let n = lat.len();
    let weights = lat.quantale().weight_grid();
    let len = rng.gen_range(1..=3);
    let mut f = FiniteFunctor::identity(n);
    for _ in 0..len {
        let piece = match rng.gen_range(0..6) {
            0 => Piece::Const(rng.gen_range(0..n)),
            1 => Piece::Id,
            2 => Piece::MeetWith(rng.gen_range(0..n)),
            3 => Piece::JoinWith(rng.gen_range(0..n)),
            4 => Piece::Tensor(weights[rng.gen_range(0..weights.len())]),
            _ => Piece::Cotensor(weights[rng.gen_range(0..weights.len())]),
        };
        let step = FiniteFunctor {
            map: (0..n).map(|x| apply_piece(lat, piece, x)).collect(),
        };
        f = f.compose(&step);
    }
    f
}

fn apply_piece(lat: &FiniteQCategory, piece: Piece, x: usize) -> usize {
    let r = match piece {
        Piece::Const(a) => Ok(a),
        Piece::Id => Ok(x),
        Piece::MeetWith(a) => lat.crisp_meet(&[x, a]),
        Piece::JoinWith(a) => lat.crisp_join(&[x, a]),
        Piece::Tensor(w) => lat.tensor(w, &x),
        Piece::Cotensor(w) => lat.cotensor(w, &x),
    };
    r.expect("random lattices are complete")
}

/// A connected simple graph on `n` vertices: a random spanning tree plus
/// `extra` random chords.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> Graph {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let v = order[i];
        edges.push((parent.min(v), parent.max(v)));
    }
    let max_edges = n * n.saturating_sub(1) / 2;
    let mut tries = 0;
    while edges.len() < (n - 1 + extra).min(max_edges) && tries < 20 * (extra + 1) {
        tries += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    Graph::new(ids, edges).expect("generated graph is simple")
}

/// Enumerates every map `dom → cod` that is a Q-functor with a crisp right
/// adjoint, paired with that adjoint.
pub fn crisp_left_adjoints(
    dom: &FiniteQCategory,
    cod: &FiniteQCategory,
) -> Vec<(FiniteFunctor, FiniteFunctor)> {
    let (n, m) = (dom.len(), cod.len());
    let q = *dom.quantale();
    let pairs = all_pairs(&(0..n).collect::<Vec<_>>());
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    loop {
        let f = FiniteFunctor { map: map.clone() };
        if q.eq(functor_defect(dom, cod, |x| f.apply(*x), &pairs), q.unit()) {
            if let Ok((g, d)) = synthesize_right_adjoint(dom, cod, &f) {
                if q.eq(d, q.unit()) {
                    out.push((f, g));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// A random sheaf on a path or triangle with 2 or 3 vertices, random
/// finite lattice stalks and crisp restriction/corestriction pairs.
pub fn random_crisp_sheaf<R: Rng + ?Sized>(
    rng: &mut R,
    quantale: Quantale,
    max_objects: usize,
) -> (NetworkSheaf<FiniteQCategory>, Weighting) {
    let n = rng.gen_range(2..=3);
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = match n {
        2 => vec![(0, 1)],
        _ if rng.gen_bool(0.5) => vec![(0, 1), (1, 2)],
        _ => vec![(0, 1), (1, 2), (0, 2)],
    };
    let graph = Graph::new(ids, edges).expect("fixed shapes are simple");
    let vstalks: Vec<FiniteQCategory> = (0..n)
        .map(|_| random_lattice(rng, quantale, max_objects))
        .collect();
    let estalks: Vec<FiniteQCategory> = (0..graph.edge_count())
        .map(|_| random_lattice(rng, quantale, max_objects))
        .collect();
    let mut maps = Vec::new();
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        let pick = |rng: &mut R, v: usize| -> [Transport<usize>; 2] {
            let cands = crisp_left_adjoints(&vstalks[v], &estalks[e]);
            let (f, g) = cands[rng.gen_range(0..cands.len())].clone();
            [
                Arc::new(move |x: &usize| f.apply(*x)),
                Arc::new(move |y: &usize| g.apply(*y)),
            ]
        };
        maps.push([pick(rng, a), pick(rng, b)]);
    }
    let sheaf = NetworkSheaf::new(graph, vstalks, estalks, maps).expect("consistent sheaf");
    let weights = quantale.weight_grid();
    let w = Weighting::from_fn(sheaf.graph(), |_, _| weights[rng.gen_range(0..weights.len())]);
    (sheaf, w)
}
