//! Single-source shortest paths as harmonic flow on the constant sheaf of
//! extended reals in the opposite order.

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale, INF};
use crate::sheaf::{
    Cochain, FlowConfig, FlowSchedule, FlowStatus, FlowTrace, Graph, NetworkSheaf, StepWeights,
    Unweighted, Weighting,
};
use crate::wlattice::UnderlineQ;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Frontier weights: `ω2 = 0`, `ω1(v) = 0` on unsearched vertices and
    /// `∞` elsewhere, extracting one minimal unsearched vertex per round.
    Dijkstra,
    /// The unweighted flow, which relaxes every vertex each round.
    Synchronous,
}

/// The frontier schedule. Ties between minimal vertices go to the lowest
/// index.
pub struct DijkstraSchedule {
    unsearched: Vec<bool>,
    extracted: Vec<usize>,
}

impl DijkstraSchedule {
    pub fn new(n: usize) -> Self {
        DijkstraSchedule {
            unsearched: vec![true; n],
            extracted: Vec::new(),
        }
    }

    pub fn extractions(&self) -> usize {
        self.extracted.len()
    }

    /// Vertices in the order they left the frontier.
    pub fn order(&self) -> &[usize] {
        &self.extracted
    }
}

impl FlowSchedule<Elem> for DijkstraSchedule {
    fn step(&mut self, _t: usize, x: &Cochain<Elem>) -> StepWeights {
        let next = (0..self.unsearched.len())
            .filter(|&v| self.unsearched[v])
            .min_by(|&a, &b| x.0[a].total_cmp(&x.0[b]).then(a.cmp(&b)));
        if let Some(u) = next {
            self.unsearched[u] = false;
            self.extracted.push(u);
        }
        StepWeights {
            weighting: None,
            omega1: self
                .unsearched
                .iter()
                .map(|&open| if open { 0.0 } else { INF })
                .collect(),
            omega2: vec![0.0; self.unsearched.len()],
        }
    }

    fn settled(&self) -> bool {
        self.unsearched.iter().all(|&open| !open)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub distances: Vec<Elem>,
    pub trace: FlowTrace<Elem>,
    /// Frontier extractions performed; zero in synchronous mode.
    pub extractions: usize,
}

pub fn path_sheaf(graph: &Graph) -> Result<NetworkSheaf<UnderlineQ>> {
    NetworkSheaf::constant(graph.clone(), UnderlineQ::op(Quantale::lawvere()))
}

/// Distances from `source` with one nonnegative weight per edge.
pub fn shortest_paths(
    graph: &Graph,
    edge_weights: &[Elem],
    source: usize,
    mode: PathMode,
    config: &FlowConfig,
) -> Result<PathResult> {
    if source >= graph.vertex_count() {
        return Err(Error::InvalidGraph(format!("source {source} out of range")));
    }
    if let Some(w) = edge_weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::InvalidWeighting(format!("negative edge weight {w}")));
    }
    let w = Weighting::symmetric(graph, edge_weights)?;
    let sheaf = path_sheaf(graph)?;
    let n = graph.vertex_count();
    let mut x0 = vec![INF; n];
    x0[source] = 0.0;
    let (trace, extractions) = match mode {
        PathMode::Dijkstra => {
            let mut s = DijkstraSchedule::new(n);
            let tr = sheaf.harmonic_flow(&w, Cochain(x0), config, &mut s)?;
            (tr, s.extractions())
        }
        PathMode::Synchronous => {
            let mut s = Unweighted::new(Quantale::lawvere(), n);
            (sheaf.harmonic_flow(&w, Cochain(x0), config, &mut s)?, 0)
        }
    };
    let distances = match trace.status {
        FlowStatus::Converged(_) => trace.final_cochain().expect("nonempty").0.clone(),
        _ => return Err(Error::Invalid(format!("flow stopped with {:?}", trace.status))),
    };
    Ok(PathResult {
        distances,
        trace,
        extractions,
    })
}

/// `(L_W x)_v = min_{w ∈ N_v} W(v,w) + x_w`.
pub fn path_laplacian_fast(graph: &Graph, w: &Weighting, x: &[Elem]) -> Vec<Elem> {
    (0..graph.vertex_count())
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .map(|&(_, u)| w.get(v, u) + x[u])
                .fold(INF, f64::min)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sat() -> Graph {
        Graph::new(vec!["s".into(), "a".into(), "t".into()], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn path_example_both_modes() {
        for mode in [PathMode::Dijkstra, PathMode::Synchronous] {
            let r = shortest_paths(&sat(), &[1.0, 2.0], 0, mode, &FlowConfig::default()).unwrap();
            assert_eq!(r.distances, vec![0.0, 1.0, 3.0]);
        }
        let r = shortest_paths(&sat(), &[1.0, 2.0], 0, PathMode::Dijkstra, &FlowConfig::default())
            .unwrap();
        assert_eq!(r.extractions, 3);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::new(vec!["s".into()], vec![]).unwrap();
        let r = shortest_paths(&g, &[], 0, PathMode::Dijkstra, &FlowConfig::default()).unwrap();
        assert_eq!(r.distances, vec![0.0]);
        assert_eq!(r.extractions, 1);
    }

    #[test]
    fn unreachable_vertices_stay_infinite() {
        let g = Graph::new(vec!["s".into(), "a".into(), "z".into()], vec![(0, 1)]).unwrap();
        for mode in [PathMode::Dijkstra, PathMode::Synchronous] {
            let r = shortest_paths(&g, &[4.0], 0, mode, &FlowConfig::default()).unwrap();
            assert_eq!(r.distances, vec![0.0, 4.0, INF]);
        }
    }

    #[test]
    fn fast_laplacian_matches_generic() {
        let g = sat();
        let w = Weighting::symmetric(&g, &[1.0, 2.0]).unwrap();
        let x = vec![0.0, INF, INF];
        let sheaf = path_sheaf(&g).unwrap();
        assert_eq!(sheaf.laplacian(&w, &Cochain(x.clone())).unwrap().0, path_laplacian_fast(&g, &w, &x));
        assert_eq!(path_laplacian_fast(&g, &w, &x)[1], 1.0);
    }

    #[test]
    fn negative_weights_are_rejected() {
        assert!(shortest_paths(&sat(), &[1.0, -2.0], 0, PathMode::Dijkstra, &FlowConfig::default()).is_err());
    }
}
