//! Synchronisation of max-plus discrete-event systems.

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale, INF};
use crate::report::LawReport;
use crate::sheaf::{Cochain, FlowConfig, FlowTrace, Graph, NetworkSheaf, Transport, Weighting};
use crate::wlattice::PresheafPower;
use std::sync::Arc;

/// An `m × m` delay matrix with entries in `[0, ∞]`.
pub type Matrix = Vec<Vec<Elem>>;

/// Event systems on the vertices of a graph, coupled by a weighting.
#[derive(Clone, Debug, PartialEq)]
pub struct DesSystem {
    pub m: usize,
    pub delays: Vec<Matrix>,
    pub graph: Graph,
    pub weighting: Weighting,
}

impl DesSystem {
    pub fn new(m: usize, delays: Vec<Matrix>, graph: Graph, weighting: Weighting) -> Result<Self> {
        if delays.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                found: delays.len(),
            });
        }
        for (v, a) in delays.iter().enumerate() {
            check_matrix(a, m).map_err(|e| match e {
                Error::Parse { path, message } => {
                    Error::parse(format!("delays[{v}]{path}"), message)
                }
                other => other,
            })?;
        }
        Ok(DesSystem {
            m,
            delays,
            graph,
            weighting,
        })
    }

    pub fn stalk(&self) -> PresheafPower {
        PresheafPower::op(Quantale::lawvere(), self.m)
    }
}

fn check_matrix(a: &Matrix, m: usize) -> Result<()> {
    if a.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.len(),
        });
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if v.is_nan() || v < 0.0 {
                return Err(Error::parse(
                    format!("[{i}][{j}]"),
                    format!("delay must be nonnegative or inf, got {v}"),
                ));
            }
        }
    }
    Ok(())
}

/// `Fx(j) = max_i x(i) + A(i, j)`.
pub fn maxplus_apply(a: &Matrix, x: &[Elem]) -> Result<Vec<Elem>> {
    if a.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: x.len(),
        });
    }
    let cols = a.first().map_or(0, |r| r.len());
    Ok((0..cols)
        .map(|j| {
            x.iter()
                .zip(a)
                .map(|(xi, row)| xi + row[j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect())
}

/// `Gy(i) = min_j (y(j) − A(i, j))₊`, with `(y − ∞)₊ = 0` and `(∞ − a)₊ = ∞`
/// for finite `a`.
pub fn minplus_transpose_apply(a: &Matrix, y: &[Elem]) -> Result<Vec<Elem>> {
    let r = Quantale::lawvere();
    let cols = a.first().map_or(0, |row| row.len());
    if cols != y.len() {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: y.len(),
        });
    }
    Ok(a.iter()
        .map(|row| row.iter().zip(y).map(|(&aij, &yj)| r.hom(aij, yj)).fold(INF, f64::min))
        .collect())
}

/// Presheaf-power stalks in the opposite order, max-plus restrictions and
/// their min-plus transposes as corestrictions.
pub fn des_sheaf(sys: &DesSystem) -> Result<NetworkSheaf<PresheafPower>> {
    let stalk = sys.stalk();
    let mut maps = Vec::with_capacity(sys.graph.edge_count());
    for &(a, b) in sys.graph.edges() {
        let pair = |v: usize| -> [Transport<Vec<Elem>>; 2] {
            let fa = sys.delays[v].clone();
            let ga = sys.delays[v].clone();
            [
                Arc::new(move |x: &Vec<Elem>| maxplus_apply(&fa, x).expect("stalk dimension")),
                Arc::new(move |y: &Vec<Elem>| minplus_transpose_apply(&ga, y).expect("stalk dimension")),
            ]
        };
        maps.push([pair(a), pair(b)]);
    }
    NetworkSheaf::new(
        sys.graph.clone(),
        vec![stalk; sys.graph.vertex_count()],
        vec![stalk; sys.graph.edge_count()],
        maps,
    )
}

/// Which closed-form Laplacian to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `min_w W(v,w) + min_j (A_v(i',j) − max_i {A_w(i,j) + x_w(i)})₊`, as
    /// commonly displayed.
    Displayed,
    /// The same with the subtraction the transport composite produces:
    /// `min_w W(v,w) + min_j (max_i {A_w(i,j) + x_w(i)} − A_v(i',j))₊`.
    Transport,
}

pub fn des_laplacian_closed_form(
    sys: &DesSystem,
    x: &Cochain<Vec<Elem>>,
    form: ClosedForm,
) -> Result<Cochain<Vec<Elem>>> {
    let r = Quantale::lawvere();
    let mut out = Vec::with_capacity(sys.graph.vertex_count());
    for v in 0..sys.graph.vertex_count() {
        let av = &sys.delays[v];
        let mut row = vec![INF; sys.m];
        for &(_, w) in sys.graph.neighbors(v) {
            let fw = maxplus_apply(&sys.delays[w], &x.0[w])?;
            let wt = sys.weighting.get(v, w);
            for (ip, slot) in row.iter_mut().enumerate() {
                let inner = (0..sys.m)
                    .map(|j| match form {
                        ClosedForm::Displayed => r.hom(fw[j], av[ip][j]),
                        ClosedForm::Transport => r.hom(av[ip][j], fw[j]),
                    })
                    .fold(INF, f64::min);
                *slot = slot.min(wt + inner);
            }
        }
        out.push(row);
    }
    Ok(Cochain(out))
}

/// Compares both closed forms with the generic Laplacian on the samples.
/// A mismatch of the displayed form is reported with its witness.
pub fn closed_form_report(sys: &DesSystem, samples: &[Cochain<Vec<Elem>>]) -> Result<LawReport> {
    let sheaf = des_sheaf(sys)?;
    let r = Quantale::lawvere();
    let mut rep = LawReport::new("closed-form Laplacian");
    for x in samples {
        let generic = sheaf.laplacian(&sys.weighting, x)?;
        for form in [ClosedForm::Displayed, ClosedForm::Transport] {
            let closed = des_laplacian_closed_form(sys, x, form)?;
            let same = generic
                .0
                .iter()
                .zip(&closed.0)
                .all(|(a, b)| a.iter().zip(b).all(|(p, q)| r.eq(*p, *q)));
            let law = match form {
                ClosedForm::Displayed => "displayed closed form matches",
                ClosedForm::Transport => "transport closed form matches",
            };
            rep.check(law, same, || {
                format!("x={:?}: generic {:?}, closed {:?}", x.0, generic.0, closed.0)
            });
        }
    }
    Ok(rep)
}

/// Result of evaluating the synchronisation inequalities directly.
#[derive(Clone, Debug, PartialEq)]
pub struct SyncCheck {
    pub ok: bool,
    /// Least `W − lhs` over all edges and both inequalities.
    pub min_slack: Elem,
}

/// For every edge `{v, w}`:
/// `min_j (F_w x_w(j) − F_v x_v(j))₊ ≤ W(v,w)` and
/// `min_j (F_v x_v(j) − F_w x_w(j))₊ ≤ W(w,v)`.
pub fn sync_inequalities(sys: &DesSystem, x: &Cochain<Vec<Elem>>, tolerance: f64) -> Result<SyncCheck> {
    let mut min_slack = INF;
    for &(v, w) in sys.graph.edges() {
        let fv = maxplus_apply(&sys.delays[v], &x.0[v])?;
        let fw = maxplus_apply(&sys.delays[w], &x.0[w])?;
        let lhs1 = (0..sys.m).map(|j| pos(fw[j] - fv[j])).fold(INF, f64::min);
        let lhs2 = (0..sys.m).map(|j| pos(fv[j] - fw[j])).fold(INF, f64::min);
        for (lhs, bound) in [(lhs1, sys.weighting.get(v, w)), (lhs2, sys.weighting.get(w, v))] {
            let slack = if bound == INF { INF } else { bound - lhs };
            min_slack = min_slack.min(slack);
        }
    }
    Ok(SyncCheck {
        ok: min_slack >= -tolerance,
        min_slack,
    })
}

fn pos(z: f64) -> f64 {
    if z.is_nan() {
        0.0
    } else {
        z.max(0.0)
    }
}

/// Unweighted flow of the system from `x0` (all-zero timings if `None`).
pub fn des_flow(
    sys: &DesSystem,
    x0: Option<Cochain<Vec<Elem>>>,
    config: &FlowConfig,
) -> Result<FlowTrace<Vec<Elem>>> {
    let sheaf = des_sheaf(sys)?;
    let x0 = x0.unwrap_or_else(|| Cochain(vec![vec![0.0; sys.m]; sys.graph.vertex_count()]));
    sheaf.unweighted_flow(&sys.weighting, x0, config)
}
