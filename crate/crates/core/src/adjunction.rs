//! Fuzzy adjunctions between Q-categories.

use crate::error::Result;
use crate::qcat::{FiniteFunctor, FiniteQCategory, QCategory};
use crate::quantale::Elem;
use crate::report::LawReport;
use crate::wlattice::{WeightedDiagram, WeightedLattice};
use std::sync::Arc;

pub type ObjMap<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;

/// A pair of maps together with the level at which they were measured to be
/// adjoint.
#[derive(Clone)]
pub struct FuzzyAdjunction<A, B> {
    pub left: ObjMap<A, B>,
    pub right: ObjMap<B, A>,
    pub level: Elem,
}

impl<A, B> FuzzyAdjunction<A, B> {
    /// Measures the adjunction level of `left ⊣ right` on the given samples.
    pub fn measure<C, D>(
        c: &C,
        d: &D,
        left: ObjMap<A, B>,
        right: ObjMap<B, A>,
        xs: &[A],
        ys: &[B],
    ) -> Self
    where
        C: QCategory<Obj = A> + ?Sized,
        D: QCategory<Obj = B> + ?Sized,
    {
        let level = adjunction_defect(c, d, |x| left(x), |y| right(y), xs, ys);
        FuzzyAdjunction { left, right, level }
    }
}

impl<A, B> std::fmt::Debug for FuzzyAdjunction<A, B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FuzzyAdjunction")
            .field("level", &self.level)
            .finish_non_exhaustive()
    }
}

/// The largest `q` with `hom_D(Fx, y) ≈_q hom_C(x, Gy)` on every sampled pair.
pub fn adjunction_defect<C, D, F, G>(c: &C, d: &D, f: F, g: G, xs: &[C::Obj], ys: &[D::Obj]) -> Elem
where
    C: QCategory + ?Sized,
    D: QCategory + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
    G: Fn(&D::Obj) -> C::Obj,
{
    let q = c.quantale();
    let fxs: Vec<D::Obj> = xs.iter().map(&f).collect();
    let gys: Vec<C::Obj> = ys.iter().map(&g).collect();
    let mut acc = q.top();
    for (x, fx) in xs.iter().zip(&fxs) {
        for (y, gy) in ys.iter().zip(&gys) {
            let a = d.hom(fx, y);
            let b = c.hom(x, gy);
            acc = q.meet2(acc, q.meet2(q.hom(a, b), q.hom(b, a)));
        }
    }
    acc
}

/// Checks `hom(x, GFx) ⪰ q` and `hom(FGy, y) ⪰ q`, and that this criterion
/// agrees with `adjunction_defect ⪰ q` on the sample.
pub fn check_unit_counit<C, D, F, G>(
    c: &C,
    d: &D,
    f: F,
    g: G,
    level: Elem,
    xs: &[C::Obj],
    ys: &[D::Obj],
) -> LawReport
where
    C: QCategory + ?Sized,
    D: QCategory + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
    G: Fn(&D::Obj) -> C::Obj,
{
    let q = c.quantale();
    let mut rep = LawReport::new("unit-counit criterion");
    let mut all = true;
    for x in xs {
        let h = c.hom(x, &g(&f(x)));
        all &= rep.check("unit", q.leq(level, h), || {
            format!("x={}: hom(x, GFx) = {}", c.label(x), q.format(h))
        });
    }
    for y in ys {
        let h = d.hom(&f(&g(y)), y);
        all &= rep.check("counit", q.leq(level, h), || {
            format!("y={}: hom(FGy, y) = {}", d.label(y), q.format(h))
        });
    }
    let defect = adjunction_defect(c, d, &f, &g, xs, ys);
    rep.check("agrees with defect", all == q.leq(level, defect), || {
        format!(
            "unit-counit {} but defect {} at level {}",
            if all { "holds" } else { "fails" },
            q.format(defect),
            q.format(level)
        )
    });
    rep
}

/// Given a crisp pair `F ⊣ G` and `F̃ ≈_q F`, checks `F̃ ⊣_q G` on the sample.
/// Unmet preconditions are reported as such.
#[allow(clippy::too_many_arguments)]
pub fn perturbed_adjunction<C, D, F, G, H>(
    c: &C,
    d: &D,
    f: F,
    g: G,
    ftilde: H,
    level: Elem,
    xs: &[C::Obj],
    ys: &[D::Obj],
) -> LawReport
where
    C: QCategory + ?Sized,
    D: QCategory + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
    G: Fn(&D::Obj) -> C::Obj,
    H: Fn(&C::Obj) -> D::Obj,
{
    let q = c.quantale();
    let mut rep = LawReport::new("perturbed adjunction");
    let crisp = adjunction_defect(c, d, &f, &g, xs, ys);
    rep.check("precondition: crisp pair", q.eq(crisp, q.unit()), || {
        format!("defect of F ⊣ G is {}", q.format(crisp))
    });
    for x in xs {
        let (fx, tx) = (f(x), ftilde(x));
        rep.check("precondition: F ≈_q F̃", d.approx_q(&fx, &tx, level), || {
            format!("x={}: Fx={}, F̃x={}", c.label(x), d.label(&fx), d.label(&tx))
        });
    }
    let got = adjunction_defect(c, d, &ftilde, &g, xs, ys);
    rep.check("perturbed pair is q-adjoint", q.leq(level, got), || {
        format!("defect {} below {}", q.format(got), q.format(level))
    });
    rep
}

/// For `F ⊣_q G` checks `F(⋁^W S) ≈_{q·q} ⋁^W FS`, `G(⋀^W T) ≈_{q·q} ⋀^W GT`
/// and the one-sided bound `⋁^W FS ⪯_q F(⋁^W S)`.
#[allow(clippy::too_many_arguments)]
pub fn adjoint_limit_interchange<C, D, F, G>(
    c: &C,
    d: &D,
    f: F,
    g: G,
    level: Elem,
    join_diagram: &WeightedDiagram<C::Obj>,
    meet_diagram: &WeightedDiagram<D::Obj>,
) -> Result<LawReport>
where
    C: WeightedLattice + ?Sized,
    D: WeightedLattice + ?Sized,
    F: Fn(&C::Obj) -> D::Obj,
    G: Fn(&D::Obj) -> C::Obj,
{
    let q = c.quantale();
    let sq = q.mul(level, level);
    let mut rep = LawReport::new("adjoints and weighted limits");

    let lhs = f(&c.weighted_join(join_diagram)?);
    let rhs = d.weighted_join(&join_diagram.map(&f))?;
    rep.check("left adjoint preserves weighted joins", d.approx_q(&lhs, &rhs, sq), || {
        format!("F(⋁S) = {}, ⋁FS = {}", d.label(&lhs), d.label(&rhs))
    });
    rep.check("colimit inequality", d.hom_leq_q(&rhs, &lhs, level), || {
        format!("hom(⋁FS, F⋁S) = {}", q.format(d.hom(&rhs, &lhs)))
    });

    let lhs = g(&d.weighted_meet(meet_diagram)?);
    let rhs = c.weighted_meet(&meet_diagram.map(&g))?;
    rep.check("right adjoint preserves weighted meets", c.approx_q(&lhs, &rhs, sq), || {
        format!("G(⋀T) = {}, ⋀GT = {}", c.label(&lhs), c.label(&rhs))
    });
    Ok(rep)
}

/// Builds `G(y) = ⋁ F⁻¹(↓y)` on finite lattices and returns it with the
/// adjunction defect it achieves over all objects. Joins are resolved with
/// lowest-identifier representatives, which quotients isomorphic objects.
pub fn synthesize_right_adjoint(
    c: &FiniteQCategory,
    d: &FiniteQCategory,
    f: &FiniteFunctor,
) -> Result<(FiniteFunctor, Elem)> {
    let one = c.quantale().unit();
    let mut map = Vec::with_capacity(d.len());
    for y in 0..d.len() {
        let below: Vec<usize> = (0..c.len())
            .filter(|x| d.hom_leq_q(&f.apply(*x), &y, one))
            .collect();
        map.push(c.crisp_join(&below)?);
    }
    let g = FiniteFunctor { map };
    let xs: Vec<usize> = (0..c.len()).collect();
    let ys: Vec<usize> = (0..d.len()).collect();
    let defect = adjunction_defect(c, d, |x| f.apply(*x), |y| g.apply(*y), &xs, &ys);
    Ok((g, defect))
}
