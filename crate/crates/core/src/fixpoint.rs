//! Prefix, suffix and stable points of endofunctors on enumerable weighted
//! lattices, and a checker for their completeness.

use crate::error::Result;
use crate::gen;
use crate::qcat::{all_pairs, functor_defect, FiniteQCategory, QCategory};
use crate::quantale::Elem;
use crate::report::LawReport;
use crate::wlattice::{check_universal_property_on, LimitKind, WeightedLattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct FixpointQuery<'a, L: WeightedLattice + ?Sized> {
    pub lattice: &'a L,
    pub endo: &'a dyn Fn(&L::Obj) -> L::Obj,
    pub p: Elem,
    pub q: Elem,
}

/// Tuning for [`FixpointQuery::verify_tarski`].
#[derive(Clone, Debug)]
pub struct TarskiConfig {
    pub seed: u64,
    /// Random diagrams drawn per closure and completeness check.
    pub diagrams: usize,
    /// Largest diagram index size.
    pub max_index: usize,
}

impl Default for TarskiConfig {
    fn default() -> Self {
        TarskiConfig {
            seed: 0,
            diagrams: 8,
            max_index: 4,
        }
    }
}

impl<'a, L: WeightedLattice + ?Sized> FixpointQuery<'a, L> {
    /// All `x` with `x ⪯_q Lx`.
    pub fn suffix_points(&self) -> Result<Vec<L::Obj>> {
        let objs = self.lattice.objects()?;
        Ok(objs
            .into_iter()
            .filter(|x| self.lattice.hom_leq_q(x, &(self.endo)(x), self.q))
            .collect())
    }

    /// All `x` with `Lx ⪯_p x`.
    pub fn prefix_points(&self) -> Result<Vec<L::Obj>> {
        let objs = self.lattice.objects()?;
        Ok(objs
            .into_iter()
            .filter(|x| self.lattice.hom_leq_q(&(self.endo)(x), x, self.p))
            .collect())
    }

    /// Objects that are both `p`-prefix and `q`-suffix points.
    pub fn stable_points(&self) -> Result<Vec<L::Obj>> {
        let pre = self.prefix_points()?;
        Ok(self
            .suffix_points()?
            .into_iter()
            .filter(|x| pre.contains(x))
            .collect())
    }

    /// Checks that the three point sets are nonempty, that suffix points are
    /// closed under ambient weighted joins and prefix points under weighted
    /// meets, that the endofunctor restricts to each set, and that each full
    /// subcategory is itself complete, by search inside the subset.
    pub fn verify_tarski(&self, cfg: &TarskiConfig) -> Result<LawReport> {
        let lat = self.lattice;
        let qu = *lat.quantale();
        let mut rep = LawReport::new("fixed-point completeness");
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let objs = lat.objects()?;
        let weights = qu.weight_grid();

        let defect = functor_defect(lat, lat, self.endo, &all_pairs(&objs));
        rep.check("precondition: endofunctor", qu.eq(defect, qu.unit()), || {
            format!("functor defect {}", qu.format(defect))
        });

        let suffix = self.suffix_points()?;
        let prefix = self.prefix_points()?;
        let stable = self.stable_points()?;
        for (name, set) in [("suffix", &suffix), ("prefix", &prefix), ("stable", &stable)] {
            rep.check("nonempty", !set.is_empty(), || format!("{name} points empty"));
        }
        if suffix.is_empty() || prefix.is_empty() {
            return Ok(rep);
        }

        for _ in 0..cfg.diagrams {
            let d = gen::random_diagram(&mut rng, &suffix, &weights, cfg.max_index);
            let j = lat.weighted_join(&d)?;
            rep.check("suffix points closed under weighted joins", suffix.contains(&j), || {
                format!("join {} of {:?}", lat.label(&j), label_diagram(lat, &d.terms))
            });
            let d = gen::random_diagram(&mut rng, &prefix, &weights, cfg.max_index);
            let m = lat.weighted_meet(&d)?;
            rep.check("prefix points closed under weighted meets", prefix.contains(&m), || {
                format!("meet {} of {:?}", lat.label(&m), label_diagram(lat, &d.terms))
            });
        }

        for (name, set) in [("suffix", &suffix), ("prefix", &prefix), ("stable", &stable)] {
            for x in set.iter() {
                let lx = (self.endo)(x);
                rep.check("endofunctor restricts", set.contains(&lx), || {
                    format!("{name}: L({}) = {}", lat.label(x), lat.label(&lx))
                });
            }
            if !set.is_empty() {
                let sub = subcategory(lat, set);
                rep.merge(check_complete(&sub, &weights, &mut rng, cfg, name));
            }
        }
        Ok(rep)
    }
}

fn label_diagram<L: QCategory + ?Sized>(lat: &L, terms: &[(L::Obj, Elem)]) -> Vec<String> {
    terms
        .iter()
        .map(|(s, w)| format!("{}@{}", lat.label(s), lat.quantale().format(*w)))
        .collect()
}

/// The full subcategory on `objs` as a hom matrix. Labels are made unique by
/// position when the lattice reuses them.
pub fn subcategory<L: QCategory + ?Sized>(lat: &L, objs: &[L::Obj]) -> FiniteQCategory {
    let mut ids: Vec<String> = objs.iter().map(|x| lat.label(x)).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != ids.len() {
        ids = ids
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{i:03}:{s}"))
            .collect();
    }
    let hom = objs
        .iter()
        .map(|x| objs.iter().map(|y| lat.hom(x, y)).collect())
        .collect();
    FiniteQCategory::new(*lat.quantale(), ids, hom).expect("homs come from the lattice")
}

/// Exhaustive completeness check of a finite category: every tensor and
/// cotensor over the weight grid, binary and empty crisp meets and joins,
/// and random weighted diagrams verified against every object.
pub fn check_complete(
    sub: &FiniteQCategory,
    weights: &[Elem],
    rng: &mut ChaCha8Rng,
    cfg: &TarskiConfig,
    name: &str,
) -> LawReport {
    let mut rep = LawReport::new(format!("completeness of {name} points"));
    let n = sub.len();
    let objs: Vec<usize> = (0..n).collect();
    for &w in weights {
        for y in 0..n {
            rep.check("cotensor exists", sub.cotensor(w, &y).is_ok(), || {
                format!("{name}: {w} ⋔ {}", sub.id(y))
            });
            rep.check("tensor exists", sub.tensor(w, &y).is_ok(), || {
                format!("{name}: {w} ⊗ {}", sub.id(y))
            });
        }
    }
    rep.check("top exists", sub.crisp_meet(&[]).is_ok(), || name.to_string());
    rep.check("bottom exists", sub.crisp_join(&[]).is_ok(), || name.to_string());
    for a in 0..n {
        for b in a..n {
            rep.check("binary meet exists", sub.crisp_meet(&[a, b]).is_ok(), || {
                format!("{name}: {} ∧ {}", sub.id(a), sub.id(b))
            });
            rep.check("binary join exists", sub.crisp_join(&[a, b]).is_ok(), || {
                format!("{name}: {} ∨ {}", sub.id(a), sub.id(b))
            });
        }
    }
    let q = *sub.quantale();
    for _ in 0..cfg.diagrams {
        let d = gen::random_diagram(rng, &objs, weights, cfg.max_index);
        for (kind, cand) in [
            (LimitKind::Meet, sub.weighted_meet(&d)),
            (LimitKind::Join, sub.weighted_join(&d)),
        ] {
            match cand {
                Ok(c) => {
                    let r = check_universal_property_on(sub, &objs, &d, &c, kind, &q)
                        .expect("finite category");
                    rep.merge(r);
                }
                Err(e) => rep.fail("weighted limit exists", format!("{name}: {e}")),
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;

    fn boolean_lattice(rel: &[&[u8]]) -> FiniteQCategory {
        let n = rel.len();
        FiniteQCategory::new(
            Quantale::boolean(),
            (0..n).map(|i| format!("e{i}")).collect(),
            rel.iter().map(|r| r.iter().map(|&b| b as f64).collect()).collect(),
        )
        .unwrap()
    }

    // b < a1, a2, a3 < t (the five-element lattice M3)
    fn m3() -> FiniteQCategory {
        boolean_lattice(&[
            &[1, 1, 1, 1, 1],
            &[0, 1, 0, 0, 1],
            &[0, 0, 1, 0, 1],
            &[0, 0, 0, 1, 1],
            &[0, 0, 0, 0, 1],
        ])
    }

    #[test]
    fn identity_makes_everything_stable() {
        let l = m3();
        let id = |x: &usize| *x;
        let fq = FixpointQuery { lattice: &l, endo: &id, p: 1.0, q: 1.0 };
        assert_eq!(fq.suffix_points().unwrap().len(), 5);
        assert_eq!(fq.stable_points().unwrap().len(), 5);
        assert!(fq.verify_tarski(&TarskiConfig::default()).unwrap().passed());
    }

    #[test]
    fn constant_top_suffix_points_are_everything() {
        let l = m3();
        let top = |_: &usize| 4usize;
        let fq = FixpointQuery { lattice: &l, endo: &top, p: 1.0, q: 1.0 };
        assert_eq!(fq.suffix_points().unwrap().len(), 5);
        assert_eq!(fq.prefix_points().unwrap(), vec![4]);
    }

    #[test]
    fn tabulated_endofunctor_matches_brute_force() {
        let l = m3();
        let table = [1usize, 1, 4, 1, 4];
        let f = |x: &usize| table[*x];
        let fq = FixpointQuery { lattice: &l, endo: &f, p: 1.0, q: 1.0 };
        // x ⪯ f(x) by hand: b ⪯ a1, a1 ⪯ a1, a2 ⪯ t, a3 ⋠ a1, t ⪯ t
        assert_eq!(fq.suffix_points().unwrap(), vec![0, 1, 2, 4]);
        assert_eq!(fq.prefix_points().unwrap(), vec![1, 4]);
        assert!(fq.verify_tarski(&TarskiConfig::default()).unwrap().passed());
    }

    #[test]
    fn closure_operator_prefix_points_are_closed_elements() {
        // on M3, send a1 and a2 to t; a3 and the ends stay
        let l = m3();
        let table = [0usize, 4, 4, 3, 4];
        let f = |x: &usize| table[*x];
        let fq = FixpointQuery { lattice: &l, endo: &f, p: 1.0, q: 1.0 };
        assert_eq!(fq.prefix_points().unwrap(), vec![0, 3, 4]);
    }

    #[test]
    fn bottom_level_admits_everything() {
        let l = m3();
        let table = [1usize, 1, 4, 1, 4];
        let f = |x: &usize| table[*x];
        let fq = FixpointQuery { lattice: &l, endo: &f, p: 0.0, q: 0.0 };
        assert_eq!(fq.stable_points().unwrap().len(), 5);
    }
}
