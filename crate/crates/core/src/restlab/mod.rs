//! Verification laboratory for the restriction of `R_{T,theta}` from `GL2`
//! to `SL2`. Multiplicities of restricted irreducibles are handled by the
//! Clifford-theory analyzer in a submodule.

mod clifford;
mod suite;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use clifford::{
    clifford_analyze, cuspidal_report, gl2_irreducibles, index_census, regularity_prediction,
    restriction_census, restriction_report, CensusSummary, IndexCensus, Irreducible, MultiplicityCandidate,
    RestrictionReport,
};
pub use suite::{
    run_suite, Failure, Suite, SuiteResult, VerificationSummary, ISO_SAMPLES, ISO_SEED,
};

use crate::classfn::ClassFunction;
use crate::dlchar::{eps_sign, DlEvaluator, GreenEntry, GreenTable};
use crate::error::Result;
use crate::ffield::FieldTower;
use crate::group::{GroupElement, GroupKind, GroupModel};
use crate::torus::{CharIndex, TorusCharacter, TorusDatum, TorusKind};

/// Persistent backing for expensive model data (class partitions and Green
/// tables). Implementations must return exactly what was stored.
pub trait ModelStore: Send + Sync {
    fn load_classes(&self, q: u32, kind: GroupKind) -> Option<Vec<u32>>;
    fn store_classes(&self, q: u32, kind: GroupKind, class_of: &[u32]);
    fn load_green(&self, q: u32, kind: GroupKind) -> Option<Vec<GreenEntry>>;
    fn store_green(&self, q: u32, kind: GroupKind, entries: &[GreenEntry]);
}

type GroupKey = (u32, GroupKind);

/// Memoizing source of groups and everything derived from them.
#[derive(Default)]
pub struct Lab {
    store: Option<Box<dyn ModelStore>>,
    towers: Mutex<HashMap<u32, Arc<FieldTower>>>,
    groups: Mutex<HashMap<GroupKey, Arc<GroupModel>>>,
    greens: Mutex<HashMap<GroupKey, Arc<GreenTable>>>,
    evaluators: Mutex<HashMap<(u32, u32, TorusKind), Arc<DlEvaluator>>>,
}

impl Lab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_store(store: Box<dyn ModelStore>) -> Self {
        Lab {
            store: Some(store),
            ..Self::default()
        }
    }

    pub fn tower(&self, q: u32) -> Result<Arc<FieldTower>> {
        if let Some(t) = self.towers.lock().unwrap().get(&q) {
            return Ok(t.clone());
        }
        let t = Arc::new(FieldTower::with_order(q)?);
        Ok(self.towers.lock().unwrap().entry(q).or_insert(t).clone())
    }

    pub fn group(&self, q: u32, kind: GroupKind) -> Result<Arc<GroupModel>> {
        if let Some(g) = self.groups.lock().unwrap().get(&(q, kind)) {
            return Ok(g.clone());
        }
        let tower = self.tower(q)?;
        let cached = self.store.as_ref().and_then(|s| s.load_classes(q, kind));
        let g = match cached.map(|c| GroupModel::from_class_assignment(tower.clone(), kind, c)) {
            Some(Ok(g)) => g,
            other => {
                if let Some(Err(e)) = other {
                    log::warn!("discarding cached classes for q={q}: {e}");
                }
                let g = GroupModel::build(tower, kind)?;
                if let Some(s) = &self.store {
                    s.store_classes(q, kind, g.class_assignment());
                }
                g
            }
        };
        let g = Arc::new(g);
        Ok(self
            .groups
            .lock()
            .unwrap()
            .entry((q, kind))
            .or_insert(g)
            .clone())
    }

    pub fn gl2(&self, q: u32) -> Result<Arc<GroupModel>> {
        self.group(q, GroupKind::DetSubgroup { d_order: q.saturating_sub(1) })
    }

    pub fn sl2(&self, q: u32) -> Result<Arc<GroupModel>> {
        self.group(q, GroupKind::DetSubgroup { d_order: 1 })
    }

    pub fn borel(&self, q: u32) -> Result<Arc<GroupModel>> {
        self.group(q, GroupKind::Borel)
    }

    pub fn green(&self, q: u32, kind: GroupKind) -> Result<Arc<GreenTable>> {
        if let Some(t) = self.greens.lock().unwrap().get(&(q, kind)) {
            return Ok(t.clone());
        }
        let g = self.group(q, kind)?;
        let cached = self.store.as_ref().and_then(|s| s.load_green(q, kind));
        let table = match cached.map(|e| GreenTable::from_entries(&g, e)) {
            Some(Ok(t)) => t,
            other => {
                if let Some(Err(e)) = other {
                    log::warn!("discarding cached Green table for q={q}: {e}");
                }
                let t = GreenTable::build(&g)?;
                if let Some(s) = &self.store {
                    s.store_green(q, kind, &t.entries());
                }
                t
            }
        };
        let table = Arc::new(table);
        Ok(self
            .greens
            .lock()
            .unwrap()
            .entry((q, kind))
            .or_insert(table)
            .clone())
    }

    /// The standard torus of the given kind inside the determinant subgroup
    /// with `|D| = d_order`.
    pub fn torus(&self, q: u32, d_order: u32, kind: TorusKind) -> Result<TorusDatum> {
        let g = self.gl2(q)?;
        let full = TorusDatum::make(&g, kind)?;
        if d_order == q - 1 {
            Ok(full)
        } else {
            full.intersect(&*self.group(q, GroupKind::DetSubgroup { d_order })?)
        }
    }

    /// Evaluator for `R_{T,theta}` on `GL2` (`d_order = q - 1`) or `SL2`
    /// (`d_order = 1`).
    pub fn evaluator(&self, q: u32, d_order: u32, kind: TorusKind) -> Result<Arc<DlEvaluator>> {
        if let Some(e) = self.evaluators.lock().unwrap().get(&(q, d_order, kind)) {
            return Ok(e.clone());
        }
        let gkind = GroupKind::DetSubgroup { d_order };
        let g = self.group(q, gkind)?;
        let green = self.green(q, gkind)?;
        let torus = self.torus(q, d_order, kind)?;
        let ev = Arc::new(DlEvaluator::new(g, torus, &green)?);
        Ok(self
            .evaluators
            .lock()
            .unwrap()
            .entry((q, d_order, kind))
            .or_insert(ev)
            .clone())
    }

    /// `R_{T,theta}` on `GL2(F_q)`.
    pub fn gl2_character(&self, q: u32, index: CharIndex) -> Result<ClassFunction> {
        let ev = self.evaluator(q, q - 1, index.kind())?;
        ev.evaluate(&ev.torus().character(index)?)
    }
}

/// `(T ∩ H, theta|_(T ∩ H))`.
pub fn restrict_datum(
    torus: &TorusDatum,
    theta: &TorusCharacter,
    h: &GroupModel,
) -> Result<(TorusDatum, TorusCharacter)> {
    let t_h = torus.intersect(h)?;
    let theta_h = t_h.restrict_character(theta)?;
    Ok((t_h, theta_h))
}

/// Max over `SL2` classes of `|Res R^{GL2}_{T,theta} - R^{SL2}_{T_H,theta_H}|`.
pub fn verify_restriction_theorem(lab: &Lab, q: u32, index: CharIndex) -> Result<f64> {
    let (lhs, rhs) = restriction_sides(lab, q, index)?;
    lhs.max_deviation(&rhs)
}

/// Both sides of the restriction identity: `Res R^{GL2}_{T,theta}` and
/// `R^{SL2}_{T_H,theta_H}`.
pub fn restriction_sides(lab: &Lab, q: u32, index: CharIndex) -> Result<(ClassFunction, ClassFunction)> {
    let h = lab.sl2(q)?;
    let ev_g = lab.evaluator(q, q - 1, index.kind())?;
    let ev_h = lab.evaluator(q, 1, index.kind())?;
    let theta = ev_g.torus().character(index)?;
    let (_, theta_h) = restrict_datum(ev_g.torus(), &theta, &h)?;
    let lhs = ev_g.evaluate(&theta)?.restrict(&h)?;
    let rhs = ev_h.evaluate(&theta_h)?;
    Ok((lhs, rhs))
}

/// `<Res(eps·R), eps_H·R_H>`; positive when the two sign conventions agree.
pub fn sign_coherence(lab: &Lab, q: u32, index: CharIndex) -> Result<f64> {
    let (lhs, rhs) = restriction_sides(lab, q, index)?;
    let g = lab.gl2(q)?;
    let h = lab.sl2(q)?;
    let ev_g = lab.evaluator(q, q - 1, index.kind())?;
    let ev_h = lab.evaluator(q, 1, index.kind())?;
    let eps = eps_sign(&g, ev_g.torus())? as f64;
    let eps_h = eps_sign(&h, ev_h.torus())? as f64;
    Ok(lhs.scale(eps).inner_product(&rhs.scale(eps_h))?.re)
}

/// Compares `R_{T,theta}(y)` with `R_{xTx^-1, theta∘Ad(x^-1)}(x y x^-1)` over
/// class representatives `y` of `GL2(F_q)`.
pub fn verify_iso_invariance(lab: &Lab, q: u32, index: CharIndex, x: &GroupElement) -> Result<f64> {
    let g = lab.gl2(q)?;
    let green = lab.green(q, g.kind())?;
    let ev = lab.evaluator(q, q - 1, index.kind())?;
    let torus = ev.torus();
    let theta = torus.character(index)?;
    let moved = torus.conjugate(x);
    // coordinates travel with the points, so the same index is theta∘Ad(x^-1)
    let theta_moved = moved.character(index)?;
    let ev_moved = DlEvaluator::new(g.clone(), moved, &green)?;
    let before = ev.evaluate(&theta)?;
    let after = ev_moved.evaluate(&theta_moved)?;
    let t = g.tower();
    let xinv = t.mat_inv(x);
    Ok(g.classes()
        .iter()
        .map(|c| {
            let y = c.representative();
            let fy = t.mat_mul(x, &t.mat_mul(y, &xinv));
            (before.value_at(y).unwrap() - after.value_at(&fy).unwrap()).norm()
        })
        .fold(0.0, f64::max))
}

/// `(|GL2|, |SL2|·|T|/|T_H|, |SL2·T|)` for one torus kind; all three agree
/// when `G = H·T`.
pub fn coset_identity(lab: &Lab, q: u32, kind: TorusKind) -> Result<(usize, usize, usize)> {
    let g = lab.gl2(q)?;
    let h = lab.sl2(q)?;
    let torus = lab.torus(q, q - 1, kind)?;
    let t_h = torus.intersect(&h)?;
    let t = g.tower();
    let mut seen = vec![false; g.order()];
    for a in h.elements() {
        for b in torus.points() {
            seen[g.index_of(&t.mat_mul(a, b)).unwrap()] = true;
        }
    }
    let products = seen.into_iter().filter(|&s| s).count();
    Ok((g.order(), h.order() * torus.order() / t_h.order(), products))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classfn::TOLERANCE;

    #[test]
    fn restriction_examples() {
        let lab = Lab::new();
        assert!(verify_restriction_theorem(&lab, 3, CharIndex::Nonsplit(1)).unwrap() < TOLERANCE);
        assert!(verify_restriction_theorem(&lab, 5, CharIndex::Nonsplit(0)).unwrap() < TOLERANCE);
        assert!(verify_restriction_theorem(&lab, 5, CharIndex::Split(0, 0)).unwrap() < TOLERANCE);
    }

    #[test]
    fn restrict_datum_examples() {
        let lab = Lab::new();
        let g = lab.gl2(5).unwrap();
        let h = lab.sl2(5).unwrap();
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        let (t_h, th) = restrict_datum(&ns, &ns.character(CharIndex::Nonsplit(7)).unwrap(), &h).unwrap();
        assert_eq!(t_h.order(), 6);
        assert_eq!(th.reduced(), crate::torus::ReducedIndex::Cyclic { j: 1, modulus: 6 });
        let (_, triv) = restrict_datum(&ns, &ns.trivial_character(), &h).unwrap();
        assert!(triv.is_trivial());

        let g3 = lab.gl2(3).unwrap();
        let h3 = lab.sl2(3).unwrap();
        let s = TorusDatum::make(&g3, TorusKind::Split).unwrap();
        let (t_h, th) = restrict_datum(&s, &s.character(CharIndex::Split(1, 0)).unwrap(), &h3).unwrap();
        assert_eq!(t_h.order(), 2);
        assert!(!th.is_trivial());
    }

    #[test]
    fn iso_trivial_cases() {
        let lab = Lab::new();
        let t = lab.tower(3).unwrap();
        let id = t.identity();
        assert_eq!(verify_iso_invariance(&lab, 3, CharIndex::Nonsplit(1), &id).unwrap(), 0.0);
        let z = t.matrix_from_ints(2, 0, 0, 2).unwrap();
        assert_eq!(verify_iso_invariance(&lab, 3, CharIndex::Nonsplit(3), &z).unwrap(), 0.0);
        let x = t.matrix_from_ints(1, 1, 2, 0).unwrap();
        assert!(verify_iso_invariance(&lab, 3, CharIndex::Split(1, 0), &x).unwrap() < TOLERANCE);
    }

    #[test]
    fn coset_identity_q5() {
        let lab = Lab::new();
        assert_eq!(coset_identity(&lab, 5, TorusKind::Nonsplit).unwrap(), (480, 480, 480));
        assert_eq!(coset_identity(&lab, 5, TorusKind::Split).unwrap(), (480, 480, 480));
    }

    #[test]
    fn sign_coherence_positive() {
        let lab = Lab::new();
        for j in [1u32, 3, 7] {
            assert!(sign_coherence(&lab, 5, CharIndex::Nonsplit(j)).unwrap() > 0.5);
        }
        assert!(sign_coherence(&lab, 5, CharIndex::Split(1, 2)).unwrap() > 0.5);
    }
}
