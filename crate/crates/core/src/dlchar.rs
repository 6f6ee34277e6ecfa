//! Green functions and Deligne–Lusztig virtual characters of `GL2` and `SL2`.
//!
//! For `g = su` (Jordan decomposition),
//!
//! ```text
//! R_{T,theta}(g) = |C(s)|^-1 · Σ_{x ∈ G, x^-1 s x ∈ T} theta(x^-1 s x) · Q^{C(s)}_{xTx^-1}(u)
//! ```
//!
//! where `C(s)` is the (connected) centralizer of `s`. In rank one the
//! centralizer is either the whole group (`s` central) or a maximal torus
//! (`s` regular), so the Green lookup only ever needs `Q^G_T` and `Q^T_T`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classfn::{root_of_unity, ClassFunction};
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::torus::{group_split_rank, TorusCharacter, TorusDatum, TorusKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralizerType {
    /// `C(s)` is the whole group.
    Whole,
    /// `C(s)` is a maximal torus.
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GreenKey {
    pub centralizer: CentralizerType,
    pub torus: TorusKind,
    /// Class index of the unipotent element in the centralizer (always 0,
    /// the identity, for a torus centralizer).
    pub unipotent_class: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenEntry {
    pub key: GreenKey,
    pub value: i64,
}

/// Integer-valued Green functions `Q_T^C(u)` for one group.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenTable {
    group: String,
    entries: BTreeMap<GreenKey, i64>,
}

fn tori_of(g: &GroupModel) -> Result<Vec<TorusDatum>> {
    [TorusKind::Split, TorusKind::Nonsplit]
        .into_iter()
        .map(|k| TorusDatum::in_group(g, k))
        .collect()
}

impl GreenTable {
    /// Closed-form Green functions of `GL2(F_q)` or `SL2(F_q)`, validated
    /// against the unipotent orthogonality relations before being returned.
    pub fn build(g: &GroupModel) -> Result<Self> {
        if !(g.is_gl2() || g.is_sl2()) {
            return Err(Error::UnsupportedGroup(g.label()));
        }
        let q = g.q() as i64;
        let id = g.tower().identity();
        let mut entries = BTreeMap::new();
        for (ci, c) in g.classes().iter().enumerate() {
            let u = c.representative();
            if !g.is_unipotent(u) {
                continue;
            }
            let one = *u == id;
            for (torus, at_one) in [(TorusKind::Split, q + 1), (TorusKind::Nonsplit, 1 - q)] {
                let key = GreenKey {
                    centralizer: CentralizerType::Whole,
                    torus,
                    unipotent_class: ci,
                };
                entries.insert(key, if one { at_one } else { 1 });
            }
        }
        for torus in [TorusKind::Split, TorusKind::Nonsplit] {
            let key = GreenKey {
                centralizer: CentralizerType::Torus,
                torus,
                unipotent_class: 0,
            };
            entries.insert(key, 1);
        }
        Self::from_entries(g, entries.into_iter().map(|(key, value)| GreenEntry { key, value }))
    }

    /// Rebuilds a table from stored entries; validation runs again.
    pub fn from_entries(g: &GroupModel, entries: impl IntoIterator<Item = GreenEntry>) -> Result<Self> {
        if !(g.is_gl2() || g.is_sl2()) {
            return Err(Error::UnsupportedGroup(g.label()));
        }
        let table = GreenTable {
            group: g.label(),
            entries: entries.into_iter().map(|e| (e.key, e.value)).collect(),
        };
        table.validate(g)?;
        Ok(table)
    }

    pub fn group_label(&self) -> &str {
        &self.group
    }

    pub fn get(&self, key: &GreenKey) -> Option<i64> {
        self.entries.get(key).copied()
    }

    pub fn entries(&self) -> Vec<GreenEntry> {
        self.entries
            .iter()
            .map(|(&key, &value)| GreenEntry { key, value })
            .collect()
    }

    /// `Q^G_T(u)` for the class index `u` of a unipotent element of `G`.
    pub fn whole(&self, torus: TorusKind, unipotent_class: usize) -> Option<i64> {
        self.get(&GreenKey {
            centralizer: CentralizerType::Whole,
            torus,
            unipotent_class,
        })
    }

    /// Checks, for each pair of tori,
    /// `Σ_u Q_T(u) Q_T'(u) = |G|·|{x : xTx^-1 = T'}| / (|T||T'|)`
    /// with the sum over unipotent elements, and that every unipotent class
    /// and torus centralizer has an entry.
    fn validate(&self, g: &GroupModel) -> Result<()> {
        let fail = |reason: String| Error::GreenValidation {
            group: g.label(),
            reason,
        };
        let unipotent: Vec<usize> = g
            .classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| g.is_unipotent(c.representative()))
            .map(|(i, _)| i)
            .collect();
        let expected_len = 2 * unipotent.len() + 2;
        if self.entries.len() != expected_len {
            return Err(fail(format!(
                "{} entries, expected {expected_len}",
                self.entries.len()
            )));
        }
        for kind in [TorusKind::Split, TorusKind::Nonsplit] {
            let key = GreenKey {
                centralizer: CentralizerType::Torus,
                torus: kind,
                unipotent_class: 0,
            };
            if self.get(&key) != Some(1) {
                return Err(fail(format!("Q_T^T(1) must be 1 for the {kind} torus")));
            }
        }
        let tori = tori_of(g)?;
        let t = g.tower();
        for a in &tori {
            for b in &tori {
                let mut lhs = 0i64;
                for &ci in &unipotent {
                    let qa = self.whole(a.kind(), ci).ok_or_else(|| fail(format!("missing class {ci}")))?;
                    let qb = self.whole(b.kind(), ci).ok_or_else(|| fail(format!("missing class {ci}")))?;
                    lhs += g.classes()[ci].size() as i64 * qa * qb;
                }
                let transporters = g
                    .elements()
                    .iter()
                    .filter(|x| {
                        let xinv = t.mat_inv(x);
                        a.full_points().len() == b.full_points().len()
                            && a.full_points().iter().all(|p| {
                                b.coord(&t.mat_mul(x, &t.mat_mul(p, &xinv))).is_some()
                            })
                    })
                    .count() as i64;
                let lhs_scaled = lhs * a.order() as i64 * b.order() as i64;
                let rhs = g.order() as i64 * transporters;
                if lhs_scaled != rhs {
                    return Err(fail(format!(
                        "orthogonality ({}, {}): {lhs_scaled} != {rhs}",
                        a.kind(),
                        b.kind()
                    )));
                }
            }
        }
        Ok(())
    }
}

struct ClassTerm {
    /// `Q / |C(s)|`.
    weight: f64,
    /// `(point index, count)` over the fiber `{x : x^-1 s x ∈ T}`.
    hits: Vec<(usize, u32)>,
}

/// Precomputed fibers of the character formula for one `(G, T)` pair;
/// evaluating a character is then a weighted sum over torus points.
pub struct DlEvaluator {
    group: Arc<GroupModel>,
    torus: TorusDatum,
    terms: Vec<ClassTerm>,
}

impl DlEvaluator {
    pub fn new(group: Arc<GroupModel>, torus: TorusDatum, green: &GreenTable) -> Result<Self> {
        if green.group_label() != group.label() {
            return Err(Error::OwnerMismatch(green.group_label().to_string(), group.label()));
        }
        if torus.det_order() != group.det_order().unwrap_or(0) {
            return Err(Error::NotContained {
                sub: format!("the {} torus", torus.kind()),
                sup: group.label(),
            });
        }
        let t = group.tower().clone();
        let id = t.identity();
        let order = group.order();

        // semisimple part code -> (|C(s)|, fiber histogram)
        let mut memo: HashMap<u32, (usize, Vec<(usize, u32)>)> = HashMap::new();
        let mut terms = Vec::with_capacity(group.classes().len());
        for (ci, c) in group.classes().iter().enumerate() {
            let (s, u) = group.jordan_decompose(c.representative());
            let (cent, hits) = memo
                .entry(s.code(t.q()))
                .or_insert_with(|| {
                    let cent = group.centralizer(&s).expect("semisimple part").len();
                    let mut counts = vec![0u32; torus.order()];
                    for (i, x) in group.elements().iter().enumerate() {
                        let xinv = &group.elements()[group.inverse_of(i)];
                        let y = t.mat_mul(xinv, &t.mat_mul(&s, x));
                        if let Some(pi) = torus.point_index(&y) {
                            counts[pi] += 1;
                        }
                    }
                    let hits = counts
                        .into_iter()
                        .enumerate()
                        .filter(|&(_, n)| n > 0)
                        .collect();
                    (cent, hits)
                })
                .clone();
            let green_value = if hits.is_empty() {
                0
            } else if cent == order {
                let uc = group.class_index_of(&u).unwrap();
                green
                    .whole(torus.kind(), uc)
                    .ok_or_else(|| Error::UnsupportedCentralizer {
                        class: ci,
                        reason: format!("no Green value for unipotent class {uc}"),
                    })?
            } else {
                // x^-1 s x ∈ T forces C(s) = xTx^-1, which contains no unipotents
                if cent != torus.order() {
                    return Err(Error::UnsupportedCentralizer {
                        class: ci,
                        reason: format!("|C(s)| = {cent} is neither |G| nor |T| = {}", torus.order()),
                    });
                }
                if u != id {
                    return Err(Error::UnsupportedCentralizer {
                        class: ci,
                        reason: "nontrivial unipotent part in a torus centralizer".into(),
                    });
                }
                green
                    .get(&GreenKey {
                        centralizer: CentralizerType::Torus,
                        torus: torus.kind(),
                        unipotent_class: 0,
                    })
                    .unwrap_or(1)
            };
            terms.push(ClassTerm {
                weight: green_value as f64 / cent as f64,
                hits,
            });
        }
        Ok(DlEvaluator { group, torus, terms })
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn torus(&self) -> &TorusDatum {
        &self.torus
    }

    pub fn evaluate(&self, theta: &TorusCharacter) -> Result<ClassFunction> {
        if theta.index().kind() != self.torus.kind() {
            return Err(Error::CharacterKindMismatch(self.torus.kind()));
        }
        let theta = self.torus.character(theta.index())?;
        let points = self.torus.points();
        let values = self
            .terms
            .iter()
            .map(|term| {
                let sum: Complex64 = term
                    .hits
                    .iter()
                    .map(|&(pi, n)| {
                        let (k, m) = self.torus.exponent(&theta, &points[pi]).unwrap();
                        root_of_unity(k, m) * n as f64
                    })
                    .sum();
                sum * term.weight
            })
            .collect();
        Ok(ClassFunction::new(self.group.clone(), values))
    }
}

/// `R_{T,theta}` on `g` (which must be `GL2` or `SL2`, with `T` living in it).
pub fn dl_character(g: &Arc<GroupModel>, torus: &TorusDatum, theta: &TorusCharacter) -> Result<ClassFunction> {
    let green = GreenTable::build(g)?;
    DlEvaluator::new(g.clone(), torus.clone(), &green)?.evaluate(theta)
}

/// `(-1)^(rank G - rank T)` with split ranks.
pub fn eps_sign(g: &GroupModel, torus: &TorusDatum) -> Result<i32> {
    let rg = group_split_rank(g).ok_or_else(|| Error::UnsupportedGroup(g.label()))?;
    let rt = torus
        .split_rank()
        .ok_or_else(|| Error::UnsupportedGroup(g.label()))?;
    Ok(if (rg + rt) % 2 == 0 { 1 } else { -1 })
}

/// `eps · R_{T,theta}` for a nonsplit torus and regular `theta`.
pub fn cuspidal_character(evaluator: &DlEvaluator, theta: &TorusCharacter) -> Result<ClassFunction> {
    let torus = evaluator.torus();
    if torus.kind() != TorusKind::Nonsplit {
        return Err(Error::CharacterKindMismatch(torus.kind()));
    }
    let theta = torus.character(theta.index())?;
    if !torus.is_regular(&theta) {
        return Err(Error::NotRegular);
    }
    let eps = eps_sign(evaluator.group(), torus)?;
    Ok(evaluator.evaluate(&theta)?.scale(eps as f64))
}
