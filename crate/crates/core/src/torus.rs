//! The two classes of F-stable maximal tori of `GL2`, their intersections
//! with determinant subgroups, and their characters.
//!
//! Points carry coordinates against the generator pair of the field tower:
//! the split torus point `diag(gamma1^a1, gamma1^a2)` has coordinate
//! `(a1, a2)`; the nonsplit point `iota(gamma2^a)` has coordinate `a`, where
//! `iota` sends `x + y·alpha` to `x·I + y·C` with `C` the companion matrix
//! of the quadratic defining `F_{q^2}`. Characters are indexed the same way,
//! so `theta_j(gamma2^a) = exp(2πi·j·a/(q^2-1))` and
//! `theta_(j1,j2)(a1, a2) = exp(2πi·(j1·a1 + j2·a2)/(q-1))`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldTower, Fq2};
use crate::group::{GroupElement, GroupModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusKind {
    Split,
    Nonsplit,
}

impl fmt::Display for TorusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusKind::Split => "split",
            TorusKind::Nonsplit => "nonsplit",
        })
    }
}

impl std::str::FromStr for TorusKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "split" | "s" => Ok(TorusKind::Split),
            "nonsplit" | "ns" | "elliptic" => Ok(TorusKind::Nonsplit),
            _ => Err(format!("unknown torus kind `{s}` (expected split or nonsplit)")),
        }
    }
}

/// Coordinates of a point of `T^F` in terms of the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Nonsplit(u32),
    Split(u32, u32),
}

/// Character index on the full `GL2` torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharIndex {
    Nonsplit(u32),
    Split(u32, u32),
}

impl CharIndex {
    pub fn kind(&self) -> TorusKind {
        match self {
            CharIndex::Nonsplit(_) => TorusKind::Nonsplit,
            CharIndex::Split(..) => TorusKind::Split,
        }
    }

    pub fn trivial(kind: TorusKind) -> Self {
        match kind {
            TorusKind::Nonsplit => CharIndex::Nonsplit(0),
            TorusKind::Split => CharIndex::Split(0, 0),
        }
    }

    fn normalized(self, q: u32) -> Self {
        match self {
            CharIndex::Nonsplit(j) => CharIndex::Nonsplit(j % (q * q - 1)),
            CharIndex::Split(a, b) => CharIndex::Split(a % (q - 1), b % (q - 1)),
        }
    }

    /// Precomposition with the nontrivial Weyl element.
    pub fn weyl_twist(self, q: u32) -> Self {
        match self {
            CharIndex::Nonsplit(j) => CharIndex::Nonsplit((j * q) % (q * q - 1)),
            CharIndex::Split(a, b) => CharIndex::Split(b, a),
        }
    }
}

impl fmt::Display for CharIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharIndex::Nonsplit(j) => write!(f, "{j}"),
            CharIndex::Split(a, b) => write!(f, "{a},{b}"),
        }
    }
}

/// Canonical index of a character of `T^F ∩ H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReducedIndex {
    /// `j mod modulus` on a cyclic group of order `modulus`.
    Cyclic { j: u32, modulus: u32 },
    /// `(a1, a2) -> diff·a1 + tail·(a1 + a2)/step`, with `diff` mod `q - 1`
    /// and `tail` mod `|D|`.
    Split {
        diff: u32,
        diff_modulus: u32,
        tail: u32,
        tail_modulus: u32,
    },
}

/// A character `theta` of the points of a torus, remembered by a `GL2`-level
/// index together with its canonical index on the torus it lives on.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TorusCharacter {
    index: CharIndex,
    reduced: ReducedIndex,
}

impl PartialEq for TorusCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.reduced == other.reduced
    }
}

impl Eq for TorusCharacter {}

impl TorusCharacter {
    pub fn index(&self) -> CharIndex {
        self.index
    }

    pub fn reduced(&self) -> ReducedIndex {
        self.reduced
    }

    pub fn is_trivial(&self) -> bool {
        match self.reduced {
            ReducedIndex::Cyclic { j, .. } => j == 0,
            ReducedIndex::Split { diff, tail, .. } => diff == 0 && tail == 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorusDatum {
    tower: Arc<FieldTower>,
    kind: TorusKind,
    d_order: u32,
    full_points: Vec<GroupElement>,
    points: Vec<GroupElement>,
    coords: HashMap<u32, Coord>,
    point_index: HashMap<u32, usize>,
    weyl_rep: GroupElement,
    split_rank: Option<u32>,
}

/// `iota(x)` for `x ∈ F_{q^2}`: multiplication by `x` on the basis `(1, alpha)`.
pub fn embed_quadratic(t: &FieldTower, x: Fq2) -> Option<GroupElement> {
    let (a, b) = t.coords(x);
    let [c0, c1] = t.quadratic();
    // x·1 = a + b·alpha, x·alpha = -c0·b + (a - c1·b)·alpha
    t.matrix(a, t.neg(t.mul(c0, b)), b, t.sub(a, t.mul(c1, b)))
}

fn standard_points(t: &FieldTower, kind: TorusKind) -> Vec<(GroupElement, Coord)> {
    let q = t.q();
    match kind {
        TorusKind::Split => (0..q - 1)
            .flat_map(|a1| (0..q - 1).map(move |a2| (a1, a2)))
            .map(|(a1, a2)| {
                let x = t.diag(t.gamma1_pow(a1), t.gamma1_pow(a2)).unwrap();
                (x, Coord::Split(a1, a2))
            })
            .collect(),
        TorusKind::Nonsplit => (0..q * q - 1)
            .map(|a| {
                let x = embed_quadratic(t, t.gamma2_pow(a)).unwrap();
                (x, Coord::Nonsplit(a))
            })
            .collect(),
    }
}

/// Split rank of `GL2` (2) or `SL2` (1); `None` for other groups.
pub fn group_split_rank(g: &GroupModel) -> Option<u32> {
    if g.is_gl2() {
        Some(2)
    } else if g.is_sl2() {
        Some(1)
    } else {
        None
    }
}

impl TorusDatum {
    /// The torus of the given kind in `GL2(F_q)`.
    pub fn make(g: &GroupModel, kind: TorusKind) -> Result<Self> {
        if !g.is_gl2() {
            return Err(Error::RequiresGl2(g.label()));
        }
        Self::in_group(g, kind)
    }

    /// The standard torus of the given kind cut down to a determinant
    /// subgroup `g`.
    pub fn in_group(g: &GroupModel, kind: TorusKind) -> Result<Self> {
        let Some(d_order) = g.det_order() else {
            return Err(Error::NotContained {
                sub: format!("the {kind} torus"),
                sup: g.label(),
            });
        };
        let t = g.tower().clone();
        let pts = standard_points(&t, kind);
        let full_points: Vec<GroupElement> = pts.iter().map(|(x, _)| *x).collect();
        let coords = pts.iter().map(|(x, c)| (x.code(t.q()), *c)).collect();
        let mut datum = TorusDatum {
            tower: t.clone(),
            kind,
            d_order,
            points: full_points.iter().filter(|x| g.contains(x)).copied().collect(),
            full_points,
            coords,
            point_index: HashMap::new(),
            weyl_rep: t.identity(),
            split_rank: None,
        };
        datum.finish(g)?;
        Ok(datum)
    }

    /// `T ∩ H` for a determinant subgroup `H` of the torus' ambient group.
    pub fn intersect(&self, h: &GroupModel) -> Result<Self> {
        let d_order = match h.det_order() {
            Some(d) if h.q() == self.tower.q() && self.d_order % d == 0 => d,
            _ => {
                return Err(Error::NotContained {
                    sub: h.label(),
                    sup: format!("the ambient group of the {} torus", self.kind),
                })
            }
        };
        let mut datum = TorusDatum {
            d_order,
            points: self.points.iter().filter(|x| h.contains(x)).copied().collect(),
            ..self.clone()
        };
        datum.finish(h)?;
        Ok(datum)
    }

    /// The torus `g·T·g^-1` with coordinates transported along conjugation.
    pub fn conjugate(&self, g: &GroupElement) -> Self {
        let t = &self.tower;
        let ginv = t.mat_inv(g);
        let ad = |x: &GroupElement| t.mat_mul(g, &t.mat_mul(x, &ginv));
        let coords = self
            .full_points
            .iter()
            .map(|x| (ad(x).code(t.q()), self.coord(x).unwrap()))
            .collect();
        let points: Vec<GroupElement> = self.points.iter().map(ad).collect();
        let point_index = points
            .iter()
            .enumerate()
            .map(|(i, x)| (x.code(t.q()), i))
            .collect();
        TorusDatum {
            tower: self.tower.clone(),
            kind: self.kind,
            d_order: self.d_order,
            full_points: self.full_points.iter().map(ad).collect(),
            points,
            coords,
            point_index,
            weyl_rep: ad(&self.weyl_rep),
            split_rank: self.split_rank,
        }
    }

    fn finish(&mut self, h: &GroupModel) -> Result<()> {
        let q = self.tower.q();
        self.point_index = self
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| (x.code(q), i))
            .collect();
        self.split_rank = match (group_split_rank(h), self.kind) {
            (Some(r), TorusKind::Split) => Some(r),
            (Some(r), TorusKind::Nonsplit) => Some(r - 1),
            (None, _) => None,
        };
        // smallest-code element of H normalizing T but not centralizing it
        let w = h
            .elements()
            .iter()
            .find(|n| !self.in_full(n) && self.normalizes(n))
            .copied()
            .ok_or(Error::MissingWeylElement)?;
        self.weyl_rep = w;
        debug_assert!(self.weyl_action_matches());
        Ok(())
    }

    fn in_full(&self, x: &GroupElement) -> bool {
        self.coords.contains_key(&x.code(self.tower.q()))
    }

    /// True if `n·T·n^-1 = T` (on the `GL2`-level points).
    pub fn normalizes(&self, n: &GroupElement) -> bool {
        let t = &self.tower;
        let ninv = t.mat_inv(n);
        self.full_points
            .iter()
            .all(|x| self.in_full(&t.mat_mul(n, &t.mat_mul(x, &ninv))))
    }

    /// Checks that conjugation by `weyl_rep` acts on coordinates as the
    /// entry swap (split) or the `q`-power map (nonsplit).
    pub fn weyl_action_matches(&self) -> bool {
        let t = &self.tower;
        let q = t.q();
        let winv = t.mat_inv(&self.weyl_rep);
        self.full_points.iter().all(|x| {
            let y = t.mat_mul(&self.weyl_rep, &t.mat_mul(x, &winv));
            let expected = match self.coord(x).unwrap() {
                Coord::Split(a, b) => Coord::Split(b, a),
                Coord::Nonsplit(a) => Coord::Nonsplit((a * q) % (q * q - 1)),
            };
            self.coord(&y) == Some(expected)
        })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    /// Order of the determinant subgroup the points lie in.
    pub fn det_order(&self) -> u32 {
        self.d_order
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    /// Points of the full `GL2` torus this one was cut from.
    pub fn full_points(&self) -> &[GroupElement] {
        &self.full_points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.point_index.contains_key(&x.code(self.tower.q()))
    }

    pub fn point_index(&self, x: &GroupElement) -> Option<usize> {
        self.point_index.get(&x.code(self.tower.q())).copied()
    }

    pub fn coord(&self, x: &GroupElement) -> Option<Coord> {
        self.coords.get(&x.code(self.tower.q())).copied()
    }

    pub fn weyl_rep(&self) -> &GroupElement {
        &self.weyl_rep
    }

    pub fn split_rank(&self) -> Option<u32> {
        self.split_rank
    }

    pub fn character(&self, index: CharIndex) -> Result<TorusCharacter> {
        if index.kind() != self.kind {
            return Err(Error::CharacterKindMismatch(self.kind));
        }
        let q = self.tower.q();
        let index = index.normalized(q);
        let reduced = match index {
            CharIndex::Nonsplit(j) => {
                let modulus = (q + 1) * self.d_order;
                ReducedIndex::Cyclic {
                    j: j % modulus,
                    modulus,
                }
            }
            CharIndex::Split(a, b) => ReducedIndex::Split {
                diff: (a + (q - 1) - b) % (q - 1),
                diff_modulus: q - 1,
                tail: b % self.d_order,
                tail_modulus: self.d_order,
            },
        };
        Ok(TorusCharacter { index, reduced })
    }

    pub fn trivial_character(&self) -> TorusCharacter {
        self.character(CharIndex::trivial(self.kind)).unwrap()
    }

    /// Every character of the points of this torus, once each, in order of
    /// first appearance among `GL2`-level indices.
    pub fn characters(&self) -> Vec<TorusCharacter> {
        let q = self.tower.q();
        let indices: Vec<CharIndex> = match self.kind {
            TorusKind::Nonsplit => (0..q * q - 1).map(CharIndex::Nonsplit).collect(),
            TorusKind::Split => (0..q - 1)
                .flat_map(|a| (0..q - 1).map(move |b| CharIndex::Split(a, b)))
                .collect(),
        };
        let mut out: Vec<TorusCharacter> = Vec::new();
        for i in indices {
            let c = self.character(i).unwrap();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// `theta(x) = exp(2πi·k/n)`, returned as `(k, n)`; `None` off the torus.
    pub fn exponent(&self, theta: &TorusCharacter, x: &GroupElement) -> Option<(u64, u64)> {
        if !self.contains(x) {
            return None;
        }
        let q = self.tower.q() as u64;
        Some(match (self.coord(x)?, theta.index) {
            (Coord::Nonsplit(a), CharIndex::Nonsplit(j)) => {
                let n = q * q - 1;
                ((a as u64 * j as u64) % n, n)
            }
            (Coord::Split(a1, a2), CharIndex::Split(j1, j2)) => {
                let n = q - 1;
                ((a1 as u64 * j1 as u64 + a2 as u64 * j2 as u64) % n, n)
            }
            _ => return None,
        })
    }

    /// The character restricted to `self`, which must be cut from the
    /// character's torus.
    pub fn restrict_character(&self, theta: &TorusCharacter) -> Result<TorusCharacter> {
        self.character(theta.index)
    }

    /// `theta ∘ w` for the nontrivial Weyl element.
    pub fn weyl_twist(&self, theta: &TorusCharacter) -> TorusCharacter {
        self.character(theta.index.weyl_twist(self.tower.q())).unwrap()
    }

    /// Regular (general position): the Weyl group moves `theta`.
    pub fn is_regular(&self, theta: &TorusCharacter) -> bool {
        self.weyl_twist(theta) != *theta
    }

    /// `N_G(T)` in the given group, computed by brute force.
    pub fn normalizer_in(&self, g: &GroupModel) -> Vec<GroupElement> {
        g.elements()
            .iter()
            .filter(|n| self.normalizes(n))
            .copied()
            .collect()
    }

    /// Regular in `G`: no element of `N_G(T)` outside `T` fixes `theta` on
    /// the points of this torus. Brute force over the normalizer in the
    /// ambient group.
    pub fn is_regular_in(&self, theta: &TorusCharacter, ambient: &GroupModel) -> bool {
        let t = &self.tower;
        !self.normalizer_in(ambient).iter().any(|n| {
            !self.in_full(n) && {
                let ninv = t.mat_inv(n);
                self.points.iter().all(|x| {
                    let y = t.mat_mul(&ninv, &t.mat_mul(x, n));
                    self.exponent(theta, &y) == self.exponent(theta, x)
                })
            }
        })
    }
}

/// `theta_H = theta|_(T ∩ H)`; free-function form for the datum map.
pub fn restrict_character(theta: &TorusCharacter, t_h: &TorusDatum) -> Result<TorusCharacter> {
    t_h.restrict_character(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;

    fn groups(q: u32) -> (GroupModel, GroupModel) {
        let t = Arc::new(FieldTower::with_order(q).unwrap());
        (GroupModel::gl2(t.clone()).unwrap(), GroupModel::sl2(t).unwrap())
    }

    #[test]
    fn torus_orders() {
        let (g, _) = groups(3);
        assert_eq!(TorusDatum::make(&g, TorusKind::Split).unwrap().order(), 4);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        assert_eq!(ns.order(), 8);
        for q in [5u32, 7, 9] {
            let (g, h) = groups(q);
            let s = TorusDatum::make(&g, TorusKind::Split).unwrap();
            let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
            assert_eq!(s.order() as u32, (q - 1) * (q - 1));
            assert_eq!(ns.order() as u32, q * q - 1);
            assert_eq!(s.intersect(&h).unwrap().order() as u32, q - 1);
            assert_eq!(ns.intersect(&h).unwrap().order() as u32, q + 1);
        }
    }

    #[test]
    fn nonsplit_points_are_the_embedded_field() {
        let (g, _) = groups(3);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        let t = g.tower();
        for x in t.elements2().skip(1) {
            assert!(ns.contains(&embed_quadratic(t, x).unwrap()));
        }
        // iota is a ring map on units
        for x in t.elements2().skip(1) {
            for y in t.elements2().skip(1) {
                let lhs = embed_quadratic(t, t.mul2(x, y)).unwrap();
                let rhs = t.mat_mul(
                    &embed_quadratic(t, x).unwrap(),
                    &embed_quadratic(t, y).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn weyl_reps() {
        let (g, h) = groups(3);
        let t = g.tower();
        let s = TorusDatum::make(&g, TorusKind::Split).unwrap();
        assert_eq!(*s.weyl_rep(), t.matrix_from_ints(0, 1, 1, 0).unwrap());
        let d = t.matrix_from_ints(1, 0, 0, 2).unwrap();
        assert_eq!(
            t.conjugate_by(&d, s.weyl_rep()),
            t.matrix_from_ints(2, 0, 0, 1).unwrap()
        );
        for q in [3u32, 5, 7, 9, 11] {
            let (g, h2) = groups(q);
            for kind in [TorusKind::Split, TorusKind::Nonsplit] {
                let tt = TorusDatum::make(&g, kind).unwrap();
                assert!(tt.weyl_action_matches());
                let th = tt.intersect(&h2).unwrap();
                assert!(th.weyl_action_matches());
                assert!(h2.contains(th.weyl_rep()));
            }
        }
        let sh = s.intersect(&h).unwrap();
        assert_eq!(*sh.weyl_rep(), t.matrix_from_ints(0, 1, 2, 0).unwrap());
    }

    #[test]
    fn intersect_with_full_group_is_identity() {
        let (g, _) = groups(5);
        for kind in [TorusKind::Split, TorusKind::Nonsplit] {
            let tt = TorusDatum::make(&g, kind).unwrap();
            let same = tt.intersect(&g).unwrap();
            assert_eq!(same.points(), tt.points());
            assert_eq!(same.characters().len(), tt.order());
        }
    }

    #[test]
    fn intersect_rejects_non_subgroup() {
        let (g, h) = groups(5);
        let tt = TorusDatum::make(&g, TorusKind::Split).unwrap();
        let th = tt.intersect(&h).unwrap();
        assert!(th.intersect(&g).is_err());
        assert!(matches!(TorusDatum::make(&h, TorusKind::Split), Err(Error::RequiresGl2(_))));
    }

    #[test]
    fn split_ranks() {
        let (g, h) = groups(5);
        let s = TorusDatum::make(&g, TorusKind::Split).unwrap();
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        assert_eq!(group_split_rank(&g), Some(2));
        assert_eq!(group_split_rank(&h), Some(1));
        assert_eq!(s.split_rank(), Some(2));
        assert_eq!(ns.split_rank(), Some(1));
        assert_eq!(s.intersect(&h).unwrap().split_rank(), Some(1));
        assert_eq!(ns.intersect(&h).unwrap().split_rank(), Some(0));
        let mid = GroupModel::build(g.tower().clone(), GroupKind::DetSubgroup { d_order: 2 }).unwrap();
        assert_eq!(ns.intersect(&mid).unwrap().split_rank(), None);
    }

    #[test]
    fn restricted_indices() {
        let (g, h) = groups(5);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        let nsh = ns.intersect(&h).unwrap();
        let theta = ns.character(CharIndex::Nonsplit(7)).unwrap();
        let th = restrict_character(&theta, &nsh).unwrap();
        assert_eq!(th.reduced(), ReducedIndex::Cyclic { j: 1, modulus: 6 });
        // oracle: evaluate on the generator gamma2^(q-1) of the norm-one group
        let t = g.tower();
        let gen = embed_quadratic(t, t.gamma2_pow(4)).unwrap();
        assert_eq!(nsh.exponent(&th, &gen), Some((28 % 24, 24)));
        assert!(restrict_character(&ns.trivial_character(), &nsh).unwrap().is_trivial());

        let (g3, h3) = groups(3);
        let s = TorusDatum::make(&g3, TorusKind::Split).unwrap();
        let sh = s.intersect(&h3).unwrap();
        assert_eq!(sh.order(), 2);
        let th = sh.character(CharIndex::Split(1, 0)).unwrap();
        assert_eq!(
            th.reduced(),
            ReducedIndex::Split { diff: 1, diff_modulus: 2, tail: 0, tail_modulus: 1 }
        );
        let t3 = g3.tower();
        let x = t3.diag(t3.gamma1(), t3.inv(t3.gamma1()).unwrap()).unwrap();
        assert_eq!(sh.exponent(&th, &x), Some((1, 2)));
    }

    #[test]
    fn split_restriction_depends_on_difference() {
        let (g, h) = groups(7);
        let s = TorusDatum::make(&g, TorusKind::Split).unwrap();
        let sh = s.intersect(&h).unwrap();
        let t = g.tower();
        let x = t.diag(t.gamma1(), t.inv(t.gamma1()).unwrap()).unwrap();
        for j1 in 0..6 {
            for j2 in 0..6 {
                let th = sh.character(CharIndex::Split(j1, j2)).unwrap();
                let (k, n) = sh.exponent(&th, &x).unwrap();
                assert_eq!(k, ((j1 + 6 - j2) % 6) as u64);
                assert_eq!(n, 6);
            }
        }
    }

    #[test]
    fn characters_are_distinct_and_multiplicative() {
        for q in [3u32, 5] {
            let (g, h) = groups(q);
            for kind in [TorusKind::Split, TorusKind::Nonsplit] {
                let tt = TorusDatum::make(&g, kind).unwrap();
                for torus in [tt.clone(), tt.intersect(&h).unwrap()] {
                    let chars = torus.characters();
                    assert_eq!(chars.len(), torus.order());
                    let t = torus.tower();
                    for theta in &chars {
                        for x in torus.points() {
                            for y in torus.points() {
                                let (a, n) = torus.exponent(theta, x).unwrap();
                                let (b, _) = torus.exponent(theta, y).unwrap();
                                let (c, _) = torus.exponent(theta, &t.mat_mul(x, y)).unwrap();
                                assert_eq!((a + b) % n, c);
                            }
                        }
                    }
                    // distinct reduced indices give distinct value tables
                    for (i, a) in chars.iter().enumerate() {
                        for b in &chars[i + 1..] {
                            assert!(torus
                                .points()
                                .iter()
                                .any(|x| torus.exponent(a, x) != torus.exponent(b, x)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_twist_matches_conjugation() {
        for q in [3u32, 5, 7] {
            let (g, h) = groups(q);
            for kind in [TorusKind::Split, TorusKind::Nonsplit] {
                let tt = TorusDatum::make(&g, kind).unwrap();
                for torus in [tt.clone(), tt.intersect(&h).unwrap()] {
                    let t = torus.tower();
                    let w = torus.weyl_rep();
                    for theta in torus.characters() {
                        let tw = torus.weyl_twist(&theta);
                        for x in torus.points() {
                            let wx = t.mat_mul(w, &t.mat_mul(x, &t.mat_inv(w)));
                            assert_eq!(torus.exponent(&tw, x), torus.exponent(&theta, &wx));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let (g, h) = groups(5);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        let s = TorusDatum::make(&g, TorusKind::Split).unwrap();
        assert!(!ns.is_regular(&ns.trivial_character()));
        assert!(!ns.is_regular(&ns.character(CharIndex::Nonsplit(6)).unwrap()));
        assert!(ns.is_regular(&ns.character(CharIndex::Nonsplit(1)).unwrap()));
        for j in 0..24 {
            let theta = ns.character(CharIndex::Nonsplit(j)).unwrap();
            assert_eq!(ns.is_regular(&theta), j % 6 != 0);
        }
        for a in 0..4 {
            for b in 0..4 {
                let theta = s.character(CharIndex::Split(a, b)).unwrap();
                assert_eq!(s.is_regular(&theta), a != b);
            }
        }
        let nsh = ns.intersect(&h).unwrap();
        assert!(!nsh.is_regular_in(&nsh.trivial_character(), &g));
        for j in 0..24 {
            let th = nsh.character(CharIndex::Nonsplit(j)).unwrap();
            let expected = (2 * j) % 6 != 0;
            assert_eq!(nsh.is_regular_in(&th, &g), expected, "j = {j}");
            // for GL2 ⊃ SL2 the two notions agree
            assert_eq!(nsh.is_regular(&th), expected);
        }
    }

    #[test]
    fn conjugated_torus_transports_everything() {
        let (g, _) = groups(5);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        let t = g.tower();
        let x = t.matrix_from_ints(1, 2, 3, 2).unwrap();
        let c = ns.conjugate(&x);
        assert!(c.weyl_action_matches());
        let theta = c.character(CharIndex::Nonsplit(5)).unwrap();
        for p in ns.points() {
            let q = t.mat_mul(&x, &t.mat_mul(p, &t.mat_inv(&x)));
            assert_eq!(c.exponent(&theta, &q), ns.exponent(&theta, p));
        }
    }

    #[test]
    fn character_kind_mismatch() {
        let (g, _) = groups(3);
        let ns = TorusDatum::make(&g, TorusKind::Nonsplit).unwrap();
        assert!(matches!(
            ns.character(CharIndex::Split(0, 1)),
            Err(Error::CharacterKindMismatch(TorusKind::Nonsplit))
        ));
    }
}
