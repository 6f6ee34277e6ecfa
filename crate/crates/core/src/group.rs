//! Enumerated 2×2 matrix groups over `F_q`: `GL2`, its determinant
//! subgroups `{g : det g ∈ D}` (with `D = {1}` giving `SL2`), and the upper
//! Borel subgroup.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldTower, Fq};

/// An invertible 2×2 matrix `[[a, b], [c, d]]` with cached determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    entries: [Fq; 4],
    det: Fq,
}

impl GroupElement {
    pub fn entries(&self) -> [Fq; 4] {
        self.entries
    }

    pub fn det(&self) -> Fq {
        self.det
    }

    /// Lexicographic code of `(a, b, c, d)`, the canonical ordering key.
    /// Diagonal digits are rotated so that `1` reads as `0`; the identity
    /// therefore has code 0 and its class comes first in every ordering.
    pub fn code(&self, q: u32) -> u32 {
        let digit = |i: usize| {
            let v = self.entries[i].0 as u32;
            if i == 0 || i == 3 {
                (v + q - 1) % q
            } else {
                v
            }
        };
        (0..4).fold(0, |acc, i| acc * q + digit(i))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[1] == Fq::ZERO && self.entries[2] == Fq::ZERO
    }

    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.entries[0] == self.entries[3]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{},{}],[{},{}]]", a.0, b.0, c.0, d.0)
    }
}

/// Matrix arithmetic over the base field.
impl FieldTower {
    /// Builds `[[a, b], [c, d]]`; `None` if singular.
    pub fn matrix(&self, a: Fq, b: Fq, c: Fq, d: Fq) -> Option<GroupElement> {
        let det = self.sub(self.mul(a, d), self.mul(b, c));
        (det != Fq::ZERO).then_some(GroupElement {
            entries: [a, b, c, d],
            det,
        })
    }

    /// Convenience constructor from integers reduced mod `p`.
    pub fn matrix_from_ints(&self, a: i64, b: i64, c: i64, d: i64) -> Option<GroupElement> {
        self.matrix(self.from_int(a), self.from_int(b), self.from_int(c), self.from_int(d))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            entries: [Fq::ONE, Fq::ZERO, Fq::ZERO, Fq::ONE],
            det: Fq::ONE,
        }
    }

    pub fn diag(&self, a: Fq, d: Fq) -> Option<GroupElement> {
        self.matrix(a, Fq::ZERO, Fq::ZERO, d)
    }

    pub fn decode(&self, code: u32) -> Option<GroupElement> {
        let q = self.q();
        let d = (code % q + 1) % q;
        let c = (code / q) % q;
        let b = (code / (q * q)) % q;
        let a = code / (q * q * q);
        if a >= q {
            return None;
        }
        let a = (a + 1) % q;
        self.matrix(Fq(a as u8), Fq(b as u8), Fq(c as u8), Fq(d as u8))
    }

    pub fn mat_mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let [a, b, c, d] = x.entries;
        let [e, f, g, h] = y.entries;
        GroupElement {
            entries: [
                self.add(self.mul(a, e), self.mul(b, g)),
                self.add(self.mul(a, f), self.mul(b, h)),
                self.add(self.mul(c, e), self.mul(d, g)),
                self.add(self.mul(c, f), self.mul(d, h)),
            ],
            det: self.mul(x.det, y.det),
        }
    }

    pub fn mat_inv(&self, x: &GroupElement) -> GroupElement {
        let [a, b, c, d] = x.entries;
        let k = self.inv(x.det).expect("invertible");
        GroupElement {
            entries: [
                self.mul(k, d),
                self.mul(k, self.neg(b)),
                self.mul(k, self.neg(c)),
                self.mul(k, a),
            ],
            det: k,
        }
    }

    pub fn mat_pow(&self, x: &GroupElement, mut n: u64) -> GroupElement {
        let mut base = *x;
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// `y^-1 · x · y`.
    pub fn conjugate_by(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.mat_mul(&self.mat_inv(y), &self.mat_mul(x, y))
    }

    pub fn element_order(&self, x: &GroupElement) -> u32 {
        let id = self.identity();
        let mut y = *x;
        let mut n = 1;
        while y != id {
            y = self.mat_mul(&y, x);
            n += 1;
        }
        n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    /// `{g ∈ GL2 : det g ∈ D}` for the unique subgroup `D ≤ F_q^x` of the
    /// given order. Order `q - 1` is `GL2`, order 1 is `SL2`.
    DetSubgroup { d_order: u32 },
    /// Upper-triangular matrices.
    Borel,
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    representative: GroupElement,
    size: usize,
    element_order: u32,
    members: Vec<u32>,
}

impl ConjClass {
    pub fn representative(&self) -> &GroupElement {
        &self.representative
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn element_order(&self) -> u32 {
        self.element_order
    }

    /// Indices into [`GroupModel::elements`].
    pub fn members(&self) -> &[u32] {
        &self.members
    }
}

const ABSENT: u32 = u32::MAX;

#[derive(Debug)]
pub struct GroupModel {
    tower: Arc<FieldTower>,
    kind: GroupKind,
    elements: Vec<GroupElement>,
    inverses: Vec<u32>,
    index: Vec<u32>,
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

fn check_kind(tower: &FieldTower, kind: GroupKind) -> Result<()> {
    if let GroupKind::DetSubgroup { d_order } = kind {
        if d_order == 0 || (tower.q() - 1) % d_order != 0 {
            return Err(Error::NotADeterminantSubgroup {
                order: d_order,
                q: tower.q(),
            });
        }
    }
    Ok(())
}

fn in_kind(tower: &FieldTower, kind: GroupKind, x: &GroupElement) -> bool {
    match kind {
        GroupKind::DetSubgroup { d_order } => {
            // D = <gamma1^((q-1)/|D|)>
            let step = (tower.q() - 1) / d_order;
            tower.log(x.det()).is_some_and(|l| l % step == 0)
        }
        GroupKind::Borel => x.entries()[2] == Fq::ZERO,
    }
}

impl GroupModel {
    /// Enumerates the group and partitions it into conjugacy classes.
    pub fn build(tower: Arc<FieldTower>, kind: GroupKind) -> Result<Self> {
        let mut g = Self::enumerate(tower, kind)?;
        g.compute_classes();
        Ok(g)
    }

    pub fn gl2(tower: Arc<FieldTower>) -> Result<Self> {
        let d_order = tower.q() - 1;
        Self::build(tower, GroupKind::DetSubgroup { d_order })
    }

    pub fn sl2(tower: Arc<FieldTower>) -> Result<Self> {
        Self::build(tower, GroupKind::DetSubgroup { d_order: 1 })
    }

    pub fn borel(tower: Arc<FieldTower>) -> Result<Self> {
        Self::build(tower, GroupKind::Borel)
    }

    /// Rebuilds a model from a previously computed class assignment
    /// (element index -> class index), skipping the orbit computation.
    pub fn from_class_assignment(
        tower: Arc<FieldTower>,
        kind: GroupKind,
        class_of: Vec<u32>,
    ) -> Result<Self> {
        let mut g = Self::enumerate(tower, kind)?;
        if class_of.len() != g.elements.len() {
            return Err(Error::InvalidClassData(format!(
                "{} assignments for {} elements",
                class_of.len(),
                g.elements.len()
            )));
        }
        let n_classes = class_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); n_classes];
        for (i, &c) in class_of.iter().enumerate() {
            members[c as usize].push(i as u32);
        }
        let mut classes = Vec::with_capacity(n_classes);
        let mut last_rep = None;
        for m in members {
            let Some(&first) = m.first() else {
                return Err(Error::InvalidClassData("empty class".into()));
            };
            if last_rep.is_some_and(|r| r >= first) || g.order() % m.len() != 0 {
                return Err(Error::InvalidClassData("class order or size".into()));
            }
            last_rep = Some(first);
            let rep = g.elements[first as usize];
            classes.push(ConjClass {
                representative: rep,
                size: m.len(),
                element_order: g.tower.element_order(&rep),
                members: m,
            });
        }
        g.classes = classes;
        g.class_of = class_of;
        Ok(g)
    }

    fn enumerate(tower: Arc<FieldTower>, kind: GroupKind) -> Result<Self> {
        check_kind(&tower, kind)?;
        let q = tower.q();
        let n_codes = (q * q * q * q) as usize;
        let mut index = vec![ABSENT; n_codes];
        let mut elements = Vec::new();
        for code in 0..n_codes as u32 {
            if let Some(x) = tower.decode(code) {
                if in_kind(&tower, kind, &x) {
                    index[code as usize] = elements.len() as u32;
                    elements.push(x);
                }
            }
        }
        let inverses = elements
            .iter()
            .map(|x| index[tower.mat_inv(x).code(q) as usize])
            .collect();
        Ok(GroupModel {
            tower,
            kind,
            elements,
            inverses,
            index,
            classes: Vec::new(),
            class_of: Vec::new(),
        })
    }

    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![ABSENT; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if class_of[i] != ABSENT {
                continue;
            }
            // i is the smallest unassigned code, hence the smallest member of its orbit
            let c = classes.len() as u32;
            let g = self.elements[i];
            let mut members = Vec::new();
            for (xi, x) in self.elements.iter().enumerate() {
                let xinv = &self.elements[self.inverses[xi] as usize];
                let y = self.tower.mat_mul(x, &self.tower.mat_mul(&g, xinv));
                let yi = self.index[y.code(self.tower.q()) as usize] as usize;
                if class_of[yi] == ABSENT {
                    class_of[yi] = c;
                    members.push(yi as u32);
                }
            }
            members.sort_unstable();
            classes.push(ConjClass {
                representative: g,
                size: members.len(),
                element_order: self.tower.element_order(&g),
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn is_gl2(&self) -> bool {
        self.kind
            == GroupKind::DetSubgroup {
                d_order: self.q() - 1,
            }
    }

    pub fn is_sl2(&self) -> bool {
        self.kind == GroupKind::DetSubgroup { d_order: 1 }
    }

    /// Order of the determinant image `D`, for determinant subgroups.
    pub fn det_order(&self) -> Option<u32> {
        match self.kind {
            GroupKind::DetSubgroup { d_order } => Some(d_order),
            GroupKind::Borel => None,
        }
    }

    pub fn label(&self) -> String {
        let q = self.q();
        match self.kind {
            _ if self.is_gl2() => format!("GL2(F_{q})"),
            _ if self.is_sl2() => format!("SL2(F_{q})"),
            GroupKind::DetSubgroup { d_order } => format!("GL2(F_{q})[|D|={d_order}]"),
            GroupKind::Borel => format!("B(F_{q})"),
        }
    }

    /// True if both models describe the same group (same field, same kind).
    pub fn same_group(&self, other: &GroupModel) -> bool {
        self.q() == other.q() && self.kind == other.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_assignment(&self) -> &[u32] {
        &self.class_of
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        let i = self.index[x.code(self.q()) as usize];
        (i != ABSENT).then_some(i as usize)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.index_of(x).is_some()
    }

    pub fn class_index_of(&self, x: &GroupElement) -> Option<usize> {
        self.index_of(x).map(|i| self.class_of[i] as usize)
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverses[i] as usize
    }

    /// True if every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &GroupModel) -> bool {
        self.q() == other.q() && self.elements.iter().all(|x| other.contains(x))
    }

    pub fn is_semisimple(&self, x: &GroupElement) -> bool {
        self.tower.element_order(x) % self.tower.p() != 0
    }

    pub fn is_unipotent(&self, x: &GroupElement) -> bool {
        let mut n = self.tower.element_order(x);
        while n % self.tower.p() == 0 {
            n /= self.tower.p();
        }
        n == 1
    }

    pub fn is_central(&self, x: &GroupElement) -> bool {
        self.elements
            .iter()
            .all(|y| self.tower.mat_mul(x, y) == self.tower.mat_mul(y, x))
    }

    /// Jordan decomposition `x = s·u = u·s` with `s` semisimple and `u`
    /// unipotent, both powers of `x`.
    pub fn jordan_decompose(&self, x: &GroupElement) -> (GroupElement, GroupElement) {
        let t = &self.tower;
        let p = t.p() as u64;
        let n = t.element_order(x) as u64;
        let mut ppart = 1u64;
        while n % (ppart * p) == 0 {
            ppart *= p;
        }
        let m = n / ppart;
        // alpha ≡ 0 mod p^a, alpha ≡ 1 mod m
        let alpha = (0..m)
            .map(|k| k * ppart)
            .find(|a| a % m == 1 % m)
            .expect("p^a is invertible mod m");
        let s = t.mat_pow(x, alpha);
        let u = t.mat_mul(x, &t.mat_inv(&s));
        (s, u)
    }

    /// The centralizer `C(s)` of a semisimple element.
    pub fn centralizer(&self, s: &GroupElement) -> Result<Vec<GroupElement>> {
        let order = self.tower.element_order(s);
        if order % self.tower.p() == 0 {
            return Err(Error::NotSemisimple { order });
        }
        Ok(self
            .elements
            .iter()
            .filter(|y| self.tower.mat_mul(s, y) == self.tower.mat_mul(y, s))
            .copied()
            .collect())
    }
}
