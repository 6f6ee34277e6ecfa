//! Complex class functions on enumerated groups.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Absolute tolerance for equality and integrality of character values.
pub const TOLERANCE: f64 = 1e-6;

/// `exp(2πi·k/n)`.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}

/// Rounds `z` to the nearest integer, failing if it is not within tolerance.
pub fn nearest_integer(z: Complex64) -> Result<i64> {
    let r = z.re.round();
    if (z - Complex64::new(r, 0.0)).norm() < TOLERANCE {
        Ok(r as i64)
    } else {
        Err(Error::NotNearInteger(z.re))
    }
}

/// One complex value per conjugacy class, in the owner's class order.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    owner: Arc<GroupModel>,
    values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(owner: Arc<GroupModel>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), owner.classes().len(), "one value per class");
        ClassFunction { owner, values }
    }

    pub fn from_fn(owner: Arc<GroupModel>, f: impl Fn(&GroupElement) -> Complex64) -> Self {
        let values = owner.classes().iter().map(|c| f(c.representative())).collect();
        ClassFunction { owner, values }
    }

    pub fn zero(owner: Arc<GroupModel>) -> Self {
        let n = owner.classes().len();
        ClassFunction::new(owner, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn trivial(owner: Arc<GroupModel>) -> Self {
        let n = owner.classes().len();
        ClassFunction::new(owner, vec![Complex64::new(1.0, 0.0); n])
    }

    /// `omega_k ∘ det` with `omega_k(gamma1^a) = exp(2πi·k·a/(q-1))`.
    pub fn det_character(owner: Arc<GroupModel>, k: u32) -> Self {
        let t = owner.tower().clone();
        let n = (t.q() - 1) as u64;
        ClassFunction::from_fn(owner, |x| {
            root_of_unity(k as u64 * t.log(x.det()).unwrap() as u64, n)
        })
    }

    pub fn owner(&self) -> &Arc<GroupModel> {
        &self.owner
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at(&self, x: &GroupElement) -> Option<Complex64> {
        self.owner.class_index_of(x).map(|c| self.values[c])
    }

    /// Value at the identity.
    pub fn degree(&self) -> Complex64 {
        self.value_at(&self.owner.tower().identity()).unwrap()
    }

    fn check_owner(&self, other: &ClassFunction) -> Result<()> {
        if self.owner.same_group(&other.owner) {
            Ok(())
        } else {
            Err(Error::OwnerMismatch(self.owner.label(), other.owner.label()))
        }
    }

    /// `<f, g> = |G|^-1 Σ_x f(x)·conj(g(x))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Complex64> {
        self.check_owner(other)?;
        let sum: Complex64 = self
            .owner
            .classes()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(c, (a, b))| a * b.conj() * c.size() as f64)
            .sum();
        Ok(sum / self.owner.order() as f64)
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner_product(self).unwrap().re
    }

    /// Max absolute difference over classes.
    pub fn max_deviation(&self, other: &ClassFunction) -> Result<f64> {
        self.check_owner(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &ClassFunction) -> bool {
        self.max_deviation(other).is_ok_and(|d| d < TOLERANCE)
    }

    /// Restriction to a subgroup `h`; each `h`-class takes the value of the
    /// class of `self`'s owner containing its representative.
    pub fn restrict(&self, h: &Arc<GroupModel>) -> Result<ClassFunction> {
        let mut values = Vec::with_capacity(h.classes().len());
        for c in h.classes() {
            let v = self.value_at(c.representative()).ok_or_else(|| Error::NotContained {
                sub: h.label(),
                sup: self.owner.label(),
            })?;
            values.push(v);
        }
        Ok(ClassFunction::new(h.clone(), values))
    }

    /// Frobenius induction from the owner up to `g`:
    /// `Ind f(y) = |S|^-1 Σ_{x ∈ G, x^-1 y x ∈ S} f(x^-1 y x)`.
    pub fn induce(&self, g: &Arc<GroupModel>) -> Result<ClassFunction> {
        let s = &self.owner;
        if !s.is_subgroup_of(g) {
            return Err(Error::NotContained {
                sub: s.label(),
                sup: g.label(),
            });
        }
        let t = g.tower();
        let values = g
            .classes()
            .iter()
            .map(|c| {
                let y = c.representative();
                let sum: Complex64 = g
                    .elements()
                    .iter()
                    .enumerate()
                    .filter_map(|(i, x)| {
                        let xinv = &g.elements()[g.inverse_of(i)];
                        self.value_at(&t.mat_mul(xinv, &t.mat_mul(y, x)))
                    })
                    .sum();
                sum / s.order() as f64
            })
            .collect();
        Ok(ClassFunction::new(g.clone(), values))
    }

    /// `chi ⊗ (omega_k ∘ det)`.
    pub fn twist(&self, k: u32) -> ClassFunction {
        let omega = ClassFunction::det_character(self.owner.clone(), k);
        self * &omega
    }

    pub fn scale(&self, c: f64) -> ClassFunction {
        ClassFunction::new(self.owner.clone(), self.values.iter().map(|v| v * c).collect())
    }

    fn zip_with(&self, other: &ClassFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> ClassFunction {
        assert!(self.owner.same_group(&other.owner), "class functions on different groups");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        ClassFunction::new(self.owner.clone(), values)
    }
}

impl Add for &ClassFunction {
    type Output = ClassFunction;

    fn add(self, rhs: &ClassFunction) -> ClassFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ClassFunction {
    type Output = ClassFunction;

    fn sub(self, rhs: &ClassFunction) -> ClassFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Pointwise product.
impl Mul for &ClassFunction {
    type Output = ClassFunction;

    fn mul(self, rhs: &ClassFunction) -> ClassFunction {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &ClassFunction {
    type Output = ClassFunction;

    fn neg(self) -> ClassFunction {
        self.scale(-1.0)
    }
}

/// The character `[[a, b], [0, d]] -> omega_j1(a)·omega_j2(d)` of a Borel
/// subgroup, inflated from the split torus.
pub fn borel_character(b: Arc<GroupModel>, j1: u32, j2: u32) -> ClassFunction {
    let t = b.tower().clone();
    let n = (t.q() - 1) as u64;
    ClassFunction::from_fn(b, |x| {
        let [a, _, _, d] = x.entries();
        let k = j1 as u64 * t.log(a).unwrap() as u64 + j2 as u64 * t.log(d).unwrap() as u64;
        root_of_unity(k, n)
    })
}

/// `Ind_B^G(omega_j1 ⊗ omega_j2)`.
pub fn principal_series(g: &Arc<GroupModel>, b: &Arc<GroupModel>, j1: u32, j2: u32) -> Result<ClassFunction> {
    borel_character(b.clone(), j1, j2).induce(g)
}
