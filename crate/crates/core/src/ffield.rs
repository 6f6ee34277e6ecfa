//! Exact arithmetic in `F_q` and its quadratic extension `F_{q^2}`.
//!
//! Elements are small integer codes. An element of `F_q = F_p[y]/(g)` is
//! encoded by its base-`p` digit string `c_0 + c_1 p + ...`; an element
//! `a + b·alpha` of `F_{q^2} = F_q[x]/(f)` is encoded as `a + q·b`. Both
//! levels carry log/antilog tables with respect to a generator pair
//! `gamma2` (order `q^2 - 1`) and `gamma1 = gamma2^(q+1)`, so
//! multiplication is an index addition and the Frobenius `x -> x^q` is a
//! multiplication of the exponent by `q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size the enumeration budget admits.
pub const MAX_Q: u32 = 11;

/// Element of `F_q`, encoded as base-`p` digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fq(pub u8);

/// Element `a + b·alpha` of `F_{q^2}`, encoded as `a + q·b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fq2(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);
}

impl Fq2 {
    pub const ZERO: Fq2 = Fq2(0);
    pub const ONE: Fq2 = Fq2(1);
}

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    e: u32,
    q: u32,
    /// Non-leading coefficients (low to high) of the monic polynomial over
    /// `F_p` defining `F_q`; empty when `e = 1`.
    base_poly: Vec<u32>,
    /// `f = x^2 + c1·x + c0`, stored as `[c0, c1]`.
    quad: [Fq; 2],
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    gamma1: Fq,
    gamma2: Fq2,
    exp2: Vec<Fq2>,
    log2: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q = p^e`, or fails if `q` is not a prime power.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q)
        .find(|d| q % d == 0)
        .ok_or(Error::NotPrimePower(q))?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, e))
}

/// Multiplies two digit vectors over `F_p` modulo the monic polynomial with
/// non-leading coefficients `modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len();
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // y^e = -(m_0 + m_1 y + ... + m_{e-1} y^{e-1})
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            prod[k - e + i] = (prod[k - e + i] + (p - m) * c) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn digits(code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut c = code;
    (0..e)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Monic polynomials of degree at most 3 are irreducible iff they have no root.
fn has_root_mod_p(coeffs: &[u32], p: u32) -> bool {
    (0..p).any(|x| {
        let mut acc = 1u32;
        for &c in coeffs.iter().rev() {
            acc = (acc * x + c) % p;
        }
        acc == 0
    })
}

impl FieldTower {
    /// Builds the tower `F_q ⊂ F_{q^2}` for `q = p^e`.
    ///
    /// The defining polynomials are the lexicographically smallest monic
    /// irreducibles, comparing non-leading coefficient codes from the highest
    /// degree down; `gamma2` is the smallest code of multiplicative order
    /// `q^2 - 1`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrimePower(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| e >= 1 && q <= MAX_Q)
            .ok_or(Error::BudgetExceeded {
                q: p.saturating_pow(e),
                max: MAX_Q,
            })?;

        let base_poly = if e == 1 {
            Vec::new()
        } else {
            // code order is lexicographic in (c_{e-1}, ..., c_0)
            (0..q)
                .map(|code| digits(code, p, e))
                .find(|ds| !has_root_mod_p(ds, p))
                .expect("an irreducible polynomial of each degree exists")
        };

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                let prod = if e == 1 {
                    vec![(a * b) % p]
                } else {
                    poly_mul_mod(&da, &db, &base_poly, p)
                };
                add[(a * q + b) as usize] = undigits(&sum, p) as u8;
                mul[(a * q + b) as usize] = undigits(&prod, p) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u8)
            .collect();

        let mut tower = FieldTower {
            p,
            e,
            q,
            base_poly,
            quad: [Fq::ZERO, Fq::ZERO],
            add,
            mul,
            neg,
            gamma1: Fq::ONE,
            gamma2: Fq2::ONE,
            exp2: Vec::new(),
            log2: Vec::new(),
        };

        let quad = (0..q)
            .flat_map(|c1| (0..q).map(move |c0| [Fq(c0 as u8), Fq(c1 as u8)]))
            .find(|&[c0, c1]| {
                tower.elements().all(|x| {
                    let v = tower.add(tower.mul(x, tower.add(x, c1)), c0);
                    v != Fq::ZERO
                })
            })
            .expect("an irreducible quadratic exists");
        tower.quad = quad;

        let order = q * q - 1;
        let gamma2 = (1..q * q)
            .map(|c| Fq2(c as u16))
            .find(|&g| tower.slow_order2(g) == order)
            .expect("F_{q^2}^x is cyclic");
        let mut exp2 = Vec::with_capacity(order as usize);
        let mut log2 = vec![NO_LOG; (q * q) as usize];
        let mut x = Fq2::ONE;
        for k in 0..order {
            exp2.push(x);
            log2[x.0 as usize] = k;
            x = tower.slow_mul2(x, gamma2);
        }
        tower.gamma2 = gamma2;
        tower.exp2 = exp2;
        tower.log2 = log2;

        let g1 = tower.exp2[(q + 1) as usize];
        assert!(g1.0 < q as u16, "gamma2^(q+1) must lie in F_q");
        tower.gamma1 = Fq(g1.0 as u8);
        Ok(tower)
    }

    /// Tower for a field of order `q`.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::new(p, e)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `[c0, c1]` of `f = x^2 + c1 x + c0` defining `F_{q^2}`.
    pub fn quadratic(&self) -> [Fq; 2] {
        self.quad
    }

    /// Non-leading coefficients (over `F_p`, low to high) of the polynomial
    /// defining `F_q`.
    pub fn base_polynomial(&self) -> &[u32] {
        &self.base_poly
    }

    pub fn gamma1(&self) -> Fq {
        self.gamma1
    }

    pub fn gamma2(&self) -> Fq2 {
        self.gamma2
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(|c| Fq(c as u8))
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        (1..self.q).map(|c| Fq(c as u8))
    }

    pub fn elements2(&self) -> impl Iterator<Item = Fq2> {
        (0..self.q * self.q).map(|c| Fq2(c as u16))
    }

    // ---- F_q ----

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        let k = self.log(a)?;
        Some(self.gamma1_pow(self.q - 1 - k))
    }

    /// Discrete log base `gamma1`, in `0..q-1`.
    pub fn log(&self, a: Fq) -> Option<u32> {
        let l = self.log2[a.0 as usize];
        (l != NO_LOG).then(|| l / (self.q + 1))
    }

    pub fn gamma1_pow(&self, k: u32) -> Fq {
        let e = self.exp2[((k % (self.q - 1)) * (self.q + 1)) as usize];
        Fq(e.0 as u8)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let r = n.rem_euclid(self.p as i64) as u8;
        Fq(r)
    }

    // ---- F_{q^2} ----

    pub fn embed(&self, a: Fq) -> Fq2 {
        Fq2(a.0 as u16)
    }

    /// Splits `x = a + b·alpha` into `(a, b)`.
    pub fn coords(&self, x: Fq2) -> (Fq, Fq) {
        let q = self.q as u16;
        (Fq((x.0 % q) as u8), Fq((x.0 / q) as u8))
    }

    pub fn from_coords(&self, a: Fq, b: Fq) -> Fq2 {
        Fq2(a.0 as u16 + self.q as u16 * b.0 as u16)
    }

    /// Returns the value in `F_q` if `x` lies in the base field.
    pub fn as_base(&self, x: Fq2) -> Option<Fq> {
        let (a, b) = self.coords(x);
        (b == Fq::ZERO).then_some(a)
    }

    pub fn add2(&self, x: Fq2, y: Fq2) -> Fq2 {
        let (a, b) = self.coords(x);
        let (c, d) = self.coords(y);
        self.from_coords(self.add(a, c), self.add(b, d))
    }

    fn slow_mul2(&self, x: Fq2, y: Fq2) -> Fq2 {
        let (a, b) = self.coords(x);
        let (c, d) = self.coords(y);
        let [c0, c1] = self.quad;
        let bd = self.mul(b, d);
        // alpha^2 = -c1·alpha - c0
        let re = self.sub(self.mul(a, c), self.mul(bd, c0));
        let im = self.sub(self.add(self.mul(a, d), self.mul(b, c)), self.mul(bd, c1));
        self.from_coords(re, im)
    }

    fn slow_order2(&self, x: Fq2) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != Fq2::ONE {
            y = self.slow_mul2(y, x);
            k += 1;
        }
        k
    }

    pub fn mul2(&self, x: Fq2, y: Fq2) -> Fq2 {
        match (self.log2(x), self.log2(y)) {
            (Some(a), Some(b)) => self.gamma2_pow(a + b),
            _ => Fq2::ZERO,
        }
    }

    /// Discrete log base `gamma2`, in `0..q^2-1`.
    pub fn log2(&self, x: Fq2) -> Option<u32> {
        let l = self.log2[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn gamma2_pow(&self, k: u32) -> Fq2 {
        self.exp2[(k % (self.q * self.q - 1)) as usize]
    }

    pub fn pow2(&self, x: Fq2, n: u64) -> Fq2 {
        match self.log2(x) {
            Some(a) => {
                let m = (self.q * self.q - 1) as u64;
                self.gamma2_pow(((a as u64 * (n % m)) % m) as u32)
            }
            None if n == 0 => Fq2::ONE,
            None => Fq2::ZERO,
        }
    }

    /// The Frobenius `x -> x^q`.
    pub fn frobenius(&self, x: Fq2) -> Fq2 {
        self.pow2(x, self.q as u64)
    }

    /// The norm `F_{q^2}^x -> F_q^x`, `x -> x^(q+1)`.
    pub fn norm(&self, x: Fq2) -> Result<Fq> {
        let a = self.log2(x).ok_or(Error::ZeroNorm)?;
        Ok(self.gamma1_pow(a))
    }
}
