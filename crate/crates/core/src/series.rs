//! `F_q` for an odd prime `q`, and exact Laurent polynomials over it: the
//! elements of `F = F_q((t))` that occur in lattice computations. Only unit
//! inversion is truncated, to a precision chosen by the caller.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_odd_prime(q: u64) -> bool {
    if q < 3 || q.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field `F_q`. Elements are plain `u32` residues in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    q: u32,
}

pub type FqElem = u32;

impl Fq {
    pub fn new(q: u64) -> Result<Self> {
        if !is_odd_prime(q) || q > u32::MAX as u64 {
            return Err(Error::BadModulus(q));
        }
        Ok(Fq { q: q as u32 })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn reduce(self, x: i64) -> FqElem {
        x.rem_euclid(self.q as i64) as u32
    }

    pub fn add(self, a: FqElem, b: FqElem) -> FqElem {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(self, a: FqElem, b: FqElem) -> FqElem {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }

    pub fn neg(self, a: FqElem) -> FqElem {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(self, a: FqElem, b: FqElem) -> FqElem {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a as u64;
        let m = self.q as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }

    pub fn inv(self, a: FqElem) -> FqElem {
        debug_assert!(a != 0);
        self.pow(a, self.q as u64 - 2)
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(self, a: FqElem) -> bool {
        a == 0 || self.pow(a, (self.q as u64 - 1) / 2) == 1
    }

    pub fn smallest_nonresidue(self) -> FqElem {
        (2..self.q).find(|&x| !self.is_square(x)).expect("odd prime has a nonresidue")
    }

    /// A square root of a square, by search (desk-scale q).
    pub fn sqrt(self, a: FqElem) -> Option<FqElem> {
        (0..self.q).find(|&x| self.mul(x, x) == a)
    }
}

/// `Σ coeffs[i]·t^(offset+i)`, with nonzero first and last coefficients
/// unless the polynomial is zero (empty `coeffs`, offset 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    q: u32,
    offset: i64,
    coeffs: Vec<FqElem>,
}

impl LaurentPoly {
    pub fn zero(field: Fq) -> Self {
        LaurentPoly { q: field.q, offset: 0, coeffs: Vec::new() }
    }

    pub fn one(field: Fq) -> Self {
        Self::monomial(field, 1, 0)
    }

    pub fn constant(field: Fq, c: FqElem) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `c·t^k`.
    pub fn monomial(field: Fq, c: FqElem, k: i64) -> Self {
        Self::from_coeffs(field, k, vec![c % field.q])
    }

    /// `t^k`.
    pub fn t_pow(field: Fq, k: i64) -> Self {
        Self::monomial(field, 1, k)
    }

    pub fn from_coeffs(field: Fq, offset: i64, coeffs: Vec<FqElem>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c % field.q).collect();
        let mut p = LaurentPoly { q: field.q, offset, coeffs };
        p.normalize();
        p
    }

    /// From signed integer coefficients (reduced mod q).
    pub fn from_ints(field: Fq, offset: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, offset, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.offset = 0;
            }
            Some(i) => {
                let last = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..i);
                self.offset += i as i64;
            }
        }
    }

    pub fn field(&self) -> Fq {
        Fq { q: self.q }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// t-adic valuation; `None` stands for `+∞`.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.offset)
        }
    }

    /// Valuation with `+∞` mapped to `i64::MAX`, for `min` folds.
    pub fn val_or_max(&self) -> i64 {
        self.valuation().unwrap_or(i64::MAX)
    }

    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.offset + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> FqElem {
        let i = k - self.offset;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Coefficient of the lowest term (zero for the zero polynomial).
    pub fn lowest_coeff(&self) -> FqElem {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { q: self.q, offset: self.offset + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: FqElem) -> Self {
        let f = self.field();
        Self::from_coeffs(f, self.offset, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Reduction modulo `t^n O`: drops every term of degree `>= n`.
    pub fn truncate(&self, n: i64) -> Self {
        if self.is_zero() || self.offset >= n {
            return LaurentPoly::zero(self.field());
        }
        let keep = ((n - self.offset) as usize).min(self.coeffs.len());
        Self::from_coeffs(self.field(), self.offset, self.coeffs[..keep].to_vec())
    }

    /// Inverse of a unit of `O` modulo `t^precision`.
    pub fn invert_unit(&self, precision: u32) -> Result<Self> {
        match self.valuation() {
            Some(0) => {}
            Some(v) => return Err(Error::NotAUnit(v)),
            None => return Err(Error::NotAUnit(i64::MAX)),
        }
        let f = self.field();
        let n = precision as usize;
        let u0inv = f.inv(self.coeffs[0]);
        let mut out = vec![0u32; n];
        // out[k] = -u0^-1 · Σ_{j=1..k} u[j]·out[k-j]
        for k in 0..n {
            if k == 0 {
                out[0] = u0inv;
                continue;
            }
            let mut s = 0u32;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = f.add(s, f.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = f.mul(f.neg(s), u0inv);
        }
        Ok(Self::from_coeffs(f, 0, out))
    }

    /// Square root of a unit modulo `t^precision`, when the residue is a
    /// square (Hensel lifting, q odd).
    pub fn sqrt_unit(&self, precision: u32) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let f = self.field();
        let r0 = f.sqrt(self.coeffs[0])?;
        let n = precision as usize;
        let mut out = vec![0u32; n];
        out[0] = r0;
        let inv2r0 = f.inv(f.mul(2, r0));
        // (Σ out[i] t^i)^2 = self; solve for out[k] from the t^k coefficient
        for k in 1..n {
            let mut s = 0u32;
            for i in 1..k {
                s = f.add(s, f.mul(out[i], out[k - i]));
            }
            out[k] = f.mul(f.sub(self.coeff(k as i64), s), inv2r0);
        }
        Some(Self::from_coeffs(f, 0, out))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.q, o.q, "polynomials over different fields");
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson { offset: self.offset, coeffs: self.coeffs.clone() }
    }

    pub fn from_json(field: Fq, js: &PolyJson) -> Self {
        Self::from_coeffs(field, js.offset, js.coeffs.clone())
    }

    /// Ordering key used for deterministic enumeration output: dense
    /// coefficients over `[lo, hi)`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<FqElem> {
        (lo..hi).map(|k| self.coeff(k)).collect()
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.offset, &self.coeffs).cmp(&(other.offset, &other.coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub offset: i64,
    pub coeffs: Vec<u32>,
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.check(o);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let f = self.field();
        let lo = self.offset.min(o.offset);
        let hi = self.degree().unwrap().max(o.degree().unwrap());
        let coeffs = (lo..=hi).map(|k| f.add(self.coeff(k), o.coeff(k))).collect();
        LaurentPoly::from_coeffs(f, lo, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let f = self.field();
        LaurentPoly { q: self.q, offset: self.offset, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.check(o);
        let f = self.field();
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero(f);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        let m = self.q as u64;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % m;
            }
        }
        LaurentPoly::from_coeffs(f, self.offset + o.offset, out.into_iter().map(|c| c as u32).collect())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*t^{}", c, self.offset + i as i64)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}
