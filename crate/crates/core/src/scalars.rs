//! Exact coefficient ring `Q(sqrt q)[α^±1, β^±1, γ^±1]`.
//!
//! `α`, `β` are the character values on the two uniformizers of the split
//! torus, `γ` the value on the uniformizer `s` of the ramified torus. The
//! formal square root of `q` is written `r`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a + b·r` with `r² = q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SqrtQ {
    pub a: Rational,
    pub b: Rational,
}

impl SqrtQ {
    pub fn new(a: Rational, b: Rational) -> Self {
        SqrtQ { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        SqrtQ { a, b: Rational::zero() }
    }

    pub fn r() -> Self {
        SqrtQ { a: Rational::zero(), b: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &SqrtQ) -> SqrtQ {
        SqrtQ { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn neg(&self) -> SqrtQ {
        SqrtQ { a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &SqrtQ, q: u64) -> SqrtQ {
        let qq = Rational::from_integer(BigInt::from(q));
        SqrtQ {
            a: &self.a * &o.a + &self.b * &o.b * qq,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    /// `(a + b r)^-1 = (a - b r) / (a² - q b²)`; the norm is nonzero
    /// because `q` is not a rational square.
    pub fn inv(&self, q: u64) -> Result<SqrtQ> {
        if self.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        let qq = Rational::from_integer(BigInt::from(q));
        let norm = &self.a * &self.a - &self.b * &self.b * qq;
        Ok(SqrtQ { a: &self.a / &norm, b: -&self.b / &norm })
    }

    fn fmt_coeff(&self) -> String {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => self.a.to_string(),
            (true, false) if self.b.is_one() => "r".into(),
            (true, false) => format!("{}*r", self.b),
            (false, false) => format!("({} + {}*r)", self.a, self.b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Alpha,
    Beta,
    Gamma,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Alpha, Var::Beta, Var::Gamma];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Gamma => "gamma",
        }
    }
}

/// Exponent triple `(eα, eβ, eγ)`.
pub type Exps = [i64; 3];

/// Sparse Laurent polynomial in `α, β, γ` over `Q(r)`. Zero coefficients are
/// never stored, so structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    q: u64,
    terms: BTreeMap<Exps, SqrtQ>,
}

impl LaurentScalar {
    pub fn zero(q: u64) -> Self {
        LaurentScalar { q, terms: BTreeMap::new() }
    }

    pub fn one(q: u64) -> Self {
        Self::constant(q, SqrtQ::rational(Rational::one()))
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::constant(q, SqrtQ::rational(int(n)))
    }

    pub fn from_bigint(q: u64, n: BigInt) -> Self {
        Self::constant(q, SqrtQ::rational(Rational::from_integer(n)))
    }

    pub fn from_rational(q: u64, x: Rational) -> Self {
        Self::constant(q, SqrtQ::rational(x))
    }

    pub fn constant(q: u64, c: SqrtQ) -> Self {
        Self::monomial(q, [0, 0, 0], c)
    }

    pub fn monomial(q: u64, exps: Exps, c: SqrtQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentScalar { q, terms }
    }

    pub fn var(q: u64, v: Var) -> Self {
        Self::var_pow(q, v, 1)
    }

    pub fn var_pow(q: u64, v: Var, e: i64) -> Self {
        let mut exps = [0; 3];
        exps[v.index()] = e;
        Self::monomial(q, exps, SqrtQ::rational(Rational::one()))
    }

    /// The formal square root of `q`.
    pub fn r(q: u64) -> Self {
        Self::constant(q, SqrtQ::r())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &SqrtQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `Some(n)` when the scalar is an integer constant (no variables, no `r`).
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if *e != [0, 0, 0] || !c.b.is_zero() || !c.a.is_integer() {
            return None;
        }
        Some(c.a.to_integer())
    }

    fn check_q(&self, other: &Self) {
        assert_eq!(self.q, other.q, "scalars over different q");
    }

    fn insert_add(terms: &mut BTreeMap<Exps, SqrtQ>, e: Exps, c: SqrtQ) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self * &LaurentScalar::from_int(self.q, n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentScalar::one(self.q);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power of a unit monomial (negative exponents allowed).
    pub fn monomial_pow(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            if !self.is_monomial() {
                return Err(Error::NotAMonomial(self.len()));
            }
            Ok(self.pow(e as u32))
        } else {
            Ok(self.monomial_invert()?.pow((-e) as u32))
        }
    }

    pub fn monomial_invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        if self.terms.len() != 1 {
            return Err(Error::NotAMonomial(self.terms.len()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let inv = c.inv(self.q)?;
        Ok(Self::monomial(self.q, [-e[0], -e[1], -e[2]], inv))
    }

    /// Number of distinct exponent vectors after projecting onto `vars`.
    pub fn monomial_count(&self, vars: &[Var]) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        for e in self.terms.keys() {
            let mut p = [0i64; 3];
            for v in vars {
                p[v.index()] = e[v.index()];
            }
            seen.insert(p);
        }
        seen.len()
    }

    /// Evaluation at rational values of the variables (and optionally of `r`).
    pub fn specialize(&self, asg: &Assignment) -> Result<Rational> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut mono = Rational::one();
            for v in Var::ALL {
                let k = e[v.index()];
                if k == 0 {
                    continue;
                }
                let x = asg.get(v).ok_or(Error::MissingAssignment(v.name()))?;
                if x.is_zero() {
                    return Err(Error::ZeroAssignment(v.name()));
                }
                mono *= rat_pow(x, k);
            }
            let coeff = if c.b.is_zero() {
                c.a.clone()
            } else {
                let r = asg.r.as_ref().ok_or(Error::ResidualSqrtQ)?;
                &c.a + &c.b * r
            };
            total += mono * coeff;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> Vec<ScalarTermJson> {
        self.terms
            .iter()
            .map(|(e, c)| ScalarTermJson {
                ea: e[0],
                eb: e[1],
                eg: e[2],
                num_a: c.a.numer().to_string(),
                den_a: c.a.denom().to_string(),
                num_b: c.b.numer().to_string(),
                den_b: c.b.denom().to_string(),
            })
            .collect()
    }

    pub fn from_json(q: u64, terms: &[ScalarTermJson]) -> std::result::Result<Self, String> {
        let parse = |n: &str, d: &str| -> std::result::Result<Rational, String> {
            let n: BigInt = n.parse().map_err(|e| format!("{e}"))?;
            let d: BigInt = d.parse().map_err(|e| format!("{e}"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        };
        let mut out = LaurentScalar::zero(q);
        for t in terms {
            let c = SqrtQ::new(parse(&t.num_a, &t.den_a)?, parse(&t.num_b, &t.den_b)?);
            Self::insert_add(&mut out.terms, [t.ea, t.eb, t.eg], c);
        }
        Ok(out)
    }
}

pub fn rat_pow(x: &Rational, k: i64) -> Rational {
    let mut acc = Rational::one();
    let base = if k < 0 { x.recip() } else { x.clone() };
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Canonical JSON term: `{ea, eb, eg, num_a, den_a, num_b, den_b}`, big
/// integers written as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTermJson {
    pub ea: i64,
    pub eb: i64,
    pub eg: i64,
    pub num_a: String,
    pub den_a: String,
    pub num_b: String,
    pub den_b: String,
}

impl Serialize for LaurentScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Numeric values for the character variables and, for test-only runs,
/// for `r`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
    pub r: Option<Rational>,
}

impl Assignment {
    pub fn get(&self, v: Var) -> Option<&Rational> {
        match v {
            Var::Alpha => self.alpha.as_ref(),
            Var::Beta => self.beta.as_ref(),
            Var::Gamma => self.gamma.as_ref(),
        }
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, o: &LaurentScalar) -> LaurentScalar {
        self.check_q(o);
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            LaurentScalar::insert_add(&mut terms, *e, c.clone());
        }
        LaurentScalar { q: self.q, terms }
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, o: &LaurentScalar) -> LaurentScalar {
        self + &(-o)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            q: self.q,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, o: &LaurentScalar) -> LaurentScalar {
        self.check_q(o);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                LaurentScalar::insert_add(&mut terms, e, c1.mul(c2, self.q));
            }
        }
        LaurentScalar { q: self.q, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, o: LaurentScalar) -> LaurentScalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["a", "b", "g"];
        let mut first = true;
        for (e, c) in &self.terms {
            let mut mono = Vec::new();
            for i in 0..3 {
                match e[i] {
                    0 => {}
                    1 => mono.push(names[i].to_string()),
                    k => mono.push(format!("{}^{}", names[i], k)),
                }
            }
            let coeff = c.fmt_coeff();
            let (sign, coeff) = if c.b.is_zero() && c.a.is_negative() {
                ("-", (-&c.a).to_string())
            } else {
                ("+", coeff)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: u64 = 3;

    fn a() -> LaurentScalar {
        LaurentScalar::var(Q, Var::Alpha)
    }
    fn b() -> LaurentScalar {
        LaurentScalar::var(Q, Var::Beta)
    }
    fn g() -> LaurentScalar {
        LaurentScalar::var(Q, Var::Gamma)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&a() + &a(), a().scale_int(2));
        let r = LaurentScalar::r(Q);
        assert_eq!(&r * &r, LaurentScalar::from_int(Q, 3));
        let lhs = &(&a() + &b()) * &(&a() - &b());
        let rhs = &a().pow(2) - &b().pow(2);
        assert_eq!(lhs, rhs);
        assert!((&a() - &a()).is_zero());
    }

    #[test]
    fn invert_examples() {
        let x = &LaurentScalar::from_int(Q, 3) * &a().pow(2);
        let inv = x.monomial_invert().unwrap();
        assert_eq!(
            inv,
            LaurentScalar::monomial(Q, [-2, 0, 0], SqrtQ::rational(rat(1, 3)))
        );
        let rg = &LaurentScalar::r(Q) * &g();
        let expect = LaurentScalar::monomial(Q, [0, 0, -1], SqrtQ::new(int(0), rat(1, 3)));
        assert_eq!(rg.monomial_invert().unwrap(), expect);
        assert_eq!((&a() + &b()).monomial_invert(), Err(Error::NotAMonomial(2)));
        assert_eq!(LaurentScalar::zero(Q).monomial_invert(), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn specialize_examples() {
        let asg = Assignment { alpha: Some(int(2)), beta: Some(int(3)), ..Default::default() };
        assert_eq!((&a() * &b()).specialize(&asg).unwrap(), int(6));
        let asg = Assignment { gamma: Some(rat(1, 2)), ..Default::default() };
        assert_eq!(g().monomial_invert().unwrap().specialize(&asg).unwrap(), int(2));
        let asg = Assignment { alpha: Some(int(1)), beta: Some(int(0)), ..Default::default() };
        assert_eq!((&a() + &b()).specialize(&asg), Err(Error::ZeroAssignment("beta")));
        let asg = Assignment::default();
        assert_eq!(LaurentScalar::r(Q).specialize(&asg), Err(Error::ResidualSqrtQ));
    }

    #[test]
    fn monomial_count_examples() {
        let x = &(&a().pow(2) * &b()) + &(&a() * &b().pow(2));
        assert_eq!(x.monomial_count(&[Var::Alpha, Var::Beta]), 2);
        assert_eq!(LaurentScalar::zero(Q).monomial_count(&[Var::Alpha]), 0);
        let y = &(&LaurentScalar::r(Q) * &g().pow(3)) + &g().pow(3).scale_int(3);
        assert_eq!(y.monomial_count(&[Var::Gamma]), 1);
        // r·γ³ + q·γ³ is still one stored term with a mixed coefficient
        assert_eq!(y.len(), 1);
    }

    #[test]
    fn json_is_sorted_and_round_trips() {
        let x = &(&b() + &a()) + &LaurentScalar::r(Q);
        let js = x.to_json();
        let keys: Vec<_> = js.iter().map(|t| (t.ea, t.eb, t.eg)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(LaurentScalar::from_json(Q, &js).unwrap(), x);
    }

    #[test]
    fn display() {
        let x = &(&a().scale_int(2) - &b()) + &LaurentScalar::r(Q);
        assert_eq!(x.to_string(), "r - b + 2*a");
    }
}
