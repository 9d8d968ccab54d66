//! Spherical Hecke algebra of GL₂ over `F_q((t))`.
//!
//! Elements are finite combinations of double-coset indicators `T_λ`.
//! Structure constants come from lattice counting: the coefficient of `T_ν`
//! in `T_λ ∗ T_μ` is the number of `L'` with `pos(O², L') = λ` and
//! `pos(L', L_ν) = μ`, for the fixed representative `L_ν = diag(t^ν1, t^ν2)·O²`.
//!
//! The Satake basis `A_λ` is pinned by the Pieri recursion
//! `A_(d+1,0) = A_(1,0) ∗ A_(d,0) − A_(1,1) ∗ A_(d−1,0)` together with
//! `A_(a,b) = A_(1,1)^b ∗ A_(a−b,0)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{Coweight, Lattice2};
use crate::scalars::{LaurentScalar, Rational};
use crate::series::Fq;
use crate::torus::EtaleKind;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckeElement {
    q: u64,
    terms: BTreeMap<Coweight, LaurentScalar>,
}

impl HeckeElement {
    pub fn zero(q: u64) -> Self {
        HeckeElement { q, terms: BTreeMap::new() }
    }

    /// The basis element `T_λ`.
    pub fn t(q: u64, lambda: Coweight) -> Self {
        Self::term(lambda, LaurentScalar::one(q))
    }

    pub fn unit(q: u64) -> Self {
        Self::t(q, Coweight::new(0, 0))
    }

    pub fn term(lambda: Coweight, c: LaurentScalar) -> Self {
        let q = c.q();
        let mut h = HeckeElement::zero(q);
        h.add_term(lambda, c);
        h
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Coweight, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: Coweight) -> LaurentScalar {
        self.terms.get(&lambda).cloned().unwrap_or_else(|| LaurentScalar::zero(self.q))
    }

    pub fn add_term(&mut self, lambda: Coweight, c: LaurentScalar) {
        let s = &self.coeff(lambda) + &c;
        if s.is_zero() {
            self.terms.remove(&lambda);
        } else {
            self.terms.insert(lambda, s);
        }
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(*l, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &HeckeElement) -> HeckeElement {
        self.add(&o.scale(&LaurentScalar::from_int(self.q, -1)))
    }

    pub fn scale(&self, s: &LaurentScalar) -> HeckeElement {
        let mut out = HeckeElement::zero(self.q);
        for (l, c) in &self.terms {
            out.add_term(*l, c * s);
        }
        out
    }

    /// `T_(k,k) ∗ self`: the central coset shifts every coweight.
    pub fn shift(&self, k: i64) -> HeckeElement {
        HeckeElement { q: self.q, terms: self.terms.iter().map(|(l, c)| (l.shift(k), c.clone())).collect() }
    }

    /// Image in `H_{χ_c}`: `T_(a1,a2) ↦ χ_c(t)^a2 · T_(a1−a2, 0)`.
    pub fn central_normal_form(&self, kind: EtaleKind) -> Result<HeckeElement> {
        let chi_c = kind.central_character(self.q);
        let mut out = HeckeElement::zero(self.q);
        for (l, c) in &self.terms {
            out.add_term(Coweight::new(l.length(), 0), c * &chi_c.monomial_pow(l.a2)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> HeckeJson {
        HeckeJson {
            terms: self.terms.iter().map(|(l, c)| HeckeTermJson { coweight: *l, scalar: c.clone() }).collect(),
        }
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, c)| format!("({c})·T{l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeJson {
    pub terms: Vec<HeckeTermJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeTermJson {
    pub coweight: Coweight,
    pub scalar: LaurentScalar,
}

type Structure = Arc<BTreeMap<Coweight, u64>>;

/// Convolution with memoized basis structure constants for a fixed `q`.
#[derive(Debug)]
pub struct HeckeAlgebra {
    field: Fq,
    exec: Exec,
    constants: Mutex<HashMap<(Coweight, Coweight), Structure>>,
    satake: Mutex<HashMap<i64, HeckeElement>>,
}

impl HeckeAlgebra {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_exec(q, Exec::default())
    }

    pub fn with_exec(q: u64, exec: Exec) -> Result<Self> {
        Ok(HeckeAlgebra {
            field: Fq::new(q)?,
            exec,
            constants: Mutex::new(HashMap::new()),
            satake: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    /// Structure constants of `T_λ ∗ T_μ` by lattice counting.
    pub fn basis_product(&self, lambda: Coweight, mu: Coweight) -> Structure {
        // T_(1,1) is central, so only the lengths matter up to a shift
        let shift = lambda.a2 + mu.a2;
        let (l, m) = (Coweight::new(lambda.length(), 0), Coweight::new(mu.length(), 0));
        let key = if l <= m { (l, m) } else { (m, l) };
        let cached = self.constants.lock().unwrap().get(&key).cloned();
        let base = match cached {
            Some(s) => s,
            None => {
                let s = Arc::new(self.count_basis_product(key.0, key.1));
                self.constants.lock().unwrap().insert(key, s.clone());
                s
            }
        };
        if shift == 0 {
            return base;
        }
        Arc::new(base.iter().map(|(nu, n)| (nu.shift(shift), *n)).collect())
    }

    fn count_basis_product(&self, lambda: Coweight, mu: Coweight) -> BTreeMap<Coweight, u64> {
        let f = self.field;
        let origin = Lattice2::standard(f);
        let middles = origin.enumerate_in_position_with(lambda, self.exec);
        let deg = lambda.degree() + mu.degree();
        let nus: Vec<Coweight> = ((lambda.a2 + mu.a2)..=deg.div_euclid(2))
            .map(|n2| Coweight::new(deg - n2, n2))
            .collect();
        let counts = self.exec.map(nus, |nu| {
            let target = Lattice2::diagonal(f, nu.a1, nu.a2);
            let n = middles.iter().filter(|l| l.relative_position(&target) == mu).count() as u64;
            (nu, n)
        });
        counts.into_iter().filter(|(_, n)| *n > 0).collect()
    }

    pub fn convolve(&self, h1: &HeckeElement, h2: &HeckeElement) -> HeckeElement {
        let q = self.q();
        let mut out = HeckeElement::zero(q);
        for (l, x) in &h1.terms {
            for (m, y) in &h2.terms {
                let xy = x * y;
                for (nu, n) in self.basis_product(*l, *m).iter() {
                    out.add_term(*nu, &xy * &LaurentScalar::from_bigint(q, BigInt::from(*n)));
                }
            }
        }
        out
    }

    /// Satake basis element `A_λ`.
    pub fn satake_basis(&self, lambda: Coweight) -> HeckeElement {
        self.satake_row(lambda.length()).shift(lambda.a2)
    }

    /// `A_(d,0)`.
    fn satake_row(&self, d: i64) -> HeckeElement {
        let q = self.q();
        if let Some(h) = self.satake.lock().unwrap().get(&d) {
            return h.clone();
        }
        let h = match d {
            0 => HeckeElement::unit(q),
            1 => HeckeElement::t(q, Coweight::new(1, 0)),
            _ => {
                let a10 = HeckeElement::t(q, Coweight::new(1, 0));
                let a11 = HeckeElement::t(q, Coweight::new(1, 1));
                let up = self.convolve(&a10, &self.satake_row(d - 1));
                let down = self.convolve(&a11, &self.satake_row(d - 2));
                up.sub(&down)
            }
        };
        self.satake.lock().unwrap().insert(d, h.clone());
        h
    }

    /// Coordinates of `h` in the Satake basis. The change of basis is
    /// unitriangular in dominance order, so no division is needed.
    pub fn in_satake_basis(&self, h: &HeckeElement) -> BTreeMap<Coweight, LaurentScalar> {
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        while let Some((&top, c)) = rest.terms.iter().max_by_key(|(l, _)| (l.length(), l.a1)) {
            let c = c.clone();
            rest = rest.sub(&self.satake_basis(top).scale(&c));
            out.insert(top, c);
        }
        out
    }
}

/// Multiplicities of `V_λ ⊗ V_μ` for GL₂.
pub fn clebsch_gordan(lambda: Coweight, mu: Coweight) -> BTreeMap<Coweight, u64> {
    let (n, m) = (lambda.length(), mu.length());
    let s = lambda.a2 + mu.a2;
    (0..=n.min(m)).map(|k| (Coweight::new(n + m - k + s, k + s), 1)).collect()
}

/// Character of the irreducible GL₂-module of highest weight `λ` at the
/// diagonal element `diag(e1, e2)`.
pub fn schur_gl2(lambda: Coweight, e1: &Rational, e2: &Rational) -> Result<Rational> {
    if e1.is_zero() || e2.is_zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let n = lambda.length() as usize;
    let mut sum = Rational::zero();
    let mut p1 = Rational::one();
    for i in 0..=n {
        let mut term = p1.clone();
        for _ in 0..(n - i) {
            term *= e2;
        }
        sum += term;
        p1 *= e1;
    }
    Ok(crate::scalars::rat_pow(&(e1 * e2), lambda.a2) * sum)
}
