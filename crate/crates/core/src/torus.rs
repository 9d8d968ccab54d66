//! The quadratic étale algebra `F̃` acting on `F²`.
//!
//! Split: `F̃ = F ⊕ F` in the basis `e1, e2`, acting by diagonal matrices.
//! Ramified: `F̃ = F(s)`, `s² = t`, in the basis `{1, s}`; the vector `(x, y)`
//! is the element `x + y·s`.
//!
//! For a lattice `L`, `B_ex` is the smallest free rank-one `Õ`-module
//! containing it. Its class in `F̃*/Õ*` and the colength
//! `m = dim_{F_q}(B_ex / L)` label the `F̃*`-orbit of `L`.

use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice2;
use crate::mat::Mat2;
use crate::scalars::{LaurentScalar, Var};
use crate::series::{Fq, LaurentPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaleKind {
    Split,
    Ramified,
}

impl EtaleKind {
    pub const ALL: [EtaleKind; 2] = [EtaleKind::Split, EtaleKind::Ramified];

    /// Character variables that carry the torus class.
    pub fn vars(self) -> &'static [Var] {
        match self {
            EtaleKind::Split => &[Var::Alpha, Var::Beta],
            EtaleKind::Ramified => &[Var::Gamma],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EtaleKind::Split => "split",
            EtaleKind::Ramified => "ramified",
        }
    }

    /// `χ_c(t)`: `αβ` (split) or `γ²` (ramified).
    pub fn central_character(self, q: u64) -> LaurentScalar {
        TorusClass::of_t(self).chi(q)
    }
}

impl fmt::Display for EtaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EtaleKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "split" => Ok(EtaleKind::Split),
            "ramified" | "nonsplit" => Ok(EtaleKind::Ramified),
            other => Err(format!("unknown etale kind {other:?}")),
        }
    }
}

/// Class of an element of `F̃*` modulo `Õ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TorusClass {
    /// `(t^k1, t^k2)`.
    Split(i64, i64),
    /// `s^k`.
    Ramified(i64),
}

impl TorusClass {
    pub fn identity(kind: EtaleKind) -> Self {
        match kind {
            EtaleKind::Split => TorusClass::Split(0, 0),
            EtaleKind::Ramified => TorusClass::Ramified(0),
        }
    }

    /// Class of the uniformizer `t ∈ F*`.
    pub fn of_t(kind: EtaleKind) -> Self {
        match kind {
            EtaleKind::Split => TorusClass::Split(1, 1),
            EtaleKind::Ramified => TorusClass::Ramified(2),
        }
    }

    pub fn kind(self) -> EtaleKind {
        match self {
            TorusClass::Split(..) => EtaleKind::Split,
            TorusClass::Ramified(_) => EtaleKind::Ramified,
        }
    }

    pub fn is_identity(self) -> bool {
        self == TorusClass::identity(self.kind())
    }

    /// The unit monomial `χ(u)`.
    pub fn chi(self, q: u64) -> LaurentScalar {
        match self {
            TorusClass::Split(a, b) => &LaurentScalar::var_pow(q, Var::Alpha, a) * &LaurentScalar::var_pow(q, Var::Beta, b),
            TorusClass::Ramified(k) => LaurentScalar::var_pow(q, Var::Gamma, k),
        }
    }

    /// The matrix of the class representative `(t^k1, t^k2)` or `s^k`.
    pub fn matrix(self, f: Fq) -> Mat2 {
        match self {
            TorusClass::Split(a, b) => Mat2::diag_t(f, a, b),
            TorusClass::Ramified(k) => {
                let j = k.div_euclid(2);
                let tj = LaurentPoly::t_pow(f, j);
                if k.rem_euclid(2) == 0 {
                    Mat2::diag(tj.clone(), tj)
                } else {
                    embed(EtaleKind::Ramified, &LaurentPoly::zero(f), &tj).expect("s^k is invertible")
                }
            }
        }
    }
}

impl Add for TorusClass {
    type Output = TorusClass;
    fn add(self, o: TorusClass) -> TorusClass {
        match (self, o) {
            (TorusClass::Split(a, b), TorusClass::Split(c, d)) => TorusClass::Split(a + c, b + d),
            (TorusClass::Ramified(a), TorusClass::Ramified(b)) => TorusClass::Ramified(a + b),
            _ => panic!("torus classes of different kinds"),
        }
    }
}

impl Neg for TorusClass {
    type Output = TorusClass;
    fn neg(self) -> TorusClass {
        match self {
            TorusClass::Split(a, b) => TorusClass::Split(-a, -b),
            TorusClass::Ramified(k) => TorusClass::Ramified(-k),
        }
    }
}

/// Matrix of multiplication by the element with coordinates `(x, y)`.
pub fn embed(kind: EtaleKind, x: &LaurentPoly, y: &LaurentPoly) -> Result<Mat2> {
    let f = x.field();
    match kind {
        EtaleKind::Split => {
            if x.is_zero() || y.is_zero() {
                return Err(Error::NotInvertible);
            }
            Ok(Mat2::diag(x.clone(), y.clone()))
        }
        EtaleKind::Ramified => {
            // (x + ys)·1 = x + ys,  (x + ys)·s = yt + xs
            if x.is_zero() && y.is_zero() {
                return Err(Error::NotInvertible);
            }
            Ok(Mat2::new(x.clone(), &LaurentPoly::t_pow(f, 1) * y, y.clone(), x.clone()))
        }
    }
}

/// Class of `B_ex` and the colength `m = dim(B_ex / L)`.
pub fn b_ex(kind: EtaleKind, l: &Lattice2) -> (TorusClass, u32) {
    let vc = l.c().valuation();
    match kind {
        EtaleKind::Split => {
            let v1 = vc.map_or(l.a(), |v| v.min(l.a()));
            let v2 = l.b();
            (TorusClass::Split(v1, v2), (l.det_val() - v1 - v2) as u32)
        }
        EtaleKind::Ramified => {
            // s-valuation of x + ys is min(2 v(x), 2 v(y) + 1)
            let g1 = 2 * l.a();
            let g2 = vc.map_or(2 * l.b() + 1, |v| (2 * v).min(2 * l.b() + 1));
            let k = g1.min(g2);
            // s^k Õ has O-determinant valuation k
            (TorusClass::Ramified(k), (l.det_val() - k) as u32)
        }
    }
}

/// Representative of the orbit with invariant `m` whose `B_ex` is `Õ`.
pub fn orbit_representative(kind: EtaleKind, f: Fq, m: u32) -> Lattice2 {
    let m = m as i64;
    match kind {
        // columns (t^m, 0), (1, 1)
        EtaleKind::Split => Lattice2::from_parts(m, 0, LaurentPoly::one(f)),
        // O·1 ⊕ O·t^m s
        EtaleKind::Ramified => Lattice2::diagonal(f, 0, m),
    }
}

/// Orbit invariant and torus class of a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Normalized {
    pub m: u32,
    pub class: TorusClass,
}

impl Normalized {
    pub fn chi(&self, q: u64) -> LaurentScalar {
        self.class.chi(q)
    }
}

pub fn normalize(kind: EtaleKind, l: &Lattice2) -> Normalized {
    let (class, m) = b_ex(kind, l);
    Normalized { m, class }
}

/// `u^-1 · L` for the class representative `u` of `B_ex(L)`.
pub fn untwist(kind: EtaleKind, l: &Lattice2) -> Lattice2 {
    let (class, _) = b_ex(kind, l);
    l.apply(&(-class).matrix(l.field())).expect("torus elements are invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Coweight;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    fn p(f: Fq, off: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_ints(f, off, cs)
    }

    #[test]
    fn embed_examples() {
        let f = f3();
        assert_eq!(embed(EtaleKind::Split, &p(f, 1, &[1]), &p(f, 0, &[1])).unwrap(), Mat2::diag_t(f, 1, 0));
        let s = embed(EtaleKind::Ramified, &LaurentPoly::zero(f), &LaurentPoly::one(f)).unwrap();
        assert_eq!(s, Mat2::new(LaurentPoly::zero(f), p(f, 1, &[1]), LaurentPoly::one(f), LaurentPoly::zero(f)));
        assert_eq!(s.mul(&s), Mat2::diag_t(f, 1, 1));
        assert_eq!(embed(EtaleKind::Split, &LaurentPoly::zero(f), &LaurentPoly::one(f)), Err(Error::NotInvertible));
    }

    #[test]
    fn embed_is_multiplicative() {
        let f = Fq::new(5).unwrap();
        let (x1, y1) = (p(f, 0, &[1, 2]), p(f, -1, &[3]));
        let (x2, y2) = (p(f, 1, &[4, 0, 1]), p(f, 0, &[2, 2]));
        // (x1 + y1 s)(x2 + y2 s) = (x1x2 + t y1y2) + (x1y2 + x2y1) s
        let x = &(&x1 * &x2) + &(&p(f, 1, &[1]) * &(&y1 * &y2));
        let y = &(&x1 * &y2) + &(&x2 * &y1);
        let lhs = embed(EtaleKind::Ramified, &x, &y).unwrap();
        let rhs = embed(EtaleKind::Ramified, &x1, &y1).unwrap().mul(&embed(EtaleKind::Ramified, &x2, &y2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn b_ex_examples() {
        let f = f3();
        let o = Lattice2::standard(f);
        for kind in EtaleKind::ALL {
            assert_eq!(b_ex(kind, &o), (TorusClass::identity(kind), 0));
        }
        for m in 0..4 {
            let gens = Mat2::from_columns([p(f, m, &[1]), LaurentPoly::zero(f)], [LaurentPoly::one(f), LaurentPoly::one(f)]);
            let l = Lattice2::canonicalize(&gens).unwrap();
            assert_eq!(b_ex(EtaleKind::Split, &l), (TorusClass::Split(0, 0), m as u32));
        }
        let l = Lattice2::diagonal(f, 0, 2);
        assert_eq!(b_ex(EtaleKind::Ramified, &l), (TorusClass::Ramified(0), 2));
    }

    #[test]
    fn representatives() {
        let f = f3();
        assert_eq!(orbit_representative(EtaleKind::Split, f, 0), Lattice2::standard(f));
        let gens = Mat2::from_columns([p(f, 2, &[1]), LaurentPoly::zero(f)], [LaurentPoly::one(f), LaurentPoly::one(f)]);
        assert_eq!(orbit_representative(EtaleKind::Split, f, 2), Lattice2::canonicalize(&gens).unwrap());
        assert_eq!(orbit_representative(EtaleKind::Ramified, f, 1), Lattice2::diagonal(f, 0, 1));
        for kind in EtaleKind::ALL {
            for m in 0..5 {
                assert_eq!(b_ex(kind, &orbit_representative(kind, f, m)), (TorusClass::identity(kind), m));
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let f = f3();
        let q = 3;
        let rep = orbit_representative(EtaleKind::Split, f, 0);
        let n = normalize(EtaleKind::Split, &rep.scale_t(1));
        assert_eq!((n.m, n.chi(q)), (0, EtaleKind::Split.central_character(q)));
        // span{(t³,0),(t,1)}: B_ex = tO ⊕ O, so the class is (1,0) and m = 3 - 1
        let l = Lattice2::from_parts(3, 0, p(f, 1, &[1]));
        let n = normalize(EtaleKind::Split, &l);
        assert_eq!(n.m, 2);
        assert_eq!(n.chi(q), LaurentScalar::var(q, Var::Alpha));
        assert_eq!(untwist(EtaleKind::Split, &l), orbit_representative(EtaleKind::Split, f, 2));
    }

    #[test]
    fn split_open_stratum_formula() {
        let f = f3();
        let o = Lattice2::standard(f);
        for l in o.closure_members(Coweight::new(4, 0)) {
            if l.b() == 0 {
                let vc = l.c().valuation().unwrap_or(i64::MAX);
                let expect = (l.a() - vc.min(l.a())).max(0) as u32;
                assert_eq!(normalize(EtaleKind::Split, &l).m, expect);
            }
        }
    }
}
