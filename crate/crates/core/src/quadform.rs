//! Symmetric `O`-valued forms on `O²` up to similitude `B ↦ A·B·ᵗA·ε`
//! (`A ∈ GL₂(O)`, `ε ∈ O*`), for odd residue characteristic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Mat2;
use crate::series::{Fq, FqElem, LaurentPoly};

/// Symmetric matrix with entries in `O` and nonzero determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrixO {
    m: Mat2,
}

impl SymMatrixO {
    pub fn new(m: Mat2) -> Result<Self> {
        if m.m[0][1] != m.m[1][0] || m.min_val() < 0 || m.det().is_zero() {
            return Err(Error::NotIntegralForm);
        }
        Ok(SymMatrixO { m })
    }

    pub fn from_entries(b11: LaurentPoly, b12: LaurentPoly, b22: LaurentPoly) -> Result<Self> {
        Self::new(Mat2::new(b11, b12.clone(), b12, b22))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn field(&self) -> Fq {
        self.m.field()
    }

    pub fn det_val(&self) -> i64 {
        self.m.det().valuation().unwrap()
    }

    pub fn default_precision(&self) -> u32 {
        (2 * self.det_val() + 2) as u32
    }

    /// `A·B·ᵗA·ε`.
    pub fn transform(&self, a: &Mat2, eps: &LaurentPoly) -> Result<SymMatrixO> {
        SymMatrixO::new(a.mul(&self.m).mul(&a.transpose()).scale(eps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    pub fn of(f: Fq, x: FqElem) -> Self {
        if f.is_square(x) {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareClass::Square => "Square",
            SquareClass::NonSquare => "NonSquare",
        })
    }
}

/// `(a, b)` with `a ≥ b ≥ 0`, refined by the square class of the unit part
/// of the discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhiInvariant {
    pub a: i64,
    pub b: i64,
    pub delta: SquareClass,
}

impl fmt::Display for PhiInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoverType {
    SplitCover,
    RamifiedCover,
    UnramifiedNonsplitCover,
}

impl CoverType {
    /// The unramified nonsplit case only exists over a non-closed residue field.
    pub fn outside_geometric_scope(self) -> bool {
        self == CoverType::UnramifiedNonsplitCover
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub invariant: PhiInvariant,
    pub a: Mat2,
    pub eps: LaurentPoly,
    /// Normalized unit: `1` or the smallest nonresidue.
    pub w: LaurentPoly,
    pub precision: u32,
}

impl Diagonalization {
    /// `diag(t^a, t^b·w)`.
    pub fn normal_form(&self) -> Mat2 {
        let f = self.w.field();
        Mat2::diag(LaurentPoly::t_pow(f, self.invariant.a), self.w.shift(self.invariant.b))
    }
}

fn elementary(f: Fq, x: [[i64; 2]; 2]) -> Mat2 {
    let c = |v: i64| LaurentPoly::constant(f, f.reduce(v));
    Mat2::new(c(x[0][0]), c(x[0][1]), c(x[1][0]), c(x[1][1]))
}

/// Brings `B` to `diag(t^a, t^b·w)` modulo `t^precision`.
pub fn diagonalize(form: &SymMatrixO, precision: u32) -> Result<Diagonalization> {
    let f = form.field();
    if f.q() == 2 {
        return Err(Error::BadModulus(2));
    }
    let dv = form.det_val();
    if dv >= precision as i64 {
        return Err(Error::PrecisionExhausted { precision, det_val: dv });
    }
    let p = precision as i64;
    let apply = |a: &Mat2| a.mul(&form.m).mul(&a.transpose()).truncate(p);

    let mut a = Mat2::identity(f);
    let mut bm = form.m.truncate(p);
    let v = |x: &LaurentPoly| x.val_or_max();
    if v(&bm.m[0][1]) < v(&bm.m[0][0]).min(v(&bm.m[1][1])) {
        // e1 ↦ e1 + e2 puts the minimal valuation on the diagonal (2 is a unit)
        a = elementary(f, [[1, 1], [0, 1]]).mul(&a);
        bm = apply(&a);
    }
    if v(&bm.m[1][1]) < v(&bm.m[0][0]) {
        a = elementary(f, [[0, 1], [1, 0]]).mul(&a);
        bm = apply(&a);
    }
    let b = v(&bm.m[0][0]);
    let u = bm.m[0][0].shift(-b);
    let uinv = u.invert_unit(precision)?;
    // e2 ↦ e2 − (B12/B11)·e1
    let ratio = (&bm.m[0][1].shift(-b) * &uinv).truncate(p);
    let elim = Mat2::new(LaurentPoly::one(f), LaurentPoly::zero(f), -&ratio, LaurentPoly::one(f));
    a = elim.mul(&a).truncate(p);
    bm = apply(&a);
    let big = dv - b;
    debug_assert_eq!(v(&bm.m[1][1]), big);
    // larger valuation first
    a = elementary(f, [[0, 1], [1, 0]]).mul(&a);
    let ua = bm.m[1][1].shift(-big);
    let ub = u;
    let eps = ua.invert_unit(precision)?;
    let w_raw = (&ub * &eps).truncate(p);
    let delta = SquareClass::of(f, w_raw.lowest_coeff());
    let target = match delta {
        SquareClass::Square => 1,
        SquareClass::NonSquare => f.smallest_nonresidue(),
    };
    let ratio = w_raw.scale(f.inv(target));
    let s = ratio.sqrt_unit(precision).expect("residue is a square by construction");
    let sinv = s.invert_unit(precision)?;
    let fix = Mat2::diag(LaurentPoly::one(f), sinv);
    a = fix.mul(&a).truncate(p);
    Ok(Diagonalization {
        invariant: PhiInvariant { a: big, b, delta },
        a,
        eps,
        w: LaurentPoly::constant(f, target),
        precision,
    })
}

pub fn classify(form: &SymMatrixO) -> Result<PhiInvariant> {
    Ok(diagonalize(form, form.default_precision())?.invariant)
}

/// Double cover attached to the form: ramified for odd `a − b`; otherwise
/// split exactly when `delta` is the class of `−1`, the discriminant class
/// of the hyperbolic plane.
pub fn covering_type(inv: PhiInvariant, f: Fq) -> CoverType {
    if (inv.a - inv.b) % 2 != 0 {
        return CoverType::RamifiedCover;
    }
    if inv.delta == SquareClass::of(f, f.neg(1)) {
        CoverType::SplitCover
    } else {
        CoverType::UnramifiedNonsplitCover
    }
}

/// `(A, ε)` with `A·B1·ᵗA·ε ≡ B2 (mod t^precision)` when the invariants agree.
pub fn connect(b1: &SymMatrixO, b2: &SymMatrixO, precision: u32) -> Result<Option<(Mat2, LaurentPoly)>> {
    let d1 = diagonalize(b1, precision)?;
    let d2 = diagonalize(b2, precision)?;
    if d1.invariant != d2.invariant {
        return Ok(None);
    }
    let p = precision as i64;
    let det2 = d2.a.det();
    let det_inv = det2.invert_unit(precision)?;
    let a2inv = d2.a.adjugate().scale(&det_inv).truncate(p);
    let a = a2inv.mul(&d1.a).truncate(p);
    let eps = (&d1.eps * &d2.eps.invert_unit(precision)?).truncate(p);
    Ok(Some((a, eps)))
}

/// Symmetric bilinear form `[[x, y], [y, z]]` on `F_q²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymFormFq {
    pub x: FqElem,
    pub y: FqElem,
    pub z: FqElem,
}

impl SymFormFq {
    pub fn eval(&self, f: Fq, u: FqElem, v: FqElem) -> FqElem {
        let uu = f.mul(self.x, f.mul(u, u));
        let uv = f.mul(2, f.mul(self.y, f.mul(u, v)));
        let vv = f.mul(self.z, f.mul(v, v));
        f.add(uu, f.add(uv, vv))
    }

    pub fn det(&self, f: Fq) -> FqElem {
        f.sub(f.mul(self.x, self.z), f.mul(self.y, self.y))
    }

    pub fn rank(&self, f: Fq) -> u32 {
        if self.x == 0 && self.y == 0 && self.z == 0 {
            0
        } else if self.det(f) == 0 {
            1
        } else {
            2
        }
    }
}

/// Isotropic lines: all `q + 1` for the zero form, the kernel for rank one,
/// and 2 or 0 for a nondegenerate plane according to whether `−det` is a square.
pub fn isotropic_line_count(form: &SymFormFq, f: Fq) -> u32 {
    match form.rank(f) {
        0 => f.q() + 1,
        1 => 1,
        _ => {
            if f.is_square(f.neg(form.det(f))) {
                2
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64) -> Fq {
        Fq::new(q).unwrap()
    }

    fn poly(f: Fq, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_ints(f, 0, c)
    }

    fn sym(f: Fq, b11: &[i64], b12: &[i64], b22: &[i64]) -> SymMatrixO {
        SymMatrixO::from_entries(poly(f, b11), poly(f, b12), poly(f, b22)).unwrap()
    }

    fn check_normal_form(s: &SymMatrixO, d: &Diagonalization) {
        let p = d.precision as i64;
        let got = s.matrix().clone();
        let lhs = d.a.mul(&got).mul(&d.a.transpose()).scale(&d.eps).truncate(p);
        assert_eq!(lhs, d.normal_form().truncate(p));
        assert!(d.a.det().is_unit());
        assert!(d.eps.is_unit());
        assert_eq!(d.invariant.a + d.invariant.b, s.det_val());
    }

    #[test]
    fn examples() {
        let f = fq(3);
        let s = sym(f, &[1], &[], &[0, 1]);
        let d = diagonalize(&s, 4).unwrap();
        assert_eq!(d.invariant, PhiInvariant { a: 1, b: 0, delta: SquareClass::Square });
        check_normal_form(&s, &d);

        let hyp = sym(f, &[], &[1], &[]);
        let d = diagonalize(&hyp, 4).unwrap();
        assert_eq!(d.invariant, PhiInvariant { a: 0, b: 0, delta: SquareClass::NonSquare });
        check_normal_form(&hyp, &d);
        assert_eq!(covering_type(d.invariant, f), CoverType::SplitCover);

        let s = sym(f, &[0, 1], &[0, 1], &[0, 1, 1]);
        let d = diagonalize(&s, 8).unwrap();
        assert_eq!((d.invariant.a, d.invariant.b), (2, 1));
        check_normal_form(&s, &d);
    }

    #[test]
    fn precision_and_validation() {
        let f = fq(3);
        let s = sym(f, &[0, 0, 1], &[], &[0, 1]);
        assert_eq!(diagonalize(&s, 3), Err(Error::PrecisionExhausted { precision: 3, det_val: 3 }));
        assert!(diagonalize(&s, 4).is_ok());
        let bad = Mat2::new(poly(f, &[1]), poly(f, &[1]), poly(f, &[2]), poly(f, &[1]));
        assert_eq!(SymMatrixO::new(bad), Err(Error::NotIntegralForm));
        let sing = Mat2::new(poly(f, &[1]), poly(f, &[1]), poly(f, &[1]), poly(f, &[1]));
        assert_eq!(SymMatrixO::new(sing), Err(Error::NotIntegralForm));
    }

    #[test]
    fn cover_examples() {
        let f = fq(3);
        let inv = |a, b, delta| PhiInvariant { a, b, delta };
        assert_eq!(covering_type(inv(1, 0, SquareClass::Square), f), CoverType::RamifiedCover);
        assert_eq!(covering_type(inv(2, 0, SquareClass::NonSquare), f), CoverType::SplitCover);
        assert_eq!(covering_type(inv(2, 0, SquareClass::Square), f), CoverType::UnramifiedNonsplitCover);
        // -1 is a square mod 5
        assert_eq!(covering_type(inv(0, 0, SquareClass::Square), fq(5)), CoverType::SplitCover);
    }

    #[test]
    fn connect_recovers_transform() {
        let f = fq(5);
        let s1 = sym(f, &[2, 1], &[0, 3], &[0, 0, 4]);
        let a = Mat2::new(poly(f, &[1, 2]), poly(f, &[3]), poly(f, &[0, 1]), poly(f, &[2]));
        let eps = poly(f, &[3, 1]);
        let s2 = s1.transform(&a, &eps).unwrap();
        let p = 8;
        let (a, e) = connect(&s1, &s2, p).unwrap().unwrap();
        let back = a.mul(s1.matrix()).mul(&a.transpose()).scale(&e).truncate(p as i64);
        assert_eq!(back, s2.matrix().truncate(p as i64));
    }

    #[test]
    fn isotropic_examples() {
        let f = fq(3);
        assert_eq!(isotropic_line_count(&SymFormFq { x: 0, y: 0, z: 0 }, f), 4);
        assert_eq!(isotropic_line_count(&SymFormFq { x: 0, y: 2, z: 0 }, f), 2);
        assert_eq!(isotropic_line_count(&SymFormFq { x: 1, y: 0, z: 1 }, f), 0);
        assert_eq!(isotropic_line_count(&SymFormFq { x: 1, y: 0, z: 0 }, f), 1);
    }
}
