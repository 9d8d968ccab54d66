use std::fmt;

use crate::series::{Fq, LaurentPoly};

/// 2×2 matrix over `F_q[t, t^-1]`, row-major: `m[row][col]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub m: [[LaurentPoly; 2]; 2],
}

impl Mat2 {
    pub fn new(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(c1: [LaurentPoly; 2], c2: [LaurentPoly; 2]) -> Self {
        let [a, c] = c1;
        let [b, d] = c2;
        Mat2::new(a, b, c, d)
    }

    pub fn identity(f: Fq) -> Self {
        Self::diag(LaurentPoly::one(f), LaurentPoly::one(f))
    }

    pub fn diag(x: LaurentPoly, y: LaurentPoly) -> Self {
        let f = x.field();
        Mat2::new(x, LaurentPoly::zero(f), LaurentPoly::zero(f), y)
    }

    /// `diag(t^i, t^j)`.
    pub fn diag_t(f: Fq, i: i64, j: i64) -> Self {
        Self::diag(LaurentPoly::t_pow(f, i), LaurentPoly::t_pow(f, j))
    }

    pub fn field(&self) -> Fq {
        self.m[0][0].field()
    }

    pub fn column(&self, j: usize) -> [LaurentPoly; 2] {
        [self.m[0][j].clone(), self.m[1][j].clone()]
    }

    pub fn det(&self) -> LaurentPoly {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.m[0][0].clone(), self.m[1][0].clone(), self.m[0][1].clone(), self.m[1][1].clone())
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, s: &LaurentPoly) -> Mat2 {
        let e = |i: usize, j: usize| &self.m[i][j] * s;
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Mat2 {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    /// Entries reduced modulo `t^n`.
    pub fn truncate(&self, n: i64) -> Mat2 {
        self.map(|x| x.truncate(n))
    }

    /// Smallest entry valuation (`i64::MAX` for the zero matrix).
    pub fn min_val(&self) -> i64 {
        self.m.iter().flatten().map(LaurentPoly::val_or_max).min().unwrap()
    }

    /// Adjugate: `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.m[1][1].clone(), -&self.m[0][1], -&self.m[1][0], self.m[0][0].clone())
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}
