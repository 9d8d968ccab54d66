//! Rank-2 `O`-lattices in `F²`: Hermite normal form, relative position
//! (elementary divisors) and enumeration of the lattices at a prescribed
//! position from a given one.
//!
//! Every lattice is stored through its canonical basis
//!
//! ```text
//!     [ t^a  c  ]
//!     [ 0   t^b ]      c reduced modulo t^a
//! ```
//!
//! whose determinant is exactly `t^(a+b)`. The inverse of a canonical basis
//! therefore has Laurent-polynomial entries, and relative positions are
//! computed without truncation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::mat::Mat2;
use crate::series::{Fq, LaurentPoly, PolyJson};

/// Dominant coweight `(a1 ≥ a2)` of GL₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight {
    pub a1: i64,
    pub a2: i64,
}

impl Coweight {
    pub fn new(a1: i64, a2: i64) -> Self {
        assert!(a1 >= a2, "coweight ({a1},{a2}) is not dominant");
        Coweight { a1, a2 }
    }

    pub fn try_new(a1: i64, a2: i64) -> Option<Self> {
        (a1 >= a2).then_some(Coweight { a1, a2 })
    }

    /// `a1 - a2`.
    pub fn length(self) -> i64 {
        self.a1 - self.a2
    }

    /// `a1 + a2`, the valuation of the determinant.
    pub fn degree(self) -> i64 {
        self.a1 + self.a2
    }

    /// `(-a2, -a1)`.
    pub fn dual(self) -> Self {
        Coweight { a1: -self.a2, a2: -self.a1 }
    }

    pub fn shift(self, k: i64) -> Self {
        Coweight { a1: self.a1 + k, a2: self.a2 + k }
    }

    /// Dominance order restricted to equal degree.
    pub fn dominated_by(self, o: Coweight) -> bool {
        self.degree() == o.degree() && self.a1 <= o.a1
    }

    /// All `μ ≤ self` in dominance order with the same degree, largest first.
    pub fn closure(self) -> Vec<Coweight> {
        (0..=self.length() / 2).map(|k| Coweight { a1: self.a1 - k, a2: self.a2 + k }).collect()
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

impl FromStr for Coweight {
    type Err = String;

    /// Accepts `"(a1,a2)"` or `"a1,a2"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<_> = body.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(format!("expected (a1,a2), got {s:?}"));
        }
        let a1: i64 = parts[0].parse().map_err(|e| format!("{e}"))?;
        let a2: i64 = parts[1].parse().map_err(|e| format!("{e}"))?;
        Coweight::try_new(a1, a2).ok_or_else(|| format!("{s} is not dominant"))
    }
}

/// A full-rank `O`-lattice in `F²`, in canonical upper-triangular form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice2 {
    a: i64,
    b: i64,
    c: LaurentPoly,
}

impl Lattice2 {
    /// `O²`.
    pub fn standard(f: Fq) -> Self {
        Lattice2 { a: 0, b: 0, c: LaurentPoly::zero(f) }
    }

    /// Builds the canonical form directly; `c` is reduced modulo `t^a`.
    pub fn from_parts(a: i64, b: i64, c: LaurentPoly) -> Self {
        let c = c.truncate(a);
        Lattice2 { a, b, c }
    }

    /// The lattice spanned by `diag(t^i, t^j)`.
    pub fn diagonal(f: Fq, i: i64, j: i64) -> Self {
        Lattice2 { a: i, b: j, c: LaurentPoly::zero(f) }
    }

    /// Hermite normal form of the `O`-span of the columns of `gens`.
    pub fn canonicalize(gens: &Mat2) -> Result<Self> {
        let det = gens.det();
        let det_val = det.valuation().ok_or(Error::SingularGenerators)?;
        // pivot column: smallest valuation in the bottom row
        let pivot = if gens.m[1][1].val_or_max() <= gens.m[1][0].val_or_max() { 1 } else { 0 };
        let [top, bottom] = gens.column(pivot);
        let b = bottom.valuation().expect("nonsingular matrix has a nonzero row");
        let a = det_val - b;
        // col2 · u^-1 = (top·u^-1, t^b) with u = bottom / t^b
        let c = match top.valuation() {
            Some(vt) if a - vt > 0 => {
                let unit = bottom.shift(-b);
                let inv = unit.invert_unit((a - vt) as u32)?;
                (&top * &inv).truncate(a)
            }
            _ => LaurentPoly::zero(gens.field()),
        };
        Ok(Lattice2 { a, b, c })
    }

    pub fn field(&self) -> Fq {
        self.c.field()
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> &LaurentPoly {
        &self.c
    }

    pub fn basis(&self) -> Mat2 {
        let f = self.field();
        Mat2::new(LaurentPoly::t_pow(f, self.a), self.c.clone(), LaurentPoly::zero(f), LaurentPoly::t_pow(f, self.b))
    }

    /// `t^(a+b) · basis^-1`, exact.
    fn scaled_inverse(&self) -> Mat2 {
        let f = self.field();
        Mat2::new(LaurentPoly::t_pow(f, self.b), -&self.c, LaurentPoly::zero(f), LaurentPoly::t_pow(f, self.a))
    }

    pub fn det_val(&self) -> i64 {
        self.a + self.b
    }

    /// `g · L`.
    pub fn apply(&self, g: &Mat2) -> Result<Lattice2> {
        Lattice2::canonicalize(&g.mul(&self.basis()))
    }

    /// `t^k · L`.
    pub fn scale_t(&self, k: i64) -> Lattice2 {
        Lattice2 { a: self.a + k, b: self.b + k, c: self.c.shift(k) }
    }

    /// `basis(self)^-1 · basis(other)`, whose elementary divisors are the
    /// relative position.
    fn transition(&self, other: &Lattice2) -> Mat2 {
        self.scaled_inverse().mul(&other.basis()).scale(&LaurentPoly::t_pow(self.field(), -self.det_val()))
    }

    /// Elementary divisors `(a1 ≥ a2)` of `other` relative to `self`.
    pub fn relative_position(&self, other: &Lattice2) -> Coweight {
        let x = self.transition(other);
        let a2 = x.min_val();
        let a1 = other.det_val() - self.det_val() - a2;
        Coweight::new(a1, a2)
    }

    pub fn contains(&self, other: &Lattice2) -> bool {
        self.transition(other).min_val() >= 0
    }

    /// The image under the basis of `self` of a lattice given relative to
    /// `O²`; both bases are upper-triangular so the product stays canonical
    /// after reducing the corner.
    fn transport(&self, inner: &Lattice2) -> Lattice2 {
        let a = self.a + inner.a;
        let b = self.b + inner.b;
        let c = &inner.c.shift(self.a) + &self.c.shift(inner.b);
        Lattice2::from_parts(a, b, c)
    }

    pub fn enumerate_in_position(&self, lambda: Coweight) -> Vec<Lattice2> {
        self.enumerate_in_position_with(lambda, Exec::default())
    }

    /// All `L'` with `relative_position(self, L') = lambda`, sorted.
    pub fn enumerate_in_position_with(&self, lambda: Coweight, exec: Exec) -> Vec<Lattice2> {
        let f = self.field();
        let origin = Lattice2::standard(f);
        let splits: Vec<i64> = (lambda.a2..=lambda.a1).collect();
        let mut out = exec.flat_map(splits, |a| {
            let b = lambda.degree() - a;
            canonical_forms_in_cell(f, lambda.a2, a, b)
                .filter(|l| origin.relative_position(l) == lambda)
                .map(|l| self.transport(&l))
                .collect()
        });
        out.sort();
        out
    }

    pub fn closure_members(&self, lambda: Coweight) -> Vec<Lattice2> {
        self.closure_members_with(lambda, Exec::default())
    }

    /// All `L'` whose position relative to `self` lies in the closure of
    /// `lambda`, sorted.
    pub fn closure_members_with(&self, lambda: Coweight, exec: Exec) -> Vec<Lattice2> {
        let mut out: Vec<Lattice2> = lambda
            .closure()
            .into_iter()
            .flat_map(|mu| self.enumerate_in_position_with(mu, exec))
            .collect();
        out.sort();
        out
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson { a: self.a, b: self.b, c: self.c.to_json() }
    }

    pub fn from_json(f: Fq, js: &LatticeJson) -> Self {
        Lattice2::from_parts(js.a, js.b, LaurentPoly::from_json(f, &js.c))
    }
}

/// Canonical forms `(a, b, c)` with `c ∈ t^lo O / t^a O`, in lexicographic
/// order of the coefficients of `c` (lowest degree first).
fn canonical_forms_in_cell(f: Fq, lo: i64, a: i64, b: i64) -> impl Iterator<Item = Lattice2> {
    let width = (a - lo).max(0) as u32;
    let q = f.q() as u64;
    let total = q.pow(width);
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![0u32; width as usize];
        for slot in coeffs.iter_mut().rev() {
            *slot = (idx % q) as u32;
            idx /= q;
        }
        Lattice2 { a, b, c: LaurentPoly::from_coeffs(f, lo, coeffs) }
    })
}

fn cmp_poly_dense(x: &LaurentPoly, y: &LaurentPoly) -> Ordering {
    let lo = x.offset().min(y.offset());
    let hi = x.degree().unwrap_or(lo).max(y.degree().unwrap_or(lo)) + 1;
    x.window(lo, hi).cmp(&y.window(lo, hi))
}

impl PartialOrd for Lattice2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice2 {
    /// Lexicographic on `(a, b, coefficients of c)`.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b).cmp(&(other.a, other.b)).then_with(|| cmp_poly_dense(&self.c, &other.c))
    }
}

impl fmt::Debug for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice2(a={}, b={}, c={})", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub a: i64,
    pub b: i64,
    pub c: PolyJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(q: u64) -> Fq {
        Fq::new(q).unwrap()
    }

    fn p(fld: Fq, off: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_ints(fld, off, cs)
    }

    #[test]
    fn canonicalize_examples() {
        let k = f(3);
        let id = Lattice2::canonicalize(&Mat2::identity(k)).unwrap();
        assert_eq!(id, Lattice2::standard(k));

        let g = Mat2::from_columns([p(k, 2, &[1]), p(k, 0, &[])], [p(k, 0, &[1]), p(k, 0, &[1])]);
        let l = Lattice2::canonicalize(&g).unwrap();
        assert_eq!((l.a(), l.b()), (2, 0));
        assert_eq!(l.c(), &LaurentPoly::one(k));

        // swapped columns and a unit rescaling give the same lattice
        let swapped = Mat2::from_columns(g.column(1), g.column(0));
        assert_eq!(Lattice2::canonicalize(&swapped).unwrap(), l);
        let unit = p(k, 0, &[2, 1, 1]);
        let [x, y] = g.column(1);
        let scaled = Mat2::from_columns(g.column(0), [&x * &unit, &y * &unit]);
        assert_eq!(Lattice2::canonicalize(&scaled).unwrap(), l);

        let singular = Mat2::from_columns([p(k, 0, &[1]), p(k, 0, &[1])], [p(k, 0, &[1]), p(k, 0, &[1])]);
        assert_eq!(Lattice2::canonicalize(&singular), Err(Error::SingularGenerators));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let k = f(5);
        let g = Mat2::new(p(k, -1, &[1, 3]), p(k, 0, &[2, 0, 4]), p(k, 1, &[3, 1]), p(k, 0, &[1, 1]));
        let l = Lattice2::canonicalize(&g).unwrap();
        assert_eq!(Lattice2::canonicalize(&l.basis()).unwrap(), l);
        assert_eq!(l.det_val(), g.det().valuation().unwrap());
    }

    #[test]
    fn relative_position_examples() {
        let k = f(3);
        let o = Lattice2::standard(k);
        assert_eq!(o.relative_position(&o), Coweight::new(0, 0));
        let l = Lattice2::from_parts(2, -1, p(k, -3, &[1, 2]));
        assert_eq!(l.relative_position(&l.scale_t(1)), Coweight::new(1, 1));
        assert_eq!(o.relative_position(&Lattice2::diagonal(k, 2, 0)), Coweight::new(2, 0));
        let x = Lattice2::from_parts(3, 0, p(k, 1, &[1]));
        let pos = l.relative_position(&x);
        assert_eq!(x.relative_position(&l), pos.dual());
    }

    #[test]
    fn enumerate_examples() {
        let k = f(3);
        let o = Lattice2::standard(k);
        assert_eq!(o.enumerate_in_position(Coweight::new(0, 0)), vec![o.clone()]);
        assert_eq!(o.enumerate_in_position(Coweight::new(1, 0)).len(), 4);
        assert_eq!(o.enumerate_in_position(Coweight::new(2, 0)).len(), 12);
    }

    /// Independent oracle: O-submodules of (F_q[t]/t^d)², as t-stable
    /// F_q-subspaces of F_q^{2d}, keyed by reduced row echelon form.
    mod oracle {
        pub type Key = Vec<Vec<u32>>;

        fn rref(q: u32, mut rows: Vec<Vec<u32>>) -> Key {
            let n = rows.first().map_or(0, |r| r.len());
            let inv = |x: u32| (1..q).find(|y| (x as u64 * *y as u64) % q as u64 == 1).unwrap();
            let mut r = 0;
            for col in 0..n {
                let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
                rows.swap(r, piv);
                let s = inv(rows[r][col]);
                for x in rows[r].iter_mut() {
                    *x = (*x as u64 * s as u64 % q as u64) as u32;
                }
                let pivot = rows[r].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != r && row[col] != 0 {
                        let m = row[col];
                        for (x, p) in row.iter_mut().zip(&pivot) {
                            *x = ((*x as u64 + (q - m) as u64 * *p as u64) % q as u64) as u32;
                        }
                    }
                }
                r += 1;
            }
            rows.truncate(r);
            rows
        }

        fn times_t(v: &[u32], d: usize) -> Vec<u32> {
            let mut w = vec![0; 2 * d];
            for blk in 0..2 {
                for i in 1..d {
                    w[blk * d + i] = v[blk * d + i - 1];
                }
            }
            w
        }

        /// Span of the t-orbits of the generators.
        pub fn submodule(q: u32, d: usize, gens: &[Vec<u32>]) -> Key {
            let mut rows = Vec::new();
            for g in gens {
                let mut v = g.clone();
                for _ in 0..d {
                    rows.push(v.clone());
                    v = times_t(&v, d);
                }
            }
            rref(q, rows)
        }

        pub fn all_vectors(q: u32, len: usize) -> Vec<Vec<u32>> {
            let total = (q as usize).pow(len as u32);
            (0..total)
                .map(|mut i| {
                    (0..len)
                        .map(|_| {
                            let c = (i % q as usize) as u32;
                            i /= q as usize;
                            c
                        })
                        .collect()
                })
                .collect()
        }
    }

    fn brute_sublattices(q: u32, d: usize) -> HashSet<oracle::Key> {
        let vs = oracle::all_vectors(q, 2 * d);
        let mut out = HashSet::new();
        for x in &vs {
            for y in &vs {
                let key = oracle::submodule(q, d, &[x.clone(), y.clone()]);
                if key.len() == d {
                    out.insert(key);
                }
            }
        }
        out
    }

    /// Image of a lattice containing t^d O² in (F_q[t]/t^d)².
    fn lattice_key(l: &Lattice2, d: usize) -> oracle::Key {
        let k = l.field();
        let enc = |x: &LaurentPoly, y: &LaurentPoly| -> Vec<u32> {
            (0..d as i64).map(|i| x.coeff(i)).chain((0..d as i64).map(|i| y.coeff(i))).collect()
        };
        let g1 = enc(&LaurentPoly::t_pow(k, l.a()), &LaurentPoly::zero(k));
        let g2 = enc(l.c(), &LaurentPoly::t_pow(k, l.b()));
        oracle::submodule(k.q(), d, &[g1, g2])
    }

    #[test]
    fn closure_matches_brute_force() {
        for (q, dmax) in [(3u64, 2usize), (5, 1)] {
            let k = f(q);
            let o = Lattice2::standard(k);
            for d in 1..=dmax {
                let brute = brute_sublattices(q as u32, d);
                let ours: Vec<_> = o.closure_members(Coweight::new(d as i64, 0));
                let keys: HashSet<_> = ours.iter().map(|l| lattice_key(l, d)).collect();
                assert_eq!(keys.len(), ours.len());
                assert_eq!(keys, brute, "q={q} d={d}");
            }
        }
        let o = Lattice2::standard(f(3));
        assert_eq!(o.closure_members(Coweight::new(2, 0)).len(), 13);
        assert_eq!(o.closure_members(Coweight::new(1, 1)), vec![o.scale_t(1)]);
        assert_eq!(o.closure_members(Coweight::new(1, 0)), o.enumerate_in_position(Coweight::new(1, 0)));
    }

    #[test]
    fn count_formula() {
        for q in [3u64, 5] {
            let o = Lattice2::standard(f(q));
            for d in 1..=4u32 {
                let n = o.enumerate_in_position(Coweight::new(d as i64, 0)).len() as u64;
                assert_eq!(n, q.pow(d - 1) * (q + 1), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn enumeration_is_exact_and_duplicate_free() {
        let k = f(3);
        let base = Lattice2::from_parts(1, -1, p(k, -2, &[2, 1]));
        for lam in [Coweight::new(2, 0), Coweight::new(1, -1), Coweight::new(3, 1)] {
            let all = base.enumerate_in_position(lam);
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            for l in &all {
                assert_eq!(base.relative_position(l), lam);
                assert_eq!(&Lattice2::canonicalize(&l.basis()).unwrap(), l);
            }
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let base = Lattice2::standard(f(5));
        let lam = Coweight::new(3, 0);
        assert_eq!(
            base.enumerate_in_position_with(lam, Exec::Sequential),
            base.enumerate_in_position_with(lam, Exec::Parallel)
        );
    }

    #[test]
    fn coweight_parse() {
        assert_eq!("(1,0)".parse::<Coweight>().unwrap(), Coweight::new(1, 0));
        assert_eq!(" 2, -1 ".parse::<Coweight>().unwrap(), Coweight::new(2, -1));
        assert!("(0,1)".parse::<Coweight>().is_err());
    }
}
