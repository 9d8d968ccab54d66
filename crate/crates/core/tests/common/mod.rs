#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wald_core::lattice::Coweight;
use wald_core::mat::Mat2;
use wald_core::quadform::SymMatrixO;
use wald_core::scalars::{int, rat, Rational, SqrtQ};
use wald_core::series::{Fq, LaurentPoly};
use wald_core::torus::EtaleKind;
use wald_core::{HeckeElement, LaurentScalar, WaldFunction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    let n = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    rat(n, rng.gen_range(1..=9))
}

pub fn scalar(rng: &mut impl Rng, q: u64, kind: EtaleKind) -> LaurentScalar {
    let mut s = LaurentScalar::zero(q);
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = [0i64; 3];
        match kind {
            EtaleKind::Split => {
                e[0] = rng.gen_range(-2..=2);
                e[1] = rng.gen_range(-2..=2);
            }
            EtaleKind::Ramified => e[2] = rng.gen_range(-2..=2),
        }
        let c = SqrtQ::new(int(rng.gen_range(-3..=3)), int(rng.gen_range(-1..=1)));
        s = &s + &LaurentScalar::monomial(q, e, c);
    }
    s
}

/// Random coweight of length at most `max_len`, central part in `[-1, 1]`.
pub fn coweight(rng: &mut impl Rng, max_len: i64) -> Coweight {
    let a2 = rng.gen_range(-1..=1);
    Coweight::new(a2 + rng.gen_range(0..=max_len), a2)
}

pub fn hecke(rng: &mut impl Rng, q: u64, kind: EtaleKind, max_len: i64) -> HeckeElement {
    let mut h = HeckeElement::zero(q);
    for _ in 0..rng.gen_range(1..=2) {
        h.add_term(coweight(rng, max_len), scalar(rng, q, kind));
    }
    h
}

pub fn function(rng: &mut impl Rng, q: u64, kind: EtaleKind, max_m: u32) -> WaldFunction {
    let mut f = WaldFunction::zero(q);
    for _ in 0..rng.gen_range(1..=3) {
        f.add_value(rng.gen_range(0..=max_m), scalar(rng, q, kind));
    }
    f
}

pub fn poly(rng: &mut (impl Rng + ?Sized), f: Fq, offset: i64, len: usize) -> LaurentPoly {
    let coeffs = (0..len).map(|_| rng.gen_range(0..f.q())).collect();
    LaurentPoly::from_coeffs(f, offset, coeffs)
}

pub fn unit(rng: &mut impl Rng, f: Fq, len: usize) -> LaurentPoly {
    loop {
        let u = poly(rng, f, 0, len);
        if u.is_unit() {
            return u;
        }
    }
}

/// Random element of `GL₂(O)` with polynomial entries.
pub fn unimodular(rng: &mut impl Rng, f: Fq, len: usize) -> Mat2 {
    loop {
        let m = Mat2::new(poly(rng, f, 0, len), poly(rng, f, 0, len), poly(rng, f, 0, len), poly(rng, f, 0, len));
        if m.det().is_unit() {
            return m;
        }
    }
}

/// Random symmetric form with `val(det) <= max_det_val`.
pub fn sym_form(rng: &mut dyn rand::RngCore, f: Fq, len: usize, max_det_val: i64) -> SymMatrixO {
    loop {
        let entry = |rng: &mut dyn rand::RngCore| {
            let off = rng.gen_range(0..=2);
            poly(rng, f, off, len)
        };
        let (x, y, z) = (entry(rng), entry(rng), entry(rng));
        if let Ok(s) = SymMatrixO::from_entries(x, y, z) {
            if s.det_val() <= max_det_val {
                return s;
            }
        }
    }
}
