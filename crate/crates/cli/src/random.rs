use rand::Rng;
use wald_core::mat::Mat2;
use wald_core::quadform::SymMatrixO;
use wald_core::scalars::{rat, Rational};
use wald_core::series::{Fq, LaurentPoly};

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    let n = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    rat(n, rng.gen_range(1..=9))
}

pub fn poly(rng: &mut impl Rng, f: Fq, offset: i64, len: usize) -> LaurentPoly {
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

pub fn unimodular(rng: &mut impl Rng, f: Fq, len: usize) -> Mat2 {
    loop {
        let m = Mat2::new(poly(rng, f, 0, len), poly(rng, f, 0, len), poly(rng, f, 0, len), poly(rng, f, 0, len));
        if m.det().is_unit() {
            return m;
        }
    }
}

/// Symmetric form with entry valuations in `0..=2` and `val(det) <= max_det_val`.
pub fn sym_form(rng: &mut impl Rng, f: Fq, len: usize, max_det_val: i64) -> SymMatrixO {
    loop {
        let mut entry = || {
            let off = rng.gen_range(0..=2);
            poly(rng, f, off, len)
        };
        let (x, y, z) = (entry(), entry(), entry());
        if let Ok(s) = SymMatrixO::from_entries(x, y, z) {
            if s.det_val() <= max_det_val {
                return s;
            }
        }
    }
}
