//! Exact Lagrange interpolation over `Q`.

use num_traits::Zero;

use crate::scalars::{int, Rational};

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< points.len()` through the given points.
pub fn lagrange(points: &[(i64, Rational)]) -> Vec<Rational> {
    let n = points.len();
    let mut out = vec![Rational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x − xj)/(xi − xj)
        let mut basis = vec![int(1)];
        let mut denom = int(1);
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * int(*xj);
            }
            basis = next;
            denom *= int(xi - xj);
        }
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * yi / &denom;
        }
    }
    out
}

/// Degree of a coefficient vector (`None` for zero).
pub fn degree(coeffs: &[Rational]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

pub fn evaluate(coeffs: &[Rational], x: i64) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * int(x) + c)
}
