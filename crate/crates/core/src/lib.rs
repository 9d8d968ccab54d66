//! Exact local combinatorics of the GL₂ Waldspurger model over
//! `F = F_q((t))`: lattices on the affine Grassmannian, torus orbits for the
//! split and ramified quadratic algebras, the spherical Hecke algebra, the
//! Waldspurger module with symbolic nonramified characters, and
//! classification of symmetric forms over `O = F_q[[t]]`.

pub mod error;
pub mod exec;
pub mod hecke;
pub mod interp;
pub mod lattice;
pub mod mat;
pub mod quadform;
pub mod scalars;
pub mod series;
pub mod torus;
pub mod waldspurger;

pub use error::{Error, Result};
pub use exec::Exec;
pub use hecke::{HeckeAlgebra, HeckeElement};
pub use lattice::{Coweight, Lattice2};
pub use mat::Mat2;
pub use scalars::{Assignment, LaurentScalar, Rational, SqrtQ, Var};
pub use series::{Fq, LaurentPoly};
pub use torus::{EtaleKind, TorusClass};
pub use waldspurger::{CharacterParams, WaldFunction, WaldModule};
