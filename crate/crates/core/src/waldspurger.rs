//! The Waldspurger module `WA_χ`: χ-equivariant functions on lattices,
//! supported on finitely many torus orbits, with the spherical Hecke action
//!
//! ```text
//!     (T_λ ⋆ f)(L) = Σ_{L' : pos(L, L') = λ} f(L')
//! ```
//!
//! A function is stored by its values on the orbit representatives `L_m`;
//! the value on any other lattice is `χ(u)·f(L_m)` where `u` is the class of
//! its `B_ex`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hecke::{schur_gl2, HeckeAlgebra, HeckeElement};
use crate::lattice::{Coweight, Lattice2};
use crate::scalars::{Assignment, LaurentScalar, Rational};
use crate::series::Fq;
use crate::torus::{self, EtaleKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WaldFunction {
    q: u64,
    values: BTreeMap<u32, LaurentScalar>,
}

impl WaldFunction {
    pub fn zero(q: u64) -> Self {
        WaldFunction { q, values: BTreeMap::new() }
    }

    pub fn delta(m: u32, c: LaurentScalar) -> Self {
        let mut f = WaldFunction::zero(c.q());
        f.add_value(m, c);
        f
    }

    /// Indicator of the closed orbit `m = 0`.
    pub fn w0(q: u64) -> Self {
        Self::delta(0, LaurentScalar::one(q))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&self, m: u32) -> LaurentScalar {
        self.values.get(&m).cloned().unwrap_or_else(|| LaurentScalar::zero(self.q))
    }

    pub fn values(&self) -> impl Iterator<Item = (&u32, &LaurentScalar)> {
        self.values.iter()
    }

    pub fn support(&self) -> Vec<u32> {
        self.values.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_value(&mut self, m: u32, c: LaurentScalar) {
        let s = &self.get(m) + &c;
        if s.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, s);
        }
    }

    pub fn add(&self, o: &WaldFunction) -> WaldFunction {
        let mut out = self.clone();
        for (m, c) in &o.values {
            out.add_value(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &LaurentScalar) -> WaldFunction {
        let mut out = WaldFunction::zero(self.q);
        for (m, c) in &self.values {
            out.add_value(*m, c * s);
        }
        out
    }

    /// Value on an arbitrary lattice via equivariance.
    pub fn eval(&self, kind: EtaleKind, l: &Lattice2) -> LaurentScalar {
        let n = torus::normalize(kind, l);
        &n.chi(self.q) * &self.get(n.m)
    }

    pub fn specialize(&self, asg: &Assignment) -> Result<BTreeMap<u32, Rational>> {
        self.values.iter().map(|(m, c)| Ok((*m, c.specialize(asg)?))).collect()
    }
}

impl Serialize for WaldFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            m: u32,
            value: &'a LaurentScalar,
        }
        let entries: Vec<_> = self.values.iter().map(|(m, value)| Entry { m: *m, value }).collect();
        entries.serialize(s)
    }
}

/// Which lattices `T_λ` sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionConvention {
    /// `pos(L, L') = λ`; `T_(d,0)` sums over sublattices of colength `d`.
    #[default]
    Forward,
    /// `pos(L', L) = λ`, the `λ ↦ −w₀(λ)` alternative.
    Reversed,
}

/// Numeric or symbolic nonramified character.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterParams {
    pub kind: EtaleKind,
    pub symbolic: bool,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
    /// Test-only value for `r = sqrt(q)`.
    pub r: Option<Rational>,
}

impl CharacterParams {
    pub fn symbolic(kind: EtaleKind) -> Self {
        CharacterParams { kind, symbolic: true, alpha: None, beta: None, gamma: None, r: None }
    }

    pub fn split(alpha: Rational, beta: Rational) -> Self {
        CharacterParams { kind: EtaleKind::Split, symbolic: false, alpha: Some(alpha), beta: Some(beta), gamma: None, r: None }
    }

    pub fn ramified(gamma: Rational) -> Self {
        CharacterParams { kind: EtaleKind::Ramified, symbolic: false, alpha: None, beta: None, gamma: Some(gamma), r: None }
    }

    pub fn assignment(&self) -> Result<Assignment> {
        if self.symbolic {
            return Err(Error::BadCharacter("numeric values required".into()));
        }
        let need = |x: &Option<Rational>, name: &str| -> Result<Rational> {
            match x {
                Some(v) if !v.is_zero() => Ok(v.clone()),
                Some(_) => Err(Error::BadCharacter(format!("{name} must be nonzero"))),
                None => Err(Error::BadCharacter(format!("{name} is missing"))),
            }
        };
        Ok(match self.kind {
            EtaleKind::Split => Assignment {
                alpha: Some(need(&self.alpha, "alpha")?),
                beta: Some(need(&self.beta, "beta")?),
                gamma: None,
                r: self.r.clone(),
            },
            EtaleKind::Ramified => Assignment { alpha: None, beta: None, gamma: Some(need(&self.gamma, "gamma")?), r: self.r.clone() },
        })
    }

    /// Numeric `χ_c(t)`.
    pub fn central_value(&self) -> Result<Rational> {
        let asg = self.assignment()?;
        self.kind.central_character(1_000_003).specialize(&asg)
    }
}

type Kernel = Arc<BTreeMap<u32, LaurentScalar>>;

/// `WA_χ` for a fixed `q` and étale algebra, with memoized action kernels.
#[derive(Debug)]
pub struct WaldModule {
    field: Fq,
    kind: EtaleKind,
    exec: Exec,
    convention: ActionConvention,
    hecke: HeckeAlgebra,
    kernels: Mutex<HashMap<(Coweight, u32), Kernel>>,
}

impl WaldModule {
    pub fn new(q: u64, kind: EtaleKind) -> Result<Self> {
        Self::with_options(q, kind, Exec::default(), ActionConvention::Forward)
    }

    pub fn with_options(q: u64, kind: EtaleKind, exec: Exec, convention: ActionConvention) -> Result<Self> {
        Ok(WaldModule {
            field: Fq::new(q)?,
            kind,
            exec,
            convention,
            hecke: HeckeAlgebra::with_exec(q, exec)?,
            kernels: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn kind(&self) -> EtaleKind {
        self.kind
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    pub fn representative(&self, m: u32) -> Lattice2 {
        torus::orbit_representative(self.kind, self.field, m)
    }

    pub fn w0(&self) -> WaldFunction {
        WaldFunction::w0(self.q())
    }

    /// `(T_λ ⋆ δ_·)(L_m)` as a map from source orbit to summed character.
    fn kernel(&self, lambda: Coweight, m: u32) -> Kernel {
        if let Some(k) = self.kernels.lock().unwrap().get(&(lambda, m)) {
            return k.clone();
        }
        let q = self.q();
        let pos = match self.convention {
            ActionConvention::Forward => lambda,
            ActionConvention::Reversed => lambda.dual(),
        };
        let mut acc: BTreeMap<u32, LaurentScalar> = BTreeMap::new();
        for l in self.representative(m).enumerate_in_position_with(pos, self.exec) {
            let n = torus::normalize(self.kind, &l);
            let e = acc.entry(n.m).or_insert_with(|| LaurentScalar::zero(q));
            *e = &*e + &n.chi(q);
        }
        acc.retain(|_, v| !v.is_zero());
        let k = Arc::new(acc);
        self.kernels.lock().unwrap().insert((lambda, m), k.clone());
        k
    }

    pub fn hecke_act(&self, h: &HeckeElement, f: &WaldFunction) -> WaldFunction {
        let q = self.q();
        if h.is_zero() || f.is_zero() {
            return WaldFunction::zero(q);
        }
        // orbit invariants move by at most the length of λ
        let reach = h.terms().map(|(l, _)| l.length()).max().unwrap() as u32;
        let supp = f.support();
        let lo = supp[0].saturating_sub(reach);
        let hi = supp[supp.len() - 1] + reach;
        let targets: Vec<u32> = (lo..=hi).collect();
        let values = self.exec.map(targets, |m| {
            let mut v = LaurentScalar::zero(q);
            for (lambda, c) in h.terms() {
                let mut inner = LaurentScalar::zero(q);
                for (src, chi) in self.kernel(*lambda, m).iter() {
                    let fv = f.get(*src);
                    if !fv.is_zero() {
                        inner = &inner + &(chi * &fv);
                    }
                }
                v = &v + &(c * &inner);
            }
            (m, v)
        });
        let mut out = WaldFunction::zero(q);
        for (m, v) in values {
            out.add_value(m, v);
        }
        out
    }

    /// `W_d = A_(d,0) ⋆ W_0`.
    pub fn w_d(&self, d: u32) -> WaldFunction {
        let a = self.hecke.satake_basis(Coweight::new(d as i64, 0));
        self.hecke_act(&a, &self.w0())
    }

    /// Number of colength-`d` sublattices of `L_m` lying on the closed orbit.
    pub fn prop17_counts(&self, d: u32, m: u32) -> usize {
        self.representative(m)
            .closure_members_with(Coweight::new(d as i64, 0), self.exec)
            .iter()
            .filter(|l| torus::normalize(self.kind, l).m == 0)
            .count()
    }

    /// Number of lattices in the closure of `Gr^λ` lying on orbit `m`.
    pub fn orbit_stratum_counts(&self, lambda: Coweight, m: u32) -> usize {
        Lattice2::standard(self.field)
            .closure_members_with(lambda, self.exec)
            .iter()
            .filter(|l| torus::normalize(self.kind, l).m == m)
            .count()
    }

    /// Columns `T_(a,0) ⋆ W_0` for `a ≤ D`, rows indexed by orbit.
    pub fn multone_matrix(&self, dmax: u32) -> ScalarMatrix {
        let q = self.q();
        let cols: Vec<WaldFunction> = (0..=dmax)
            .map(|a| self.hecke_act(&HeckeElement::t(q, Coweight::new(a as i64, 0)), &self.w0()))
            .collect();
        ScalarMatrix::from_columns(q, dmax, &cols)
    }

    /// Columns `W_d` for `d ≤ D`, rows indexed by orbit.
    pub fn cs_matrix(&self, dmax: u32) -> ScalarMatrix {
        let cols: Vec<WaldFunction> = (0..=dmax).map(|d| self.w_d(d)).collect();
        ScalarMatrix::from_columns(self.q(), dmax, &cols)
    }

    /// Checks the eigen-property of the truncated generating function
    /// `K^{≤D} = Σ_{d≤D} s_(0,−d)(e1, e2)·W_d` with `e1·e2 = χ_c(t)`.
    ///
    /// `A_(1,0) ⋆ K^{≤D}` is expanded in the `W_d` basis; its coefficients
    /// on `W_d` for `d ≤ D−1` must equal `(e1+e2)·s_(0,−d)`. The central
    /// operator `A_(1,1)` must act by `e1·e2` on every orbit.
    pub fn ke_check(&self, dmax: u32, e1: &Rational, params: &CharacterParams) -> Result<KeReport> {
        if dmax < 2 {
            return Err(Error::TruncationTooSmall(dmax));
        }
        if params.kind != self.kind {
            return Err(Error::BadCharacter(format!("parameters are for the {} torus", params.kind)));
        }
        if e1.is_zero() {
            return Err(Error::ZeroEigenvalue);
        }
        let q = self.q();
        let asg = params.assignment()?;
        let chi_c = params.central_value()?;
        let e2 = &chi_c / e1;

        let coeffs: Vec<Rational> =
            (0..=dmax).map(|d| schur_gl2(Coweight::new(0, -(d as i64)), e1, &e2)).collect::<Result<_>>()?;
        let mut k = WaldFunction::zero(q);
        for (d, c) in coeffs.iter().enumerate() {
            k = k.add(&self.w_d(d as u32).scale(&LaurentScalar::from_rational(q, c.clone())));
        }
        let a10 = self.hecke.satake_basis(Coweight::new(1, 0));
        let a11 = self.hecke.satake_basis(Coweight::new(1, 1));
        let moved = self.hecke_act(&a10, &k);
        let central = self.hecke_act(&a11, &k);

        // W_d columns up to D+1, specialized
        let top = dmax + 1;
        let basis: Vec<BTreeMap<u32, Rational>> =
            (0..=top).map(|d| self.w_d(d).specialize(&asg)).collect::<Result<_>>()?;
        let moved_num = moved.specialize(&asg)?;
        let get = |f: &BTreeMap<u32, Rational>, m: u32| f.get(&m).cloned().unwrap_or_else(Rational::zero);
        if moved_num.keys().any(|&m| m > top) {
            return Err(Error::BadCharacter("action left the truncation window".into()));
        }
        let mut w_coords = vec![Rational::zero(); top as usize + 1];
        for d in (0..=top).rev() {
            let mut rhs = get(&moved_num, d);
            for dd in (d + 1)..=top {
                rhs -= &w_coords[dd as usize] * get(&basis[dd as usize], d);
            }
            let diag = get(&basis[d as usize], d);
            if diag.is_zero() {
                return Err(Error::BadCharacter(format!("W_{d} vanishes on its top orbit")));
            }
            w_coords[d as usize] = rhs / diag;
        }
        let eig = e1 + &e2;
        let rows: Vec<KeRow> = (0..=top)
            .map(|d| {
                let expected = if d <= dmax { &eig * &coeffs[d as usize] } else { Rational::zero() };
                KeRow { d, computed: w_coords[d as usize].to_string(), expected: expected.to_string(), agrees: w_coords[d as usize] == expected }
            })
            .collect();
        let window = dmax - 1;
        let eigen_pass = rows.iter().take(window as usize + 1).all(|r| r.agrees);
        let max_window = rows.iter().take_while(|r| r.agrees).last().map(|r| r.d);

        let k_num = k.specialize(&asg)?;
        let central_num = central.specialize(&asg)?;
        let central_pass = (0..=dmax).all(|m| get(&central_num, m) == &chi_c * &get(&k_num, m));

        Ok(KeReport {
            kind: self.kind,
            dmax,
            e1: e1.to_string(),
            e2: e2.to_string(),
            window,
            max_window,
            eigen_pass,
            central_pass,
            rows,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KeRow {
    pub d: u32,
    pub computed: String,
    pub expected: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KeReport {
    pub kind: EtaleKind,
    pub dmax: u32,
    pub e1: String,
    pub e2: String,
    /// Largest `d` required to agree.
    pub window: u32,
    /// Largest `d` up to which every coefficient agrees.
    pub max_window: Option<u32>,
    pub eigen_pass: bool,
    pub central_pass: bool,
    pub rows: Vec<KeRow>,
}

impl KeReport {
    pub fn pass(&self) -> bool {
        self.eigen_pass && self.central_pass
    }
}

/// Square matrix of scalars, `entries[row][col]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarMatrix {
    pub entries: Vec<Vec<LaurentScalar>>,
}

impl ScalarMatrix {
    fn from_columns(q: u64, dmax: u32, cols: &[WaldFunction]) -> Self {
        let n = dmax as usize + 1;
        let mut entries = vec![vec![LaurentScalar::zero(q); n]; n];
        for (j, col) in cols.iter().enumerate() {
            for (m, v) in col.values() {
                if (*m as usize) < n {
                    entries[*m as usize][j] = v.clone();
                }
            }
        }
        ScalarMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentScalar {
        &self.entries[row][col]
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.entries[i][j].is_zero()))
    }

    pub fn has_unit_monomial_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| self.entries[i][i].monomial_invert().is_ok())
    }
}
