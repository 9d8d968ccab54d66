use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wald_core::hecke::clebsch_gordan;
use wald_core::interp;
use wald_core::lattice::Coweight;
use wald_core::quadform::{self, CoverType, SquareClass, SymFormFq, SymMatrixO};
use wald_core::scalars::{int, Rational};
use wald_core::series::{Fq, LaurentPoly};
use wald_core::torus::EtaleKind;
use wald_core::{CharacterParams, HeckeAlgebra, HeckeElement, Lattice2, WaldModule};

use crate::config::SessionConfig;
use crate::pool::par_map;
use crate::random;
use crate::report::{Report, Row};
use crate::CliError;

const ORACLE: &str = "derived oracle";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    Prop17,
    StratumDim,
    Counts,
    HeckeTables,
    Wd,
    Multone,
    Cs,
    Ke,
    QuadformOrbits,
    Isotropic,
}

impl Campaign {
    pub const ALL: [Campaign; 10] = [
        Campaign::Prop17,
        Campaign::StratumDim,
        Campaign::Counts,
        Campaign::HeckeTables,
        Campaign::Wd,
        Campaign::Multone,
        Campaign::Cs,
        Campaign::Ke,
        Campaign::QuadformOrbits,
        Campaign::Isotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Prop17 => "prop17",
            Campaign::StratumDim => "stratum-dim",
            Campaign::Counts => "counts",
            Campaign::HeckeTables => "hecke-tables",
            Campaign::Wd => "wd",
            Campaign::Multone => "multone",
            Campaign::Cs => "cs",
            Campaign::Ke => "ke",
            Campaign::QuadformOrbits => "quadform-orbits",
            Campaign::Isotropic => "isotropic",
        }
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Campaign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Campaign::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Campaign::ALL.iter().map(|c| c.name()).collect();
            format!("unknown campaign {s}; expected one of {}", names.join(", "))
        })
    }
}

/// Extra knobs that only some subcommands expose.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    /// Restrict the `wd` campaign to a single `d`.
    pub d: Option<u32>,
}

pub fn run_campaign(campaign: Campaign, cfg: &SessionConfig, sel: &Selection) -> Result<Report, CliError> {
    cfg.validate()?;
    let header = json!({
        "campaign": campaign.name(),
        "q": cfg.q,
        "kind": cfg.kind,
        "dmax": cfg.dmax,
        "mmax": cfg.mmax(),
        "D": cfg.truncation,
        "seed": cfg.seed,
        "generator": "ChaCha8",
    });
    let rows = crate::pool::with_workers(cfg.workers, || rows_for(campaign, cfg, sel))??;
    Ok(Report { header, rows })
}

fn rows_for(campaign: Campaign, cfg: &SessionConfig, sel: &Selection) -> Result<Vec<Row>, CliError> {
    let q = cfg.q;
    let field = Fq::new(q)?;
    let module = || WaldModule::new(q, cfg.kind);
    Ok(match campaign {
        Campaign::Prop17 => prop17(&module()?, cfg),
        Campaign::StratumDim => stratum_dim(cfg)?,
        Campaign::Counts => counts(field, cfg),
        Campaign::HeckeTables => hecke_tables(&HeckeAlgebra::new(q)?, cfg),
        Campaign::Wd => wd(&module()?, cfg, sel),
        Campaign::Multone => multone(&module()?, cfg),
        Campaign::Cs => cs(&module()?, cfg),
        Campaign::Ke => ke(&module()?, cfg),
        Campaign::QuadformOrbits => quadform_orbits(field, cfg),
        Campaign::Isotropic => isotropic(field),
    })
}

fn prop17(w: &WaldModule, cfg: &SessionConfig) -> Vec<Row> {
    let cells: Vec<(u32, u32)> = (0..=cfg.mmax()).flat_map(|m| (m..=cfg.dmax).map(move |d| (d, m))).collect();
    let kind = w.kind();
    par_map(cells, |(d, m)| {
        let expected = if kind == EtaleKind::Split { d - m + 1 } else { 1 };
        let (claim, provenance) = match kind {
            EtaleKind::Split => ("sublattices of colength d on the closed orbit", "a union of d-m+1 points"),
            EtaleKind::Ramified => ("sublattices of colength d on the closed orbit", "it is a point"),
        };
        Row::new(json!({"d": d, "m": m}), claim, json!(expected), json!(w.prop17_counts(d, m)), provenance)
    })
}

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

fn stratum_dim(cfg: &SessionConfig) -> Result<Vec<Row>, CliError> {
    let kind = cfg.kind;
    let needed = (cfg.dmax as usize + 2).max(4);
    if needed > PRIMES.len() {
        return Err(CliError::ConfigInvalid(format!("stratum-dim supports dmax <= {}", PRIMES.len() - 2)));
    }
    let modules: BTreeMap<u64, WaldModule> =
        PRIMES[..needed].iter().chain([&cfg.q]).map(|&q| Ok((q, WaldModule::new(q, kind)?))).collect::<Result<_, CliError>>()?;
    let cells: Vec<(i64, u32)> = (0..=cfg.dmax as i64).flat_map(|a| (0..=a as u32 + 1).map(move |m| (a, m))).collect();
    let count = |q: u64, lambda: Coweight, m: u32| modules[&q].orbit_stratum_counts(lambda, m);
    Ok(par_map(cells, |(a, m)| {
        let lambda = Coweight::new(a, 0);
        let cell = json!({"lambda": lambda.to_string(), "m": m});
        let n = count(cfg.q, lambda, m);
        if m as i64 > a {
            return Row::new(cell, "orbit stratum is empty for m > a1-a2", json!({"count": 0}), json!({"count": n}), "is non empty iff 0 <= m <= a1-a2");
        }
        let npts = (m as usize + 1).max(3);
        let pts: Vec<(i64, Rational)> = PRIMES[..npts].iter().map(|&p| (p as i64, int(count(p, lambda, m) as i64))).collect();
        let poly = interp::lagrange(&pts);
        let fresh = PRIMES[npts];
        let predicted = interp::evaluate(&poly, fresh as i64);
        let observed = int(count(fresh, lambda, m) as i64);
        let coeffs: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
        Row::new(
            cell,
            "orbit stratum is nonempty of dimension m",
            json!({"nonempty": true, "degree": m, "fresh_match": true}),
            json!({"nonempty": n > 0, "degree": interp::degree(&poly), "fresh_match": predicted == observed}),
            "has pure dimension m",
        )
        .annotate("polynomial", json!(coeffs))
        .annotate("checked_at", json!(fresh))
    }))
}

fn counts(field: Fq, cfg: &SessionConfig) -> Vec<Row> {
    let q = cfg.q;
    par_map((1..=cfg.dmax as i64).collect(), |d| {
        let n = Lattice2::standard(field).enumerate_in_position(Coweight::new(d, 0)).len();
        let expected = q.pow(d as u32 - 1) * (q + 1);
        Row::new(json!({"d": d}), "sublattices of colength d with cyclic quotient", json!(expected), json!(n), ORACLE)
    })
}

/// Number of lattices in position `ν` from a fixed one.
fn cell_size(q: u64, nu: Coweight) -> u64 {
    match nu.length() {
        0 => 1,
        n => q.pow(n as u32 - 1) * (q + 1),
    }
}

fn hecke_tables(alg: &HeckeAlgebra, cfg: &SessionConfig) -> Vec<Row> {
    let q = alg.q();
    let n = cfg.dmax as i64;
    let cells: Vec<(i64, i64)> = (0..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
    let mut rows = par_map(cells, |(a, b)| {
        let (l, m) = (Coweight::new(a, 0), Coweight::new(b, 0));
        let prod = alg.convolve(&HeckeElement::t(q, l), &HeckeElement::t(q, m));
        let t_coeffs: BTreeMap<String, i64> = prod
            .terms()
            .map(|(nu, c)| (nu.to_string(), c.as_integer().and_then(|x| x.to_i64()).unwrap_or(-1)))
            .collect();
        let volume: u64 = prod.terms().map(|(nu, c)| cell_size(q, *nu) * c.as_integer().and_then(|x| x.to_u64()).unwrap_or(0)).sum();
        let sat = alg.in_satake_basis(&alg.convolve(&alg.satake_basis(l), &alg.satake_basis(m)));
        let sat: BTreeMap<String, String> = sat.iter().map(|(nu, c)| (nu.to_string(), c.to_string())).collect();
        let cg: BTreeMap<String, String> = clebsch_gordan(l, m).iter().map(|(nu, k)| (nu.to_string(), k.to_string())).collect();
        Row::new(
            json!({"lambda": l.to_string(), "mu": m.to_string()}),
            "coset-basis product has the right volume; Satake-basis product follows Clebsch-Gordan",
            json!({"volume": cell_size(q, l) * cell_size(q, m), "satake": cg}),
            json!({"volume": volume, "satake": sat}),
            ORACLE,
        )
        .annotate("coset_basis", json!(t_coeffs))
    });
    let t10 = HeckeElement::t(q, Coweight::new(1, 0));
    let sq = alg.convolve(&t10, &t10);
    rows.push(Row::new(
        json!({"lambda": "(1,0)", "mu": "(1,0)", "identity": "quadratic"}),
        "T(1,0)^2 = T(2,0) + (q+1) T(1,1)",
        json!({"(2,0)": 1, "(1,1)": q + 1}),
        json!(sq.terms().map(|(nu, c)| (nu.to_string(), c.as_integer().and_then(|x| x.to_u64()).unwrap_or(0))).collect::<BTreeMap<_, _>>()),
        ORACLE,
    ));
    rows
}

fn wd(w: &WaldModule, cfg: &SessionConfig, sel: &Selection) -> Vec<Row> {
    let kind = w.kind();
    let q = w.q();
    let ds: Vec<u32> = match sel.d {
        Some(d) => vec![d],
        None => (0..=cfg.dmax).collect(),
    };
    par_map(ds, |d| {
        let f = w.w_d(d);
        let counts: Vec<usize> = (0..=d).map(|m| f.get(m).monomial_count(kind.vars())).collect();
        let expected_counts: Vec<u32> = (0..=d).map(|m| if kind == EtaleKind::Split { d - m + 1 } else { 1 }).collect();
        let central = w.hecke_act(&HeckeElement::t(q, Coweight::new(1, 1)), &f) == f.scale(&kind.central_character(q));
        let values: BTreeMap<String, String> = f.values().map(|(m, v)| (m.to_string(), v.to_string())).collect();
        Row::new(
            json!({"d": d}),
            "W_d is supported on orbits 0..d with the predicted monomial counts and central character",
            json!({"support": (0..=d).collect::<Vec<_>>(), "monomials": expected_counts, "central": true}),
            json!({"support": f.support(), "monomials": counts, "central": central}),
            "K_m=0 unless m <= d; 1-dimensional (resp., d-m+1-dimensional)",
        )
        .annotate("top_coefficient", json!(f.get(d).to_string()))
        .annotate("values", json!(values))
    })
}

fn multone(w: &WaldModule, cfg: &SessionConfig) -> Vec<Row> {
    let dmax = cfg.truncation;
    let m = w.multone_matrix(dmax);
    let mut rows = vec![Row::new(
        json!({"D": dmax, "check": "triangular"}),
        "T(a,0) * W_0 vanishes on orbits m > a",
        json!(true),
        json!(m.is_upper_triangular()),
        "a free module of rank one",
    )];
    for i in 0..m.dim() {
        let e = m.get(i, i);
        rows.push(
            Row::new(
                json!({"D": dmax, "diagonal": i}),
                "diagonal entry is a unit monomial",
                json!(true),
                json!(e.monomial_invert().is_ok()),
                "a free module of rank one",
            )
            .annotate("entry", json!(e.to_string())),
        );
    }
    rows
}

fn cs(w: &WaldModule, cfg: &SessionConfig) -> Vec<Row> {
    let kind = w.kind();
    let dmax = cfg.truncation;
    let m = w.cs_matrix(dmax);
    let mut rows = Vec::new();
    for d in 0..=dmax as usize {
        for r in 0..=dmax as usize {
            let e = m.get(r, d);
            let expected = match (r <= d, kind) {
                (false, _) => 0,
                (true, EtaleKind::Split) => d - r + 1,
                (true, EtaleKind::Ramified) => 1,
            };
            rows.push(
                Row::new(
                    json!({"m": r, "d": d}),
                    "monomial count of W_d on orbit m",
                    json!(expected),
                    json!(e.monomial_count(kind.vars())),
                    "1-dimensional (resp., d-m+1-dimensional)",
                )
                .annotate("entry", json!(e.to_string())),
            );
        }
    }
    if dmax >= 1 {
        rows.push(Row::new(
            json!({"m": 0, "d": 1, "check": "non-semisimple"}),
            "W_1 restricted to the closed orbit is nonzero",
            json!(true),
            json!(!m.get(0, 1).is_zero()),
            "the *-restriction W_1 is non zero",
        ));
    }
    rows
}

fn ke(w: &WaldModule, cfg: &SessionConfig) -> Vec<Row> {
    let kind = w.kind();
    let draws: Vec<(u32, Rational, CharacterParams)> = match cfg.explicit_character() {
        Some((e1, p)) => vec![(0, e1, p)],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.draws)
                .map(|i| {
                    let mut p = match kind {
                        EtaleKind::Split => CharacterParams::split(random::nonzero_rational(&mut rng), random::nonzero_rational(&mut rng)),
                        EtaleKind::Ramified => CharacterParams::ramified(random::nonzero_rational(&mut rng)),
                    };
                    p.r = cfg.r.clone();
                    (i, random::nonzero_rational(&mut rng), p)
                })
                .collect()
        }
    };
    let dmax = cfg.truncation;
    par_map(draws, |(i, e1, p)| {
        let mut cell = json!({"draw": i, "e1": e1.to_string()});
        for (k, v) in [("alpha", &p.alpha), ("beta", &p.beta), ("gamma", &p.gamma)] {
            if let Some(v) = v {
                cell[k] = json!(v.to_string());
            }
        }
        let claim = "A(1,0) acts on the truncated K_E by e1+e2 below the truncation; A(1,1) by e1*e2";
        match w.ke_check(dmax, &e1, &p) {
            Ok(rep) => Row::new(
                cell,
                claim,
                json!({"window": dmax - 1, "eigen": true, "central": true}),
                json!({"window": dmax - 1, "eigen": rep.eigen_pass, "central": rep.central_pass}),
                "there is an isomorphism alpha_U",
            )
            .annotate("max_window", json!(rep.max_window))
            .annotate("e2", json!(rep.e2)),
            Err(e) => Row::error(cell, claim, e),
        }
    })
}

fn naive_invariant(s: &SymMatrixO) -> Value {
    let b = s.matrix().min_val();
    let det = s.matrix().det();
    let dv = det.valuation().unwrap_or(i64::MAX);
    json!({"a": dv - b, "b": b, "delta": SquareClass::of(s.field(), det.lowest_coeff())})
}

fn invariant_json(inv: quadform::PhiInvariant) -> Value {
    json!({"a": inv.a, "b": inv.b, "delta": inv.delta})
}

fn quadform_orbits(f: Fq, cfg: &SessionConfig) -> Vec<Row> {
    let prec = cfg.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<_> = (0..cfg.transforms)
        .map(|i| {
            let s = random::sym_form(&mut rng, f, 3, prec as i64 - 1);
            (i, s.clone(), s.transform(&random::unimodular(&mut rng, f, 3), &random::unit(&mut rng, f, 3)))
        })
        .collect();
    let mut rows = par_map(samples, |(i, s, moved)| {
        let cell = json!({"transform": i});
        let claim = "similitude preserves the invariant; parity of a-b decides ramification";
        let moved = match moved {
            Ok(m) => m,
            Err(e) => return Row::error(cell, claim, e),
        };
        match quadform::diagonalize(&moved, prec) {
            Ok(d) => {
                let ramified = quadform::covering_type(d.invariant, f) == CoverType::RamifiedCover;
                let mut expected = naive_invariant(&s);
                expected["ramified"] = json!((d.invariant.a - d.invariant.b) % 2 != 0);
                let mut computed = invariant_json(d.invariant);
                computed["ramified"] = json!(ramified);
                Row::new(cell, claim, expected, computed, "anysotropic if a-b is odd and hyperbolic otherwise")
            }
            Err(e) => Row::error(cell, claim, e),
        }
    });
    rows.extend(completeness(f));
    rows
}

/// Every form with entries of degree `< k` and `val(det) <= 3` is connected
/// to the first form found with the same invariant. `k` is the largest
/// value keeping the search under a million forms.
fn completeness(f: Fq) -> Vec<Row> {
    let q = f.q() as u64;
    let k = (1..=4u32).rev().find(|k| q.pow(3 * k) <= 1_000_000).unwrap_or(1);
    let prec = 4u32;
    let polys: Vec<LaurentPoly> = (0..q.pow(k))
        .map(|mut n| {
            let coeffs = (0..k)
                .map(|_| {
                    let c = (n % q) as u32;
                    n /= q;
                    c
                })
                .collect();
            LaurentPoly::from_coeffs(f, 0, coeffs)
        })
        .collect();
    let triples: Vec<(usize, usize, usize)> = {
        let n = polys.len();
        (0..n).flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))).collect()
    };
    let classified = par_map(triples, |(x, y, z)| {
        let s = SymMatrixO::from_entries(polys[x].clone(), polys[y].clone(), polys[z].clone()).ok()?;
        if s.det_val() > 3 {
            return None;
        }
        Some((quadform::diagonalize(&s, prec).ok()?.invariant, s))
    });
    let mut classes: BTreeMap<quadform::PhiInvariant, Vec<SymMatrixO>> = BTreeMap::new();
    for (inv, s) in classified.into_iter().flatten() {
        classes.entry(inv).or_default().push(s);
    }
    let classes: Vec<_> = classes.into_iter().collect();
    par_map(classes, |(inv, forms)| {
        let rep = &forms[0];
        let target = rep.matrix().truncate(prec as i64);
        let connected = forms
            .iter()
            .filter(|s| match quadform::connect(s, rep, prec) {
                Ok(Some((a, eps))) => {
                    a.det().is_unit() && eps.is_unit() && a.mul(s.matrix()).mul(&a.transpose()).scale(&eps).truncate(prec as i64) == target
                }
                _ => false,
            })
            .count();
        Row::new(
            json!({"class": inv.to_string(), "entry_degree_below": k}),
            "forms with equal invariants are similar",
            json!({"forms": forms.len(), "connected": forms.len()}),
            json!({"forms": forms.len(), "connected": connected}),
            "are isomorphic if and only if",
        )
    })
}

fn isotropic(f: Fq) -> Vec<Row> {
    let q = f.q();
    let lines: Vec<(u32, u32)> = (0..q).map(|s| (1, s)).chain([(0, 1)]).collect();
    // (rank, square class of the nonzero entry or of -det)
    let mut classes: BTreeMap<(u32, SquareClass), Vec<(u32, u32)>> = BTreeMap::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let form = SymFormFq { x, y, z };
                let rank = form.rank(f);
                let class = match rank {
                    0 => SquareClass::Square,
                    1 => SquareClass::of(f, if x != 0 { x } else { z }),
                    _ => SquareClass::of(f, f.neg(form.det(f))),
                };
                let brute = lines.iter().filter(|(u, v)| form.eval(f, *u, *v) == 0).count() as u32;
                classes.entry((rank, class)).or_default().push((quadform::isotropic_line_count(&form, f), brute));
            }
        }
    }
    classes
        .into_iter()
        .map(|((rank, class), results)| {
            let expected = match (rank, class) {
                (0, _) => q + 1,
                (1, _) => 1,
                (_, SquareClass::Square) => 2,
                (_, SquareClass::NonSquare) => 0,
            };
            let mut observed: Vec<u32> = results.iter().map(|r| r.0).collect();
            observed.sort_unstable();
            observed.dedup();
            let brute_ok = results.iter().all(|(c, b)| c == b);
            Row::new(
                json!({"rank": rank, "class": class}),
                "isotropic lines: all for the zero form, the kernel for rank one, 2 or 0 for a plane",
                json!({"lines": [expected], "matches_brute_force": true}),
                json!({"lines": observed, "matches_brute_force": brute_ok}),
                "Y is a point if the kernel of the corresponding form is 1-dimensional",
            )
            .annotate("forms", json!(results.len()))
        })
        .collect()
}
