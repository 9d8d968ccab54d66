//! JSON input for symmetric forms: `[[b11, b12], [b21, b22]]` where each
//! entry is an integer, a coefficient list starting at `t^0`, or
//! `{"offset": k, "coeffs": [...]}`.

use serde::Deserialize;
use serde_json::{json, Value};
use wald_core::mat::Mat2;
use wald_core::quadform::{self, SymMatrixO};
use wald_core::series::{Fq, LaurentPoly};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Coeffs(Vec<i64>),
    Shifted { offset: i64, coeffs: Vec<i64> },
}

impl Entry {
    fn poly(&self, f: Fq) -> LaurentPoly {
        match self {
            Entry::Int(n) => LaurentPoly::from_ints(f, 0, &[*n]),
            Entry::Coeffs(cs) => LaurentPoly::from_ints(f, 0, cs),
            Entry::Shifted { offset, coeffs } => LaurentPoly::from_ints(f, *offset, coeffs),
        }
    }
}

pub fn parse_form(f: Fq, text: &str) -> Result<SymMatrixO, CliError> {
    let rows: [[Entry; 2]; 2] =
        serde_json::from_str(text).map_err(|e| CliError::ConfigInvalid(format!("matrix must be [[b11, b12], [b21, b22]]: {e}")))?;
    let m = Mat2::new(rows[0][0].poly(f), rows[0][1].poly(f), rows[1][0].poly(f), rows[1][1].poly(f));
    SymMatrixO::new(m).map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

pub fn classify_json(form: &SymMatrixO, precision: Option<u32>) -> Result<Value, CliError> {
    let f = form.field();
    let d = quadform::diagonalize(form, precision.unwrap_or_else(|| form.default_precision()))?;
    let inv = d.invariant;
    let cover = quadform::covering_type(inv, f);
    let mut out = json!({"a": inv.a, "b": inv.b, "delta": inv.delta, "cover": cover});
    if cover.outside_geometric_scope() {
        out["note"] = json!("unramified nonsplit cover: only possible over a finite residue field");
    }
    Ok(out)
}
