//! Flat period tables for CSV output.

use serde::Serialize;

use super::{PeriodMatrix, Side};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PeriodRow {
    pub u_re: f64,
    pub u_im: f64,
    pub side: &'static str,
    pub thimble: String,
    pub basis_index: usize,
    pub value_re: f64,
    pub value_im: f64,
    pub method: &'static str,
    pub tol: f64,
}

pub fn rows(pm: &PeriodMatrix) -> Vec<PeriodRow> {
    let mut out = Vec::new();
    for side in [Side::Minus, Side::Plus] {
        for (label, row) in pm.labels.iter().zip(pm.side(side)) {
            let thimble = label.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("-");
            for (a, v) in row.iter().enumerate() {
                out.push(PeriodRow {
                    u_re: pm.u.re,
                    u_im: pm.u.im,
                    side: side.as_str(),
                    thimble: thimble.clone(),
                    basis_index: a,
                    value_re: v.re,
                    value_im: v.im,
                    method: pm.method.as_str(),
                    tol: pm.tol,
                });
            }
        }
    }
    out
}

/// CSV text with header `u_re,u_im,side,thimble,basis_index,value_re,value_im,method,tol`.
pub fn to_csv<'a>(tables: impl IntoIterator<Item = &'a PeriodMatrix>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut any = false;
    for pm in tables {
        for r in rows(pm) {
            w.serialize(r)?;
            any = true;
        }
    }
    if !any {
        w.write_record(["u_re", "u_im", "side", "thimble", "basis_index", "value_re", "value_im", "method", "tol"])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
