//! Parameter sweeps emitting plot-ready tables.

use qfourier_core::interval::{condition5_scan, subexp_growth_profile, ScanVerdict};
use qfourier_core::model::QGModel;
use qfourier_core::similarity::cb_obstruction_scan;
use qfourier_core::transform::twisted_norm;
use qfourier_core::{DualElement, Exponent};
use rayon::prelude::*;

use crate::report::cell;

/// A finished sweep: fixed header plus rows in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub quantity: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Human-readable summary (scan verdicts), kept out of the CSV body.
    pub notes: Vec<String>,
}

fn verdict_note(label: &str, v: &ScanVerdict) -> String {
    match v {
        ScanVerdict::Bounded { sup, witness } => {
            format!("{label}: bounded on the scanned range, max {sup} at k={witness}")
        }
        ScanVerdict::Diverges { witness } => format!("{label}: diverges empirically, first exceedance at k={witness}"),
    }
}

/// `twisted_norm(a, p, x)` over every `(p, x)` pair; rows ordered by `p`
/// first, then `x`.
pub fn twisted_norm_sweep(
    a: &DualElement,
    ps: &[Exponent],
    xgrid: &[f64],
    model: &QGModel,
) -> qfourier_core::Result<Table> {
    let points: Vec<(Exponent, f64)> = ps.iter().flat_map(|&p| xgrid.iter().map(move |&x| (p, x))).collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&(p, x)| twisted_norm(a, p, x, model))
        .collect::<qfourier_core::Result<_>>()?;
    let rows = points
        .iter()
        .zip(values)
        .map(|(&(p, x), v)| vec![p.to_string(), cell(x), cell(v)])
        .collect();
    Ok(Table {
        quantity: "twisted-norm",
        header: vec!["p", "x", "value"],
        rows,
        notes: Vec::new(),
    })
}

pub fn cb_obstruction_sweep(model: &QGModel, kmax: u64, threshold: f64) -> qfourier_core::Result<Table> {
    let scan = cb_obstruction_scan(model, kmax, threshold)?;
    let rows = scan
        .rows
        .iter()
        .map(|r| {
            vec![
                r.label.0.to_string(),
                cell(r.dim),
                cell(r.qdim),
                cell(r.max_q),
                cell(r.value),
            ]
        })
        .collect();
    Ok(Table {
        quantity: "cb-obstruction",
        header: vec!["k", "dim", "qdim", "max_q", "value"],
        rows,
        notes: vec![verdict_note("cb-obstruction", &scan.verdict)],
    })
}

/// One block of rows per twist, in the order given.
pub fn condition5_sweep(model: &QGModel, p: Exponent, xs: &[f64], kmax: u64) -> qfourier_core::Result<Table> {
    let scans = xs
        .par_iter()
        .map(|&x| condition5_scan(model, p, x, kmax))
        .collect::<qfourier_core::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for (x, scan) in xs.iter().zip(&scans) {
        for (l, v) in &scan.rows {
            rows.push(vec![cell(*x), l.0.to_string(), cell(*v)]);
        }
        notes.push(verdict_note(&format!("condition5 p={p} x={x}"), &scan.verdict));
    }
    Ok(Table {
        quantity: "condition5",
        header: vec!["x", "k", "value"],
        rows,
        notes,
    })
}

pub fn growth_profile_sweep(model: &QGModel, kmax: u64) -> qfourier_core::Result<Table> {
    let prof = subexp_growth_profile(model, kmax)?;
    let rows = prof.rows.iter().map(|(k, v)| vec![k.to_string(), cell(*v)]).collect();
    Ok(Table {
        quantity: "growth-profile",
        header: vec!["k", "value"],
        rows,
        notes: vec![format!("growth-profile: {:?}", prof.class)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfourier_core::model::Label;

    #[test]
    fn cb_sweep_rows() {
        let m = QGModel::suq2(0.5).unwrap();
        let t = cb_obstruction_sweep(&m, 20, 1e6).unwrap();
        assert_eq!(t.rows.len(), 21);
        let v: f64 = t.rows[2][4].parse().unwrap();
        assert!((v - 16.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn twisted_norm_sweep_matches_direct_calls() {
        let m = QGModel::suq2(0.5).unwrap();
        let a = DualElement::matrix_element(&m, Label(1), 0, 1).unwrap();
        let grid = [0.0, 0.5, 1.0];
        let t = twisted_norm_sweep(&a, &[Exponent::ONE], &grid, &m).unwrap();
        for (row, x) in t.rows.iter().zip(grid) {
            let v: f64 = row[2].parse().unwrap();
            assert_eq!(v, twisted_norm(&a, Exponent::ONE, x, &m).unwrap());
        }
    }

    #[test]
    fn condition5_rows_grouped_by_x() {
        let m = QGModel::suq2(0.5).unwrap();
        let p = Exponent::finite(1.5).unwrap();
        let t = condition5_sweep(&m, p, &[0.0, 1.5], 10).unwrap();
        assert_eq!(t.rows.len(), 22);
        assert_eq!(t.rows[11][0], "1.5");
        assert_eq!(t.notes.len(), 2);
    }
}
