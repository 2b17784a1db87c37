//! Reader for the attack-curve CSV (`Q, eve_value, ab_value, status`).

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV contains no usable rows")]
    Empty,
    #[error("row {row} has a non-finite value")]
    NonFinite { row: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackRow {
    #[serde(rename = "Q")]
    pub q: f64,
    pub eve_value: f64,
    pub ab_value: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackReport {
    pub rows: Vec<AttackRow>,
    /// Rows dropped because the solver did not report an optimum.
    pub skipped: usize,
    pub eve_max: f64,
    /// Where `eve_value = Q`, by linear interpolation.
    pub q_star: Option<f64>,
    pub q0: f64,
    pub at_q0: Option<AttackRow>,
    pub eve_non_increasing: bool,
}

fn usable(status: &str) -> bool {
    let s = status.trim().to_ascii_lowercase();
    s.starts_with("optimal") || s == "ok" || s == "solved"
}

fn interpolate(a: &AttackRow, b: &AttackRow, q: f64) -> AttackRow {
    let t = if b.q == a.q { 0.0 } else { (q - a.q) / (b.q - a.q) };
    AttackRow {
        q,
        eve_value: a.eve_value + t * (b.eve_value - a.eve_value),
        ab_value: a.ab_value + t * (b.ab_value - a.ab_value),
        status: if t == 0.0 { a.status.clone() } else { "interpolated".into() },
    }
}

pub fn attack_report<R: Read>(input: R, q0: f64) -> Result<AttackReport, AttackError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (i, row) in reader.deserialize::<AttackRow>().enumerate() {
        let row = row?;
        if ![row.q, row.eve_value, row.ab_value].iter().all(|v| v.is_finite()) {
            return Err(AttackError::NonFinite { row: i + 1 });
        }
        if usable(&row.status) {
            rows.push(row);
        } else {
            skipped += 1;
        }
    }
    if rows.is_empty() {
        return Err(AttackError::Empty);
    }
    rows.sort_by(|a, b| a.q.total_cmp(&b.q));

    let gap = |r: &AttackRow| r.eve_value - r.q;
    let q_star = rows.iter().find(|r| gap(r) == 0.0).map(|r| r.q).or_else(|| {
        rows.windows(2).find_map(|w| {
            let (d0, d1) = (gap(&w[0]), gap(&w[1]));
            (d0.signum() != d1.signum()).then(|| w[0].q + d0 * (w[1].q - w[0].q) / (d0 - d1))
        })
    });
    let at_q0 = rows
        .windows(2)
        .find(|w| w[0].q <= q0 && q0 <= w[1].q)
        .map(|w| interpolate(&w[0], &w[1], q0))
        .or_else(|| rows.iter().find(|r| r.q == q0).cloned());
    let eve_non_increasing = rows.windows(2).all(|w| w[1].eve_value <= w[0].eve_value + 1e-6);
    let eve_max = rows.iter().map(|r| r.eve_value).fold(f64::NEG_INFINITY, f64::max);
    Ok(AttackReport {
        rows,
        skipped,
        eve_max,
        q_star,
        q0,
        at_q0,
        eve_non_increasing,
    })
}

pub fn render_table(report: &AttackReport) -> String {
    let mut out = String::from("       Q   eve_value    ab_value  status\n");
    for r in &report.rows {
        out.push_str(&format!("{:>8.4}  {:>10.6}  {:>10.6}  {}\n", r.q, r.eve_value, r.ab_value, r.status));
    }
    out.push_str(&format!("max eve_value: {:.6}\n", report.eve_max));
    match report.q_star {
        Some(q) => out.push_str(&format!("intersection Q*: {q:.6}\n")),
        None => out.push_str("intersection Q*: none in grid\n"),
    }
    match &report.at_q0 {
        Some(r) => out.push_str(&format!(
            "at Q0 = {:.4}: eve_value {:.6}, ab_value {:.6}\n",
            report.q0, r.eve_value, r.ab_value
        )),
        None => out.push_str(&format!("Q0 = {:.4} outside grid\n", report.q0)),
    }
    out.push_str(&format!(
        "eve_value non-increasing: {}\n",
        if report.eve_non_increasing { "pass" } else { "FAIL" }
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE: &str = "Q,eve_value,ab_value,status
0.75,0.80,0.75,optimal
0.80,0.75,0.80,optimal
0.85,0.64,0.85,optimal
0.90,0.50,0.90,infeasible
";

    #[test]
    fn intersection_and_q0_row() {
        let r = attack_report(CURVE.as_bytes(), 0.8334).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.skipped, 1);
        // d = 0.05 at 0.75, -0.05 at 0.80
        assert!((r.q_star.unwrap() - 0.775).abs() < 1e-12);
        let at = r.at_q0.clone().unwrap();
        assert!((at.eve_value - (0.75 - 0.11 * 0.668)).abs() < 1e-9);
        assert!(r.eve_non_increasing);
        assert!(render_table(&r).contains("intersection Q*: 0.775000"));
    }

    #[test]
    fn unsorted_input_and_monotonicity_failure() {
        let csv = "Q,eve_value,ab_value,status\n0.9,0.7,0.9,optimal\n0.8,0.6,0.8,optimal\n";
        let r = attack_report(csv.as_bytes(), 0.8334).unwrap();
        assert_eq!(r.rows[0].q, 0.8);
        assert!(!r.eve_non_increasing);
        assert_eq!(r.q_star, None);
    }

    #[test]
    fn empty_and_malformed() {
        assert!(matches!(attack_report("".as_bytes(), 0.8334), Err(AttackError::Empty)));
        assert!(matches!(
            attack_report("Q,eve_value,ab_value,status\n".as_bytes(), 0.8334),
            Err(AttackError::Empty)
        ));
        assert!(matches!(
            attack_report("Q,eve_value,ab_value,status\n0.8,abc,0.8,optimal\n".as_bytes(), 0.8334),
            Err(AttackError::Csv(_))
        ));
        assert!(matches!(
            attack_report("Q,eve_value,ab_value,status\n0.8,NaN,0.8,optimal\n".as_bytes(), 0.8334),
            Err(AttackError::NonFinite { row: 1 })
        ));
    }
}
