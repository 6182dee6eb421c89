//! Flat renderings of experiment reports: CSV for downstream tooling and a
//! fixed-width table for terminals. JSON stays on the rich report structs.

use crate::pipeline::{ExperimentReport, StageReport};

pub const CSV_HEADER: &str =
    "system,ansatz,energy_ha,error_mha,fidelity_pct,n_params,cnots,depth,inner_iters,outer_iters";

fn format_fields(system: &str, stage: &StageReport) -> Vec<String> {
    vec![
        system.to_string(),
        stage.ansatz.clone(),
        format!("{:.9}", stage.energy),
        stage
            .error_mha
            .map(|e| format!("{e:.3}"))
            .unwrap_or_default(),
        stage
            .fidelity
            .map(|f| format!("{:.2}", 100.0 * f))
            .unwrap_or_default(),
        stage.n_parameters.to_string(),
        stage.cnot_count.to_string(),
        stage.depth.to_string(),
        stage.inner_iterations.to_string(),
        stage.outer_iterations.to_string(),
    ]
}

/// One CSV line per ladder stage, headed by [`CSV_HEADER`]. Missing exact
/// references leave their cells empty.
pub fn to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for report in reports {
        for stage in &report.stages {
            out.push_str(&format_fields(&report.system, stage).join(","));
            out.push('\n');
        }
    }
    out
}

/// Fixed-width table with the same cells as the CSV; empty cells render
/// as `-`.
pub fn to_table(reports: &[ExperimentReport]) -> String {
    let header: Vec<String> = CSV_HEADER.split(',').map(str::to_string).collect();
    let mut rows: Vec<Vec<String>> = vec![header];
    for report in reports {
        for stage in &report.stages {
            let row: Vec<String> = format_fields(&report.system, stage)
                .into_iter()
                .map(|cell| if cell.is_empty() { "-".into() } else { cell })
                .collect();
            rows.push(row);
        }
    }
    let n_cols = rows[0].len();
    let widths: Vec<usize> = (0..n_cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn sample() -> ExperimentReport {
        ExperimentReport {
            system: "H2".into(),
            n_orbitals: 2,
            n_electrons: 2,
            two_s_z: 0,
            e_fci: Some(-1.137283834),
            stages: vec![StageReport {
                ansatz: "SPA".into(),
                energy: -1.137283834,
                error_mha: Some(0.0),
                fidelity: Some(0.999999),
                n_parameters: 1,
                cnot_count: 3,
                depth: 3,
                inner_iterations: 7,
                outer_iterations: 2,
                converged: true,
                parameters: BTreeMap::from([("t_e0_k0".to_string(), -0.2)]),
            }],
            orbital_coefficients: None,
        }
    }

    #[test]
    fn csv_has_a_header_and_one_line_per_stage() {
        let csv = to_csv(&[sample()]);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "H2,SPA,-1.137283834,0.000,100.00,1,3,3,7,2");
    }

    #[test]
    fn missing_reference_leaves_cells_empty() {
        let mut report = sample();
        report.e_fci = None;
        report.stages[0].error_mha = None;
        report.stages[0].fidelity = None;
        let csv = to_csv(&[report.clone()]);
        assert!(csv.lines().nth(1).unwrap().contains(",,"));
        let table = to_table(&[report]);
        assert!(table.contains(" - "));
    }

    #[test]
    fn table_aligns_its_header_rule() {
        let table = to_table(&[sample()]);
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[1].chars().all(|c| c == '-' || c == ' '));
        assert_eq!(lines[0].len(), lines[2].len());
    }
}
