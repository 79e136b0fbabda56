// SPDX-License-Identifier: Apache-2.0

//! Text and CSV rendering of planning tables.

use std::fmt::Write as _;

use super::{DetectionError, DetectionPlan, ErrorModel};

pub const CSV_HEADER: &str = "label,p_intra,p_inter,diff,target,n,n_eer,log10_far,log10_frr";

/// One `(model, target)` cell of a planning table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanCell {
    pub label: String,
    pub model: ErrorModel,
    pub target: f64,
    pub outcome: Result<DetectionPlan, DetectionError>,
}

/// CSV with one line per cell. Infeasible cells keep their estimator columns
/// and leave the plan columns empty.
pub fn render_csv(cells: &[PlanCell]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        let (pi, pe) = (c.model.p_intra(), c.model.p_inter());
        let _ = write!(out, "{},{},{},{:.4},{:e},", c.label, pi, pe, pe - pi, c.target);
        match &c.outcome {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "{},{},{:.2},{:.2}",
                    p.n,
                    p.n_eer,
                    p.log10_far(),
                    p.log10_frr()
                );
            }
            Err(_) => out.push_str(",,,\n"),
        }
    }
    out
}

/// Fixed-width table, one line per cell.
pub fn render_text(cells: &[PlanCell]) -> String {
    let mut out = format!(
        "{:<10} {:>8} {:>8} {:>7} {:>7} {:>8} {:>7} {:>10} {:>10}\n",
        "label", "p_intra", "p_inter", "diff", "target", "n", "n_eer", "log10FAR", "log10FRR"
    );
    for c in cells {
        let (pi, pe) = (c.model.p_intra(), c.model.p_inter());
        let _ = write!(
            out,
            "{:<10} {:>8.4} {:>8.4} {:>7.4} {:>7.0e} ",
            c.label,
            pi,
            pe,
            pe - pi,
            c.target
        );
        match &c.outcome {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "{:>8} {:>7} {:>10.2} {:>10.2}",
                    p.n,
                    p.n_eer,
                    p.log10_far(),
                    p.log10_frr()
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{e}");
            }
        }
    }
    out
}
