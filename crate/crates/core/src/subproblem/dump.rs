//! Plain-text dump of a [`ConicProblem`].
//!
//! Layout, one item per line:
//!
//! ```text
//! problem block=<name> outer=<t> inner=<m> mu=<μ> vars=<n>
//! row <label>
//!   affine <b> | <i>:<a_i> ...
//!   gram <g> | <i>:<G_i> ...          (one line per Gram row)
//! constraint <label>
//!   gram ...                           (left-hand side ‖Gx + g‖²)
//!   affine ...                         (right-hand side a·x + b)
//! equality <label>
//!   affine ...
//! start <x_0> <x_1> ...
//! ```
//!
//! Rows read `affine − Σ gram² ≥ t`; numbers use Rust's shortest round-trip
//! formatting and zero coefficients are omitted.

use std::fmt::Write;

use super::{Affine, ConicProblem, GramForm};

fn affine_line(out: &mut String, a: &Affine) {
    let _ = write!(out, "  affine {} |", a.constant);
    for (i, v) in a.coeffs.iter().enumerate() {
        if *v != 0.0 {
            let _ = write!(out, " {i}:{v}");
        }
    }
    out.push('\n');
}

fn gram_lines(out: &mut String, g: &GramForm) {
    for (row, off) in g.rows.iter().zip(&g.offsets) {
        let _ = write!(out, "  gram {off} |");
        for (i, v) in row.idx.iter().zip(&row.val) {
            let _ = write!(out, " {i}:{v}");
        }
        out.push('\n');
    }
}

pub(super) fn dump(p: &ConicProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "problem block={} outer={} inner={} mu={} vars={}",
        if p.meta.block.is_empty() { "-" } else { &p.meta.block },
        p.meta.outer_iter,
        p.meta.inner_iter,
        p.meta.mu,
        p.num_vars
    );
    for r in &p.objective_rows {
        let _ = writeln!(out, "row {}", r.label);
        affine_line(&mut out, &r.affine);
        gram_lines(&mut out, &r.quad);
    }
    for c in &p.constraints {
        let _ = writeln!(out, "constraint {}", c.label);
        gram_lines(&mut out, &c.quad);
        affine_line(&mut out, &c.affine);
    }
    for e in &p.equalities {
        let _ = writeln!(out, "equality {}", e.label);
        affine_line(&mut out, &e.affine);
    }
    out.push_str("start");
    for v in p.start.iter() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::super::{ObjectiveRow, ProblemMeta};
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn dump_lists_rows_and_start() {
        let p = ConicProblem {
            num_vars: 2,
            objective_rows: vec![ObjectiveRow {
                label: "user0".into(),
                affine: Affine {
                    coeffs: DVector::from_column_slice(&[0.0, 2.5]),
                    constant: -1.0,
                },
                quad: GramForm::default(),
            }],
            constraints: vec![],
            equalities: vec![],
            start: DVector::from_column_slice(&[1.0, 0.5]),
            meta: ProblemMeta {
                block: "w".into(),
                ..Default::default()
            },
        };
        let text = p.dump();
        assert_eq!(
            text,
            "problem block=w outer=0 inner=0 mu=0 vars=2\nrow user0\n  affine -1 | 1:2.5\nstart 1 0.5\n"
        );
    }
}
