use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{LinearProgram, RowSense};
use crate::error::{Error, Result};

/// Renders the program in free-format MPS. Labels are written verbatim, so
/// they must not contain whitespace.
pub fn to_mps(lp: &LinearProgram, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {name}");
    out.push_str("ROWS\n N obj\n");
    for r in &lp.rows {
        let tag = match r.sense {
            RowSense::Le => 'L',
            RowSense::Ge => 'G',
            RowSense::Eq => 'E',
        };
        let _ = writeln!(out, " {tag} {}", r.label);
    }

    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.n_vars()];
    for (i, r) in lp.rows.iter().enumerate() {
        for &(j, a) in &r.coeffs {
            by_col[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    for (j, entries) in by_col.iter().enumerate() {
        let col = &lp.var_labels[j];
        if lp.objective[j] != 0.0 || entries.is_empty() {
            let _ = writeln!(out, " {col} obj {}", lp.objective[j]);
        }
        for &(i, a) in entries {
            let _ = writeln!(out, " {col} {} {a}", lp.rows[i].label);
        }
    }

    out.push_str("RHS\n");
    if lp.objective_offset != 0.0 {
        let _ = writeln!(out, " rhs obj {}", -lp.objective_offset);
    }
    for r in lp.rows.iter().filter(|r| r.rhs != 0.0) {
        let _ = writeln!(out, " rhs {} {}", r.label, r.rhs);
    }

    out.push_str("BOUNDS\n");
    for j in 0..lp.n_vars() {
        let (lo, hi, col) = (lp.lower[j], lp.upper[j], &lp.var_labels[j]);
        if lo == hi {
            let _ = writeln!(out, " FX bnd {col} {lo}");
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR bnd {col}");
            }
            (false, true) => {
                let _ = writeln!(out, " MI bnd {col}");
                let _ = writeln!(out, " UP bnd {col} {hi}");
            }
            (true, fin_hi) => {
                if lo != 0.0 {
                    let _ = writeln!(out, " LO bnd {col} {lo}");
                }
                if fin_hi {
                    let _ = writeln!(out, " UP bnd {col} {hi}");
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

pub fn dump_lp(lp: &LinearProgram, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("lp");
    fs::write(path, to_mps(lp, name)).map_err(|e| Error::io(path, e))
}
