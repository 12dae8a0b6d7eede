use std::fmt::Write as _;

use super::PricingReport;

/// Six decimals, with negative zero printed as zero.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Prices, uplifts and summary sections, separated by blank lines.
pub fn render_csv(reports: &[PricingReport]) -> String {
    let mut out = String::from("method,period,price\n");
    for r in reports {
        for (s, p) in r.prices.as_slice().iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", r.method, s + 1, fmt_num(*p));
        }
    }
    out.push_str("\nmethod,generator,v_j,iso_profit,uplift\n");
    for r in reports {
        for g in &r.per_gen {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.method,
                g.id,
                fmt_num(g.v_j),
                fmt_num(g.iso_profit),
                fmt_num(g.uplift)
            );
        }
    }
    out.push_str("\nmethod,total_uplift,z_qip,relaxation_obj,gap_tm\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.method,
            fmt_num(r.total_uplift),
            fmt_num(r.z_qip),
            fmt_num(r.relaxation_objective),
            r.gap_tm.map_or(String::new(), fmt_num)
        );
    }
    out
}

pub(crate) fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
}

/// Aligned tables for reading in a terminal.
pub fn render_pretty(reports: &[PricingReport]) -> String {
    let mut out = String::new();
    let horizon = reports.first().map_or(0, |r| r.prices.len());
    let mut header = vec!["method".to_string()];
    header.extend((1..=horizon).map(|s| format!("t={s}")));
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.method.to_string()];
            row.extend(r.prices.as_slice().iter().map(|p| fmt_num(*p)));
            row
        })
        .collect();
    out.push_str("Prices\n");
    table(&mut out, &header.iter().map(String::as_str).collect::<Vec<_>>(), &rows);

    let rows: Vec<Vec<String>> = reports
        .iter()
        .flat_map(|r| {
            r.per_gen.iter().map(move |g| {
                vec![
                    r.method.to_string(),
                    g.id.clone(),
                    fmt_num(g.v_j),
                    fmt_num(g.iso_profit),
                    fmt_num(g.uplift),
                ]
            })
        })
        .collect();
    out.push_str("\nUplift\n");
    table(&mut out, &["method", "generator", "v_j", "iso_profit", "uplift"], &rows);

    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.method.to_string(),
                fmt_num(r.total_uplift),
                fmt_num(r.z_qip),
                fmt_num(r.relaxation_objective),
                r.gap_tm.map_or("-".into(), |g| format!("{:.2}%", 100.0 * g)),
            ]
        })
        .collect();
    out.push_str("\nSummary\n");
    table(&mut out, &["method", "total_uplift", "z_qip", "relaxation_obj", "gap_tm"], &rows);
    out
}
