use std::io::{self, Write};

use serde_json::{json, Value};
use vdw_core::report::{ReportRow, TableReport};
use vdw_core::{SearchOutcome, Verdict};

pub(crate) fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn verdict_cell(v: Option<bool>) -> &'static str {
    v.map_or("-", ok_word)
}

pub(crate) fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::Mismatch { .. } => "mismatch",
    }
}

pub(crate) fn search_text(
    out: &mut dyn Write,
    o: &SearchOutcome,
    budget: u64,
    verdict: Option<Verdict>,
) -> io::Result<()> {
    match (o.w_value, &o.witness) {
        (Some(w), Some(c)) => {
            writeln!(out, "W({}, {}) = {w}", o.r, o.k)?;
            writeln!(out, "witness for [1, {}]: {c}", c.n_points())?;
        }
        _ => writeln!(out, "W({}, {}): budget of {budget} nodes exhausted", o.r, o.k)?,
    }
    writeln!(out, "nodes explored: {}", o.nodes_explored)?;
    writeln!(out, "elapsed: {:.3} s", o.elapsed.as_secs_f64())?;
    if let Some(v) = verdict {
        writeln!(out, "registry: {}", verdict_word(v))?;
    }
    Ok(())
}

const HEADERS: [&str; 17] = [
    "r",
    "k",
    "n",
    "log r",
    "log k",
    "a(r,k)",
    "W(r,k)",
    "r^{n+1}",
    "r^{k^2}",
    "printed n",
    "printed a",
    "bracket",
    "n<k^2-1",
    "W<r^{k^2}",
    "W<2^{k^2}",
    "a vs n+1",
    "k>sqrt(n+1)",
];

fn cells(row: &ReportRow) -> Vec<String> {
    let a = row.a.map_or("-".to_string(), |a| format!("{a:.4}"));
    let (pn, pa) = row
        .printed
        .map_or(("-".to_string(), "-".to_string()), |p| (p.n.to_string(), format!("{:.4}", p.a)));
    vec![
        row.r.to_string(),
        row.k.to_string(),
        row.n.to_string(),
        format!("{:.4}", row.log_r),
        format!("{:.4}", row.log_k),
        a,
        row.w.to_string(),
        row.r_pow_n1.to_string(),
        row.r_pow_k2.to_string(),
        pn,
        pa,
        ok_word(row.bracket_ok).into(),
        ok_word(row.square_test_ok).into(),
        ok_word(row.below_r_pow_k2).into(),
        verdict_cell(row.binary_power_ok).into(),
        ok_word(row.trichotomy_ok).into(),
        ok_word(row.sqrt_implication_ok).into(),
    ]
}

pub(crate) fn table_text(out: &mut dyn Write, t: &TableReport) -> io::Result<()> {
    let body: Vec<Vec<String>> = t.rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..HEADERS.len())
        .map(|i| body.iter().map(|r| r[i].len()).chain([HEADERS[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cols: Vec<&str>| -> String {
        let padded: Vec<String> = cols.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ")
    };
    writeln!(out, "{}", line(HEADERS.to_vec()))?;
    for row in &body {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    writeln!(out)?;
    writeln!(
        out,
        "k^2 > n + 1 for every record: {}",
        ok_word(t.k_squared_exceeds_exponent)
    )?;
    let flagged: Vec<&ReportRow> = t.rows.iter().filter(|r| !r.flags.is_empty()).collect();
    if !flagged.is_empty() {
        writeln!(out, "flags:")?;
        for row in flagged {
            for f in &row.flags {
                writeln!(out, "  W({}, {}): {f}", row.r, row.k)?;
            }
        }
    }
    Ok(())
}

pub(crate) fn table_json(t: &TableReport) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|row| {
            json!({
                "r": row.r,
                "k": row.k,
                "n": row.n,
                "log_r": row.log_r,
                "log_k": row.log_k,
                "a": row.a,
                "w": row.w,
                "r_pow_n1": row.r_pow_n1.to_string(),
                "r_pow_k2": row.r_pow_k2.to_string(),
                "printed": row.printed.map(|p| json!({
                    "n": p.n,
                    "log_r": p.log_r,
                    "log_k": p.log_k,
                    "a": p.a,
                    "r_pow_n1": format!("{}^{{{}}}", p.r, p.n1_exp),
                    "r_pow_k2": format!("{}^{{{}}}", p.r, p.k2_exp),
                })),
                "bracket_ok": row.bracket_ok,
                "square_test_ok": row.square_test_ok,
                "below_r_pow_k2": row.below_r_pow_k2,
                "binary_power_ok": row.binary_power_ok,
                "trichotomy_ok": row.trichotomy_ok,
                "sqrt_implication_ok": row.sqrt_implication_ok,
                "flags": row.flags,
            })
        })
        .collect();
    json!({
        "rows": rows,
        "k_squared_exceeds_exponent": t.k_squared_exceeds_exponent,
    })
}
