//! Locale-independent number formatting and CSV assembly.

use rgg_core::montecarlo::RNG_NAME;

use crate::args::Common;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Shortest form of `x` at 12 significant digits, like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `# seed=... rng=...` line echoing every setting that affects the output.
pub fn header_line(command: &str, common: &Common, extra: &[(&str, String)]) -> String {
    let mut line = format!(
        "# command={command} seed={} rng={RNG_NAME} samples={} workers={} abs_tol={} diameter={} model={}",
        common.seed,
        common.samples,
        common.workers,
        fmt_num(common.abs_tol),
        fmt_num(common.diameter),
        common.model
    );
    for (k, v) in extra {
        line.push_str(&format!(" {k}={v}"));
    }
    line.push('\n');
    line
}

/// A CSV document: comment header, column names, rows.
pub fn csv_document(header: String, columns: &[&str], rows: &[Vec<String>]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row)?;
    }
    let body = w.into_inner().map_err(|e| e.into_error())?;
    Ok(header + &String::from_utf8(body).expect("CSV of UTF-8 fields"))
}
