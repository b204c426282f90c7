//! Deterministic emission of the machine-readable output files.
//!
//! Floats are printed as decimal with 17 significant digits (`{:.16e}`),
//! which round-trips `f64` exactly; field order is fixed by construction.
//! Re-running a command with the same config and seed therefore reproduces
//! every output byte for byte.

use num_complex::Complex64;

use crate::fock::LinearOperator;
use crate::povm::CheckReport;

/// 17-significant-digit decimal rendering, round-trip exact for `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Ordered JSON object builder.
#[derive(Debug, Default)]
pub struct JsonMap {
    fields: Vec<(String, String)>,
}

impl JsonMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.fields
            .push((key.into(), format!("\"{}\"", escape(value))));
        self
    }

    pub fn f64(mut self, key: &str, value: f64) -> Self {
        self.fields.push((key.into(), fmt_f64(value)));
        self
    }

    pub fn u64(mut self, key: &str, value: u64) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn usize(mut self, key: &str, value: usize) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    /// Inserts pre-rendered JSON (nested objects, arrays).
    pub fn raw(mut self, key: &str, rendered: String) -> Self {
        self.fields.push((key.into(), rendered));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            out.push_str("  \"");
            out.push_str(&escape(k));
            out.push_str("\": ");
            out.push_str(&indent_continuation(v));
            if i + 1 < self.fields.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }
}

fn indent_continuation(v: &str) -> String {
    if v.contains('\n') {
        v.replace('\n', "\n  ")
    } else {
        v.to_string()
    }
}

/// Complex value as the two-element array `[re, im]`.
pub fn complex_json(z: Complex64) -> String {
    format!("[{}, {}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// Row-major matrix entries as a JSON array of `[re, im]` pairs.
pub fn matrix_entries_json(op: &LinearOperator) -> String {
    let n = op.dim();
    let mut out = String::from("[\n");
    for i in 0..n {
        for j in 0..n {
            out.push_str("  ");
            out.push_str(&complex_json(op.entry(i, j)));
            if i * n + j + 1 < n * n {
                out.push(',');
            }
            out.push('\n');
        }
    }
    out.push(']');
    out
}

pub fn check_report_json(report: &CheckReport) -> String {
    JsonMap::new()
        .f64("hermiticity_defect", report.hermiticity_defect)
        .f64("min_eigenvalue", report.min_eigenvalue)
        .f64("trace_defect", report.trace_defect)
        .bool("passed", report.passed)
        .render()
        .trim_end()
        .to_string()
}

/// `<name>.matrix.json` body: dimension, row-major entries, check report.
pub fn matrix_file(op: &LinearOperator, report: &CheckReport) -> String {
    JsonMap::new()
        .usize("dim", op.dim())
        .raw("entries", matrix_entries_json(op))
        .raw("check", check_report_json(report))
        .render()
}

/// `<name>.heatmap.csv` body: header then one `p,q,value` row per cell,
/// row-major with `q` fastest.
pub fn heatmap_csv(ps: &[f64], qs: &[f64], values: &[f64]) -> String {
    assert_eq!(values.len(), ps.len() * qs.len());
    let mut out = String::from("p,q,value\n");
    for (i, p) in ps.iter().enumerate() {
        for (j, q) in qs.iter().enumerate() {
            out.push_str(&fmt_f64(*p));
            out.push(',');
            out.push_str(&fmt_f64(*q));
            out.push(',');
            out.push_str(&fmt_f64(values[i * qs.len() + j]));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            1.0 / (2.0 * std::f64::consts::PI),
            1e-300,
            (-2.0f64).exp(),
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_escaping() {
        let m = JsonMap::new().str("k", "a\"b\\c\nd").render();
        assert!(m.contains("a\\\"b\\\\c\\nd"));
    }

    #[test]
    fn heatmap_q_fastest() {
        let csv = heatmap_csv(&[0.0, 1.0], &[5.0, 6.0], &[1.0, 2.0, 3.0, 4.0]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "p,q,value");
        assert!(lines[1].starts_with(&format!("{},{}", fmt_f64(0.0), fmt_f64(5.0))));
        assert!(lines[2].starts_with(&format!("{},{}", fmt_f64(0.0), fmt_f64(6.0))));
        assert!(lines[3].starts_with(&format!("{},{}", fmt_f64(1.0), fmt_f64(5.0))));
    }
}
