//! Deterministic CSV, JSON and manifest output.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::nonuniqueness::{ConstructionRecord, Verdict};

use super::config::{to_config_text, RunConfig};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON has no NaN or infinity; those become null.
fn json_f64(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".into()
    }
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

pub const CONSTRUCTION_COLUMNS: [&str; 10] = [
    "eps",
    "h_min",
    "h_max",
    "dv_constructed",
    "dv_variational",
    "f_l1",
    "residual_constructed",
    "residual_variational",
    "s0_pass",
    "gap",
];

pub fn construction_csv(records: &[ConstructionRecord]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.params.epsilon),
                fmt_f64(r.h_eps_bounds.0),
                fmt_f64(r.h_eps_bounds.1),
                fmt_f64(r.dv_constructed),
                fmt_f64(r.dv_variational),
                fmt_f64(r.f_l1),
                fmt_f64(r.residual_constructed),
                fmt_f64(r.residual_variational),
                r.s0_check.to_string(),
                fmt_f64(r.solution_gap),
            ]
        })
        .collect();
    csv_text(&CONSTRUCTION_COLUMNS, &rows)
}

pub fn verdict_json(v: &Verdict) -> String {
    format!(
        "{{\n  \"pass\": {},\n  \"smallest_eps\": {},\n  \"ratio\": {},\n  \"gap\": {}\n}}\n",
        v.pass,
        json_f64(v.smallest_eps),
        json_f64(v.ratio),
        json_f64(v.gap)
    )
}

/// Flat JSON object of named numbers and flags, in the given order.
pub fn summary_json(fields: &[(&str, JsonValue)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| {
            let text = match v {
                JsonValue::Num(x) => json_f64(*x),
                JsonValue::Bool(b) => b.to_string(),
            };
            format!("  \"{k}\": {text}")
        })
        .collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

#[derive(Clone, Copy, Debug)]
pub enum JsonValue {
    Num(f64),
    Bool(bool),
}

/// The configuration preceded by comment lines naming the program version
/// and the files written; `parse_config` reads it back unchanged.
pub fn manifest(cfg: &RunConfig, outputs: &[&str]) -> String {
    let mut s = format!("# {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    s.push_str(&format!("# outputs: {}\n", outputs.join(", ")));
    s.push_str(&to_config_text(cfg));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17);
        }
    }

    #[test]
    fn json_shape() {
        let v = Verdict {
            pass: false,
            smallest_eps: 0.05,
            ratio: f64::NAN,
            gap: 0.5,
        };
        let text = verdict_json(&v);
        assert!(text.contains("\"pass\": false"));
        assert!(text.contains("\"ratio\": null"));
        assert!(!text.contains('\r'));
    }
}
