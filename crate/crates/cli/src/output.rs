//! Number formatting shared by the CSV and JSON writers.

use std::io::{self, Write};
use std::str::FromStr;

use qpt_core::criticality::SweepTable;
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: u64 = 1;

pub const CSV_HEADER: &str = "gamma,lambda,name,value,dvalue_dlambda";

/// 17 significant digits; non-finite values become `nan`, `inf` or `-inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number with the same digits as [`fmt_num`]; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt_num(x)).expect("formatted float is a JSON number"))
}

pub fn axes(values: [f64; 3]) -> Value {
    let mut m = Map::new();
    for (k, v) in ["x", "y", "z"].into_iter().zip(values) {
        m.insert(k.into(), num(v));
    }
    Value::Object(m)
}

/// Object with `schema_version` and `kind` already filled in.
pub fn record(kind: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    m.insert("kind".into(), Value::from(kind));
    m
}

pub fn write_json(out: &mut impl Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")
}

/// Writes the sweep table; failed cells are `nan`, a missing derivative is empty.
pub fn write_sweep_csv(out: &mut impl Write, table: &SweepTable<f64>) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &table.rows {
        let value = row.value.as_ref().map_or(f64::NAN, |v| *v);
        let derivative = match &row.derivative {
            None => String::new(),
            Some(Ok(d)) => fmt_num(d.value),
            Some(Err(_)) => "nan".into(),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(row.gamma),
            fmt_num(row.lambda),
            row.observable.name(),
            fmt_num(value),
            derivative
        )?;
    }
    Ok(())
}
