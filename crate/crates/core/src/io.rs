//! Text output helpers. Every float is written with 17 significant digits.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::Result;

/// 17 significant digits in scientific notation, enough to round trip an `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn rewrite(v: &mut Value) {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains(['.', 'e', 'E']) {
                if let Ok(x) = s.parse::<f64>() {
                    *v = if x.is_finite() {
                        Value::Number(Number::from_str(&fmt17(x)).expect("valid number"))
                    } else {
                        Value::Null
                    };
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(rewrite),
        Value::Object(o) => o.values_mut().for_each(rewrite),
        _ => {}
    }
}

/// Serializes to a JSON value with all non-integer numbers at full precision.
pub fn to_json_value<S: Serialize>(x: &S) -> Result<Value> {
    let mut v = serde_json::to_value(x)?;
    rewrite(&mut v);
    Ok(v)
}

pub fn to_json_string<S: Serialize>(x: &S) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_json_value(x)?)?)
}

pub fn write_json<S: Serialize>(path: &Path, x: &S) -> Result<()> {
    let mut s = to_json_string(x)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}
