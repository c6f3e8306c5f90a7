//! JSON rendering shared by the CLI and the verification report.
//!
//! Integers that fit in 64 bits are emitted as JSON numbers; anything larger
//! becomes a decimal string, so consumers in any ecosystem can parse results
//! losslessly. Keys are emitted sorted and every list is sorted by the
//! producer, making the output byte-identical across runs and worker counts.

use crate::diophantine::{HyperbolaSolution, MarkovTriple, Vec3};
use crate::factorization::Factorization;
use crate::sl2z::{Mat2, ParabolicParams};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// A `BigInt` as a JSON number when it fits in 64 bits, else as a decimal
/// string.
pub fn int_value(v: &BigInt) -> Value {
    if let Some(i) = v.to_i64() {
        Value::from(i)
    } else if let Some(u) = v.to_u64() {
        Value::from(u)
    } else {
        Value::String(v.to_string())
    }
}

/// Row-major 4-element array.
pub fn mat_value(m: &Mat2) -> Value {
    Value::Array(m.entries().iter().map(|e| int_value(e)).collect())
}

pub fn params_value(p: &ParabolicParams) -> Value {
    json!({
        "eps": p.eps().value(),
        "c": int_value(p.c()),
        "d": int_value(p.d()),
    })
}

pub fn hyperbola_value(s: &HyperbolaSolution) -> Value {
    Value::Array(vec![int_value(s.d1()), int_value(s.d2())])
}

pub fn triple_value(t: &MarkovTriple) -> Value {
    Value::Array(t.components().iter().map(|c| int_value(c)).collect())
}

pub fn vec3_value(v: &Vec3) -> Value {
    Value::Array(v.components().iter().map(|c| int_value(c)).collect())
}

pub fn factorization_value(f: &Factorization) -> Value {
    json!({
        "factors": f.params().iter().map(params_value).collect::<Vec<_>>(),
        "target": mat_value(f.target()),
    })
}

/// The envelope every command emits in `--json` mode.
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, results: Value) -> OutputRecord {
        OutputRecord {
            command: command.to_string(),
            inputs,
            results,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        map.insert("command".into(), Value::from(self.command.clone()));
        map.insert("inputs".into(), self.inputs.clone());
        map.insert("results".into(), self.results.clone());
        Value::Object(map)
    }

    /// Canonical rendering: pretty JSON, sorted keys, trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }
}
