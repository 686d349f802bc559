//! Canonical JSON: sorted keys, no whitespace, every float written with 17
//! significant digits in scientific notation. Parsing canonical output and
//! writing it again reproduces the same bytes.

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use crate::exact::ExactScalar;

/// `1.5` becomes `1.5000000000000000e0`. Non-finite values have no JSON
/// spelling and are written as `null` by [`float_value`].
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn float_value(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex_value(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), float_value(z.re));
    m.insert("im".into(), float_value(z.im));
    Value::Object(m)
}

pub fn exact_value(z: &ExactScalar) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), Value::String(z.re().to_string()));
    m.insert("im".into(), Value::String(z.im().to_string()));
    Value::Object(m)
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_value(&map[key], out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn formatting() {
        assert_eq!(format_float(1.5), "1.5000000000000000e0");
        assert_eq!(format_float(-1e-12), "-9.9999999999999998e-13");
        assert_eq!(format_float(0.25), "2.5000000000000000e-1");
        let v = json!({"b": 1, "a": [1.5, null, "x"], "c": {"z": true, "y": -2}});
        assert_eq!(
            to_canonical_string(&v),
            r#"{"a":[1.5000000000000000e0,null,"x"],"b":1,"c":{"y":-2,"z":true}}"#
        );
    }

    proptest! {
        #[test]
        fn reparse_reproduces_bytes(xs in proptest::collection::vec(-1e300f64..1e300, 0..8), n in any::<i64>(), s in "[a-z\"\\\\ ]{0,8}") {
            let v = json!({"xs": xs.iter().map(|&x| float_value(x)).collect::<Vec<_>>(), "n": n, "s": s});
            let text = to_canonical_string(&v);
            let back: Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(to_canonical_string(&back), text);
        }
    }
}
