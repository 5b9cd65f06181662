use edslab::arith::fmt_rational;
use edslab::curve::{Curve, Point};
use edslab::poly::Poly;
use edslab::real::Real;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

/// Significant decimal digits carried by `bits` of binary precision.
pub fn digits(bits: usize) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn real(r: &Real) -> Value {
    json!({ "value": r.to_decimal(digits(r.precision())), "precision_bits": r.precision() })
}

pub fn big(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn point(p: &Point) -> Value {
    match p {
        Point::Infinity => Value::String("inf".into()),
        Point::Affine { x, y } => json!({ "x": fmt_rational(x), "y": fmt_rational(y) }),
    }
}

pub fn curve(e: &Curve) -> Value {
    Value::Array(e.a().iter().map(big).collect())
}

pub fn poly(p: &Poly) -> Value {
    Value::String(p.to_text())
}

/// Flattened `path = value` lines for `--format text`.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(m) if is_real(m) => {
            out.push_str(&format!("{path} = {}\n", m["value"].as_str().unwrap_or_default()));
        }
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, p, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push_str(&format!("{path} = [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path} = {}\n", scalar(v))),
    }
}

fn is_real(m: &Map<String, Value>) -> bool {
    m.len() == 2 && m.contains_key("value") && m.contains_key("precision_bits")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}
