use serde_json::{Map, Value};

use qspeed::json::{round_sig, MatrixJson};
use qspeed::matcore::ComplexMatrix;

pub const DIGITS: usize = 12;

/// Number rounded to [`DIGITS`] significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(round_sig(x, DIGITS)).map_or(Value::Null, Value::Number)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn matrix(m: &ComplexMatrix<f64>) -> Value {
    let j = MatrixJson::from_matrix(m);
    let entries = j
        .entries
        .iter()
        .map(|r| Value::Array(r.iter().map(|[re, im]| Value::Array(vec![num(*re), num(*im)])).collect()))
        .collect();
    let mut o = Map::new();
    o.insert("dim".into(), Value::from(j.dim));
    o.insert("entries".into(), Value::Array(entries));
    Value::Object(o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serialises") + "\n",
        Format::Csv => {
            let mut cells = Vec::new();
            flatten("", report, &mut cells);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(cells.iter().map(|(k, _)| k)).expect("in-memory write");
            w.write_record(cells.iter().map(|(_, v)| v)).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_and_specials() {
        assert_eq!(num(0.1 + 0.2), json!(0.3));
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(1.0), json!(1.0));
    }

    #[test]
    fn csv_flattens_nested_objects() {
        let r = json!({"a": 1.5, "b": {"c": "x"}, "d": [1, 2]});
        assert_eq!(render(&r, Format::Csv), "a,b.c,d\n1.5,x,\"[1,2]\"\n");
    }
}
