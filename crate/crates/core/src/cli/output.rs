//! Text output: every number carries 17 significant digits so values
//! round-trip exactly; non-finite numbers become JSON `null`.

use std::fmt::Write;

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON rendering of `x`.
pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        "null".to_string()
    }
}

/// CSV rendering of `x`; non-finite values leave the field empty.
pub fn csv_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        String::new()
    }
}

/// A JSON value built in field order.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(u64),
    Num(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Object(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn numbers(xs: &[f64]) -> Json {
        Json::Array(xs.iter().map(|&x| Json::Num(x)).collect())
    }

    /// Compact rendering followed by a newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => write!(out, "{n}").unwrap(),
            Json::Num(x) => out.push_str(&json_num(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).unwrap()),
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&serde_json::to_string(k).unwrap());
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}
