use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// The single JSON object printed by every command.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub parameters: BTreeMap<&'static str, Value>,
    pub payload: Value,
}

impl OutputRecord {
    pub fn new(command: &'static str, payload: impl Serialize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            parameters: BTreeMap::new(),
            payload: serde_json::to_value(payload).expect("payload serializes"),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key,
            serde_json::to_value(value).expect("parameter serializes"),
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes") + "\n"
    }
}

/// Complex number as `{"re": …, "im": …}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Comma-separated rows with a header and LF line endings.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut csv = Self { out: String::new() };
        csv.row(header);
        csv
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(c.as_ref());
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Shortest decimal that round-trips.
pub fn num(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x:?}").expect("write to string");
    s
}
