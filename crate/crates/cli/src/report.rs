use std::fmt::Write;

use qlift_core::{operators::Matrix, C};

/// Ordered `key = value` lines; values are TOML literals.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:e}")
    }
}

fn pair(z: &C<f64>) -> String {
    format!("[{}, {}]", float(z.re), float(z.im))
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn raw(&mut self, key: impl Into<String>, value: String) -> &mut Self {
        self.lines.push((key.into(), value));
        self
    }

    pub fn str(&mut self, key: impl Into<String>, value: impl AsRef<str>) -> &mut Self {
        self.raw(key, format!("{:?}", value.as_ref()))
    }

    pub fn int(&mut self, key: impl Into<String>, value: impl Into<i128>) -> &mut Self {
        self.raw(key, value.into().to_string())
    }

    pub fn bool(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.raw(key, value.to_string())
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.raw(key, float(value))
    }

    pub fn floats(&mut self, key: impl Into<String>, values: &[f64]) -> &mut Self {
        let items: Vec<String> = values.iter().map(|x| float(*x)).collect();
        self.raw(key, format!("[{}]", items.join(", ")))
    }

    /// Row-major `[re, im]` pairs on one line.
    pub fn matrix(&mut self, key: impl Into<String>, m: &Matrix<f64>) -> &mut Self {
        let items: Vec<String> = m.as_slice().iter().map(pair).collect();
        self.raw(key, format!("[{}]", items.join(", ")))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}
