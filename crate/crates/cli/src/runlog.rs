use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use toml::Value;

use crate::error::{CliError, CliResult};

/// One `[[run]]` table appended to the run log.
#[derive(Debug, Default)]
pub struct RunRecord {
    pub command: String,
    pub argv: Vec<String>,
    /// `(name, path, sha256)`.
    pub inputs: Vec<(String, PathBuf, String)>,
    pub params: Vec<(String, Value)>,
    pub outputs: Vec<PathBuf>,
    pub exit_code: u8,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let strs =
            |xs: &mut dyn Iterator<Item = String>| Value::Array(xs.map(Value::String).collect());
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(name, path, sha)| {
                let mut t = toml::map::Map::new();
                t.insert("name".into(), Value::String(name.clone()));
                t.insert("path".into(), Value::String(path.display().to_string()));
                t.insert("sha256".into(), Value::String(sha.clone()));
                Value::Table(t)
            })
            .collect();
        let mut params = toml::map::Map::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), v.clone());
        }
        let mut out = String::from("[[run]]\n");
        out += &format!("command = {}\n", Value::String(self.command.clone()));
        out += &format!("argv = {}\n", strs(&mut self.argv.iter().cloned()));
        out += &format!("inputs = {}\n", Value::Array(inputs));
        out += &format!("params = {}\n", Value::Table(params));
        out += &format!(
            "outputs = {}\n",
            strs(&mut self.outputs.iter().map(|p| p.display().to_string()))
        );
        out += &format!("exit_code = {}\n", self.exit_code);
        out += &format!("wall_time_s = {}\n\n", Value::Float(self.wall_time_s));
        out
    }

    pub fn append_to(&self, log: &Path) -> CliResult<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(log)
            .map_err(|e| CliError::io(log, e))?;
        f.write_all(self.render().as_bytes())
            .map_err(|e| CliError::io(log, e))
    }
}
