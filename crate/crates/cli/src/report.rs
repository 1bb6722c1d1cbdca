use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// One cell of a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits, '.' separator.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: String,
    pub config: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub outputs: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(experiment: &str, config: &impl Serialize) -> Self {
        let mut config = serde_json::to_value(config).expect("config serializes");
        if let Value::Object(m) = &mut config {
            m.remove("out");
        }
        Report {
            experiment: experiment.to_string(),
            config,
            tolerances: BTreeMap::new(),
            outputs: Map::new(),
            assertions: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    pub fn output(&mut self, name: &str, value: impl Serialize) {
        self.outputs.insert(name.to_string(), serde_json::to_value(value).expect("output serializes"));
    }

    /// Records `value <= limit`.
    pub fn check_le(&mut self, name: &str, value: f64, limit: f64) {
        self.assertions.push(Assertion { name: name.to_string(), value, limit, passed: value <= limit });
    }

    /// Records `value < limit`.
    pub fn check_lt(&mut self, name: &str, value: f64, limit: f64) {
        self.assertions.push(Assertion { name: name.to_string(), value, limit, passed: value < limit });
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.header = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// SHA-256 of the canonical (sorted-key) config, excluding the output path.
    pub fn config_hash(&self) -> String {
        let text = serde_json::to_string(&json!({ "experiment": self.experiment, "config": self.config })).unwrap();
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn summary(&self) -> Value {
        json!({
            "experiment": self.experiment,
            "config": self.config,
            "config_hash": self.config_hash(),
            "tolerances": self.tolerances,
            "outputs": self.outputs,
            "assertions": self.assertions,
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn summary_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary()).unwrap();
        s.push('\n');
        s
    }

    pub fn csv_text(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.json"), self.summary_text())?;
        let csv = self.csv_text().map_err(std::io::Error::other)?;
        std::fs::write(dir.join("table.csv"), csv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn summary_keys_are_sorted_and_hash_ignores_out() {
        let mut r = Report::new("x", &json!({"b": 1, "a": 2, "out": "/tmp/q"}));
        r.check_le("gap", 0.5, 1.0);
        let text = r.summary_text();
        let keys: Vec<usize> = ["assertions", "config", "config_hash", "experiment", "outputs", "status", "tolerances"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let other = Report::new("x", &json!({"a": 2, "b": 1}));
        assert_eq!(r.config_hash(), other.config_hash());
        assert!(r.passed());
    }

    #[test]
    fn csv_has_header_row() {
        let mut r = Report::new("x", &json!({}));
        r.columns(&["i", "v"]);
        r.row(vec![3usize.into(), 0.5.into()]);
        assert_eq!(r.csv_text().unwrap(), "i,v\n3,5.0000000000000000e-1\n");
    }
}
