//! Machine-readable report envelope: a versioned JSON object, or a CSV view
//! with one row per prime/index/class.

use serde_json::{json, Value};

/// Payload produced by a subcommand, before the envelope is applied.
#[derive(Debug, Clone)]
pub struct Report {
    pub inputs: Value,
    pub results: Value,
    pub bounds: Value,
    pub warnings: Vec<String>,
    pub csv: CsvTable,
}

impl Report {
    pub fn new(inputs: Value, results: Value) -> Report {
        Report {
            inputs,
            results,
            bounds: json!({}),
            warnings: Vec::new(),
            csv: CsvTable::default(),
        }
    }

    /// Full JSON envelope; `timing_ms` is omitted when not supplied so that
    /// repeated runs compare byte-identically.
    pub fn render_json(&self, subcommand: &str, timing_ms: Option<u64>) -> String {
        let mut envelope = json!({
            "schema": "recurprimes/1",
            "subcommand": subcommand,
            "inputs": self.inputs,
            "results": self.results,
            "bounds": self.bounds,
            "warnings": self.warnings,
        });
        if let Some(ms) = timing_ms {
            envelope["timing_ms"] = json!(ms);
        }
        let mut out = serde_json::to_string_pretty(&envelope).expect("serializable envelope");
        out.push('\n');
        out
    }

    pub fn render_csv(&self) -> String {
        self.csv.render()
    }
}

/// A header row plus data rows; rendering quotes fields that need it.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: Vec<S>) -> CsvTable {
        CsvTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&render_line(&self.header));
        for row in &self.rows {
            out.push_str(&render_line(row));
        }
        out
    }
}

fn render_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields.iter().map(|f| quote(f)).collect();
    format!("{}\n", quoted.join(","))
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Present an f64 with enough digits to round-trip, without scientific
/// notation surprises in reports.
pub fn real(v: f64) -> Value {
    json!(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_shape() {
        let rep = Report::new(json!({"x": 5}), json!({"count": 1}));
        let text = rep.render_json("artin", None);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], "recurprimes/1");
        assert_eq!(v["subcommand"], "artin");
        assert!(v.get("timing_ms").is_none());
        let timed = rep.render_json("artin", Some(7));
        let v: Value = serde_json::from_str(&timed).unwrap();
        assert_eq!(v["timing_ms"], 7);
    }

    #[test]
    fn csv_quoting() {
        let mut t = CsvTable::new(vec!["a", "b"]);
        t.push_row(vec!["1,2", "plain"]);
        t.push_row(vec!["say \"hi\"", "x"]);
        assert_eq!(t.render(), "a,b\n\"1,2\",plain\n\"say \"\"hi\"\"\",x\n");
    }
}
