//! Analysis reports: a stable JSON shape plus a plain two-column table.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub op: String,
    pub inputs: Value,
    pub worst_margin: Option<f64>,
    pub violations: Vec<Value>,
    pub seed: Option<u64>,
    pub grid_resolution: Option<usize>,
    pub result: Value,
}

impl Report {
    pub fn new(op: &str, inputs: Value, result: Value) -> Self {
        Report {
            op: op.to_string(),
            inputs,
            worst_margin: None,
            violations: Vec::new(),
            seed: None,
            grid_resolution: None,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn table(&self) -> String {
        let mut rows = vec![("op".to_string(), self.op.clone())];
        flatten("input", &self.inputs, &mut rows);
        flatten("", &self.result, &mut rows);
        if let Some(m) = self.worst_margin {
            rows.push(("worst_margin".into(), format!("{m:e}")));
        }
        rows.push(("violations".into(), self.violations.len().to_string()));
        if let Some(s) = self.seed {
            rows.push(("seed".into(), s.to_string()));
        }
        if let Some(g) = self.grid_resolution {
            rows.push(("grid_resolution".into(), g.to_string()));
        }
        render(&rows)
    }
}

pub fn render(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, rows);
            }
        }
        Value::Array(items) if items.len() > 8 => rows.push((prefix.to_string(), format!("[{} items]", items.len()))),
        Value::Null => rows.push((prefix.to_string(), "-".into())),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_flattens_nested_values() {
        let mut r = Report::new("tau", json!({"rho": 0.5}), json!({"tau": 0.06, "branch": "left"}));
        r.seed = Some(3);
        let t = r.table();
        assert!(t.contains("input.rho"));
        assert!(t.contains("branch"));
        assert!(t.contains("seed"));
        assert!(t.lines().all(|l| l.split_whitespace().count() >= 2));
    }
}
