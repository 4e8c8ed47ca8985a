//! Line-oriented `key: value` reports with an optional listing, and their JSON twin.

use serde_json::{Map, Value};

use crate::config::{ReportFormat, RunConfig};

#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
    listing_name: Option<String>,
    listing: Vec<String>,
}

impl Report {
    /// Header shared by every report: tool version, command and the configuration in force.
    pub fn new(command: &str, config: &RunConfig, profile: &str) -> Report {
        let mut r = Report::default();
        r.field("tool", format!("autgeo {}", env!("CARGO_PKG_VERSION")));
        r.field("command", command);
        r.field("cap_profile", profile);
        r.field("caps.enumeration", config.caps.enumeration);
        r.field("caps.materialize", config.caps.materialize);
        r.field("caps.group_order", config.caps.group_order as u64);
        r.field("caps.aut_group_order", config.caps.aut_group_order as u64);
        r.field("workers", config.workers as u64);
        r.field("seed", config.seed);
        r
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn listing(&mut self, name: &str, lines: impl IntoIterator<Item = String>) -> &mut Self {
        self.listing_name = Some(name.to_string());
        self.listing.extend(lines);
        self
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.text(),
            ReportFormat::Json => self.json(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Null => "none".to_string(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(name) = &self.listing_name {
            out.push_str(&format!("\n[{name}]\n"));
            for line in &self.listing {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }

    fn json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        if let Some(name) = &self.listing_name {
            map.insert(name.clone(), Value::from(self.listing.clone()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report values serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_carry_the_same_fields() {
        let mut r = Report::new("solve", &RunConfig::default(), "default");
        r.field("cardinality", 15u64).field("pair", Value::Null);
        r.listing("points", vec!["() ()".to_string()]);
        let text = r.render(ReportFormat::Text);
        assert!(text.contains("cardinality: 15\npair: none\n\n[points]\n() ()\n"));
        let json: Value = serde_json::from_str(&r.render(ReportFormat::Json)).unwrap();
        assert_eq!(json["cardinality"], 15);
        assert_eq!(json["points"][0], "() ()");
    }
}
