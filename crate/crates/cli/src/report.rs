use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use vwseries::SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// What a command produced, independent of how it is shown.
pub struct Report {
    pub command: &'static str,
    pub json: Map<String, Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Lines printed under a table, e.g. totals or diffs.
    pub footer: Vec<String>,
    pub exit_code: u8,
}

impl Report {
    pub fn new(command: &'static str, header: &[&str]) -> Self {
        Report {
            command,
            json: Map::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn field(&mut self, key: &str, value: Value) -> &mut Self {
        self.json.insert(key.into(), value);
        self
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("schema".into(), json!(SCHEMA));
                doc.insert("command".into(), json!(self.command));
                doc.extend(self.json.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(doc))
                    .expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => self.table(),
            Format::Csv => {
                let mut s = String::new();
                for line in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
                    writeln!(s, "{}", cells.join(",")).unwrap();
                }
                s
            }
        }
    }

    fn table(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i < widths.len() {
                    widths[i] = widths[i].max(c.len());
                } else {
                    widths.push(c.len());
                }
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut s = String::new();
        writeln!(s, "{}", line(&self.header)).unwrap();
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        writeln!(s, "{}", rule.join("  ")).unwrap();
        for row in &self.rows {
            writeln!(s, "{}", line(row)).unwrap();
        }
        for f in &self.footer {
            writeln!(s, "{f}").unwrap();
        }
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
