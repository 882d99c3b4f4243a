//! CSV/JSON emission. CSV uses 17 significant digits so values parse back exactly.

use serde::Serialize;
use serde_json::Value as Json;

use crate::config::Format;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Table::to_csv`].
    pub fn from_csv(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
        let rows = lines
            .map(|l| l.split(',').map(|c| c.parse::<f64>().ok()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Self { header, rows })
    }
}

/// A file produced by an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

pub fn to_json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("reports serialize");
    v.push(b'\n');
    v
}

/// Summary plus optional table, as `<stem>.json` (and `<stem>.csv` for csv format).
pub fn emit_report(stem: &str, summary: Json, table: Option<&Table>, format: Format) -> Vec<Artifact> {
    match (format, table) {
        (Format::Csv, Some(t)) => vec![
            Artifact { name: format!("{stem}.csv"), bytes: t.to_csv().into_bytes() },
            Artifact { name: format!("{stem}.json"), bytes: to_json_bytes(&summary) },
        ],
        (_, table) => {
            let mut doc = serde_json::Map::new();
            doc.insert("summary".into(), summary);
            if let Some(t) = table {
                doc.insert("table".into(), serde_json::to_value(t).expect("table serializes"));
            }
            vec![Artifact { name: format!("{stem}.json"), bytes: to_json_bytes(&Json::Object(doc)) }]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_series_is_header_only() {
        assert_eq!(Table::new(&["t", "energy"]).to_csv(), "t,energy\n");
    }

    proptest! {
        #[test]
        fn csv_round_trip(rows in proptest::collection::vec(proptest::collection::vec(-1e300..1e300f64, 3), 0..8)) {
            let mut t = Table::new(&["a", "b", "c"]);
            rows.into_iter().for_each(|r| t.push(r));
            prop_assert_eq!(Table::from_csv(&t.to_csv()).unwrap(), t);
        }
    }
}
