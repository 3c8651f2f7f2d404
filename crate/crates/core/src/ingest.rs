//! Panel CSV reading and writing: `year,value_added,labor,capital`.
//!
//! Rows must be in ascending consecutive year order. An empty labor field
//! marks a missing year; value added and capital must always be present.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{AnnualSeries, PanelDataset};

pub const HEADER: [&str; 4] = ["year", "value_added", "labor", "capital"];

pub fn read_panel_csv<R: Read>(reader: R) -> Result<PanelDataset<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Input(format!(
            "expected header '{}', found '{}'",
            HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut start: Option<i32> = None;
    let mut va = Vec::new();
    let mut labor = Vec::new();
    let mut capital = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let year: i32 = field(0)
            .parse()
            .map_err(|_| Error::Input(format!("line {line}: bad year '{}'", field(0))))?;
        match start {
            None => start = Some(year),
            Some(s) if year != s + i as i32 => {
                return Err(Error::Input(format!(
                    "line {line}: year {year} breaks the consecutive sequence starting at {s}"
                )))
            }
            _ => {}
        }
        let number = |j: usize, name: &str| -> Result<f64> {
            let raw = field(j);
            if raw.is_empty() {
                return Err(Error::Validation(format!(
                    "line {line}: {name} is missing; only labor may have gaps"
                )));
            }
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::Input(format!("line {line}: bad {name} '{raw}'")))?;
            if !v.is_finite() {
                return Err(Error::Input(format!("line {line}: {name} is not finite")));
            }
            Ok(v)
        };
        va.push(number(1, "value_added")?);
        capital.push(number(3, "capital")?);
        labor.push(if field(2).is_empty() {
            None
        } else {
            Some(number(2, "labor")?)
        });
    }
    let start = start.ok_or_else(|| Error::Input("no data rows".into()))?;
    PanelDataset::new(
        AnnualSeries::new(start, va)?,
        AnnualSeries::with_gaps(start, labor)?,
        AnnualSeries::new(start, capital)?,
    )
}

pub fn read_panel_path(path: &Path) -> Result<PanelDataset<f64>> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_panel_csv(file)
}

pub fn write_panel_csv<W: Write>(panel: &PanelDataset<f64>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    let fmt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for (i, year) in panel.value_added.years().enumerate() {
        w.write_record([
            year.to_string(),
            fmt(panel.value_added.raw()[i]),
            fmt(panel.labor.raw()[i]),
            fmt(panel.capital.raw()[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}
