//! CSV emission and re-reading of sweep records.

use std::path::Path;

use super::sweep::{Output, RunRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "axis",
    "map_joint",
    "map_cloud_only",
    "map_edge_only",
    "map_oracle",
    "beta",
    "b_up_hz",
    "b_down_hz",
    "m_update_bps",
    "rate_feature_bps",
    "rate_data_bps",
    "avg_bits_per_pixel",
];

/// Column order after `axis`.
const COLUMNS: [Output; 11] = Output::ALL;

/// Fixed-decimal text with six significant digits: `0.857670`, `10000000`,
/// `0.000123457`.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    // Rounding through scientific notation settles the exponent first, so
    // 9.999996 becomes 10.0000 rather than 10.00000.
    let sci = format!("{v:.5e}");
    let exp: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    let rounded: f64 = sci.parse().expect("round trip");
    let decimals = (5 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

fn row(record: &RunRecord) -> Vec<String> {
    let mut fields = vec![format_sig6(record.axis_value)];
    fields.extend(
        COLUMNS
            .iter()
            .map(|o| o.value(record).map(format_sig6).unwrap_or_default()),
    );
    fields
}

/// Writes the header and one row per record. Missing values, including the
/// oracle when it was not run, are left empty.
pub fn write_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::invalid("no records to write"));
    }
    let mut w = ::csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(row(r))?;
    }
    w.flush()
        .map_err(|e| Error::invalid(format!("writing csv: {e}")))?;
    Ok(())
}

pub fn emit_csv(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(records, std::io::BufWriter::new(file))
}

/// One parsed CSV row: the axis value and the eleven output columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub axis: f64,
    pub values: [Option<f64>; 11],
}

impl CsvRow {
    pub fn get(&self, output: Output) -> Option<f64> {
        let i = COLUMNS
            .iter()
            .position(|o| *o == output)
            .expect("every output has a column");
        self.values[i]
    }
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let mut r = ::csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            reason: format!("unexpected header {}", header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                reason: format!("`{s}`: {e}"),
            })
        };
        let axis = num(&rec[0])?.ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line,
            reason: "empty axis value".into(),
        })?;
        let mut values = [None; 11];
        for (slot, field) in values.iter_mut().zip(rec.iter().skip(1)) {
            *slot = num(field)?;
        }
        rows.push(CsvRow { axis, values });
    }
    Ok(rows)
}
