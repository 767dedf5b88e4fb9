//! Grid CSV: header plus one row per cell, coordinates at 10 significant
//! digits, flags as `0`/`1`.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Layer, RegionGrid};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "alpha,beta,positive,two_positive,cp,ccp,pos_not_cp,two_pos_not_cp,decomp_suff,decomp_and_2pos";

/// Upper bound on data rows accepted by [`parse_csv`].
const MAX_ROWS: usize = 4096 * 4096;

/// Rounds to 10 significant digits and prints the shortest representation
/// of the rounded value.
pub fn format_coordinate(v: f64) -> String {
    let rounded: f64 = format!("{v:.9e}").parse().expect("formatted float parses");
    // avoid "-0"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub alpha: f64,
    pub beta: f64,
    /// Flags in [`Layer::ALL`] order.
    pub flags: [bool; 8],
}

impl CsvRow {
    pub fn get(&self, layer: Layer) -> bool {
        let k = Layer::ALL
            .iter()
            .position(|&l| l == layer)
            .expect("layer listed");
        self.flags[k]
    }
}

pub fn write_csv<W: Write>(grid: &RegionGrid, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
    for (index, cell) in grid.cells.iter().enumerate() {
        let (alpha, beta) = grid.config.cell_center(index);
        let flags = Layer::ALL.map(|l| if l.get(cell) { "1" } else { "0" });
        let coords = [format_coordinate(alpha), format_coordinate(beta)];
        w.write_record(coords.iter().map(String::as_str).chain(flags))
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(grid: &RegionGrid, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    write_csv(grid, std::io::BufWriter::new(file))
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::parse(line, format!("{kind:?}")),
    }
}

fn parse_row(record: &csv::StringRecord, lineno: usize) -> Result<CsvRow> {
    if record.len() != 10 {
        return Err(Error::parse(
            lineno,
            format!("expected 10 fields, found {}", record.len()),
        ));
    }
    let coord = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(lineno, format!("invalid coordinate `{s}`")))
    };
    let mut flags = [false; 8];
    for (flag, s) in flags.iter_mut().zip(record.iter().skip(2)) {
        *flag = match s {
            "0" => false,
            "1" => true,
            _ => {
                return Err(Error::parse(
                    lineno,
                    format!("flag must be 0 or 1, got `{s}`"),
                ))
            }
        };
    }
    Ok(CsvRow {
        alpha: coord(&record[0])?,
        beta: coord(&record[1])?,
        flags,
    })
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(CSV_HEADER.split(',')) => {}
        Some(Err(e)) => return Err(csv_error(e)),
        _ => return Err(Error::parse(1, "missing or wrong header")),
    }
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        let lineno = record.position().map_or(0, |p| p.line() as usize);
        if rows.len() == MAX_ROWS {
            return Err(Error::parse(lineno, "too many rows"));
        }
        rows.push(parse_row(&record, lineno)?);
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    parse_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{scan, ScanConfig};

    #[test]
    fn coordinates() {
        assert_eq!(format_coordinate(-3.9603960396039604), "-3.96039604");
        assert_eq!(format_coordinate(0.1 + 0.2), "0.3");
        assert_eq!(format_coordinate(-1e-17), "-0.00000000000000001");
        assert_eq!(format_coordinate(-0.0), "0");
        assert_eq!(format_coordinate(12345.678912345), "12345.67891");
    }

    #[test]
    fn two_by_two_round_trip() {
        let g = scan(&ScanConfig {
            resolution: 2,
            ..ScanConfig::default()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().nth(4), Some("2,2,1,1,1,1,0,0,1,0"));
        let rows = parse_csv(&text).unwrap();
        for (row, cell) in rows.iter().zip(&g.cells) {
            for layer in Layer::ALL {
                assert_eq!(row.get(layer), layer.get(cell));
            }
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "alpha,beta\n",
            &format!("{CSV_HEADER}\n1,2,0,0,0,0,0,0,0"),
            &format!("{CSV_HEADER}\n1,2,0,0,0,0,0,0,0,2"),
            &format!("{CSV_HEADER}\nx,2,0,0,0,0,0,0,0,0"),
            &format!("{CSV_HEADER}\nNaN,2,0,0,0,0,0,0,0,0"),
        ] {
            assert!(parse_csv(bad).is_err(), "accepted {bad:?}");
        }
    }
}
