//! CSV ingestion and export of segmented series.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::SegmentedSeries;

/// Reads `value_col` from a headed CSV file. Rows with equal consecutive
/// values in `segment_col` form one segment (labels may repeat further
/// down); without a segment column the whole file is one segment. Error
/// rows are 1-based data rows, not counting the header.
pub fn ingest_csv<T: Real>(path: &Path, value_col: &str, segment_col: Option<&str>) -> Result<SegmentedSeries<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let value_idx = column(&headers, value_col)?;
    let segment_idx = segment_col.map(|c| column(&headers, c)).transpose()?;

    let mut segments: Vec<Vec<T>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse { row, message: e.to_string() })?;
        let value = parse_value(record.get(value_idx), value_col, row)?;
        let label = match segment_idx {
            Some(s) => record.get(s).unwrap_or("").to_string(),
            None => String::new(),
        };
        if labels.last() != Some(&label) || segments.is_empty() {
            segments.push(Vec::new());
            labels.push(label);
        }
        segments.last_mut().unwrap().push(value);
    }
    if segments.is_empty() {
        return Err(Error::Parse { row: 0, message: format!("{} has no data rows", path.display()) });
    }
    let series = SegmentedSeries::new(segments)?;
    if segment_col.is_some() {
        series.with_labels(labels)
    } else {
        Ok(series)
    }
}

/// Reads `value_col` and keeps only December through March rows, grouping
/// consecutive rows of the same winter into one segment labeled
/// `"{Y}/{Y+1}"` (December of `Y` through March of `Y+1`). Dates use the
/// `YYYY-MM-DD` format.
pub fn ingest_csv_djfm<T: Real>(path: &Path, value_col: &str, date_col: &str) -> Result<SegmentedSeries<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let value_idx = column(&headers, value_col)?;
    let date_idx = column(&headers, date_col)?;

    let mut segments: Vec<Vec<T>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut current: Option<i32> = None;
    let mut n_rows = 0usize;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        n_rows = row;
        let record = record.map_err(|e| Error::Parse { row, message: e.to_string() })?;
        let raw = record.get(date_idx).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|e| Error::Parse {
            row,
            message: format!("column {date_col:?}: bad date {raw:?}: {e}"),
        })?;
        let Some(season) = djfm_season(date) else {
            current = None;
            continue;
        };
        let value = parse_value(record.get(value_idx), value_col, row)?;
        if current != Some(season) {
            segments.push(Vec::new());
            labels.push(format!("{season}/{}", season + 1));
            current = Some(season);
        }
        segments.last_mut().unwrap().push(value);
    }
    if segments.is_empty() {
        return Err(if n_rows == 0 {
            Error::Parse { row: 0, message: format!("{} has no data rows", path.display()) }
        } else {
            Error::no_data("no December-March rows in the date column")
        });
    }
    SegmentedSeries::new(segments)?.with_labels(labels)
}

/// Winter season of a date: December of `Y` and January to March of `Y+1`
/// belong to season `Y`; other months to none.
pub fn djfm_season(date: NaiveDate) -> Option<i32> {
    match date.month() {
        12 => Some(date.year()),
        1..=3 => Some(date.year() - 1),
        _ => None,
    }
}

/// Number of days in season `Y`: 121, or 122 when `Y+1` is a leap year.
pub fn djfm_season_length(season: i32) -> u32 {
    let start = NaiveDate::from_ymd_opt(season, 12, 1).expect("valid date");
    let end = NaiveDate::from_ymd_opt(season + 1, 4, 1).expect("valid date");
    (end - start).num_days() as u32
}

/// Writes `value,segment` rows with 17 significant digits, so reading the
/// file back reproduces every value exactly. The segment column holds the
/// series labels when present and the segment index otherwise.
pub fn write_series_csv<T: Real>(series: &SegmentedSeries<T>, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(File::create(path)?);
    write_series(series, &mut out)?;
    out.flush()?;
    Ok(())
}

/// As [`write_series_csv`] to any writer.
pub fn write_series<T: Real, W: Write + ?Sized>(series: &SegmentedSeries<T>, out: &mut W) -> Result<()> {
    writeln!(out, "value,segment")?;
    for (s, seg) in series.segments().iter().enumerate() {
        let label = match series.labels() {
            Some(l) => l[s].clone(),
            None => s.to_string(),
        };
        for v in seg {
            writeln!(out, "{:.16e},{label}", v)?;
        }
    }
    Ok(())
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers.iter().position(|h| h.trim() == name).ok_or_else(|| Error::Parse {
        row: 0,
        message: format!(
            "missing column {name:?}; header has {}",
            headers.iter().collect::<Vec<_>>().join(",")
        ),
    })
}

fn parse_value<T: Real>(field: Option<&str>, col: &str, row: usize) -> Result<T> {
    let raw = field.unwrap_or("").trim();
    match raw.parse::<T>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse { row, message: format!("column {col:?}: cannot parse {raw:?} as a finite number") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_segment() {
        let f = file("x\n1\n2\n3\n4\n5\n6\n");
        let s: SegmentedSeries<f64> = ingest_csv(f.path(), "x", None).unwrap();
        assert_eq!(s.n_segments(), 1);
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn consecutive_grouping() {
        let f = file("x,g\n1,A\n2,A\n3,B\n4,B\n5,A\n");
        let s: SegmentedSeries<f64> = ingest_csv(f.path(), "x", Some("g")).unwrap();
        let lens: Vec<usize> = s.segments().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![2, 2, 1]);
        assert_eq!(s.labels().unwrap(), ["A", "B", "A"]);
    }

    #[test]
    fn typed_errors() {
        let f = file("x\n1\n2\nabc\n");
        match ingest_csv::<f64>(f.path(), "x", None) {
            Err(Error::Parse { row: 3, message }) => assert!(message.contains("abc")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ingest_csv::<f64>(f.path(), "y", None), Err(Error::Parse { row: 0, .. })));
        let empty = file("x\n");
        assert!(matches!(ingest_csv::<f64>(empty.path(), "x", None), Err(Error::Parse { .. })));
        let nan = file("x\nNaN\n");
        assert!(matches!(ingest_csv::<f64>(nan.path(), "x", None), Err(Error::Parse { row: 1, .. })));
        assert!(matches!(
            ingest_csv::<f64>(Path::new("/nonexistent/file.csv"), "x", None),
            Err(Error::Csv(_))
        ));
    }

    #[test]
    fn round_trip_is_exact() {
        let segments = vec![vec![0.1f64, 1.0 / 3.0, 12345.678901234567], vec![f64::MIN_POSITIVE, 7e300]];
        let s = SegmentedSeries::new(segments).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_series_csv(&s, f.path()).unwrap();
        let back: SegmentedSeries<f64> = ingest_csv(f.path(), "value", Some("segment")).unwrap();
        assert_eq!(back.segments(), s.segments());

        let s32 = SegmentedSeries::single(vec![0.1f32, 3.3, 1e-20]).unwrap();
        write_series_csv(&s32, f.path()).unwrap();
        let back32: SegmentedSeries<f32> = ingest_csv(f.path(), "value", None).unwrap();
        assert_eq!(back32.segments(), s32.segments());
    }

    #[test]
    fn djfm_grouping_and_leap_years() {
        assert_eq!(djfm_season_length(1999), 122);
        assert_eq!(djfm_season_length(2000), 121);
        assert_eq!(djfm_season_length(1899), 121);
        let mut csv = String::from("date,q\n");
        let mut d = NaiveDate::from_ymd_opt(1999, 11, 1).unwrap();
        let end = NaiveDate::from_ymd_opt(2001, 4, 30).unwrap();
        while d <= end {
            csv.push_str(&format!("{d},1.0\n"));
            d = d.succ_opt().unwrap();
        }
        let f = file(&csv);
        let s: SegmentedSeries<f64> = ingest_csv_djfm(f.path(), "q", "date").unwrap();
        let lens: Vec<usize> = s.segments().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![122, 121]);
        assert_eq!(s.labels().unwrap(), ["1999/2000", "2000/2001"]);
    }
}
