//! Point-set ingestion and serialization helpers.
//!
//! CSV input holds one point per row with an optional header row; JSON
//! input is an array of arrays. Coordinates are read as text and parsed
//! directly into the target scalar, so decimal literals stay exact in
//! rational mode.

use std::fs;
use std::path::Path;

use serde::Serializer;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl PointFormat {
    /// Guesses from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => PointFormat::Json,
            _ => PointFormat::Csv,
        }
    }
}

pub fn parse_points<S: Scalar>(path: &Path, format: PointFormat) -> Result<PointSet<S>> {
    let text = fs::read_to_string(path)?;
    parse_points_str(&text, format)
}

pub fn parse_points_str<S: Scalar>(text: &str, format: PointFormat) -> Result<PointSet<S>> {
    match format {
        PointFormat::Csv => parse_csv(text),
        PointFormat::Json => parse_json(text),
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_csv<S: Scalar>(text: &str) -> Result<PointSet<S>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut dim = None;
    for (index, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(index + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<Option<S>> = record.iter().map(S::parse_literal).collect();
        if rows.is_empty() && dim.is_none() && parsed.iter().all(Option::is_none) {
            // Header row: every field non-numeric.
            dim = Some(record.len());
            continue;
        }
        if let Some(col) = parsed.iter().position(Option::is_none) {
            return Err(parse_error(
                line,
                col + 1,
                format!("non-numeric field {:?}", &record[col]),
            ));
        }
        let expected = *dim.get_or_insert(record.len());
        if record.len() != expected {
            return Err(parse_error(
                line,
                record.len().min(expected) + 1,
                format!(
                    "row {line} has {} fields, expected {expected}",
                    record.len()
                ),
            ));
        }
        rows.push(parsed.into_iter().map(Option::unwrap).collect());
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "no points in input"));
    }
    PointSet::from_rows(rows)
}

fn parse_json<S: Scalar>(text: &str) -> Result<PointSet<S>> {
    let raw: Vec<Vec<Box<RawValue>>> = serde_json::from_str(text).map_err(|e| {
        parse_error(
            e.line(),
            e.column(),
            format!("expected an array of arrays: {e}"),
        )
    })?;
    if raw.is_empty() {
        return Err(parse_error(1, 1, "no points in input"));
    }
    let dim = raw[0].len();
    let mut rows = Vec::with_capacity(raw.len());
    for (r, row) in raw.iter().enumerate() {
        if row.len() != dim {
            return Err(parse_error(
                r + 1,
                row.len().min(dim) + 1,
                format!("point {r} has {} coordinates, expected {dim}", row.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(dim);
        for (c, value) in row.iter().enumerate() {
            let text = value.get().trim();
            let text = text.trim_matches('"');
            let v = S::parse_literal(text)
                .ok_or_else(|| parse_error(r + 1, c + 1, format!("non-numeric value {text}")))?;
            parsed.push(v);
        }
        rows.push(parsed);
    }
    PointSet::from_rows(rows)
}

/// CSV rendering that [`parse_points_str`] reads back to identical values.
pub fn points_to_csv<S: Scalar>(points: &PointSet<S>) -> String {
    let mut out = String::new();
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(Scalar::encode).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub(crate) fn ser_rational<Ser: Serializer>(
    value: &Rational,
    serializer: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    serializer.serialize_str(&value.encode())
}

pub(crate) fn ser_rational_vec<Ser: Serializer>(
    values: &[Rational],
    serializer: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    serializer.collect_seq(values.iter().map(Scalar::encode))
}

/// JSON value for a scalar: a `"num/den"` string in exact mode, a number
/// otherwise.
pub fn scalar_json<S: Scalar>(value: &S) -> serde_json::Value {
    if S::EXACT {
        serde_json::Value::String(value.encode())
    } else {
        serde_json::Number::from_f64(value.to_f64_lossy())
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, rational};

    #[test]
    fn csv_line_points() {
        let pts: PointSet<Rational> =
            parse_points_str("0\n5\n6\n9\n13\n", PointFormat::Csv).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts.dim(), 1);
        assert_eq!(pts.point(4), &[rational(13)]);
    }

    #[test]
    fn csv_header_and_exact_decimals() {
        let pts: PointSet<Rational> =
            parse_points_str("x,y\n0.1,2\n-3.5,1/3\n", PointFormat::Csv).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.point(0), &[ratio(1, 10), rational(2)]);
        assert_eq!(pts.point(1), &[ratio(-7, 2), ratio(1, 3)]);
    }

    #[test]
    fn csv_errors_carry_positions() {
        let err = parse_points_str::<f64>("1,2\n3\n", PointFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_points_str::<f64>("1,2\n3,x\n", PointFormat::Csv).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 2,
                    column: 2,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_points_str::<f64>("", PointFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_points_str::<f64>("a,b\n", PointFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn json_points() {
        let pts: PointSet<f64> = parse_points_str("[[0.5,0.5]]", PointFormat::Json).unwrap();
        assert_eq!((pts.len(), pts.dim()), (1, 2));
        let pts: PointSet<Rational> =
            parse_points_str("[[0.1, \"2/3\"], [1e-1, 4]]", PointFormat::Json).unwrap();
        assert_eq!(pts.point(0), &[ratio(1, 10), ratio(2, 3)]);
        assert_eq!(pts.point(1), &[ratio(1, 10), rational(4)]);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            parse_points_str::<f64>("[[1,2],[3]]", PointFormat::Json),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_points_str::<f64>("[[1,true]]", PointFormat::Json),
            Err(Error::Parse {
                line: 1,
                column: 2,
                ..
            })
        ));
        assert!(parse_points_str::<f64>("[]", PointFormat::Json).is_err());
        assert!(parse_points_str::<f64>("{", PointFormat::Json).is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(
            PointFormat::from_path(Path::new("a.JSON")),
            PointFormat::Json
        );
        assert_eq!(PointFormat::from_path(Path::new("a.csv")), PointFormat::Csv);
        assert_eq!(PointFormat::from_path(Path::new("a")), PointFormat::Csv);
    }
}
