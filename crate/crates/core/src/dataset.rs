//! Bivariate datasets: CSV ingestion and the embedded 1986 NFL scoring-time table.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bemwe::BivariatePair;
use crate::error::{require_positive, Error, Result};

/// Game time to the first field goal (`x1`) and to the first touchdown-type
/// score (`x2`), as tabulated (minute.second values read as plain decimals).
/// Equal entries are converted touchdowns. Rows are listed left to right,
/// top to bottom, in the order the table prints them.
#[rustfmt::skip]
pub const NFL_TABLE: [(f64, f64); 42] = [
    (2.05, 3.98), (8.53, 14.57), (2.90, 2.90), (1.38, 1.38),
    (9.05, 9.05), (31.13, 49.88), (7.02, 7.02), (10.53, 10.53),
    (0.85, 0.85), (14.58, 20.57), (6.42, 6.42), (12.13, 12.13),
    (3.43, 3.43), (5.78, 25.98), (8.98, 8.98), (14.58, 14.58),
    (7.78, 7.78), (13.80, 49.75), (10.15, 10.15), (11.82, 11.82),
    (10.57, 14.28), (7.25, 7.25), (8.87, 8.87), (5.52, 11.27),
    (7.05, 7.05), (4.25, 4.25), (10.40, 10.25), (19.65, 10.70),
    (2.58, 2.58), (1.65, 1.65), (2.98, 2.98), (17.83, 17.83),
    (7.23, 9.68), (6.42, 15.08), (3.88, 6.43), (10.85, 38.07),
    (6.85, 34.58), (4.22, 9.48), (0.75, 0.75),
    (32.45, 42.35), (15.53, 15.53), (11.63, 17.37),
];

pub const NFL_SOURCE: &str = "embedded:nfl-1986";

/// Scale conventionally applied to the NFL table.
pub const NFL_DEFAULT_SCALE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub pairs: Vec<BivariatePair>,
    /// Every raw value was divided by this.
    pub scale: f64,
    pub source: String,
}

impl Dataset {
    pub fn from_raw(raw: &[(f64, f64)], scale: f64, source: impl Into<String>) -> Result<Self> {
        require_positive("scale", scale)?;
        let pairs = raw
            .iter()
            .map(|&(a, b)| BivariatePair::new(a / scale, b / scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            pairs,
            scale,
            source: source.into(),
        })
    }

    pub fn nfl(scale: f64) -> Result<Self> {
        Self::from_raw(&NFL_TABLE, scale, NFL_SOURCE)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Parses two-column text: comma or whitespace delimited, optional header
/// (a first data line whose cells are not all numeric). Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_pairs(text: &str, source: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut seen_first = false;
    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        let trimmed = line.trim().trim_start_matches('\u{feff}');
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed);
        let loc = || format!("{source}:{lineno}");
        if fields.len() != 2 {
            return Err(Error::input(
                loc(),
                format!("expected 2 columns, found {}", fields.len()),
            ));
        }
        let parsed: Vec<_> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let first = !seen_first;
        seen_first = true;
        if first && parsed.iter().any(|p| p.is_err()) {
            continue;
        }
        let mut vals = [0.0; 2];
        for (k, (p, raw)) in parsed.into_iter().zip(&fields).enumerate() {
            let v = p.map_err(|_| {
                Error::input(loc(), format!("column {} is not a number: {raw:?}", k + 1))
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::input(
                    loc(),
                    format!("column {} must be finite and >= 0, got {v}", k + 1),
                ));
            }
            vals[k] = v;
        }
        rows.push((vals[0], vals[1]));
    }
    if rows.is_empty() {
        return Err(Error::input(source, "no data rows"));
    }
    Ok(rows)
}

/// Loads a two-column CSV file, dividing every value by `scale`.
pub fn load_csv(path: impl AsRef<Path>, scale: f64) -> Result<Dataset> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::input(&source, e.to_string()))?;
    let raw = parse_pairs(&text, &source)?;
    Dataset::from_raw(&raw, scale, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bemwe::Region;

    #[test]
    fn nfl_table_shape() {
        let d = Dataset::nfl(NFL_DEFAULT_SCALE).unwrap();
        assert_eq!(d.len(), 42);
        assert!((d.pairs[0].x1() - 0.0205).abs() < 1e-15);
        assert!((d.pairs[0].x2() - 0.0398).abs() < 1e-15);
        assert_eq!(d.source, NFL_SOURCE);
    }

    #[test]
    fn header_and_delimiters() {
        let rows = parse_pairs("x1,x2\n1.5,2\n3 , 4\n", "t").unwrap();
        assert_eq!(rows, vec![(1.5, 2.0), (3.0, 4.0)]);
        let rows = parse_pairs("# comment\n1 2\n\n3\t4\n", "t").unwrap();
        assert_eq!(rows, vec![(1.0, 2.0), (3.0, 4.0)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_pairs("x1,x2\n1,2\n3,abc\n", "f.csv") {
            Err(Error::Input { location, .. }) => assert_eq!(location, "f.csv:3"),
            other => panic!("{other:?}"),
        }
        match parse_pairs("1,2,3\n", "f.csv") {
            Err(Error::Input { location, message }) => {
                assert_eq!(location, "f.csv:1");
                assert!(message.contains("3"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_pairs("1,-2\n", "f").is_err());
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse_pairs("", "e"), Err(Error::Input { .. })));
        assert!(matches!(
            parse_pairs("x1,x2\n", "e"),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn load_from_file() {
        let dir = std::env::temp_dir().join(format!("bemwe-ds-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("one.csv");
        fs::write(&path, "1,1\n").unwrap();
        let d = load_csv(&path, 1.0).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.pairs[0].region(0.0), Region::Diagonal);
        fs::write(&path, "").unwrap();
        assert!(load_csv(&path, 1.0).is_err());
        assert!(load_csv(dir.join("missing.csv"), 1.0).is_err());
        assert!(load_csv(&path, 0.0).is_err());
        fs::remove_dir_all(&dir).ok();
    }
}
