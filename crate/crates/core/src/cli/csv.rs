//! Minimal CSV emitter: `#` comment lines, a header, then numeric rows.

use std::fmt::Write as _;

use super::CliError;

/// A rectangular numeric table. `None` cells are written blank.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvSeries {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl CsvSeries {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), ..Self::default() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push(row.iter().copied().map(Some).collect());
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(format_float).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`CsvSeries::render`].
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut series = CsvSeries::default();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            if let Some(c) = line.strip_prefix('#') {
                series.comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            } else {
                series.header = line.split(',').map(str::to_string).collect();
                break;
            }
        }
        if series.header.is_empty() {
            return Err(CliError::Config("CSV has no header".into()));
        }
        for (i, line) in lines.enumerate() {
            let row: Vec<Option<f64>> = line
                .split(',')
                .map(|cell| match cell {
                    "" => Ok(None),
                    s => s.parse().map(Some),
                })
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Config(format!("CSV row {}: {e}", i + 1)))?;
            if row.len() != series.header.len() {
                return Err(CliError::Config(format!("CSV row {} has {} cells", i + 1, row.len())));
            }
            series.rows.push(row);
        }
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut s = CsvSeries::new(["t", "x", "y"]);
        s.comment("note");
        let tricky = [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, 1e-7 + 2.0 / 7.0];
        for (i, &v) in tricky.iter().enumerate() {
            s.push(vec![Some(i as f64), Some(v), if i % 2 == 0 { None } else { Some(-v) }]);
        }
        let text = s.render();
        assert!(text.starts_with("# note\nt,x,y\n"));
        assert!(!text.contains('\r'));
        assert_eq!(CsvSeries::parse(&text).unwrap(), s);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }
}
