//! Shared reader for the line-oriented data files used by this crate:
//! `# key = value` header lines, two-number data lines (comma or whitespace
//! separated), blank lines and other `#` comments ignored.

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Table {
    /// Header pairs in file order. Keys are trimmed, values verbatim-trimmed.
    pub headers: Vec<(String, String)>,
    /// (first column, second column, 1-based line number).
    pub rows: Vec<(f64, f64, usize)>,
}

impl Table {
    pub fn header(&self, key: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn header_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.header(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Parse(format!("header {key}: not a number: {v:?}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Table> {
    let mut headers = Vec::new();
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // A comment is a header only when it splits as `key = value`.
            if let Some((k, v)) = rest.split_once('=') {
                let key = k.trim();
                if !key.is_empty() && !key.contains(char::is_whitespace) {
                    headers.push((key.to_string(), v.trim().to_string()));
                }
            }
            continue;
        }
        let mut fields = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty());
        let a = fields.next();
        let b = fields.next();
        let extra = fields.next();
        let (a, b) = match (a, b, extra) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::ParseAt {
                    line: lineno,
                    msg: format!("expected two numeric columns, got {line:?}"),
                })
            }
        };
        let parse_cell = |cell: &str| -> Result<f64> {
            cell.parse::<f64>().map_err(|_| Error::ParseAt {
                line: lineno,
                msg: format!("not a number: {cell:?}"),
            })
        };
        rows.push((parse_cell(a)?, parse_cell(b)?, lineno));
    }
    Ok(Table { headers, rows })
}

/// Writes headers and rows in the same format `parse` reads. Floats use the
/// shortest representation that round-trips, so parse(write(t)) is identity.
pub fn write(headers: &[(String, String)], rows: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (k, v) in headers {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    for (a, b) in rows {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headers_comments_and_rows() {
        let t = parse("# station_id = s1\n# a plain comment\n\n1.0, 2.0\n3 4\n").unwrap();
        assert_eq!(t.header("station_id"), Some("s1"));
        assert_eq!(t.rows, vec![(1.0, 2.0, 4), (3.0, 4.0, 5)]);
    }

    #[test]
    fn comment_with_spaced_key_is_not_a_header() {
        let t = parse("# fitted with min_points = 4\n1 2\n").unwrap();
        assert!(t.headers.is_empty());
    }

    #[test]
    fn bad_cell_reports_line_number() {
        let err = parse("1 2\nx 4\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
    }

    #[test]
    fn three_columns_rejected() {
        assert!(parse("1 2 3\n").is_err());
    }

    #[test]
    fn write_parse_round_trip() {
        let headers = vec![("nu".to_string(), "1.5e-5".to_string())];
        let rows = vec![(0.1234567890123, 9.87654321e-7), (2.0, 3.0)];
        let t = parse(&write(&headers, &rows)).unwrap();
        assert_eq!(t.header("nu"), Some("1.5e-5"));
        let got: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.0, r.1)).collect();
        assert_eq!(got, rows);
    }
}
