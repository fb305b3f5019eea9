//! Two-column numeric text, the on-disk form of PR curves and response tables.
//!
//! One pair per line, separated by whitespace or a comma. Blank lines and
//! anything after `#` are ignored.

use std::path::Path;

use crate::error::{Error, Result};

pub fn parse_pairs(text: &str, origin: &Path) -> Result<Vec<(f64, f64)>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let parse_err = |reason: String| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            reason,
        };
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected two columns, found {}",
                fields.len()
            )));
        }
        let mut values = [0.0; 2];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| parse_err(format!("`{field}`: {e}")))?;
            if !slot.is_finite() {
                return Err(parse_err(format!("`{field}` is not finite")));
            }
        }
        pairs.push((values[0], values[1]));
    }
    Ok(pairs)
}

pub fn load_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pairs(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_commas_spaces_and_comments() {
        let text = "# recall precision\n0.1, 0.9\n\n0.5 0.8  # mid\n1.0\t0.4\n";
        let pairs = parse_pairs(text, Path::new("t")).unwrap();
        assert_eq!(pairs, vec![(0.1, 0.9), (0.5, 0.8), (1.0, 0.4)]);
    }

    #[test]
    fn reports_line_of_bad_row() {
        let err = parse_pairs("0.1 0.2\n0.3\n", Path::new("curve.txt")).unwrap_err();
        assert_eq!(
            err.to_string(),
            "curve.txt:2: expected two columns, found 1"
        );
        let err = parse_pairs("0.1 abc\n", Path::new("c")).unwrap_err();
        assert!(err.to_string().starts_with("c:1: `abc`"));
    }
}
