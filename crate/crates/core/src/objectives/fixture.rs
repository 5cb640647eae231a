//! Reader for the plain-text key-value fixture format.
//!
//! ```text
//! file    := line*
//! line    := blank | comment | entry
//! comment := '#' any* NEWLINE
//! entry   := key ws* '=' ws* number (ws+ number)* ws* ('#' any*)? NEWLINE
//! key     := [a-z_][a-z0-9_]*
//! ```
//!
//! A key may repeat; each occurrence is kept as its own row of numbers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueFile {
    entries: BTreeMap<String, Vec<(usize, Vec<f64>)>>,
}

impl KeyValueFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, Vec<(usize, Vec<f64>)>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once('=').ok_or_else(|| Error::Fixture {
                line: line_no,
                message: "expected `key = values`".into(),
            })?;
            let key = key.trim();
            let valid_key = key
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_lowercase() || c == '_')
                && key
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !valid_key {
                return Err(Error::Fixture {
                    line: line_no,
                    message: format!("invalid key {key:?}"),
                });
            }
            let values = rest
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Fixture {
                            line: line_no,
                            message: format!("{key}: {tok:?} is not a finite number"),
                        })
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.is_empty() {
                return Err(Error::Fixture {
                    line: line_no,
                    message: format!("{key}: missing value"),
                });
            }
            entries
                .entry(key.to_string())
                .or_default()
                .push((line_no, values));
        }
        Ok(Self { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn missing(key: &str) -> Error {
        Error::Fixture {
            line: 0,
            message: format!("missing key {key:?}"),
        }
    }

    /// The single row for `key`.
    pub fn list(&self, key: &str) -> Result<&[f64]> {
        match self.entries.get(key).map(Vec::as_slice) {
            None | Some([]) => Err(Self::missing(key)),
            Some([(_, row)]) => Ok(row),
            Some([_, (line, _), ..]) => Err(Error::Fixture {
                line: *line,
                message: format!("duplicate key {key:?}"),
            }),
        }
    }

    pub fn scalar(&self, key: &str) -> Result<f64> {
        match self.list(key)? {
            [v] => Ok(*v),
            row => Err(Error::Fixture {
                line: self.line_of(key),
                message: format!("{key}: expected one value, found {}", row.len()),
            }),
        }
    }

    pub fn optional_scalar(&self, key: &str) -> Result<Option<f64>> {
        if self.entries.contains_key(key) {
            self.scalar(key).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Every row for a repeatable key, each required to have `width` values.
    pub fn rows(&self, key: &str, width: usize) -> Result<Vec<&[f64]>> {
        let rows = self.entries.get(key).ok_or_else(|| Self::missing(key))?;
        rows.iter()
            .map(|(line, row)| {
                if row.len() == width {
                    Ok(row.as_slice())
                } else {
                    Err(Error::Fixture {
                        line: *line,
                        message: format!("{key}: expected {width} values, found {}", row.len()),
                    })
                }
            })
            .collect()
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .get(key)
            .and_then(|rows| rows.first())
            .map_or(0, |(line, _)| *line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_lists_and_rows() {
        let kv = KeyValueFile::parse(
            "# header\nversion = 1\nlist = 1 2.5 -3e-2  # trailing\n\nrow = 1 2\nrow = 3 4\n",
        )
        .unwrap();
        assert_eq!(kv.scalar("version").unwrap(), 1.0);
        assert_eq!(kv.list("list").unwrap(), &[1.0, 2.5, -0.03]);
        assert_eq!(
            kv.rows("row", 2).unwrap(),
            vec![&[1.0, 2.0][..], &[3.0, 4.0][..]]
        );
        assert!(kv.list("row").is_err());
        assert!(kv.scalar("list").is_err());
        assert!(kv.scalar("absent").is_err());
        assert_eq!(kv.optional_scalar("absent").unwrap(), None);
    }

    #[test]
    fn reports_line_numbers() {
        let err = KeyValueFile::parse("a = 1\nb = x\n").unwrap_err();
        assert!(matches!(err, Error::Fixture { line: 2, .. }), "{err}");
        let err = KeyValueFile::parse("a = 1\n\nnot an entry\n").unwrap_err();
        assert!(matches!(err, Error::Fixture { line: 3, .. }));
        assert!(KeyValueFile::parse("Bad = 1").is_err());
        assert!(KeyValueFile::parse("a =").is_err());
        assert!(KeyValueFile::parse("a = nan").is_err());
    }
}
