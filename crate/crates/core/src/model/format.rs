// Copyright 2026 The profp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Line-oriented text format: one transaction per line, tokens `label` or
//! `label:prob`, `#` comment lines, blank lines as empty transactions.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{DbError, Item, UncertainDatabase};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based physical line number.
    pub line: usize,
    pub message: String,
}

pub fn parse_database(text: &str) -> Result<UncertainDatabase, ParseError> {
    let mut rows: Vec<Vec<(&str, f64)>> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| ParseError { line, message };
        let mut row = Vec::new();
        let mut seen = HashSet::new();
        for token in trimmed.split_whitespace() {
            let (label, prob) = match token.split_once(':') {
                None => (token, 1.0),
                Some((label, p)) => {
                    let prob: f64 = p
                        .parse()
                        .map_err(|_| err(format!("malformed probability in token {token:?}")))?;
                    (label, prob)
                }
            };
            Item::new(label).map_err(|e| err(e.to_string()))?;
            if !(prob > 0.0 && prob <= 1.0) {
                return Err(err(format!(
                    "probability {prob} of item {label} is outside (0, 1]"
                )));
            }
            if !seen.insert(label) {
                return Err(err(format!("duplicate item {label}")));
            }
            row.push((label, prob));
        }
        rows.push(row);
        lines.push(line);
    }
    UncertainDatabase::from_rows(&rows).map_err(|e| {
        let line = match &e {
            DbError::DuplicateItem { tid, .. } => lines[*tid as usize - 1],
            _ => 0,
        };
        ParseError {
            line,
            message: e.to_string(),
        }
    })
}

/// Writes one line per transaction. Certain items are written bare.
pub fn serialize_database(db: &UncertainDatabase) -> String {
    let mut out = String::new();
    for t in db.transactions() {
        let mut first = true;
        for e in &t.entries {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(db.label(e.item));
            if !e.is_certain() {
                let _ = write!(out, ":{}", format_probability(e.prob));
            }
        }
        out.push('\n');
    }
    out
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as the rounded value. Integral values keep a `.0` suffix.
pub fn format_probability(p: f64) -> String {
    let rounded = round_significant(p);
    if rounded != 0.0 && rounded.abs() < 1e-4 {
        return format!("{rounded:e}");
    }
    let s = rounded.to_string();
    if s.contains('.') || !rounded.is_finite() {
        s
    } else {
        s + ".0"
    }
}

pub(crate) fn round_significant(p: f64) -> f64 {
    format!("{p:.11e}").parse().unwrap_or(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# running example
A:1.0 B:0.2 C:0.5
A:0.1 D:1.0
A B C D:0.4
A B D:0.5
B:0.1 C
C:0.1 D:0.5
A B C
A:0.5 B
";

    #[test]
    fn parses_running_example() {
        let db = parse_database(EXAMPLE).unwrap();
        assert_eq!(db, super::super::running_example());
        let t1 = db.transaction(1).unwrap();
        let got: Vec<_> = t1
            .entries
            .iter()
            .map(|e| (db.label(e.item), e.prob))
            .collect();
        assert_eq!(got, vec![("A", 1.0), ("B", 0.2), ("C", 0.5)]);
    }

    #[test]
    fn bare_labels_are_certain_and_sorted() {
        let db = parse_database("D A\n").unwrap();
        let t = db.transaction(1).unwrap();
        assert_eq!(t.entries.len(), 2);
        assert_eq!(db.label(t.entries[0].item), "A");
        assert!(t.entries.iter().all(|e| e.prob == 1.0));
    }

    #[test]
    fn rejects_zero_probability() {
        let err = parse_database("A:0.0 B:1.0").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn errors_name_the_physical_line() {
        let err = parse_database("# header\nA\nA:1.2\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_database("A\nB B\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate"));
        let err = parse_database("A:x\n").unwrap_err();
        assert!(err.message.contains("malformed"));
        assert!(parse_database("A:\n").is_err());
        assert!(parse_database(":0.5\n").is_err());
    }

    #[test]
    fn near_one_stays_uncertain() {
        let db = parse_database("A:0.999999 B:1.00\n").unwrap();
        let t = db.transaction(1).unwrap();
        assert!(!t.entries[0].is_certain());
        assert!(t.entries[1].is_certain());
    }

    #[test]
    fn blank_lines_are_empty_transactions() {
        let db = parse_database("A\n\nB\n").unwrap();
        assert_eq!(db.len(), 3);
        assert!(db.transaction(2).unwrap().entries.is_empty());
        assert_eq!(parse_database("").unwrap().len(), 0);
        assert_eq!(serialize_database(&db), "A\n\nB\n");
    }

    #[test]
    fn serialization_omits_certain_probabilities() {
        let db = parse_database(EXAMPLE).unwrap();
        let text = serialize_database(&db);
        assert!(text.starts_with("A B:0.2 C:0.5\nA:0.1 D\n"));
        assert_eq!(parse_database(&text).unwrap(), db);
    }

    #[test]
    fn probability_formatting() {
        assert_eq!(format_probability(0.48000000000000004), "0.48");
        assert_eq!(format_probability(1.0), "1.0");
        assert_eq!(format_probability(0.05), "0.05");
        assert_eq!(format_probability(0.0), "0.0");
        let tiny = format_probability(1.234e-9);
        assert_eq!(tiny.parse::<f64>().unwrap(), 1.234e-9);
    }
}
