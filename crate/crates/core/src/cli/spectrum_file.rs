use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::PolysemySpectrum;

const DELIMITERS: [u8; 3] = [b',', b'\t', b';'];

/// Reads an empirical spectrum from a delimiter-separated or JSON file.
pub fn parse_spectrum(path: impl AsRef<Path>) -> Result<PolysemySpectrum> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_spectrum_str(&text)
}

/// Parses spectrum text. Input starting with `{` is JSON of the form
/// `{"spectrum": {"1": 100, ...}}`; anything else is rows of `degree,count`
/// separated by comma, tab or semicolon (whichever occurs first in the first
/// line), with an optional header line.
pub fn parse_spectrum_str(text: &str) -> Result<PolysemySpectrum> {
    let rows = if text.trim_start().starts_with('{') { parse_json(text)? } else { parse_delimited(text)? };
    if rows.values().all(|&n| n == 0) {
        return Err(Error::EmptySpectrum);
    }
    PolysemySpectrum::empirical(rows)
}

fn detect_delimiter(text: &str) -> u8 {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    first
        .bytes()
        .find(|b| DELIMITERS.contains(b))
        .unwrap_or(b',')
}

fn parse_delimited(text: &str) -> Result<BTreeMap<u32, u64>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(text))
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows = BTreeMap::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(index + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if index == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields (degree, count), found {}", record.len()),
            });
        }
        let degree = parse_degree(&record[0]).map_err(|message| Error::Parse { line, message })?;
        let count: u64 = record[1]
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("invalid count {:?}", &record[1]) })?;
        if rows.insert(degree, count).is_some() {
            return Err(Error::DuplicateDegree { line, degree });
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(rows)
}

fn parse_degree(field: &str) -> std::result::Result<u32, String> {
    match field.parse::<u32>() {
        Ok(0) | Err(_) => Err(format!("invalid degree {field:?}: expected an integer >= 1")),
        Ok(k) => Ok(k),
    }
}

#[derive(Deserialize)]
struct SpectrumJson {
    spectrum: Entries,
}

/// Object entries in document order, keeping duplicates.
struct Entries(Vec<(String, serde_json::Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping degrees to counts")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Entries, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    entries.push(entry);
                }
                Ok(Entries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

fn parse_json(text: &str) -> Result<BTreeMap<u32, u64>> {
    let doc: SpectrumJson = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let mut rows = BTreeMap::new();
    for (key, value) in doc.spectrum.0 {
        let degree = parse_degree(&key).map_err(|message| Error::Parse { line: 0, message })?;
        let count = value.as_u64().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("count for degree {degree} must be a non-negative integer, got {value}"),
        })?;
        if rows.insert(degree, count).is_some() {
            return Err(Error::DuplicateDegree { line: 0, degree });
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comma_rows() {
        let s = parse_spectrum_str("1,100\n2,40\n3,10").unwrap();
        assert_eq!(s.counts(), &BTreeMap::from([(1, 100.0), (2, 40.0), (3, 10.0)]));
        assert_eq!(s.total_words(), 150.0);
        assert_eq!(s.total_meanings(), 210.0);
    }

    #[test]
    fn tab_with_header() {
        let s = parse_spectrum_str("k\tcount\n1\t5").unwrap();
        assert_eq!(s.counts(), &BTreeMap::from([(1, 5.0)]));
    }

    #[test]
    fn semicolon_blank_lines_and_spaces() {
        let s = parse_spectrum_str("\ndegree; words\n1; 7\n\n2 ;3\n").unwrap();
        assert_eq!(s.counts(), &BTreeMap::from([(1, 7.0), (2, 3.0)]));
    }

    #[test]
    fn duplicate_degree() {
        let err = parse_spectrum_str("1,100\n1,50").unwrap_err();
        assert_eq!(err, Error::DuplicateDegree { line: 2, degree: 1 });
    }

    #[test]
    fn malformed_rows_report_line() {
        match parse_spectrum_str("1,100\n2,abc\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
        match parse_spectrum_str("k,n\n1,100\n2,5,7\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_spectrum_str("0,5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_spectrum_str("1,-5\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spectrum_str("1,2.5\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(parse_spectrum_str("").unwrap_err(), Error::EmptySpectrum);
        assert_eq!(parse_spectrum_str("k,count\n").unwrap_err(), Error::EmptySpectrum);
        assert_eq!(parse_spectrum_str("1,0\n2,0").unwrap_err(), Error::EmptySpectrum);
        assert_eq!(parse_spectrum_str(r#"{"spectrum": {}}"#).unwrap_err(), Error::EmptySpectrum);
    }

    #[test]
    fn json_spectrum() {
        let s = parse_spectrum_str(r#"{ "spectrum": {"1": 100, "2": 40, "3": 10} }"#).unwrap();
        assert_eq!(s.total_meanings(), 210.0);
        assert!(matches!(
            parse_spectrum_str(r#"{"spectrum": {"1": 100, "01": 5}}"#),
            Err(Error::DuplicateDegree { degree: 1, .. })
        ));
        assert!(matches!(parse_spectrum_str(r#"{"spectrum": {"1": 1.5}}"#), Err(Error::Parse { .. })));
        assert!(matches!(parse_spectrum_str("{\n\"spectrum\": [1, 2]}"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.tsv");
        std::fs::write(&path, "1\t10\n2\t4\n").unwrap();
        assert_eq!(parse_spectrum(&path).unwrap().total_words(), 14.0);
        assert!(matches!(parse_spectrum(dir.path().join("missing.csv")), Err(Error::Io(_))));
    }
}
