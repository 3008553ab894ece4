//! Line-delimited JSON persistence, one record per line.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::CorpusRecord;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}{}: {message}", id.as_ref().map(|i| format!(" (record `{i}`)")).unwrap_or_default())]
    Malformed { line: usize, id: Option<String>, message: String },
}

impl CorpusError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::Malformed { line, .. } => Some(*line),
            CorpusError::Io(_) => None,
        }
    }
}

/// Reads records one line at a time. Blank lines are skipped.
pub struct CorpusReader<R> {
    lines: io::Lines<BufReader<R>>,
    line: usize,
}

impl<R: Read> CorpusReader<R> {
    pub fn new(reader: R) -> Self {
        CorpusReader { lines: BufReader::new(reader).lines(), line: 0 }
    }
}

impl CorpusReader<File> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        Ok(CorpusReader::new(File::open(path)?))
    }
}

fn parse_line(text: &str, line: usize) -> Result<CorpusRecord, CorpusError> {
    serde_json::from_str(text).map_err(|e| {
        // the id is still useful when some other field is broken
        let id = serde_json::from_str::<serde_json::Value>(text)
            .ok()
            .and_then(|v| v.get("id").and_then(|i| i.as_str()).map(str::to_string));
        CorpusError::Malformed { line, id, message: e.to_string() }
    })
}

impl<R: Read> Iterator for CorpusReader<R> {
    type Item = Result<CorpusRecord, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = match self.lines.next()? {
                Ok(t) => t,
                Err(e) => return Some(Err(e.into())),
            };
            self.line += 1;
            if text.trim().is_empty() {
                continue;
            }
            return Some(parse_line(&text, self.line));
        }
    }
}

pub fn read_corpus<R: Read>(reader: R) -> Result<Vec<CorpusRecord>, CorpusError> {
    CorpusReader::new(reader).collect()
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusRecord>, CorpusError> {
    CorpusReader::open(path)?.collect()
}

/// Canonical form: compact JSON, fields in declaration order, LF endings.
pub fn write_corpus<'a, W, I>(writer: W, records: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    let mut w = BufWriter::new(writer);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn save_corpus<'a, I>(path: impl AsRef<Path>, records: I) -> io::Result<()>
where
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    write_corpus(File::create(path)?, records)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::record;
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let recs = vec![
            record("a", "x y", "x y", &[((0, 1), (0, 1)), ((1, 2), (1, 2))]),
            record("b", "p", "q r", &[((0, 1), (0, 2))]),
        ];
        let mut buf = Vec::new();
        write_corpus(&mut buf, &recs).unwrap();
        let back = read_corpus(buf.as_slice()).unwrap();
        assert_eq!(back, recs);
        let mut again = Vec::new();
        write_corpus(&mut again, &back).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn bad_line_reports_line_and_id() {
        let good = serde_json::to_string(&record("a", "x", "x", &[((0, 1), (0, 1))])).unwrap();
        let bad = good.replace("\"a\"", "\"b\"").replace("twitter", "radio");
        let text = format!("{good}\n\n{bad}\n");
        let err = read_corpus(text.as_bytes()).unwrap_err();
        match &err {
            CorpusError::Malformed { line, id, .. } => {
                assert_eq!(*line, 3);
                assert_eq!(id.as_deref(), Some("b"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().starts_with("line 3 (record `b`)"));
    }

    #[test]
    fn unparseable_line_has_no_id() {
        let err = read_corpus("{not json".as_bytes()).unwrap_err();
        assert!(matches!(err, CorpusError::Malformed { line: 1, id: None, .. }));
    }

    #[test]
    fn empty_input_is_empty_corpus() {
        assert!(read_corpus("".as_bytes()).unwrap().is_empty());
    }
}
