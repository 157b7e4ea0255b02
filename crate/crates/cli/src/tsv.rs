//! The tab-separated dataset format.
//!
//! UTF-8, LF line endings, and the exact header
//! `context_id\tword\tgold_sense_id\tpredict_sense_id\tpositions\tcontext`.
//! An empty string encodes an absent sense id; positions are
//! comma-separated `start-end` pairs of Unicode scalar offsets. Literal
//! tabs, carriage returns, or newlines inside fields are rejected rather
//! than escaped, which keeps files line-parseable and round-trips exact.

use std::fmt;
use std::fs;
use std::path::Path;

use wsi_core::dataset::{CharSpan, ContextRecord, Dataset};

pub const HEADER: &str = "context_id\tword\tgold_sense_id\tpredict_sense_id\tpositions\tcontext";

#[derive(Debug)]
pub enum TsvError {
    Io(std::io::Error),
    MissingHeader,
    MalformedHeader { found: String },
    WrongColumnCount { line: usize, found: usize },
    CarriageReturn { line: usize },
    BadPositions { line: usize, field: String },
    /// Parsed records break a dataset invariant (duplicate id, bad span,
    /// empty word).
    InvalidDataset { details: String },
    /// A field holds a tab or line break and cannot be serialized.
    UnencodableField { context_id: String, field: &'static str },
}

impl fmt::Display for TsvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(e) => write!(f, "{e}"),
            Self::MissingHeader => write!(f, "file is empty, expected the dataset header"),
            Self::MalformedHeader { found } => {
                write!(f, "malformed header: expected '{HEADER}', found '{found}'")
            }
            Self::WrongColumnCount { line, found } => {
                write!(f, "line {line}: expected 6 tab-separated columns, found {found}")
            }
            Self::CarriageReturn { line } => {
                write!(f, "line {line}: carriage return found, only LF line endings are supported")
            }
            Self::BadPositions { line, field } => {
                write!(f, "line {line}: cannot parse positions field '{field}'")
            }
            Self::InvalidDataset { details } => write!(f, "invalid dataset: {details}"),
            Self::UnencodableField { context_id, field } => write!(
                f,
                "record '{context_id}': field '{field}' contains a tab or line break"
            ),
        }
    }
}

impl std::error::Error for TsvError {}

impl From<std::io::Error> for TsvError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

pub fn parse_dataset(text: &str) -> Result<Dataset, TsvError> {
    // Split manually: str::lines() would hide a \r before the \n, and CRLF
    // files must be rejected, not silently normalized.
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let mut lines = lines.into_iter();
    let header = lines.next().ok_or(TsvError::MissingHeader)?;
    if header.ends_with('\r') {
        return Err(TsvError::CarriageReturn { line: 1 });
    }
    if header != HEADER {
        return Err(TsvError::MalformedHeader { found: header.into() });
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if line.ends_with('\r') {
            return Err(TsvError::CarriageReturn { line: line_no });
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(TsvError::WrongColumnCount { line: line_no, found: fields.len() });
        }
        records.push(ContextRecord {
            context_id: fields[0].to_string(),
            word: fields[1].to_string(),
            gold_sense_id: optional(fields[2]),
            predict_sense_id: optional(fields[3]),
            positions: parse_positions(fields[4])
                .ok_or_else(|| TsvError::BadPositions { line: line_no, field: fields[4].into() })?,
            context: fields[5].to_string(),
        });
    }
    let dataset = Dataset::new(records);
    let violations = dataset.validate();
    if !violations.is_empty() {
        let details: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(TsvError::InvalidDataset { details: details.join("; ") });
    }
    Ok(dataset)
}

pub fn dataset_to_string(dataset: &Dataset) -> Result<String, TsvError> {
    let violations = dataset.validate();
    if !violations.is_empty() {
        let details: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(TsvError::InvalidDataset { details: details.join("; ") });
    }
    let mut out = String::with_capacity(64 * (dataset.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for record in &dataset.records {
        let empty = String::new();
        let gold = record.gold_sense_id.as_ref().unwrap_or(&empty);
        let predict = record.predict_sense_id.as_ref().unwrap_or(&empty);
        for (field, name) in [
            (&record.context_id, "context_id"),
            (&record.word, "word"),
            (gold, "gold_sense_id"),
            (predict, "predict_sense_id"),
            (&record.context, "context"),
        ] {
            if field.contains(['\t', '\n', '\r']) {
                return Err(TsvError::UnencodableField {
                    context_id: record.context_id.clone(),
                    field: name,
                });
            }
        }
        let positions: Vec<String> =
            record.positions.iter().map(|s| format!("{}-{}", s.start, s.end)).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            record.context_id,
            record.word,
            gold,
            predict,
            positions.join(","),
            record.context
        ));
    }
    Ok(out)
}

pub fn load_tsv(path: &Path) -> Result<Dataset, TsvError> {
    parse_dataset(&fs::read_to_string(path)?)
}

pub fn save_tsv(dataset: &Dataset, path: &Path) -> Result<(), TsvError> {
    let text = dataset_to_string(dataset)?;
    fs::write(path, text)?;
    Ok(())
}

fn optional(field: &str) -> Option<String> {
    if field.is_empty() {
        None
    } else {
        Some(field.to_string())
    }
}

fn parse_positions(field: &str) -> Option<Vec<CharSpan>> {
    if field.is_empty() {
        return Some(Vec::new());
    }
    field
        .split(',')
        .map(|pair| {
            let (start, end) = pair.split_once('-')?;
            Some(CharSpan { start: start.parse().ok()?, end: end.parse().ok()? })
        })
        .collect()
}
