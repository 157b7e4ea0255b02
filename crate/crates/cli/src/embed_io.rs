//! The textual word-vector format: a `<vocab_size> <dim>` header line,
//! then one `token c1 c2 ... c_dim` row per entry, single ASCII spaces,
//! UTF-8.

use std::fmt;
use std::fs;
use std::path::Path;

use wsi_core::embedding::{EmbeddingError, EmbeddingStore};

#[derive(Debug)]
pub enum EmbedIoError {
    Io(std::io::Error),
    MalformedHeader { found: String },
    /// Header vocabulary count disagrees with the number of rows.
    CountMismatch { declared: usize, found: usize },
    WrongComponentCount { line: usize, expected: usize, found: usize },
    NonNumericComponent { line: usize, component: String },
    EmptyToken { line: usize },
    Store { line: usize, source: EmbeddingError },
}

impl fmt::Display for EmbedIoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(e) => write!(f, "{e}"),
            Self::MalformedHeader { found } => {
                write!(f, "malformed header '{found}': expected '<vocab_size> <dim>'")
            }
            Self::CountMismatch { declared, found } => {
                write!(f, "header declares {declared} vectors but the file holds {found}")
            }
            Self::WrongComponentCount { line, expected, found } => {
                write!(f, "line {line}: expected {expected} components, found {found}")
            }
            Self::NonNumericComponent { line, component } => {
                write!(f, "line {line}: non-numeric component '{component}'")
            }
            Self::EmptyToken { line } => write!(f, "line {line}: empty token"),
            Self::Store { line, source } => write!(f, "line {line}: {source}"),
        }
    }
}

impl std::error::Error for EmbedIoError {}

impl From<std::io::Error> for EmbedIoError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

pub fn parse_embeddings(text: &str) -> Result<EmbeddingStore, EmbedIoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| EmbedIoError::MalformedHeader { found: String::new() })?;
    let malformed = || EmbedIoError::MalformedHeader { found: header.to_string() };
    let mut parts = header.split(' ');
    let declared: usize = parts.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
    let dim: usize = parts.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
    if parts.next().is_some() || dim == 0 {
        return Err(malformed());
    }

    let mut store = EmbeddingStore::new(dim)
        .map_err(|source| EmbedIoError::Store { line: 1, source })?;
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        rows += 1;
        let mut fields = line.split(' ');
        let token = fields.next().unwrap_or("");
        if token.is_empty() {
            return Err(EmbedIoError::EmptyToken { line: line_no });
        }
        let mut vector = Vec::with_capacity(dim);
        for component in fields {
            let value: f64 = component.parse().map_err(|_| {
                EmbedIoError::NonNumericComponent { line: line_no, component: component.into() }
            })?;
            vector.push(value);
        }
        if vector.len() != dim {
            return Err(EmbedIoError::WrongComponentCount {
                line: line_no,
                expected: dim,
                found: vector.len(),
            });
        }
        store
            .insert(token.to_string(), vector)
            .map_err(|source| EmbedIoError::Store { line: line_no, source })?;
    }
    if rows != declared {
        return Err(EmbedIoError::CountMismatch { declared, found: rows });
    }
    Ok(store)
}

/// Serialize with tokens in lexicographic order; floats are printed in
/// Rust's shortest round-trip form, so parse(write(s)) == s exactly.
pub fn embeddings_to_string(store: &EmbeddingStore) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", store.len(), store.dim()));
    for (token, vector) in store.iter() {
        out.push_str(token);
        for component in vector {
            out.push(' ');
            out.push_str(&format!("{component}"));
        }
        out.push('\n');
    }
    out
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingStore, EmbedIoError> {
    parse_embeddings(&fs::read_to_string(path)?)
}

pub fn save_embeddings(store: &EmbeddingStore, path: &Path) -> Result<(), EmbedIoError> {
    fs::write(path, embeddings_to_string(store))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_rows() {
        let store = parse_embeddings("2 3\nbank 1 2.5 -3\nriver 0 0.25 1e-2\n").unwrap();
        assert_eq!(store.len(), 2);
        assert_eq!(store.dim(), 3);
        assert_eq!(store.get("bank").unwrap(), &[1.0, 2.5, -3.0]);
        assert_eq!(store.get("river").unwrap(), &[0.0, 0.25, 0.01]);
    }

    #[test]
    fn rejects_wrong_component_count() {
        let err = parse_embeddings("1 3\nbank 1 2\n").unwrap_err();
        assert!(matches!(
            err,
            EmbedIoError::WrongComponentCount { line: 2, expected: 3, found: 2 }
        ));
    }

    #[test]
    fn rejects_declared_count_mismatch() {
        assert!(matches!(
            parse_embeddings("3 2\nbank 1 2\n"),
            Err(EmbedIoError::CountMismatch { declared: 3, found: 1 })
        ));
    }

    #[test]
    fn rejects_non_numeric_and_duplicates() {
        assert!(matches!(
            parse_embeddings("1 2\nbank one 2\n"),
            Err(EmbedIoError::NonNumericComponent { line: 2, .. })
        ));
        assert!(matches!(
            parse_embeddings("2 2\nbank 1 2\nbank 3 4\n"),
            Err(EmbedIoError::Store { line: 3, .. })
        ));
    }

    #[test]
    fn rejects_non_finite_components() {
        // "NaN" parses as a float but violates the store invariant.
        assert!(matches!(
            parse_embeddings("1 2\nbank NaN 2\n"),
            Err(EmbedIoError::Store { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_malformed_headers() {
        for text in ["", "2\n", "a 3\n", "2 3 4\n", "2 0\n"] {
            assert!(
                matches!(parse_embeddings(text), Err(EmbedIoError::MalformedHeader { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn write_then_parse_round_trips_exactly() {
        let store = parse_embeddings("2 2\nalpha 0.1 -7.25\nbeta 3 4\n").unwrap();
        let text = embeddings_to_string(&store);
        let reloaded = parse_embeddings(&text).unwrap();
        assert_eq!(store, reloaded);
    }
}
