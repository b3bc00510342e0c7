use std::path::Path;

use ewens_pitman::{Dataset, FrequencyCounts};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("empty file: {0}")]
    EmptyFile(String),
    #[error("missing header: expected `frequency,count`, found `{0}`")]
    Header(String),
    #[error("malformed row {line}: `{content}` (expected two integers `frequency,count`)")]
    Malformed { line: usize, content: String },
    #[error(
        "nonpositive entry on row {line}: `{content}` (frequency and count must be at least 1)"
    )]
    Nonpositive { line: usize, content: String },
    #[error("frequency {frequency} listed twice (rows {first} and {second})")]
    Duplicate {
        frequency: u64,
        first: usize,
        second: usize,
    },
    #[error("unknown builtin dataset `{id}` (available: {available})")]
    UnknownBuiltin { id: String, available: String },
    #[error(transparent)]
    Model(#[from] ewens_pitman::Error),
}

/// `builtin:ID` or a path to a CSV file with header `frequency,count`.
pub fn parse_dataset(spec: &str) -> Result<Dataset, DatasetError> {
    if let Some(id) = spec.strip_prefix("builtin:") {
        return Dataset::builtin(id).map_err(|_| DatasetError::UnknownBuiltin {
            id: id.to_string(),
            available: ewens_pitman::partition::BUILTIN_DATASETS.join(", "),
        });
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: spec.to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    parse_csv(&name, &text)
}

pub fn parse_csv(name: &str, text: &str) -> Result<Dataset, DatasetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(DatasetError::EmptyFile(name.to_string()));
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["frequency", "count"] {
        return Err(DatasetError::Header(header.to_string()));
    }
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        let malformed = || DatasetError::Malformed {
            line,
            content: content.to_string(),
        };
        if fields.len() != 2 {
            return Err(malformed());
        }
        let parse = |s: &str| s.parse::<i64>().map_err(|_| malformed());
        let (frequency, count) = (parse(fields[0])?, parse(fields[1])?);
        if frequency < 1 || count < 1 {
            return Err(DatasetError::Nonpositive {
                line,
                content: content.to_string(),
            });
        }
        let frequency = frequency as u64;
        if let Some(first) = seen.insert(frequency, line) {
            return Err(DatasetError::Duplicate {
                frequency,
                first,
                second: line,
            });
        }
        pairs.push((frequency, count as u64));
    }
    let counts = FrequencyCounts::from_pairs(pairs)?;
    Ok(Dataset::new(name, counts)?)
}
