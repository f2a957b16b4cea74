//! Reading and writing dimer files, and the bundled examples.

use std::path::Path;

use crate::dimer::{Dimer, DimerFile, InvalidDimer};

const BUILTINS: [(&str, &str); 3] = [
    ("c3", include_str!("../data/c3.json")),
    ("conifold", include_str!("../data/conifold.json")),
    ("spp", include_str!("../data/spp.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed dimer file at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] InvalidDimer),
    #[error("unknown built-in {0:?}; available: c3, conifold, spp")]
    UnknownBuiltin(String),
}

/// Names of the bundled examples.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

/// Raw JSON text of a bundled example.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Loads a bundled example by name (`c3`, `conifold`, `spp`).
pub fn builtin(name: &str) -> Result<Dimer, ParseError> {
    let text = builtin_source(name).ok_or_else(|| ParseError::UnknownBuiltin(name.to_string()))?;
    parse_dimer(text)
}

/// Parses the file format without validating.
pub fn parse_dimer_file(text: &str) -> Result<DimerFile, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates a dimer.
pub fn parse_dimer(text: &str) -> Result<Dimer, ParseError> {
    Ok(Dimer::from_file(&parse_dimer_file(text)?)?)
}

/// Reads a dimer from disk. A path that does not exist but names a bundled
/// example loads the example.
pub fn read_dimer(path: &Path) -> Result<Dimer, ParseError> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_dimer(&text),
        Err(source) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            if !path.exists() && builtin_source(stem).is_some() && path.parent().map_or(true, |p| p.as_os_str().is_empty()) {
                builtin(stem)
            } else {
                Err(ParseError::Io { path: path.display().to_string(), source })
            }
        }
    }
}

/// Pretty JSON in the file format.
pub fn serialize_dimer(d: &Dimer) -> String {
    serde_json::to_string_pretty(&d.to_file()).expect("dimer files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_roundtrip() {
        for name in builtin_names() {
            let d = builtin(name).unwrap();
            let original = parse_dimer_file(builtin_source(name).unwrap()).unwrap();
            let again = parse_dimer_file(&serialize_dimer(&d)).unwrap();
            assert_eq!(original, again, "{name}");
        }
    }

    #[test]
    fn json_errors_carry_position() {
        let err = parse_dimer("{\n  \"name\": 3\n}").unwrap_err();
        match err {
            ParseError::Json { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_sign_names_the_face() {
        let text = builtin_source("c3").unwrap().replacen("\"-\"", "\"±\"", 1);
        let msg = parse_dimer(&text).unwrap_err().to_string();
        assert!(msg.contains("face 1"), "{msg}");
    }
}
