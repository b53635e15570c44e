//! The file envelope: a format version, the kind of object carried, and a
//! sha256 checksum of the canonical payload serialization.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Fan,
    OneComplex,
    Degeneration,
    Series,
    Pairing,
    VertexTable,
    Job,
    Points,
    Morphism,
    Record,
    VerticalComplex,
    Parts,
    Comparison,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Fan => "fan",
            Kind::OneComplex => "one-complex",
            Kind::Degeneration => "degeneration",
            Kind::Series => "series",
            Kind::Pairing => "pairing",
            Kind::VertexTable => "vertex-table",
            Kind::Job => "job",
            Kind::Points => "points",
            Kind::Morphism => "morphism",
            Kind::Record => "record",
            Kind::VerticalComplex => "vertical-complex",
            Kind::Parts => "parts",
            Kind::Comparison => "comparison",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub kind: Kind,
    pub checksum: String,
    pub payload: Value,
}

/// Canonical bytes of a JSON value: compact, object keys sorted.
pub fn canonical_bytes(v: &Value) -> Vec<u8> {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    serde_json::to_vec(v).expect("JSON values always serialize")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn checksum(payload: &Value) -> String {
    format!("sha256:{}", sha256_hex(&canonical_bytes(payload)))
}

impl Manifest {
    pub fn wrap<T: Serialize>(kind: Kind, payload: &T) -> Result<Self, CliError> {
        let payload = serde_json::to_value(payload).map_err(|e| CliError::computation(format!("serializing {kind}: {e}")))?;
        Ok(Manifest {
            format_version: FORMAT_VERSION,
            kind,
            checksum: checksum(&payload),
            payload,
        })
    }

    pub fn verify(&self, expected: Kind) -> Result<(), CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::validation(format!(
                "format_version: {} is not recognized (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.kind != expected {
            return Err(CliError::validation(format!("kind: expected '{expected}', found '{}'", self.kind)));
        }
        let actual = checksum(&self.payload);
        if actual != self.checksum {
            return Err(CliError::validation(format!(
                "checksum: payload hashes to {actual}, manifest says {}",
                self.checksum
            )));
        }
        Ok(())
    }
}

fn is_envelope(v: &Value) -> bool {
    v.as_object()
        .is_some_and(|o| o.contains_key("format_version") && o.contains_key("payload"))
}

/// Parses a document of the given kind: either a manifest envelope (whose
/// version, kind and checksum are verified) or a bare payload. Errors name
/// the line and column for malformed JSON and the field path for payloads
/// of the wrong shape.
pub fn parse_document<T: DeserializeOwned>(text: &str, expected: Kind, source: &str) -> Result<T, CliError> {
    let raw: Value = serde_json::from_str(text)
        .map_err(|e| CliError::validation(format!("{source}: line {}, column {}: {e}", e.line(), e.column())))?;
    let (payload, prefix) = if is_envelope(&raw) {
        let m: Manifest = serde_json::from_value(raw)
            .map_err(|e| CliError::validation(format!("{source}: manifest: {e}")))?;
        m.verify(expected).map_err(|e| e.context(source))?;
        (m.payload, "payload.")
    } else {
        (raw, "")
    };
    serde_path_to_error::deserialize(payload).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        CliError::validation(format!("{source}: field '{prefix}{path}': {}", e.inner()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn checksum_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"b": 1, "a": [2, 3]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"a": [2, 3], "b": 1}"#).unwrap();
        assert_eq!(checksum(&a), checksum(&b));
    }

    #[test]
    fn envelope_round_trip() {
        let m = Manifest::wrap(Kind::Series, &json!({"x": "1/2"})).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let v: Value = parse_document(&text, Kind::Series, "t").unwrap();
        assert_eq!(v, json!({"x": "1/2"}));
    }

    #[test]
    fn tampered_payload_is_rejected() {
        let mut m = Manifest::wrap(Kind::Series, &json!({"x": "1/2"})).unwrap();
        m.payload = json!({"x": "1/3"});
        let text = serde_json::to_string(&m).unwrap();
        let err = parse_document::<Value>(&text, Kind::Series, "t").unwrap_err();
        assert!(err.message.contains("checksum"), "{}", err.message);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let m = Manifest::wrap(Kind::Fan, &json!({})).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let err = parse_document::<Value>(&text, Kind::Job, "t").unwrap_err();
        assert!(err.message.contains("kind"), "{}", err.message);
    }

    #[test]
    fn malformed_json_names_the_line() {
        let err = parse_document::<Value>("{\n  \"a\": ,\n}", Kind::Fan, "f.json").unwrap_err();
        assert!(err.message.contains("line 2"), "{}", err.message);
    }

    #[test]
    fn wrong_shape_names_the_field() {
        #[derive(Debug, Deserialize)]
        #[allow(dead_code)]
        struct P {
            items: Vec<u32>,
        }
        let err = parse_document::<P>(r#"{"items": [1, "x"]}"#, Kind::Fan, "f.json").unwrap_err();
        assert!(err.message.contains("items[1]"), "{}", err.message);
    }
}
