//! Versioned JSON persistence and run manifests.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::complexes::{CrossReport, FinSimpSet, HomologyGroup, Pi1Report};
use crate::covers::{CoverAnalysis, CoverSpec, LiftResult};
use crate::decomp::{Decomposition, ValidationReport};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monodromy::{KernelLattice, SmoothnessReport, StratumReport};
use crate::surface::graph::StableGraph;

pub const SCHEMA: &str = "levelnerve";
pub const SCHEMA_VERSION: u32 = 1;

/// A type with a persisted JSON form.
pub trait Artifact: Serialize + DeserializeOwned {
    const KIND: &'static str;
}

macro_rules! artifact {
    ($($t:ty => $k:literal),* $(,)?) => {
        $(impl Artifact for $t {
            const KIND: &'static str = $k;
        })*
    };
}

artifact! {
    CoverSpec => "cover_spec",
    CoverAnalysis => "cover_analysis",
    LiftResult => "lift",
    FinSimpSet => "complex",
    Pi1Report => "pi1_report",
    Vec<HomologyGroup> => "homology",
    CrossReport => "cross_validation",
    Decomposition => "decomposition",
    ValidationReport => "validation",
    KernelLattice => "kernel_lattice",
    SmoothnessReport => "smoothness",
    StratumReport => "stratum",
    TypeCatalog => "types",
    RunManifest => "manifest",
    ReplayReport => "replay",
}

/// Stable graphs of one signature keyed by edge count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCatalog {
    pub g: usize,
    pub n: usize,
    pub by_edges: BTreeMap<usize, Vec<StableGraph>>,
}

/// Sorted-key JSON, pretty printed, with a trailing newline.
pub fn to_canonical_json(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&sorted(v.clone())).expect("json values always serialize");
    out.push(b'\n');
    out
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let b: BTreeMap<String, Value> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(b.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        x => x,
    }
}

pub fn encode<T: Artifact>(x: &T) -> Result<Vec<u8>> {
    let data = serde_json::to_value(x).map_err(|e| Error::Schema(e.to_string()))?;
    Ok(to_canonical_json(&json!({
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "kind": T::KIND,
        "data": data,
    })))
}

fn envelope(bytes: &[u8]) -> Result<serde_json::Map<String, Value>> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("malformed artifact: {e}")))?;
    let Value::Object(m) = v else {
        return Err(Error::Schema("artifact is not a JSON object".into()));
    };
    if m.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(Error::Schema(format!("not a {SCHEMA} artifact")));
    }
    match m.get("version") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION as u64) => Ok(m),
        Some(v) => Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION,
            found: v.to_string(),
        }),
        None => Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION,
            found: "none".into(),
        }),
    }
}

/// Kind tag of an encoded artifact.
pub fn peek_kind(bytes: &[u8]) -> Result<String> {
    let m = envelope(bytes)?;
    m.get("kind")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Schema("artifact has no kind".into()))
}

pub fn decode<T: Artifact>(bytes: &[u8]) -> Result<T> {
    let mut m = envelope(bytes)?;
    let kind = m.get("kind").and_then(Value::as_str).unwrap_or("");
    if kind != T::KIND {
        return Err(Error::Schema(format!("expected a {} artifact, found {kind:?}", T::KIND)));
    }
    let data = m.remove("data").ok_or_else(|| Error::Schema("artifact has no data".into()))?;
    serde_json::from_value(data).map_err(|e| Error::Schema(format!("{} payload: {e}", T::KIND)))
}

pub fn read_artifact<T: Artifact>(path: &str) -> Result<T> {
    decode(&read_file(path)?)
}

pub fn read_file(path: &str) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

pub fn write_file(path: &str, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{path}: {e}")))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_file(path: &str) -> Result<FileDigest> {
        Ok(FileDigest {
            path: path.to_string(),
            sha256: sha256_hex(&read_file(path)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitSettings {
    pub max_orbit: usize,
    pub max_degree: usize,
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_mem: Option<u64>,
}

impl From<&Limits> for LimitSettings {
    fn from(l: &Limits) -> Self {
        LimitSettings {
            max_orbit: l.max_orbit,
            max_degree: l.max_degree,
            workers: l.workers,
            max_mem: l.max_mem,
        }
    }
}

/// Everything needed to replay one invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub limits: LimitSettings,
    pub exit_code: i32,
    pub wall_time_ms: u64,
    pub started_unix: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub command: String,
    pub inputs_match: bool,
    pub outputs_match: bool,
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.inputs_match && self.outputs_match
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_spec_round_trip() {
        let s = CoverSpec::homology_cover(2, 1, 3);
        let b = encode(&s).unwrap();
        assert_eq!(*b.last().unwrap(), b'\n');
        let t: CoverSpec = decode(&b).unwrap();
        assert_eq!(s, t);
        assert_eq!(encode(&t).unwrap(), b);
        assert_eq!(peek_kind(&b).unwrap(), "cover_spec");
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": {"z": 1, "c": [ {"y": 0, "x": 1} ]}});
        let s = String::from_utf8(to_canonical_json(&v)).unwrap();
        let pos = |k: &str| s.find(k).unwrap();
        assert!(pos("\"a\"") < pos("\"b\""));
        assert!(pos("\"c\"") < pos("\"z\""));
        assert!(pos("\"x\"") < pos("\"y\""));
    }

    #[test]
    fn decode_errors() {
        let b = encode(&CoverSpec::identity(1, 1)).unwrap();
        assert!(matches!(decode::<CoverSpec>(&b[..b.len() / 2]), Err(Error::Schema(_))));
        assert!(matches!(decode::<FinSimpSet>(&b), Err(Error::Schema(_))));
        let s = String::from_utf8(b).unwrap().replace("\"version\": 1", "\"version\": 7");
        match decode::<CoverSpec>(s.as_bytes()) {
            Err(Error::SchemaVersion { expected, found }) => assert_eq!((expected, found.as_str()), (1, "7")),
            r => panic!("{r:?}"),
        }
        assert!(matches!(decode::<CoverSpec>(b"[1,2]"), Err(Error::Schema(_))));
    }

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
