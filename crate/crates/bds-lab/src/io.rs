//! File formats and reproducibility metadata.
//!
//! The byte-exact grammar of every format lives in `docs/formats.md`.
//! Concept classes come as JSON (`{"k", "n", "hypotheses"}`) or
//! header-free CSV (one hypothesis per row); environments, samples,
//! witnesses, and reports are JSON. Every emitted artifact carries a
//! `meta` block with the tool version, master seed, and the SHA-256 of
//! the resolved configuration, so identical invocations produce
//! identical bytes.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use bds_core::concept_class::ConceptClass;
use bds_core::dimensions::PseudoBoxWitness;
use bds_core::list_learning::{FiniteDistribution, LabeledPair};
use bds_core::rat::{parse_rat, rat_from_f64, Rat};

pub const TOOL_NAME: &str = "bds-lab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reproducibility header embedded in every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
}

impl Meta {
    /// Builds the header from the resolved (serialized) configuration.
    pub fn new<C: Serialize>(seed: u64, config: &C) -> Result<Self> {
        let config_json = serde_json::to_string(config)?;
        Ok(Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            seed,
            config_sha256: sha256_hex(config_json.as_bytes()),
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Canonical JSON envelope for reports: `{"meta": ..., "data": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report<T> {
    pub meta: Meta,
    pub data: T,
}

/// Serializes a report to its canonical byte form (pretty JSON plus a
/// trailing newline).
pub fn report_to_string<T: Serialize>(report: &Report<T>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes `content` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            fs::write(p, content).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ClassFile {
    k: u16,
    n: usize,
    hypotheses: Vec<Vec<u16>>,
}

/// Reads a concept class; `.csv` selects the CSV grammar, anything else
/// is parsed as JSON.
pub fn read_class(path: &Path) -> Result<ConceptClass> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        class_from_csv(&text)
    } else {
        class_from_json(&text)
    }
}

pub fn class_from_json(text: &str) -> Result<ConceptClass> {
    let file: ClassFile = serde_json::from_str(text).context("parsing class JSON")?;
    Ok(ConceptClass::new(file.k, file.n, file.hypotheses)?)
}

/// CSV: one hypothesis per row, comma-separated labels, no header.
/// The label count is inferred as the largest label present.
pub fn class_from_csv(text: &str) -> Result<ConceptClass> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<u16> = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<u16>()
                    .with_context(|| format!("line {}: bad label {cell:?}", lineno + 1))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("CSV class file has no rows");
    }
    let n = rows[0].len();
    let k = rows.iter().flatten().copied().max().unwrap_or(0).max(2);
    Ok(ConceptClass::new(k, n, rows)?)
}

/// Canonical JSON bytes of a class (sorted hypotheses, pretty, trailing
/// newline).
pub fn class_to_json_string(class: &ConceptClass) -> Result<String> {
    let file = ClassFile {
        k: class.k(),
        n: class.n(),
        hypotheses: class.hypotheses().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

/// Canonical CSV bytes of a class.
pub fn class_to_csv_string(class: &ConceptClass) -> String {
    let mut out = String::new();
    for h in class.hypotheses() {
        let cells: Vec<String> = h.iter().map(u16::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_class(class: &ConceptClass, path: &Path) -> Result<()> {
    let content = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        class_to_csv_string(class)
    } else {
        class_to_json_string(class)?
    };
    emit(Some(path), &content)
}

/// A mass is either a JSON number (converted exactly from its binary
/// float value) or a string rational like `"1/4"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MassValue {
    Number(f64),
    Text(String),
}

impl MassValue {
    fn to_rat(&self) -> Result<Rat> {
        Ok(match self {
            MassValue::Number(x) => rat_from_f64(*x)?,
            MassValue::Text(s) => parse_rat(s)?,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct EnvFile {
    masses: Vec<MassValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Vec<u16>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_index: Option<usize>,
}

/// Reads an environment file against its working class. Exactly one of
/// `target` (explicit label vector) or `target_index` (index into the
/// class's canonical hypothesis order) must be present.
pub fn read_environment(path: &Path, class: &ConceptClass) -> Result<FiniteDistribution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    environment_from_json(&text, class)
}

pub fn environment_from_json(text: &str, class: &ConceptClass) -> Result<FiniteDistribution> {
    let file: EnvFile = serde_json::from_str(text).context("parsing environment JSON")?;
    let masses: Vec<Rat> = file.masses.iter().map(MassValue::to_rat).collect::<Result<_>>()?;
    let target = match (file.target, file.target_index) {
        (Some(t), None) => t,
        (None, Some(i)) => class
            .hypotheses()
            .get(i)
            .cloned()
            .with_context(|| format!("target_index {i} out of range"))?,
        _ => bail!("environment must specify exactly one of target or target_index"),
    };
    Ok(FiniteDistribution::new(masses, target, class)?)
}

/// Labeled sample: JSON list of `[instance, label]` pairs.
pub fn read_sample(path: &Path) -> Result<Vec<LabeledPair>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: Vec<(usize, u16)> = serde_json::from_str(&text).context("parsing sample JSON")?;
    Ok(raw)
}

pub fn read_witness(path: &Path) -> Result<PseudoBoxWitness> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).context("parsing witness JSON")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bds_core::rat::rat;
    use std::io::Write;

    fn temp_file(name: &str, content: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("bds-lab-io-tests");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn class_json_round_trip_is_identity() {
        let class = ConceptClass::full(2, 3, 100).unwrap();
        let text = class_to_json_string(&class).unwrap();
        let back = class_from_json(&text).unwrap();
        assert_eq!(class, back);
        // and the bytes are stable
        assert_eq!(class_to_json_string(&back).unwrap(), text);
    }

    #[test]
    fn class_csv_round_trip_is_identity() {
        let class = ConceptClass::full(3, 2, 100).unwrap();
        let text = class_to_csv_string(&class);
        let path = temp_file("round.csv", &text);
        let back = read_class(&path).unwrap();
        assert_eq!(class, back);
    }

    #[test]
    fn class_loader_rejects_bad_labels_and_duplicates() {
        let zero = r#"{"k": 2, "n": 2, "hypotheses": [[0, 1]]}"#;
        assert!(class_from_json(zero).is_err());
        let dup = r#"{"k": 2, "n": 2, "hypotheses": [[1, 1], [1, 1]]}"#;
        assert!(class_from_json(dup).is_err());
        let garbled = r#"{"k": 2}"#;
        assert!(class_from_json(garbled).is_err());
        assert!(class_from_csv("1,1\n1,1\n").is_err());
    }

    #[test]
    fn environment_accepts_numbers_strings_and_target_index() {
        let class = ConceptClass::full(2, 2, 100).unwrap();
        let by_vector = r#"{"masses": [0.75, "1/4"], "target": [1, 2]}"#;
        let dist = environment_from_json(by_vector, &class).unwrap();
        assert_eq!(dist.mass(0), &rat(3, 4));
        assert_eq!(dist.mass(1), &rat(1, 4));
        assert_eq!(dist.target(), &[1, 2]);

        let by_index = r#"{"masses": ["1/2", "1/2"], "target_index": 0}"#;
        let dist = environment_from_json(by_index, &class).unwrap();
        assert_eq!(dist.target(), class.hypotheses()[0].as_slice());

        let both = r#"{"masses": [1.0, 0.0], "target": [1, 1], "target_index": 0}"#;
        assert!(environment_from_json(both, &class).is_err());
        let neither = r#"{"masses": [1.0, 0.0]}"#;
        assert!(environment_from_json(neither, &class).is_err());
    }

    #[test]
    fn meta_hash_is_stable() {
        #[derive(Serialize)]
        struct Cfg {
            a: u32,
        }
        let m1 = Meta::new(7, &Cfg { a: 1 }).unwrap();
        let m2 = Meta::new(7, &Cfg { a: 1 }).unwrap();
        let m3 = Meta::new(7, &Cfg { a: 2 }).unwrap();
        assert_eq!(m1, m2);
        assert_ne!(m1.config_sha256, m3.config_sha256);
    }

    #[test]
    fn witness_round_trip() {
        use bds_core::dimensions::NeighborProfile;
        let w = PseudoBoxWitness {
            seq: vec![0, 1],
            profile: NeighborProfile::new(vec![1, 2]).unwrap(),
            family: vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![1, 3], vec![2, 3]],
        };
        let text = serde_json::to_string(&w).unwrap();
        let path = temp_file("witness.json", &text);
        assert_eq!(read_witness(&path).unwrap(), w);
    }

    #[test]
    fn witness_with_zero_requirement_is_rejected_at_parse() {
        let path = temp_file(
            "bad_witness.json",
            r#"{"seq": [0, 1], "profile": [0, 1], "family": [[1, 1]]}"#,
        );
        assert!(read_witness(&path).is_err());
    }
}
