//! On-disk formats: candidate files holding MUB or SIC data in either
//! representation, and verification report files.
//!
//! Both are JSON with an explicit schema version. Complex numbers are stored
//! as `[re, im]` pairs so no string parsing is involved; whether a file holds
//! state vectors or lifted vectors is read off the vector length (`d`
//! components per vector for states, `d*d` for lifted vectors). Every decode
//! error names the offending field by its JSON path.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use mubkit::bloch::BlochVector;
use mubkit::linalg::CVector;
use mubkit::report::VerificationReport;
use mubkit::Complex64;

/// Format revision written into every file.
pub const SCHEMA_VERSION: &str = "1";

/// Largest component magnitude accepted on read. State and lifted vectors
/// are unit scale by construction; the cap keeps every downstream residual
/// finite without constraining legitimate data.
pub const MAX_COMPONENT_MAGNITUDE: f64 = 1e6;

/// Largest dimension a file may declare; bounds the memory a lifted SIC
/// candidate (d² vectors of d² components) can demand.
pub const MAX_FILE_DIMENSION: usize = 64;

/// Which family a candidate file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mub,
    Sic,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Mub => write!(f, "mub"),
            Kind::Sic => write!(f, "sic"),
        }
    }
}

/// Which representation a verification ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    State,
    Bloch,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::State => write!(f, "state"),
            Space::Bloch => write!(f, "bloch"),
        }
    }
}

/// Candidate file as serialized: `data` stays a raw JSON value until
/// [`read_candidate`] interprets it against `kind` and `d`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateFile {
    pub schema_version: String,
    pub kind: Kind,
    pub d: usize,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// Optional descriptive fields carried alongside the data.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
}

/// Full record of a search run, embedded in its output file so the result is
/// reproducible from the file alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRecord {
    pub problem: String,
    pub formulation: String,
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_size: f64,
    pub success_threshold: f64,
    pub stagnation_window: usize,
    pub best_restart: usize,
    pub best_objective: f64,
    pub success: bool,
    pub restart_log: Vec<RestartRecord>,
}

/// One restart's trajectory summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestartRecord {
    pub restart: usize,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub iterations: usize,
    pub stop: String,
}

/// Interpreted contents of a candidate file.
#[derive(Debug)]
pub enum CandidateData {
    MubStates(Vec<Vec<CVector>>),
    MubLifted(Vec<Vec<BlochVector>>),
    SicStates(Vec<CVector>),
    SicLifted(Vec<BlochVector>),
}

/// A candidate file after decoding and shape validation.
#[derive(Debug)]
pub struct Candidate {
    pub kind: Kind,
    pub d: usize,
    pub data: CandidateData,
    pub metadata: Option<Metadata>,
}

/// Reads and validates a candidate file; errors carry the file path and the
/// JSON path of the offending field.
pub fn read_candidate(path: &Path) -> Result<Candidate, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: CandidateFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    decode_candidate(file).map_err(|e| format!("{}: {e}", path.display()))
}

fn decode_candidate(file: CandidateFile) -> Result<Candidate, String> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "schema_version: expected \"{SCHEMA_VERSION}\", found \"{}\"",
            file.schema_version
        ));
    }
    let d = file.d;
    if d < 2 {
        return Err(format!("d: must be at least 2, found {d}"));
    }
    if d > MAX_FILE_DIMENSION {
        return Err(format!("d: must be at most {MAX_FILE_DIMENSION}, found {d}"));
    }

    let data = match file.kind {
        Kind::Mub => decode_mub_data(&file.data, d)?,
        Kind::Sic => decode_sic_data(&file.data, d)?,
    };
    Ok(Candidate {
        kind: file.kind,
        d,
        data,
        metadata: file.metadata,
    })
}

fn decode_mub_data(data: &Value, d: usize) -> Result<CandidateData, String> {
    let bases = data
        .as_array()
        .ok_or_else(|| "data: expected an array of bases".to_string())?;
    if bases.is_empty() {
        return Err("data: expected at least one basis".to_string());
    }
    if bases.len() > d + 1 {
        return Err(format!(
            "data: {} bases exceeds the maximum d + 1 = {}",
            bases.len(),
            d + 1
        ));
    }

    let mut expected = None;
    let mut raw: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(bases.len());
    for (a, basis) in bases.iter().enumerate() {
        let vectors = basis
            .as_array()
            .ok_or_else(|| format!("data[{a}]: expected an array of vectors"))?;
        if vectors.len() != d {
            return Err(format!(
                "data[{a}]: basis has {} vectors, expected d = {d}",
                vectors.len()
            ));
        }
        let mut decoded = Vec::with_capacity(d);
        for (alpha, vector) in vectors.iter().enumerate() {
            let path = format!("data[{a}][{alpha}]");
            let components = decode_components(vector, &path)?;
            check_vector_length(&mut expected, components.len(), d, &path)?;
            decoded.push(components);
        }
        raw.push(decoded);
    }

    if expected == Some(d) {
        Ok(CandidateData::MubStates(
            raw.into_iter()
                .map(|basis| basis.into_iter().map(CVector::new).collect())
                .collect(),
        ))
    } else {
        let mut groups = Vec::with_capacity(raw.len());
        for basis in raw {
            let mut group = Vec::with_capacity(basis.len());
            for components in basis {
                group.push(BlochVector::from_components(d, components).expect("length checked"));
            }
            groups.push(group);
        }
        Ok(CandidateData::MubLifted(groups))
    }
}

fn decode_sic_data(data: &Value, d: usize) -> Result<CandidateData, String> {
    let vectors = data
        .as_array()
        .ok_or_else(|| "data: expected an array of vectors".to_string())?;
    if vectors.len() != d * d {
        return Err(format!(
            "data: expected d*d = {} vectors, found {}",
            d * d,
            vectors.len()
        ));
    }

    let mut expected = None;
    let mut raw: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for (x, vector) in vectors.iter().enumerate() {
        let path = format!("data[{x}]");
        let components = decode_components(vector, &path)?;
        check_vector_length(&mut expected, components.len(), d, &path)?;
        raw.push(components);
    }

    if expected == Some(d) {
        Ok(CandidateData::SicStates(
            raw.into_iter().map(CVector::new).collect(),
        ))
    } else {
        Ok(CandidateData::SicLifted(
            raw.into_iter()
                .map(|components| {
                    BlochVector::from_components(d, components).expect("length checked")
                })
                .collect(),
        ))
    }
}

/// The first vector fixes whether the file holds states (length `d`) or
/// lifted vectors (length `d*d`); every later vector must match it.
fn check_vector_length(
    expected: &mut Option<usize>,
    found: usize,
    d: usize,
    path: &str,
) -> Result<(), String> {
    match *expected {
        Some(len) if found == len => Ok(()),
        Some(len) => Err(format!(
            "{path}: vector has {found} components, expected {len} like the first vector"
        )),
        None => {
            if found == d || found == d * d {
                *expected = Some(found);
                Ok(())
            } else {
                Err(format!(
                    "{path}: vector has {found} components, expected d = {d} (state) or d*d = {} (lifted)",
                    d * d
                ))
            }
        }
    }
}

fn decode_components(value: &Value, path: &str) -> Result<Vec<Complex64>, String> {
    let entries = value
        .as_array()
        .ok_or_else(|| format!("{path}: expected an array of [re, im] pairs"))?;
    entries
        .iter()
        .enumerate()
        .map(|(i, pair)| decode_pair(pair, &format!("{path}[{i}]")))
        .collect()
}

fn decode_pair(value: &Value, path: &str) -> Result<Complex64, String> {
    let parts = value
        .as_array()
        .ok_or_else(|| format!("{path}: expected a [re, im] pair"))?;
    if parts.len() != 2 {
        return Err(format!(
            "{path}: expected exactly two numbers, found {} entries",
            parts.len()
        ));
    }
    let mut out = [0.0f64; 2];
    for (i, part) in parts.iter().enumerate() {
        let x = part
            .as_f64()
            .ok_or_else(|| format!("{path}[{i}]: expected a number"))?;
        if !x.is_finite() {
            return Err(format!("{path}[{i}]: expected a finite number"));
        }
        if x.abs() > MAX_COMPONENT_MAGNITUDE {
            return Err(format!(
                "{path}[{i}]: magnitude {x:e} exceeds the limit {MAX_COMPONENT_MAGNITUDE:e}"
            ));
        }
        out[i] = x;
    }
    Ok(Complex64::new(out[0], out[1]))
}

impl CandidateData {
    /// Encodes the data back into JSON, refusing to write non-finite
    /// components.
    pub fn to_value(&self) -> Result<Value, String> {
        match self {
            CandidateData::MubStates(bases) => encode_grouped(
                bases.iter().map(|basis| {
                    basis
                        .iter()
                        .map(|v| v.components())
                        .collect::<Vec<&[Complex64]>>()
                }),
            ),
            CandidateData::MubLifted(groups) => encode_grouped(
                groups.iter().map(|group| {
                    group
                        .iter()
                        .map(|w| w.components())
                        .collect::<Vec<&[Complex64]>>()
                }),
            ),
            CandidateData::SicStates(states) => {
                encode_flat(states.iter().map(|v| v.components()))
            }
            CandidateData::SicLifted(lifted) => {
                encode_flat(lifted.iter().map(|w| w.components()))
            }
        }
    }
}

fn encode_grouped<'a, G>(groups: G) -> Result<Value, String>
where
    G: Iterator<Item = Vec<&'a [Complex64]>>,
{
    let mut out = Vec::new();
    for (a, group) in groups.enumerate() {
        let mut encoded = Vec::with_capacity(group.len());
        for (alpha, components) in group.into_iter().enumerate() {
            encoded.push(encode_components(
                components,
                &format!("data[{a}][{alpha}]"),
            )?);
        }
        out.push(Value::Array(encoded));
    }
    Ok(Value::Array(out))
}

fn encode_flat<'a, I>(vectors: I) -> Result<Value, String>
where
    I: Iterator<Item = &'a [Complex64]>,
{
    let mut out = Vec::new();
    for (x, components) in vectors.enumerate() {
        out.push(encode_components(components, &format!("data[{x}]"))?);
    }
    Ok(Value::Array(out))
}

fn encode_components(components: &[Complex64], path: &str) -> Result<Value, String> {
    let mut out = Vec::with_capacity(components.len());
    for (i, z) in components.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(format!(
                "{path}[{i}]: refusing to write a non-finite component"
            ));
        }
        out.push(Value::Array(vec![Value::from(z.re), Value::from(z.im)]));
    }
    Ok(Value::Array(out))
}

/// Writes a candidate file as pretty-printed JSON.
pub fn write_candidate(
    path: &Path,
    kind: Kind,
    d: usize,
    data: &CandidateData,
    metadata: Option<Metadata>,
) -> Result<(), String> {
    let file = CandidateFile {
        schema_version: SCHEMA_VERSION.to_string(),
        kind,
        d,
        data: data.to_value()?,
        metadata,
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

/// Verification report as serialized.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema_version: String,
    pub input: String,
    pub kind: Kind,
    pub d: usize,
    pub space: Space,
    pub tolerance: f64,
    pub checks: Vec<ReportCheck>,
    pub overall_pass: bool,
}

/// One check's outcome inside a [`ReportFile`].
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportCheck {
    pub label: String,
    pub worst_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_offender: Option<String>,
}

impl ReportFile {
    pub fn from_report(
        input: &Path,
        kind: Kind,
        d: usize,
        space: Space,
        tolerance: f64,
        report: &VerificationReport,
    ) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION.to_string(),
            input: input.display().to_string(),
            kind,
            d,
            space,
            tolerance,
            checks: report
                .checks
                .iter()
                .map(|check| ReportCheck {
                    label: check.label.clone(),
                    worst_residual: check.worst_residual,
                    threshold: check.threshold,
                    pass: check.pass,
                    worst_offender: check.worst_offender.clone(),
                })
                .collect(),
            overall_pass: report.overall_pass,
        }
    }
}

/// Reads a report file, enforcing that `overall_pass` is the conjunction of
/// the individual checks.
pub fn read_report(path: &Path) -> Result<ReportFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: ReportFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "{}: schema_version: expected \"{SCHEMA_VERSION}\", found \"{}\"",
            path.display(),
            file.schema_version
        ));
    }
    let conjunction = file.checks.iter().all(|check| check.pass);
    if conjunction != file.overall_pass {
        return Err(format!(
            "{}: overall_pass: does not equal the conjunction of the individual checks",
            path.display()
        ));
    }
    Ok(file)
}

/// Writes a report file as pretty-printed JSON.
pub fn write_report(path: &Path, file: &ReportFile) -> Result<(), String> {
    let text = serde_json::to_string_pretty(file).map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}
