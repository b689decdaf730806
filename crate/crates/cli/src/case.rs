//! The JSON case-file format.
//!
//! A file holds one ring and a list of cases, or an array of such objects.
//! Unknown keys are rejected and errors name the JSON path and line.

use serde::{Deserialize, Serialize};

use forcing::{ForcingData, GradedRing};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub characteristic: u64,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    /// Degree of the hyperplane class; defaults to the relation degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_h: Option<i64>,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<String>,
    pub candidate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    #[serde(default, skip_serializing_if = "CaseOptions::is_empty")]
    pub options: CaseOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_element: Option<String>,
}

impl CaseOptions {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<serde_json::Value>),
    One(serde_json::Value),
}

/// A malformed file: message with JSON path and line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses a case file or a suite (array of case files).
pub fn parse_case_files(text: &str) -> Result<Vec<CaseFile>, SchemaError> {
    // A first pass over the raw text gives syntax errors with line numbers;
    // a second, typed pass gives paths. Lines of typed errors are recovered
    // from the same deserializer.
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: OneOrMany = serde_path_to_error::deserialize(de)
        .map_err(|e| SchemaError(format!("at {}: {}", e.path(), e.inner())))?;
    let (values, suite) = match raw {
        OneOrMany::Many(v) => (v, true),
        OneOrMany::One(v) => (vec![v], false),
    };
    let mut out = Vec::with_capacity(values.len());
    for (i, value) in values.into_iter().enumerate() {
        let serialized = serde_json::to_string_pretty(&value).expect("values serialize");
        let de = &mut serde_json::Deserializer::from_str(&serialized);
        let file: CaseFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let prefix = if suite { format!("[{i}].") } else { String::new() };
            let line = locate_line(text, &e);
            SchemaError(format!("at {prefix}{}{line}: {}", e.path(), e.inner()))
        })?;
        out.push(file);
    }
    Ok(out)
}

/// Best-effort line of the offending key in the original text.
fn locate_line(text: &str, e: &serde_path_to_error::Error<serde_json::Error>) -> String {
    use serde_path_to_error::Segment;
    let key = e.path().iter().rev().find_map(|s| match s {
        Segment::Map { key } => Some(key.clone()),
        _ => None,
    });
    let needle = match (key, unknown_field(e.inner())) {
        (_, Some(field)) => field,
        (Some(key), None) => key,
        (None, None) => return String::new(),
    };
    let quoted = format!("\"{needle}\"");
    text.lines()
        .position(|l| l.contains(&quoted))
        .map(|i| format!(" (line {})", i + 1))
        .unwrap_or_default()
}

fn unknown_field(e: &serde_json::Error) -> Option<String> {
    let msg = e.to_string();
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

impl CaseFile {
    /// The ring of the file; fails for a non-prime characteristic.
    pub fn ring(&self) -> forcing::Result<GradedRing> {
        let field = forcing::PrimeField::new(self.characteristic)?;
        let ring = match &self.relation {
            None => GradedRing::polynomial(field, self.variables.clone())?,
            Some(text) => {
                let rel = forcing::algebra::parse::parse_poly(text, field, &self.variables)?;
                GradedRing::hypersurface(field, self.variables.clone(), rel)?
            }
        };
        Ok(ring)
    }

    /// `deg H`: given explicitly, else the relation degree.
    pub fn deg_h(&self, ring: &GradedRing) -> Option<i64> {
        self.deg_h.or(ring.relation_degree().map(i64::from))
    }
}

impl Case {
    pub fn data(&self, ring: &GradedRing) -> forcing::Result<ForcingData> {
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        ForcingData::from_text(ring, &gens, &self.candidate, self.twist)
    }
}
