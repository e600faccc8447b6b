//! TOML spec documents for platforms, technologies and thresholds.
//!
//! ```toml
//! [platform]
//! t2_seconds = 5e-4
//! sensitivity = 1.0
//!
//! [[technology]]            # or a single [technology] table
//! name = "electrical-pulse-generator"
//! sigma_a = 1e-2
//! sigma_t_seconds = 100e-12
//! bw_low_hz = 0.0
//! bw_high_hz = 1e9
//! notes = "optional free text"
//!
//! [threshold]
//! epsilon = 1e-5
//! ```
//!
//! Every section is optional; unknown sections or keys are rejected.
//! Diagnostics carry the dotted path of the offending field.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use toml::{Table, Value};

use crate::budget::{PlatformSpec, TechnologySpec, Threshold};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecErrorKind {
    Parse,
    UnknownField,
    MissingField,
    InvalidType,
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub kind: SpecErrorKind,
    /// Dotted path such as `technology[1].sigma_a`; empty for the document root.
    pub path: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for SpecError {}

impl SpecError {
    fn new(kind: SpecErrorKind, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind,
            path: path.into(),
            message: message.into(),
        }
    }

    fn invariant(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(SpecErrorKind::Invariant, path, message)
    }
}

/// Validated records from one document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecDocument {
    pub platform: Option<PlatformSpec>,
    pub technologies: Vec<TechnologySpec>,
    pub threshold: Option<Threshold>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlatform {
    t2_seconds: f64,
    sensitivity: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTechnology {
    name: String,
    sigma_a: f64,
    sigma_t_seconds: f64,
    bw_low_hz: f64,
    bw_high_hz: f64,
    #[serde(default)]
    notes: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThreshold {
    epsilon: f64,
}

fn decode<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, SpecError> {
    serde_path_to_error::deserialize::<_, T>(value).map_err(|err| {
        let inner = err.path().to_string();
        let path = if inner == "." || inner.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}.{inner}")
        };
        let message = err.into_inner().message().trim_end().to_string();
        let kind = if message.starts_with("unknown field") {
            SpecErrorKind::UnknownField
        } else if message.starts_with("missing field") {
            SpecErrorKind::MissingField
        } else {
            SpecErrorKind::InvalidType
        };
        SpecError::new(kind, path, message)
    })
}

fn check(ok: bool, path: &str, message: &str) -> Result<(), SpecError> {
    if ok {
        Ok(())
    } else {
        Err(SpecError::invariant(path, message))
    }
}

fn platform_from(raw: RawPlatform) -> Result<PlatformSpec, SpecError> {
    check(
        raw.t2_seconds.is_finite() && raw.t2_seconds > 0.0,
        "platform.t2_seconds",
        "must be finite and > 0",
    )?;
    check(
        raw.sensitivity.is_finite() && raw.sensitivity >= 0.0,
        "platform.sensitivity",
        "must be finite and >= 0",
    )?;
    Ok(PlatformSpec {
        t2: raw.t2_seconds,
        sensitivity: raw.sensitivity,
    })
}

fn technology_from(raw: RawTechnology, prefix: &str) -> Result<TechnologySpec, SpecError> {
    let at = |field: &str| format!("{prefix}.{field}");
    check(
        !raw.name.trim().is_empty(),
        &at("name"),
        "must not be empty",
    )?;
    check(
        raw.sigma_a.is_finite() && raw.sigma_a >= 0.0,
        &at("sigma_a"),
        "must be finite and >= 0",
    )?;
    check(
        raw.sigma_t_seconds.is_finite() && raw.sigma_t_seconds >= 0.0,
        &at("sigma_t_seconds"),
        "must be finite and >= 0",
    )?;
    check(
        raw.bw_low_hz.is_finite() && raw.bw_low_hz >= 0.0,
        &at("bw_low_hz"),
        "must be finite and >= 0",
    )?;
    check(
        raw.bw_high_hz.is_finite() && raw.bw_high_hz > raw.bw_low_hz,
        &at("bw_high_hz"),
        "must be finite and exceed bw_low_hz",
    )?;
    Ok(TechnologySpec {
        name: raw.name,
        sigma_a: raw.sigma_a,
        sigma_t: raw.sigma_t_seconds,
        bw_low: raw.bw_low_hz,
        bw_high: raw.bw_high_hz,
        notes: raw.notes,
    })
}

/// Parses and validates a spec document.
pub fn load_specs(source: &str) -> Result<SpecDocument, SpecError> {
    let table: Table = source.parse().map_err(|e: toml::de::Error| {
        SpecError::new(SpecErrorKind::Parse, "", e.message().to_string())
    })?;

    let mut doc = SpecDocument::default();
    for (key, value) in table {
        match key.as_str() {
            "platform" => {
                doc.platform = Some(platform_from(decode(value, "platform")?)?);
            }
            "threshold" => {
                let raw: RawThreshold = decode(value, "threshold")?;
                let eps = Threshold::new(raw.epsilon)
                    .map_err(|_| SpecError::invariant("threshold.epsilon", "must lie in (0, 1)"))?;
                doc.threshold = Some(eps);
            }
            "technology" => match value {
                Value::Array(items) => {
                    for (i, item) in items.into_iter().enumerate() {
                        let prefix = format!("technology[{i}]");
                        let raw = decode(item, &prefix)?;
                        doc.technologies.push(technology_from(raw, &prefix)?);
                    }
                }
                other => {
                    let raw = decode(other, "technology")?;
                    doc.technologies.push(technology_from(raw, "technology")?);
                }
            },
            other => {
                return Err(SpecError::new(
                    SpecErrorKind::UnknownField,
                    other,
                    format!("unknown section `{other}`, expected one of `platform`, `technology`, `threshold`"),
                ))
            }
        }
    }
    for (i, t) in doc.technologies.iter().enumerate() {
        if doc.technologies[..i].iter().any(|u| u.name == t.name) {
            return Err(SpecError::invariant(
                format!("technology[{i}].name"),
                format!("duplicate technology name `{}`", t.name),
            ));
        }
    }
    Ok(doc)
}

/// Renders technologies as a document that [`load_specs`] reads back.
pub fn render_technologies(techs: &[TechnologySpec]) -> String {
    let mut out = String::new();
    for t in techs {
        let mut table = Table::new();
        table.insert("name".into(), Value::String(t.name.clone()));
        table.insert("sigma_a".into(), Value::Float(t.sigma_a));
        table.insert("sigma_t_seconds".into(), Value::Float(t.sigma_t));
        table.insert("bw_low_hz".into(), Value::Float(t.bw_low));
        table.insert("bw_high_hz".into(), Value::Float(t.bw_high));
        if !t.notes.is_empty() {
            table.insert("notes".into(), Value::String(t.notes.clone()));
        }
        out.push_str("[[technology]]\n");
        out.push_str(&toml::to_string(&table).expect("plain table serializes"));
        out.push('\n');
    }
    out
}

/// Parses a comma-separated list of numbers such as `1e-4,1e-3,1e-2`.
pub fn parse_value_list(input: &str) -> Result<Vec<f64>, SpecError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(SpecError::new(SpecErrorKind::Parse, "", "empty value list"));
    }
    trimmed
        .split(',')
        .enumerate()
        .map(|(i, item)| {
            let item = item.trim();
            let v: f64 = item.parse().map_err(|_| {
                SpecError::new(
                    SpecErrorKind::Parse,
                    format!("[{i}]"),
                    format!("`{item}` is not a number"),
                )
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(SpecError::invariant(
                    format!("[{i}]"),
                    "value must be finite",
                ))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::{builtin_catalog, ELECTRICAL_PULSE_GENERATOR};

    const ELECTRICAL: &str = r#"
[technology]
name = "electrical-pulse-generator"
sigma_a = 1e-2
sigma_t_seconds = 100e-12
bw_low_hz = 0.0
bw_high_hz = 1e9
notes = "best available GHz-range electrical pulse generators: dV/V ~ 1e-2, pulse-length jitter dT ~ 100 ps"
"#;

    #[test]
    fn reproduces_builtin_electrical_entry() {
        let doc = load_specs(ELECTRICAL).unwrap();
        let builtin = builtin_catalog()
            .into_iter()
            .find(|t| t.name == ELECTRICAL_PULSE_GENERATOR)
            .unwrap();
        assert_eq!(doc.technologies, vec![builtin]);
    }

    #[test]
    fn full_document() {
        let src = r#"
[platform]
t2_seconds = 5e-4
sensitivity = 1

[threshold]
epsilon = 1e-5

[[technology]]
name = "a"
sigma_a = 0
sigma_t_seconds = 0
bw_low_hz = 0
bw_high_hz = 1e9

[[technology]]
name = "b"
sigma_a = 1E-3
sigma_t_seconds = 2.5e-13
bw_low_hz = 10
bw_high_hz = 5e9
"#;
        let doc = load_specs(src).unwrap();
        assert_eq!(doc.platform, Some(PlatformSpec::si_spin()));
        assert_eq!(doc.threshold.unwrap().epsilon(), 1e-5);
        assert_eq!(doc.technologies.len(), 2);
        assert_eq!(doc.technologies[1].sigma_t, 2.5e-13);
    }

    #[test]
    fn negative_sigma_names_the_field() {
        let src = ELECTRICAL.replace("sigma_a = 1e-2", "sigma_a = -1");
        let err = load_specs(&src).unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::Invariant);
        assert_eq!(err.path, "technology.sigma_a");
        assert!(err.to_string().contains("sigma_a"));
    }

    #[test]
    fn missing_t2_is_missing_field() {
        let err = load_specs("[platform]\nsensitivity = 1.0\n").unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::MissingField);
        assert_eq!(err.path, "platform");
        assert!(err.message.contains("t2_seconds"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err =
            load_specs("[platform]\nt2_seconds = 1.0\nsensitivity = 1.0\ncolor = 3\n").unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::UnknownField);
        assert!(err.message.contains("color"));

        let err = load_specs("[extras]\nx = 1\n").unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::UnknownField);
        assert_eq!(err.path, "extras");
    }

    #[test]
    fn wrong_type_has_path() {
        let err = load_specs("[threshold]\nepsilon = \"small\"\n").unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::InvalidType);
        assert_eq!(err.path, "threshold.epsilon");
    }

    #[test]
    fn array_paths_are_indexed() {
        let src = "[[technology]]\nname='a'\nsigma_a=0\nsigma_t_seconds=0\nbw_low_hz=0\nbw_high_hz=1\n\
                   [[technology]]\nname='b'\nsigma_a=0\nsigma_t_seconds=0\nbw_low_hz=5\nbw_high_hz=1\n";
        let err = load_specs(src).unwrap_err();
        assert_eq!(err.path, "technology[1].bw_high_hz");
    }

    #[test]
    fn duplicate_names_rejected() {
        let one =
            "[[technology]]\nname='a'\nsigma_a=0\nsigma_t_seconds=0\nbw_low_hz=0\nbw_high_hz=1\n";
        let err = load_specs(&format!("{one}{one}")).unwrap_err();
        assert_eq!(err.path, "technology[1].name");
    }

    #[test]
    fn threshold_out_of_range() {
        let err = load_specs("[threshold]\nepsilon = 1.5\n").unwrap_err();
        assert_eq!(err.path, "threshold.epsilon");
    }

    #[test]
    fn syntax_error_is_parse_error() {
        let err = load_specs("[platform\n").unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::Parse);
    }

    #[test]
    fn rendered_catalog_reads_back() {
        let cat = builtin_catalog();
        let doc = load_specs(&render_technologies(&cat)).unwrap();
        assert_eq!(doc.technologies, cat);
    }

    #[test]
    fn value_lists() {
        assert_eq!(
            parse_value_list("1e-4, 1e-3,1e-2").unwrap(),
            vec![1e-4, 1e-3, 1e-2]
        );
        assert_eq!(parse_value_list("0.5").unwrap(), vec![0.5]);
        assert!(parse_value_list("").is_err());
        assert_eq!(parse_value_list("1,x").unwrap_err().path, "[1]");
        assert!(parse_value_list("1,inf").is_err());
        assert!(parse_value_list("1,,2").is_err());
    }
}
