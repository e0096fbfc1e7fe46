//! Line-delimited JSON command traces.
//!
//! One object per line, e.g.
//!
//! ```text
//! {"op":"STORE","feature":3,"location":12,"class":7}
//! {"op":"INFER","feature":3,"location":12}
//! {"op":"PREDICT_FEATURE","location":12,"padding":1}
//! {"op":"STORE","feature":[3,9,40],"location":0,"class":1}
//! {"op":"STORE","feature":"0110","location":0,"class":1}
//! ```
//!
//! Sections are given as hot-bit indices. A k-hot feature may be a list of
//! indices or a bit string. Omitted sections are all-zero.

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::oracle::{AbstractCommand, Triplet};
use crate::preprocess::{CommandKind, MacroCommand};
use crate::sdr::{Sdr, SdrLayout};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureSpec {
    Index(usize),
    Indices(Vec<usize>),
    Bits(String),
}

impl FeatureSpec {
    /// Hot indices, ascending and deduplicated.
    pub fn indices(&self) -> Result<Vec<usize>, String> {
        let mut v = match self {
            FeatureSpec::Index(i) => vec![*i],
            FeatureSpec::Indices(v) => v.clone(),
            FeatureSpec::Bits(s) => {
                let mut v = Vec::new();
                for (i, ch) in s.chars().enumerate() {
                    match ch {
                        '1' => v.push(i),
                        '0' => {}
                        _ => return Err(format!("invalid feature bit {ch:?} at {i}")),
                    }
                }
                v
            }
        };
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        match indices {
            [i] => FeatureSpec::Index(*i),
            _ => FeatureSpec::Indices(indices.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub op: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature: Option<FeatureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<usize>,
}

impl TraceRecord {
    pub fn op(op: CommandKind) -> Self {
        Self {
            op,
            feature: None,
            location: None,
            class: None,
            padding: None,
        }
    }

    pub fn store(feature: usize, location: usize, class: usize) -> Self {
        Self {
            feature: Some(FeatureSpec::Index(feature)),
            location: Some(location),
            class: Some(class),
            ..Self::op(CommandKind::Store)
        }
    }

    pub fn delete(feature: usize, location: usize, class: usize) -> Self {
        Self {
            op: CommandKind::Delete,
            ..Self::store(feature, location, class)
        }
    }

    pub fn infer(feature: usize, location: usize) -> Self {
        Self {
            feature: Some(FeatureSpec::Index(feature)),
            location: Some(location),
            ..Self::op(CommandKind::Infer)
        }
    }

    pub fn predict_feature(location: usize, padding: usize) -> Self {
        Self {
            location: Some(location),
            padding: Some(padding),
            ..Self::op(CommandKind::PredictFeature)
        }
    }

    pub fn predict_location(feature: usize) -> Self {
        Self {
            feature: Some(FeatureSpec::Index(feature)),
            ..Self::op(CommandKind::PredictLocation)
        }
    }

    fn feature_indices(&self) -> Result<Vec<usize>, String> {
        self.feature.as_ref().map_or(Ok(Vec::new()), FeatureSpec::indices)
    }

    /// Device command for this record. Shape checks are left to the device;
    /// only out-of-range indices fail here.
    pub fn to_command(&self, layout: &SdrLayout, default_padding: usize) -> Result<MacroCommand, String> {
        let input = match self.op {
            CommandKind::Clear | CommandKind::Reset => Sdr::zeros(layout),
            _ => Sdr::from_indices(&self.feature_indices()?, self.location, self.class, layout)
                .map_err(|e| e.to_string())?,
        };
        let padding = match self.op {
            CommandKind::PredictFeature => self.padding.unwrap_or(default_padding),
            _ => self.padding.unwrap_or(0),
        };
        Ok(MacroCommand {
            kind: self.op,
            input,
            padding,
        })
    }

    /// Set-level command for the oracle. Only meaningful for records the
    /// device accepted.
    pub fn to_abstract(&self, default_padding: usize) -> Result<AbstractCommand, String> {
        let need = |v: Option<usize>, what: &str| v.ok_or_else(|| format!("{} needs a {what}", self.op));
        Ok(match self.op {
            CommandKind::Clear => AbstractCommand::Clear,
            CommandKind::Reset => AbstractCommand::Reset,
            CommandKind::Store | CommandKind::Delete => {
                let t = Triplet::new(
                    self.feature_indices()?,
                    need(self.location, "location")?,
                    need(self.class, "class")?,
                );
                if self.op == CommandKind::Store {
                    AbstractCommand::Store(t)
                } else {
                    AbstractCommand::Delete(t)
                }
            }
            CommandKind::Infer => AbstractCommand::Infer {
                feature: self.feature_indices()?,
                location: need(self.location, "location")?,
            },
            CommandKind::PredictFeature => AbstractCommand::PredictFeature {
                location: need(self.location, "location")?,
                padding: self.padding.unwrap_or(default_padding),
            },
            CommandKind::PredictLocation => AbstractCommand::PredictLocation {
                feature: self.feature_indices()?,
            },
        })
    }
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| HarnessError::Parse {
            line: n + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_trace(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("trace records serialize"));
        out.push('\n');
    }
    out
}
