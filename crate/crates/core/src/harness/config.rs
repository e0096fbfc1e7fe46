use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::preprocess::PaddingMode;
use crate::sdr::SdrLayout;
use crate::system::NertcamConfig;

/// Device configuration file (TOML):
///
/// ```toml
/// layout = [128, 25, 10]   # feature, location, class bits
/// capacity = 1024
/// grid = [5, 5]            # optional; omit for linear padding
/// khot_features = false
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub layout: [usize; 3],
    pub capacity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    #[serde(default)]
    pub khot_features: bool,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn from_config(config: &NertcamConfig) -> Self {
        let l = config.layout;
        Self {
            layout: [l.feature_bits(), l.location_bits(), l.class_bits()],
            capacity: config.capacity,
            grid: match config.padding_mode {
                PaddingMode::Linear1D => None,
                PaddingMode::Grid2D { rows, cols } => Some([rows, cols]),
            },
            khot_features: config.khot_features,
        }
    }
}

/// Command-line values that win over the config file.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub layout: Option<[usize; 3]>,
    pub entries: Option<usize>,
    pub grid: Option<[usize; 2]>,
    pub khot_features: Option<bool>,
}

/// Merge file and overrides; without a file, defaults to the 128/25/10
/// layout with 1024 entries.
pub fn resolve_config(file: Option<ConfigFile>, overrides: &ConfigOverrides) -> Result<NertcamConfig, HarnessError> {
    let mut f = file.unwrap_or(ConfigFile {
        layout: [128, 25, 10],
        capacity: 1024,
        grid: None,
        khot_features: false,
    });
    if let Some(l) = overrides.layout {
        f.layout = l;
    }
    if let Some(n) = overrides.entries {
        f.capacity = n;
    }
    if overrides.grid.is_some() {
        f.grid = overrides.grid;
    }
    if let Some(k) = overrides.khot_features {
        f.khot_features = k;
    }
    let [fb, lb, cb] = f.layout;
    let layout = SdrLayout::new(fb, lb, cb).map_err(|e| HarnessError::Config(e.to_string()))?;
    let config = NertcamConfig {
        layout,
        capacity: f.capacity,
        padding_mode: f
            .grid
            .map_or(PaddingMode::Linear1D, |[rows, cols]| PaddingMode::Grid2D { rows, cols }),
        khot_features: f.khot_features,
    };
    config.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(config)
}
