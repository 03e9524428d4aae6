//! On-disk experiment configuration (TOML).
//!
//! ```toml
//! [input_a]
//! squeezing_db = -4.6        # ≤ 0
//! antisqueezing_db = 22.3    # ≥ |squeezing_db|
//! theta_sq_deg = 4.0
//!
//! [input_b]
//! squeezing_db = -4.5
//! antisqueezing_db = 22.2
//! theta_sq_deg = 4.0
//!
//! [beamsplitter]
//! transmittance = 0.49       # power transmittance, [0, 1]
//! relative_phase_deg = 90.0
//! visibility = 0.98          # [0, 1]
//!
//! [combiner]                 # optional, defaults shown
//! gain = 1.0
//! sign = "difference"        # or "sum"
//!
//! [metadata]                 # optional, echoed into output headers only
//! detection_frequency_mhz = 17.5
//! resolution_bandwidth_khz = 300.0
//! video_bandwidth_hz = 30.0
//! pulse_energy_pj = 61.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::experiment::{CombineSign, CombinerSpec, ExperimentConfig, KerrInputSpec};

/// Failure to load a configuration; the message names the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    pub squeezing_db: f64,
    pub antisqueezing_db: f64,
    pub theta_sq_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamsplitterSection {
    pub transmittance: f64,
    pub relative_phase_deg: f64,
    pub visibility: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignName {
    Sum,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinerSection {
    #[serde(default = "unit_gain")]
    pub gain: f64,
    #[serde(default = "default_sign")]
    pub sign: SignName,
}

fn unit_gain() -> f64 {
    1.0
}

fn default_sign() -> SignName {
    SignName::Difference
}

impl Default for CombinerSection {
    fn default() -> Self {
        Self {
            gain: unit_gain(),
            sign: default_sign(),
        }
    }
}

/// Measurement settings carried for provenance; never used in computation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_frequency_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_bandwidth_khz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub video_bandwidth_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse_energy_pj: Option<f64>,
}

impl MetadataSection {
    pub fn entries(&self) -> Vec<(String, String)> {
        [
            ("detection_frequency_mhz", self.detection_frequency_mhz),
            ("resolution_bandwidth_khz", self.resolution_bandwidth_khz),
            ("video_bandwidth_hz", self.video_bandwidth_hz),
            ("pulse_energy_pj", self.pulse_energy_pj),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v.to_string())))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub input_a: InputSection,
    pub input_b: InputSection,
    pub beamsplitter: BeamsplitterSection,
    #[serde(default)]
    pub combiner: CombinerSection,
    #[serde(default)]
    pub metadata: MetadataSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ConfigFile = toml::from_str(text)
            .map_err(|e| ConfigError(format!("invalid config: {}", e.message())))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config sections always serialize")
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Field-by-field checks, so errors can say which entry is wrong.
    fn check(&self) -> Result<(), ConfigError> {
        for (name, input) in [("input_a", &self.input_a), ("input_b", &self.input_b)] {
            let fields = [
                ("squeezing_db", input.squeezing_db),
                ("antisqueezing_db", input.antisqueezing_db),
                ("theta_sq_deg", input.theta_sq_deg),
            ];
            for (field, v) in fields {
                if !v.is_finite() {
                    return Err(field_error(name, field, "must be finite"));
                }
            }
            if input.squeezing_db > 0.0 {
                return Err(field_error(name, "squeezing_db", "must be ≤ 0"));
            }
            if input.antisqueezing_db < input.squeezing_db.abs() {
                return Err(field_error(
                    name,
                    "antisqueezing_db",
                    "must be ≥ |squeezing_db| (uncertainty bound)",
                ));
            }
        }
        let bs = &self.beamsplitter;
        if !(0.0..=1.0).contains(&bs.transmittance) {
            return Err(field_error(
                "beamsplitter",
                "transmittance",
                "must lie in [0, 1]",
            ));
        }
        if !(0.0..=1.0).contains(&bs.visibility) {
            return Err(field_error(
                "beamsplitter",
                "visibility",
                "must lie in [0, 1]",
            ));
        }
        if !bs.relative_phase_deg.is_finite() {
            return Err(field_error(
                "beamsplitter",
                "relative_phase_deg",
                "must be finite",
            ));
        }
        if !self.combiner.gain.is_finite() {
            return Err(field_error("combiner", "gain", "must be finite"));
        }
        self.experiment()
            .validate()
            .map_err(|e| ConfigError(format!("invalid config: {e}")))
    }

    pub fn experiment(&self) -> ExperimentConfig {
        let input = |s: &InputSection| KerrInputSpec {
            squeezing_db: s.squeezing_db,
            antisqueezing_db: s.antisqueezing_db,
            theta_sq: s.theta_sq_deg.to_radians(),
        };
        ExperimentConfig {
            input_a: input(&self.input_a),
            input_b: input(&self.input_b),
            bs_transmittance: self.beamsplitter.transmittance,
            relative_phase: self.beamsplitter.relative_phase_deg.to_radians(),
            visibility: self.beamsplitter.visibility,
            combiner: CombinerSpec {
                gain: self.combiner.gain,
                sign: match self.combiner.sign {
                    SignName::Sum => CombineSign::Sum,
                    SignName::Difference => CombineSign::Difference,
                },
            },
        }
    }

    /// The measured setup together with its measurement settings.
    pub fn measured() -> Self {
        Self {
            input_a: InputSection {
                squeezing_db: -4.6,
                antisqueezing_db: 22.3,
                theta_sq_deg: 4.0,
            },
            input_b: InputSection {
                squeezing_db: -4.5,
                antisqueezing_db: 22.2,
                theta_sq_deg: 4.0,
            },
            beamsplitter: BeamsplitterSection {
                transmittance: 0.49,
                relative_phase_deg: 90.0,
                visibility: 0.98,
            },
            combiner: CombinerSection::default(),
            metadata: MetadataSection {
                detection_frequency_mhz: Some(17.5),
                resolution_bandwidth_khz: Some(300.0),
                video_bandwidth_hz: Some(30.0),
                pulse_energy_pj: Some(61.0),
            },
        }
    }
}

fn field_error(section: &str, field: &str, what: &str) -> ConfigError {
    ConfigError(format!("invalid config: field `{section}.{field}` {what}"))
}
