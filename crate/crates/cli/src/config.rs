//! Run configuration: a flat JSON object whose keys mirror the command-line
//! flags. Flags override file values; the resolved form is echoed into every
//! metrics file and can be fed back through `--config`.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use lambda_sta::protocols::{InitialState, ProtocolKind, ProtocolSpec};
use lambda_sta::run::RunSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_EPSILON: f64 = 0.2;
pub const DEFAULT_TF_US: f64 = 4.0;
/// Protocol 2 without an explicit delta.
pub const DEFAULT_DELTA: f64 = FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Mode0,
    Bare1,
}

impl From<Initial> for InitialState {
    fn from(i: Initial) -> Self {
        match i {
            Initial::Mode0 => InitialState::InvariantMode0,
            Initial::Bare1 => InitialState::Bare1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// Every key is optional; missing keys take defaults at resolution.
/// Detunings are in rad/us.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub protocol: Option<u8>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub tf_us: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub stride: Option<usize>,
    #[serde(default)]
    pub initial: Option<Initial>,
    #[serde(default)]
    pub detuning_p: Option<f64>,
    #[serde(default)]
    pub detuning_3: Option<f64>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default, skip_serializing)]
    pub out: Option<String>,
}

/// A metrics file: only its `config` member is read back.
#[derive(Deserialize)]
struct Embedded {
    config: RunConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text).map_err(|message| CliError::Config {
            path: path.to_owned(),
            message,
        })
    }

    /// Accepts a flat config object or any object carrying one under
    /// `config`, such as an emitted `metrics.json`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let nested = value
            .as_object()
            .is_some_and(|o| o.get("config").is_some_and(|c| c.is_object()));
        if nested {
            serde_json::from_str::<Embedded>(text)
                .map(|e| e.config)
                .map_err(|e| e.to_string())
        } else {
            serde_json::from_str(text).map_err(|e| e.to_string())
        }
    }

    /// `self` with every key set in `over` replaced.
    pub fn overridden_by(self, over: RunConfig) -> RunConfig {
        RunConfig {
            protocol: over.protocol.or(self.protocol),
            epsilon: over.epsilon.or(self.epsilon),
            delta: over.delta.or(self.delta),
            tf_us: over.tf_us.or(self.tf_us),
            steps: over.steps.or(self.steps),
            stride: over.stride.or(self.stride),
            initial: over.initial.or(self.initial),
            detuning_p: over.detuning_p.or(self.detuning_p),
            detuning_3: over.detuning_3.or(self.detuning_3),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let protocol = self.protocol.unwrap_or(1);
        let kind = ProtocolKind::from_number(protocol).ok_or_else(|| {
            CliError::Usage(format!("protocol must be 1, 2 or 3, got {protocol}"))
        })?;
        let delta = match kind {
            ProtocolKind::Two => Some(self.delta.unwrap_or(DEFAULT_DELTA)),
            _ => self.delta,
        };
        let initial = self.initial.unwrap_or(match kind {
            ProtocolKind::Three => Initial::Bare1,
            _ => Initial::Mode0,
        });
        let spec = ProtocolSpec {
            kind,
            epsilon: self.epsilon.unwrap_or(DEFAULT_EPSILON),
            t_f: self.tf_us.unwrap_or(DEFAULT_TF_US),
            delta,
            initial: initial.into(),
        };
        spec.validate()?;
        let run = RunSpec {
            protocol: spec,
            delta_p: self.detuning_p.unwrap_or(0.0),
            delta_3: self.detuning_3.unwrap_or(0.0),
            n_steps: self.steps,
            sample_stride: self.stride,
        };
        // checks step count and stride
        run.grid()?;
        let format = self.format.unwrap_or_default();
        Ok(Resolved {
            config: RunConfig::describe(&run, format),
            run,
            format,
        })
    }

    /// The fully populated config reproducing `run`.
    pub fn describe(run: &RunSpec, format: Format) -> RunConfig {
        let p = &run.protocol;
        RunConfig {
            protocol: Some(p.kind.number()),
            epsilon: Some(p.epsilon),
            delta: p.delta,
            tf_us: Some(p.t_f),
            steps: Some(run.steps()),
            stride: Some(run.stride()),
            initial: Some(match p.initial {
                InitialState::InvariantMode0 => Initial::Mode0,
                InitialState::Bare1 => Initial::Bare1,
            }),
            detuning_p: Some(run.delta_p),
            detuning_3: Some(run.delta_3),
            format: Some(format),
            out: None,
        }
    }
}

/// A validated configuration and the run it describes.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// Fully populated except `out`, which never affects results.
    pub config: RunConfig,
    pub run: RunSpec,
    pub format: Format,
}
