//! One-parameter sweeps of full design/propagate/score pipelines.
//!
//! Rows are evaluated in parallel and gathered in axis order, so the table
//! is identical regardless of thread scheduling.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{protocol3_fidelity_closed, MetricsReport};
use crate::protocols::ProtocolKind;
use crate::pulse::fmt_float;
use crate::run::{simulate_metrics, RunSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Epsilon,
    Delta,
    TF,
    DeltaP,
    Delta3,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Delta => "delta",
            SweepAxis::TF => "t_f",
            SweepAxis::DeltaP => "delta_p",
            SweepAxis::Delta3 => "delta_3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "epsilon" => Some(SweepAxis::Epsilon),
            "delta" => Some(SweepAxis::Delta),
            "t_f" | "tf" | "tf_us" => Some(SweepAxis::TF),
            "delta_p" | "detuning_p" => Some(SweepAxis::DeltaP),
            "delta_3" | "detuning_3" => Some(SweepAxis::Delta3),
            _ => None,
        }
    }

    /// `template` with this axis set to `value`.
    pub fn apply(self, template: &RunSpec, value: f64) -> RunSpec {
        let mut spec = *template;
        match self {
            SweepAxis::Epsilon => spec.protocol.epsilon = value,
            SweepAxis::Delta => spec.protocol.delta = Some(value),
            SweepAxis::TF => {
                spec.protocol.t_f = value;
                // step count follows the duration unless pinned
                if template.n_steps.is_none() {
                    spec.sample_stride = None;
                }
            }
            SweepAxis::DeltaP => spec.delta_p = value,
            SweepAxis::Delta3 => spec.delta_3 = value,
        }
        spec
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// `cos(eps)`: single-mode fidelity reference.
    pub cos_epsilon: f64,
    /// Multi-mode closed-form fidelity for Protocol-1 pulses started in `|1>`.
    pub protocol3_closed: f64,
    pub metrics: Option<MetricsReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub template: RunSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// Named metric column; `None` entries for failed rows.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = MetricsReport::COLUMNS.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r.metrics.map(|m| m.values()[idx]))
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(
            out,
            "{},cos_epsilon,protocol3_fidelity_closed",
            self.axis.name()
        )?;
        for c in MetricsReport::COLUMNS {
            write!(out, ",{c}")?;
        }
        writeln!(out, ",error")?;
        for row in &self.rows {
            write!(
                out,
                "{},{},{}",
                fmt_float(row.value),
                fmt_float(row.cos_epsilon),
                fmt_float(row.protocol3_closed)
            )?;
            match &row.metrics {
                Some(m) => {
                    for v in m.values() {
                        write!(out, ",{}", fmt_float(v))?;
                    }
                }
                None => {
                    for _ in MetricsReport::COLUMNS {
                        write!(out, ",nan")?;
                    }
                }
            }
            match &row.error {
                Some(e) => writeln!(out, ",\"{}\"", e.replace('"', "'"))?,
                None => writeln!(out, ",")?,
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// Runs `template` once per value of `axis`.
///
/// Fails up front if the axis does not apply to the protocol or the values
/// are not strictly increasing; per-row failures are recorded in the row.
pub fn sweep(template: &RunSpec, axis: SweepAxis, values: &[f64]) -> Result<SweepTable> {
    if axis == SweepAxis::Delta && template.protocol.kind != ProtocolKind::Two {
        return Err(Error::InvalidParameter(
            "delta sweeps require protocol 2".into(),
        ));
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep needs at least one value".into(),
        ));
    }
    if values
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidParameter(
            "sweep values must be strictly increasing".into(),
        ));
    }
    let rows = values
        .par_iter()
        .map(|&value| {
            let spec = axis.apply(template, value);
            let eps = spec.protocol.epsilon;
            let (metrics, error) = match simulate_metrics(&spec) {
                Ok(m) => (Some(m.report()), None),
                Err(e) => (None, Some(e.to_string())),
            };
            SweepRow {
                value,
                cos_epsilon: eps.cos(),
                protocol3_closed: protocol3_fidelity_closed(eps),
                metrics,
                error,
            }
        })
        .collect();
    Ok(SweepTable {
        axis,
        template: *template,
        rows,
    })
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    stop
                } else {
                    start + (stop - start) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
