//! Declarative parameter sweeps over the Cartesian product of `J`, `B1` and
//! `B2` values, evaluated on a bounded worker pool with ordered output.

use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use super::record::{compute_record, OutputFlags, PointSpec, SweepRecord};
use crate::error::{Error, Result};
use crate::measurement::SideMeasurement;
use crate::spin::SpinValue;

/// A list of values given explicitly or as an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    List(Vec<f64>),
    Range(RangeSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl ValueSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ValueSpec::List(v) => v.clone(),
            ValueSpec::Range(r) if r.count == 1 => vec![r.start],
            ValueSpec::Range(r) => {
                let step = (r.stop - r.start) / (r.count - 1) as f64;
                (0..r.count)
                    .map(|i| if i + 1 == r.count { r.stop } else { r.start + step * i as f64 })
                    .collect()
            }
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("config field `{field}`: {msg}")));
        match self {
            ValueSpec::List(v) if v.is_empty() => bad("list is empty".into()),
            ValueSpec::Range(r) if r.count == 0 => bad("count must be at least 1".into()),
            ValueSpec::Range(r) if !(r.start.is_finite() && r.stop.is_finite()) => {
                bad("start and stop must be finite".into())
            }
            ValueSpec::List(v) if v.iter().any(|x| !x.is_finite()) => bad("values must be finite".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub spin_a: SpinValue,
    pub spin_b: SpinValue,
    pub j_values: ValueSpec,
    pub b1_values: ValueSpec,
    pub b2_values: ValueSpec,
    pub scheme: SchemeConfig,
    #[serde(default = "default_kbt")]
    pub kbt: f64,
    #[serde(default)]
    pub outputs: OutputFlags,
}

fn default_kbt() -> f64 {
    1.0
}

impl SweepConfig {
    /// Parses and validates a JSON config; error messages name the field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: SweepConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            Error::InvalidInput(format!("config field `{field}`: {}", e.inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reading config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        self.j_values.validate("j_values")?;
        self.b1_values.validate("b1_values")?;
        self.b2_values.validate("b2_values")?;
        if !(self.kbt > 0.0 && self.kbt.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "config field `kbt`: must be positive and finite, got {}",
                self.kbt
            )));
        }
        self.measurements().map(|_| ())
    }

    fn measurements(&self) -> Result<(SideMeasurement, SideMeasurement)> {
        let parse = |s: &str, field: &str| {
            s.parse::<SideMeasurement>()
                .map_err(|e| Error::InvalidInput(format!("config field `{field}`: {e}")))
        };
        Ok((parse(&self.scheme.a, "scheme.a")?, parse(&self.scheme.b, "scheme.b")?))
    }

    /// Grid points with `J` outermost, then `B1`, then `B2`.
    pub fn points(&self) -> Result<Vec<PointSpec>> {
        let (meas_a, meas_b) = self.measurements()?;
        let (js, b1s, b2s) = (self.j_values.values(), self.b1_values.values(), self.b2_values.values());
        let mut out = Vec::with_capacity(js.len() * b1s.len() * b2s.len());
        for &j in &js {
            for &b1 in &b1s {
                for &b2 in &b2s {
                    out.push(PointSpec {
                        spin_a: self.spin_a,
                        spin_b: self.spin_b,
                        j,
                        b1,
                        b2,
                        kbt: self.kbt,
                        meas_a,
                        meas_b,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Evaluates every grid point on a pool of `threads` workers (machine
/// parallelism when `None`). Records come back in grid order.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepRecord>> {
    let points = cfg.points()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::InvalidInput("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("building worker pool: {e}")))?;
    let flags = cfg.outputs;
    Ok(pool.install(|| points.par_iter().map(|p| compute_record(p, flags)).collect()))
}
