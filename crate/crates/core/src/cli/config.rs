use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chains::Strategy;
use crate::detector::{FitKind, Grid, ModelFamily, Observable, ScanAxis};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Xxz,
    Xy,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: Option<ModelKind>,
    pub h: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub axis: Option<ScanAxis>,
    pub start: Option<f64>,
    pub end: Option<f64>,
    pub step: Option<f64>,
    #[serde(default)]
    pub kt: Vec<f64>,
    /// `ed:<L>` or `ff`.
    pub provider: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectSection {
    pub observable: Option<String>,
    pub order: Option<usize>,
    pub window: Option<[f64; 2]>,
    pub fit: Option<FitKind>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

/// A complete, serializable description of a run. Presets, config files and
/// command-line flags are layered onto each other with [`RunConfig::merge`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub detect: DetectSection,
    #[serde(default)]
    pub output: OutputSection,
}

pub const PRESETS: [&str; 5] = ["xxz-h12", "xy-gamma0", "xy-gamma0.5", "xy-gamma1", "xy-lambda1.5"];

fn kts(values: &[f64]) -> Vec<f64> {
    values.to_vec()
}

fn hundredths(from: u32, to: u32) -> Vec<f64> {
    (from..=to).map(|i| i as f64 / 100.0).collect()
}

impl RunConfig {
    /// Built-in scenarios. Windows bracket the expected critical point.
    pub fn preset(name: &str) -> Result<Self> {
        let xy_lambda = |gamma: f64, observable: &str, order: usize| RunConfig {
            model: ModelSection { kind: Some(ModelKind::Xy), gamma: Some(gamma), ..Default::default() },
            scan: ScanSection {
                axis: Some(ScanAxis::Lambda),
                start: Some(0.0),
                end: Some(2.0),
                step: Some(0.01),
                kt: hundredths(1, 10),
                provider: Some("ff".into()),
            },
            detect: DetectSection {
                observable: Some(observable.into()),
                order: Some(order),
                window: Some([0.5, 1.5]),
                fit: Some(FitKind::Linear),
            },
            output: OutputSection::default(),
        };
        match name {
            "xxz-h12" => Ok(RunConfig {
                model: ModelSection { kind: Some(ModelKind::Xxz), h: Some(12.0), ..Default::default() },
                scan: ScanSection {
                    axis: Some(ScanAxis::Delta),
                    start: Some(1.0),
                    end: Some(6.0),
                    step: Some(0.01),
                    kt: kts(&[0.1, 0.2, 0.3, 0.4, 0.5]),
                    provider: Some("ed:12".into()),
                },
                detect: DetectSection {
                    observable: Some("Dmin".into()),
                    order: Some(1),
                    window: Some([1.0, 3.0]),
                    fit: Some(FitKind::Quadratic),
                },
                output: OutputSection::default(),
            }),
            "xy-gamma0" => Ok(xy_lambda(0.0, "Dmin", 1)),
            "xy-gamma0.5" => Ok(xy_lambda(0.5, "Fmax", 2)),
            "xy-gamma1" => Ok(xy_lambda(1.0, "Dmin", 2)),
            "xy-lambda1.5" => Ok(RunConfig {
                model: ModelSection { kind: Some(ModelKind::Xy), lambda: Some(1.5), ..Default::default() },
                scan: ScanSection {
                    axis: Some(ScanAxis::Gamma),
                    start: Some(-1.0),
                    end: Some(1.0),
                    step: Some(0.01),
                    kt: kts(&[0.05, 0.1, 0.2]),
                    provider: Some("ff".into()),
                },
                detect: DetectSection::default(),
                output: OutputSection::default(),
            }),
            _ => Err(Error::Config(format!(
                "unknown preset '{name}', available: {}",
                PRESETS.join(", ")
            ))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fields set in `other` override those in `self`; a non-empty `kt` list
    /// replaces the whole list.
    pub fn merge(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($sec:ident . $f:ident),*) => {
                $(if other.$sec.$f.is_some() { self.$sec.$f = other.$sec.$f; })*
            };
        }
        take!(
            model.kind, model.h, model.delta, model.lambda, model.gamma,
            scan.axis, scan.start, scan.end, scan.step, scan.provider,
            detect.observable, detect.order, detect.window, detect.fit,
            output.path
        );
        if !other.scan.kt.is_empty() {
            self.scan.kt = other.scan.kt;
        }
        self
    }

    fn kind(&self) -> Result<ModelKind> {
        self.model
            .kind
            .ok_or_else(|| Error::Config("no model given (use --model xxz|xy or a preset)".into()))
    }

    fn axis(&self) -> Result<ScanAxis> {
        if let Some(a) = self.scan.axis {
            return Ok(a);
        }
        match self.kind()? {
            ModelKind::Xxz => Ok(ScanAxis::Delta),
            ModelKind::Xy => Err(Error::Config(
                "XY scans need an axis (use --lambda-range or --gamma-range)".into(),
            )),
        }
    }

    fn need(v: Option<f64>, what: &str) -> Result<f64> {
        v.ok_or_else(|| Error::Config(format!("missing {what}")))
    }

    pub fn family(&self) -> Result<ModelFamily> {
        match (self.kind()?, self.axis()?) {
            (ModelKind::Xxz, ScanAxis::Delta) => {
                Ok(ModelFamily::XxzDelta { h: Self::need(self.model.h, "field (--h)")? })
            }
            (ModelKind::Xy, ScanAxis::Lambda) => {
                Ok(ModelFamily::XyLambda { gamma: Self::need(self.model.gamma, "anisotropy (--gamma)")? })
            }
            (ModelKind::Xy, ScanAxis::Gamma) => {
                Ok(ModelFamily::XyGamma { lambda: Self::need(self.model.lambda, "coupling (--lambda)")? })
            }
            (k, a) => Err(Error::Config(format!("cannot scan {a} for model {k:?}"))),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let start = Self::need(self.scan.start, "scan range start")?;
        let end = Self::need(self.scan.end, "scan range end")?;
        Grid::from_range(start, end, self.scan.step.unwrap_or(0.01))
    }

    pub fn strategy(&self) -> Result<Strategy> {
        match &self.scan.provider {
            Some(p) => p.parse(),
            None => match self.kind()? {
                ModelKind::Xy => Ok(Strategy::FreeFermion),
                ModelKind::Xxz => "ed:12".parse(),
            },
        }
    }

    pub fn temperatures(&self) -> Result<Vec<f64>> {
        if self.scan.kt.is_empty() {
            return Err(Error::Config("no temperatures given (use --kt)".into()));
        }
        if let Some(bad) = self.scan.kt.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::Config(format!("temperatures must be finite and >= 0, got {bad}")));
        }
        Ok(self.scan.kt.clone())
    }

    pub fn observable(&self) -> Result<Observable> {
        self.detect.observable.as_deref().unwrap_or("Dmin").parse()
    }

    pub fn order(&self) -> Result<usize> {
        match self.detect.order.unwrap_or(1) {
            o @ (1 | 2) => Ok(o),
            o => Err(Error::Config(format!("derivative order must be 1 or 2, got {o}"))),
        }
    }

    /// Extremum window, defaulting to the full scan range.
    pub fn window(&self) -> Result<(f64, f64)> {
        match self.detect.window {
            Some([a, b]) => Ok((a, b)),
            None => {
                let g = self.grid()?;
                Ok((g.start(), g.value(g.len() - 1)))
            }
        }
    }

    pub fn fit(&self) -> FitKind {
        self.detect.fit.unwrap_or(FitKind::Linear)
    }

    /// Checks everything a scan needs.
    pub fn validate_scan(&self) -> Result<()> {
        self.family()?;
        self.grid()?;
        self.strategy()?;
        self.temperatures()?;
        Ok(())
    }
}
