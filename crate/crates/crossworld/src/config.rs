//! JSON run configuration.
//!
//! ```json
//! {
//!   "model": { "outcome": "binary", "alpha0": -3.5, "beta5": -5.0 },
//!   "grid": { "outcome": "binary", "method": "quadrature", "base_seed": 7 },
//!   "lsem": { "alpha_a": 2.0, "theta_m": 1.0 },
//!   "run": { "n": 1000000, "seed": 1, "jobs": 8, "format": "csv" }
//! }
//! ```
//!
//! Every section is optional. Unknown keys are rejected. Inside `model` and
//! `grid` only `outcome` is required; coefficients default to 0,
//! `u_mean` to 2, `u_sd` and `y_noise_sd` to 1, and `coupling` to
//! `shared_noise`. Grid value lists not given take the study defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crossworld_core::grid::{GridMethod, GridSpec};
use crossworld_core::lsem::{LsemCoefficients, LsemModel};
use crossworld_core::model::{Coupling, ModelConfig, OutcomeKind};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    #[serde(rename = "json-lines")]
    JsonLines,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            other => Err(CliError::Usage(format!("unknown format {other:?}; expected csv or json-lines"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum OutcomeRepr {
    Binary,
    Continuous,
}

impl From<OutcomeRepr> for OutcomeKind {
    fn from(o: OutcomeRepr) -> Self {
        match o {
            OutcomeRepr::Binary => OutcomeKind::Binary,
            OutcomeRepr::Continuous => OutcomeKind::Continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
enum CouplingRepr {
    #[default]
    SharedNoise,
    IndependentRedraw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
enum MethodRepr {
    #[default]
    Quadrature,
    MonteCarlo,
}

fn two() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    outcome: OutcomeRepr,
    #[serde(default)]
    alpha0: f64,
    #[serde(default)]
    alpha1: f64,
    #[serde(default)]
    alpha2: f64,
    #[serde(default)]
    beta0: f64,
    #[serde(default)]
    beta1: f64,
    #[serde(default)]
    beta2: f64,
    #[serde(default)]
    beta3: f64,
    #[serde(default)]
    beta4: f64,
    #[serde(default)]
    beta5: f64,
    #[serde(default = "two")]
    u_mean: f64,
    #[serde(default = "one")]
    u_sd: f64,
    #[serde(default = "one")]
    y_noise_sd: f64,
    #[serde(default)]
    coupling: CouplingRepr,
}

impl RawModel {
    fn build(&self) -> ModelConfig {
        ModelConfig {
            outcome_kind: self.outcome.into(),
            alpha0: self.alpha0,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            beta0: self.beta0,
            beta1: self.beta1,
            beta2: self.beta2,
            beta3: self.beta3,
            beta4: self.beta4,
            beta5: self.beta5,
            u_mean: self.u_mean,
            u_sd: self.u_sd,
            y_noise_sd: self.y_noise_sd,
            coupling: match self.coupling {
                CouplingRepr::SharedNoise => Coupling::SharedNoise,
                CouplingRepr::IndependentRedraw => Coupling::IndependentRedraw,
            },
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawValues {
    alpha0: Option<Vec<f64>>,
    alpha1: Option<Vec<f64>>,
    alpha2: Option<Vec<f64>>,
    beta0: Option<Vec<f64>>,
    beta1: Option<Vec<f64>>,
    beta2: Option<Vec<f64>>,
    beta3: Option<Vec<f64>>,
    beta4: Option<Vec<f64>>,
    beta5: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    outcome: OutcomeRepr,
    #[serde(default)]
    values: RawValues,
    #[serde(default)]
    method: MethodRepr,
    mc_n: Option<u64>,
    #[serde(default)]
    base_seed: u64,
    #[serde(default)]
    parallelism: usize,
    quadrature_nodes: Option<usize>,
    max_settings: Option<u64>,
    #[serde(default)]
    allow_large: bool,
    mc_cap: Option<u64>,
    #[serde(default)]
    allow_full_mc: bool,
    #[serde(default = "two")]
    u_mean: f64,
    #[serde(default = "one")]
    u_sd: f64,
    #[serde(default = "one")]
    y_noise_sd: f64,
    #[serde(default)]
    coupling: CouplingRepr,
    #[serde(default)]
    confirm_top_k: usize,
}

impl RawGrid {
    fn build(self) -> GridSpec {
        let kind: OutcomeKind = self.outcome.into();
        let mut spec = GridSpec::default_for(kind);
        let v = self.values;
        for (slot, given) in spec.values.iter_mut().zip([
            v.alpha0, v.alpha1, v.alpha2, v.beta0, v.beta1, v.beta2, v.beta3, v.beta4, v.beta5,
        ]) {
            if let Some(list) = given {
                *slot = list;
            }
        }
        let base = RawModel {
            outcome: self.outcome,
            alpha0: 0.0,
            alpha1: 0.0,
            alpha2: 0.0,
            beta0: 0.0,
            beta1: 0.0,
            beta2: 0.0,
            beta3: 0.0,
            beta4: 0.0,
            beta5: 0.0,
            u_mean: self.u_mean,
            u_sd: self.u_sd,
            y_noise_sd: self.y_noise_sd,
            coupling: self.coupling,
        };
        spec.base = base.build();
        spec.method = match self.method {
            MethodRepr::Quadrature => GridMethod::Quadrature,
            MethodRepr::MonteCarlo => GridMethod::MonteCarlo,
        };
        if let Some(n) = self.mc_n {
            spec.mc_n = n;
        }
        spec.base_seed = self.base_seed;
        spec.parallelism = self.parallelism;
        if let Some(n) = self.quadrature_nodes {
            spec.quadrature_nodes = n;
        }
        if let Some(c) = self.max_settings {
            spec.max_settings = c;
        }
        spec.allow_large = self.allow_large;
        if let Some(c) = self.mc_cap {
            spec.mc_cap = c;
        }
        spec.allow_full_mc = self.allow_full_mc;
        spec
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLsem {
    #[serde(default)]
    intercept_l: f64,
    #[serde(default)]
    alpha_a: f64,
    #[serde(default)]
    intercept_m: f64,
    #[serde(default)]
    beta_a: f64,
    #[serde(default)]
    beta_l: f64,
    #[serde(default)]
    intercept_y: f64,
    #[serde(default)]
    theta_a: f64,
    #[serde(default)]
    theta_l: f64,
    #[serde(default)]
    theta_m: f64,
    #[serde(default = "one")]
    sd_l: f64,
    #[serde(default = "one")]
    sd_m: f64,
    #[serde(default = "one")]
    sd_y: f64,
}

impl RawLsem {
    fn build(&self) -> LsemModel {
        LsemModel {
            coef: LsemCoefficients {
                intercept_l: self.intercept_l,
                alpha_a: self.alpha_a,
                intercept_m: self.intercept_m,
                beta_a: self.beta_a,
                beta_l: self.beta_l,
                intercept_y: self.intercept_y,
                theta_a: self.theta_a,
                theta_l: self.theta_l,
                theta_m: self.theta_m,
            },
            sd_l: self.sd_l,
            sd_m: self.sd_m,
            sd_y: self.sd_y,
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRun {
    n: Option<u64>,
    seed: Option<u64>,
    jobs: Option<usize>,
    data: Option<PathBuf>,
    out: Option<PathBuf>,
    #[serde(default)]
    format: OutputFormat,
    #[serde(default)]
    counterfactuals: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Option<RawModel>,
    grid: Option<RawGrid>,
    lsem: Option<RawLsem>,
    #[serde(default)]
    run: RawRun,
}

/// Options shared by the subcommands.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Adds `cf_` columns to simulated datasets.
    pub counterfactuals: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub model: Option<ModelConfig>,
    pub grid: Option<GridSpec>,
    pub lsem: Option<LsemModel>,
    /// Top-k rows of a quadrature grid to re-evaluate by Monte Carlo.
    pub confirm_top_k: usize,
    pub run: RunOptions,
}

impl RunConfig {
    /// Fails when a referenced input file is missing.
    pub fn check_paths(&self) -> Result<()> {
        match &self.run.data {
            Some(p) if !p.exists() => Err(CliError::MissingPath(p.clone())),
            _ => Ok(()),
        }
    }
}

/// Parses and validates a JSON config, applying defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => CliError::Schema(e.to_string()),
        _ => CliError::Parse(e.to_string()),
    })?;
    let model = raw.model.as_ref().map(|m| m.build().validate()).transpose()?;
    let confirm_top_k = raw.grid.as_ref().map_or(0, |g| g.confirm_top_k);
    let grid = raw.grid.map(RawGrid::build);
    if let Some(g) = &grid {
        g.validate()?;
    }
    let lsem = raw.lsem.as_ref().map(RawLsem::build);
    if let Some(l) = &lsem {
        if !l.coef.is_finite() || [l.sd_l, l.sd_m, l.sd_y].iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(crossworld_core::Error::InvalidConfig(
                "lsem coefficients must be finite and standard deviations non-negative".into(),
            )
            .into());
        }
    }
    let r = raw.run;
    Ok(RunConfig {
        model,
        grid,
        lsem,
        confirm_top_k,
        run: RunOptions {
            n: r.n,
            seed: r.seed,
            jobs: r.jobs,
            data: r.data,
            out: r.out,
            format: r.format,
            counterfactuals: r.counterfactuals,
        },
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    if !path.exists() {
        return Err(CliError::MissingPath(path.to_path_buf()));
    }
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_model_gets_defaults() {
        let c = parse_config(r#"{"model": {"outcome": "binary"}}"#).unwrap();
        let m = c.model.unwrap();
        assert_eq!((m.u_mean, m.u_sd, m.coupling), (2.0, 1.0, Coupling::SharedNoise));
        assert_eq!(m.outcome_kind, OutcomeKind::Binary);
        assert_eq!(c.run.format, OutputFormat::Csv);
    }

    #[test]
    fn empty_text_is_a_parse_error() {
        assert!(matches!(parse_config(""), Err(CliError::Parse(_))));
        assert!(matches!(parse_config("{"), Err(CliError::Parse(_))));
    }

    #[test]
    fn unknown_key_names_the_key() {
        let err = parse_config(r#"{"model": {"outcome": "binary", "beta6": 1}}"#).unwrap_err();
        match err {
            CliError::Schema(msg) => assert!(msg.contains("beta6"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(r#"{"models": {}}"#), Err(CliError::Schema(_))));
    }

    #[test]
    fn missing_outcome_is_a_schema_error() {
        let err = parse_config(r#"{"model": {"alpha0": 1}}"#).unwrap_err();
        match err {
            CliError::Schema(msg) => assert!(msg.contains("outcome"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_values_fail_validation() {
        let err = parse_config(r#"{"model": {"outcome": "binary", "u_sd": 0}}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = parse_config(r#"{"grid": {"outcome": "binary", "values": {"beta5": []}}}"#).unwrap_err();
        assert!(matches!(err, CliError::Core(crossworld_core::Error::InvalidConfig(_))));
    }

    #[test]
    fn grid_overrides() {
        let c = parse_config(
            r#"{"grid": {"outcome": "continuous", "values": {"beta5": [0.0]}, "method": "monte_carlo",
                "mc_n": 1000, "base_seed": 9, "parallelism": 3, "confirm_top_k": 4, "allow_full_mc": true}}"#,
        )
        .unwrap();
        let g = c.grid.unwrap();
        assert_eq!(g.values[8], vec![0.0]);
        assert_eq!(g.size(), 4u64.pow(8));
        assert_eq!(g.outcome_kind(), OutcomeKind::Continuous);
        assert_eq!((g.method, g.mc_n, g.base_seed, g.parallelism), (GridMethod::MonteCarlo, 1000, 9, 3));
        assert_eq!(c.confirm_top_k, 4);
    }

    #[test]
    fn run_section() {
        let c = parse_config(r#"{"run": {"n": 10, "seed": 3, "format": "json-lines", "counterfactuals": true}}"#)
            .unwrap();
        assert_eq!(c.run.n, Some(10));
        assert_eq!(c.run.format, OutputFormat::JsonLines);
        assert!(c.run.counterfactuals);
        let missing = parse_config(r#"{"run": {"data": "/definitely/not/here.csv"}}"#).unwrap();
        assert!(matches!(missing.check_paths(), Err(CliError::MissingPath(_))));
    }
}
