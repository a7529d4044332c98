//! Structural models for a binary treatment `A`, binary mediator `M`, latent
//! `U` and a continuous or binary outcome `Y`.
//!
//! The mediator is `1{-ε_M < α₀ + α₁A + α₂(1 − A)U}` and the outcome index is
//! `β₀ + β₁A + β₂M + β₃AU + β₄AM + β₅AMU`, so `U` reaches `M` only when
//! `A = 0` and reaches `Y` only when `A = 1`. In a single world `U` confounds
//! nothing; across worlds it links `M(0)` and `Y(1, m)`.

pub(crate) mod monte_carlo;
mod unit;

pub use monte_carlo::{
    assignments, mc_interventional_effects, mc_separable_effects, mc_true_effects,
    simulate_block, simulate_observed, simulate_units, truth_block, EffectAccumulator,
    InterventionalEffects, SimulationBlock,
};
pub use unit::{compose_nested, project_factual, sample_unit, CounterfactualUnit, ObservedRow};

use alloc::format;

use crate::math;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    Continuous,
    Binary,
}

/// How noise terms are shared between counterfactual cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Coupling {
    /// One `ε_M` for both `M(a)` and one `ε_Y` for all four `Y(a, m)`.
    #[default]
    SharedNoise,
    /// A fresh noise draw for every counterfactual cell.
    IndependentRedraw,
}

/// Coefficients and distributional settings of one structural model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub outcome_kind: OutcomeKind,
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
    pub u_mean: f64,
    pub u_sd: f64,
    /// Standard deviation of `ε_Y`; ignored for binary outcomes.
    pub y_noise_sd: f64,
    pub coupling: Coupling,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            outcome_kind: OutcomeKind::Binary,
            alpha0: 0.0,
            alpha1: 0.0,
            alpha2: 0.0,
            beta0: 0.0,
            beta1: 0.0,
            beta2: 0.0,
            beta3: 0.0,
            beta4: 0.0,
            beta5: 0.0,
            u_mean: 2.0,
            u_sd: 1.0,
            y_noise_sd: 1.0,
            coupling: Coupling::SharedNoise,
        }
    }
}

/// Parameter names in the canonical order `α₀, α₁, α₂, β₀, …, β₅`.
pub const PARAMETER_NAMES: [&str; 9] =
    ["alpha0", "alpha1", "alpha2", "beta0", "beta1", "beta2", "beta3", "beta4", "beta5"];

impl ModelConfig {
    /// Config with the nine coefficients in canonical order and default `U`.
    pub fn from_params(outcome_kind: OutcomeKind, p: [f64; 9]) -> Self {
        ModelConfig {
            outcome_kind,
            alpha0: p[0],
            alpha1: p[1],
            alpha2: p[2],
            beta0: p[3],
            beta1: p[4],
            beta2: p[5],
            beta3: p[6],
            beta4: p[7],
            beta5: p[8],
            ..ModelConfig::default()
        }
    }

    pub fn params(&self) -> [f64; 9] {
        [
            self.alpha0, self.alpha1, self.alpha2, self.beta0, self.beta1, self.beta2, self.beta3,
            self.beta4, self.beta5,
        ]
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn is_binary(&self) -> bool {
        self.outcome_kind == OutcomeKind::Binary
    }

    /// Checks scale parameters and finiteness.
    pub fn validate(self) -> Result<Self> {
        for (name, v) in PARAMETER_NAMES.iter().zip(self.params()) {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite, got {v}")));
            }
        }
        if !self.u_mean.is_finite() {
            return Err(Error::InvalidConfig(format!("u_mean must be finite, got {}", self.u_mean)));
        }
        if !(self.u_sd.is_finite() && self.u_sd > 0.0) {
            return Err(Error::InvalidConfig(format!("u_sd must be positive, got {}", self.u_sd)));
        }
        if self.outcome_kind == OutcomeKind::Continuous
            && !(self.y_noise_sd.is_finite() && self.y_noise_sd > 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "y_noise_sd must be positive, got {}",
                self.y_noise_sd
            )));
        }
        Ok(self)
    }

    /// `α₀ + α₁a + α₂(1 − a)u`.
    #[inline]
    pub fn mediator_index(&self, a: u8, u: f64) -> f64 {
        let a = f64::from(a);
        self.alpha0 + self.alpha1 * a + self.alpha2 * (1.0 - a) * u
    }

    /// `β₀ + β₁a + β₂m + β₃au + β₄am + β₅amu`.
    #[inline]
    pub fn outcome_index(&self, a: u8, m: u8, u: f64) -> f64 {
        let (a, m) = (f64::from(a), f64::from(m));
        self.beta0
            + self.beta1 * a
            + self.beta2 * m
            + self.beta3 * a * u
            + self.beta4 * a * m
            + self.beta5 * a * m * u
    }

    #[inline]
    pub fn mediator(&self, a: u8, u: f64, eps_m: f64) -> u8 {
        u8::from(-eps_m < self.mediator_index(a, u))
    }

    #[inline]
    pub fn outcome(&self, a: u8, m: u8, u: f64, eps_y: f64) -> f64 {
        let index = self.outcome_index(a, m, u);
        match self.outcome_kind {
            OutcomeKind::Continuous => index + eps_y,
            OutcomeKind::Binary => f64::from(u8::from(-eps_y < index)),
        }
    }

    /// `P(M(a) = 1 | U = u)`.
    #[inline]
    pub fn mediator_prob(&self, a: u8, u: f64) -> f64 {
        math::expit(self.mediator_index(a, u))
    }
}

/// Which route produced an [`EffectEstimates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimateMethod {
    MonteCarloTruth,
    QuadratureTruth,
    GFormula,
    GFormulaClosedForm,
    Lsem,
    Interventional,
    Separable,
}

impl EstimateMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimateMethod::MonteCarloTruth => "mc_truth",
            EstimateMethod::QuadratureTruth => "quadrature_truth",
            EstimateMethod::GFormula => "g_formula",
            EstimateMethod::GFormulaClosedForm => "g_formula_closed_form",
            EstimateMethod::Lsem => "lsem",
            EstimateMethod::Interventional => "interventional",
            EstimateMethod::Separable => "separable",
        }
    }
}

/// Monte Carlo standard errors of the per-unit contrasts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardErrors {
    pub nde: f64,
    pub nie: f64,
    pub te: f64,
    pub ey_nested: f64,
}

/// Natural effects for `a = 1` versus `a' = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectEstimates {
    pub nde: f64,
    pub nie: f64,
    pub te: f64,
    /// `E{Y(1, M(0))}` or the value standing in for it.
    pub ey_nested: f64,
    /// `E{Y(1, M(1))}`.
    pub ey_treated: f64,
    /// `E{Y(0, M(0))}`.
    pub ey_control: f64,
    pub method: EstimateMethod,
    /// Sample size, or quadrature nodes for closed forms.
    pub n_or_nodes: u64,
    pub mc_se: Option<StandardErrors>,
}

impl EffectEstimates {
    /// Assembles NDE, NIE and TE from the three means.
    pub fn from_means(
        ey_treated: f64,
        ey_nested: f64,
        ey_control: f64,
        method: EstimateMethod,
        n_or_nodes: u64,
    ) -> Self {
        let nde = ey_nested - ey_control;
        let nie = ey_treated - ey_nested;
        EffectEstimates {
            nde,
            nie,
            te: nde + nie,
            ey_nested,
            ey_treated,
            ey_control,
            method,
            n_or_nodes,
            mc_se: None,
        }
    }
}
