//! Population values by integrating over `U`.
//!
//! With `γ = E{expit(α₀ + α₂U)} = E{M(0)}` and `ψ = E{U·expit(α₀ + α₂U)} = E{U M(0)}`:
//!
//! * continuous `Y`: `E{Y(1, M(0))} = β₀ + β₁ + (β₂ + β₄)γ + β₃E{U} + β₅ψ`, while
//!   the g-formula gives `β₀ + β₁ + β₃E{U} + γ(β₂ + β₄ + β₅E{U})`, so the bias
//!   is `β₅(ψ − E{U}γ)`;
//! * binary `Y`: `η = E{Y(1, M(0))}` integrates both outcome sigmoids against
//!   `P(M(0) = m | U)`, while the g-formula value `η′` weights the marginal
//!   `E{Y | A=1, M=m}` by `p(M = m | A = 0)`; the bias is `η − η′`.
//!
//! `E{Y(0, M(0))}` and `E{Y(1, M(1))}` are identified in this model, so all of
//! the bias sits in the nested mean and `bias_nie = −bias_nde`.

use crate::bounds::BoundsInput;
use crate::math::expit;
use crate::model::{EffectEstimates, EstimateMethod, ModelConfig, OutcomeKind};
use crate::quadrature::{GaussHermite, DEFAULT_NODES};
use crate::{Error, Result};

/// Intermediate and final quantities for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub gamma: f64,
    pub psi: f64,
    /// `E{Y(1, M(0))}`.
    pub eta: f64,
    /// Population g-formula value standing in for `E{Y(1, M(0))}`.
    pub eta_prime: f64,
    /// `E{Y | A = 1, M = m}` in the population, indexed by `m`.
    pub treated_cell_means: [f64; 2],
    pub truth: EffectEstimates,
    pub estimand: EffectEstimates,
    pub bias_nde: f64,
    pub bias_nie: f64,
}

/// Closed-form evaluator holding a Gauss–Hermite rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    rule: GaussHermite,
}

impl Oracle {
    pub fn new(nodes: usize) -> Result<Self> {
        Ok(Oracle { rule: GaussHermite::new(nodes)? })
    }

    pub fn nodes(&self) -> usize {
        self.rule.len()
    }

    fn e_u<F: FnMut(f64) -> f64>(&self, cfg: &ModelConfig, f: F) -> Result<f64> {
        self.rule.expectation(cfg.u_mean, cfg.u_sd, f)
    }

    /// `(γ, ψ)`.
    pub fn gamma_psi(&self, cfg: &ModelConfig) -> Result<(f64, f64)> {
        let gamma = self.e_u(cfg, |u| cfg.mediator_prob(0, u))?;
        let psi = self.e_u(cfg, |u| u * cfg.mediator_prob(0, u))?;
        Ok((gamma, psi))
    }

    /// Full report: truth, g-formula estimand and bias.
    pub fn report(&self, cfg: &ModelConfig) -> Result<OracleReport> {
        let (gamma, psi) = self.gamma_psi(cfg)?;
        let p1 = cfg.mediator_prob(1, 0.0);
        let (b0, b1, b2, b3, b4, b5) = (cfg.beta0, cfg.beta1, cfg.beta2, cfg.beta3, cfg.beta4, cfg.beta5);
        let mu = cfg.u_mean;
        let (eta, eta_prime, cell, ey_control, bias_nde) = match cfg.outcome_kind {
            OutcomeKind::Continuous => {
                let cell = [b0 + b1 + mu * b3, b0 + b1 + b2 + b4 + mu * (b3 + b5)];
                let eta = b0 + b1 + (b2 + b4) * gamma + b3 * mu + b5 * psi;
                let eta_prime = b0 + b1 + b3 * mu + gamma * (b2 + b4 + b5 * mu);
                (eta, eta_prime, cell, b0 + b2 * gamma, b5 * (psi - mu * gamma))
            }
            OutcomeKind::Binary => {
                let y10 = |u: f64| expit(b0 + b1 + b3 * u);
                let y11 = |u: f64| expit(b0 + b1 + b2 + b4 + (b3 + b5) * u);
                let eta = self.e_u(cfg, |u| {
                    let pm = cfg.mediator_prob(0, u);
                    y10(u) * (1.0 - pm) + y11(u) * pm
                })?;
                let cell = [self.e_u(cfg, y10)?, self.e_u(cfg, y11)?];
                let eta_prime = (1.0 - gamma) * cell[0] + gamma * cell[1];
                let ey_control = expit(b0) * (1.0 - gamma) + expit(b0 + b2) * gamma;
                (eta, eta_prime, cell, ey_control, eta - eta_prime)
            }
        };
        let ey_treated = (1.0 - p1) * cell[0] + p1 * cell[1];
        let nodes = self.nodes() as u64;
        let truth =
            EffectEstimates::from_means(ey_treated, eta, ey_control, EstimateMethod::QuadratureTruth, nodes);
        let estimand = EffectEstimates::from_means(
            ey_treated,
            eta_prime,
            ey_control,
            EstimateMethod::GFormulaClosedForm,
            nodes,
        );
        for v in [gamma, psi, eta, eta_prime, ey_treated, ey_control] {
            if !v.is_finite() {
                return Err(Error::NonFinite { node: f64::NAN });
            }
        }
        Ok(OracleReport {
            gamma,
            psi,
            eta,
            eta_prime,
            treated_cell_means: cell,
            truth,
            estimand,
            bias_nde,
            bias_nie: -bias_nde,
        })
    }

    pub fn truth(&self, cfg: &ModelConfig) -> Result<EffectEstimates> {
        Ok(self.report(cfg)?.truth)
    }

    pub fn estimand(&self, cfg: &ModelConfig) -> Result<EffectEstimates> {
        Ok(self.report(cfg)?.estimand)
    }

    /// The five population quantities entering the NDE bounds.
    pub fn bounds_input(&self, cfg: &ModelConfig) -> Result<BoundsInput> {
        bounds_input_from_report(cfg, &self.report(cfg)?)
    }
}

/// Bounds inputs from an already computed report (binary outcomes only).
pub fn bounds_input_from_report(cfg: &ModelConfig, r: &OracleReport) -> Result<BoundsInput> {
    if !cfg.is_binary() {
        return Err(Error::NotBinaryOutcome);
    }
    BoundsInput::new(
        1.0 - r.gamma,
        r.gamma,
        r.treated_cell_means[0],
        r.treated_cell_means[1],
        r.truth.ey_control,
    )
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(DEFAULT_NODES).expect("default rule size is valid")
    }
}

/// `(γ, ψ)` with the default rule.
pub fn compute_gamma_psi(cfg: &ModelConfig) -> Result<(f64, f64)> {
    Oracle::default().gamma_psi(cfg)
}

pub fn truth_closed_form(cfg: &ModelConfig) -> Result<EffectEstimates> {
    Oracle::default().truth(cfg)
}

pub fn estimand_closed_form(cfg: &ModelConfig) -> Result<EffectEstimates> {
    Oracle::default().estimand(cfg)
}

pub fn analytic_bias(cfg: &ModelConfig) -> Result<OracleReport> {
    Oracle::default().report(cfg)
}
