use rand::Rng;

use super::{Coupling, ModelConfig, OutcomeKind};
use crate::rng;

/// One unit's latent draws and its full table of counterfactuals.
///
/// Under [`Coupling::SharedNoise`] both entries of `eps_m` are equal and all
/// four entries of `eps_y` are equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterfactualUnit {
    pub u: f64,
    /// Mediator noise used for `M(0)` and `M(1)`.
    pub eps_m: [f64; 2],
    /// Outcome noise used for `Y(a, m)`, indexed `[a][m]`.
    pub eps_y: [[f64; 2]; 2],
    /// `M(a)`, indexed by `a`.
    pub m: [u8; 2],
    /// `Y(a, m)`, indexed `[a][m]`.
    pub y: [[f64; 2]; 2],
}

impl CounterfactualUnit {
    pub fn m0(&self) -> u8 {
        self.m[0]
    }

    pub fn m1(&self) -> u8 {
        self.m[1]
    }

    pub fn y_am(&self, a: u8, m: u8) -> f64 {
        self.y[usize::from(a)][usize::from(m)]
    }
}

/// A factual `(A, M, Y)` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedRow {
    pub a: u8,
    pub m: u8,
    pub y: f64,
}

#[inline]
fn outcome_noise<R: Rng + ?Sized>(config: &ModelConfig, stream: &mut R) -> f64 {
    match config.outcome_kind {
        OutcomeKind::Continuous => rng::normal(stream, 0.0, config.y_noise_sd),
        OutcomeKind::Binary => rng::standard_logistic(stream),
    }
}

/// Draws `(U, ε_M, ε_Y)` in this order, followed by the extra noise draws
/// needed for [`Coupling::IndependentRedraw`].
pub fn sample_unit<R: Rng + ?Sized>(config: &ModelConfig, stream: &mut R) -> CounterfactualUnit {
    let u = rng::normal(stream, config.u_mean, config.u_sd);
    let eps_m0 = rng::standard_logistic(stream);
    let eps_y00 = outcome_noise(config, stream);
    let (eps_m, eps_y) = match config.coupling {
        Coupling::SharedNoise => ([eps_m0; 2], [[eps_y00; 2]; 2]),
        Coupling::IndependentRedraw => {
            let eps_m1 = rng::standard_logistic(stream);
            let eps_y01 = outcome_noise(config, stream);
            let eps_y10 = outcome_noise(config, stream);
            let eps_y11 = outcome_noise(config, stream);
            ([eps_m0, eps_m1], [[eps_y00, eps_y01], [eps_y10, eps_y11]])
        }
    };
    let m = [config.mediator(0, u, eps_m[0]), config.mediator(1, u, eps_m[1])];
    let mut y = [[0.0; 2]; 2];
    for a in 0..2u8 {
        for mm in 0..2u8 {
            y[usize::from(a)][usize::from(mm)] =
                config.outcome(a, mm, u, eps_y[usize::from(a)][usize::from(mm)]);
        }
    }
    CounterfactualUnit { u, eps_m, eps_y, m, y }
}

/// `Y(a, M(a'))` for one unit.
#[inline]
pub fn compose_nested(unit: &CounterfactualUnit, a: u8, a_prime: u8) -> f64 {
    unit.y_am(a, unit.m[usize::from(a_prime)])
}

/// The factual record of `unit` under assignment `a` (consistency).
#[inline]
pub fn project_factual(unit: &CounterfactualUnit, a: u8) -> ObservedRow {
    let m = unit.m[usize::from(a)];
    ObservedRow { a, m, y: unit.y_am(a, m) }
}
