//! Monte Carlo evaluation of natural, interventional and separable effects.
//!
//! All routines split the `n` units into blocks (see [`crate::rng`]) and
//! merge per-block sums in block order, so a parallel caller that maps
//! [`truth_block`] or [`simulate_block`] over blocks and folds the results in
//! order reproduces the sequential answer bit for bit.

use alloc::vec::Vec;

use super::unit::{compose_nested, project_factual, sample_unit, CounterfactualUnit};
use super::{EffectEstimates, EstimateMethod, ModelConfig, OutcomeKind, StandardErrors};
use crate::gformula::{CellAccumulator, CellStats, ObservedDataset};
use crate::math;
use crate::rng::{self, aux_stream, block_count, block_len, block_stream};
use crate::{Error, Result};

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("Monte Carlo sample size must be at least 1".into()));
    }
    Ok(())
}

/// Running sums of the nested counterfactual means and per-unit contrasts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EffectAccumulator {
    n: u64,
    sum_control: f64,
    sum_nested: f64,
    sum_treated: f64,
    sum_sq_nested: f64,
    sum_nde: f64,
    sum_sq_nde: f64,
    sum_nie: f64,
    sum_sq_nie: f64,
    sum_te: f64,
    sum_sq_te: f64,
}

impl EffectAccumulator {
    #[inline]
    pub fn push(&mut self, unit: &CounterfactualUnit) {
        let control = compose_nested(unit, 0, 0);
        let nested = compose_nested(unit, 1, 0);
        let treated = compose_nested(unit, 1, 1);
        let (nde, nie, te) = (nested - control, treated - nested, treated - control);
        self.n += 1;
        self.sum_control += control;
        self.sum_nested += nested;
        self.sum_treated += treated;
        self.sum_sq_nested += nested * nested;
        self.sum_nde += nde;
        self.sum_sq_nde += nde * nde;
        self.sum_nie += nie;
        self.sum_sq_nie += nie * nie;
        self.sum_te += te;
        self.sum_sq_te += te * te;
    }

    pub fn merge(&mut self, other: &EffectAccumulator) {
        self.n += other.n;
        self.sum_control += other.sum_control;
        self.sum_nested += other.sum_nested;
        self.sum_treated += other.sum_treated;
        self.sum_sq_nested += other.sum_sq_nested;
        self.sum_nde += other.sum_nde;
        self.sum_sq_nde += other.sum_sq_nde;
        self.sum_nie += other.sum_nie;
        self.sum_sq_nie += other.sum_sq_nie;
        self.sum_te += other.sum_te;
        self.sum_sq_te += other.sum_sq_te;
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Effects as differences of sample means, with standard errors of the
    /// per-unit contrasts.
    pub fn finish(&self) -> Result<EffectEstimates> {
        check_n(self.n)?;
        let nf = self.n as f64;
        let mut est = EffectEstimates::from_means(
            self.sum_treated / nf,
            self.sum_nested / nf,
            self.sum_control / nf,
            EstimateMethod::MonteCarloTruth,
            self.n,
        );
        est.mc_se = Some(StandardErrors {
            nde: mean_se(self.n, self.sum_nde, self.sum_sq_nde),
            nie: mean_se(self.n, self.sum_nie, self.sum_sq_nie),
            te: mean_se(self.n, self.sum_te, self.sum_sq_te),
            ey_nested: mean_se(self.n, self.sum_nested, self.sum_sq_nested),
        });
        Ok(est)
    }
}

/// Standard error of a sample mean from its raw sums.
pub(crate) fn mean_se(n: u64, sum: f64, sum_sq: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    math::sqrt(var / nf)
}

/// Nested-counterfactual sums for one block of units.
pub fn truth_block(config: &ModelConfig, seed: u64, block: u64, len: u64) -> EffectAccumulator {
    let mut stream = block_stream(seed, block);
    let mut acc = EffectAccumulator::default();
    for _ in 0..len {
        acc.push(&sample_unit(config, &mut stream));
    }
    acc
}

/// Monte Carlo truth: averages of `Y(1,M(0)) − Y(0,M(0))` and
/// `Y(1,M(1)) − Y(1,M(0))` over `n` sampled units.
pub fn mc_true_effects(config: &ModelConfig, n: u64, seed: u64) -> Result<EffectEstimates> {
    check_n(n)?;
    let mut acc = EffectAccumulator::default();
    for b in 0..block_count(n) {
        acc.merge(&truth_block(config, seed, b, block_len(n, b)));
    }
    acc.finish()
}

/// Truth sums and factual cell sums from the same block of units, with
/// `A ~ Bernoulli(1/2)` drawn from the block's auxiliary stream.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimulationBlock {
    pub effects: EffectAccumulator,
    pub cells: CellAccumulator,
}

impl SimulationBlock {
    pub fn merge(&mut self, other: &SimulationBlock) {
        self.effects.merge(&other.effects);
        self.cells.merge(&other.cells);
    }

    pub fn finish(&self) -> Result<(EffectEstimates, CellStats)> {
        Ok((self.effects.finish()?, self.cells.finish()?))
    }
}

pub fn simulate_block(config: &ModelConfig, seed: u64, block: u64, len: u64) -> SimulationBlock {
    let mut stream = block_stream(seed, block);
    let mut aux = aux_stream(seed, block);
    let mut out = SimulationBlock::default();
    for _ in 0..len {
        let unit = sample_unit(config, &mut stream);
        let a = u8::from(rng::bernoulli(&mut aux, 0.5));
        out.effects.push(&unit);
        out.cells.push(project_factual(&unit, a));
    }
    out
}

/// `n` counterfactual units, block by block.
pub fn simulate_units(config: &ModelConfig, n: u64, seed: u64) -> Vec<CounterfactualUnit> {
    let mut units = Vec::with_capacity(n as usize);
    for b in 0..block_count(n) {
        let mut stream = block_stream(seed, b);
        for _ in 0..block_len(n, b) {
            units.push(sample_unit(config, &mut stream));
        }
    }
    units
}

/// Fair-coin treatment assignments matching [`simulate_units`] unit by unit.
pub fn assignments(n: u64, seed: u64) -> Vec<u8> {
    let mut out = Vec::with_capacity(n as usize);
    for b in 0..block_count(n) {
        let mut aux = aux_stream(seed, b);
        for _ in 0..block_len(n, b) {
            out.push(u8::from(rng::bernoulli(&mut aux, 0.5)));
        }
    }
    out
}

/// Factual data: units from [`simulate_units`] projected onto [`assignments`].
pub fn simulate_observed(config: &ModelConfig, n: u64, seed: u64) -> ObservedDataset {
    let units = simulate_units(config, n, seed);
    let rows = units
        .iter()
        .zip(assignments(n, seed))
        .map(|(unit, a)| project_factual(unit, a))
        .collect();
    ObservedDataset::new(rows).expect("simulated rows are well formed")
}

/// Interventional (standardized) effects, where the mediator is drawn from
/// the marginal law of `M(a')` independently of the unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterventionalEffects {
    /// `E{Y(1, M ~ p₀)} − E{Y(0, M ~ p₀)}`.
    pub de_st: f64,
    /// `E{Y(1, M ~ p₁)} − E{Y(1, M ~ p₀)}`.
    pub ie_st: f64,
    /// `E{Y(a, M ~ p_{a'})}`, indexed `[a][a']`.
    pub ey_intervened: [[f64; 2]; 2],
    /// `E{Y(a)} = E{Y(a, M(a))}`.
    pub ey_natural: [f64; 2],
    /// `E{Y(a, M ~ pₐ)} − E{Y(a)}` for each `a`.
    pub te_check: [f64; 2],
    /// Standard errors of the paired per-unit differences behind `te_check`.
    pub te_check_se: [f64; 2],
    /// Estimated `P(M(a) = 1)` used as the intervention distributions.
    pub mediator_probs: [f64; 2],
    pub n: u64,
}

impl InterventionalEffects {
    /// `E{Y(1, M ~ p₁)} − E{Y(0, M ~ p₀)}`.
    pub fn total_st(&self) -> f64 {
        self.ey_intervened[1][1] - self.ey_intervened[0][0]
    }
}

pub fn mc_interventional_effects(
    config: &ModelConfig,
    n: u64,
    seed: u64,
) -> Result<InterventionalEffects> {
    check_n(n)?;
    // First pass: the distributions p_a of M(a).
    let mut m_sums = [0u64; 2];
    for b in 0..block_count(n) {
        let mut stream = block_stream(seed, b);
        for _ in 0..block_len(n, b) {
            let unit = sample_unit(config, &mut stream);
            m_sums[0] += u64::from(unit.m[0]);
            m_sums[1] += u64::from(unit.m[1]);
        }
    }
    let nf = n as f64;
    let probs = [m_sums[0] as f64 / nf, m_sums[1] as f64 / nf];

    // Second pass over the same units with independent mediator draws.
    let mut sum_int = [[0.0; 2]; 2];
    let mut sum_nat = [0.0; 2];
    let mut sum_diff = [0.0; 2];
    let mut sum_sq_diff = [0.0; 2];
    for b in 0..block_count(n) {
        let mut stream = block_stream(seed, b);
        let mut aux = aux_stream(seed, b);
        for _ in 0..block_len(n, b) {
            let unit = sample_unit(config, &mut stream);
            let drawn = [
                u8::from(rng::bernoulli(&mut aux, probs[0])),
                u8::from(rng::bernoulli(&mut aux, probs[1])),
            ];
            for a in 0..2u8 {
                let ai = usize::from(a);
                for ap in 0..2 {
                    sum_int[ai][ap] += unit.y_am(a, drawn[ap]);
                }
                let natural = compose_nested(&unit, a, a);
                let d = unit.y_am(a, drawn[ai]) - natural;
                sum_nat[ai] += natural;
                sum_diff[ai] += d;
                sum_sq_diff[ai] += d * d;
            }
        }
    }
    let ey_intervened = [
        [sum_int[0][0] / nf, sum_int[0][1] / nf],
        [sum_int[1][0] / nf, sum_int[1][1] / nf],
    ];
    let ey_natural = [sum_nat[0] / nf, sum_nat[1] / nf];
    Ok(InterventionalEffects {
        de_st: ey_intervened[1][0] - ey_intervened[0][0],
        ie_st: ey_intervened[1][1] - ey_intervened[1][0],
        ey_intervened,
        ey_natural,
        te_check: [
            ey_intervened[0][0] - ey_natural[0],
            ey_intervened[1][1] - ey_natural[1],
        ],
        te_check_se: [
            mean_se(n, sum_diff[0], sum_sq_diff[0]),
            mean_se(n, sum_diff[1], sum_sq_diff[1]),
        ],
        mediator_probs: probs,
        n,
    })
}

/// `E{Y(A^Y = a_y, A^M = a_m)}`: the mediator equation runs with `a_m`, the
/// outcome equation with `a_y`, on one set of `(U, ε_M, ε_Y)` draws per unit.
pub fn mc_separable_effects(
    config: &ModelConfig,
    a_y: u8,
    a_m: u8,
    n: u64,
    seed: u64,
) -> Result<f64> {
    check_n(n)?;
    let mut sum = 0.0;
    for b in 0..block_count(n) {
        let mut stream = block_stream(seed, b);
        for _ in 0..block_len(n, b) {
            let u = rng::normal(&mut stream, config.u_mean, config.u_sd);
            let eps_m = rng::standard_logistic(&mut stream);
            let eps_y = match config.outcome_kind {
                OutcomeKind::Continuous => rng::normal(&mut stream, 0.0, config.y_noise_sd),
                OutcomeKind::Binary => rng::standard_logistic(&mut stream),
            };
            let m = config.mediator(a_m, u, eps_m);
            sum += config.outcome(a_y, m, u, eps_y);
        }
    }
    Ok(sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, OutcomeKind};

    const EXTREME: [f64; 9] = [-3.5, 0.5, 2.5, -4.0, -1.0, 3.5, 3.25, 3.0, -5.0];

    #[test]
    fn block_sums_do_not_depend_on_grouping() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, EXTREME);
        let n = 3 * rng::BLOCK_SIZE + 123;
        let direct = mc_true_effects(&cfg, n, 42).unwrap();
        let blocks: Vec<_> =
            (0..block_count(n)).map(|b| truth_block(&cfg, 42, b, block_len(n, b))).collect();
        let mut acc = EffectAccumulator::default();
        for blk in blocks.iter() {
            acc.merge(blk);
        }
        assert_eq!(acc.finish().unwrap(), direct);
        let mut sim = SimulationBlock::default();
        for b in 0..block_count(n) {
            sim.merge(&simulate_block(&cfg, 42, b, block_len(n, b)));
        }
        assert_eq!(sim.finish().unwrap().0, direct);
    }

    #[test]
    fn no_effect_when_outcome_ignores_treatment_and_mediator() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, [0.3, 0.8, -0.9, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let e = mc_true_effects(&cfg, 200_000, 1).unwrap();
        // Shared noise makes every per-unit contrast exactly zero.
        assert_eq!((e.nde, e.nie), (0.0, 0.0));
        let cfg = cfg.with_coupling(Coupling::IndependentRedraw);
        let e = mc_true_effects(&cfg, 200_000, 1).unwrap();
        let se = e.mc_se.unwrap();
        assert!(e.nde.abs() < 4.0 * se.nde);
        assert!(e.nie.abs() < 4.0 * se.nie);
    }

    #[test]
    fn no_indirect_effect_without_mediator_dependence() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, [0.4, 0.0, 0.0, -0.2, 0.9, 1.1, -0.4, 0.2, 0.5]);
        let e = mc_true_effects(&cfg, 100_000, 3).unwrap();
        assert_eq!(e.nie, 0.0);
    }

    #[test]
    fn decomposition_holds_on_every_sample() {
        let cfg = ModelConfig::from_params(OutcomeKind::Continuous, [0.2, 0.5, -1.0, 50.0, 3.0, -5.0, -10.0, -15.0, 5.0]);
        let e = mc_true_effects(&cfg, 50_000, 8).unwrap();
        assert_eq!(e.te, e.nde + e.nie);
        assert!((e.te - (e.ey_treated - e.ey_control)).abs() < 1e-10);
    }

    #[test]
    fn simulated_rows_follow_assignments() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, EXTREME);
        let units = simulate_units(&cfg, 1000, 5);
        let a = assignments(1000, 5);
        let data = simulate_observed(&cfg, 1000, 5);
        for ((unit, a), row) in units.iter().zip(a).zip(data.rows()) {
            assert_eq!(*row, project_factual(unit, a));
        }
        let share = data.rows().iter().filter(|r| r.a == 1).count();
        assert!((400..600).contains(&share));
    }

    #[test]
    fn interventional_contrasts_telescope() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, EXTREME);
        let r = mc_interventional_effects(&cfg, 100_000, 4).unwrap();
        assert!((r.de_st + r.ie_st - r.total_st()).abs() < 1e-15);
        assert!(r.mediator_probs.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn separable_evaluation_reuses_the_unit_draws() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, EXTREME);
        let n = 70_000;
        let units = simulate_units(&cfg, n, 6);
        for (a_y, a_m) in [(0u8, 0u8), (1, 0), (1, 1)] {
            let nested: f64 = units.iter().map(|u| compose_nested(u, a_y, a_m)).sum::<f64>() / n as f64;
            let sep = mc_separable_effects(&cfg, a_y, a_m, n, 6).unwrap();
            assert_eq!(sep, nested);
        }
    }

    #[test]
    fn zero_sample_size_is_rejected() {
        let cfg = ModelConfig::default();
        assert!(mc_true_effects(&cfg, 0, 1).is_err());
        assert!(mc_interventional_effects(&cfg, 0, 1).is_err());
        assert!(mc_separable_effects(&cfg, 1, 0, 0, 1).is_err());
    }
}
