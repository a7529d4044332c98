//! Diagnostics for the identification assumptions, computed on simulated
//! counterfactuals.
//!
//! Every statistic is a contrast of means between two groups with a
//! Welch-type standard error. A check passes when
//! `|statistic| <= AUDIT_THRESHOLD * se`. Columns with zero empirical
//! variance yield a statistic of exactly 0.

use alloc::vec::Vec;

use crate::math;
use crate::model::{sample_unit, CounterfactualUnit, ModelConfig, OutcomeKind};
use crate::rng::{self, aux_stream, block_count, block_len, block_stream};
use crate::{Error, Result};

/// Standard errors beyond which a check fails.
pub const AUDIT_THRESHOLD: f64 = 5.0;

/// Running mean and centred sum of squares for two groups of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPair {
    n: [u64; 2],
    mean: [f64; 2],
    m2: [f64; 2],
    min: f64,
    max: f64,
}

impl Default for GroupPair {
    fn default() -> Self {
        GroupPair { n: [0; 2], mean: [0.0; 2], m2: [0.0; 2], min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl GroupPair {
    pub fn push(&mut self, group: bool, x: f64) {
        let g = usize::from(group);
        self.n[g] += 1;
        let d = x - self.mean[g];
        self.mean[g] += d / self.n[g] as f64;
        self.m2[g] += d * (x - self.mean[g]);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &GroupPair) {
        for g in 0..2 {
            let (na, nb) = (self.n[g], other.n[g]);
            if nb == 0 {
                continue;
            }
            if na == 0 {
                self.n[g] = nb;
                self.mean[g] = other.mean[g];
                self.m2[g] = other.m2[g];
                continue;
            }
            let n = na + nb;
            let d = other.mean[g] - self.mean[g];
            let w = nb as f64 / n as f64;
            self.mean[g] += d * w;
            self.m2[g] += other.m2[g] + d * d * na as f64 * w;
            self.n[g] = n;
        }
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn counts(&self) -> [u64; 2] {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.n[0] + self.n[1]
    }

    fn constant(&self) -> bool {
        self.min.partial_cmp(&self.max) != Some(core::cmp::Ordering::Less)
    }

    fn var(&self, g: usize) -> f64 {
        if self.n[g] < 2 {
            0.0
        } else {
            (self.m2[g] / (self.n[g] - 1) as f64).max(0.0)
        }
    }

    /// Group-1 mean minus group-0 mean, or 0 when a group is empty or the
    /// column is constant.
    pub fn contrast(&self) -> Check {
        if self.n[0] == 0 || self.n[1] == 0 || self.constant() {
            return Check::new(0.0, 0.0);
        }
        let se = math::sqrt(self.var(1) / self.n[1] as f64 + self.var(0) / self.n[0] as f64);
        Check::new(self.mean[1] - self.mean[0], se)
    }
}

/// A raw statistic, its standard error and the verdict at
/// [`AUDIT_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub statistic: f64,
    pub se: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(statistic: f64, se: f64) -> Self {
        Check { statistic, se, passed: statistic.abs() <= AUDIT_THRESHOLD * se }
    }

    fn scaled(self, k: f64) -> Self {
        Check::new(self.statistic * k, self.se * k)
    }

    /// `|statistic| / se`, 0 when both vanish.
    pub fn z(&self) -> f64 {
        if self.statistic == 0.0 {
            0.0
        } else {
            self.statistic.abs() / self.se
        }
    }
}

/// Names of the single-world checks, in [`SingleWorldChecks::checks`] order.
pub const SINGLE_WORLD_NAMES: [&str; 10] = [
    "M(0)~A",
    "M(1)~A",
    "Y(0,0)~A",
    "Y(0,1)~A",
    "Y(1,0)~A",
    "Y(1,1)~A",
    "Y(0,0)~M(0)|A=0",
    "Y(0,1)~M(0)|A=0",
    "Y(1,0)~M(1)|A=1",
    "Y(1,1)~M(1)|A=1",
];

/// Independence of `M(a)` and `Y(a, m)` from `A`, and of `Y(a, m)` from
/// `M(a)` within `{A = a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleWorldChecks {
    pub checks: [Check; 10],
}

impl SingleWorldChecks {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Check)> {
        SINGLE_WORLD_NAMES.iter().copied().zip(self.checks.iter())
    }
}

/// Mergeable sums behind every diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuditAccumulator {
    /// `Y(1, m)` grouped by `M(0)`.
    cross_world: [GroupPair; 2],
    /// `M(a)` grouped by `A`.
    mediator_vs_a: [GroupPair; 2],
    /// `Y(a, m)` grouped by `A`.
    outcome_vs_a: [[GroupPair; 2]; 2],
    /// `Y(a, m)` grouped by `M(a)` among units with `A = a`.
    outcome_vs_mediator: [[GroupPair; 2]; 2],
    /// `Y(1, m) − Y(0, m)` grouped by `M(0) = m`.
    direct_effect: [GroupPair; 2],
    interaction_sum: f64,
    interaction_n: u64,
    max_abs_y: f64,
}

impl AuditAccumulator {
    pub fn push_counterfactuals(&mut self, unit: &CounterfactualUnit) {
        for m in 0..2u8 {
            let mi = usize::from(m);
            self.cross_world[mi].push(unit.m0() == 1, unit.y_am(1, m));
            let contrast = unit.y_am(1, m) - unit.y_am(0, m);
            self.direct_effect[mi].push(unit.m0() == m, contrast);
        }
        let b = (unit.y_am(1, 1) - unit.y_am(0, 1)) - (unit.y_am(1, 0) - unit.y_am(0, 0));
        self.interaction_sum += b.abs();
        self.interaction_n += 1;
        for row in unit.y {
            for y in row {
                self.max_abs_y = self.max_abs_y.max(y.abs());
            }
        }
    }

    pub fn push_assignment(&mut self, unit: &CounterfactualUnit, a: u8) {
        let treated = a == 1;
        for arm in 0..2u8 {
            let ai = usize::from(arm);
            self.mediator_vs_a[ai].push(treated, f64::from(unit.m[ai]));
            for m in 0..2u8 {
                self.outcome_vs_a[ai][usize::from(m)].push(treated, unit.y_am(arm, m));
                if arm == a {
                    self.outcome_vs_mediator[ai][usize::from(m)].push(unit.m[ai] == 1, unit.y_am(arm, m));
                }
            }
        }
    }

    pub fn push(&mut self, unit: &CounterfactualUnit, a: u8) {
        self.push_counterfactuals(unit);
        self.push_assignment(unit, a);
    }

    pub fn merge(&mut self, other: &AuditAccumulator) {
        for m in 0..2 {
            self.cross_world[m].merge(&other.cross_world[m]);
            self.mediator_vs_a[m].merge(&other.mediator_vs_a[m]);
            self.direct_effect[m].merge(&other.direct_effect[m]);
            for k in 0..2 {
                self.outcome_vs_a[m][k].merge(&other.outcome_vs_a[m][k]);
                self.outcome_vs_mediator[m][k].merge(&other.outcome_vs_mediator[m][k]);
            }
        }
        self.interaction_sum += other.interaction_sum;
        self.interaction_n += other.interaction_n;
        self.max_abs_y = self.max_abs_y.max(other.max_abs_y);
    }

    pub fn len(&self) -> u64 {
        self.interaction_n
    }

    pub fn is_empty(&self) -> bool {
        self.interaction_n == 0
    }

    /// Association of `Y(1, m)` with `M(0)`. Continuous outcomes report the
    /// sample covariance, binary outcomes the difference of conditional means.
    pub fn cross_world(&self, kind: OutcomeKind) -> [Check; 2] {
        self.cross_world.map(|g| {
            let diff = g.contrast();
            match kind {
                OutcomeKind::Binary => diff,
                OutcomeKind::Continuous => {
                    // Sample covariance with a binary regressor is
                    // n1 n0 / (n (n − 1)) times the difference of means.
                    let [n0, n1] = g.counts().map(|c| c as f64);
                    let n = n0 + n1;
                    if n < 2.0 {
                        Check::new(0.0, 0.0)
                    } else {
                        diff.scaled(n1 * n0 / (n * (n - 1.0)))
                    }
                }
            }
        })
    }

    pub fn single_world(&self) -> SingleWorldChecks {
        let mut checks = [Check::new(0.0, 0.0); 10];
        checks[0] = self.mediator_vs_a[0].contrast();
        checks[1] = self.mediator_vs_a[1].contrast();
        for a in 0..2 {
            for m in 0..2 {
                checks[2 + 2 * a + m] = self.outcome_vs_a[a][m].contrast();
                checks[6 + 2 * a + m] = self.outcome_vs_mediator[a][m].contrast();
            }
        }
        SingleWorldChecks { checks }
    }

    /// Mean over units of `|B(1,0)|_{m=1} − B(1,0)|_{m=0}|`.
    pub fn b_variation(&self) -> f64 {
        if self.interaction_n == 0 {
            0.0
        } else {
            self.interaction_sum / self.interaction_n as f64
        }
    }

    /// Rounding allowance for [`AuditAccumulator::b_variation`], which has
    /// no sampling error when it is zero.
    fn b_variation_tolerance(&self) -> f64 {
        1e-9 * self.max_abs_y.max(1.0)
    }

    /// `E[Y(1,m) − Y(0,m) | M(0) = m] − E[Y(1,m) − Y(0,m)]` for each `m`.
    pub fn direct_effect_gap(&self) -> Result<[Check; 2]> {
        let mut out = [Check::new(0.0, 0.0); 2];
        for (m, g) in self.direct_effect.iter().enumerate() {
            let [n_out, n_in] = g.counts();
            if n_in == 0 {
                return Err(Error::DegenerateStratum { m: m as u8 });
            }
            // The overall mean is p·mean_in + (1 − p)·mean_out.
            let share_out = n_out as f64 / (n_in + n_out) as f64;
            out[m] = g.contrast().scaled(share_out);
        }
        Ok(out)
    }

    pub fn finish(&self, kind: OutcomeKind) -> Result<AuditReport> {
        if self.interaction_n < 2 {
            return Err(Error::TooFewUnits { needed: 2, got: self.interaction_n as usize });
        }
        let cw_assoc = self.cross_world(kind);
        let sw_assoc = self.single_world();
        let b_variation = self.b_variation();
        let de_assump_gap = match self.direct_effect_gap() {
            Ok(g) => Some(g),
            Err(Error::DegenerateStratum { .. }) => None,
            Err(e) => return Err(e),
        };
        let flags = AuditFlags {
            cross_world: cw_assoc.iter().all(|c| c.passed),
            single_world: sw_assoc.all_passed(),
            no_interaction: b_variation <= self.b_variation_tolerance(),
            direct_effect: de_assump_gap.map(|g| g.iter().all(|c| c.passed)),
        };
        Ok(AuditReport { cw_assoc, sw_assoc, b_variation, de_assump_gap, n: self.interaction_n, flags })
    }
}

/// Pass/fail verdicts; `true` means no evidence against the assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditFlags {
    pub cross_world: bool,
    pub single_world: bool,
    pub no_interaction: bool,
    /// `None` when some `M(0)` stratum is empty.
    pub direct_effect: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub cw_assoc: [Check; 2],
    pub sw_assoc: SingleWorldChecks,
    pub b_variation: f64,
    pub de_assump_gap: Option<[Check; 2]>,
    pub n: u64,
    pub flags: AuditFlags,
}

fn accumulate_counterfactuals(units: &[CounterfactualUnit]) -> AuditAccumulator {
    let mut acc = AuditAccumulator::default();
    for u in units {
        acc.push_counterfactuals(u);
    }
    acc
}

pub fn cross_world_diagnostic(units: &[CounterfactualUnit], kind: OutcomeKind) -> [Check; 2] {
    accumulate_counterfactuals(units).cross_world(kind)
}

pub fn single_world_diagnostic(units: &[CounterfactualUnit], assignments: &[u8]) -> Result<SingleWorldChecks> {
    check_assignments(units, assignments)?;
    let mut acc = AuditAccumulator::default();
    for (u, &a) in units.iter().zip(assignments) {
        acc.push_assignment(u, a);
    }
    Ok(acc.single_world())
}

pub fn no_interaction_diagnostic(units: &[CounterfactualUnit]) -> f64 {
    accumulate_counterfactuals(units).b_variation()
}

pub fn direct_effect_assumption_diagnostic(units: &[CounterfactualUnit]) -> Result<[Check; 2]> {
    accumulate_counterfactuals(units).direct_effect_gap()
}

fn check_assignments(units: &[CounterfactualUnit], assignments: &[u8]) -> Result<()> {
    if units.len() != assignments.len() {
        return Err(Error::InvalidInput(alloc::format!(
            "{} units but {} assignments",
            units.len(),
            assignments.len()
        )));
    }
    if assignments.iter().any(|&a| a > 1) {
        return Err(Error::InvalidInput("assignments must be 0 or 1".into()));
    }
    Ok(())
}

/// Full audit of a given sample of units and assignments.
pub fn audit_units(units: &[CounterfactualUnit], assignments: &[u8], kind: OutcomeKind) -> Result<AuditReport> {
    check_assignments(units, assignments)?;
    let mut acc = AuditAccumulator::default();
    for (u, &a) in units.iter().zip(assignments) {
        acc.push(u, a);
    }
    acc.finish(kind)
}

/// One block of simulated units with fair-coin assignments, matching
/// [`crate::model::simulate_units`] and [`crate::model::assignments`].
pub fn audit_block(config: &ModelConfig, seed: u64, block: u64, len: u64) -> AuditAccumulator {
    let mut stream = block_stream(seed, block);
    let mut aux = aux_stream(seed, block);
    let mut acc = AuditAccumulator::default();
    for _ in 0..len {
        let unit = sample_unit(config, &mut stream);
        let a = u8::from(rng::bernoulli(&mut aux, 0.5));
        acc.push(&unit, a);
    }
    acc
}

/// Streams `n` simulated units through the audit without storing them.
pub fn audit_model(config: &ModelConfig, n: u64, seed: u64) -> Result<AuditReport> {
    let config = config.validate()?;
    let mut acc = AuditAccumulator::default();
    for b in 0..block_count(n) {
        acc.merge(&audit_block(&config, seed, b, block_len(n, b)));
    }
    acc.finish(config.outcome_kind)
}

/// Which causal structures a scenario contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScenarioFlags {
    /// A treatment-induced confounder `L` of the mediator and outcome.
    pub has_intermediate_confounder: bool,
    /// A latent `U` acting on `M(0)` and `Y(1, m)` across worlds.
    pub has_crossworld_confounder: bool,
    pub lsem_assumed: bool,
    pub all_binary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    PointNonparametric,
    PointLsem,
    BoundsOnly,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::PointNonparametric => "point_nonparametric",
            Strategy::PointLsem => "point_lsem",
            Strategy::BoundsOnly => "bounds_only",
        }
    }
}

/// Rule table: no confounding of either kind gives nonparametric point
/// identification, a linear model rescues point identification, binary
/// variables leave the bounds, and anything else has no strategy.
pub fn classify_identification(flags: ScenarioFlags) -> Option<Strategy> {
    let confounded = flags.has_intermediate_confounder || flags.has_crossworld_confounder;
    if !confounded {
        Some(Strategy::PointNonparametric)
    } else if flags.lsem_assumed {
        Some(Strategy::PointLsem)
    } else if flags.all_binary {
        Some(Strategy::BoundsOnly)
    } else {
        None
    }
}

/// Units paired with assignments, for callers that hold samples in memory.
pub fn units_with_assignments(config: &ModelConfig, n: u64, seed: u64) -> (Vec<CounterfactualUnit>, Vec<u8>) {
    (crate::model::simulate_units(config, n, seed), crate::model::assignments(n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compose_nested, Coupling};
    use proptest::prelude::*;

    fn continuous(p: [f64; 9]) -> ModelConfig {
        ModelConfig::from_params(OutcomeKind::Continuous, p)
    }

    fn unit(m: [u8; 2], y: [[f64; 2]; 2]) -> CounterfactualUnit {
        CounterfactualUnit { u: 0.0, eps_m: [0.0; 2], eps_y: [[0.0; 2]; 2], m, y }
    }

    #[test]
    fn group_pair_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
        let mut whole = GroupPair::default();
        let mut left = GroupPair::default();
        let mut right = GroupPair::default();
        for (i, &x) in xs.iter().enumerate() {
            whole.push(i % 3 == 0, x);
            if i < 400 { left.push(i % 3 == 0, x) } else { right.push(i % 3 == 0, x) }
        }
        left.merge(&right);
        let (a, b) = (whole.contrast(), left.contrast());
        assert!((a.statistic - b.statistic).abs() < 1e-12);
        assert!((a.se - b.se).abs() < 1e-12);
    }

    #[test]
    fn identical_units_give_exact_zeros() {
        let u = unit([1, 0], [[0.1, 0.7], [0.3, 0.9]]);
        let report = audit_units(&[u, u], &[0, 1], OutcomeKind::Continuous).unwrap();
        assert!(report.cw_assoc.iter().all(|c| c.statistic == 0.0 && c.passed));
        assert!(report.sw_assoc.checks.iter().all(|c| c.statistic == 0.0 && c.passed));
        assert!(report.de_assump_gap.is_none());
        assert!(report.b_variation < 1e-15 && report.flags.no_interaction);
    }

    #[test]
    fn constant_columns_are_exactly_zero_despite_group_sizes() {
        let units: Vec<_> = (0..7).map(|i| unit([(i % 2) as u8, 1], [[0.1; 2]; 2])).collect();
        let a = [0, 0, 0, 0, 0, 1, 1];
        let sw = single_world_diagnostic(&units, &a).unwrap();
        assert!(sw.checks[2..].iter().all(|c| c.statistic == 0.0));
        assert!(cross_world_diagnostic(&units, OutcomeKind::Continuous).iter().all(|c| c.statistic == 0.0));
        let gap = direct_effect_assumption_diagnostic(&units).unwrap();
        assert!(gap.iter().all(|c| c.statistic == 0.0));
    }

    #[test]
    fn binary_covariance_identity() {
        let units = [
            unit([0, 0], [[0.0; 2], [1.0, 3.0]]),
            unit([1, 0], [[0.0; 2], [2.0, 1.0]]),
            unit([1, 0], [[0.0; 2], [4.0, 2.0]]),
            unit([0, 0], [[0.0; 2], [0.0, 5.0]]),
        ];
        let cw = cross_world_diagnostic(&units, OutcomeKind::Continuous);
        // cov(x, y) with x = (0,1,1,0), y = (1,2,4,0): mean y = 7/4.
        let cov0 = ((-0.5) * (1.0 - 1.75) + 0.5 * (2.0 - 1.75) + 0.5 * (4.0 - 1.75) + (-0.5) * (0.0 - 1.75)) / 3.0;
        assert!((cw[0].statistic - cov0).abs() < 1e-12);
        let diff = cross_world_diagnostic(&units, OutcomeKind::Binary);
        assert!((diff[0].statistic - 2.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_stratum() {
        let units = [unit([0, 1], [[0.0, 1.0], [2.0, 3.0]]); 3];
        assert_eq!(direct_effect_assumption_diagnostic(&units), Err(Error::DegenerateStratum { m: 1 }));
    }

    #[test]
    fn mismatched_assignments() {
        let units = [unit([0, 1], [[0.0; 2]; 2]); 3];
        assert!(matches!(single_world_diagnostic(&units, &[0, 1]), Err(Error::InvalidInput(_))));
        assert!(matches!(single_world_diagnostic(&units, &[0, 1, 2]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn additive_continuous_model_has_no_interaction() {
        let cfg = continuous([0.3, 0.5, -0.7, 50.0, 5.0, -20.0, -8.0, 0.0, 0.0]);
        let units = crate::model::simulate_units(&cfg, 5000, 1);
        assert!(no_interaction_diagnostic(&units) < 1e-9);
        let cfg = continuous([0.3, 0.5, -0.7, 50.0, 5.0, -20.0, -8.0, -10.0, 0.0]);
        let units = crate::model::simulate_units(&cfg, 5000, 1);
        assert!((no_interaction_diagnostic(&units) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rerandomised_noise_breaks_additivity() {
        let cfg = continuous([0.3, 0.5, -0.7, 50.0, 5.0, -20.0, -8.0, 0.0, 0.0]).with_coupling(Coupling::IndependentRedraw);
        let units = crate::model::simulate_units(&cfg, 2000, 1);
        assert!(no_interaction_diagnostic(&units) > 0.1);
    }

    #[test]
    fn confounded_assignment_is_detected() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, [0.4, 0.5, -0.5, -0.4, 0.7, 0.6, -0.3, 0.1, 0.5]);
        let units = crate::model::simulate_units(&cfg, 20_000, 5);
        let a: Vec<u8> = units.iter().map(|u| u8::from(u.u > 2.0)).collect();
        let sw = single_world_diagnostic(&units, &a).unwrap();
        assert!(!sw.checks[0].passed, "M(0) should depend on A through U");
        assert!(!sw.checks[4].passed && !sw.checks[5].passed, "Y(1,m) should depend on A through U");
    }

    #[test]
    fn streamed_audit_matches_in_memory_audit() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, [0.4, 0.5, -0.5, -0.4, 0.7, 0.6, -0.3, 0.1, 0.5]);
        let n = rng::BLOCK_SIZE + 1234;
        let streamed = audit_model(&cfg, n, 9).unwrap();
        let (units, a) = units_with_assignments(&cfg, n, 9);
        let direct = audit_units(&units, &a, cfg.outcome_kind).unwrap();
        assert_eq!(streamed.n, direct.n);
        for (x, y) in streamed.sw_assoc.checks.iter().zip(direct.sw_assoc.checks.iter()) {
            assert!((x.statistic - y.statistic).abs() < 1e-12);
        }
        assert!((streamed.b_variation - direct.b_variation).abs() < 1e-12);
        // Shared noise composes Y(1, M(0)) from the same table the audit reads.
        let u = units[0];
        assert_eq!(compose_nested(&u, 1, 0), u.y_am(1, u.m0()));
    }

    #[test]
    fn classification_rules() {
        let none = ScenarioFlags::default();
        assert_eq!(classify_identification(none), Some(super::Strategy::PointNonparametric));
        let cw = ScenarioFlags { has_crossworld_confounder: true, all_binary: true, ..none };
        assert_eq!(classify_identification(cw), Some(super::Strategy::BoundsOnly));
        let lsem = ScenarioFlags { has_intermediate_confounder: true, lsem_assumed: true, ..none };
        assert_eq!(classify_identification(lsem), Some(super::Strategy::PointLsem));
        let stuck = ScenarioFlags { has_intermediate_confounder: true, ..none };
        assert_eq!(classify_identification(stuck), None);
    }

    #[test]
    fn too_few_units() {
        let u = unit([0, 1], [[0.0; 2]; 2]);
        assert_eq!(audit_units(&[u], &[0], OutcomeKind::Binary), Err(Error::TooFewUnits { needed: 2, got: 1 }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn affine_outcome_maps_scale_statistics(scale in 0.1f64..20.0, shift in -50.0f64..50.0, seed in 0u64..1000) {
            let cfg = continuous([0.3, 0.5, -0.7, 50.0, 5.0, -20.0, -8.0, -12.0, 6.0]);
            let units = crate::model::simulate_units(&cfg, 400, seed);
            let a = crate::model::assignments(400, seed);
            let mapped: Vec<_> = units.iter().map(|u| {
                let mut v = *u;
                for row in v.y.iter_mut() { for y in row.iter_mut() { *y = scale * *y + shift; } }
                v
            }).collect();
            let base = audit_units(&units, &a, OutcomeKind::Continuous).unwrap();
            let moved = audit_units(&mapped, &a, OutcomeKind::Continuous).unwrap();
            for (x, y) in base.cw_assoc.iter().zip(moved.cw_assoc.iter()) {
                prop_assert!((y.statistic - scale * x.statistic).abs() <= 1e-8 * (1.0 + y.statistic.abs()));
                prop_assert!((x.z() - y.z()).abs() <= 1e-6 * (1.0 + x.z()));
                prop_assert_eq!(x.passed, y.passed);
            }
            prop_assert_eq!(&base.sw_assoc.checks[..2], &moved.sw_assoc.checks[..2]);
            for (x, y) in base.sw_assoc.checks[2..].iter().zip(moved.sw_assoc.checks[2..].iter()) {
                prop_assert!((y.statistic - scale * x.statistic).abs() <= 1e-8 * (1.0 + y.statistic.abs()));
                prop_assert!((x.z() - y.z()).abs() <= 1e-6 * (1.0 + x.z()));
            }
        }
    }
}
