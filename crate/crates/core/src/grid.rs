//! Parameter grids over the nine structural coefficients, per-setting
//! evaluation and bias summaries.
//!
//! Settings are enumerated in mixed radix with `α₀` varying fastest and
//! `β₅` slowest. Evaluation here is sequential; callers parallelise over
//! setting indices with [`evaluate_setting`].

use alloc::vec::Vec;

use crate::bounds::{bounds_input_from_cells, compute_nde_bounds};
use crate::gformula::{gformula_from_cells, gformula_standard_errors};
use crate::math::{linspace, ln, logit};
use crate::model::{simulate_block, EffectEstimates, ModelConfig, OutcomeKind, SimulationBlock};
use crate::oracle::{bounds_input_from_report, Oracle};
use crate::quadrature::DEFAULT_NODES;
use crate::rng::{block_count, block_len, mix64};
use crate::{Error, Result};

/// The binary vector `(α₀, α₁, α₂, β₀, …, β₅)` with strong cross-world
/// confounding used for the extreme row of the worst-case table.
pub const EXTREME_PARAMETERS: [f64; 9] = [-3.5, 0.5, 2.5, -4.0, -1.0, 3.5, 3.25, 3.0, -5.0];

/// Default cap on grid size before an explicit override is needed.
pub const DEFAULT_MAX_SETTINGS: u64 = 1 << 20;

/// Largest Monte Carlo grid run without `allow_full_mc`.
pub const DEFAULT_MC_CAP: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GridMethod {
    #[default]
    Quadrature,
    MonteCarlo,
}

impl GridMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridMethod::Quadrature => "quadrature",
            GridMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Outcome kind, `U` law, outcome noise and coupling; coefficients are
    /// overwritten per setting.
    pub base: ModelConfig,
    /// Values for each parameter in [`crate::model::PARAMETER_NAMES`] order.
    pub values: [Vec<f64>; 9],
    pub method: GridMethod,
    pub mc_n: u64,
    pub base_seed: u64,
    /// Worker count; 0 lets the runner choose.
    pub parallelism: usize,
    pub quadrature_nodes: usize,
    pub max_settings: u64,
    /// Lifts `max_settings`.
    pub allow_large: bool,
    pub mc_cap: u64,
    /// Allows Monte Carlo grids above `mc_cap`.
    pub allow_full_mc: bool,
}

/// `n` points evenly spaced from `ln a` to `ln b`.
fn log_seq(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(ln(a), ln(b), n)
}

/// `n` points evenly spaced from `logit a` to `logit b`.
fn logit_seq(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(logit(a), logit(b), n)
}

impl GridSpec {
    pub fn binary_default() -> Self {
        let mut beta4 = log_seq(0.7, 1.4, 4);
        beta4.push(0.0);
        Self::with_values(
            OutcomeKind::Binary,
            [
                logit_seq(0.3, 0.8, 4),
                log_seq(0.7, 2.5, 4),
                log_seq(0.3, 0.9, 4),
                logit_seq(0.3, 0.6, 4),
                log_seq(0.5, 3.0, 4),
                log_seq(1.0, 3.5, 4),
                log_seq(0.5, 0.9, 4),
                beta4,
                log_seq(1.0, 2.0, 4),
            ],
        )
    }

    pub fn continuous_default() -> Self {
        Self::with_values(
            OutcomeKind::Continuous,
            [
                logit_seq(0.3, 0.8, 4),
                log_seq(0.7, 2.5, 4),
                log_seq(0.3, 0.9, 4),
                linspace(40.0, 60.0, 4),
                linspace(-10.0, 10.0, 4),
                linspace(-20.0, 10.0, 4),
                linspace(-15.0, -5.0, 4),
                linspace(-20.0, -10.0, 4),
                linspace(-15.0, 15.0, 4),
            ],
        )
    }

    pub fn default_for(kind: OutcomeKind) -> Self {
        match kind {
            OutcomeKind::Binary => Self::binary_default(),
            OutcomeKind::Continuous => Self::continuous_default(),
        }
    }

    pub fn with_values(kind: OutcomeKind, values: [Vec<f64>; 9]) -> Self {
        GridSpec {
            base: ModelConfig { outcome_kind: kind, ..ModelConfig::default() },
            values,
            method: GridMethod::Quadrature,
            mc_n: 1_000_000,
            base_seed: 0,
            parallelism: 0,
            quadrature_nodes: DEFAULT_NODES,
            max_settings: DEFAULT_MAX_SETTINGS,
            allow_large: false,
            mc_cap: DEFAULT_MC_CAP,
            allow_full_mc: false,
        }
    }

    /// A single-setting grid at `params`.
    pub fn single(kind: OutcomeKind, params: [f64; 9]) -> Self {
        Self::with_values(kind, params.map(|v| alloc::vec![v]))
    }

    pub fn outcome_kind(&self) -> OutcomeKind {
        self.base.outcome_kind
    }

    /// Number of settings, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.values.iter().fold(1u64, |acc, v| acc.saturating_mul(v.len() as u64))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in crate::model::PARAMETER_NAMES.iter().zip(self.values.iter()) {
            if v.is_empty() {
                return Err(Error::InvalidConfig(alloc::format!("value list for {name} is empty")));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig(alloc::format!("value list for {name} has a non-finite entry")));
            }
        }
        if self.mc_n == 0 {
            return Err(Error::InvalidConfig("mc_n must be at least 1".into()));
        }
        self.base.validate()?;
        Oracle::new(self.quadrature_nodes)?;
        let size = self.size();
        if !self.allow_large && size > self.max_settings {
            return Err(Error::GridTooLarge { size, cap: self.max_settings });
        }
        if self.method == GridMethod::MonteCarlo && !self.allow_full_mc && size > self.mc_cap {
            return Err(Error::MonteCarloGridNotAllowed { size, cap: self.mc_cap });
        }
        Ok(())
    }

    /// Parameters of setting `index`, `α₀` fastest.
    pub fn params(&self, index: u64) -> [f64; 9] {
        let mut rest = index;
        let mut out = [0.0; 9];
        for (slot, v) in out.iter_mut().zip(self.values.iter()) {
            let len = v.len() as u64;
            *slot = v[(rest % len) as usize];
            rest /= len;
        }
        out
    }

    pub fn setting(&self, index: u64) -> ModelConfig {
        let p = self.params(index);
        let mut cfg = ModelConfig::from_params(self.base.outcome_kind, p);
        cfg.u_mean = self.base.u_mean;
        cfg.u_sd = self.base.u_sd;
        cfg.y_noise_sd = self.base.y_noise_sd;
        cfg.coupling = self.base.coupling;
        cfg
    }

    /// Per-setting Monte Carlo seed.
    pub fn setting_seed(&self, index: u64) -> u64 {
        mix64(self.base_seed, index)
    }
}

/// Every setting of a validated spec, in index order.
pub fn build_grid(spec: &GridSpec) -> Result<Vec<ModelConfig>> {
    spec.validate()?;
    Ok((0..spec.size()).map(|i| spec.setting(i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResultRow {
    pub index: u64,
    pub params: [f64; 9],
    pub true_nde: f64,
    pub true_nie: f64,
    pub est_nde: f64,
    pub est_nie: f64,
    pub bias_nde: f64,
    pub bias_nie: f64,
    pub bounds_lower: Option<f64>,
    pub bounds_upper: Option<f64>,
    pub method: GridMethod,
}

impl GridResultRow {
    pub fn beta5(&self) -> f64 {
        self.params[8]
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        Some((self.bounds_lower?, self.bounds_upper?))
    }
}

/// Monte Carlo evaluation of one setting with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEvaluation {
    pub row: GridResultRow,
    pub truth: EffectEstimates,
    pub estimate: EffectEstimates,
    /// Truth and estimate errors combined in quadrature; conservative since
    /// both come from the same units.
    pub se_bias_nde: f64,
}

/// Closed-form evaluation of one configuration.
pub fn evaluate_quadrature(oracle: &Oracle, cfg: &ModelConfig, index: u64) -> Result<GridResultRow> {
    let r = oracle.report(cfg)?;
    let bounds = if cfg.is_binary() {
        Some(compute_nde_bounds(&bounds_input_from_report(cfg, &r)?)?)
    } else {
        None
    };
    Ok(GridResultRow {
        index,
        params: cfg.params(),
        true_nde: r.truth.nde,
        true_nie: r.truth.nie,
        est_nde: r.estimand.nde,
        est_nie: r.estimand.nie,
        bias_nde: r.bias_nde,
        bias_nie: r.bias_nie,
        bounds_lower: bounds.map(|b| b.lower),
        bounds_upper: bounds.map(|b| b.upper),
        method: GridMethod::Quadrature,
    })
}

/// Simulation of `n` units of one configuration: truth from the full
/// counterfactual table, estimate from the factual projection.
pub fn evaluate_monte_carlo(cfg: &ModelConfig, n: u64, seed: u64, index: u64) -> Result<McEvaluation> {
    let mut acc = SimulationBlock::default();
    for b in 0..block_count(n) {
        acc.merge(&simulate_block(cfg, seed, b, block_len(n, b)));
    }
    let (truth, cells) = acc.finish()?;
    let mut estimate = gformula_from_cells(&cells)?;
    let est_se = gformula_standard_errors(&cells)?;
    estimate.mc_se = Some(est_se);
    let bounds = if cfg.is_binary() {
        Some(compute_nde_bounds(&bounds_input_from_cells(&cells)?)?)
    } else {
        None
    };
    let truth_se = truth.mc_se.map_or(0.0, |s| s.nde);
    let row = GridResultRow {
        index,
        params: cfg.params(),
        true_nde: truth.nde,
        true_nie: truth.nie,
        est_nde: estimate.nde,
        est_nie: estimate.nie,
        bias_nde: truth.nde - estimate.nde,
        bias_nie: truth.nie - estimate.nie,
        bounds_lower: bounds.map(|b| b.lower),
        bounds_upper: bounds.map(|b| b.upper),
        method: GridMethod::MonteCarlo,
    };
    let se_bias_nde = crate::math::sqrt(truth_se * truth_se + est_se.nde * est_se.nde);
    Ok(McEvaluation { row, truth, estimate, se_bias_nde })
}

/// Evaluates setting `index` of `spec` by the spec's method. Errors carry
/// the setting index.
pub fn evaluate_setting(spec: &GridSpec, oracle: &Oracle, index: u64) -> Result<GridResultRow> {
    let cfg = spec.setting(index);
    let out = match spec.method {
        GridMethod::Quadrature => evaluate_quadrature(oracle, &cfg, index),
        GridMethod::MonteCarlo => {
            evaluate_monte_carlo(&cfg, spec.mc_n, spec.setting_seed(index), index).map(|e| e.row)
        }
    };
    out.map_err(|e| e.in_setting(index))
}

/// Sequential evaluation of the whole grid.
pub fn run_grid_sequential(spec: &GridSpec) -> Result<Vec<GridResultRow>> {
    spec.validate()?;
    let oracle = Oracle::new(spec.quadrature_nodes)?;
    (0..spec.size()).map(|i| evaluate_setting(spec, &oracle, i)).collect()
}

/// Extremes of `bias_nde` within a set of rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasRange {
    pub count: u64,
    pub min: GridResultRow,
    pub max: GridResultRow,
}

impl BiasRange {
    /// The row with the largest `|bias_nde|`; ties go to the maximum.
    pub fn max_abs(&self) -> GridResultRow {
        if self.min.bias_nde.abs() > self.max.bias_nde.abs() {
            self.min
        } else {
            self.max
        }
    }

    pub fn max_abs_bias(&self) -> f64 {
        self.max_abs().bias_nde.abs()
    }

    fn from_rows<'a>(rows: impl Iterator<Item = &'a GridResultRow>) -> Option<Self> {
        let mut out: Option<BiasRange> = None;
        for r in rows {
            match &mut out {
                None => out = Some(BiasRange { count: 1, min: *r, max: *r }),
                Some(acc) => {
                    acc.count += 1;
                    if r.bias_nde < acc.min.bias_nde {
                        acc.min = *r;
                    }
                    if r.bias_nde > acc.max.bias_nde {
                        acc.max = *r;
                    }
                }
            }
        }
        out
    }
}

/// Largest `|bias_nde|` for one `(β₄, β₅)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionCell {
    pub beta4: f64,
    pub beta5: f64,
    pub count: u64,
    pub max_abs_bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasSummary {
    pub overall: BiasRange,
    pub beta5_zero: Option<BiasRange>,
    pub beta5_nonzero: Option<BiasRange>,
    /// Cells ordered by `β₅` then `β₄`.
    pub interaction: Vec<InteractionCell>,
}

impl BiasSummary {
    /// Worst-case rows: the largest `|bias|` with `β₅ = 0`, then with
    /// `β₅ ≠ 0`.
    pub fn worst_cases(&self) -> Vec<GridResultRow> {
        [self.beta5_zero, self.beta5_nonzero].iter().flatten().map(|r| r.max_abs()).collect()
    }
}

pub fn summarize_bias(rows: &[GridResultRow]) -> Result<BiasSummary> {
    let overall = BiasRange::from_rows(rows.iter()).ok_or(Error::EmptyData)?;
    let beta5_zero = BiasRange::from_rows(rows.iter().filter(|r| r.beta5() == 0.0));
    let beta5_nonzero = BiasRange::from_rows(rows.iter().filter(|r| r.beta5() != 0.0));
    let mut interaction: Vec<InteractionCell> = Vec::new();
    for r in rows {
        let (b4, b5) = (r.params[7], r.params[8]);
        let abs = r.bias_nde.abs();
        match interaction.iter_mut().find(|c| c.beta4 == b4 && c.beta5 == b5) {
            Some(c) => {
                c.count += 1;
                c.max_abs_bias = c.max_abs_bias.max(abs);
            }
            None => interaction.push(InteractionCell { beta4: b4, beta5: b5, count: 1, max_abs_bias: abs }),
        }
    }
    interaction.sort_by(|x, y| x.beta5.total_cmp(&y.beta5).then(x.beta4.total_cmp(&y.beta4)));
    Ok(BiasSummary { overall, beta5_zero, beta5_nonzero, interaction })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure5Point {
    pub beta5: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub bias_nde: f64,
}

/// Bias along a `β₅` sweep with `β₃` and `β₄` at each combination of the
/// given levels and the other six parameters fixed from `worst`.
pub fn figure5_slice(
    oracle: &Oracle,
    base: &ModelConfig,
    worst: [f64; 9],
    beta3_levels: &[f64],
    beta4_levels: &[f64],
    beta5_sweep: &[f64],
) -> Result<Vec<Figure5Point>> {
    let mut out = Vec::with_capacity(beta3_levels.len() * beta4_levels.len() * beta5_sweep.len());
    for &beta3 in beta3_levels {
        for &beta4 in beta4_levels {
            for &beta5 in beta5_sweep {
                let mut p = worst;
                p[6] = beta3;
                p[7] = beta4;
                p[8] = beta5;
                let mut cfg = ModelConfig::from_params(base.outcome_kind, p);
                cfg.u_mean = base.u_mean;
                cfg.u_sd = base.u_sd;
                cfg.y_noise_sd = base.y_noise_sd;
                cfg.coupling = base.coupling;
                let bias_nde = oracle.report(&cfg)?.bias_nde;
                out.push(Figure5Point { beta5, beta3, beta4, bias_nde });
            }
        }
    }
    Ok(out)
}

fn min_max(v: &[f64]) -> [f64; 2] {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    [lo, hi]
}

/// The slice for a grid: worst-case row from `summary`, `β₃` and `β₄` at
/// their grid extremes and `points` evenly spaced `β₅` values spanning
/// the grid's `β₅` range.
pub fn figure5_for_grid(spec: &GridSpec, summary: &BiasSummary, points: usize) -> Result<Vec<Figure5Point>> {
    let oracle = Oracle::new(spec.quadrature_nodes)?;
    let worst = summary.overall.max_abs().params;
    let [lo, hi] = min_max(&spec.values[8]);
    let sweep = if lo == hi { alloc::vec![lo] } else { linspace(lo, hi, points.max(2)) };
    figure5_slice(&oracle, &spec.base, worst, &min_max(&spec.values[6]), &min_max(&spec.values[7]), &sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_binary() -> GridSpec {
        let mut s = GridSpec::binary_default();
        s.values = s.values.map(|v| if v.len() > 2 { alloc::vec![v[0], v[v.len() - 1]] } else { v });
        s
    }

    #[test]
    fn default_sizes() {
        assert_eq!(GridSpec::binary_default().size(), 327_680);
        assert_eq!(GridSpec::continuous_default().size(), 262_144);
        assert_eq!(GridSpec::single(OutcomeKind::Binary, EXTREME_PARAMETERS).size(), 1);
    }

    #[test]
    fn default_lists_match_study_ranges() {
        let b = GridSpec::binary_default();
        assert!((b.values[0][0] - logit(0.3)).abs() < 1e-15 && (b.values[0][3] - logit(0.8)).abs() < 1e-15);
        assert_eq!(b.values[7].len(), 5);
        assert_eq!(b.values[7][4], 0.0);
        assert_eq!(b.values[8][0], 0.0);
        let c = GridSpec::continuous_default();
        assert_eq!(c.values[8], alloc::vec![-15.0, -5.0, 5.0, 15.0]);
        assert_eq!(c.values[3], alloc::vec![40.0, 40.0 + 20.0 / 3.0, 40.0 + 40.0 / 3.0, 60.0]);
    }

    #[test]
    fn alpha0_varies_fastest() {
        let s = GridSpec::binary_default();
        assert_eq!(s.params(0)[0], s.values[0][0]);
        assert_eq!(s.params(1)[0], s.values[0][1]);
        assert_eq!(s.params(1)[1], s.values[1][0]);
        assert_eq!(s.params(4)[1], s.values[1][1]);
        let last = s.params(s.size() - 1);
        for (p, v) in last.iter().zip(s.values.iter()) {
            assert_eq!(*p, *v.last().unwrap());
        }
        let grid = build_grid(&small_binary()).unwrap();
        assert_eq!(grid.len(), 2usize.pow(9));
    }

    #[test]
    fn caps_are_enforced() {
        let mut s = GridSpec::binary_default();
        s.max_settings = 1000;
        assert_eq!(s.validate(), Err(Error::GridTooLarge { size: 327_680, cap: 1000 }));
        s.allow_large = true;
        assert!(s.validate().is_ok());
        s.method = GridMethod::MonteCarlo;
        assert_eq!(s.validate(), Err(Error::MonteCarloGridNotAllowed { size: 327_680, cap: DEFAULT_MC_CAP }));
        s.allow_full_mc = true;
        assert!(s.validate().is_ok());
        let mut e = GridSpec::binary_default();
        e.values[3].clear();
        assert!(matches!(e.validate(), Err(Error::InvalidConfig(_))));
        let mut z = GridSpec::binary_default();
        z.mc_n = 0;
        assert!(matches!(z.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn quadrature_rows_satisfy_row_invariants() {
        let rows = run_grid_sequential(&small_binary()).unwrap();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.index, i as u64);
            assert_eq!(r.bias_nie, -r.bias_nde);
            assert!((r.bias_nde - (r.true_nde - r.est_nde)).abs() < 1e-12);
            let (lo, hi) = r.bounds().unwrap();
            assert!(lo <= r.true_nde && r.true_nde <= hi);
        }
    }

    #[test]
    fn continuous_rows_without_three_way_term_are_unbiased() {
        let mut s = GridSpec::continuous_default();
        s.values[8] = alloc::vec![0.0];
        s.values = s.values.map(|v| alloc::vec![v[0], v[v.len() - 1]]);
        for r in run_grid_sequential(&s).unwrap() {
            assert_eq!(r.bias_nde, 0.0);
            assert!(r.bounds().is_none());
        }
    }

    #[test]
    fn summary_of_one_row() {
        let rows = run_grid_sequential(&GridSpec::single(OutcomeKind::Binary, EXTREME_PARAMETERS)).unwrap();
        let s = summarize_bias(&rows).unwrap();
        assert_eq!(s.overall.min, rows[0]);
        assert_eq!(s.overall.max, rows[0]);
        assert!(s.beta5_zero.is_none());
        assert_eq!(s.worst_cases(), alloc::vec![rows[0]]);
        assert_eq!(summarize_bias(&[]), Err(Error::EmptyData));
    }

    #[test]
    fn summary_strata_and_cross_tab() {
        let rows = run_grid_sequential(&small_binary()).unwrap();
        let s = summarize_bias(&rows).unwrap();
        let zero = s.beta5_zero.unwrap();
        let nonzero = s.beta5_nonzero.unwrap();
        assert_eq!(zero.count + nonzero.count, rows.len() as u64);
        assert_eq!(zero.max_abs().beta5(), 0.0);
        let top = s.interaction.iter().map(|c| c.max_abs_bias).fold(0.0, f64::max);
        assert_eq!(top, s.overall.max_abs_bias());
        assert_eq!(s.interaction.iter().map(|c| c.count).sum::<u64>(), rows.len() as u64);
    }

    #[test]
    fn figure5_endpoints_match_grid_rows() {
        let spec = small_binary();
        let rows = run_grid_sequential(&spec).unwrap();
        let summary = summarize_bias(&rows).unwrap();
        let pts = figure5_for_grid(&spec, &summary, 11).unwrap();
        assert_eq!(pts.len(), 2 * 2 * 11);
        let worst = summary.overall.max_abs();
        let hit = pts
            .iter()
            .find(|p| p.beta3 == worst.params[6] && p.beta4 == worst.params[7] && p.beta5 == worst.beta5())
            .expect("worst row lies on the slice");
        assert_eq!(hit.bias_nde, worst.bias_nde);
    }

    #[test]
    fn continuous_slice_is_linear_in_beta5() {
        let spec = GridSpec::continuous_default();
        let oracle = Oracle::default();
        let worst = spec.params(12345);
        let sweep = linspace(-15.0, 15.0, 7);
        let pts = figure5_slice(&oracle, &spec.base, worst, &[-15.0], &[-20.0], &sweep).unwrap();
        let cfg = spec.setting(12345);
        let (g, psi) = oracle.gamma_psi(&cfg).unwrap();
        for p in pts {
            assert!((p.bias_nde - p.beta5 * (psi - cfg.u_mean * g)).abs() < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_setting_tracks_quadrature() {
        let cfg = ModelConfig::from_params(OutcomeKind::Binary, [0.4, 0.5, -0.5, -0.4, 0.7, 0.6, -0.3, 0.1, 0.5]);
        let mc = evaluate_monte_carlo(&cfg, 200_000, 77, 0).unwrap();
        let q = evaluate_quadrature(&Oracle::default(), &cfg, 0).unwrap();
        assert!((mc.row.bias_nde - q.bias_nde).abs() < 4.0 * mc.se_bias_nde, "{mc:?} {q:?}");
        assert!((mc.truth.nde - q.true_nde).abs() < 4.0 * mc.truth.mc_se.unwrap().nde);
        assert!((mc.estimate.nde - q.est_nde).abs() < 4.0 * mc.estimate.mc_se.unwrap().nde);
    }

    #[test]
    fn setting_errors_carry_the_index() {
        let mut s = GridSpec::single(OutcomeKind::Binary, [-40.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        s.method = GridMethod::MonteCarlo;
        s.mc_n = 50;
        let err = run_grid_sequential(&s).unwrap_err();
        assert!(matches!(err, Error::Setting { index: 0, .. }), "{err:?}");
    }
}
