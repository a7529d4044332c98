//! Parallel drivers. Work is split by grid setting or by random-number
//! block, and results are gathered in index order, so output does not depend
//! on the number of workers.

use std::ops::Range;

use rayon::prelude::*;

use crossworld_core::audit::{audit_block, AuditAccumulator, AuditReport};
use crossworld_core::gformula::{gformula_from_cells, CellStats};
use crossworld_core::grid::{evaluate_monte_carlo, evaluate_setting, GridResultRow, GridSpec, McEvaluation};
use crossworld_core::model::{simulate_block, EffectEstimates, ModelConfig, SimulationBlock};
use crossworld_core::oracle::Oracle;
use crossworld_core::rng::{block_count, block_len};
use crossworld_core::Error as CoreError;

use crate::error::{CliError, Result};

/// A pool with `jobs` workers, or rayon's default when `jobs` is 0.
pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

/// Evaluates every setting of `spec` with `spec.parallelism` workers.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<GridResultRow>> {
    spec.validate()?;
    run_grid_range(spec, 0..spec.size())
}

/// Evaluates settings `range` of `spec`. On failure the error of the
/// lowest failing index is returned.
pub fn run_grid_range(spec: &GridSpec, range: Range<u64>) -> Result<Vec<GridResultRow>> {
    spec.validate()?;
    if range.end > spec.size() {
        return Err(CliError::Usage(format!("setting range ends at {} but the grid has {}", range.end, spec.size())));
    }
    let oracle = Oracle::new(spec.quadrature_nodes)?;
    let pool = thread_pool(spec.parallelism)?;
    let results: Vec<_> =
        pool.install(|| range.into_par_iter().map(|i| evaluate_setting(spec, &oracle, i)).collect());
    Ok(results.into_iter().collect::<Result<Vec<_>, CoreError>>()?)
}

/// Indices of the `k` rows with the largest `|bias_nde|`, largest first;
/// ties go to the lower index.
pub fn top_k_indices(rows: &[GridResultRow], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| rows[j].bias_nde.abs().total_cmp(&rows[i].bias_nde.abs()).then(i.cmp(&j)));
    order.truncate(k);
    order
}

/// Re-evaluates the `k` most biased rows by Monte Carlo at `spec.mc_n`,
/// with each setting's own seed.
pub fn confirm_top_k(spec: &GridSpec, rows: &[GridResultRow], k: usize) -> Result<Vec<McEvaluation>> {
    let pool = thread_pool(spec.parallelism)?;
    let picks = top_k_indices(rows, k);
    let results: Vec<_> = pool.install(|| {
        picks
            .par_iter()
            .map(|&i| {
                let index = rows[i].index;
                let cfg = with_params(&spec.base, rows[i].params);
                evaluate_monte_carlo(&cfg, spec.mc_n, spec.setting_seed(index), index)
                    .map_err(|e| CoreError::Setting { index, source: Box::new(e) })
            })
            .collect()
    });
    Ok(results.into_iter().collect::<Result<Vec<_>, CoreError>>()?)
}

fn with_params(base: &ModelConfig, p: [f64; 9]) -> ModelConfig {
    ModelConfig {
        alpha0: p[0],
        alpha1: p[1],
        alpha2: p[2],
        beta0: p[3],
        beta1: p[4],
        beta2: p[5],
        beta3: p[6],
        beta4: p[7],
        beta5: p[8],
        ..*base
    }
}

/// Maps every random-number block of an `n`-unit simulation in parallel
/// and folds the results in block order.
pub fn reduce_blocks<T, F, M>(n: u64, jobs: usize, init: T, map: F, mut merge: M) -> Result<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
    M: FnMut(&mut T, T),
{
    let pool = thread_pool(jobs)?;
    let parts: Vec<T> =
        pool.install(|| (0..block_count(n)).into_par_iter().map(|b| map(b, block_len(n, b))).collect());
    let mut acc = init;
    for p in parts {
        merge(&mut acc, p);
    }
    Ok(acc)
}

/// Truth and factual cell statistics from one simulated sample.
pub fn simulate(cfg: &ModelConfig, n: u64, seed: u64, jobs: usize) -> Result<(EffectEstimates, CellStats)> {
    let cfg = cfg.validate()?;
    if n == 0 {
        return Err(CoreError::InvalidInput("sample size must be at least 1".into()).into());
    }
    let acc = reduce_blocks(
        n,
        jobs,
        SimulationBlock::default(),
        |b, len| simulate_block(&cfg, seed, b, len),
        |acc, part| acc.merge(&part),
    )?;
    Ok(acc.finish()?)
}

/// Monte Carlo truth, g-formula estimate and cell statistics.
pub fn simulate_and_estimate(
    cfg: &ModelConfig,
    n: u64,
    seed: u64,
    jobs: usize,
) -> Result<(EffectEstimates, EffectEstimates, CellStats)> {
    let (truth, cells) = simulate(cfg, n, seed, jobs)?;
    let estimate = gformula_from_cells(&cells)?;
    Ok((truth, estimate, cells))
}

/// Streams `n` simulated units through the assumption audit.
pub fn audit(cfg: &ModelConfig, n: u64, seed: u64, jobs: usize) -> Result<AuditReport> {
    let cfg = cfg.validate()?;
    let acc = reduce_blocks(
        n,
        jobs,
        AuditAccumulator::default(),
        |b, len| audit_block(&cfg, seed, b, len),
        |acc, part| acc.merge(&part),
    )?;
    Ok(acc.finish(cfg.outcome_kind)?)
}
