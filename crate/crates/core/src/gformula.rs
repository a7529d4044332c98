//! Mediational g-formula from observed `(A, M, Y)` data.

use alloc::vec::Vec;

use crate::math;
use crate::model::{EffectEstimates, EstimateMethod, ObservedRow, OutcomeKind, StandardErrors};
use crate::{Error, Result};

/// Factual rows with binary treatment and mediator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservedDataset {
    rows: Vec<ObservedRow>,
}

impl ObservedDataset {
    /// Wraps rows after checking `A, M ∈ {0, 1}` and finite `Y`.
    pub fn new(rows: Vec<ObservedRow>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.a > 1 || r.m > 1 || !r.y.is_finite() {
                return Err(Error::InvalidInput(alloc::format!(
                    "row {i}: A and M must be 0/1 and Y finite"
                )));
            }
        }
        Ok(ObservedDataset { rows })
    }

    pub fn rows(&self) -> &[ObservedRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Binary iff every outcome is exactly 0 or 1.
    pub fn outcome_kind(&self) -> OutcomeKind {
        if self.rows.iter().all(|r| r.y == 0.0 || r.y == 1.0) {
            OutcomeKind::Binary
        } else {
            OutcomeKind::Continuous
        }
    }

    pub fn into_rows(self) -> Vec<ObservedRow> {
        self.rows
    }
}

/// Per-cell sufficient statistics for the g-formula and the NDE bounds.
///
/// Means of empty cells (and conditional probabilities of empty arms) are NaN;
/// [`CellStats::empty_cells`] reports which cells are affected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    /// `E{Y | A = a, M = m}`, indexed `[a][m]`.
    pub mean_y: [[f64; 2]; 2],
    /// Sample variance of `Y` within each cell (0 for singleton cells).
    pub var_y: [[f64; 2]; 2],
    /// `p(M = 1 | A = a)`.
    pub p_m1_given_a: [f64; 2],
    /// `E{Y | A = a}`.
    pub mean_y_given_a: [f64; 2],
    pub counts: [[u64; 2]; 2],
}

impl CellStats {
    pub fn arm_count(&self, a: u8) -> u64 {
        let a = usize::from(a);
        self.counts[a][0] + self.counts[a][1]
    }

    pub fn total(&self) -> u64 {
        self.arm_count(0) + self.arm_count(1)
    }

    /// Cells `(a, m)` without rows, in `(a, m)` lexicographic order.
    pub fn empty_cells(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for a in 0..2u8 {
            for m in 0..2u8 {
                if self.counts[usize::from(a)][usize::from(m)] == 0 {
                    out.push((a, m));
                }
            }
        }
        out
    }

    /// `p(M = m | A = a)`.
    pub fn p_m_given_a(&self, m: u8, a: u8) -> f64 {
        let p1 = self.p_m1_given_a[usize::from(a)];
        if m == 1 {
            p1
        } else {
            1.0 - p1
        }
    }
}

/// Streaming accumulator behind [`CellStats`]; blocks merge in index order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellAccumulator {
    counts: [[u64; 2]; 2],
    sum: [[f64; 2]; 2],
    sum_sq: [[f64; 2]; 2],
}

impl CellAccumulator {
    #[inline]
    pub fn push(&mut self, row: ObservedRow) {
        let (a, m) = (usize::from(row.a), usize::from(row.m));
        self.counts[a][m] += 1;
        self.sum[a][m] += row.y;
        self.sum_sq[a][m] += row.y * row.y;
    }

    pub fn merge(&mut self, other: &CellAccumulator) {
        for a in 0..2 {
            for m in 0..2 {
                self.counts[a][m] += other.counts[a][m];
                self.sum[a][m] += other.sum[a][m];
                self.sum_sq[a][m] += other.sum_sq[a][m];
            }
        }
    }

    pub fn finish(&self) -> Result<CellStats> {
        let c = &self.counts;
        if c.iter().flatten().all(|&k| k == 0) {
            return Err(Error::EmptyData);
        }
        let mut mean_y = [[f64::NAN; 2]; 2];
        let mut var_y = [[f64::NAN; 2]; 2];
        let mut p_m1_given_a = [f64::NAN; 2];
        let mut mean_y_given_a = [f64::NAN; 2];
        for a in 0..2 {
            for m in 0..2 {
                let n = c[a][m];
                if n > 0 {
                    let nf = n as f64;
                    let mean = self.sum[a][m] / nf;
                    mean_y[a][m] = mean;
                    var_y[a][m] = if n > 1 {
                        ((self.sum_sq[a][m] - nf * mean * mean) / (nf - 1.0)).max(0.0)
                    } else {
                        0.0
                    };
                }
            }
            let n_a = c[a][0] + c[a][1];
            if n_a > 0 {
                p_m1_given_a[a] = c[a][1] as f64 / n_a as f64;
                mean_y_given_a[a] = (self.sum[a][0] + self.sum[a][1]) / n_a as f64;
            }
        }
        Ok(CellStats { mean_y, var_y, p_m1_given_a, mean_y_given_a, counts: self.counts })
    }
}

/// Exact per-cell means and frequencies.
pub fn cell_statistics(data: &ObservedDataset) -> Result<CellStats> {
    let mut acc = CellAccumulator::default();
    for row in data.rows() {
        acc.push(*row);
    }
    acc.finish()
}

/// Plug-in g-formula on precomputed cell statistics.
///
/// `E{Y(1, M(0))}` is estimated by `Σₘ E{Y | A=1, M=m} p(M=m | A=0)`; the
/// other two means are the arm means, so NDE + NIE = TE by construction.
pub fn gformula_from_cells(cells: &CellStats) -> Result<EffectEstimates> {
    if let Some(&(a, m)) = cells.empty_cells().first() {
        return Err(Error::PositivityViolation { a, m });
    }
    let ey_nested: f64 = (0..2u8).map(|m| cells.mean_y[1][usize::from(m)] * cells.p_m_given_a(m, 0)).sum();
    Ok(EffectEstimates::from_means(
        cells.mean_y_given_a[1],
        ey_nested,
        cells.mean_y_given_a[0],
        EstimateMethod::GFormula,
        cells.total(),
    ))
}

/// Delta-method standard errors of the g-formula contrasts, treating cells
/// as independent samples. Used to compare simulated estimates with
/// population values.
pub fn gformula_standard_errors(cells: &CellStats) -> Result<StandardErrors> {
    if let Some(&(a, m)) = cells.empty_cells().first() {
        return Err(Error::PositivityViolation { a, m });
    }
    let n = |a: usize, m: usize| cells.counts[a][m] as f64;
    let v = |a: usize, m: usize| cells.var_y[a][m] / n(a, m);
    let p0 = cells.p_m1_given_a[0];
    let p1 = cells.p_m1_given_a[1];
    let n0 = cells.arm_count(0) as f64;
    let n1 = cells.arm_count(1) as f64;
    let mu = &cells.mean_y;
    let w0 = [1.0 - p0, p0];
    let w1 = [1.0 - p1, p1];
    let gap = [mu[1][0] - mu[0][0], mu[1][1] - mu[0][1]];
    let slope1 = mu[1][1] - mu[1][0];
    let var_p0 = p0 * (1.0 - p0) / n0;
    let var_p1 = p1 * (1.0 - p1) / n1;

    let nde = (0..2).map(|m| w0[m] * w0[m] * (v(1, m) + v(0, m))).sum::<f64>()
        + (gap[1] - gap[0]) * (gap[1] - gap[0]) * var_p0;
    let nie = (p1 - p0) * (p1 - p0) * (v(1, 0) + v(1, 1)) + slope1 * slope1 * (var_p1 + var_p0);
    let ey_nested = (0..2).map(|m| w0[m] * w0[m] * v(1, m)).sum::<f64>() + slope1 * slope1 * var_p0;
    let arm_var = |a: usize, w: [f64; 2]| {
        let within: f64 = (0..2).map(|m| w[m] * cells.var_y[a][m]).sum();
        let d = mu[a][1] - mu[a][0];
        within + w[0] * w[1] * d * d
    };
    let te = arm_var(1, w1) / n1 + arm_var(0, w0) / n0;
    Ok(StandardErrors {
        nde: math::sqrt(nde),
        nie: math::sqrt(nie),
        te: math::sqrt(te),
        ey_nested: math::sqrt(ey_nested),
    })
}

/// Mediational g-formula estimates of NDE, NIE and TE for `a = 1, a' = 0`.
pub fn estimate_gformula(data: &ObservedDataset) -> Result<EffectEstimates> {
    gformula_from_cells(&cell_statistics(data)?)
}
