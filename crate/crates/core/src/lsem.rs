//! Linear structural equations with an intermediate confounder `L`:
//!
//! ```text
//! L = α_A A + ε_L
//! M = β_A A + β_L L + ε_M
//! Y = θ_A A + θ_L L + θ_M M + ε_Y
//! ```
//!
//! Linearity makes `L(a) − L(a')` a constant, which identifies
//! `NDE = (θ_A + θ_L α_A)(a − a')` and `NIE = θ_M(β_A + β_L α_A)(a − a')`.

use alloc::vec::Vec;

use crate::model::{EffectEstimates, EstimateMethod, StandardErrors};
use crate::rng::{self, aux_stream, block_count, block_len, block_stream};
use crate::{Error, Result};

/// Coefficients of the three structural equations, with intercepts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LsemCoefficients {
    pub intercept_l: f64,
    pub alpha_a: f64,
    pub intercept_m: f64,
    pub beta_a: f64,
    pub beta_l: f64,
    pub intercept_y: f64,
    pub theta_a: f64,
    pub theta_l: f64,
    pub theta_m: f64,
}

impl LsemCoefficients {
    pub fn all(&self) -> [f64; 9] {
        [
            self.intercept_l, self.alpha_a, self.intercept_m, self.beta_a, self.beta_l,
            self.intercept_y, self.theta_a, self.theta_l, self.theta_m,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.all().iter().all(|v| v.is_finite())
    }

    /// `E{Y(a, M(a'))}` with mean-zero errors.
    pub fn nested_mean(&self, a: f64, a_prime: f64) -> f64 {
        let l_a = self.intercept_l + self.alpha_a * a;
        let l_ap = self.intercept_l + self.alpha_a * a_prime;
        let m_ap = self.intercept_m + self.beta_a * a_prime + self.beta_l * l_ap;
        self.intercept_y + self.theta_a * a + self.theta_l * l_a + self.theta_m * m_ap
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsemRow {
    pub a: u8,
    pub l: f64,
    pub m: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LsemDataset {
    rows: Vec<LsemRow>,
}

impl LsemDataset {
    pub fn new(rows: Vec<LsemRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyData);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.a > 1 || !(r.l.is_finite() && r.m.is_finite() && r.y.is_finite()) {
                return Err(Error::InvalidInput(alloc::format!(
                    "row {i}: A must be 0/1 and L, M, Y finite"
                )));
            }
        }
        Ok(LsemDataset { rows })
    }

    pub fn rows(&self) -> &[LsemRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Effects of moving treatment from `a_prime` to `a`.
pub fn lsem_effects(coef: &LsemCoefficients, a: f64, a_prime: f64) -> EffectEstimates {
    let delta = a - a_prime;
    let nde = (coef.theta_a + coef.theta_l * coef.alpha_a) * delta;
    let nie = (coef.theta_m * coef.beta_a + coef.theta_m * coef.beta_l * coef.alpha_a) * delta;
    EffectEstimates {
        nde,
        nie,
        te: nde + nie,
        ey_nested: coef.nested_mean(a, a_prime),
        ey_treated: coef.nested_mean(a, a),
        ey_control: coef.nested_mean(a_prime, a_prime),
        method: EstimateMethod::Lsem,
        n_or_nodes: 0,
        mc_se: None,
    }
}

/// Least squares of `y` on an intercept plus `K` regressors, via centred
/// normal equations. Returns `[intercept, slopes...]`.
fn ols<const K: usize>(
    xs: impl Iterator<Item = ([f64; K], f64)> + Clone,
    equation: &'static str,
) -> Result<([f64; K], f64)> {
    let mut n = 0.0;
    let mut mx = [0.0; K];
    let mut my = 0.0;
    for (x, y) in xs.clone() {
        n += 1.0;
        for j in 0..K {
            mx[j] += x[j];
        }
        my += y;
    }
    for v in mx.iter_mut() {
        *v /= n;
    }
    my /= n;
    let mut sxx = [[0.0; K]; K];
    let mut sxy = [0.0; K];
    for (x, y) in xs {
        let mut c = [0.0; K];
        for j in 0..K {
            c[j] = x[j] - mx[j];
        }
        let cy = y - my;
        for i in 0..K {
            sxy[i] += c[i] * cy;
            for j in 0..K {
                sxx[i][j] += c[i] * c[j];
            }
        }
    }
    let slopes = solve_spd(sxx, sxy).ok_or(Error::RankDeficient { equation })?;
    let intercept = my - (0..K).map(|j| slopes[j] * mx[j]).sum::<f64>();
    Ok((slopes, intercept))
}

/// Gaussian elimination with partial pivoting; `None` when a pivot is
/// negligible relative to the matrix scale.
fn solve_spd<const K: usize>(mut a: [[f64; K]; K], mut b: [f64; K]) -> Option<[f64; K]> {
    let scale = (0..K).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let tol = scale * 1e-12;
    for col in 0..K {
        let pivot = (col..K).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= tol {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..K {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; K];
    for row in (0..K).rev() {
        let s: f64 = (row + 1..K).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// OLS fits of `L ~ A`, `M ~ A + L` and `Y ~ A + L + M`.
pub fn fit_lsem(data: &LsemDataset) -> Result<LsemCoefficients> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let rows = data.rows();
    let (s_l, i_l) = ols(rows.iter().map(|r| ([f64::from(r.a)], r.l)), "L ~ A")?;
    let (s_m, i_m) = ols(rows.iter().map(|r| ([f64::from(r.a), r.l], r.m)), "M ~ A + L")?;
    let (s_y, i_y) = ols(rows.iter().map(|r| ([f64::from(r.a), r.l, r.m], r.y)), "Y ~ A + L + M")?;
    Ok(LsemCoefficients {
        intercept_l: i_l,
        alpha_a: s_l[0],
        intercept_m: i_m,
        beta_a: s_m[0],
        beta_l: s_m[1],
        intercept_y: i_y,
        theta_a: s_y[0],
        theta_l: s_y[1],
        theta_m: s_y[2],
    })
}

/// A linear SEM with independent normal errors, for simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsemModel {
    pub coef: LsemCoefficients,
    pub sd_l: f64,
    pub sd_m: f64,
    pub sd_y: f64,
}

impl LsemModel {
    pub fn new(coef: LsemCoefficients) -> Self {
        LsemModel { coef, sd_l: 1.0, sd_m: 1.0, sd_y: 1.0 }
    }

    fn errors<R: rand::Rng + ?Sized>(&self, stream: &mut R) -> [f64; 3] {
        [
            rng::normal(stream, 0.0, self.sd_l),
            rng::normal(stream, 0.0, self.sd_m),
            rng::normal(stream, 0.0, self.sd_y),
        ]
    }

    /// `Y(a, M(a'))` for one unit's errors.
    fn nested(&self, e: &[f64; 3], a: f64, a_prime: f64) -> f64 {
        let c = &self.coef;
        let l_a = c.intercept_l + c.alpha_a * a + e[0];
        let l_ap = c.intercept_l + c.alpha_a * a_prime + e[0];
        let m_ap = c.intercept_m + c.beta_a * a_prime + c.beta_l * l_ap + e[1];
        c.intercept_y + c.theta_a * a + c.theta_l * l_a + c.theta_m * m_ap + e[2]
    }

    /// Factual rows with `A ~ Bernoulli(1/2)`.
    pub fn simulate(&self, n: u64, seed: u64) -> LsemDataset {
        let c = &self.coef;
        let mut rows = Vec::with_capacity(n as usize);
        for b in 0..block_count(n) {
            let mut stream = block_stream(seed, b);
            let mut aux = aux_stream(seed, b);
            for _ in 0..block_len(n, b) {
                let e = self.errors(&mut stream);
                let a = u8::from(rng::bernoulli(&mut aux, 0.5));
                let af = f64::from(a);
                let l = c.intercept_l + c.alpha_a * af + e[0];
                let m = c.intercept_m + c.beta_a * af + c.beta_l * l + e[1];
                let y = c.intercept_y + c.theta_a * af + c.theta_l * l + c.theta_m * m + e[2];
                rows.push(LsemRow { a, l, m, y });
            }
        }
        LsemDataset { rows }
    }

    /// Monte Carlo averages of the nested counterfactual contrasts for
    /// `a = 1, a' = 0`, over the same units [`LsemModel::simulate`] draws.
    pub fn mc_effects(&self, n: u64, seed: u64) -> Result<EffectEstimates> {
        if n == 0 {
            return Err(Error::InvalidInput("sample size must be at least 1".into()));
        }
        let mut sums = [0.0; 3];
        let mut sq = [0.0; 3];
        let mut nested_sum = 0.0;
        let mut nested_sq = 0.0;
        let mut means = [0.0; 3];
        for b in 0..block_count(n) {
            let mut stream = block_stream(seed, b);
            for _ in 0..block_len(n, b) {
                let e = self.errors(&mut stream);
                let y00 = self.nested(&e, 0.0, 0.0);
                let y10 = self.nested(&e, 1.0, 0.0);
                let y11 = self.nested(&e, 1.0, 1.0);
                let d = [y10 - y00, y11 - y10, y11 - y00];
                for k in 0..3 {
                    sums[k] += d[k];
                    sq[k] += d[k] * d[k];
                }
                means[0] += y11;
                means[1] += y10;
                means[2] += y00;
                nested_sum += y10;
                nested_sq += y10 * y10;
            }
        }
        let nf = n as f64;
        let se = |s: f64, q: f64| crate::model::monte_carlo::mean_se(n, s, q);
        Ok(EffectEstimates {
            nde: sums[0] / nf,
            nie: sums[1] / nf,
            te: sums[0] / nf + sums[1] / nf,
            ey_treated: means[0] / nf,
            ey_nested: means[1] / nf,
            ey_control: means[2] / nf,
            method: EstimateMethod::MonteCarloTruth,
            n_or_nodes: n,
            mc_se: Some(StandardErrors {
                nde: se(sums[0], sq[0]),
                nie: se(sums[1], sq[1]),
                te: se(sums[2], sq[2]),
                ey_nested: se(nested_sum, nested_sq),
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> LsemCoefficients {
        LsemCoefficients {
            intercept_l: 0.5,
            alpha_a: 2.0,
            intercept_m: -1.0,
            beta_a: 1.0,
            beta_l: 0.5,
            intercept_y: 3.0,
            theta_a: 1.0,
            theta_l: 1.0,
            theta_m: 1.0,
        }
    }

    #[test]
    fn worked_example_effects() {
        let e = lsem_effects(&example(), 1.0, 0.0);
        assert_eq!((e.nde, e.nie, e.te), (3.0, 2.0, 5.0));
        assert!((e.ey_nested - e.ey_control - 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_intermediate_pathway() {
        let c = LsemCoefficients { theta_l: 0.0, beta_l: 0.0, theta_a: 0.7, theta_m: 1.5, beta_a: -0.4, ..example() };
        let e = lsem_effects(&c, 1.0, 0.0);
        assert_eq!(e.nde, 0.7);
        assert_eq!(e.nie, 1.5 * -0.4);
        let same = lsem_effects(&example(), 0.3, 0.3);
        assert_eq!((same.nde, same.nie), (0.0, 0.0));
    }

    #[test]
    fn noiseless_outcome_equation_is_recovered_exactly() {
        let truth = example();
        let model = LsemModel { coef: truth, sd_l: 1.0, sd_m: 1.0, sd_y: 0.0 };
        let fit = fit_lsem(&model.simulate(500, 3)).unwrap();
        for (got, want) in [
            (fit.theta_a, truth.theta_a),
            (fit.theta_l, truth.theta_l),
            (fit.theta_m, truth.theta_m),
            (fit.intercept_y, truth.intercept_y),
        ] {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn orthogonal_errors_recover_every_coefficient() {
        let truth = example();
        let c = &truth;
        let mut rows = Vec::new();
        for bits in 0..16u32 {
            let a = (bits & 1) as u8;
            let e = [1, 2, 3].map(|k| if bits >> k & 1 == 1 { 0.5 } else { -0.5 });
            let af = f64::from(a);
            let l = c.intercept_l + c.alpha_a * af + e[0];
            let m = c.intercept_m + c.beta_a * af + c.beta_l * l + e[1];
            let y = c.intercept_y + c.theta_a * af + c.theta_l * l + c.theta_m * m + e[2];
            rows.push(LsemRow { a, l, m, y });
        }
        let fit = fit_lsem(&LsemDataset::new(rows).unwrap()).unwrap();
        for (got, want) in fit.all().iter().zip(truth.all()) {
            assert!((got - want).abs() <= 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn large_sample_fit_is_consistent() {
        let truth = example();
        let model = LsemModel::new(truth);
        let data = model.simulate(200_000, 11);
        let fit = fit_lsem(&data).unwrap();
        for (got, want) in [
            (fit.alpha_a, truth.alpha_a),
            (fit.beta_a, truth.beta_a),
            (fit.beta_l, truth.beta_l),
            (fit.theta_a, truth.theta_a),
            (fit.theta_l, truth.theta_l),
            (fit.theta_m, truth.theta_m),
        ] {
            assert!((got - want).abs() < 0.03, "{got} vs {want}");
        }
        let est = lsem_effects(&fit, 1.0, 0.0);
        let mc = model.mc_effects(200_000, 12).unwrap();
        let se = mc.mc_se.unwrap();
        assert!((mc.nde - 3.0).abs() < 5.0 * se.nde.max(1e-12));
        assert!((mc.nie - 2.0).abs() < 5.0 * se.nie.max(1e-12));
        assert!((est.nde - 3.0).abs() < 0.05 && (est.nie - 2.0).abs() < 0.05);
    }

    #[test]
    fn constant_treatment_is_rank_deficient() {
        let rows = (0..20).map(|i| LsemRow { a: 1, l: i as f64, m: (i * i) as f64, y: 1.0 }).collect();
        let err = fit_lsem(&LsemDataset::new(rows).unwrap()).unwrap_err();
        assert_eq!(err, Error::RankDeficient { equation: "L ~ A" });
    }

    #[test]
    fn collinear_mediator_is_rank_deficient() {
        let rows = (0..20)
            .map(|i| {
                let l = i as f64 * 0.3;
                LsemRow { a: (i % 2) as u8, l, m: 2.0 * l + 1.0, y: l }
            })
            .collect();
        let err = fit_lsem(&LsemDataset::new(rows).unwrap()).unwrap_err();
        assert_eq!(err, Error::RankDeficient { equation: "Y ~ A + L + M" });
    }

    #[test]
    fn empty_dataset_is_rejected() {
        assert_eq!(LsemDataset::new(Vec::new()), Err(Error::EmptyData));
    }

    proptest! {
        #[test]
        fn effects_are_linear_in_the_treatment_gap(
            aa in -3.0f64..3.0, ba in -3.0f64..3.0, bl in -3.0f64..3.0,
            ta in -3.0f64..3.0, tl in -3.0f64..3.0, tm in -3.0f64..3.0,
            d in -5.0f64..5.0,
        ) {
            let c = LsemCoefficients { alpha_a: aa, beta_a: ba, beta_l: bl, theta_a: ta, theta_l: tl, theta_m: tm, ..Default::default() };
            let unit = lsem_effects(&c, 1.0, 0.0);
            let scaled = lsem_effects(&c, d, 0.0);
            prop_assert!((scaled.nde - d * unit.nde).abs() < 1e-9);
            prop_assert!((scaled.nie - d * unit.nie).abs() < 1e-9);
        }
    }
}
