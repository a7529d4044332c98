//! Plain-text reports as `key=value` lines.

use std::io::Write;

use crossworld_core::audit::AuditReport;
use crossworld_core::bounds::NdeBounds;
use crossworld_core::gformula::CellStats;
use crossworld_core::grid::{BiasSummary, GridResultRow, McEvaluation};
use crossworld_core::lsem::LsemCoefficients;
use crossworld_core::model::{EffectEstimates, InterventionalEffects};
use crossworld_core::oracle::OracleReport;

use crate::error::Result;

pub fn write_effects<W: Write>(out: &mut W, e: &EffectEstimates) -> Result<()> {
    writeln!(out, "method={}", e.method.as_str())?;
    writeln!(out, "n={}", e.n_or_nodes)?;
    writeln!(out, "nde={}", e.nde)?;
    writeln!(out, "nie={}", e.nie)?;
    writeln!(out, "te={}", e.te)?;
    writeln!(out, "ey_treated={}", e.ey_treated)?;
    writeln!(out, "ey_nested={}", e.ey_nested)?;
    writeln!(out, "ey_control={}", e.ey_control)?;
    if let Some(se) = e.mc_se {
        writeln!(out, "se_nde={}", se.nde)?;
        writeln!(out, "se_nie={}", se.nie)?;
        writeln!(out, "se_te={}", se.te)?;
        writeln!(out, "se_ey_nested={}", se.ey_nested)?;
    }
    Ok(())
}

pub fn write_oracle<W: Write>(out: &mut W, r: &OracleReport) -> Result<()> {
    writeln!(out, "gamma={}", r.gamma)?;
    writeln!(out, "psi={}", r.psi)?;
    writeln!(out, "eta={}", r.eta)?;
    writeln!(out, "eta_prime={}", r.eta_prime)?;
    writeln!(out, "true_nde={}", r.truth.nde)?;
    writeln!(out, "true_nie={}", r.truth.nie)?;
    writeln!(out, "true_te={}", r.truth.te)?;
    writeln!(out, "est_nde={}", r.estimand.nde)?;
    writeln!(out, "est_nie={}", r.estimand.nie)?;
    writeln!(out, "bias_nde={}", r.bias_nde)?;
    writeln!(out, "bias_nie={}", r.bias_nie)?;
    Ok(())
}

pub fn write_bounds<W: Write>(out: &mut W, b: &NdeBounds) -> Result<()> {
    writeln!(out, "lower={}", b.lower)?;
    writeln!(out, "upper={}", b.upper)?;
    writeln!(out, "width={}", b.width())?;
    writeln!(out, "informative={}", b.informative)?;
    writeln!(out, "contains_zero={}", b.contains_zero)?;
    Ok(())
}

pub fn write_cells<W: Write>(out: &mut W, c: &CellStats) -> Result<()> {
    for a in 0..2 {
        for m in 0..2 {
            writeln!(out, "n_a{a}_m{m}={}", c.counts[a][m])?;
            writeln!(out, "mean_y_a{a}_m{m}={}", c.mean_y[a][m])?;
        }
        writeln!(out, "p_m1_given_a{a}={}", c.p_m1_given_a[a])?;
    }
    Ok(())
}

pub fn write_lsem<W: Write>(out: &mut W, c: &LsemCoefficients, e: &EffectEstimates) -> Result<()> {
    writeln!(out, "intercept_l={}", c.intercept_l)?;
    writeln!(out, "alpha_a={}", c.alpha_a)?;
    writeln!(out, "intercept_m={}", c.intercept_m)?;
    writeln!(out, "beta_a={}", c.beta_a)?;
    writeln!(out, "beta_l={}", c.beta_l)?;
    writeln!(out, "intercept_y={}", c.intercept_y)?;
    writeln!(out, "theta_a={}", c.theta_a)?;
    writeln!(out, "theta_l={}", c.theta_l)?;
    writeln!(out, "theta_m={}", c.theta_m)?;
    writeln!(out, "nde={}", e.nde)?;
    writeln!(out, "nie={}", e.nie)?;
    writeln!(out, "te={}", e.te)?;
    Ok(())
}

pub fn write_audit<W: Write>(out: &mut W, r: &AuditReport) -> Result<()> {
    writeln!(out, "n={}", r.n)?;
    for (m, c) in r.cw_assoc.iter().enumerate() {
        writeln!(out, "cw_assoc_m{m}={} se={} pass={}", c.statistic, c.se, c.passed)?;
    }
    for (name, c) in r.sw_assoc.iter() {
        writeln!(out, "sw_assoc[{name}]={} se={} pass={}", c.statistic, c.se, c.passed)?;
    }
    writeln!(out, "b_variation={}", r.b_variation)?;
    match r.de_assump_gap {
        Some(g) => {
            for (m, c) in g.iter().enumerate() {
                writeln!(out, "de_assump_gap_m{m}={} se={} pass={}", c.statistic, c.se, c.passed)?;
            }
        }
        None => writeln!(out, "de_assump_gap=degenerate")?,
    }
    writeln!(out, "cross_world_holds={}", r.flags.cross_world)?;
    writeln!(out, "single_world_holds={}", r.flags.single_world)?;
    writeln!(out, "no_interaction_holds={}", r.flags.no_interaction)?;
    match r.flags.direct_effect {
        Some(v) => writeln!(out, "direct_effect_holds={v}")?,
        None => writeln!(out, "direct_effect_holds=undetermined")?,
    }
    Ok(())
}

pub fn write_interventional<W: Write>(out: &mut W, e: &InterventionalEffects) -> Result<()> {
    writeln!(out, "n={}", e.n)?;
    writeln!(out, "de_st={}", e.de_st)?;
    writeln!(out, "ie_st={}", e.ie_st)?;
    writeln!(out, "total_st={}", e.total_st())?;
    for a in 0..2 {
        writeln!(out, "p_m1_given_a{a}={}", e.mediator_probs[a])?;
        for ap in 0..2 {
            writeln!(out, "ey_a{a}_m_from_a{ap}={}", e.ey_intervened[a][ap])?;
        }
        writeln!(out, "ey_natural_a{a}={}", e.ey_natural[a])?;
        writeln!(out, "te_check_a{a}={} se={}", e.te_check[a], e.te_check_se[a])?;
    }
    Ok(())
}

fn fmt_bound(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

fn table_line<W: Write>(out: &mut W, label: &str, r: &GridResultRow, on_grid: bool) -> Result<()> {
    let index = if on_grid { r.index.to_string() } else { "-".to_string() };
    writeln!(
        out,
        "{label:<14} {:>8} {:>9.3} {:>9.3} {:>9.3} {:>8} {:>8}",
        index,
        r.true_nde,
        r.est_nde,
        r.bias_nde,
        fmt_bound(r.bounds_lower),
        fmt_bound(r.bounds_upper)
    )?;
    Ok(())
}

/// Bias ranges, stratified extremes, the worst-case table and the
/// interaction cross-tabulation. `extreme` is an extra table row evaluated
/// outside the grid.
pub fn write_summary<W: Write>(
    out: &mut W,
    s: &BiasSummary,
    extreme: Option<&GridResultRow>,
    confirmations: &[(GridResultRow, McEvaluation)],
) -> Result<()> {
    writeln!(out, "settings={}", s.overall.count)?;
    writeln!(out, "bias_nde_min={} index={}", s.overall.min.bias_nde, s.overall.min.index)?;
    writeln!(out, "bias_nde_max={} index={}", s.overall.max.bias_nde, s.overall.max.index)?;
    for (label, range) in [("beta5_zero", s.beta5_zero), ("beta5_nonzero", s.beta5_nonzero)] {
        if let Some(r) = range {
            writeln!(out, "{label}_settings={}", r.count)?;
            writeln!(out, "{label}_bias_nde_min={}", r.min.bias_nde)?;
            writeln!(out, "{label}_bias_nde_max={}", r.max.bias_nde)?;
            writeln!(out, "{label}_max_abs_bias_nde={} index={}", r.max_abs_bias(), r.max_abs().index)?;
        }
    }
    writeln!(out)?;
    writeln!(out, "[worst cases]")?;
    writeln!(out, "{:<14} {:>8} {:>9} {:>9} {:>9} {:>8} {:>8}", "case", "index", "true_nde", "estimand", "bias", "lower", "upper")?;
    for (label, range) in [("beta5_zero", s.beta5_zero), ("beta5_nonzero", s.beta5_nonzero)] {
        if let Some(r) = range {
            table_line(out, label, &r.max_abs(), true)?;
        }
    }
    if let Some(r) = extreme {
        table_line(out, "extreme", r, false)?;
    }
    for (label, range) in [("beta5_zero", s.beta5_zero), ("beta5_nonzero", s.beta5_nonzero)] {
        if let Some(r) = range {
            let p = r.max_abs().params;
            writeln!(
                out,
                "{label}_params={}",
                p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            )?;
        }
    }
    writeln!(out)?;
    writeln!(out, "[max |bias_nde| by beta4, beta5]")?;
    writeln!(out, "{:>10} {:>10} {:>8} {:>10}", "beta4", "beta5", "settings", "max_abs")?;
    for c in &s.interaction {
        writeln!(out, "{:>10.4} {:>10.4} {:>8} {:>10.5}", c.beta4, c.beta5, c.count, c.max_abs_bias)?;
    }
    if !confirmations.is_empty() {
        writeln!(out)?;
        writeln!(out, "[monte carlo confirmation]")?;
        writeln!(out, "{:>8} {:>10} {:>10} {:>10} {:>6}", "index", "mc_bias", "se", "quad_bias", "z")?;
        for (q, c) in confirmations {
            let z = (c.row.bias_nde - q.bias_nde) / c.se_bias_nde;
            writeln!(
                out,
                "{:>8} {:>10.5} {:>10.5} {:>10.5} {:>6.2}",
                c.row.index, c.row.bias_nde, c.se_bias_nde, q.bias_nde, z
            )?;
        }
    }
    Ok(())
}
