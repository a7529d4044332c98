//! Sharp bounds on the NDE (`a = 1` vs `a' = 0`) for binary `A`, `M` and `Y`
//! that hold without any cross-world independence:
//!
//! ```text
//! Σₘ max(0, p(m | A=0) + E{Y | A=1, m} − 1) − E{Y | A=0}
//!     ≤ NDE ≤
//! Σₘ min(p(m | A=0), E{Y | A=1, m}) − E{Y | A=0}
//! ```
//!
//! For the reverse contrast relabel the arms before calling.

use alloc::format;

use crate::gformula::{cell_statistics, CellStats, ObservedDataset};
use crate::model::OutcomeKind;
use crate::{Error, Result};

/// Tolerance on `p(M=0 | A=0) + p(M=1 | A=0) = 1`.
const SUM_TOL: f64 = 1e-9;

/// The five observable quantities the bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsInput {
    pub p_m0_a0: f64,
    pub p_m1_a0: f64,
    pub ey_a1_m0: f64,
    pub ey_a1_m1: f64,
    pub ey_a0: f64,
}

impl BoundsInput {
    pub fn new(p_m0_a0: f64, p_m1_a0: f64, ey_a1_m0: f64, ey_a1_m1: f64, ey_a0: f64) -> Result<Self> {
        let input = BoundsInput { p_m0_a0, p_m1_a0, ey_a1_m0, ey_a1_m1, ey_a0 };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("p_m0_a0", self.p_m0_a0),
            ("p_m1_a0", self.p_m1_a0),
            ("ey_a1_m0", self.ey_a1_m0),
            ("ey_a1_m1", self.ey_a1_m1),
            ("ey_a0", self.ey_a0),
        ];
        for (name, v) in named {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if (self.p_m0_a0 + self.p_m1_a0 - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "p_m0_a0 + p_m1_a0 = {} must equal 1",
                self.p_m0_a0 + self.p_m1_a0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdeBounds {
    pub lower: f64,
    pub upper: f64,
    /// The interval excludes some of `[-1, 1]`.
    pub informative: bool,
    pub contains_zero: bool,
}

impl NdeBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

pub fn compute_nde_bounds(inp: &BoundsInput) -> Result<NdeBounds> {
    inp.validate()?;
    let lower = (inp.p_m0_a0 + inp.ey_a1_m0 - 1.0).max(0.0) + (inp.p_m1_a0 + inp.ey_a1_m1 - 1.0).max(0.0)
        - inp.ey_a0;
    let upper = inp.p_m0_a0.min(inp.ey_a1_m0) + inp.p_m1_a0.min(inp.ey_a1_m1) - inp.ey_a0;
    Ok(NdeBounds {
        lower,
        upper,
        informative: lower > -1.0 || upper < 1.0,
        contains_zero: lower <= 0.0 && 0.0 <= upper,
    })
}

/// Bounds inputs from sample cell statistics.
///
/// Needs rows in both `(A=1, M=m)` cells and in the `A=0` arm; the `A=0`
/// cells themselves may be empty.
pub fn bounds_input_from_cells(cells: &CellStats) -> Result<BoundsInput> {
    for m in 0..2u8 {
        if cells.counts[1][usize::from(m)] == 0 {
            return Err(Error::PositivityViolation { a: 1, m });
        }
    }
    if cells.arm_count(0) == 0 {
        return Err(Error::EmptyArm { a: 0 });
    }
    BoundsInput::new(
        cells.p_m_given_a(0, 0),
        cells.p_m_given_a(1, 0),
        cells.mean_y[1][0],
        cells.mean_y[1][1],
        cells.mean_y_given_a[0],
    )
}

/// Plug-in bounds for a binary-outcome dataset.
pub fn bounds_from_data(data: &ObservedDataset) -> Result<NdeBounds> {
    if data.outcome_kind() != OutcomeKind::Binary {
        return Err(Error::NotBinaryOutcome);
    }
    let cells = cell_statistics(data)?;
    compute_nde_bounds(&bounds_input_from_cells(&cells)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ObservedRow;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn worked_example() {
        let b = compute_nde_bounds(&BoundsInput::new(0.5, 0.5, 0.6, 0.7, 0.5).unwrap()).unwrap();
        assert!(close(b.lower, -0.2) && close(b.upper, 0.5));
        assert!(b.informative && b.contains_zero);
    }

    #[test]
    fn deterministic_mediator_collapses_bounds() {
        let b = compute_nde_bounds(&BoundsInput::new(1.0, 0.0, 0.3, 0.9, 0.2).unwrap()).unwrap();
        assert!(close(b.lower, 0.1) && close(b.upper, 0.1));
        assert!(!b.contains_zero);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(BoundsInput::new(0.5, 0.5, 1.2, 0.5, 0.5).is_err());
        assert!(BoundsInput::new(0.6, 0.6, 0.5, 0.5, 0.5).is_err());
        let raw = BoundsInput { p_m0_a0: -0.1, p_m1_a0: 1.1, ey_a1_m0: 0.0, ey_a1_m1: 0.0, ey_a0: 0.0 };
        assert!(matches!(compute_nde_bounds(&raw), Err(Error::InvalidInput(_))));
    }

    fn dataset(raw: &[(u8, u8, f64)]) -> ObservedDataset {
        ObservedDataset::new(raw.iter().map(|&(a, m, y)| ObservedRow { a, m, y }).collect()).unwrap()
    }

    #[test]
    fn eight_row_dataset_bounds() {
        let d = dataset(&[
            (0, 0, 0.0), (0, 0, 1.0), (0, 1, 1.0), (0, 1, 1.0),
            (1, 0, 1.0), (1, 0, 0.0), (1, 1, 1.0), (1, 1, 0.0),
        ]);
        let cells = cell_statistics(&d).unwrap();
        let inp = bounds_input_from_cells(&cells).unwrap();
        assert_eq!(inp, BoundsInput { p_m0_a0: 0.5, p_m1_a0: 0.5, ey_a1_m0: 0.5, ey_a1_m1: 0.5, ey_a0: 0.75 });
        let b = bounds_from_data(&d).unwrap();
        assert_eq!((b.lower, b.upper), (-0.75, 0.25));
    }

    #[test]
    fn data_errors() {
        let cont = dataset(&[(0, 0, 0.5), (1, 0, 1.0), (1, 1, 0.0)]);
        assert_eq!(bounds_from_data(&cont), Err(Error::NotBinaryOutcome));
        let no_a1m1 = dataset(&[(0, 0, 0.0), (1, 0, 1.0)]);
        assert_eq!(bounds_from_data(&no_a1m1), Err(Error::PositivityViolation { a: 1, m: 1 }));
        let no_a0 = dataset(&[(1, 0, 0.0), (1, 1, 1.0)]);
        assert_eq!(bounds_from_data(&no_a0), Err(Error::EmptyArm { a: 0 }));
        // A=0 rows all with M=1 are fine.
        let ok = dataset(&[(0, 1, 0.0), (1, 0, 1.0), (1, 1, 1.0)]);
        assert!(bounds_from_data(&ok).is_ok());
    }

    fn input() -> impl Strategy<Value = BoundsInput> {
        (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(p, e0, e1, y0)| BoundsInput {
            p_m0_a0: 1.0 - p,
            p_m1_a0: p,
            ey_a1_m0: e0,
            ey_a1_m1: e1,
            ey_a0: y0,
        })
    }

    proptest! {
        #[test]
        fn bounds_are_ordered_and_within_unit_range(inp in input()) {
            let b = compute_nde_bounds(&inp).unwrap();
            prop_assert!(b.lower <= b.upper);
            prop_assert!(b.lower >= -1.0 - 1e-12 && b.upper <= 1.0 + 1e-12);
            let width: f64 = [(inp.p_m0_a0, inp.ey_a1_m0), (inp.p_m1_a0, inp.ey_a1_m1)]
                .iter()
                .map(|&(p, e)| p.min(e) - (p + e - 1.0).max(0.0))
                .sum();
            prop_assert!((b.width() - width).abs() < 1e-12);
        }

        #[test]
        fn outcome_mean_under_control_shifts_both_bounds(inp in input(), shift in 0.0f64..=1.0) {
            let moved = BoundsInput { ey_a0: inp.ey_a0 * (1.0 - shift), ..inp };
            let delta = inp.ey_a0 - moved.ey_a0;
            let (a, b) = (compute_nde_bounds(&inp).unwrap(), compute_nde_bounds(&moved).unwrap());
            prop_assert!((b.lower - a.lower - delta).abs() < 1e-12);
            prop_assert!((b.upper - a.upper - delta).abs() < 1e-12);
        }

        /// Any coupling of M(0) with Y(1, m) consistent with the margins gives
        /// an NDE inside the bounds.
        #[test]
        fn every_joint_law_lies_inside(inp in input(), t0 in 0.0f64..=1.0, t1 in 0.0f64..=1.0) {
            // P(M(0)=m, Y(1,m)=1) ranges over [max(0, p+e-1), min(p, e)].
            let joint: Vec<f64> = [(inp.p_m0_a0, inp.ey_a1_m0, t0), (inp.p_m1_a0, inp.ey_a1_m1, t1)]
                .iter()
                .map(|&(p, e, t)| {
                    let lo = (p + e - 1.0).max(0.0);
                    lo + t * (p.min(e) - lo)
                })
                .collect();
            let nde = joint.iter().sum::<f64>() - inp.ey_a0;
            let b = compute_nde_bounds(&inp).unwrap();
            prop_assert!(b.lower - 1e-12 <= nde && nde <= b.upper + 1e-12);
        }
    }
}
