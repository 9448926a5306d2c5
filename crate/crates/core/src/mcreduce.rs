//! Combinatorial ground truth for SU(2), N = 3: the reduced space of three
//! orbits with radii `c_1, c_2, c_3` is a single point when the triangle
//! closes and empty otherwise.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::Q;
use crate::reducedvol::{calibration, ReducedVolError, ReducedVolume};
use crate::rootsystem::{build_root_system, GroupType, Series, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("side lengths must be positive")]
    NonPositive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleInstance {
    pub sides: [Q; 3],
}

impl TriangleInstance {
    pub fn new(sides: [Q; 3]) -> Result<Self, TriangleError> {
        if sides.iter().any(|c| !c.is_positive()) {
            return Err(TriangleError::NonPositive);
        }
        Ok(Self { sides })
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.sides.iter().map(|c| Weight::new(vec![c.clone()])).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub count: u8,
    /// Some inequality `c_i <= c_j + c_k` holds with equality.
    pub boundary: bool,
}

pub fn su2_point_count(t: &TriangleInstance) -> PointCount {
    let [a, b, c] = &t.sides;
    let slack = [b + c - a, a + c - b, a + b - c];
    let fails = slack.iter().any(Signed::is_negative);
    PointCount {
        count: u8::from(!fails),
        boundary: !fails && slack.iter().any(|s| s.is_zero()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCheck {
    pub raw: Q,
    pub calibrated: Q,
    pub count: PointCount,
    /// `None` on boundaries, where the comparison is not asserted.
    pub pass: Option<bool>,
}

/// Compares the calibrated signed sum against the closure indicator.
pub fn su2_check_against_formula(t: &TriangleInstance) -> Result<TriangleCheck, ReducedVolError> {
    let rs = build_root_system(Series::A, 1)?;
    let engine = ReducedVolume::new(&rs, 3)?;
    su2_check_with(&engine, t)
}

pub fn su2_check_with(
    engine: &ReducedVolume,
    t: &TriangleInstance,
) -> Result<TriangleCheck, ReducedVolError> {
    let raw = engine.factored_signed_sum_volume(&t.weights())?.value;
    let constant = calibration(GroupType::new(Series::A, 1), 3)
        .constant()
        .cloned()
        .expect("A1, N = 3 is calibrated");
    let calibrated = &raw * constant;
    let count = su2_point_count(t);
    let pass = (!count.boundary).then(|| calibrated == Q::from_integer(count.count.into()));
    Ok(TriangleCheck {
        raw,
        calibrated,
        count,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn tri(a: i64, b: i64, c: i64) -> TriangleInstance {
        TriangleInstance::new([q(a), q(b), q(c)]).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(su2_point_count(&tri(1, 1, 1)), PointCount { count: 1, boundary: false });
        assert_eq!(su2_point_count(&tri(5, 1, 1)), PointCount { count: 0, boundary: false });
        assert!(su2_point_count(&tri(2, 1, 1)).boundary);
        assert!(TriangleInstance::new([q(0), q(1), q(1)]).is_err());
    }

    #[test]
    fn formula_agrees() {
        let r = su2_check_against_formula(&tri(1, 1, 1)).unwrap();
        assert_eq!((r.raw, r.calibrated, r.pass), (q(-2), q(1), Some(true)));
        let r = su2_check_against_formula(&tri(5, 1, 1)).unwrap();
        assert_eq!((r.raw, r.pass), (q(0), Some(true)));
        let r = su2_check_against_formula(&tri(3, 2, 2)).unwrap();
        assert_eq!((r.calibrated, r.pass), (q(1), Some(true)));
        assert_eq!(su2_check_against_formula(&tri(2, 1, 1)).unwrap().pass, None);
    }
}
