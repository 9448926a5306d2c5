//! Closed-form SU(3), N = 3 volumes in `(l, m)` coordinates.
//!
//! A dominant weight is written `(l - m) omega_1 + m omega_2`; in the basis
//! `{omega_1, omega_2 - omega_1}` its coordinates are `(l, m)`. Two
//! independent formulas live here: the signed sum of the piecewise-linear DH
//! function over the six Weyl matrices in that basis, and a sum over ordered
//! 6-partitions of `{1, 2, 3}`.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rational, q, qf, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Su3Error {
    #[error("L + M = {0} is not divisible by 3")]
    DivisibilityViolation(String),
    #[error("weight {index} violates l > m > 0")]
    RegularityViolation { index: usize },
    #[error("weight {index} is not integral")]
    NonIntegral { index: usize },
}

/// Weyl group of SU(3) acting on `(l, m)` columns, in the enumeration
/// `v_0, ..., v_5` (identity, (1 2), (1 2 3), (1 3), (1 3 2), (2 3)).
pub const WEYL_LM: [[[i64; 2]; 2]; 6] = [
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1], [1, -1]],
    [[-1, 0], [-1, 1]],
    [[-1, 1], [-1, 0]],
    [[1, -1], [0, -1]],
];

pub fn weyl_lm_sign(i: usize) -> i64 {
    let m = WEYL_LM[i];
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// The `(l, m)`-basis matrix rewritten for simple-root coordinates,
/// `P v P^{-1}` with `P = [[2/3, -1/3], [1/3, 1/3]]`.
pub fn weyl_lm_to_simple(v: &[[i64; 2]; 2]) -> Vec<Vec<i64>> {
    let p = [[qf(2, 3), qf(-1, 3)], [qf(1, 3), qf(1, 3)]];
    let p_inv = [[q(1), q(1)], [q(-1), q(2)]];
    let mut out = vec![vec![0i64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Q::zero();
            for k in 0..2 {
                for l in 0..2 {
                    acc += &p[i][k] * q(v[k][l]) * &p_inv[l][j];
                }
            }
            assert!(acc.is_integer(), "Weyl matrices are integral in both bases");
            *cell = i64::try_from(acc.to_integer()).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SU3Weights {
    pub l: [Q; 3],
    pub m: [Q; 3],
}

impl SU3Weights {
    pub fn new(l: [Q; 3], m: [Q; 3]) -> Self {
        Self { l, m }
    }

    pub fn from_ints(l: [i64; 3], m: [i64; 3]) -> Self {
        Self::new(l.map(q), m.map(q))
    }

    pub fn total_l(&self) -> Q {
        self.l.iter().sum()
    }

    pub fn total_m(&self) -> Q {
        self.m.iter().sum()
    }

    /// Indices `i` where `l_i > m_i > 0` fails.
    pub fn irregular(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| !(self.l[i] > self.m[i] && self.m[i].is_positive()))
            .collect()
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            l: perm.map(|i| self.l[i].clone()),
            m: perm.map(|i| self.m[i].clone()),
        }
    }
}

impl fmt::Display for SU3Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt3 = |v: &[Q; 3]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        write!(f, "({}; {})", fmt3(&self.l), fmt3(&self.m))
    }
}

/// `max{min{2l/3 - m/3, l/3 + m/3}, 0}`.
pub fn h_closed_form(l: &Q, m: &Q) -> Q {
    let a = (q(2) * l - m) / q(3);
    let b = (l + m) / q(3);
    let lo = if a < b { a } else { b };
    if lo.is_positive() {
        lo
    } else {
        Q::zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Su3Volume {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub value: Q,
    pub warnings: Vec<String>,
}

fn apply_lm(v: &[[i64; 2]; 2], l: &Q, m: &Q) -> (Q, Q) {
    (
        q(v[0][0]) * l + q(v[0][1]) * m,
        q(v[1][0]) * l + q(v[1][1]) * m,
    )
}

/// Triple sum `sum_{i,j,k} sgn(v_i) sgn(v_j) sgn(v_k) h(P_ijk)`.
pub fn jj_volume(w: &SU3Weights) -> Su3Volume {
    let images: Vec<Vec<(Q, Q)>> = (0..3)
        .map(|p| WEYL_LM.iter().map(|v| apply_lm(v, &w.l[p], &w.m[p])).collect())
        .collect();
    let mut total = Q::zero();
    for (i, a) in images[0].iter().enumerate() {
        for (j, b) in images[1].iter().enumerate() {
            for (k, c) in images[2].iter().enumerate() {
                let sign = weyl_lm_sign(i) * weyl_lm_sign(j) * weyl_lm_sign(k);
                let h = h_closed_form(&(&a.0 + &b.0 + &c.0), &(&a.1 + &b.1 + &c.1));
                if !h.is_zero() {
                    total += q(sign) * h;
                }
            }
        }
    }
    let warnings = w
        .irregular()
        .into_iter()
        .map(|i| format!("weight {} is not regular (l > m > 0 fails)", i + 1))
        .collect();
    Su3Volume {
        value: total,
        warnings,
    }
}

/// Ordered 6-tuple of disjoint subsets covering `{1, 2, 3}`, stored as the
/// block index of each element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SixPartition {
    pub block_of: [u8; 3],
}

impl SixPartition {
    /// Bitmask of elements (bit `i` for element `i + 1`) in block `k`.
    pub fn block(&self, k: usize) -> u8 {
        (0..3)
            .filter(|&i| usize::from(self.block_of[i]) == k)
            .fold(0, |m, i| m | (1 << i))
    }

    pub fn blocks(&self) -> [u8; 6] {
        std::array::from_fn(|k| self.block(k))
    }

    /// Builds a partition from six element bitmasks; `None` unless they are
    /// disjoint and cover `{1, 2, 3}`.
    pub fn from_blocks(blocks: [u8; 6]) -> Option<Self> {
        let mut block_of = [u8::MAX; 3];
        for (k, &b) in blocks.iter().enumerate() {
            if b & !0b111 != 0 {
                return None;
            }
            for (i, slot) in block_of.iter_mut().enumerate() {
                if b & (1 << i) != 0 {
                    if *slot != u8::MAX {
                        return None;
                    }
                    *slot = k as u8;
                }
            }
        }
        block_of.iter().all(|&s| s != u8::MAX).then_some(Self { block_of })
    }
}

/// All `6^3 = 216` six-partitions, lexicographic in `(block of 1, block of 2, block of 3)`.
pub fn six_partitions() -> Vec<SixPartition> {
    let mut out = Vec::with_capacity(216);
    for a in 0..6u8 {
        for b in 0..6u8 {
            for c in 0..6u8 {
                out.push(SixPartition { block_of: [a, b, c] });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StVolume {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub value: Q,
    pub in_i: usize,
    pub in_j: usize,
    /// Partitions whose classification would change if a defining equality
    /// were broken the other way, with a nonzero term at stake.
    pub boundary_terms: usize,
}

fn validate_st(w: &SU3Weights) -> Result<(), Su3Error> {
    for i in 0..3 {
        if !w.l[i].is_integer() || !w.m[i].is_integer() {
            return Err(Su3Error::NonIntegral { index: i + 1 });
        }
    }
    let total = w.total_l() + w.total_m();
    if !total.to_integer().is_multiple_of(&3.into()) {
        return Err(Su3Error::DivisibilityViolation(format_rational(&total)));
    }
    if let Some(&i) = w.irregular().first() {
        return Err(Su3Error::RegularityViolation { index: i + 1 });
    }
    Ok(())
}

/// Signed sum over ordered 6-partitions of `{1, 2, 3}`.
pub fn st_volume(w: &SU3Weights) -> Result<StVolume, Su3Error> {
    validate_st(w)?;
    let third = (w.total_l() + w.total_m()) / q(3);
    let sum_l = |mask: u8| -> Q { (0..3).filter(|i| mask & (1 << i) != 0).map(|i| &w.l[i]).sum() };
    let sum_m = |mask: u8| -> Q { (0..3).filter(|i| mask & (1 << i) != 0).map(|i| &w.m[i]).sum() };

    let mut out = StVolume {
        value: Q::zero(),
        in_i: 0,
        in_j: 0,
        boundary_terms: 0,
    };
    for part in six_partitions() {
        let b = part.blocks();
        // blocks are 0-based: b[0] = I_1, ..., b[5] = I_6
        let first = sum_l(b[0] | b[1]) + sum_m(b[3] | b[4]);
        let second = sum_l(b[2] | b[3]) + sum_m(b[5] | b[0]);
        let third_cond = sum_l(b[4] | b[5]) + sum_m(b[1] | b[2]);
        let parity = b[0].count_ones() + b[2].count_ones() + b[4].count_ones();
        let coeff = if parity % 2 == 0 { qf(-1, 6) } else { qf(1, 6) };

        let in_i = first < third && second < third;
        let in_j = second > third && third_cond > third;
        assert!(!(in_i && in_j), "I and J classes are disjoint");
        if in_i {
            out.in_i += 1;
            out.value += &coeff * (&third - &first);
        } else if in_j {
            out.in_j += 1;
            out.value += &coeff * (&third_cond - &third);
        } else if second == third && (first < third || third_cond > third) {
            out.boundary_terms += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(h_closed_form(&q(2), &q(1)), q(1));
        assert_eq!(h_closed_form(&q(0), &q(0)), q(0));
        assert_eq!(h_closed_form(&q(1), &q(2)), q(0));
        assert_eq!(h_closed_form(&q(-4), &q(1)), q(0));
    }

    #[test]
    fn enumeration_signs_alternate() {
        for i in 0..6 {
            assert_eq!(weyl_lm_sign(i), if i % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn partitions() {
        let all = six_partitions();
        assert_eq!(all.len(), 216);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        let whole = SixPartition::from_blocks([0b111, 0, 0, 0, 0, 0]).unwrap();
        assert!(all.contains(&whole));
        let spread = SixPartition::from_blocks([0b001, 0b010, 0, 0, 0b100, 0]).unwrap();
        assert!(all.contains(&spread));
        assert_eq!(spread.blocks(), [0b001, 0b010, 0, 0, 0b100, 0]);
        assert!(SixPartition::from_blocks([0b001, 0b001, 0b110, 0, 0, 0]).is_none());
        assert!(SixPartition::from_blocks([0b011, 0, 0, 0, 0, 0]).is_none());
        for p in &all {
            let blocks = p.blocks();
            assert_eq!(blocks.iter().fold(0, |m, b| m | b), 0b111);
            assert_eq!(blocks.iter().map(|b| b.count_ones()).sum::<u32>(), 3);
        }
    }

    #[test]
    fn jj_on_walls_vanishes() {
        let w = SU3Weights::from_ints([3, 4, 5], [3, 1, 2]);
        let v = jj_volume(&w);
        assert_eq!(v.value, q(0));
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn jj_is_symmetric() {
        let w = SU3Weights::from_ints([5, 4, 6], [2, 1, 3]);
        let base = jj_volume(&w).value;
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(jj_volume(&w.permuted(perm)).value, base);
        }
    }

    #[test]
    fn st_validation() {
        assert!(matches!(
            st_volume(&SU3Weights::from_ints([2, 2, 1], [1, 1, 1])),
            Err(Su3Error::DivisibilityViolation(s)) if s == "8"
        ));
        assert!(matches!(
            st_volume(&SU3Weights::from_ints([3, 2, 2], [1, 1, 0])),
            Err(Su3Error::RegularityViolation { index: 3 })
        ));
        assert!(matches!(
            st_volume(&SU3Weights::from_ints([3, 2, 2], [1, 1, 1])),
            Err(Su3Error::DivisibilityViolation(_))
        ));
        let half = SU3Weights::new([qf(5, 2), q(2), q(2)], [q(1), q(1), q(1)]);
        assert!(matches!(st_volume(&half), Err(Su3Error::NonIntegral { index: 1 })));
    }

    #[test]
    fn valid_st_inputs() {
        let v = st_volume(&SU3Weights::from_ints([2, 2, 2], [1, 1, 1])).unwrap();
        assert_eq!(v.value, q(1));
        assert!(st_volume(&SU3Weights::from_ints([3, 3, 3], [1, 1, 1])).is_ok());
    }
}
