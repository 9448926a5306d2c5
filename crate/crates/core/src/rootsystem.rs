//! Root systems of the classical series at small rank.
//!
//! All coordinates are taken in the simple-root basis of the dual Cartan
//! subalgebra. The Cartan matrix uses the convention
//! `cartan[i][j] = <alpha_i^vee, alpha_j>`, so the simple reflection `s_i`
//! changes only coordinate `i`: `x_i <- x_i - sum_j cartan[i][j] x_j`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, mat_vec, q, Q, QMatrix, VecDisplay};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unsupported root system {0}")]
    UnsupportedType(String),
    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A `(series, rank)` pair such as `A2`, parsed case-insensitively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType {
    pub series: Series,
    pub rank: usize,
}

impl GroupType {
    pub const SUPPORTED: [(Series, usize); 10] = [
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::A, 4),
        (Series::B, 2),
        (Series::B, 3),
        (Series::C, 2),
        (Series::C, 3),
        (Series::D, 4),
        (Series::G, 2),
    ];

    pub fn new(series: Series, rank: usize) -> Self {
        Self { series, rank }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for GroupType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RootSystemError::UnsupportedType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('G') => Series::G,
            _ => return Err(err()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| err())?;
        Ok(GroupType { series, rank })
    }
}

/// Exact weight in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Q>,
}

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(exact::qvec(coords))
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self::new(exact::scale_vec(&self.coords, t))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", VecDisplay(&self.coords))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight::new(exact::add_vec(&self.coords, &rhs.coords))
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight::new(exact::sub_vec(&self.coords, &rhs.coords))
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(self.coords.iter().map(|x| -x).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub fundamental_weights: Vec<Weight>,
    /// Invariant form on simple roots, `(alpha_i, alpha_j)` up to one global scale.
    pub gram: QMatrix,
    inverse_cartan: QMatrix,
}

fn cartan_matrix(series: Series, rank: usize) -> Vec<Vec<i64>> {
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    match series {
        Series::A | Series::B | Series::C => {
            for i in 0..n.saturating_sub(1) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            if n >= 2 {
                match series {
                    // alpha_n short
                    Series::B => c[n - 1][n - 2] = -2,
                    // alpha_n long
                    Series::C => c[n - 2][n - 1] = -2,
                    _ => {}
                }
            }
        }
        Series::D => {
            for i in 0..n - 2 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        Series::G => {
            // alpha_1 short, alpha_2 long
            c[0][1] = -3;
            c[1][0] = -1;
        }
    }
    c
}

fn expected_positive_root_count(series: Series, n: usize) -> usize {
    match series {
        Series::A => n * (n + 1) / 2,
        Series::B | Series::C => n * n,
        Series::D => n * (n - 1),
        Series::G => 6,
    }
}

pub fn simple_reflection_matrix(cartan: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect();
    for j in 0..n {
        m[i][j] -= cartan[i][j];
    }
    m
}

fn apply_int(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Symmetrizing factors `d_i` with `d_i * C[i][j] = d_j * C[j][i]`.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<Q> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(q(1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let di = d[i].clone().unwrap();
        for j in 0..n {
            if j != i && cartan[i][j] != 0 && d[j].is_none() {
                d[j] = Some(&di * q(cartan[i][j]) / q(cartan[j][i]));
                stack.push(j);
            }
        }
    }
    d.into_iter().map(|x| x.unwrap_or_else(|| q(1))).collect()
}

/// Builds the root system for one of the supported `(series, rank)` pairs.
pub fn build_root_system(series: Series, rank: usize) -> Result<RootSystem, RootSystemError> {
    if !GroupType::SUPPORTED.contains(&(series, rank)) {
        return Err(RootSystemError::UnsupportedType(format!("{series}{rank}")));
    }
    let cartan = cartan_matrix(series, rank);
    let reflections: Vec<_> = (0..rank)
        .map(|i| simple_reflection_matrix(&cartan, i))
        .collect();

    let simple: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut found: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for root in &frontier {
            for s in &reflections {
                let image = apply_int(s, root);
                if image.iter().all(|&x| x >= 0) && found.insert(image.clone()) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    let mut positive: Vec<Vec<i64>> = found.into_iter().collect();
    // By height, then simple roots in index order.
    positive.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    debug_assert_eq!(positive.len(), expected_positive_root_count(series, rank));

    let cartan_q: QMatrix = cartan
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    let inverse_cartan = exact::inverse(&cartan_q).expect("Cartan matrices are invertible");
    let fundamental_weights = (0..rank)
        .map(|i| Weight::new(inverse_cartan.iter().map(|row| row[i].clone()).collect()))
        .collect();

    let d = symmetrizer(&cartan);
    let gram: QMatrix = (0..rank)
        .map(|i| (0..rank).map(|j| &d[i] * q(cartan[i][j])).collect())
        .collect();

    Ok(RootSystem {
        series,
        rank,
        simple_roots: simple.iter().map(|r| Weight::from_ints(r)).collect(),
        positive_roots: positive.iter().map(|r| Weight::from_ints(r)).collect(),
        cartan,
        fundamental_weights,
        gram,
        inverse_cartan,
    })
}

impl RootSystem {
    pub fn from_type(t: GroupType) -> Result<Self, RootSystemError> {
        build_root_system(t.series, t.rank)
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::new(self.series, self.rank)
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn expected_positive_root_count(&self) -> usize {
        expected_positive_root_count(self.series, self.rank)
    }

    fn check_dim(&self, len: usize) -> Result<(), RootSystemError> {
        if len != self.rank {
            return Err(RootSystemError::DimensionMismatch {
                expected: self.rank,
                actual: len,
            });
        }
        Ok(())
    }

    /// `sum_i c_i omega_i` expressed in simple-root coordinates.
    pub fn fundamental_to_simple(&self, fw_coords: &[Q]) -> Result<Weight, RootSystemError> {
        self.check_dim(fw_coords.len())?;
        Ok(Weight::new(mat_vec(&self.inverse_cartan, fw_coords)))
    }

    /// Inverse of [`fundamental_to_simple`](Self::fundamental_to_simple):
    /// the coroot pairings `<xi, alpha_i^vee>`.
    pub fn simple_to_fundamental(&self, xi: &Weight) -> Result<Vec<Q>, RootSystemError> {
        self.check_dim(xi.dim())?;
        Ok(self
            .cartan
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&xi.coords)
                    .fold(Q::zero(), |acc, (&c, x)| acc + q(c) * x)
            })
            .collect())
    }

    /// Invariant inner product (up to global scale) of two weights.
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        let gb = mat_vec(&self.gram, &b.coords);
        exact::dot(&a.coords, &gb)
    }

    /// Positive roots `alpha` with `(xi, alpha) = 0`.
    pub fn orthogonal_roots(&self, xi: &Weight) -> Vec<usize> {
        self.positive_roots
            .iter()
            .enumerate()
            .filter(|(_, r)| self.inner(xi, r).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Nonzero pairing with every root, i.e. the stabilizer is the torus.
    pub fn is_regular(&self, xi: &Weight) -> bool {
        self.orthogonal_roots(xi).is_empty()
    }

    /// Strictly dominant: positive pairing with every simple coroot.
    pub fn is_strictly_dominant(&self, xi: &Weight) -> bool {
        self.simple_to_fundamental(xi)
            .map(|c| c.iter().all(Signed::is_positive))
            .unwrap_or(false)
    }

    /// Positive roots as the columns of a `rank x r` matrix.
    pub fn positive_root_matrix(&self) -> QMatrix {
        (0..self.rank)
            .map(|k| {
                self.positive_roots
                    .iter()
                    .map(|r| r.coords[k].clone())
                    .collect()
            })
            .collect()
    }
}

/// The A2 weight `(l - m) omega_1 + m omega_2` in simple-root coordinates.
pub fn su3_lm_to_simple(l: &Q, m: &Q) -> Weight {
    let three = q(3);
    Weight::new(vec![
        (q(2) * l - m) / &three,
        (l + m) / &three,
    ])
}

/// Inverse of [`su3_lm_to_simple`].
pub fn simple_to_su3_lm(xi: &Weight) -> (Q, Q) {
    let (x1, x2) = (&xi.coords[0], &xi.coords[1]);
    (x1 + x2, -x1 + q(2) * x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    fn roots(rs: &RootSystem) -> Vec<Vec<Q>> {
        rs.positive_roots.iter().map(|r| r.coords.clone()).collect()
    }

    #[test]
    fn a2_positive_roots() {
        let rs = build_root_system(Series::A, 2).unwrap();
        assert_eq!(
            roots(&rs),
            vec![exact::qvec(&[1, 0]), exact::qvec(&[0, 1]), exact::qvec(&[1, 1])]
        );
    }

    #[test]
    fn a1_single_root() {
        let rs = build_root_system(Series::A, 1).unwrap();
        assert_eq!(roots(&rs), vec![exact::qvec(&[1])]);
    }

    #[test]
    fn b2_closure() {
        let rs = build_root_system(Series::B, 2).unwrap();
        assert_eq!(rs.num_positive_roots(), 4);
        assert_eq!(
            roots(&rs),
            vec![
                exact::qvec(&[1, 0]),
                exact::qvec(&[0, 1]),
                exact::qvec(&[1, 1]),
                exact::qvec(&[1, 2]),
            ]
        );
    }

    #[test]
    fn every_supported_type_has_the_right_root_count() {
        for (series, rank) in GroupType::SUPPORTED {
            let rs = build_root_system(series, rank).unwrap();
            assert_eq!(rs.num_positive_roots(), rs.expected_positive_root_count(), "{series}{rank}");
            for r in &rs.positive_roots {
                assert!(r.coords.iter().all(|x| !x.is_negative()));
                assert!(r.coords.iter().any(Signed::is_positive));
            }
            for s in &rs.simple_roots {
                assert!(rs.positive_roots.contains(s));
            }
            // <omega_i, alpha_j^vee> = delta_ij
            for (i, w) in rs.fundamental_weights.iter().enumerate() {
                let pairing = rs.simple_to_fundamental(w).unwrap();
                for (j, p) in pairing.iter().enumerate() {
                    assert_eq!(*p, q(i64::from(i == j)));
                }
            }
            // gram is symmetric
            for i in 0..rank {
                for j in 0..rank {
                    assert_eq!(rs.gram[i][j], rs.gram[j][i]);
                }
            }
        }
    }

    #[test]
    fn unsupported_types() {
        assert!(matches!(
            build_root_system(Series::G, 3),
            Err(RootSystemError::UnsupportedType(_))
        ));
        assert!(build_root_system(Series::A, 5).is_err());
        assert!(build_root_system(Series::D, 3).is_err());
    }

    #[test]
    fn parses_group_names() {
        assert_eq!("a2".parse::<GroupType>().unwrap(), GroupType::new(Series::A, 2));
        assert_eq!(" B3".parse::<GroupType>().unwrap(), GroupType::new(Series::B, 3));
        assert!("E8x".parse::<GroupType>().is_err());
        assert!("A".parse::<GroupType>().is_err());
    }

    #[test]
    fn fundamental_weights_of_a2() {
        let rs = build_root_system(Series::A, 2).unwrap();
        let w = rs.fundamental_to_simple(&exact::qvec(&[1, 0])).unwrap();
        assert_eq!(w.coords, vec![qf(2, 3), qf(1, 3)]);
        let w = rs.fundamental_to_simple(&exact::qvec(&[0, 0])).unwrap();
        assert_eq!(w.coords, exact::qvec(&[0, 0]));
        let w = rs.fundamental_to_simple(&exact::qvec(&[1, 1])).unwrap();
        assert_eq!(w.coords, exact::qvec(&[1, 1]));
        assert!(matches!(
            rs.fundamental_to_simple(&exact::qvec(&[1])),
            Err(RootSystemError::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn su3_lm_examples() {
        assert_eq!(su3_lm_to_simple(&q(2), &q(1)).coords, exact::qvec(&[1, 1]));
        assert_eq!(su3_lm_to_simple(&q(0), &q(0)).coords, exact::qvec(&[0, 0]));
        assert_eq!(su3_lm_to_simple(&q(3), &q(1)).coords, vec![qf(5, 3), qf(4, 3)]);
    }

    #[test]
    fn regularity_of_su3_weights() {
        let rs = build_root_system(Series::A, 2).unwrap();
        assert!(rs.is_regular(&su3_lm_to_simple(&q(2), &q(1))));
        assert!(!rs.is_regular(&su3_lm_to_simple(&q(3), &q(3))));
        assert!(!rs.is_regular(&su3_lm_to_simple(&q(3), &q(0))));
        assert!(rs.is_strictly_dominant(&su3_lm_to_simple(&q(5), &q(2))));
    }
}
