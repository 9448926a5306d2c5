//! Duistermaat-Heckman densities `H_{M·beta}(xi)`.
//!
//! `H_{M·beta}` is the pushforward of Lebesgue measure on the orthant
//! `R_{>=0}^{M r}` under `s -> sum_{j,i} s_i^{(j)} beta_i`, with each positive
//! root `beta_i` repeated `M` times. It is piecewise polynomial of degree
//! `a = M r - rank`, supported on the cone spanned by the positive roots.

use dashmap::DashMap;
use num_traits::Signed;
use thiserror::Error;

use crate::exact::{Q, QMatrix};
use crate::lp;
use crate::polyvol::{exact_volume, Fiber, FiberParam, PolyError};
use crate::rootsystem::{RootSystem, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DhError {
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DhValue {
    pub value: Q,
    /// The argument lies on a wall of the support cone.
    pub wall: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConePosition {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug)]
pub struct DhProblem {
    rs: RootSystem,
    multiplicity: usize,
    param: FiberParam,
    root_matrix: QMatrix,
    cache: DashMap<Vec<Q>, DhValue>,
}

impl DhProblem {
    pub fn new(rs: &RootSystem, multiplicity: usize) -> Result<Self, DhError> {
        if multiplicity == 0 {
            return Err(DhError::ZeroMultiplicity);
        }
        let root_matrix = rs.positive_root_matrix();
        let stacked: QMatrix = root_matrix
            .iter()
            .map(|row| {
                std::iter::repeat_n(row.iter(), multiplicity)
                    .flatten()
                    .cloned()
                    .collect()
            })
            .collect();
        let param = FiberParam::new(&stacked)?;
        Ok(Self {
            rs: rs.clone(),
            multiplicity,
            param,
            root_matrix,
            cache: DashMap::new(),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Number of `s`-variables, `M r`.
    pub fn ambient_dim(&self) -> usize {
        self.param.ambient_dim()
    }

    /// Polynomial degree `a = M r - rank`.
    pub fn free_dim(&self) -> usize {
        self.param.free_dim()
    }

    pub fn jacobian(&self) -> &Q {
        &self.param.jacobian
    }

    pub fn constraint_matrix(&self) -> &QMatrix {
        &self.param.matrix
    }

    pub fn fiber(&self, xi: &Weight) -> Result<Fiber, DhError> {
        Ok(self.param.polytope(&xi.coords)?)
    }

    pub fn dh_density(&self, xi: &Weight) -> Result<DhValue, DhError> {
        if let Some(hit) = self.cache.get(&xi.coords) {
            return Ok(hit.clone());
        }
        let value = self.dh_density_uncached(xi)?;
        self.cache.insert(xi.coords.clone(), value.clone());
        Ok(value)
    }

    pub fn dh_density_uncached(&self, xi: &Weight) -> Result<DhValue, DhError> {
        match self.param.polytope(&xi.coords)? {
            Fiber::Infeasible => Ok(DhValue {
                value: Q::default(),
                wall: false,
            }),
            Fiber::Feasible(p) => {
                let vol = exact_volume(&p)?;
                Ok(DhValue {
                    value: vol.value,
                    wall: vol.wall,
                })
            }
        }
    }

    /// Interior iff some strictly positive `s` solves `A s = xi`.
    pub fn in_cone(&self, xi: &Weight) -> ConePosition {
        match lp::max_uniform_margin(&self.root_matrix, &xi.coords) {
            None => ConePosition::Outside,
            Some(margin) if margin.is_positive() => ConePosition::Inside,
            Some(_) => ConePosition::Boundary,
        }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qf};
    use crate::rootsystem::{build_root_system, su3_lm_to_simple, Series};

    fn a2(m: usize) -> DhProblem {
        DhProblem::new(&build_root_system(Series::A, 2).unwrap(), m).unwrap()
    }

    #[test]
    fn a2_examples() {
        let p = a2(1);
        assert_eq!(p.free_dim(), 1);
        assert_eq!(p.dh_density(&Weight::from_ints(&[1, 1])).unwrap().value, q(1));
        assert_eq!(p.dh_density(&Weight::from_ints(&[-1, -1])).unwrap().value, q(0));
        // (l, m) = (2, 1) lands on the same point.
        assert_eq!(p.dh_density(&su3_lm_to_simple(&q(2), &q(1))).unwrap().value, q(1));
        assert_eq!(p.dh_density(&Weight::new(vec![qf(1, 2), q(3)])).unwrap().value, qf(1, 2));
    }

    #[test]
    fn a1_indicator() {
        let p = DhProblem::new(&build_root_system(Series::A, 1).unwrap(), 1).unwrap();
        assert_eq!(p.free_dim(), 0);
        for x in [-3, -1, 0, 1, 5] {
            let v = p.dh_density(&Weight::from_ints(&[x])).unwrap();
            assert_eq!(v.value, q(i64::from(x >= 0)));
            assert_eq!(v.wall, x == 0);
        }
    }

    #[test]
    fn a1_higher_multiplicity() {
        // M = 2: H(x) = x for x >= 0; M = 3: H(x) = x^2 / 2.
        let rs = build_root_system(Series::A, 1).unwrap();
        let p2 = DhProblem::new(&rs, 2).unwrap();
        let p3 = DhProblem::new(&rs, 3).unwrap();
        assert_eq!(p2.dh_density(&Weight::from_ints(&[3])).unwrap().value, q(3));
        assert_eq!(p3.dh_density(&Weight::from_ints(&[3])).unwrap().value, qf(9, 2));
        assert_eq!(p3.dh_density(&Weight::from_ints(&[-3])).unwrap().value, q(0));
    }

    #[test]
    fn cone_positions() {
        let p = a2(1);
        assert_eq!(p.in_cone(&Weight::from_ints(&[1, 1])), ConePosition::Inside);
        assert_eq!(p.in_cone(&Weight::from_ints(&[1, 0])), ConePosition::Boundary);
        assert_eq!(p.in_cone(&Weight::from_ints(&[-1, 0])), ConePosition::Outside);
        let wall = p.dh_density(&Weight::from_ints(&[1, 0])).unwrap();
        assert_eq!(wall.value, q(0));
        assert!(wall.wall);
    }

    #[test]
    fn cache_is_transparent() {
        let p = a2(2);
        let xi = Weight::new(vec![qf(3, 2), qf(5, 7)]);
        let first = p.dh_density(&xi).unwrap();
        assert_eq!(p.cache_len(), 1);
        assert_eq!(p.dh_density(&xi).unwrap(), first);
        assert_eq!(p.dh_density_uncached(&xi).unwrap(), first);
    }

    #[test]
    fn zero_multiplicity_is_rejected() {
        let rs = build_root_system(Series::A, 2).unwrap();
        assert_eq!(DhProblem::new(&rs, 0).unwrap_err(), DhError::ZeroMultiplicity);
    }
}
