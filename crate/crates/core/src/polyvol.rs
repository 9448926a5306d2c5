//! Fiber polytopes `{s >= 0 : A s = xi}` and their exact volumes.
//!
//! A fiber is parameterized as `s = R xi + K t` with `A R = I` and the columns
//! of `K` a kernel basis of `A`. Volumes are reported as pushforward densities:
//! the Lebesgue volume of the `t`-region times `|det[R K]|`, which makes the
//! result independent of the chosen section and kernel basis.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{self, affine_dimension, determinant, mat_vec, Q, QMatrix};
use crate::lp;

/// Largest number of inequalities accepted by vertex enumeration.
pub const MAX_CONSTRAINTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("constraint matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("columns of the constraint matrix do not lie in an open half-space")]
    Unbounded,
    #[error("expected a target vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("{count} constraints exceed the vertex-enumeration cap of {cap}")]
    TooManyConstraints { count: usize, cap: usize },
    #[error("Monte Carlo estimation needs a positive-dimensional polytope")]
    ZeroDimensional,
    #[error("polytope is empty")]
    Empty,
}

/// One constraint `c + g·t >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub g: Vec<Q>,
    pub c: Q,
}

impl Inequality {
    pub fn eval(&self, t: &[Q]) -> Q {
        &self.c + exact::dot(&self.g, t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPolytope {
    pub ambient_dim: usize,
    pub target_dim: usize,
    pub free_dim: usize,
    pub inequalities: Vec<Inequality>,
    pub jacobian: Q,
}

impl FiberPolytope {
    /// A polytope given directly by inequalities in `free_dim` variables.
    /// The region is assumed bounded.
    pub fn from_inequalities(
        free_dim: usize,
        inequalities: Vec<Inequality>,
        jacobian: Q,
    ) -> Result<Self, PolyError> {
        if let Some(bad) = inequalities.iter().find(|i| i.g.len() != free_dim) {
            return Err(PolyError::DimensionMismatch {
                expected: free_dim,
                actual: bad.g.len(),
            });
        }
        let g: QMatrix = inequalities.iter().map(|i| i.g.clone()).collect();
        if free_dim > 0 && exact::rank(&g) < free_dim {
            return Err(PolyError::Unbounded);
        }
        let ambient_dim = inequalities.len();
        Ok(Self {
            ambient_dim,
            target_dim: ambient_dim.saturating_sub(free_dim),
            free_dim,
            inequalities,
            jacobian,
        })
    }

    /// `0 <= t_i` and `sum t_i <= 1`.
    pub fn unit_simplex(dim: usize) -> Self {
        let mut ineqs: Vec<Inequality> = (0..dim)
            .map(|i| Inequality {
                g: (0..dim).map(|j| exact::q(i64::from(i == j))).collect(),
                c: Q::zero(),
            })
            .collect();
        ineqs.push(Inequality {
            g: vec![exact::q(-1); dim],
            c: exact::q(1),
        });
        Self::from_inequalities(dim, ineqs, exact::q(1)).expect("simplex is bounded")
    }

    /// `0 <= t_i <= 1`.
    pub fn unit_cube(dim: usize) -> Self {
        let mut ineqs = Vec::new();
        for i in 0..dim {
            let e: Vec<Q> = (0..dim).map(|j| exact::q(i64::from(i == j))).collect();
            ineqs.push(Inequality {
                g: e.clone(),
                c: Q::zero(),
            });
            ineqs.push(Inequality {
                g: e.iter().map(|x| -x).collect(),
                c: exact::q(1),
            });
        }
        Self::from_inequalities(dim, ineqs, exact::q(1)).expect("cube is bounded")
    }

    pub fn contains(&self, t: &[Q]) -> bool {
        self.inequalities.iter().all(|i| !i.eval(t).is_negative())
    }

    /// Permutes the underlying coordinates, i.e. the order of inequalities.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            inequalities: perm.iter().map(|&i| self.inequalities[i].clone()).collect(),
            ..self.clone()
        }
    }
}

/// Outcome of [`fiber_polytope`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    Feasible(FiberPolytope),
    Infeasible,
}

/// Parameterization of all fibers of one constraint matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberParam {
    pub matrix: QMatrix,
    pub section: QMatrix,
    pub kernel: QMatrix,
    pub jacobian: Q,
}

impl FiberParam {
    pub fn new(a: &[Vec<Q>]) -> Result<Self, PolyError> {
        let d = a.len();
        let n = a.first().map_or(0, Vec::len);
        let (_, pivots) = exact::rref(a);
        if pivots.len() < d {
            return Err(PolyError::RankDeficient {
                rank: pivots.len(),
                rows: d,
            });
        }
        if lp::strictly_positive_functional(a).is_none() {
            return Err(PolyError::Unbounded);
        }
        let pivot_block: QMatrix = a
            .iter()
            .map(|row| pivots.iter().map(|&p| row[p].clone()).collect())
            .collect();
        let block_inv = exact::inverse(&pivot_block).expect("pivot block is invertible");
        let mut section = exact::zeros(n, d);
        for (k, &p) in pivots.iter().enumerate() {
            section[p] = block_inv[k].clone();
        }
        let kernel = exact::kernel_basis(a);
        let combined: QMatrix = section
            .iter()
            .zip(&kernel)
            .map(|(r, k)| r.iter().chain(k).cloned().collect())
            .collect();
        let jacobian = determinant(&combined).abs();
        Ok(Self {
            matrix: a.to_vec(),
            section,
            kernel,
            jacobian,
        })
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.section.len()
    }

    pub fn free_dim(&self) -> usize {
        self.ambient_dim() - self.target_dim()
    }

    fn check_target(&self, xi: &[Q]) -> Result<(), PolyError> {
        if xi.len() != self.target_dim() {
            return Err(PolyError::DimensionMismatch {
                expected: self.target_dim(),
                actual: xi.len(),
            });
        }
        Ok(())
    }

    /// Inequality system for the fiber over `xi`, without a feasibility check.
    pub fn polytope_unchecked(&self, xi: &[Q]) -> Result<FiberPolytope, PolyError> {
        self.check_target(xi)?;
        let base = mat_vec(&self.section, xi);
        let inequalities = base
            .into_iter()
            .zip(&self.kernel)
            .map(|(c, g)| Inequality { g: g.clone(), c })
            .collect();
        Ok(FiberPolytope {
            ambient_dim: self.ambient_dim(),
            target_dim: self.target_dim(),
            free_dim: self.free_dim(),
            inequalities,
            jacobian: self.jacobian.clone(),
        })
    }

    pub fn polytope(&self, xi: &[Q]) -> Result<Fiber, PolyError> {
        self.check_target(xi)?;
        if lp::feasible_point(&self.matrix, xi).is_none() {
            return Ok(Fiber::Infeasible);
        }
        self.polytope_unchecked(xi).map(Fiber::Feasible)
    }
}

/// The fiber `{s >= 0 : A s = xi}` in kernel coordinates.
pub fn fiber_polytope(a: &[Vec<Q>], xi: &[Q]) -> Result<Fiber, PolyError> {
    FiberParam::new(a)?.polytope(xi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactVolume {
    pub value: Q,
    /// Feasible but of dimension below `free_dim` (or, for `free_dim = 0`, a
    /// point with some coordinate exactly zero).
    pub wall: bool,
    pub vertices: usize,
}

/// Which vertex each face is coned from during triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseVertex {
    First,
    Last,
}

pub fn exact_volume(p: &FiberPolytope) -> Result<ExactVolume, PolyError> {
    exact_volume_with(p, BaseVertex::First)
}

struct VertexSet {
    points: Vec<Vec<Q>>,
    tight: Vec<u32>,
}

fn enumerate_vertices(p: &FiberPolytope) -> Result<VertexSet, PolyError> {
    let n = p.inequalities.len();
    if n > MAX_CONSTRAINTS {
        return Err(PolyError::TooManyConstraints {
            count: n,
            cap: MAX_CONSTRAINTS,
        });
    }
    let a = p.free_dim;
    let mut found: BTreeSet<Vec<Q>> = BTreeSet::new();
    for subset in (0..n).combinations(a) {
        let m: QMatrix = subset.iter().map(|&i| p.inequalities[i].g.clone()).collect();
        let rhs: Vec<Q> = subset.iter().map(|&i| -p.inequalities[i].c.clone()).collect();
        if let Some(t) = exact::solve(&m, &rhs) {
            if p.contains(&t) {
                found.insert(t);
            }
        }
    }
    let points: Vec<Vec<Q>> = found.into_iter().collect();
    let tight = points
        .iter()
        .map(|t| {
            p.inequalities
                .iter()
                .enumerate()
                .filter(|(_, ineq)| ineq.eval(t).is_zero())
                .fold(0u32, |mask, (i, _)| mask | (1 << i))
        })
        .collect();
    Ok(VertexSet { points, tight })
}

fn subset_dimension(vs: &VertexSet, subset: &[usize]) -> Option<usize> {
    let refs: Vec<&Vec<Q>> = subset.iter().map(|&i| &vs.points[i]).collect();
    affine_dimension(&refs)
}

/// Pulling triangulation: cone the base vertex over a triangulation of every
/// facet that does not contain it.
fn triangulate(
    vs: &VertexSet,
    n_ineq: usize,
    face: &[usize],
    dim: usize,
    base: BaseVertex,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let apex = match base {
        BaseVertex::First => face[0],
        BaseVertex::Last => face[face.len() - 1],
    };
    if dim == 0 {
        prefix.push(apex);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n_ineq {
        let bit = 1u32 << i;
        if vs.tight[apex] & bit != 0 {
            continue;
        }
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| vs.tight[v] & bit != 0)
            .collect();
        if !sub.is_empty() && subset_dimension(vs, &sub) == Some(dim - 1) {
            facets.insert(sub);
        }
    }
    prefix.push(apex);
    for facet in &facets {
        triangulate(vs, n_ineq, facet, dim - 1, base, prefix, out);
    }
    prefix.pop();
}

pub fn exact_volume_with(p: &FiberPolytope, base: BaseVertex) -> Result<ExactVolume, PolyError> {
    let a = p.free_dim;
    if a == 0 {
        let cs: Vec<&Q> = p.inequalities.iter().map(|i| &i.c).collect();
        if cs.iter().any(|c| c.is_negative()) {
            return Ok(ExactVolume {
                value: Q::zero(),
                wall: false,
                vertices: 0,
            });
        }
        return Ok(ExactVolume {
            value: p.jacobian.clone(),
            wall: cs.iter().any(|c| c.is_zero()),
            vertices: 1,
        });
    }
    let vs = enumerate_vertices(p)?;
    let all: Vec<usize> = (0..vs.points.len()).collect();
    match subset_dimension(&vs, &all) {
        None => {
            return Ok(ExactVolume {
                value: Q::zero(),
                wall: false,
                vertices: 0,
            })
        }
        Some(dim) if dim < a => {
            return Ok(ExactVolume {
                value: Q::zero(),
                wall: true,
                vertices: vs.points.len(),
            })
        }
        Some(_) => {}
    }
    let simplices = simplices_of(&vs, p.inequalities.len(), &all, a, base);
    let total = simplices.iter().fold(Q::zero(), |acc, s| {
        let origin = &vs.points[s[0]];
        let m: QMatrix = s[1..]
            .iter()
            .map(|&v| exact::sub_vec(&vs.points[v], origin))
            .collect();
        acc + determinant(&m).abs()
    });
    let value = total * &p.jacobian / Q::from_integer(exact::factorial(a));
    Ok(ExactVolume {
        value,
        wall: false,
        vertices: vs.points.len(),
    })
}

fn simplices_of(
    vs: &VertexSet,
    n_ineq: usize,
    face: &[usize],
    dim: usize,
    base: BaseVertex,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    triangulate(vs, n_ineq, face, dim, base, &mut Vec::new(), &mut out);
    out
}

/// Vertices of the `t`-region in sorted order.
pub fn vertices(p: &FiberPolytope) -> Result<Vec<Vec<Q>>, PolyError> {
    Ok(enumerate_vertices(p)?.points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Hit-or-miss estimate over the bounding box of the vertices.
pub fn monte_carlo_volume(
    p: &FiberPolytope,
    samples: u64,
    seed: u64,
) -> Result<VolumeEstimate, PolyError> {
    let a = p.free_dim;
    if a == 0 {
        return Err(PolyError::ZeroDimensional);
    }
    assert!(samples > 0, "at least one sample is required");
    let vs = enumerate_vertices(p)?;
    if vs.points.is_empty() {
        return Err(PolyError::Empty);
    }
    let lo: Vec<f64> = (0..a)
        .map(|k| vs.points.iter().map(|v| exact::to_f64(&v[k])).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..a)
        .map(|k| {
            vs.points
                .iter()
                .map(|v| exact::to_f64(&v[k]))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let scale = box_volume * exact::to_f64(&p.jacobian);
    if box_volume == 0.0 {
        return Ok(VolumeEstimate {
            value: 0.0,
            std_error: 0.0,
            samples,
            seed,
        });
    }
    let rows: Vec<(Vec<f64>, f64)> = p
        .inequalities
        .iter()
        .map(|i| (i.g.iter().map(exact::to_f64).collect(), exact::to_f64(&i.c)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0.0; a];
    let mut hits: u64 = 0;
    for _ in 0..samples {
        for k in 0..a {
            t[k] = rng.gen_range(lo[k]..=hi[k]);
        }
        let inside = rows
            .iter()
            .all(|(g, c)| c + g.iter().zip(&t).map(|(x, y)| x * y).sum::<f64>() >= 0.0);
        if inside {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        value: scale * frac,
        std_error: scale * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{from_int_rows, q, qf, qvec};

    fn segment_matrix() -> QMatrix {
        from_int_rows(&[vec![1, 0, 1], vec![0, 1, 1]])
    }

    #[test]
    fn segment_fiber() {
        let Fiber::Feasible(p) = fiber_polytope(&segment_matrix(), &qvec(&[1, 1])).unwrap() else {
            panic!("expected feasible");
        };
        assert_eq!(p.free_dim, 1);
        assert_eq!(p.jacobian, q(1));
        let v = exact_volume(&p).unwrap();
        assert_eq!(v.value, q(1));
        assert!(!v.wall);
    }

    #[test]
    fn origin_fiber_is_a_point() {
        let Fiber::Feasible(p) = fiber_polytope(&segment_matrix(), &qvec(&[0, 0])).unwrap() else {
            panic!("expected feasible");
        };
        let verts = vertices(&p).unwrap();
        assert_eq!(verts.len(), 1);
        let v = exact_volume(&p).unwrap();
        assert_eq!(v.value, q(0));
        assert!(v.wall);
    }

    #[test]
    fn negative_target_is_infeasible() {
        assert_eq!(
            fiber_polytope(&segment_matrix(), &qvec(&[-1, 0])).unwrap(),
            Fiber::Infeasible
        );
    }

    #[test]
    fn construction_errors() {
        let rank_def = from_int_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(matches!(
            fiber_polytope(&rank_def, &qvec(&[1, 2])),
            Err(PolyError::RankDeficient { rank: 1, rows: 2 })
        ));
        let opposed = from_int_rows(&[vec![1, -1]]);
        assert_eq!(fiber_polytope(&opposed, &qvec(&[1])), Err(PolyError::Unbounded));
        assert!(matches!(
            fiber_polytope(&segment_matrix(), &qvec(&[1])),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simplex_and_cube() {
        assert_eq!(exact_volume(&FiberPolytope::unit_simplex(3)).unwrap().value, qf(1, 6));
        assert_eq!(exact_volume(&FiberPolytope::unit_cube(2)).unwrap().value, q(1));
        assert_eq!(exact_volume(&FiberPolytope::unit_cube(3)).unwrap().value, q(1));
        assert_eq!(exact_volume(&FiberPolytope::unit_simplex(4)).unwrap().value, qf(1, 24));
    }

    #[test]
    fn base_vertex_choice_does_not_matter() {
        for p in [FiberPolytope::unit_cube(3), FiberPolytope::unit_simplex(3)] {
            assert_eq!(
                exact_volume_with(&p, BaseVertex::First).unwrap(),
                exact_volume_with(&p, BaseVertex::Last).unwrap()
            );
        }
    }

    #[test]
    fn zero_dimensional_fibers() {
        let a = from_int_rows(&[vec![1]]);
        let param = FiberParam::new(&a).unwrap();
        let p = param.polytope_unchecked(&qvec(&[3])).unwrap();
        assert_eq!(exact_volume(&p).unwrap().value, q(1));
        let p = param.polytope_unchecked(&qvec(&[0])).unwrap();
        let v = exact_volume(&p).unwrap();
        assert_eq!(v.value, q(1));
        assert!(v.wall);
        let p = param.polytope_unchecked(&qvec(&[-1])).unwrap();
        assert_eq!(exact_volume(&p).unwrap().value, q(0));
        assert_eq!(monte_carlo_volume(&p, 10, 0), Err(PolyError::ZeroDimensional));
    }

    #[test]
    fn constraint_cap() {
        let p = FiberPolytope::unit_cube(13);
        assert!(matches!(
            exact_volume(&p),
            Err(PolyError::TooManyConstraints { count: 26, cap: 24 })
        ));
    }

    #[test]
    fn monte_carlo_matches_exact() {
        for (p, exact) in [
            (FiberPolytope::unit_cube(2), 1.0),
            (FiberPolytope::unit_simplex(3), 1.0 / 6.0),
        ] {
            let est = monte_carlo_volume(&p, 200_000, 7).unwrap();
            assert!((est.value - exact).abs() <= 3.0 * est.std_error + 1e-12, "{est:?}");
        }
        let again = monte_carlo_volume(&FiberPolytope::unit_simplex(3), 1000, 3).unwrap();
        assert_eq!(again, monte_carlo_volume(&FiberPolytope::unit_simplex(3), 1000, 3).unwrap());
    }
}
