//! Weyl groups as explicit integer matrices on simple-root coordinates.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::exact::{q, Q};
use crate::rootsystem::{simple_reflection_matrix, RootSystem, RootSystemError, Weight};

pub const DEFAULT_ORDER_CAP: usize = 1152;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("Weyl group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error(transparent)]
    Dimension(#[from] RootSystemError),
}

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub sign: i8,
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let n = b.len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

pub fn int_determinant(m: &[Vec<i64>]) -> i64 {
    let qm: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let det = crate::exact::determinant(&qm);
    i64::try_from(det.to_integer()).expect("integer matrix determinant fits in i64")
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            matrix: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
            sign: 1,
        }
    }

    pub fn from_matrix(matrix: IntMatrix) -> Self {
        let det = int_determinant(&matrix);
        assert!(det == 1 || det == -1, "Weyl element must have determinant +-1");
        Self {
            matrix,
            sign: det as i8,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            matrix: int_mul(&self.matrix, &other.matrix),
            sign: self.sign * other.sign,
        }
    }

    /// Matrix-vector product on simple-root coordinates.
    pub fn act(&self, xi: &Weight) -> Result<Weight, RootSystemError> {
        if xi.dim() != self.rank() {
            return Err(RootSystemError::DimensionMismatch {
                expected: self.rank(),
                actual: xi.dim(),
            });
        }
        Ok(self.act_unchecked(xi))
    }

    pub(crate) fn act_unchecked(&self, xi: &Weight) -> Weight {
        Weight::new(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter().zip(&xi.coords).fold(Q::default(), |acc, (&a, x)| {
                        if a == 0 {
                            acc
                        } else {
                            acc + q(a) * x
                        }
                    })
                })
                .collect(),
        )
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn determinant(&self) -> i64 {
        int_determinant(&self.matrix)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }
}

pub fn act(w: &WeylElement, xi: &Weight) -> Result<Weight, RootSystemError> {
    w.act(xi)
}

pub fn sign(w: &WeylElement) -> i8 {
    w.sign()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub simple_reflections: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn generate(rs: &RootSystem) -> Result<Self, WeylError> {
        Self::generate_with_cap(rs, DEFAULT_ORDER_CAP)
    }

    /// Breadth-first closure over the simple reflections.
    pub fn generate_with_cap(rs: &RootSystem, cap: usize) -> Result<Self, WeylError> {
        let generators: Vec<WeylElement> = (0..rs.rank)
            .map(|i| WeylElement {
                matrix: simple_reflection_matrix(&rs.cartan, i),
                sign: -1,
            })
            .collect();
        let mut seen: HashSet<IntMatrix> = HashSet::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::from([WeylElement::identity(rs.rank)]);
        while let Some(w) = queue.pop_front() {
            if !seen.insert(w.matrix.clone()) {
                continue;
            }
            if seen.len() > cap {
                return Err(WeylError::OrderCapExceeded { cap });
            }
            for g in &generators {
                let next = w.compose(g);
                if !seen.contains(&next.matrix) {
                    queue.push_back(next);
                }
            }
            elements.push(w);
        }
        elements.sort_by(|a, b| a.matrix.cmp(&b.matrix));
        Ok(Self {
            elements,
            simple_reflections: generators,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.elements.first().map_or(0, WeylElement::rank)
    }

    pub fn index_of(&self, matrix: &[Vec<i64>]) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.matrix.as_slice().cmp(matrix))
            .ok()
    }

    pub fn identity_index(&self) -> usize {
        self.elements
            .iter()
            .position(WeylElement::is_identity)
            .expect("group contains the identity")
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeylElement> {
        self.elements.iter()
    }

    /// Multiplication table `table[i][j] = index(e_i * e_j)`, or `None` if
    /// the element set is not closed.
    pub fn multiplication_table(&self) -> Option<Vec<Vec<usize>>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| self.index_of(&int_mul(&a.matrix, &b.matrix)))
                    .collect()
            })
            .collect()
    }

    /// Flips the stored sign of one element. Used to check that the self-test
    /// suite notices a broken group.
    pub fn with_corrupted_sign(mut self, index: usize) -> Self {
        self.elements[index].sign = -self.elements[index].sign;
        self
    }

    /// Elements fixing `xi`.
    pub fn stabilizer(&self, xi: &Weight) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, w)| w.act_unchecked(xi) == *xi)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn expected_order(rs: &RootSystem) -> usize {
    use crate::rootsystem::Series;
    let n = rs.rank;
    let fact = |k: usize| (1..=k).product::<usize>();
    match rs.series {
        Series::A => fact(n + 1),
        Series::B | Series::C => (1 << n) * fact(n),
        Series::D => (1 << (n - 1)) * fact(n),
        Series::G => 12,
    }
}
