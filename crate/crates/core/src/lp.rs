//! Exact two-phase simplex over the rationals.
//!
//! Problems are given in standard form: maximize `c·x` subject to `A x = b`,
//! `x ≥ 0`. Bland's rule is used for both entering and leaving variables, so
//! the method terminates on degenerate problems (which are the norm here:
//! cone walls and boundary fibers are exactly the degenerate cases).

use num_traits::{One, Signed, Zero};

use crate::exact::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for x in self.t[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, obj: &[Q], col: usize) -> Q {
        let mut d = obj[col].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !obj[b].is_zero() && !self.t[i][col].is_zero() {
                d -= &obj[b] * &self.t[i][col];
            }
        }
        d
    }

    /// Runs primal simplex over columns `< allowed`. Returns `false` if unbounded.
    fn optimize(&mut self, obj: &[Q], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(obj, c).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let rhs = self.cols;
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.t[i][self.cols].clone();
            }
        }
        x
    }
}

/// Maximize `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length must equal row count");
    assert!(a.iter().all(|r| r.len() == n), "row length must equal variable count");

    // Columns: n structural, then m artificials, then rhs.
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Q> = row
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols,
    };

    let mut phase1 = vec![Q::zero(); cols];
    for x in phase1.iter_mut().skip(n) {
        *x = -Q::one();
    }
    tab.optimize(&phase1, cols);
    let infeasibility: Q = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .fold(Q::zero(), |acc, (i, _)| acc + &tab.t[i][cols]);
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.basis.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&c| !tab.t[i][c].is_zero()) {
                Some(col) => {
                    tab.pivot(i, col);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    let mut obj = c.to_vec();
    obj.extend((0..m).map(|_| Q::zero()));
    if !tab.optimize(&obj, n) {
        return LpOutcome::Unbounded;
    }
    let x = tab.solution(n);
    let value = crate::exact::dot(c, &x);
    LpOutcome::Optimal { value, x }
}

/// A point of `{x ≥ 0 : A x = b}`, if any.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(a, b, &vec![Q::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Finds `y` with `y·col > 0` for every column of `a`, if one exists.
pub fn strictly_positive_functional(a: &[Vec<Q>]) -> Option<Vec<Q>> {
    let d = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Variables: y+ (d), y- (d), slack (n); rows: (y+ - y-)·a_i - slack_i = 1.
    let rows: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut r = Vec::with_capacity(2 * d + n);
            r.extend((0..d).map(|k| a[k][i].clone()));
            r.extend((0..d).map(|k| -a[k][i].clone()));
            r.extend((0..n).map(|j| if j == i { -Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let x = feasible_point(&rows, &vec![Q::one(); n])?;
    Some((0..d).map(|k| &x[k] - &x[d + k]).collect())
}

/// Largest `τ ∈ [0, 1]` such that some `x` with `A x = b` has every entry `≥ τ`.
/// `None` when `{x ≥ 0 : A x = b}` is empty.
pub fn max_uniform_margin(a: &[Vec<Q>], b: &[Q]) -> Option<Q> {
    let n = a.first().map_or(0, Vec::len);
    // x = x' + τ·1 with x' ≥ 0, τ + u = 1, u ≥ 0.
    let mut rows: Vec<Vec<Q>> = a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(row.iter().fold(Q::zero(), |acc, v| acc + v));
            r.push(Q::zero());
            r
        })
        .collect();
    let mut bound = vec![Q::zero(); n];
    bound.push(Q::one());
    bound.push(Q::one());
    rows.push(bound);
    let mut rhs = b.to_vec();
    rhs.push(Q::one());
    let mut c = vec![Q::zero(); n];
    c.push(Q::one());
    c.push(Q::zero());
    match maximize(&rows, &rhs, &c) {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("margin is bounded by 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{from_int_rows, q, qf, qvec};

    #[test]
    fn simple_optimum() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let a = from_int_rows(&[vec![1, 2, 1, 0], vec![3, 1, 0, 1]]);
        let out = maximize(&a, &qvec(&[4, 6]), &qvec(&[1, 1, 0, 0]));
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, qf(14, 5));
                assert_eq!(&x[..2], &[qf(8, 5), qf(6, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = from_int_rows(&[vec![1, 1]]);
        assert_eq!(maximize(&a, &qvec(&[-1]), &qvec(&[0, 0])), LpOutcome::Infeasible);
        let a = from_int_rows(&[vec![1, -1]]);
        assert_eq!(maximize(&a, &qvec(&[0]), &qvec(&[1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = from_int_rows(&[vec![1, 1], vec![2, 2]]);
        let x = feasible_point(&a, &qvec(&[1, 2])).unwrap();
        assert_eq!(&x[0] + &x[1], q(1));
    }

    #[test]
    fn half_space_functional() {
        let a = from_int_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let y = strictly_positive_functional(&a).unwrap();
        for i in 0..3 {
            let col: Vec<Q> = a.iter().map(|r| r[i].clone()).collect();
            assert!(crate::exact::dot(&y, &col) > q(0));
        }
        let opposed = from_int_rows(&[vec![1, -1]]);
        assert!(strictly_positive_functional(&opposed).is_none());
    }

    #[test]
    fn margins() {
        let a = from_int_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        assert!(max_uniform_margin(&a, &qvec(&[1, 1])).unwrap() > q(0));
        assert_eq!(max_uniform_margin(&a, &qvec(&[1, 0])).unwrap(), q(0));
        assert!(max_uniform_margin(&a, &qvec(&[-1, 0])).is_none());
    }
}
