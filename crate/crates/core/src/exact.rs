//! Exact rational scalars and the small dense linear algebra the rest of the
//! crate is built on.
//!
//! Matrices are row-major `Vec<Vec<Q>>`. Everything here is sized for desk
//! scale problems (dimensions in the tens), so plain Gaussian elimination with
//! a fixed first-nonzero pivot rule is used throughout. The fixed rule keeps
//! kernel bases and sections reproducible between runs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number.
pub type Q = BigRational;

/// Dense row-major rational matrix.
pub type QMatrix = Vec<Vec<Q>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qvec(entries: &[i64]) -> Vec<Q> {
    entries.iter().map(|&e| q(e)).collect()
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-1.25"`.
pub fn parse_rational(input: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac_part}");
        let mantissa: BigInt = if digits.is_empty() {
            return Err(err());
        } else {
            digits.parse().map_err(|_| err())?
        };
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Q::new(mantissa, den);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Rounds to 12 significant digits for the convenience decimal field.
pub fn decimal12(x: &Q) -> f64 {
    let v = to_f64(x);
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// Display wrapper for a rational vector, e.g. `(1, 2/3)`.
pub struct VecDisplay<'a>(pub &'a [Q]);

impl fmt::Display for VecDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

pub fn zeros(rows: usize, cols: usize) -> QMatrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn from_int_rows(rows: &[Vec<i64>]) -> QMatrix {
    rows.iter().map(|r| qvec(r)).collect()
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> QMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Q>]) -> QMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[Q], t: &Q) -> Vec<Q> {
    a.iter().map(|x| x * t).collect()
}

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(m: &[Vec<Q>]) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (x, p) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// Solves a square system; `None` when the matrix is singular.
pub fn solve(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn inverse(m: &[Vec<Q>]) -> Option<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Kernel basis of `m` (columns of the returned `cols x k` matrix), one
/// vector per free column of the reduced row echelon form, in column order.
pub fn kernel_basis(m: &[Vec<Q>]) -> QMatrix {
    let cols = m.first().map_or(0, Vec::len);
    let (red, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[f][k] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            basis[p][k] = -red[r][f].clone();
        }
    }
    basis
}

/// Affine dimension of a finite point set (−1 is reported as `None`).
pub fn affine_dimension(points: &[&Vec<Q>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let diffs: QMatrix = rest.iter().map(|p| sub_vec(p, first)).collect();
    Some(rank(&diffs))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), q(-4));
        assert_eq!(parse_rational("-1.25").unwrap(), qf(-5, 4));
        assert_eq!(parse_rational("0.5").unwrap(), qf(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.").is_err());
        assert_eq!(format_rational(&qf(-4, 6)), "-2/3");
        assert_eq!(format_rational(&q(7)), "7");
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal12(&qf(1, 3)), 0.333333333333);
        assert_eq!(decimal12(&q(-2)), -2.0);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(determinant(&m), q(3));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![qf(2, 3), qf(1, 3)], vec![qf(1, 3), qf(2, 3)]]);
        assert_eq!(mat_mul(&m, &inv), identity(2));
        let singular = from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(determinant(&singular), q(0));
        assert!(inverse(&singular).is_none());
        assert!(solve(&singular, &qvec(&[1, 1])).is_none());
    }

    #[test]
    fn kernel_of_segment_matrix() {
        let a = from_int_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k, from_int_rows(&[vec![-1], vec![-1], vec![1]]));
        let col: Vec<Q> = k.iter().map(|r| r[0].clone()).collect();
        assert_eq!(mat_vec(&a, &col), qvec(&[0, 0]));
    }

    #[test]
    fn affine_dims() {
        let pts = [qvec(&[0, 0]), qvec(&[1, 1]), qvec(&[2, 2])];
        let refs: Vec<&Vec<Q>> = pts.iter().collect();
        assert_eq!(affine_dimension(&refs), Some(1));
        assert_eq!(affine_dimension(&[]), None);
    }
}
