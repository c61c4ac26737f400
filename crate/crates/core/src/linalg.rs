//! Dense exact linear algebra over the rationals.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("system is singular")]
    Singular,
    #[error("system is inconsistent")]
    Inconsistent,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero())
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len(), "vector length");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Incrementally reduced row basis used for rank tests.
#[derive(Debug, Clone, Default)]
pub struct RowBasis {
    // Each stored row has a leading one at `pivots[k]` and zeros in the
    // pivot columns of all other stored rows.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &[Rational]) -> Vec<Rational> {
        let mut r = row.to_vec();
        for (basis_row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let factor = r[p].clone();
            for (x, b) in r.iter_mut().zip(basis_row) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        r
    }

    /// `true` when `row` lies in the span of the rows inserted so far.
    pub fn contains(&self, row: &[Rational]) -> bool {
        self.reduce(row).iter().all(Zero::is_zero)
    }

    /// Adds `row` if it is independent; returns whether the rank grew.
    pub fn insert(&mut self, row: &[Rational]) -> bool {
        let mut r = self.reduce(row);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (basis_row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if basis_row[p].is_zero() {
                continue;
            }
            let factor = basis_row[p].clone();
            for (b, x) in basis_row.iter_mut().zip(&r) {
                if !x.is_zero() {
                    *b -= &factor * x;
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

/// Indices of a maximal linearly independent subset of `rows`, greedily in
/// the given order.
pub fn independent_rows(rows: &[Vec<Rational>]) -> Vec<usize> {
    let mut basis = RowBasis::new();
    rows.iter()
        .enumerate()
        .filter_map(|(k, row)| basis.insert(row).then_some(k))
        .collect()
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    independent_rows(rows).len()
}

/// Solves the square system `A x = b` by Gauss-Jordan elimination.
pub fn solve_square(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(LinalgError::Dimension(format!(
            "{}x{} matrix with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(LinalgError::Singular)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(m.into_iter()
        .map(|mut row| row.pop().expect("rhs"))
        .collect())
}

/// Minimum Euclidean norm solution of a consistent system `A x = b`.
///
/// The minimizer lies in the row space of `A`: with `B` a maximal set of
/// independent rows, `x = Bᵀ w` where `(B Bᵀ) w = b_B`. This is `A⁺ b` for
/// consistent systems, computed without floating point.
pub fn min_norm_solve(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if a.rows() != b.len() {
        return Err(LinalgError::Dimension(format!(
            "{} rows with rhs of length {}",
            a.rows(),
            b.len()
        )));
    }
    let rows = a.to_rows();
    let basis = independent_rows(&rows);
    let n = a.cols();
    let x = if basis.is_empty() {
        vec![Rational::zero(); n]
    } else {
        let gram = Matrix::from_fn(basis.len(), basis.len(), |p, q| {
            dot(&rows[basis[p]], &rows[basis[q]])
        });
        let rhs: Vec<Rational> = basis.iter().map(|&k| b[k].clone()).collect();
        let w = solve_square(&gram, &rhs)?;
        (0..n)
            .map(|col| {
                basis
                    .iter()
                    .zip(&w)
                    .map(|(&k, wk)| &rows[k][col] * wk)
                    .sum()
            })
            .collect()
    };
    if a.mul_vec(&x) != b {
        return Err(LinalgError::Inconsistent);
    }
    Ok(x)
}

/// Solves a possibly overdetermined consistent system whose matrix has full
/// column rank.
pub fn solve_full_rank(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let rows = a.to_rows();
    let basis = independent_rows(&rows);
    if basis.len() < a.cols() {
        return Err(LinalgError::Singular);
    }
    let square = Matrix::from_rows(basis.iter().map(|&k| rows[k].clone()).collect());
    let rhs: Vec<Rational> = basis.iter().map(|&k| b[k].clone()).collect();
    let x = solve_square(&square, &rhs)?;
    if a.mul_vec(&x) != b {
        return Err(LinalgError::Inconsistent);
    }
    Ok(x)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}
