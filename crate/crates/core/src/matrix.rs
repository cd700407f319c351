//! Dense complex matrices and pure state vectors.
//!
//! Everything here is small and dense: the dimensions of interest are a
//! dozen or less, so storage is a flat row-major `Vec<Complex64>`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

pub type ComplexScalar = Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(format!("non-finite entry at ({}, {})", pos / cols, pos % cols)));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix entry by entry. Panics on a zero dimension.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// Largest entry modulus, `max_ij |M_ij|`.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Position of an entry of largest modulus (first in row-major order on ties).
    pub fn argmax_abs_entry(&self) -> (usize, usize) {
        let mut best = (0, 0.0);
        for (k, z) in self.data.iter().enumerate() {
            let m = z.norm();
            if m > best.1 {
                best = (k, m);
            }
        }
        (best.0 / self.cols, best.0 % self.cols)
    }

    /// Entrywise squared moduli.
    pub fn squared_moduli(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Max-norm of the entrywise difference. Panics when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn try_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn to_file(&self) -> MatrixFile {
        let grid = |f: fn(&Complex64) -> f64| (0..self.rows).map(|i| self.row(i).iter().map(f).collect()).collect();
        MatrixFile { rows: self.rows, cols: self.cols, re: grid(|z| z.re), im: grid(|z| z.im) }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s)?;
        file.into_matrix()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("matrix serialization cannot fail")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a shape mismatch; use [`ComplexMatrix::try_mul`] for checked products.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// On-disk JSON form: `{"rows", "cols", "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let shape_ok = |g: &Vec<Vec<f64>>| g.len() == self.rows && g.iter().all(|r| r.len() == self.cols);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Dimension(format!(
                "re/im arrays do not match declared shape {}x{}",
                self.rows, self.cols
            )));
        }
        let data =
            self.re.iter().flatten().zip(self.im.iter().flatten()).map(|(&re, &im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

/// Max-norm of `M M† - I`.
pub fn unitarity_residual(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("unitarity of a non-square {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let dot: Complex64 = m.row(i).iter().zip(m.row(j)).map(|(a, b)| a * b.conj()).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((dot - target).norm());
        }
    }
    Ok(worst)
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_residual(m)? <= tol)
}

/// Errors with [`Error::NotUnitary`] unless `m` is unitary within `tol`.
pub fn ensure_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = unitarity_residual(m)?;
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual, tol })
    }
}

fn check_index_set(set: &[usize], bound: usize, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Index(format!("empty {what} index set")));
    }
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Index(format!("{what} indices must be strictly increasing: {set:?}")));
        }
    }
    if let Some(&last) = set.last() {
        if last >= bound {
            return Err(Error::Index(format!("{what} index {last} out of range 0..{bound}")));
        }
    }
    Ok(())
}

/// The block of `m` on the given rows and columns, in their original order.
pub fn submatrix(m: &ComplexMatrix, row_idx: &[usize], col_idx: &[usize]) -> Result<ComplexMatrix> {
    check_index_set(row_idx, m.rows, "row")?;
    check_index_set(col_idx, m.cols, "column")?;
    Ok(ComplexMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| m[(row_idx[i], col_idx[j])]))
}

/// Normalized pure state in `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose squared norm is one within [`tolerance::STATE_NORM`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tolerance::STATE_NORM {
            return Err(Error::Validation(format!("state norm squared {norm2} differs from 1")));
        }
        Ok(StateVector { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation("cannot normalize a zero or non-finite vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(StateVector { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        StateVector { amplitudes: (0..dim).map(|i| if i == index { ONE } else { ZERO }).collect() }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }

    /// Outcome probabilities `|ψ_i|²` in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}
