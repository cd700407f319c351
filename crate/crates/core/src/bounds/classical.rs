//! Entropy bounds for classical maps given by column-stochastic matrices.

use crate::entropy::{shannon_entropy, ProbabilityVector};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance;

/// Real matrix with nonnegative entries whose columns each sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl StochasticMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} stochastic matrix", data.len())));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Validation(format!(
                "entry ({}, {}) = {} is negative or non-finite",
                pos / cols,
                pos % cols,
                data[pos]
            )));
        }
        let col_sum = |j: usize| (0..rows).map(|i| data[i * cols + j]).sum::<f64>();
        if let Some(j) = (0..cols).find(|&j| (col_sum(j) - 1.0).abs() > tolerance::NORMALIZATION) {
            let rows_ok = (0..rows)
                .all(|i| (data[i * cols..(i + 1) * cols].iter().sum::<f64>() - 1.0).abs() <= tolerance::NORMALIZATION);
            let hint = if rows_ok { " (matrix is row-stochastic; supply its transpose)" } else { "" };
            return Err(Error::Validation(format!("column {j} sums to {}, not 1{hint}", col_sum(j))));
        }
        Ok(StochasticMatrix { rows, cols, data })
    }

    /// Reads a real matrix out of the shared complex matrix format; imaginary parts must vanish.
    pub fn from_complex(m: &ComplexMatrix) -> Result<Self> {
        if m.as_slice().iter().any(|z| z.im != 0.0) {
            return Err(Error::Validation("stochastic matrix has nonzero imaginary parts".into()));
        }
        Self::new(m.rows(), m.cols(), m.as_slice().iter().map(|z| z.re).collect())
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.rows, self.cols, &self.data).expect("finite entries")
    }

    /// Entrywise squared moduli of a unitary, a unistochastic matrix.
    pub fn from_unitary_moduli(u: &ComplexMatrix) -> Result<Self> {
        Self::new(u.rows(), u.cols(), u.squared_moduli())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        (0..n).for_each(|i| data[i * n + i] = 1.0);
        StochasticMatrix { rows: n, cols: n, data }
    }

    pub fn flat(n: usize) -> Self {
        StochasticMatrix { rows: n, cols: n, data: vec![1.0 / n as f64; n * n] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().sum()).collect()
    }

    /// Columns also sum to one row-wise, i.e. the matrix is bistochastic.
    pub fn is_bistochastic(&self, tol: f64) -> bool {
        self.rows == self.cols && self.row_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    /// Largest entry `κ`.
    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn apply(&self, p: &ProbabilityVector) -> Result<ProbabilityVector> {
        self.check_dims(p)?;
        let out: Vec<f64> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * p.values()[j]).sum()).collect();
        let total: f64 = out.iter().sum();
        Ok(ProbabilityVector::from_trusted(out.into_iter().map(|x| x / total).collect()))
    }

    fn check_dims(&self, p: &ProbabilityVector) -> Result<()> {
        if p.len() != self.cols {
            return Err(Error::Dimension(format!(
                "probability vector of length {} for a {}x{} stochastic matrix",
                p.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(())
    }
}

/// `Σ_i P_i H(t_i)`: the `P`-weighted average Shannon entropy of the columns `t_i` of `T`.
pub fn classical_mixture_entropy(t: &StochasticMatrix, p: &ProbabilityVector) -> Result<f64> {
    t.check_dims(p)?;
    Ok((0..t.cols).map(|j| p.values()[j] * shannon_entropy(&t.column(j))).sum())
}

/// `-ln κ` with `κ` the largest entry of `T`; lower bound on `H(P) + H(TP)`.
pub fn classical_bound(t: &StochasticMatrix) -> f64 {
    -t.max_entry().ln()
}

/// `H^(P)(T) ≤ H(TP) ≤ H^(P)(T) + H(P)` within [`tolerance::PROPERTY`].
pub fn slomczynski_check(t: &StochasticMatrix, p: &ProbabilityVector) -> Result<bool> {
    let mix = classical_mixture_entropy(t, p)?;
    let image = shannon_entropy(t.apply(p)?.values());
    let h = shannon_entropy(p.values());
    Ok(mix <= image + tolerance::PROPERTY && image <= mix + h + tolerance::PROPERTY)
}
