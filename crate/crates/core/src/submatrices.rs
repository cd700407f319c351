//! Maximal submatrix norms grouped by semiperimeter.
//!
//! For a unitary `U` of size `N`, `s_k` is the largest spectral norm over all
//! `m x n` submatrices with `m + n = k + 1`, and `r_k = ((1 + s_k) / 2)²`.
//! The maxima are found by exhaustive enumeration of row and column subsets.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::linalg::largest_eigenvalue_in_place;
use crate::matrix::{ensure_unitary, ComplexMatrix};
use crate::tolerance;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmatrixCoefficients {
    s: Vec<f64>,
    r: Vec<f64>,
}

impl SubmatrixCoefficients {
    /// Builds the coefficient set from `s_1..s_N`, checking the ordering and
    /// normalization invariants.
    pub fn from_s(s: Vec<f64>) -> Result<Self> {
        let n = s.len();
        if n == 0 {
            return Err(Error::Dimension("empty coefficient vector".into()));
        }
        if s.iter().any(|&x| !(x.is_finite() && x > 0.0 && x <= 1.0 + tolerance::UNITARITY)) {
            return Err(Error::Validation(format!("coefficients must lie in (0, 1]: {s:?}")));
        }
        if s.windows(2).any(|w| w[1] < w[0] - tolerance::EIGEN_RELATIVE) {
            return Err(Error::Validation(format!("coefficients must be nondecreasing: {s:?}")));
        }
        if (s[n - 1] - 1.0).abs() > tolerance::UNITARITY {
            return Err(Error::Validation(format!("s_N = {} differs from 1", s[n - 1])));
        }
        let r = s.iter().map(|&x| (0.5 * (1.0 + x)).powi(2)).collect();
        Ok(SubmatrixCoefficients { s, r })
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `s_1..s_N` (index 0 holds `s_1`).
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// `r_1..r_N`.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// `c = s_1`, the largest entry modulus.
    pub fn c(&self) -> f64 {
        self.s[0]
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CoefficientOptions {
    /// Lift the dimension guard of [`tolerance::MAX_ENUMERATION_DIM`].
    pub allow_large_n: bool,
    /// Parallelism used across row subsets.
    pub execution: Execution,
}

impl CoefficientOptions {
    pub fn sequential() -> Self {
        CoefficientOptions { allow_large_n: false, execution: Execution::Sequential }
    }
}

/// All increasing index subsets of `0..n`, grouped by size (`out[m]` holds the m-subsets).
pub(crate) fn subsets_by_size(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for mask in 1u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        out[set.len()].push(set);
    }
    out
}

/// Squared norm bound of one `rows x cols` block, via the smaller Gram matrix.
fn block_norm_sqr(u: &ComplexMatrix, rows: &[usize], cols: &[usize], buf: &mut Vec<Complex64>) -> f64 {
    let (m, n) = (rows.len(), cols.len());
    if m == 1 || n == 1 {
        let mut s = 0.0;
        for &i in rows {
            for &j in cols {
                s += u[(i, j)].norm_sqr();
            }
        }
        return s;
    }
    let d = m.min(n);
    buf.clear();
    buf.resize(d * d, Complex64::new(0.0, 0.0));
    if m <= n {
        for a in 0..d {
            let ra = u.row(rows[a]);
            for b in a..d {
                let rb = u.row(rows[b]);
                let mut acc = Complex64::new(0.0, 0.0);
                for &j in cols {
                    acc += ra[j] * rb[j].conj();
                }
                buf[a * d + b] = acc;
            }
        }
    } else {
        for a in 0..d {
            for b in a..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for &i in rows {
                    acc += u[(i, cols[a])].conj() * u[(i, cols[b])];
                }
                buf[a * d + b] = acc;
            }
        }
    }
    largest_eigenvalue_in_place(buf, d)
}

fn shape_max(u: &ComplexMatrix, subsets: &[Vec<Vec<usize>>], m: usize, n: usize, execution: Execution) -> f64 {
    let row_sets = &subsets[m];
    let col_sets = &subsets[n];
    let per_row = map_range(execution, row_sets.len() as u64, |ri| {
        let rows = &row_sets[ri as usize];
        let mut buf = Vec::new();
        col_sets.iter().map(|cols| block_norm_sqr(u, rows, cols, &mut buf)).fold(0.0, f64::max)
    });
    per_row.into_iter().fold(0.0, f64::max).max(0.0).sqrt()
}

fn check_square(u: &ComplexMatrix) -> Result<usize> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", u.rows(), u.cols())));
    }
    Ok(u.rows())
}

fn check_size(n: usize, allow_large_n: bool) -> Result<()> {
    if n > tolerance::MAX_ENUMERATION_DIM && !allow_large_n {
        return Err(Error::Dimension(format!(
            "exhaustive submatrix enumeration refused for N = {n} > {} (override with --allow-large-n)",
            tolerance::MAX_ENUMERATION_DIM
        )));
    }
    if n >= 31 {
        return Err(Error::Dimension(format!("N = {n} is beyond the subset enumerator")));
    }
    Ok(())
}

/// `‖A_{m,n}‖`: the largest spectral norm among all `m x n` submatrices of `u`.
pub fn max_norm_over_shape(u: &ComplexMatrix, m: usize, n: usize) -> Result<f64> {
    let size = check_square(u)?;
    if m == 0 || n == 0 || m > size || n > size {
        return Err(Error::Dimension(format!("shape {m}x{n} out of range for N = {size}")));
    }
    check_size(size, true)?;
    Ok(shape_max(u, &subsets_by_size(size), m, n, Execution::Sequential))
}

/// `s_k` for `k = 1..=kmax` without validating `u`.
pub(crate) fn coefficients_through(u: &ComplexMatrix, kmax: usize, execution: Execution) -> Vec<f64> {
    let size = u.rows();
    let subsets = subsets_by_size(size);
    (1..=kmax)
        .map(|k| {
            let lo = (k + 1).saturating_sub(size).max(1);
            let hi = k.min(size);
            (lo..=hi).map(|m| shape_max(u, &subsets, m, k + 1 - m, execution)).fold(0.0, f64::max)
        })
        .collect()
}

/// Computes `(s_1..s_N)` and `(r_1..r_N)` for a unitary `u`.
pub fn s_coefficients(u: &ComplexMatrix) -> Result<SubmatrixCoefficients> {
    s_coefficients_with(u, CoefficientOptions::sequential())
}

pub fn s_coefficients_with(u: &ComplexMatrix, options: CoefficientOptions) -> Result<SubmatrixCoefficients> {
    let size = check_square(u)?;
    check_size(size, options.allow_large_n)?;
    ensure_unitary(u, tolerance::UNITARITY)?;
    SubmatrixCoefficients::from_s(coefficients_through(u, size, options.execution))
}

/// Coefficients for an already-validated unitary where only `s_1..s_{N-1}`
/// are evaluated; `s_N = 1` holds for every unitary and is filled in directly.
pub(crate) fn ladder_coefficients_trusted(u: &ComplexMatrix) -> SubmatrixCoefficients {
    let size = u.rows();
    let mut s = coefficients_through(u, size.saturating_sub(1), Execution::Sequential);
    s.push(1.0);
    let r = s.iter().map(|&x| (0.5 * (1.0 + x)).powi(2)).collect();
    SubmatrixCoefficients { s, r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fourier_matrix, rotation_matrix};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn subsets_are_complete() {
        let s = subsets_by_size(4);
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![0, 4, 6, 4, 1]);
    }

    #[test]
    fn shape_examples() {
        let f3 = fourier_matrix(3);
        assert!((max_norm_over_shape(&f3, 3, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!((max_norm_over_shape(&f3, 1, 1).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((max_norm_over_shape(&f3, 1, 2).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(matches!(max_norm_over_shape(&f3, 0, 1), Err(Error::Dimension(_))));
        assert!(matches!(max_norm_over_shape(&f3, 1, 4), Err(Error::Dimension(_))));
    }

    #[test]
    fn coefficient_examples() {
        let id = s_coefficients(&ComplexMatrix::identity(4)).unwrap();
        assert!(id.s().iter().all(|&x| (x - 1.0).abs() < 1e-15));
        assert!(id.r().iter().all(|&x| (x - 1.0).abs() < 1e-15));

        let o = s_coefficients(&rotation_matrix(FRAC_PI_4)).unwrap();
        assert!((o.s()[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((o.s()[1] - 1.0).abs() < 1e-12);

        for n in 2..=6 {
            let f = s_coefficients(&fourier_matrix(n)).unwrap();
            assert!((f.c() - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary_and_large_inputs() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(matches!(s_coefficients(&m), Err(Error::NotUnitary { .. })));
        assert!(matches!(s_coefficients(&ComplexMatrix::identity(13)), Err(Error::Dimension(_))));
        assert!(matches!(s_coefficients(&ComplexMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn from_s_validates() {
        assert!(SubmatrixCoefficients::from_s(vec![0.5, 0.4, 1.0]).is_err());
        assert!(SubmatrixCoefficients::from_s(vec![0.5, 0.9]).is_err());
        let sc = SubmatrixCoefficients::from_s(vec![0.5, 1.0]).unwrap();
        assert!((sc.r()[0] - 0.5625).abs() < 1e-15);
    }
}
