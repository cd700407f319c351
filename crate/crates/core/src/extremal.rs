//! Maximal overlap of a state with two subspaces.
//!
//! For orthonormal sets `{|1⟩..|m⟩}` and `{|a_1⟩..|a_n⟩}` with cross-Gram
//! matrix `A_ij = ⟨a_i|j⟩`, the largest value of
//! `Σ_i |⟨i|ψ⟩|² + Σ_i |⟨a_i|ψ⟩|²` over unit `ψ` is `1 + σ_1(A)`. The maximizer
//! is the normalized sum of the two unit vectors, one per span, whose
//! overlap is largest; at the maximizer both partial sums coincide.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{largest_singular_value, leading_singular_triplet};
use crate::matrix::{ensure_unitary, ComplexMatrix, StateVector, ONE, ZERO};
use crate::rng::haar_unitary_from;
use crate::tolerance;

#[derive(Clone, Debug)]
pub struct SubspacePair {
    first: Vec<StateVector>,
    second: Vec<StateVector>,
}

fn check_orthonormal(set: &[StateVector], name: &str) -> Result<()> {
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate().skip(i) {
            let g = a.inner(b.amplitudes());
            let target = if i == j { ONE } else { ZERO };
            if (g - target).norm() > tolerance::UNITARITY {
                return Err(Error::Validation(format!(
                    "{name} set is not orthonormal: <{i}|{j}> = {:.3e}{:+.3e}i",
                    g.re, g.im
                )));
            }
        }
    }
    Ok(())
}

impl SubspacePair {
    pub fn new(first: Vec<StateVector>, second: Vec<StateVector>) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::Dimension("both vector sets must be nonempty".into()));
        }
        let dim = first[0].dim();
        if first.iter().chain(&second).any(|v| v.dim() != dim) {
            return Err(Error::Dimension("vectors of different dimensions".into()));
        }
        if first.len() > dim || second.len() > dim {
            return Err(Error::Dimension(format!(
                "{} and {} vectors cannot be orthonormal in dimension {dim}",
                first.len(),
                second.len()
            )));
        }
        check_orthonormal(&first, "first")?;
        check_orthonormal(&second, "second")?;
        Ok(SubspacePair { first, second })
    }

    /// Standard basis vectors `rows` paired with the conjugated rows `cols`
    /// of `u`, so that the cross-Gram matrix is the submatrix `u[cols, rows]`.
    pub fn from_unitary_block(u: &ComplexMatrix, basis: &[usize], rows_of_u: &[usize]) -> Result<Self> {
        ensure_unitary(u, tolerance::UNITARITY)?;
        let n = u.rows();
        if basis.iter().chain(rows_of_u).any(|&i| i >= n) {
            return Err(Error::Index("index out of range".into()));
        }
        let first = basis.iter().map(|&i| StateVector::basis(n, i)).collect();
        let second = rows_of_u
            .iter()
            .map(|&j| StateVector::normalized(u.row(j).iter().map(|z| z.conj()).collect()))
            .collect::<Result<Vec<_>>>()?;
        SubspacePair::new(first, second)
    }

    pub fn ambient_dim(&self) -> usize {
        self.first[0].dim()
    }

    pub fn first(&self) -> &[StateVector] {
        &self.first
    }

    pub fn second(&self) -> &[StateVector] {
        &self.second
    }

    /// `Σ_i |⟨i|ψ⟩|²` over the first set and the same over the second.
    pub fn partial_sums(&self, psi: &StateVector) -> (f64, f64) {
        let s = |set: &[StateVector]| set.iter().map(|v| v.inner(psi.amplitudes()).norm_sqr()).sum::<f64>();
        (s(&self.first), s(&self.second))
    }

    /// The quantity maximized by [`lemma_max_value`].
    pub fn objective(&self, psi: &StateVector) -> f64 {
        let (a, b) = self.partial_sums(psi);
        a + b
    }
}

/// `n x m` matrix `A_ij = ⟨a_i|j⟩` (second set indexes rows).
pub fn cross_gram(sp: &SubspacePair) -> ComplexMatrix {
    ComplexMatrix::from_fn(sp.second.len(), sp.first.len(), |i, j| sp.second[i].inner(sp.first[j].amplitudes()))
}

/// `1 + σ_1(A)`.
pub fn lemma_max_value(sp: &SubspacePair) -> f64 {
    1.0 + largest_singular_value(&cross_gram(sp))
}

/// The block matrix `[[I_m, A†], [A, I_n]]`, equal to `C C†` for the stacked bras of both sets.
pub fn block_gram(a: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.rows(), a.cols());
    ComplexMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => {
            if i == j {
                ONE
            } else {
                ZERO
            }
        }
        (false, false) => {
            if i == j {
                ONE
            } else {
                ZERO
            }
        }
        (true, false) => a[(j - m, i)].conj(),
        (false, true) => a[(i - m, j)],
    })
}

#[derive(Clone, Debug)]
pub struct MaximizingState {
    pub state: StateVector,
    /// The spans are orthogonal (`σ_1 = 0`); `state` is the first vector of the first set.
    pub fallback: bool,
}

/// The maximizer `ψ* ∝ ξ_0 + η_0`.
///
/// With `(σ, u, v)` the leading singular triplet of `A`, `ξ_0 = Σ_j v_j |j⟩`
/// and `η_0 = Σ_i u_i |a_i⟩` satisfy `⟨ξ_0|η_0⟩ = σ`.
pub fn maximizing_state(sp: &SubspacePair) -> MaximizingState {
    let a = cross_gram(sp);
    let Some((_, u, v)) = leading_singular_triplet(&a) else {
        return MaximizingState { state: sp.first[0].clone(), fallback: true };
    };
    let dim = sp.ambient_dim();
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    for (vj, basis) in v.iter().zip(&sp.first) {
        for (p, b) in psi.iter_mut().zip(basis.amplitudes()) {
            *p += vj * b;
        }
    }
    for (ui, basis) in u.iter().zip(&sp.second) {
        for (p, b) in psi.iter_mut().zip(basis.amplitudes()) {
            *p += ui * b;
        }
    }
    // |ξ_0 + η_0|² = 2 + 2σ > 0, so normalization cannot fail.
    let state = StateVector::normalized(psi).expect("nonzero maximizer");
    MaximizingState { state, fallback: false }
}

/// `max_{ψ,i,j} p_i q_j = ((1 + c) / 2)²`.
pub fn deutsch_max_product(u: &ComplexMatrix) -> Result<f64> {
    ensure_unitary(u, tolerance::UNITARITY)?;
    Ok((0.5 * (1.0 + u.max_abs_entry())).powi(2))
}

/// A state attaining [`deutsch_max_product`], with the indices `(i, j)` of
/// the product `p_i q_j` it maximizes.
pub fn deutsch_maximizer(u: &ComplexMatrix) -> Result<(StateVector, usize, usize)> {
    ensure_unitary(u, tolerance::UNITARITY)?;
    // q_j couples to p_i through U_ji.
    let (j, i) = u.argmax_abs_entry();
    let sp = SubspacePair::from_unitary_block(u, &[i], &[j])?;
    Ok((maximizing_state(&sp).state, i, j))
}

/// Random pair of orthonormal sets of sizes `m`, `n` in dimension `dim`,
/// taken as leading columns of two independent Haar unitaries.
pub fn random_subspace_pair<R: Rng + ?Sized>(dim: usize, m: usize, n: usize, rng: &mut R) -> SubspacePair {
    assert!(m >= 1 && n >= 1 && m <= dim && n <= dim);
    let u = haar_unitary_from(dim, rng);
    let w = haar_unitary_from(dim, rng);
    let cols = |mat: &ComplexMatrix, k: usize| {
        (0..k).map(|j| StateVector::normalized(mat.column(j)).expect("unit column")).collect()
    };
    SubspacePair { first: cols(&u, m), second: cols(&w, n) }
}
