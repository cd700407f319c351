//! Majorizing vectors and the resulting entropic uncertainty bounds.
//!
//! For a unitary `U` with submatrix coefficients `r_1 ≤ … ≤ r_N = 1`, every
//! product distribution `p ⊗ q` is majorized by
//! `Q = (r_1, r_2 - r_1, …, r_N - r_{N-1})`, and by each coarser truncation
//! `Q^(k) = (r_1, …, r_k - r_{k-1}, 1 - r_k)`. Schur concavity turns these
//! into the ladder `B_α^k = H_α(Q^(k))`, ascending in `k`.

pub mod classical;

use serde::Serialize;

pub use classical::{classical_bound, classical_mixture_entropy, slomczynski_check, StochasticMatrix};

use crate::entropy::{renyi_entropy, ProbabilityVector, RenyiOrder};
use crate::error::{Error, Result};
use crate::matrix::{ensure_unitary, ComplexMatrix, StateVector};
use crate::submatrices::{s_coefficients, SubmatrixCoefficients};
use crate::tolerance;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorizingVector {
    full: ProbabilityVector,
    truncations: Vec<ProbabilityVector>,
}

impl MajorizingVector {
    /// The vector `Q` of length `N`.
    pub fn q_full(&self) -> &ProbabilityVector {
        &self.full
    }

    /// `Q^(k)` of length `k + 1`, for `k = 1..N-1`.
    pub fn truncation(&self, k: usize) -> &ProbabilityVector {
        assert!(k >= 1 && k <= self.truncations.len(), "truncation index {k} out of range");
        &self.truncations[k - 1]
    }

    /// `Q^(1), …, Q^(N-1)` in order.
    pub fn truncations(&self) -> &[ProbabilityVector] {
        &self.truncations
    }
}

/// Successive differences of a nondecreasing sequence ending at one, clamped at zero and renormalized.
fn increments(r: &[f64]) -> ProbabilityVector {
    let mut out = Vec::with_capacity(r.len());
    let mut prev = 0.0;
    for &x in r {
        let d = x - prev;
        debug_assert!(d > -tolerance::CLAMP, "negative majorant component {d}");
        out.push(d.max(0.0));
        prev = x;
    }
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        out.iter_mut().for_each(|v| *v /= total);
    }
    ProbabilityVector::from_trusted(out)
}

pub fn majorizing_vector(sc: &SubmatrixCoefficients) -> MajorizingVector {
    let r = sc.r();
    let n = r.len();
    let mut full_r = r.to_vec();
    full_r[n - 1] = 1.0;
    let truncations = (1..n)
        .map(|k| {
            let mut head = r[..k].to_vec();
            head.push(1.0);
            increments(&head)
        })
        .collect();
    MajorizingVector { full: increments(&full_r), truncations }
}

/// Evaluated bounds for one unitary and one Rényi order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub alpha: RenyiOrder,
    #[serde(rename = "deutsch")]
    pub b_deutsch: f64,
    #[serde(rename = "mu")]
    pub b_mu: f64,
    /// `B_α^1 … B_α^{N-1}`.
    pub ladder: Vec<f64>,
}

impl BoundReport {
    /// `B_α^{N-1} = H_α(Q)`, the strongest rung; zero when `N = 1`.
    pub fn strongest(&self) -> f64 {
        self.ladder.last().copied().unwrap_or(0.0)
    }
}

/// `B_D = -2 ln((1 + c) / 2)` from the largest entry modulus `c`.
pub fn deutsch_from_c(c: f64) -> f64 {
    -2.0 * (0.5 * (1.0 + c)).ln()
}

/// `B_MU = -2 ln c`.
pub fn mu_from_c(c: f64) -> f64 {
    -2.0 * c.ln()
}

pub fn bound_deutsch(u: &ComplexMatrix) -> Result<f64> {
    ensure_unitary(u, tolerance::UNITARITY)?;
    Ok(deutsch_from_c(u.max_abs_entry()))
}

pub fn bound_mu(u: &ComplexMatrix) -> Result<f64> {
    ensure_unitary(u, tolerance::UNITARITY)?;
    Ok(mu_from_c(u.max_abs_entry()))
}

/// `H_α(Q^(k))` for `k = 1..N-1`.
pub fn ladder_values(mv: &MajorizingVector, order: RenyiOrder) -> Vec<f64> {
    mv.truncations().iter().map(|q| renyi_entropy(q, order)).collect()
}

/// Assembles a report from precomputed coefficients; `c` is the largest entry modulus.
pub fn report_from_coefficients(sc: &SubmatrixCoefficients, c: f64, order: RenyiOrder) -> BoundReport {
    let mv = majorizing_vector(sc);
    BoundReport {
        n: sc.n(),
        alpha: order,
        b_deutsch: deutsch_from_c(c),
        b_mu: mu_from_c(c),
        ladder: ladder_values(&mv, order),
    }
}

pub fn bound_ladder(u: &ComplexMatrix, order: RenyiOrder) -> Result<BoundReport> {
    let sc = s_coefficients(u)?;
    Ok(report_from_coefficients(&sc, u.max_abs_entry(), order))
}

/// Outcome distributions `p_i = |ψ_i|²`, `q_j = |(Uψ)_j|²`.
pub fn outcome_distributions(u: &ComplexMatrix, psi: &StateVector) -> Result<(ProbabilityVector, ProbabilityVector)> {
    if !u.is_square() || u.cols() != psi.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} does not match {}x{} matrix",
            psi.dim(),
            u.rows(),
            u.cols()
        )));
    }
    let p = psi.probabilities();
    let q: Vec<f64> = u.apply(psi.amplitudes()).iter().map(|z| z.norm_sqr()).collect();
    let sum_q: f64 = q.iter().sum();
    let q = q.into_iter().map(|v| v / sum_q).collect();
    Ok((ProbabilityVector::from_trusted(p), ProbabilityVector::from_trusted(q)))
}

/// `H_α(p) + H_α(q)` for the two measurements of `psi`.
pub fn eur_lhs(u: &ComplexMatrix, psi: &StateVector, order: RenyiOrder) -> Result<f64> {
    let (p, q) = outcome_distributions(u, psi)?;
    Ok(renyi_entropy(&p, order) + renyi_entropy(&q, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fourier_matrix, rotation_matrix};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    #[test]
    fn majorizing_vector_examples() {
        let id = majorizing_vector(&s_coefficients(&ComplexMatrix::identity(4)).unwrap());
        assert_eq!(id.q_full().values(), &[1.0, 0.0, 0.0, 0.0]);

        let o = majorizing_vector(&s_coefficients(&rotation_matrix(FRAC_PI_4)).unwrap());
        let r1 = (0.5 * (1.0 + FRAC_1_SQRT_2)).powi(2);
        assert!((o.q_full().values()[0] - 0.728553).abs() < 1e-6);
        assert!((o.q_full().values()[0] - r1).abs() < 1e-12);
        assert!((o.q_full().values()[1] - (1.0 - r1)).abs() < 1e-12);
        assert_eq!(o.truncation(1), o.q_full());
    }

    #[test]
    fn deutsch_and_mu_examples() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(bound_deutsch(&id).unwrap(), 0.0);
        assert_eq!(bound_mu(&id).unwrap(), 0.0);
        for n in 2..=8 {
            let f = fourier_matrix(n);
            let c = 1.0 / (n as f64).sqrt();
            assert!((bound_deutsch(&f).unwrap() - (-2.0 * ((1.0 + c) / 2.0).ln())).abs() < 1e-12);
            assert!((bound_mu(&f).unwrap() - (n as f64).ln()).abs() < 1e-12);
        }
        let bd = bound_deutsch(&rotation_matrix(FRAC_PI_4)).unwrap();
        assert!((bd - 2.0 * (2.0 / (1.0 + FRAC_1_SQRT_2)).ln()).abs() < 1e-12);
        assert!((bd - 0.316694).abs() < 1e-6);
        for k in 0..20 {
            let t = k as f64 * PI / 20.0;
            let expected = -2.0 * t.cos().abs().max(t.sin().abs()).ln();
            assert!((bound_mu(&rotation_matrix(t)).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_examples() {
        for &a in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            let rep = bound_ladder(&ComplexMatrix::identity(4), RenyiOrder::new(a).unwrap()).unwrap();
            assert_eq!(rep.ladder.len(), 3);
            assert!(rep.ladder.iter().all(|&x| x.abs() < 1e-15));
        }
        let rep = bound_ladder(&rotation_matrix(FRAC_PI_4), RenyiOrder::MIN_ENTROPY).unwrap();
        assert!((rep.ladder[0] - 0.316694).abs() < 1e-6);
        let r1 = (0.5 * (1.0 + FRAC_1_SQRT_2)).powi(2);
        assert!((rep.ladder[0] + r1.ln()).abs() < 1e-12);
        assert!((rep.ladder[0] - rep.b_deutsch).abs() < 1e-12);

        let f3 = bound_ladder(&fourier_matrix(3), RenyiOrder::SHANNON).unwrap();
        assert!(f3.ladder[1] < 3f64.ln());
        assert!((f3.b_mu - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn eur_lhs_examples() {
        let e1 = StateVector::basis(3, 0);
        assert!(eur_lhs(&ComplexMatrix::identity(3), &e1, RenyiOrder::SHANNON).unwrap().abs() < 1e-15);
        let v = eur_lhs(&fourier_matrix(5), &StateVector::basis(5, 0), RenyiOrder::SHANNON).unwrap();
        assert!((v - 5f64.ln()).abs() < 1e-12);
        assert!(matches!(eur_lhs(&ComplexMatrix::identity(2), &e1, RenyiOrder::SHANNON), Err(Error::Dimension(_))));
    }

    #[test]
    fn report_serializes_with_documented_keys() {
        let rep = bound_ladder(&rotation_matrix(0.3), RenyiOrder::MIN_ENTROPY).unwrap();
        let json: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["alpha"], "inf");
        for key in ["n", "deutsch", "mu", "ladder"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
