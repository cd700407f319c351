//! Seeded random streams and Haar-distributed sampling.
//!
//! A [`RngSeed`] names a ChaCha8 key (`seed`) and stream (`stream`). Monte
//! Carlo drivers derive one sub-seed per sample index, so any partition of
//! the index range across workers reproduces the same samples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::householder_qr;
use crate::matrix::{ComplexMatrix, StateVector, ONE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        RngSeed { seed, stream: 0 }
    }

    pub const fn with_stream(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Independent child stream for item `index` (sample, worker, grid point).
    pub fn substream(&self, index: u64) -> RngSeed {
        RngSeed { seed: self.seed, stream: splitmix64(self.stream ^ splitmix64(index)) }
    }
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `diag(R)`
/// moved into `Q`.
pub fn haar_unitary_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let z = ginibre(n, rng);
    let (q, r) = householder_qr(&z);
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                ONE
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

pub fn haar_unitary(n: usize, seed: RngSeed) -> ComplexMatrix {
    haar_unitary_from(n, &mut seed.rng())
}

/// Unitarily invariant random pure state (normalized complex Gaussian vector).
pub fn haar_state_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalized(amps) {
            return s;
        }
    }
}

pub fn haar_state(n: usize, seed: RngSeed) -> StateVector {
    haar_state_from(n, &mut seed.rng())
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Uniformly random point of the probability simplex (flat Dirichlet).
pub fn random_simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        if s > 0.0 {
            return e.into_iter().map(|x| x / s).collect();
        }
    }
}
