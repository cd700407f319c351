//! The equivalence `V = P₁ D₁ U D₂ P₂` under permutations and diagonal phases.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{ensure_unitary, ComplexMatrix, ONE};
use crate::rng::random_permutation;
use crate::tolerance;

/// Bijection of `0..n`. As a matrix it has a one at `(i, perm[i])`, so
/// `(P x)_i = x_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Validation(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.0.len();
        ComplexMatrix::from_fn(n, n, |i, j| if self.0[i] == j { ONE } else { Complex64::new(0.0, 0.0) })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceTransform {
    pub left_perm: Permutation,
    pub left_phases: Vec<Complex64>,
    pub right_phases: Vec<Complex64>,
    pub right_perm: Permutation,
}

impl EquivalenceTransform {
    pub fn new(
        left_perm: Permutation,
        left_phases: Vec<Complex64>,
        right_phases: Vec<Complex64>,
        right_perm: Permutation,
    ) -> Result<Self> {
        let n = left_perm.len();
        if right_perm.len() != n || left_phases.len() != n || right_phases.len() != n {
            return Err(Error::Dimension("transform components have different sizes".into()));
        }
        if let Some(z) = left_phases.iter().chain(&right_phases).find(|z| (z.norm() - 1.0).abs() > tolerance::PHASE) {
            return Err(Error::Validation(format!("phase {z} is not unimodular")));
        }
        Ok(EquivalenceTransform { left_perm, left_phases, right_phases, right_perm })
    }

    pub fn identity(n: usize) -> Self {
        EquivalenceTransform {
            left_perm: Permutation::identity(n),
            left_phases: vec![ONE; n],
            right_phases: vec![ONE; n],
            right_perm: Permutation::identity(n),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut phases = || -> Vec<Complex64> {
            (0..n).map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)).collect()
        };
        let left_phases = phases();
        let right_phases = phases();
        EquivalenceTransform {
            left_perm: Permutation(random_permutation(n, rng)),
            left_phases,
            right_phases,
            right_perm: Permutation(random_permutation(n, rng)),
        }
    }

    pub fn dim(&self) -> usize {
        self.left_perm.len()
    }
}

/// `P₁ D₁ U D₂ P₂`.
pub fn apply_transform(u: &ComplexMatrix, t: &EquivalenceTransform) -> Result<ComplexMatrix> {
    if !u.is_square() || u.rows() != t.dim() {
        return Err(Error::Dimension(format!(
            "transform of size {} applied to a {}x{} matrix",
            t.dim(),
            u.rows(),
            u.cols()
        )));
    }
    let d1 = ComplexMatrix::diagonal(&t.left_phases);
    let d2 = ComplexMatrix::diagonal(&t.right_phases);
    let inner = &(&d1 * u) * &d2;
    Ok(&(&t.left_perm.to_matrix() * &inner) * &t.right_perm.to_matrix())
}

#[derive(Clone, Debug)]
pub struct Dephased {
    pub matrix: ComplexMatrix,
    /// False when a zero entry in the first row or column left its phase unconstrained.
    pub complete: bool,
}

fn phase_of(z: Complex64) -> Option<Complex64> {
    let r = z.norm();
    (r > 0.0).then(|| z / r)
}

/// Multiplies by diagonal phases so that the first row and first column are
/// real and nonnegative. Permutations are left untouched.
pub fn dephase(u: &ComplexMatrix) -> Result<Dephased> {
    ensure_unitary(u, tolerance::UNITARITY)?;
    let n = u.rows();
    let mut complete = true;
    let right: Vec<Complex64> = (0..n)
        .map(|j| match phase_of(u[(0, j)]) {
            Some(p) => p.conj(),
            None => {
                complete = false;
                ONE
            }
        })
        .collect();
    let mut v = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)] * right[j]);
    let left: Vec<Complex64> = (0..n)
        .map(|i| match phase_of(v[(i, 0)]) {
            Some(p) => p.conj(),
            None => {
                complete = false;
                ONE
            }
        })
        .collect();
    v = ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * left[i]);
    // Remove rounding residue from the entries the phases made real.
    for k in 0..n {
        v[(0, k)] = Complex64::new(v[(0, k)].norm(), 0.0);
        v[(k, 0)] = Complex64::new(v[(k, 0)].norm(), 0.0);
    }
    Ok(Dephased { matrix: v, complete })
}

/// The angle `θ ∈ [0, π/4]` with `U ~ O(θ)` for `U ∈ U(2)`.
pub fn canonical_rotation_angle(u: &ComplexMatrix) -> Result<f64> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::Dimension(format!("rotation angle needs a 2x2 matrix, got {}x{}", u.rows(), u.cols())));
    }
    ensure_unitary(u, tolerance::UNITARITY)?;
    let c = u.max_abs_entry().clamp(std::f64::consts::FRAC_1_SQRT_2, 1.0);
    Ok(c.acos().clamp(0.0, std::f64::consts::FRAC_PI_4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fourier_matrix, rotation_matrix};
    use crate::rng::{haar_unitary, RngSeed};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn transform_examples() {
        let u = haar_unitary(4, RngSeed::new(1));
        assert!(apply_transform(&u, &EquivalenceTransform::identity(4)).unwrap().max_abs_diff(&u) < 1e-15);

        let p1 = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let p2 = Permutation::new(vec![1, 3, 0, 2]).unwrap();
        let t = EquivalenceTransform::new(p1.clone(), vec![ONE; 4], vec![ONE; 4], p2.clone()).unwrap();
        let v = apply_transform(&u, &t).unwrap();
        // (P1 U P2)_{ij} = U_{p1[i], q(j)} where q is the inverse image under p2.
        for i in 0..4 {
            for j in 0..4 {
                let col = p2.images().iter().position(|&x| x == j).unwrap();
                assert_eq!(v[(i, j)], u[(p1.images()[i], col)]);
            }
        }

        let mut rng = RngSeed::new(2).rng();
        let t = EquivalenceTransform::random(4, &mut rng);
        let v = apply_transform(&u, &t).unwrap();
        let mut a: Vec<f64> = u.as_slice().iter().map(|z| z.norm()).collect();
        let mut b: Vec<f64> = v.as_slice().iter().map(|z| z.norm()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14));
        assert!(matches!(apply_transform(&ComplexMatrix::identity(3), &t), Err(Error::Dimension(_))));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let bad = EquivalenceTransform::new(
            Permutation::identity(2),
            vec![Complex64::new(2.0, 0.0), ONE],
            vec![ONE; 2],
            Permutation::identity(2),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn dephase_examples() {
        let o = rotation_matrix(0.3).transpose();
        let d = dephase(&o).unwrap();
        assert!(d.complete);
        let (s, c) = 0.3f64.sin_cos();
        let expected = ComplexMatrix::from_real(2, 2, &[c, s, s, -c]).unwrap();
        assert!(d.matrix.max_abs_diff(&expected) < 1e-15);
        assert!(dephase(&expected).unwrap().matrix.max_abs_diff(&expected) < 1e-15);

        let f = fourier_matrix(4);
        let phases: Vec<Complex64> = (0..4).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64 + 0.2)).collect();
        let g = &ComplexMatrix::diagonal(&phases) * &f;
        let d = dephase(&g).unwrap();
        assert!(d.matrix.max_abs_diff(&f) < 1e-14);

        let u = haar_unitary(5, RngSeed::new(3));
        let once = dephase(&u).unwrap().matrix;
        for k in 0..5 {
            assert!(once[(0, k)].im.abs() < 1e-12 && once[(0, k)].re >= 0.0);
            assert!(once[(k, 0)].im.abs() < 1e-12 && once[(k, 0)].re >= 0.0);
        }
        assert!(dephase(&once).unwrap().matrix.max_abs_diff(&once) < 1e-14);

        let partial = dephase(&crate::families::cyclic_shift(3)).unwrap();
        assert!(!partial.complete);
    }

    #[test]
    fn rotation_angle_examples() {
        assert_eq!(canonical_rotation_angle(&ComplexMatrix::identity(2)).unwrap(), 0.0);
        assert!((canonical_rotation_angle(&rotation_matrix(FRAC_PI_4)).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!((canonical_rotation_angle(&rotation_matrix(FRAC_PI_3)).unwrap() - FRAC_PI_6).abs() < 1e-12);
        assert!(matches!(canonical_rotation_angle(&ComplexMatrix::identity(3)), Err(Error::Dimension(_))));
    }
}
