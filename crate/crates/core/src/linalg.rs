//! Hermitian eigensolver, spectral norms and Householder QR for small dense matrices.

use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, ONE, ZERO};

const MAX_SWEEPS: usize = 64;
/// Distance of the cubic's `r` from -1 below which it is not trusted.
const CUBIC_MERGE_GUARD: f64 = 1e-3;

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Full eigensolve by cyclic complex Jacobi rotations.
///
/// Only the upper triangle is trusted; the lower triangle is assumed to be its
/// conjugate. Panics if `h` is not square.
pub fn hermitian_eigen(h: &ComplexMatrix) -> HermitianEigen {
    assert!(h.is_square(), "eigensolve of a non-square matrix");
    let n = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in 0..i {
            a[i * n + j] = a[j * n + i].conj();
        }
    }
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).as_slice().to_vec();
    jacobi_in_place(&mut a, n, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    HermitianEigen { values, vectors }
}

/// Largest eigenvalue of a Hermitian `n x n` matrix stored row-major in `a`.
/// The buffer is overwritten.
pub fn largest_eigenvalue_in_place(a: &mut [Complex64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    match n {
        1 => a[0].re,
        2 => {
            let (p, q) = (a[0].re, a[3].re);
            let half_gap = 0.5 * (p - q);
            0.5 * (p + q) + half_gap.hypot(a[1].norm())
        }
        _ => {
            if n == 3 {
                if let Some(top) = largest_eigenvalue_3(a) {
                    return top;
                }
            }
            for i in 0..n {
                for j in 0..i {
                    a[i * n + j] = a[j * n + i].conj();
                }
            }
            jacobi_in_place(a, n, None);
            (0..n).map(|i| a[i * n + i].re).fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// Trigonometric solution of the characteristic cubic, reading the upper triangle.
///
/// With `λ = q + 2p cos(acos(r) / 3)` the sensitivity `dλ/dr` blows up as
/// `r → -1`, where the two largest eigenvalues merge. Returns `None` in that
/// regime so the caller can use the iterative solver.
fn largest_eigenvalue_3(a: &[Complex64]) -> Option<f64> {
    let (d0, d1, d2) = (a[0].re, a[4].re, a[8].re);
    let (x01, x02, x12) = (a[1], a[2], a[5]);
    let off = x01.norm_sqr() + x02.norm_sqr() + x12.norm_sqr();
    let q = (d0 + d1 + d2) / 3.0;
    let (b0, b1, b2) = (d0 - q, d1 - q, d2 - q);
    let p2 = (b0 * b0 + b1 * b1 + b2 * b2 + 2.0 * off) / 6.0;
    if p2 <= 0.0 {
        return Some(q);
    }
    let p = p2.sqrt();
    let det = b0 * b1 * b2 + 2.0 * (x01 * x12 * x02.conj()).re
        - b0 * x12.norm_sqr()
        - b1 * x02.norm_sqr()
        - b2 * x01.norm_sqr();
    let r = det / (2.0 * p2 * p);
    if r < CUBIC_MERGE_GUARD - 1.0 {
        return None;
    }
    Some(q + 2.0 * p * (r.min(1.0).acos() / 3.0).cos())
}

fn off_diagonal_norm2(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[i * n + j].norm_sqr();
        }
    }
    s
}

fn jacobi_in_place(a: &mut [Complex64], n: usize, mut vecs: Option<&mut Vec<Complex64>>) {
    let scale2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if scale2 == 0.0 {
        return;
    }
    let threshold = scale2 * f64::EPSILON * f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm2(a, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // V = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on coordinates (p, q); A <- V† A V.
                let e = phase.conj();
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * e * s;
                    a[k * n + q] = akp * s + akq * e * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * e * s;
                        v[k * n + q] = vkp * s + vkq * e * c;
                    }
                }
            }
        }
    }
}

/// `A A†` when `A` is wide or square, otherwise `A† A`: the smaller Gram matrix.
pub fn smaller_gram(a: &ComplexMatrix) -> ComplexMatrix {
    if a.rows() <= a.cols() {
        ComplexMatrix::from_fn(a.rows(), a.rows(), |i, j| {
            a.row(i).iter().zip(a.row(j)).map(|(x, y)| x * y.conj()).sum()
        })
    } else {
        ComplexMatrix::from_fn(a.cols(), a.cols(), |i, j| (0..a.rows()).map(|k| a[(k, i)].conj() * a[(k, j)]).sum())
    }
}

/// Spectral norm `σ_max(A) = sqrt(λ_max(A A†))`.
pub fn largest_singular_value(a: &ComplexMatrix) -> f64 {
    let g = smaller_gram(a);
    let d = g.rows();
    let mut buf = g.as_slice().to_vec();
    largest_eigenvalue_in_place(&mut buf, d).max(0.0).sqrt()
}

/// Leading singular triplet `(σ, u, v)` with `A v = σ u`, `‖u‖ = ‖v‖ = 1`.
///
/// When `σ = 0` no leading pair is defined and `None` is returned.
pub fn leading_singular_triplet(a: &ComplexMatrix) -> Option<(f64, Vec<Complex64>, Vec<Complex64>)> {
    let ata =
        ComplexMatrix::from_fn(a.cols(), a.cols(), |i, j| (0..a.rows()).map(|k| a[(k, i)].conj() * a[(k, j)]).sum());
    let eig = hermitian_eigen(&ata);
    let last = eig.values.len() - 1;
    let v = eig.vectors.column(last);
    let av = a.apply(&v);
    let sigma = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if sigma <= f64::EPSILON * a.max_abs_entry().max(f64::MIN_POSITIVE) * (a.rows() * a.cols()) as f64 {
        return None;
    }
    let u = av.into_iter().map(|z| z / sigma).collect();
    Some((sigma, u, v))
}

/// Householder QR, `A = Q R`, for square `A`. `R` is upper triangular with
/// diagonal entries that are not phase-normalized.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    assert!(a.is_square(), "QR of a non-square matrix");
    let n = a.rows();
    let mut r = a.clone();
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        let norm_x = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = r[(k, k)];
        if norm_x == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // R <- (I - 2 v v†) R on rows k.., columns k..
        for j in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * r[(k + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                r[(k + t, j)] -= vt * dot * 2.0;
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = ZERO;
        }
        reflectors.push(v);
    }
    let mut q = ComplexMatrix::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * q[(k + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(k + t, j)] -= vt * dot * 2.0;
            }
        }
    }
    (q, r)
}
