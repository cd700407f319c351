//! Parametric families of unitaries and the unistochastic cross-section of
//! the 3x3 Birkhoff polytope.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{bound_ladder, report_from_coefficients, StochasticMatrix};
use crate::entropy::RenyiOrder;
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::matrix::{unitarity_residual, ComplexMatrix, ONE, ZERO};
use crate::submatrices::s_coefficients;
use crate::tolerance;

/// `O(θ) = [[cos θ, -sin θ], [sin θ, cos θ]]`.
pub fn rotation_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).expect("finite rotation")
}

/// Cyclic shift with ones at `(i, i + 1 mod n)`.
pub fn cyclic_shift(n: usize) -> ComplexMatrix {
    assert!(n >= 1);
    ComplexMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { ONE } else { ZERO })
}

/// `F_jk = e^{2πi jk/n} / √n`.
pub fn fourier_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1);
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| Complex64::from_polar(norm, TAU * ((j * k) % n) as f64 / n as f64))
}

/// `P^β = F diag(e^{2πi kβ/n}) F†` with eigenphase branch `k = 0..n-1`.
pub fn permutation_power(n: usize, beta: f64) -> ComplexMatrix {
    assert!(n >= 1);
    let f = fourier_matrix(n);
    let eig: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 * beta / n as f64)).collect();
    ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| f[(i, k)] * eig[k] * f[(j, k)].conj()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BirkhoffPoint {
    a: f64,
    b: f64,
}

impl BirkhoffPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let eps = 1e-12;
        if !(a.is_finite() && b.is_finite()) || a < -eps || b < -eps || a + b > 1.0 + eps {
            return Err(Error::Validation(format!("({a}, {b}) is outside the simplex a, b >= 0, a + b <= 1")));
        }
        Ok(BirkhoffPoint { a: a.max(0.0), b: b.max(0.0) })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `a P₃ + b P₃² + (1 - a - b) I`.
pub fn birkhoff_matrix(p: BirkhoffPoint) -> StochasticMatrix {
    let rest = (1.0 - p.a - p.b).max(0.0);
    let mut data = vec![0.0; 9];
    for i in 0..3 {
        data[i * 3 + i] += rest;
        data[i * 3 + (i + 1) % 3] += p.a;
        data[i * 3 + (i + 2) % 3] += p.b;
    }
    StochasticMatrix::new(3, 3, data).expect("convex combination of permutations")
}

fn ensure_bistochastic_3(b: &StochasticMatrix) -> Result<()> {
    if b.rows() != 3 || b.cols() != 3 {
        return Err(Error::Dimension("unistochasticity test is defined for 3x3 matrices".into()));
    }
    if !b.is_bistochastic(tolerance::NORMALIZATION) {
        return Err(Error::Validation(format!("matrix is not bistochastic: row sums {:?}", b.row_sums())));
    }
    Ok(())
}

fn chain_links(b: &StochasticMatrix) -> [f64; 3] {
    [0, 1, 2].map(|j| (b.get(0, j) * b.get(1, j)).sqrt())
}

/// Chain-link criterion: the three lengths `sqrt(B_1j B_2j)` close a triangle.
pub fn unistochastic_check_3(b: &StochasticMatrix) -> Result<bool> {
    ensure_bistochastic_3(b)?;
    let l = chain_links(b);
    Ok((0..3).all(|j| l[j] <= l[(j + 1) % 3] + l[(j + 2) % 3] + tolerance::CHAIN_LINK))
}

#[derive(Clone, Debug)]
pub struct UnistochasticLift {
    pub unitary: ComplexMatrix,
    /// `max_ij | |U_ij|² - B_ij |`.
    pub residual: f64,
    /// Max-norm of `U U† - I`.
    pub unitarity_residual: f64,
}

/// Builds a dephased unitary whose squared moduli reproduce `b`.
///
/// Row one is `sqrt(B_1j)`, row two carries the phases that close the
/// chain-link triangle, and row three is the conjugated cross product.
pub fn unistochastic_lift_3(b: &StochasticMatrix) -> Result<UnistochasticLift> {
    if !unistochastic_check_3(b)? {
        return Err(Error::Construction(format!("chain links {:?} violate the triangle inequality", chain_links(b))));
    }
    let modulus = |i: usize, j: usize| b.get(i, j).max(0.0).sqrt();
    let l = chain_links(b);
    let phi1 = if l[0] > 0.0 && l[1] > 0.0 {
        ((l[2] * l[2] - l[0] * l[0] - l[1] * l[1]) / (2.0 * l[0] * l[1])).clamp(-1.0, 1.0).acos()
    } else {
        0.0
    };
    let closing = -(Complex64::new(l[0], 0.0) + Complex64::from_polar(l[1], phi1));
    let phi2 = if l[2] > 0.0 && closing.norm() > 0.0 { closing.arg() } else { 0.0 };

    let r0: Vec<Complex64> = (0..3).map(|j| Complex64::new(modulus(0, j), 0.0)).collect();
    let r1 = vec![
        Complex64::new(modulus(1, 0), 0.0),
        Complex64::from_polar(modulus(1, 1), phi1),
        Complex64::from_polar(modulus(1, 2), phi2),
    ];
    let cross = [r0[1] * r1[2] - r0[2] * r1[1], r0[2] * r1[0] - r0[0] * r1[2], r0[0] * r1[1] - r0[1] * r1[0]];
    let mut r2: Vec<Complex64> = cross.iter().map(|z| z.conj()).collect();
    if r2[0].norm() > 0.0 {
        let fix = r2[0].conj() / r2[0].norm();
        r2.iter_mut().for_each(|z| *z *= fix);
    }

    let data: Vec<Complex64> = r0.into_iter().chain(r1).chain(r2).collect();
    let unitary = ComplexMatrix::new(3, 3, data)?;
    let residual = unitary.squared_moduli().iter().zip(b.entries()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let unitarity_residual = unitarity_residual(&unitary)?;
    Ok(UnistochasticLift { unitary, residual, unitarity_residual })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub a: f64,
    pub b: f64,
    pub feasible: bool,
    pub b_mu: Option<f64>,
    pub b_ladder_2: Option<f64>,
    /// `B_MU - B_α^2`.
    pub diff: Option<f64>,
    /// Entry residual of the lifted unitary, when feasible.
    pub lift_residual: Option<f64>,
}

fn grid_points(step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Validation(format!("grid step must lie in (0, 0.1], got {step}")));
    }
    let k = (1.0 / step + 1e-9).floor() as usize;
    let mut out = Vec::new();
    for i in 0..=k {
        for j in 0..=(k - i) {
            out.push((i as f64 * step, j as f64 * step));
        }
    }
    Ok(out)
}

fn scan_point(a: f64, b: f64, order: RenyiOrder) -> Result<ScanRecord> {
    let m = birkhoff_matrix(BirkhoffPoint::new(a, b)?);
    let feasible = unistochastic_check_3(&m)?;
    if !feasible {
        return Ok(ScanRecord { a, b, feasible, b_mu: None, b_ladder_2: None, diff: None, lift_residual: None });
    }
    let lift = unistochastic_lift_3(&m)?;
    let report = bound_ladder(&lift.unitary, order)?;
    Ok(ScanRecord {
        a,
        b,
        feasible,
        b_mu: Some(report.b_mu),
        b_ladder_2: Some(report.ladder[1]),
        diff: Some(report.b_mu - report.ladder[1]),
        lift_residual: Some(lift.residual),
    })
}

/// Evaluates feasibility and `B_MU - B_α^2` over the simplex grid, ordered by `(a, b)`.
pub fn cross_section_scan(grid_step: f64, order: RenyiOrder) -> Result<Vec<ScanRecord>> {
    cross_section_scan_with(grid_step, order, Execution::Parallel)
}

pub fn cross_section_scan_with(grid_step: f64, order: RenyiOrder, execution: Execution) -> Result<Vec<ScanRecord>> {
    let points = grid_points(grid_step)?;
    map_slice(execution, &points, |&(a, b)| scan_point(a, b, order)).into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `O(θ)` in dimension 2.
    Rotation,
    /// `P_n^β`.
    PermPower { n: usize },
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::Rotation => 2,
            Family::PermPower { n } => n,
        }
    }

    pub fn member(self, parameter: f64) -> ComplexMatrix {
        match self {
            Family::Rotation => rotation_matrix(parameter),
            Family::PermPower { n } => permutation_power(n, parameter),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub alpha: RenyiOrder,
    pub deutsch: f64,
    pub mu: f64,
    /// `B_α^1 ..= B_α^{N-1}`.
    pub ladder: Vec<f64>,
}

/// `steps + 1` evenly spaced parameters from `lo` to `hi`, both included.
pub fn sweep_parameters(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::Validation(format!("bad sweep range [{lo}, {hi}] with {steps} steps")));
    }
    Ok((0..=steps).map(|k| if k == steps { hi } else { lo + (hi - lo) * k as f64 / steps as f64 }).collect())
}

/// One row per parameter and order, parameters outermost.
pub fn family_sweep(
    family: Family,
    parameters: &[f64],
    orders: &[RenyiOrder],
    execution: Execution,
) -> Result<Vec<SweepRow>> {
    if family.dim() < 2 {
        return Err(Error::Dimension("sweeps need dimension at least 2".into()));
    }
    let per_point = map_slice(execution, parameters, |&t| -> Result<Vec<SweepRow>> {
        let u = family.member(t);
        let sc = s_coefficients(&u)?;
        let c = u.max_abs_entry();
        Ok(orders
            .iter()
            .map(|&order| {
                let rep = report_from_coefficients(&sc, c, order);
                SweepRow { parameter: t, alpha: order, deutsch: rep.b_deutsch, mu: rep.b_mu, ladder: rep.ladder }
            })
            .collect())
    });
    let mut rows = Vec::with_capacity(parameters.len() * orders.len());
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let rungs = rows.first().map_or(0, |r| r.ladder.len());
    let mut out = String::from("parameter,alpha,deutsch,mu");
    for k in 1..=rungs {
        let _ = write!(out, ",ladder_{k}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{},{}", fmt_sig12(r.parameter), r.alpha, fmt_sig12(r.deutsch), fmt_sig12(r.mu));
        for x in &r.ladder {
            let _ = write!(out, ",{}", fmt_sig12(*x));
        }
        out.push('\n');
    }
    out
}

/// Formats with 12 significant digits.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_sig12).unwrap_or_default();
    let mut out = String::from("a,b,feasible,b_mu,b_ladder_2,diff\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig12(r.a),
            fmt_sig12(r.b),
            u8::from(r.feasible),
            opt(r.b_mu),
            opt(r.b_ladder_2),
            opt(r.diff)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_unitary;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn rotation_examples() {
        assert!(rotation_matrix(0.0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-16);
        let q = rotation_matrix(FRAC_PI_2);
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert!(q.max_abs_diff(&expected) < 1e-15);
        assert!(rotation_matrix(FRAC_PI_4).as_slice().iter().all(|z| (z.norm() - FRAC_1_SQRT_2).abs() < 1e-15));
    }

    #[test]
    fn shift_examples() {
        let p3 = cyclic_shift(3);
        let expected = ComplexMatrix::from_real(3, 3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]).unwrap();
        assert_eq!(p3, expected);
        for n in 2..6 {
            let p = cyclic_shift(n);
            let mut acc = ComplexMatrix::identity(n);
            for _ in 0..n {
                acc = &acc * &p;
            }
            assert!(acc.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-15);
        }
        let swap = ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        assert_eq!(cyclic_shift(2), swap);
    }

    #[test]
    fn permutation_power_examples() {
        for n in 2..6 {
            assert!(permutation_power(n, 0.0).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-14);
            assert!(permutation_power(n, 1.0).max_abs_diff(&cyclic_shift(n)) < 1e-14);
        }
        let half = permutation_power(2, 0.5);
        let a = Complex64::new(0.5, 0.5);
        let b = Complex64::new(0.5, -0.5);
        let expected = ComplexMatrix::new(2, 2, vec![a, b, b, a]).unwrap();
        assert!(half.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn fourier_examples() {
        let h = fourier_matrix(2);
        let expected =
            ComplexMatrix::from_real(2, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        assert!(h.max_abs_diff(&expected) < 1e-15);
        assert_eq!(fourier_matrix(1).as_slice(), &[ONE]);
        for n in 1..9 {
            assert!((fourier_matrix(n).max_abs_entry() - 1.0 / (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn birkhoff_examples() {
        assert_eq!(birkhoff_matrix(BirkhoffPoint::new(0.0, 0.0).unwrap()), StochasticMatrix::identity(3));
        let flat = birkhoff_matrix(BirkhoffPoint::new(1.0 / 3.0, 1.0 / 3.0).unwrap());
        assert!(flat.entries().iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p3 = birkhoff_matrix(BirkhoffPoint::new(1.0, 0.0).unwrap());
        assert_eq!(p3.to_complex(), cyclic_shift(3));
        assert!(BirkhoffPoint::new(0.7, 0.5).is_err());
        assert!(BirkhoffPoint::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn unistochastic_examples() {
        assert!(unistochastic_check_3(&StochasticMatrix::flat(3)).unwrap());
        for (a, b) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
            assert!(unistochastic_check_3(&birkhoff_matrix(BirkhoffPoint::new(a, b).unwrap())).unwrap());
        }
        let mid = birkhoff_matrix(BirkhoffPoint::new(0.5, 0.5).unwrap());
        assert!(!unistochastic_check_3(&mid).unwrap());
        assert!(matches!(unistochastic_lift_3(&mid), Err(Error::Construction(_))));
        let not_bi = StochasticMatrix::new(3, 3, vec![1., 1., 1., 0., 0., 0., 0., 0., 0.]).unwrap();
        assert!(matches!(unistochastic_check_3(&not_bi), Err(Error::Validation(_))));
    }

    #[test]
    fn lift_examples() {
        let flat = unistochastic_lift_3(&StochasticMatrix::flat(3)).unwrap();
        assert!(flat.residual < 1e-12 && is_unitary(&flat.unitary, 1e-12).unwrap());
        assert!(flat.unitary.as_slice().iter().all(|z| (z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12));
        let id = unistochastic_lift_3(&StochasticMatrix::identity(3)).unwrap();
        assert!(id.unitary.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn scan_grid_and_csv() {
        let recs = cross_section_scan(0.1, RenyiOrder::SHANNON).unwrap();
        assert_eq!(recs.len(), 66);
        assert_eq!((recs[0].a, recs[0].b), (0.0, 0.0));
        assert!(recs[0].diff.unwrap().abs() < 1e-12);
        assert!(recs.windows(2).all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b)));
        let csv = scan_csv(&recs);
        assert!(csv.starts_with("a,b,feasible,b_mu,b_ladder_2,diff\n"));
        assert_eq!(csv.lines().count(), 67);
        assert!(cross_section_scan(0.5, RenyiOrder::SHANNON).is_err());
        assert_eq!(cross_section_scan(0.03, RenyiOrder::SHANNON).unwrap().len(), 34 * 35 / 2);
    }

    #[test]
    fn sweep_rows_and_csv() {
        let params = sweep_parameters(0.0, FRAC_PI_2, 8).unwrap();
        assert_eq!(params.len(), 9);
        assert_eq!(params[8], FRAC_PI_2);
        let rows = family_sweep(Family::Rotation, &params, &[RenyiOrder::MIN_ENTROPY], Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 9);
        let r1 = (0.5 * (1.0 + FRAC_1_SQRT_2)).powi(2);
        assert!((rows[4].ladder[0] + r1.ln()).abs() < 1e-12);
        assert!(rows[0].mu.abs() < 1e-15 && rows[8].mu.abs() < 1e-12);

        let params = sweep_parameters(0.0, 1.0, 4).unwrap();
        let orders = [RenyiOrder::SHANNON, RenyiOrder::COLLISION];
        let rows = family_sweep(Family::PermPower { n: 4 }, &params, &orders, Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.ladder.windows(2).all(|w| w[0] <= w[1] + 1e-12)));
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("parameter,alpha,deutsch,mu,ladder_1,ladder_2,ladder_3\n"));
        assert_eq!(csv.lines().count(), 11);
        assert!(sweep_parameters(1.0, 0.0, 3).is_err());
        assert!(sweep_parameters(0.0, 1.0, 0).is_err());
    }
}
