//! A cross-module property suite at small sample sizes, for quick self-checks.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{bound_ladder, eur_lhs, report_from_coefficients};
use crate::bounds::{classical_bound, slomczynski_check, StochasticMatrix};
use crate::entropy::{shannon_entropy, ProbabilityVector, RenyiOrder};
use crate::equivalence::{apply_transform, EquivalenceTransform};
use crate::extremal::{block_gram, cross_gram, lemma_max_value, maximizing_state, random_subspace_pair};
use crate::families::fourier_matrix;
use crate::linalg::hermitian_eigen;
use crate::montecarlo::majorization_fuzz;
use crate::rng::{haar_state_from, haar_unitary_from, random_simplex_point, RngSeed};
use crate::submatrices::s_coefficients;
use crate::{bounds, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation, in the units of the property.
    pub worst: f64,
    pub cases: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub samples: u64,
    pub seed: RngSeed,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: 5, samples: 100, seed: RngSeed::new(2024) }
    }
}

const ORDERS: [RenyiOrder; 5] =
    [RenyiOrder::HARTLEY, RenyiOrder::HALF, RenyiOrder::SHANNON, RenyiOrder::COLLISION, RenyiOrder::MIN_ENTROPY];

struct Tally {
    name: &'static str,
    tol: f64,
    worst: f64,
    cases: u64,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally { name, tol, worst: 0.0, cases: 0 }
    }

    /// Records a deviation; positive values count against the property.
    fn push(&mut self, deviation: f64) {
        self.cases += 1;
        if deviation.is_nan() || deviation > self.worst {
            self.worst = if deviation.is_nan() { f64::INFINITY } else { deviation };
        }
    }

    fn finish(self) -> Check {
        Check { name: self.name.into(), passed: self.worst <= self.tol, worst: self.worst, cases: self.cases }
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Vec<Check>> {
    let ns = 2..=config.max_n.max(2);
    let mut out = Vec::new();

    let mut fourier = Tally::new("fourier mu bound equals ln N", 1e-12);
    for n in 2..=8 {
        fourier.push((bounds::bound_mu(&fourier_matrix(n))? - (n as f64).ln()).abs());
    }
    out.push(fourier.finish());

    let mut fuzz = Tally::new("p x q is majorized by Q", 1e-10);
    for n in ns.clone() {
        let rep = majorization_fuzz(n, config.samples, config.seed.substream(n as u64))?;
        fuzz.cases += rep.pairs;
        fuzz.push(-rep.worst_slack);
    }
    out.push(fuzz.finish());

    let mut ladder = Tally::new("ladder is nondecreasing", 1e-12);
    let mut eur = Tally::new("entropy sum dominates strongest rung", 1e-10);
    let mut deutsch = Tally::new("deutsch bound below mu bound", 1e-12);
    let mut invariance = Tally::new("bounds invariant under equivalence", 1e-10);
    for n in ns.clone() {
        let mut rng = config.seed.substream(100 + n as u64).rng();
        for _ in 0..config.samples {
            let u = haar_unitary_from(n, &mut rng);
            let sc = s_coefficients(&u)?;
            let c = u.max_abs_entry();
            let psi = haar_state_from(n, &mut rng);
            for order in ORDERS {
                let rep = report_from_coefficients(&sc, c, order);
                for w in rep.ladder.windows(2) {
                    ladder.push(w[0] - w[1]);
                }
                eur.push(rep.strongest() - eur_lhs(&u, &psi, order)?);
            }
            let rep = report_from_coefficients(&sc, c, RenyiOrder::SHANNON);
            deutsch.push(rep.b_deutsch - rep.b_mu);

            let v = apply_transform(&u, &EquivalenceTransform::random(n, &mut rng))?;
            let sv = s_coefficients(&v)?;
            let dev = sc.s().iter().zip(sv.s()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            invariance.push(dev);
            let other = bound_ladder(&v, RenyiOrder::SHANNON)?;
            invariance.push((other.b_mu - rep.b_mu).abs());
            invariance.push(other.ladder.iter().zip(&rep.ladder).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    out.extend([ladder.finish(), eur.finish(), deutsch.finish(), invariance.finish()]);

    let mut overlap_bound = Tally::new("overlap sum never exceeds 1 + sigma_1", 1e-10);
    let mut overlap_attain = Tally::new("maximizing state attains 1 + sigma_1", 1e-10);
    let mut overlap_equal = Tally::new("partial sums equal at the maximizer", 1e-10);
    let mut overlap_block = Tally::new("block gram top eigenvalue is 1 + sigma_1", 1e-12);
    for dim in ns.clone() {
        let mut rng = config.seed.substream(200 + dim as u64).rng();
        for _ in 0..config.samples {
            let m = rng.random_range(1..=dim);
            let k = rng.random_range(1..=dim);
            let sp = random_subspace_pair(dim, m, k, &mut rng);
            let max = lemma_max_value(&sp);
            for _ in 0..10 {
                overlap_bound.push(sp.objective(&haar_state_from(dim, &mut rng)) - max);
            }
            let best = maximizing_state(&sp);
            overlap_attain.push((sp.objective(&best.state) - max).abs());
            if !best.fallback {
                let (a, b) = sp.partial_sums(&best.state);
                overlap_equal.push((a - b).abs());
            }
            let top = *hermitian_eigen(&block_gram(&cross_gram(&sp))).values.last().expect("nonempty");
            overlap_block.push((top - max).abs());
        }
    }
    out.extend([overlap_bound.finish(), overlap_attain.finish(), overlap_equal.finish(), overlap_block.finish()]);

    let mut classical = Tally::new("classical mixture inequalities and bound", 1e-10);
    for n in ns {
        let mut rng = config.seed.substream(300 + n as u64).rng();
        for _ in 0..config.samples {
            let t = random_column_stochastic(n, &mut rng)?;
            let p = ProbabilityVector::new(random_simplex_point(n, &mut rng))?;
            classical.push(if slomczynski_check(&t, &p)? { 0.0 } else { f64::INFINITY });
            let total = shannon_entropy(p.values()) + shannon_entropy(t.apply(&p)?.values());
            classical.push(classical_bound(&t) - total);
        }
    }
    out.push(classical.finish());
    Ok(out)
}

/// A column-stochastic matrix with independent flat-Dirichlet columns.
pub fn random_column_stochastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StochasticMatrix> {
    let cols: Vec<Vec<f64>> = (0..n).map(|_| random_simplex_point(n, rng)).collect();
    StochasticMatrix::new(n, n, (0..n * n).map(|k| cols[k % n][k / n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let cfg = SuiteConfig { max_n: 4, samples: 30, ..Default::default() };
        let checks = run_suite(&cfg).unwrap();
        for c in &checks {
            assert!(c.passed, "{c:?}");
            assert!(c.cases > 0);
        }
    }
}
