//! Rényi entropies and the majorization preorder on probability vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance;

/// Nonnegative reals summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("empty probability vector".into()));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Validation(format!("probability component {x} is negative or non-finite")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tolerance::NORMALIZATION {
            return Err(Error::Validation(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(ProbabilityVector(values))
    }

    /// Point mass on `index`.
    pub fn point_mass(len: usize, index: usize) -> Self {
        assert!(index < len);
        ProbabilityVector((0..len).map(|i| if i == index { 1.0 } else { 0.0 }).collect())
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        ProbabilityVector(vec![1.0 / len as f64; len])
    }

    /// Constructor for vectors normalized by construction; skips validation.
    pub(crate) fn from_trusted(values: Vec<f64>) -> Self {
        ProbabilityVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Components in decreasing order.
    pub fn sorted_decreasing(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for ProbabilityVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        ProbabilityVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// Order `α ∈ [0, ∞]` of a Rényi entropy.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const HARTLEY: RenyiOrder = RenyiOrder(0.0);
    pub const HALF: RenyiOrder = RenyiOrder(0.5);
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);
    pub const COLLISION: RenyiOrder = RenyiOrder(2.0);
    pub const MIN_ENTROPY: RenyiOrder = RenyiOrder(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::Validation(format!("Renyi order must be in [0, inf], got {alpha}")));
        }
        Ok(RenyiOrder(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(RenyiOrder::MIN_ENTROPY);
        }
        let value = if let Some((num, den)) = t.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| Error::Parse(format!("bad Renyi order '{s}'")))?;
            let den: f64 = den.trim().parse().map_err(|_| Error::Parse(format!("bad Renyi order '{s}'")))?;
            num / den
        } else {
            t.parse().map_err(|_| Error::Parse(format!("bad Renyi order '{s}'")))?
        };
        if !value.is_finite() {
            return Err(Error::Parse(format!("bad Renyi order '{s}'")));
        }
        RenyiOrder::new(value)
    }
}

impl Serialize for RenyiOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for RenyiOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => RenyiOrder::new(x).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy(x: &[f64]) -> f64 {
    -x.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// Rényi entropy `H_α(x)` in nats.
///
/// `α = 0` counts the support, `α = 1` is Shannon, `α = ∞` is `-ln max x`.
/// Orders within [`tolerance::SHANNON_WINDOW`] of one are evaluated as Shannon.
pub fn renyi_entropy(x: &ProbabilityVector, order: RenyiOrder) -> f64 {
    renyi_of_slice(x.values(), order.value())
}

pub(crate) fn renyi_of_slice(x: &[f64], alpha: f64) -> f64 {
    if alpha == 0.0 {
        let support = x.iter().filter(|&&v| v > tolerance::ZERO_COMPONENT).count();
        return (support as f64).ln();
    }
    if alpha.is_infinite() {
        return -x.iter().copied().fold(0.0, f64::max).ln();
    }
    if (alpha - 1.0).abs() < tolerance::SHANNON_WINDOW {
        return shannon_entropy(x);
    }
    // ln Σ x^α = α ln x_max + ln Σ (x / x_max)^α avoids under/overflow for large α.
    let xmax = x.iter().copied().fold(0.0, f64::max);
    let sum: f64 = x.iter().filter(|&&v| v > tolerance::ZERO_COMPONENT).map(|&v| (v / xmax).powf(alpha)).sum();
    (alpha * xmax.ln() + sum.ln()) / (1.0 - alpha)
}

/// Flattened outer product `r_{ij} = p_i q_j`.
pub fn tensor_product(p: &ProbabilityVector, q: &ProbabilityVector) -> ProbabilityVector {
    let mut out = Vec::with_capacity(p.len() * q.len());
    for &a in p.values() {
        for &b in q.values() {
            out.push(a * b);
        }
    }
    ProbabilityVector::from_trusted(out)
}

/// Smallest partial-sum margin `min_m (Σ_{i≤m} ỹ_i - Σ_{i≤m} x̃_i)` over the
/// decreasing rearrangements, the shorter vector padded with zeros.
/// Nonnegative exactly when `x ≺ y`.
pub fn majorization_slack(y: &[f64], x: &[f64]) -> f64 {
    let mut ys = y.to_vec();
    let mut xs = x.to_vec();
    ys.sort_by(|a, b| b.total_cmp(a));
    xs.sort_by(|a, b| b.total_cmp(a));
    let len = ys.len().max(xs.len());
    let (mut sy, mut sx) = (0.0, 0.0);
    let mut worst = f64::INFINITY;
    for i in 0..len {
        sy += ys.get(i).copied().unwrap_or(0.0);
        sx += xs.get(i).copied().unwrap_or(0.0);
        worst = worst.min(sy - sx);
    }
    worst
}

/// `x ≺ y` up to `tol` on each partial sum.
pub fn majorizes(y: &ProbabilityVector, x: &ProbabilityVector, tol: f64) -> bool {
    majorization_slack(y.values(), x.values()) >= -tol
}

/// Checks `H_α(x) ≥ H_α(y)` for a pair with `x ≺ y`.
pub fn schur_concavity_witness(x: &ProbabilityVector, y: &ProbabilityVector, order: RenyiOrder) -> Result<bool> {
    if !majorizes(y, x, tolerance::PROPERTY) {
        return Err(Error::Contract("schur_concavity_witness requires x to be majorized by y".into()));
    }
    Ok(renyi_entropy(x, order) >= renyi_entropy(y, order) - tolerance::PROPERTY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    const ORDERS: [f64; 7] = [0.0, 0.5, 1.0, 2.0, 5.0, 1e6, f64::INFINITY];

    #[test]
    fn entropy_examples() {
        for n in 1..6 {
            for &a in &ORDERS {
                let h = renyi_entropy(&ProbabilityVector::uniform(n), RenyiOrder::new(a).unwrap());
                assert!((h - (n as f64).ln()).abs() < 1e-12, "n={n} a={a}");
                let h0 = renyi_entropy(&ProbabilityVector::point_mass(n, 0), RenyiOrder::new(a).unwrap());
                assert!(h0.abs() < 1e-12);
            }
        }
        let h2 = renyi_entropy(&pv(&[0.5, 0.5]), RenyiOrder::COLLISION);
        assert!((h2 - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(ProbabilityVector::new(vec![0.5, -0.1, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(RenyiOrder::new(-1.0).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn order_parsing_and_serialization() {
        assert_eq!("inf".parse::<RenyiOrder>().unwrap(), RenyiOrder::MIN_ENTROPY);
        assert_eq!("1/2".parse::<RenyiOrder>().unwrap().value(), 0.5);
        assert_eq!("2".parse::<RenyiOrder>().unwrap(), RenyiOrder::COLLISION);
        assert!("-3".parse::<RenyiOrder>().is_err());
        assert!("x".parse::<RenyiOrder>().is_err());
        assert_eq!(serde_json::to_string(&RenyiOrder::MIN_ENTROPY).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&RenyiOrder::SHANNON).unwrap(), "1.0");
        let back: RenyiOrder = serde_json::from_str("\"inf\"").unwrap();
        assert!(back.is_infinite());
    }

    #[test]
    fn tensor_product_examples() {
        let q = pv(&[0.2, 0.3, 0.5]);
        assert_eq!(tensor_product(&pv(&[1.0]), &q), q);
        let half = pv(&[0.5, 0.5]);
        assert_eq!(tensor_product(&half, &half).values(), &[0.25; 4]);
    }

    #[test]
    fn majorization_examples() {
        let u = ProbabilityVector::uniform(4);
        let e = ProbabilityVector::point_mass(4, 2);
        assert!(majorizes(&e, &u, 0.0));
        assert!(majorizes(&u, &u, 0.0));
        let x = pv(&[0.5, 0.5]);
        let y = pv(&[0.6, 0.4]);
        assert!(majorizes(&y, &x, 0.0));
        assert!(!majorizes(&x, &y, 0.0));
        // shorter vectors are zero-padded
        assert!(majorizes(&pv(&[1.0]), &u, 0.0));
        assert!(!majorizes(&u, &pv(&[0.7, 0.3]), 1e-12));
    }

    #[test]
    fn schur_witness() {
        let u = ProbabilityVector::uniform(3);
        let e = ProbabilityVector::point_mass(3, 0);
        assert!(schur_concavity_witness(&u, &e, RenyiOrder::SHANNON).unwrap());
        assert!(schur_concavity_witness(&u, &u, RenyiOrder::SHANNON).unwrap());
        assert!(matches!(schur_concavity_witness(&e, &u, RenyiOrder::SHANNON), Err(Error::Contract(_))));
    }

    #[test]
    fn shannon_window() {
        let x = pv(&[0.1, 0.2, 0.3, 0.4]);
        let h1 = renyi_entropy(&x, RenyiOrder::SHANNON);
        for a in [1.0 - 1e-8, 1.0 + 1e-8, 1.0 + 5e-10] {
            assert!((renyi_entropy(&x, RenyiOrder::new(a).unwrap()) - h1).abs() < 1e-6);
        }
    }
}
