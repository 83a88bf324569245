//! Inverse Euler transform: writing a unit power series as `Π (1 - q^m)^{-c_m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::product::ProductForm;
use super::truncated::TruncatedSeries;
use crate::error::{GfError, Result};

/// `Π_m (1 - q^m)^{-c_m}` with integer (possibly negative) multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EulerProduct {
    multiplicities: BTreeMap<u64, BigInt>,
}

impl EulerProduct {
    pub fn from_multiplicities<I: IntoIterator<Item = (u64, i64)>>(items: I) -> Self {
        let mut multiplicities = BTreeMap::new();
        for (m, c) in items {
            let slot: &mut BigInt = multiplicities.entry(m).or_default();
            *slot += c;
        }
        multiplicities.retain(|_, c| !c.is_zero());
        Self { multiplicities }
    }

    pub fn multiplicities(&self) -> &BTreeMap<u64, BigInt> {
        &self.multiplicities
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// `(exponent, multiplicity)` pairs as small integers, if they fit.
    pub fn to_pairs(&self) -> Option<Vec<(u64, i64)>> {
        self.multiplicities
            .iter()
            .map(|(&m, c)| i64::try_from(c).ok().map(|c| (m, c)))
            .collect()
    }

    /// The plain product `Π 1/(1 - q^m)` when every multiplicity is positive.
    pub fn to_product_form(&self) -> Option<ProductForm> {
        let mut exps = Vec::new();
        for (&m, c) in &self.multiplicities {
            if !c.is_positive() {
                return None;
            }
            let n = usize::try_from(c).ok()?;
            exps.extend(std::iter::repeat_n(m, n));
        }
        ProductForm::pure_product(&exps).ok()
    }

    pub fn expand(&self, bound: u64) -> TruncatedSeries {
        let mut coeffs = vec![BigInt::zero(); bound as usize + 1];
        coeffs[0] = BigInt::one();
        for (&m, c) in &self.multiplicities {
            multiply_by_power(&mut coeffs, m, &-c);
        }
        TruncatedSeries::from_univariate(&coeffs)
    }
}

impl fmt::Display for EulerProduct {
    /// `exponent:multiplicity` pairs separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (m, c)) in self.multiplicities.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}:{c}")?;
        }
        Ok(())
    }
}

/// Greedy inverse Euler transform of a univariate series with constant term 1,
/// exact through degree `bound` (capped at the series bound).
pub fn infer_product_form(series: &TruncatedSeries, bound: u64) -> Result<EulerProduct> {
    if !series.is_univariate() {
        return Err(GfError::NotUnivariate);
    }
    let bound = bound.min(series.bound());
    let mut work: Vec<BigInt> = series.univariate_coeffs()[..=bound as usize].to_vec();
    if !work[0].is_one() {
        return Err(GfError::NotUnitSeries(work[0].clone()));
    }
    let mut multiplicities = BTreeMap::new();
    for m in 1..=bound {
        let c = work[m as usize].clone();
        if c.is_zero() {
            continue;
        }
        // Multiplying by (1 - q^m)^c clears the q^m coefficient.
        multiply_by_power(&mut work, m, &c);
        debug_assert!(work[m as usize].is_zero());
        multiplicities.insert(m, c);
    }
    Ok(EulerProduct { multiplicities })
}

/// `coeffs *= (1 - q^m)^power`, truncated to the current length.
fn multiply_by_power(coeffs: &mut [BigInt], m: u64, power: &BigInt) {
    if power.is_zero() || m == 0 {
        return;
    }
    let len = coeffs.len();
    let m = m as usize;
    let terms = (len - 1) / m;
    // g_j = (-1)^j C(power, j), from j C(p, j) = (p - j + 1) C(p, j - 1)
    let mut g = Vec::with_capacity(terms + 1);
    g.push(BigInt::one());
    for j in 1..=terms {
        let prev: &BigInt = &g[j - 1];
        let next = -(prev * (power - BigInt::from(j - 1))) / BigInt::from(j);
        g.push(next);
    }
    for n in (0..len).rev() {
        let mut acc = BigInt::zero();
        for (j, gj) in g.iter().enumerate() {
            let Some(src) = n.checked_sub(j * m) else { break };
            if !gj.is_zero() && !coeffs[src].is_zero() {
                acc += gj * &coeffs[src];
            }
        }
        coeffs[n] = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_series_has_empty_transform() {
        let e = infer_product_form(&TruncatedSeries::one(10), 10).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn roundtrip_two_three() {
        let f = ProductForm::pure_product(&[2, 3]).unwrap();
        let e = infer_product_form(&f.expand(10), 10).unwrap();
        assert_eq!(e.to_pairs().unwrap(), vec![(2, 1), (3, 1)]);
        assert_eq!(e.to_product_form().unwrap(), f);
    }

    #[test]
    fn negative_multiplicity() {
        // 1 + q = (1 - q^2) / (1 - q)
        let s = TruncatedSeries::from_univariate(&[BigInt::one(), BigInt::one(), 0.into(), 0.into(), 0.into()]);
        let e = infer_product_form(&s, 4).unwrap();
        assert_eq!(e.to_pairs().unwrap(), vec![(1, 1), (2, -1)]);
        assert_eq!(e.expand(4), s);
        assert!(e.to_product_form().is_none());
    }

    #[test]
    fn non_unit_rejected() {
        let s = TruncatedSeries::from_univariate(&[BigInt::from(2), BigInt::one()]);
        assert_eq!(infer_product_form(&s, 1), Err(GfError::NotUnitSeries(BigInt::from(2))));
    }

    #[test]
    fn display() {
        let e = EulerProduct::from_multiplicities([(3, 1), (1, 2), (5, -1)]);
        assert_eq!(e.to_string(), "1:2 3:1 5:-1");
    }
}
