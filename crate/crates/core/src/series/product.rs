use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::poly::{fmt_monomial, Exponent, Polynomial};
use super::truncated::TruncatedSeries;
use crate::error::{GfError, Result};

/// Rational generating function `numerator * Π 1/(1 - x^o y^e)`.
///
/// The denominator is a multiset of exponent pairs, kept sorted. A
/// univariate form in `q` has every `e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductForm {
    numerator: Polynomial,
    factors: Vec<Exponent>,
}

/// Monomial substitution `x -> x^a y^b`, `y -> x^c y^d`.
///
/// A factor exponent `(o, e)` maps to `(a·o + c·e, b·o + d·e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub x_to: (i64, i64),
    pub y_to: (i64, i64),
}

impl MonomialMap {
    pub const IDENTITY: Self = Self {
        x_to: (1, 0),
        y_to: (0, 1),
    };

    /// The 2x2 matrix `[[a, c], [b, d]]` acting on column vectors `(o, e)`.
    pub fn from_matrix(m: [[i64; 2]; 2]) -> Self {
        Self {
            x_to: (m[0][0], m[1][0]),
            y_to: (m[0][1], m[1][1]),
        }
    }

    pub fn apply(&self, (o, e): Exponent) -> (i128, i128) {
        let (o, e) = (i128::from(o), i128::from(e));
        (
            i128::from(self.x_to.0) * o + i128::from(self.y_to.0) * e,
            i128::from(self.x_to.1) * o + i128::from(self.y_to.1) * e,
        )
    }
}

impl ProductForm {
    pub fn new(numerator: Polynomial, mut factors: Vec<Exponent>) -> Result<Self> {
        if let Some(index) = factors.iter().position(|&f| f == (0, 0)) {
            return Err(GfError::DegenerateFactor {
                index: index + 1,
                value: BigInt::from(0),
            });
        }
        factors.sort_unstable();
        Ok(Self { numerator, factors })
    }

    /// `Π 1/(1 - q^b)` over the given exponents.
    pub fn univariate(numerator: Polynomial, exponents: &[u64]) -> Result<Self> {
        Self::new(numerator, exponents.iter().map(|&b| (b, 0)).collect())
    }

    pub fn pure_product(exponents: &[u64]) -> Result<Self> {
        Self::univariate(Polynomial::one(), exponents)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    /// Sorted denominator multiset.
    pub fn factors(&self) -> &[Exponent] {
        &self.factors
    }

    /// Denominator as `(o, e) -> multiplicity`.
    pub fn factor_multiset(&self) -> BTreeMap<Exponent, usize> {
        let mut m = BTreeMap::new();
        for &f in &self.factors {
            *m.entry(f).or_insert(0) += 1;
        }
        m
    }

    /// Sorted `q`-exponents of the denominator; `None` if any factor involves `y`.
    pub fn univariate_exponents(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(|&(o, e)| (e == 0).then_some(o)).collect()
    }

    pub fn is_univariate(&self) -> bool {
        self.numerator.is_univariate() && self.factors.iter().all(|&(_, e)| e == 0)
    }

    /// Multiplies in another `1/(1 - x^o y^e)` factor.
    pub fn with_factor(mut self, factor: Exponent) -> Result<Self> {
        if factor == (0, 0) {
            return Err(GfError::DegenerateFactor {
                index: self.factors.len() + 1,
                value: BigInt::from(0),
            });
        }
        let at = self.factors.partition_point(|&f| f < factor);
        self.factors.insert(at, factor);
        Ok(self)
    }

    /// Removes one copy of `factor` from the denominator, if present.
    pub fn without_factor(mut self, factor: Exponent) -> Option<Self> {
        let at = self.factors.iter().position(|&f| f == factor)?;
        self.factors.remove(at);
        Some(self)
    }

    /// Coefficients of `numerator × Π Σ_m x^{mo} y^{me}` up to total degree `bound`.
    pub fn expand(&self, bound: u64) -> TruncatedSeries {
        let mut s = TruncatedSeries::from_polynomial(&self.numerator, bound);
        for &f in &self.factors {
            s.divide_by_factor(f);
        }
        s
    }

    /// Applies a monomial substitution to the numerator and every factor.
    ///
    /// With `divide_by_one_minus_x`, an extra `1/(1 - x)` factor is appended
    /// afterwards (the "prepend a free part" step). Negative or `(0, 0)`
    /// factor exponents are rejected.
    pub fn substitute_monomial(&self, map: MonomialMap, divide_by_one_minus_x: bool) -> Result<Self> {
        let to_exponent = |exp: Exponent| -> Result<Exponent> {
            let (no, ne) = map.apply(exp);
            match (u64::try_from(no), u64::try_from(ne)) {
                (Ok(a), Ok(b)) => Ok((a, b)),
                _ => Err(GfError::InvalidSubstitution {
                    o: exp.0,
                    e: exp.1,
                    new_o: no,
                    new_e: ne,
                }),
            }
        };
        let numerator = self.numerator.try_map_exponents(to_exponent)?;
        let mut factors = Vec::with_capacity(self.factors.len() + 1);
        for &f in &self.factors {
            let g = to_exponent(f)?;
            if g == (0, 0) {
                let (no, ne) = map.apply(f);
                return Err(GfError::InvalidSubstitution {
                    o: f.0,
                    e: f.1,
                    new_o: no,
                    new_e: ne,
                });
            }
            factors.push(g);
        }
        if divide_by_one_minus_x {
            factors.push((1, 0));
        }
        Self::new(numerator, factors)
    }

    /// Sets `y := x`: `(o, e) -> (o + e, 0)`.
    pub fn specialize_diagonal(&self) -> Self {
        let numerator = self
            .numerator
            .try_map_exponents::<(), _>(|(dx, dy)| Ok((dx + dy, 0)))
            .expect("infallible");
        let factors = self.factors.iter().map(|&(o, e)| (o + e, 0)).collect();
        Self::new(numerator, factors).expect("(0,0) factors are never stored")
    }
}

impl fmt::Display for ProductForm {
    /// `<numerator> / [(1-q^1)(1-q^3)...]`; bivariate forms use `x` and `y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let univariate = self.is_univariate();
        if self.numerator.len() > 1 {
            write!(f, "(")?;
            self.numerator.fmt_with(f, univariate)?;
            write!(f, ")")?;
        } else {
            self.numerator.fmt_with(f, univariate)?;
        }
        write!(f, " / [")?;
        for &factor in &self.factors {
            write!(f, "(1-")?;
            fmt_monomial(f, factor, univariate)?;
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn uni(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expand_tetrahedral_product() {
        let f = ProductForm::pure_product(&[1, 3, 6, 10]).unwrap();
        assert_eq!(f.expand(6).univariate_coeffs(), uni(&[1, 1, 1, 2, 2, 2, 4]));
    }

    #[test]
    fn expand_constant_form() {
        let f = ProductForm::pure_product(&[]).unwrap();
        assert_eq!(f.expand(5).univariate_coeffs(), uni(&[1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn expand_odd_parts() {
        let f = ProductForm::pure_product(&[1, 3, 5]).unwrap();
        assert_eq!(f.expand(5).univariate_coeffs(), uni(&[1, 1, 1, 2, 2, 3]));
    }

    #[test]
    fn substitution_examples() {
        let f = ProductForm::new(Polynomial::one(), vec![(1, 0), (1, 1)]).unwrap();
        // alpha = 1, beta = -1: x -> x y, y -> x^2
        let map = MonomialMap {
            x_to: (1, 1),
            y_to: (2, 0),
        };
        let g = f.substitute_monomial(map, false).unwrap();
        assert_eq!(g.factors(), &[(1, 1), (3, 1)]);
        assert_eq!(f.substitute_monomial(MonomialMap::IDENTITY, false).unwrap(), f);

        let h = ProductForm::new(Polynomial::one(), vec![(2, 1), (3, 2), (4, 3)]).unwrap();
        assert_eq!(h.substitute_monomial(MonomialMap::IDENTITY, false).unwrap(), h);
        assert_eq!(
            f.substitute_monomial(map, true).unwrap().factors(),
            &[(1, 0), (1, 1), (3, 1)]
        );
    }

    #[test]
    fn substitution_rejects_negative_exponents() {
        let f = ProductForm::new(Polynomial::one(), vec![(1, 1)]).unwrap();
        let map = MonomialMap {
            x_to: (2, 1),
            y_to: (-3, 0),
        };
        assert_eq!(
            f.substitute_monomial(map, false),
            Err(GfError::InvalidSubstitution {
                o: 1,
                e: 1,
                new_o: -1,
                new_e: 1
            })
        );
    }

    #[test]
    fn matrix_constructor_orientation() {
        let map = MonomialMap::from_matrix([[1, 2], [1, 0]]);
        assert_eq!(map.apply((1, 1)), (3, 1));
    }

    #[test]
    fn diagonal_specialization() {
        let f = ProductForm::new(Polynomial::one(), vec![(1, 0), (1, 1), (3, 1)]).unwrap();
        assert_eq!(f.specialize_diagonal(), ProductForm::pure_product(&[1, 2, 4]).unwrap());
        let odd = ProductForm::new(Polynomial::one(), vec![(1, 0), (2, 1), (3, 2), (4, 3)]).unwrap();
        assert_eq!(
            odd.specialize_diagonal().univariate_exponents().unwrap(),
            vec![1, 3, 5, 7]
        );
        let c = ProductForm::pure_product(&[]).unwrap();
        assert_eq!(c.specialize_diagonal(), c);
    }

    #[test]
    fn repeated_factors_are_kept() {
        let f = ProductForm::pure_product(&[2, 2, 4, 4]).unwrap();
        assert_eq!(f.factor_multiset().get(&(2, 0)), Some(&2));
        assert_eq!(f.expand(4).univariate_coeffs(), uni(&[1, 0, 2, 0, 5]));
    }

    #[test]
    fn rendering() {
        let f = ProductForm::univariate(Polynomial::from_exponents([0, 3, 6]), &[10, 1, 7]).unwrap();
        assert_eq!(f.to_string(), "(1 + q^3 + q^6) / [(1-q^1)(1-q^7)(1-q^10)]");
        let g = ProductForm::new(Polynomial::monomial((1, 0), BigInt::one()), vec![(1, 1)]).unwrap();
        assert_eq!(g.to_string(), "x^1 / [(1-x^1*y^1)]");
        assert_eq!(ProductForm::pure_product(&[]).unwrap().to_string(), "1 / []");
    }

    #[test]
    fn zero_factor_rejected() {
        assert!(matches!(
            ProductForm::new(Polynomial::one(), vec![(1, 0), (0, 0)]),
            Err(GfError::DegenerateFactor { index: 2, .. })
        ));
    }
}
