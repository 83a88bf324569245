use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent pair `(dx, dy)` of a monomial `x^dx y^dy`.
pub type Exponent = (u64, u64);

/// Sparse bivariate polynomial with arbitrary-precision coefficients.
///
/// Univariate polynomials in `q` are stored with every `dy = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Exponent, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), BigInt::one())
    }

    pub fn monomial(exp: Exponent, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `q^n` as a univariate monomial.
    pub fn q_power(n: u64) -> Self {
        Self::monomial((n, 0), BigInt::one())
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from a list of exponents, each with coefficient 1
    /// (repeats accumulate).
    pub fn from_exponents<I: IntoIterator<Item = u64>>(exps: I) -> Self {
        Self::from_terms(exps.into_iter().map(|e| ((e, 0), BigInt::one())))
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: Exponent) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_univariate(&self) -> bool {
        self.terms.keys().all(|&(_, dy)| dy == 0)
    }

    /// Largest total degree `dx + dy` among stored terms.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|&(dx, dy)| dx + dy).max()
    }

    /// Coefficients of a univariate polynomial, index = exponent.
    pub fn univariate_coeffs(&self) -> Vec<BigInt> {
        let len = self.terms.keys().map(|&(dx, _)| dx + 1).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); len as usize];
        for (&(dx, dy), c) in &self.terms {
            debug_assert_eq!(dy, 0);
            out[dx as usize] += c;
        }
        out
    }

    /// Applies `f` to every exponent, merging collisions. `f` may fail.
    pub fn try_map_exponents<E, F>(&self, mut f: F) -> Result<Self, E>
    where
        F: FnMut(Exponent) -> Result<Exponent, E>,
    {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            out.add_term(f(e)?, c.clone());
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&(ax, ay), ac) in &self.terms {
            for (&(bx, by), bc) in &rhs.terms {
                out.add_term((ax + bx, ay + by), ac * bc);
            }
        }
        out
    }
}

/// Writes one monomial. With `univariate`, only the `q` power is shown.
pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, (dx, dy): Exponent, univariate: bool) -> fmt::Result {
    if univariate {
        return write!(f, "q^{dx}");
    }
    match (dx, dy) {
        (0, 0) => write!(f, "1"),
        (dx, 0) => write!(f, "x^{dx}"),
        (0, dy) => write!(f, "y^{dy}"),
        (dx, dy) => write!(f, "x^{dx}*y^{dy}"),
    }
}

impl Polynomial {
    pub(crate) fn fmt_with(&self, f: &mut fmt::Formatter<'_>, univariate: bool) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded order: total degree, then x-degree
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(dx, dy), _)| (dx + dy, dx));
        for (n, (&exp, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mag = c.abs();
            if exp == (0, 0) {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(f, exp, univariate)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, self.is_univariate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = Polynomial::q_power(3);
        p.add_term((3, 0), BigInt::from(-1));
        assert!(p.is_empty());
        assert_eq!(p, Polynomial::zero());
    }

    #[test]
    fn product_of_numerator_factors() {
        let a = Polynomial::from_exponents([0, 3, 6]);
        let b = Polynomial::from_exponents([0, 5]);
        assert_eq!(&a * &b, Polynomial::from_exponents([0, 3, 5, 8, 11, 6]));
    }

    #[test]
    fn display() {
        let p = Polynomial::from_exponents([0, 3, 5]);
        assert_eq!(p.to_string(), "1 + q^3 + q^5");
        let mut b = Polynomial::monomial((2, 1), BigInt::from(-2));
        b.add_term((0, 0), BigInt::one());
        b.add_term((0, 1), BigInt::one());
        assert_eq!(b.to_string(), "1 + y^1 - 2*x^2*y^1");
    }
}
