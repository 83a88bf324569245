use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Exponent, Polynomial};

/// Bivariate power series truncated at total degree `dx + dy <= bound`.
///
/// Coefficients are kept in a dense triangle; `rows[dx][dy]` holds the
/// coefficient of `x^dx y^dy`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    bound: u64,
    rows: Vec<Vec<BigInt>>,
}

impl TruncatedSeries {
    pub fn zero(bound: u64) -> Self {
        let rows = (0..=bound)
            .map(|dx| vec![BigInt::zero(); (bound - dx + 1) as usize])
            .collect();
        Self { bound, rows }
    }

    pub fn one(bound: u64) -> Self {
        let mut s = Self::zero(bound);
        s.rows[0][0] = BigInt::one();
        s
    }

    /// Drops every term above the bound.
    pub fn from_polynomial(p: &Polynomial, bound: u64) -> Self {
        let mut s = Self::zero(bound);
        for (&(dx, dy), c) in p.terms() {
            if dx + dy <= bound {
                s.rows[dx as usize][dy as usize] += c;
            }
        }
        s
    }

    /// Univariate series from coefficients of `q^0, q^1, ...`; the bound is
    /// `coeffs.len() - 1`.
    pub fn from_univariate(coeffs: &[BigInt]) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        let mut s = Self::zero(coeffs.len() as u64 - 1);
        for (dx, c) in coeffs.iter().enumerate() {
            s.rows[dx][0] = c.clone();
        }
        s
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn coeff(&self, (dx, dy): Exponent) -> BigInt {
        if dx + dy > self.bound {
            return BigInt::zero();
        }
        self.rows[dx as usize][dy as usize].clone()
    }

    pub fn coeff_ref(&self, (dx, dy): Exponent) -> &BigInt {
        &self.rows[dx as usize][dy as usize]
    }

    /// Adds `c` to the coefficient of `exp`; terms past the bound are ignored.
    pub fn add_to(&mut self, (dx, dy): Exponent, c: &BigInt) {
        if dx + dy <= self.bound {
            self.rows[dx as usize][dy as usize] += c;
        }
    }

    /// Nonzero terms in graded order (total degree, then x-degree).
    pub fn nonzero_terms(&self) -> Vec<(Exponent, &BigInt)> {
        let mut out = Vec::new();
        for total in 0..=self.bound {
            for dx in (0..=total).rev() {
                let c = &self.rows[dx as usize][(total - dx) as usize];
                if !c.is_zero() {
                    out.push(((dx, total - dx), c));
                }
            }
        }
        out
    }

    pub fn is_univariate(&self) -> bool {
        self.rows.iter().all(|row| row[1..].iter().all(Zero::is_zero))
    }

    /// Coefficients of `x^0 .. x^bound` with `y`-degree zero.
    pub fn univariate_coeffs(&self) -> Vec<BigInt> {
        self.rows.iter().map(|row| row[0].clone()).collect()
    }

    /// Total-degree marginal: entry `n` sums all coefficients with `dx+dy = n`.
    pub fn diagonal_coeffs(&self) -> Vec<BigInt> {
        (0..=self.bound)
            .map(|n| (0..=n).map(|dx| &self.rows[dx as usize][(n - dx) as usize]).sum())
            .collect()
    }

    pub fn truncate(&self, bound: u64) -> Self {
        let bound = bound.min(self.bound);
        let rows = (0..=bound)
            .map(|dx| self.rows[dx as usize][..(bound - dx + 1) as usize].to_vec())
            .collect();
        Self { bound, rows }
    }

    /// Multiplies in place by `1 / (1 - x^o y^e)`.
    pub fn divide_by_factor(&mut self, (o, e): Exponent) {
        assert!((o, e) != (0, 0), "1/(1 - 1) is not a power series");
        let bound = self.bound;
        // Lexicographic sweep: (dx - o, dy - e) is always visited before (dx, dy).
        for dx in o..=bound {
            for dy in e..=(bound - dx) {
                let prev = self.rows[(dx - o) as usize][(dy - e) as usize].clone();
                if !prev.is_zero() {
                    self.rows[dx as usize][dy as usize] += prev;
                }
            }
        }
    }

    /// Multiplies in place by `1 - x^o y^e`.
    pub fn multiply_by_factor(&mut self, (o, e): Exponent) {
        let bound = self.bound;
        if o + e > bound {
            return;
        }
        for dx in (o..=bound).rev() {
            for dy in (e..=(bound - dx)).rev() {
                let prev = self.rows[(dx - o) as usize][(dy - e) as usize].clone();
                if !prev.is_zero() {
                    self.rows[dx as usize][dy as usize] -= prev;
                }
            }
        }
    }

    /// Truncated product; the result bound is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = self.bound.min(other.bound);
        let mut out = Self::zero(bound);
        let rhs = other.nonzero_terms();
        for ((ax, ay), ac) in self.truncate(bound).nonzero_terms() {
            for &((bx, by), bc) in &rhs {
                if ax + ay + bx + by <= bound {
                    out.rows[(ax + bx) as usize][(ay + by) as usize] += ac * bc;
                }
            }
        }
        out
    }
}
