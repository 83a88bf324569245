//! Product generating functions for families of compositions.
//!
//! Integer constraint matrices give `Π 1/(1 - q^{b_i})` with `b` the column
//! sums of `(I - A)^-1`; equalities drop factors and offsets shift the
//! numerator. Rational ratio chains give a finite numerator over the same
//! kind of product. Two-variable versions track the odd-position and
//! even-position weights separately with `x` and `y`.

mod integer;
mod rational;
mod two_variable;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{GfError, Result};
use crate::oracle::{ConstraintSystem, SystemKind};
use crate::series::ProductForm;

pub use integer::{first_row_matrix, gf_first_row, gf_integer, theta_inverse, theta_map};
pub use rational::{
    gf_lecture_hall_variant, gf_rational, gf_rational_unchecked, gf_special_alternating, AlternatingDescription,
    GapRun, RationalSystem,
};
pub use two_variable::{
    alpha_beta_factors, alpha_beta_matrix, gf_alpha_beta, gf_lecture_hall_variant_two_variable, gf_prepend_constraint,
    gf_two_variable, gf_two_variable_rational, gf_two_variable_with,
};

/// Which constraints hold with equality, and the additive offsets `d_i`.
///
/// Indices are 0-based here; the DSL spells them 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EqualitySpec {
    equal: BTreeSet<usize>,
    offsets: Vec<u64>,
}

impl EqualitySpec {
    /// No equalities, no offsets.
    pub fn none() -> Self {
        Self::default()
    }

    /// `offsets` may be empty (all zero) or have one entry per part.
    pub fn new<I: IntoIterator<Item = usize>>(equal: I, offsets: Vec<u64>) -> Self {
        Self {
            equal: equal.into_iter().collect(),
            offsets,
        }
    }

    pub fn equal(&self) -> &BTreeSet<usize> {
        &self.equal
    }

    pub fn is_equal(&self, i: usize) -> bool {
        self.equal.contains(&i)
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn offset(&self, i: usize) -> u64 {
        self.offsets.get(i).copied().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.equal.is_empty() && self.offsets.iter().all(|&d| d == 0)
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if let Some(&i) = self.equal.iter().find(|&&i| i >= k) {
            return Err(GfError::PreconditionViolated(format!(
                "equality index {} exceeds k = {k}",
                i + 1
            )));
        }
        if !self.offsets.is_empty() && self.offsets.len() != k {
            return Err(GfError::LengthMismatch {
                expected: k,
                actual: self.offsets.len(),
            });
        }
        Ok(())
    }
}

/// Converts a positive exponent to `u64`; `index` is 1-based for messages.
pub(crate) fn positive_exponent(value: &BigInt, index: usize) -> Result<u64> {
    if value.sign() != num_bigint::Sign::Plus {
        return Err(GfError::DegenerateFactor {
            index,
            value: value.clone(),
        });
    }
    value
        .to_u64()
        .ok_or_else(|| GfError::ExponentOverflow { value: value.clone() })
}

pub(crate) fn nonnegative_exponent(value: &BigInt) -> Result<u64> {
    value.to_u64().ok_or_else(|| match value.sign() {
        num_bigint::Sign::Minus => GfError::NegativeExponent {
            value: value.to_i128().unwrap_or(i128::MIN),
        },
        _ => GfError::ExponentOverflow { value: value.clone() },
    })
}

/// `⌈p / q⌉` for `q > 0`, exact.
pub(crate) fn ceil_div(p: i128, q: i128) -> i128 {
    debug_assert!(q > 0);
    -((-p).div_euclid(q))
}

/// The univariate generating function of any supported system.
///
/// `guard` enables the empirical first-part check for rational systems.
pub fn gf_for_system(sys: &ConstraintSystem, guard: bool) -> Result<ProductForm> {
    match sys.kind() {
        SystemKind::IntegerMatrix { matrix, spec } => gf_integer(matrix, spec),
        SystemKind::Rational(r) if guard => gf_rational(r),
        SystemKind::Rational(r) => gf_rational_unchecked(r),
        SystemKind::LectureHallVariant { k, l, j, equality } => {
            let f = gf_lecture_hall_variant(*k, *l, *j)?;
            if *equality {
                Ok(f.without_factor((1, 0)).expect("variant always has a 1/(1-q) factor"))
            } else {
                Ok(f)
            }
        }
        SystemKind::AlphaBeta { alpha, beta, k } => Ok(gf_alpha_beta(*alpha, *beta, *k)?.specialize_diagonal()),
    }
}

/// The odd/even two-variable generating function, where one is available.
pub fn gf2_for_system(sys: &ConstraintSystem) -> Result<ProductForm> {
    match sys.kind() {
        SystemKind::IntegerMatrix { matrix, spec } => gf_two_variable_with(matrix, spec),
        SystemKind::Rational(r) => {
            if !r.has_default_first_row() {
                return Err(GfError::PreconditionViolated(
                    "two-variable form needs first-row coefficients 1 0 ... 0".into(),
                ));
            }
            gf_two_variable_rational(r.a())
        }
        SystemKind::LectureHallVariant { k, l, j, equality } => {
            let f = gf_lecture_hall_variant_two_variable(*k, *l, *j)?;
            if *equality {
                Ok(f.without_factor((1, 0)).expect("variant always has a 1/(1-x) factor"))
            } else {
                Ok(f)
            }
        }
        SystemKind::AlphaBeta { alpha, beta, k } => gf_alpha_beta(*alpha, *beta, *k),
    }
}

/// Denominator exponent sequence `b` in part order (not sorted), as printed
/// by the CLI.
pub fn b_sequence(sys: &ConstraintSystem) -> Result<Vec<BigInt>> {
    match sys.kind() {
        SystemKind::IntegerMatrix { matrix, .. } => Ok(matrix.nilpotent_inverse().column_sums().to_vec()),
        SystemKind::Rational(r) => Ok(r.b_sequence().into_iter().map(BigInt::from).collect()),
        SystemKind::LectureHallVariant { k, l, j, .. } => {
            let mut b = vec![BigInt::from(1)];
            for i in 1..*k as i64 {
                b.push(BigInt::from(i * l + i * j + l));
            }
            Ok(b)
        }
        SystemKind::AlphaBeta { alpha, beta, k } => Ok(alpha_beta_factors(*alpha, *beta, *k)?
            .iter()
            .map(|&(o, e)| BigInt::from(o + e))
            .collect()),
    }
}
