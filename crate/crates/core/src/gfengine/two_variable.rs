use num_bigint::BigInt;
use num_traits::One;

use super::integer::nonnegative_inverse;
use super::rational::{check_variant_parameters, for_each_z, step_ceiling};
use super::{ceil_div, nonnegative_exponent, EqualitySpec};
use crate::error::{GfError, Result};
use crate::exactmat::ConstraintMatrix;
use crate::series::{Exponent, MonomialMap, Polynomial, ProductForm};

/// `Π 1/(1 - x^{o_i} y^{e_i})`, with `x` marking parts at odd positions and
/// `y` parts at even positions.
pub fn gf_two_variable(a: &ConstraintMatrix) -> Result<ProductForm> {
    gf_two_variable_with(a, &EqualitySpec::none())
}

/// Two-variable form with equalities and offsets.
pub fn gf_two_variable_with(a: &ConstraintMatrix, spec: &EqualitySpec) -> Result<ProductForm> {
    spec.validate(a.k())?;
    let b = nonnegative_inverse(a)?;
    let (odd, even) = (b.odd_sums(), b.even_sums());
    let mut factors = Vec::with_capacity(a.k());
    let (mut sx, mut sy) = (BigInt::from(0), BigInt::from(0));
    for i in 0..a.k() {
        let o = nonnegative_exponent(&odd[i])?;
        let e = nonnegative_exponent(&even[i])?;
        if !spec.is_equal(i) {
            factors.push((o, e));
        }
        sx += &odd[i] * spec.offset(i);
        sy += &even[i] * spec.offset(i);
    }
    let numerator = Polynomial::monomial((nonnegative_exponent(&sx)?, nonnegative_exponent(&sy)?), BigInt::one());
    ProductForm::new(numerator, factors)
}

fn check_alpha_beta(alpha: i64, beta: i64) -> Result<()> {
    if alpha < 1 {
        return Err(GfError::ParameterViolation(format!(
            "alpha = {alpha} must be at least 1"
        )));
    }
    if beta > alpha {
        return Err(GfError::ParameterViolation(format!(
            "beta = {beta} must not exceed alpha = {alpha}"
        )));
    }
    Ok(())
}

/// `(o_i, e_i)` in part order for the alternating `α`/`-β` system.
pub fn alpha_beta_factors(alpha: i64, beta: i64, k: usize) -> Result<Vec<Exponent>> {
    check_alpha_beta(alpha, beta)?;
    if k == 0 {
        return Err(GfError::EmptyDimension);
    }
    let mut o: Vec<i128> = vec![1, i128::from(alpha)];
    while o.len() < k {
        let n = o.len();
        o.push(i128::from(alpha) * o[n - 1] + (1 - i128::from(beta)) * o[n - 2]);
    }
    o.truncate(k);
    let to_u64 = |v: i128| u64::try_from(v).map_err(|_| GfError::ExponentOverflow { value: BigInt::from(v) });
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let e = if i == 0 { 0 } else { o[i - 1] };
        out.push((to_u64(o[i])?, to_u64(e)?));
    }
    Ok(out)
}

/// `λ_i ≥ α(λ_{i+1} + λ_{i+3} + ...) - β(λ_{i+2} + λ_{i+4} + ...)`.
pub fn gf_alpha_beta(alpha: i64, beta: i64, k: usize) -> Result<ProductForm> {
    ProductForm::new(Polynomial::one(), alpha_beta_factors(alpha, beta, k)?)
}

pub fn alpha_beta_matrix(alpha: i64, beta: i64, k: usize) -> Result<ConstraintMatrix> {
    check_alpha_beta(alpha, beta)?;
    ConstraintMatrix::from_fn(k, |i, j| if (j - i) % 2 == 1 { alpha } else { -beta })
}

/// Generating function after prepending a part
/// `λ_0 = α(λ_1 + λ_3 + ...) - β(λ_2 + λ_4 + ...)`: `G(x^α y, x^{1-β})`.
pub fn gf_prepend_constraint(g: &ProductForm, alpha: i64, beta: i64) -> Result<ProductForm> {
    check_alpha_beta(alpha, beta)?;
    let map = MonomialMap {
        x_to: (alpha, 1),
        y_to: (1 - beta, 0),
    };
    g.substitute_monomial(map, false)
}

/// `o_1 = 1`, `e_1 = 0`; for `i ≥ 2`, `o_i = a_1 + Σ_{t odd, 3 ≤ t ≤ i} a_t`
/// and `e_i = Σ_{t even, t ≤ i} a_t` (1-based `t`).
pub(crate) fn rational_parity_exponents(a: &[u64]) -> Vec<Exponent> {
    let mut out = vec![(1, 0)];
    let (mut o, mut e) = (a[0], 0);
    for (t, &at) in a.iter().enumerate().skip(1) {
        if t % 2 == 1 {
            e += at;
        } else {
            o += at;
        }
        out.push((o, e));
    }
    out
}

/// Odd/even generating function of `λ_1/a_1 ≥ λ_2/a_2 ≥ ... ≥ λ_k/a_k ≥ 0`.
pub fn gf_two_variable_rational(a: &[u64]) -> Result<ProductForm> {
    if a.is_empty() {
        return Err(GfError::EmptyDimension);
    }
    if let Some(i) = a.iter().position(|&x| x == 0) {
        return Err(GfError::NonPositiveRatio { index: i + 1, value: 0 });
    }
    let oe = rational_parity_exponents(a);
    let k = a.len();
    let mut numerator = Polynomial::zero();
    for_each_z(a, |z| {
        // z[t] is z_{t+2}
        let (mut dx, mut dy): (i128, i128) = (0, 0);
        if k >= 2 {
            dx += ceil_div(i128::from(a[0]) * i128::from(z[0]), i128::from(a[1]));
        }
        for (t, &zt) in z.iter().enumerate() {
            if t % 2 == 0 {
                dy += i128::from(zt);
            } else {
                dx += i128::from(zt);
            }
        }
        for i in 1..k.saturating_sub(1) {
            let s = step_ceiling(z[i - 1], a[i], z[i], a[i + 1]);
            dx += s * i128::from(oe[i].0);
            dy += s * i128::from(oe[i].1);
        }
        numerator.add_term((dx as u64, dy as u64), BigInt::one());
        Ok(())
    })?;
    ProductForm::new(numerator, oe)
}

/// `1/(1-x) · Π_{i=1}^{k-1} 1/(1 - x^{l(i+1) + (j-1)i} y^i)`.
pub fn gf_lecture_hall_variant_two_variable(k: usize, l: i64, j: i64) -> Result<ProductForm> {
    check_variant_parameters(k, l, j)?;
    let mut factors = vec![(1u64, 0u64)];
    for i in 1..k as i64 {
        factors.push(((l * (i + 1) + (j - 1) * i) as u64, i as u64));
    }
    ProductForm::new(Polynomial::one(), factors)
}
