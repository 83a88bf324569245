use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{nonnegative_exponent, positive_exponent, EqualitySpec};
use crate::error::{GfError, Result};
use crate::exactmat::{ConstraintMatrix, UnitMatrix};
use crate::series::{Polynomial, ProductForm};

/// `B = (I - A)^-1`, rejecting families that contain non-compositions.
pub(crate) fn nonnegative_inverse(a: &ConstraintMatrix) -> Result<UnitMatrix> {
    let b = a.nilpotent_inverse();
    if let Some((row, col, value)) = b.first_negative() {
        return Err(GfError::CompositionConditionViolated {
            row: row + 1,
            col: col + 1,
            value: value.clone(),
        });
    }
    Ok(b)
}

/// Generating function of the compositions satisfying `λ ≥ Aλ + d`, with
/// equality on the rows in `spec`:
/// `q^{Σ d_i b_i} / Π_{i ∉ S} (1 - q^{b_i})`.
pub fn gf_integer(a: &ConstraintMatrix, spec: &EqualitySpec) -> Result<ProductForm> {
    spec.validate(a.k())?;
    let b = nonnegative_inverse(a)?;
    let sums = b.column_sums();
    let mut exponents = Vec::with_capacity(a.k());
    for (i, bi) in sums.iter().enumerate() {
        if !spec.is_equal(i) {
            exponents.push(positive_exponent(bi, i + 1)?);
        }
    }
    let shift: BigInt = sums.iter().enumerate().map(|(i, bi)| bi * spec.offset(i)).sum();
    let numerator = Polynomial::q_power(nonnegative_exponent(&shift)?);
    ProductForm::univariate(numerator, &exponents)
}

/// The bijection `λ ↦ (b_1 s_1, ..., b_k s_k)` onto sequences whose `i`-th
/// entry is a nonnegative multiple of `b_i`. Weight is preserved.
pub fn theta_map(a: &ConstraintMatrix, lambda: &[BigInt]) -> Result<Vec<BigInt>> {
    let slacks = a.slacks(lambda)?;
    if let Some((i, s)) = slacks.iter().enumerate().find(|(_, s)| s.is_negative()) {
        return Err(GfError::NotInFamily {
            index: i + 1,
            slack: s.clone(),
        });
    }
    let b = a.nilpotent_inverse();
    Ok(slacks.iter().zip(b.column_sums()).map(|(s, bi)| s * bi).collect())
}

/// Inverse of [`theta_map`]: `s_i = r_i / b_i`, then `λ = B s`.
pub fn theta_inverse(a: &ConstraintMatrix, parts: &[BigInt]) -> Result<Vec<BigInt>> {
    let b = a.nilpotent_inverse();
    if parts.len() != a.k() {
        return Err(GfError::LengthMismatch {
            expected: a.k(),
            actual: parts.len(),
        });
    }
    let mut slacks = Vec::with_capacity(parts.len());
    for (i, (r, bi)) in parts.iter().zip(b.column_sums()).enumerate() {
        let not_multiple = || GfError::NotMultiple {
            index: i + 1,
            part: r.clone(),
            modulus: bi.clone(),
        };
        if r.is_negative() || !bi.is_positive() {
            return Err(not_multiple());
        }
        let (q, rem) = r.div_rem(bi);
        if !rem.is_zero() {
            return Err(not_multiple());
        }
        slacks.push(q);
    }
    b.apply(&slacks)
}

/// Constraint matrix of `λ_1 ≥ Σ a_i λ_{i+1}` and `λ_i ≥ λ_{i+1}` for `i ≥ 2`.
pub fn first_row_matrix(a: &[i64]) -> ConstraintMatrix {
    ConstraintMatrix::from_fn(a.len() + 1, |i, j| match i {
        0 => a[j - 1],
        _ if j == i + 1 => 1,
        _ => 0,
    })
    .expect("dimension is at least 1")
}

/// `1/(1-q) · Π_{i=1}^{k-1} 1/(1 - q^{i + a_1 + ... + a_i})` for the system of
/// [`first_row_matrix`].
///
/// The partial sums `a_1 + ... + a_i` are the first row of `B`, so a negative
/// partial sum means the family is not a set of compositions.
pub fn gf_first_row(a: &[i64]) -> Result<ProductForm> {
    let mut exponents = vec![1u64];
    let mut partial: i128 = 0;
    for (i, &ai) in a.iter().enumerate() {
        partial += i128::from(ai);
        if partial < 0 {
            return Err(GfError::CompositionConditionViolated {
                row: 1,
                col: i + 2,
                value: BigInt::from(partial),
            });
        }
        let exp = BigInt::from(i as i128 + 1 + partial);
        exponents.push(positive_exponent(&exp, i + 2)?);
    }
    ProductForm::pure_product(&exponents)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn tetrahedral() -> ConstraintMatrix {
        ConstraintMatrix::from_rows(vec![
            ints(&[0, 2, -1, 0]),
            ints(&[0, 0, 2, -1]),
            ints(&[0, 0, 0, 2]),
            ints(&[0, 0, 0, 0]),
        ])
        .unwrap()
    }

    fn geometric(r: i64, k: usize) -> ConstraintMatrix {
        ConstraintMatrix::from_fn(k, |i, j| if j == i + 1 { r } else { 0 }).unwrap()
    }

    #[test]
    fn tetrahedral_product() {
        let f = gf_integer(&tetrahedral(), &EqualitySpec::none()).unwrap();
        assert_eq!(f, ProductForm::pure_product(&[1, 3, 6, 10]).unwrap());
    }

    #[test]
    fn geometric_ratio_product() {
        let f = gf_integer(&geometric(2, 3), &EqualitySpec::none()).unwrap();
        assert_eq!(f.univariate_exponents().unwrap(), vec![1, 3, 7]);
    }

    #[test]
    fn odd_parts_encoding_with_offsets() {
        // λ1 = λ2 + 1, λ2 ≥ λ4, λ3 = λ4 + 1
        let a = ConstraintMatrix::from_fn(4, |i, j| i64::from(matches!((i, j), (0, 1) | (1, 3) | (2, 3)))).unwrap();
        let spec = EqualitySpec::new([0, 2], vec![1, 0, 1, 0]);
        let f = gf_integer(&a, &spec).unwrap();
        assert_eq!(f.numerator(), &Polynomial::q_power(2));
        assert_eq!(f.univariate_exponents().unwrap(), vec![2, 4]);
    }

    #[test]
    fn equalities_drop_factors() {
        // λ1 = Σ_{i≥2} λi, λ2 = Σ_{i≥3} λi, λi ≥ λ_{i+1} otherwise
        let a = ConstraintMatrix::from_fn(4, |i, j| i64::from(i <= 1 || j == i + 1)).unwrap();
        assert_eq!(a.nilpotent_inverse().column_sums(), ints(&[1, 2, 4, 8]).as_slice());
        let f = gf_integer(&a, &EqualitySpec::new([0, 1], vec![])).unwrap();
        assert_eq!(f.univariate_exponents().unwrap(), vec![4, 8]);
    }

    #[test]
    fn negative_inverse_rejected() {
        let a = ConstraintMatrix::from_fn(2, |_, _| -1).unwrap();
        assert!(matches!(
            gf_integer(&a, &EqualitySpec::none()),
            Err(GfError::CompositionConditionViolated { row: 1, col: 2, .. })
        ));
    }

    #[test]
    fn theta_examples() {
        let a = tetrahedral();
        assert_eq!(theta_map(&a, &ints(&[4, 3, 2, 1])).unwrap(), ints(&[0, 0, 0, 10]));
        assert_eq!(theta_inverse(&a, &ints(&[0, 0, 0, 10])).unwrap(), ints(&[4, 3, 2, 1]));
        assert_eq!(theta_map(&a, &ints(&[0; 4])).unwrap(), ints(&[0; 4]));
        assert_eq!(theta_inverse(&a, &ints(&[0; 4])).unwrap(), ints(&[0; 4]));

        let g = geometric(2, 2);
        assert_eq!(theta_map(&g, &ints(&[5, 2])).unwrap(), ints(&[1, 6]));
        assert_eq!(theta_inverse(&g, &ints(&[1, 6])).unwrap(), ints(&[5, 2]));
    }

    #[test]
    fn theta_errors() {
        let g = geometric(2, 2);
        assert_eq!(
            theta_map(&g, &ints(&[3, 2])),
            Err(GfError::NotInFamily {
                index: 1,
                slack: BigInt::from(-1)
            })
        );
        assert!(matches!(
            theta_inverse(&g, &ints(&[1, 4])),
            Err(GfError::NotMultiple { index: 2, .. })
        ));
        assert!(matches!(
            theta_inverse(&g, &ints(&[-1, 3])),
            Err(GfError::NotMultiple { index: 1, .. })
        ));
    }

    #[test]
    fn first_row_examples() {
        // a = (2, 1, 1): odd parts 1, 3, 5, 7
        assert_eq!(
            gf_first_row(&[2, 1, 1]).unwrap().univariate_exponents().unwrap(),
            vec![1, 3, 5, 7]
        );
        // a = (1, 0, 0): λ1 ≥ λ2 ≥ λ3 ≥ λ4
        assert_eq!(
            gf_first_row(&[1, 0, 0]).unwrap().univariate_exponents().unwrap(),
            vec![1, 2, 3, 4]
        );
        // a = (1, 1, 1): λ1 ≥ λ2 + λ3 + λ4
        assert_eq!(
            gf_first_row(&[1, 1, 1]).unwrap().univariate_exponents().unwrap(),
            vec![1, 2, 4, 6]
        );
        // λ1 ≥ λ2 - λ3 + λ4 - λ5: doubled even parts plus the free 1/(1-q)
        assert_eq!(
            gf_first_row(&[1, -1, 1, -1]).unwrap().univariate_exponents().unwrap(),
            vec![1, 2, 2, 4, 4]
        );
        assert!(matches!(
            gf_first_row(&[1, -2]),
            Err(GfError::CompositionConditionViolated { row: 1, col: 3, .. })
        ));
    }

    #[test]
    fn first_row_matches_matrix_route() {
        for a in [vec![2, 1, 1], vec![0, 0, 3], vec![1, -1, 1, -1], vec![]] {
            let m = first_row_matrix(&a);
            assert_eq!(
                gf_first_row(&a).unwrap(),
                gf_integer(&m, &EqualitySpec::none()).unwrap(),
                "a = {a:?}"
            );
        }
    }
}
