use gfkit::cli::{parse_system, render_system};
use gfkit::construct::{enumerate_matrices, matrix_from_sequence};
use gfkit::exactmat::ConstraintMatrix;
use gfkit::gfengine::{
    first_row_matrix, gf_alpha_beta, gf_first_row, gf_integer, gf_prepend_constraint, gf_rational, gf_two_variable,
    gf_two_variable_rational, gf_two_variable_with, theta_inverse, theta_map, EqualitySpec, RationalSystem,
};
use gfkit::oracle::{compare, count_bivariate, count_by_weight, enumerate, verify, ConstraintSystem};
use gfkit::series::ProductForm;
use num_bigint::BigInt;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    }
}

fn upper_triangle(k: usize, entries: &[i64]) -> ConstraintMatrix {
    let mut it = entries.iter().copied();
    ConstraintMatrix::from_fn(k, |_, _| it.next().unwrap()).unwrap()
}

/// Strictly upper triangular matrices with entries in [-2, 3] whose
/// `(I - A)^-1` is nonnegative.
fn composition_matrix() -> impl Strategy<Value = ConstraintMatrix> {
    (1usize..=5)
        .prop_flat_map(|k| (Just(k), prop::collection::vec(-2i64..=3, k * (k - 1) / 2)))
        .prop_map(|(k, e)| upper_triangle(k, &e))
        .prop_filter("inverse has a negative entry", |a| {
            a.nilpotent_inverse().is_nonnegative()
        })
}

fn with_spec() -> impl Strategy<Value = (ConstraintMatrix, EqualitySpec)> {
    composition_matrix().prop_flat_map(|a| {
        let k = a.k();
        (
            Just(a),
            prop::collection::vec(any::<bool>(), k),
            prop::collection::vec(0u64..=2, k),
        )
            .prop_map(|(a, eq, d)| {
                let equal: Vec<usize> = eq.iter().enumerate().filter(|(_, &e)| e).map(|(i, _)| i).collect();
                (a, EqualitySpec::new(equal, d))
            })
    })
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn product_form_agrees_with_oracle((a, spec) in with_spec()) {
        let form = gf_integer(&a, &spec).unwrap();
        let sys = ConstraintSystem::integer(a, spec).unwrap();
        let report = verify(&form, &sys, 15);
        prop_assert!(report.pass, "{:?}", report.first_mismatch);
    }

    #[test]
    fn theta_round_trip(a in composition_matrix()) {
        let b = a.nilpotent_inverse().column_sums().to_vec();
        for lambda in enumerate(&ConstraintSystem::matrix(a.clone()), 12) {
            let lambda = ints(&lambda);
            let image = theta_map(&a, &lambda).unwrap();
            let weight: BigInt = lambda.iter().sum();
            prop_assert_eq!(image.iter().sum::<BigInt>(), weight);
            for (r, bi) in image.iter().zip(&b) {
                prop_assert_eq!(r % bi, BigInt::from(0));
            }
            prop_assert_eq!(theta_inverse(&a, &image).unwrap(), lambda);
        }
    }

    #[test]
    fn first_row_closed_form_matches_matrix(first in prop::collection::vec(-2i64..=3, 0..6)) {
        let m = first_row_matrix(&first);
        match gf_first_row(&first) {
            Ok(f) => prop_assert_eq!(f, gf_integer(&m, &EqualitySpec::none()).unwrap()),
            Err(_) => prop_assert!(gf_integer(&m, &EqualitySpec::none()).is_err()),
        }
    }

    #[test]
    fn two_variable_form_specializes_to_univariate((a, spec) in with_spec()) {
        let two = gf_two_variable_with(&a, &spec).unwrap();
        prop_assert_eq!(two.specialize_diagonal(), gf_integer(&a, &spec).unwrap());
    }

    #[test]
    fn two_variable_form_agrees_with_oracle(a in composition_matrix()) {
        let form = gf_two_variable(&a).unwrap();
        let report = verify(&form, &ConstraintSystem::matrix(a), 12);
        prop_assert!(report.pass, "{:?}", report.first_mismatch);
    }

    #[test]
    fn bivariate_counts_marginalize_to_weights(a in composition_matrix()) {
        let sys = ConstraintSystem::matrix(a);
        let mut marginal = vec![0u64; 13];
        for ((dx, dy), c) in count_bivariate(&sys, 12) {
            marginal[(dx + dy) as usize] += c;
        }
        prop_assert_eq!(marginal, count_by_weight(&sys, 12));
    }

    #[test]
    fn verification_is_prefix_monotone(a in composition_matrix(), m in 0u64..=15, bump in 0usize..4) {
        let form = gf_integer(&a, &EqualitySpec::none()).unwrap();
        let sys = ConstraintSystem::matrix(a);
        prop_assert_eq!(form.expand(15).truncate(m), form.expand(m));
        // perturbing one exponent can only break agreement from some degree on
        let mut exps = form.univariate_exponents().unwrap();
        let idx = bump % exps.len();
        exps[idx] += 1;
        let wrong = ProductForm::pure_product(&exps).unwrap();
        let full = verify(&wrong, &sys, 15);
        let prefix = verify(&wrong, &sys, m);
        if full.pass {
            prop_assert!(prefix.pass);
        }
        if !prefix.pass {
            prop_assert_eq!(prefix.first_mismatch, full.first_mismatch);
        }
    }

    #[test]
    fn dsl_round_trip((a, spec) in with_spec()) {
        let sys = ConstraintSystem::integer(a, spec).unwrap();
        let text = render_system(&sys);
        let parsed = parse_system(&text).unwrap();
        prop_assert_eq!(parsed.system, sys);
    }

    #[test]
    fn construction_realizes_its_sequence(
        first in 1u64..=3,
        steps in prop::collection::vec(0u64..=3, 0..4),
    ) {
        let mut c = vec![first];
        for s in steps {
            let next = c.len() as u64 + s;
            c.push(next.max(c.len() as u64 + 1));
        }
        let built = matrix_from_sequence(&c).unwrap();
        let spec = if built.equality_first { EqualitySpec::new([0], vec![]) } else { EqualitySpec::none() };
        let form = gf_integer(&built.matrix, &spec).unwrap();
        prop_assert_eq!(&form, &ProductForm::pure_product(&c).unwrap());
        let report = verify(&form, &ConstraintSystem::integer(built.matrix, spec).unwrap(), 15);
        prop_assert!(report.pass, "{:?}", report.first_mismatch);
    }

    #[test]
    fn enumerated_matrices_have_prescribed_sums(tail in prop::collection::vec(1u64..=4, 0..3)) {
        let mut c = vec![1u64];
        c.extend(tail);
        for m in enumerate_matrices(&c).unwrap() {
            prop_assert_eq!(m.column_sums().to_vec(), c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
            prop_assert_eq!(m.constraint_matrix().nilpotent_inverse(), m);
        }
    }

    #[test]
    fn prepending_extends_alpha_beta(alpha in 1i64..=3, gap in 0i64..=4, k in 1usize..=5) {
        let beta = alpha - gap;
        let g = gf_alpha_beta(alpha, beta, k).unwrap();
        prop_assert_eq!(gf_prepend_constraint(&g, alpha, beta).unwrap().with_factor((1, 0)).unwrap(),
            gf_alpha_beta(alpha, beta, k + 1).unwrap());
    }

    #[test]
    fn rational_chain_agrees_with_oracle(a in prop::collection::vec(1u64..=4, 1..=4)) {
        let sys = RationalSystem::with_default_first_row(a.clone()).unwrap();
        let form = gf_rational(&sys).unwrap();
        let oracle_sys = ConstraintSystem::rational(sys);
        let report = verify(&form, &oracle_sys, 15);
        prop_assert!(report.pass, "{:?}", report.first_mismatch);
        let two = gf_two_variable_rational(&a).unwrap();
        let report = verify(&two, &oracle_sys, 12);
        prop_assert!(report.pass, "{:?}", report.first_mismatch);
        prop_assert_eq!(two.expand(15).diagonal_coeffs(), form.expand(15).univariate_coeffs());
    }
}

#[test]
fn compare_reports_earliest_difference() {
    let a = ProductForm::pure_product(&[1, 2]).unwrap().expand(10);
    let b = ProductForm::pure_product(&[1, 3]).unwrap().expand(10);
    let r = compare(&a, &b, false);
    assert!(!r.pass);
    let m = r.first_mismatch.unwrap();
    assert_eq!(m.exponent, (2, 0));
    assert_eq!((m.expected, m.actual), (BigInt::from(2), BigInt::from(1)));
}
