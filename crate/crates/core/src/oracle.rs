//! Brute-force enumeration of constrained compositions.
//!
//! Parts are chosen from the last index down to the first, so every
//! constraint is fully determined by the time its own part is chosen. Nothing
//! here looks at `(I - A)^-1` or at any product formula.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{GfError, Result};
use crate::exactmat::ConstraintMatrix;
use crate::gfengine::{alpha_beta_matrix, EqualitySpec, RationalSystem};
use crate::series::{Exponent, ProductForm, TruncatedSeries};

/// The families the oracle can enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemKind {
    /// `λ_i ≥ Σ_{j>i} A[i,j] λ_j + d_i`, with equality for rows in `S`.
    IntegerMatrix {
        matrix: ConstraintMatrix,
        spec: EqualitySpec,
    },
    Rational(RationalSystem),
    /// `λ_1 ≥ l⌈kλ_2/(k-1)⌉ + (j-1)(λ_2 + λ_4 + ...) + (l-1)(λ_3 + λ_5 + ...)`
    /// and `λ_2/(k-1) ≥ λ_3/(k-2) ≥ ... ≥ λ_k/1`; `equality` makes the first
    /// constraint an equation.
    LectureHallVariant {
        k: usize,
        l: i64,
        j: i64,
        equality: bool,
    },
    /// `λ_i ≥ α(λ_{i+1} + λ_{i+3} + ...) - β(λ_{i+2} + λ_{i+4} + ...)`.
    AlphaBeta {
        alpha: i64,
        beta: i64,
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    kind: SystemKind,
}

impl ConstraintSystem {
    pub fn integer(matrix: ConstraintMatrix, spec: EqualitySpec) -> Result<Self> {
        spec.validate(matrix.k())?;
        Ok(Self {
            kind: SystemKind::IntegerMatrix { matrix, spec },
        })
    }

    pub fn matrix(matrix: ConstraintMatrix) -> Self {
        Self {
            kind: SystemKind::IntegerMatrix {
                matrix,
                spec: EqualitySpec::none(),
            },
        }
    }

    pub fn rational(sys: RationalSystem) -> Self {
        Self {
            kind: SystemKind::Rational(sys),
        }
    }

    pub fn lecture_hall_variant(k: usize, l: i64, j: i64, equality: bool) -> Result<Self> {
        crate::gfengine::gf_lecture_hall_variant(k, l, j)?;
        Ok(Self {
            kind: SystemKind::LectureHallVariant { k, l, j, equality },
        })
    }

    pub fn alpha_beta(alpha: i64, beta: i64, k: usize) -> Result<Self> {
        alpha_beta_matrix(alpha, beta, k)?;
        Ok(Self {
            kind: SystemKind::AlphaBeta { alpha, beta, k },
        })
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn k(&self) -> usize {
        match &self.kind {
            SystemKind::IntegerMatrix { matrix, .. } => matrix.k(),
            SystemKind::Rational(r) => r.k(),
            SystemKind::LectureHallVariant { k, .. } | SystemKind::AlphaBeta { k, .. } => *k,
        }
    }
}

/// `⌈p/q⌉` for `q > 0`.
fn ceil(p: i128, q: i128) -> i128 {
    -((-p).div_euclid(q))
}

/// Per-part lower bound given the parts after it, plus whether the bound is
/// forced as an equality.
enum Rules {
    Matrix {
        a: Vec<Vec<i128>>,
        equal: Vec<bool>,
        offset: Vec<i128>,
    },
    Rational {
        a: Vec<i128>,
        c: Vec<i128>,
    },
    Variant {
        k: i128,
        l: i128,
        j: i128,
        equality: bool,
    },
}

impl Rules {
    fn new(sys: &ConstraintSystem) -> Self {
        let matrix_rules = |m: &ConstraintMatrix, spec: &EqualitySpec| Rules::Matrix {
            a: m.rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| v.to_i128().expect("oracle needs matrix entries that fit in i128"))
                        .collect()
                })
                .collect(),
            equal: (0..m.k()).map(|i| spec.is_equal(i)).collect(),
            offset: (0..m.k()).map(|i| i128::from(spec.offset(i))).collect(),
        };
        match sys.kind() {
            SystemKind::IntegerMatrix { matrix, spec } => matrix_rules(matrix, spec),
            SystemKind::AlphaBeta { alpha, beta, k } => matrix_rules(
                &alpha_beta_matrix(*alpha, *beta, *k).expect("validated on construction"),
                &EqualitySpec::none(),
            ),
            SystemKind::Rational(r) => Rules::Rational {
                a: r.a().iter().map(|&x| i128::from(x)).collect(),
                c: r.c().iter().map(|&x| i128::from(x)).collect(),
            },
            SystemKind::LectureHallVariant { k, l, j, equality } => Rules::Variant {
                k: *k as i128,
                l: i128::from(*l),
                j: i128::from(*j),
                equality: *equality,
            },
        }
    }

    /// Bound for `lambda[i]`; `lambda[i+1..]` is already set.
    fn bound(&self, i: usize, lambda: &[i64]) -> (i128, bool) {
        let k = lambda.len();
        match self {
            Rules::Matrix { a, equal, offset } => {
                let rhs: i128 = (i + 1..k).map(|j| a[i][j] * i128::from(lambda[j])).sum();
                (rhs + offset[i], equal[i])
            }
            Rules::Rational { a, c } => {
                if i == 0 {
                    if k == 1 {
                        return (0, false);
                    }
                    let mut rhs = c[0] * ceil(a[0] * i128::from(lambda[1]), a[1]);
                    for t in 1..k {
                        rhs += c[t] * i128::from(lambda[t]);
                    }
                    (rhs, false)
                } else if i + 1 < k {
                    // λ_i a_{i+1} ≥ λ_{i+1} a_i
                    (ceil(i128::from(lambda[i + 1]) * a[i], a[i + 1]), false)
                } else {
                    (0, false)
                }
            }
            Rules::Variant { k: kk, l, j, equality } => {
                if i == 0 {
                    if k == 1 {
                        return (0, *equality);
                    }
                    let mut rhs = l * ceil(kk * i128::from(lambda[1]), kk - 1);
                    for (t, &v) in lambda.iter().enumerate().skip(1) {
                        // 0-based odd t is a 1-based even position
                        let coeff = if t % 2 == 1 { j - 1 } else { l - 1 };
                        rhs += coeff * i128::from(v);
                    }
                    (rhs, *equality)
                } else if i + 1 < k {
                    // 1-based: λ_p (k-p) ≥ λ_{p+1} (k-p+1) with p = i+1
                    let p = i as i128 + 1;
                    (ceil(i128::from(lambda[i + 1]) * (kk - p + 1), kk - p), false)
                } else {
                    (0, false)
                }
            }
        }
    }
}

/// Walks every admissible tail `λ_2..λ_k` of weight at most `n`, then calls
/// `leaf(lambda, lo, exact)` with the admissible range of `λ_1` starting at
/// `lo` (a single value if `exact`).
fn walk(sys: &ConstraintSystem, n: u64, leaf: &mut dyn FnMut(&[i64], i128, bool)) {
    fn go(rules: &Rules, i: usize, left: i128, lambda: &mut [i64], leaf: &mut dyn FnMut(&[i64], i128, bool)) {
        let (rhs, exact) = rules.bound(i, lambda);
        if i == 0 {
            if !(exact && rhs < 0) {
                leaf(lambda, rhs.max(0), exact);
            }
            return;
        }
        let (lo, hi) = if exact { (rhs, rhs) } else { (rhs.max(0), left) };
        if lo < 0 || lo > left {
            return;
        }
        for v in lo..=hi.min(left) {
            lambda[i] = v as i64;
            go(rules, i - 1, left - v, lambda, leaf);
        }
        lambda[i] = 0;
    }
    let rules = Rules::new(sys);
    let mut lambda = vec![0i64; sys.k()];
    let k = sys.k();
    go(&rules, k - 1, i128::from(n), &mut lambda, leaf);
}

fn weight(lambda: &[i64]) -> (i128, i128) {
    let mut w = (0, 0);
    for (t, &v) in lambda.iter().enumerate() {
        if t % 2 == 0 {
            w.0 += i128::from(v);
        } else {
            w.1 += i128::from(v);
        }
    }
    w
}

/// `counts[m]` is the number of admissible sequences of weight `m`, `m ≤ n`.
pub fn count_by_weight(sys: &ConstraintSystem, n: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n as usize + 1];
    let n = i128::from(n);
    walk(sys, n as u64, &mut |lambda, lo, exact| {
        // lambda[0] is still 0 here
        let (o, e) = weight(lambda);
        let base = o + e;
        let first = base + lo;
        let last = if exact { first } else { n };
        for m in first..=last.min(n) {
            counts[m as usize] += 1;
        }
    });
    counts
}

/// Counts keyed by (odd-position weight, even-position weight), total `≤ n`.
pub fn count_bivariate(sys: &ConstraintSystem, n: u64) -> BTreeMap<Exponent, u64> {
    let mut counts = BTreeMap::new();
    let n = i128::from(n);
    walk(sys, n as u64, &mut |lambda, lo, exact| {
        let (o, e) = weight(lambda);
        let last = if exact { lo } else { n - o - e };
        for v in lo..=last.min(n - o - e) {
            *counts.entry(((o + v) as u64, e as u64)).or_insert(0) += 1;
        }
    });
    counts
}

/// Every admissible sequence of weight at most `n`.
pub fn enumerate(sys: &ConstraintSystem, n: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let n = i128::from(n);
    walk(sys, n as u64, &mut |lambda, lo, exact| {
        let (o, e) = weight(lambda);
        let last = if exact { lo } else { n - o - e };
        for v in lo..=last.min(n - o - e) {
            let mut full = lambda.to_vec();
            full[0] = v as i64;
            out.push(full);
        }
    });
    out
}

/// Oracle counts as a univariate truncated series.
pub fn series_by_weight(sys: &ConstraintSystem, n: u64) -> TruncatedSeries {
    let coeffs: Vec<BigInt> = count_by_weight(sys, n).into_iter().map(BigInt::from).collect();
    TruncatedSeries::from_univariate(&coeffs)
}

/// Oracle counts as a bivariate truncated series in `(x, y)`.
pub fn series_bivariate(sys: &ConstraintSystem, n: u64) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(n);
    for (exp, c) in count_bivariate(sys, n) {
        s.add_to(exp, &BigInt::from(c));
    }
    s
}

/// First coefficient where a claimed form and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: Exponent,
    /// Oracle count.
    pub expected: BigInt,
    /// Coefficient of the expanded form.
    pub actual: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub bound: u64,
    pub bivariate: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Compares `form` with the oracle through weight `n`. Univariate forms are
/// checked against plain weight counts, bivariate forms against odd/even
/// counts.
pub fn verify(form: &ProductForm, sys: &ConstraintSystem, n: u64) -> VerifyReport {
    let bivariate = !form.is_univariate();
    let expected = if bivariate {
        series_bivariate(sys, n)
    } else {
        series_by_weight(sys, n)
    };
    compare(&expected, &form.expand(n), bivariate)
}

/// Earliest disagreement (by total degree, then descending `x`-degree).
pub fn compare(expected: &TruncatedSeries, actual: &TruncatedSeries, bivariate: bool) -> VerifyReport {
    let bound = expected.bound().min(actual.bound());
    for total in 0..=bound {
        for dx in (0..=total).rev() {
            let exp = (dx, total - dx);
            let (e, a) = (expected.coeff(exp), actual.coeff(exp));
            if e != a {
                return VerifyReport {
                    pass: false,
                    bound,
                    bivariate,
                    first_mismatch: Some(Mismatch {
                        exponent: exp,
                        expected: e,
                        actual: a,
                    }),
                };
            }
        }
    }
    VerifyReport {
        pass: true,
        bound,
        bivariate,
        first_mismatch: None,
    }
}

/// Convenience: an error if the report failed.
pub fn require(report: &VerifyReport) -> Result<()> {
    match &report.first_mismatch {
        None => Ok(()),
        Some(m) => Err(GfError::PreconditionViolated(format!(
            "coefficient of {:?} is {} but the oracle counts {}",
            m.exponent, m.actual, m.expected
        ))),
    }
}
