use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{ceil_div, positive_exponent};
use crate::error::{GfError, Result};
use crate::series::{Polynomial, ProductForm};

/// Largest number of `z`-tuples summed when building a numerator.
pub(crate) const MAX_Z_TUPLES: u64 = 10_000_000;

/// `λ_1 ≥ c_1⌈a_1 λ_2 / a_2⌉ + Σ_{i≥2} c_i λ_i` together with the chain
/// `λ_2/a_2 ≥ λ_3/a_3 ≥ ... ≥ λ_k/a_k ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSystem {
    a: Vec<u64>,
    c: Vec<i64>,
}

impl RationalSystem {
    pub fn new(a: Vec<u64>, c: Vec<i64>) -> Result<Self> {
        if a.is_empty() {
            return Err(GfError::EmptyDimension);
        }
        if c.len() != a.len() {
            return Err(GfError::LengthMismatch {
                expected: a.len(),
                actual: c.len(),
            });
        }
        if let Some(i) = a.iter().position(|&ai| ai == 0) {
            return Err(GfError::NonPositiveRatio { index: i + 1, value: 0 });
        }
        Ok(Self { a, c })
    }

    /// First-row coefficients `c = (1, 0, ..., 0)`.
    pub fn with_default_first_row(a: Vec<u64>) -> Result<Self> {
        let mut c = vec![0; a.len()];
        if let Some(c1) = c.first_mut() {
            *c1 = 1;
        }
        Self::new(a, c)
    }

    /// Builds `a` from the ratio chain `n_1/d_1, ..., n_{k-1}/d_{k-1}` via
    /// `a_i = Π_{j<i} d_j · Π_{t≥i} n_t`, divided by the common gcd.
    pub fn from_ratios(ratios: &[(u64, u64)], c: Option<Vec<i64>>) -> Result<Self> {
        for (i, &(n, d)) in ratios.iter().enumerate() {
            if n == 0 || d == 0 {
                return Err(GfError::NonPositiveRatio { index: i + 1, value: 0 });
            }
        }
        let k = ratios.len() + 1;
        let mut a: Vec<BigInt> = Vec::with_capacity(k);
        for i in 0..k {
            let left: BigInt = ratios[..i].iter().map(|&(_, d)| BigInt::from(d)).product();
            let right: BigInt = ratios[i..].iter().map(|&(n, _)| BigInt::from(n)).product();
            a.push(left * right);
        }
        let g = a.iter().fold(BigInt::from(0), |g, x| g.gcd(x));
        let a = a
            .into_iter()
            .map(|x| {
                let x = x / &g;
                u64::try_from(&x).map_err(|_| GfError::ExponentOverflow { value: x })
            })
            .collect::<Result<Vec<_>>>()?;
        match c {
            Some(c) => Self::new(a, c),
            None => Self::with_default_first_row(a),
        }
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn c(&self) -> &[i64] {
        &self.c
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn has_default_first_row(&self) -> bool {
        self.c.first() == Some(&1) && self.c[1..].iter().all(|&c| c == 0)
    }

    /// `b_1 = 1`, `b_i = c_1 a_1 + Σ_{t=2}^{i} (c_t + 1) a_t` for `i ≥ 2`.
    pub fn b_sequence(&self) -> Vec<i128> {
        let mut b = vec![1i128];
        let mut acc = i128::from(self.c[0]) * i128::from(self.a[0]);
        for t in 1..self.k() {
            acc += (i128::from(self.c[t]) + 1) * i128::from(self.a[t]);
            b.push(acc);
        }
        b
    }

    /// Right-hand side of the first constraint for a given tail `λ_2..λ_k`.
    pub fn first_rhs(&self, tail: &[i64]) -> i128 {
        let Some(&l2) = tail.first() else { return 0 };
        let a1 = i128::from(self.a[0]);
        let a2 = i128::from(self.a[1]);
        let mut rhs = i128::from(self.c[0]) * ceil_div(a1 * i128::from(l2), a2);
        for (ci, &li) in self.c[1..].iter().zip(tail) {
            rhs += i128::from(*ci) * i128::from(li);
        }
        rhs
    }

    fn denominator(&self) -> Result<Vec<u64>> {
        self.b_sequence()
            .iter()
            .enumerate()
            .map(|(i, &b)| positive_exponent(&BigInt::from(b), i + 1))
            .collect()
    }
}

/// Default tail weight explored by the first-part check.
pub(crate) fn guard_bound(sys: &RationalSystem) -> u64 {
    2 * sys.a.iter().copied().max().unwrap_or(1) * sys.k() as u64
}

/// Every tail `λ_2..λ_k` of the chain with weight at most `bound`.
fn for_each_tail(a: &[u64], bound: u64, f: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
    fn go(
        a: &[u64],
        pos: usize,
        left: u64,
        tail: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]) -> Result<()>,
    ) -> Result<()> {
        if pos == a.len() {
            // tail was filled from the last part backwards
            let ordered: Vec<i64> = tail.iter().rev().copied().collect();
            return f(&ordered);
        }
        // the part after this one (already placed) bounds it from below
        let lo = match tail.last() {
            Some(&next) => {
                let (ai, anext) = (u128::from(a[a.len() - pos - 1]), u128::from(a[a.len() - pos]));
                (next as u128 * ai).div_ceil(anext) as u64
            }
            None => 0,
        };
        for v in lo..=left {
            tail.push(v as i64);
            go(a, pos + 1, left - v, tail, f)?;
            tail.pop();
        }
        Ok(())
    }
    go(a, 0, bound, &mut Vec::new(), f)
}

/// Checks that the first constraint never allows a negative `λ_1` on tails
/// of weight up to `bound`.
pub(crate) fn check_first_part(sys: &RationalSystem, bound: u64) -> Result<()> {
    if sys.k() < 2 {
        return Ok(());
    }
    for_each_tail(&sys.a[1..], bound, &mut |tail| {
        let rhs = sys.first_rhs(tail);
        if rhs < 0 {
            return Err(GfError::FirstPartMayBeNegative {
                tail: tail.to_vec(),
                rhs,
            });
        }
        Ok(())
    })
}

/// Calls `f` on every `(z_2, ..., z_k)` with `0 ≤ z_i < a_i`.
pub(crate) fn for_each_z(a: &[u64], mut f: impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
    let tail = &a[1.min(a.len())..];
    let count: BigInt = tail.iter().map(|&x| BigInt::from(x)).product();
    if count > BigInt::from(MAX_Z_TUPLES) {
        return Err(GfError::TooMany {
            count,
            limit: MAX_Z_TUPLES,
        });
    }
    let mut z = vec![0u64; tail.len()];
    loop {
        f(&z)?;
        // odometer increment, last index fastest
        let mut i = z.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            z[i] += 1;
            if z[i] < tail[i] {
                break;
            }
            z[i] = 0;
        }
    }
}

/// `⌈z_{i+1}/a_{i+1} - z_i/a_i⌉`, which lies in `{0, 1}`.
pub(crate) fn step_ceiling(z_i: u64, a_i: u64, z_next: u64, a_next: u64) -> i128 {
    let num = i128::from(z_next) * i128::from(a_i) - i128::from(z_i) * i128::from(a_next);
    let s = ceil_div(num, i128::from(a_i) * i128::from(a_next));
    debug_assert!(s == 0 || s == 1);
    s
}

/// Generating function of a rational system, after checking empirically that
/// the first constraint keeps `λ_1` nonnegative.
pub fn gf_rational(sys: &RationalSystem) -> Result<ProductForm> {
    check_first_part(sys, guard_bound(sys))?;
    gf_rational_unchecked(sys)
}

/// As [`gf_rational`], without the first-part check.
pub fn gf_rational_unchecked(sys: &RationalSystem) -> Result<ProductForm> {
    let denominator = sys.denominator()?;
    let b = sys.b_sequence();
    let (a, c) = (&sys.a, &sys.c);
    let k = sys.k();
    let mut numerator = Polynomial::zero();
    for_each_z(a, |z| {
        // z[t] is z_{t+2}
        let mut e: i128 = 0;
        if k >= 2 {
            e += i128::from(c[0]) * ceil_div(i128::from(a[0]) * i128::from(z[0]), i128::from(a[1]));
        }
        for (t, &zt) in z.iter().enumerate() {
            e += (i128::from(c[t + 1]) + 1) * i128::from(zt);
        }
        for i in 1..k.saturating_sub(1) {
            e += b[i] * step_ceiling(z[i - 1], a[i], z[i], a[i + 1]);
        }
        let e = u64::try_from(e).map_err(|_| GfError::NegativeExponent { value: e })?;
        numerator.add_term((e, 0), BigInt::one());
        Ok(())
    })?;
    ProductForm::univariate(numerator, &denominator)
}

/// A set of consecutive part sizes of which at most one may be used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapRun {
    /// 1-based `i` of `S_i`.
    pub index: usize,
    pub parts: RangeInclusive<u64>,
}

/// Partition description of a chain whose large `a_i` are isolated: parts
/// from `{1, b_2, ..., b_k}` freely, plus at most one part from each run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingDescription {
    pub b: Vec<u64>,
    pub runs: Vec<GapRun>,
    pub form: ProductForm,
}

/// Chain `λ_1/a_1 ≥ ... ≥ λ_k/a_k` where `a_i > 1` forces `a_{i+1} = 1`.
pub fn gf_special_alternating(a: &[u64]) -> Result<AlternatingDescription> {
    if a.is_empty() {
        return Err(GfError::EmptyDimension);
    }
    if let Some(i) = a.iter().position(|&x| x == 0) {
        return Err(GfError::NonPositiveRatio { index: i + 1, value: 0 });
    }
    if let Some(i) = a.windows(2).position(|w| w[0] > 1 && w[1] > 1) {
        return Err(GfError::PreconditionViolated(format!(
            "a_{} = {} and a_{} = {} both exceed 1",
            i + 1,
            a[i],
            i + 2,
            a[i + 1]
        )));
    }
    let mut b = vec![1u64];
    if a.len() >= 2 {
        b.push(a[0] + a[1]);
    }
    for t in 2..a.len() {
        let next = b[t - 1] + a[t];
        b.push(next);
    }
    let mut runs = Vec::new();
    let mut numerator = Polynomial::one();
    for i in 0..a.len().saturating_sub(1) {
        if a[i + 1] > 1 {
            let parts = b[i] + 1..=b[i] + a[i + 1] - 1;
            let mut factor = Polynomial::one();
            for p in parts.clone() {
                factor.add_term((p, 0), BigInt::one());
            }
            numerator = &numerator * &factor;
            runs.push(GapRun { index: i + 1, parts });
        }
    }
    let form = ProductForm::univariate(numerator, &b)?;
    Ok(AlternatingDescription { b, runs, form })
}

/// `1/(1-q) · Π_{i=1}^{k-1} 1/(1 - q^{il + ij + l})`.
pub fn gf_lecture_hall_variant(k: usize, l: i64, j: i64) -> Result<ProductForm> {
    check_variant_parameters(k, l, j)?;
    let mut exps = vec![1u64];
    for i in 1..k as i64 {
        exps.push((i * l + i * j + l) as u64);
    }
    ProductForm::pure_product(&exps)
}

pub(crate) fn check_variant_parameters(k: usize, l: i64, j: i64) -> Result<()> {
    if k == 0 {
        return Err(GfError::EmptyDimension);
    }
    if l <= 0 {
        return Err(GfError::ParameterViolation(format!("l = {l} must be positive")));
    }
    if j < 2 - l {
        return Err(GfError::ParameterViolation(format!(
            "j = {j} must be at least 2 - l = {}",
            2 - l
        )));
    }
    Ok(())
}
