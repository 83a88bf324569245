//! Constraint matrices realizing a prescribed product `Π 1/(1 - q^{c_i})`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{GfError, Result};
use crate::exactmat::{ConstraintMatrix, UnitMatrix};

/// Cap on the number of matrices [`enumerate_matrices`] will list.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub matrix: ConstraintMatrix,
    /// Row 1 must hold with equality; set when a free part of size 1 was
    /// prepended because `c_1 > 1`.
    pub equality_first: bool,
}

/// Builds `A` with `A[i,i+1] = 1` for `i ≥ 2`, `A[1,2] = c_2 - 1` and
/// `A[1,j] = c_j - c_{j-1} - 1`, whose column sums of `(I - A)^-1` are `c`.
///
/// If `c_1 > 1` the matrix is built for `(1, c_1, ..., c_k)` and the first
/// row is meant to hold with equality, which removes the extra factor.
pub fn matrix_from_sequence(c: &[u64]) -> Result<Construction> {
    if c.is_empty() {
        return Err(GfError::EmptyDimension);
    }
    if let Some(i) = c.iter().position(|&x| x == 0) {
        return Err(GfError::InfeasibleSequence {
            index: i + 1,
            value: 0,
            bound: 1,
        });
    }
    let equality_first = c[0] > 1;
    let seq: Vec<u64> = if equality_first {
        std::iter::once(1).chain(c.iter().copied()).collect()
    } else {
        c.to_vec()
    };
    let shift = usize::from(equality_first);
    for (i, &ci) in seq.iter().enumerate() {
        let bound = i as u64;
        if ci < bound {
            return Err(GfError::InfeasibleSequence {
                index: i + 1 - shift,
                value: ci,
                bound,
            });
        }
    }
    let matrix = ConstraintMatrix::from_fn(seq.len(), |i, j| -> BigInt {
        match (i, j) {
            (0, 1) => BigInt::from(seq[1]) - 1,
            (0, _) => BigInt::from(seq[j]) - BigInt::from(seq[j - 1]) - 1,
            _ if j == i + 1 => BigInt::one(),
            _ => BigInt::zero(),
        }
    })?;
    Ok(Construction { matrix, equality_first })
}

fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for t in 0..r {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

fn require_unit_first(c: &[u64]) -> Result<()> {
    match c.first() {
        Some(1) => Ok(()),
        Some(&c1) => Err(GfError::PreconditionViolated(format!("c_1 = {c1}, expected 1"))),
        None => Err(GfError::EmptyDimension),
    }
}

/// `Π_{i=2}^{k} C(c_i - 1, i - 2)`, with `C(n, r) = 0` for `r > n`.
pub fn count_matrices_formula(c: &[u64]) -> Result<BigInt> {
    require_unit_first(c)?;
    Ok(c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| binomial(ci.saturating_sub(1), i as u64 - 1))
        .product())
}

/// Number of weak compositions of `total` into `parts` parts.
fn weak_compositions_count(total: u64, parts: u64) -> BigInt {
    if parts == 0 {
        return if total == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binomial(total + parts - 1, parts - 1)
}

/// Weak compositions of `total` into `parts` parts, lexicographically.
fn weak_compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    fn go(left: u64, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(left - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Every unit upper-triangular nonnegative integer matrix whose column sums
/// are `c`, in lexicographic order column by column.
pub fn enumerate_matrices(c: &[u64]) -> Result<Vec<UnitMatrix>> {
    require_unit_first(c)?;
    if c.contains(&0) {
        return Ok(Vec::new());
    }
    let k = c.len();
    let count: BigInt = (1..k).map(|j| weak_compositions_count(c[j] - 1, j as u64)).product();
    if count > BigInt::from(ENUMERATION_LIMIT) {
        return Err(GfError::TooMany {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let columns: Vec<Vec<Vec<u64>>> = (1..k).map(|j| weak_compositions(c[j] - 1, j)).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; columns.len()];
    loop {
        let mut rows = vec![vec![BigInt::zero(); k]; k];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        for (col_idx, &pick) in choice.iter().enumerate() {
            let j = col_idx + 1;
            for (i, &v) in columns[col_idx][pick].iter().enumerate() {
                rows[i][j] = BigInt::from(v);
            }
        }
        out.push(UnitMatrix::from_rows(rows)?);
        // odometer with the last column fastest, so earlier columns lead the order
        let mut t = choice.len();
        loop {
            if t == 0 {
                return Ok(out);
            }
            t -= 1;
            choice[t] += 1;
            if choice[t] < columns[t].len() {
                break;
            }
            choice[t] = 0;
        }
    }
}
