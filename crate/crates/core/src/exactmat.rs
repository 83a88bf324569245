//! Exact integer algebra for strictly upper-triangular constraint matrices.
//!
//! A [`ConstraintMatrix`] `A` encodes the system `λ_i >= Σ_{j>i} A[i,j] λ_j`.
//! Its unitriangular inverse `B = (I - A)^-1` is a [`UnitMatrix`], which also
//! carries the column sums `b` and their split over odd and even rows.
//!
//! Rust accessors take 0-based indices. Row `r` here is row `r + 1` in the
//! DSL and in printed output, so "odd rows" are the 0-based even indices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{GfError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl ConstraintMatrix {
    /// The `k x k` zero matrix: `k` unconstrained nonnegative parts.
    pub fn zero(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(GfError::EmptyDimension);
        }
        Ok(Self {
            entries: vec![vec![BigInt::zero(); k]; k],
        })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(GfError::EmptyDimension);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(GfError::LengthMismatch {
                    expected: k,
                    actual: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate().take(i + 1) {
                if !v.is_zero() {
                    return Err(GfError::NotTriangular {
                        row: i + 1,
                        col: j + 1,
                        reason: "constraint matrices are strictly upper triangular",
                    });
                }
            }
        }
        Ok(Self { entries: rows })
    }

    /// Builds a matrix from `f(i, j)` evaluated on the strict upper triangle
    /// (0-based, `i < j`). Everything else is zero.
    pub fn from_fn<T, F>(k: usize, mut f: F) -> Result<Self>
    where
        T: Into<BigInt>,
        F: FnMut(usize, usize) -> T,
    {
        let mut m = Self::zero(k)?;
        for i in 0..k {
            for j in i + 1..k {
                m.entries[i][j] = f(i, j).into();
            }
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Computes `B = I + A + A^2 + ... + A^(k-1)`, which equals `(I - A)^-1`
    /// because `A^k = 0`.
    pub fn nilpotent_inverse(&self) -> UnitMatrix {
        let k = self.k();
        let mut sum = identity(k);
        let mut power = identity(k);
        for _ in 1..k {
            power = mul_upper(&power, &self.entries);
            for i in 0..k {
                for j in i + 1..k {
                    sum[i][j] += &power[i][j];
                }
            }
        }
        UnitMatrix::from_trusted(sum)
    }

    /// Slack `s_i = λ_i - Σ_{j>i} A[i,j] λ_j` for every row.
    pub fn slacks(&self, lambda: &[BigInt]) -> Result<Vec<BigInt>> {
        let k = self.k();
        if lambda.len() != k {
            return Err(GfError::LengthMismatch {
                expected: k,
                actual: lambda.len(),
            });
        }
        Ok((0..k)
            .map(|i| {
                let rhs: BigInt = (i + 1..k).map(|j| &self.entries[i][j] * &lambda[j]).sum();
                &lambda[i] - rhs
            })
            .collect())
    }
}

/// Upper-triangular integer matrix with unit diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitMatrix {
    entries: Vec<Vec<BigInt>>,
    column_sums: Vec<BigInt>,
    odd_sums: Vec<BigInt>,
    even_sums: Vec<BigInt>,
}

impl UnitMatrix {
    pub fn identity(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(GfError::EmptyDimension);
        }
        Ok(Self::from_trusted(identity(k)))
    }

    /// Validates and wraps a unit upper-triangular matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(GfError::EmptyDimension);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(GfError::LengthMismatch {
                    expected: k,
                    actual: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate().take(i) {
                if !v.is_zero() {
                    return Err(GfError::NotTriangular {
                        row: i + 1,
                        col: j + 1,
                        reason: "unit matrices are upper triangular",
                    });
                }
            }
            if !row[i].is_one() {
                return Err(GfError::NotTriangular {
                    row: i + 1,
                    col: i + 1,
                    reason: "unit matrices have ones on the diagonal",
                });
            }
        }
        Ok(Self::from_trusted(rows))
    }

    fn from_trusted(entries: Vec<Vec<BigInt>>) -> Self {
        let k = entries.len();
        let mut column_sums = vec![BigInt::zero(); k];
        let mut odd_sums = vec![BigInt::zero(); k];
        let mut even_sums = vec![BigInt::zero(); k];
        for (row, values) in entries.iter().enumerate() {
            // 0-based even rows are the odd positions 1, 3, 5, ...
            let bucket = if row % 2 == 0 { &mut odd_sums } else { &mut even_sums };
            for (col, v) in values.iter().enumerate().skip(row) {
                bucket[col] += v;
                column_sums[col] += v;
            }
        }
        Self {
            entries,
            column_sums,
            odd_sums,
            even_sums,
        }
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// `b_i = Σ_j B[j,i]`.
    pub fn column_sums(&self) -> &[BigInt] {
        &self.column_sums
    }

    /// Column sums over rows 1, 3, 5, ... (1-based).
    pub fn odd_sums(&self) -> &[BigInt] {
        &self.odd_sums
    }

    /// Column sums over rows 2, 4, 6, ... (1-based).
    pub fn even_sums(&self) -> &[BigInt] {
        &self.even_sums
    }

    /// True iff every entry is `>= 0`, i.e. the family `P_A` consists of
    /// compositions.
    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    /// First negative entry in row-major order, 0-based.
    pub fn first_negative(&self) -> Option<(usize, usize, &BigInt)> {
        self.entries.iter().enumerate().find_map(|(i, row)| {
            row.iter()
                .enumerate()
                .skip(i + 1)
                .find(|(_, v)| v.is_negative())
                .map(|(j, v)| (i, j, v))
        })
    }

    /// Matrix-vector product `B s`.
    pub fn apply(&self, s: &[BigInt]) -> Result<Vec<BigInt>> {
        let k = self.k();
        if s.len() != k {
            return Err(GfError::LengthMismatch {
                expected: k,
                actual: s.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| (i..k).map(|j| &row[j] * &s[j]).sum())
            .collect())
    }

    /// The constraint matrix `A = I - B^-1` whose unitriangular inverse is `self`.
    ///
    /// With `B = I + N`, `B^-1 = Σ (-N)^m`, so `A = -Σ_{m>=1} (-N)^m`.
    pub fn constraint_matrix(&self) -> ConstraintMatrix {
        let k = self.k();
        let neg_strict: Vec<Vec<BigInt>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if j > i { -&self.entries[i][j] } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let mut inverse = ConstraintMatrix { entries: neg_strict }.nilpotent_inverse().entries;
        for (i, row) in inverse.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if j > i { -&*v } else { BigInt::zero() };
            }
        }
        ConstraintMatrix { entries: inverse }
    }
}

fn identity(k: usize) -> Vec<Vec<BigInt>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Product of two upper-triangular matrices.
fn mul_upper(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = x.len();
    let mut out = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for t in i..k {
            if x[i][t].is_zero() {
                continue;
            }
            for j in t..k {
                if !y[t][j].is_zero() {
                    out[i][j] += &x[i][t] * &y[t][j];
                }
            }
        }
    }
    out
}
