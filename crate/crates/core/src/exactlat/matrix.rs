use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigInt::zero())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("incompatible blocks".into()));
        }
        let (top, left) = (a.rows, a.cols);
        Ok(Self::from_fn(top + c.rows, left + b.cols, |i, j| {
            match (i < top, j < left) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - left).clone(),
                (false, true) => c.get(i - top, j).clone(),
                (false, false) => d.get(i - top, j - left).clone(),
            }
        }))
    }

    /// Block-diagonal sum of square blocks.
    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(dim, dim);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(BigInt::zero(), |acc, t| {
                acc + self.get(i, t) * other.get(t, j)
            })
        }))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} vs {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(BigInt::zero(), |acc, (i, x)| acc + x * self.get(i, j))
            })
            .collect())
    }

    pub fn left_mul_i64(&self, v: &[i64]) -> Result<Vec<BigInt>> {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.left_mul_vec(&v)
    }

    pub fn gram(&self) -> Self {
        Self::from_fn(self.rows, self.rows, |i, j| dot(self.row(i), self.row(j)))
    }

    /// Gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn rank(&self) -> usize {
        rational_echelon(&self.to_rational()).1.len()
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.rows()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.rows()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or(Error::Overflow("matrix entry exceeds i64"))
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact inverse as `(adj, den)` with `self^{-1} = adj / den`, `den > 0`
    /// minimal (the lcm of the entry denominators).
    pub fn inverse(&self) -> Result<(IntMatrix, BigInt)> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<BigRational>> = self
            .to_rational()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                r
            })
            .collect();
        let (_, pivots) = gauss_jordan(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let inv: Vec<Vec<BigRational>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(clear_denominators(&inv))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// A lattice basis: an integer matrix whose rows are linearly independent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntBasis(IntMatrix);

impl IntBasis {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() > m.ncols() || m.rank() != m.nrows() {
            return Err(Error::RankDeficient);
        }
        Ok(Self(m))
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self(IntMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    /// Number of basis vectors.
    pub fn rank(&self) -> usize {
        self.0.nrows()
    }

    /// Ambient dimension.
    pub fn ambient_dim(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.0.is_square()
    }
}

impl Deref for IntBasis {
    type Target = IntMatrix;
    fn deref(&self) -> &IntMatrix {
        &self.0
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// In-place Gauss–Jordan on the first `ncols` columns. Returns the rank and
/// the pivot column of each pivot row.
fn gauss_jordan(a: &mut [Vec<BigRational>], ncols: usize) -> (usize, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (r, pivots)
}

/// Row echelon form and pivot columns of a rational matrix.
pub(crate) fn rational_echelon(a: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m = a.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let (_, pivots) = gauss_jordan(&mut m, ncols);
    (m, pivots)
}

/// Solves `x · B = v` for `x` (B has independent rows). Returns `None` when
/// `v` is not in the row space.
pub(crate) fn solve_left(b: &IntMatrix, v: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    if v.len() != b.ncols() {
        return Err(Error::Dimension(format!(
            "vector of length {} vs {} columns",
            v.len(),
            b.ncols()
        )));
    }
    // Transpose system: B^T x^T = v^T, augmented with v.
    let k = b.nrows();
    let mut aug: Vec<Vec<BigRational>> = (0..b.ncols())
        .map(|j| {
            let mut row: Vec<BigRational> = (0..k)
                .map(|i| BigRational::from_integer(b.get(i, j).clone()))
                .collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let (rank, pivots) = gauss_jordan(&mut aug, k);
    if rank < k {
        return Err(Error::RankDeficient);
    }
    if aug[rank..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][k].clone();
    }
    Ok(Some(x))
}

/// Writes a rational matrix as `(num, den)` with `den > 0` the lcm of all
/// entry denominators.
pub(crate) fn clear_denominators(m: &[Vec<BigRational>]) -> (IntMatrix, BigInt) {
    let den = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let rows = m
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    (IntMatrix::from_rows(rows).expect("rectangular"), den.abs())
}
