//! Semi-tensor product core.
//!
//! The semi-tensor product (STP) of `A ∈ R^{m×n}` and `B ∈ R^{p×q}` is
//!
//! ```text
//! A ⋉ B = (A ⊗ I_{s/n}) · (B ⊗ I_{s/p}),    s = lcm(n, p),
//! ```
//!
//! which coincides with the ordinary matrix product when `n = p`. Boolean
//! network work stays inside the *logical matrices* — matrices whose every
//! column is a column of an identity matrix — which this module represents
//! in split form: `δ_n[i_1 i_2 … i_s]` stores only the 1-based column
//! indices `i_k`. Products of logical operands reduce to pure index
//! arithmetic and never materialize dense data; a dense integer matrix type
//! is provided as an exact cross-checking oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the rows and columns of any product result.
///
/// Guards against accidental dimension blow-ups (STP result sizes grow with
/// `lcm`); the `*_capped` function variants accept an explicit cap instead.
pub const DEFAULT_DIM_CAP: usize = 1 << 20;

fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: usize, b: usize) -> Result<usize> {
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow)
}

fn checked_dims(rows: usize, cols: usize, cap: usize) -> Result<()> {
    if rows > cap || cols > cap {
        Err(Error::DimensionCap { rows, cols, cap })
    } else {
        Ok(())
    }
}

/// Canonical basis vector `δ_n^i`: the `i`-th column of `I_n` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaVector {
    dim: usize,
    index: usize,
}

impl DeltaVector {
    /// Builds `δ_dim^index`; `index` must lie in `1..=dim`.
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                context: "delta vector dimension",
                expected: 1,
                found: 0,
            });
        }
        if index == 0 || index > dim {
            return Err(Error::IndexOutOfRange {
                context: "delta vector index",
                index,
                bound: dim,
            });
        }
        Ok(Self { dim, index })
    }

    /// Dimension `n` of `δ_n^i`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-based position `i` of the single 1 entry.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Kronecker (equivalently semi-tensor) product of two basis vectors:
    /// `δ_a^i ⊗ δ_b^j = δ_{ab}^{(i-1)·b + j}`.
    pub fn kron(&self, other: &DeltaVector) -> Result<DeltaVector> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .ok_or(Error::Overflow)?;
        DeltaVector::new(dim, (self.index - 1) * other.dim + other.index)
    }
}

/// Logical matrix `δ_rows[i_1 i_2 … i_cols]` in split form.
///
/// Every column is a column of `I_rows`; only the 1-based column indices are
/// stored. This is the only representation used on hot paths — products of
/// logical matrices are computed by index arithmetic alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalMatrix {
    rows: usize,
    col_indices: Vec<usize>,
}

impl LogicalMatrix {
    /// Builds `δ_rows[col_indices…]`; every index must lie in `1..=rows`.
    pub fn new(rows: usize, col_indices: Vec<usize>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::DimensionMismatch {
                context: "logical matrix rows",
                expected: 1,
                found: 0,
            });
        }
        for &c in &col_indices {
            if c == 0 || c > rows {
                return Err(Error::IndexOutOfRange {
                    context: "logical matrix column index",
                    index: c,
                    bound: rows,
                });
            }
        }
        Ok(Self { rows, col_indices })
    }

    /// The identity `I_n = δ_n[1 2 … n]`.
    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            col_indices: (1..=n).collect(),
        }
    }

    /// A basis vector viewed as a one-column logical matrix.
    pub fn from_delta(x: &DeltaVector) -> Self {
        Self {
            rows: x.dim(),
            col_indices: vec![x.index()],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.col_indices.len()
    }

    /// Split-form column indices (entry `j-1` is the 1-based row of the 1 in
    /// column `j`).
    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// 1-based row index of the 1 entry in (1-based) column `j`.
    pub fn col(&self, j: usize) -> Result<usize> {
        self.col_indices
            .get(j.wrapping_sub(1))
            .copied()
            .ok_or(Error::IndexOutOfRange {
                context: "logical matrix column",
                index: j,
                bound: self.cols(),
            })
    }

    /// Ordinary product with a basis vector (column selection):
    /// `M · δ_cols^j = δ_rows^{i_j}`. Requires `cols == x.dim()`.
    pub fn apply(&self, x: &DeltaVector) -> Result<DeltaVector> {
        if self.cols() != x.dim() {
            return Err(Error::DimensionMismatch {
                context: "logical matrix application",
                expected: self.cols(),
                found: x.dim(),
            });
        }
        DeltaVector::new(self.rows, self.col_indices[x.index() - 1])
    }

    /// True when the matrix is square with each row hit exactly once.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols() {
            return false;
        }
        let mut seen = vec![false; self.rows];
        for &c in &self.col_indices {
            if seen[c - 1] {
                return false;
            }
            seen[c - 1] = true;
        }
        true
    }

    /// Expands to a dense 0/1 matrix (oracle and display use only).
    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols());
        for (j, &i) in self.col_indices.iter().enumerate() {
            d.set(i - 1, j, 1);
        }
        d
    }
}

/// Split-form index row of a logical matrix: `index_row(δ_n[i_1 … i_s]) =
/// [i_1, …, i_s]`.
pub fn index_row(m: &LogicalMatrix) -> Vec<usize> {
    m.col_indices().to_vec()
}

/// Dense row-major integer matrix with exact arithmetic.
///
/// Serves as the independent oracle for the logical fast paths; nothing in
/// the identification pipeline stores dense data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data; `data.len()` must equal
    /// `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "dense matrix data length",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n, n);
        for i in 0..n {
            d.set(i, i, 1);
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based element access.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    /// 0-based element assignment.
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    /// Exact matrix product; errors on inner-dimension mismatch or overflow.
    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "dense matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let p = a.checked_mul(b).ok_or(Error::Overflow)?;
                    let s = out.get(i, j).checked_add(p).ok_or(Error::Overflow)?;
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    /// Exact Kronecker product.
    pub fn kron(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(Error::Overflow)?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(Error::Overflow)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a == 0 {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        let b = other.get(ib, jb);
                        if b == 0 {
                            continue;
                        }
                        let p = a.checked_mul(b).ok_or(Error::Overflow)?;
                        out.set(ia * other.rows + ib, ja * other.cols + jb, p);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Either representation, for the general product entry points.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Logical(LogicalMatrix),
    Dense(DenseMatrix),
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Logical(m) => m.rows(),
            Matrix::Dense(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Logical(m) => m.cols(),
            Matrix::Dense(m) => m.cols(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Logical(m) => m.to_dense(),
            Matrix::Dense(m) => m.clone(),
        }
    }
}

impl From<LogicalMatrix> for Matrix {
    fn from(m: LogicalMatrix) -> Self {
        Matrix::Logical(m)
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(m: DenseMatrix) -> Self {
        Matrix::Dense(m)
    }
}

impl From<DeltaVector> for Matrix {
    fn from(x: DeltaVector) -> Self {
        Matrix::Logical(LogicalMatrix::from_delta(&x))
    }
}

/// Semi-tensor product of logical operands by index arithmetic.
///
/// With `s = lcm(a.cols(), b.rows())`, the result is
/// `(a ⊗ I_{s/a.cols()}) · (b ⊗ I_{s/b.rows()})`, itself logical, of shape
/// `a.rows()·s/a.cols() × b.cols()·s/b.rows()`.
pub fn stp_logical(a: &LogicalMatrix, b: &LogicalMatrix) -> Result<LogicalMatrix> {
    stp_logical_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`stp_logical`] with an explicit dimension cap on the result.
pub fn stp_logical_capped(
    a: &LogicalMatrix,
    b: &LogicalMatrix,
    cap: usize,
) -> Result<LogicalMatrix> {
    let n = a.cols();
    let p = b.rows();
    let s = lcm(n, p)?;
    let ra = s / n; // a is inflated by I_ra
    let rb = s / p; // b is inflated by I_rb
    let rows = a.rows().checked_mul(ra).ok_or(Error::Overflow)?;
    let cols = b.cols().checked_mul(rb).ok_or(Error::Overflow)?;
    checked_dims(rows, cols, cap)?;
    let mut col_indices = Vec::with_capacity(cols);
    for jb in 0..b.cols() {
        // Column jb·rb + r of b ⊗ I_rb has its 1 in row (b_jb - 1)·rb + r.
        let base = (b.col_indices[jb] - 1) * rb;
        for r in 0..rb {
            let t = base + r; // 0-based row into b ⊗ I_rb = column into a ⊗ I_ra
            let ja = t / ra;
            let ia = (a.col_indices[ja] - 1) * ra + (t % ra);
            col_indices.push(ia + 1);
        }
    }
    Ok(LogicalMatrix {
        rows,
        col_indices,
    })
}

/// Semi-tensor product. Logical operands stay logical (index arithmetic);
/// any dense operand routes the computation through the dense oracle.
pub fn stp(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    stp_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`stp`] with an explicit dimension cap on the result.
pub fn stp_capped(a: &Matrix, b: &Matrix, cap: usize) -> Result<Matrix> {
    match (a, b) {
        (Matrix::Logical(la), Matrix::Logical(lb)) => {
            Ok(Matrix::Logical(stp_logical_capped(la, lb, cap)?))
        }
        _ => {
            let da = a.to_dense();
            let db = b.to_dense();
            let s = lcm(da.cols(), db.rows())?;
            let rows = da.rows() * (s / da.cols());
            let cols = db.cols() * (s / db.rows());
            checked_dims(rows, cols, cap)?;
            let left = da.kron(&DenseMatrix::identity(s / da.cols()))?;
            let right = db.kron(&DenseMatrix::identity(s / db.rows()))?;
            Ok(Matrix::Dense(left.mul(&right)?))
        }
    }
}

/// Kronecker product of logical matrices:
/// column `(j_a - 1)·b.cols() + j_b` has index `(a_{j_a} - 1)·b.rows() + b_{j_b}`.
pub fn kron_logical(a: &LogicalMatrix, b: &LogicalMatrix) -> Result<LogicalMatrix> {
    kron_logical_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`kron_logical`] with an explicit dimension cap on the result.
pub fn kron_logical_capped(
    a: &LogicalMatrix,
    b: &LogicalMatrix,
    cap: usize,
) -> Result<LogicalMatrix> {
    let rows = a.rows().checked_mul(b.rows()).ok_or(Error::Overflow)?;
    let cols = a.cols().checked_mul(b.cols()).ok_or(Error::Overflow)?;
    checked_dims(rows, cols, cap)?;
    let mut col_indices = Vec::with_capacity(cols);
    for &ca in &a.col_indices {
        for &cb in &b.col_indices {
            col_indices.push((ca - 1) * b.rows() + cb);
        }
    }
    Ok(LogicalMatrix { rows, col_indices })
}

/// Kronecker product on the general representation.
pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    kron_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`kron`] with an explicit dimension cap on the result.
pub fn kron_capped(a: &Matrix, b: &Matrix, cap: usize) -> Result<Matrix> {
    match (a, b) {
        (Matrix::Logical(la), Matrix::Logical(lb)) => {
            Ok(Matrix::Logical(kron_logical_capped(la, lb, cap)?))
        }
        _ => {
            let rows = a.rows().checked_mul(b.rows()).ok_or(Error::Overflow)?;
            let cols = a.cols().checked_mul(b.cols()).ok_or(Error::Overflow)?;
            checked_dims(rows, cols, cap)?;
            Ok(Matrix::Dense(a.to_dense().kron(&b.to_dense())?))
        }
    }
}

/// Khatri–Rao (column-wise Kronecker) product of logical matrices with an
/// equal column count: column `j` of the result is `a_j ⊗ b_j`, so its index
/// is `(a_j - 1)·b.rows() + b_j`.
pub fn khatri_rao(a: &LogicalMatrix, b: &LogicalMatrix) -> Result<LogicalMatrix> {
    khatri_rao_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`khatri_rao`] with an explicit dimension cap on the result.
pub fn khatri_rao_capped(
    a: &LogicalMatrix,
    b: &LogicalMatrix,
    cap: usize,
) -> Result<LogicalMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            context: "khatri-rao column count",
            expected: a.cols(),
            found: b.cols(),
        });
    }
    let rows = a.rows().checked_mul(b.rows()).ok_or(Error::Overflow)?;
    checked_dims(rows, a.cols(), cap)?;
    let col_indices = a
        .col_indices
        .iter()
        .zip(&b.col_indices)
        .map(|(&ca, &cb)| (ca - 1) * b.rows() + cb)
        .collect();
    Ok(LogicalMatrix { rows, col_indices })
}
