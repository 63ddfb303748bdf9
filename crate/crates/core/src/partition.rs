//! Row-block partitioning of a CSR matrix: per-block column supports,
//! gather/scatter index lists, and per-block operator norms.
//!
//! Blocks are contiguous row ranges, so a block view is just a slice of the
//! row-pointer array. The column support `C^j` of block `j` is the sorted
//! list of columns with at least one nonzero in the block's rows; block
//! kernels touch only those entries.

use crate::sparse::SparseMatrix;
use crate::{cast, Error, Real, Result};

/// Hard cap on power-iteration sweeps per block.
const NORM_MAX_ITERS: usize = 1000;
/// Default relative tolerance for block operator norms.
pub const NORM_DEFAULT_TOL: f64 = 1e-6;

/// A contiguous row-block partition of a sparse matrix, with the per-block
/// data the coordinate solvers need.
#[derive(Debug, Clone)]
pub struct BlockPartition<T> {
    n_rows: usize,
    block_size: usize,
    m: usize,
    cols: Vec<Vec<usize>>,
    /// For each block, parallel to the block's CSR entries: the position of
    /// the entry's column inside `cols[j]`.
    local_col: Vec<Vec<usize>>,
    block_nnz: Vec<usize>,
    block_norms: Vec<T>,
    l_hat: T,
    r_max: T,
}

impl<T: Real> BlockPartition<T> {
    /// Number of blocks `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Rows of block `j` (contiguous range `S^j`).
    pub fn row_range(&self, j: usize) -> std::ops::Range<usize> {
        let lo = j * self.block_size;
        let hi = ((j + 1) * self.block_size).min(self.n_rows);
        lo..hi
    }

    pub fn block_of_row(&self, r: usize) -> usize {
        r / self.block_size
    }

    /// Sorted column support `C^j`.
    pub fn cols_of_block(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn block_nnz(&self, j: usize) -> usize {
        self.block_nnz[j]
    }

    /// Operator norm of the block row submatrix.
    pub fn block_norm(&self, j: usize) -> T {
        self.block_norms[j]
    }

    /// Max block operator norm.
    pub fn l_hat(&self) -> T {
        self.l_hat
    }

    /// Max row Euclidean norm.
    pub fn r_max(&self) -> T {
        self.r_max
    }
}

/// Partition the rows of `a` into contiguous blocks of `block_size` (the last
/// block may be smaller) and precompute column supports, gather indices and
/// block operator norms.
pub fn partition_rows<T: Real>(a: &SparseMatrix<T>, block_size: usize) -> Result<BlockPartition<T>> {
    if block_size == 0 {
        return Err(Error::InvalidParameter("block_size must be positive".into()));
    }
    if block_size > a.n_rows() {
        return Err(Error::InvalidParameter(format!(
            "block_size {} exceeds row count {}",
            block_size,
            a.n_rows()
        )));
    }
    let n = a.n_rows();
    let m = n.div_ceil(block_size);
    let mut cols = Vec::with_capacity(m);
    let mut local_col = Vec::with_capacity(m);
    let mut block_nnz = Vec::with_capacity(m);
    let mut block_norms = Vec::with_capacity(m);
    let tol = cast::<T>(NORM_DEFAULT_TOL);

    for j in 0..m {
        let range = j * block_size..((j + 1) * block_size).min(n);
        let mut support: Vec<usize> = Vec::new();
        for r in range.clone() {
            support.extend_from_slice(a.row(r).0);
        }
        support.sort_unstable();
        support.dedup();

        let mut local = Vec::with_capacity(a.range_nnz(range.clone()));
        for r in range.clone() {
            for c in a.row(r).0 {
                let pos = support.binary_search(c).expect("column in support");
                local.push(pos);
            }
        }
        block_nnz.push(local.len());
        let rows: Vec<usize> = range.collect();
        block_norms.push(block_operator_norm(a, &rows, tol)?);
        cols.push(support);
        local_col.push(local);
    }

    let l_hat = block_norms.iter().copied().fold(T::zero(), T::max);
    let r_max = a.row_norms().into_iter().fold(T::zero(), T::max);
    Ok(BlockPartition {
        n_rows: n,
        block_size,
        m,
        cols,
        local_col,
        block_nnz,
        block_norms,
        l_hat,
        r_max,
    })
}

/// Operator norm of the row submatrix `A^S` by power iteration on
/// `(A^S)^T A^S` restricted to the support columns.
///
/// The start vector is deterministic (all ones on the support, normalized).
/// Returns `sigma_max * (1 + delta)` with `0 <= delta <= tol` once the
/// iteration has converged; an all-zero block returns 0.
pub fn block_operator_norm<T: Real>(a: &SparseMatrix<T>, rows: &[usize], tol: T) -> Result<T> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter(
            "block_operator_norm: empty row set".into(),
        ));
    }
    let mut support: Vec<usize> = Vec::new();
    for &r in rows {
        support.extend_from_slice(a.row(r).0);
    }
    support.sort_unstable();
    support.dedup();
    if support.is_empty() {
        return Ok(T::zero());
    }

    let pos_of: std::collections::HashMap<usize, usize> =
        support.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let k = support.len();
    let mut v = vec![T::one() / cast::<T>(k as f64).sqrt(); k];
    let mut w = vec![T::zero(); rows.len()];
    let mut sigma_prev = T::zero();
    let inner_tol = tol * cast::<T>(0.25);

    for iter in 0..NORM_MAX_ITERS {
        // w = A^S v, u = (A^S)^T w on the support.
        for (wi, &r) in w.iter_mut().zip(rows) {
            let (cs, vs) = a.row(r);
            let mut acc = T::zero();
            for (c, val) in cs.iter().zip(vs) {
                acc += *val * v[pos_of[c]];
            }
            *wi = acc;
        }
        let sigma = crate::sparse::norm2(&w);
        let mut u = vec![T::zero(); k];
        for (wi, &r) in w.iter().zip(rows) {
            let (cs, vs) = a.row(r);
            for (c, val) in cs.iter().zip(vs) {
                u[pos_of[c]] += *val * *wi;
            }
        }
        let un = crate::sparse::norm2(&u);
        if un == T::zero() {
            // Start vector hit the null space of a nonzero block; restart
            // from a deterministic non-uniform direction.
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = cast::<T>(1.0 + (i % 3) as f64);
            }
            let nv = crate::sparse::norm2(&v);
            for vi in v.iter_mut() {
                *vi = *vi / nv;
            }
            if iter > 2 {
                // Twice through the restart: the block is numerically zero.
                return Ok(T::zero());
            }
            continue;
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = *ui / un;
        }
        if iter > 0 && (sigma - sigma_prev).abs() <= inner_tol * sigma.max(T::min_positive_value())
        {
            return Ok(sigma * (T::one() + tol * cast::<T>(0.5)));
        }
        sigma_prev = sigma;
    }
    Ok(sigma_prev * (T::one() + tol * cast::<T>(0.5)))
}

/// `A^{S^j} x` evaluated from values gathered on the column support:
/// `x_on_support[i]` is the value at column `cols_of_block(j)[i]`. Returns one
/// value per row of the block, summed in stored order (bit-identical to the
/// corresponding rows of a full matvec).
pub fn block_matvec<T: Real>(
    a: &SparseMatrix<T>,
    part: &BlockPartition<T>,
    j: usize,
    x_on_support: &[T],
) -> Result<Vec<T>> {
    if x_on_support.len() != part.cols[j].len() {
        return Err(Error::DimensionMismatch {
            op: "block_matvec",
            expected: part.cols[j].len(),
            got: x_on_support.len(),
        });
    }
    let range = part.row_range(j);
    let base = a.row_ptr()[range.start];
    let local = &part.local_col[j];
    let mut out = Vec::with_capacity(range.len());
    for r in range {
        let (cs, vs) = a.row(r);
        let off = a.row_ptr()[r] - base;
        let mut acc = T::zero();
        for (i, v) in vs.iter().enumerate() {
            acc += *v * x_on_support[local[off + i]];
        }
        debug_assert_eq!(cs.len(), vs.len());
        out.push(acc);
    }
    Ok(out)
}

/// `(A^{S^j})^T y` evaluated from values on the block's rows, returned on the
/// column support (position `i` corresponds to `cols_of_block(j)[i]`).
pub fn block_rmatvec<T: Real>(
    a: &SparseMatrix<T>,
    part: &BlockPartition<T>,
    j: usize,
    y_on_rows: &[T],
) -> Result<Vec<T>> {
    let range = part.row_range(j);
    if y_on_rows.len() != range.len() {
        return Err(Error::DimensionMismatch {
            op: "block_rmatvec",
            expected: range.len(),
            got: y_on_rows.len(),
        });
    }
    let base = a.row_ptr()[range.start];
    let local = &part.local_col[j];
    let mut out = vec![T::zero(); part.cols[j].len()];
    for (yi, r) in y_on_rows.iter().zip(range) {
        let off = a.row_ptr()[r] - base;
        let (_, vs) = a.row(r);
        for (i, v) in vs.iter().enumerate() {
            out[local[off + i]] += *v * *yi;
        }
    }
    Ok(out)
}
