//! Compressed-row sparse matrices and the matrix-vector kernels the solvers
//! are built on.
//!
//! CSR is the single storage layout. Row blocks are taken as contiguous index
//! ranges so block views are plain slices of the row pointer array; the
//! gather/scatter machinery for block operations lives in [`crate::partition`].

use crate::{cast, Error, Real, Result};

/// Sparse matrix in canonical CSR form.
///
/// Invariants (enforced by [`SparseMatrix::from_triplets`]):
/// - `row_ptr` is nondecreasing with `row_ptr[0] == 0` and
///   `row_ptr[n_rows] == nnz`;
/// - within each row the column indices are strictly increasing;
/// - no explicitly stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> SparseMatrix<T> {
    /// Build a canonical CSR matrix from (row, col, value) triplets.
    ///
    /// Duplicate positions are summed; entries that sum to exactly zero are
    /// dropped. Out-of-range indices are reported with the offending entry.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize, T)],
    ) -> Result<Self> {
        for &(r, c, _) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
        }
        let mut sorted: Vec<(usize, usize, T)> = entries.to_vec();
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let (r, c, mut v) = sorted[i];
            i += 1;
            while i < sorted.len() && sorted[i].0 == r && sorted[i].1 == c {
                v += sorted[i].2;
                i += 1;
            }
            if v != T::zero() {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Inverse of [`SparseMatrix::from_triplets`] on canonical matrices.
    pub fn to_triplets(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                out.push((r, *c, *v));
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[T]) {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Number of stored entries in rows `rows.start..rows.end`.
    pub fn range_nnz(&self, rows: std::ops::Range<usize>) -> usize {
        self.row_ptr[rows.end] - self.row_ptr[rows.start]
    }

    /// Dot product of row `r` with a full-length vector.
    ///
    /// Summation runs in stored (column) order; every other kernel that
    /// evaluates rows uses this same order so block and full products agree
    /// bit for bit.
    pub fn row_dot(&self, r: usize, x: &[T]) -> T {
        let (cols, vals) = self.row(r);
        let mut acc = T::zero();
        for (c, v) in cols.iter().zip(vals) {
            acc += *v * x[*c];
        }
        acc
    }

    /// y = A x.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                expected: self.n_cols,
                got: x.len(),
            });
        }
        Ok((0..self.n_rows).map(|r| self.row_dot(r, x)).collect())
    }

    /// x = A^T y.
    pub fn rmatvec(&self, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.n_rows {
            return Err(Error::DimensionMismatch {
                op: "rmatvec",
                expected: self.n_rows,
                got: y.len(),
            });
        }
        let mut out = vec![T::zero(); self.n_cols];
        for r in 0..self.n_rows {
            let yr = y[r];
            if yr == T::zero() {
                continue;
            }
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                out[*c] += *v * yr;
            }
        }
        Ok(out)
    }

    /// Euclidean norm of each row.
    pub fn row_norms(&self) -> Vec<T> {
        (0..self.n_rows)
            .map(|r| {
                let (_, vals) = self.row(r);
                vals.iter().map(|v| *v * *v).sum::<T>().sqrt()
            })
            .collect()
    }

    /// Transposed copy (CSR of A^T). Used internally where per-column access
    /// is needed; the public storage contract stays CSR-of-A.
    pub fn transpose(&self) -> Self {
        let mut row_ptr = vec![0usize; self.n_cols + 1];
        for &c in &self.col_idx {
            row_ptr[c + 1] += 1;
        }
        for c in 0..self.n_cols {
            row_ptr[c + 1] += row_ptr[c];
        }
        let mut cursor = row_ptr.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                let slot = cursor[*c];
                col_idx[slot] = r;
                values[slot] = *v;
                cursor[*c] += 1;
            }
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr,
            col_idx,
            values,
        }
    }
}

/// Result of [`normalize_rows`].
#[derive(Debug, Clone)]
pub struct RowNormalization<T> {
    pub matrix: SparseMatrix<T>,
    pub rhs: Vec<T>,
    /// Scale factor applied to each row (1 for untouched zero rows); divide a
    /// dual vector by these to map it back to the original system.
    pub scales: Vec<T>,
    /// Rows with no stored entries, left untouched.
    pub zero_rows: Vec<usize>,
}

/// Scale every nonzero row of `(a, b)` to unit Euclidean norm.
///
/// The right-hand side is scaled by the same factors, so the constraint set
/// `{x : Ax = b}` is unchanged. Zero rows are reported, not an error.
pub fn normalize_rows<T: Real>(a: &SparseMatrix<T>, b: &[T]) -> Result<RowNormalization<T>> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            op: "normalize_rows",
            expected: a.n_rows(),
            got: b.len(),
        });
    }
    let norms = a.row_norms();
    let mut zero_rows = Vec::new();
    let mut scales = vec![T::one(); a.n_rows()];
    let mut matrix = a.clone();
    let mut rhs = b.to_vec();
    for r in 0..a.n_rows() {
        if norms[r] == T::zero() {
            zero_rows.push(r);
            continue;
        }
        scales[r] = norms[r];
        let lo = matrix.row_ptr[r];
        let hi = matrix.row_ptr[r + 1];
        for v in &mut matrix.values[lo..hi] {
            *v = *v / norms[r];
        }
        rhs[r] = rhs[r] / norms[r];
    }
    Ok(RowNormalization {
        matrix,
        rhs,
        scales,
        zero_rows,
    })
}

/// Infinity norm of `u - v`.
pub(crate) fn max_abs_diff<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max)
}

/// Euclidean norm.
pub(crate) fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

/// Euclidean distance.
pub(crate) fn dist2<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .map(|(a, b)| (*a - *b) * (*a - *b))
        .sum::<T>()
        .sqrt()
}

pub(crate) fn dot<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).map(|(a, b)| *a * *b).sum()
}

/// Deterministic sparse test/benchmark matrix with entries bounded away from
/// zero, so triplet construction never cancels.
pub fn random_sparse<T: Real>(
    n_rows: usize,
    n_cols: usize,
    density: f64,
    seed: u64,
) -> SparseMatrix<T> {
    let mut rng = crate::sampler::aux_rng(seed);
    let mut entries = Vec::new();
    let per_row = ((n_cols as f64 * density).round() as usize).clamp(1, n_cols);
    for r in 0..n_rows {
        let mut cols = Vec::with_capacity(per_row);
        while cols.len() < per_row {
            let c = (crate::sampler::next_unit_f64(&mut rng) * n_cols as f64) as usize;
            let c = c.min(n_cols - 1);
            if !cols.contains(&c) {
                cols.push(c);
            }
        }
        for c in cols {
            let u = crate::sampler::next_unit_f64(&mut rng);
            let mag = 0.1 + 0.9 * u;
            let sign = if crate::sampler::next_unit_f64(&mut rng) < 0.5 {
                -1.0
            } else {
                1.0
            };
            entries.push((r, c, cast::<T>(sign * mag)));
        }
    }
    SparseMatrix::from_triplets(n_rows, n_cols, &entries).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_matrix() {
        let a = SparseMatrix::<f64>::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.matvec(&[3.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn duplicate_triplets_cancel() {
        let a = SparseMatrix::<f64>::from_triplets(1, 1, &[(0, 0, 2.0), (0, 0, -2.0)]).unwrap();
        assert_eq!(a.nnz(), 0);
        assert_eq!(a.matvec(&[1.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn duplicate_triplets_sum() {
        let a = SparseMatrix::<f64>::from_triplets(2, 2, &[(0, 1, 2.0), (0, 1, 3.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.row(0), (&[1usize][..], &[5.0][..]));
    }

    #[test]
    fn out_of_range_reports_entry() {
        let err = SparseMatrix::<f64>::from_triplets(2, 3, &[(0, 0, 1.0), (2, 1, 1.0)]).unwrap_err();
        match err {
            Error::IndexOutOfRange { row, col, .. } => {
                assert_eq!((row, col), (2, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dense_accumulation_oracle_small() {
        // 3 triplets in a 2x3 matrix against a naively accumulated array.
        let trips = [(0usize, 2usize, 1.5f64), (1, 0, -2.0), (0, 2, 0.25)];
        let a = SparseMatrix::from_triplets(2, 3, &trips).unwrap();
        let mut dense = [[0.0f64; 3]; 2];
        for &(r, c, v) in &trips {
            dense[r][c] += v;
        }
        let x = [1.0, -1.0, 2.0];
        let y = a.matvec(&x).unwrap();
        for r in 0..2 {
            let want: f64 = (0..3).map(|c| dense[r][c] * x[c]).sum();
            assert!((y[r] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_matvec() {
        let a = SparseMatrix::<f64>::from_triplets(
            3,
            3,
            &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        assert_eq!(a.matvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(a.rmatvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn matvec_matches_dense_oracle() {
        let a = random_sparse::<f64>(5, 7, 0.4, 11);
        let mut dense = vec![vec![0.0f64; 7]; 5];
        for (r, c, v) in a.to_triplets() {
            dense[r][c] += v;
        }
        let x: Vec<f64> = (0..7).map(|i| (i as f64) * 0.3 - 1.0).collect();
        let y = a.matvec(&x).unwrap();
        for r in 0..5 {
            let want: f64 = (0..7).map(|c| dense[r][c] * x[c]).sum();
            assert!((y[r] - want).abs() < 1e-12);
        }
        let yv: Vec<f64> = (0..5).map(|i| 0.5 - i as f64).collect();
        let z = a.rmatvec(&yv).unwrap();
        for c in 0..7 {
            let want: f64 = (0..5).map(|r| dense[r][c] * yv[r]).sum();
            assert!((z[c] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn triplet_round_trip_is_identity() {
        for seed in 0..5u64 {
            let a = random_sparse::<f64>(8, 13, 0.25, seed);
            let b = SparseMatrix::from_triplets(8, 13, &a.to_triplets()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn normalize_forced_scaling() {
        let a = SparseMatrix::from_triplets(1, 2, &[(0, 0, 3.0), (0, 1, 4.0)]).unwrap();
        let norm = normalize_rows(&a, &[10.0]).unwrap();
        let (cols, vals) = norm.matrix.row(0);
        assert_eq!(cols, &[0, 1]);
        assert!((vals[0] - 0.6).abs() < 1e-15);
        assert!((vals[1] - 0.8).abs() < 1e-15);
        assert!((norm.rhs[0] - 2.0).abs() < 1e-15);
        assert!((norm.scales[0] - 5.0).abs() < 1e-15);
        assert!(norm.zero_rows.is_empty());
    }

    #[test]
    fn normalize_unit_rows_is_identity() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
        let norm = normalize_rows(&a, &[1.0, 2.0]).unwrap();
        assert_eq!(norm.matrix, a);
        assert_eq!(norm.rhs, vec![1.0, 2.0]);
    }

    #[test]
    fn normalize_reports_zero_rows() {
        let a = SparseMatrix::from_triplets(3, 2, &[(0, 0, 2.0), (2, 1, 1.0)]).unwrap();
        let norm = normalize_rows(&a, &[1.0, 5.0, 1.0]).unwrap();
        assert_eq!(norm.zero_rows, vec![1]);
        assert_eq!(norm.rhs[1], 5.0);
        assert_eq!(norm.scales[1], 1.0);
    }

    #[test]
    fn normalize_preserves_feasible_points() {
        // A feasible point of the original system stays feasible after scaling.
        for seed in 0..3u64 {
            let a = random_sparse::<f64>(6, 9, 0.4, seed);
            let x: Vec<f64> = (0..9).map(|i| ((i * 7 + seed as usize) % 5) as f64 * 0.25).collect();
            let b = a.matvec(&x).unwrap();
            let norm = normalize_rows(&a, &b).unwrap();
            let resid = norm.matrix.matvec(&x).unwrap();
            for (ri, bi) in resid.iter().zip(&norm.rhs) {
                assert!((ri - bi).abs() < 1e-12);
            }
            // Every nonzero row now has unit norm.
            for (r, nrm) in norm.matrix.row_norms().iter().enumerate() {
                if !norm.zero_rows.contains(&r) {
                    assert!((nrm - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn transpose_matches_rmatvec() {
        let a = random_sparse::<f64>(7, 5, 0.5, 3);
        let at = a.transpose();
        let y: Vec<f64> = (0..7).map(|i| i as f64 - 3.0).collect();
        let z1 = a.rmatvec(&y).unwrap();
        let z2 = at.matvec(&y).unwrap();
        for (u, v) in z1.iter().zip(&z2) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
