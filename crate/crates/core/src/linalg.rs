//! Exact sparse linear algebra.
//!
//! Matrices are stored as coordinate maps without explicit zeros. All
//! elimination goes through [`Echelon`], an incrementally maintained reduced
//! row echelon form, so every returned basis is in a canonical normal form
//! that depends only on the row space and the column order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector: index to nonzero value.
pub type SparseVec<T> = BTreeMap<usize, T>;

/// `target -= factor * source`, dropping entries that cancel.
pub fn sub_scaled<T: Scalar>(target: &mut SparseVec<T>, factor: &T, source: &SparseVec<T>) {
    for (&k, x) in source {
        let delta = factor.clone() * x.clone();
        match target.get_mut(&k) {
            Some(entry) => {
                let value = entry.clone() - delta;
                if value.is_zero() {
                    target.remove(&k);
                } else {
                    *entry = value;
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(k, -delta);
                }
            }
        }
    }
}

/// `target += factor * source`.
pub fn add_scaled<T: Scalar>(target: &mut SparseVec<T>, factor: &T, source: &SparseVec<T>) {
    sub_scaled(target, &(-factor.clone()), source);
}

/// Adds `value` at `index`, removing the entry if the sum cancels.
pub fn add_entry<T: Scalar>(target: &mut SparseVec<T>, index: usize, value: T) {
    if value.is_zero() {
        return;
    }
    match target.get_mut(&index) {
        Some(entry) => {
            let sum = entry.clone() + value;
            if sum.is_zero() {
                target.remove(&index);
            } else {
                *entry = sum;
            }
        }
        None => {
            target.insert(index, value);
        }
    }
}

pub fn scale<T: Scalar>(v: &SparseVec<T>, factor: &T) -> SparseVec<T> {
    if factor.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&k, x)| (k, x.clone() * factor.clone())).collect()
}

pub fn to_sparse<T: Scalar>(v: &[T]) -> SparseVec<T> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense<T: Scalar>(v: &SparseVec<T>, len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (&k, x) in v {
        out[k] = x.clone();
    }
    out
}

/// Sparse matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<T> {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> SparseMat<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat { nrows, ncols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), ncols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has length {} but row 0 has length {ncols}",
                    row.len()
                )));
            }
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        Ok(m)
    }

    /// Builds a matrix from sparse columns.
    pub fn from_columns(nrows: usize, columns: &[SparseVec<T>]) -> Self {
        let mut m = Self::zeros(nrows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (&r, x) in col {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(T::zero)
    }

    /// Overwrites an entry. Panics when out of bounds.
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        assert!(row < self.nrows && col < self.ncols, "entry ({row},{col}) outside {}x{}", self.nrows, self.ncols);
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// Accumulates into an entry. Panics when out of bounds.
    pub fn add_to(&mut self, row: usize, col: usize, value: T) {
        let current = self.get(row, col);
        self.set(row, col, current + value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(r, c), x)| (r, c, x))
    }

    pub fn rows(&self) -> Vec<SparseVec<T>> {
        let mut rows = vec![SparseVec::new(); self.nrows];
        for (&(r, c), x) in &self.entries {
            rows[r].insert(c, x.clone());
        }
        rows
    }

    pub fn columns(&self) -> Vec<SparseVec<T>> {
        let mut cols = vec![SparseVec::new(); self.ncols];
        for (&(r, c), x) in &self.entries {
            cols[c].insert(r, x.clone());
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|(&(r, c), x)| ((c, r), x.clone())).collect();
        SparseMat { nrows: self.ncols, ncols: self.nrows, entries }
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.ncols
            )));
        }
        let mut out = vec![T::zero(); self.nrows];
        for (&(r, c), a) in &self.entries {
            out[r] = out[r].clone() + a.clone() * x[c].clone();
        }
        Ok(out)
    }

    /// Product with a sparse vector; indices must be below `ncols`.
    pub fn mul_sparse(&self, x: &SparseVec<T>) -> SparseVec<T> {
        let mut out = SparseVec::new();
        for (&(r, c), a) in &self.entries {
            if let Some(xc) = x.get(&c) {
                add_entry(&mut out, r, a.clone() * xc.clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMat<T>) -> Result<SparseMat<T>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let other_rows = other.rows();
        let mut out = SparseMat::zeros(self.nrows, other.ncols);
        for (r, row) in self.rows().into_iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in row {
                add_scaled(&mut acc, &a, &other_rows[k]);
            }
            for (c, x) in acc {
                out.entries.insert((r, c), x);
            }
        }
        Ok(out)
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(blocks: &[SparseMat<T>], ncols: usize) -> Result<SparseMat<T>> {
        let mut out = SparseMat::zeros(0, ncols);
        for block in blocks {
            if block.ncols != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "block with {} columns stacked onto {ncols}",
                    block.ncols
                )));
            }
            let offset = out.nrows;
            out.nrows += block.nrows;
            for (&(r, c), x) in &block.entries {
                out.entries.insert((r + offset, c), x.clone());
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (&(r, c), x) in &self.entries {
            out[r][c] = x.clone();
        }
        out
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> SparseMat<U> {
        let mut out = SparseMat::zeros(self.nrows, self.ncols);
        for (&(r, c), x) in &self.entries {
            out.set(r, c, f(x));
        }
        out
    }
}

/// Reduced row echelon form of a growing set of rows.
///
/// Rows are keyed by pivot column; each pivot is 1 and is the only nonzero
/// entry of its column. The form is unique for a given row space.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec<T>>,
}

impl<T: Scalar> Echelon<T> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec<T>>>(ncols: usize, rows: I) -> Self {
        let mut e = Self::new(ncols);
        for row in rows {
            e.insert(row);
        }
        e
    }

    pub fn of_matrix(m: &SparseMat<T>) -> Self {
        Self::from_rows(m.ncols(), m.rows())
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Rows in ascending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<T>> {
        self.rows.values()
    }

    pub fn reduce(&self, mut v: SparseVec<T>) -> SparseVec<T> {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                sub_scaled(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<T>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds a row; returns whether it enlarged the row space.
    pub fn insert(&mut self, v: SparseVec<T>) -> bool {
        debug_assert!(v.keys().all(|&k| k < self.ncols));
        let v = self.reduce(v);
        let Some((&lead, lead_value)) = v.iter().next() else {
            return false;
        };
        let v = scale(&v, &lead_value.inv());
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&lead).cloned() {
                sub_scaled(row, &c, &v);
            }
        }
        self.rows.insert(lead, v);
        true
    }

    /// Null space of the rows, one vector per free column in ascending order,
    /// with a 1 at its free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        (0..self.ncols)
            .filter(|c| !self.rows.contains_key(c))
            .map(|free| {
                let mut x = vec![T::zero(); self.ncols];
                x[free] = T::one();
                for (&pivot, row) in &self.rows {
                    if let Some(a) = row.get(&free) {
                        x[pivot] = -a.clone();
                    }
                }
                x
            })
            .collect()
    }

    pub fn basis_dense(&self) -> Vec<Vec<T>> {
        self.rows.values().map(|r| to_dense(r, self.ncols)).collect()
    }
}

pub fn rank<T: Scalar>(m: &SparseMat<T>) -> usize {
    Echelon::of_matrix(m).rank()
}

/// Basis of the right null space in reduced echelon normal form.
pub fn kernel_basis<T: Scalar>(m: &SparseMat<T>) -> Vec<Vec<T>> {
    Echelon::of_matrix(m).kernel()
}

/// Some `x` with `m x = b`, free variables set to zero; `None` if inconsistent.
pub fn solve<T: Scalar>(m: &SparseMat<T>, b: &[T]) -> Result<Option<Vec<T>>> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), m.nrows())));
    }
    let n = m.ncols();
    let mut rows = m.rows();
    for (row, rhs) in rows.iter_mut().zip(b) {
        if !rhs.is_zero() {
            row.insert(n, rhs.clone());
        }
    }
    let ech = Echelon::from_rows(n + 1, rows);
    if ech.rows.contains_key(&n) {
        return Ok(None);
    }
    let mut x = vec![T::zero(); n];
    for (&pivot, row) in &ech.rows {
        if let Some(v) = row.get(&n) {
            x[pivot] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Whether `v` lies in the span of `span`.
pub fn membership<T: Scalar>(v: &[T], span: &[Vec<T>]) -> Result<bool> {
    let n = v.len();
    if let Some(bad) = span.iter().find(|w| w.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "spanning vector of length {} against vector of length {n}",
            bad.len()
        )));
    }
    let ech = Echelon::from_rows(n, span.iter().map(|w| to_sparse(w)));
    Ok(ech.contains(&to_sparse(v)))
}

/// Dimension of the span of a list of vectors of length `dim`.
pub fn span_rank<T: Scalar>(vectors: &[Vec<T>], dim: usize) -> usize {
    Echelon::from_rows(dim, vectors.iter().map(|w| to_sparse(w))).rank()
}

/// Echelon-normalized basis of the span of `vectors`.
pub fn echelon_basis<T: Scalar>(vectors: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    Echelon::from_rows(dim, vectors.iter().map(|w| to_sparse(w))).basis_dense()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> SparseMat<Rat> {
        SparseMat::from_dense(&rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMat::<Rat>::identity(3)), 3);
        assert_eq!(rank(&SparseMat::<Rat>::zeros(4, 4)), 0);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&mat(&[&[1, 2]])), vec![vec![r(-2), r(1)]]);
        assert!(kernel_basis(&SparseMat::<Rat>::identity(3)).is_empty());
        assert_eq!(kernel_basis(&mat(&[&[1, 1, 1]])), vec![vec![r(-1), r(1), r(0)], vec![r(-1), r(0), r(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![r(4), r(-1), r(7)];
        assert_eq!(solve(&SparseMat::identity(3), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve(&mat(&[&[1, 2]]), &[r(3)]).unwrap(), Some(vec![r(3), r(0)]));
        assert_eq!(solve(&mat(&[&[1], &[0]]), &[r(0), r(1)]).unwrap(), None);
        assert!(matches!(solve(&mat(&[&[1, 2]]), &[r(1), r(2)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&[r(2), r(4)], &[vec![r(1), r(2)]]).unwrap());
        assert!(!membership(&[r(1), r(0)], &[vec![r(0), r(1)]]).unwrap());
        assert!(membership(&[r(0), r(0)], &[]).unwrap());
    }

    #[test]
    fn echelon_is_canonical() {
        let a = echelon_basis(&[vec![r(2), r(4), r(6)], vec![r(1), r(1), r(1)]], 3);
        let b = echelon_basis(&[vec![r(0), r(1), r(2)], vec![r(3), r(4), r(5)]], 3);
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![r(1), r(0), r(-1)], vec![r(0), r(1), r(2)]]);
    }

    #[test]
    fn sparse_products() {
        let a = mat(&[&[1, 2], &[0, 3]]);
        let b = mat(&[&[4], &[5]]);
        assert_eq!(a.mul(&b).unwrap(), mat(&[&[14], &[15]]));
        assert_eq!(a.mul_vec(&[r(1), r(1)]).unwrap(), vec![r(3), r(3)]);
        assert_eq!(a.transpose().get(1, 0), r(2));
    }

    mod properties {
        use super::*;
        use crate::scalar::Fp;
        use proptest::prelude::*;

        fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..6, 1usize..7)
                .prop_flat_map(|(m, n)| proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), m))
        }

        fn lift<T: Scalar>(rows: &[Vec<i64>]) -> SparseMat<T> {
            SparseMat::from_dense(
                &rows.iter().map(|row| row.iter().map(|&x| from_int(x)).collect()).collect::<Vec<_>>(),
            )
            .unwrap()
        }

        fn rank_nullity<T: Scalar>(m: &SparseMat<T>) {
            let kernel = kernel_basis(m);
            assert_eq!(rank(m) + kernel.len(), m.ncols());
            assert_eq!(rank(m), rank(&m.transpose()));
            assert_eq!(span_rank(&kernel, m.ncols()), kernel.len());
            for v in &kernel {
                assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        proptest! {
            #[test]
            fn rank_nullity_over_q_and_f7(rows in matrix_strategy()) {
                rank_nullity(&lift::<Rat>(&rows));
                rank_nullity(&lift::<Fp<7>>(&rows));
            }

            #[test]
            fn solve_recovers_consistent_systems(rows in matrix_strategy(), seed in proptest::collection::vec(-3i64..=3, 6)) {
                let m = lift::<Rat>(&rows);
                let x: Vec<Rat> = seed[..m.ncols()].iter().map(|&v| r(v)).collect();
                let b = m.mul_vec(&x).unwrap();
                let y = solve(&m, &b).unwrap().expect("b lies in the image");
                prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
            }

            #[test]
            fn solve_rejects_points_off_the_image(rows in matrix_strategy()) {
                let m = lift::<Rat>(&rows);
                let image = m.columns().iter().map(|c| to_dense(c, m.nrows())).collect::<Vec<_>>();
                for i in 0..m.nrows() {
                    let e: Vec<Rat> = (0..m.nrows()).map(|j| if i == j { r(1) } else { r(0) }).collect();
                    let reachable = membership(&e, &image).unwrap();
                    prop_assert_eq!(solve(&m, &e).unwrap().is_some(), reachable);
                }
            }
        }
    }
}
