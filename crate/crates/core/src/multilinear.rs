//! Exterior powers, Koszul maps, 4×4 Pfaffians and supports of tensors.
//!
//! Wedge bases are the `p`-subsets of `0..n` in lexicographic order. A tensor
//! in `ΛᵖW ⊗ M` is flattened with index `wedge_index * dim M + m`. The Koszul
//! map removes the `k`-th factor of a wedge (counting from 1) with sign
//! `(−1)^(k−1)`; every matrix and identity in the crate uses this convention.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, add_scaled, to_sparse, Echelon, SparseMat, SparseVec};
use crate::models::MultTable;
use crate::scalar::Scalar;

/// Lexicographically ordered basis of `ΛᵖV` for `dim V = n`.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    n: usize,
    p: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl WedgeBasis {
    pub fn new(n: usize, p: usize) -> Self {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(p).collect();
        let index = subsets.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        WedgeBasis { n, p, subsets, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, k: usize) -> &[usize] {
        &self.subsets[k]
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        self.index.get(subset).copied()
    }
}

/// A strictly increasing tuple of basis indices of an ambient space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeIndex {
    subset: Vec<usize>,
    ambient_dim: usize,
}

impl WedgeIndex {
    pub fn new(subset: Vec<usize>, ambient_dim: usize) -> Result<Self> {
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("wedge indices {subset:?} not strictly increasing")));
        }
        if let Some(&bad) = subset.iter().find(|&&i| i >= ambient_dim) {
            return Err(Error::IndexOutOfRange(format!("wedge index {bad} >= {ambient_dim}")));
        }
        Ok(WedgeIndex { subset, ambient_dim })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
}

/// Sorts wedge factors, returning the sign of the permutation, or `None`
/// when a factor repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = indices.to_vec();
    let mut negative = false;
    // insertion sort; factors are few
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, negative))
    }
}

/// An element of `ΛᵖV ⊗ M` with `dim V = ambient_dim` and
/// `dim M = second_dim`. For `K_{p,1}` classes `M = V`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulClass<T> {
    p: usize,
    ambient_dim: usize,
    second_dim: usize,
    coeffs: BTreeMap<(Vec<usize>, usize), T>,
}

impl<T: Scalar> KoszulClass<T> {
    pub fn zero(p: usize, ambient_dim: usize, second_dim: usize) -> Self {
        KoszulClass { p, ambient_dim, second_dim, coeffs: BTreeMap::new() }
    }

    /// Builds a tensor from terms `(wedge factors, second index, coefficient)`.
    /// Factors may come in any order; repeated factors contribute nothing.
    pub fn from_terms<I>(p: usize, ambient_dim: usize, second_dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, usize, T)>,
    {
        let mut c = Self::zero(p, ambient_dim, second_dim);
        for (wedge, s, x) in terms {
            c.add_term(&wedge, s, x)?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, wedge: &[usize], s: usize, x: T) -> Result<()> {
        if wedge.len() != self.p {
            return Err(Error::DimensionMismatch(format!("wedge of size {} in degree {}", wedge.len(), self.p)));
        }
        if let Some(&bad) = wedge.iter().find(|&&i| i >= self.ambient_dim) {
            return Err(Error::IndexOutOfRange(format!("wedge factor {bad} >= {}", self.ambient_dim)));
        }
        if s >= self.second_dim {
            return Err(Error::IndexOutOfRange(format!("second index {s} >= {}", self.second_dim)));
        }
        let Some((sorted, negative)) = sort_with_sign(wedge) else {
            return Ok(());
        };
        let x = if negative { -x } else { x };
        let key = (sorted, s);
        let sum = self.coeffs.get(&key).cloned().unwrap_or_else(T::zero) + x;
        if sum.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, sum);
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn second_dim(&self) -> usize {
        self.second_dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in (wedge lex, second index) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], usize, &T)> {
        self.coeffs.iter().map(|((w, s), x)| (w.as_slice(), *s, x))
    }

    pub fn coeff(&self, wedge: &[usize], s: usize) -> T {
        self.coeffs.get(&(wedge.to_vec(), s)).cloned().unwrap_or_else(T::zero)
    }

    pub fn dim(&self) -> usize {
        WedgeBasis::new(self.ambient_dim, self.p).len() * self.second_dim
    }

    /// Flattened coordinates with respect to `basis` (which must match `p`
    /// and `ambient_dim`).
    pub fn to_vector(&self, basis: &WedgeBasis) -> SparseVec<T> {
        assert_eq!((basis.n(), basis.p()), (self.ambient_dim, self.p), "wedge basis mismatch");
        self.coeffs
            .iter()
            .map(|((w, s), x)| (basis.index_of(w).expect("valid wedge") * self.second_dim + s, x.clone()))
            .collect()
    }

    pub fn from_vector(basis: &WedgeBasis, second_dim: usize, v: &SparseVec<T>) -> Self {
        let coeffs =
            v.iter().map(|(&k, x)| ((basis.subset(k / second_dim).to_vec(), k % second_dim), x.clone())).collect();
        KoszulClass { p: basis.p(), ambient_dim: basis.n(), second_dim, coeffs }
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if (self.p, self.ambient_dim, self.second_dim) != (other.p, other.ambient_dim, other.second_dim) {
            return Err(Error::DimensionMismatch(format!(
                "tensor spaces (p={}, {}, {}) and (p={}, {}, {})",
                self.p, self.ambient_dim, self.second_dim, other.p, other.ambient_dim, other.second_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for ((w, s), x) in &other.coeffs {
            out.add_term(w, *s, x.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::zero(self.p, self.ambient_dim, self.second_dim);
        }
        let coeffs = self.coeffs.iter().map(|(k, x)| (k.clone(), x.clone() * factor.clone())).collect();
        KoszulClass { coeffs, ..self.clone() }
    }

    /// Contraction of the wedge part by a linear functional `φ` on `V`:
    /// `ι_φ(v_{i₁}∧…∧v_{i_p}) = Σ_k (−1)^(k−1) φ(v_{i_k}) v_{I∖i_k}`.
    pub fn contract(&self, phi: &[T]) -> Result<Self> {
        if phi.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "functional of length {} on a {}-dimensional space",
                phi.len(),
                self.ambient_dim
            )));
        }
        if self.p == 0 {
            return Err(Error::DegreeOutOfRange { p: 0, reason: "cannot contract a degree-0 tensor".into() });
        }
        let mut out = Self::zero(self.p - 1, self.ambient_dim, self.second_dim);
        for ((w, s), x) in &self.coeffs {
            for (k, &i) in w.iter().enumerate() {
                if phi[i].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = w.iter().copied().filter(|&j| j != i).collect();
                let c = x.clone() * phi[i].clone();
                out.add_term(&rest, *s, if k % 2 == 0 { c } else { -c })?;
            }
        }
        Ok(out)
    }
}

/// An alternating map `Λ²Q^h → Q^target_dim`, stored on pairs `i < j`.
///
/// Used for determinant maps, Koh–Stillman matrices, and (with
/// `target_dim = 1`) plain skew-symmetric scalar matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMap<T> {
    h: usize,
    target_dim: usize,
    values: BTreeMap<(usize, usize), SparseVec<T>>,
}

impl<T: Scalar> SkewMap<T> {
    pub fn zero(h: usize, target_dim: usize) -> Self {
        SkewMap { h, target_dim, values: BTreeMap::new() }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.h || j >= self.h {
            return Err(Error::IndexOutOfRange(format!("pair ({i},{j}) in a skew map of size {}", self.h)));
        }
        Ok(())
    }

    /// Sets the value on `eᵢ ∧ eⱼ` (and implicitly `−value` on `eⱼ ∧ eᵢ`).
    pub fn set(&mut self, i: usize, j: usize, value: SparseVec<T>) -> Result<()> {
        self.check(i, j)?;
        if let Some(&bad) = value.keys().find(|&&k| k >= self.target_dim) {
            return Err(Error::IndexOutOfRange(format!("value component {bad} >= {}", self.target_dim)));
        }
        if i == j {
            if value.is_empty() {
                return Ok(());
            }
            return Err(Error::Malformed(format!("nonzero diagonal entry ({i},{i}) in a skew map")));
        }
        let (key, value) =
            if i < j { ((i, j), value) } else { ((j, i), value.into_iter().map(|(k, x)| (k, -x)).collect()) };
        let value: SparseVec<T> = value.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if value.is_empty() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
        Ok(())
    }

    pub fn set_dense(&mut self, i: usize, j: usize, value: &[T]) -> Result<()> {
        if value.len() != self.target_dim {
            return Err(Error::DimensionMismatch(format!(
                "value of length {} in a skew map into dimension {}",
                value.len(),
                self.target_dim
            )));
        }
        self.set(i, j, to_sparse(value))
    }

    /// Value on `eᵢ ∧ eⱼ` with the alternating extension.
    pub fn get(&self, i: usize, j: usize) -> SparseVec<T> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => SparseVec::new(),
            Less => self.values.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => {
                self.values.get(&(j, i)).map(|v| v.iter().map(|(&k, x)| (k, -x.clone())).collect()).unwrap_or_default()
            }
        }
    }

    /// Nonzero stored values, `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &SparseVec<T>)> {
        self.values.iter().map(|(&k, v)| (k, v))
    }

    /// Value on `u ∧ v` for arbitrary vectors of length `h`.
    pub fn eval(&self, u: &[T], v: &[T]) -> Result<SparseVec<T>> {
        if u.len() != self.h || v.len() != self.h {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} for a skew map of size {}",
                u.len(),
                v.len(),
                self.h
            )));
        }
        let mut out = SparseVec::new();
        for (&(i, j), value) in &self.values {
            let c = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            if !c.is_zero() {
                add_scaled(&mut out, &c, value);
            }
        }
        Ok(out)
    }

    /// The linear map `d_u = d(u ∧ ·)` as a `target_dim × h` matrix.
    pub fn contraction_matrix(&self, u: &[T]) -> Result<SparseMat<T>> {
        if u.len() != self.h {
            return Err(Error::DimensionMismatch(format!("vector of length {} for size {}", u.len(), self.h)));
        }
        let mut m = SparseMat::zeros(self.target_dim, self.h);
        for (&(i, j), value) in &self.values {
            for (&k, x) in value {
                // d(u ∧ e_j) gets u_i x, d(u ∧ e_i) gets -u_j x
                if !u[i].is_zero() {
                    m.add_to(k, j, u[i].clone() * x.clone());
                }
                if !u[j].is_zero() {
                    m.add_to(k, i, -(u[j].clone() * x.clone()));
                }
            }
        }
        Ok(m)
    }

    /// Pullback along the linear map whose columns are `basis` (vectors of
    /// length `h`): the new map sends `eₐ ∧ e_b` to `d(basisₐ ∧ basis_b)`.
    pub fn pullback(&self, basis: &[Vec<T>]) -> Result<SkewMap<T>> {
        let mut out = SkewMap::zero(basis.len(), self.target_dim);
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                out.set(a, b, self.eval(&basis[a], &basis[b])?)?;
            }
        }
        Ok(out)
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> SkewMap<U> {
        let mut out = SkewMap::zero(self.h, self.target_dim);
        for (&(i, j), v) in &self.values {
            let image: SparseVec<U> = v.iter().map(|(&k, x)| (k, f(x))).filter(|(_, x)| !x.is_zero()).collect();
            if !image.is_empty() {
                out.values.insert((i, j), image);
            }
        }
        out
    }
}

/// Matrix of the Koszul map `Λ^q W ⊗ M → Λ^{q−1} W ⊗ N`,
/// `w_I ⊗ m ↦ Σ_k (−1)^(k−1) w_{I∖i_k} ⊗ act(i_k, m)`,
/// where `act(a, m)` is the action of the `a`-th basis vector of `W`.
pub fn koszul_map<T: Scalar>(
    w_dim: usize,
    q: usize,
    src_dim: usize,
    tgt_dim: usize,
    act: impl Fn(usize, usize) -> SparseVec<T>,
) -> SparseMat<T> {
    assert!(q >= 1, "Koszul map needs q >= 1");
    let source = WedgeBasis::new(w_dim, q);
    let target = WedgeBasis::new(w_dim, q - 1);
    let table: Vec<Vec<SparseVec<T>>> = (0..w_dim).map(|a| (0..src_dim).map(|m| act(a, m)).collect()).collect();
    let mut out = SparseMat::zeros(target.len() * tgt_dim, source.len() * src_dim);
    for (col_wedge, subset) in source.subsets().iter().enumerate() {
        for (k, &a) in subset.iter().enumerate() {
            let rest: Vec<usize> = subset.iter().copied().filter(|&b| b != a).collect();
            let row_wedge = target.index_of(&rest).expect("subset of a basis subset");
            for m in 0..src_dim {
                for (&n, x) in &table[a][m] {
                    let x = if k % 2 == 0 { x.clone() } else { -x.clone() };
                    out.add_to(row_wedge * tgt_dim + n, col_wedge * src_dim + m, x);
                }
            }
        }
    }
    out
}

/// Matrix of `δ: ΛᵖV ⊗ V₁ → Λ^{p−1}V ⊗ V₂` for `V = V₁`, products through `mult`.
pub fn koszul_differential<T: Scalar>(p: usize, v_dim: usize, mult: &MultTable<T>) -> Result<SparseMat<T>> {
    if mult.dim1() != v_dim {
        return Err(Error::DimensionMismatch(format!(
            "multiplication table on a {}-dimensional space, V of dimension {v_dim}",
            mult.dim1()
        )));
    }
    if p == 0 {
        return Err(Error::DegreeOutOfRange { p, reason: "the differential needs p >= 1".into() });
    }
    Ok(koszul_map(v_dim, p, v_dim, mult.dim2(), |a, s| mult.product(a, s).clone()))
}

/// Matrix of `Λ^{p+1}V → ΛᵖV ⊗ V`, whose image is the boundary space.
pub fn koszul_restriction<T: Scalar>(p: usize, v_dim: usize) -> SparseMat<T> {
    koszul_map(v_dim, p + 1, 1, v_dim, |a, _| SparseVec::from([(a, T::one())]))
}

/// `δ(c)` computed term by term (no matrix assembly).
pub fn apply_differential<T: Scalar>(mult: &MultTable<T>, c: &KoszulClass<T>) -> Result<KoszulClass<T>> {
    if c.ambient_dim() != mult.dim1() || c.second_dim() != mult.dim1() {
        return Err(Error::DimensionMismatch(format!(
            "tensor in Λ^p({}) ⊗ {} against a table on dimension {}",
            c.ambient_dim(),
            c.second_dim(),
            mult.dim1()
        )));
    }
    if c.p() == 0 {
        return Err(Error::DegreeOutOfRange { p: 0, reason: "the differential needs p >= 1".into() });
    }
    let mut out = KoszulClass::zero(c.p() - 1, c.ambient_dim(), mult.dim2());
    for (w, s, x) in c.terms() {
        for (k, &i) in w.iter().enumerate() {
            let rest: Vec<usize> = w.iter().copied().filter(|&j| j != i).collect();
            let x = if k % 2 == 0 { x.clone() } else { -x.clone() };
            for (&n, y) in mult.product(i, s) {
                out.add_term(&rest, n, x.clone() * y.clone())?;
            }
        }
    }
    Ok(out)
}

/// `v₁ ∧ … ∧ v_k` expanded in the lexicographic basis of `ΛᵏV`, as a map
/// from sorted subsets to coefficients.
pub fn wedge_of<T: Scalar>(vectors: &[Vec<T>], n: usize) -> BTreeMap<Vec<usize>, T> {
    let mut acc: BTreeMap<Vec<usize>, T> = BTreeMap::from([(Vec::new(), T::one())]);
    for v in vectors {
        assert_eq!(v.len(), n, "wedge factor of the wrong length");
        let mut next: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        for (subset, c) in &acc {
            for (j, a) in v.iter().enumerate() {
                if a.is_zero() || subset.contains(&j) {
                    continue;
                }
                // appending j then sorting: j moves past the factors larger than it
                let larger = subset.iter().filter(|&&i| i > j).count();
                let mut merged = subset.clone();
                merged.push(j);
                merged.sort_unstable();
                let term = c.clone() * a.clone();
                let term = if larger % 2 == 0 { term } else { -term };
                let entry = next.entry(merged).or_insert_with(T::zero);
                *entry = entry.clone() + term;
            }
        }
        next.retain(|_, x| !x.is_zero());
        acc = next;
    }
    acc
}

/// `Pf = a_ij·a_kl − a_ik·a_jl + a_il·a_jk` in `V₂`, products through `mult`.
///
/// Indices need only be distinct; the value is alternating in them.
/// A repeated index gives zero.
pub fn pfaffian4<T: Scalar>(a: &SkewMap<T>, idx: [usize; 4], mult: &MultTable<T>) -> Result<SparseVec<T>> {
    if a.target_dim() != mult.dim1() {
        return Err(Error::DimensionMismatch(format!(
            "skew map into dimension {} with a table on dimension {}",
            a.target_dim(),
            mult.dim1()
        )));
    }
    pfaffian4_with(a, idx, |x, y| mult.mul_sparse(x, y))
}

/// Scalar 4×4 Pfaffian of a skew map into a one-dimensional space.
pub fn pfaffian4_scalar<T: Scalar>(a: &SkewMap<T>, idx: [usize; 4]) -> Result<T> {
    if a.target_dim() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "scalar Pfaffian of a skew map into dimension {}",
            a.target_dim()
        )));
    }
    let v = pfaffian4_with(a, idx, |x, y| match (x.get(&0), y.get(&0)) {
        (Some(p), Some(q)) => SparseVec::from([(0, p.clone() * q.clone())]),
        _ => SparseVec::new(),
    })?;
    Ok(v.get(&0).cloned().unwrap_or_else(T::zero))
}

pub(crate) fn pfaffian4_with<T: Scalar>(
    a: &SkewMap<T>,
    idx: [usize; 4],
    product: impl Fn(&SparseVec<T>, &SparseVec<T>) -> SparseVec<T>,
) -> Result<SparseVec<T>> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= a.h()) {
        return Err(Error::IndexOutOfRange(format!("Pfaffian index {bad} in a matrix of size {}", a.h())));
    }
    let [i, j, k, l] = idx;
    let mut out = product(&a.get(i, j), &a.get(k, l));
    let second = product(&a.get(i, k), &a.get(j, l));
    let third = product(&a.get(i, l), &a.get(j, k));
    add_scaled(&mut out, &-T::one(), &second);
    add_scaled(&mut out, &T::one(), &third);
    Ok(out)
}

/// Smallest subspace `W ⊆ V` with `c ∈ ΛᵖW ⊗ M`, as an echelon-normalized
/// basis: the span of all contractions of `c` by `(p−1)`-fold wedges of dual
/// basis vectors.
pub fn support<T: Scalar>(c: &KoszulClass<T>) -> Result<Vec<Vec<T>>> {
    if c.is_zero() {
        return Err(Error::ZeroClass);
    }
    let n = c.ambient_dim();
    let mut contractions: BTreeMap<(Vec<usize>, usize), SparseVec<T>> = BTreeMap::new();
    for (w, s, x) in c.terms() {
        for (k, &i) in w.iter().enumerate() {
            let rest: Vec<usize> = w.iter().copied().filter(|&j| j != i).collect();
            let x = if k % 2 == 0 { x.clone() } else { -x.clone() };
            add_entry(contractions.entry((rest, s)).or_default(), i, x);
        }
    }
    Ok(Echelon::from_rows(n, contractions.into_values()).basis_dense())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, to_dense};
    use crate::scalar::from_int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn unit(n: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![r(0); n];
        v[i] = r(1);
        v
    }

    #[test]
    fn wedge_basis_is_lexicographic() {
        let b = WedgeBasis::new(4, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.subset(0), &[0, 1]);
        assert_eq!(b.subset(5), &[2, 3]);
        assert_eq!(b.index_of(&[1, 3]), Some(4));
        assert_eq!(WedgeBasis::new(3, 0).len(), 1);
        assert!(WedgeBasis::new(2, 3).is_empty());
    }

    #[test]
    fn conic_relation_is_a_cycle() {
        // rational(2): basis x^2, xy, y^2
        let mult = MultTable::<Rat>::rational(2).unwrap();
        let c = KoszulClass::from_terms(1, 3, 3, [(vec![0], 2, r(1)), (vec![1], 1, r(-1))]).unwrap();
        assert!(apply_differential(&mult, &c).unwrap().is_zero());
        let delta = koszul_differential(1, 3, &mult).unwrap();
        let basis = WedgeBasis::new(3, 1);
        assert!(delta.mul_sparse(&c.to_vector(&basis)).is_empty());
    }

    #[test]
    fn differential_shape() {
        let mult = MultTable::<Rat>::rational(1).unwrap();
        let delta = koszul_differential(2, 2, &mult).unwrap();
        // Λ²V ⊗ V₁ → V ⊗ V₂
        assert_eq!(delta.ncols(), 1 * 2);
        assert_eq!(delta.nrows(), 2 * 3);
        assert!(matches!(koszul_differential(1, 3, &mult), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn restriction_is_antisymmetrization() {
        let r2 = koszul_restriction::<Rat>(1, 2);
        // e1∧e2 ↦ e2⊗e1 − e1⊗e2, columns index Λ²V, rows V⊗V
        assert_eq!(r2.ncols(), 1);
        assert_eq!(r2.get(1, 0), r(-1)); // e1 ⊗ e2
        assert_eq!(r2.get(2, 0), r(1)); // e2 ⊗ e1
        assert_eq!(rank(&koszul_restriction::<Rat>(1, 3)), 3);
    }

    #[test]
    fn differential_kills_boundaries() {
        for d in 1..=4 {
            let mult = MultTable::<Rat>::rational(d).unwrap();
            for p in 1..=d {
                let delta = koszul_differential(p, d + 1, &mult).unwrap();
                let res = koszul_restriction::<Rat>(p, d + 1);
                assert!(delta.mul(&res).unwrap().is_zero(), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn matrix_and_termwise_differential_agree() {
        let mult = MultTable::<Rat>::rational(3).unwrap();
        let c =
            KoszulClass::from_terms(2, 4, 4, [(vec![0, 1], 3, r(2)), (vec![1, 3], 0, r(-1)), (vec![0, 2], 2, r(5))])
                .unwrap();
        let direct = apply_differential(&mult, &c).unwrap();
        let matrix = koszul_differential(2, 4, &mult).unwrap();
        let via_matrix = matrix.mul_sparse(&c.to_vector(&WedgeBasis::new(4, 2)));
        assert_eq!(direct.to_vector(&WedgeBasis::new(4, 1)), via_matrix);
    }

    #[test]
    fn pfaffian_examples() {
        let mult = MultTable::<Rat>::free_symmetric(1);
        let mut a = SkewMap::zero(4, 1);
        a.set_dense(0, 1, &[r(1)]).unwrap();
        a.set_dense(2, 3, &[r(1)]).unwrap();
        assert_eq!(pfaffian4(&a, [0, 1, 2, 3], &mult).unwrap(), SparseVec::from([(0, r(1))]));
        assert_eq!(pfaffian4_scalar(&a, [0, 1, 2, 3]).unwrap(), r(1));
        // odd permutation flips the sign
        assert_eq!(pfaffian4_scalar(&a, [1, 0, 2, 3]).unwrap(), r(-1));
        assert_eq!(pfaffian4_scalar(&a, [0, 0, 2, 3]).unwrap(), r(0));
        assert!(matches!(pfaffian4_scalar(&a, [0, 1, 2, 4]), Err(Error::IndexOutOfRange(_))));

        let mut zero_row = a.clone();
        zero_row.set_dense(0, 1, &[r(0)]).unwrap();
        assert_eq!(pfaffian4_scalar(&zero_row, [0, 1, 2, 3]).unwrap(), r(0));
    }

    #[test]
    fn support_examples() {
        // e1∧e2 ⊗ s
        let c = KoszulClass::from_terms(2, 4, 4, [(vec![0, 1], 3, r(1))]).unwrap();
        assert_eq!(support(&c).unwrap(), vec![unit(4, 0), unit(4, 1)]);
        // x²⊗y² − xy⊗xy
        let c = KoszulClass::from_terms(1, 3, 3, [(vec![0], 2, r(1)), (vec![1], 1, r(-1))]).unwrap();
        assert_eq!(support(&c).unwrap(), vec![unit(3, 0), unit(3, 1)]);
        // (e1∧e2 + e3∧e4) ⊗ s
        let c = KoszulClass::from_terms(2, 4, 4, [(vec![0, 1], 0, r(1)), (vec![2, 3], 0, r(1))]).unwrap();
        assert_eq!(support(&c).unwrap().len(), 4);
        assert!(matches!(support(&KoszulClass::<Rat>::zero(1, 2, 2)), Err(Error::ZeroClass)));
    }

    #[test]
    fn wedge_of_vectors_matches_minors() {
        let u = vec![r(1), r(2), r(0)];
        let v = vec![r(3), r(1), r(4)];
        let w = wedge_of(&[u, v], 3);
        assert_eq!(w[&vec![0, 1]], r(1 * 1 - 2 * 3));
        assert_eq!(w[&vec![0, 2]], r(1 * 4));
        assert_eq!(w[&vec![1, 2]], r(2 * 4));
    }

    #[test]
    fn skew_map_eval_and_contraction_agree() {
        let mut d = SkewMap::zero(3, 2);
        d.set_dense(0, 1, &[r(1), r(2)]).unwrap();
        d.set_dense(1, 2, &[r(0), r(3)]).unwrap();
        let u = vec![r(1), r(-1), r(2)];
        let v = vec![r(0), r(4), r(1)];
        let direct = d.eval(&u, &v).unwrap();
        let via = d.contraction_matrix(&u).unwrap().mul_vec(&v).unwrap();
        assert_eq!(to_dense(&direct, 2), via);
        assert_eq!(d.get(2, 1), SparseVec::from([(1, r(-3))]));
    }

    #[test]
    fn contraction_by_dual_vector() {
        let c = KoszulClass::from_terms(2, 3, 1, [(vec![0, 1], 0, r(1))]).unwrap();
        let out = c.contract(&unit(3, 1)).unwrap();
        // ι_{e2*}(e1∧e2) = −e1
        assert_eq!(out.coeff(&[0], 0), r(-1));
    }
}
