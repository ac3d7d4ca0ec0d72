//! Finitely presented (curve, line bundle) models.
//!
//! A model is exactly the data the weight-one Koszul groups consume: a basis
//! of `V = H⁰(L)` and the multiplication `V × V → H⁰(L²)`. Two families are
//! built in:
//!
//! * `rational(d)`: the rational normal curve of degree `d`; `V` is the space
//!   of binary forms of degree `d`, `H⁰(L²)` the forms of degree `2d`.
//! * `quadric_presented(n, I₂)`: `V` is the space of linear forms in `n`
//!   variables and `H⁰(L²)` is modelled as quadrics modulo `span(I₂)`. This is
//!   the true `H⁰(L²)` only for a projectively normal curve whose quadric
//!   ideal is all of `I₂`; that assumption belongs to whoever writes the model.

use crate::error::{Error, Result};
use crate::koszul::MixedComplex;
use crate::linalg::{self, add_scaled, to_dense, to_sparse, Echelon, SparseMat, SparseVec};
use crate::scalar::{from_int, Scalar};

/// Position of the unordered pair `{i, j}` (`i ≤ j`) in the row-major upper
/// triangle of an `n × n` matrix. Also the lexicographic index of the
/// monomial `xᵢxⱼ` among quadratic monomials.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i of the upper triangle hold n + (n-1) + ... + (n-i+1) entries
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Number of unordered pairs with repetition, `n(n+1)/2`.
pub fn sym2_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// A symmetric bilinear multiplication `V₁ × V₁ → V₂` on named bases.
#[derive(Clone, Debug, PartialEq)]
pub struct MultTable<T> {
    dim1: usize,
    dim2: usize,
    names1: Vec<String>,
    names2: Vec<String>,
    products: Vec<SparseVec<T>>,
}

impl<T: Scalar> MultTable<T> {
    /// `products[pair_index(i, j, dim1)]` is the product of basis vectors `i ≤ j`.
    pub fn new(names1: Vec<String>, names2: Vec<String>, products: Vec<SparseVec<T>>) -> Result<Self> {
        let dim1 = names1.len();
        let dim2 = names2.len();
        if products.len() != sym2_dim(dim1) {
            return Err(Error::DimensionMismatch(format!(
                "{} products for a {dim1}-dimensional space (expected {})",
                products.len(),
                sym2_dim(dim1)
            )));
        }
        if let Some(bad) = products.iter().flat_map(|p| p.keys()).find(|&&k| k >= dim2) {
            return Err(Error::IndexOutOfRange(format!("product component {bad} >= {dim2}")));
        }
        Ok(MultTable { dim1, dim2, names1, names2, products })
    }

    /// Binary forms of degree `d` multiplying into forms of degree `2d`.
    /// Basis vector `k` is `x^(d-k) y^k`.
    pub fn rational(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("rational model needs degree >= 1".into()));
        }
        let mut products = Vec::with_capacity(sym2_dim(d + 1));
        for i in 0..=d {
            for j in i..=d {
                products.push(SparseVec::from([(i + j, T::one())]));
            }
        }
        Self::new(binary_form_names(d), binary_form_names(2 * d), products)
    }

    /// Linear forms in `n` variables multiplying freely into `S²V`.
    pub fn free_symmetric(n: usize) -> Self {
        let products = (0..sym2_dim(n)).map(|k| SparseVec::from([(k, T::one())])).collect();
        Self::new(variable_names(n), quadric_monomial_names(n), products).expect("free symmetric table is consistent")
    }

    /// Linear forms in `n` variables multiplying into quadrics modulo `I₂`.
    ///
    /// The quotient basis consists of the monomials that are not pivots of
    /// the reduced echelon form of `I₂`, in lexicographic order.
    pub fn quadric_presented(n: usize, i2: &[SymMatrix<T>]) -> Result<Self> {
        let m = sym2_dim(n);
        let mut ech = Echelon::new(m);
        for (k, q) in i2.iter().enumerate() {
            if q.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "quadric {k} has size {} in a model with {n} variables",
                    q.n()
                )));
            }
            if !ech.insert(to_sparse(&q.polynomial())) {
                return Err(Error::Dependent(format!("quadric {k} lies in the span of the previous ones")));
            }
        }
        let pivots: std::collections::BTreeSet<usize> = ech.pivots().collect();
        let quotient: Vec<usize> = (0..m).filter(|k| !pivots.contains(k)).collect();
        let mut position = vec![usize::MAX; m];
        for (q, &k) in quotient.iter().enumerate() {
            position[k] = q;
        }
        let all_names = quadric_monomial_names(n);
        let names2 = quotient.iter().map(|&k| all_names[k].clone()).collect();
        let products = (0..m)
            .map(|k| ech.reduce(SparseVec::from([(k, T::one())])).into_iter().map(|(c, x)| (position[c], x)).collect())
            .collect();
        Self::new(variable_names(n), names2, products)
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn dim2(&self) -> usize {
        self.dim2
    }

    pub fn names1(&self) -> &[String] {
        &self.names1
    }

    pub fn names2(&self) -> &[String] {
        &self.names2
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec<T> {
        &self.products[pair_index(i, j, self.dim1)]
    }

    pub fn mul_sparse(&self, a: &SparseVec<T>, b: &SparseVec<T>) -> SparseVec<T> {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                add_scaled(&mut out, &(x.clone() * y.clone()), self.product(i, j));
            }
        }
        out
    }

    pub fn mul(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        if a.len() != self.dim1 || b.len() != self.dim1 {
            return Err(Error::DimensionMismatch(format!(
                "factors of length {} and {} in a {}-dimensional space",
                a.len(),
                b.len(),
                self.dim1
            )));
        }
        Ok(to_dense(&self.mul_sparse(&to_sparse(a), &to_sparse(b)), self.dim2))
    }

    /// The table as a bilinear map, forgetting symmetry.
    pub fn as_bilinear(&self) -> BilinearTable<T> {
        let mut products = Vec::with_capacity(self.dim1 * self.dim1);
        for i in 0..self.dim1 {
            for j in 0..self.dim1 {
                products.push(self.product(i, j).clone());
            }
        }
        BilinearTable { left_dim: self.dim1, right_dim: self.dim1, target_dim: self.dim2, products }
    }

    /// Whether a nonzero vector squares to zero (only meaningful as a sanity
    /// check on small examples; decides `f·f = 0` for one `f`).
    pub fn squares_to_zero(&self, f: &[T]) -> Result<bool> {
        Ok(self.mul(f, f)?.iter().all(|x| x.is_zero()))
    }
}

/// An arbitrary bilinear map `A × B → C` given on bases.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearTable<T> {
    left_dim: usize,
    right_dim: usize,
    target_dim: usize,
    products: Vec<SparseVec<T>>,
}

impl<T: Scalar> BilinearTable<T> {
    /// `products[i * right_dim + j]` is the image of `(aᵢ, bⱼ)`.
    pub fn new(left_dim: usize, right_dim: usize, target_dim: usize, products: Vec<SparseVec<T>>) -> Result<Self> {
        if products.len() != left_dim * right_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} products for a {left_dim}x{right_dim} table",
                products.len()
            )));
        }
        if let Some(bad) = products.iter().flat_map(|p| p.keys()).find(|&&k| k >= target_dim) {
            return Err(Error::IndexOutOfRange(format!("product component {bad} >= {target_dim}")));
        }
        Ok(BilinearTable { left_dim, right_dim, target_dim, products })
    }

    pub fn from_fn(
        left_dim: usize,
        right_dim: usize,
        target_dim: usize,
        mut f: impl FnMut(usize, usize) -> SparseVec<T>,
    ) -> Result<Self> {
        let mut products = Vec::with_capacity(left_dim * right_dim);
        for i in 0..left_dim {
            for j in 0..right_dim {
                products.push(f(i, j));
            }
        }
        Self::new(left_dim, right_dim, target_dim, products)
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec<T> {
        &self.products[i * self.right_dim + j]
    }

    pub fn apply_sparse(&self, a: &SparseVec<T>, b: &SparseVec<T>) -> SparseVec<T> {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                add_scaled(&mut out, &(x.clone() * y.clone()), self.product(i, j));
            }
        }
        out
    }

    pub fn apply(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        if a.len() != self.left_dim || b.len() != self.right_dim {
            return Err(Error::DimensionMismatch(format!(
                "arguments of length {} and {} for a {}x{} table",
                a.len(),
                b.len(),
                self.left_dim,
                self.right_dim
            )));
        }
        Ok(to_dense(&self.apply_sparse(&to_sparse(a), &to_sparse(b)), self.target_dim))
    }

    /// The linear map `A ⊗ B → C` as a `target × (left·right)` matrix.
    pub fn flatten(&self) -> SparseMat<T> {
        SparseMat::from_columns(self.target_dim, &self.products)
    }
}

/// Symmetric matrix stored by its upper triangle (row-major, `i ≤ j`).
///
/// As a quadric it is the Gram matrix: `q(x) = Σ gᵢⱼ xᵢ xⱼ` over all ordered
/// pairs, so the coefficient of `xᵢxⱼ` (`i < j`) is `2gᵢⱼ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    upper: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn from_upper(n: usize, upper: Vec<T>) -> Result<Self> {
        if upper.len() != sym2_dim(n) {
            return Err(Error::DimensionMismatch(format!(
                "{} upper-triangular entries for size {n} (expected {})",
                upper.len(),
                sym2_dim(n)
            )));
        }
        Ok(SymMatrix { n, upper })
    }

    /// From polynomial coefficients on the monomials `xᵢxⱼ`, `i ≤ j`, in
    /// lexicographic order.
    pub fn from_polynomial(n: usize, coeffs: &[T]) -> Result<Self> {
        if coeffs.len() != sym2_dim(n) {
            return Err(Error::DimensionMismatch(format!("{} quadric coefficients for {n} variables", coeffs.len())));
        }
        let half = T::one() / from_int(2);
        let mut upper = Vec::with_capacity(coeffs.len());
        for i in 0..n {
            for j in i..n {
                let c = coeffs[pair_index(i, j, n)].clone();
                upper.push(if i == j { c } else { c * half.clone() });
            }
        }
        Ok(SymMatrix { n, upper })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.upper[pair_index(i, j, self.n)].clone()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Coefficients on the monomials `xᵢxⱼ`, `i ≤ j`.
    pub fn polynomial(&self) -> Vec<T> {
        let two: T = from_int(2);
        let mut out = Vec::with_capacity(self.upper.len());
        for i in 0..self.n {
            for j in i..self.n {
                let g = self.get(i, j);
                out.push(if i == j { g } else { g * two.clone() });
            }
        }
        out
    }
}

/// Rank of the Gram matrix of a quadric.
pub fn quadric_rank<T: Scalar>(q: &SymMatrix<T>) -> usize {
    linalg::rank(&SparseMat::from_dense(&q.to_dense()).expect("square"))
}

/// The two built-in families of models.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind<T> {
    Rational { degree: usize },
    QuadricPresented { n_vars: usize, i2: Vec<SymMatrix<T>> },
}

/// A presentation of a curve with a line bundle, plus optional user-supplied
/// data that cannot be synthesized from the presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel<T> {
    pub kind: ModelKind<T>,
    /// `W ⊗ H⁰(K_X(−B)) → H⁰(K_X ⊗ L(−2B))`.
    pub canonical_mult: Option<BilinearTable<T>>,
    /// Module data for the mixed Koszul complex dual to `coker μ`.
    pub dual_complex: Option<MixedComplex<T>>,
}

impl<T: Scalar> CurveModel<T> {
    pub fn rational(degree: usize) -> Self {
        CurveModel { kind: ModelKind::Rational { degree }, canonical_mult: None, dual_complex: None }
    }

    pub fn quadric_presented(n_vars: usize, i2: Vec<SymMatrix<T>>) -> Self {
        CurveModel { kind: ModelKind::QuadricPresented { n_vars, i2 }, canonical_mult: None, dual_complex: None }
    }

    pub fn mult_table(&self) -> Result<MultTable<T>> {
        match &self.kind {
            ModelKind::Rational { degree } => MultTable::rational(*degree),
            ModelKind::QuadricPresented { n_vars, i2 } => MultTable::quadric_presented(*n_vars, i2),
        }
    }

    pub fn rational_degree(&self) -> Option<usize> {
        match self.kind {
            ModelKind::Rational { degree } => Some(degree),
            ModelKind::QuadricPresented { .. } => None,
        }
    }
}

pub fn binary_form_names(d: usize) -> Vec<String> {
    (0..=d)
        .map(|k| {
            let x = match d - k {
                0 => String::new(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            };
            let y = match k {
                0 => String::new(),
                1 => "y".to_string(),
                e => format!("y^{e}"),
            };
            match (x.is_empty(), y.is_empty()) {
                (true, true) => "1".to_string(),
                (false, true) => x,
                (true, false) => y,
                (false, false) => format!("{x}*{y}"),
            }
        })
        .collect()
}

pub fn variable_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn quadric_monomial_names(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(sym2_dim(n));
    for i in 1..=n {
        for j in i..=n {
            out.push(if i == j { format!("x{i}^2") } else { format!("x{i}*x{j}") });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn elms_quadric() -> SymMatrix<Rat> {
        // x1^2 - x2*x5 + x3*x4
        let mut coeffs = vec![r(0); 15];
        coeffs[pair_index(0, 0, 5)] = r(1);
        coeffs[pair_index(1, 4, 5)] = r(-1);
        coeffs[pair_index(2, 3, 5)] = r(1);
        SymMatrix::from_polynomial(5, &coeffs).unwrap()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 4;
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                assert_eq!(pair_index(i, j, n), k);
                assert_eq!(pair_index(j, i, n), k);
                k += 1;
            }
        }
    }

    #[test]
    fn rational_conic_table() {
        let m = MultTable::<Rat>::rational(2).unwrap();
        assert_eq!((m.dim1(), m.dim2()), (3, 5));
        // x^2 * y^2 = x^2 y^2
        assert_eq!(m.product(0, 2), &SparseVec::from([(2, r(1))]));
        assert_eq!(m.names2()[2], "x^2*y^2");
    }

    #[test]
    fn quadric_presented_dimensions() {
        let m = MultTable::quadric_presented(5, &[elms_quadric()]).unwrap();
        assert_eq!((m.dim1(), m.dim2()), (5, 14));
        let free = MultTable::<Rat>::quadric_presented(4, &[]).unwrap();
        assert_eq!(free.dim2(), 10);
        assert_eq!(free, MultTable::free_symmetric(4));
    }

    #[test]
    fn quadric_projection_kills_the_relation() {
        let q = elms_quadric();
        let m = MultTable::quadric_presented(5, std::slice::from_ref(&q)).unwrap();
        // evaluate q through the table: sum_{i<=j} coeff * x_i x_j
        let mut acc = SparseVec::new();
        for (k, c) in q.polynomial().iter().enumerate() {
            let (i, j) = (0..5).flat_map(|i| (i..5).map(move |j| (i, j))).nth(k).unwrap();
            add_scaled(&mut acc, c, m.product(i, j));
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn dependent_generators_rejected() {
        let q = elms_quadric();
        let doubled = SymMatrix::from_upper(5, q.upper().iter().map(|x| x.clone() * r(2)).collect()).unwrap();
        assert!(matches!(MultTable::quadric_presented(5, &[q, doubled]), Err(Error::Dependent(_))));
    }

    #[test]
    fn quadric_rank_examples() {
        assert_eq!(quadric_rank(&elms_quadric()), 5);
        // xy in two variables
        assert_eq!(quadric_rank(&SymMatrix::from_polynomial(2, &[r(0), r(1), r(0)]).unwrap()), 2);
        // x^2
        assert_eq!(quadric_rank(&SymMatrix::from_polynomial(1, &[r(1)]).unwrap()), 1);
    }

    #[test]
    fn binary_forms_are_a_domain() {
        let m = MultTable::<Rat>::rational(3).unwrap();
        let f = vec![r(1), r(-2), r(0), r(5)];
        assert!(!m.squares_to_zero(&f).unwrap());
    }
}
