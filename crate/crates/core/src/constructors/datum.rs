//! Determinant data and the classes they produce.

use crate::binary::{BinaryForm, Divisor1D};
use crate::error::{Error, Result};
use crate::koszul::is_boundary_from;
use crate::linalg::{self, add_scaled, SparseMat, SparseVec};
use crate::models::{BilinearTable, MultTable};
use crate::multilinear::{apply_differential, pfaffian4, KoszulClass, SkewMap};
use crate::scalar::Scalar;
use crate::Rat;

use super::ks::KSMatrix;

/// An alternating map `d: Λ²H → V₁` satisfying the four-term relation.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminantDatum<T> {
    d: SkewMap<T>,
}

impl<T: Scalar> DeterminantDatum<T> {
    /// Checks the four-term relation against `mult`.
    pub fn new(d: SkewMap<T>, mult: &MultTable<T>) -> Result<Self> {
        if let Some(idx) = four_term_violation(&d, mult)? {
            return Err(Error::FourTermViolation(idx));
        }
        Ok(DeterminantDatum { d })
    }

    /// Skips the four-term check, for deliberately broken data and for
    /// callers that validate separately.
    pub fn new_unchecked(d: SkewMap<T>) -> Self {
        DeterminantDatum { d }
    }

    pub fn h(&self) -> usize {
        self.d.h()
    }

    pub fn d(&self) -> &SkewMap<T> {
        &self.d
    }

    /// The pullback datum along `basis` (vectors of `H`).
    pub fn pullback(&self, basis: &[Vec<T>]) -> Result<Self> {
        Ok(DeterminantDatum { d: self.d.pullback(basis)? })
    }
}

/// First basis quadruple `i < j < k < l` with
/// `d(eᵢ∧eⱼ)d(e_k∧e_l) − d(eᵢ∧e_k)d(eⱼ∧e_l) + d(eᵢ∧e_l)d(eⱼ∧e_k) ≠ 0` in `V₂`.
///
/// The expression is multilinear and alternating, so basis quadruples of
/// distinct indices suffice.
pub fn four_term_violation<T: Scalar>(d: &SkewMap<T>, mult: &MultTable<T>) -> Result<Option<[usize; 4]>> {
    let h = d.h();
    for i in 0..h {
        for j in i + 1..h {
            for k in j + 1..h {
                for l in k + 1..h {
                    if !pfaffian4(d, [i, j, k, l], mult)?.is_empty() {
                        return Ok(Some([i, j, k, l]));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_four_term<T: Scalar>(datum: &DeterminantDatum<T>, mult: &MultTable<T>) -> Result<bool> {
    Ok(four_term_violation(datum.d(), mult)?.is_none())
}

/// Two spaces of sections with their product pairing into `V₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDatum<T> {
    mult12: BilinearTable<T>,
}

impl<T: Scalar> SplitDatum<T> {
    pub fn new(mult12: BilinearTable<T>) -> Result<Self> {
        if mult12.left_dim() < 2 || mult12.right_dim() < 2 {
            return Err(Error::Precondition(format!(
                "both line bundles need at least two sections, got {} and {}",
                mult12.left_dim(),
                mult12.right_dim()
            )));
        }
        Ok(SplitDatum { mult12 })
    }

    /// `O(d₁) ⊕ O(d₂)` on the line, inside `rational(d₁ + d₂)`.
    pub fn rational(d1: usize, d2: usize) -> Result<Self> {
        Self::new(BilinearTable::from_fn(d1 + 1, d2 + 1, d1 + d2 + 1, |a, b| SparseVec::from([(a + b, T::one())]))?)
    }

    pub fn mult12(&self) -> &BilinearTable<T> {
        &self.mult12
    }

    /// `r₁ + 1`.
    pub fn dim1(&self) -> usize {
        self.mult12.left_dim()
    }

    /// `r₂ + 1`.
    pub fn dim2(&self) -> usize {
        self.mult12.right_dim()
    }

    pub fn h(&self) -> usize {
        self.dim1() + self.dim2()
    }

    /// Index in `H` of the `k`-th section of the first summand.
    pub fn first(&self, k: usize) -> usize {
        k
    }

    /// Index in `H` of the `k`-th section of the second summand.
    pub fn second(&self, k: usize) -> usize {
        self.dim1() + k
    }
}

/// `H = H⁰(L₁) ⊕ H⁰(L₂)` with `d((a₁,a₂)∧(b₁,b₂)) = a₁·b₂ − b₁·a₂`.
pub fn datum_from_split<T: Scalar>(s: &SplitDatum<T>) -> Result<DeterminantDatum<T>> {
    let mut d = SkewMap::zero(s.h(), s.mult12.target_dim());
    for a in 0..s.dim1() {
        for b in 0..s.dim2() {
            d.set(s.first(a), s.second(b), s.mult12.product(a, b).clone())?;
        }
    }
    Ok(DeterminantDatum::new_unchecked(d))
}

/// A class `γ(W, t)` together with the data it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction<T> {
    pub class: KoszulClass<T>,
    /// `d_t(u₁), …, d_t(u_{p+2})`, a basis of `W`.
    pub w: Vec<Vec<T>>,
    pub ks_matrix: KSMatrix<T>,
}

/// Checks the hypotheses shared by the builder and the detector, and
/// returns `W = d_t(U)` in the order of `U`.
fn marked_images<T: Scalar>(datum: &DeterminantDatum<T>, t: &[T], u: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let h = datum.h();
    if t.len() != h || u.iter().any(|v| v.len() != h) {
        return Err(Error::DimensionMismatch(format!("vectors of H must have length {h}")));
    }
    if u.len() < 3 {
        return Err(Error::DegreeOutOfRange {
            p: u.len().saturating_sub(2),
            reason: "dim U = p + 2 needs p >= 1".into(),
        });
    }
    let n = datum.d().target_dim();
    let w: Vec<Vec<T>> =
        u.iter().map(|v| datum.d().eval(t, v).map(|x| linalg::to_dense(&x, n))).collect::<Result<_>>()?;
    if linalg::span_rank(&w, n) != u.len() {
        return Err(Error::Precondition("U meets the kernel of d_t (or U is dependent)".into()));
    }
    Ok(w)
}

/// `γ(W,t) = Σ_{i<j} (−1)^{i+j} w₂∧…ŵᵢ…ŵⱼ…∧w_{p+3} ⊗ d(eᵢ∧eⱼ)`, with
/// `e₁ = t`, `e₂, …, e_{p+3}` the basis of `U` and `w_k = d(t∧e_k)`.
pub fn build_voisin_class<T: Scalar>(
    datum: &DeterminantDatum<T>,
    t: &[T],
    u: &[Vec<T>],
    mult: &MultTable<T>,
) -> Result<Construction<T>> {
    let w = marked_images(datum, t, u)?;
    let n = datum.d().target_dim();
    if mult.dim1() != n {
        return Err(Error::DimensionMismatch(format!(
            "d lands in dimension {n}, the model has dim V = {}",
            mult.dim1()
        )));
    }
    let ks_matrix = KSMatrix::from_parts(&w, |i, j| datum.d().eval(&u[i], &u[j]))?;
    let class = ks_matrix.class()?;
    if !apply_differential(mult, &class)?.is_zero() {
        return Err(Error::NotACycle);
    }
    Ok(Construction { class, w, ks_matrix })
}

/// A functional `h` on `U` (coordinates in the given basis) with
/// `d(u₁∧u₂) = h(u₂)d_t(u₁) − h(u₁)d_t(u₂)` for all `u₁, u₂ ∈ U`, if any.
pub fn split_detect<T: Scalar>(datum: &DeterminantDatum<T>, t: &[T], u: &[Vec<T>]) -> Result<Option<Vec<T>>> {
    let w = marked_images(datum, t, u)?;
    let n = datum.d().target_dim();
    let k = u.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut system = SparseMat::zeros(pairs.len() * n, k);
    let mut rhs = vec![T::zero(); pairs.len() * n];
    for (row, &(a, b)) in pairs.iter().enumerate() {
        for s in 0..n {
            system.add_to(row * n + s, b, w[a][s].clone());
            system.add_to(row * n + s, a, -w[b][s].clone());
        }
        for (s, x) in datum.d().eval(&u[a], &u[b])? {
            rhs[row * n + s] = x;
        }
    }
    linalg::solve(&system, &rhs)
}

/// Whether `γ(W,t)` is a boundary from `Λ^{p+1}W`; the property the
/// detector decides.
pub fn is_coboundary_from_w<T: Scalar>(c: &Construction<T>) -> Result<bool> {
    is_boundary_from(&c.class, &c.w)
}

/// The Green–Lazarsfeld class of the sections `s₁ ∈ H⁰(L₁)`, `s₂ ∈ H⁰(L₂)`
/// (basis indices): `t = (s₁, s₂)` and `U` spanned by every basis vector of
/// `H` except `(s₁, 0)`.
///
/// The base divisor of `(s₁, s₂)` is assumed to be zero; if `d_t` is not
/// injective on `U` this is reported as an unhandled base locus.
pub fn build_gl_class<T: Scalar>(
    s: &SplitDatum<T>,
    s1: usize,
    s2: usize,
    mult: &MultTable<T>,
) -> Result<Construction<T>> {
    if s1 >= s.dim1() || s2 >= s.dim2() {
        return Err(Error::IndexOutOfRange(format!(
            "sections ({s1}, {s2}) of spaces of dims {} and {}",
            s.dim1(),
            s.dim2()
        )));
    }
    let h = s.h();
    let unit = |i: usize| -> Vec<T> { (0..h).map(|j| if i == j { T::one() } else { T::zero() }).collect() };
    let mut t = unit(s.first(s1));
    t[s.second(s2)] = T::one();
    let u: Vec<Vec<T>> = (0..h).filter(|&i| i != s.first(s1)).map(unit).collect();
    let datum = datum_from_split(s)?;
    let expected = s.dim1() + s.dim2() - 1;
    let w = u
        .iter()
        .map(|v| datum.d().eval(&t, v).map(|x| linalg::to_dense(&x, s.mult12.target_dim())))
        .collect::<Result<Vec<_>>>()?;
    let rank = linalg::span_rank(&w, s.mult12.target_dim());
    if rank != expected {
        return Err(Error::BaseLocus {
            degree: expected - rank,
            divisor: format!("dim W = {rank} instead of r1 + r2 + 1 = {expected}"),
        });
    }
    build_voisin_class(&datum, &t, &u, mult)
}

/// Green–Lazarsfeld class for `O(d₁) ⊕ O(d₂)` on `rational(d₁ + d₂)`,
/// sections given by monomial index (`k` is `x^{dᵢ−k}y^k`). A common
/// factor of the two sections is reported with its divisor.
pub fn build_gl_class_rational(d1: usize, d2: usize, s1: usize, s2: usize) -> Result<Construction<Rat>> {
    if s1 > d1 || s2 > d2 {
        return Err(Error::IndexOutOfRange(format!("monomials {s1}, {s2} in degrees {d1}, {d2}")));
    }
    let monomial = |d: usize, k: usize| {
        BinaryForm::new(
            (0..=d).map(|j| if j == k { Rat::from_integer(1.into()) } else { Rat::from_integer(0.into()) }).collect(),
        )
    };
    let common = monomial(d1, s1)?.gcd(&monomial(d2, s2)?);
    if common.degree() > 0 {
        return Err(Error::BaseLocus { degree: common.degree(), divisor: Divisor1D::of_form(&common)?.to_string() });
    }
    let mult = MultTable::rational(d1 + d2)?;
    build_gl_class(&SplitDatum::rational(d1, d2)?, s1, s2, &mult)
}

/// Dimension of the span of the cohomology classes of `classes`.
pub fn gl_span<T: Scalar>(mult: &MultTable<T>, classes: &[KoszulClass<T>], p: usize) -> Result<usize> {
    if let Some(bad) = classes.iter().find(|c| c.p() != p) {
        return Err(Error::DimensionMismatch(format!("class of degree {} in a list of degree {p}", bad.p())));
    }
    if classes.is_empty() {
        return Ok(0);
    }
    let n = mult.dim1();
    let basis = crate::multilinear::WedgeBasis::new(n, p);
    for c in classes {
        if !apply_differential(mult, c)?.is_zero() {
            return Err(Error::NotACycle);
        }
    }
    let boundary = crate::multilinear::koszul_restriction::<T>(p, n);
    let mut span = linalg::Echelon::from_rows(boundary.nrows(), boundary.columns());
    let base = span.rank();
    for c in classes {
        span.insert(c.to_vector(&basis));
    }
    Ok(span.rank() - base)
}

/// Adds `λ·t` to a vector, a helper for building data inside one summand.
pub fn shifted<T: Scalar>(v: &[T], t: &[T], lambda: &T) -> Vec<T> {
    let mut out = linalg::to_sparse(v);
    add_scaled(&mut out, lambda, &linalg::to_sparse(t));
    linalg::to_dense(&out, v.len())
}
