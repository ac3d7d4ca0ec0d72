//! Weight-one Koszul cohomology groups and tests on individual classes.
//!
//! `K_{p,1}` is the middle cohomology of
//! `Λ^{p+1}V → ΛᵖV ⊗ V₁ → Λ^{p−1}V ⊗ V₂`. Cycle bases are reported as
//! representatives reduced against the boundary space, so they are a
//! canonical function of the input.

use crate::error::{Error, Result};
use crate::linalg::{self, to_sparse, Echelon, SparseMat, SparseVec};
use crate::models::{BilinearTable, MultTable};
use crate::multilinear::{
    apply_differential, koszul_differential, koszul_map, koszul_restriction, support, wedge_of, KoszulClass, WedgeBasis,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct KoszulGroupReport<T> {
    pub p: usize,
    pub dim: usize,
    pub cycle_basis: Vec<KoszulClass<T>>,
    pub boundary_dim: usize,
    pub kernel_dim: usize,
}

/// A linearly independent list of vectors in `V₁`, stored echelon-normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSpec<T> {
    basis: Vec<Vec<T>>,
    ambient_dim: usize,
}

impl<T: Scalar> SubspaceSpec<T> {
    /// Rejects dependent input; the stored basis is the reduced echelon form.
    pub fn new(vectors: &[Vec<T>], ambient_dim: usize) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a space of dimension {ambient_dim}",
                bad.len()
            )));
        }
        let basis = linalg::echelon_basis(vectors, ambient_dim);
        if basis.len() != vectors.len() {
            return Err(Error::Dependent(format!(
                "{} vectors span only a {}-dimensional subspace",
                vectors.len(),
                basis.len()
            )));
        }
        Ok(SubspaceSpec { basis, ambient_dim })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }
}

/// Koszul complex of a module over `Sym W` in three consecutive degrees:
/// `Λ^{p+1}W ⊗ M₀ → ΛᵖW ⊗ M₁ → Λ^{p−1}W ⊗ M₂`.
///
/// `low` is the action `W × M₀ → M₁`, `high` the action `W × M₁ → M₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedComplex<T> {
    pub low: BilinearTable<T>,
    pub high: BilinearTable<T>,
}

impl<T: Scalar> MixedComplex<T> {
    pub fn new(low: BilinearTable<T>, high: BilinearTable<T>) -> Result<Self> {
        if low.left_dim() != high.left_dim() {
            return Err(Error::Inconsistent(format!(
                "actions of {}- and {}-dimensional spaces",
                low.left_dim(),
                high.left_dim()
            )));
        }
        if low.target_dim() != high.right_dim() {
            return Err(Error::Inconsistent(format!(
                "low action lands in dimension {} but high action starts from {}",
                low.target_dim(),
                high.right_dim()
            )));
        }
        Ok(MixedComplex { low, high })
    }

    pub fn w_dim(&self) -> usize {
        self.low.left_dim()
    }

    /// Whether `a·(b·m) = b·(a·m)` for all basis vectors, i.e. the two
    /// maps compose to zero.
    pub fn actions_commute(&self) -> bool {
        let w = self.w_dim();
        for a in 0..w {
            for b in a + 1..w {
                for m in 0..self.low.right_dim() {
                    let ab = apply_left(&self.high, a, self.low.product(b, m));
                    let ba = apply_left(&self.high, b, self.low.product(a, m));
                    if ab != ba {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn apply_left<T: Scalar>(table: &BilinearTable<T>, a: usize, m: &SparseVec<T>) -> SparseVec<T> {
    table.apply_sparse(&SparseVec::from([(a, T::one())]), m)
}

fn check_range(p: usize, w_dim: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::DegreeOutOfRange { p, reason: "K_{p,1} needs p >= 1".into() });
    }
    if p + 1 > w_dim {
        return Err(Error::DegreeOutOfRange { p, reason: format!("needs p + 1 <= {w_dim}") });
    }
    Ok(())
}

/// Middle cohomology of `boundary` followed by `differential`, with a
/// canonical cycle basis (kernel vectors reduced against boundaries).
fn middle_cohomology<T: Scalar>(
    boundary: &SparseMat<T>,
    differential: &SparseMat<T>,
) -> (usize, usize, Vec<SparseVec<T>>) {
    let kernel = linalg::kernel_basis(differential);
    let kernel_dim = kernel.len();
    let mut span = Echelon::from_rows(boundary.nrows(), boundary.columns());
    let boundary_dim = span.rank();
    let mut cycles = Vec::new();
    for v in kernel {
        let reduced = span.reduce(to_sparse(&v));
        if !reduced.is_empty() {
            span.insert(reduced.clone());
            cycles.push(reduced);
        }
    }
    (kernel_dim, boundary_dim, cycles)
}

/// `K_{p,1}` of the model behind `mult`.
pub fn compute_k_p1<T: Scalar>(mult: &MultTable<T>, p: usize) -> Result<KoszulGroupReport<T>> {
    let n = mult.dim1();
    check_range(p, n)?;
    let delta = koszul_differential(p, n, mult)?;
    let boundary = koszul_restriction::<T>(p, n);
    let (kernel_dim, boundary_dim, cycles) = middle_cohomology(&boundary, &delta);
    let basis = WedgeBasis::new(n, p);
    Ok(KoszulGroupReport {
        p,
        dim: kernel_dim - boundary_dim,
        cycle_basis: cycles.iter().map(|v| KoszulClass::from_vector(&basis, n, v)).collect(),
        boundary_dim,
        kernel_dim,
    })
}

/// `K_{p,1}(X, L, W)`: cycles in `ΛᵖW ⊗ V₁` modulo boundaries from `Λ^{p+1}W`.
/// Cycle representatives are returned as tensors in `ΛᵖV ⊗ V₁`.
pub fn compute_k_p1_subspace<T: Scalar>(
    mult: &MultTable<T>,
    p: usize,
    w: &SubspaceSpec<T>,
) -> Result<KoszulGroupReport<T>> {
    let n = mult.dim1();
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!("subspace of a {}-dim space, V has dim {n}", w.ambient_dim())));
    }
    let k = w.dim();
    check_range(p, k)?;
    let ws: Vec<SparseVec<T>> = w.basis().iter().map(|v| to_sparse(v)).collect();
    let delta = koszul_map(k, p, n, mult.dim2(), |a, s| mult.mul_sparse(&ws[a], &SparseVec::from([(s, T::one())])));
    let boundary = koszul_map(k, p + 1, 1, n, |a, _| ws[a].clone());
    let (kernel_dim, boundary_dim, cycles) = middle_cohomology(&boundary, &delta);
    let w_basis = WedgeBasis::new(k, p);
    let cycle_basis = cycles
        .iter()
        .map(|v| push_forward(&KoszulClass::from_vector(&w_basis, n, v), w.basis()))
        .collect::<Result<Vec<_>>>()?;
    Ok(KoszulGroupReport { p, dim: kernel_dim - boundary_dim, cycle_basis, boundary_dim, kernel_dim })
}

/// Image of a tensor in `ΛᵖW ⊗ M` (coordinates on a basis of `W`) in
/// `ΛᵖV ⊗ M`, given the basis of `W` as vectors of `V`.
pub fn push_forward<T: Scalar>(c: &KoszulClass<T>, w_basis: &[Vec<T>]) -> Result<KoszulClass<T>> {
    let n = w_basis.first().map_or(0, Vec::len);
    let mut out = KoszulClass::zero(c.p(), n, c.second_dim());
    for (wedge, s, x) in c.terms() {
        let factors: Vec<Vec<T>> = wedge.iter().map(|&a| w_basis[a].clone()).collect();
        for (subset, y) in wedge_of(&factors, n) {
            out.add_term(&subset, s, x.clone() * y)?;
        }
    }
    Ok(out)
}

/// Dimension of the middle cohomology of a mixed complex.
///
/// `p = 0` gives `M₁ / W·M₀`; for `p + 1 > dim W` the boundary space is zero.
pub fn compute_k_p1_mixed<T: Scalar>(data: &MixedComplex<T>, p: usize) -> Result<KoszulGroupReport<T>> {
    if !data.actions_commute() {
        return Err(Error::Inconsistent("the actions of W do not commute".into()));
    }
    let w = data.w_dim();
    if p > w {
        return Err(Error::DegreeOutOfRange { p, reason: format!("Λ^p W vanishes for dim W = {w}") });
    }
    let m0 = data.low.right_dim();
    let m1 = data.low.target_dim();
    let m2 = data.high.target_dim();
    let middle = WedgeBasis::new(w, p).len() * m1;
    let boundary = if p < w {
        koszul_map(w, p + 1, m0, m1, |a, m| data.low.product(a, m).clone())
    } else {
        SparseMat::zeros(middle, 0)
    };
    let differential = if p >= 1 {
        koszul_map(w, p, m1, m2, |a, m| data.high.product(a, m).clone())
    } else {
        SparseMat::zeros(0, middle)
    };
    let (kernel_dim, boundary_dim, cycles) = middle_cohomology(&boundary, &differential);
    let basis = WedgeBasis::new(w, p);
    Ok(KoszulGroupReport {
        p,
        dim: kernel_dim - boundary_dim,
        cycle_basis: cycles.iter().map(|v| KoszulClass::from_vector(&basis, m1, v)).collect(),
        boundary_dim,
        kernel_dim,
    })
}

fn check_class<T: Scalar>(mult: &MultTable<T>, c: &KoszulClass<T>) -> Result<()> {
    let n = mult.dim1();
    if c.ambient_dim() != n || c.second_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "class in Λ^p({}) ⊗ {} for a model with dim V = {n}",
            c.ambient_dim(),
            c.second_dim()
        )));
    }
    if c.p() == 0 {
        return Err(Error::DegreeOutOfRange { p: 0, reason: "classes need p >= 1".into() });
    }
    Ok(())
}

/// Whether `c` lies in the image of `Λ^{p+1}V`.
pub fn is_boundary<T: Scalar>(c: &KoszulClass<T>) -> bool {
    let n = c.ambient_dim();
    let boundary = koszul_restriction::<T>(c.p(), n);
    let span = Echelon::from_rows(boundary.nrows(), boundary.columns());
    span.contains(&c.to_vector(&WedgeBasis::new(n, c.p())))
}

/// Whether `c` lies in the image of `Λ^{p+1}W` for the subspace spanned by
/// `w` (vectors of `V`).
pub fn is_boundary_from<T: Scalar>(c: &KoszulClass<T>, w: &[Vec<T>]) -> Result<bool> {
    let n = c.ambient_dim();
    if let Some(bad) = w.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {n}", bad.len())));
    }
    let k = w.len();
    if c.p() + 1 > k {
        return Ok(c.is_zero());
    }
    let ws: Vec<SparseVec<T>> = w.iter().map(|v| to_sparse(v)).collect();
    let boundary_w = koszul_map(k, c.p() + 1, 1, n, |a, _| ws[a].clone());
    let w_basis = WedgeBasis::new(k, c.p());
    let mut span = Echelon::new(WedgeBasis::new(n, c.p()).len() * n);
    for col in boundary_w.columns() {
        let image = push_forward(&KoszulClass::from_vector(&w_basis, n, &col), w)?;
        span.insert(image.to_vector(&WedgeBasis::new(n, c.p())));
    }
    Ok(span.contains(&c.to_vector(&WedgeBasis::new(n, c.p()))))
}

/// Whether the class of the cycle `c` in `K_{p,1}` is nonzero.
pub fn is_nonzero_class<T: Scalar>(mult: &MultTable<T>, c: &KoszulClass<T>) -> Result<bool> {
    check_class(mult, c)?;
    if !apply_differential(mult, c)?.is_zero() {
        return Err(Error::NotACycle);
    }
    if c.is_zero() {
        return Ok(false);
    }
    Ok(!is_boundary(c))
}

/// Rank of a Koszul class: exact for `p = 1`, a certified upper bound for
/// `p ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassRank<T> {
    Exact(usize),
    UpperBound { bound: usize, certified_rep: KoszulClass<T> },
}

impl<T> ClassRank<T> {
    pub fn value(&self) -> usize {
        match self {
            ClassRank::Exact(r) => *r,
            ClassRank::UpperBound { bound, .. } => *bound,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ClassRank::Exact(_))
    }
}

/// Symmetric part `C + Cᵀ` of a tensor in `V ⊗ V`, a boundary invariant.
pub fn symmetrization<T: Scalar>(c: &KoszulClass<T>) -> Vec<Vec<T>> {
    let n = c.ambient_dim();
    let mut s = vec![vec![T::zero(); n]; n];
    for (w, j, x) in c.terms() {
        let i = w[0];
        s[i][j] = s[i][j].clone() + x.clone();
        s[j][i] = s[j][i].clone() + x.clone();
    }
    s
}

pub fn class_rank<T: Scalar>(mult: &MultTable<T>, c: &KoszulClass<T>) -> Result<ClassRank<T>> {
    if !is_nonzero_class(mult, c)? {
        return Err(Error::ZeroClass);
    }
    if c.p() == 1 {
        let r = linalg::rank(&SparseMat::from_dense(&symmetrization(c))?);
        return Ok(ClassRank::Exact(r.div_ceil(2)));
    }
    let certified_rep = reduce_support(c)?;
    Ok(ClassRank::UpperBound { bound: support(&certified_rep)?.len(), certified_rep })
}

/// Greedy search for a cohomologous representative with smaller support.
///
/// Each round tries the hyperplanes of the current support obtained by
/// dropping one echelon basis vector, then those cut out by one coordinate
/// of `V`; the first hyperplane `W'` for which some boundary `b` satisfies
/// `c − b ∈ ΛᵖW' ⊗ V` is taken.
pub fn reduce_support<T: Scalar>(c: &KoszulClass<T>) -> Result<KoszulClass<T>> {
    let n = c.ambient_dim();
    let p = c.p();
    let restriction = koszul_restriction::<T>(p, n);
    let source = WedgeBasis::new(n, p);
    let mut rep = c.clone();
    loop {
        let current = support(&rep)?;
        let mut improved = false;
        for candidate in hyperplanes(&current, n) {
            if let Some(next) = move_into(&rep, &candidate, &restriction, &source)? {
                rep = next;
                improved = true;
                break;
            }
        }
        if !improved {
            return Ok(rep);
        }
    }
}

fn hyperplanes<T: Scalar>(basis: &[Vec<T>], n: usize) -> Vec<Vec<Vec<T>>> {
    let k = basis.len();
    let mut out: Vec<Vec<Vec<T>>> = (0..k)
        .map(|drop| basis.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, v)| v.clone()).collect())
        .collect();
    for coord in 0..n {
        // S ∩ {x_coord = 0}
        let values: Vec<T> = basis.iter().map(|v| v[coord].clone()).collect();
        let Some(pivot) = values.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let mut hyper = Vec::with_capacity(k - 1);
        for (i, v) in basis.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let factor = values[i].clone() / values[pivot].clone();
            hyper.push(v.iter().zip(&basis[pivot]).map(|(a, b)| a.clone() - factor.clone() * b.clone()).collect());
        }
        let hyper = linalg::echelon_basis(&hyper, n);
        if !out.contains(&hyper) {
            out.push(hyper);
        }
    }
    out
}

/// Looks for a boundary `b` with `rep − b ∈ ΛᵖW' ⊗ V`; returns `rep − b`.
fn move_into<T: Scalar>(
    rep: &KoszulClass<T>,
    target: &[Vec<T>],
    restriction: &SparseMat<T>,
    source: &WedgeBasis,
) -> Result<Option<KoszulClass<T>>> {
    let n = rep.ambient_dim();
    // functionals vanishing on W'
    let annihilator = linalg::kernel_basis(&SparseMat::from_dense(target)?);
    let annihilator = if target.is_empty() { identity_rows::<T>(n) } else { annihilator };
    let lower = WedgeBasis::new(n, rep.p() - 1);
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    for phi in &annihilator {
        let mut contraction = SparseMat::zeros(lower.len() * n, source.len() * n);
        for (k, subset) in source.subsets().iter().enumerate() {
            for s in 0..n {
                let unit = KoszulClass::from_vector(source, n, &SparseVec::from([(k * n + s, T::one())]));
                for (row, x) in unit.contract(phi)?.to_vector(&lower) {
                    contraction.set(row, k * n + s, x);
                }
            }
            let _ = subset;
        }
        blocks.push(contraction.mul(restriction)?);
        let image = contraction.mul_sparse(&rep.to_vector(source));
        rhs.extend(linalg::to_dense(&image, lower.len() * n));
    }
    let system = SparseMat::vstack(&blocks, restriction.ncols())?;
    let Some(b) = linalg::solve(&system, &rhs)? else {
        return Ok(None);
    };
    let boundary = KoszulClass::from_vector(source, n, &restriction.mul_sparse(&to_sparse(&b)));
    Ok(Some(rep.sub(&boundary)?))
}

fn identity_rows<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{pair_index, SymMatrix};
    use crate::scalar::from_int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn conic_class() -> KoszulClass<Rat> {
        KoszulClass::from_terms(1, 3, 3, [(vec![0], 2, r(1)), (vec![1], 1, r(-1))]).unwrap()
    }

    #[test]
    fn twisted_cubic_and_conic() {
        let conic = MultTable::<Rat>::rational(2).unwrap();
        assert_eq!(compute_k_p1(&conic, 1).unwrap().dim, 1);
        let cubic = MultTable::<Rat>::rational(3).unwrap();
        let k1 = compute_k_p1(&cubic, 1).unwrap();
        assert_eq!((k1.dim, k1.kernel_dim, k1.boundary_dim), (3, 9, 6));
        assert_eq!(compute_k_p1(&cubic, 2).unwrap().dim, 2);
        assert!(matches!(compute_k_p1(&cubic, 4), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(compute_k_p1(&cubic, 0), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn cycle_bases_are_nonzero_cycles() {
        let cubic = MultTable::<Rat>::rational(3).unwrap();
        for p in 1..=2 {
            for c in compute_k_p1(&cubic, p).unwrap().cycle_basis {
                assert!(is_nonzero_class(&cubic, &c).unwrap());
            }
        }
    }

    #[test]
    fn subspace_groups_on_the_conic() {
        let conic = MultTable::<Rat>::rational(2).unwrap();
        let full = SubspaceSpec::new(&identity_rows(3), 3).unwrap();
        assert_eq!(compute_k_p1_subspace(&conic, 1, &full).unwrap().dim, 1);
        // W = <x², xy> still carries x²⊗y² − xy⊗xy
        let w = SubspaceSpec::new(&[vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)]], 3).unwrap();
        let report = compute_k_p1_subspace(&conic, 1, &w).unwrap();
        assert_eq!(report.dim, 1);
        assert!(is_nonzero_class(&conic, &report.cycle_basis[0]).unwrap());
        assert!(matches!(
            SubspaceSpec::new(&[vec![r(1), r(0), r(0)], vec![r(2), r(0), r(0)]], 3),
            Err(Error::Dependent(_))
        ));
    }

    #[test]
    fn nonvanishing_examples() {
        let conic = MultTable::<Rat>::rational(2).unwrap();
        assert!(is_nonzero_class(&conic, &conic_class()).unwrap());
        assert!(!is_nonzero_class(&conic, &KoszulClass::zero(1, 3, 3)).unwrap());
        // x²⊗xy − xy⊗x² is a boundary
        let b = KoszulClass::from_terms(1, 3, 3, [(vec![0], 1, r(1)), (vec![1], 0, r(-1))]).unwrap();
        assert!(!is_nonzero_class(&conic, &b).unwrap());
        let not_cycle = KoszulClass::from_terms(1, 3, 3, [(vec![0], 0, r(1))]).unwrap();
        assert!(matches!(is_nonzero_class(&conic, &not_cycle), Err(Error::NotACycle)));
    }

    fn quadric_model(n: usize, terms: &[(usize, usize, i64)]) -> (MultTable<Rat>, KoszulClass<Rat>) {
        let mut coeffs = vec![r(0); n * (n + 1) / 2];
        for &(i, j, c) in terms {
            coeffs[pair_index(i, j, n)] = coeffs[pair_index(i, j, n)].clone() + r(c);
        }
        let q = SymMatrix::from_polynomial(n, &coeffs).unwrap();
        let mult = MultTable::quadric_presented(n, &[q]).unwrap();
        let class = KoszulClass::from_terms(1, n, n, terms.iter().map(|&(i, j, c)| (vec![i], j, r(c)))).unwrap();
        (mult, class)
    }

    #[test]
    fn ranks_of_quadric_classes() {
        let (mult, q) = quadric_model(5, &[(0, 0, 1), (1, 4, -1), (2, 3, 1)]);
        assert_eq!(class_rank(&mult, &q).unwrap(), ClassRank::Exact(3));
        let (mult, q) = quadric_model(5, &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(class_rank(&mult, &q).unwrap(), ClassRank::Exact(2));
        let (mult, q) = quadric_model(2, &[(0, 1, 1)]);
        assert_eq!(class_rank(&mult, &q).unwrap(), ClassRank::Exact(1));
        let conic = MultTable::<Rat>::rational(2).unwrap();
        assert!(matches!(class_rank(&conic, &KoszulClass::zero(1, 3, 3)), Err(Error::ZeroClass)));
    }

    #[test]
    fn greedy_reduction_finds_a_smaller_representative() {
        // a K_{2,1} class on the twisted cubic, disguised by a boundary
        let cubic = MultTable::<Rat>::rational(3).unwrap();
        let c = compute_k_p1(&cubic, 2).unwrap().cycle_basis[0].clone();
        let boundary_source = KoszulClass::from_terms(3, 4, 1, [(vec![0, 1, 2], 0, r(1)), (vec![1, 2, 3], 0, r(2))])
            .unwrap()
            .to_vector(&WedgeBasis::new(4, 3));
        let restriction = koszul_restriction::<Rat>(2, 4);
        let b = KoszulClass::from_vector(&WedgeBasis::new(4, 2), 4, &restriction.mul_sparse(&boundary_source));
        let disguised = c.add(&b).unwrap();
        let rank = class_rank(&cubic, &disguised).unwrap();
        let ClassRank::UpperBound { bound, certified_rep } = rank else { panic!("p = 2 is never exact") };
        assert!(bound >= 3 && bound <= support(&disguised).unwrap().len());
        assert!(is_boundary(&certified_rep.sub(&disguised).unwrap()));
    }

    #[test]
    fn mixed_complex_degenerates_to_subspace_group() {
        let conic = MultTable::<Rat>::rational(2).unwrap();
        let low = BilinearTable::from_fn(3, 1, 3, |a, _| SparseVec::from([(a, r(1))])).unwrap();
        let high = conic.as_bilinear();
        let data = MixedComplex::new(low, high).unwrap();
        assert!(data.actions_commute());
        let mixed = compute_k_p1_mixed(&data, 1).unwrap();
        assert_eq!(mixed.dim, compute_k_p1(&conic, 1).unwrap().dim);
        // p = 0: coker of W ⊗ M₀ → M₁ is zero here
        assert_eq!(compute_k_p1_mixed(&data, 0).unwrap().dim, 0);
    }

    #[test]
    fn noncommuting_actions_rejected() {
        let low = BilinearTable::from_fn(2, 1, 2, |a, _| SparseVec::from([(a, r(1))])).unwrap();
        // a·e_b = e_0 except 1·e_0 = 0: (0·(1·m)) ≠ (1·(0·m))
        let high = BilinearTable::from_fn(2, 2, 1, |a, b| {
            if a == 1 && b == 0 {
                SparseVec::new()
            } else {
                SparseVec::from([(0, r(1))])
            }
        })
        .unwrap();
        let data = MixedComplex::new(low, high).unwrap();
        assert!(matches!(compute_k_p1_mixed(&data, 1), Err(Error::Inconsistent(_))));
    }

    mod properties {
        use super::*;
        use crate::multilinear::koszul_restriction;
        use proptest::prelude::*;

        fn elms() -> (MultTable<Rat>, KoszulClass<Rat>) {
            quadric_model(5, &[(0, 0, 1), (1, 4, -1), (2, 3, 1)])
        }

        fn boundary(p: usize, n: usize, seed: &[i64]) -> KoszulClass<Rat> {
            let b = koszul_restriction::<Rat>(p, n);
            let omega: Vec<Rat> = seed[..b.ncols()].iter().map(|&x| r(x)).collect();
            let image = to_sparse(&b.mul_vec(&omega).unwrap());
            KoszulClass::from_vector(&WedgeBasis::new(n, p), n, &image)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn class_rank_ignores_coboundaries(seed in proptest::collection::vec(-2i64..=2, 10), scale in 1i64..=3) {
                let (mult, q) = elms();
                let shifted = q.scale(&r(scale)).add(&boundary(1, 5, &seed)).unwrap();
                prop_assert!(is_nonzero_class(&mult, &shifted).unwrap());
                prop_assert_eq!(class_rank(&mult, &shifted).unwrap(), ClassRank::Exact(3));
            }

            #[test]
            fn boundaries_are_zero_classes(seed in proptest::collection::vec(-2i64..=2, 10), p in 1usize..=2) {
                let cubic = MultTable::<Rat>::rational(3).unwrap();
                let b = boundary(p, 4, &seed);
                prop_assert!(!is_nonzero_class(&cubic, &b).unwrap());
            }

            #[test]
            fn subspace_dims_ignore_the_chosen_basis(
                shear in proptest::collection::vec(-2i64..=2, 16),
                order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
                p in 1usize..=2,
            ) {
                // W = the first four monomials of the rational normal quartic, rebased
                let mult = MultTable::<Rat>::rational(4).unwrap();
                let standard: Vec<Vec<Rat>> = (0..4).map(|i| (0..5).map(|j| r(i64::from(i == j))).collect()).collect();
                // unipotent change of basis followed by a permutation
                let rebased: Vec<Vec<Rat>> = order
                    .iter()
                    .map(|&i| {
                        let mut v = standard[i].clone();
                        for k in i + 1..4 {
                            for (x, y) in v.iter_mut().zip(&standard[k]) {
                                *x += r(shear[4 * i + k]) * y;
                            }
                        }
                        v
                    })
                    .collect();
                let a = compute_k_p1_subspace(&mult, p, &SubspaceSpec::new(&standard, 5).unwrap()).unwrap();
                let b = compute_k_p1_subspace(&mult, p, &SubspaceSpec::new(&rebased, 5).unwrap()).unwrap();
                prop_assert_eq!((a.dim, a.kernel_dim, a.boundary_dim), (b.dim, b.kernel_dim, b.boundary_dim));
            }
        }
    }
}
