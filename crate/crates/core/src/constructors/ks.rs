//! Koh–Stillman matrices: skew matrices of linear forms whose first row
//! spans `W` and whose lower block is a class read as a map `Λ²W → V`.

use crate::error::{Error, Result};
use crate::linalg::{self, to_dense, to_sparse, SparseMat, SparseVec};
use crate::models::MultTable;
use crate::multilinear::{pfaffian4, pfaffian4_scalar, support, wedge_of, KoszulClass, SkewMap};
use crate::scalar::Scalar;

/// A `(p+3)×(p+3)` skew matrix with entries in `V₁`.
///
/// Row 0 is `(0, a₁₂, …, a₁,ₚ₊₃)`; the block on rows and columns `1..`
/// is the map `Λ²W → V`.
#[derive(Clone, Debug, PartialEq)]
pub struct KSMatrix<T> {
    p: usize,
    a: SkewMap<T>,
}

fn sign<T: Scalar>(odd: bool) -> T {
    if odd {
        -T::one()
    } else {
        T::one()
    }
}

impl<T: Scalar> KSMatrix<T> {
    pub fn new(a: SkewMap<T>) -> Result<Self> {
        if a.h() < 4 {
            return Err(Error::DimensionMismatch(format!("a Koh–Stillman matrix has size p + 3 >= 4, got {}", a.h())));
        }
        Ok(KSMatrix { p: a.h() - 3, a })
    }

    /// First row from `w` (dense vectors of `V`), lower block from `lower(i, j)`
    /// for `i < j` indexing `w`.
    pub fn from_parts(w: &[Vec<T>], mut lower: impl FnMut(usize, usize) -> Result<SparseVec<T>>) -> Result<Self> {
        let n = w.first().map_or(0, Vec::len);
        let mut a = SkewMap::zero(w.len() + 1, n);
        for (j, wj) in w.iter().enumerate() {
            a.set(0, j + 1, to_sparse(wj))?;
        }
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                a.set(i + 1, j + 1, lower(i, j)?)?;
            }
        }
        Self::new(a)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn size(&self) -> usize {
        self.p + 3
    }

    pub fn matrix(&self) -> &SkewMap<T> {
        &self.a
    }

    pub fn first_row(&self) -> Vec<Vec<T>> {
        let n = self.a.target_dim();
        (1..self.size()).map(|j| to_dense(&self.a.get(0, j), n)).collect()
    }

    /// The class `Σ_{1<i<j} (−1)^{i+j} a₁₂∧…â₁ᵢ…â₁ⱼ…∧a₁,ₚ₊₃ ⊗ aᵢⱼ`.
    pub fn class(&self) -> Result<KoszulClass<T>> {
        let n = self.a.target_dim();
        let w = self.first_row();
        let k = w.len();
        let mut class = KoszulClass::zero(self.p, n, n);
        for i in 0..k {
            for j in i + 1..k {
                let a_ij = self.a.get(i + 1, j + 1);
                if a_ij.is_empty() {
                    continue;
                }
                let rest: Vec<Vec<T>> = (0..k).filter(|&l| l != i && l != j).map(|l| w[l].clone()).collect();
                let sign: T = sign((i + j) % 2 == 1);
                for (subset, x) in wedge_of(&rest, n) {
                    for (&s, y) in &a_ij {
                        class.add_term(&subset, s, sign.clone() * x.clone() * y.clone())?;
                    }
                }
            }
        }
        Ok(class)
    }
}

/// Recovers the Koh–Stillman matrix of `c ∈ ΛᵖW ⊗ V` with `dim W = p + 2`.
///
/// Without `w`, `W` is the support of `c`, which must then have dimension
/// `p + 2`. An explicit `w` (independent, containing the support) covers
/// classes whose support is smaller, such as scrollar ones.
pub fn ks_matrix_from_class<T: Scalar>(c: &KoszulClass<T>, w: Option<&[Vec<T>]>) -> Result<KSMatrix<T>> {
    let n = c.ambient_dim();
    if c.second_dim() != n {
        return Err(Error::DimensionMismatch(format!("class in Λ^p({n}) ⊗ {}", c.second_dim())));
    }
    let p = c.p();
    let w: Vec<Vec<T>> = match w {
        Some(w) => w.to_vec(),
        None => support(c)?,
    };
    if w.len() != p + 2 || linalg::span_rank(&w, n) != p + 2 {
        return Err(Error::Precondition(format!(
            "W has dimension {}, a Koh–Stillman matrix needs p + 2 = {}",
            linalg::span_rank(&w, n),
            p + 2
        )));
    }
    // φ_k(w_l) = δ_kl
    let rows = SparseMat::from_dense(&w)?;
    let mut phi = Vec::with_capacity(w.len());
    for k in 0..w.len() {
        let rhs: Vec<T> = (0..w.len()).map(|l| if l == k { T::one() } else { T::zero() }).collect();
        phi.push(linalg::solve(&rows, &rhs)?.expect("independent rows admit a dual basis"));
    }
    let k = w.len();
    let a = KSMatrix::from_parts(&w, |i, j| {
        let rest: Vec<Vec<T>> = (0..k).filter(|&l| l != i && l != j).map(|l| phi[l].clone()).collect();
        let minors = wedge_of(&rest, n);
        let mut value = SparseVec::new();
        for (subset, s, x) in c.terms() {
            if let Some(m) = minors.get(subset) {
                linalg::add_entry(&mut value, s, x.clone() * m.clone());
            }
        }
        let sign: T = sign((i + j) % 2 == 1);
        Ok(linalg::scale(&value, &sign))
    })?;
    if a.class()? != *c {
        return Err(Error::Precondition("the class does not lie in Λ^p W ⊗ V".into()));
    }
    Ok(a)
}

/// `α = Σ_{1<i<j<k} (−1)^{i+j+k} a₁₂∧…â₁ᵢ…â₁ⱼ…â₁ₖ…∧a₁,ₚ₊₃ ⊗ Pf₁ᵢⱼₖ(A)`
/// in `Λ^{p−1}V ⊗ V₂`.
pub fn ks_alpha<T: Scalar>(a: &KSMatrix<T>, mult: &MultTable<T>) -> Result<KoszulClass<T>> {
    let n = mult.dim1();
    let w = a.first_row();
    let k = w.len();
    let mut alpha = KoszulClass::zero(a.p - 1, n, mult.dim2());
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let pf = pfaffian4(&a.a, [0, i + 1, j + 1, l + 1], mult)?;
                if pf.is_empty() {
                    continue;
                }
                let rest: Vec<Vec<T>> = (0..k).filter(|&m| m != i && m != j && m != l).map(|m| w[m].clone()).collect();
                // labels i + 2, j + 2, l + 2 have the same parity sum
                let sign: T = sign((i + j + l) % 2 == 1);
                for (subset, x) in wedge_of(&rest, n) {
                    for (&s, y) in &pf {
                        alpha.add_term(&subset, s, sign.clone() * x.clone() * y.clone())?;
                    }
                }
            }
        }
    }
    Ok(alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KsReport {
    /// (i) the first row is linearly independent.
    pub independent_first_row: bool,
    /// (ii) some `Pf₁ᵢⱼₖ` is nonzero as a quadric, before reduction modulo `I₂`.
    pub nonzero_pfaffian: bool,
    /// (iii) every `Pf₁ᵢⱼₖ` vanishes in `V₂`.
    pub pfaffians_vanish_on_x: bool,
}

pub fn check_ks_conditions<T: Scalar>(a: &KSMatrix<T>, mult: &MultTable<T>) -> Result<KsReport> {
    let n = mult.dim1();
    let free = MultTable::free_symmetric(n);
    let mut nonzero = false;
    let mut vanish = true;
    let size = a.size();
    for i in 1..size {
        for j in i + 1..size {
            for k in j + 1..size {
                nonzero |= !pfaffian4(&a.a, [0, i, j, k], &free)?.is_empty();
                vanish &= pfaffian4(&a.a, [0, i, j, k], mult)?.is_empty();
            }
        }
    }
    Ok(KsReport {
        independent_first_row: linalg::span_rank(&a.first_row(), n) == a.p + 2,
        nonzero_pfaffian: nonzero,
        pfaffians_vanish_on_x: vanish,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PluckerReport {
    /// All 4×4 Pfaffians vanish.
    pub on_grassmannian: bool,
    /// The first row vanishes.
    pub on_linear_space: bool,
    /// First quadruple with a nonzero Pfaffian.
    pub witness: Option<[usize; 4]>,
}

fn plucker_with<T: Scalar>(
    z: &SkewMap<T>,
    mut nonzero: impl FnMut([usize; 4]) -> Result<bool>,
) -> Result<PluckerReport> {
    let h = z.h();
    let mut witness = None;
    'outer: for i in 0..h {
        for j in i + 1..h {
            for k in j + 1..h {
                for l in k + 1..h {
                    if nonzero([i, j, k, l])? {
                        witness = Some([i, j, k, l]);
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(PluckerReport {
        on_grassmannian: witness.is_none(),
        on_linear_space: (1..h).all(|j| z.get(0, j).is_empty()),
        witness,
    })
}

/// Plücker conditions on a skew matrix of linear forms, evaluated in `V₂`.
pub fn plucker_check<T: Scalar>(a: &SkewMap<T>, mult: &MultTable<T>) -> Result<PluckerReport> {
    plucker_with(a, |idx| Ok(!pfaffian4(a, idx, mult)?.is_empty()))
}

/// Plücker conditions on a numeric skew matrix (a point of `Λ²`).
pub fn plucker_check_numeric<T: Scalar>(z: &[Vec<T>]) -> Result<PluckerReport> {
    let m = skew_from_dense(z)?;
    plucker_with(&m, |idx| Ok(!pfaffian4_scalar(&m, idx)?.is_zero()))
}

/// A square skew-symmetric scalar matrix as a skew map into a line.
pub fn skew_from_dense<T: Scalar>(z: &[Vec<T>]) -> Result<SkewMap<T>> {
    let h = z.len();
    if z.iter().any(|row| row.len() != h) {
        return Err(Error::DimensionMismatch("the matrix is not square".into()));
    }
    let mut m = SkewMap::zero(h, 1);
    for i in 0..h {
        if !z[i][i].is_zero() {
            return Err(Error::Malformed(format!("nonzero diagonal entry at {i}")));
        }
        for j in i + 1..h {
            if z[j][i] != -z[i][j].clone() {
                return Err(Error::Malformed(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
            }
            m.set(i, j, to_sparse(&[z[i][j].clone()]))?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{build_voisin_class, datum_from_split, SplitDatum};
    use crate::models::{pair_index, SymMatrix};
    use crate::multilinear::apply_differential;
    use crate::scalar::from_int;
    use crate::Rat;
    use proptest::prelude::*;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn conic_ks() -> (KSMatrix<Rat>, KoszulClass<Rat>, Vec<Vec<Rat>>) {
        let datum = datum_from_split(&SplitDatum::rational(1, 1).unwrap()).unwrap();
        let t = vec![r(1), r(0), r(0), r(1)];
        let unit = |i: usize| (0..4).map(|j| if i == j { r(1) } else { r(0) }).collect::<Vec<_>>();
        let built =
            build_voisin_class(&datum, &t, &[unit(1), unit(2), unit(3)], &MultTable::rational(2).unwrap()).unwrap();
        (built.ks_matrix, built.class, built.w)
    }

    fn elms() -> (MultTable<Rat>, KoszulClass<Rat>) {
        // Q = x1² − x2x5 + x3x4
        let mut coeffs = vec![r(0); 15];
        coeffs[pair_index(0, 0, 5)] = r(1);
        coeffs[pair_index(1, 4, 5)] = r(-1);
        coeffs[pair_index(2, 3, 5)] = r(1);
        let mult = MultTable::quadric_presented(5, &[SymMatrix::from_polynomial(5, &coeffs).unwrap()]).unwrap();
        let q =
            KoszulClass::from_terms(1, 5, 5, [(vec![0], 0, r(1)), (vec![1], 4, r(-1)), (vec![2], 3, r(1))]).unwrap();
        (mult, q)
    }

    #[test]
    fn conic_matrix_round_trip() {
        let (a, c, w) = conic_ks();
        assert_eq!(a.class().unwrap(), c);
        assert_eq!(ks_matrix_from_class(&c, Some(&w)).unwrap(), a);
        // the support is only 2-dimensional
        assert!(matches!(ks_matrix_from_class(&c, None), Err(Error::Precondition(_))));
        let mult = MultTable::rational(2).unwrap();
        assert!(ks_alpha(&a, &mult).unwrap().is_zero());
        let report = check_ks_conditions(&a, &mult).unwrap();
        assert_eq!(
            report,
            KsReport { independent_first_row: true, nonzero_pfaffian: true, pfaffians_vanish_on_x: true }
        );
        let pl = plucker_check(a.matrix(), &mult).unwrap();
        assert!(pl.on_grassmannian && !pl.on_linear_space);
    }

    #[test]
    fn elms_quadric_matrix() {
        let (mult, q) = elms();
        let a = ks_matrix_from_class(&q, None).unwrap();
        assert_eq!(a.size(), 4);
        let report = check_ks_conditions(&a, &mult).unwrap();
        assert!(report.independent_first_row && report.nonzero_pfaffian && report.pfaffians_vanish_on_x);
        assert!(plucker_check(a.matrix(), &mult).unwrap().on_grassmannian);
        // a rank-4 quadric has a 2-dimensional support
        let scrollar = KoszulClass::from_terms(1, 5, 5, [(vec![0], 1, r(1)), (vec![2], 3, r(1))]).unwrap();
        assert!(ks_matrix_from_class(&scrollar, None).is_err());
    }

    #[test]
    fn zero_lower_block_gives_zero_alpha() {
        let w: Vec<Vec<Rat>> = (0..3).map(|i| (0..3).map(|j| if i == j { r(1) } else { r(0) }).collect()).collect();
        let a = KSMatrix::from_parts(&w, |_, _| Ok(SparseVec::new())).unwrap();
        assert!(ks_alpha(&a, &MultTable::rational(2).unwrap()).unwrap().is_zero());
        let dependent = vec![w[0].clone(), w[0].clone(), w[1].clone()];
        let b = KSMatrix::from_parts(&dependent, |_, _| Ok(SparseVec::new())).unwrap();
        assert!(!check_ks_conditions(&b, &MultTable::rational(2).unwrap()).unwrap().independent_first_row);
    }

    #[test]
    fn numeric_plucker_examples() {
        // u ∧ v for u = (1,2,0,1), v = (0,1,1,3)
        let u = [1, 2, 0, 1];
        let v = [0, 1, 1, 3];
        let z: Vec<Vec<Rat>> = (0..4).map(|i| (0..4).map(|j| r(u[i] * v[j] - u[j] * v[i])).collect()).collect();
        let report = plucker_check_numeric(&z).unwrap();
        assert!(report.on_grassmannian && !report.on_linear_space);
        let mut z = vec![vec![r(0); 4]; 4];
        for (i, j) in [(0, 1), (2, 3)] {
            z[i][j] = r(1);
            z[j][i] = r(-1);
        }
        let report = plucker_check_numeric(&z).unwrap();
        assert_eq!(
            (report.on_grassmannian, report.on_linear_space, report.witness),
            (false, false, Some([0, 1, 2, 3]))
        );
    }

    proptest! {
        // the identity holds for every tensor in Λ^p W ⊗ V, cycle or not
        #[test]
        fn alpha_is_the_differential(
            p in 1usize..=2,
            seed in proptest::collection::vec(-2i64..=2, 80),
        ) {
            let mult = MultTable::<Rat>::rational(4).unwrap();
            let n = 5;
            let k = p + 2;
            let w: Vec<Vec<Rat>> = (0..k).map(|i| (0..n).map(|j| r(seed[i * n + j])).collect()).collect();
            prop_assume!(linalg::span_rank(&w, n) == k);
            let mut counter = k * n;
            let a = KSMatrix::from_parts(&w, |_, _| {
                let v: Vec<Rat> = (0..n).map(|j| r(seed[(counter + j) % seed.len()])).collect();
                counter += n;
                Ok(to_sparse(&v))
            }).unwrap();
            let c = a.class().unwrap();
            prop_assert_eq!(ks_alpha(&a, &mult).unwrap(), apply_differential(&mult, &c).unwrap());
            if !c.is_zero() {
                prop_assert_eq!(ks_matrix_from_class(&c, Some(&w)).unwrap(), a);
            }
        }
    }
}
