//! Koszul classes from determinant data, splittings and skew matrices,
//! and the criteria that decide their behaviour.

mod datum;
mod genzero;
mod ks;

pub use datum::{
    build_gl_class, build_gl_class_rational, build_voisin_class, check_four_term, datum_from_split,
    four_term_violation, gl_span, is_coboundary_from_w, shifted, split_detect, Construction, DeterminantDatum,
    SplitDatum,
};
pub use genzero::{
    has_generalized_zero, is_generalized_zero, GenZeroOptions, GenZeroResult, PrimeRecord, DEFAULT_PRIMES, PRIMES_ENV,
    SUPPORTED_PRIMES,
};
pub use ks::{
    check_ks_conditions, ks_alpha, ks_matrix_from_class, plucker_check, plucker_check_numeric, skew_from_dense,
    KSMatrix, KsReport, PluckerReport,
};

use crate::linalg;
use crate::models::BilinearTable;
use crate::scalar::Scalar;

/// `dim coker(μ)` for `μ: W ⊗ H⁰(K_X(−B)) → H⁰(K_X ⊗ L(−2B))`.
pub fn mu_cokernel<T: Scalar>(mu: &BilinearTable<T>) -> usize {
    mu.target_dim() - linalg::rank(&mu.flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseVec;
    use crate::scalar::from_int;
    use crate::Rat;

    #[test]
    fn cokernels_of_toy_tables() {
        let one: Rat = from_int(1);
        let identity = BilinearTable::from_fn(3, 1, 3, |a, _| SparseVec::from([(a, one.clone())])).unwrap();
        assert_eq!(mu_cokernel(&identity), 0);
        let zero = BilinearTable::<Rat>::from_fn(3, 2, 4, |_, _| SparseVec::new()).unwrap();
        assert_eq!(mu_cokernel(&zero), 4);
    }
}
