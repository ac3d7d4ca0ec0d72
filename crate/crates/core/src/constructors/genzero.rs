//! Search for generalized zeros: independent `u, v ∈ H` with `d(u∧v) = 0`.
//!
//! The search is a semi-decision. Candidates `u` come from projective points
//! over small prime fields where `d(u ∧ ·)` drops rank; each candidate is
//! lifted to the rationals and the witness is verified exactly.

use std::env;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::multilinear::SkewMap;
use crate::scalar::{Fp, Scalar};
use crate::Rat;

use super::datum::DeterminantDatum;

/// Primes for which a field type is compiled in.
pub const SUPPORTED_PRIMES: [u64; 9] = [5, 7, 11, 13, 17, 19, 23, 29, 31];
pub const DEFAULT_PRIMES: [u64; 3] = [5, 7, 11];
pub const PRIMES_ENV: &str = "KOSZUL_GENZERO_PRIMES";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenZeroOptions {
    pub primes: Vec<u64>,
    /// Cap on enumerated points per prime.
    pub max_points: u64,
}

impl Default for GenZeroOptions {
    fn default() -> Self {
        GenZeroOptions { primes: DEFAULT_PRIMES.to_vec(), max_points: 200_000 }
    }
}

impl GenZeroOptions {
    /// Parses a comma-separated prime list such as `"5,7,11"`.
    pub fn with_prime_list(list: &str) -> Result<Self> {
        let mut primes = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let p: u64 =
                item.parse().map_err(|_| Error::Malformed(format!("{PRIMES_ENV}: '{item}' is not a number")))?;
            if !SUPPORTED_PRIMES.contains(&p) {
                return Err(Error::Malformed(format!("{PRIMES_ENV}: {p} is not one of {SUPPORTED_PRIMES:?}")));
            }
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        if primes.is_empty() {
            return Err(Error::Malformed(format!("{PRIMES_ENV} lists no primes")));
        }
        Ok(GenZeroOptions { primes, ..Self::default() })
    }

    /// Defaults, with the prime list taken from `KOSZUL_GENZERO_PRIMES` if set.
    pub fn from_env() -> Result<Self> {
        match env::var(PRIMES_ENV) {
            Ok(list) => Self::with_prime_list(&list),
            Err(_) => Ok(Self::default()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub prime: u64,
    /// The datum has a denominator divisible by the prime.
    pub skipped: bool,
    pub points_checked: u64,
    /// Points whose reduction had a kernel of dimension at least 2.
    pub candidates: u64,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenZeroResult {
    Witness { u: Vec<Rat>, v: Vec<Rat> },
    NoneFound { certificate: Vec<PrimeRecord> },
}

impl GenZeroResult {
    pub fn is_witness(&self) -> bool {
        matches!(self, GenZeroResult::Witness { .. })
    }
}

pub fn has_generalized_zero(datum: &DeterminantDatum<Rat>, options: &GenZeroOptions) -> Result<GenZeroResult> {
    let mut certificate = Vec::new();
    for &p in &options.primes {
        let (record, witness) = match p {
            5 => search::<5>(datum.d(), options.max_points)?,
            7 => search::<7>(datum.d(), options.max_points)?,
            11 => search::<11>(datum.d(), options.max_points)?,
            13 => search::<13>(datum.d(), options.max_points)?,
            17 => search::<17>(datum.d(), options.max_points)?,
            19 => search::<19>(datum.d(), options.max_points)?,
            23 => search::<23>(datum.d(), options.max_points)?,
            29 => search::<29>(datum.d(), options.max_points)?,
            31 => search::<31>(datum.d(), options.max_points)?,
            other => return Err(Error::Malformed(format!("unsupported prime {other}"))),
        };
        if let Some((u, v)) = witness {
            return Ok(GenZeroResult::Witness { u, v });
        }
        certificate.push(record);
    }
    Ok(GenZeroResult::NoneFound { certificate })
}

/// Projective points of `F_P^h`: first nonzero coordinate 1, by position of
/// that coordinate, then lexicographically.
struct ProjectivePoints<const P: u64> {
    h: usize,
    lead: usize,
    tail: Vec<u64>,
    done: bool,
}

impl<const P: u64> ProjectivePoints<P> {
    fn new(h: usize) -> Self {
        ProjectivePoints { h, lead: 0, tail: vec![0; h.saturating_sub(1)], done: h == 0 }
    }
}

impl<const P: u64> Iterator for ProjectivePoints<P> {
    type Item = Vec<Fp<P>>;

    fn next(&mut self) -> Option<Vec<Fp<P>>> {
        if self.done {
            return None;
        }
        let mut point = vec![Fp::<P>::zero(); self.h];
        point[self.lead] = Fp::one();
        for (k, &x) in self.tail.iter().enumerate() {
            point[self.lead + 1 + k] = Fp::new(x);
        }
        // advance the tail as a base-P counter, last coordinate fastest
        let mut k = self.tail.len();
        loop {
            if k == 0 {
                self.lead += 1;
                if self.lead == self.h {
                    self.done = true;
                } else {
                    self.tail = vec![0; self.h - self.lead - 1];
                }
                break;
            }
            k -= 1;
            self.tail[k] += 1;
            if self.tail[k] < P {
                break;
            }
            self.tail[k] = 0;
        }
        Some(point)
    }
}

type Witness = Option<(Vec<Rat>, Vec<Rat>)>;

fn search<const P: u64>(d: &SkewMap<Rat>, max_points: u64) -> Result<(PrimeRecord, Witness)> {
    let mut record = PrimeRecord { prime: P, skipped: false, points_checked: 0, candidates: 0, truncated: false };
    let mut reducible = true;
    let reduced: SkewMap<Fp<P>> = d.map(|x| {
        Fp::<P>::reduce(x).unwrap_or_else(|| {
            reducible = false;
            Fp::zero()
        })
    });
    if !reducible {
        record.skipped = true;
        return Ok((record, None));
    }
    let h = d.h();
    for point in ProjectivePoints::<P>::new(h) {
        if record.points_checked == max_points {
            record.truncated = true;
            break;
        }
        record.points_checked += 1;
        if h - linalg::rank(&reduced.contraction_matrix(&point)?) < 2 {
            continue;
        }
        record.candidates += 1;
        let u: Vec<Rat> = point.iter().map(|x| Rat::from_integer(x.centered().into())).collect();
        if let Some(v) = exact_partner(d, &u)? {
            return Ok((record, Some((u, v))));
        }
    }
    Ok((record, None))
}

/// First kernel vector of `d(u ∧ ·)` independent of `u`, verified exactly.
fn exact_partner(d: &SkewMap<Rat>, u: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let kernel = linalg::kernel_basis(&d.contraction_matrix(u)?);
    let mut span = Echelon::new(u.len());
    span.insert(linalg::to_sparse(u));
    for v in kernel {
        if !span.contains(&linalg::to_sparse(&v)) {
            if !d.eval(u, &v)?.is_empty() {
                return Err(Error::Inconsistent("kernel vector fails exact verification".into()));
            }
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Exact check that `(u, v)` is a generalized zero.
pub fn is_generalized_zero<T: Scalar>(d: &SkewMap<T>, u: &[T], v: &[T]) -> Result<bool> {
    Ok(linalg::span_rank(&[u.to_vec(), v.to_vec()], d.h()) == 2 && d.eval(u, v)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{datum_from_split, SplitDatum};
    use crate::linalg::SparseVec;
    use crate::scalar::from_int;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    #[test]
    fn enumeration_counts_projective_points() {
        assert_eq!(ProjectivePoints::<5>::new(3).count(), 31);
        let first: Vec<_> =
            ProjectivePoints::<5>::new(2).take(3).map(|p| p.iter().map(|x| x.value()).collect::<Vec<_>>()).collect();
        assert_eq!(first, vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn split_data_have_witnesses() {
        let datum = datum_from_split(&SplitDatum::<Rat>::rational(1, 2).unwrap()).unwrap();
        let GenZeroResult::Witness { u, v } = has_generalized_zero(&datum, &GenZeroOptions::default()).unwrap() else {
            panic!("split data always have generalized zeros");
        };
        assert!(is_generalized_zero(datum.d(), &u, &v).unwrap());
    }

    #[test]
    fn declared_zero_pair() {
        let mut d = SkewMap::zero(4, 4);
        for (k, (i, j)) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
            d.set(i, j, SparseVec::from([(k % 4, r(1))])).unwrap();
        }
        let datum = DeterminantDatum::new_unchecked(d);
        let result = has_generalized_zero(&datum, &GenZeroOptions::default()).unwrap();
        assert_eq!(result, GenZeroResult::Witness { u: vec![r(1), r(0), r(0), r(0)], v: vec![r(0), r(1), r(0), r(0)] });
    }

    #[test]
    fn anisotropic_datum_has_no_rational_zero() {
        // d(e12) = x1, d(e34) = x1, d(e13) = x2, d(e24) = −x2, d(e14) = x3, d(e23) = x3
        let mut d = SkewMap::zero(4, 3);
        for (i, j, s, c) in [(0, 1, 0, 1), (2, 3, 0, 1), (0, 2, 1, 1), (1, 3, 1, -1), (0, 3, 2, 1), (1, 2, 2, 1)] {
            d.set(i, j, SparseVec::from([(s, r(c))])).unwrap();
        }
        let datum = DeterminantDatum::new_unchecked(d);
        let GenZeroResult::NoneFound { certificate } =
            has_generalized_zero(&datum, &GenZeroOptions::default()).unwrap()
        else {
            panic!("x1² + x2² + x3² has no rational zero");
        };
        assert_eq!(certificate.iter().map(|r| r.prime).collect::<Vec<_>>(), vec![5, 7, 11]);
        assert_eq!(certificate[0].points_checked, 156);
        assert!(certificate.iter().all(|r| !r.skipped && !r.truncated));
    }

    #[test]
    fn denominators_skip_primes() {
        let mut d = SkewMap::zero(3, 1);
        d.set(0, 1, SparseVec::from([(0, Rat::new(1.into(), 5.into()))])).unwrap();
        d.set(0, 2, SparseVec::from([(0, r(1))])).unwrap();
        d.set(1, 2, SparseVec::from([(0, r(1))])).unwrap();
        let options = GenZeroOptions::with_prime_list("5, 7").unwrap();
        let result = has_generalized_zero(&DeterminantDatum::new_unchecked(d), &options).unwrap();
        // over a line every pair of dimension 3 has a zero: d_u has rank 1
        assert!(result.is_witness());
        assert!(GenZeroOptions::with_prime_list("4").is_err());
        assert!(GenZeroOptions::with_prime_list("").is_err());
    }
}
