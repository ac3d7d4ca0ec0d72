//! Binary forms over the rationals: gcds, exact rational roots, and base
//! divisors of linear systems on the projective line.
//!
//! A form of degree `d` is stored in the basis of the rational models,
//! `c₀·x^d + c₁·x^{d−1}y + … + c_d·y^d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Univariate polynomial over `Q`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Self {
        Poly(vec![Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    fn lead(&self) -> &Rat {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dd] / lead;
            if factor.is_zero() {
                continue;
            }
            for (i, c) in divisor.0.iter().enumerate() {
                rem[k + i] -= &factor * c;
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(BigInt::from(k))).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm: monic squarefree `(factor, multiplicity)` pairs of
    /// positive degree, increasing multiplicity.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let f1 = f.derivative();
        let a0 = f.gcd(&f1);
        let mut b = f.div_rem(&a0).0;
        let mut c = f1.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(Rat::zero);
        Poly::new((0..n).map(|i| get(self, i) - get(other, i)).collect())
    }

    /// All rational roots of a squarefree polynomial, increasing.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let Some(deg) = self.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        // clear denominators, then strip the root at zero
        let denominators = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.0.iter().map(|c| (c * Rat::from_integer(denominators.clone())).to_integer()).collect();
        let zeros = ints.iter().take_while(|c| c.is_zero()).count();
        let ints = &ints[zeros..];
        let mut roots = Vec::new();
        if zeros > 0 {
            roots.push(Rat::zero());
        }
        if ints.len() > 1 {
            let constant = divisors(&ints[0]);
            let leading = divisors(ints.last().expect("nonempty"));
            let mut seen = std::collections::BTreeSet::new();
            for p in &constant {
                for q in &leading {
                    for sign in [1, -1] {
                        let candidate = Rat::new(BigInt::from(sign) * p, q.clone());
                        if seen.insert(candidate.clone()) && self.eval(&candidate).is_zero() {
                            roots.push(candidate);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            let other = &n / &k;
            if other != k {
                large.push(other);
            }
            small.push(k.clone());
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A nonzero binary form of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<Rat>,
}

impl BinaryForm {
    /// Coefficients on `x^d, x^{d−1}y, …, y^d`.
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Malformed("a binary form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `y`-adic valuation and the dehomogenization `f(x, 1)` of the rest.
    fn split_y(&self) -> (usize, Poly) {
        let d = self.degree();
        let y_power = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        // f(x, 1) = Σ c_k x^{d−k}, ascending in x
        let ascending: Vec<Rat> = (0..=d).map(|j| self.coeffs[d - j].clone()).collect();
        (y_power, Poly::new(ascending))
    }

    /// Homogenizes `poly` to the given degree; the missing degree is a power of `y`.
    fn homogenize(poly: &Poly, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        for (j, c) in poly.coeffs().iter().enumerate() {
            coeffs[degree - j] = c.clone();
        }
        BinaryForm { coeffs }
    }

    /// Monic gcd, where "monic" means the leading coefficient of `g(x, 1)` is 1.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return self.clone(),
            (true, false) => return other.normalized(),
            (false, true) => return self.normalized(),
            _ => {}
        }
        let (e1, f1) = self.split_y();
        let (e2, f2) = other.split_y();
        let g = f1.gcd(&f2);
        let e = e1.min(e2);
        BinaryForm::homogenize(&g, e + g.degree().expect("gcd of nonzero polynomials"))
    }

    fn normalized(&self) -> BinaryForm {
        let (_, f) = self.split_y();
        BinaryForm::homogenize(&f.monic(), self.degree())
    }

    /// Exact quotient `self / divisor`; errors if `divisor` does not divide.
    pub fn div_exact(&self, divisor: &BinaryForm) -> Result<BinaryForm> {
        if divisor.is_zero() || divisor.degree() > self.degree() {
            return Err(Error::Precondition("divisor of larger degree or zero".into()));
        }
        if self.is_zero() {
            return Ok(BinaryForm { coeffs: vec![Rat::zero(); self.degree() - divisor.degree() + 1] });
        }
        let (e1, f1) = self.split_y();
        let (e2, f2) = divisor.split_y();
        let (q, r) = f1.div_rem(&f2);
        if e2 > e1 || !r.is_zero() {
            return Err(Error::Precondition("the form is not divisible".into()));
        }
        let degree = self.degree() - divisor.degree();
        Ok(BinaryForm::homogenize(&q, degree))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::models::binary_form_names(self.degree());
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(&names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| if c.is_one() { name.clone() } else { format!("({c})*{name}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A point `(a : b)` of the projective line, normalized so that the last
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectivePoint {
    pub x: Rat,
    pub y: Rat,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x, self.y)
    }
}

/// Irreducible-over-`Q` part without rational roots, kept unfactored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRecord {
    pub degree: usize,
    pub multiplicity: usize,
    /// `g(x, 1)`, ascending in `x`, monic.
    pub coeffs: Vec<Rat>,
}

/// Effective divisor on the projective line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor1D {
    pub points: Vec<(ProjectivePoint, usize)>,
    pub other_factors: Vec<FactorRecord>,
}

impl Divisor1D {
    pub fn degree(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum::<usize>()
            + self.other_factors.iter().map(|f| f.degree * f.multiplicity).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.degree() == 0
    }

    /// Divisor of zeros of a nonzero form.
    pub fn of_form(form: &BinaryForm) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::Precondition("the zero form has no divisor".into()));
        }
        let (y_power, poly) = form.split_y();
        let mut out = Divisor1D::default();
        for (factor, multiplicity) in poly.squarefree_decomposition() {
            let mut rest = factor.clone();
            for root in factor.rational_roots() {
                out.points.push((ProjectivePoint { x: root.clone(), y: Rat::one() }, multiplicity));
                rest = rest.div_rem(&Poly::new(vec![-root, Rat::one()])).0;
            }
            if let Some(degree) = rest.degree().filter(|&d| d > 0) {
                out.other_factors.push(FactorRecord { degree, multiplicity, coeffs: rest.monic().coeffs().to_vec() });
            }
        }
        // y = 0 is the point (1 : 0)
        if y_power > 0 {
            out.points.push((ProjectivePoint { x: Rat::one(), y: Rat::zero() }, y_power));
        }
        out.points.sort();
        Ok(out)
    }
}

impl fmt::Display for Divisor1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.points.iter().map(|(p, m)| format!("{m}·{p}")).collect();
        parts.extend(self.other_factors.iter().map(|r| format!("{}·[degree-{} factor]", r.multiplicity, r.degree)));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Gcd of the forms spanning `W` together with its divisor of zeros.
pub fn base_locus_rational(forms: &[BinaryForm]) -> Result<(BinaryForm, Divisor1D)> {
    let Some(first) = forms.first() else {
        return Err(Error::Precondition("base locus of the zero space".into()));
    };
    if forms.iter().any(|f| f.degree() != first.degree()) {
        return Err(Error::DimensionMismatch("forms of different degrees".into()));
    }
    let g = forms.iter().fold(BinaryForm { coeffs: vec![Rat::zero(); first.degree() + 1] }, |acc, f| acc.gcd(f));
    if g.is_zero() {
        return Err(Error::Precondition("base locus of the zero space".into()));
    }
    let divisor = Divisor1D::of_form(&g)?;
    Ok((g, divisor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect()).unwrap()
    }

    fn point(x: i64, y: i64) -> ProjectivePoint {
        ProjectivePoint { x: Rat::from_integer(x.into()), y: Rat::from_integer(y.into()) }
    }

    #[test]
    fn base_loci_of_monomial_systems() {
        // <x³, x²y>: gcd x², the point x = 0 twice
        let (g, b) = base_locus_rational(&[form(&[1, 0, 0, 0]), form(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(g, form(&[1, 0, 0]));
        assert_eq!(b.points, vec![(point(0, 1), 2)]);
        let (_, b) = base_locus_rational(&[form(&[1, 0, 0]), form(&[0, 0, 1])]).unwrap();
        assert!(b.is_empty());
        // <x²y, xy²>: gcd xy, the points (0:1) and (1:0)
        let (g, b) = base_locus_rational(&[form(&[0, 1, 0, 0]), form(&[0, 0, 1, 0])]).unwrap();
        assert_eq!(g, form(&[0, 1, 0]));
        assert_eq!(b.points, vec![(point(0, 1), 1), (point(1, 0), 1)]);
        assert!(base_locus_rational(&[form(&[0, 0])]).is_err());
    }

    #[test]
    fn irrational_factors_are_recorded() {
        // (x² + y²)·(2x − y)² in degree 4
        let f = form(&[4, -4, 5, -4, 1]);
        let b = Divisor1D::of_form(&f).unwrap();
        assert_eq!(b.degree(), 4);
        assert_eq!(b.points, vec![(ProjectivePoint { x: Rat::new(1.into(), 2.into()), y: Rat::one() }, 2)]);
        assert_eq!(b.other_factors.len(), 1);
        assert_eq!((b.other_factors[0].degree, b.other_factors[0].multiplicity), (2, 1));
    }

    #[test]
    fn division_by_the_gcd() {
        let forms = [form(&[0, 1, -1, 0]), form(&[0, 0, 1, -1])];
        let (g, _) = base_locus_rational(&forms).unwrap();
        let quotients: Vec<_> = forms.iter().map(|f| f.div_exact(&g).unwrap()).collect();
        let (h, b) = base_locus_rational(&quotients).unwrap();
        assert_eq!(h.degree(), 0);
        assert!(b.is_empty());
    }

    proptest! {
        #[test]
        fn quotient_by_base_locus_is_base_point_free(
            factor in proptest::collection::vec(-3i64..=3, 1..4),
            a in proptest::collection::vec(-3i64..=3, 3),
            b in proptest::collection::vec(-3i64..=3, 3),
        ) {
            let common = form(&factor);
            prop_assume!(!common.is_zero());
            let mul = |f: &BinaryForm, g: &BinaryForm| {
                let mut out = vec![Rat::zero(); f.degree() + g.degree() + 1];
                for (i, x) in f.coeffs().iter().enumerate() {
                    for (j, y) in g.coeffs().iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                BinaryForm::new(out).unwrap()
            };
            let forms = [mul(&common, &form(&a)), mul(&common, &form(&b))];
            prop_assume!(forms.iter().any(|f| !f.is_zero()));
            let (g, divisor) = base_locus_rational(&forms).unwrap();
            prop_assert!(divisor.degree() <= forms[0].degree());
            prop_assert_eq!(divisor.degree(), g.degree());
            let quotients: Vec<_> = forms.iter().map(|f| f.div_exact(&g).unwrap()).collect();
            let (h, _) = base_locus_rational(&quotients).unwrap();
            prop_assert_eq!(h.degree(), 0);
        }
    }
}
