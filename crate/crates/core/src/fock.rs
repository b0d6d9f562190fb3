//! The truncated Hida test algebra: sparse Fock vectors with the normalized
//! Wick product, the bilinear pairing, weighted norms, coherent vectors and
//! the S-transform.
//!
//! Basis convention: `e_A` is a formal symbol, `:e_A e_B: = e_{A∪B}`, and
//! `⟨e_A, e_B⟩ = δ_{AB} A!` with `A! = ∏ r_j!`. Under this weight the
//! coherent vector `φ_ξ = Σ_A ξ^A / A! e_A` satisfies `⟨φ_ξ, φ_η⟩ = exp⟨ξ,η⟩`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::multiindex::{factorial, MultiIndex};
use crate::scalar::Scalar;

/// Finite window standing in for the full test space: modes `< max_mode`,
/// degree `≤ max_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationCaps {
    pub max_mode: u32,
    pub max_degree: u32,
}

impl TruncationCaps {
    pub fn new(max_mode: u32, max_degree: u32) -> Self {
        TruncationCaps { max_mode, max_degree }
    }

    pub fn contains(&self, a: &MultiIndex) -> bool {
        a.degree() <= self.max_degree && a.max_mode().is_none_or(|m| m < self.max_mode)
    }

    /// All basis labels within the caps, lexicographically ordered.
    pub fn basis(&self) -> Vec<MultiIndex> {
        MultiIndex::all_up_to(self.max_mode, self.max_degree)
    }

    pub fn with_max_degree(&self, max_degree: u32) -> Self {
        TruncationCaps { max_degree, ..*self }
    }
}

/// A finitely supported vector `Σ λ_A e_A`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FockVector {
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    /// `e_∅`.
    pub fn vacuum() -> Self {
        FockVector::basis(MultiIndex::vacuum())
    }

    pub fn basis(a: MultiIndex) -> Self {
        FockVector::monomial(a, Scalar::one())
    }

    pub fn monomial(a: MultiIndex, c: Scalar) -> Self {
        let mut v = FockVector::zero();
        v.add_term(a, &c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Scalar)>>(terms: I) -> Self {
        let mut v = FockVector::zero();
        for (a, c) in terms {
            v.add_term(a, &c);
        }
        v
    }

    /// Adds `c · e_a`, dropping the entry if it cancels.
    pub fn add_term(&mut self, a: MultiIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, a: &MultiIndex) -> Scalar {
        self.terms.get(a).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn fits(&self, caps: &TruncationCaps) -> bool {
        self.terms.keys().all(|a| caps.contains(a))
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &FockVector) {
        for (a, c) in &other.terms {
            self.add_term(a.clone(), c);
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (a, x) in &other.terms {
            self.add_term(a.clone(), &(x * c));
        }
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> FockVector {
        let mut out = FockVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Components of degree `≤ max_degree` only.
    pub fn truncate_degree(&self, max_degree: u32) -> FockVector {
        FockVector {
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() <= max_degree)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// `:e_B · self:`, i.e. every label shifted by `B`.
    pub fn wick_shift(&self, b: &MultiIndex) -> FockVector {
        FockVector {
            terms: self.terms.iter().map(|(a, c)| (a.concat(b), c.clone())).collect(),
        }
    }
}

/// `ξ = Σ λ_i e_i`, a degree-one test vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TestVector {
    coeffs: BTreeMap<u32, Scalar>,
}

impl TestVector {
    pub fn zero() -> Self {
        TestVector { coeffs: BTreeMap::new() }
    }

    /// The unit vector `e_mode`.
    pub fn unit(mode: u32) -> Self {
        TestVector::from_coeffs([(mode, Scalar::one())])
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Scalar)>>(coeffs: I) -> Self {
        let mut v = TestVector::zero();
        for (i, c) in coeffs {
            v.add_coeff(i, &c);
        }
        v
    }

    pub fn add_coeff(&mut self, mode: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(mode).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mode);
        }
    }

    pub fn coeff(&self, mode: u32) -> Scalar {
        self.coeffs.get(&mode).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn modes(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn max_mode(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TestVector) -> TestVector {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_coeff(i, c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TestVector {
        TestVector::from_coeffs(self.iter().map(|(i, x)| (i, x * c)))
    }

    /// Bilinear `⟨ξ, η⟩ = Σ λ_i μ_i`.
    pub fn dot(&self, other: &TestVector) -> Scalar {
        self.iter()
            .map(|(i, c)| c * &other.coeff(i))
            .sum()
    }

    /// `ξ^A = ∏ λ_{i_j}^{r_j}`.
    pub fn power(&self, a: &MultiIndex) -> Scalar {
        let mut acc = Scalar::one();
        for &(i, r) in a.pairs() {
            match self.coeffs.get(&i) {
                Some(c) => acc = &acc * &c.pow(r),
                None => return Scalar::zero(),
            }
        }
        acc
    }

    /// Degree-one embedding `Σ λ_i e_{(i,1)}`.
    pub fn embed(&self) -> FockVector {
        FockVector::from_terms(self.iter().map(|(i, c)| (MultiIndex::single(i), c.clone())))
    }
}

/// Normalized Wick product: bilinear extension of `:e_A e_B: = e_{A∪B}`.
pub fn wick_product(x: &FockVector, y: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (a, s) in x.iter() {
        for (b, t) in y.iter() {
            out.add_term(a.concat(b), &(s * t));
        }
    }
    out
}

/// Wick product with every output component of degree above `max_degree` discarded.
pub fn wick_product_truncated(x: &FockVector, y: &FockVector, max_degree: u32) -> FockVector {
    let mut out = FockVector::zero();
    for (a, s) in x.iter() {
        let da = a.degree();
        if da > max_degree {
            continue;
        }
        for (b, t) in y.iter() {
            if da + b.degree() <= max_degree {
                out.add_term(a.concat(b), &(s * t));
            }
        }
    }
    out
}

/// Bilinear pairing `Σ_A λ_A μ_A A!` (no conjugation).
pub fn pairing(x: &FockVector, y: &FockVector) -> Scalar {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small
        .iter()
        .filter_map(|(a, s)| {
            large.terms.get(a).map(|t| (s * t).scale_int(&BigInt::from(a.pairing_weight())))
        })
        .sum()
}

/// `‖x‖²_{k,C} = Σ_A |λ_A|² C^{2|A|} ‖A‖^{2k} |A|!`.
pub fn norm_squared(x: &FockVector, k: u32, c: &BigRational) -> BigRational {
    let c2 = c * c;
    x.iter()
        .map(|(a, s)| {
            let weight = a.hida_weight().pow(2 * k) * a.factorial_degree();
            s.abs_squared() * num_traits::pow(c2.clone(), a.degree() as usize)
                * BigRational::from_integer(BigInt::from(weight))
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// Coherent vector `φ_ξ = Σ_n ξ^{⊗n}/n!` truncated to degree `≤ max_degree`,
/// computed from the closed form: the coefficient of `e_A` is `ξ^A / A!`.
pub fn coherent(xi: &TestVector, max_degree: u32) -> FockVector {
    let modes = xi.modes();
    let mut out = FockVector::vacuum();
    let mut frontier = vec![(MultiIndex::vacuum(), Scalar::one(), 0usize)];
    // Each label is generated once, raising modes in nondecreasing order.
    while let Some((a, c, start)) = frontier.pop() {
        if a.degree() == max_degree {
            continue;
        }
        for (pos, &i) in modes.iter().enumerate().skip(start) {
            let b = a.raised(i);
            let r = b.multiplicity(i);
            let coeff = &(&c * &xi.coeff(i)) / &Scalar::from_int(i64::from(r));
            out.add_term(b.clone(), &coeff);
            frontier.push((b, coeff, pos));
        }
    }
    out
}

/// `ξ^{⊗n} = Σ_{|A|=n} (n!/A!) ξ^A e_A`.
pub fn wick_power(xi: &TestVector, n: u32) -> FockVector {
    let modes = xi.modes();
    let max_mode = match modes.last() {
        Some(&m) => m + 1,
        None => return if n == 0 { FockVector::vacuum() } else { FockVector::zero() },
    };
    let nfact = factorial(n);
    FockVector::from_terms(
        MultiIndex::all_of_degree(max_mode, n)
            .into_iter()
            .filter(|a| a.pairs().iter().all(|&(i, _)| !xi.coeff(i).is_zero()))
            .map(|a| {
                let multinomial = BigInt::from(&nfact / a.pairing_weight());
                let c = xi.power(&a).scale_int(&multinomial);
                (a, c)
            }),
    )
}

/// S-transform `S x (η) = ⟨x, φ_η⟩`, with `φ_η` truncated at the top degree of `x`.
pub fn s_transform(x: &FockVector, eta: &TestVector) -> Scalar {
    let d = x.max_degree().unwrap_or(0);
    pairing(x, &coherent(eta, d))
}

/// Drops every term outside `caps`. Idempotent.
pub fn truncate(x: &FockVector, caps: &TruncationCaps) -> FockVector {
    FockVector {
        terms: x
            .terms
            .iter()
            .filter(|(a, _)| caps.contains(a))
            .map(|(a, c)| (a.clone(), c.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(p: &[(u32, u32)]) -> MultiIndex {
        MultiIndex::try_from_sorted(p.to_vec()).unwrap()
    }

    fn e(p: &[(u32, u32)]) -> FockVector {
        FockVector::basis(mi(p))
    }

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::from_ratio(p, d)
    }

    #[test]
    fn wick_product_examples() {
        let y = e(&[(0, 1)]).add(&e(&[(2, 3)]).scale(&q(1, 2)));
        assert_eq!(wick_product(&FockVector::vacuum(), &y), y);
        assert_eq!(wick_product(&e(&[(1, 2)]), &e(&[(1, 1), (3, 1)])), e(&[(1, 3), (3, 1)]));
        let s = e(&[(0, 1)]).add(&e(&[(1, 1)]));
        let expect = e(&[(0, 2)])
            .add(&e(&[(0, 1), (1, 1)]).scale(&q(2, 1)))
            .add(&e(&[(1, 2)]));
        assert_eq!(wick_product(&s, &s), expect);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&FockVector::vacuum(), &FockVector::vacuum()), Scalar::one());
        assert_eq!(pairing(&e(&[(0, 2)]), &e(&[(0, 2)])), q(2, 1));
        assert_eq!(pairing(&e(&[(0, 1)]), &e(&[(1, 1)])), Scalar::zero());
    }

    #[test]
    fn pairing_is_bilinear_not_sesquilinear() {
        let x = e(&[(0, 1)]).scale(&Scalar::i());
        assert_eq!(pairing(&x, &x), q(-1, 1));
    }

    #[test]
    fn norm_examples() {
        let one = BigRational::one();
        assert_eq!(norm_squared(&FockVector::vacuum(), 3, &BigRational::new(7.into(), 3.into())), one);
        assert_eq!(
            norm_squared(&e(&[(0, 2), (3, 1)]), 1, &one),
            BigRational::from_integer(6144.into())
        );
        assert_eq!(
            norm_squared(&e(&[(0, 1)]).scale(&q(2, 1)), 0, &BigRational::new(1.into(), 2.into())),
            one
        );
    }

    #[test]
    fn coherent_examples() {
        assert_eq!(coherent(&TestVector::zero(), 4), FockVector::vacuum());
        let expect = FockVector::vacuum()
            .add(&e(&[(0, 1)]))
            .add(&e(&[(0, 2)]).scale(&q(1, 2)));
        assert_eq!(coherent(&TestVector::unit(0), 2), expect);
        let xi = TestVector::unit(0).add(&TestVector::unit(1));
        let expect = FockVector::vacuum()
            .add(&e(&[(0, 1)]))
            .add(&e(&[(1, 1)]))
            .add(&e(&[(0, 2)]).scale(&q(1, 2)))
            .add(&e(&[(0, 1), (1, 1)]))
            .add(&e(&[(1, 2)]).scale(&q(1, 2)));
        assert_eq!(coherent(&xi, 2), expect);
    }

    #[test]
    fn coherent_degree_zero_is_vacuum() {
        assert_eq!(coherent(&TestVector::unit(3), 0), FockVector::vacuum());
    }

    #[test]
    fn wick_power_examples() {
        let xi = TestVector::unit(0).add(&TestVector::unit(1));
        assert_eq!(wick_power(&xi, 0), FockVector::vacuum());
        assert_eq!(wick_power(&TestVector::zero(), 0), FockVector::vacuum());
        assert_eq!(wick_power(&TestVector::zero(), 2), FockVector::zero());
        let expect = e(&[(0, 2)])
            .add(&e(&[(0, 1), (1, 1)]).scale(&q(2, 1)))
            .add(&e(&[(1, 2)]));
        assert_eq!(wick_power(&xi, 2), expect);
        let three_e2 = TestVector::unit(2).scale(&q(3, 1));
        assert_eq!(wick_power(&three_e2, 2), e(&[(2, 2)]).scale(&q(9, 1)));
    }

    #[test]
    fn wick_power_skips_zero_modes() {
        let xi = TestVector::from_coeffs([(0, q(1, 1)), (3, q(2, 1))]);
        assert_eq!(wick_power(&xi, 1), xi.embed());
    }

    #[test]
    fn s_transform_examples() {
        let eta = TestVector::unit(4).scale(&q(5, 3));
        assert_eq!(s_transform(&FockVector::vacuum(), &eta), Scalar::one());
        assert_eq!(s_transform(&e(&[(0, 2)]), &TestVector::unit(0).scale(&q(2, 1))), q(4, 1));
        let xi = TestVector::from_coeffs([(0, q(1, 1)), (1, q(2, 1))]);
        let eta = TestVector::from_coeffs([(0, q(2, 1)), (1, q(-1, 1)), (2, q(7, 1))]);
        assert!(xi.dot(&eta).is_zero());
        assert_eq!(s_transform(&coherent(&xi, 5), &eta), Scalar::one());
    }

    #[test]
    fn truncate_examples() {
        let caps = TruncationCaps::new(3, 2);
        let x = e(&[(0, 1)]).add(&e(&[(2, 2)]));
        assert_eq!(truncate(&x, &caps), x);
        let y = FockVector::vacuum().add(&e(&[(0, 3)]));
        assert_eq!(truncate(&y, &caps), FockVector::vacuum());
        assert_eq!(truncate(&e(&[(5, 1)]), &TruncationCaps::new(3, 10)), FockVector::zero());
        assert_eq!(truncate(&truncate(&y, &caps), &caps), truncate(&y, &caps));
    }

    #[test]
    fn cancellation_removes_entries() {
        let x = e(&[(0, 1)]);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.sub(&x).len(), 0);
    }
}
