//! Symbols of multilinear operators: numerically on coherent vectors and as
//! exact polynomials in the slot variables `x^{(j)}_i` and `η`-variables `y_i`.
//!
//! A monomial `∏_j (x^{(j)})^{A_j} · y^B` is stored as the exponent patterns
//! `(A_1, …, A_r; B)`, reusing [`MultiIndex`].
//!
//! Truncation: a polynomial built from a table with caps `(K, N)` carries
//! every monomial with each slot degree `≤ N` and `η`-degree `≤ N` over modes
//! `< K`, and nothing else. Products are taken in the quotient ring that
//! forgets monomials beyond those caps. Multiplying by `exp(±Σ⟨x^{(j)}, y⟩)`
//! only raises degrees, so every coefficient kept in the quotient is exact;
//! in particular the reduced symbol of a table agrees with the full power
//! series on all monomials within caps.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{coherent, pairing, TestVector, TruncationCaps};
use crate::multiindex::MultiIndex;
use crate::operators::{apply_table, BasisActionTable, KernelFamily, KernelKey};
use crate::scalar::Scalar;

/// Exponent data of one symbol monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub xi: Vec<MultiIndex>,
    pub eta: MultiIndex,
}

impl Monomial {
    pub fn new(xi: Vec<MultiIndex>, eta: MultiIndex) -> Self {
        Monomial { xi, eta }
    }

    pub fn one(arity: usize) -> Self {
        Monomial { xi: vec![MultiIndex::vacuum(); arity], eta: MultiIndex::vacuum() }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a.concat(b)).collect(),
            eta: self.eta.concat(&other.eta),
        }
    }

    pub fn fits(&self, caps: &TruncationCaps) -> bool {
        caps.contains(&self.eta) && self.xi.iter().all(|a| caps.contains(a))
    }

    /// Total `ξ`-degree summed over slots.
    pub fn xi_degree(&self) -> u32 {
        self.xi.iter().map(MultiIndex::degree).sum()
    }

    pub fn eta_degree(&self) -> u32 {
        self.eta.degree()
    }
}

/// A truncated polynomial in the slot variables and `η`-variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPolynomial {
    arity: usize,
    caps: TruncationCaps,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SymbolPolynomial {
    pub fn zero(arity: usize, caps: TruncationCaps) -> Self {
        SymbolPolynomial { arity, caps, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize, caps: TruncationCaps) -> Self {
        let mut p = SymbolPolynomial::zero(arity, caps);
        p.add_term(Monomial::one(arity), &Scalar::one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn caps(&self) -> TruncationCaps {
        self.caps
    }

    /// Adds `c` times `m`; monomials outside caps are discarded.
    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        debug_assert_eq!(m.xi.len(), self.arity);
        if c.is_zero() || !m.fits(&self.caps) {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
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

    fn check_compatible(&self, other: &SymbolPolynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        if self.caps != other.caps {
            return Err(Error::Invalid(format!("caps differ: {:?} vs {:?}", self.caps, other.caps)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(self.arity, self.caps);
        for (m, x) in self.terms() {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    /// Product in the truncated ring.
    pub fn mul(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.check_compatible(other)?;
        let lhs: Vec<(&Monomial, &Scalar)> = self.terms().collect();
        let caps = self.caps;
        let partials = crate::par::map(&lhs, |(m, c)| {
            let mut acc = SymbolPolynomial::zero(self.arity, caps);
            for (n, d) in other.terms() {
                let prod = m.mul(n);
                if prod.fits(&caps) {
                    acc.add_term(prod, &(*c * d));
                }
            }
            acc
        });
        let mut out = SymbolPolynomial::zero(self.arity, caps);
        for p in partials {
            for (m, c) in p.terms {
                out.add_term(m, &c);
            }
        }
        Ok(out)
    }

    /// Evaluates at the slot vectors `xis` and `eta`.
    pub fn evaluate(&self, xis: &[TestVector], eta: &TestVector) -> Result<Scalar> {
        if xis.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: xis.len() });
        }
        Ok(self
            .terms()
            .map(|(m, c)| {
                let mut v = c * &eta.power(&m.eta);
                for (x, a) in xis.iter().zip(&m.xi) {
                    v = &v * &x.power(a);
                }
                v
            })
            .sum())
    }

    /// The truncated exponential `exp(s · Σ_j ⟨x^{(j)}, y⟩)` for `s = ±1`:
    /// `Σ_{A_1,…,A_r} s^{Σ|A_j|} ∏_j (x^{(j)})^{A_j} y^{∪A_j} / A_j!`.
    pub fn exponential(arity: usize, caps: TruncationCaps, negative: bool) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(arity, caps);
        let mut stack: Vec<(Vec<MultiIndex>, MultiIndex, Scalar)> =
            vec![(Vec::new(), MultiIndex::vacuum(), Scalar::one())];
        let basis = caps.basis();
        while let Some((xi, eta, c)) = stack.pop() {
            if xi.len() == arity {
                out.add_term(Monomial::new(xi, eta), &c);
                continue;
            }
            for a in &basis {
                let joined = eta.concat(a);
                if joined.degree() > caps.max_degree {
                    continue;
                }
                let mut f = &c / &Scalar::from_biguint(&a.pairing_weight());
                if negative && a.degree() % 2 == 1 {
                    f = -f;
                }
                let mut xi2 = xi.clone();
                xi2.push(a.clone());
                stack.push((xi2, joined, f));
            }
        }
        out
    }

    /// Reads the polynomial as kernel data: monomial `∏(x^{(j)})^{J_j} y^I ↦ λ_{I,J}`.
    pub fn to_kernel(&self) -> KernelFamily {
        let mut k = KernelFamily::new(self.arity);
        for (m, c) in self.terms() {
            k.add_entry(KernelKey::new(m.eta.clone(), m.xi.clone()), c);
        }
        k
    }

    /// The reduced symbol of a kernel family, `Σ λ_{I,J} ∏(x^{(j)})^{J_j} y^I`,
    /// truncated to `caps`.
    pub fn from_kernel(k: &KernelFamily, caps: TruncationCaps) -> SymbolPolynomial {
        let mut p = SymbolPolynomial::zero(k.arity(), caps);
        for (key, c) in k.entries() {
            p.add_term(Monomial::new(key.annihilate.clone(), key.create.clone()), c);
        }
        p
    }
}

fn check_slot_vector(v: &TestVector, caps: &TruncationCaps, what: &str) -> Result<()> {
    match v.max_mode() {
        Some(m) if m >= caps.max_mode => Err(Error::Truncation(format!(
            "{what} uses mode {m}, outside max_mode {}",
            caps.max_mode
        ))),
        _ => Ok(()),
    }
}

/// `⟨T(φ_{ξ¹},…,φ_{ξ^r}), φ_η⟩` with every coherent vector truncated at the
/// table's `max_degree`.
pub fn symbol_numeric(t: &BasisActionTable, xis: &[TestVector], eta: &TestVector) -> Result<Scalar> {
    if xis.len() != t.arity() {
        return Err(Error::ArityMismatch { expected: t.arity(), got: xis.len() });
    }
    let caps = t.caps();
    for (j, x) in xis.iter().enumerate() {
        check_slot_vector(x, &caps, &format!("slot {j}"))?;
    }
    check_slot_vector(eta, &caps, "eta")?;
    let args: Vec<_> = xis.iter().map(|x| coherent(x, caps.max_degree)).collect();
    let image = apply_table(t, &args)?;
    Ok(pairing(&image, &coherent(eta, caps.max_degree)))
}

/// Exact symbol polynomial of a table:
/// `Σ_rows ∏_j (x^{(j)})^{A_j}/A_j! · Σ_B λ_B y^B`.
pub fn symbol_poly(t: &BasisActionTable) -> SymbolPolynomial {
    let mut p = SymbolPolynomial::zero(t.arity(), t.caps());
    for (args, v) in t.rows() {
        let denom: num_bigint::BigUint = args.iter().map(MultiIndex::pairing_weight).product();
        let inv = Scalar::from_biguint(&denom).inv().expect("factorials are nonzero");
        for (b, c) in v.iter() {
            p.add_term(Monomial::new(args.clone(), b.clone()), &(c * &inv));
        }
    }
    p
}

/// `P · exp(−Σ_j ⟨x^{(j)}, y⟩)` in the truncated ring.
pub fn reduced_symbol(p: &SymbolPolynomial) -> SymbolPolynomial {
    let e = SymbolPolynomial::exponential(p.arity(), p.caps(), true);
    p.mul(&e).expect("same arity and caps")
}

/// Inverse of [`reduced_symbol`] on tables: rebuilds the table whose symbol is
/// `Ψ · exp(Σ_j ⟨x^{(j)}, y⟩)`.
pub fn table_from_reduced(psi: &SymbolPolynomial) -> BasisActionTable {
    let caps = psi.caps();
    let full = psi
        .mul(&SymbolPolynomial::exponential(psi.arity(), caps, false))
        .expect("same arity and caps");
    let mut rows: BTreeMap<Vec<MultiIndex>, crate::fock::FockVector> = BTreeMap::new();
    for (m, c) in full.terms() {
        let w: num_bigint::BigUint = m.xi.iter().map(MultiIndex::pairing_weight).product();
        rows.entry(m.xi.clone())
            .or_default()
            .add_term(m.eta.clone(), &c.scale_int(&BigInt::from(w)));
    }
    rows.retain(|_, v| !v.is_zero());
    BasisActionTable::from_rows(psi.arity(), caps, rows)
}
