//! Creation and annihilation operators, kernel operators `a*_I a_{J₁}⋯a_{J_r}`
//! and extensional multilinear operators on the truncated space.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{truncate, wick_product, FockVector, TruncationCaps};
use crate::multiindex::MultiIndex;
use crate::par;
use crate::scalar::Scalar;

/// The constants in `a*_i e_A = c(r) e_{A^i}` and `a_i e_A = c'(r) e_{A_i}`.
///
/// `creation` receives the multiplicity of the mode before raising,
/// `annihilation` the multiplicity before lowering (always ≥ 1).
#[derive(Clone, Copy, Debug)]
pub struct LadderConstants {
    pub creation: fn(u32) -> u32,
    pub annihilation: fn(u32) -> u32,
}

impl LadderConstants {
    /// `c(r) = 1`, `c'(r) = r`: the pair making `a_i` and `a*_i` adjoint for
    /// the pairing weight `A!` with `[a_i, a*_i] = 1`.
    pub const STANDARD: LadderConstants = LadderConstants {
        creation: |_| 1,
        annihilation: |r| r,
    };
}

impl Default for LadderConstants {
    fn default() -> Self {
        LadderConstants::STANDARD
    }
}

pub fn apply_annihilation(mode: u32, x: &FockVector) -> FockVector {
    apply_annihilation_with(&LadderConstants::STANDARD, mode, x)
}

pub fn apply_annihilation_with(k: &LadderConstants, mode: u32, x: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (a, c) in x.iter() {
        let r = a.multiplicity(mode);
        if r == 0 {
            continue;
        }
        let lowered = a.lowered(mode).expect("mode is present");
        out.add_term(lowered, &c.scale_int(&(k.annihilation)(r).into()));
    }
    out
}

pub fn apply_creation(mode: u32, x: &FockVector) -> FockVector {
    apply_creation_with(&LadderConstants::STANDARD, mode, x)
}

pub fn apply_creation_with(k: &LadderConstants, mode: u32, x: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (a, c) in x.iter() {
        let r = a.multiplicity(mode);
        out.add_term(a.raised(mode), &c.scale_int(&(k.creation)(r).into()));
    }
    out
}

/// `a_J = ∏ a_j^{r_j}` with standard constants: `a_J e_A = (A!/(A−J)!) e_{A−J}`
/// when `J ⊆ A`, zero otherwise.
pub fn apply_annihilation_multi(j: &MultiIndex, x: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (a, c) in x.iter() {
        if let Some(rest) = a.checked_sub(j) {
            let falling = a.pairing_weight() / rest.pairing_weight();
            out.add_term(rest, &c.scale_int(&falling.into()));
        }
    }
    out
}

/// `a*_I = ∏ (a*_i)^{r_i}`, i.e. Wick multiplication by `e_I`.
pub fn apply_creation_multi(i: &MultiIndex, x: &FockVector) -> FockVector {
    x.wick_shift(i)
}

/// Label of one kernel entry: the created pattern `I` and one annihilated
/// pattern `J_j` per argument slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelKey {
    pub create: MultiIndex,
    pub annihilate: Vec<MultiIndex>,
}

impl KernelKey {
    pub fn new(create: MultiIndex, annihilate: Vec<MultiIndex>) -> Self {
        KernelKey { create, annihilate }
    }

    /// `l = |I|`.
    pub fn l(&self) -> u32 {
        self.create.degree()
    }

    /// `M = (|J_1|, …, |J_r|)`.
    pub fn m_tuple(&self) -> Vec<u32> {
        self.annihilate.iter().map(MultiIndex::degree).collect()
    }

    /// `m = Σ M_j`.
    pub fn m(&self) -> u32 {
        self.annihilate.iter().map(MultiIndex::degree).sum()
    }

    pub fn block(&self) -> BlockId {
        BlockId { l: self.l(), m: self.m_tuple() }
    }
}

/// The `(l, M)` label of a block of the Fock expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId {
    pub l: u32,
    pub m: Vec<u32>,
}

impl BlockId {
    pub fn total_m(&self) -> u32 {
        self.m.iter().sum()
    }
}

/// Fock-expansion data `{K_{l,M}}`: the operator
/// `Σ λ_{I,J} a*_I :(a_{J_1}φ¹)⋯(a_{J_r}φ^r):`.
///
/// Entries are stored flat; the block structure is derived from the keys, so
/// `degree(I) = l` and `degree(J_j) = M_j` hold by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelFamily {
    arity: usize,
    entries: BTreeMap<KernelKey, Scalar>,
}

impl KernelFamily {
    /// Arity zero denotes an algebra element (a 0-cochain).
    pub fn new(arity: usize) -> Self {
        KernelFamily { arity, entries: BTreeMap::new() }
    }

    /// `{(0,(0,…,0)): (∅,(∅,…,∅)) ↦ 1}`: identity for arity one, the Wick
    /// multiplication cochain for higher arities.
    pub fn wick_unit(arity: usize) -> Self {
        let mut k = KernelFamily::new(arity);
        k.insert(KernelKey::new(MultiIndex::vacuum(), vec![MultiIndex::vacuum(); arity]), Scalar::one())
            .expect("arity matches");
        k
    }

    /// Single-entry family `c · a*_I a_{J}`.
    pub fn single(create: MultiIndex, annihilate: Vec<MultiIndex>, c: Scalar) -> Self {
        let mut k = KernelFamily::new(annihilate.len());
        k.insert(KernelKey::new(create, annihilate), c).expect("arity matches");
        k
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Adds `c` to the entry at `key`.
    pub fn insert(&mut self, key: KernelKey, c: Scalar) -> Result<()> {
        if key.annihilate.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: key.annihilate.len() });
        }
        self.add_entry(key, &c);
        Ok(())
    }

    pub(crate) fn add_entry(&mut self, key: KernelKey, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
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

    pub fn get(&self, key: &KernelKey) -> Scalar {
        self.entries.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&KernelKey, &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries grouped by `(l, M)`.
    pub fn blocks(&self) -> BTreeMap<BlockId, Vec<(&KernelKey, &Scalar)>> {
        let mut out: BTreeMap<BlockId, Vec<(&KernelKey, &Scalar)>> = BTreeMap::new();
        for (k, v) in &self.entries {
            out.entry(k.block()).or_default().push((k, v));
        }
        out
    }

    /// Distinct `(l, m)` strata, `m = Σ M_j`.
    pub fn strata(&self) -> Vec<(u32, u32)> {
        let mut s: Vec<(u32, u32)> = self.entries.keys().map(|k| (k.l(), k.m())).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn add(&self, other: &KernelFamily) -> Result<KernelFamily> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        let mut out = self.clone();
        for (k, v) in other.entries() {
            out.add_entry(k.clone(), v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> KernelFamily {
        let mut out = KernelFamily::new(self.arity);
        for (k, v) in self.entries() {
            out.add_entry(k.clone(), &(v * c));
        }
        out
    }

    /// Keeps only entries accepted by `keep`.
    pub fn filter<F: Fn(&KernelKey) -> bool>(&self, keep: F) -> KernelFamily {
        KernelFamily {
            arity: self.arity,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// True when every `I` and `J_j` fits in `caps`.
    pub fn fits(&self, caps: &TruncationCaps) -> bool {
        self.entries
            .keys()
            .all(|k| caps.contains(&k.create) && k.annihilate.iter().all(|j| caps.contains(j)))
    }
}

/// Applies a kernel family to `args`: `Σ λ_{I,J} a*_I :(a_{J_1}args₁)⋯(a_{J_r}args_r):`.
pub fn apply_kernel(k: &KernelFamily, args: &[FockVector]) -> Result<FockVector> {
    if args.len() != k.arity() {
        return Err(Error::ArityMismatch { expected: k.arity(), got: args.len() });
    }
    let mut annihilated: Vec<BTreeMap<&MultiIndex, FockVector>> = vec![BTreeMap::new(); args.len()];
    let mut out = FockVector::zero();
    for (key, c) in k.entries() {
        let mut prod = FockVector::vacuum();
        for (slot, j) in key.annihilate.iter().enumerate() {
            let part = annihilated[slot]
                .entry(j)
                .or_insert_with(|| apply_annihilation_multi(j, &args[slot]));
            if part.is_zero() {
                prod = FockVector::zero();
                break;
            }
            prod = wick_product(&prod, part);
        }
        if prod.is_zero() {
            continue;
        }
        out.add_scaled(&apply_creation_multi(&key.create, &prod), c);
    }
    Ok(out)
}

/// Extensional `r`-linear operator: images of every tuple of basis labels
/// within `caps`. Absent rows are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisActionTable {
    arity: usize,
    caps: TruncationCaps,
    rows: BTreeMap<Vec<MultiIndex>, FockVector>,
}

impl BasisActionTable {
    pub fn zero(arity: usize, caps: TruncationCaps) -> Self {
        BasisActionTable { arity, caps, rows: BTreeMap::new() }
    }

    /// `e_A ↦ e_A` on every basis label within `caps`.
    pub fn identity(caps: TruncationCaps) -> Self {
        let mut t = BasisActionTable::zero(1, caps);
        for a in caps.basis() {
            t.rows.insert(vec![a.clone()], FockVector::basis(a));
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn caps(&self) -> TruncationCaps {
        self.caps
    }

    /// Sets the image of a basis tuple. The tuple and the image must lie within caps.
    pub fn set_row(&mut self, args: Vec<MultiIndex>, value: FockVector) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: args.len() });
        }
        if let Some(a) = args.iter().find(|a| !self.caps.contains(a)) {
            return Err(Error::Truncation(format!("argument label {a} outside {:?}", self.caps)));
        }
        if !value.fits(&self.caps) {
            return Err(Error::Truncation(format!("row value outside {:?}", self.caps)));
        }
        if value.is_zero() {
            self.rows.remove(&args);
        } else {
            self.rows.insert(args, value);
        }
        Ok(())
    }

    pub fn row(&self, args: &[MultiIndex]) -> Option<&FockVector> {
        self.rows.get(args)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vec<MultiIndex>, &FockVector)> {
        self.rows.iter()
    }

    pub fn nonzero_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row-wise sum; both tables must share arity and caps.
    pub fn add(&self, other: &BasisActionTable) -> Result<BasisActionTable> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (args, v) in other.rows() {
            let sum = out.rows.get(args).map_or_else(|| v.clone(), |w| w.add(v));
            if sum.is_zero() {
                out.rows.remove(args);
            } else {
                out.rows.insert(args.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> BasisActionTable {
        let mut out = BasisActionTable::zero(self.arity, self.caps);
        if c.is_zero() {
            return out;
        }
        for (args, v) in self.rows() {
            out.rows.insert(args.clone(), v.scale(c));
        }
        out
    }

    fn check_compatible(&self, other: &BasisActionTable) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        if self.caps != other.caps {
            return Err(Error::Invalid(format!("caps differ: {:?} vs {:?}", self.caps, other.caps)));
        }
        Ok(())
    }

    /// Restricts to smaller caps: rows over the smaller basis, images truncated.
    pub fn restrict(&self, caps: TruncationCaps) -> Result<BasisActionTable> {
        if caps.max_mode > self.caps.max_mode || caps.max_degree > self.caps.max_degree {
            return Err(Error::Truncation(format!("cannot restrict {:?} to larger {:?}", self.caps, caps)));
        }
        let mut out = BasisActionTable::zero(self.arity, caps);
        for (args, v) in self.rows() {
            if args.iter().all(|a| caps.contains(a)) {
                let w = truncate(v, &caps);
                if !w.is_zero() {
                    out.rows.insert(args.clone(), w);
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn from_rows(arity: usize, caps: TruncationCaps, rows: BTreeMap<Vec<MultiIndex>, FockVector>) -> Self {
        BasisActionTable { arity, caps, rows }
    }
}

/// Every `r`-tuple of basis labels within `caps`, in lexicographic order.
pub fn basis_tuples(arity: usize, caps: &TruncationCaps) -> Vec<Vec<MultiIndex>> {
    let basis = caps.basis();
    let mut out: Vec<Vec<MultiIndex>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                basis.iter().map(move |a| {
                    let mut t = prefix.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Tabulates `K` on every basis tuple within `caps`, truncating images to `caps`.
pub fn table_from_kernel(k: &KernelFamily, caps: TruncationCaps) -> BasisActionTable {
    let tuples = basis_tuples(k.arity(), &caps);
    let images = par::map(&tuples, |args| {
        let mut out = FockVector::zero();
        for (key, c) in k.entries() {
            if !caps.contains(&key.create) {
                continue;
            }
            let mut rest = key.create.clone();
            let mut weight = num_bigint::BigUint::one();
            let mut ok = true;
            for (a, j) in args.iter().zip(&key.annihilate) {
                match a.checked_sub(j) {
                    Some(left) => {
                        weight *= a.pairing_weight() / left.pairing_weight();
                        rest = rest.concat(&left);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && rest.degree() <= caps.max_degree {
                out.add_term(rest, &c.scale_int(&weight.into()));
            }
        }
        out
    });
    let rows = tuples
        .into_iter()
        .zip(images)
        .filter(|(_, v)| !v.is_zero())
        .collect();
    BasisActionTable::from_rows(k.arity(), caps, rows)
}

/// Multilinear extension of the stored basis action.
pub fn apply_table(t: &BasisActionTable, args: &[FockVector]) -> Result<FockVector> {
    if args.len() != t.arity() {
        return Err(Error::ArityMismatch { expected: t.arity(), got: args.len() });
    }
    for (slot, x) in args.iter().enumerate() {
        if !x.fits(&t.caps()) {
            return Err(Error::Truncation(format!(
                "argument {slot} has support outside {:?}",
                t.caps()
            )));
        }
    }
    let mut out = FockVector::zero();
    for (labels, v) in t.rows() {
        let mut c = Scalar::one();
        for (a, x) in labels.iter().zip(args) {
            c = &c * &x.coeff(a);
            if c.is_zero() {
                break;
            }
        }
        out.add_scaled(v, &c);
    }
    Ok(out)
}
