//! Occupation patterns `A = ((i₁,r₁),…,(iₙ,rₙ))` labelling the symmetric
//! Fock basis vectors `e_A`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite multi-index: modes strictly increasing, multiplicities positive.
///
/// The empty pattern is the vacuum label. The derived ordering is the
/// lexicographic order on the `(mode, multiplicity)` pairs, which fixes every
/// basis enumeration in the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pairs: Vec<(u32, u32)>,
}

impl MultiIndex {
    pub fn vacuum() -> Self {
        MultiIndex { pairs: Vec::new() }
    }

    /// The degree-one label `((mode,1))`.
    pub fn single(mode: u32) -> Self {
        MultiIndex { pairs: vec![(mode, 1)] }
    }

    /// Builds a multi-index from arbitrary `(mode, multiplicity)` pairs:
    /// repeated modes are merged and zero multiplicities dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, r)| r > 0).collect();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, r) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += r,
                _ => out.push((i, r)),
            }
        }
        MultiIndex { pairs: out }
    }

    /// Strict constructor: rejects unsorted modes, repeats, or zero multiplicities.
    pub fn try_from_sorted(pairs: Vec<(u32, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Invalid(format!(
                    "multi-index modes must be strictly increasing: {pairs:?}"
                )));
            }
        }
        if pairs.iter().any(|&(_, r)| r == 0) {
            return Err(Error::Invalid(format!(
                "multi-index multiplicities must be positive: {pairs:?}"
            )));
        }
        Ok(MultiIndex { pairs })
    }

    /// Multi-index with the given occupation per mode, e.g. `[2,0,1]` → `((0,2),(2,1))`.
    pub fn from_occupations(occ: &[u32]) -> Self {
        MultiIndex {
            pairs: occ
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > 0)
                .map(|(i, &r)| (i as u32, r))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn is_vacuum(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `|A| = Σ r_j`.
    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(_, r)| r).sum()
    }

    /// Multiplicity of `mode`, zero when absent.
    pub fn multiplicity(&self, mode: u32) -> u32 {
        match self.pairs.binary_search_by_key(&mode, |&(i, _)| i) {
            Ok(pos) => self.pairs[pos].1,
            Err(_) => 0,
        }
    }

    /// Largest mode present.
    pub fn max_mode(&self) -> Option<u32> {
        self.pairs.last().map(|&(i, _)| i)
    }

    /// Hida weight `‖A‖ = ∏ (2 i_j + 2)^{r_j}`.
    pub fn hida_weight(&self) -> BigUint {
        self.pairs
            .iter()
            .map(|&(i, r)| BigUint::from(2 * u64::from(i) + 2).pow(r))
            .product()
    }

    /// `|A|!`.
    pub fn factorial_degree(&self) -> BigUint {
        factorial(self.degree())
    }

    /// `A! = ∏ r_j!`, the weight of `e_A` in the bilinear pairing.
    pub fn pairing_weight(&self) -> BigUint {
        self.pairs.iter().map(|&(_, r)| factorial(r)).product()
    }

    /// Concatenation `A ∪ B`: multiplicities add mode by mode.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let (a, b) = (&self.pairs, &other.pairs);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].0.cmp(&b[q].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[p]);
                    p += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[q]);
                    q += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[p].0, a[p].1 + b[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        out.extend_from_slice(&a[p..]);
        out.extend_from_slice(&b[q..]);
        MultiIndex { pairs: out }
    }

    /// `A ⊆ B` as occupation patterns.
    pub fn is_contained_in(&self, other: &MultiIndex) -> bool {
        self.pairs.iter().all(|&(i, r)| other.multiplicity(i) >= r)
    }

    /// `B − A` when `A ⊆ B`.
    pub fn checked_sub(&self, sub: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.pairs.len());
        let mut q = 0;
        for &(i, r) in &self.pairs {
            let s = if q < sub.pairs.len() && sub.pairs[q].0 == i {
                q += 1;
                sub.pairs[q - 1].1
            } else {
                0
            };
            match r.checked_sub(s)? {
                0 => {}
                left => out.push((i, left)),
            }
        }
        if q != sub.pairs.len() {
            return None;
        }
        Some(MultiIndex { pairs: out })
    }

    /// `A^i`: raise the multiplicity of `mode` by one.
    pub fn raised(&self, mode: u32) -> MultiIndex {
        self.concat(&MultiIndex::single(mode))
    }

    /// `A_i`: lower the multiplicity of `mode` by one; `None` if absent.
    pub fn lowered(&self, mode: u32) -> Option<MultiIndex> {
        self.checked_sub(&MultiIndex::single(mode))
    }

    /// Every ordered pair `(B, D)` with `B ∪ D = A`; there are `∏ (r_j + 1)` of them.
    pub fn decompositions(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let mut out = vec![(Vec::new(), Vec::new())];
        for &(i, r) in &self.pairs {
            let mut next = Vec::with_capacity(out.len() * (r as usize + 1));
            for (b, d) in &out {
                for k in 0..=r {
                    let mut b2: Vec<(u32, u32)> = b.clone();
                    let mut d2: Vec<(u32, u32)> = d.clone();
                    if k > 0 {
                        b2.push((i, k));
                    }
                    if k < r {
                        d2.push((i, r - k));
                    }
                    next.push((b2, d2));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(b, d)| (MultiIndex { pairs: b }, MultiIndex { pairs: d }))
            .collect()
    }

    /// Number of decompositions, `∏ (r_j + 1)`, without enumerating them.
    pub fn decomposition_count(&self) -> BigUint {
        self.pairs.iter().map(|&(_, r)| BigUint::from(r + 1)).product()
    }

    /// Every multi-index with modes `< max_mode` and degree exactly `degree`,
    /// in lexicographic order.
    pub fn all_of_degree(max_mode: u32, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut occ = vec![0u32; max_mode as usize];
        fill_occupations(&mut occ, 0, degree, &mut out);
        out.sort();
        out
    }

    /// Every multi-index with modes `< max_mode` and degree `≤ max_degree`,
    /// in lexicographic order.
    pub fn all_up_to(max_mode: u32, max_degree: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0..=max_degree)
            .flat_map(|d| MultiIndex::all_of_degree(max_mode, d))
            .collect();
        out.sort();
        out
    }
}

fn fill_occupations(occ: &mut [u32], pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos == occ.len() {
        if left == 0 {
            out.push(MultiIndex::from_occupations(occ));
        }
        return;
    }
    for r in 0..=left {
        occ[pos] = r;
        fill_occupations(occ, pos + 1, left - r, out);
    }
    occ[pos] = 0;
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (k, (i, r)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{r})")?;
        }
        write!(f, ")")
    }
}

// JSON form: `[[mode, multiplicity], …]` sorted by mode; the vacuum is `[]`.
impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(u32, u32)>::deserialize(d)?;
        MultiIndex::try_from_sorted(pairs).map_err(serde::de::Error::custom)
    }
}
