//! JSON wire formats. Rationals travel as strings `"p/q"` (optional sign);
//! every collection is emitted in sorted order so output is canonical.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::fock::{FockVector, TestVector, TruncationCaps};
use crate::multiindex::MultiIndex;
use crate::operators::{BasisActionTable, KernelFamily, KernelKey};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::symbol::{Monomial, SymbolPolynomial};

/// A scalar on the wire: `{"re": "p/q", "im": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRepr {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl From<&Scalar> for ScalarRepr {
    fn from(s: &Scalar) -> Self {
        ScalarRepr { re: format_rational(&s.re), im: format_rational(&s.im) }
    }
}

impl TryFrom<&ScalarRepr> for Scalar {
    type Error = Error;
    fn try_from(r: &ScalarRepr) -> Result<Scalar> {
        Ok(Scalar::new(parse_rational(&r.re)?, parse_rational(&r.im)?))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        Scalar::try_from(&r).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FockTerm {
    index: MultiIndex,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

#[derive(Serialize, Deserialize)]
struct FockVectorRepr {
    terms: Vec<FockTerm>,
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockVectorRepr {
            terms: self
                .iter()
                .map(|(a, c)| FockTerm { index: a.clone(), re: format_rational(&c.re), im: format_rational(&c.im) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FockVectorRepr::deserialize(d)?;
        let mut v = FockVector::zero();
        for t in r.terms {
            let c = Scalar::try_from(&ScalarRepr { re: t.re, im: t.im }).map_err(D::Error::custom)?;
            v.add_term(t.index, &c);
        }
        Ok(v)
    }
}

#[derive(Serialize, Deserialize)]
struct TestTerm {
    mode: u32,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

#[derive(Serialize, Deserialize)]
struct TestVectorRepr {
    coeffs: Vec<TestTerm>,
}

impl Serialize for TestVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TestVectorRepr {
            coeffs: self
                .iter()
                .map(|(i, c)| TestTerm { mode: i, re: format_rational(&c.re), im: format_rational(&c.im) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TestVectorRepr::deserialize(d)?;
        let mut v = TestVector::zero();
        for t in r.coeffs {
            let c = Scalar::try_from(&ScalarRepr { re: t.re, im: t.im }).map_err(D::Error::custom)?;
            v.add_coeff(t.mode, &c);
        }
        Ok(v)
    }
}

#[derive(Serialize, Deserialize)]
struct KernelEntry {
    #[serde(rename = "I")]
    create: MultiIndex,
    #[serde(rename = "J")]
    annihilate: Vec<MultiIndex>,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

#[derive(Serialize, Deserialize)]
struct KernelBlock {
    l: u32,
    #[serde(rename = "M")]
    m: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reliable: Option<bool>,
    entries: Vec<KernelEntry>,
}

#[derive(Serialize, Deserialize)]
struct KernelFamilyRepr {
    arity: usize,
    blocks: Vec<KernelBlock>,
}

fn kernel_repr(k: &KernelFamily, reliability: Option<&TruncationCaps>) -> KernelFamilyRepr {
    KernelFamilyRepr {
        arity: k.arity(),
        blocks: k
            .blocks()
            .into_iter()
            .map(|(b, entries)| KernelBlock {
                reliable: reliability.map(|caps| crate::expansion::block_is_reliable(&b, caps)),
                l: b.l,
                m: b.m,
                entries: entries
                    .into_iter()
                    .map(|(key, c)| KernelEntry {
                        create: key.create.clone(),
                        annihilate: key.annihilate.clone(),
                        re: format_rational(&c.re),
                        im: format_rational(&c.im),
                    })
                    .collect(),
            })
            .collect(),
    }
}

impl Serialize for KernelFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        kernel_repr(self, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = KernelFamilyRepr::deserialize(d)?;
        let mut k = KernelFamily::new(r.arity);
        for block in r.blocks {
            if block.m.len() != r.arity {
                return Err(D::Error::custom(format!(
                    "block M = {:?} does not have arity {}",
                    block.m, r.arity
                )));
            }
            for e in block.entries {
                let key = KernelKey::new(e.create, e.annihilate);
                if key.l() != block.l || key.m_tuple() != block.m {
                    return Err(D::Error::custom(format!(
                        "entry {key:?} does not belong to block (l={}, M={:?})",
                        block.l, block.m
                    )));
                }
                let c = Scalar::try_from(&ScalarRepr { re: e.re, im: e.im }).map_err(D::Error::custom)?;
                k.insert(key, c).map_err(D::Error::custom)?;
            }
        }
        Ok(k)
    }
}

/// Kernel family JSON with a `"reliable"` flag on every block.
pub fn expansion_to_value(e: &Expansion) -> serde_json::Value {
    serde_json::to_value(kernel_repr(&e.family, Some(&e.caps))).expect("kernel repr serializes")
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    args: Vec<MultiIndex>,
    value: FockVector,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    arity: usize,
    caps: TruncationCaps,
    rows: Vec<TableRow>,
}

impl Serialize for BasisActionTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            arity: self.arity(),
            caps: self.caps(),
            rows: self
                .rows()
                .map(|(args, v)| TableRow { args: args.clone(), value: v.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisActionTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TableRepr::deserialize(d)?;
        let mut t = BasisActionTable::zero(r.arity, r.caps);
        for row in r.rows {
            t.set_row(row.args, row.value).map_err(D::Error::custom)?;
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    xi: Vec<MultiIndex>,
    eta: MultiIndex,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    caps: Option<TruncationCaps>,
    terms: Vec<PolyTerm>,
}

impl Serialize for SymbolPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity(),
            caps: Some(self.caps()),
            terms: self
                .terms()
                .map(|(m, c)| PolyTerm {
                    xi: m.xi.clone(),
                    eta: m.eta.clone(),
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        // Without explicit caps, take the smallest window holding every term.
        let caps = r.caps.unwrap_or_else(|| {
            let labels = r.terms.iter().flat_map(|t| t.xi.iter().chain(std::iter::once(&t.eta)));
            let (mut mode, mut degree) = (0, 0);
            for a in labels {
                mode = mode.max(a.max_mode().map_or(0, |m| m + 1));
                degree = degree.max(a.degree());
            }
            TruncationCaps::new(mode, degree)
        });
        let mut p = SymbolPolynomial::zero(r.arity, caps);
        for t in r.terms {
            if t.xi.len() != r.arity {
                return Err(D::Error::custom(format!("term has {} slots, arity is {}", t.xi.len(), r.arity)));
            }
            let m = Monomial::new(t.xi, t.eta);
            if !m.fits(&caps) {
                return Err(D::Error::custom(format!("term {m:?} outside {caps:?}")));
            }
            let c = Scalar::try_from(&ScalarRepr { re: t.re, im: t.im }).map_err(D::Error::custom)?;
            p.add_term(m, &c);
        }
        Ok(p)
    }
}

/// Parses any wire type, mapping failures to [`Error::Parse`].
pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Canonical single-line JSON.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("wire types always serialize")
}
