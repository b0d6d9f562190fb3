//! Seeded property checks over every module, grouped into suites.
//!
//! Each invariant runs `cases` independent cases; case `c` draws its inputs
//! from `Sampler::new(case_seed(seed, c))`, so a failure is reproduced from
//! its recorded seed alone. Reports are deterministic; elapsed time is kept
//! out of the serialized form.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansion::{extract_kernels, reconstruct};
use crate::fock::{
    coherent, norm_squared, pairing, s_transform, wick_power, wick_product, wick_product_truncated, FockVector,
    TestVector, TruncationCaps,
};
use crate::hochschild::{
    coboundary_kernel_with, coboundary_output_caps, coboundary_table_with, is_polydifferential_of_degree, Cochain,
    SignRule,
};
use crate::multiindex::MultiIndex;
use crate::operators::{
    apply_annihilation_with, apply_creation_with, apply_kernel, table_from_kernel, KernelFamily, LadderConstants,
};
use crate::par;
use crate::sample::Sampler;
use crate::scalar::Scalar;
use crate::symbol::{reduced_symbol, symbol_numeric, symbol_poly, SymbolPolynomial};

pub const SUITES: [&str; 6] = ["algebra", "pairing", "ccr", "symbol", "expansion", "hochschild"];

/// Deliberate defects for checking that the suites notice them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `c'(r) = 1` instead of `r`.
    UnitAnnihilation,
    /// Every merged-slot term of δ with sign `+1`.
    UnsignedCoboundary,
}

impl Mutation {
    pub fn parse(s: &str) -> Result<Mutation> {
        match s {
            "unit-annihilation" => Ok(Mutation::UnitAnnihilation),
            "unsigned-coboundary" => Ok(Mutation::UnsignedCoboundary),
            _ => Err(Error::Invalid(format!(
                "unknown mutation {s:?} (expected unit-annihilation or unsigned-coboundary)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub cases: usize,
    pub mutation: Option<Mutation>,
}

impl CheckConfig {
    pub fn new(seed: u64, cases: usize) -> Self {
        CheckConfig { seed, cases, mutation: None }
    }

    fn ladder(&self) -> LadderConstants {
        match self.mutation {
            Some(Mutation::UnitAnnihilation) => LadderConstants { creation: |_| 1, annihilation: |_| 1 },
            _ => LadderConstants::STANDARD,
        }
    }

    fn sign_rule(&self) -> SignRule {
        match self.mutation {
            Some(Mutation::UnsignedCoboundary) => SignRule::Dropped,
            _ => SignRule::Alternating,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub seed: u64,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
}

/// Failures kept per invariant; the total count is always reported.
const KEPT_FAILURES: usize = 3;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InvariantResult {
    pub suite: String,
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub invariants: Vec<InvariantResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn failures(&self) -> impl Iterator<Item = (&InvariantResult, &Failure)> {
        self.invariants.iter().flat_map(|inv| inv.failures.iter().map(move |f| (inv, f)))
    }

    pub fn failed_invariants(&self) -> Vec<&str> {
        self.invariants.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect()
    }
}

/// A failed case: inputs, expected and actual values.
pub struct Mismatch {
    inputs: Value,
    expected: Value,
    got: Value,
}

type Outcome = std::result::Result<(), Mismatch>;

fn v<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("check values serialize")
}

fn expect_eq<T: PartialEq + Serialize>(inputs: Value, expected: &T, got: &T) -> Outcome {
    if expected == got {
        Ok(())
    } else {
        Err(Mismatch { inputs, expected: v(expected), got: v(got) })
    }
}

fn expect_true(inputs: Value, what: &str, holds: bool, got: Value) -> Outcome {
    if holds {
        Ok(())
    } else {
        Err(Mismatch { inputs, expected: Value::String(what.to_string()), got })
    }
}

pub fn case_seed(seed: u64, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(case as u64)
}

struct Runner<'a> {
    cfg: &'a CheckConfig,
    suite: &'static str,
    results: Vec<InvariantResult>,
}

impl Runner<'_> {
    fn invariant<F>(&mut self, name: &str, f: F)
    where
        F: Fn(&mut Sampler) -> Outcome + Sync + Send,
    {
        let seed = self.cfg.seed;
        let outcomes = par::map_range(self.cfg.cases, |c| {
            let s = case_seed(seed, c);
            f(&mut Sampler::new(s)).err().map(|m| Failure { seed: s, inputs: m.inputs, expected: m.expected, got: m.got })
        });
        let failures: Vec<Failure> = outcomes.into_iter().flatten().collect();
        self.results.push(InvariantResult {
            suite: self.suite.to_string(),
            name: name.to_string(),
            cases: self.cfg.cases,
            passed: failures.is_empty(),
            failure_count: failures.len(),
            failures: failures.into_iter().take(KEPT_FAILURES).collect(),
        });
    }
}

/// Runs one suite (or `"all"`).
pub fn run_suite(name: &str, cfg: &CheckConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let selected: Vec<&'static str> = match name {
        "all" => SUITES.to_vec(),
        _ => match SUITES.iter().find(|&&s| s == name) {
            Some(&s) => vec![s],
            None => {
                return Err(Error::Invalid(format!(
                    "unknown suite {name:?} (expected one of {}, all)",
                    SUITES.join(", ")
                )))
            }
        },
    };
    let mut invariants = Vec::new();
    for suite in selected {
        let mut r = Runner { cfg, suite, results: Vec::new() };
        match suite {
            "algebra" => algebra(&mut r),
            "pairing" => pairing_suite(&mut r),
            "ccr" => ccr(&mut r),
            "symbol" => symbol(&mut r),
            "expansion" => expansion(&mut r),
            "hochschild" => hochschild(&mut r),
            _ => unreachable!(),
        }
        invariants.extend(r.results);
    }
    Ok(CheckReport {
        suite: name.to_string(),
        seed: cfg.seed,
        cases: cfg.cases,
        passed: invariants.iter().all(|i| i.passed),
        invariants,
        elapsed: start.elapsed(),
    })
}

fn algebra(r: &mut Runner) {
    r.invariant("concat_commutative_associative_unital", |s| {
        let (a, b, c) = (s.multi_index(4, 4), s.multi_index(4, 4), s.multi_index(4, 4));
        let inputs = json!({"A": v(&a), "B": v(&b), "C": v(&c)});
        expect_eq(inputs.clone(), &a.concat(&b), &b.concat(&a))?;
        expect_eq(inputs.clone(), &a.concat(&b).concat(&c), &a.concat(&b.concat(&c)))?;
        expect_eq(inputs, &a, &a.concat(&MultiIndex::vacuum()))
    });
    r.invariant("degree_additive", |s| {
        let (a, b) = (s.multi_index(4, 5), s.multi_index(4, 5));
        expect_eq(json!({"A": v(&a), "B": v(&b)}), &(a.degree() + b.degree()), &a.concat(&b).degree())
    });
    r.invariant("hida_weight_multiplicative", |s| {
        let (a, b) = (s.multi_index(4, 5), s.multi_index(4, 5));
        let want = (a.hida_weight() * b.hida_weight()).to_string();
        expect_eq(json!({"A": v(&a), "B": v(&b)}), &want, &a.concat(&b).hida_weight().to_string())
    });
    r.invariant("factorial_inequality", |s| {
        let (a, b) = (s.multi_index(4, 5), s.multi_index(4, 5));
        let lhs = a.concat(&b).factorial_degree();
        let rhs = (BigUint::one() << (a.degree() + b.degree())) * a.factorial_degree() * b.factorial_degree();
        expect_true(json!({"A": v(&a), "B": v(&b)}), "|A∪B|! ≤ 2^(|A|+|B|)|A|!|B|!", lhs <= rhs, json!([lhs.to_string(), rhs.to_string()]))
    });
    r.invariant("decomposition_count", |s| {
        let a = s.multi_index(4, 6);
        let n = a.decompositions().len();
        let product: u64 = a.pairs().iter().map(|&(_, m)| u64::from(m) + 1).product();
        let inputs = json!({"A": v(&a)});
        expect_eq(inputs.clone(), &(product as usize), &n)?;
        expect_true(inputs, "count ≤ 2^|A|", (n as u64) <= 1u64 << a.degree(), json!(n))
    });
    r.invariant("wick_commutative_associative", |s| {
        let caps = TruncationCaps::new(3, 2);
        let (x, y, z) = (s.fock_vector(&caps, 3), s.fock_vector(&caps, 3), s.fock_vector(&caps, 3));
        let inputs = json!({"x": v(&x), "y": v(&y), "z": v(&z)});
        expect_eq(inputs.clone(), &wick_product(&x, &y), &wick_product(&y, &x))?;
        expect_eq(inputs, &wick_product(&wick_product(&x, &y), &z), &wick_product(&x, &wick_product(&y, &z)))
    });
    r.invariant("wick_power_is_iterated_product", |s| {
        let xi = s.test_vector(3);
        let n = s.up_to(4);
        let mut want = FockVector::vacuum();
        for _ in 0..n {
            want = wick_product(&want, &xi.embed());
        }
        expect_eq(json!({"xi": v(&xi), "n": n}), &want, &wick_power(&xi, n))
    });
}

fn pairing_suite(r: &mut Runner) {
    r.invariant("exponential_pairing", |s| {
        let (xi, eta) = (s.test_vector(4), s.test_vector(4));
        let got = pairing(&coherent(&xi, 6), &coherent(&eta, 6));
        expect_eq(json!({"xi": v(&xi), "eta": v(&eta), "N": 6}), &truncated_exp(&xi.dot(&eta), 6), &got)
    });
    r.invariant("wick_product_of_coherent_vectors", |s| {
        let (xi, eta) = (s.test_vector(4), s.test_vector(4));
        let got = wick_product_truncated(&coherent(&xi, 6), &coherent(&eta, 6), 6);
        expect_eq(json!({"xi": v(&xi), "eta": v(&eta), "N": 6}), &coherent(&xi.add(&eta), 6), &got)
    });
    r.invariant("s_transform_multiplicative", |s| {
        let caps = TruncationCaps::new(3, 2);
        let (x, y, eta) = (s.fock_vector(&caps, 3), s.fock_vector(&caps, 3), s.test_vector(3));
        let want = s_transform(&x, &eta) * s_transform(&y, &eta);
        expect_eq(json!({"x": v(&x), "y": v(&y), "eta": v(&eta)}), &want, &s_transform(&wick_product(&x, &y), &eta))
    });
    r.invariant("wick_norm_bound", |s| {
        let caps = TruncationCaps::new(4, 3);
        let (x, y) = (s.fock_vector(&caps, 4), s.fock_vector(&caps, 4));
        let k = s.up_to(2);
        let c = s.pick(&[(1, 2), (1, 1), (2, 1)]);
        let c = BigRational::new(c.0.into(), c.1.into());
        let two_c = &c * BigRational::from_integer(2.into());
        let lhs = norm_squared(&wick_product(&x, &y), k, &c);
        let rhs = norm_squared(&x, k, &two_c) * norm_squared(&y, k, &two_c);
        let inputs = json!({"x": v(&x), "y": v(&y), "k": k, "C": c.to_string()});
        expect_true(inputs, "‖:xy:‖² ≤ ‖x‖²‖y‖² at 2C", lhs <= rhs, json!([lhs.to_string(), rhs.to_string()]))
    });
}

/// `Σ_{n≤N} zⁿ/n!`.
pub fn truncated_exp(z: &Scalar, n: u32) -> Scalar {
    let mut sum = Scalar::zero();
    let mut term = Scalar::one();
    for k in 0..=n {
        if k > 0 {
            term = (&term * z).scale_rational(&BigRational::new(1.into(), k.into()));
        }
        sum += &term;
    }
    sum
}

fn ccr(r: &mut Runner) {
    let lc = r.cfg.ladder();
    r.invariant("canonical_commutation", move |s| {
        let a = s.multi_index(4, 5);
        let (i, j) = (s.below(4), s.below(4));
        let e = FockVector::basis(a.clone());
        let lhs = apply_annihilation_with(&lc, i, &apply_creation_with(&lc, j, &e))
            .sub(&apply_creation_with(&lc, j, &apply_annihilation_with(&lc, i, &e)));
        let want = if i == j { e } else { FockVector::zero() };
        expect_eq(json!({"A": v(&a), "i": i, "j": j}), &want, &lhs)
    });
    r.invariant("ladder_adjointness", move |s| {
        let caps = TruncationCaps::new(4, 4);
        let (x, y) = (s.fock_vector(&caps, 4), s.fock_vector(&caps, 4));
        let i = s.below(4);
        let lhs = pairing(&apply_creation_with(&lc, i, &x), &y);
        let rhs = pairing(&x, &apply_annihilation_with(&lc, i, &y));
        expect_eq(json!({"x": v(&x), "y": v(&y), "i": i}), &lhs, &rhs)
    });
    r.invariant("coherent_eigenvector", move |s| {
        let xi = s.test_vector(3);
        let i = s.below(3);
        let got = apply_annihilation_with(&lc, i, &coherent(&xi, 5)).truncate_degree(4);
        let want = coherent(&xi, 4).scale(&xi.coeff(i));
        expect_eq(json!({"xi": v(&xi), "i": i}), &want, &got)
    });
    r.invariant("annihilation_is_wick_derivation", move |s| {
        let caps = TruncationCaps::new(3, 3);
        let (x, y) = (s.fock_vector(&caps, 3), s.fock_vector(&caps, 3));
        let i = s.below(3);
        let lhs = apply_annihilation_with(&lc, i, &wick_product(&x, &y));
        let rhs = wick_product(&apply_annihilation_with(&lc, i, &x), &y)
            .add(&wick_product(&x, &apply_annihilation_with(&lc, i, &y)));
        expect_eq(json!({"x": v(&x), "y": v(&y), "i": i}), &rhs, &lhs)
    });
    r.invariant("kernel_action_multilinear", |s| {
        let caps = TruncationCaps::new(3, 3);
        let k = s.kernel_family(2, 3, 3, 3);
        let (x, x2, y) = (s.fock_vector(&caps, 3), s.fock_vector(&caps, 3), s.fock_vector(&caps, 3));
        let c = s.scalar();
        let apply = |a: &FockVector, b: &FockVector| apply_kernel(&k, &[a.clone(), b.clone()]).expect("arity 2");
        let inputs = json!({"K": v(&k), "x": v(&x), "x2": v(&x2), "y": v(&y), "c": v(&c)});
        expect_eq(inputs.clone(), &apply(&x, &y).add(&apply(&x2, &y)), &apply(&x.add(&x2), &y))?;
        expect_eq(inputs, &apply(&x, &y).scale(&c), &apply(&x, &y.scale(&c)))
    });
}

fn symbol(r: &mut Runner) {
    r.invariant("polynomial_matches_numeric_symbol", |s| {
        let arity = 1 + s.below(2) as usize;
        let caps = TruncationCaps::new(2, 2);
        let t = s.table(arity, caps, 0.3, 2);
        let xis: Vec<TestVector> = (0..arity).map(|_| s.test_vector(2)).collect();
        let eta = s.test_vector(2);
        let numeric = symbol_numeric(&t, &xis, &eta).expect("arguments within caps");
        let poly = symbol_poly(&t).evaluate(&xis, &eta).expect("arity matches");
        expect_eq(json!({"T": v(&t), "xis": v(&xis), "eta": v(&eta)}), &numeric, &poly)
    });
    r.invariant("reduced_symbol_is_kernel_monomials", |s| {
        let arity = 1 + s.below(2) as usize;
        let caps = TruncationCaps::new(3, 2);
        let k = s.kernel_family(arity, 3, 2, 3);
        let got = reduced_symbol(&symbol_poly(&table_from_kernel(&k, caps)));
        expect_eq(json!({"K": v(&k)}), &SymbolPolynomial::from_kernel(&k, caps), &got)
    });
    r.invariant("wick_symbol_is_exponential", |s| {
        let caps = TruncationCaps::new(1 + s.below(2), 1 + s.below(3));
        let got = symbol_poly(&table_from_kernel(&KernelFamily::wick_unit(2), caps));
        expect_eq(json!({"caps": v(&caps)}), &SymbolPolynomial::exponential(2, caps, false), &got)
    });
    r.invariant("polynomial_ring_axioms", |s| {
        let caps = TruncationCaps::new(2, 2);
        let poly = |s: &mut Sampler| {
            let k = s.kernel_family(1, 2, 3, 4);
            SymbolPolynomial::from_kernel(&k, caps)
        };
        let (p, q, w) = (poly(s), poly(s), poly(s));
        let inputs = json!({"p": v(&p), "q": v(&q), "r": v(&w)});
        let mul = |a: &SymbolPolynomial, b: &SymbolPolynomial| a.mul(b).expect("same arity");
        let add = |a: &SymbolPolynomial, b: &SymbolPolynomial| a.add(b).expect("same arity");
        expect_eq(inputs.clone(), &mul(&p, &q), &mul(&q, &p))?;
        expect_eq(inputs.clone(), &mul(&mul(&p, &q), &w), &mul(&p, &mul(&q, &w)))?;
        expect_eq(inputs.clone(), &add(&mul(&p, &w), &mul(&q, &w)), &mul(&add(&p, &q), &w))?;
        expect_eq(inputs, &p, &mul(&p, &SymbolPolynomial::one(1, caps)))
    });
}

fn expansion(r: &mut Runner) {
    r.invariant("kernel_round_trip", |s| {
        let arity = 1 + s.below(2) as usize;
        let caps = TruncationCaps::new(3, 3);
        let k = s.kernel_family(arity, 3, 3, 4);
        expect_eq(json!({"K": v(&k), "caps": v(&caps)}), &k, &extract_kernels(&reconstruct(&k, caps)))
    });
    r.invariant("table_round_trip", |s| {
        let arity = 1 + s.below(2) as usize;
        let caps = TruncationCaps::new(2, 2);
        let t = s.table(arity, caps, 0.3, 2);
        expect_eq(json!({"T": v(&t)}), &t, &reconstruct(&extract_kernels(&t), caps))
    });
    r.invariant("extraction_linear", |s| {
        let caps = TruncationCaps::new(2, 2);
        let (t1, t2) = (s.table(1, caps, 0.4, 2), s.table(1, caps, 0.4, 2));
        let want = extract_kernels(&t1).add(&extract_kernels(&t2)).expect("same arity");
        expect_eq(json!({"T1": v(&t1), "T2": v(&t2)}), &want, &extract_kernels(&t1.add(&t2).expect("same caps")))
    });
    r.invariant("extracted_blocks_within_caps", |s| {
        let caps = TruncationCaps::new(2, 2);
        let t = s.table(2, caps, 0.3, 2);
        let k = extract_kernels(&t);
        let ok = k.fits(&caps)
            && k.blocks().iter().all(|(b, es)| es.iter().all(|(key, _)| key.l() == b.l && key.m_tuple() == b.m));
        expect_true(json!({"T": v(&t)}), "every entry within caps and in its block", ok, v(&k))
    });
}

fn hochschild(r: &mut Runner) {
    let rule = r.cfg.sign_rule();
    r.invariant("coboundary_squares_to_zero", move |s| {
        let arity = 1 + s.below(2) as usize;
        let k = s.kernel_family(arity, 2, 3, 3);
        let caps = TruncationCaps::new(2, 4);
        let inputs = json!({"K": v(&k)});
        let dd = coboundary_kernel_with(&coboundary_kernel_with(&k, rule), rule);
        expect_eq(inputs.clone(), &KernelFamily::new(arity + 2), &dd)?;
        let t = table_from_kernel(&k, caps);
        let once = coboundary_table_with(&t, coboundary_output_caps(arity, caps), rule).expect("caps checked");
        let twice = coboundary_table_with(&once, coboundary_output_caps(arity + 1, once.caps()), rule).expect("caps checked");
        expect_true(inputs, "table δδX = 0", twice.is_zero(), v(&twice))
    });
    r.invariant("table_and_symbol_coboundary_agree", move |s| {
        let arity = 1 + s.below(2) as usize;
        let k = s.kernel_family(arity, 2, 3, 3);
        let caps = TruncationCaps::new(2, 4);
        let out = coboundary_output_caps(arity, caps);
        let via_table = coboundary_table_with(&table_from_kernel(&k, caps), out, rule).expect("caps checked");
        let via_symbol = table_from_kernel(&coboundary_kernel_with(&k, rule), out);
        expect_eq(json!({"K": v(&k)}), &via_symbol, &via_table)
    });
    r.invariant("coboundary_preserves_degree", move |s| {
        let arity = 1 + s.below(2) as usize;
        let (l, m) = (s.up_to(2), s.up_to(2));
        let k = s.homogeneous_family(arity, l, m, 2, 3);
        let d = Cochain::Kernel(coboundary_kernel_with(&k, rule));
        let holds = is_polydifferential_of_degree(&d, l, m);
        expect_true(json!({"K": v(&k), "l": l, "m": m}), "δX homogeneous of degree (l, m)", holds, v(&d.to_kernel()))
    });
    r.invariant("extraction_commutes_with_coboundary", move |s| {
        let caps = TruncationCaps::new(2, 2);
        let t = s.table(1, caps, 0.4, 2);
        let out = coboundary_output_caps(1, caps);
        let lhs = extract_kernels(&coboundary_table_with(&t, out, rule).expect("caps checked"));
        let rhs = coboundary_kernel_with(&extract_kernels(&t), rule).filter(|key| {
            key.annihilate.iter().all(|j| out.contains(j)) && out.contains(&key.create)
        });
        expect_eq(json!({"T": v(&t)}), &rhs, &lhs)
    });
    r.invariant("annihilators_are_cocycles", move |s| {
        let i = s.below(3);
        let c = s.nonzero_scalar();
        let a = KernelFamily::single(MultiIndex::vacuum(), vec![MultiIndex::single(i)], c.clone());
        expect_eq(json!({"i": i, "c": v(&c)}), &KernelFamily::new(2), &coboundary_kernel_with(&a, rule))
    });
}
