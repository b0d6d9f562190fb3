//! Acceptance criteria, one PASS/FAIL line each. Every comparison is exact.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use fockalg::check::{case_seed, run_suite, truncated_exp, CheckConfig, Mutation};
use fockalg::fock::{coherent, norm_squared, pairing, wick_product, wick_product_truncated, FockVector, TruncationCaps};
use fockalg::hochschild::{
    coboundary_kernel_with, coboundary_matrix_via, coboundary_output_caps, coboundary_table_with, cohomology_dims_via,
    polydiff_degree, required_max_degree, stratum_basis, Cochain, Route, SignRule,
};
use fockalg::multiindex::MultiIndex;
use fockalg::operators::{
    apply_annihilation_with, apply_creation_with, table_from_kernel, KernelFamily, LadderConstants,
};
use fockalg::sample::Sampler;
use fockalg::symbol::{reduced_symbol, symbol_poly, SymbolPolynomial};
use fockalg::{extract_kernels, reconstruct, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

const SEED: u64 = 20240;

fn sampler(case: usize) -> Sampler {
    Sampler::new(case_seed(SEED, case))
}

fn exponential_pairing() -> Outcome {
    for case in 0..100 {
        let mut s = sampler(case);
        let (xi, eta) = (s.test_vector(4), s.test_vector(4));
        let got = pairing(&coherent(&xi, 6), &coherent(&eta, 6));
        if got != truncated_exp(&xi.dot(&eta), 6) {
            return Err(format!("case {case}: pairing {got}"));
        }
    }
    Ok("100 cases".into())
}

fn coherent_wick_product() -> Outcome {
    for case in 0..100 {
        let mut s = sampler(case);
        let (xi, eta) = (s.test_vector(4), s.test_vector(4));
        let lhs = wick_product_truncated(&coherent(&xi, 6), &coherent(&eta, 6), 6);
        if lhs != coherent(&xi.add(&eta), 6) {
            return Err(format!("case {case}"));
        }
    }
    Ok("100 pairs, degree ≤ 6".into())
}

fn wick_norm_bound() -> Outcome {
    let caps = TruncationCaps::new(4, 3);
    let cs = [(1, 2), (1, 1), (2, 1)].map(|(p, q)| BigRational::new(p.into(), q.into()));
    let two = BigRational::from_integer(2.into());
    for case in 0..100 {
        let mut s = sampler(case);
        let (x, y) = (s.fock_vector(&caps, 5), s.fock_vector(&caps, 5));
        let xy = wick_product(&x, &y);
        for k in 0..=2 {
            for c in &cs {
                let c2 = c * &two;
                if norm_squared(&xy, k, c) > norm_squared(&x, k, &c2) * norm_squared(&y, k, &c2) {
                    return Err(format!("case {case}, k={k}, C={c}"));
                }
            }
        }
    }
    let labels = MultiIndex::all_up_to(4, 5);
    for a in &labels {
        let n = a.decompositions().len() as u64;
        let product: u64 = a.pairs().iter().map(|&(_, r)| u64::from(r) + 1).product();
        if n != product || n > 1 << a.degree() {
            return Err(format!("decomposition count of {a}"));
        }
        for b in &labels {
            let ab = a.concat(b);
            if ab.hida_weight() != a.hida_weight() * b.hida_weight() {
                return Err(format!("hida weight of {a} ∪ {b}"));
            }
            let bound = (BigUint::one() << (a.degree() + b.degree())) * a.factorial_degree() * b.factorial_degree();
            if ab.factorial_degree() > bound {
                return Err(format!("factorial inequality for {a}, {b}"));
            }
        }
    }
    Ok(format!("300 norm comparisons, lemmas on {} labels", labels.len()))
}

fn ccr_and_adjointness(lc: &LadderConstants) -> Outcome {
    let labels = MultiIndex::all_up_to(4, 5);
    for a in &labels {
        let e = FockVector::basis(a.clone());
        for i in 0..4 {
            for j in 0..4 {
                let comm = apply_annihilation_with(lc, i, &apply_creation_with(lc, j, &e))
                    .sub(&apply_creation_with(lc, j, &apply_annihilation_with(lc, i, &e)));
                let want = if i == j { e.clone() } else { FockVector::zero() };
                if comm != want {
                    return Err(format!("[a_{i}, a*_{j}] on e_{a}"));
                }
            }
        }
    }
    let vectors: Vec<FockVector> = labels.iter().cloned().map(FockVector::basis).collect();
    for i in 0..4 {
        let created: Vec<FockVector> = vectors.iter().map(|x| apply_creation_with(lc, i, x)).collect();
        let lowered: Vec<FockVector> = vectors.iter().map(|y| apply_annihilation_with(lc, i, y)).collect();
        for (x, cx) in vectors.iter().zip(&created) {
            for (y, ly) in vectors.iter().zip(&lowered) {
                if pairing(cx, y) != pairing(x, ly) {
                    return Err(format!("adjointness for mode {i}"));
                }
            }
        }
    }
    Ok(format!("{} basis vectors", labels.len()))
}

fn single_entry_symbols() -> Outcome {
    let caps = TruncationCaps::new(3, 2);
    let mut count = 0;
    for arity in 1..=2 {
        for l in 0..=2 {
            for m in 0..=2 {
                for key in stratum_basis(arity, l, m, 3) {
                    let k = KernelFamily::single(key.create.clone(), key.annihilate.clone(), Scalar::one());
                    let got = reduced_symbol(&symbol_poly(&table_from_kernel(&k, caps)));
                    if got != SymbolPolynomial::from_kernel(&k, caps) {
                        return Err(format!("kernel {key:?}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} kernels"))
}

fn expansion_round_trip() -> Outcome {
    let caps = TruncationCaps::new(3, 3);
    for case in 0..50 {
        let mut s = sampler(case);
        let arity = 1 + (case % 2);
        let k = s.kernel_family(arity, 3, 3, 5);
        if extract_kernels(&reconstruct(&k, caps)) != k {
            return Err(format!("case {case}"));
        }
    }
    Ok("50 families".into())
}

fn coboundary_squares_to_zero(rule: SignRule) -> Outcome {
    let caps = TruncationCaps::new(2, 4);
    for case in 0..50 {
        let arity = 1 + case / 25;
        let mut s = sampler(case);
        let k = s.kernel_family(arity, 2, 3, 4);
        let dk = coboundary_kernel_with(&k, rule);
        if !coboundary_kernel_with(&dk, rule).is_empty() {
            return Err(format!("symbol-level δδ ≠ 0, arity {arity}, case {case}"));
        }
        let out = coboundary_output_caps(arity, caps);
        let dt = coboundary_table_with(&table_from_kernel(&k, caps), out, rule).map_err(|e| e.to_string())?;
        if dt != table_from_kernel(&dk, out) {
            return Err(format!("table and symbol δ differ, arity {arity}, case {case}"));
        }
        let ddt = coboundary_table_with(&dt, coboundary_output_caps(arity + 1, out), rule).map_err(|e| e.to_string())?;
        if !ddt.is_zero() {
            return Err(format!("table-level δδ ≠ 0, arity {arity}, case {case}"));
        }
    }
    Ok("25 arity-1 and 25 arity-2 cochains".into())
}

fn coboundary_preserves_degree() -> Outcome {
    let caps = TruncationCaps::new(2, 4);
    let mut count = 0;
    for arity in 1..=2 {
        for l in 0..=2 {
            for m in 0..=2 {
                for key in stratum_basis(arity, l, m, 2) {
                    let k = KernelFamily::single(key.create.clone(), key.annihilate.clone(), Scalar::one());
                    let by_symbol = Cochain::Kernel(coboundary_kernel_with(&k, SignRule::Alternating));
                    let out = coboundary_output_caps(arity, caps);
                    let table = coboundary_table_with(&table_from_kernel(&k, caps), out, SignRule::Alternating)
                        .map_err(|e| e.to_string())?;
                    let by_table = Cochain::Table(table);
                    for d in [&by_symbol, &by_table] {
                        // δX = 0 is homogeneous of every degree
                        match polydiff_degree(d) {
                            Some(deg) if deg == (l, m) => {}
                            None if d.to_kernel().is_empty() => {}
                            other => return Err(format!("δ of {key:?} has degree {other:?}")),
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} generators"))
}

fn truncated_cohomology() -> Outcome {
    let mut dims = Vec::new();
    for (l, m) in [(0, 0), (1, 1), (0, 1)] {
        for r in 0..=2 {
            let caps = TruncationCaps::new(2, required_max_degree(r, l, m));
            let by_kernel = cohomology_dims_via(Route::Kernel, r, l, m, caps).map_err(|e| e.to_string())?;
            let by_table = cohomology_dims_via(Route::Table, r, l, m, caps).map_err(|e| e.to_string())?;
            let key = |c: &fockalg::CohomologyReport| (c.dim_ker, c.dim_im_prev, c.dim_h);
            if key(&by_kernel) != key(&by_table) {
                return Err(format!("(l={l}, m={m}, r={r}): kernel {:?} vs table {:?}", key(&by_kernel), key(&by_table)));
            }
            let mk = coboundary_matrix_via(Route::Kernel, r, l, m, caps, SignRule::Alternating).map_err(|e| e.to_string())?;
            let mt = coboundary_matrix_via(Route::Table, r, l, m, caps, SignRule::Alternating).map_err(|e| e.to_string())?;
            if mk != mt {
                return Err(format!("(l={l}, m={m}, r={r}): matrices differ"));
            }
            dims.push(format!("H^{r}({l},{m})={}", by_kernel.dim_h));
        }
    }
    let caps = TruncationCaps::new(2, required_max_degree(1, 0, 1));
    let h1 = cohomology_dims_via(Route::Table, 1, 0, 1, caps).map_err(|e| e.to_string())?;
    if h1.dim_h < 2 {
        return Err(format!("dim H¹(0,1) = {}", h1.dim_h));
    }
    for i in 0..2 {
        let a = KernelFamily::single(MultiIndex::vacuum(), vec![MultiIndex::single(i)], Scalar::one());
        if !coboundary_kernel_with(&a, SignRule::Alternating).is_empty() {
            return Err(format!("a_{i} is not a cocycle"));
        }
    }
    if !coboundary_matrix_via(Route::Table, 0, 0, 1, caps, SignRule::Alternating)
        .map_err(|e| e.to_string())?
        .is_zero()
    {
        return Err("δ⁰ ≠ 0".into());
    }
    Ok(dims.join(" "))
}

fn mutation_sensitivity() -> Outcome {
    let unit = LadderConstants { creation: |_| 1, annihilation: |_| 1 };
    if ccr_and_adjointness(&unit).is_ok() {
        return Err("c'(r)=1 passes the CCR criterion".into());
    }
    if coboundary_squares_to_zero(SignRule::Dropped).is_ok() {
        return Err("unsigned δ passes the δδ criterion".into());
    }
    let mutated = |m| CheckConfig { seed: 1, cases: 50, mutation: Some(m) };
    let ccr = run_suite("ccr", &mutated(Mutation::UnitAnnihilation)).map_err(|e| e.to_string())?;
    if ccr.passed {
        return Err("ccr suite passes with c'(r)=1".into());
    }
    let hoch = run_suite("hochschild", &mutated(Mutation::UnsignedCoboundary)).map_err(|e| e.to_string())?;
    if hoch.passed {
        return Err("hochschild suite passes with unsigned δ".into());
    }
    Ok(format!(
        "ccr suite fails [{}], hochschild suite fails [{}]",
        ccr.failed_invariants().join(", "),
        hoch.failed_invariants().join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("exponential pairing", 5, Box::new(exponential_pairing)),
        ("Wick product of coherent vectors", 5, Box::new(coherent_wick_product)),
        ("Wick norm bound with constant 2", 10, Box::new(wick_norm_bound)),
        ("CCR and adjointness", 5, Box::new(|| ccr_and_adjointness(&LadderConstants::STANDARD))),
        ("single-entry symbols", 30, Box::new(single_entry_symbols)),
        ("Fock expansion round trip", 60, Box::new(expansion_round_trip)),
        ("δδ = 0 and table/symbol δ agree", 60, Box::new(|| coboundary_squares_to_zero(SignRule::Alternating))),
        ("δ preserves polydifferential degree", 60, Box::new(coboundary_preserves_degree)),
        ("truncated cohomology, both complexes", 120, Box::new(truncated_cohomology)),
        ("mutation sensitivity", 120, Box::new(mutation_sensitivity)),
    ];
    let mut all_ok = true;
    for (n, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let slow = elapsed > Duration::from_secs(*limit);
        let ok = outcome.is_ok() && !slow;
        all_ok &= ok;
        let detail = match &outcome {
            Ok(d) | Err(d) => d,
        };
        println!(
            "{} criterion {:>2}: {name} ({:.2}s, limit {limit}s){} {detail}",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            elapsed.as_secs_f64(),
            if slow { " TOO SLOW" } else { "" },
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
