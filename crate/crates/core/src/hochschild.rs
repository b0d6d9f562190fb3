//! Hochschild coboundary on the Wick algebra, polydifferential degrees and
//! truncated cohomology dimensions.
//!
//! The coboundary has two realizations:
//!
//! * on tables, literally
//!   `δX(φ¹,…,φ^{r+1}) = :φ¹X(φ²,…): + Σ_i (−1)^i X(…,:φ^iφ^{i+1}:,…) + (−1)^{r+1}:X(φ¹,…,φ^r)φ^{r+1}:`;
//! * on kernel families, through the reduced symbol:
//!   `δΨ = Ψ(ξ²,…,ξ^{r+1}) + Σ_i (−1)^i Ψ(…,ξ^i+ξ^{i+1},…) + (−1)^{r+1} Ψ(ξ¹,…,ξ^r)`.
//!
//! A table with caps `(K, N)` determines `δX` on arguments of degree `≤ ⌊N/2⌋`
//! (the merged slot must stay inside the table), so the table route halves
//! the degree cap for `r ≥ 1`. Arity zero has no merged slot.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::extract_kernels;
use crate::fock::{FockVector, TruncationCaps};
use crate::linalg::{rank_nullspace, RationalMatrix};
use crate::multiindex::MultiIndex;
use crate::operators::{basis_tuples, table_from_kernel, BasisActionTable, KernelFamily, KernelKey};
use crate::par;
use crate::scalar::Scalar;

/// Signs of the merged-slot terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignRule {
    /// `(−1)^i`, the Hochschild coboundary.
    #[default]
    Alternating,
    /// Every merged-slot term with sign `+1`. Not a coboundary; exists so the
    /// check suites can demonstrate that they detect a dropped sign.
    Dropped,
}

impl SignRule {
    fn merged_sign(self, i: usize) -> Scalar {
        match self {
            SignRule::Alternating if i % 2 == 1 => Scalar::from_int(-1),
            _ => Scalar::one(),
        }
    }
}

fn parity_sign(n: usize) -> Scalar {
    if n % 2 == 1 {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// An `r`-cochain: an `r`-linear operator on the Wick algebra. Arity zero
/// denotes an algebra element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cochain {
    Kernel(KernelFamily),
    Table(BasisActionTable),
}

impl Cochain {
    pub fn arity(&self) -> usize {
        match self {
            Cochain::Kernel(k) => k.arity(),
            Cochain::Table(t) => t.arity(),
        }
    }

    pub fn to_kernel(&self) -> KernelFamily {
        match self {
            Cochain::Kernel(k) => k.clone(),
            Cochain::Table(t) => extract_kernels(t),
        }
    }

    pub fn to_table(&self, caps: TruncationCaps) -> Result<BasisActionTable> {
        match self {
            Cochain::Kernel(k) => Ok(table_from_kernel(k, caps)),
            Cochain::Table(t) if t.caps() == caps => Ok(t.clone()),
            Cochain::Table(t) => t.restrict(caps),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cochain::Kernel(k) => k.is_empty(),
            Cochain::Table(t) => t.is_zero(),
        }
    }
}

/// Largest output caps the table route can produce from a table with `caps`.
pub fn coboundary_output_caps(arity: usize, caps: TruncationCaps) -> TruncationCaps {
    if arity == 0 {
        caps
    } else {
        caps.with_max_degree(caps.max_degree / 2)
    }
}

/// `δ` in whichever representation `x` is held.
pub fn coboundary(x: &Cochain) -> Result<Cochain> {
    match x {
        Cochain::Kernel(k) => Ok(Cochain::Kernel(coboundary_kernel(k))),
        Cochain::Table(t) => {
            let out = coboundary_output_caps(t.arity(), t.caps());
            Ok(Cochain::Table(coboundary_table(t, out)?))
        }
    }
}

pub fn coboundary_table(t: &BasisActionTable, out: TruncationCaps) -> Result<BasisActionTable> {
    coboundary_table_with(t, out, SignRule::Alternating)
}

/// Table-level coboundary evaluated on every basis tuple within `out`.
///
/// Fails with a truncation error when `out` asks for values the input table
/// does not determine.
pub fn coboundary_table_with(t: &BasisActionTable, out: TruncationCaps, rule: SignRule) -> Result<BasisActionTable> {
    let r = t.arity();
    let caps = t.caps();
    let needed = if r == 0 { out.max_degree } else { 2 * out.max_degree };
    if out.max_mode > caps.max_mode || needed > caps.max_degree {
        return Err(Error::Truncation(format!(
            "coboundary of an arity-{r} table with {caps:?} cannot be evaluated on {out:?}"
        )));
    }
    let tuples = basis_tuples(r + 1, &out);
    let last_sign = parity_sign(r + 1);
    let images = par::map(&tuples, |args| {
        let mut v = FockVector::zero();
        if let Some(x) = t.row(&args[1..]) {
            v.add_assign(&x.wick_shift(&args[0]));
        }
        for i in 1..=r {
            let mut merged: Vec<MultiIndex> = Vec::with_capacity(r);
            merged.extend_from_slice(&args[..i - 1]);
            merged.push(args[i - 1].concat(&args[i]));
            merged.extend_from_slice(&args[i + 1..]);
            if let Some(x) = t.row(&merged) {
                v.add_scaled(x, &rule.merged_sign(i));
            }
        }
        if let Some(x) = t.row(&args[..r]) {
            v.add_scaled(&x.wick_shift(&args[r]), &last_sign);
        }
        v.truncate_degree(out.max_degree)
    });
    let rows = tuples
        .into_iter()
        .zip(images)
        .filter(|(_, v)| !v.is_zero())
        .collect();
    Ok(BasisActionTable::from_rows(r + 1, out, rows))
}

pub fn coboundary_kernel(k: &KernelFamily) -> KernelFamily {
    coboundary_kernel_with(k, SignRule::Alternating)
}

/// Symbol-level coboundary: substitutes slot arguments in the reduced symbol.
/// Merging slots `i, i+1` expands `(x^{(i)} + x^{(i+1)})^{J}` binomially.
pub fn coboundary_kernel_with(k: &KernelFamily, rule: SignRule) -> KernelFamily {
    let r = k.arity();
    let mut out = KernelFamily::new(r + 1);
    let last_sign = parity_sign(r + 1);
    for (key, c) in k.entries() {
        let js = &key.annihilate;

        let mut first = Vec::with_capacity(r + 1);
        first.push(MultiIndex::vacuum());
        first.extend_from_slice(js);
        out.add_entry(KernelKey::new(key.create.clone(), first), c);

        for i in 1..=r {
            let split = &js[i - 1];
            let sc = c * &rule.merged_sign(i);
            let jfact = split.pairing_weight();
            for (b, d) in split.decompositions() {
                let binom = &jfact / (b.pairing_weight() * d.pairing_weight());
                let mut slots = Vec::with_capacity(r + 1);
                slots.extend_from_slice(&js[..i - 1]);
                slots.push(b);
                slots.push(d);
                slots.extend_from_slice(&js[i..]);
                out.add_entry(KernelKey::new(key.create.clone(), slots), &sc.scale_int(&binom.into()));
            }
        }

        let mut last = js.clone();
        last.push(MultiIndex::vacuum());
        out.add_entry(KernelKey::new(key.create.clone(), last), &(c * &last_sign));
    }
    out
}

/// `(l, m)` if the cochain's kernel family is nonzero and lives in a single
/// stratum `|I| = l`, `Σ|J_j| = m`.
pub fn polydiff_degree(x: &Cochain) -> Option<(u32, u32)> {
    match x.to_kernel().strata().as_slice() {
        [single] => Some(*single),
        _ => None,
    }
}

/// Homogeneity of degree `(l, m)`. The zero cochain is homogeneous of every degree.
pub fn is_polydifferential_of_degree(x: &Cochain, l: u32, m: u32) -> bool {
    x.to_kernel().strata().iter().all(|&s| s == (l, m))
}

/// Compositions of `total` into `parts` nonnegative parts, lexicographic.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Basis of homogeneous `(l, m)` kernel generators `a*_I a_{J_1}⋯a_{J_r}` over
/// modes `< max_mode`, in lexicographic order on `(I, J_1, …, J_r)`.
pub fn stratum_basis(arity: usize, l: u32, m: u32, max_mode: u32) -> Vec<KernelKey> {
    let creates = MultiIndex::all_of_degree(max_mode, l);
    let mut out = Vec::new();
    for split in compositions(m, arity) {
        let mut tuples: Vec<Vec<MultiIndex>> = vec![Vec::new()];
        for &d in &split {
            let choices = MultiIndex::all_of_degree(max_mode, d);
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    choices.iter().map(move |j| {
                        let mut t2 = t.clone();
                        t2.push(j.clone());
                        t2
                    })
                })
                .collect();
        }
        for i in &creates {
            for js in &tuples {
                out.push(KernelKey::new(i.clone(), js.clone()));
            }
        }
    }
    out.sort();
    out
}

/// Smallest degree cap for which the table route reproduces the stratum
/// `(l, m)` complex up to arity `r + 1`.
pub fn required_max_degree(r: usize, l: u32, m: u32) -> u32 {
    (l + m + r as u32 + 1).max(2 * l.max(m))
}

pub fn check_cohomology_caps(r: usize, l: u32, m: u32, caps: &TruncationCaps) -> Result<()> {
    let need = required_max_degree(r, l, m);
    if caps.max_degree < need {
        return Err(Error::Truncation(format!(
            "stratum (l={l}, m={m}) at arity {r} needs max_degree >= {need}, got {}",
            caps.max_degree
        )));
    }
    Ok(())
}

/// Which realization of δ a matrix is assembled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Tabulate each generator, apply δ on the table, extract kernels.
    Table,
    /// Symbol-level δ on kernel families.
    Kernel,
}

fn coordinates(
    family: &KernelFamily,
    index: &HashMap<&KernelKey, usize>,
    rows: usize,
    l: u32,
    m: u32,
) -> Result<Vec<Scalar>> {
    let mut col = vec![Scalar::zero(); rows];
    for (key, c) in family.entries() {
        match index.get(key) {
            Some(&row) => col[row] = c.clone(),
            None => {
                return Err(Error::InconsistentComplex(format!(
                    "coboundary of an (l={l}, m={m}) generator produced {key:?} outside the stratum"
                )))
            }
        }
    }
    Ok(col)
}

/// Matrix of `δ^r` on the `(l, m)` stratum, columns indexed by
/// [`stratum_basis`] at arity `r` and rows at arity `r + 1`, assembled through
/// tables and [`extract_kernels`].
pub fn coboundary_matrix(r: usize, l: u32, m: u32, caps: TruncationCaps) -> Result<RationalMatrix> {
    coboundary_matrix_via(Route::Table, r, l, m, caps, SignRule::Alternating)
}

pub fn coboundary_matrix_via(
    route: Route,
    r: usize,
    l: u32,
    m: u32,
    caps: TruncationCaps,
    rule: SignRule,
) -> Result<RationalMatrix> {
    let cols = stratum_basis(r, l, m, caps.max_mode);
    let rows = stratum_basis(r + 1, l, m, caps.max_mode);
    if cols.is_empty() || rows.is_empty() {
        return Ok(RationalMatrix::zeros(rows.len(), cols.len()));
    }
    if route == Route::Table {
        check_cohomology_caps(r, l, m, &caps)?;
    }
    let index: HashMap<&KernelKey, usize> = rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let columns = par::map(&cols, |key| {
        let generator = KernelFamily::single(key.create.clone(), key.annihilate.clone(), Scalar::one());
        let image = match route {
            Route::Kernel => coboundary_kernel_with(&generator, rule),
            Route::Table => {
                let t = table_from_kernel(&generator, caps);
                let out = coboundary_output_caps(r, caps);
                extract_kernels(&coboundary_table_with(&t, out, rule)?)
            }
        };
        coordinates(&image, &index, rows.len(), l, m)
    });
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(rows.len(), columns))
}

/// Dimensions of `Ker δ^r`, `Im δ^{r−1}` and their quotient on one stratum,
/// with representatives of a cohomology basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dim_ker: usize,
    pub dim_im_prev: usize,
    pub dim_h: usize,
    pub basis_cocycles: Vec<KernelFamily>,
}

pub fn cohomology_dims(r: usize, l: u32, m: u32, caps: TruncationCaps) -> Result<CohomologyReport> {
    cohomology_dims_via(Route::Table, r, l, m, caps)
}

pub fn cohomology_dims_via(route: Route, r: usize, l: u32, m: u32, caps: TruncationCaps) -> Result<CohomologyReport> {
    let d_r = coboundary_matrix_via(route, r, l, m, caps, SignRule::Alternating)?;
    let basis = stratum_basis(r, l, m, caps.max_mode);
    let (rank_r, null_r) = rank_nullspace(&d_r);
    let dim_ker = basis.len() - rank_r;

    let prev = if r == 0 {
        RationalMatrix::zeros(basis.len(), 0)
    } else {
        coboundary_matrix_via(route, r - 1, l, m, caps, SignRule::Alternating)?
    };
    if prev.cols() > 0 && !basis.is_empty() && !d_r.mul(&prev).is_zero() {
        return Err(Error::InconsistentComplex(format!(
            "δ^{r}∘δ^{} ≠ 0 on stratum (l={l}, m={m})",
            r as isize - 1
        )));
    }
    let dim_im_prev = prev.rank();

    // Extend a basis of the image to one of the kernel.
    let mut span: Vec<Vec<Scalar>> = (0..prev.cols()).map(|j| prev.column(j)).collect();
    let mut span_rank = dim_im_prev;
    let mut reps = Vec::new();
    for v in null_r {
        span.push(v.clone());
        let trial = RationalMatrix::from_columns(basis.len(), span.clone());
        let rank = trial.rank();
        if rank > span_rank {
            span_rank = rank;
            let mut k = KernelFamily::new(r);
            for (key, c) in basis.iter().zip(&v) {
                k.add_entry(key.clone(), c);
            }
            reps.push(k);
        } else {
            span.pop();
        }
    }

    Ok(CohomologyReport {
        dim_ker,
        dim_im_prev,
        dim_h: dim_ker - dim_im_prev,
        basis_cocycles: reps,
    })
}
