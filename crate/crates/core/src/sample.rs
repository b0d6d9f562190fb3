//! Seeded random generators for the property checks. A given seed always
//! produces the same values on every platform (ChaCha8).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{FockVector, TestVector, TruncationCaps};
use crate::multiindex::MultiIndex;
use crate::operators::{basis_tuples, BasisActionTable, KernelFamily, KernelKey};
use crate::scalar::Scalar;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..n)
    }

    pub fn up_to(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..=n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.rng.gen_range(0..items.len())]
    }

    /// `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 4`.
    pub fn rational(&mut self) -> BigRational {
        let p: i64 = self.rng.gen_range(-6..=6);
        let q: i64 = self.rng.gen_range(1..=4);
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rational(&mut self) -> BigRational {
        loop {
            let q = self.rational();
            if !q.is_zero() {
                return q;
            }
        }
    }

    /// Real two times out of three, otherwise with an imaginary part.
    pub fn scalar(&mut self) -> Scalar {
        let re = self.rational();
        if self.rng.gen_range(0..3) == 0 {
            Scalar::new(re, self.rational())
        } else {
            Scalar::real(re)
        }
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Uniform over mode sequences of length `degree`, then normalized.
    pub fn multi_index_of_degree(&mut self, max_mode: u32, degree: u32) -> MultiIndex {
        if max_mode == 0 {
            return MultiIndex::vacuum();
        }
        let mut occ = vec![0u32; max_mode as usize];
        for _ in 0..degree {
            occ[self.below(max_mode) as usize] += 1;
        }
        MultiIndex::from_occupations(&occ)
    }

    pub fn multi_index(&mut self, max_mode: u32, max_degree: u32) -> MultiIndex {
        let d = self.up_to(max_degree);
        self.multi_index_of_degree(max_mode, d)
    }

    /// Up to `max_terms` random terms within `caps`.
    pub fn fock_vector(&mut self, caps: &TruncationCaps, max_terms: u32) -> FockVector {
        let n = self.up_to(max_terms);
        let mut v = FockVector::zero();
        for _ in 0..n {
            let a = self.multi_index(caps.max_mode, caps.max_degree);
            let c = self.scalar();
            v.add_term(a, &c);
        }
        v
    }

    /// Rational coefficients on every mode `< max_mode`, each possibly zero.
    pub fn test_vector(&mut self, max_mode: u32) -> TestVector {
        TestVector::from_coeffs((0..max_mode).map(|i| (i, Scalar::real(self.rational()))))
    }

    /// Random kernel family with entries satisfying `l + Σ|J_j| ≤ max_total`.
    pub fn kernel_family(&mut self, arity: usize, max_mode: u32, max_total: u32, max_entries: u32) -> KernelFamily {
        let n = 1 + self.up_to(max_entries.saturating_sub(1));
        let mut k = KernelFamily::new(arity);
        for _ in 0..n {
            let mut budget = self.up_to(max_total);
            let l = self.up_to(budget);
            budget -= l;
            let create = self.multi_index_of_degree(max_mode, l);
            let mut annihilate = Vec::with_capacity(arity);
            for _ in 0..arity {
                let d = self.up_to(budget);
                budget -= d;
                annihilate.push(self.multi_index_of_degree(max_mode, d));
            }
            let c = self.nonzero_scalar();
            k.add_entry(KernelKey::new(create, annihilate), &c);
        }
        k
    }

    /// Kernel family all of whose entries lie in stratum `(l, m)`.
    pub fn homogeneous_family(&mut self, arity: usize, l: u32, m: u32, max_mode: u32, max_entries: u32) -> KernelFamily {
        let n = 1 + self.up_to(max_entries.saturating_sub(1));
        let mut k = KernelFamily::new(arity);
        for _ in 0..n {
            let create = self.multi_index_of_degree(max_mode, l);
            let mut annihilate = vec![MultiIndex::vacuum(); arity];
            if arity > 0 {
                let mut split = vec![0u32; arity];
                for _ in 0..m {
                    split[self.below(arity as u32) as usize] += 1;
                }
                for (slot, d) in annihilate.iter_mut().zip(split) {
                    *slot = self.multi_index_of_degree(max_mode, d);
                }
            } else if m > 0 {
                continue;
            }
            let c = self.nonzero_scalar();
            k.add_entry(KernelKey::new(create, annihilate), &c);
        }
        k
    }

    /// Table with about `density` of its rows filled by random vectors.
    pub fn table(&mut self, arity: usize, caps: TruncationCaps, density: f64, max_terms: u32) -> BasisActionTable {
        let mut t = BasisActionTable::zero(arity, caps);
        for args in basis_tuples(arity, &caps) {
            if self.coin(density) {
                let v = self.fock_vector(&caps, max_terms);
                t.set_row(args, v).expect("sampled row lies within caps");
            }
        }
        t
    }
}
