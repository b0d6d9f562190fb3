use proptest::prelude::*;

use fockalg::fock::{pairing, wick_product, FockVector, TruncationCaps};
use fockalg::json;
use fockalg::multiindex::MultiIndex;
use fockalg::operators::{apply_kernel, KernelFamily};
use fockalg::sample::Sampler;
use fockalg::symbol::SymbolPolynomial;
use fockalg::{extract_kernels, reconstruct, BasisActionTable, Scalar};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6).prop_map(|(a, b, c, d)| {
        Scalar::from_ratio(a, b) + Scalar::from_ratio(c, d) * Scalar::i()
    })
}

fn multi_index() -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0u32..4, 0..6).prop_map(|modes| MultiIndex::from_pairs(modes.into_iter().map(|m| (m, 1))))
}

fn fock_vector() -> impl Strategy<Value = FockVector> {
    prop::collection::vec((multi_index(), scalar()), 0..5).prop_map(FockVector::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = b.inv() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
            prop_assert_eq!(&b * &inv, Scalar::from_int(1));
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(json::from_str::<Scalar>(&text).unwrap(), a);
    }

    #[test]
    fn concat_is_a_commutative_monoid(a in multi_index(), b in multi_index(), c in multi_index()) {
        prop_assert_eq!(a.concat(&b), b.concat(&a));
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(a.concat(&MultiIndex::vacuum()), a.clone());
        prop_assert_eq!(a.concat(&b).checked_sub(&b), Some(a));
    }

    #[test]
    fn decompositions_recombine(a in multi_index()) {
        for (b, d) in a.decompositions() {
            prop_assert_eq!(b.concat(&d), a.clone());
        }
    }

    #[test]
    fn wick_product_is_bilinear_and_commutative(x in fock_vector(), y in fock_vector(), z in fock_vector(), c in scalar()) {
        prop_assert_eq!(wick_product(&x, &y), wick_product(&y, &x));
        prop_assert_eq!(wick_product(&x.add(&y), &z), wick_product(&x, &z).add(&wick_product(&y, &z)));
        prop_assert_eq!(wick_product(&x.scale(&c), &y), wick_product(&x, &y).scale(&c));
    }

    #[test]
    fn pairing_is_symmetric_bilinear(x in fock_vector(), y in fock_vector(), z in fock_vector()) {
        prop_assert_eq!(pairing(&x, &y), pairing(&y, &x));
        prop_assert_eq!(pairing(&x.add(&y), &z), pairing(&x, &z) + pairing(&y, &z));
    }

    #[test]
    fn fock_vector_json_round_trip(x in fock_vector()) {
        let text = json::to_string(&x);
        let back: FockVector = json::from_str(&text).unwrap();
        prop_assert_eq!(json::to_string(&back), text);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn sampled_objects_round_trip_through_json(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let k = s.kernel_family(2, 3, 3, 4);
        prop_assert_eq!(json::from_str::<KernelFamily>(&json::to_string(&k)).unwrap(), k.clone());
        let caps = TruncationCaps::new(2, 2);
        let t = s.table(1, caps, 0.5, 3);
        prop_assert_eq!(json::from_str::<BasisActionTable>(&json::to_string(&t)).unwrap(), t);
        let p = SymbolPolynomial::from_kernel(&k, TruncationCaps::new(3, 3));
        prop_assert_eq!(json::from_str::<SymbolPolynomial>(&json::to_string(&p)).unwrap(), p);
    }

    #[test]
    fn kernel_tables_act_like_kernels(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let caps = TruncationCaps::new(2, 3);
        let k = s.kernel_family(1, 2, 3, 4);
        let x = s.fock_vector(&caps, 4);
        let t = reconstruct(&k, caps);
        let direct = apply_kernel(&k, std::slice::from_ref(&x)).unwrap().truncate_degree(3);
        prop_assert_eq!(fockalg::apply_table(&t, &[x]).unwrap(), direct);
        prop_assert_eq!(extract_kernels(&t), k);
    }
}
