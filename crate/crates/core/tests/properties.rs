use proptest::prelude::*;
use sl2recog::fieldlink::{fprime_mul, fprime_star, iota, iota_inv};
use sl2recog::modcore::{self, GModule, Tag};
use sl2recog::recog::{self, Certificate};
use sl2recog::FieldSpec;

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![(5u32, 1usize), (7, 1), (5, 2), (7, 2), (5, 3)])
        .prop_map(|(p, m)| FieldSpec::default_for(p, m).unwrap())
}

fn small_modules() -> impl Strategy<Value = (Tag, FieldSpec)> {
    let tags = prop::sample::select(vec![Tag::Nat, Tag::Sym2, Tag::Sym3]);
    let fs = prop::sample::select(vec![(5u32, 1usize), (7, 1), (11, 1), (5, 2)]);
    (tags, fs).prop_map(|(t, (p, m))| (t, FieldSpec::default_for(p, m).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fprime_is_a_commutative_ring(k in fields(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let e = |i: u64| iota(&k, &k.from_index(i % k.size()));
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(fprime_star(&k, &a, &b), fprime_star(&k, &b, &a));
        prop_assert_eq!(fprime_mul(&k, &a, &b), fprime_mul(&k, &b, &a));
        prop_assert_eq!(
            fprime_star(&k, &fprime_star(&k, &a, &b), &c),
            fprime_star(&k, &a, &fprime_star(&k, &b, &c))
        );
        prop_assert_eq!(
            fprime_mul(&k, &fprime_mul(&k, &a, &b), &c),
            fprime_mul(&k, &a, &fprime_mul(&k, &b, &c))
        );
        prop_assert_eq!(
            fprime_mul(&k, &a, &fprime_star(&k, &b, &c)),
            fprime_star(&k, &fprime_mul(&k, &a, &b), &fprime_mul(&k, &a, &c))
        );
    }

    #[test]
    fn iota_is_additive_and_multiplicative(k in fields(), x in any::<u64>(), y in any::<u64>()) {
        let (x, y) = (k.from_index(x % k.size()), k.from_index(y % k.size()));
        let (a, b) = (iota(&k, &x), iota(&k, &y));
        prop_assert_eq!(iota_inv(&k, &fprime_star(&k, &a, &b)), k.add(&x, &y));
        prop_assert_eq!(iota_inv(&k, &fprime_mul(&k, &a, &b)), k.mul(&x, &y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tag_is_scramble_invariant((tag, k) in small_modules(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = modcore::canonical(&k, tag, None).unwrap();
        let a = recog::recognize(&modcore::scramble(&m, s1), 1).unwrap();
        let b = recog::recognize(&modcore::scramble(&m, s2), 2).unwrap();
        prop_assert_eq!(a.tag, tag);
        prop_assert_eq!(b.tag, tag);
    }

    #[test]
    fn certificates_verify((tag, k) in small_modules(), s in any::<u64>(), seed in any::<u64>()) {
        let m = modcore::scramble(&modcore::canonical(&k, tag, None).unwrap(), s);
        let cert = recog::recognize(&m, seed).unwrap();
        prop_assert!(recog::verify_certificate(&m, &cert).passed());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn module_json_round_trips((tag, k) in small_modules(), s in any::<u64>()) {
        let m = modcore::scramble(&modcore::canonical(&k, tag, None).unwrap(), s);
        prop_assert_eq!(GModule::from_json(&m.to_json(None)).unwrap(), m);
    }

    #[test]
    fn endomorphisms_form_a_field_of_size_q((tag, k) in small_modules(), s in any::<u64>()) {
        let m = modcore::scramble(&modcore::canonical(&k, tag, None).unwrap(), s);
        prop_assert_eq!(modcore::hom_space(&m, &m).unwrap().len(), k.m);
    }
}
