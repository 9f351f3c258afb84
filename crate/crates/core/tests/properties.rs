use hecke_core::classify::{classify, Block, Family, InertialDescriptor, MuClass};
use hecke_core::hecke::{parse_element, HeckeAlgebra};
use hecke_core::lattice::Monomial;
use hecke_core::laurent::LaurentPoly;
use hecke_core::opmodel::{OperatorConfig, SimpleConstants};
use hecke_core::params::{ParameterSet, SimpleParameter};
use hecke_core::rational::RationalFunction;
use hecke_core::root_datum::{build_standard_datum, validate_datum, BasedRootDatum, CartanType, ComponentSpec};
use hecke_core::scalar::{rat, ParamScalar, Rational, ScalarConfig};
use hecke_core::weyl::{WeylGroup, DEFAULT_CAP};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rats(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-4i64..5, 1i64..4).prop_map(|(n, d)| rat(n, d)), len)
}

fn scalar() -> impl Strategy<Value = ParamScalar> {
    (-3i64..4, small_rats(1..4), -2i64..3).prop_map(|(low, num, k)| {
        // denominator 1 + k v, never zero as a polynomial
        ParamScalar::from_coefficients(low, num, vec![rat(1, 1), rat(k, 1)]).unwrap()
    })
}

fn laurent(rank: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..3, rank), -3i64..4), 0..4).prop_map(move |terms| {
        LaurentPoly::from_terms(rank, terms.into_iter().map(|(m, c)| (Monomial(m), ParamScalar::from_int(c))))
    })
}

fn datum(l: CartanType, r: usize) -> BasedRootDatum {
    build_standard_datum(&[ComponentSpec::new(l, r)]).unwrap()
}

fn small_datum() -> impl Strategy<Value = BasedRootDatum> {
    prop_oneof![
        Just(datum(CartanType::A, 1)),
        Just(datum(CartanType::A, 2)),
        Just(datum(CartanType::B, 2)),
        Just(datum(CartanType::C, 2)),
        Just(datum(CartanType::A, 3)),
        Just(datum(CartanType::B, 3)),
        Just(datum(CartanType::D, 4)),
    ]
}

fn hecke(d: &BasedRootDatum) -> HeckeAlgebra {
    let params = (0..d.num_simples())
        .map(|i| {
            let b = if d.is_doubled_coroot(i).unwrap() { rat(1, 2) } else { rat(0, 1) };
            SimpleParameter::new(rat(3, 2), b)
        })
        .collect();
    HeckeAlgebra::new(d, ParameterSet::new(ScalarConfig::new(2), params).unwrap(), DEFAULT_CAP).unwrap()
}

proptest! {
    #[test]
    fn scalar_field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x.clone());
            prop_assert!((&y * &y.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_powers(x in scalar(), m in -3i64..4, n in -3i64..4) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x.pow(m) * &x.pow(n), x.pow(m + n));
    }

    #[test]
    fn laurent_division_round_trip(p in laurent(2), q in laurent(2)) {
        prop_assume!(!q.is_zero());
        let pq = &p * &q;
        prop_assert_eq!(pq.exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn laurent_ring_axioms(p in laurent(2), q in laurent(2), r in laurent(2)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn weyl_action_is_a_ring_map(p in laurent(2), q in laurent(2), seed in any::<u64>()) {
        let d = datum(CartanType::B, 2);
        let w = WeylGroup::new(&d, DEFAULT_CAP).unwrap();
        let k = (seed as usize) % w.order();
        let g = w.element(k).automorphism();
        prop_assert_eq!((&p * &q).act(&g), &p.act(&g) * &q.act(&g));
        prop_assert_eq!((&p + &q).act(&g), &p.act(&g) + &q.act(&g));
    }

    #[test]
    fn rational_act_is_multiplicative(p in laurent(2), q in laurent(2), i in 0usize..4, j in 0usize..4, c in 1i64..4, k in 0usize..8) {
        let dirs = [[1, 0], [0, 1], [1, 1], [1, -1]];
        let f = RationalFunction::with_factors(p, &[(ParamScalar::from_int(c), Monomial(dirs[i].to_vec()))]).unwrap();
        let g = RationalFunction::with_factors(q, &[(ParamScalar::v_pow(1), Monomial(dirs[j].to_vec()))]).unwrap();
        let d = datum(CartanType::B, 2);
        let w = WeylGroup::new(&d, DEFAULT_CAP).unwrap();
        let a = w.element(k % w.order()).automorphism();
        let fg = f.try_mul(&g).unwrap();
        prop_assert_eq!(fg.act(&a), f.act(&a).try_mul(&g.act(&a)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weyl_group_invariants(d in small_datum(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let w = WeylGroup::new(&d, DEFAULT_CAP).unwrap();
        let n = w.order();
        prop_assert_eq!(n as u64, d.components()[0].spec().weyl_order());
        prop_assert_eq!(w.length(w.longest()), d.num_positive_roots());
        let (x, y, z) = (a as usize % n, b as usize % n, c as usize % n);
        prop_assert_eq!(w.mul(w.mul(x, y), z), w.mul(x, w.mul(y, z)));
        prop_assert_eq!(w.length(w.inverse(x)), w.length(x));
        prop_assert_eq!(w.mul(x, w.inverse(x)), w.from_word(&[]));
        prop_assert_eq!(w.from_word(w.word(x)), x);
        prop_assert_eq!(w.word(x).len(), w.length(x));
    }

    #[test]
    fn standard_datums_validate(d in small_datum()) {
        let r = validate_datum(&d);
        prop_assert!(r.passed, "{:?}", r.failure);
    }

    #[test]
    fn r_group_order_is_a_power_of_two(
        family in prop::sample::select(Family::ALL.to_vec()),
        anchor in 0u32..3,
        blocks in prop::collection::vec((1u32..3, 1u32..4, prop::sample::select(MuClass::ALL.to_vec())), 1..3),
    ) {
        let anchor = if family == Family::GLInnerForm { 0 } else { anchor };
        let blocks = blocks
            .into_iter()
            .enumerate()
            .map(|(i, (k, d, mu))| Block::simple(&format!("b{i}"), k, d, mu))
            .collect();
        let desc = InertialDescriptor { family, anchor_rank: anchor, blocks };
        if let Ok(orbit) = classify(&desc, &ScalarConfig::new(2), DEFAULT_CAP) {
            let r = orbit.structure.r_order;
            prop_assert!(r.is_power_of_two(), "|R| = {}", r);
            prop_assert_eq!(orbit.structure.total_order, r * orbit.structure.w_order);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hecke_associativity(seed in any::<u64>(), pick in 0usize..3) {
        let d = [datum(CartanType::A, 2), datum(CartanType::B, 2), datum(CartanType::C, 2)][pick].clone();
        let h = hecke(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = h.random_element(&mut rng, 2, 2);
        let y = h.random_element(&mut rng, 2, 2);
        let z = h.random_element(&mut rng, 2, 2);
        prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        prop_assert_eq!(h.mul(&h.one(), &x), x.clone());
        prop_assert_eq!(h.mul(&x, &h.one()), x);
    }

    #[test]
    fn hecke_text_round_trip(seed in any::<u64>(), pick in 0usize..3) {
        let d = [datum(CartanType::A, 2), datum(CartanType::B, 2), datum(CartanType::B, 3)][pick].clone();
        let h = hecke(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = h.random_element(&mut rng, 3, 2);
        let text = h.format_element(&x);
        prop_assert_eq!(parse_element(&h, &text).unwrap(), x);
    }

    #[test]
    fn operator_model_products(seed in any::<u64>()) {
        let d = datum(CartanType::B, 2);
        let params = ParameterSet::new(
            ScalarConfig::new(2),
            vec![SimpleParameter::new(rat(1, 1), rat(0, 1)), SimpleParameter::new(rat(3, 2), rat(1, 2))],
        )
        .unwrap();
        let cfg = OperatorConfig::new(&d, params, vec![SimpleConstants::default()], &[], DEFAULT_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = cfg.random_element(&mut rng, 2, 1);
        let y = cfg.random_element(&mut rng, 2, 1);
        let z = cfg.random_element(&mut rng, 1, 1);
        prop_assert_eq!(cfg.j_mul(&cfg.j_mul(&x, &y), &z), cfg.j_mul(&x, &cfg.j_mul(&y, &z)));
        let e = cfg.change_basis(&x).unwrap();
        prop_assert_eq!(cfg.expand(&e), x);
    }
}
