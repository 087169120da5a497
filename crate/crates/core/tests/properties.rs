use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semicube::base::cube_base;
use semicube::cube::{compose_cube, enumerate_hom, factor_surj, r_functor, tensor_cube, CubeMor, HomMode};
use semicube::dr::{DrCategory, FWord};
use semicube::generate::{
    enumerate_presheaves, is_reedy_fibration, random_fibrant, random_fibration_onto, random_presheaf, random_subpresheaf, FrameParams,
};
use semicube::kan::check_adjunctions;
use semicube::nat::{count_nat, nat_set};
use semicube::presheaf::{Presheaf, PresheafMap};
use semicube::skeleton::{cell_decompose_mono, skeletal_filtration};
use semicube::tribe::{cotensor_skeletal, FrameMap, SetFrame};

fn random_mor(rng: &mut ChaCha8Rng, dom: usize, max: usize) -> CubeMor {
    let cod = rng.gen_range(dom..=max);
    let hom = enumerate_hom(dom, cod, HomMode::Symmetric);
    hom[rng.gen_range(0..hom.len())].clone()
}

fn random_word(rng: &mut ChaCha8Rng, dom: usize, len: usize) -> Vec<CubeMor> {
    let mut cod = dom;
    (0..len)
        .map(|_| {
            let f = random_mor(rng, cod, 3);
            cod = f.cod();
            f
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalization_is_confluent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = rng.gen_range(0..=3);
        let len = rng.gen_range(0..=6);
        let raw = random_word(&mut rng, dom, len);
        let whole = FWord::normalize(dom, raw.clone()).unwrap();
        prop_assert!(whole.is_normal());
        // Every split normalizes to the same word.
        for cut in 0..=raw.len() {
            let mid = if cut == 0 { dom } else { raw[cut - 1].cod() };
            let left = FWord::normalize(dom, raw[..cut].to_vec()).unwrap();
            let right = FWord::normalize(mid, raw[cut..].to_vec()).unwrap();
            prop_assert_eq!(left.then(&right).unwrap(), whole.clone());
        }
        prop_assert_eq!(FWord::normalize(dom, whole.letters().to_vec()).unwrap(), whole.clone());
        let composite = raw.iter().fold(CubeMor::identity(dom), |acc, f| compose_cube(f, &acc).unwrap());
        prop_assert_eq!(whole.p0(), composite);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cube_composition_is_associative_and_semantic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(0..=3);
        let f = random_mor(&mut rng, d, 3);
        let g = random_mor(&mut rng, f.cod(), 3);
        let h = random_mor(&mut rng, g.cod(), 3);
        let gf = compose_cube(&g, &f).unwrap();
        prop_assert_eq!(compose_cube(&h, &gf).unwrap(), compose_cube(&compose_cube(&h, &g).unwrap(), &f).unwrap());
        prop_assert_eq!(Some(gf.semantics()), g.semantics().after(&f.semantics()));
    }

    #[test]
    fn tensor_interchange(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(0..=1);
        let f = random_mor(&mut rng, d, 2);
        let g = random_mor(&mut rng, f.cod(), 2);
        let d = rng.gen_range(0..=1);
        let f2 = random_mor(&mut rng, d, 2);
        let g2 = random_mor(&mut rng, f2.cod(), 2);
        let left = compose_cube(&tensor_cube(&g, &g2), &tensor_cube(&f, &f2)).unwrap();
        let right = tensor_cube(&compose_cube(&g, &f).unwrap(), &compose_cube(&g2, &f2).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn factorization_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(0..=3);
        let f = random_mor(&mut rng, d, 3);
        let (w, k) = factor_surj(&f);
        prop_assert!(w.is_automorphism());
        prop_assert_eq!(compose_cube(&w, &r_functor(&k)).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn presheaves_reconstruct_from_skeleta(seed in any::<u64>()) {
        let base = cube_base(HomMode::Plain, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_presheaf(&base, &mut rng, 5).unwrap();
        let empty = PresheafMap::new(Presheaf::empty(base.clone()), k.clone(), vec![Vec::new(); 4]).unwrap();
        skeletal_filtration(&k).unwrap().verify(&empty).unwrap();
        let i = random_subpresheaf(&k, &mut rng, 0.4).unwrap();
        prop_assert!(i.is_mono());
        cell_decompose_mono(&i).unwrap().verify(&i).unwrap();
    }

    #[test]
    fn nat_search_agrees_with_count(seed in any::<u64>()) {
        let base = cube_base(HomMode::Plain, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_presheaf(&base, &mut rng, 2).unwrap();
        let l = random_presheaf(&base, &mut rng, 3).unwrap();
        let maps = nat_set(&k, &l).unwrap();
        prop_assert_eq!(maps.len(), count_nat(&k, &l).unwrap());
        for m in &maps {
            m.validate().unwrap();
        }
    }

    #[test]
    fn frames_and_fibrations(seed in any::<u64>()) {
        let base = cube_base(HomMode::Plain, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = SetFrame::new(random_fibrant(&base, &mut rng, FrameParams { base_max: 2, pad_max: 2 }).unwrap()).unwrap();
        let q = random_fibration_onto(&f.diagram, &mut rng, 2).unwrap();
        prop_assert!(is_reedy_fibration(&q).unwrap());
        let q = FrameMap::classify(q).unwrap();
        prop_assert!(q.levelwise_surjective);
        SetFrame::new(q.map.source().clone()).unwrap();
        let l = random_presheaf(&base, &mut rng, 2).unwrap();
        prop_assert!(cotensor_skeletal(&f, &l).unwrap().is_bijection());
    }

    #[test]
    fn kan_adjunctions_along_p(seed in any::<u64>()) {
        let dr = DrCategory::build(1).unwrap();
        let p = dr.projection().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_presheaf(dr.base(), &mut rng, 2).unwrap();
        let over_r = enumerate_presheaves(dr.r_base(), 2).unwrap();
        let x = &over_r[rng.gen_range(0..over_r.len())];
        prop_assert!(check_adjunctions(&p, &k, x).unwrap().passed());
    }
}
