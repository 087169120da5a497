//! Worked values for the constructions, each computed by an independent route.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semicube::base::{cube_base, Degree};
use semicube::cube::{compose_cube, enumerate_hom, factor_surj, r_functor, tensor_cube, CubeMor, HomMode};
use semicube::day::day_product;
use semicube::dr::{check_direct, DrCategory, DrObject, FWord};
use semicube::generate::{random_fibrant, FrameParams};
use semicube::nat::count_nat;
use semicube::presheaf::Presheaf;
use semicube::simplex::SimplexMor;
use semicube::skeleton::cell_decompose_mono;
use semicube::tribe::{cotensor_skeletal, SetFrame};

fn cube(label: &str) -> CubeMor {
    CubeMor::parse_label(label).unwrap()
}

#[test]
fn two_face_maps_into_the_interval() {
    let faces: Vec<CubeMor> = enumerate_hom(0, 1, HomMode::Symmetric);
    assert_eq!(faces, vec![CubeMor::face(0), CubeMor::face(1)]);
}

#[test]
fn symmetric_maps_from_interval_to_square() {
    // Every word of length at most 4 in the padded generators, by semantics.
    let mut gens = Vec::new();
    for g in [CubeMor::face(0), CubeMor::face(1), CubeMor::reversal(), CubeMor::transposition()] {
        for (a, b) in [(0, 0), (1, 0), (0, 1)] {
            let h = tensor_cube(&tensor_cube(&CubeMor::identity(a), &g), &CubeMor::identity(b));
            if h.cod() <= 2 {
                gens.push(h);
            }
        }
    }
    let mut words = vec![CubeMor::identity(1)];
    let mut seen = HashSet::new();
    for _ in 0..4 {
        let mut next = Vec::new();
        for f in &words {
            for g in gens.iter().filter(|g| g.dom() == f.cod()) {
                let gf = compose_cube(g, f).unwrap();
                if gf.cod() == 2 {
                    seen.insert(gf.semantics());
                }
                next.push(gf);
            }
        }
        words = next;
    }
    assert_eq!(seen.len(), 8);
    assert_eq!(enumerate_hom(1, 2, HomMode::Symmetric).len(), 8);
}

#[test]
fn second_face_is_reversal_after_first() {
    let (w, k) = factor_surj(&CubeMor::face(1));
    assert_eq!(w, CubeMor::reversal());
    assert_eq!(k, SimplexMor::bang(0));
    assert_eq!(compose_cube(&CubeMor::reversal(), &CubeMor::face(0)).unwrap(), CubeMor::face(1));
}

#[test]
fn mixed_factorization() {
    let f = cube("2>3:-2,1,+1");
    let (w, k) = factor_surj(&f);
    assert_eq!(w, cube("3>3:-2,-3,+1"));
    assert_eq!(k, SimplexMor::new(1, 2, vec![0, 1]).unwrap());
    let back = compose_cube(&w, &r_functor(&k)).unwrap();
    let point = [1, 2];
    assert_eq!(back.semantics().eval(&point, 3), f.semantics().eval(&point, 3));
    assert_eq!(back, f);
}

#[test]
fn r_on_small_maps() {
    assert_eq!(r_functor(&SimplexMor::bang(0)), CubeMor::face(0));
    let k = SimplexMor::new(0, 1, vec![1]).unwrap();
    let expected = tensor_cube(&CubeMor::face(0), &CubeMor::identity(1));
    assert_eq!(r_functor(&k), expected);
    assert_eq!(expected, cube("1>2:0,+1"));
}

#[test]
fn boundary_inclusion_is_a_single_cell() {
    let base = cube_base(HomMode::Plain, 2);
    for x in 0..3 {
        let (_, i) = Presheaf::boundary(&base, x).unwrap();
        let dec = cell_decompose_mono(&i).unwrap();
        assert_eq!(dec.num_cells(), 1);
        assert_eq!(dec.cells_at(&Degree(vec![x as u32])), 1);
        dec.verify(&i).unwrap();
    }
}

#[test]
fn cotensor_by_interval_boundary_is_pairs_of_vertices() {
    let base = cube_base(HomMode::Plain, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let f = SetFrame::new(random_fibrant(&base, &mut rng, FrameParams::default()).unwrap()).unwrap();
        let (boundary, _) = Presheaf::boundary(&base, 1).unwrap();
        let c = cotensor_skeletal(&f, &boundary).unwrap();
        assert_eq!(c.size(), f.diagram.size(0).pow(2));
        assert!(c.is_bijection());
        for x in 0..3 {
            let c = cotensor_skeletal(&f, &Presheaf::representable(&base, x).unwrap()).unwrap();
            assert_eq!(c.size(), f.diagram.size(x));
        }
    }
}

#[test]
fn dr_low_degree_objects() {
    let dr = DrCategory::build(2).unwrap();
    let cod = |n: usize| dr.objects().iter().filter(|o| o.cod_dim() == n).count();
    assert_eq!(cod(0), 1);
    assert_eq!(cod(1), 4);
    assert_eq!(dr.object(dr.object_id(&DrObject::zero()).unwrap()), &DrObject::zero());
    // Maps [-1] -> [0] and [0] -> [0], times the two automorphisms of I^1.
    assert_eq!(SimplexMor::enumerate(-1, 0).len() + SimplexMor::enumerate(0, 0).len(), 2);
    assert_eq!(DrCategory::build(0).unwrap().objects().len(), 1);
}

#[test]
fn zero_to_first_face() {
    let dr = DrCategory::build(2).unwrap();
    let zero = dr.object_id(&DrObject::zero()).unwrap();
    let target = dr.object_id(&DrObject::new(SimplexMor::bang(0), CubeMor::identity(1)).unwrap()).unwrap();
    let hom = dr.base().hom(zero, target);
    assert_eq!(hom.len(), 1);
    let m = dr.morphism(hom[0]);
    assert_eq!(m.v, FWord::letter(CubeMor::face(0)));
}

#[test]
fn dropping_the_iso_flag_is_caught() {
    let dr = DrCategory::build(2).unwrap();
    assert!(check_direct(&dr).passed());
    let flat = dr
        .with_degrees(|o| Degree(vec![o.cod_dim() as u32, (o.cod_dim() - o.dom_dim()) as u32]))
        .unwrap();
    let report = check_direct(&flat);
    assert!(!report.passed());
    assert!(report.counterexample.is_some());
}

#[test]
fn day_of_representables_is_representable() {
    let base = cube_base(HomMode::Plain, 3);
    for (a, b) in [(0, 0), (0, 2), (1, 1), (1, 2)] {
        let day = day_product(&Presheaf::representable(&base, a).unwrap(), &Presheaf::representable(&base, b).unwrap())
            .unwrap();
        let target = Presheaf::representable(&base, a + b).unwrap();
        assert_eq!(day.presheaf.sizes(), target.sizes());
        // Isomorphic presheaves have the same number of maps into every test object.
        for x in 0..4 {
            let t = Presheaf::representable(&base, x).unwrap();
            assert_eq!(count_nat(&day.presheaf, &t).unwrap(), count_nat(&target, &t).unwrap());
        }
    }
}
