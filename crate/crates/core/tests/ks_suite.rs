//! Graded comparison of the symplectic model with the Hochschild page.

use dimer_ks::e2::{E2Label, Grading, Parity};
use dimer_ks::ks::{verify, KsConfig, KsContext, ShGenerator};
use dimer_ks::model::Model;
use dimer_ks::builtin;
use proptest::prelude::*;

fn model(name: &str) -> Model {
    Model::new(&builtin(name).unwrap(), 0).unwrap()
}

#[test]
fn all_builtins_pass_at_n_max_ten() {
    for name in ["c3", "conifold", "spp"] {
        let r = verify(&model(name), KsConfig::default()).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures());
        let classes = model(name).zigzags.num_classes();
        assert_eq!(r.pieces.len(), 2 * (1 + 10 * classes));
    }
}

#[test]
fn singularity_summaries() {
    for (name, psi, theta) in [("c3", 0, 0), ("conifold", 0, 1), ("spp", 1, 2)] {
        let r = verify(&model(name), KsConfig { n_max: 2, ..Default::default() }).unwrap();
        assert_eq!(r.singularity.psi_families(), psi, "{name}");
        assert_eq!(r.singularity.theta_classes, theta, "{name}");
        assert_eq!(r.singularity.is_smooth(), name == "c3");
    }
}

#[test]
fn spp_even_images_on_the_doubled_class() {
    let m = model("spp");
    let cx = KsContext::new(&m, 0, None).unwrap();
    let doubled = (0..4).find(|&i| m.zigzags.multiplicity(i) == 2).unwrap();
    let alpha = cx.ks_image(ShGenerator::Alpha { class: doubled, n: 1 });
    assert_eq!(alpha.into_iter().collect::<Vec<_>>(), vec![(E2Label::XEta { class: doubled, n: 1 }, 1)]);
    let tau = cx.ks_image(ShGenerator::Tau { class: doubled, strip: 1, n: 1 });
    assert_eq!(tau.into_iter().collect::<Vec<_>>(), vec![(E2Label::Psi { class: doubled, strip: 1, n: 0 }, 1)]);
}

#[test]
fn spp_odd_winding_zero_is_four_onto_four() {
    let m = model("spp");
    let r = verify(&m, KsConfig { n_max: 1, ..Default::default() }).unwrap();
    let piece = r.pieces.iter().find(|p| p.grading == Grading::zero(Parity::Odd)).unwrap();
    assert_eq!((piece.sh_count, piece.e2_count), (4, 4));
    assert_eq!(piece.ks_det.abs(), 1);
    let cx = KsContext::new(&m, 0, None).unwrap();
    assert!(cx.ks_image(ShGenerator::Xi { vertex: m.zigzags.base_vertex }).is_empty());
}

#[test]
fn c3_odd_positive_winding_is_exhausted_by_w_odd() {
    let m = model("c3");
    let cx = KsContext::new(&m, 0, None).unwrap();
    for class in 0..3 {
        for n in 1..=5 {
            let g = Grading::along(Parity::Odd, class, n);
            assert_eq!(cx.sh_generators(g), vec![ShGenerator::AlphaW { class, n }]);
        }
    }
}

#[test]
fn odd_symplectic_determinant_is_the_weight() {
    for name in ["c3", "conifold", "spp"] {
        let r = verify(&model(name), KsConfig { n_max: 3, ..Default::default() }).unwrap();
        for p in r.pieces.iter().filter(|p| p.grading.parity == Parity::Odd) {
            if let Some(i) = p.grading.class {
                assert_eq!(p.sh_det.unwrap().abs(), r.frame.c[i].abs(), "{name} {}", p.grading);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_valid_frame_passes(which in 0usize..3, i0 in 0usize..4, a in -4i64..=4, b in -4i64..=4) {
        let name = ["c3", "conifold", "spp"][which];
        let m = model(name);
        let i0 = i0 % m.zigzags.num_classes();
        match verify(&m, KsConfig { n_max: 3, i0, ab: Some((a, b)) }) {
            Ok(r) => prop_assert!(r.passed(), "{:?}", r.failures()),
            Err(e) => prop_assert!(e.to_string().contains("= 0"), "{e}"),
        }
    }
}
