//! End-to-end behaviour of the embedding construction.

use cantor_ramsey::embed::{
    build_embedding, check_color_preservation, preset, verify_conditions, ColorVerdict, CylinderH, PfH,
};
use cantor_ramsey::words::Word;

#[test]
fn full_pf_depth_four_preserves_colors() {
    let e = build_embedding(&PfH, 4, 10_000).unwrap();
    assert!(verify_conditions(&e, &PfH).unwrap().passed());
    assert!(check_color_preservation(&e).unwrap().passed());
}

#[test]
fn cylinder_01_attains_colors_one_to_eight() {
    let h = CylinderH("01".parse().unwrap());
    let e = build_embedding(&h, 6, 100_000).unwrap();
    match check_color_preservation(&e).unwrap() {
        ColorVerdict::Pass { colors, pairs } => {
            assert!(pairs >= 300);
            assert!((1..=8).all(|c| colors.contains(&c)), "{colors:?}");
        }
        other => panic!("{other:?}"),
    }
    let prefix: Word = "01".parse().unwrap();
    assert!(e.nodes().iter().all(|n| prefix.is_prefix_of(&n.s.padded(2).unwrap())));
}

#[test]
fn point_map_is_injective_on_q_words() {
    for name in ["pf", "cyl:01", "double"] {
        let h = preset(name).unwrap();
        let e = build_embedding(h.as_ref(), 5, 100_000).unwrap();
        let mut images: Vec<_> = e.nodes().iter().filter(|n| n.t.is_q()).map(|n| n.s.clone()).collect();
        let total = images.len();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), total, "{name}");
    }
}

#[test]
fn schemes_are_prefix_stable_across_depths() {
    for name in ["pf", "cyl:01", "double"] {
        let h = preset(name).unwrap();
        let small = build_embedding(h.as_ref(), 4, 100_000).unwrap();
        let big = build_embedding(h.as_ref(), 6, 100_000).unwrap();
        assert_eq!(small.nodes(), &big.nodes()[..small.nodes().len()], "{name}");
    }
}
