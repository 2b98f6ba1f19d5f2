mod common;

use common::*;
use cubefold::cube::{is_consistent, is_surjective};
use cubefold::layers::{check_self_intersections, count_layer_maps, SearchLimits};

#[test]
fn fixture_mappings_are_consistent() {
    for (m, cuts) in [(STANDARD_NET, &[][..]), (BAD_HOLE, &[]), (FAN, FAN_CUTS), (TWISTED, &[]), (LONG_FRAME, &[]), (KNOTTED, KNOTTED_CUTS)] {
        let w = walked(m, cuts);
        assert!(is_consistent(&w.polyomino, &w.mapping), "{m}");
        println!("{}\n{}", w.polyomino.to_text(), w.mapping.to_text(&w.polyomino));
    }
}

#[test]
fn example_counts() {
    let lim = SearchLimits::default();
    for (name, m, cuts, want) in [("bad", BAD_HOLE, &[][..], 0), ("fan", FAN, FAN_CUTS, 0), ("twisted", TWISTED, &[], 16), ("long", LONG_FRAME, &[], 60)] {
        let w = walked(m, cuts);
        let n = count_layer_maps(&w.polyomino, &w.mapping, lim).unwrap();
        println!("{name}: {n} surjective={}", is_surjective(&w.mapping));
        assert_eq!(n, want, "{name}");
    }
}

#[test]
fn displayed_layers_have_no_violations() {
    let w = walked(TWISTED, &[]);
    assert!(check_self_intersections(&with_layers(&w, TWISTED, TWISTED_LAYERS)).is_empty());
    let w = walked(LONG_FRAME, &[]);
    assert!(check_self_intersections(&with_layers(&w, LONG_FRAME, LONG_FRAME_LAYERS)).is_empty());
    let w = walked(KNOTTED, KNOTTED_CUTS);
    assert!(check_self_intersections(&with_layers(&w, KNOTTED, KNOTTED_LAYERS)).is_empty());
}
