mod common;

use std::ops::ControlFlow;

use common::*;
use cubefold::layers::{for_each_layer_map, PseudoFolding, SearchLimits};
use cubefold::topology::{
    boundary_link, embed, fox3_nontrivial, gauss_code, linking_number, linking_number_along, validity_verdict, Obstruction,
    Validity,
};

fn all_foldings(w: &Walked) -> Vec<PseudoFolding> {
    let mut out = Vec::new();
    for_each_layer_map(&w.polyomino, &w.mapping, SearchLimits::default(), |lm| {
        out.push(PseudoFolding::new(w.polyomino.clone(), w.mapping.clone(), lm.clone()).unwrap());
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

#[test]
fn embeddings_are_disjoint() {
    for (m, cuts) in [(TWISTED, &[][..]), (LONG_FRAME, &[]), (STANDARD_NET, &[])] {
        for pf in all_foldings(&walked(m, cuts)) {
            let es = embed(&pf).unwrap();
            let bad = es.overlapping_pieces();
            assert!(bad.is_empty(), "{m}: {:?}", &bad[..bad.len().min(3)]);
            let lo = -es.scale / 4;
            let hi = es.scale + es.scale / 4;
            for piece in es.pieces() {
                assert!(piece.min.iter().chain(piece.max.iter()).all(|&x| lo <= x && x <= hi));
            }
        }
    }
    let w = walked(KNOTTED, KNOTTED_CUTS);
    assert!(embed(&with_layers(&w, KNOTTED, KNOTTED_LAYERS)).unwrap().is_disjoint());
}

#[test]
fn twisted_frame_linking_split() {
    let pfs = all_foldings(&walked(TWISTED, &[]));
    assert_eq!(pfs.len(), 16);
    let (mut zero, mut once, mut twice) = (0, 0, 0);
    for pf in &pfs {
        let link = boundary_link(&embed(pf).unwrap());
        assert_eq!(link.components.len(), 2);
        let lk = linking_number(&link, 0, 1).unwrap();
        for p in [2, 3, 5, 7] {
            if let Some(other) = linking_number_along(&link, 0, 1, p) {
                assert_eq!(other, lk);
            }
        }
        match lk.abs() {
            0 => zero += 1,
            1 => once += 1,
            _ => twice += 1,
        }
    }
    assert_eq!((zero, once, twice), (4, 8, 4));
}

#[test]
fn long_frame_always_invalid() {
    let pfs = all_foldings(&walked(LONG_FRAME, &[]));
    assert_eq!(pfs.len(), 60);
    for pf in &pfs {
        assert!(matches!(validity_verdict(pf), Validity::Invalid { .. }));
    }
}

#[test]
fn knotted_outer_boundary() {
    let w = walked(KNOTTED, KNOTTED_CUTS);
    let pf = with_layers(&w, KNOTTED, KNOTTED_LAYERS);
    let link = boundary_link(&embed(&pf).unwrap());
    assert_eq!(link.components.len(), 2);
    assert_eq!(linking_number(&link, 0, 1).unwrap().abs(), 4);
    let code = gauss_code(&link, 0).unwrap();
    assert!(fox3_nontrivial(&code), "{code}");
    assert_eq!(validity_verdict(&pf), Validity::Invalid { obstruction: Obstruction::Knotted { component: 0 } });
}

#[test]
fn simply_connected_is_valid() {
    for pf in all_foldings(&walked(STANDARD_NET, &[])) {
        assert_eq!(validity_verdict(&pf), Validity::Valid);
    }
}
