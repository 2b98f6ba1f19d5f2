mod common;

use std::time::Duration;

use common::*;
use cubefold::classify::*;
use cubefold::grid::{find_holes, parse_polyomino, Polyomino};
use cubefold::solve::{solve, SolveOptions, SolveOutcome};

fn rect_with_holes(rows: usize, cols: usize, holes: &[(usize, usize)]) -> Polyomino {
    let grid: Vec<String> = (0..rows)
        .map(|r| (0..cols).map(|c| if holes.contains(&(r, c)) { '.' } else { '#' }).collect())
        .collect();
    let refs: Vec<&str> = grid.iter().map(|s| s.as_str()).collect();
    poly(&refs, &[])
}

/// Instances behind the files in data/certificates.
const CERTIFIED: [(&str, usize, usize, [(usize, usize); 2]); 6] = [
    ("3x5-same-row", 3, 5, [(1, 1), (1, 3)]),
    ("4x5-adjacent-rows", 4, 5, [(1, 1), (2, 3)]),
    ("4x5-same-row", 4, 5, [(1, 1), (1, 3)]),
    ("3x7-same-row", 3, 7, [(1, 1), (1, 5)]),
    ("4x6-adjacent-rows", 4, 6, [(1, 2), (2, 4)]),
    ("5x5-adjacent-columns", 5, 5, [(1, 1), (3, 2)]),
];

#[test]
#[ignore = "rewrites data/certificates"]
fn regenerate_two_hole_certificates() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/certificates");
    for (name, rows, cols, holes) in CERTIFIED {
        let p = rect_with_holes(rows, cols, &holes);
        let pf = match solve(&p, SolveOptions::default()) {
            SolveOutcome::Undecided { candidate: Some(pf), .. } => pf,
            other => panic!("{name}: no candidate ({})", other.is_folded()),
        };
        std::fs::write(dir.join(format!("{name}.txt")), format_certificate_file(&pf)).unwrap();
    }
}

fn verdict(p: &Polyomino) -> Verdict {
    let v = classify(p, Duration::from_secs(60));
    check_certificate(p, &v).unwrap_or_else(|e| panic!("certificate does not replay: {e}"));
    v
}

#[test]
fn stored_certificates_replay() {
    for (name, rows, cols, holes) in CERTIFIED {
        let p = rect_with_holes(rows, cols, &holes);
        let c = stored_certificates().iter().find(|c| c.name == name).unwrap();
        assert_eq!(c.folding.polyomino, p, "{name}");
        check_folding(&p, &c.folding.to_text()).unwrap();
        let v = verdict(&p.transformed(3));
        assert_eq!(v.verdict, Status::Foldable);
    }
}

#[test]
fn cooperation_examples() {
    let holes = |cells: &[(usize, usize)], rows, cols| find_holes(&rect_with_holes(rows, cols, cells));
    let same_row = holes(&[(1, 2), (1, 4)], 3, 7);
    assert!(holes_cooperate(&same_row[0], &same_row[1]).unwrap());
    let adjacent = holes(&[(1, 1), (2, 3)], 4, 5);
    assert!(holes_cooperate(&adjacent[0], &adjacent[1]).unwrap());
    let even = holes(&[(1, 2), (1, 5)], 3, 7);
    assert!(!holes_cooperate(&even[0], &even[1]).unwrap());
    let slit = find_holes(&poly(&["###", "###", "###"], &["V 1 0"]));
    assert_eq!(holes_cooperate(&slit[0], &same_row[0]), Err(ClassifyError::NotUnitSquareHole));
}

#[test]
fn hole_theorems() {
    let v = verdict(&rect_with_holes(5, 5, &[(2, 2)]));
    assert_eq!(v.verdict, Status::NotFoldable);
    let v = verdict(&rect_with_holes(3, 5, &[(1, 1), (1, 3)]));
    assert_eq!(v.verdict, Status::Foldable);
    assert!(matches!(v.certificate, Certificate::Theorem { witness: Some(_), .. }));
    let v = verdict(&rect_with_holes(3, 6, &[(1, 1), (1, 4)]));
    assert_eq!(v.verdict, Status::NotFoldable);
}

#[test]
fn class_a_examples() {
    assert!(is_class_a(&poly(&["..#..", "#####"], &[])).unwrap());
    assert!(is_class_a(&poly(&["#...", "####"], &[])).unwrap());
    assert!(!is_class_a(&poly(&["###..", "..###"], &[])).unwrap());
    assert!(matches!(is_class_a(&Polyomino::rectangle(3, 3)), Err(ClassifyError::WrongBoundingSize { .. })));
}

#[test]
fn class_b_examples() {
    assert!(is_class_b(&poly(&["..#...", "..#...", "######"], &[])).unwrap());
    // The far-row centre square is glued left and right but not down.
    let bad = poly(&[".###..", ".##...", "######"], &["H 1 1", "H 0 2"]);
    assert!(!is_class_b(&bad).unwrap());
    let good = poly(&[".###..", ".##...", "######"], &["H 1 1", "V 0 1"]);
    assert!(is_class_b(&good).unwrap());
    assert!(!is_class_b(&poly(&["#...#.", "#...#.", "######"], &[])).unwrap());
}

fn solver_folds(p: &Polyomino) -> bool {
    match solve(p, SolveOptions::default()) {
        SolveOutcome::Folded(_) => true,
        SolveOutcome::Exhausted(_) => false,
        SolveOutcome::Undecided { .. } => panic!("search limit"),
    }
}

#[test]
fn class_a_matches_solver() {
    use cubefold::enumerate::{enumerate_family, FamilySpec};
    for n in 4..=6 {
        for p in enumerate_family(FamilySpec::tree(2, n)).unwrap() {
            assert_eq!(!is_class_a(&p).unwrap(), solver_folds(&p), "\n{}", p.to_text());
        }
    }
}

#[test]
fn class_b_matches_solver() {
    use cubefold::enumerate::{enumerate_family, FamilySpec};
    use rayon::prelude::*;
    let family = enumerate_family(FamilySpec::tree(3, 5)).unwrap();
    let bad: Vec<String> = family
        .par_iter()
        .filter(|p| is_class_b(p).unwrap() == solver_folds(p))
        .map(|p| p.to_text())
        .collect();
    assert!(bad.is_empty(), "{} of {} disagree, e.g.\n{}", bad.len(), family.len(), bad[0]);
}

#[test]
fn p_w_and_trees() {
    let v = verdict(&p_w());
    assert_eq!(v.verdict, Status::NotFoldable);
    assert!(matches!(v.certificate, Certificate::Theorem { theorem: Theorem::TreePW, .. }));
    assert_eq!(verdict(&poly(&["##....", ".#####"], &[])).verdict, Status::NotFoldable);
    let v = verdict(&poly(&["###...", "..####"], &[]));
    assert_eq!(v.verdict, Status::Foldable);
    assert_eq!(verdict(&poly(&["###", ".#."], &[])).verdict, Status::NotFoldable);
}

#[test]
fn corner_example_vertices() {
    let p = corner_example();
    assert_eq!(valid_corners(&p, (3, 3)).unwrap(), CornerSet::from([Corner::TL, Corner::BL]));
    assert_eq!(valid_corners(&p, (2, 5)).unwrap(), CornerSet::from([Corner::TR]));
    assert_eq!(valid_corners(&p, (0, 1)), Err(ClassifyError::VertexOnBoundingBox));
    let (plan, pf) = simply_connected_plan(&p).expect("qualifying vertex");
    assert!(cubefold::cube::is_surjective(&pf.mapping));
    let v = verdict(&p);
    assert_eq!(v.verdict, Status::Foldable);
    println!("{plan}");
}

#[test]
fn rectangle_has_no_plan() {
    assert!(simply_connected_plan(&Polyomino::rectangle(7, 7)).is_none());
}

#[test]
fn verdict_json_shape() {
    let v = classify(&p_w(), Duration::from_secs(5));
    let json: serde_json::Value = serde_json::to_value(&v).unwrap();
    assert_eq!(json["verdict"], "NOT_FOLDABLE");
    assert_eq!(json["certificate"]["kind"], "theorem");
    assert_eq!(json["budget_exhausted"], false);
    let _ = parse_polyomino;
}

#[test]
fn random_qualifying_shapes_have_plans() {
    use rand::{rngs::StdRng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    let mut failed = Vec::new();
    while checked < 300 {
        let p = random_simply_connected(&mut rng, 8, 9, 0.55);
        if qualifying_vertices(&p).is_empty() {
            continue;
        }
        checked += 1;
        if simply_connected_plan(&p).is_none() {
            failed.push(p.to_text());
        }
    }
    assert!(failed.is_empty(), "{} failures, e.g.\n{}", failed.len(), failed[0]);
}
