//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use cubefold::classify::{
    check_certificate, check_folding, classify, qualifying_vertices, simply_connected_plan, stored_certificates,
    support_mapping_classes, tree_dispatch, Certificate, Status, Theorem,
};
use cubefold::cube::{enumerate_consistent_mappings, is_consistent, is_surjective, CellState, ConsistentMapping, EnumerateOptions, Quotient};
use cubefold::enumerate::{cube_nets, enumerate_family, minimal_foldable_set, net_type_histogram, FamilySpec};
use cubefold::grid::{canonical_form, find_holes, CellCoord, Dir, HoleKind, Polyomino};
use cubefold::layers::{
    check_self_intersections, check_three_rules, count_layer_maps, execute_plan, find_layer_map, for_each_layer_map,
    stamp_fold_count, LayerMap, PseudoFolding, SearchLimits,
};
use cubefold::solve::{solve, SolveOptions, SolveOutcome};
use cubefold::topology::{boundary_link, embed, fox3_nontrivial, gauss_code, linking_number, validity_verdict, Validity};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

/// Outcome of one criterion: whether it holds and a short summary.
type Check = (bool, String);

fn nets() -> Check {
    let nets = cube_nets();
    let hist: BTreeMap<String, usize> =
        net_type_histogram(&nets).into_iter().map(|(t, n)| (t.name().to_string(), n)).collect();
    let want: BTreeMap<String, usize> =
        [("1-4-1", 6), ("2-3-1", 3), ("2-2-2", 1), ("3-3", 1)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let distinct: BTreeSet<String> = nets.iter().map(|n| canonical_form(&n.polyomino).to_text()).collect();
    (nets.len() == 11 && distinct.len() == 11 && hist == want, format!("{} nets, {hist:?}", nets.len()))
}

fn stamps() -> Check {
    let want = [1, 2, 6, 16, 50, 144, 462, 1392, 4536, 14060];
    let got: Vec<u64> = (1..=10).map(stamp_fold_count).collect();
    (got == want, format!("{got:?}"))
}

fn tree_counts() -> Check {
    let a = enumerate_family(FamilySpec::tree_with_slits(3, 3)).unwrap().len();
    let b = enumerate_family(FamilySpec::tree_with_slits(3, 4)).unwrap().len();
    (a == 124 && b == 3942, format!("3x3: {a}, 3x4: {b} (trees with slits)"))
}

fn folds(p: &Polyomino) -> bool {
    solve(p, SolveOptions::default()).is_folded()
}

fn minimal_sets() -> Check {
    let small = minimal_foldable_set((3, 3)).unwrap();
    let large = minimal_foldable_set((3, 4)).unwrap();
    // Each member folds and loses that property, or its bounding size, when a leaf goes.
    let minimal = |p: &Polyomino| {
        let (h, w) = p.bounding_size();
        folds(p)
            && (0..p.len()).filter(|&i| p.degree(i) == 1).all(|i| {
                let q = p.without_cell(i).unwrap();
                let (a, b) = q.bounding_size();
                (a.min(b), a.max(b)) != (h.min(w), h.max(w)) || !folds(&q)
            })
    };
    let checked = small.par_iter().chain(large.par_iter()).all(minimal);
    let ok = small.len() == 7 && large.len() == 45 && checked;
    (ok, format!("3x3: {} (want 7), 3x4: {} (want 45), members minimal under the solver: {checked}", small.len(), large.len()))
}

fn layer_counts() -> Check {
    let lim = SearchLimits::default();
    let mut got = Vec::new();
    for (m, cuts) in [(BAD_HOLE, &[][..]), (FAN, FAN_CUTS), (TWISTED, &[]), (LONG_FRAME, &[])] {
        let w = walked(m, cuts);
        got.push(count_layer_maps(&w.polyomino, &w.mapping, lim).unwrap());
    }
    (got == [0, 0, 16, 60], format!("{got:?}"))
}

fn all_foldings(w: &Walked) -> Vec<PseudoFolding> {
    let mut out = Vec::new();
    for_each_layer_map(&w.polyomino, &w.mapping, SearchLimits::default(), |lm| {
        out.push(PseudoFolding::new(w.polyomino.clone(), w.mapping.clone(), lm.clone()).unwrap());
        std::ops::ControlFlow::Continue(())
    })
    .unwrap();
    out
}

fn topology() -> Check {
    let twisted = all_foldings(&walked(TWISTED, &[]));
    let zero = twisted
        .iter()
        .filter(|pf| linking_number(&boundary_link(&embed(pf).unwrap()), 0, 1).unwrap() == 0)
        .count();
    let long = all_foldings(&walked(LONG_FRAME, &[]));
    let invalid = long.iter().filter(|pf| matches!(validity_verdict(pf), Validity::Invalid { .. })).count();
    let w = walked(KNOTTED, KNOTTED_CUTS);
    let knot = with_layers(&w, KNOTTED, KNOTTED_LAYERS);
    let clean = check_self_intersections(&knot).is_empty();
    let trefoil = fox3_nontrivial(&gauss_code(&boundary_link(&embed(&knot).unwrap()), 0).unwrap());
    let ok = twisted.len() == 16 && zero == 4 && long.len() == 60 && invalid == 60 && clean && trefoil;
    (
        ok,
        format!(
            "twisted frame lk=0: {zero}/{}, long frame invalid: {invalid}/{}, knotted map clean: {clean}, 3-colourable: {trefoil}",
            twisted.len(),
            long.len()
        ),
    )
}

fn one_hole() -> Check {
    let five = ["#####"; 5];
    let six = ["#####"; 6];
    let cases: [(&str, &[&str], &[&str], HoleKind); 5] = [
        ("unit", &["#####", "#####", "##.##", "#####", "#####"], &[], HoleKind::UnitSquare),
        ("slit", &five, &["V 2 1"], HoleKind::Slit1),
        ("I-slit", &five, &["V 1 1", "V 2 1"], HoleKind::ISlit2),
        ("L-slit", &five, &["V 1 1", "H 1 2"], HoleKind::LSlit2),
        ("U-slit", &six, &["V 2 1", "H 2 2", "V 2 2"], HoleKind::USlit3),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, rows, slits, kind) in cases {
        let p = poly(rows, slits);
        let holes = find_holes(&p);
        ok &= holes.len() == 1 && holes[0].kind == kind;
        let classes = support_mapping_classes(&p, &holes[0]);
        match kind {
            HoleKind::ISlit2 => ok &= classes == 6,
            HoleKind::USlit3 => ok &= classes == 7,
            _ => {}
        }
        let opts = EnumerateOptions { surjective_only: true, quotient: Quotient::None };
        let surjective = enumerate_consistent_mappings(&p, opts).len();
        let exhausted = matches!(solve(&p, SolveOptions::default()), SolveOutcome::Exhausted(_));
        let verdict = classify(&p, Duration::from_secs(60)).verdict;
        ok &= surjective == 0 && exhausted && verdict == Status::NotFoldable;
        parts.push(format!("{name}: {classes} support classes, {surjective} surjective, {verdict}"));
    }
    (ok, parts.join("; "))
}

fn rect_with_holes(rows: usize, cols: usize, holes: &[(usize, usize)]) -> Polyomino {
    let grid: Vec<String> = (0..rows)
        .map(|r| (0..cols).map(|c| if holes.contains(&(r, c)) { '.' } else { '#' }).collect())
        .collect();
    let refs: Vec<&str> = grid.iter().map(|s| s.as_str()).collect();
    poly(&refs, &[])
}

/// Same or adjacent rows with an odd number of columns strictly between, or the transpose.
fn cooperate(a: (usize, usize), b: (usize, usize)) -> bool {
    let (dr, dc) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
    let between_odd = |d: usize| d >= 2 && (d - 1) % 2 == 1;
    (dr <= 1 && between_odd(dc)) || (dc <= 1 && between_odd(dr))
}

fn two_holes() -> Check {
    let mut cases = Vec::new();
    for rows in 3..=7 {
        for cols in 3..=7 {
            if !((rows <= 6 && cols <= 7) || (rows <= 7 && cols <= 6)) {
                continue;
            }
            let inner: Vec<(usize, usize)> = (1..rows - 1).flat_map(|r| (1..cols - 1).map(move |c| (r, c))).collect();
            for i in 0..inner.len() {
                for j in i + 1..inner.len() {
                    cases.push((rows, cols, inner[i], inner[j]));
                }
            }
        }
    }
    let results: Vec<Option<bool>> = cases
        .par_iter()
        .map(|&(rows, cols, a, b)| {
            let p = rect_with_holes(rows, cols, &[a, b]);
            let holes = find_holes(&p);
            if holes.len() != 2 || holes.iter().any(|h| h.kind != HoleKind::UnitSquare) {
                return None;
            }
            let v = classify(&p, Duration::from_millis(1));
            let theorem = matches!(v.certificate, Certificate::Theorem { theorem: Theorem::CooperatingUnitHoles, .. });
            let want = if cooperate(a, b) { Status::Foldable } else { Status::NotFoldable };
            Some(theorem && v.verdict == want)
        })
        .collect();
    let placements = results.iter().flatten().count();
    let agree = results.iter().flatten().filter(|&&x| x).count();
    let certs = stored_certificates();
    let replayed = certs
        .iter()
        .filter(|c| {
            let p = &c.folding.polyomino;
            let pair: Vec<(usize, usize)> =
                find_holes(p).iter().map(|h| h.missing_cells.iter().next().map(|m| (m.row, m.col)).unwrap()).collect();
            pair.len() == 2 && cooperate(pair[0], pair[1]) && check_folding(p, &c.folding.to_text()).is_ok()
        })
        .count();
    (
        agree == placements && placements > 0 && replayed >= 5,
        format!("{agree}/{placements} placements agree, {replayed} stored certificates replay"),
    )
}

fn tree_oracle() -> Check {
    let mut family = Vec::new();
    for h in 1..=3 {
        for w in h..=4 {
            family.extend(enumerate_family(FamilySpec::tree(h, w)).unwrap());
        }
    }
    let four = enumerate_family(FamilySpec::tree(4, 4)).unwrap();
    family.extend(four.iter().cloned());
    let mismatches: Vec<String> = family
        .par_iter()
        .filter_map(|p| {
            let solver = match solve(p, SolveOptions::default()) {
                SolveOutcome::Folded(_) => Status::Foldable,
                SolveOutcome::Exhausted(_) => Status::NotFoldable,
                SolveOutcome::Undecided { .. } => Status::Unknown,
            };
            let dispatch = tree_dispatch(p, None).unwrap().verdict;
            (solver != dispatch).then(|| p.to_text())
        })
        .collect();
    let negatives: Vec<&Polyomino> = four.iter().filter(|p| !folds(p)).collect();
    let p_w_only = negatives.len() == 1 && canonical_form(negatives[0]) == canonical_form(&p_w());
    (
        mismatches.is_empty() && p_w_only,
        format!("{} trees, {} mismatches, 4x4 negatives: {}", family.len(), mismatches.len(), negatives.len()),
    )
}

fn p_w_family() -> Check {
    let base = p_w();
    let cells: BTreeSet<(i64, i64)> = base.cells().iter().map(|c| (c.row as i64, c.col as i64)).collect();
    let mut extensions = BTreeMap::new();
    for r in -1..=4i64 {
        for c in -1..=4i64 {
            if cells.contains(&(r, c)) {
                continue;
            }
            let nbrs: Vec<(i64, i64)> =
                [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)].into_iter().filter(|n| cells.contains(n)).collect();
            for &g in &nbrs {
                let positions: Vec<(i64, i64)> = cells.iter().copied().chain([(r, c)]).collect();
                let cuts: Vec<((i64, i64), (i64, i64))> =
                    nbrs.iter().filter(|&&n| n != g).map(|&n| ((r, c), n)).collect();
                let q = Polyomino::from_positions(&positions, &cuts).unwrap();
                extensions.insert(canonical_form(&q).to_text(), q);
            }
        }
    }
    let base_ok = classify(&base, Duration::from_secs(60)).verdict == Status::NotFoldable;
    let good = extensions
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .filter(|q| {
            let v = classify(q, Duration::from_secs(60));
            let replayable = match &v.certificate {
                Certificate::Theorem { witness, .. } => witness.is_some(),
                Certificate::PseudoFolding { .. } | Certificate::Plan { .. } => true,
                Certificate::Obstruction { .. } => false,
            };
            v.verdict == Status::Foldable && replayable && check_certificate(q, &v).is_ok()
        })
        .count();
    (
        base_ok && good == extensions.len(),
        format!("P_W not foldable: {base_ok}, {good}/{} leaf extensions foldable with replayable certificates", extensions.len()),
    )
}

fn plan_holds(p: &Polyomino) -> bool {
    let Some((plan, _)) = simply_connected_plan(p) else { return false };
    let Ok(pf) = execute_plan(p, &plan) else { return false };
    is_surjective(&pf.mapping) && check_self_intersections(&pf).is_empty()
}

fn simply_connected() -> Check {
    let example = plan_holds(&corner_example());
    let mut rng = StdRng::seed_from_u64(11);
    let mut shapes = Vec::new();
    while shapes.len() < 100 {
        let p = random_simply_connected(&mut rng, 8, 9, 0.55);
        if !qualifying_vertices(&p).is_empty() {
            shapes.push(p);
        }
    }
    let good = shapes.par_iter().filter(|p| plan_holds(p)).count();
    (example && good == 100, format!("example: {example}, random: {good}/100"))
}

fn build(cells: &[(i64, i64)], cuts: &[((i64, i64), (i64, i64))], states: &BTreeMap<(i64, i64), CellState>) -> (Polyomino, ConsistentMapping) {
    let p = Polyomino::from_positions(cells, cuts).unwrap();
    let r0 = cells.iter().map(|c| c.0).min().unwrap();
    let c0 = cells.iter().map(|c| c.1).min().unwrap();
    let mut out = vec![CellState::ORIGIN; p.len()];
    for (&(r, c), &s) in states {
        out[p.index_of(CellCoord::new((r - r0) as usize, (c - c0) as usize)).unwrap()] = s;
    }
    (p, ConsistentMapping { states: out })
}

/// A random polyomino of at most 12 cells, a random consistent mapping and a layer map that
/// is either uniformly random or found by search.
fn random_pseudo_folding(seed: u64) -> PseudoFolding {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(2..=12);
    let mut cells = vec![(0i64, 0i64)];
    let mut states = BTreeMap::from([((0i64, 0i64), CellState::ORIGIN)]);
    let mut tree = BTreeSet::new();
    while cells.len() < n {
        let a = cells[rng.gen_range(0..cells.len())];
        let d = Dir::ALL[rng.gen_range(0..4)];
        let (dr, dc) = d.delta();
        let b = (a.0 + dr as i64, a.1 + dc as i64);
        if states.contains_key(&b) {
            continue;
        }
        let s = if rng.gen_bool(0.5) { states[&a].roll(d) } else { states[&a].flip(d) };
        states.insert(b, s);
        cells.push(b);
        tree.insert((a.min(b), a.max(b)));
    }
    let mut cuts: Vec<((i64, i64), (i64, i64))> = Vec::new();
    for &a in &cells {
        for b in [(a.0 + 1, a.1), (a.0, a.1 + 1)] {
            if states.contains_key(&b) && !tree.contains(&(a, b)) {
                cuts.push((a, b));
            }
        }
    }
    cuts.shuffle(&mut rng);
    let mut k = 0;
    while k < cuts.len() {
        let mut fewer = cuts.clone();
        fewer.remove(k);
        let (p, m) = build(&cells, &fewer, &states);
        if is_consistent(&p, &m) {
            cuts = fewer;
        } else {
            k += 1;
        }
    }
    let (p, m) = build(&cells, &cuts, &states);
    let searched = if rng.gen_bool(0.5) { find_layer_map(&p, &m, SearchLimits { max_nodes: 20_000 }).layer_map } else { None };
    let layers = searched.unwrap_or_else(|| {
        let mut l = vec![0u32; p.len()];
        for f in 1..=6u8 {
            let mut on: Vec<usize> = (0..p.len()).filter(|&i| m.face(i) == f).collect();
            on.shuffle(&mut rng);
            for (k, &i) in on.iter().enumerate() {
                l[i] = k as u32 + 1;
            }
        }
        LayerMap { layers: l }
    });
    PseudoFolding::new(p, m, layers).unwrap()
}

fn constraint_model() -> Check {
    let stats: Vec<(bool, bool, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let pf = random_pseudo_folding(seed);
            let chords_ok = check_self_intersections(&pf).is_empty();
            let rules_ok = check_three_rules(&pf).is_empty();
            let embed_ok = match embed(&pf) {
                Ok(es) => es.is_disjoint(),
                Err(_) => false,
            };
            (chords_ok, rules_ok, embed_ok)
        })
        .collect();
    let passing = stats.iter().filter(|s| s.0).count();
    let rules_agree = stats.iter().filter(|s| s.0 == s.1).count();
    let embed_agree = stats.iter().filter(|s| s.0 == s.2).count();
    (
        rules_agree == stats.len() && embed_agree == stats.len(),
        format!("{passing} without self-intersections; three rules agree {rules_agree}/10000, embedding agrees {embed_agree}/10000"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 12] = [
        ("cube nets", Duration::from_secs(1), nets),
        ("stamp foldings", Duration::from_secs(30), stamps),
        ("tree enumeration", Duration::from_secs(300), tree_counts),
        ("minimal foldable sets", Duration::from_secs(900), minimal_sets),
        ("layer-map counts", Duration::from_secs(240), layer_counts),
        ("topology obstructions", Duration::from_secs(120), topology),
        ("one simple hole", Duration::from_secs(120), one_hole),
        ("two unit holes", Duration::from_secs(600), two_holes),
        ("tree oracle equivalence", Duration::from_secs(1800), tree_oracle),
        ("P_W family", Duration::from_secs(60), p_w_family),
        ("simply connected plans", Duration::from_secs(300), simply_connected),
        ("constraint model equivalence", Duration::from_secs(600), constraint_model),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| (false, "panicked".into()));
        let took = start.elapsed();
        let pass = ok && took <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
