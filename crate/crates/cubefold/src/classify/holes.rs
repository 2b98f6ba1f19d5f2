use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use super::{search_witness, ClassifyError, Status, Theorem, Verdict};
use crate::cube::{
    enumerate_consistent_mappings, is_trivial_for_hole, is_trivial_for_slit, mapping_key, transformed_mapping,
    EnumerateOptions, Quotient,
};
use crate::grid::{find_holes, parse_polyomino, CellCoord, Dir, Hole, HoleKind, Polyomino};
use crate::layers::PseudoFolding;

fn unit_cell(h: &Hole) -> Result<CellCoord, ClassifyError> {
    if h.kind != HoleKind::UnitSquare {
        return Err(ClassifyError::NotUnitSquareHole);
    }
    Ok(*h.missing_cells.iter().next().unwrap())
}

/// Two unit holes cooperate when they share a row (or column), or sit in adjacent ones,
/// with an odd number of columns (or rows) strictly between them.
pub fn holes_cooperate(h1: &Hole, h2: &Hole) -> Result<bool, ClassifyError> {
    let (a, b) = (unit_cell(h1)?, unit_cell(h2)?);
    let dr = a.row.abs_diff(b.row);
    let dc = a.col.abs_diff(b.col);
    let odd_gap = |d: usize| d >= 2 && (d - 1) % 2 == 1;
    Ok((dr <= 1 && odd_gap(dc)) || (dc <= 1 && odd_gap(dr)))
}

/// First cooperating pair among unit holes.
pub fn cooperating_pair(holes: &[Hole]) -> Option<(usize, usize)> {
    for i in 0..holes.len() {
        for j in i + 1..holes.len() {
            if holes_cooperate(&holes[i], &holes[j]).unwrap_or(false) {
                return Some((i, j));
            }
        }
    }
    None
}

fn support_polyomino(p: &Polyomino, h: &Hole) -> Polyomino {
    let r = &h.support;
    let cells: Vec<(i64, i64)> =
        p.cells().iter().filter(|c| r.contains(**c)).map(|c| (c.row as i64, c.col as i64)).collect();
    let cuts: Vec<((i64, i64), (i64, i64))> = p
        .cuts()
        .iter()
        .map(|c| c.cells())
        .filter(|(a, b)| r.contains(*a) && r.contains(*b))
        .map(|(a, b)| ((a.row as i64, a.col as i64), (b.row as i64, b.col as i64)))
        .collect();
    Polyomino::from_positions(&cells, &cuts).expect("support of a hole is a polyomino")
}

/// The square enclosed by a U-slit and the one square it stays glued to.
fn u_slit_inner(p: &Polyomino, h: &Hole) -> Option<(usize, usize)> {
    let mut touches: BTreeMap<CellCoord, usize> = BTreeMap::new();
    for cut in &h.cut_edges {
        let (a, b) = cut.cells();
        *touches.entry(a).or_default() += 1;
        *touches.entry(b).or_default() += 1;
    }
    let inner = touches.into_iter().find(|&(_, n)| n == 3)?.0;
    let i = p.index_of(inner)?;
    let j = Dir::ALL.into_iter().find_map(|d| p.glued(i, d))?;
    Some((i, j))
}

/// Classes of consistent mappings of the hole's support that could still matter: mappings
/// trivial for the hole are dropped, as are U-slit mappings putting the enclosed square
/// on the face of its neighbour. Classes are taken up to cube isometries and symmetries
/// of the support.
pub fn support_mapping_classes(p: &Polyomino, h: &Hole) -> usize {
    let s = support_polyomino(p, h);
    let sh = find_holes(&s);
    let Some(hole) = sh.first() else { return 0 };
    let syms: Vec<usize> = (0..8).filter(|&t| s.transformed(t) == s).collect();
    let inner = if hole.kind == HoleKind::USlit3 { u_slit_inner(&s, hole) } else { None };
    let all = enumerate_consistent_mappings(&s, EnumerateOptions { surjective_only: false, quotient: Quotient::None });
    let mut classes = BTreeSet::new();
    for m in &all {
        let trivial = match hole.kind {
            HoleKind::UnitSquare => is_trivial_for_hole(&s, m, hole).unwrap(),
            _ => is_trivial_for_slit(&s, m, hole),
        };
        if trivial || inner.is_some_and(|(i, j)| m.face(i) == m.face(j)) {
            continue;
        }
        let key = syms.iter().map(|&t| mapping_key(&transformed_mapping(&s, m, t), false)).min().unwrap();
        classes.insert(key);
    }
    classes.len()
}

#[derive(Clone, Debug)]
pub struct StoredCertificate {
    pub name: &'static str,
    pub folding: PseudoFolding,
}

const STORED: [(&str, &str); 6] = [
    ("3x5-same-row", include_str!("../../data/certificates/3x5-same-row.txt")),
    ("4x5-adjacent-rows", include_str!("../../data/certificates/4x5-adjacent-rows.txt")),
    ("4x5-same-row", include_str!("../../data/certificates/4x5-same-row.txt")),
    ("3x7-same-row", include_str!("../../data/certificates/3x7-same-row.txt")),
    ("4x6-adjacent-rows", include_str!("../../data/certificates/4x6-adjacent-rows.txt")),
    ("5x5-adjacent-columns", include_str!("../../data/certificates/5x5-adjacent-columns.txt")),
];

/// Splits a certificate file: polyomino text, a `FOLDING` line, then the pseudo-folding.
pub fn parse_certificate_file(text: &str) -> Result<PseudoFolding, String> {
    let (poly, folding) = text.split_once("FOLDING\n").ok_or("missing FOLDING separator")?;
    let p = parse_polyomino(poly).map_err(|e| e.to_string())?;
    PseudoFolding::from_text(&p, folding).map_err(|e| e.to_string())
}

pub fn format_certificate_file(pf: &PseudoFolding) -> String {
    format!("{}FOLDING\n{}", pf.polyomino.to_text(), pf.to_text())
}

/// Pseudo-foldings kept for a few cooperating two-hole rectangles.
pub fn stored_certificates() -> &'static [StoredCertificate] {
    static CERTS: OnceLock<Vec<StoredCertificate>> = OnceLock::new();
    CERTS.get_or_init(|| {
        STORED
            .iter()
            .map(|&(name, text)| StoredCertificate {
                name,
                folding: parse_certificate_file(text).unwrap_or_else(|e| panic!("certificate {name}: {e}")),
            })
            .collect()
    })
}

/// A stored pseudo-folding of `p`, moved onto `p` by a grid symmetry.
fn stored_folding_for(p: &Polyomino) -> Option<PseudoFolding> {
    stored_certificates().iter().find_map(|c| {
        (0..8).find(|&t| c.folding.polyomino.transformed(t) == *p).map(|t| c.folding.transformed(t))
    })
}

pub(super) fn classify_unit_holes(p: &Polyomino, holes: &[Hole], deadline: Option<Instant>) -> Verdict {
    match cooperating_pair(holes) {
        Some((i, j)) => {
            let (a, b) = (unit_cell(&holes[i]).unwrap(), unit_cell(&holes[j]).unwrap());
            let hypothesis = format!("rectangle with unit holes only; holes at {a} and {b} cooperate");
            let witness = stored_folding_for(p).or_else(|| search_witness(p, deadline));
            Verdict::theorem(Status::Foldable, Theorem::CooperatingUnitHoles, hypothesis).with_witness(witness)
        }
        None => Verdict::theorem(
            Status::NotFoldable,
            Theorem::CooperatingUnitHoles,
            format!("rectangle with {} unit holes, no two of them cooperate", holes.len()),
        ),
    }
}
