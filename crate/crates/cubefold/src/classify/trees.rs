use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use super::{search_witness, ClassifyError, Status, Theorem, Verdict};
use crate::enumerate::minimal_foldable_set;
use crate::grid::{canonical_form, is_tree_shaped, parse_polyomino, CellCoord, Dir, Polyomino};

const P_W: &str = "POLYOMINO v1\nrows: 4\ncols: 4\ngrid:\n...#\n...#\n..##\n###.\nslits:\n";

/// The polyomino turned so that it is at most as tall as it is wide.
fn lying(p: &Polyomino) -> Polyomino {
    if p.rows() > p.cols() {
        p.transformed(5)
    } else {
        p.clone()
    }
}

fn cell(p: &Polyomino, r: usize, c: usize) -> Option<usize> {
    p.index_of(CellCoord::new(r, c))
}

/// Components left after removing the strip `row`, columns `a..=b`, each with the
/// column where it hangs off the strip. `None` unless every component hangs off
/// by a single vertical edge.
fn attachments(p: &Polyomino, row: usize, a: usize, b: usize) -> Option<Vec<(usize, Vec<usize>)>> {
    let strip: Vec<usize> = (a..=b).map(|c| cell(p, row, c)).collect::<Option<_>>()?;
    if strip.windows(2).any(|w| p.glued(w[0], Dir::E) != Some(w[1])) {
        return None;
    }
    let in_strip: BTreeSet<usize> = strip.iter().copied().collect();
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] || in_strip.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut roots = Vec::new();
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            k += 1;
            for d in Dir::ALL {
                let Some(j) = p.glued(i, d) else { continue };
                if in_strip.contains(&j) {
                    roots.push((i, d));
                } else if !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
        }
        match roots.as_slice() {
            [(i, d)] if !d.is_horizontal() => out.push((p.cell(*i).col, comp)),
            _ => return None,
        }
    }
    Some(out)
}

/// Candidate strips as (row, first column, last column).
fn runs(p: &Polyomino, rows: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &r in rows {
        for a in 0..p.cols() {
            for b in a..p.cols() {
                out.push((r, a, b));
            }
        }
    }
    out
}

fn within(p: &Polyomino, comp: &[usize], col: usize) -> bool {
    comp.iter().all(|&i| p.cell(i).col.abs_diff(col) <= 1)
}

/// Class A: a horizontal strip whose attachments stay within one column of where they hang.
pub fn is_class_a(p: &Polyomino) -> Result<bool, ClassifyError> {
    let q = lying(p);
    if q.rows() != 2 {
        return Err(ClassifyError::WrongBoundingSize { expected: 2, rows: p.rows(), cols: p.cols() });
    }
    Ok(runs(&q, &[0, 1]).into_iter().any(|(r, a, b)| {
        attachments(&q, r, a, b).is_some_and(|att| att.iter().all(|(col, comp)| within(&q, comp, *col)))
    }))
}

/// Class B: a strip along the top or bottom row with exactly one attachment, which stays
/// within one column of where it hangs, avoids the strip row, and whose far-row square
/// above the hanging column is glued downwards whenever it is glued to both sides.
pub fn is_class_b(p: &Polyomino) -> Result<bool, ClassifyError> {
    let q = lying(p);
    if q.rows() != 3 {
        return Err(ClassifyError::WrongBoundingSize { expected: 3, rows: p.rows(), cols: p.cols() });
    }
    Ok(runs(&q, &[0, 2]).into_iter().any(|(r, a, b)| {
        let Some(att) = attachments(&q, r, a, b) else { return false };
        let [(col, comp)] = att.as_slice() else { return false };
        if !within(&q, comp, *col) || comp.iter().any(|&i| q.cell(i).row == r) {
            return false;
        }
        let far = 2 - r;
        let toward_middle = if far == 0 { Dir::S } else { Dir::N };
        match cell(&q, far, *col) {
            Some(i) if comp.contains(&i) => {
                let both_sides = q.glued(i, Dir::W).is_some() && q.glued(i, Dir::E).is_some();
                !both_sides || q.glued(i, toward_middle).is_some()
            }
            _ => true,
        }
    }))
}

pub fn is_p_w(p: &Polyomino) -> bool {
    static CANON: OnceLock<String> = OnceLock::new();
    let target = CANON.get_or_init(|| canonical_form(&parse_polyomino(P_W).unwrap()).to_text());
    p.rows().min(p.cols()) == 4 && p.rows().max(p.cols()) == 4 && canonical_form(p).to_text() == *target
}

/// Minimal foldable trees of bounding size 3 x 3 or 3 x 4, computed on first use.
pub fn minimal_set(bbox: (usize, usize)) -> &'static [Polyomino] {
    static SMALL: OnceLock<Vec<Polyomino>> = OnceLock::new();
    static LARGE: OnceLock<Vec<Polyomino>> = OnceLock::new();
    match (bbox.0.min(bbox.1), bbox.0.max(bbox.1)) {
        (3, 3) => SMALL.get_or_init(|| minimal_foldable_set((3, 3)).expect("3x3 family")),
        (3, 4) => LARGE.get_or_init(|| minimal_foldable_set((3, 4)).expect("3x4 family")),
        _ => &[],
    }
}

/// True if `q`, placed in the same box, uses only cells and glued edges of `p`.
fn sits_inside(q: &Polyomino, p: &Polyomino) -> bool {
    q.cells().iter().all(|&c| p.contains(c))
        && q.glued_edges().into_iter().all(|(a, b, _)| {
            let (x, y) = (p.index_of(q.cell(a)).unwrap(), p.index_of(q.cell(b)).unwrap());
            Dir::ALL.into_iter().any(|d| p.glued(x, d) == Some(y))
        })
}

fn contained_minimal(p: &Polyomino) -> Option<&'static Polyomino> {
    minimal_set(p.bounding_size()).iter().find(|q| {
        (0..8).any(|t| {
            let qt = q.transformed(t);
            qt.bounding_size() == p.bounding_size() && sits_inside(&qt, p)
        })
    })
}

fn tree_case(p: &Polyomino) -> (Theorem, Status, String) {
    let (h, w) = p.bounding_size();
    let (lo, hi) = (h.min(w), h.max(w));
    let size = format!("{lo}x{hi}");
    let not_if = |b: bool| if b { Status::NotFoldable } else { Status::Foldable };
    match (lo, hi) {
        (1, _) => (Theorem::Strip, Status::NotFoldable, format!("tree of bounding size {size}")),
        (2, 2..=3) => (Theorem::TreeTwoByThree, Status::NotFoldable, format!("tree of bounding size {size}")),
        (2, _) => {
            let a = is_class_a(p).unwrap();
            let what = if a { "in class A" } else { "not in class A" };
            (Theorem::TreeClassA, not_if(a), format!("tree of bounding size {size}, {what}"))
        }
        (3, 3..=4) => match contained_minimal(p) {
            Some(q) => (
                Theorem::TreeMinimalSet,
                Status::Foldable,
                format!("tree of bounding size {size} containing the minimal foldable tree\n{}", q.to_text()),
            ),
            None => (
                Theorem::TreeMinimalSet,
                Status::NotFoldable,
                format!("tree of bounding size {size} containing no minimal foldable tree"),
            ),
        },
        (3, _) => {
            let b = is_class_b(p).unwrap();
            let what = if b { "in class B" } else { "not in class B" };
            (Theorem::TreeClassB, not_if(b), format!("tree of bounding size {size}, {what}"))
        }
        (4, 4) => {
            let pw = is_p_w(p);
            let what = if pw { "equal to P_W" } else { "not P_W" };
            (Theorem::TreePW, not_if(pw), format!("tree of bounding size 4x4, {what}"))
        }
        _ => (Theorem::TreeLarge, Status::Foldable, format!("tree of bounding size {size}")),
    }
}

pub(super) fn tree_theorem_applies(p: &Polyomino, theorem: Theorem) -> Option<Status> {
    if !is_tree_shaped(p) {
        return None;
    }
    let (th, status, _) = tree_case(p);
    (th == theorem).then_some(status)
}

/// Verdict for a tree-shaped polyomino from its bounding size. Foldable verdicts carry a
/// witness folding when the search finds one before the deadline.
pub fn tree_dispatch(p: &Polyomino, deadline: Option<Instant>) -> Result<Verdict, ClassifyError> {
    if !is_tree_shaped(p) {
        return Err(ClassifyError::NotTreeShaped);
    }
    let (theorem, status, hypothesis) = tree_case(p);
    let v = Verdict::theorem(status, theorem, hypothesis);
    Ok(if status == Status::Foldable { v.with_witness(search_witness(p, deadline)) } else { v })
}
