use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::cube::is_surjective;
use crate::grid::{boundary_components, dihedral_dims, dihedral_point, CellCoord, CutOrientation, Polyomino};
use crate::layers::{check_self_intersections, execute_plan, FoldLine, FoldingPlan, PlanSide, PlanStep, PseudoFolding, Silhouette};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Corner {
    TL,
    TR,
    BL,
    BR,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::TL, Corner::TR, Corner::BL, Corner::BR];

    /// Lattice point of the corner for a `rows` x `cols` box.
    pub fn point(self, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            Corner::TL => (0, 0),
            Corner::TR => (0, cols),
            Corner::BL => (rows, 0),
            Corner::BR => (rows, cols),
        }
    }

    fn at(v: (usize, usize), rows: usize, cols: usize) -> Option<Corner> {
        Corner::ALL.into_iter().find(|c| c.point(rows, cols) == v)
    }
}

pub type CornerSet = BTreeSet<Corner>;

fn on_box(v: (usize, usize), rows: usize, cols: usize) -> bool {
    v.0 == 0 || v.1 == 0 || v.0 == rows || v.1 == cols
}

/// Nearest corner counterclockwise (on the page) from a point of the box.
fn corner_before(v: (usize, usize), rows: usize, cols: usize) -> Corner {
    if let Some(c) = Corner::at(v, rows, cols) {
        return c;
    }
    if v.0 == 0 {
        Corner::TL
    } else if v.1 == 0 {
        Corner::BL
    } else if v.0 == rows {
        Corner::BR
    } else {
        Corner::TR
    }
}

/// Nearest corner clockwise (on the page) from a point of the box.
fn corner_after(v: (usize, usize), rows: usize, cols: usize) -> Corner {
    if let Some(c) = Corner::at(v, rows, cols) {
        return c;
    }
    if v.0 == 0 {
        Corner::TR
    } else if v.1 == cols {
        Corner::BR
    } else if v.0 == rows {
        Corner::BL
    } else {
        Corner::TL
    }
}

/// Corners reached by following the outer boundary from lattice vertex `v` both ways
/// to the bounding box. A vertex visited twice by the boundary collects both visits.
pub fn valid_corners(p: &Polyomino, v: (usize, usize)) -> Result<CornerSet, ClassifyError> {
    let (rows, cols) = (p.rows(), p.cols());
    if on_box(v, rows, cols) {
        return Err(ClassifyError::VertexOnBoundingBox);
    }
    let outer = &boundary_components(p)[0].vertices;
    let n = outer.len();
    let mut out = CornerSet::new();
    for k in (0..n).filter(|&k| outer[k] == v) {
        let back = (1..n).map(|d| outer[(k + n - d) % n]).find(|&u| on_box(u, rows, cols)).unwrap();
        let fwd = (1..n).map(|d| outer[(k + d) % n]).find(|&u| on_box(u, rows, cols)).unwrap();
        out.insert(corner_after(back, rows, cols));
        out.insert(corner_before(fwd, rows, cols));
    }
    if out.is_empty() {
        return Err(ClassifyError::NotBoundaryVertex);
    }
    Ok(out)
}

/// Rolls every original cell of `cells` across `line`, one glued piece at a time, in an
/// order that keeps each moving piece on top of its stacks.
fn roll_pieces(
    q: &Polyomino,
    sil: &mut Silhouette,
    steps: &mut Vec<PlanStep>,
    line: FoldLine,
    side: PlanSide,
    mut cells: Vec<usize>,
) -> Option<()> {
    while !cells.is_empty() {
        let mut progressed = false;
        for k in 0..cells.len() {
            let only = q.cell(cells[k]);
            let mut next = sil.clone();
            if next.roll(q, line, side, Some(only)).is_ok() {
                cells.retain(|&i| next.position[i] == sil.position[i]);
                *sil = next;
                steps.push(PlanStep::Roll { line, side, only: Some(only) });
                progressed = true;
                break;
            }
        }
        if !progressed {
            return None;
        }
    }
    Some(())
}

/// Positions of the silhouette reachable from `start` without entering `avoid`.
fn region(q: &Polyomino, sil: &Silhouette, start: (i64, i64), avoid: (i64, i64)) -> BTreeSet<(i64, i64)> {
    let mut spanned = BTreeSet::new();
    for (a, b, _) in q.glued_edges() {
        let (x, y) = (sil.position[a], sil.position[b]);
        spanned.insert((x, y));
        spanned.insert((y, x));
    }
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for y in [(x.0 - 1, x.1), (x.0 + 1, x.1), (x.0, x.1 - 1), (x.0, x.1 + 1)] {
            if y != avoid && spanned.contains(&(x, y)) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Plan for `q` with the vertex at lattice point `v` and its valid corner at the top left.
fn top_left_plan(q: &Polyomino, (vr, vc): (usize, usize)) -> Option<FoldingPlan> {
    let (rows, cols) = (q.rows(), q.cols());
    if vr >= rows || vc >= cols {
        return None;
    }
    let mut sil = Silhouette::flat(q);
    let mut steps = Vec::new();
    let h = |index: usize| FoldLine { orientation: CutOrientation::H, index: index as i64 };
    let v = |index: usize| FoldLine { orientation: CutOrientation::V, index: index as i64 };
    for k in (vr + 1..rows).rev() {
        sil.roll(q, h(k), PlanSide::Below, None).ok()?;
        steps.push(PlanStep::Roll { line: h(k), side: PlanSide::Below, only: None });
    }
    for k in (vc + 1..cols).rev() {
        sil.roll(q, v(k), PlanSide::Right, None).ok()?;
        steps.push(PlanStep::Roll { line: v(k), side: PlanSide::Right, only: None });
    }
    let s = (vr as i64, vc as i64);
    let (left_start, up_start) = ((s.0, s.1 - 1), (s.0 - 1, s.1));
    if !sil.stacks.contains_key(&s) || !sil.stacks.contains_key(&left_start) || !sil.stacks.contains_key(&up_start) {
        return None;
    }
    let left = region(q, &sil, left_start, s);
    if left.contains(&up_start) {
        return None;
    }
    let up = region(q, &sil, up_start, s);
    let left_cells: Vec<usize> = (0..q.len()).filter(|&i| left.contains(&sil.position[i])).collect();
    let up_cells: Vec<usize> = (0..q.len()).filter(|&i| up.contains(&sil.position[i])).collect();
    for k in 1..=vr {
        let moving: Vec<usize> = left_cells.iter().copied().filter(|&i| sil.position[i].0 < k as i64).collect();
        roll_pieces(q, &mut sil, &mut steps, h(k), PlanSide::Above, moving)?;
    }
    for k in 1..=vc {
        let moving: Vec<usize> = up_cells.iter().copied().filter(|&i| sil.position[i].1 < k as i64).collect();
        roll_pieces(q, &mut sil, &mut steps, v(k), PlanSide::Left, moving)?;
    }
    steps.push(PlanStep::Wrap);
    Some(FoldingPlan { steps })
}

/// Rewrites a plan for `p.transformed(t)` as a plan for `p`.
fn untransform_plan(p: &Polyomino, t: usize, plan: &FoldingPlan) -> FoldingPlan {
    let (rows, cols) = (p.rows(), p.cols());
    let (qr, qc) = dihedral_dims(t, rows, cols);
    let u = (0..8)
        .find(|&u| {
            [(0, 0), (0, 1), (1, 0)].iter().all(|&(r, c)| {
                let (a, b) = dihedral_point(t, rows + 1, cols + 1, r, c);
                dihedral_point(u, qr + 1, qc + 1, a, b) == (r, c)
            })
        })
        .unwrap();
    let back_cell = |r: usize, c: usize| {
        let (a, b) = dihedral_point(u, qr, qc, r, c);
        CellCoord::new(a, b)
    };
    let steps = plan
        .steps
        .iter()
        .map(|step| match *step {
            PlanStep::Wrap => PlanStep::Wrap,
            PlanStep::Roll { line, side, only } => {
                let k = line.index as usize;
                let (a, b, rep) = match side {
                    PlanSide::Above => ((k, 0), (k, 1), (k - 1, 0)),
                    PlanSide::Below => ((k, 0), (k, 1), (k, 0)),
                    PlanSide::Left => ((0, k), (1, k), (0, k - 1)),
                    PlanSide::Right => ((0, k), (1, k), (0, k)),
                };
                let a = dihedral_point(u, qr + 1, qc + 1, a.0, a.1);
                let b = dihedral_point(u, qr + 1, qc + 1, b.0, b.1);
                let rep = back_cell(rep.0, rep.1);
                let (line, side) = if a.0 == b.0 {
                    let side = if rep.row < a.0 { PlanSide::Above } else { PlanSide::Below };
                    (FoldLine { orientation: CutOrientation::H, index: a.0 as i64 }, side)
                } else {
                    let side = if rep.col < a.1 { PlanSide::Left } else { PlanSide::Right };
                    (FoldLine { orientation: CutOrientation::V, index: a.1 as i64 }, side)
                };
                PlanStep::Roll { line, side, only: only.map(|c| back_cell(c.row, c.col)) }
            }
        })
        .collect();
    FoldingPlan { steps }
}

/// Boundary vertices off the box paired with each valid corner at horizontal and
/// vertical distance at least 3.
pub fn qualifying_vertices(p: &Polyomino) -> Vec<((usize, usize), Corner)> {
    let (rows, cols) = (p.rows(), p.cols());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &v in &boundary_components(p)[0].vertices {
        if on_box(v, rows, cols) || !seen.insert(v) {
            continue;
        }
        for corner in valid_corners(p, v).unwrap() {
            let c = corner.point(rows, cols);
            if v.0.abs_diff(c.0) >= 3 && v.1.abs_diff(c.1) >= 3 {
                out.push((v, corner));
            }
        }
    }
    out
}

/// Plan for a qualifying vertex: roll the rows below and the columns beyond it onto it,
/// roll the two remaining arms onto its row and column, then wrap. Returns the first
/// plan whose execution is surjective and free of self-intersections.
pub fn simply_connected_plan(p: &Polyomino) -> Option<(FoldingPlan, PseudoFolding)> {
    let (rows, cols) = (p.rows(), p.cols());
    for (v, corner) in qualifying_vertices(p) {
        let c = corner.point(rows, cols);
        let t = (0..8).find(|&t| dihedral_point(t, rows + 1, cols + 1, c.0, c.1) == (0, 0)).unwrap();
        let q = p.transformed(t);
        let Some(plan) = top_left_plan(&q, dihedral_point(t, rows + 1, cols + 1, v.0, v.1)) else { continue };
        let plan = untransform_plan(p, t, &plan);
        if let Ok(pf) = execute_plan(p, &plan) {
            if is_surjective(&pf.mapping) && check_self_intersections(&pf).is_empty() {
                return Some((plan, pf));
            }
        }
    }
    None
}
