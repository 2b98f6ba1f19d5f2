//! Folding plans: 180 degree roll folds on the flat silhouette followed by a final wrap
//! of the residual silhouette around the cube.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_self_intersections, find_layer_map, for_each_layer_map, LayerMap, PseudoFolding, SearchLimits};
use crate::cube::{
    for_each_consistent_mapping, is_consistent, is_surjective, rolled_mapping, CellState, ConsistentMapping,
    EnumerateOptions, Quotient,
};
use crate::grid::{CellCoord, CutOrientation, Dir, Polyomino};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoldLine {
    pub orientation: CutOrientation,
    /// H lines lie between rows `index - 1` and `index`; V lines between columns.
    pub index: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanSide {
    Above,
    Below,
    Left,
    Right,
}

impl PlanSide {
    fn word(self) -> &'static str {
        match self {
            PlanSide::Above => "above",
            PlanSide::Below => "below",
            PlanSide::Left => "left",
            PlanSide::Right => "right",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanStep {
    /// Fold everything on `side` of `line` over onto the other side. With `only`,
    /// just the part on that side connected to the given original cell moves.
    Roll { line: FoldLine, side: PlanSide, only: Option<CellCoord> },
    Wrap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldingPlan {
    pub steps: Vec<PlanStep>,
}

impl fmt::Display for FoldingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match s {
                PlanStep::Roll { line, side, only } => {
                    let o = match line.orientation {
                        CutOrientation::H => "H",
                        CutOrientation::V => "V",
                    };
                    write!(f, "ROLL {o} {} {}", line.index, side.word())?;
                    if let Some(c) = only {
                        write!(f, " ONLY {} {}", c.row, c.col)?;
                    }
                    writeln!(f)?;
                }
                PlanStep::Wrap => writeln!(f, "WRAP")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("step {step}: invalid fold line: {reason}")]
    InvalidFoldLine { step: usize, reason: String },
    #[error("wrap failed: {0}")]
    WrapFailed(String),
}

pub fn parse_plan(text: &str) -> Result<FoldingPlan, PlanError> {
    let mut steps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let err = |message: &str| PlanError::Parse { line, message: message.to_string() };
        match toks.as_slice() {
            [] => continue,
            ["WRAP"] => steps.push(PlanStep::Wrap),
            ["ROLL", o, idx, side, rest @ ..] => {
                let orientation = match *o {
                    "H" => CutOrientation::H,
                    "V" => CutOrientation::V,
                    _ => return Err(err("orientation must be H or V")),
                };
                let index: i64 = idx.parse().map_err(|_| err("bad line index"))?;
                let side = match (*side, orientation) {
                    ("above", CutOrientation::H) => PlanSide::Above,
                    ("below", CutOrientation::H) => PlanSide::Below,
                    ("left", CutOrientation::V) => PlanSide::Left,
                    ("right", CutOrientation::V) => PlanSide::Right,
                    _ => return Err(err("side does not match the line orientation")),
                };
                let only = match rest {
                    [] => None,
                    ["ONLY", r, c] => Some(CellCoord::new(
                        r.parse().map_err(|_| err("bad ONLY row"))?,
                        c.parse().map_err(|_| err("bad ONLY column"))?,
                    )),
                    _ => return Err(err("trailing tokens")),
                };
                steps.push(PlanStep::Roll { line: FoldLine { orientation, index }, side, only });
            }
            _ => return Err(err("expected ROLL or WRAP")),
        }
    }
    match steps.iter().position(|s| *s == PlanStep::Wrap) {
        Some(k) if k + 1 == steps.len() => Ok(FoldingPlan { steps }),
        Some(_) => Err(PlanError::Parse { line: 0, message: "WRAP must be the last step".into() }),
        None => Err(PlanError::Parse { line: 0, message: "plan must end with WRAP".into() }),
    }
}

/// The flat multi-layer state between roll folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Silhouette {
    /// Current (row, col) of every original cell.
    pub position: Vec<(i64, i64)>,
    /// Whether the cell is mirrored left-right and top-bottom.
    pub mirrored: Vec<(bool, bool)>,
    /// Cells at each position, bottom first.
    pub stacks: BTreeMap<(i64, i64), Vec<usize>>,
}

impl Silhouette {
    pub fn flat(p: &Polyomino) -> Self {
        let position: Vec<(i64, i64)> = p.cells().iter().map(|c| (c.row as i64, c.col as i64)).collect();
        let stacks = position.iter().enumerate().map(|(i, &q)| (q, vec![i])).collect();
        Silhouette { position, mirrored: vec![(false, false); p.len()], stacks }
    }

    fn on_side(&self, i: usize, line: FoldLine, side: PlanSide) -> bool {
        let (r, c) = self.position[i];
        match side {
            PlanSide::Above => r < line.index,
            PlanSide::Below => r >= line.index,
            PlanSide::Left => c < line.index,
            PlanSide::Right => c >= line.index,
        }
    }

    fn reflect(line: FoldLine, (r, c): (i64, i64)) -> (i64, i64) {
        match line.orientation {
            CutOrientation::H => (2 * line.index - 1 - r, c),
            CutOrientation::V => (r, 2 * line.index - 1 - c),
        }
    }

    /// Applies one roll fold.
    pub fn roll(&mut self, p: &Polyomino, line: FoldLine, side: PlanSide, only: Option<CellCoord>) -> Result<(), String> {
        let n = p.len();
        let mut moving: Vec<bool> = (0..n).map(|i| self.on_side(i, line, side)).collect();
        if let Some(c) = only {
            let start = p.index_of(c).ok_or("ONLY cell is not in the polyomino")?;
            if !moving[start] {
                return Err("ONLY cell is not on the folded side".into());
            }
            let mut comp = vec![false; n];
            comp[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for d in Dir::ALL {
                    if let Some(j) = p.glued(i, d) {
                        if moving[j] && !comp[j] {
                            comp[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            moving = comp;
        }
        let count = moving.iter().filter(|&&m| m).count();
        if count == 0 || count == n {
            return Err("one side of the line is empty".into());
        }
        for (a, b, _) in p.glued_edges() {
            if moving[a] == moving[b] {
                continue;
            }
            let (m, s) = if moving[a] { (a, b) } else { (b, a) };
            if Self::reflect(line, self.position[m]) != self.position[s] {
                return Err(format!("glued edge between cells {a} and {b} does not lie on the line"));
            }
        }
        // The moving part of every stack must be its top segment.
        let mut lifted: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (pos, stack) in self.stacks.iter_mut() {
            let k = stack.iter().position(|&i| moving[i]).unwrap_or(stack.len());
            if stack[k..].iter().any(|&i| !moving[i]) {
                return Err(format!("moving cells at {pos:?} are not on top of their stack"));
            }
            let top: Vec<usize> = stack.drain(k..).collect();
            if !top.is_empty() {
                lifted.insert(*pos, top);
            }
        }
        self.stacks.retain(|_, s| !s.is_empty());
        for (pos, mut top) in lifted {
            top.reverse();
            let dest = Self::reflect(line, pos);
            for &i in &top {
                self.position[i] = dest;
                match line.orientation {
                    CutOrientation::H => self.mirrored[i].1 ^= true,
                    CutOrientation::V => self.mirrored[i].0 ^= true,
                }
            }
            self.stacks.entry(dest).or_default().extend(top);
        }
        Ok(())
    }

    /// The silhouette as a polyomino; two positions are glued when some glued pair
    /// of original cells spans them. Returns it with the position of each of its cells.
    pub fn polyomino(&self, p: &Polyomino) -> Result<(Polyomino, Vec<(i64, i64)>), String> {
        let positions: Vec<(i64, i64)> = self.stacks.keys().copied().collect();
        let mut spanned = BTreeSet::new();
        for (a, b, _) in p.glued_edges() {
            let (x, y) = (self.position[a], self.position[b]);
            if x != y {
                spanned.insert((x.min(y), x.max(y)));
            }
        }
        let set: BTreeSet<(i64, i64)> = positions.iter().copied().collect();
        let mut cuts = Vec::new();
        for &q in &positions {
            for nb in [(q.0 + 1, q.1), (q.0, q.1 + 1)] {
                if set.contains(&nb) && !spanned.contains(&(q, nb)) {
                    cuts.push((q, nb));
                }
            }
        }
        let poly = Polyomino::from_positions(&positions, &cuts).map_err(|e| e.to_string())?;
        let r0 = positions.iter().map(|q| q.0).min().unwrap();
        let c0 = positions.iter().map(|q| q.1).min().unwrap();
        let mut at = vec![(0, 0); poly.len()];
        for &q in &positions {
            let i = poly.index_of(CellCoord::new((q.0 - r0) as usize, (q.1 - c0) as usize)).unwrap();
            at[i] = q;
        }
        Ok((poly, at))
    }
}

/// Original mapping induced by a silhouette mapping.
fn lift_mapping(sil: &Silhouette, at: &[(i64, i64)], qm: &ConsistentMapping) -> ConsistentMapping {
    let index: BTreeMap<(i64, i64), usize> = at.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let states = (0..sil.position.len())
        .map(|i| {
            let s = qm.states[index[&sil.position[i]]];
            let (mx, my) = sil.mirrored[i];
            CellState {
                face: s.face,
                east: if mx { s.east.neg() } else { s.east },
                north: if my { s.north.neg() } else { s.north },
            }
        })
        .collect();
    ConsistentMapping { states }
}

/// Original layers from silhouette layers: whole stacks are stacked in silhouette order.
fn lift_layers(sil: &Silhouette, at: &[(i64, i64)], qm: &ConsistentMapping, ql: &LayerMap) -> LayerMap {
    let mut layers = vec![0u32; sil.position.len()];
    for f in 1..=6u8 {
        let mut cells: Vec<usize> = (0..at.len()).filter(|&i| qm.face(i) == f).collect();
        cells.sort_by_key(|&i| ql.layers[i]);
        let mut next = 1;
        for q in cells {
            let stack = &sil.stacks[&at[q]];
            let ordered: Vec<usize> =
                if qm.states[q].up_side_inward() { stack.iter().rev().copied().collect() } else { stack.clone() };
            for i in ordered {
                layers[i] = next;
                next += 1;
            }
        }
    }
    LayerMap { layers }
}

const MAX_WRAP_MAPPINGS: usize = 64;

fn wrap(p: &Polyomino, sil: &Silhouette, limits: SearchLimits) -> Result<PseudoFolding, PlanError> {
    let (q, at) = sil.polyomino(p).map_err(PlanError::WrapFailed)?;
    let mut candidates = Vec::new();
    if let Some(m) = rolled_mapping(&q, CellState::ORIGIN) {
        if is_surjective(&m) {
            candidates.push(m);
        }
    }
    let opts = EnumerateOptions { surjective_only: true, quotient: Quotient::Isometries };
    for_each_consistent_mapping(&q, opts, |m| {
        if !candidates.contains(m) {
            candidates.push(m.clone());
        }
        if candidates.len() >= MAX_WRAP_MAPPINGS {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if candidates.is_empty() {
        return Err(PlanError::WrapFailed("the residual silhouette has no surjective consistent mapping".into()));
    }
    for qm in &candidates {
        let m = lift_mapping(sil, &at, qm);
        if !is_consistent(p, &m) {
            continue;
        }
        let mut found = None;
        let _ = for_each_layer_map(&q, qm, limits, |ql| {
            let lm = lift_layers(sil, &at, qm, ql);
            let pf = PseudoFolding { polyomino: p.clone(), mapping: m.clone(), layers: lm };
            if check_self_intersections(&pf).is_empty() {
                found = Some(pf);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some(pf) = found {
            return Ok(pf);
        }
        if let Some(lm) = find_layer_map(p, &m, limits).layer_map {
            return Ok(PseudoFolding { polyomino: p.clone(), mapping: m, layers: lm });
        }
    }
    Err(PlanError::WrapFailed("no candidate wrap admits a layer map".into()))
}

/// Runs the roll folds, wraps the residual silhouette and returns the induced pseudo-folding.
pub fn execute_plan(p: &Polyomino, plan: &FoldingPlan) -> Result<PseudoFolding, PlanError> {
    execute_plan_with(p, plan, SearchLimits { max_nodes: 2_000_000 })
}

pub fn execute_plan_with(p: &Polyomino, plan: &FoldingPlan, limits: SearchLimits) -> Result<PseudoFolding, PlanError> {
    let mut sil = Silhouette::flat(p);
    for (k, step) in plan.steps.iter().enumerate() {
        match step {
            PlanStep::Roll { line, side, only } => sil
                .roll(p, *line, *side, *only)
                .map_err(|reason| PlanError::InvalidFoldLine { step: k + 1, reason })?,
            PlanStep::Wrap => return wrap(p, &sil, limits),
        }
    }
    Err(PlanError::WrapFailed("plan has no WRAP step".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_text_round_trip() {
        let text = "ROLL H 3 below\nROLL V 2 right ONLY 4 2\nWRAP\n";
        let plan = parse_plan(text).unwrap();
        assert_eq!(plan.to_string(), text);
        assert!(parse_plan("ROLL H 3 left\nWRAP").is_err());
        assert!(parse_plan("WRAP\nROLL H 1 above").is_err());
    }

    #[test]
    fn accordion_strip_stacks() {
        let p = Polyomino::rectangle(1, 4);
        let mut sil = Silhouette::flat(&p);
        let line = |i| FoldLine { orientation: CutOrientation::V, index: i };
        sil.roll(&p, line(2), PlanSide::Right, None).unwrap();
        assert_eq!(sil.stacks[&(0, 1)], vec![1, 2]);
        assert_eq!(sil.stacks[&(0, 0)], vec![0, 3]);
        sil.roll(&p, line(1), PlanSide::Left, None).unwrap();
        assert_eq!(sil.stacks[&(0, 1)], vec![1, 2, 3, 0]);
    }
}
