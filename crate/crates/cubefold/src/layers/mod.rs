//! Layer maps, the per-cube-edge chord model of self-intersections, and the
//! backtracking search over layer maps.

mod plan;

pub use plan::{execute_plan, execute_plan_with, parse_plan, FoldLine, FoldingPlan, PlanError, PlanSide, PlanStep, Silhouette};

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{fold_angle, is_consistent, CellState, ConsistentMapping, FaceLabel, Fold, SignedAxis};
use crate::grid::{CellCoord, Dir, Polyomino};

/// Layer per cell; 1 touches the cube face.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerMap {
    pub layers: Vec<u32>,
}

impl fmt::Debug for LayerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.layers)
    }
}

impl LayerMap {
    /// True if the layers on every face are exactly 1..=multiplicity.
    pub fn is_valid_for(&self, m: &ConsistentMapping) -> bool {
        if self.layers.len() != m.states.len() {
            return false;
        }
        let mut seen: Vec<Vec<bool>> = vec![Vec::new(); 7];
        let mult = m.multiplicities();
        for f in 1..=6 {
            seen[f] = vec![false; mult[f] + 1];
        }
        for (i, &l) in self.layers.iter().enumerate() {
            let f = m.face(i) as usize;
            let l = l as usize;
            if l == 0 || l > mult[f] || seen[f][l] {
                return false;
            }
            seen[f][l] = true;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoFolding {
    pub polyomino: Polyomino,
    pub mapping: ConsistentMapping,
    pub layers: LayerMap,
}

impl Serialize for Polyomino {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Polyomino {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::grid::parse_polyomino(&text).map_err(serde::de::Error::custom)
    }
}

impl PseudoFolding {
    pub fn new(polyomino: Polyomino, mapping: ConsistentMapping, layers: LayerMap) -> Result<Self, LayerError> {
        if !is_consistent(&polyomino, &mapping) {
            return Err(LayerError::Inconsistent);
        }
        if !layers.is_valid_for(&mapping) {
            return Err(LayerError::BadLayerMap);
        }
        Ok(PseudoFolding { polyomino, mapping, layers })
    }

    /// Image under dihedral symmetry `t` of the page; layers are unchanged.
    pub fn transformed(&self, t: usize) -> PseudoFolding {
        let p = &self.polyomino;
        let q = p.transformed(t);
        let mapping = crate::cube::transformed_mapping(p, &self.mapping, t);
        let mut layers = vec![0; q.len()];
        for (i, c) in p.cells().iter().enumerate() {
            let (r, k) = crate::grid::dihedral_point(t, p.rows(), p.cols(), c.row, c.col);
            layers[q.index_of(CellCoord::new(r, k)).unwrap()] = self.layers.layers[i];
        }
        PseudoFolding { polyomino: q, mapping, layers: LayerMap { layers } }
    }

    /// Mapping grid, a blank line, then the layer grid.
    pub fn to_text(&self) -> String {
        let p = &self.polyomino;
        let mut s = self.mapping.to_text(p);
        s.push('\n');
        for r in 0..p.rows() {
            let row: Vec<String> = (0..p.cols())
                .map(|c| match p.index_of(CellCoord::new(r, c)) {
                    Some(i) => self.layers.layers[i].to_string(),
                    None => ".".into(),
                })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(p: &Polyomino, text: &str) -> Result<PseudoFolding, LayerError> {
        let (map_part, layer_part) = text
            .split_once("\n\n")
            .ok_or_else(|| LayerError::Format("expected a blank line between the grids".into()))?;
        let mapping = ConsistentMapping::from_text(p, map_part).map_err(|e| LayerError::Format(e.to_string()))?;
        let mut layers = vec![0u32; p.len()];
        let lines: Vec<&str> = layer_part.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() != p.rows() {
            return Err(LayerError::Format("layer grid row count".into()));
        }
        for (r, line) in lines.iter().enumerate() {
            for (c, tok) in line.split_whitespace().enumerate() {
                if let Some(i) = p.index_of(CellCoord::new(r, c)) {
                    layers[i] = tok.parse().map_err(|_| LayerError::Format(format!("bad layer {tok:?}")))?;
                }
            }
        }
        PseudoFolding::new(p.clone(), mapping, LayerMap { layers })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayerError {
    #[error("mapping is not consistent with the polyomino")]
    Inconsistent,
    #[error("layer map does not match the face multiplicities")]
    BadLayerMap,
    #[error("search limit of {0} nodes exceeded")]
    LimitExceeded(u64),
    #[error("format: {0}")]
    Format(String),
}

/// A cube edge as the two face labels it joins, smaller first.
pub type CubeEdge = (FaceLabel, FaceLabel);

fn cube_edge_index(a: SignedAxis, b: SignedAxis) -> usize {
    // 12 edges: index by the unordered pair of signed axes on different axes.
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    const MAP: [[u8; 6]; 6] = {
        let mut m = [[255u8; 6]; 6];
        let mut k = 0u8;
        let mut i = 0;
        while i < 6 {
            let mut j = i + 1;
            while j < 6 {
                if i / 2 != j / 2 {
                    m[i][j] = k;
                    k += 1;
                }
                j += 1;
            }
            i += 1;
        }
        m
    };
    MAP[a.index()][b.index()] as usize
}

fn edge_labels(a: SignedAxis, b: SignedAxis) -> CubeEdge {
    let (x, y) = (a.label(), b.label());
    (x.min(y), x.max(y))
}

/// One interior polyomino edge as a chord: its two cells and which of them
/// lies on the edge's first (descending) face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordInfo {
    pub edge: usize,
    pub labels: CubeEdge,
    pub a: usize,
    pub b: usize,
    pub a_first: bool,
    pub b_first: bool,
    pub fold: Fold,
}

/// Chords of all glued edges of a mapping.
pub fn chords(p: &Polyomino, m: &ConsistentMapping) -> Vec<ChordInfo> {
    p.glued_edges()
        .into_iter()
        .map(|(a, b, d)| {
            let fa = m.states[a].face;
            let side = m.states[a].side(d);
            let labels = edge_labels(fa, side);
            let first = labels.0;
            ChordInfo {
                edge: cube_edge_index(fa, side),
                labels,
                a,
                b,
                a_first: m.face(a) == first,
                b_first: m.face(b) == first,
                fold: fold_angle(m, a, b),
            }
        })
        .collect()
}

/// Position of a terminal on its edge's terminal line: first-face layers descending
/// (negative keys), then second-face layers ascending.
#[inline]
fn key(first: bool, layer: u32) -> i64 {
    if first {
        -(layer as i64)
    } else {
        layer as i64
    }
}

#[inline]
fn chord_keys(c: &ChordInfo, layers: &[u32]) -> (i64, i64) {
    let x = key(c.a_first, layers[c.a]);
    let y = key(c.b_first, layers[c.b]);
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

#[inline]
fn interleave(p: (i64, i64), q: (i64, i64)) -> bool {
    (p.0 < q.0 && q.0 < p.1 && p.1 < q.1) || (q.0 < p.0 && p.0 < q.1 && q.1 < p.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminal {
    pub cell: usize,
    pub side: Dir,
    pub face: FaceLabel,
    pub layer: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChordKind {
    Quarter,
    Half,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    /// Indices into the diagram's terminal line.
    pub ends: (usize, usize),
    pub kind: ChordKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeChordDiagram {
    pub edge: CubeEdge,
    /// Terminal line: first face by descending layer, then second face by ascending layer.
    pub terminals: Vec<Terminal>,
    pub chords: Vec<Chord>,
}

impl EdgeChordDiagram {
    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.terminals.len())
            .filter(|&t| !self.chords.iter().any(|c| c.ends.0 == t || c.ends.1 == t))
            .collect()
    }

    pub fn is_non_crossing(&self) -> bool {
        let spans: Vec<(i64, i64)> = self.chords.iter().map(|c| (c.ends.0 as i64, c.ends.1 as i64)).collect();
        spans.iter().enumerate().all(|(i, &p)| spans[i + 1..].iter().all(|&q| !interleave(p, q)))
    }
}

/// One chord diagram per cube edge that receives at least one polyomino edge.
pub fn build_chord_diagrams(pf: &PseudoFolding) -> Vec<EdgeChordDiagram> {
    let p = &pf.polyomino;
    let m = &pf.mapping;
    let mut by_edge: std::collections::BTreeMap<CubeEdge, Vec<(Terminal, i64)>> = Default::default();
    for i in 0..p.len() {
        for d in Dir::ALL {
            let s: CellState = m.states[i];
            let labels = edge_labels(s.face, s.side(d));
            let first = m.face(i) == labels.0;
            let t = Terminal { cell: i, side: d, face: m.face(i), layer: pf.layers.layers[i] };
            by_edge.entry(labels).or_default().push((t, key(first, pf.layers.layers[i])));
        }
    }
    let mut out = Vec::new();
    for (edge, mut ts) in by_edge {
        ts.sort_by_key(|t| t.1);
        let terminals: Vec<Terminal> = ts.into_iter().map(|t| t.0).collect();
        let pos = |cell: usize, side: Dir| terminals.iter().position(|t| t.cell == cell && t.side == side).unwrap();
        let mut chords_here = Vec::new();
        for (a, b, d) in p.glued_edges() {
            let s = m.states[a];
            if edge_labels(s.face, s.side(d)) != edge {
                continue;
            }
            let (x, y) = (pos(a, d), pos(b, d.opposite()));
            let kind = match fold_angle(m, a, b) {
                Fold::Quarter => ChordKind::Quarter,
                Fold::Half => ChordKind::Half,
            };
            chords_here.push(Chord { ends: (x.min(y), x.max(y)), kind });
        }
        out.push(EdgeChordDiagram { edge, terminals, chords: chords_here });
    }
    out
}

/// A pair of polyomino edges at the same cube edge that would intersect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub cube_edge: CubeEdge,
    /// The two polyomino edges as cell-index pairs.
    pub edges: [(usize, usize); 2],
    /// 1: two 90 degree folds; 2: a 90 degree fold inside a 180 degree fold; 3: two 180 degree folds.
    pub kind: u8,
}

fn violation_kind(x: &ChordInfo, y: &ChordInfo) -> u8 {
    match (x.fold, y.fold) {
        (Fold::Quarter, Fold::Quarter) => 1,
        (Fold::Half, Fold::Half) => 3,
        _ => 2,
    }
}

/// Self-intersections: crossing chords on a common cube edge.
pub fn check_self_intersections(pf: &PseudoFolding) -> Vec<Violation> {
    let cs = chords(&pf.polyomino, &pf.mapping);
    let layers = &pf.layers.layers;
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if cs[i].edge != cs[j].edge {
                continue;
            }
            if interleave(chord_keys(&cs[i], layers), chord_keys(&cs[j], layers)) {
                out.push(Violation {
                    cube_edge: cs[i].labels,
                    edges: [(cs[i].a, cs[i].b), (cs[j].a, cs[j].b)],
                    kind: violation_kind(&cs[i], &cs[j]),
                });
            }
        }
    }
    out
}

/// The three pairwise rules stated directly on layers, without the terminal line.
pub fn check_three_rules(pf: &PseudoFolding) -> Vec<Violation> {
    let cs = chords(&pf.polyomino, &pf.mapping);
    let l = &pf.layers.layers;
    let m = &pf.mapping;
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let (x, y) = (&cs[i], &cs[j]);
            if x.edge != y.edge {
                continue;
            }
            let bad = match (x.fold, y.fold) {
                (Fold::Quarter, Fold::Quarter) => {
                    // Layers on each face, oriented as (first face, second face).
                    let lx = if x.a_first { (l[x.a], l[x.b]) } else { (l[x.b], l[x.a]) };
                    let ly = if y.a_first { (l[y.a], l[y.b]) } else { (l[y.b], l[y.a]) };
                    (lx.0 < ly.0) != (lx.1 < ly.1)
                }
                (Fold::Half, Fold::Half) => {
                    if m.face(x.a) != m.face(y.a) {
                        false
                    } else {
                        let (a0, a1) = (l[x.a].min(l[x.b]), l[x.a].max(l[x.b]));
                        let (b0, b1) = (l[y.a].min(l[y.b]), l[y.a].max(l[y.b]));
                        (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
                    }
                }
                _ => {
                    let (q, h) = if x.fold == Fold::Quarter { (x, y) } else { (y, x) };
                    let face = m.face(h.a);
                    let ql = if m.face(q.a) == face { l[q.a] } else { l[q.b] };
                    let (h0, h1) = (l[h.a].min(l[h.b]), l[h.a].max(l[h.b]));
                    h0 < ql && ql < h1
                }
            };
            if bad {
                out.push(Violation { cube_edge: x.labels, edges: [(x.a, x.b), (y.a, y.b)], kind: violation_kind(x, y) });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 100_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub layer_map: Option<LayerMap>,
    /// True if the whole search space was explored (no limit hit).
    pub exhausted: bool,
    pub nodes: u64,
}

/// Builds each face's stack by inserting cells one at a time. Crossing depends only
/// on the relative order of terminals, so a chord pair is checked as soon as its
/// cells are placed.
struct LayerSearch {
    order: Vec<usize>,
    face_of: Vec<usize>,
    stacks: Vec<Vec<usize>>,
    /// Position of each placed cell in its stack (0 = bottom), or u32::MAX.
    rank: Vec<u32>,
    chords: Vec<ChordInfo>,
    by_cell: Vec<Vec<usize>>,
    by_edge: Vec<Vec<usize>>,
    nodes: u64,
    max_nodes: u64,
}

impl LayerSearch {
    fn new(p: &Polyomino, m: &ConsistentMapping, max_nodes: u64) -> Self {
        let chords = chords(p, m);
        let mut by_cell = vec![Vec::new(); p.len()];
        let mut by_edge = vec![Vec::new(); 12];
        for (k, c) in chords.iter().enumerate() {
            by_cell[c.a].push(k);
            by_cell[c.b].push(k);
            by_edge[c.edge].push(k);
        }
        // BFS over all grid adjacencies keeps chords short-lived.
        let mut order = Vec::with_capacity(p.len());
        let mut seen = vec![false; p.len()];
        for s in 0..p.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                order.push(i);
                for d in Dir::ALL {
                    if let Some(j) = p.neighbor(i, d) {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        LayerSearch {
            order,
            face_of: (0..p.len()).map(|i| m.face(i) as usize).collect(),
            stacks: vec![Vec::new(); 7],
            rank: vec![u32::MAX; p.len()],
            chords,
            by_cell,
            by_edge,
            nodes: 0,
            max_nodes,
        }
    }

    fn placed(&self, c: &ChordInfo) -> bool {
        self.rank[c.a] != u32::MAX && self.rank[c.b] != u32::MAX
    }

    fn keys(&self, c: &ChordInfo) -> (i64, i64) {
        let x = key(c.a_first, self.rank[c.a] + 1);
        let y = key(c.b_first, self.rank[c.b] + 1);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Checks the chords completed by placing `cell`.
    fn ok(&self, cell: usize) -> bool {
        for &k in &self.by_cell[cell] {
            let x = &self.chords[k];
            if !self.placed(x) {
                continue;
            }
            let kx = self.keys(x);
            for &j in &self.by_edge[x.edge] {
                if j != k && self.placed(&self.chords[j]) && interleave(kx, self.keys(&self.chords[j])) {
                    return false;
                }
            }
        }
        true
    }

    fn insert(&mut self, f: usize, pos: usize, cell: usize) {
        self.stacks[f].insert(pos, cell);
        for (r, &c) in self.stacks[f].iter().enumerate().skip(pos) {
            self.rank[c] = r as u32;
        }
    }

    fn remove(&mut self, f: usize, pos: usize) {
        let cell = self.stacks[f].remove(pos);
        self.rank[cell] = u32::MAX;
        for (r, &c) in self.stacks[f].iter().enumerate().skip(pos) {
            self.rank[c] = r as u32;
        }
    }

    /// Visits complete zero-violation stackings; `Break(true)` on limit.
    fn run<F: FnMut(&[u32]) -> ControlFlow<()>>(&mut self, k: usize, out: &mut Vec<u32>, f: &mut F) -> ControlFlow<bool> {
        if k == self.order.len() {
            for (i, l) in out.iter_mut().enumerate() {
                *l = self.rank[i] + 1;
            }
            return match f(out) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(false),
            };
        }
        let cell = self.order[k];
        let face = self.face_of[cell];
        for pos in 0..=self.stacks[face].len() {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return ControlFlow::Break(true);
            }
            self.insert(face, pos, cell);
            let r = if self.ok(cell) { self.run(k + 1, out, f) } else { ControlFlow::Continue(()) };
            self.remove(face, pos);
            r?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every zero-violation layer map of `m`. Returns `Err` if the node limit was hit.
pub fn for_each_layer_map<F>(p: &Polyomino, m: &ConsistentMapping, limits: SearchLimits, mut f: F) -> Result<u64, LayerError>
where
    F: FnMut(&LayerMap) -> ControlFlow<()>,
{
    let mut s = LayerSearch::new(p, m, limits.max_nodes);
    let mut out = vec![0u32; p.len()];
    let mut lm = LayerMap { layers: Vec::new() };
    let r = s.run(0, &mut out, &mut |layers: &[u32]| {
        lm.layers.clear();
        lm.layers.extend_from_slice(layers);
        f(&lm)
    });
    match r {
        ControlFlow::Break(true) => Err(LayerError::LimitExceeded(limits.max_nodes)),
        _ => Ok(s.nodes),
    }
}

/// First zero-violation layer map in search order, if any.
pub fn find_layer_map(p: &Polyomino, m: &ConsistentMapping, limits: SearchLimits) -> SearchOutcome {
    let mut found = None;
    let r = for_each_layer_map(p, m, limits, |lm| {
        found = Some(lm.clone());
        ControlFlow::Break(())
    });
    match r {
        Ok(nodes) => SearchOutcome { layer_map: found, exhausted: true, nodes },
        Err(_) => SearchOutcome { exhausted: found.is_some(), layer_map: found, nodes: limits.max_nodes },
    }
}

/// Exact number of zero-violation layer maps.
pub fn count_layer_maps(p: &Polyomino, m: &ConsistentMapping, limits: SearchLimits) -> Result<u64, LayerError> {
    let mut n = 0u64;
    for_each_layer_map(p, m, limits, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// The 1 x k strip with every square on face 1.
pub fn stamp_strip(k: usize) -> (Polyomino, ConsistentMapping) {
    let p = Polyomino::new(1, k, (0..k).map(|c| CellCoord::new(0, c)), []).expect("strip");
    let mut states = vec![CellState::ORIGIN; k];
    for c in 1..k {
        states[c] = states[c - 1].flip(Dir::E);
    }
    (p, ConsistentMapping { states })
}

/// Number of ways to fold a strip of `k` stamps onto one square.
pub fn stamp_fold_count(k: usize) -> u64 {
    assert!((1..=14).contains(&k), "stamp count supports 1..=14");
    let (p, m) = stamp_strip(k);
    count_layer_maps(&p, &m, SearchLimits { max_nodes: u64::MAX }).expect("no limit")
}
