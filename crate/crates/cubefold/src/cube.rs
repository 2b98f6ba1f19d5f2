//! The unit cube, cell frames and consistent mappings.
//!
//! Every cell of a folded polyomino lies on one cube face. Its state records the
//! outward normal of that face together with the images of the cell's local east
//! and north directions. Across a glued edge the neighbour's state is either the
//! rolled state (a 90 degree fold) or the flipped state (a 180 degree fold).
//!
//! Face labels: from face 1 the cell east of it covers face 3, west 4, north 5 and
//! south 2; opposite labels sum to 7.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{dihedral_point, CellCoord, Dir, Hole, HoleKind, Polyomino};

pub type FaceLabel = u8;

/// One of the six unit vectors along the coordinate axes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedAxis(u8);

impl SignedAxis {
    pub const PX: SignedAxis = SignedAxis(0);
    pub const NX: SignedAxis = SignedAxis(1);
    pub const PY: SignedAxis = SignedAxis(2);
    pub const NY: SignedAxis = SignedAxis(3);
    pub const PZ: SignedAxis = SignedAxis(4);
    pub const NZ: SignedAxis = SignedAxis(5);
    pub const ALL: [SignedAxis; 6] = [Self::PX, Self::NX, Self::PY, Self::NY, Self::PZ, Self::NZ];

    pub fn axis(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn sign(self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn neg(self) -> SignedAxis {
        SignedAxis(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn vector(self) -> [i64; 3] {
        let mut v = [0; 3];
        v[self.axis()] = self.sign();
        v
    }

    pub fn from_vector(v: [i64; 3]) -> Option<SignedAxis> {
        SignedAxis::ALL.into_iter().find(|a| a.vector() == v)
    }

    pub fn cross(self, other: SignedAxis) -> Option<SignedAxis> {
        let (a, b) = (self.vector(), other.vector());
        SignedAxis::from_vector([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
    }

    /// Face label of the cube face with this outward normal.
    pub fn label(self) -> FaceLabel {
        [3, 4, 5, 2, 6, 1][self.0 as usize]
    }

    pub fn from_label(f: FaceLabel) -> SignedAxis {
        match f {
            1 => Self::NZ,
            2 => Self::NY,
            3 => Self::PX,
            4 => Self::NX,
            5 => Self::PY,
            6 => Self::PZ,
            _ => panic!("face label out of range: {f}"),
        }
    }
}

impl fmt::Debug for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+x", "-x", "+y", "-y", "+z", "-z"][self.0 as usize])
    }
}

/// Fold angle of a glued edge (magnitude only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fold {
    Quarter,
    Half,
}

/// Placement of one cell on the cube: covered face and images of local east and north.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellState {
    pub face: SignedAxis,
    pub east: SignedAxis,
    pub north: SignedAxis,
}

impl fmt::Debug for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} e{:?} n{:?}]", self.face.label(), self.east, self.north)
    }
}

impl CellState {
    /// The reference state: face 1 with east along +x and north along +y.
    pub const ORIGIN: CellState = CellState { face: SignedAxis::NZ, east: SignedAxis::PX, north: SignedAxis::PY };

    pub fn label(self) -> FaceLabel {
        self.face.label()
    }

    /// Cube direction of the cell's side `d`.
    pub fn side(self, d: Dir) -> SignedAxis {
        match d {
            Dir::E => self.east,
            Dir::W => self.east.neg(),
            Dir::N => self.north,
            Dir::S => self.north.neg(),
        }
    }

    /// State of the neighbour in direction `d` after a 90 degree fold.
    pub fn roll(self, d: Dir) -> CellState {
        let n = self.face;
        match d {
            Dir::E => CellState { face: self.east, east: n.neg(), north: self.north },
            Dir::W => CellState { face: self.east.neg(), east: n, north: self.north },
            Dir::N => CellState { face: self.north, east: self.east, north: n.neg() },
            Dir::S => CellState { face: self.north.neg(), east: self.east, north: n },
        }
    }

    /// State of the neighbour in direction `d` after a 180 degree fold.
    pub fn flip(self, d: Dir) -> CellState {
        if d.is_horizontal() {
            CellState { east: self.east.neg(), ..self }
        } else {
            CellState { north: self.north.neg(), ..self }
        }
    }

    pub fn step(self, d: Dir, fold: Fold) -> CellState {
        match fold {
            Fold::Quarter => self.roll(d),
            Fold::Half => self.flip(d),
        }
    }

    /// Fold relating `self` to `other` across side `d`, if the two are consistent.
    pub fn fold_to(self, d: Dir, other: CellState) -> Option<Fold> {
        if self.roll(d) == other {
            Some(Fold::Quarter)
        } else if self.flip(d) == other {
            Some(Fold::Half)
        } else {
            None
        }
    }

    /// True if the side of the paper facing the viewer on the page faces the cube.
    pub fn up_side_inward(self) -> bool {
        self.east.cross(self.north) == Some(self.face.neg())
    }

    /// Index in 0..48 within [`all_states`].
    pub fn index(self) -> usize {
        state_table().iter().position(|&s| s == self).expect("valid state")
    }

    pub fn from_index(i: usize) -> Option<CellState> {
        state_table().get(i).copied()
    }

    pub fn is_valid(self) -> bool {
        self.face.axis() != self.east.axis()
            && self.face.axis() != self.north.axis()
            && self.east.axis() != self.north.axis()
    }

    /// Apply a cube isometry (a signed permutation of the axes).
    pub fn apply(self, iso: &CubeIsometry) -> CellState {
        CellState { face: iso.apply(self.face), east: iso.apply(self.east), north: iso.apply(self.north) }
    }
}

fn state_table() -> &'static [CellState; 48] {
    static TABLE: OnceLock<[CellState; 48]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = vec![CellState::ORIGIN];
        // Breadth-first closure under rolls and flips gives a fixed, documented order.
        let mut queue = VecDeque::from([CellState::ORIGIN]);
        while let Some(s) = queue.pop_front() {
            for d in Dir::ALL {
                for t in [s.roll(d), s.flip(d)] {
                    if !v.contains(&t) {
                        v.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        v.try_into().expect("exactly 48 states")
    })
}

pub fn all_states() -> &'static [CellState; 48] {
    state_table()
}

/// An isometry of the cube, stored as the image of each signed axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeIsometry {
    image: [SignedAxis; 6],
}

impl CubeIsometry {
    pub fn apply(&self, a: SignedAxis) -> SignedAxis {
        self.image[a.index()]
    }

    pub fn is_rotation(&self) -> bool {
        let x = self.apply(SignedAxis::PX);
        let y = self.apply(SignedAxis::PY);
        x.cross(y) == Some(self.apply(SignedAxis::PZ))
    }
}

/// All 48 isometries of the cube (24 rotations first).
pub fn cube_isometries() -> &'static [CubeIsometry] {
    static ISOS: OnceLock<Vec<CubeIsometry>> = OnceLock::new();
    ISOS.get_or_init(|| {
        let mut out = Vec::new();
        for x in SignedAxis::ALL {
            for y in SignedAxis::ALL {
                if x.axis() == y.axis() {
                    continue;
                }
                for z in SignedAxis::ALL {
                    if z.axis() == x.axis() || z.axis() == y.axis() {
                        continue;
                    }
                    let mut image = [SignedAxis::PX; 6];
                    for (a, img) in [(SignedAxis::PX, x), (SignedAxis::PY, y), (SignedAxis::PZ, z)] {
                        image[a.index()] = img;
                        image[a.neg().index()] = img.neg();
                    }
                    out.push(CubeIsometry { image });
                }
            }
        }
        out.sort_by_key(|i| !i.is_rotation());
        out
    })
}

/// Die orientation: the labels of the top face and of the north face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CubeOrientation {
    pub top: FaceLabel,
    pub north: FaceLabel,
}

impl CubeOrientation {
    pub fn new(top: FaceLabel, north: FaceLabel) -> Option<Self> {
        let ok = (1..=6).contains(&top) && (1..=6).contains(&north) && top != north && top + north != 7;
        ok.then_some(CubeOrientation { top, north })
    }

    /// Label of the east face, using the face geometry of [`SignedAxis::label`].
    pub fn east(self) -> FaceLabel {
        let up = SignedAxis::from_label(self.top);
        let n = SignedAxis::from_label(self.north);
        // east = north x up for a right-handed (east, north, up) frame.
        n.cross(up).expect("perpendicular").label()
    }

    /// Face covered by a cell the die rests on.
    pub fn covered_face(self) -> FaceLabel {
        7 - self.top
    }

    /// Tip the die over its edge in direction `d`.
    pub fn roll(self, d: Dir) -> CubeOrientation {
        let (t, n, e) = (self.top, self.north, self.east());
        match d {
            Dir::N => CubeOrientation { top: 7 - n, north: t },
            Dir::S => CubeOrientation { top: n, north: 7 - t },
            Dir::E => CubeOrientation { top: 7 - e, north: n },
            Dir::W => CubeOrientation { top: e, north: n },
        }
    }

    pub fn all() -> Vec<CubeOrientation> {
        let mut v = Vec::new();
        for top in 1..=6 {
            for north in 1..=6 {
                if let Some(o) = CubeOrientation::new(top, north) {
                    v.push(o);
                }
            }
        }
        v
    }
}

/// A state per cell of a polyomino (indexed like [`Polyomino::cells`]).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConsistentMapping {
    pub states: Vec<CellState>,
}

impl fmt::Debug for ConsistentMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.states.iter()).finish()
    }
}

impl ConsistentMapping {
    pub fn face(&self, i: usize) -> FaceLabel {
        self.states[i].label()
    }

    pub fn faces(&self) -> Vec<FaceLabel> {
        self.states.iter().map(|s| s.label()).collect()
    }

    pub fn multiplicities(&self) -> [usize; 7] {
        let mut m = [0; 7];
        for s in &self.states {
            m[s.label() as usize] += 1;
        }
        m
    }

    pub fn apply(&self, iso: &CubeIsometry) -> ConsistentMapping {
        ConsistentMapping { states: self.states.iter().map(|s| s.apply(iso)).collect() }
    }

    /// Serialises as one line per grid row; cells are "face/index", missing cells ".".
    pub fn to_text(&self, p: &Polyomino) -> String {
        let mut s = String::new();
        for r in 0..p.rows() {
            let row: Vec<String> = (0..p.cols())
                .map(|c| match p.index_of(CellCoord::new(r, c)) {
                    Some(i) => format!("{}/{}", self.states[i].label(), self.states[i].index()),
                    None => ".".to_string(),
                })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(p: &Polyomino, text: &str) -> Result<ConsistentMapping, CubeError> {
        let mut states = vec![None; p.len()];
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() != p.rows() {
            return Err(CubeError::Format("row count does not match the polyomino".into()));
        }
        for (r, line) in lines.iter().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != p.cols() {
                return Err(CubeError::Format(format!("row {r} has {} entries", toks.len())));
            }
            for (c, tok) in toks.iter().enumerate() {
                let idx = p.index_of(CellCoord::new(r, c));
                match (idx, *tok) {
                    (None, ".") => {}
                    (Some(i), tok) => {
                        let (face, k) = tok
                            .split_once('/')
                            .ok_or_else(|| CubeError::Format(format!("bad entry {tok:?}")))?;
                        let k: usize = k.parse().map_err(|_| CubeError::Format(format!("bad index {tok:?}")))?;
                        let st = CellState::from_index(k).ok_or_else(|| CubeError::Format(format!("index {k} out of range")))?;
                        if face != st.label().to_string() {
                            return Err(CubeError::Format(format!("face label disagrees with index in {tok:?}")));
                        }
                        states[i] = Some(st);
                    }
                    (None, tok) => return Err(CubeError::Format(format!("entry {tok:?} on a missing cell"))),
                }
            }
        }
        Ok(ConsistentMapping { states: states.into_iter().map(|s| s.unwrap()).collect() })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeError {
    #[error("hole is not a unit square hole")]
    NotUnitSquareHole,
    #[error("mapping format: {0}")]
    Format(String),
}

/// Checks every glued edge for a roll or flip relation.
pub fn is_consistent(p: &Polyomino, m: &ConsistentMapping) -> bool {
    m.states.len() == p.len()
        && m.states.iter().all(|s| s.is_valid())
        && p.glued_edges().iter().all(|&(a, b, d)| m.states[a].fold_to(d, m.states[b]).is_some())
}

pub fn fold_angle(m: &ConsistentMapping, a: usize, b: usize) -> Fold {
    if m.states[a].face == m.states[b].face {
        Fold::Half
    } else {
        Fold::Quarter
    }
}

pub fn is_surjective(m: &ConsistentMapping) -> bool {
    let mult = m.multiplicities();
    (1..=6).all(|f| mult[f] > 0)
}

/// Interior vertices (all four cells present and glued around it) cover at most two faces.
pub fn interior_vertices_ok(p: &Polyomino, m: &ConsistentMapping) -> bool {
    for i in 0..p.len() {
        let Some(e) = p.glued(i, Dir::E) else { continue };
        let Some(s) = p.glued(i, Dir::S) else { continue };
        let Some(se) = p.glued(e, Dir::S) else { continue };
        if p.glued(s, Dir::E) != Some(se) {
            continue;
        }
        let faces: BTreeSet<FaceLabel> = [i, e, s, se].iter().map(|&k| m.face(k)).collect();
        if faces.len() > 2 {
            return false;
        }
    }
    true
}

/// Which root states to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quotient {
    /// All 48 root states.
    None,
    /// One root per orbit of the 24 cube rotations (two roots, mirror images).
    Rotations,
    /// One root per orbit of all 48 cube isometries.
    Isometries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub surjective_only: bool,
    pub quotient: Quotient,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { surjective_only: false, quotient: Quotient::None }
    }
}

/// BFS spanning tree from cell 0: (order, parent, direction from parent).
fn spanning_order(p: &Polyomino) -> Vec<(usize, usize, Dir)> {
    let mut seen = vec![false; p.len()];
    seen[0] = true;
    let mut order = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for d in Dir::ALL {
            if let Some(j) = p.glued(i, d) {
                if !seen[j] {
                    seen[j] = true;
                    order.push((j, i, d));
                    queue.push_back(j);
                }
            }
        }
    }
    order
}

pub fn root_states(q: Quotient) -> Vec<CellState> {
    let o = CellState::ORIGIN;
    match q {
        Quotient::None => all_states().to_vec(),
        Quotient::Rotations => vec![o, o.flip(Dir::E)],
        Quotient::Isometries => vec![o],
    }
}

/// Visits every consistent mapping in a deterministic order.
pub fn for_each_consistent_mapping<F>(p: &Polyomino, opts: EnumerateOptions, mut f: F)
where
    F: FnMut(&ConsistentMapping) -> ControlFlow<()>,
{
    for root in root_states(opts.quotient) {
        if for_each_from_root(p, root, opts.surjective_only, &mut f).is_break() {
            return;
        }
    }
}

/// Visits the consistent mappings whose cell 0 has state `root`.
pub fn for_each_from_root<F>(p: &Polyomino, root: CellState, surjective_only: bool, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&ConsistentMapping) -> ControlFlow<()>,
{
    let order = spanning_order(p);
    let n = p.len();
    // For each step, the already-placed glued neighbours to check (neighbour, direction from the new cell).
    let mut position = vec![usize::MAX; n];
    position[0] = 0;
    for (k, &(j, _, _)) in order.iter().enumerate() {
        position[j] = k + 1;
    }
    let checks: Vec<Vec<(usize, Dir)>> = order
        .iter()
        .enumerate()
        .map(|(k, &(j, parent, _))| {
            Dir::ALL
                .iter()
                .filter_map(|&d| p.glued(j, d).map(|q| (q, d)))
                .filter(|&(q, _)| q != parent && position[q] < k + 1)
                .collect()
        })
        .collect();
    let mut states = vec![root; n];
    let mut counts = [0usize; 6];
    counts[root.face.index()] += 1;
    let mut mapping = ConsistentMapping { states: Vec::with_capacity(n) };
    fn rec<F: FnMut(&ConsistentMapping) -> ControlFlow<()>>(
        k: usize,
        order: &[(usize, usize, Dir)],
        checks: &[Vec<(usize, Dir)>],
        states: &mut Vec<CellState>,
        counts: &mut [usize; 6],
        surjective_only: bool,
        mapping: &mut ConsistentMapping,
        f: &mut F,
    ) -> ControlFlow<()> {
        if surjective_only {
            let missing = counts.iter().filter(|&&c| c == 0).count();
            if missing > order.len() - k {
                return ControlFlow::Continue(());
            }
        }
        if k == order.len() {
            mapping.states.clear();
            mapping.states.extend_from_slice(states);
            return f(mapping);
        }
        let (j, parent, d) = order[k];
        for fold in [Fold::Quarter, Fold::Half] {
            let s = states[parent].step(d, fold);
            // Glued neighbours already placed must agree with the new state.
            if checks[k].iter().all(|&(q, dq)| s.fold_to(dq, states[q]).is_some()) {
                states[j] = s;
                counts[s.face.index()] += 1;
                let r = rec(k + 1, order, checks, states, counts, surjective_only, mapping, f);
                counts[s.face.index()] -= 1;
                r?;
            }
        }
        ControlFlow::Continue(())
    }
    rec(0, &order, &checks, &mut states, &mut counts, surjective_only, &mut mapping, f)
}

pub fn enumerate_consistent_mappings(p: &Polyomino, opts: EnumerateOptions) -> Vec<ConsistentMapping> {
    let mut out = Vec::new();
    for_each_consistent_mapping(p, opts, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Number of consistent mappings (optionally surjective) without materialising them.
pub fn count_consistent_mappings(p: &Polyomino, opts: EnumerateOptions) -> usize {
    let mut n = 0;
    for_each_consistent_mapping(p, opts, |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

/// The mapping in which every glued edge is rolled, if it is consistent.
pub fn rolled_mapping(p: &Polyomino, root: CellState) -> Option<ConsistentMapping> {
    let mut states = vec![root; p.len()];
    for (j, parent, d) in spanning_order(p) {
        states[j] = states[parent].roll(d);
    }
    let m = ConsistentMapping { states };
    is_consistent(p, &m).then_some(m)
}

/// Cube edge covered by side `d` of cell `i`, as an unordered pair of face normals.
pub fn cube_edge_of_side(m: &ConsistentMapping, i: usize, d: Dir) -> (SignedAxis, SignedAxis) {
    let a = m.states[i].face;
    let b = m.states[i].side(d);
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn hole_cell(h: &Hole) -> Result<CellCoord, CubeError> {
    if h.kind != HoleKind::UnitSquare {
        return Err(CubeError::NotUnitSquareHole);
    }
    Ok(*h.missing_cells.iter().next().unwrap())
}

/// The four cells around a unit hole with the side of each facing the hole.
fn hole_rim(p: &Polyomino, hc: CellCoord) -> Vec<(usize, Dir)> {
    Dir::ALL
        .iter()
        .filter_map(|&d| {
            let c = hc.step(d)?;
            p.index_of(c).map(|i| (i, d.opposite()))
        })
        .collect()
}

/// True if the mapping extends to the filled hole.
pub fn is_trivial_for_hole(p: &Polyomino, m: &ConsistentMapping, h: &Hole) -> Result<bool, CubeError> {
    let hc = hole_cell(h)?;
    let rim = hole_rim(p, hc);
    Ok(all_states().iter().any(|&s| {
        rim.iter().all(|&(i, side)| {
            // The hole cell sits on the rim cell's `side`; seen from the hole it is the opposite direction.
            s.fold_to(side.opposite(), m.states[i]).is_some()
        })
    }))
}

/// Type of a unit square hole: the face containing both cube edges covered by the
/// hole's boundary. `None` when the mapping is trivial for the hole or when all
/// four boundary edges go to a single cube edge.
pub fn unit_hole_type(p: &Polyomino, m: &ConsistentMapping, h: &Hole) -> Result<Option<FaceLabel>, CubeError> {
    let hc = hole_cell(h)?;
    if is_trivial_for_hole(p, m, h)? {
        return Ok(None);
    }
    let edges: BTreeSet<(SignedAxis, SignedAxis)> =
        hole_rim(p, hc).iter().map(|&(i, side)| cube_edge_of_side(m, i, side)).collect();
    if edges.len() != 2 {
        return Ok(None);
    }
    let v: Vec<_> = edges.into_iter().collect();
    let common: Vec<SignedAxis> =
        [v[0].0, v[0].1].into_iter().filter(|a| *a == v[1].0 || *a == v[1].1).collect();
    Ok((common.len() == 1).then(|| common[0].label()))
}

/// True if every boundary edge of the unit hole maps to one cube edge.
pub fn is_single_edge_pattern(p: &Polyomino, m: &ConsistentMapping, h: &Hole) -> Result<bool, CubeError> {
    let hc = hole_cell(h)?;
    let edges: BTreeSet<(SignedAxis, SignedAxis)> =
        hole_rim(p, hc).iter().map(|&(i, side)| cube_edge_of_side(m, i, side)).collect();
    Ok(edges.len() == 1)
}

/// A mapping is good if no unit square hole is mapped with the single-edge pattern.
pub fn is_good(p: &Polyomino, m: &ConsistentMapping) -> bool {
    crate::grid::find_holes(p)
        .iter()
        .filter(|h| h.kind == HoleKind::UnitSquare)
        .all(|h| !is_single_edge_pattern(p, m, h).unwrap())
}

/// True if every cut edge of a slit hole joins two cells whose states agree across it.
pub fn is_trivial_for_slit(p: &Polyomino, m: &ConsistentMapping, h: &Hole) -> bool {
    h.cut_edges.iter().all(|cut| {
        let (a, b) = cut.cells();
        let (i, j) = (p.index_of(a).unwrap(), p.index_of(b).unwrap());
        let d = if a.row == b.row { Dir::E } else { Dir::S };
        m.states[i].fold_to(d, m.states[j]).is_some()
    })
}

/// Page direction that `d` becomes under dihedral symmetry `t`.
pub fn dihedral_dir(t: usize, d: Dir) -> Dir {
    let (r, c) = dihedral_point(t, 3, 3, 1, 1);
    let (dr, dc) = d.delta();
    let (r2, c2) = dihedral_point(t, 3, 3, (1 + dr) as usize, (1 + dc) as usize);
    let delta = (r2 as isize - r as isize, c2 as isize - c as isize);
    Dir::ALL.into_iter().find(|e| e.delta() == delta).unwrap()
}

/// The mapping carried along by `p.transformed(t)`, indexed like the transformed polyomino.
pub fn transformed_mapping(p: &Polyomino, m: &ConsistentMapping, t: usize) -> ConsistentMapping {
    let q = p.transformed(t);
    let inv = |d: Dir| Dir::ALL.into_iter().find(|&e| dihedral_dir(t, e) == d).unwrap();
    let mut states = vec![CellState::ORIGIN; q.len()];
    for (i, c) in p.cells().iter().enumerate() {
        let (r, k) = dihedral_point(t, p.rows(), p.cols(), c.row, c.col);
        let j = q.index_of(CellCoord::new(r, k)).unwrap();
        let s = m.states[i];
        states[j] = CellState { face: s.face, east: s.side(inv(Dir::E)), north: s.side(inv(Dir::N)) };
    }
    ConsistentMapping { states }
}

/// Canonical key of a mapping up to cube isometries (or rotations only).
pub fn mapping_key(m: &ConsistentMapping, rotations_only: bool) -> Vec<u8> {
    cube_isometries()
        .iter()
        .filter(|i| !rotations_only || i.is_rotation())
        .map(|iso| m.states.iter().map(|s| s.apply(iso).index() as u8).collect::<Vec<u8>>())
        .min()
        .unwrap()
}
