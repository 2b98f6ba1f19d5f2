//! Polyominoes on the square lattice: parsing, structure, boundaries and symmetry.
//!
//! Rows grow downwards (row 0 is the top row). A slit is stored as a cut between
//! two present cells whose common edge is not glued.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
}

impl CellCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        CellCoord { row, col }
    }

    pub fn step(self, d: Dir) -> Option<CellCoord> {
        let (dr, dc) = d.delta();
        let row = self.row.checked_add_signed(dr)?;
        let col = self.col.checked_add_signed(dc)?;
        Some(CellCoord { row, col })
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// Compass direction on the page. North is towards row 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn delta(self) -> (isize, isize) {
        match self {
            Dir::N => (-1, 0),
            Dir::E => (0, 1),
            Dir::S => (1, 0),
            Dir::W => (0, -1),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }

    /// Next direction clockwise on the page.
    pub fn cw(self) -> Dir {
        match self {
            Dir::N => Dir::E,
            Dir::E => Dir::S,
            Dir::S => Dir::W,
            Dir::W => Dir::N,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Dir::E | Dir::W)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CutOrientation {
    /// Cuts the edge between `(r, c)` and `(r + 1, c)`.
    H,
    /// Cuts the edge between `(r, c)` and `(r, c + 1)`.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdjacencyCut {
    pub orientation: CutOrientation,
    pub anchor: CellCoord,
}

impl AdjacencyCut {
    pub fn h(row: usize, col: usize) -> Self {
        AdjacencyCut { orientation: CutOrientation::H, anchor: CellCoord::new(row, col) }
    }

    pub fn v(row: usize, col: usize) -> Self {
        AdjacencyCut { orientation: CutOrientation::V, anchor: CellCoord::new(row, col) }
    }

    /// The cut separating `a` from its neighbour in direction `d`.
    pub fn between(a: CellCoord, d: Dir) -> Option<Self> {
        let b = a.step(d)?;
        Some(match d {
            Dir::N => AdjacencyCut::h(b.row, b.col),
            Dir::S => AdjacencyCut::h(a.row, a.col),
            Dir::W => AdjacencyCut::v(b.row, b.col),
            Dir::E => AdjacencyCut::v(a.row, a.col),
        })
    }

    pub fn cells(&self) -> (CellCoord, CellCoord) {
        let a = self.anchor;
        match self.orientation {
            CutOrientation::H => (a, CellCoord::new(a.row + 1, a.col)),
            CutOrientation::V => (a, CellCoord::new(a.row, a.col + 1)),
        }
    }

    /// Lattice endpoints of the cut edge as (row, col) vertex coordinates.
    pub fn endpoints(&self) -> ((usize, usize), (usize, usize)) {
        let a = self.anchor;
        match self.orientation {
            CutOrientation::H => ((a.row + 1, a.col), (a.row + 1, a.col + 1)),
            CutOrientation::V => ((a.row, a.col + 1), (a.row + 1, a.col + 1)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid polyomino at line {line}, column {column}: {message}")]
    Invalid { line: usize, column: usize, message: String },
    #[error("polyomino is not tree-shaped")]
    NotTreeShaped,
}

fn invalid(message: impl Into<String>) -> GridError {
    GridError::Invalid { line: 0, column: 0, message: message.into() }
}

const ABSENT: u32 = u32::MAX;

/// A connected set of grid cells together with the slits cut between them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyomino {
    rows: usize,
    cols: usize,
    cells: Vec<CellCoord>,
    cuts: BTreeSet<AdjacencyCut>,
    index: Vec<u32>,
}

impl fmt::Debug for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Polyomino {
    /// Builds and validates a polyomino inside a `rows` x `cols` box.
    pub fn new(
        rows: usize,
        cols: usize,
        cells: impl IntoIterator<Item = CellCoord>,
        cuts: impl IntoIterator<Item = AdjacencyCut>,
    ) -> Result<Self, GridError> {
        if rows == 0 || cols == 0 {
            return Err(invalid("empty bounding box"));
        }
        let mut set: BTreeSet<CellCoord> = BTreeSet::new();
        for c in cells {
            if c.row >= rows || c.col >= cols {
                return Err(invalid(format!("cell {c} outside the {rows}x{cols} box")));
            }
            set.insert(c);
        }
        let cells: Vec<CellCoord> = set.into_iter().collect();
        let mut index = vec![ABSENT; rows * cols];
        for (i, c) in cells.iter().enumerate() {
            index[c.row * cols + c.col] = i as u32;
        }
        let mut cut_set = BTreeSet::new();
        for cut in cuts {
            let (a, b) = cut.cells();
            let inside = |c: CellCoord| c.row < rows && c.col < cols && index[c.row * cols + c.col] != ABSENT;
            if !inside(a) || !inside(b) {
                return Err(invalid(format!("cut at {} does not separate two present cells", cut.anchor)));
            }
            if !cut_set.insert(cut) {
                return Err(invalid(format!("duplicate cut at {}", cut.anchor)));
            }
        }
        let p = Polyomino { rows, cols, cells, cuts: cut_set, index };
        if p.cells.is_empty() {
            return Err(invalid("no cells"));
        }
        let tight = (0..cols).any(|c| p.contains(CellCoord::new(0, c)))
            && (0..cols).any(|c| p.contains(CellCoord::new(rows - 1, c)))
            && (0..rows).any(|r| p.contains(CellCoord::new(r, 0)))
            && (0..rows).any(|r| p.contains(CellCoord::new(r, cols - 1)));
        if !tight {
            return Err(invalid("bounding box is not tight"));
        }
        if !p.is_connected() {
            return Err(invalid("cells are not connected through glued edges"));
        }
        Ok(p)
    }

    /// Builds a polyomino from arbitrary integer positions, translating them so the
    /// bounding box starts at the origin. Cuts are given as pairs of adjacent positions.
    pub fn from_positions(
        cells: &[(i64, i64)],
        cuts: &[((i64, i64), (i64, i64))],
    ) -> Result<Self, GridError> {
        let r0 = cells.iter().map(|c| c.0).min().ok_or_else(|| invalid("no cells"))?;
        let c0 = cells.iter().map(|c| c.1).min().unwrap();
        let r1 = cells.iter().map(|c| c.0).max().unwrap();
        let c1 = cells.iter().map(|c| c.1).max().unwrap();
        let to = |p: (i64, i64)| CellCoord::new((p.0 - r0) as usize, (p.1 - c0) as usize);
        let mut cut_list = Vec::new();
        for &(a, b) in cuts {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let cut = if a.0 == b.0 && b.1 == a.1 + 1 {
                AdjacencyCut { orientation: CutOrientation::V, anchor: to(a) }
            } else if a.1 == b.1 && b.0 == a.0 + 1 {
                AdjacencyCut { orientation: CutOrientation::H, anchor: to(a) }
            } else {
                return Err(invalid("cut between non-adjacent positions"));
            };
            cut_list.push(cut);
        }
        Polyomino::new((r1 - r0 + 1) as usize, (c1 - c0 + 1) as usize, cells.iter().map(|&p| to(p)), cut_list)
    }

    /// Full `rows` x `cols` rectangle without cuts.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        let cells = (0..rows).flat_map(|r| (0..cols).map(move |c| CellCoord::new(r, c)));
        Polyomino::new(rows, cols, cells, []).expect("rectangle is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Bounding size as (smaller side, larger side).
    pub fn bounding_size(&self) -> (usize, usize) {
        (self.rows.min(self.cols), self.rows.max(self.cols))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellCoord] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> CellCoord {
        self.cells[i]
    }

    pub fn cuts(&self) -> &BTreeSet<AdjacencyCut> {
        &self.cuts
    }

    pub fn contains(&self, c: CellCoord) -> bool {
        self.index_of(c).is_some()
    }

    pub fn index_of(&self, c: CellCoord) -> Option<usize> {
        if c.row >= self.rows || c.col >= self.cols {
            return None;
        }
        match self.index[c.row * self.cols + c.col] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    /// Present neighbour of cell `i` in direction `d`, glued or not.
    pub fn neighbor(&self, i: usize, d: Dir) -> Option<usize> {
        self.index_of(self.cells[i].step(d)?)
    }

    pub fn is_cut(&self, i: usize, d: Dir) -> bool {
        AdjacencyCut::between(self.cells[i], d).is_some_and(|cut| self.cuts.contains(&cut))
    }

    /// Neighbour of cell `i` in direction `d` if the shared edge is glued.
    pub fn glued(&self, i: usize, d: Dir) -> Option<usize> {
        let j = self.neighbor(i, d)?;
        if self.is_cut(i, d) {
            None
        } else {
            Some(j)
        }
    }

    /// Every glued edge once, as (cell, neighbour, direction) with direction E or S.
    pub fn glued_edges(&self) -> Vec<(usize, usize, Dir)> {
        let mut out = Vec::new();
        for i in 0..self.cells.len() {
            for d in [Dir::E, Dir::S] {
                if let Some(j) = self.glued(i, d) {
                    out.push((i, j, d));
                }
            }
        }
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        Dir::ALL.iter().filter(|&&d| self.glued(i, d).is_some()).count()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for d in Dir::ALL {
                if let Some(j) = self.glued(i, d) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        count == self.cells.len()
    }

    /// Dual graph as adjacency lists over cell indices.
    pub fn dual_graph(&self) -> Vec<Vec<usize>> {
        (0..self.cells.len())
            .map(|i| Dir::ALL.iter().filter_map(|&d| self.glued(i, d)).collect())
            .collect()
    }

    pub fn serialize(&self) -> String {
        self.to_text()
    }

    /// polyomino-text-v1 serialisation.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("POLYOMINO v1\n");
        s.push_str(&format!("rows: {}\ncols: {}\ngrid:\n", self.rows, self.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.contains(CellCoord::new(r, c)) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s.push_str("slits:\n");
        for cut in &self.cuts {
            let o = match cut.orientation {
                CutOrientation::H => 'H',
                CutOrientation::V => 'V',
            };
            s.push_str(&format!("{} {} {}\n", o, cut.anchor.row, cut.anchor.col));
        }
        s
    }

    /// Image under one of the 8 dihedral symmetries (see [`dihedral_point`]).
    pub fn transformed(&self, t: usize) -> Polyomino {
        let (rows, cols) = dihedral_dims(t, self.rows, self.cols);
        let map = |c: CellCoord| {
            let (r, q) = dihedral_point(t, self.rows, self.cols, c.row, c.col);
            CellCoord::new(r, q)
        };
        let cells: Vec<CellCoord> = self.cells.iter().map(|&c| map(c)).collect();
        let cuts = self.cuts.iter().map(|cut| {
            let (a, b) = cut.cells();
            let (a, b) = (map(a), map(b));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let orientation = if a.row == b.row { CutOrientation::V } else { CutOrientation::H };
            AdjacencyCut { orientation, anchor: a }
        });
        Polyomino::new(rows, cols, cells, cuts.collect::<Vec<_>>()).expect("symmetry preserves validity")
    }

    /// Polyomino obtained by removing cell `i`, re-tightened, or `None` if that disconnects it.
    pub fn without_cell(&self, i: usize) -> Option<Polyomino> {
        let removed = self.cells[i];
        let cells: Vec<(i64, i64)> = self
            .cells
            .iter()
            .filter(|&&c| c != removed)
            .map(|c| (c.row as i64, c.col as i64))
            .collect();
        if cells.is_empty() {
            return None;
        }
        let cuts: Vec<((i64, i64), (i64, i64))> = self
            .cuts
            .iter()
            .filter(|cut| {
                let (a, b) = cut.cells();
                a != removed && b != removed
            })
            .map(|cut| {
                let (a, b) = cut.cells();
                ((a.row as i64, a.col as i64), (b.row as i64, b.col as i64))
            })
            .collect();
        Polyomino::from_positions(&cells, &cuts).ok()
    }
}

/// Dimensions after applying dihedral symmetry `t` to a `rows` x `cols` box.
pub fn dihedral_dims(t: usize, rows: usize, cols: usize) -> (usize, usize) {
    if matches!(t, 1 | 3 | 5 | 7) {
        (cols, rows)
    } else {
        (rows, cols)
    }
}

/// Symmetry `t` in 0..8 applied to cell (r, c) of a `rows` x `cols` box.
/// 0 identity, 1..3 quarter turns, 4 mirror columns, 5 transpose, 6 mirror rows, 7 anti-transpose.
pub fn dihedral_point(t: usize, rows: usize, cols: usize, r: usize, c: usize) -> (usize, usize) {
    match t {
        0 => (r, c),
        1 => (c, rows - 1 - r),
        2 => (rows - 1 - r, cols - 1 - c),
        3 => (cols - 1 - c, r),
        4 => (r, cols - 1 - c),
        5 => (c, r),
        6 => (rows - 1 - r, c),
        7 => (cols - 1 - c, rows - 1 - r),
        _ => panic!("dihedral index out of range"),
    }
}

/// Parses polyomino-text-v1.
pub fn parse_polyomino(text: &str) -> Result<Polyomino, GridError> {
    let lines: Vec<&str> = text.lines().collect();
    let err = |line: usize, column: usize, message: &str| GridError::Parse { line, column, message: message.to_string() };
    let mut pos = 0;
    let next = |pos: &mut usize| -> Option<(usize, &str)> {
        let l = lines.get(*pos).map(|s| (*pos + 1, *s));
        *pos += 1;
        l
    };
    match next(&mut pos) {
        Some((_, l)) if l.trim_end() == "POLYOMINO v1" => {}
        Some((n, _)) => return Err(err(n, 1, "expected header \"POLYOMINO v1\"")),
        None => return Err(err(1, 1, "empty input")),
    }
    let read_num = |pos: &mut usize, key: &str| -> Result<usize, GridError> {
        let (n, l) = next(pos).ok_or_else(|| err(*pos, 1, &format!("missing \"{key}:\" line")))?;
        let rest = l
            .trim_end()
            .strip_prefix(&format!("{key}:"))
            .ok_or_else(|| err(n, 1, &format!("expected \"{key}: N\"")))?;
        rest.trim()
            .parse::<usize>()
            .map_err(|_| err(n, key.len() + 2, &format!("invalid number for {key}")))
    };
    let rows = read_num(&mut pos, "rows")?;
    let cols = read_num(&mut pos, "cols")?;
    if rows == 0 || cols == 0 {
        return Err(err(pos, 1, "dimensions must be positive"));
    }
    match next(&mut pos) {
        Some((_, l)) if l.trim_end() == "grid:" => {}
        Some((n, _)) => return Err(err(n, 1, "expected \"grid:\"")),
        None => return Err(err(pos, 1, "missing \"grid:\"")),
    }
    let mut cells = Vec::new();
    for r in 0..rows {
        let (n, l) = next(&mut pos).ok_or_else(|| err(pos, 1, "grid ended early"))?;
        let l = l.trim_end();
        if l.chars().count() != cols {
            return Err(err(n, 1, &format!("expected {cols} grid characters")));
        }
        for (c, ch) in l.chars().enumerate() {
            match ch {
                '#' => cells.push(CellCoord::new(r, c)),
                '.' => {}
                _ => return Err(err(n, c + 1, "grid characters must be '#' or '.'")),
            }
        }
    }
    match next(&mut pos) {
        Some((_, l)) if l.trim_end() == "slits:" => {}
        Some((n, _)) => return Err(err(n, 1, "expected \"slits:\"")),
        None => return Err(err(pos, 1, "missing \"slits:\"")),
    }
    let mut cuts = Vec::new();
    let mut cut_lines = Vec::new();
    while let Some((n, l)) = next(&mut pos) {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(n, 1, "slit lines have the form \"H r c\" or \"V r c\""));
        }
        let orientation = match parts[0] {
            "H" => CutOrientation::H,
            "V" => CutOrientation::V,
            _ => return Err(err(n, 1, "slit orientation must be H or V")),
        };
        let r = parts[1].parse::<usize>().map_err(|_| err(n, 3, "invalid slit row"))?;
        let c = parts[2].parse::<usize>().map_err(|_| err(n, 3 + parts[1].len() + 1, "invalid slit column"))?;
        cuts.push(AdjacencyCut { orientation, anchor: CellCoord::new(r, c) });
        cut_lines.push(n);
    }
    // Report dangling cuts with their own line number.
    for (cut, &n) in cuts.iter().zip(&cut_lines) {
        let (a, b) = cut.cells();
        let ok = |c: CellCoord| c.row < rows && c.col < cols && cells.binary_search(&c).is_ok();
        if !ok(a) || !ok(b) {
            return Err(GridError::Invalid { line: n, column: 1, message: "slit does not separate two present cells".into() });
        }
    }
    Polyomino::new(rows, cols, cells, cuts).map_err(|e| match e {
        GridError::Invalid { message, .. } => GridError::Invalid { line: 2, column: 1, message },
        other => other,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HoleKind {
    UnitSquare,
    Slit1,
    ISlit2,
    LSlit2,
    USlit3,
    NonSimple,
}

impl HoleKind {
    pub fn is_simple(self) -> bool {
        self != HoleKind::NonSimple
    }
}

/// Inclusive cell-index rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellRect {
    pub row_min: usize,
    pub row_max: usize,
    pub col_min: usize,
    pub col_max: usize,
}

impl CellRect {
    pub fn contains(&self, c: CellCoord) -> bool {
        (self.row_min..=self.row_max).contains(&c.row) && (self.col_min..=self.col_max).contains(&c.col)
    }

    pub fn height(&self) -> usize {
        self.row_max - self.row_min + 1
    }

    pub fn width(&self) -> usize {
        self.col_max - self.col_min + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub kind: HoleKind,
    pub missing_cells: BTreeSet<CellCoord>,
    pub cut_edges: BTreeSet<AdjacencyCut>,
    /// Smallest cell rectangle having the hole in its interior. May extend past
    /// the polyomino's box when the hole touches it, which cannot happen for holes.
    pub support: CellRect,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
    }
}

/// Holes: bounded components of the complement of the polyomino's interior.
pub fn find_holes(p: &Polyomino) -> Vec<Hole> {
    // Padded grid of (rows + 2) x (cols + 2) cells; padded cell (r, c) is original (r - 1, c - 1).
    let pr = p.rows + 2;
    let pc = p.cols + 2;
    let cell_node = |r: usize, c: usize| r * pc + c;
    let vertex_base = pr * pc;
    let vertex_node = |r: usize, c: usize| vertex_base + r * (pc + 1) + c;
    let cut_base = vertex_base + (pr + 1) * (pc + 1);
    let cuts: Vec<AdjacencyCut> = p.cuts.iter().copied().collect();
    let mut uf = UnionFind::new(cut_base + cuts.len());
    let present = |r: usize, c: usize| r >= 1 && c >= 1 && p.contains(CellCoord::new(r - 1, c - 1));
    for r in 0..pr {
        for c in 0..pc {
            if !present(r, c) {
                for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    uf.union(cell_node(r, c), vertex_node(r + dr, c + dc));
                }
            }
        }
    }
    for (k, cut) in cuts.iter().enumerate() {
        let ((r0, c0), (r1, c1)) = cut.endpoints();
        uf.union(cut_base + k, vertex_node(r0 + 1, c0 + 1));
        uf.union(cut_base + k, vertex_node(r1 + 1, c1 + 1));
    }
    let outside = uf.find(cell_node(0, 0));
    let mut groups: BTreeMap<usize, (BTreeSet<CellCoord>, BTreeSet<AdjacencyCut>)> = BTreeMap::new();
    for r in 1..pr - 1 {
        for c in 1..pc - 1 {
            if !present(r, c) {
                let root = uf.find(cell_node(r, c));
                if root != outside {
                    groups.entry(root).or_default().0.insert(CellCoord::new(r - 1, c - 1));
                }
            }
        }
    }
    for (k, cut) in cuts.iter().enumerate() {
        let root = uf.find(cut_base + k);
        if root != outside {
            groups.entry(root).or_default().1.insert(*cut);
        }
    }
    let mut holes: Vec<Hole> = groups
        .into_values()
        .map(|(missing_cells, cut_edges)| {
            let kind = classify_hole(&missing_cells, &cut_edges);
            let support = hole_support(&missing_cells, &cut_edges);
            Hole { kind, missing_cells, cut_edges, support }
        })
        .collect();
    holes.sort_by_key(|h| (h.support.row_min, h.support.col_min, h.missing_cells.first().copied()));
    holes
}

fn hole_support(cells: &BTreeSet<CellCoord>, cuts: &BTreeSet<AdjacencyCut>) -> CellRect {
    let mut verts: Vec<(usize, usize)> = Vec::new();
    for c in cells {
        verts.extend([(c.row, c.col), (c.row + 1, c.col + 1)]);
    }
    for cut in cuts {
        let (a, b) = cut.endpoints();
        verts.extend([a, b]);
    }
    let rmin = verts.iter().map(|v| v.0).min().unwrap();
    let rmax = verts.iter().map(|v| v.0).max().unwrap();
    let cmin = verts.iter().map(|v| v.1).min().unwrap();
    let cmax = verts.iter().map(|v| v.1).max().unwrap();
    // Enclosed holes never touch the box, so the vertex range starts at 1 or more.
    CellRect { row_min: rmin - 1, row_max: rmax, col_min: cmin - 1, col_max: cmax }
}

fn classify_hole(cells: &BTreeSet<CellCoord>, cuts: &BTreeSet<AdjacencyCut>) -> HoleKind {
    if !cells.is_empty() {
        return if cells.len() == 1 && cuts.is_empty() { HoleKind::UnitSquare } else { HoleKind::NonSimple };
    }
    let segs: Vec<((usize, usize), (usize, usize))> = cuts.iter().map(|c| c.endpoints()).collect();
    match segs.len() {
        1 => HoleKind::Slit1,
        2 => {
            let (a, b) = (segs[0], segs[1]);
            let shared = [a.0, a.1].iter().any(|v| *v == b.0 || *v == b.1);
            if !shared {
                return HoleKind::NonSimple;
            }
            if cuts.iter().next().unwrap().orientation == cuts.iter().nth(1).unwrap().orientation {
                HoleKind::ISlit2
            } else {
                HoleKind::LSlit2
            }
        }
        3 => {
            // Three sides of one unit square, which is then attached along its fourth side only.
            let mut verts: Vec<(usize, usize)> = segs.iter().flat_map(|s| [s.0, s.1]).collect();
            verts.sort();
            verts.dedup();
            if verts.len() != 4 {
                return HoleKind::NonSimple;
            }
            let r0 = verts[0].0;
            let c0 = verts[0].1;
            let square = [(r0, c0), (r0, c0 + 1), (r0 + 1, c0), (r0 + 1, c0 + 1)];
            if verts.iter().all(|v| square.contains(v)) {
                HoleKind::USlit3
            } else {
                HoleKind::NonSimple
            }
        }
        _ => HoleKind::NonSimple,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    pub is_tree_shaped: bool,
    pub is_path_shaped: bool,
    pub is_simply_connected: bool,
    /// The outer shape fills its bounding box (holes and slits allowed inside).
    pub is_rectangular: bool,
}

pub fn is_tree_shaped(p: &Polyomino) -> bool {
    p.glued_edges().len() + 1 == p.len()
}

pub fn shape_flags(p: &Polyomino) -> ShapeFlags {
    let tree = is_tree_shaped(p);
    let path = tree && (0..p.len()).all(|i| p.degree(i) <= 2);
    let holes = find_holes(p);
    let hole_cells: usize = holes.iter().map(|h| h.missing_cells.len()).sum();
    ShapeFlags {
        is_tree_shaped: tree,
        is_path_shaped: path,
        is_simply_connected: holes.is_empty(),
        is_rectangular: p.len() + hole_cells == p.rows * p.cols,
    }
}

/// Directed boundary side: the `side` of cell `cell`, traversed with the cell on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundarySide {
    pub cell: usize,
    pub side: Dir,
}

/// A closed boundary walk. `vertices[k]` is the start of `sides[k]`, in lattice (row, col).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCycle {
    pub vertices: Vec<(usize, usize)>,
    pub sides: Vec<BoundarySide>,
}

/// Start and end lattice vertex of a cell side, walked clockwise around the cell.
pub fn side_endpoints(c: CellCoord, side: Dir) -> ((usize, usize), (usize, usize)) {
    let (r, q) = (c.row, c.col);
    match side {
        Dir::N => ((r, q), (r, q + 1)),
        Dir::E => ((r, q + 1), (r + 1, q + 1)),
        Dir::S => ((r + 1, q + 1), (r + 1, q)),
        Dir::W => ((r + 1, q), (r, q)),
    }
}

fn is_boundary_side(p: &Polyomino, i: usize, d: Dir) -> bool {
    p.glued(i, d).is_none()
}

/// Next boundary side after `s`, turning around its end vertex through glued cells.
pub fn next_boundary_side(p: &Polyomino, s: BoundarySide) -> BoundarySide {
    let mut cell = s.cell;
    let mut side = s.side.cw();
    loop {
        if is_boundary_side(p, cell, side) {
            return BoundarySide { cell, side };
        }
        let next = p.glued(cell, side).unwrap();
        // In the neighbour the shared edge is the opposite side; continue with the side after it.
        side = side.opposite().cw();
        cell = next;
    }
}

/// Cells met when turning from the end of boundary side `s` to the start of the next one,
/// as the sequence of glued crossings (cell, direction to the next cell).
pub fn corner_crossings(p: &Polyomino, s: BoundarySide) -> Vec<(usize, Dir)> {
    let mut out = Vec::new();
    let mut cell = s.cell;
    let mut side = s.side.cw();
    while !is_boundary_side(p, cell, side) {
        out.push((cell, side));
        cell = p.glued(cell, side).unwrap();
        side = side.opposite().cw();
    }
    out
}

/// All boundary cycles, outer first, each traversed with the polyomino on the right
/// (clockwise on the page for the outer boundary).
pub fn boundary_components(p: &Polyomino) -> Vec<BoundaryCycle> {
    let mut sides = Vec::new();
    for i in 0..p.len() {
        for d in Dir::ALL {
            if is_boundary_side(p, i, d) {
                sides.push(BoundarySide { cell: i, side: d });
            }
        }
    }
    let mut used: BTreeSet<BoundarySide> = BTreeSet::new();
    let mut cycles = Vec::new();
    // Cell 0 is the top-left-most cell; its north side is on the outer boundary.
    let mut starts = vec![BoundarySide { cell: 0, side: Dir::N }];
    starts.extend(sides.iter().copied());
    for start in starts {
        if used.contains(&start) {
            continue;
        }
        let mut cyc = BoundaryCycle { vertices: Vec::new(), sides: Vec::new() };
        let mut s = start;
        loop {
            used.insert(s);
            cyc.vertices.push(side_endpoints(p.cell(s.cell), s.side).0);
            cyc.sides.push(s);
            s = next_boundary_side(p, s);
            if s == start {
                break;
            }
        }
        cycles.push(cyc);
    }
    cycles
}

/// Lexicographically least text serialisation over the 8 dihedral images.
pub fn canonical_form(p: &Polyomino) -> Polyomino {
    (0..8)
        .map(|t| p.transformed(t))
        .min_by(|a, b| a.to_text().cmp(&b.to_text()))
        .unwrap()
}

/// One leaf fold: `leaf` was folded onto `onto`, both in the input's coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafFold {
    pub leaf: CellCoord,
    pub onto: CellCoord,
}

/// Repeatedly folds away leaf squares while the bounding size stays at least `min_box`.
/// Cells are scanned in row-major order on every pass.
pub fn reduce_by_leaf_folds(p: &Polyomino, min_box: (usize, usize)) -> Result<(Polyomino, Vec<LeafFold>), GridError> {
    if !is_tree_shaped(p) {
        return Err(GridError::NotTreeShaped);
    }
    let (lo, hi) = (min_box.0.min(min_box.1), min_box.0.max(min_box.1));
    let mut current = p.clone();
    // Offset of the current box inside the input's coordinates.
    let (mut dr, mut dc) = (0usize, 0usize);
    let mut log = Vec::new();
    'outer: loop {
        if current.len() == 1 {
            break;
        }
        for i in 0..current.len() {
            if current.degree(i) != 1 {
                continue;
            }
            let Some(next) = current.without_cell(i) else { continue };
            let (h, w) = next.bounding_size();
            if h < lo || w < hi {
                continue;
            }
            let leaf = current.cell(i);
            let d = Dir::ALL.into_iter().find(|&d| current.glued(i, d).is_some()).unwrap();
            let onto = current.cell(current.glued(i, d).unwrap());
            log.push(LeafFold {
                leaf: CellCoord::new(leaf.row + dr, leaf.col + dc),
                onto: CellCoord::new(onto.row + dr, onto.col + dc),
            });
            let min_r = current.cells().iter().filter(|&&c| c != leaf).map(|c| c.row).min().unwrap();
            let min_c = current.cells().iter().filter(|&&c| c != leaf).map(|c| c.col).min().unwrap();
            dr += min_r;
            dc += min_c;
            current = next;
            continue 'outer;
        }
        break;
    }
    Ok((current, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(rows: &[&str]) -> Polyomino {
        let cells: Vec<(i64, i64)> = rows
            .iter()
            .enumerate()
            .flat_map(|(r, l)| l.chars().enumerate().filter(|c| c.1 == '#').map(move |(c, _)| (r as i64, c as i64)))
            .collect();
        Polyomino::from_positions(&cells, &[]).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let p = poly(&["##.", ".##", "..#"]);
        let q = parse_polyomino(&p.to_text()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_disconnected() {
        let text = "POLYOMINO v1\nrows: 1\ncols: 3\ngrid:\n#.#\nslits:\n";
        assert!(matches!(parse_polyomino(text), Err(GridError::Invalid { .. })));
    }

    #[test]
    fn rejects_loose_box() {
        let text = "POLYOMINO v1\nrows: 2\ncols: 2\ngrid:\n##\n..\nslits:\n";
        assert!(parse_polyomino(text).is_err());
    }

    #[test]
    fn dangling_cut_reports_its_line() {
        let text = "POLYOMINO v1\nrows: 1\ncols: 2\ngrid:\n##\nslits:\nH 0 0\n";
        match parse_polyomino(text) {
            Err(GridError::Invalid { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ring_has_one_unit_hole() {
        let p = poly(&["###", "#.#", "###"]);
        let holes = find_holes(&p);
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].kind, HoleKind::UnitSquare);
        assert_eq!(boundary_components(&p).len(), 2);
    }

    #[test]
    fn diagonal_missing_cells_form_one_hole() {
        let p = poly(&["####", "#.##", "##.#", "####"]);
        let holes = find_holes(&p);
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].kind, HoleKind::NonSimple);
        assert_eq!(boundary_components(&p).len(), 2);
    }

    #[test]
    fn dihedral_images_are_consistent() {
        let p = poly(&["##.", ".##"]);
        for t in 0..8 {
            let q = p.transformed(t);
            assert_eq!(q.len(), 4);
            assert_eq!(canonical_form(&q), canonical_form(&p));
        }
    }
}
