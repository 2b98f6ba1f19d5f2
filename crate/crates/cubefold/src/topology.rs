//! Integer embeddings of pseudo-foldings, their boundary links, and two link
//! obstructions: pairwise linking numbers and Fox 3-colourings.
//!
//! The cube is `[0, S]^3`. A cell in layer `l` is the full face square pushed out by
//! `l * D`. Every glued edge gets a connector routed in the cross-section of its cube
//! edge and extruded along the whole edge; nested chords use smaller detours.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{FaceLabel, SignedAxis};
use crate::grid::{boundary_components, corner_crossings, side_endpoints, Dir};
use crate::layers::{check_self_intersections, chords, PseudoFolding};

pub type Point = [i64; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("pseudo-folding has {0} self-intersections")]
    HasViolations(usize),
    #[error("no generic projection found")]
    DegenerateProjection,
    #[error("component index out of range")]
    BadComponent,
}

/// A glued edge's connector: a route in the (alpha, beta) cross-section of its cube
/// edge, from `cells.0` to `cells.1`, extruded along `axis` over `[0, S]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connector {
    pub cells: (usize, usize),
    pub side: Dir,
    pub edge: (FaceLabel, FaceLabel),
    pub base: Point,
    pub alpha: SignedAxis,
    pub beta: SignedAxis,
    pub axis: usize,
    pub route: Vec<[i64; 2]>,
    pub depth: i64,
}

impl Connector {
    fn point(&self, ab: [i64; 2], s: i64) -> Point {
        let mut p = self.base;
        let (va, vb) = (self.alpha.vector(), self.beta.vector());
        for k in 0..3 {
            p[k] += ab[0] * va[k] + ab[1] * vb[k];
        }
        p[self.axis] += s;
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedState {
    pub scale: i64,
    pub spacing: i64,
    pub pf: PseudoFolding,
    /// Corners of each cell square in page order NW, NE, SE, SW.
    pub squares: Vec<[Point; 4]>,
    pub connectors: Vec<Connector>,
    by_side: BTreeMap<(usize, Dir), usize>,
}

/// An axis-aligned closed box standing for one flat piece of the embedded surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece {
    pub cells: (usize, usize),
    pub min: Point,
    pub max: Point,
}

impl Piece {
    fn from_points(cells: (usize, usize), pts: &[Point]) -> Piece {
        let mut min = pts[0];
        let mut max = pts[0];
        for p in pts {
            for k in 0..3 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        Piece { cells, min, max }
    }

    pub fn intersects(&self, o: &Piece) -> bool {
        (0..3).all(|k| self.max[k] >= o.min[k] && o.max[k] >= self.min[k])
    }

    fn shares_cell(&self, o: &Piece) -> bool {
        let a = [self.cells.0, self.cells.1];
        a.contains(&o.cells.0) || a.contains(&o.cells.1)
    }
}

fn face_plane(n: SignedAxis, s: i64) -> i64 {
    if n.is_positive() {
        s
    } else {
        0
    }
}

/// Nesting depth of each chord on one cube edge: one more than the deepest chord inside it.
fn nesting_depths(spans: &[(i64, i64)]) -> Vec<i64> {
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&k| spans[k].1 - spans[k].0);
    let mut depth = vec![0i64; spans.len()];
    for (n, &k) in order.iter().enumerate() {
        let inner = order[..n]
            .iter()
            .filter(|&&j| spans[k].0 < spans[j].0 && spans[j].1 < spans[k].1)
            .map(|&j| depth[j])
            .max()
            .unwrap_or(0);
        depth[k] = inner + 1;
    }
    depth
}

pub fn embed(pf: &PseudoFolding) -> Result<EmbeddedState, TopologyError> {
    let v = check_self_intersections(pf);
    if !v.is_empty() {
        return Err(TopologyError::HasViolations(v.len()));
    }
    let p = &pf.polyomino;
    let m = &pf.mapping;
    let layers = &pf.layers.layers;
    let cs = chords(p, m);
    let mut per_edge = [0i64; 12];
    for c in &cs {
        per_edge[c.edge] += 1;
    }
    let spacing = per_edge.iter().copied().max().unwrap_or(0) + 1;
    let max_layer = layers.iter().copied().max().unwrap_or(1) as i64;
    let scale = 4 * spacing * (max_layer + 1);
    let half = scale / 2;
    let squares = (0..p.len())
        .map(|i| {
            let s = m.states[i];
            let out = layers[i] as i64 * spacing;
            let (n, e, u) = (s.face.vector(), s.east.vector(), s.north.vector());
            let centre: Point = std::array::from_fn(|k| half + n[k] * (half + out));
            let corner = |de: i64, dn: i64| -> Point { std::array::from_fn(|k| centre[k] + half * (de * e[k] + dn * u[k])) };
            [corner(-1, 1), corner(1, 1), corner(1, -1), corner(-1, -1)]
        })
        .collect();

    // Keys on each edge's terminal line, then depths per edge.
    let key = |first: bool, l: u32| if first { -(l as i64) } else { l as i64 };
    let mut depth = vec![0i64; cs.len()];
    for e in 0..12 {
        let idx: Vec<usize> = (0..cs.len()).filter(|&k| cs[k].edge == e).collect();
        let spans: Vec<(i64, i64)> = idx
            .iter()
            .map(|&k| {
                let c = &cs[k];
                let (x, y) = (key(c.a_first, layers[c.a]), key(c.b_first, layers[c.b]));
                (x.min(y), x.max(y))
            })
            .collect();
        for (d, &k) in nesting_depths(&spans).into_iter().zip(&idx) {
            depth[k] = d;
        }
    }

    let glued = p.glued_edges();
    let mut connectors = Vec::with_capacity(cs.len());
    let mut by_side = BTreeMap::new();
    for (k, c) in cs.iter().enumerate() {
        let (a, b, d) = glued[k];
        let sa = m.states[a];
        let (fa, side) = (sa.face, sa.side(d));
        let (alpha, beta) = if fa.label() == c.labels.0 { (fa, side) } else { (side, fa) };
        let axis = 3 - alpha.axis() - beta.axis();
        let mut base = [0i64; 3];
        base[alpha.axis()] = face_plane(alpha, scale);
        base[beta.axis()] = face_plane(beta, scale);
        let t = depth[k];
        let term = |first: bool, l: u32| -> [i64; 2] {
            let off = l as i64 * spacing;
            if first {
                [off, 0]
            } else {
                [0, off]
            }
        };
        let (ta, tb) = (term(c.a_first, layers[a]), term(c.b_first, layers[b]));
        let route = match (c.a_first, c.b_first) {
            (true, true) => vec![ta, [ta[0], t], [tb[0], t], tb],
            (false, false) => vec![ta, [t, ta[1]], [t, tb[1]], tb],
            (true, false) => vec![ta, [ta[0], t], [t, t], [t, tb[1]], tb],
            (false, true) => vec![ta, [t, ta[1]], [t, t], [tb[0], t], tb],
        };
        by_side.insert((a, d), connectors.len());
        by_side.insert((b, d.opposite()), connectors.len());
        connectors.push(Connector { cells: (a, b), side: d, edge: c.labels, base, alpha, beta, axis, route, depth: t });
    }
    Ok(EmbeddedState { scale, spacing, pf: pf.clone(), squares, connectors, by_side })
}

impl EmbeddedState {
    /// Cell squares and extruded connector segments.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self.squares.iter().enumerate().map(|(i, sq)| Piece::from_points((i, i), sq)).collect();
        for c in &self.connectors {
            for w in c.route.windows(2) {
                let pts = [c.point(w[0], 0), c.point(w[1], 0), c.point(w[0], self.scale), c.point(w[1], self.scale)];
                out.push(Piece::from_points(c.cells, &pts));
            }
        }
        out
    }

    /// Pairs of pieces with no common cell that touch or overlap.
    pub fn overlapping_pieces(&self) -> Vec<(Piece, Piece)> {
        let ps = self.pieces();
        let mut out = Vec::new();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                if !ps[i].shares_cell(&ps[j]) && ps[i].intersects(&ps[j]) {
                    out.push((ps[i], ps[j]));
                }
            }
        }
        out
    }

    pub fn is_disjoint(&self) -> bool {
        self.overlapping_pieces().is_empty()
    }

    fn corner(&self, i: usize, v: (usize, usize)) -> Point {
        let c = self.pf.polyomino.cell(i);
        let k = match (v.0 == c.row, v.1 == c.col) {
            (true, true) => 0,
            (true, false) => 1,
            (false, false) => 2,
            (false, true) => 3,
        };
        self.squares[i][k]
    }

    /// Route of the connector on side `d` of `x`, at lattice vertex `v`, from `x` to its neighbour.
    fn crossing(&self, x: usize, d: Dir, v: (usize, usize)) -> Vec<Point> {
        let c = &self.connectors[self.by_side[&(x, d)]];
        let start = self.corner(x, v);
        let s = start[c.axis] - c.base[c.axis];
        let mut pts: Vec<Point> = c.route.iter().map(|&ab| c.point(ab, s)).collect();
        if c.cells.0 != x {
            pts.reverse();
        }
        pts
    }
}

/// Closed polylines, one per boundary component of the polyomino (outer first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLink {
    pub components: Vec<Vec<Point>>,
}

impl fmt::Display for BoundaryLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, comp) in self.components.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            writeln!(f, "component {k}")?;
            for p in comp {
                writeln!(f, "{} {} {}", p[0], p[1], p[2])?;
            }
        }
        Ok(())
    }
}

fn push_point(out: &mut Vec<Point>, p: Point) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}

/// Removes repeated points, back-tracking spikes and straight-through vertices.
fn simplify(mut pts: Vec<Point>) -> Vec<Point> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut changed = false;
        let mut out: Vec<Point> = Vec::with_capacity(n);
        for k in 0..n {
            let prev = if out.is_empty() { pts[n - 1] } else { *out.last().unwrap() };
            let cur = pts[k];
            let next = pts[(k + 1) % n];
            let d1: [i64; 3] = std::array::from_fn(|i| cur[i] - prev[i]);
            let d2: [i64; 3] = std::array::from_fn(|i| next[i] - cur[i]);
            let cross = [d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0]];
            if cur == prev || (cross == [0, 0, 0]) {
                changed = true;
                continue;
            }
            out.push(cur);
        }
        if !changed {
            return out;
        }
        pts = out;
    }
}

pub fn boundary_link(es: &EmbeddedState) -> BoundaryLink {
    let p = &es.pf.polyomino;
    let components = boundary_components(p)
        .iter()
        .map(|cyc| {
            let mut pts = Vec::new();
            for s in &cyc.sides {
                let (from, to) = side_endpoints(p.cell(s.cell), s.side);
                push_point(&mut pts, es.corner(s.cell, from));
                push_point(&mut pts, es.corner(s.cell, to));
                for (x, d) in corner_crossings(p, *s) {
                    for q in es.crossing(x, d, to) {
                        push_point(&mut pts, q);
                    }
                }
            }
            if pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            simplify(pts)
        })
        .collect();
    BoundaryLink { components }
}

/// One crossing of a diagram as seen along a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussEntry {
    pub crossing: usize,
    pub over: bool,
    pub sign: i8,
}

/// Self-crossings of one component in order along it; each label appears twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussCode {
    pub entries: Vec<GaussEntry>,
}

impl GaussCode {
    pub fn crossings(&self) -> usize {
        self.entries.len() / 2
    }

    /// Parses "O1+ U2- ..." style codes.
    pub fn parse(text: &str) -> Option<GaussCode> {
        let mut entries = Vec::new();
        for tok in text.split_whitespace() {
            let over = match tok.chars().next()? {
                'O' => true,
                'U' => false,
                _ => return None,
            };
            let sign = match tok.chars().last()? {
                '+' => 1,
                '-' => -1,
                _ => return None,
            };
            let crossing = tok[1..tok.len() - 1].parse().ok()?;
            entries.push(GaussEntry { crossing, over, sign });
        }
        Some(GaussCode { entries })
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("{}{}{}", if e.over { 'O' } else { 'U' }, e.crossing, if e.sign > 0 { '+' } else { '-' }))
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// A parallel projection along (1, p, p^2) with exact integer coordinates.
#[derive(Clone, Copy, Debug)]
struct Projection {
    dir: [i128; 3],
    u: [i128; 3],
    v: [i128; 3],
}

impl Projection {
    fn new(p: i128) -> Self {
        let dir = [1, p, p * p];
        let u = [p, -1, 0];
        let v = [dir[1] * u[2] - dir[2] * u[1], dir[2] * u[0] - dir[0] * u[2], dir[0] * u[1] - dir[1] * u[0]];
        Projection { dir, u, v }
    }

    fn project(&self, x: Point) -> ([i128; 2], i128) {
        let d = |a: [i128; 3]| a[0] * x[0] as i128 + a[1] * x[1] as i128 + a[2] * x[2] as i128;
        ([d(self.u), d(self.v)], d(self.dir))
    }
}

const PROJECTION_PARAMS: [i128; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn orient(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> i128 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

/// A crossing between segment `sa` of component `ca` and `sb` of `cb`, with the
/// position along each segment as a fraction.
#[derive(Clone, Copy, Debug)]
struct RawCrossing {
    ca: usize,
    sa: usize,
    ta: (i128, i128),
    cb: usize,
    sb: usize,
    tb: (i128, i128),
    a_over: bool,
    sign: i8,
}

struct Diagram {
    crossings: Vec<RawCrossing>,
}

fn cmp_frac(a: (i128, i128), b: (i128, i128)) -> std::cmp::Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

fn diagram(link: &BoundaryLink, proj: Projection) -> Option<Diagram> {
    let comps: Vec<Vec<([i128; 2], i128)>> =
        link.components.iter().map(|c| c.iter().map(|&x| proj.project(x)).collect()).collect();
    let mut segs = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        let n = c.len();
        for k in 0..n {
            let (a, b) = (c[k], c[(k + 1) % n]);
            if a.0 == b.0 {
                return None;
            }
            segs.push((ci, k, n, a, b));
        }
    }
    let mut crossings = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (ci, ki, ni, a1, a2) = segs[i];
            let (cj, kj, _, b1, b2) = segs[j];
            let adjacent = ci == cj && (ki + 1) % ni == kj || ci == cj && (kj + 1) % ni == ki;
            let (p1, p2, q1, q2) = (a1.0, a2.0, b1.0, b2.0);
            let d1 = orient(q1, q2, p1);
            let d2 = orient(q1, q2, p2);
            let d3 = orient(p1, p2, q1);
            let d4 = orient(p1, p2, q2);
            if adjacent {
                // Consecutive segments meet at their shared vertex only.
                let shared_is_a2 = (ki + 1) % ni == kj;
                let (far_a, far_b, shared) = if shared_is_a2 { (p1, q2, p2) } else { (p2, q1, p1) };
                if orient(far_a, shared, far_b) == 0 {
                    let da = [far_a[0] - shared[0], far_a[1] - shared[1]];
                    let db = [far_b[0] - shared[0], far_b[1] - shared[1]];
                    if da[0] * db[0] + da[1] * db[1] > 0 {
                        return None;
                    }
                }
                continue;
            }
            if (d1 == 0 && on_segment(q1, q2, p1))
                || (d2 == 0 && on_segment(q1, q2, p2))
                || (d3 == 0 && on_segment(p1, p2, q1))
                || (d4 == 0 && on_segment(p1, p2, q2))
            {
                return None;
            }
            if (d1 > 0) == (d2 > 0) || (d3 > 0) == (d4 > 0) {
                continue;
            }
            // p1 + ta (p2 - p1) = q1 + tb (q2 - q1)
            let r = [p2[0] - p1[0], p2[1] - p1[1]];
            let s = [q2[0] - q1[0], q2[1] - q1[1]];
            let w = [q1[0] - p1[0], q1[1] - p1[1]];
            let den = r[0] * s[1] - r[1] * s[0];
            let mut ta = (w[0] * s[1] - w[1] * s[0], den);
            let mut tb = (w[0] * r[1] - w[1] * r[0], den);
            if den < 0 {
                ta = (-ta.0, -ta.1);
                tb = (-tb.0, -tb.1);
            }
            // Heights at the crossing, scaled by the common denominator.
            let ha = a1.1 * ta.1 + ta.0 * (a2.1 - a1.1);
            let hb = b1.1 * tb.1 + tb.0 * (b2.1 - b1.1);
            if ha == hb {
                return None;
            }
            let a_over = ha > hb;
            let (over, under) = if a_over { (r, s) } else { (s, r) };
            let sign = if over[0] * under[1] - over[1] * under[0] > 0 { 1 } else { -1 };
            crossings.push(RawCrossing { ca: ci, sa: ki, ta, cb: cj, sb: kj, tb, a_over, sign });
        }
    }
    Some(Diagram { crossings })
}

fn first_diagram(link: &BoundaryLink) -> Result<Diagram, TopologyError> {
    PROJECTION_PARAMS
        .iter()
        .find_map(|&p| diagram(link, Projection::new(p)))
        .ok_or(TopologyError::DegenerateProjection)
}

fn lk_from(d: &Diagram, i: usize, j: usize) -> i64 {
    let sum: i64 = d
        .crossings
        .iter()
        .filter(|c| (c.ca == i && c.cb == j) || (c.ca == j && c.cb == i))
        .map(|c| c.sign as i64)
        .sum();
    debug_assert!(sum % 2 == 0);
    sum / 2
}

pub fn linking_number(link: &BoundaryLink, i: usize, j: usize) -> Result<i64, TopologyError> {
    if i >= link.components.len() || j >= link.components.len() {
        return Err(TopologyError::BadComponent);
    }
    if i == j {
        return Ok(0);
    }
    Ok(lk_from(&first_diagram(link)?, i, j))
}

/// Linking number under the projection with parameter `p`, if that projection is generic.
pub fn linking_number_along(link: &BoundaryLink, i: usize, j: usize, p: i64) -> Option<i64> {
    diagram(link, Projection::new(p as i128)).map(|d| lk_from(&d, i, j))
}

fn gauss_from(d: &Diagram, comp: usize) -> GaussCode {
    let mut occ: Vec<(usize, (i128, i128), usize, bool, i8)> = Vec::new();
    let mut label = 0;
    for c in &d.crossings {
        if c.ca == comp && c.cb == comp {
            occ.push((c.sa, c.ta, label, c.a_over, c.sign));
            occ.push((c.sb, c.tb, label, !c.a_over, c.sign));
            label += 1;
        }
    }
    occ.sort_by(|x, y| x.0.cmp(&y.0).then(cmp_frac(x.1, y.1)));
    // Relabel by first appearance.
    let mut rename = vec![usize::MAX; label];
    let mut next = 0;
    for o in &occ {
        if rename[o.2] == usize::MAX {
            rename[o.2] = next;
            next += 1;
        }
    }
    GaussCode { entries: occ.iter().map(|o| GaussEntry { crossing: rename[o.2], over: o.3, sign: o.4 }).collect() }
}

pub fn gauss_code(link: &BoundaryLink, comp: usize) -> Result<GaussCode, TopologyError> {
    if comp >= link.components.len() {
        return Err(TopologyError::BadComponent);
    }
    Ok(gauss_from(&first_diagram(link)?, comp))
}

fn rank_mod3(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = if rows[rank][c] == 1 { 1 } else { 2 };
        for x in rows[rank].iter_mut() {
            *x = (*x * inv) % 3;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + 3 * 3 - f * rows[rank][k]) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True if the knot diagram admits a non-constant Fox 3-colouring.
pub fn fox3_nontrivial(code: &GaussCode) -> bool {
    let c = code.crossings();
    if c == 0 {
        return false;
    }
    let mut over_arc = vec![0usize; c];
    let mut in_arc = vec![0usize; c];
    let mut out_arc = vec![0usize; c];
    let mut arc = 0;
    for e in &code.entries {
        if e.over {
            over_arc[e.crossing] = arc;
        } else {
            in_arc[e.crossing] = arc;
            arc += 1;
            out_arc[e.crossing] = arc;
        }
    }
    let arcs = arc;
    let wrap = |a: usize| if a == arcs { 0 } else { a };
    let rows: Vec<Vec<u8>> = (0..c)
        .map(|x| {
            let mut row = vec![0u8; arcs];
            row[wrap(over_arc[x])] = (row[wrap(over_arc[x])] + 2) % 3;
            row[wrap(in_arc[x])] = (row[wrap(in_arc[x])] + 2) % 3;
            row[wrap(out_arc[x])] = (row[wrap(out_arc[x])] + 2) % 3;
            row
        })
        .collect();
    arcs - rank_mod3(rows) >= 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    SelfIntersection { count: usize },
    Linking { components: (usize, usize), linking_number: i64 },
    Knotted { component: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Invalid { obstruction: Obstruction },
    Unknown,
}

/// Verdict on one pseudo-folding. A knotted component is reported before any linking.
pub fn validity_verdict(pf: &PseudoFolding) -> Validity {
    let es = match embed(pf) {
        Ok(es) => es,
        Err(TopologyError::HasViolations(count)) => {
            return Validity::Invalid { obstruction: Obstruction::SelfIntersection { count } }
        }
        Err(_) => return Validity::Unknown,
    };
    let link = boundary_link(&es);
    if link.components.len() == 1 {
        return Validity::Valid;
    }
    let Ok(d) = first_diagram(&link) else { return Validity::Unknown };
    let n = link.components.len();
    for i in 0..n {
        if fox3_nontrivial(&gauss_from(&d, i)) {
            return Validity::Invalid { obstruction: Obstruction::Knotted { component: i } };
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let lk = lk_from(&d, i, j);
            if lk != 0 {
                return Validity::Invalid { obstruction: Obstruction::Linking { components: (i, j), linking_number: lk } };
            }
        }
    }
    Validity::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_is_three_colourable() {
        let t = GaussCode::parse("O0+ U1+ O2+ U0+ O1+ U2+").unwrap();
        assert!(fox3_nontrivial(&t));
        let unknot = GaussCode::parse("O0+ U0+").unwrap();
        assert!(!fox3_nontrivial(&unknot));
        assert!(!fox3_nontrivial(&GaussCode::default()));
        // Figure-eight knot has determinant 5, so no 3-colouring.
        let fig8 = GaussCode::parse("O0- U1- O2+ U3+ O1- U0- O3+ U2+").unwrap();
        assert!(!fox3_nontrivial(&fig8));
    }

    #[test]
    fn nesting_counts_inner_chords() {
        assert_eq!(nesting_depths(&[(-3, 3), (-2, 2), (-1, 1), (4, 5)]), vec![3, 2, 1, 1]);
    }

    #[test]
    fn hopf_link_has_linking_number_one() {
        let a = vec![[0, 0, 0], [4, 0, 0], [4, 4, 0], [0, 4, 0]];
        let b = vec![[2, 2, -2], [2, 2, 2], [2, 6, 2], [2, 6, -2]];
        let link = BoundaryLink { components: vec![a.clone(), b] };
        let lk = linking_number(&link, 0, 1).unwrap();
        assert_eq!(lk.abs(), 1);
        let far = vec![[10, 10, 10], [14, 10, 10], [14, 14, 10], [10, 14, 10]];
        let link = BoundaryLink { components: vec![a, far] };
        assert_eq!(linking_number(&link, 0, 1).unwrap(), 0);
    }
}
