//! Polyomino families up to symmetry and the counts derived from them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{for_each_consistent_mapping, EnumerateOptions, Quotient};
use crate::grid::{canonical_form, dihedral_dims, dihedral_point, is_tree_shaped, Polyomino};
use crate::layers::{find_layer_map, stamp_fold_count, SearchLimits};
use crate::solve::folds_simply_connected;

/// Largest box area the generator accepts by default (a 5 x 6 box).
pub const DEFAULT_MAX_AREA: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    TreeShaped,
    CubeNet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub bbox: (usize, usize),
    pub allow_slits: bool,
}

impl FamilySpec {
    pub fn tree(h: usize, w: usize) -> Self {
        FamilySpec { family: Family::TreeShaped, bbox: (h.min(w), h.max(w)), allow_slits: false }
    }

    pub fn tree_with_slits(h: usize, w: usize) -> Self {
        FamilySpec { allow_slits: true, ..Self::tree(h, w) }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("box {0}x{1} exceeds the generator limit")]
    LimitExceeded(usize, usize),
    #[error("box must be non-empty")]
    EmptyBox,
}

/// Cell and edge index tables for one box, with the symmetries that keep its shape.
struct BoxTables {
    h: usize,
    w: usize,
    /// Neighbour cells and the edge between them, per cell.
    adj: Vec<Vec<(usize, usize)>>,
    cell_perm: Vec<Vec<usize>>,
    edge_perm: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl BoxTables {
    fn new(h: usize, w: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..h {
            for c in 0..w {
                if c + 1 < w {
                    edges.push((r * w + c, r * w + c + 1));
                }
                if r + 1 < h {
                    edges.push((r * w + c, (r + 1) * w + c));
                }
            }
        }
        let edge_index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mut adj = vec![Vec::new(); h * w];
        for (k, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let syms: Vec<usize> = (0..8).filter(|&t| dihedral_dims(t, h, w) == (h, w)).collect();
        let cell_perm: Vec<Vec<usize>> = syms
            .iter()
            .map(|&t| {
                (0..h * w)
                    .map(|i| {
                        let (r, c) = dihedral_point(t, h, w, i / w, i % w);
                        r * w + c
                    })
                    .collect()
            })
            .collect();
        let edge_perm = cell_perm
            .iter()
            .map(|perm| {
                edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (perm[a], perm[b]);
                        edge_index[&(x.min(y), x.max(y))]
                    })
                    .collect()
            })
            .collect();
        BoxTables { h, w, adj, cell_perm, edge_perm, edges }
    }

    fn permute(bits: u128, perm: &[usize]) -> u128 {
        let mut out = 0u128;
        let mut b = bits;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out |= 1u128 << perm[i];
            b &= b - 1;
        }
        out
    }

    fn canonical(&self, cells: u128, glued: u128) -> (u128, u128) {
        (0..self.cell_perm.len())
            .map(|k| (Self::permute(cells, &self.cell_perm[k]), Self::permute(glued, &self.edge_perm[k])))
            .min()
            .unwrap()
    }

    fn spans_box(&self, cells: u128) -> bool {
        let (h, w) = (self.h, self.w);
        let row = |r: usize| (0..w).any(|c| cells >> (r * w + c) & 1 == 1);
        let col = |c: usize| (0..h).any(|r| cells >> (r * w + c) & 1 == 1);
        row(0) && row(h - 1) && col(0) && col(w - 1)
    }

    fn polyomino(&self, cells: u128, glued: u128) -> Polyomino {
        let w = self.w;
        let present: Vec<usize> = (0..self.h * w).filter(|&i| cells >> i & 1 == 1).collect();
        let positions: Vec<(i64, i64)> = present.iter().map(|&i| ((i / w) as i64, (i % w) as i64)).collect();
        let cuts: Vec<((i64, i64), (i64, i64))> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, &(a, b))| cells >> a & 1 == 1 && cells >> b & 1 == 1 && glued >> k & 1 == 0)
            .map(|(_, &(a, b))| (((a / w) as i64, (a % w) as i64), ((b / w) as i64, (b % w) as i64)))
            .collect();
        Polyomino::from_positions(&positions, &cuts).expect("generated shape is valid")
    }
}

/// Tree-shaped polyominoes of exact bounding size, one per dihedral orbit, in canonical
/// form and sorted by their text. Grows trees by adding leaf squares inside the box.
pub fn enumerate_trees(spec: FamilySpec, max_area: usize) -> Result<Vec<Polyomino>, EnumerateError> {
    let (h, w) = (spec.bbox.0.min(spec.bbox.1), spec.bbox.0.max(spec.bbox.1));
    if h == 0 {
        return Err(EnumerateError::EmptyBox);
    }
    if h * w > max_area || h * w > 64 {
        return Err(EnumerateError::LimitExceeded(h, w));
    }
    let t = BoxTables::new(h, w);
    let mut level: HashSet<(u128, u128)> = (0..h * w).map(|i| (1u128 << i, 0u128)).collect();
    let mut found: BTreeSet<(u128, u128)> = BTreeSet::new();
    while !level.is_empty() {
        for &(cells, glued) in &level {
            if t.spans_box(cells) {
                found.insert(t.canonical(cells, glued));
            }
        }
        let mut next = HashSet::new();
        for &(cells, glued) in &level {
            for x in 0..h * w {
                if cells >> x & 1 == 1 {
                    continue;
                }
                let touching: Vec<usize> =
                    t.adj[x].iter().filter(|&&(y, _)| cells >> y & 1 == 1).map(|&(_, e)| e).collect();
                if touching.is_empty() || (!spec.allow_slits && touching.len() > 1) {
                    continue;
                }
                for e in touching {
                    next.insert((cells | 1u128 << x, glued | 1u128 << e));
                }
            }
        }
        level = next;
    }
    let mut out: Vec<Polyomino> = found.into_iter().map(|(c, g)| canonical_form(&t.polyomino(c, g))).collect();
    debug_assert!(out.iter().all(is_tree_shaped));
    out.sort_by_cached_key(|p| p.to_text());
    Ok(out)
}

pub fn enumerate_family(spec: FamilySpec) -> Result<Vec<Polyomino>, EnumerateError> {
    match spec.family {
        Family::TreeShaped => enumerate_trees(spec, DEFAULT_MAX_AREA),
        Family::CubeNet => Ok(cube_nets().into_iter().map(|n| n.polyomino).collect()),
    }
}

/// Free polyominoes with `n` cells, no slits, in canonical form.
pub fn free_polyominoes(n: usize) -> Vec<Polyomino> {
    let mut level: BTreeSet<Vec<(i64, i64)>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for cells in &level {
            for &(r, c) in cells {
                for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    let q = (r + dr, c + dc);
                    if cells.contains(&q) {
                        continue;
                    }
                    let mut grown = cells.clone();
                    grown.push(q);
                    let p = canonical_form(&Polyomino::from_positions(&grown, &[]).unwrap());
                    next.insert(p.cells().iter().map(|c| (c.row as i64, c.col as i64)).collect());
                }
            }
        }
        level = next;
    }
    level.iter().map(|cells| Polyomino::from_positions(cells, &[]).unwrap()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NetType {
    #[serde(rename = "1-4-1")]
    OneFourOne,
    #[serde(rename = "2-3-1")]
    TwoThreeOne,
    #[serde(rename = "2-2-2")]
    TwoTwoTwo,
    #[serde(rename = "3-3")]
    ThreeThree,
}

impl NetType {
    pub fn name(self) -> &'static str {
        match self {
            NetType::OneFourOne => "1-4-1",
            NetType::TwoThreeOne => "2-3-1",
            NetType::TwoTwoTwo => "2-2-2",
            NetType::ThreeThree => "3-3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeNet {
    pub polyomino: Polyomino,
    pub net_type: NetType,
}

/// Row lengths along the short side of the box determine the type.
fn net_type(p: &Polyomino) -> Option<NetType> {
    let q = if p.rows() <= p.cols() { p.clone() } else { p.transformed(5) };
    let mut lens: Vec<usize> = (0..q.rows()).map(|r| q.cells().iter().filter(|c| c.row == r).count()).collect();
    lens.sort_unstable();
    match lens.as_slice() {
        [1, 1, 4] => Some(NetType::OneFourOne),
        [1, 2, 3] => Some(NetType::TwoThreeOne),
        [2, 2, 2] => Some(NetType::TwoTwoTwo),
        [3, 3] => Some(NetType::ThreeThree),
        _ => None,
    }
}

/// True if some consistent mapping covers every face exactly once and admits a layer map.
pub fn is_cube_net(p: &Polyomino) -> bool {
    if p.len() != 6 {
        return false;
    }
    let mut ok = false;
    let opts = EnumerateOptions { surjective_only: true, quotient: Quotient::Isometries };
    for_each_consistent_mapping(p, opts, |m| {
        if m.multiplicities()[1..].iter().all(|&k| k == 1) && find_layer_map(p, m, SearchLimits::default()).layer_map.is_some() {
            ok = true;
            return std::ops::ControlFlow::Break(());
        }
        std::ops::ControlFlow::Continue(())
    });
    ok
}

pub fn cube_nets() -> Vec<CubeNet> {
    free_polyominoes(6)
        .into_iter()
        .filter(is_cube_net)
        .map(|p| {
            let net_type = net_type(&p).expect("every net has one of the four types");
            CubeNet { polyomino: p, net_type }
        })
        .collect()
}

pub fn net_type_histogram(nets: &[CubeNet]) -> BTreeMap<NetType, usize> {
    let mut h = BTreeMap::new();
    for n in nets {
        *h.entry(n.net_type).or_insert(0) += 1;
    }
    h
}

fn leaf_indices(p: &Polyomino) -> Vec<usize> {
    (0..p.len()).filter(|&i| p.degree(i) == 1).collect()
}

/// Foldable trees of the family all of whose box-preserving leaf removals are not foldable.
pub fn minimal_foldable_from(family: &[Polyomino]) -> Vec<Polyomino> {
    let foldable: Vec<bool> = family.par_iter().map(folds_simply_connected).collect();
    let by_text: BTreeMap<String, bool> = family.iter().zip(&foldable).map(|(p, &f)| (p.to_text(), f)).collect();
    family
        .iter()
        .zip(&foldable)
        .filter(|&(_, &f)| f)
        .filter(|(p, _)| {
            let (h, w) = p.bounding_size();
            leaf_indices(p).into_iter().all(|i| {
                let Some(q) = p.without_cell(i) else { return true };
                let (qh, qw) = q.bounding_size();
                if (qh.min(qw), qh.max(qw)) != (h.min(w), h.max(w)) {
                    return true;
                }
                let key = canonical_form(&q).to_text();
                !by_text.get(&key).copied().unwrap_or_else(|| folds_simply_connected(&q))
            })
        })
        .map(|(p, _)| p.clone())
        .collect()
}

/// Minimal foldable trees of exact bounding size, over trees whose non-tree adjacencies are slits.
pub fn minimal_foldable_set(bbox: (usize, usize)) -> Result<Vec<Polyomino>, EnumerateError> {
    let family = enumerate_family(FamilySpec::tree_with_slits(bbox.0, bbox.1))?;
    Ok(minimal_foldable_from(&family))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub millis: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub checks: Vec<CountCheck>,
    /// Notes on conventions that were needed to reach the counts.
    pub notes: Vec<String>,
}

impl CountReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn record<T: ToString + PartialEq>(&mut self, name: &str, expected: T, actual: T, start: Instant) {
        self.checks.push(CountCheck {
            name: name.into(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
            millis: start.elapsed().as_millis(),
        });
    }
}

pub const STAMP_COUNTS: [u64; 10] = [1, 2, 6, 16, 50, 144, 462, 1392, 4536, 14060];

pub fn verify_counts() -> CountReport {
    verify_counts_with(&enumerate_family)
}

/// Runs every count check using `generate` for the tree families.
pub fn verify_counts_with(generate: &dyn Fn(FamilySpec) -> Result<Vec<Polyomino>, EnumerateError>) -> CountReport {
    let mut report = CountReport::default();

    let start = Instant::now();
    let nets = cube_nets();
    report.record("cube nets", 11, nets.len(), start);
    let hist: Vec<String> = net_type_histogram(&nets).iter().map(|(t, n)| format!("{}:{n}", t.name())).collect();
    report.record("cube net types", "1-4-1:6 2-3-1:3 2-2-2:1 3-3:1".to_string(), hist.join(" "), start);

    let start = Instant::now();
    let stamps: Vec<u64> = (1..=10).map(stamp_fold_count).collect();
    let fmt = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    report.record("stamp foldings k=1..10", fmt(&STAMP_COUNTS), fmt(&stamps), start);

    for ((h, w), trees, minimal) in [((3, 3), 124, 7), ((3, 4), 3942, 45)] {
        let start = Instant::now();
        let spec = FamilySpec::tree(h, w);
        let mut family = generate(spec).unwrap_or_default();
        let mut name = format!("tree-shaped {h}x{w}");
        if family.len() != trees {
            let with_slits = generate(FamilySpec { allow_slits: true, ..spec }).unwrap_or_default();
            report.notes.push(format!(
                "tree-shaped {h}x{w}: {} without slits, {} when slits are allowed",
                family.len(),
                with_slits.len()
            ));
            if with_slits.len() == trees {
                family = with_slits;
                name.push_str(" (slits allowed)");
            }
        }
        report.record(&name, trees, family.len(), start);
        let start = Instant::now();
        report.record(&format!("minimal foldable {h}x{w}"), minimal, minimal_foldable_from(&family).len(), start);
    }
    report
}
