//! Hand-built polyominoes and mappings used across the integration tests.
//!
//! A mapping is written as a walk: `p` places the current state at the current
//! position, `N E S W` roll one step, `n e s w` flip one step.

#![allow(dead_code)]

use cubefold::cube::{CellState, ConsistentMapping};
use cubefold::grid::{Dir, Polyomino};
use cubefold::layers::{LayerMap, PseudoFolding};

pub struct Walked {
    pub polyomino: Polyomino,
    pub mapping: ConsistentMapping,
}

fn dir(c: char) -> Dir {
    match c.to_ascii_uppercase() {
        'N' => Dir::N,
        'E' => Dir::E,
        'S' => Dir::S,
        'W' => Dir::W,
        _ => panic!("bad move {c}"),
    }
}

/// Positions are (row, col) with rows growing downwards.
pub fn walk_cells(moves: &str) -> Vec<((i64, i64), CellState)> {
    let mut pos = (0i64, 0i64);
    let mut state = CellState::ORIGIN;
    let mut out = Vec::new();
    for tok in moves.split_whitespace() {
        let c = tok.chars().next().unwrap();
        if c == 'p' {
            out.push((pos, state));
            continue;
        }
        let d = dir(c);
        let (dr, dc) = d.delta();
        pos = (pos.0 + dr as i64, pos.1 + dc as i64);
        state = if c.is_ascii_uppercase() { state.roll(d) } else { state.flip(d) };
    }
    out
}

pub fn walked(moves: &str, cuts: &[((i64, i64), (i64, i64))]) -> Walked {
    let cells = walk_cells(moves);
    let positions: Vec<(i64, i64)> = cells.iter().map(|c| c.0).collect();
    let polyomino = Polyomino::from_positions(&positions, cuts).expect("fixture polyomino");
    let r0 = positions.iter().map(|p| p.0).min().unwrap();
    let c0 = positions.iter().map(|p| p.1).min().unwrap();
    let mut states = vec![CellState::ORIGIN; polyomino.len()];
    for ((r, c), s) in cells {
        let i = polyomino
            .index_of(cubefold::grid::CellCoord::new((r - r0) as usize, (c - c0) as usize))
            .unwrap();
        states[i] = s;
    }
    Walked { polyomino, mapping: ConsistentMapping { states } }
}

/// Layer values keyed by the same positions as the walk.
pub fn with_layers(w: &Walked, moves: &str, layers: &[((i64, i64), u32)]) -> PseudoFolding {
    let positions: Vec<(i64, i64)> = walk_cells(moves).iter().map(|c| c.0).collect();
    let r0 = positions.iter().map(|p| p.0).min().unwrap();
    let c0 = positions.iter().map(|p| p.1).min().unwrap();
    let mut l = vec![0; w.polyomino.len()];
    for &((r, c), v) in layers {
        let i = w
            .polyomino
            .index_of(cubefold::grid::CellCoord::new((r - r0) as usize, (c - c0) as usize))
            .unwrap();
        l[i] = v;
    }
    PseudoFolding::new(w.polyomino.clone(), w.mapping.clone(), LayerMap { layers: l }).expect("fixture pseudo-folding")
}

pub const STANDARD_NET: &str = "p S p N N p S E p W W p W p";

/// 3x4 frame around a unit hole whose rim maps onto a single cube edge pair.
pub const BAD_HOLE: &str = "p S p S p E p E p N p E p W N p N p S W p";

pub const FAN: &str = "w W N p S p S p N E p e p E p E p E p W s p e p E p N p S S p N W w W p W p W p E s W p E p E p E p E p W s p e p E p E p N p S S p N W W w W p W p W p E s p w p W p N p S S p N E e E p E p E p";
pub const FAN_CUTS: &[((i64, i64), (i64, i64))] = &[
    ((3, -2), (3, -1)),
    ((1, -2), (1, -1)),
    ((4, -1), (3, -1)),
    ((3, -1), (2, -1)),
    ((2, -1), (1, -1)),
    ((1, -1), (0, -1)),
    ((4, 3), (3, 3)),
    ((3, 3), (2, 3)),
    ((2, 3), (1, 3)),
    ((2, 3), (2, 4)),
    ((1, 3), (0, 3)),
    ((0, 3), (0, 4)),
    ((3, 4), (2, 4)),
    ((2, 4), (2, 5)),
];

/// 4x3 frame with a 1x2 hole; the displayed layers are twisted.
pub const TWISTED: &str = "p N p S S p S p E p e p e p N p N p W p W p";
pub const TWISTED_LAYERS: &[((i64, i64), u32)] = &[
    ((-1, 0), 1),
    ((0, 0), 1),
    ((0, 1), 1),
    ((0, 2), 1),
    ((0, 3), 1),
    ((1, 0), 2),
    ((1, 3), 1),
    ((2, 0), 2),
    ((2, 1), 4),
    ((2, 2), 3),
    ((2, 3), 2),
];

/// 3x8 frame with a 1x6 hole; no realisable layer map is valid.
pub const LONG_FRAME: &str = "p S p S p E p E p e p e p E p E p E p N p N p W p W p W p W p W p W p";
pub const LONG_FRAME_LAYERS: &[((i64, i64), u32)] = &[
    ((0, 0), 2),
    ((0, 1), 2),
    ((0, 2), 2),
    ((0, 3), 2),
    ((0, 4), 1),
    ((0, 5), 1),
    ((0, 6), 1),
    ((0, 7), 1),
    ((1, 0), 1),
    ((1, 7), 2),
    ((2, 0), 4),
    ((2, 1), 4),
    ((2, 2), 5),
    ((2, 3), 4),
    ((2, 4), 3),
    ((2, 5), 3),
    ((2, 6), 3),
    ((2, 7), 3),
];

/// Ring with an interior slit cluster whose outer boundary folds into a trefoil.
pub const KNOTTED: &str = "p s p E p n p E p s p E p n p E p n p w p W p n p W p s p W p W p s p";
pub const KNOTTED_CUTS: &[((i64, i64), (i64, i64))] = &[
    ((0, 0), (-1, 0)),
    ((0, 0), (0, 1)),
    ((1, 1), (1, 2)),
    ((0, 1), (-1, 1)),
    ((-1, 1), (-1, 2)),
    ((0, 2), (-1, 2)),
    ((0, 2), (0, 3)),
    ((0, 3), (-1, 3)),
];
pub const KNOTTED_LAYERS: &[((i64, i64), u32)] = &[
    ((-2, 1), 4),
    ((-2, 2), 3),
    ((-1, -1), 7),
    ((-1, 0), 2),
    ((-1, 1), 1),
    ((-1, 2), 2),
    ((-1, 3), 1),
    ((-1, 4), 5),
    ((0, -1), 4),
    ((0, 0), 2),
    ((0, 1), 1),
    ((0, 2), 3),
    ((0, 3), 1),
    ((0, 4), 6),
    ((1, 0), 3),
    ((1, 1), 4),
    ((1, 2), 2),
    ((1, 3), 3),
];

pub fn poly(rows: &[&str], slits: &[&str]) -> Polyomino {
    let mut text = format!("POLYOMINO v1\nrows: {}\ncols: {}\ngrid:\n", rows.len(), rows[0].len());
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    text.push_str("slits:\n");
    for s in slits {
        text.push_str(s);
        text.push('\n');
    }
    cubefold::grid::parse_polyomino(&text).expect("fixture text")
}

/// 4x2 block with a one-column arm above and below.
pub fn double_arm() -> Polyomino {
    poly(&["..#.", "..#.", "####", "####", "..#.", "..#."], &[])
}

/// Simply connected shape with two valid-corner example vertices at (3, 3) and (2, 5).
pub fn corner_example() -> Polyomino {
    poly(&["###...", "#.###.", "######", "#..###", "#.###.", "#####.", "###.##", ".....#"], &["H 1 0", "V 2 1"])
}

pub fn p_w() -> Polyomino {
    // Cells (x, y) with y up: (0,0) (1,0) (2,0) (2,1) (3,1) (3,2) (3,3).
    poly(&["...#", "...#", "..##", "###."], &[])
}

/// Random simply connected polyomino grown inside a `rows` x `cols` box, holes filled.
pub fn random_simply_connected<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize, fill: f64) -> Polyomino {
    use std::collections::BTreeSet;
    let target = ((rows * cols) as f64 * fill) as usize;
    let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
    cells.insert((rng.gen_range(0..rows) as i64, rng.gen_range(0..cols) as i64));
    while cells.len() < target {
        let all: Vec<(i64, i64)> = cells.iter().copied().collect();
        let (r, c) = all[rng.gen_range(0..all.len())];
        let (dr, dc) = [(0, 1), (1, 0), (0, -1), (-1, 0)][rng.gen_range(0..4)];
        let n = (r + dr, c + dc);
        if n.0 >= 0 && n.1 >= 0 && (n.0 as usize) < rows && (n.1 as usize) < cols {
            cells.insert(n);
        }
    }
    loop {
        let positions: Vec<(i64, i64)> = cells.iter().copied().collect();
        let p = Polyomino::from_positions(&positions, &[]).unwrap();
        let holes = cubefold::grid::find_holes(&p);
        if holes.is_empty() {
            return p;
        }
        let r0 = positions.iter().map(|q| q.0).min().unwrap();
        let c0 = positions.iter().map(|q| q.1).min().unwrap();
        for h in holes {
            for m in h.missing_cells {
                cells.insert((m.row as i64 + r0, m.col as i64 + c0));
            }
        }
    }
}
