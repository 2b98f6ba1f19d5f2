//! Text and SVG drawings of a polyomino, optionally labelled with a consistent mapping.
//!
//! Boundary edges (outline and slits) are solid, glued edges are dashed creases, and each
//! cell shows the label of the face it covers when a mapping is given.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{for_each_consistent_mapping, ConsistentMapping, EnumerateOptions, Quotient};
use crate::grid::{CellCoord, Dir, Polyomino};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("mapping index {index} out of range ({count} mappings)")]
    BadMappingIndex { index: usize, count: usize },
}

/// The `index`-th surjective consistent mapping up to cube isometry, in enumeration order.
pub fn nth_mapping(p: &Polyomino, index: usize) -> Result<ConsistentMapping, RenderError> {
    let mut count = 0;
    let mut found = None;
    let opts = EnumerateOptions { surjective_only: true, quotient: Quotient::Isometries };
    for_each_consistent_mapping(p, opts, |m| {
        if count == index {
            found = Some(m.clone());
            return ControlFlow::Break(());
        }
        count += 1;
        ControlFlow::Continue(())
    });
    found.ok_or(RenderError::BadMappingIndex { index, count })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Edge {
    None,
    Boundary,
    Crease,
}

/// Edge below lattice row `r` between columns `c` and `c + 1`, i.e. the north side of cell (r, c).
fn horizontal(p: &Polyomino, r: usize, c: usize) -> Edge {
    let below = p.index_of(CellCoord::new(r, c));
    let above = r.checked_sub(1).and_then(|a| p.index_of(CellCoord::new(a, c)));
    match (above, below) {
        (None, None) => Edge::None,
        (Some(_), Some(b)) if p.glued(b, Dir::N).is_some() => Edge::Crease,
        _ => Edge::Boundary,
    }
}

/// Edge along lattice column `c` between rows `r` and `r + 1`, i.e. the west side of cell (r, c).
fn vertical(p: &Polyomino, r: usize, c: usize) -> Edge {
    let right = p.index_of(CellCoord::new(r, c));
    let left = c.checked_sub(1).and_then(|a| p.index_of(CellCoord::new(r, a)));
    match (left, right) {
        (None, None) => Edge::None,
        (Some(_), Some(b)) if p.glued(b, Dir::W).is_some() => Edge::Crease,
        _ => Edge::Boundary,
    }
}

fn label(p: &Polyomino, m: Option<&ConsistentMapping>, r: usize, c: usize) -> Option<String> {
    let i = p.index_of(CellCoord::new(r, c))?;
    Some(match m {
        Some(m) => m.face(i).to_string(),
        None => String::new(),
    })
}

pub fn render(p: &Polyomino, m: Option<&ConsistentMapping>, format: Format) -> String {
    match format {
        Format::Ascii => ascii(p, m),
        Format::Svg => svg(p, m),
    }
}

fn ascii(p: &Polyomino, m: Option<&ConsistentMapping>) -> String {
    let (rows, cols) = (p.rows(), p.cols());
    let mut out = String::new();
    for r in 0..=rows {
        let mut line = String::new();
        for c in 0..=cols {
            let h_left = c > 0 && horizontal(p, r, c - 1) != Edge::None;
            let h_right = c < cols && horizontal(p, r, c) != Edge::None;
            let v_up = r > 0 && vertical(p, r - 1, c) != Edge::None;
            let v_down = r < rows && vertical(p, r, c) != Edge::None;
            line.push(if h_left || h_right || v_up || v_down { '+' } else { ' ' });
            if c < cols {
                line.push_str(match horizontal(p, r, c) {
                    Edge::None => "   ",
                    Edge::Boundary => "---",
                    Edge::Crease => " - ",
                });
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if r == rows {
            break;
        }
        let mut line = String::new();
        for c in 0..=cols {
            line.push(match vertical(p, r, c) {
                Edge::None => ' ',
                Edge::Boundary => '|',
                Edge::Crease => ':',
            });
            if c < cols {
                match label(p, m, r, c) {
                    Some(l) if !l.is_empty() => {
                        let _ = write!(line, " {l} ");
                    }
                    _ => line.push_str("   "),
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

const CELL: usize = 40;
const MARGIN: usize = 10;

fn svg(p: &Polyomino, m: Option<&ConsistentMapping>) -> String {
    let (rows, cols) = (p.rows(), p.cols());
    let (w, h) = (cols * CELL + 2 * MARGIN, rows * CELL + 2 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    for c in p.cells() {
        let (x, y) = (MARGIN + c.col * CELL, MARGIN + c.row * CELL);
        let _ = writeln!(out, "  <rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"#eeeeee\"/>");
    }
    let mut line = |x1: usize, y1: usize, x2: usize, y2: usize, e: Edge| {
        let style = match e {
            Edge::None => return,
            Edge::Boundary => "stroke=\"black\" stroke-width=\"3\"",
            Edge::Crease => "stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"4 3\"",
        };
        let _ = writeln!(out, "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" {style}/>");
    };
    for r in 0..=rows {
        for c in 0..cols {
            let (x, y) = (MARGIN + c * CELL, MARGIN + r * CELL);
            line(x, y, x + CELL, y, horizontal(p, r, c));
        }
    }
    for r in 0..rows {
        for c in 0..=cols {
            let (x, y) = (MARGIN + c * CELL, MARGIN + r * CELL);
            line(x, y, x, y + CELL, vertical(p, r, c));
        }
    }
    for c in p.cells() {
        if let Some(l) = label(p, m, c.row, c.col).filter(|l| !l.is_empty()) {
            let (x, y) = (MARGIN + c.col * CELL + CELL / 2, MARGIN + c.row * CELL + CELL / 2 + 6);
            let _ = writeln!(
                out,
                "  <text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">{l}</text>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{rolled_mapping, CellState};

    #[test]
    fn domino_ascii() {
        let p = Polyomino::rectangle(1, 2);
        let m = rolled_mapping(&p, CellState::ORIGIN).unwrap();
        assert_eq!(render(&p, Some(&m), Format::Ascii), "+---+---+\n| 1 : 3 |\n+---+---+\n");
        assert_eq!(render(&p, None, Format::Ascii), "+---+---+\n|   :   |\n+---+---+\n");
    }

    #[test]
    fn bad_index() {
        let p = Polyomino::rectangle(1, 2);
        assert!(matches!(nth_mapping(&p, 0), Err(RenderError::BadMappingIndex { index: 0, count: 0 })));
    }
}
