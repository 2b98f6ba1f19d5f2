//! Top-level foldability verdicts.
//!
//! Known characterisations are tried first, each guarded by a checker for its exact
//! hypothesis. Everything else goes to the exhaustive solver.

mod corners;
mod holes;
mod trees;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::is_surjective;
use crate::grid::{find_holes, shape_flags, Hole, HoleKind, Polyomino};
use crate::layers::{check_self_intersections, execute_plan, parse_plan, PseudoFolding};
use crate::solve::{solve, SearchRecord, SolveOptions, SolveOutcome};
use crate::topology::{validity_verdict, Validity};

pub use corners::{qualifying_vertices, simply_connected_plan, valid_corners, Corner, CornerSet};
pub use holes::{
    cooperating_pair, format_certificate_file, holes_cooperate, parse_certificate_file, stored_certificates,
    support_mapping_classes, StoredCertificate,
};
pub use trees::{is_class_a, is_class_b, is_p_w, minimal_set, tree_dispatch};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("hole is not a unit square")]
    NotUnitSquareHole,
    #[error("expected bounding height {expected}, found {rows}x{cols}")]
    WrongBoundingSize { expected: usize, rows: usize, cols: usize },
    #[error("polyomino is not tree-shaped")]
    NotTreeShaped,
    #[error("vertex lies on the bounding box")]
    VertexOnBoundingBox,
    #[error("vertex is not on the outer boundary")]
    NotBoundaryVertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Foldable,
    NotFoldable,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Foldable => "FOLDABLE",
            Status::NotFoldable => "NOT_FOLDABLE",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// Named results whose hypotheses can be checked mechanically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// A non-simple hole makes any polyomino foldable.
    NonSimpleHole,
    /// A rectangle with exactly one simple hole does not fold.
    RectangleOneSimpleHole,
    /// A rectangle whose holes are all unit squares folds iff two of them cooperate.
    CooperatingUnitHoles,
    /// A 1 x n strip covers at most four faces.
    Strip,
    /// No cube net fits in a 2 x 3 box.
    TreeTwoByThree,
    /// Trees of bounding size 2 x n, n >= 4, fold iff not in class A.
    TreeClassA,
    /// Trees of bounding size 3 x 3 and 3 x 4 fold iff they contain a minimal foldable tree.
    TreeMinimalSet,
    /// Trees of bounding size 3 x n, n >= 5, fold iff not in class B.
    TreeClassB,
    /// The only non-foldable tree of bounding size 4 x 4 is P_W.
    TreePW,
    /// Trees of bounding size at least 4 x 5 fold.
    TreeLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Theorem {
        theorem: Theorem,
        hypothesis: String,
        /// The construction behind the result is not carried out here.
        external: bool,
        /// Optional pseudo-folding found by search.
        witness: Option<String>,
    },
    PseudoFolding {
        folding: String,
    },
    Plan {
        plan: String,
        folding: String,
    },
    Obstruction {
        /// True when every surjective consistent mapping was examined.
        exhaustive: bool,
        record: SearchRecord,
        /// A pseudo-folding that no implemented obstruction rules out.
        candidate: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: Status,
    pub certificate: Certificate,
    pub budget_exhausted: bool,
}

impl Verdict {
    fn theorem(verdict: Status, theorem: Theorem, hypothesis: impl Into<String>) -> Verdict {
        Verdict {
            verdict,
            certificate: Certificate::Theorem { theorem, hypothesis: hypothesis.into(), external: false, witness: None },
            budget_exhausted: false,
        }
    }

    fn with_witness(mut self, pf: Option<PseudoFolding>) -> Verdict {
        if let Certificate::Theorem { witness, .. } = &mut self.certificate {
            *witness = pf.map(|pf| pf.to_text());
        }
        self
    }
}

pub(crate) fn deadline_after(budget: Duration) -> Option<Instant> {
    Instant::now().checked_add(budget)
}

/// Budget from `CUBEFOLD_BUDGET_MS`, else the default.
pub fn budget_from_env() -> Duration {
    std::env::var("CUBEFOLD_BUDGET_MS")
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .map(Duration::from_millis)
        .unwrap_or(DEFAULT_BUDGET)
}

/// The outer shape fills the bounding box and every slit belongs to a hole.
pub fn is_rectangular_with_holes(p: &Polyomino, holes: &[Hole]) -> bool {
    if !shape_flags(p).is_rectangular {
        return false;
    }
    let in_holes = holes.iter().map(|h| h.cut_edges.len()).sum::<usize>();
    in_holes == p.cuts().len()
}

/// Searches for a witness folding, returning `None` if the search does not find one in time.
pub(crate) fn search_witness(p: &Polyomino, deadline: Option<Instant>) -> Option<PseudoFolding> {
    match solve(p, SolveOptions { deadline, ..Default::default() }) {
        SolveOutcome::Folded(pf) => Some(pf),
        SolveOutcome::Undecided { candidate, .. } => candidate,
        SolveOutcome::Exhausted(_) => None,
    }
}

pub fn classify(p: &Polyomino, budget: Duration) -> Verdict {
    let deadline = deadline_after(budget);
    let holes = find_holes(p);
    if holes.iter().any(|h| h.kind == HoleKind::NonSimple) {
        return Verdict {
            verdict: Status::Foldable,
            certificate: Certificate::Theorem {
                theorem: Theorem::NonSimpleHole,
                hypothesis: "the polyomino has a non-simple hole".into(),
                external: true,
                witness: None,
            },
            budget_exhausted: false,
        };
    }
    let rectangular = is_rectangular_with_holes(p, &holes);
    if rectangular && holes.len() == 1 {
        let hypothesis = format!("rectangle with a single simple hole ({:?})", holes[0].kind);
        return Verdict::theorem(Status::NotFoldable, Theorem::RectangleOneSimpleHole, hypothesis);
    }
    if rectangular && holes.len() >= 2 && holes.iter().all(|h| h.kind == HoleKind::UnitSquare) {
        return holes::classify_unit_holes(p, &holes, deadline);
    }
    let flags = shape_flags(p);
    if flags.is_tree_shaped {
        return tree_dispatch(p, deadline).expect("tree-shaped");
    }
    if flags.is_simply_connected {
        if let Some((plan, pf)) = simply_connected_plan(p) {
            return Verdict {
                verdict: Status::Foldable,
                certificate: Certificate::Plan { plan: plan.to_string(), folding: pf.to_text() },
                budget_exhausted: false,
            };
        }
    }
    solver_verdict(p, deadline)
}

fn solver_verdict(p: &Polyomino, deadline: Option<Instant>) -> Verdict {
    match solve(p, SolveOptions { deadline, ..Default::default() }) {
        SolveOutcome::Folded(pf) => Verdict {
            verdict: Status::Foldable,
            certificate: Certificate::PseudoFolding { folding: pf.to_text() },
            budget_exhausted: false,
        },
        SolveOutcome::Exhausted(record) => Verdict {
            verdict: Status::NotFoldable,
            certificate: Certificate::Obstruction { exhaustive: true, record, candidate: None },
            budget_exhausted: false,
        },
        SolveOutcome::Undecided { candidate, record, budget_exhausted } => Verdict {
            verdict: Status::Unknown,
            certificate: Certificate::Obstruction {
                exhaustive: false,
                record,
                candidate: candidate.map(|pf| pf.to_text()),
            },
            budget_exhausted,
        },
    }
}

/// Whether a theorem's hypothesis holds for `p`, and the verdict the theorem gives.
pub fn theorem_applies(p: &Polyomino, theorem: Theorem) -> Option<Status> {
    let holes = find_holes(p);
    let rectangular = is_rectangular_with_holes(p, &holes);
    match theorem {
        Theorem::NonSimpleHole => holes.iter().any(|h| h.kind == HoleKind::NonSimple).then_some(Status::Foldable),
        Theorem::RectangleOneSimpleHole => {
            (rectangular && holes.len() == 1 && holes[0].kind.is_simple()).then_some(Status::NotFoldable)
        }
        Theorem::CooperatingUnitHoles => {
            if !(rectangular && holes.len() >= 2 && holes.iter().all(|h| h.kind == HoleKind::UnitSquare)) {
                return None;
            }
            Some(if cooperating_pair(&holes).is_some() { Status::Foldable } else { Status::NotFoldable })
        }
        _ => trees::tree_theorem_applies(p, theorem),
    }
}

/// Replays a single pseudo-folding: surjective, free of self-intersections and not refuted.
pub fn check_folding(p: &Polyomino, text: &str) -> Result<PseudoFolding, String> {
    let pf = PseudoFolding::from_text(p, text).map_err(|e| e.to_string())?;
    if !is_surjective(&pf.mapping) {
        return Err("folding does not cover every face".into());
    }
    let v = check_self_intersections(&pf);
    if !v.is_empty() {
        return Err(format!("{} self-intersections", v.len()));
    }
    if let Validity::Invalid { obstruction } = validity_verdict(&pf) {
        return Err(format!("refuted by {obstruction:?}"));
    }
    Ok(pf)
}

/// Checks that a verdict's certificate supports it.
pub fn check_certificate(p: &Polyomino, v: &Verdict) -> Result<(), String> {
    match &v.certificate {
        Certificate::Theorem { theorem, witness, .. } => {
            match theorem_applies(p, *theorem) {
                Some(s) if s == v.verdict => {}
                Some(s) => return Err(format!("theorem gives {s}, verdict says {}", v.verdict)),
                None => return Err("theorem hypothesis does not hold".into()),
            }
            if let Some(w) = witness {
                check_folding(p, w)?;
            }
            Ok(())
        }
        Certificate::PseudoFolding { folding } => {
            if v.verdict != Status::Foldable {
                return Err("pseudo-folding certificate on a negative verdict".into());
            }
            let pf = check_folding(p, folding)?;
            if validity_verdict(&pf) != Validity::Valid {
                return Err("folding is not certified valid".into());
            }
            Ok(())
        }
        Certificate::Plan { plan, .. } => {
            let plan = parse_plan(plan).map_err(|e| e.to_string())?;
            let pf = execute_plan(p, &plan).map_err(|e| e.to_string())?;
            check_folding(p, &pf.to_text()).map(|_| ())
        }
        Certificate::Obstruction { exhaustive, .. } => match v.verdict {
            Status::NotFoldable if *exhaustive => Ok(()),
            Status::Unknown => Ok(()),
            _ => Err("obstruction report does not support the verdict".into()),
        },
    }
}
