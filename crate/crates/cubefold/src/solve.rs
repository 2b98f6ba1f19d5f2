//! Exhaustive search for a realisable folding of a polyomino.

use std::ops::ControlFlow;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cube::{for_each_consistent_mapping, is_good, EnumerateOptions, Quotient};
use crate::grid::{find_holes, Polyomino};
use crate::layers::{find_layer_map, for_each_layer_map, PseudoFolding, SearchLimits};
use crate::topology::{validity_verdict, Validity};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub deadline: Option<Instant>,
    pub limits: SearchLimits,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { deadline: None, limits: SearchLimits { max_nodes: 10_000_000 } }
    }
}

/// What the search looked at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub mappings: u64,
    pub skipped_not_good: u64,
    pub layer_maps: u64,
    pub refuted: u64,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A surjective pseudo-folding whose topology verdict is valid.
    Folded(PseudoFolding),
    /// Every surjective mapping was examined and none admits a valid folding.
    Exhausted(SearchRecord),
    /// The search could not decide; `candidate` is a pseudo-folding no obstruction rules out.
    Undecided { candidate: Option<PseudoFolding>, record: SearchRecord, budget_exhausted: bool },
}

impl SolveOutcome {
    pub fn is_folded(&self) -> bool {
        matches!(self, SolveOutcome::Folded(_))
    }
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Searches surjective consistent mappings (one per cube isometry orbit) for a layer map.
/// Without holes a zero-violation layer map is a folding. With holes every layer map is
/// checked for obstructions, and one that survives leaves the instance undecided.
pub fn solve(p: &Polyomino, opts: SolveOptions) -> SolveOutcome {
    let simply_connected = find_holes(p).is_empty();
    let mut record = SearchRecord::default();
    let mut found = None;
    let mut candidate = None;
    let mut budget_exhausted = false;
    let enum_opts = EnumerateOptions { surjective_only: true, quotient: Quotient::Isometries };
    for_each_consistent_mapping(p, enum_opts, |m| {
        if past(opts.deadline) {
            budget_exhausted = true;
            return ControlFlow::Break(());
        }
        record.mappings += 1;
        if simply_connected {
            let out = find_layer_map(p, m, opts.limits);
            record.nodes += out.nodes;
            if let Some(lm) = out.layer_map {
                record.layer_maps += 1;
                found = Some(PseudoFolding { polyomino: p.clone(), mapping: m.clone(), layers: lm });
                return ControlFlow::Break(());
            }
            if !out.exhausted {
                budget_exhausted = true;
            }
            return ControlFlow::Continue(());
        }
        if !is_good(p, m) {
            record.skipped_not_good += 1;
            return ControlFlow::Continue(());
        }
        let mut stop = false;
        let res = for_each_layer_map(p, m, opts.limits, |lm| {
            record.layer_maps += 1;
            let pf = PseudoFolding { polyomino: p.clone(), mapping: m.clone(), layers: lm.clone() };
            match validity_verdict(&pf) {
                Validity::Valid => {
                    found = Some(pf);
                    stop = true;
                    return ControlFlow::Break(());
                }
                Validity::Invalid { .. } => record.refuted += 1,
                Validity::Unknown => {
                    candidate = Some(pf);
                    stop = true;
                    return ControlFlow::Break(());
                }
            }
            if past(opts.deadline) {
                budget_exhausted = true;
                stop = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        match res {
            Ok(n) => record.nodes += n,
            Err(_) => budget_exhausted = true,
        }
        if stop {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if let Some(pf) = found {
        return SolveOutcome::Folded(pf);
    }
    if candidate.is_some() || budget_exhausted {
        return SolveOutcome::Undecided { candidate, record, budget_exhausted };
    }
    SolveOutcome::Exhausted(record)
}

/// Exact foldability of a polyomino without holes.
pub fn folds_simply_connected(p: &Polyomino) -> bool {
    let opts = SolveOptions { deadline: None, limits: SearchLimits::default() };
    match solve(p, opts) {
        SolveOutcome::Folded(_) => true,
        SolveOutcome::Exhausted(_) => false,
        SolveOutcome::Undecided { .. } => panic!("layer search limit reached"),
    }
}
