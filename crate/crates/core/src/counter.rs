//! Shared plumbing for the two counting algorithms: options, errors, and the
//! branch-and-combine step both of them use.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{NodeTrace, StatsCollector};
use crate::formula::{Formula, Lit, ModelCount, Var};
use crate::mc2::BranchKind;
use crate::propagate::propagate;

/// Which counting algorithm a run uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Mc2,
    Mc3,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Mc2 => write!(f, "mc2"),
            Algorithm::Mc3 => write!(f, "mc3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("formula has a clause of length {found}; this algorithm handles width {allowed}")]
    WidthViolation { found: usize, allowed: usize },
}

/// Knobs for a counting run. Counts are identical under every setting; the
/// options only change evaluation strategy and instrumentation.
#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    /// Apply the five-vertex product rule where its guard holds. Disabling it
    /// falls back to plain branching; the result must not change.
    pub five_vertex: bool,
    /// Evaluate the two polarity branches concurrently.
    pub parallel: bool,
    /// Record per-branch-node clause-drop vectors.
    pub trace: bool,
}

impl Default for CountOptions {
    fn default() -> CountOptions {
        CountOptions { five_vertex: true, parallel: false, trace: false }
    }
}

/// Per-run context threaded through the recursion.
pub(crate) struct Ctx<'a> {
    pub opts: &'a CountOptions,
    pub sink: Option<&'a StatsCollector>,
    pub depth_limit: u32,
}

impl Ctx<'_> {
    /// Every branching step consumes at least one occurring variable, so the
    /// depth can never exceed the declared universe; crossing the limit means
    /// the dispatch loop is broken.
    pub fn check_depth(&self, depth: u32) {
        assert!(
            depth <= self.depth_limit,
            "branching depth {depth} exceeded the variable count; dispatch is not consuming variables"
        );
    }

    pub fn leaf(&self, kind: BranchKind, depth: u32) {
        if let Some(sink) = self.sink {
            sink.record_leaf(kind, depth);
        }
    }

    pub fn branch(&self, algorithm: Algorithm, kind: BranchKind, depth: u32, drops: Vec<f64>) {
        if let Some(sink) = self.sink {
            sink.record_branch(NodeTrace { algorithm, kind, depth, drops });
        }
    }
}

pub(crate) fn eval_pair<T: Send>(
    parallel: bool,
    a: impl FnOnce() -> T + Send,
    b: impl FnOnce() -> T + Send,
) -> (T, T) {
    if parallel {
        rayon::join(a, b)
    } else {
        (a(), b())
    }
}

/// One DPLL branching step: sums the two polarity branches of `pivot`, each
/// contributing `2^|freed| * recurse(residual)` models, or zero on conflict.
/// The positive literal is evaluated first. Records one branch node with the
/// observed clause drops; a conflicted side is an empty-clause leaf whose
/// drop covers the whole formula.
pub(crate) fn branch_on_var<R>(
    f: &Formula,
    pivot: Var,
    kind: BranchKind,
    algorithm: Algorithm,
    depth: u32,
    ctx: &Ctx<'_>,
    recurse: &R,
) -> ModelCount
where
    R: Fn(&Formula, u32) -> ModelCount + Sync,
{
    let m0 = f.clause_count();
    let eval = |lit: Lit| -> (ModelCount, f64) {
        let r = propagate(f, lit);
        if r.conflict {
            ctx.leaf(BranchKind::EmptyClause, depth + 1);
            (ModelCount::zero(), m0 as f64)
        } else {
            let sub = recurse(&r.residual, depth + 1);
            let drop = (m0 - r.residual.clause_count()) as f64;
            (sub.times_pow2(r.freed.len() as u64), drop)
        }
    };
    let ((pos, drop_pos), (neg, drop_neg)) =
        eval_pair(ctx.opts.parallel, || eval(pivot.pos_lit()), || eval(pivot.neg_lit()));
    ctx.branch(algorithm, kind, depth, vec![drop_pos, drop_neg]);
    pos + neg
}
