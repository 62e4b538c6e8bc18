//! Exact model counting for formulas of clause width at most two.
//!
//! The counter dispatches on the first matching case, in a fixed order:
//! empty clause, empty formula, at most four occurring variables, component
//! split, paths and cycles, degree-three branching (with a product split
//! where the five-vertex guard holds), and maximum-degree branching. Counts
//! are reported over the declared universe; unconstrained declared variables
//! contribute a factor of two each at the top level.

use std::fmt;

use serde::Serialize;

use crate::analysis::StatsCollector;
use crate::counter::{branch_on_var, eval_pair, Algorithm, CountError, CountOptions, Ctx};
use crate::formula::{Clause, Formula, Lit, ModelCount, Var};
use crate::graph::{path_split_vertex, split_components, ComponentShape, ConstraintGraph};
use crate::propagate::{exhaustive_count, propagate};

/// Which case of the dispatch fires for a formula. The dispatch is a total,
/// deterministic function of the formula (and the five-vertex toggle).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum BranchKind {
    EmptyClause,
    EmptyFormula,
    TinyExhaustive,
    ComponentSplit,
    PathSplit,
    CycleSplit,
    UBranch,
    FiveVertex,
    DirectBranch,
    HighDegreeBranch,
}

impl BranchKind {
    pub const ALL: [BranchKind; 10] = [
        BranchKind::EmptyClause,
        BranchKind::EmptyFormula,
        BranchKind::TinyExhaustive,
        BranchKind::ComponentSplit,
        BranchKind::PathSplit,
        BranchKind::CycleSplit,
        BranchKind::UBranch,
        BranchKind::FiveVertex,
        BranchKind::DirectBranch,
        BranchKind::HighDegreeBranch,
    ];

    pub(crate) fn index(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).unwrap()
    }
}

/// The resolved dispatch for one node: the case plus the chosen pivot
/// variable, and for the five-vertex case the degree-one attachment.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BranchDecision {
    pub kind: BranchKind,
    pub pivot: Option<Var>,
    pub auxiliary: Option<Var>,
}

impl BranchDecision {
    fn leaf(kind: BranchKind) -> BranchDecision {
        BranchDecision { kind, pivot: None, auxiliary: None }
    }

    fn on(kind: BranchKind, pivot: Var) -> BranchDecision {
        BranchDecision { kind, pivot: Some(pivot), auxiliary: None }
    }
}

/// Picks the first matching case for `f`. Pivots are deterministic: vertex
/// scans run in ascending variable id, degree-three candidates prefer a
/// unique-boundary pivot, then the five-vertex guard, then plain branching.
pub fn select_branch_mc2(
    f: &Formula,
    g: &ConstraintGraph,
    five_vertex_enabled: bool,
) -> BranchDecision {
    if let Some(decision) = select_leaf_or_split(f, g, || split_components(f, g).is_single()) {
        return decision;
    }
    select_connected_branch(g, five_vertex_enabled)
}

fn select_leaf_or_split(
    f: &Formula,
    g: &ConstraintGraph,
    is_single: impl FnOnce() -> bool,
) -> Option<BranchDecision> {
    if f.has_empty_clause() {
        return Some(BranchDecision::leaf(BranchKind::EmptyClause));
    }
    if f.is_empty() {
        return Some(BranchDecision::leaf(BranchKind::EmptyFormula));
    }
    if g.vertex_count() <= 4 {
        return Some(BranchDecision::leaf(BranchKind::TinyExhaustive));
    }
    if !is_single() {
        return Some(BranchDecision::leaf(BranchKind::ComponentSplit));
    }
    None
}

/// The connected, five-plus-variable part of the dispatch.
fn select_connected_branch(g: &ConstraintGraph, five_vertex_enabled: bool) -> BranchDecision {
    let max_degree = g.max_degree();
    if max_degree <= 2 {
        return match g.classify() {
            ComponentShape::Path(order) => {
                BranchDecision::on(BranchKind::PathSplit, path_split_vertex(&order))
            }
            ComponentShape::Cycle(order) => BranchDecision::on(BranchKind::CycleSplit, order[0]),
            ComponentShape::Other => unreachable!("degree at most two is a path or a cycle"),
        };
    }
    if max_degree == 3 {
        let candidates: Vec<Var> = g
            .vertices()
            .filter(|&v| g.degree(v) == Some(3))
            .collect();
        for &x in &candidates {
            if g.boundary_neighbor_count(x) == Some(1) {
                let u = g.sole_boundary_neighbor(x).unwrap();
                return BranchDecision::on(BranchKind::UBranch, u);
            }
        }
        if five_vertex_enabled {
            for &x in &candidates {
                if let Some(w) = five_vertex_attachment(g, x) {
                    return BranchDecision { kind: BranchKind::FiveVertex, pivot: Some(x), auxiliary: Some(w) };
                }
            }
        }
        return BranchDecision::on(BranchKind::DirectBranch, candidates[0]);
    }
    let pivot = g
        .vertices()
        .find(|&v| g.degree(v) == Some(max_degree))
        .expect("a vertex attains the maximum degree");
    BranchDecision::on(BranchKind::HighDegreeBranch, pivot)
}

/// Checks the five-vertex guard at a degree-three pivot: exactly two
/// boundary neighbors and neighbor degrees summing to five. When it holds
/// the neighbor degrees are necessarily (2, 2, 1) and the degree-one
/// neighbor, whose only edge goes to the pivot, is returned.
fn five_vertex_attachment(g: &ConstraintGraph, x: Var) -> Option<Var> {
    if g.boundary_neighbor_count(x) != Some(2) {
        return None;
    }
    let mut neighbors: Vec<(usize, Var)> = g
        .neighbors(x)?
        .iter()
        .map(|&u| (g.degree(u).unwrap(), u))
        .collect();
    // order by degree descending, ties by ascending id
    neighbors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    if neighbors.iter().map(|(d, _)| d).sum::<usize>() != 5 {
        return None;
    }
    let (degree, attachment) = neighbors[2];
    debug_assert_eq!(degree, 1);
    Some(attachment)
}

/// Violation of the five-vertex preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitError {
    pub pivot: Var,
    pub attachment: Var,
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "five-vertex preconditions do not hold for pivot {} with attachment {}",
            self.pivot, self.attachment
        )
    }
}

impl std::error::Error for SplitError {}

/// Splits `f` at a five-vertex pivot into the two-variable sub-formula over
/// the pivot and its attachment, and everything else. The parts cover all
/// clauses and share exactly the pivot variable, so the counts of the two
/// parts under each pivot polarity multiply.
pub fn five_vertex_split(f: &Formula, x: Var, w: Var) -> Result<(Formula, Formula), SplitError> {
    let g = ConstraintGraph::build(f);
    let guard_holds = g.max_degree() == 3
        && g.degree(x) == Some(3)
        && five_vertex_attachment(&g, x) == Some(w);
    if !guard_holds {
        return Err(SplitError { pivot: x, attachment: w });
    }
    let (inner, rest): (Vec<Clause>, Vec<Clause>) = f
        .clauses()
        .iter()
        .cloned()
        .partition(|c| c.literals().iter().all(|l| l.var() == x || l.var() == w));
    let num_vars = f.num_declared_vars();
    Ok((
        Formula::from_parts_unchecked(inner, num_vars),
        Formula::from_parts_unchecked(rest, num_vars),
    ))
}

/// Exact model count of a width-2 formula over its declared universe.
pub fn count_mc2(f: &Formula) -> Result<ModelCount, CountError> {
    count_mc2_with(f, &CountOptions::default(), None)
}

/// [`count_mc2`] with explicit options and an optional statistics sink.
pub fn count_mc2_with(
    f: &Formula,
    opts: &CountOptions,
    sink: Option<&StatsCollector>,
) -> Result<ModelCount, CountError> {
    if !f.validate_width(2) {
        return Err(CountError::WidthViolation { found: f.max_clause_len(), allowed: 2 });
    }
    let occurring = f.occurring_vars().len() as u64;
    let ctx = Ctx { opts, sink, depth_limit: f.num_declared_vars() + 1 };
    let inner = mc2_inner(f, 0, &ctx);
    Ok(inner.times_pow2(u64::from(f.num_declared_vars()) - occurring))
}

/// Counts over the occurring variables of `f`.
pub(crate) fn mc2_inner(f: &Formula, depth: u32, ctx: &Ctx<'_>) -> ModelCount {
    ctx.check_depth(depth);
    let g = ConstraintGraph::build(f);
    // keep the split computed during dispatch for the split arm below
    let mut computed_split = None;
    let decision = select_leaf_or_split(f, &g, || {
        let split = split_components(f, &g);
        let single = split.is_single();
        computed_split = Some(split);
        single
    })
    .unwrap_or_else(|| select_connected_branch(&g, ctx.opts.five_vertex));
    match decision.kind {
        BranchKind::EmptyClause => {
            ctx.leaf(BranchKind::EmptyClause, depth);
            ModelCount::zero()
        }
        BranchKind::EmptyFormula => {
            ctx.leaf(BranchKind::EmptyFormula, depth);
            ModelCount::one()
        }
        BranchKind::TinyExhaustive => {
            ctx.leaf(BranchKind::TinyExhaustive, depth);
            exhaustive_count(f).expect("at most four occurring variables")
        }
        BranchKind::ComponentSplit => {
            let split = computed_split.expect("the dispatch computed the split");
            let m0 = f.clause_count();
            let drops: Vec<f64> = split
                .parts
                .iter()
                .map(|(part, _)| (m0 - part.clause_count()) as f64)
                .collect();
            ctx.branch(Algorithm::Mc2, BranchKind::ComponentSplit, depth, drops);
            split
                .parts
                .iter()
                .map(|(part, _)| mc2_inner(part, depth + 1, ctx))
                .fold(ModelCount::one(), |acc, c| acc * c)
        }
        BranchKind::FiveVertex => {
            five_vertex_count(f, decision.pivot.unwrap(), decision.auxiliary.unwrap(), depth, ctx)
        }
        BranchKind::PathSplit
        | BranchKind::CycleSplit
        | BranchKind::UBranch
        | BranchKind::DirectBranch
        | BranchKind::HighDegreeBranch => {
            let pivot = decision.pivot.unwrap();
            branch_on_var(f, pivot, decision.kind, Algorithm::Mc2, depth, ctx, &|sub, d| {
                mc2_inner(sub, d, ctx)
            })
        }
    }
}

/// The five-vertex product rule: for each pivot polarity, the two-variable
/// part is counted exhaustively and multiplied with the recursively counted
/// remainder, then the polarities are summed.
fn five_vertex_count(f: &Formula, x: Var, w: Var, depth: u32, ctx: &Ctx<'_>) -> ModelCount {
    let (inner_part, rest) =
        five_vertex_split(f, x, w).expect("dispatch established the five-vertex guard");
    let m0 = f.clause_count();
    let eval = |lit: Lit| -> (ModelCount, f64) {
        let near = propagate(&inner_part, lit);
        let near_count = if near.conflict {
            ModelCount::zero()
        } else {
            exhaustive_count(&near.residual)
                .expect("the inner part has at most two variables")
                .times_pow2(near.freed.len() as u64)
        };
        let far = propagate(&rest, lit);
        if far.conflict {
            ctx.leaf(BranchKind::EmptyClause, depth + 1);
            (ModelCount::zero(), m0 as f64)
        } else {
            let sub = mc2_inner(&far.residual, depth + 1, ctx);
            let drop = (m0 - far.residual.clause_count()) as f64;
            (near_count * sub.times_pow2(far.freed.len() as u64), drop)
        }
    };
    let ((pos, drop_pos), (neg, drop_neg)) =
        eval_pair(ctx.opts.parallel, || eval(x.pos_lit()), || eval(x.neg_lit()));
    ctx.branch(Algorithm::Mc2, BranchKind::FiveVertex, depth, vec![drop_pos, drop_neg]);
    pos + neg
}
