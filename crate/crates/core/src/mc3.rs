//! Exact model counting for formulas of clause width at most three.
//!
//! Three-clauses are eliminated by branching on a maximum-frequency variable
//! until only width-2 clauses remain, at which point counting is delegated to
//! the width-2 algorithm. Component splitting applies before branching, and
//! mixed-width input is accepted since recursion produces it anyway.

use std::collections::BTreeMap;

use crate::analysis::StatsCollector;
use crate::counter::{branch_on_var, Algorithm, CountError, CountOptions, Ctx};
use crate::formula::{Formula, ModelCount, Var};
use crate::graph::{split_components, ConstraintGraph};
use crate::mc2::{mc2_inner, BranchKind};

/// Number of clauses each variable appears in, either polarity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencyTable {
    counts: BTreeMap<Var, usize>,
}

impl FrequencyTable {
    pub fn build(f: &Formula) -> FrequencyTable {
        let mut counts = BTreeMap::new();
        for clause in f.clauses() {
            for lit in clause.literals() {
                *counts.entry(lit.var()).or_insert(0) += 1;
            }
        }
        FrequencyTable { counts }
    }

    pub fn frequency(&self, v: Var) -> usize {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    /// Sum of all frequencies; equals the sum of clause lengths.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Among variables occurring in at least one three-clause, picks one with
/// maximum frequency counted over all clauses, ties broken by ascending id.
/// Returns `None` when no three-clause exists.
pub fn select_max_frequency_var(f: &Formula) -> Option<Var> {
    let table = FrequencyTable::build(f);
    f.clauses()
        .iter()
        .filter(|c| c.len() == 3)
        .flat_map(|c| c.literals().iter().map(|l| l.var()))
        .collect::<std::collections::BTreeSet<Var>>()
        .into_iter()
        .max_by_key(|&v| (table.frequency(v), std::cmp::Reverse(v)))
}

/// Exact model count of a width-3 formula over its declared universe.
pub fn count_mc3(f: &Formula) -> Result<ModelCount, CountError> {
    count_mc3_with(f, &CountOptions::default(), None)
}

/// [`count_mc3`] with explicit options and an optional statistics sink.
pub fn count_mc3_with(
    f: &Formula,
    opts: &CountOptions,
    sink: Option<&StatsCollector>,
) -> Result<ModelCount, CountError> {
    if !f.validate_width(3) {
        return Err(CountError::WidthViolation { found: f.max_clause_len(), allowed: 3 });
    }
    let occurring = f.occurring_vars().len() as u64;
    let ctx = Ctx { opts, sink, depth_limit: f.num_declared_vars() + 1 };
    let inner = mc3_inner(f, 0, &ctx);
    Ok(inner.times_pow2(u64::from(f.num_declared_vars()) - occurring))
}

fn mc3_inner(f: &Formula, depth: u32, ctx: &Ctx<'_>) -> ModelCount {
    ctx.check_depth(depth);
    if f.has_empty_clause() {
        ctx.leaf(BranchKind::EmptyClause, depth);
        return ModelCount::zero();
    }
    if f.is_empty() {
        ctx.leaf(BranchKind::EmptyFormula, depth);
        return ModelCount::one();
    }
    let g = ConstraintGraph::build(f);
    let split = split_components(f, &g);
    if !split.is_single() {
        let m0 = f.clause_count();
        let drops: Vec<f64> = split
            .parts
            .iter()
            .map(|(part, _)| (m0 - part.clause_count()) as f64)
            .collect();
        ctx.branch(Algorithm::Mc3, BranchKind::ComponentSplit, depth, drops);
        return split
            .parts
            .iter()
            .map(|(part, _)| mc3_inner(part, depth + 1, ctx))
            .fold(ModelCount::one(), |acc, c| acc * c);
    }
    if let Some(pivot) = select_max_frequency_var(f) {
        // a connected formula with two or more clauses always offers a
        // three-clause variable of frequency at least two
        debug_assert!(
            f.clause_count() < 2 || FrequencyTable::build(f).frequency(pivot) >= 2,
            "connected dispatch picked a frequency-one pivot"
        );
        return branch_on_var(f, pivot, BranchKind::DirectBranch, Algorithm::Mc3, depth, ctx, &|sub, d| {
            mc3_inner(sub, d, ctx)
        });
    }
    // only width-2 clauses remain
    mc2_inner(f, depth, ctx)
}
