//! Unit-literal machinery: assigning a literal, simplifying to fixpoint with
//! correct forced/freed accounting, and exhaustive counting for small
//! formulas (the ground-truth oracle).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{Clause, Formula, Lit, ModelCount, Var};

/// Default cap on the number of occurring variables the exhaustive counter
/// will enumerate. The branching algorithms only use exhaustive search at
/// four variables or fewer; the oracle uses it up to this cap.
pub const DEFAULT_ORACLE_CAP: usize = 25;

/// Outcome of assigning a literal true and simplifying to fixpoint.
///
/// When `conflict` is false the residual contains no unit clauses and no
/// occurrence of any forced variable, and `forced`, `freed` and the residual
/// variables partition the input's occurring variables. The branch
/// contributes `2^|freed| * M(residual)` models, or zero on conflict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropagationResult {
    pub residual: Formula,
    /// Variables assigned by the branch literal or by unit propagation.
    pub forced: BTreeSet<Var>,
    /// Variables that vanished from all clauses without being assigned; each
    /// contributes a free factor of two.
    pub freed: BTreeSet<Var>,
    /// An empty clause was produced; the branch has no models.
    pub conflict: bool,
}

/// Assigns `l` true and simplifies to fixpoint: clauses containing a true
/// literal are deleted, the complement is stripped from the rest, and any
/// resulting unit clause forces its literal in turn (lowest variable id
/// first). Producing an empty clause stops with `conflict` set.
pub fn propagate(f: &Formula, l: Lit) -> PropagationResult {
    let vars_before = f.occurring_vars();
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    let mut forced = BTreeSet::new();
    let mut conflict = false;
    let mut next = Some(l);

    while let Some(lit) = next.take() {
        forced.insert(lit.var());
        let mut remaining = Vec::with_capacity(clauses.len());
        for clause in clauses.drain(..) {
            if clause.contains(lit) {
                continue; // satisfied
            }
            if clause.contains(lit.negate()) {
                let lits: Vec<Lit> = clause
                    .literals()
                    .iter()
                    .copied()
                    .filter(|&x| x != lit.negate())
                    .collect();
                if lits.is_empty() {
                    conflict = true;
                }
                remaining.push(Clause::from_sorted_unchecked(lits));
            } else {
                remaining.push(clause);
            }
        }
        clauses = remaining;
        if conflict {
            break;
        }
        next = clauses
            .iter()
            .filter_map(Clause::unit_lit)
            .min_by_key(|u| u.var());
    }

    let residual = Formula::from_parts_unchecked(clauses, f.num_declared_vars());
    let freed: BTreeSet<Var> = {
        let still_present = residual.occurring_vars();
        vars_before
            .into_iter()
            .filter(|v| !forced.contains(v) && !still_present.contains(v))
            .collect()
    };
    PropagationResult { residual, forced, freed, conflict }
}

/// The closure of variables reached from `l` through two-clause implications:
/// starting with `l` implied, a clause `!p v q` with `p` implied makes `q`
/// implied and records its variable, until nothing new is added. The starting
/// variable itself is recorded only if a chain re-derives it.
pub fn unit_implied_vars(f: &Formula, l: Lit) -> BTreeSet<Var> {
    let mut implied: BTreeSet<Lit> = BTreeSet::from([l]);
    let mut reached: BTreeSet<Var> = BTreeSet::new();
    loop {
        let mut changed = false;
        for clause in f.clauses().iter().filter(|c| c.len() == 2) {
            let (a, b) = (clause.literals()[0], clause.literals()[1]);
            for (trigger, implied_lit) in [(a, b), (b, a)] {
                if implied.contains(&trigger.negate()) && implied.insert(implied_lit) {
                    reached.insert(implied_lit.var());
                    changed = true;
                }
            }
        }
        if !changed {
            return reached;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{occurring} occurring variables exceed the exhaustive cap of {cap}")]
    CapExceeded { occurring: usize, cap: usize },
}

/// Exact model count of `f` over its occurring variables by enumerating all
/// assignments. Declared-but-absent variables are not included; see
/// [`oracle_count`] for declared-universe semantics.
pub fn exhaustive_count(f: &Formula) -> Result<ModelCount, OracleError> {
    exhaustive_count_capped(f, DEFAULT_ORACLE_CAP)
}

/// [`exhaustive_count`] with an explicit cap (at most 63).
pub fn exhaustive_count_capped(f: &Formula, cap: usize) -> Result<ModelCount, OracleError> {
    let vars: Vec<Var> = f.occurring_vars().into_iter().collect();
    let n = vars.len();
    if n > cap.min(63) {
        return Err(OracleError::CapExceeded { occurring: n, cap: cap.min(63) });
    }

    let index_of = |v: Var| vars.binary_search(&v).unwrap();
    let masks: Vec<(u64, u64)> = f
        .clauses()
        .iter()
        .map(|clause| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for lit in clause.literals() {
                let bit = 1u64 << index_of(lit.var());
                if lit.is_negated() {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            (pos, neg)
        })
        .collect();

    let mut models = 0u64;
    for assignment in 0..(1u64 << n) {
        let satisfied = masks
            .iter()
            .all(|&(pos, neg)| assignment & pos != 0 || !assignment & neg != 0);
        if satisfied {
            models += 1;
        }
    }
    Ok(ModelCount::from(models))
}

/// Exact model count of `f` over its declared universe: the exhaustive count
/// over occurring variables times two for each declared-but-absent variable.
pub fn oracle_count(f: &Formula) -> Result<ModelCount, OracleError> {
    let occurring = f.occurring_vars().len();
    let free = u64::from(f.num_declared_vars()) - occurring as u64;
    Ok(exhaustive_count(f)?.times_pow2(free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::parse_dimacs;

    fn formula(text: &str) -> Formula {
        parse_dimacs(text).unwrap().formula
    }

    fn vars(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    #[test]
    fn implication_through_one_clause() {
        let f = formula("p cnf 2 1\n-1 2 0\n");
        assert_eq!(unit_implied_vars(&f, Var::new(1).pos_lit()), vars(&[2]));
    }

    #[test]
    fn no_clause_triggers_no_implication() {
        let f = formula("p cnf 2 1\n1 2 0\n");
        assert_eq!(unit_implied_vars(&f, Var::new(1).pos_lit()), vars(&[]));
    }

    #[test]
    fn implications_chain() {
        let f = formula("p cnf 3 2\n-1 2 0\n-2 3 0\n");
        assert_eq!(unit_implied_vars(&f, Var::new(1).pos_lit()), vars(&[2, 3]));
    }

    #[test]
    fn propagate_forces_and_frees() {
        // x removes (x v z) freeing z; (!x v y) becomes the unit y
        let f = formula("p cnf 3 2\n-1 2 0\n1 3 0\n");
        let r = propagate(&f, Var::new(1).pos_lit());
        assert!(!r.conflict);
        assert!(r.residual.is_empty());
        assert_eq!(r.forced, vars(&[1, 2]));
        assert_eq!(r.freed, vars(&[3]));
    }

    #[test]
    fn propagate_forced_chain() {
        let f = formula("p cnf 2 1\n1 2 0\n");
        let r = propagate(&f, Var::new(1).neg_lit());
        assert!(!r.conflict);
        assert!(r.residual.is_empty());
        assert_eq!(r.forced, vars(&[1, 2]));
        assert!(r.freed.is_empty());
    }

    #[test]
    fn complementary_units_conflict() {
        let f = formula("p cnf 1 2\n1 0\n-1 0\n");
        let r = propagate(&f, Var::new(1).pos_lit());
        assert!(r.conflict);
    }

    #[test]
    fn residual_never_mentions_the_branch_variable() {
        let f = formula("p cnf 4 4\n1 2 0\n-1 3 0\n2 4 0\n3 4 0\n");
        for l in [Var::new(1).pos_lit(), Var::new(1).neg_lit(), Var::new(4).pos_lit()] {
            let r = propagate(&f, l);
            if !r.conflict {
                assert!(!r.residual.occurring_vars().contains(&l.var()));
                for v in &r.forced {
                    assert!(!r.residual.occurring_vars().contains(v));
                }
                assert!(r.residual.clauses().iter().all(|c| !c.is_unit()));
            }
        }
    }

    #[test]
    fn propagate_partitions_the_occurring_vars() {
        let f = formula("p cnf 5 4\n1 2 0\n-2 3 0\n4 5 0\n-1 -4 0\n");
        let r = propagate(&f, Var::new(2).pos_lit());
        if !r.conflict {
            let mut union = r.forced.clone();
            union.extend(&r.freed);
            union.extend(r.residual.occurring_vars());
            assert_eq!(union, f.occurring_vars());
            assert!(r.forced.is_disjoint(&r.freed));
        }
    }

    #[test]
    fn propagate_is_deterministic() {
        let f = formula("p cnf 6 5\n1 2 0\n-2 3 0\n-3 4 0\n5 6 0\n-1 5 0\n");
        let a = propagate(&f, Var::new(1).pos_lit());
        let b = propagate(&f, Var::new(1).pos_lit());
        assert_eq!(a, b);
    }

    #[test]
    fn unit_vars_are_forced_when_no_conflict() {
        let f = formula("p cnf 4 3\n-1 2 0\n-2 3 0\n-3 4 0\n");
        let l = Var::new(1).pos_lit();
        let reached = unit_implied_vars(&f, l);
        let r = propagate(&f, l);
        assert!(!r.conflict);
        assert!(reached.is_subset(&r.forced));
    }

    #[test]
    fn exhaustive_matches_the_worked_example() {
        let f = formula("p cnf 3 1\n1 2 3 0\n");
        assert_eq!(exhaustive_count(&f).unwrap(), ModelCount::from(7u64));
        let restricted = formula("p cnf 3 2\n1 2 3 0\n-1 0\n");
        assert_eq!(exhaustive_count(&restricted).unwrap(), ModelCount::from(3u64));
    }

    #[test]
    fn empty_conjunction_has_one_model() {
        assert_eq!(exhaustive_count(&Formula::empty(0)).unwrap(), ModelCount::one());
        // occurring-variable semantics: declared-but-absent vars not included
        assert_eq!(exhaustive_count(&Formula::empty(5)).unwrap(), ModelCount::one());
        assert_eq!(oracle_count(&Formula::empty(5)).unwrap(), ModelCount::from(32u64));
    }

    #[test]
    fn empty_clause_has_no_models() {
        let f = formula("p cnf 2 2\n0\n1 2 0\n");
        assert!(exhaustive_count(&f).unwrap().is_zero());
    }

    #[test]
    fn cap_is_enforced() {
        let clauses: Vec<Clause> = (1..=30)
            .map(|i| Clause::new([Var::new(i).pos_lit()]).unwrap())
            .collect();
        let f = Formula::new(clauses, 30).unwrap();
        assert_eq!(
            exhaustive_count(&f).unwrap_err(),
            OracleError::CapExceeded { occurring: 30, cap: 25 }
        );
        assert!(exhaustive_count_capped(&f, 30).is_ok());
    }

    // Model-count conservation: restricting by a literal equals the freed
    // factor times the residual count, exhaustively cross-checked.
    #[test]
    fn propagation_conserves_model_counts() {
        use crate::gen::{generate, GenParams};
        for seed in 0..60u64 {
            let k = if seed % 2 == 0 { 2 } else { 3 };
            let n = 3 + (seed % 9) as u32; // up to 11 occurring vars
            let m = (n as usize) + (seed as usize % n as usize);
            let f = generate(&GenParams { k, n, m, seed }).unwrap();
            let occurring: Vec<Var> = f.occurring_vars().into_iter().collect();
            let pivot = occurring[seed as usize % occurring.len()];
            for l in [pivot.pos_lit(), pivot.neg_lit()] {
                let restricted = Formula::new(
                    f.clauses()
                        .iter()
                        .cloned()
                        .chain([Clause::new([l]).unwrap()]),
                    f.num_declared_vars(),
                )
                .unwrap();
                let direct = exhaustive_count(&restricted).unwrap();
                let r = propagate(&f, l);
                let via_propagation = if r.conflict {
                    ModelCount::zero()
                } else {
                    exhaustive_count(&r.residual)
                        .unwrap()
                        .times_pow2(r.freed.len() as u64)
                };
                assert_eq!(direct, via_propagation, "seed {seed} literal {l}");
            }
        }
    }
}
