//! Core CNF types: variables, literals, clauses, formulas and model counts.
//!
//! All types are immutable values with canonical internal ordering, so
//! structural equality is formula equality and every iteration order is
//! deterministic.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// A Boolean variable, identified by a positive 1-based id (DIMACS style).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

impl Var {
    /// Creates a variable from a 1-based id.
    ///
    /// Panics if `id` is zero.
    pub fn new(id: u32) -> Var {
        assert!(id >= 1, "variable ids are 1-based");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// The positive literal of this variable.
    pub fn pos_lit(self) -> Lit {
        Lit { var: self, negated: false }
    }

    /// The negated literal of this variable.
    pub fn neg_lit(self) -> Lit {
        Lit { var: self, negated: true }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal: a variable or its negation.
///
/// Field order matters for the derived `Ord`: literals sort by variable
/// first, positive before negative, which fixes the canonical clause order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit {
    var: Var,
    negated: bool,
}

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit { var, negated }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    /// Negation; an involution.
    pub fn negate(self) -> Lit {
        Lit { var: self.var, negated: !self.negated }
    }

    /// Parses a DIMACS-style signed integer. Zero is not a literal.
    pub fn from_dimacs(code: i64) -> Option<Lit> {
        if code == 0 || code.unsigned_abs() > u64::from(u32::MAX) {
            return None;
        }
        Some(Lit {
            var: Var::new(code.unsigned_abs() as u32),
            negated: code < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var.id());
        if self.negated {
            -id
        } else {
            id
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Errors from constructing clauses and formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    /// A clause contained both a variable and its negation. Such clauses are
    /// always satisfied and are excluded from the clause definition, so they
    /// are rejected rather than dropped.
    #[error("clause contains complementary literals {0} and -{0}", var)]
    ComplementaryPair { var: Var },
    /// A clause referenced a variable above the declared universe.
    #[error("variable {var} exceeds the declared count {declared}")]
    VarOutOfRange { var: Var, declared: u32 },
}

/// A disjunction of literals with set semantics: sorted, no duplicates, no
/// complementary pair. The empty clause is representable and denotes an
/// unsatisfiable constraint.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, collapsing duplicate literals and rejecting
    /// complementary pairs.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause, FormulaError> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Err(FormulaError::ComplementaryPair { var: pair[0].var() });
            }
        }
        Ok(Clause { lits })
    }

    /// The empty clause.
    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub(crate) fn from_sorted_unchecked(lits: Vec<Lit>) -> Clause {
        debug_assert!(lits.windows(2).all(|p| p[0] < p[1] && p[0].var() != p[1].var()));
        Clause { lits }
    }

    pub fn literals(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    /// The literal of a unit clause, if this is one.
    pub fn unit_lit(&self) -> Option<Lit> {
        if self.is_unit() {
            Some(self.lits[0])
        } else {
            None
        }
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.lits.iter().any(|l| l.var() == var)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.lits {
            write!(f, "{} ", lit)?;
        }
        write!(f, "0")
    }
}

/// A CNF formula: a set of clauses over a declared variable universe
/// `1..=num_declared_vars`. Declared variables that occur in no clause are
/// still part of the universe and contribute a free factor of two to model
/// counts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Formula {
    clauses: Vec<Clause>,
    num_vars: u32,
}

impl Formula {
    /// Builds a formula over `num_vars` declared variables. Duplicate clauses
    /// are merged; duplicates do not change the model count and merging keeps
    /// the clause parameter equal to the mathematical clause count.
    pub fn new(
        clauses: impl IntoIterator<Item = Clause>,
        num_vars: u32,
    ) -> Result<Formula, FormulaError> {
        let mut clauses: Vec<Clause> = clauses.into_iter().collect();
        for clause in &clauses {
            for lit in clause.literals() {
                if lit.var().id() > num_vars {
                    return Err(FormulaError::VarOutOfRange { var: lit.var(), declared: num_vars });
                }
            }
        }
        clauses.sort_unstable();
        clauses.dedup();
        Ok(Formula { clauses, num_vars })
    }

    /// A formula with no clauses over `num_vars` declared variables.
    pub fn empty(num_vars: u32) -> Formula {
        Formula { clauses: Vec::new(), num_vars }
    }

    pub(crate) fn from_parts_unchecked(mut clauses: Vec<Clause>, num_vars: u32) -> Formula {
        clauses.sort_unstable();
        clauses.dedup();
        debug_assert!(clauses
            .iter()
            .all(|c| c.literals().iter().all(|l| l.var().id() <= num_vars)));
        Formula { clauses, num_vars }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The clause count `m`.
    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// The declared variable count `n`.
    pub fn num_declared_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        // canonical order puts the empty clause first
        self.clauses.first().is_some_and(|c| c.is_empty())
    }

    /// Variables that occur in at least one clause, ascending.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var()))
            .collect()
    }

    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    /// True iff every clause has length at most `k`. Recursion produces
    /// clauses shorter than the input width, so the check is an upper bound
    /// rather than an exact-width test.
    pub fn validate_width(&self, k: usize) -> bool {
        self.max_clause_len() <= k
    }
}

/// An exact model count. Counts reach `2^n`, so the value is an
/// arbitrary-precision nonnegative integer; `Display` renders the plain
/// decimal digits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ModelCount(BigUint);

impl ModelCount {
    pub fn zero() -> ModelCount {
        ModelCount(BigUint::zero())
    }

    pub fn one() -> ModelCount {
        ModelCount(BigUint::one())
    }

    /// `2^exp`, the count of an unconstrained universe of `exp` variables.
    pub fn two_pow(exp: u64) -> ModelCount {
        ModelCount(BigUint::one() << exp)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplies by `2^exp`, the factor contributed by `exp` freed variables.
    pub fn times_pow2(self, exp: u64) -> ModelCount {
        ModelCount(self.0 << exp)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for ModelCount {
    fn from(v: u64) -> ModelCount {
        ModelCount(BigUint::from(v))
    }
}

impl From<BigUint> for ModelCount {
    fn from(v: BigUint) -> ModelCount {
        ModelCount(v)
    }
}

impl std::ops::Add for ModelCount {
    type Output = ModelCount;
    fn add(self, rhs: ModelCount) -> ModelCount {
        ModelCount(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for ModelCount {
    fn add_assign(&mut self, rhs: ModelCount) {
        self.0 += rhs.0;
    }
}

impl std::ops::Mul for ModelCount {
    type Output = ModelCount;
    fn mul(self, rhs: ModelCount) -> ModelCount {
        ModelCount(self.0 * rhs.0)
    }
}

impl std::ops::MulAssign for ModelCount {
    fn mul_assign(&mut self, rhs: ModelCount) {
        self.0 *= rhs.0;
    }
}

impl fmt::Display for ModelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ModelCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
