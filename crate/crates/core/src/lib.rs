//! Exact propositional model counting for 2-CNF and 3-CNF formulas.
//!
//! The counters are DPLL-style branching algorithms whose running time is
//! bounded in the number of clauses rather than the number of variables:
//! branching pivots are chosen from the variable co-occurrence graph so that
//! every branch removes as many clauses as possible, disconnected components
//! are counted independently and multiplied, and a product rule splits off
//! two-variable sub-formulas around suitable degree-three pivots. An
//! exhaustive enumeration oracle, branching-tree instrumentation, and a
//! branching-number solver back the counters with verifiable evidence.

pub mod analysis;
pub mod counter;
pub mod dimacs;
pub mod formula;
pub mod gen;
pub mod graph;
pub mod mc2;
pub mod mc3;
pub mod propagate;
pub mod suite;

pub use counter::{Algorithm, CountError, CountOptions};
pub use formula::{Clause, Formula, FormulaError, Lit, ModelCount, Var};
pub use mc2::count_mc2;
pub use mc3::count_mc3;
pub use propagate::{exhaustive_count, oracle_count, propagate, PropagationResult};
