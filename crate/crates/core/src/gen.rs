//! Seeded random k-CNF instance generation.
//!
//! Instances are drawn with ChaCha8 (`rand_chacha::ChaCha8Rng` seeded via
//! `seed_from_u64`), a fixed, portable PRNG, so a seed reproduces the same
//! instance on every platform.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Clause, Formula, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Clause width; 2 or 3.
    pub k: u8,
    /// Declared variable count.
    pub n: u32,
    /// Number of distinct clauses to emit.
    pub m: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("clause width {0} is unsupported; expected 2 or 3")]
    UnsupportedWidth(u8),
    #[error("need at least {k} variables for width-{k} clauses, got {n}")]
    TooFewVars { n: u32, k: u8 },
    #[error("at least one clause is required")]
    NoClauses,
    #[error("{requested} clauses requested but only {available} distinct width-{k} clauses exist on {n} variables")]
    Infeasible { requested: usize, available: u128, n: u32, k: u8 },
}

/// Number of distinct non-tautological clauses of exactly `k` distinct
/// variables over `n` variables: `C(n, k) * 2^k`.
pub fn max_distinct_clauses(n: u32, k: u8) -> u128 {
    let n = u128::from(n);
    match k {
        2 => n * (n - 1) / 2 * 4,
        3 => n * (n - 1) * (n - 2) / 6 * 8,
        _ => 0,
    }
}

/// Generates `m` distinct clauses of exactly `k` distinct variables, chosen
/// uniformly with uniform polarities, rejecting duplicate clauses.
pub fn generate(params: &GenParams) -> Result<Formula, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    generate_with_rng(params.k, params.n, params.m, &mut rng)
}

/// [`generate`] drawing from a caller-provided stream.
pub fn generate_with_rng(
    k: u8,
    n: u32,
    m: usize,
    rng: &mut impl Rng,
) -> Result<Formula, GenError> {
    if !(k == 2 || k == 3) {
        return Err(GenError::UnsupportedWidth(k));
    }
    if n < u32::from(k) {
        return Err(GenError::TooFewVars { n, k });
    }
    if m == 0 {
        return Err(GenError::NoClauses);
    }
    let available = max_distinct_clauses(n, k);
    if m as u128 > available {
        return Err(GenError::Infeasible { requested: m, available, n, k });
    }

    let mut clauses: BTreeSet<Clause> = BTreeSet::new();
    while clauses.len() < m {
        let mut vars: Vec<u32> = Vec::with_capacity(k as usize);
        while vars.len() < k as usize {
            let v = rng.gen_range(1..=n);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lits: Vec<Lit> = vars
            .into_iter()
            .map(|id| Lit::new(Var::new(id), rng.gen::<bool>()))
            .collect();
        let clause = Clause::new(lits).expect("distinct variables cannot be tautological");
        clauses.insert(clause);
    }
    Ok(Formula::new(clauses, n).expect("generated ids lie within the universe"))
}
