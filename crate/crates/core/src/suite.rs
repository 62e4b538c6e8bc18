//! Seeded instance families and the harnesses that sweep them: equivalence
//! against exhaustive enumeration and the empirical branch-node bound. This
//! is verification surface; counting itself lives in the algorithm modules.

use std::fs;
use std::io;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{bound_check, record_run};
use crate::counter::{Algorithm, CountOptions};
use crate::dimacs::serialize_dimacs;
use crate::formula::{Formula, ModelCount};
use crate::gen::{generate_with_rng, max_distinct_clauses};
use crate::propagate::oracle_count;

/// A reproducible family of random instances: width `k`, variable counts in
/// `n_range`, clause counts in `m_factors.0 * n ..= m_factors.1 * n` (capped
/// at the number of distinct clauses), `count` members derived from
/// `seed_base`. Every member satisfies the width bound by construction.
#[derive(Clone, Copy, Debug)]
pub struct InstanceFamily {
    pub k: u8,
    pub n_range: (u32, u32),
    pub m_factors: (u32, u32),
    pub count: u32,
    pub seed_base: u64,
}

impl InstanceFamily {
    /// The `index`-th member; fully determined by the family parameters.
    pub fn instance(&self, index: u32) -> (u64, Formula) {
        let seed = self.seed_base + u64::from(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(self.n_range.0..=self.n_range.1);
        let lo = u128::from(self.m_factors.0) * u128::from(n);
        let hi = (u128::from(self.m_factors.1) * u128::from(n)).min(max_distinct_clauses(n, self.k));
        let m = rng.gen_range(lo..=hi) as usize;
        let formula = generate_with_rng(self.k, n, m, &mut rng)
            .expect("family parameters stay within feasibility");
        (seed, formula)
    }

    pub fn instances(&self) -> impl Iterator<Item = (u64, Formula)> + '_ {
        (0..self.count).map(|i| self.instance(i))
    }
}

/// One instance's outcome, emitted as one JSON line.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceRecord {
    pub index: u32,
    pub seed: u64,
    pub n: u32,
    pub m: usize,
    pub count: ModelCount,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<ModelCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    pub branch_nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_pass: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub records: Vec<InstanceRecord>,
    /// Indices of instances that failed; their serialized formulas sit in the
    /// failures directory when one was given.
    pub failing: Vec<u32>,
    pub max_bound_ratio: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }

    /// One JSON object per instance.
    pub fn json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn persist_failure(dir: Option<&Path>, seed: u64, f: &Formula) -> io::Result<()> {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("fail_seed{seed}.cnf")), serialize_dimacs(f))
}

/// Counts every family member with `algorithm` and with exhaustive
/// enumeration, reporting any disagreement. Requires the family's variable
/// range to stay within the enumeration cap.
pub fn run_equivalence_suite(
    family: &InstanceFamily,
    algorithm: Algorithm,
    failures_dir: Option<&Path>,
) -> io::Result<SuiteReport> {
    run_suite(family, algorithm, None, failures_dir)
}

/// Checks `branch_nodes <= (m+1) * base^m` on every family member and
/// reports the worst ratio.
pub fn run_bound_suite(
    family: &InstanceFamily,
    algorithm: Algorithm,
    base: f64,
    failures_dir: Option<&Path>,
) -> io::Result<SuiteReport> {
    run_suite(family, algorithm, Some(base), failures_dir)
}

fn run_suite(
    family: &InstanceFamily,
    algorithm: Algorithm,
    bound_base: Option<f64>,
    failures_dir: Option<&Path>,
) -> io::Result<SuiteReport> {
    let opts = CountOptions::default();
    let mut records = Vec::with_capacity(family.count as usize);
    let mut failing = Vec::new();
    let mut max_bound_ratio = 0.0f64;

    for (index, (seed, formula)) in family.instances().enumerate() {
        let index = index as u32;
        let (count, stats) =
            record_run(&formula, algorithm, &opts).expect("family members satisfy the width bound");

        let mut record = InstanceRecord {
            index,
            seed,
            n: formula.num_declared_vars(),
            m: formula.clause_count(),
            count,
            oracle: None,
            equal: None,
            branch_nodes: stats.branch_nodes,
            bound_ratio: None,
            bound_pass: None,
        };

        let failed = match bound_base {
            None => {
                let oracle =
                    oracle_count(&formula).expect("family variables stay within the oracle cap");
                let equal = oracle == record.count;
                record.oracle = Some(oracle);
                record.equal = Some(equal);
                !equal
            }
            Some(base) => {
                let check = bound_check(&stats, formula.clause_count(), base);
                max_bound_ratio = max_bound_ratio.max(check.ratio);
                record.bound_ratio = Some(check.ratio);
                record.bound_pass = Some(check.pass);
                !check.pass
            }
        };

        if failed {
            failing.push(index);
            persist_failure(failures_dir, seed, &formula)?;
        }
        records.push(record);
    }

    Ok(SuiteReport { records, failing, max_bound_ratio })
}
