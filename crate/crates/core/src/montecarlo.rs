//! Replica sweeps over a grid of run lengths.
//!
//! Replica `r` of a plan runs with seed `derive_seed(seed_base, r)`. The seed
//! does not depend on the run length, so one trajectory per replica is run
//! to the largest grid point and sampled at every smaller one on the way.
//! Rows are then identical to separate runs of each length.

use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint::Checkpoint;
use crate::dynamics::WormState;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

pub const CSV_SCHEMA: u32 = 1;
pub const CSV_HEADER: &str = "dim,n,replica,seed,s_n,created_total,tan_total,walltime_ms";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub dim: usize,
    pub n_grid: Vec<u64>,
    pub replicas: u64,
    pub seed_base: u64,
    pub track_visits: bool,
    #[serde(default)]
    pub record_every: Option<u64>,
}

impl ExperimentPlan {
    pub fn new(dim: usize, n_grid: Vec<u64>, replicas: u64, seed_base: u64) -> Self {
        ExperimentPlan {
            dim,
            n_grid,
            replicas,
            seed_base,
            track_visits: false,
            record_every: None,
        }
    }

    pub fn with_visits(mut self, track: bool) -> Self {
        self.track_visits = track;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDimension(self.dim));
        }
        if self.n_grid.is_empty() {
            return Err(Error::Parameter("empty n grid".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "n grid must be strictly increasing: {:?}",
                self.n_grid
            )));
        }
        if self.replicas == 0 {
            return Err(Error::Parameter("replicas must be at least 1".into()));
        }
        Ok(())
    }

    pub fn max_n(&self) -> u64 {
        self.n_grid.last().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRow {
    pub dim: usize,
    pub n: u64,
    pub replica: u64,
    pub seed: u64,
    pub s_n: u64,
    pub created_total: u64,
    pub tan_total: Option<u64>,
    pub walltime_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleTable {
    pub rows: Vec<SampleRow>,
    /// Tan-point steps that failed to create a hole, summed over all runs.
    /// Not part of the CSV.
    pub tan_violations: u64,
}

impl SampleTable {
    /// Rows for one grid point, in replica order.
    pub fn at(&self, n: u64) -> impl Iterator<Item = &SampleRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }

    /// Distinct run lengths, ascending.
    pub fn grid(&self) -> Vec<u64> {
        let mut ns: Vec<u64> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// S_n values at one grid point as floats.
    pub fn samples(&self, n: u64) -> Vec<f64> {
        self.at(n).map(|r| r.s_n as f64).collect()
    }

    /// `(n, mean S_n)` for every grid point.
    pub fn means(&self) -> Vec<(u64, f64)> {
        self.grid()
            .into_iter()
            .map(|n| {
                let s = self.samples(n);
                (n, s.iter().sum::<f64>() / s.len() as f64)
            })
            .collect()
    }

    pub fn sort(&mut self) {
        self.rows.sort_by_key(|r| (r.n, r.replica));
    }

    /// Checks row bounds and key uniqueness.
    pub fn validate(&self) -> Result<()> {
        let mut keys: Vec<(u64, u64)> = self.rows.iter().map(|r| (r.n, r.replica)).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Consistency("duplicate (n, replica) rows".into()));
        }
        for r in &self.rows {
            if r.s_n < 1 || r.s_n > r.n + 1 {
                return Err(Error::Consistency(format!(
                    "s_n {} outside [1, {}]",
                    r.s_n,
                    r.n + 1
                )));
            }
            if r.tan_total.is_some_and(|t| t > r.n) {
                return Err(Error::Consistency(format!("tan_total exceeds n={}", r.n)));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# schema={CSV_SCHEMA}")?;
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            let tan = r.tan_total.map(|t| t.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.dim, r.n, r.replica, r.seed, r.s_n, r.created_total, tan, r.walltime_ms
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self> {
        let mut first = String::new();
        input.read_line(&mut first)?;
        let schema = first
            .trim()
            .strip_prefix("# schema=")
            .ok_or_else(|| Error::Format("missing `# schema=` line".into()))?;
        if schema != CSV_SCHEMA.to_string() {
            return Err(Error::Format(format!(
                "unsupported schema version {schema}"
            )));
        }
        let mut reader = csv::Reader::from_reader(input);
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != CSV_HEADER {
            return Err(Error::Format(format!(
                "unexpected header {}",
                header.join(",")
            )));
        }
        let rows = reader
            .deserialize()
            .collect::<std::result::Result<Vec<SampleRow>, _>>()?;
        Ok(SampleTable {
            rows,
            tan_violations: 0,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

struct ReplicaResult {
    rows: Vec<SampleRow>,
    tan_violations: u64,
}

fn run_replica(plan: &ExperimentPlan, replica: u64) -> Result<ReplicaResult> {
    let seed = derive_seed(plan.seed_base, replica);
    let mut state = WormState::new(plan.dim, seed, plan.track_visits)?;
    let start = Instant::now();
    let mut rows = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        state.run(n - state.step_count(), None);
        rows.push(SampleRow {
            dim: plan.dim,
            n,
            replica,
            seed,
            s_n: state.hole_count(),
            created_total: state.created_total(),
            tan_total: state.tan_total(),
            walltime_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(ReplicaResult {
        rows,
        tan_violations: state.tan_without_creation(),
    })
}

fn run_replicas(
    plan: &ExperimentPlan,
    replicas: &[u64],
    pool: &rayon::ThreadPool,
) -> Result<Vec<ReplicaResult>> {
    pool.install(|| replicas.par_iter().map(|&r| run_replica(plan, r)).collect())
}

fn thread_pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    if parallelism == 0 {
        return Err(Error::Parameter("parallelism must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))
}

/// Runs every replica of the plan. The table is sorted by `(n, replica)`
/// and, apart from `walltime_ms`, does not depend on `parallelism`.
pub fn run_sweep(plan: &ExperimentPlan, parallelism: usize) -> Result<SampleTable> {
    plan.validate()?;
    let pool = thread_pool(parallelism)?;
    let ids: Vec<u64> = (0..plan.replicas).collect();
    let mut table = SampleTable::default();
    for res in run_replicas(plan, &ids, &pool)? {
        table.rows.extend(res.rows);
        table.tan_violations += res.tan_violations;
    }
    table.sort();
    Ok(table)
}

/// As [`run_sweep`], persisting completed replicas to `checkpoint` after
/// every batch of `batch` replicas and resuming from it if it exists.
pub fn run_sweep_resumable(
    plan: &ExperimentPlan,
    parallelism: usize,
    checkpoint: &Path,
    batch: usize,
) -> Result<SampleTable> {
    plan.validate()?;
    let pool = thread_pool(parallelism)?;
    let mut done = if checkpoint.exists() {
        let cp = Checkpoint::load(checkpoint)?;
        if cp.plan.as_ref() != Some(plan) {
            return Err(Error::Checkpoint {
                field: "plan".into(),
                reason: "checkpoint was written for a different plan".into(),
            });
        }
        cp.completed
    } else {
        Vec::new()
    };
    let finished: std::collections::BTreeSet<u64> = done.iter().map(|r| r.replica).collect();
    let todo: Vec<u64> = (0..plan.replicas)
        .filter(|r| !finished.contains(r))
        .collect();
    let mut tan_violations = 0;
    for chunk in todo.chunks(batch.max(1)) {
        for res in run_replicas(plan, chunk, &pool)? {
            done.extend(res.rows);
            tan_violations += res.tan_violations;
        }
        Checkpoint::for_sweep(plan.clone(), done.clone()).save(checkpoint)?;
    }
    let mut table = SampleTable {
        rows: done,
        tan_violations,
    };
    table.sort();
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_validation() {
        assert!(ExperimentPlan::new(2, vec![10, 10], 1, 0)
            .validate()
            .is_err());
        assert!(ExperimentPlan::new(2, vec![], 1, 0).validate().is_err());
        assert!(ExperimentPlan::new(2, vec![10], 0, 0).validate().is_err());
        assert!(ExperimentPlan::new(1, vec![10], 1, 0).validate().is_err());
        assert!(ExperimentPlan::new(2, vec![0, 10], 1, 0).validate().is_ok());
    }

    #[test]
    fn zero_length_run() {
        let t = run_sweep(&ExperimentPlan::new(2, vec![0], 1, 5), 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].s_n, 1);
    }

    #[test]
    fn rows_match_independent_runs() {
        let plan = ExperimentPlan::new(2, vec![10, 100, 1000], 3, 42).with_visits(true);
        let t = run_sweep(&plan, 2).unwrap();
        t.validate().unwrap();
        for row in &t.rows {
            let mut s = WormState::new(2, derive_seed(42, row.replica), true).unwrap();
            s.run(row.n, None);
            assert_eq!(row.s_n, s.hole_count());
            assert_eq!(row.tan_total, s.tan_total());
        }
        assert_eq!(t.tan_violations, 0);
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let plan = ExperimentPlan::new(2, vec![10], 3, 42);
        let strip = |t: SampleTable| {
            t.rows
                .into_iter()
                .map(|r| (r.n, r.replica, r.s_n))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            strip(run_sweep(&plan, 1).unwrap()),
            strip(run_sweep(&plan, 8).unwrap())
        );
    }

    #[test]
    fn csv_schema_is_enforced() {
        let plan = ExperimentPlan::new(2, vec![10, 100], 2, 1);
        let t = run_sweep(&plan, 1).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "# schema=1\ndim,n,replica,seed,s_n,created_total,tan_total,walltime_ms\n"
        ));
        assert_eq!(text.lines().count(), 6);
        let back = SampleTable::read_csv(&buf[..]).unwrap();
        assert_eq!(back.rows, t.rows);
        let bumped = text.replacen("schema=1", "schema=2", 1);
        assert!(SampleTable::read_csv(bumped.as_bytes()).is_err());
        assert!(SampleTable::read_csv(&text.as_bytes()[11..]).is_err());
    }
}
