//! Wall-clock timings for the expensive kernels.
//!
//! Each case owns a setup closure that builds its inputs once and hands back
//! the closure that gets timed, so setup cost never lands in the numbers.
//! Nothing here checks physics.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Max, Min, OrderStatistics};

use crate::engines::{self, EngineConfig};
use crate::error::{invalid, Error, Result};
use crate::hilbert::{random, Operator};
use crate::liouville::{dissipator_superop, hamiltonian_superop, propagate};
use crate::otto::{efficiency_map_2dbox, Map2dSpec};

/// Smallest repetition count a case may use.
pub const MIN_REPS: usize = 5;

/// A case regresses when its statistic exceeds the baseline by more than this factor.
pub const REGRESSION_SLACK: f64 = 1.2;

/// Budget for the 200×200 efficiency map on the reference machine, in seconds.
pub const FIG3_BUDGET_S: f64 = 10.0;

const SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Median,
    P95,
}

pub type TimedFn = Box<dyn FnMut() -> Result<()>>;
pub type SetupFn = Box<dyn FnOnce() -> Result<TimedFn>>;

pub struct BenchCase {
    pub name: String,
    /// Hilbert dimension of the problem, 0 when it does not apply.
    pub dim: usize,
    pub grid_points: usize,
    pub reps: usize,
    pub warmup: usize,
    pub statistic: Statistic,
    pub setup: SetupFn,
}

impl std::fmt::Debug for BenchCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchCase")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("grid_points", &self.grid_points)
            .field("reps", &self.reps)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchOptions {
    pub reps: usize,
    pub warmup: usize,
    /// Side of the square efficiency-map grid.
    pub fig3_n: usize,
    /// Hilbert dimensions for the exponential scaling fit.
    pub scaling_dims: Vec<usize>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { reps: 7, warmup: 2, fig3_n: 200, scaling_dims: vec![3, 4, 5, 6, 7, 8] }
    }
}

impl BenchOptions {
    pub fn validate(&self) -> Result<()> {
        if self.reps < MIN_REPS {
            return invalid(format!("reps must be at least {MIN_REPS}, got {}", self.reps));
        }
        if self.fig3_n < 2 {
            return invalid("fig3_n must be at least 2");
        }
        if self.scaling_dims.iter().any(|&n| n < 2) {
            return invalid("scaling_dims entries must be at least 2");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub dim: usize,
    pub grid_points: usize,
    pub reps: usize,
    pub statistic: Statistic,
    pub median_s: f64,
    pub p95_s: f64,
    pub min_s: f64,
    pub max_s: f64,
}

impl CaseResult {
    pub fn value(&self) -> f64 {
        match self.statistic {
            Statistic::Median => self.median_s,
            Statistic::P95 => self.p95_s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub baseline_s: f64,
    pub current_s: f64,
    pub ratio: f64,
    pub regressed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub cases: Vec<CaseResult>,
    /// Log-log slope of exponential cost against Hilbert dimension.
    pub scaling_exponent: Option<f64>,
    /// `None` in report-only mode.
    pub comparisons: Option<Vec<Comparison>>,
}

impl BenchReport {
    pub fn case(&self, name: &str) -> Option<&CaseResult> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn regressions(&self) -> Vec<&Comparison> {
        self.comparisons.iter().flatten().filter(|c| c.regressed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn random_lindbladian(n: usize, rng: &mut ChaCha8Rng) -> Result<crate::liouville::Superoperator> {
    let h = hamiltonian_superop(&random::hermitian(rng, n))?;
    let s = Operator::new(random::ginibre(rng, n, n))?;
    h.add(&dissipator_superop(&[s])?)
}

/// The standard suite for `opts`.
pub fn suite(opts: &BenchOptions) -> Vec<BenchCase> {
    let case = |name: String, dim, grid_points, setup: SetupFn| BenchCase {
        name,
        dim,
        grid_points,
        reps: opts.reps,
        warmup: opts.warmup,
        statistic: Statistic::Median,
        setup,
    };
    let mut cases = vec![case(
        "expm_nv_liouville".into(),
        3,
        0,
        Box::new(|| {
            let g = engines::build_generators(&EngineConfig::nv_center(1.0))?.total();
            Ok(Box::new(move || propagate(&g, 1e-3).map(|m| drop(std::hint::black_box(m)))) as TimedFn)
        }),
    )];
    let n = opts.fig3_n;
    cases.push(case(
        "fig3_grid".into(),
        0,
        n * n,
        Box::new(move || {
            let spec = Map2dSpec::fig3(n);
            Ok(Box::new(move || efficiency_map_2dbox(&spec).map(|m| drop(std::hint::black_box(m)))) as TimedFn)
        }),
    ));
    cases.push(case(
        "engine_sweep".into(),
        3,
        30,
        Box::new(|| {
            let cfg = EngineConfig::nv_center(1.0);
            let taus = engines::logspace(1e-4, 10.0, 30);
            Ok(Box::new(move || engines::power_sweep(&cfg, &taus).map(|r| drop(std::hint::black_box(r)))) as TimedFn)
        }),
    ));
    for &d in &opts.scaling_dims {
        cases.push(case(
            format!("expm_dim_{d}"),
            d,
            0,
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(SEED + d as u64);
                let l = random_lindbladian(d, &mut rng)?;
                Ok(Box::new(move || propagate(&l, 0.7).map(|m| drop(std::hint::black_box(m)))) as TimedFn)
            }),
        ));
    }
    cases
}

/// Times one case: warm-up calls first, then `reps` timed calls.
pub fn run_case(case: BenchCase) -> Result<CaseResult> {
    if case.reps < MIN_REPS {
        return invalid(format!("case {} has {} reps, need at least {MIN_REPS}", case.name, case.reps));
    }
    let mut f = (case.setup)()?;
    for _ in 0..case.warmup {
        f()?;
    }
    let mut times = Vec::with_capacity(case.reps);
    for _ in 0..case.reps {
        let t0 = Instant::now();
        f()?;
        times.push(t0.elapsed().as_secs_f64());
    }
    let mut data = Data::new(times);
    Ok(CaseResult {
        name: case.name,
        dim: case.dim,
        grid_points: case.grid_points,
        reps: case.reps,
        statistic: case.statistic,
        median_s: data.median(),
        p95_s: data.percentile(95),
        min_s: data.min(),
        max_s: data.max(),
    })
}

/// Slope of `ln t` against `ln N` over the `expm_dim_*` cases.
pub fn scaling_exponent(cases: &[CaseResult]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        cases.iter().filter(|c| c.name.starts_with("expm_dim_")).map(|c| (c.dim as f64, c.median_s)).collect();
    if pts.len() < 2 {
        return None;
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Some(engines::loglog_slope(&x, &y))
}

/// Runs every case whose name contains `filter` (all cases for `None`),
/// sequentially, and compares against `baseline` when one is given.
pub fn run_suite(filter: Option<&str>, opts: &BenchOptions, baseline: Option<&BenchReport>) -> Result<BenchReport> {
    opts.validate()?;
    let mut cases = Vec::new();
    for c in suite(opts) {
        if filter.is_none_or(|f| c.name.contains(f)) {
            cases.push(run_case(c)?);
        }
    }
    let scaling_exponent = scaling_exponent(&cases);
    let comparisons = baseline.map(|b| compare(&cases, b));
    Ok(BenchReport { cases, scaling_exponent, comparisons })
}

/// Cases present in both reports, gated at [`REGRESSION_SLACK`].
pub fn compare(cases: &[CaseResult], baseline: &BenchReport) -> Vec<Comparison> {
    cases
        .iter()
        .filter_map(|c| {
            let b = baseline.case(&c.name)?;
            let ratio = c.value() / b.value();
            Some(Comparison {
                name: c.name.clone(),
                baseline_s: b.value(),
                current_s: c.value(),
                ratio,
                regressed: ratio > REGRESSION_SLACK,
            })
        })
        .collect()
}

/// Reads a stored report. A missing file is not an error: it means report-only mode.
pub fn load_baseline(path: &Path) -> Result<Option<BenchReport>> {
    match std::fs::read_to_string(path) {
        Ok(s) => serde_json::from_str(&s)
            .map(Some)
            .map_err(|e| Error::InvalidInput(format!("baseline {}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::InvalidInput(format!("baseline {}: {e}", path.display()))),
    }
}
