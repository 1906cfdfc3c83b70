//! Execution helpers: wall-clock wrapping of pipeline runs and the
//! parallel sweep driver.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use antipode_core::analysis::AnalysisError;
use antipode_core::{
    run_pipeline, sweep_row, ConstructionError, Cover, CoverSpec, PipelineReport, SweepRow,
};

/// A pipeline report plus how long the run took. Timings are reported on
/// stderr only; serialized reports stay byte-deterministic.
#[derive(Debug, Clone)]
pub struct TimedPipeline {
    pub report: PipelineReport,
    pub elapsed: Duration,
}

pub fn run_pipeline_timed(cover: &Cover, resolution: u32) -> Result<TimedPipeline, ConstructionError> {
    let start = Instant::now();
    let report = run_pipeline(cover, resolution)?;
    Ok(TimedPipeline {
        report,
        elapsed: start.elapsed(),
    })
}

/// Sweeps the resolutions in parallel on the rayon pool (capped via the
/// `ANTIPODE_BRIDGE_THREADS` environment variable at startup) and returns
/// the rows in input order.
pub fn parallel_sweep(spec: &CoverSpec, resolutions: &[u32]) -> Result<Vec<SweepRow>, AnalysisError> {
    resolutions
        .par_iter()
        .map(|&n| sweep_row(spec, n))
        .collect()
}

/// Reads the worker cap from `ANTIPODE_BRIDGE_THREADS`, if set to a
/// positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var("ANTIPODE_BRIDGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
}

/// Installs the global rayon pool honoring the environment cap. Safe to
/// call more than once; later calls are no-ops.
pub fn init_thread_pool() {
    if let Some(threads) = thread_cap_from_env() {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use antipode_core::{rational, resolution_sweep, SimplexPoint};

    #[test]
    fn parallel_sweep_matches_serial() {
        let target = SimplexPoint::new(vec![
            rational(1, 2),
            rational(1, 4),
            rational(1, 4),
        ])
        .unwrap();
        let spec = CoverSpec::ratio(2, target);
        let ns = [3, 4, 8];
        assert_eq!(
            parallel_sweep(&spec, &ns).unwrap(),
            resolution_sweep(&spec, &ns).unwrap()
        );
    }
}
