//! End-to-end verification campaigns and report generation.

pub mod domains;
pub mod record;
pub mod report;
pub mod spheres;
pub mod sweep;

pub use domains::{
    spectrum_with_uncertainty, verify_corollary, verify_theorem_domain, verify_wang_xia,
    DomainRunOptions,
};
pub use record::{VerificationRecord, Verdict};
pub use report::{emit_report, records_to_csv, records_to_json, ReportFormat};
pub use spheres::{verify_sphere_pair, verify_sphere_suite, SphereRunOptions};
pub use sweep::sharpness_sweep;

use crate::error::Result;

/// Run independent verification jobs on a bounded worker pool, preserving
/// input order in the output.
pub fn run_campaign<T, F>(jobs: Vec<T>, workers: usize, runner: F) -> Vec<Result<VerificationRecord>>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<VerificationRecord> + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool");
    pool.install(|| jobs.par_iter().map(|j| runner(j)).collect())
}
