use gabp_core::evolve::{EvalJob, Executor, Fitness};
use rayon::prelude::*;

/// Fitness evaluation on a dedicated rayon pool. Results come back in job
/// order, so a run is identical for any worker count.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Parallel {
    fn evaluate_batch<F: Fitness + ?Sized>(&self, fitness: &F, jobs: &[EvalJob<'_>]) -> Vec<f64> {
        self.pool.install(|| {
            jobs.par_iter()
                .map(|j| fitness.evaluate(j.chromosome, j.stream_seed))
                .collect()
        })
    }
}
