use delta_core::delta::Executor;
use rayon::prelude::*;

/// Executor backed by the rayon pool, or the calling thread when `parallel`
/// is off. Results come back in input order either way.
#[derive(Clone, Copy, Debug)]
pub struct Threads {
    pub parallel: bool,
}

impl Executor for Threads {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.parallel {
            items.par_iter().map(f).collect()
        } else {
            items.iter().map(f).collect()
        }
    }
}
