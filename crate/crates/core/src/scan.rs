//! Per-item parallel evaluation with results kept in input order, so output
//! does not depend on the number of workers.

use rayon::prelude::*;

use crate::error::{ensure, Error, Result};

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    ensure!(
        workers >= 1,
        Error::Precondition("worker count must be at least 1".into())
    );
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start {workers} workers: {e}")))
}

/// `items.map(f)` on `workers` threads, in input order.
pub fn ordered_map<T, R, F>(items: &[T], workers: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    Ok(pool(workers)?.install(|| items.par_iter().map(f).collect()))
}

/// Fallible [`ordered_map`]; the first error in input order wins.
pub fn try_ordered_map<T, R, F>(items: &[T], workers: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    ordered_map(items, workers, f)?.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_workers() {
        let items: Vec<u64> = (0..1000).collect();
        let one = ordered_map(&items, 1, |x| x * x % 97).unwrap();
        let four = ordered_map(&items, 4, |x| x * x % 97).unwrap();
        assert_eq!(one, four);
        assert!(ordered_map(&items, 0, |x| *x).is_err());
    }

    #[test]
    fn first_error_in_order() {
        let items: Vec<u64> = (0..100).collect();
        let r = try_ordered_map(&items, 3, |&x| {
            if x % 40 == 39 {
                Err(Error::Precondition(format!("{x}")))
            } else {
                Ok(x)
            }
        });
        assert_eq!(r, Err(Error::Precondition("39".into())));
    }
}
