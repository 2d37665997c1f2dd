//! Data-parallel helpers. With the `parallel` feature off, every strategy runs sequentially.
//!
//! `GRASSBLOW_THREADS` caps the worker pool; results always come back in input order.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

pub const THREADS_ENV: &str = "GRASSBLOW_THREADS";

/// The thread cap from the environment, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[cfg(feature = "parallel")]
fn pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap() {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// `items.map(f)`, order preserved.
pub fn map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            pool().install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(f).collect(),
    }
}

/// `(0..n).map(f)`, order preserved.
pub fn map_range<U, F>(strategy: Strategy, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(strategy, &idx, |&i| f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let a = map_range(Strategy::Sequential, 1000, |i| i * i);
        let b = map_range(Strategy::Parallel, 1000, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(b[999], 999 * 999);
    }
}
