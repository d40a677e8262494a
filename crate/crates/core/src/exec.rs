//! Column-level execution strategy.
//!
//! Every operator in this crate is materialized column by column (the image of
//! each basis vector), and every perturbation series is evaluated per basis
//! vector. Those loops go through [`map_indexed`], which fans out over rayon when
//! the `parallel` feature is enabled and the process-wide strategy is
//! [`Strategy::Parallel`]. Results are collected in index order, so output never
//! depends on scheduling.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

static STRATEGY: AtomicU8 = AtomicU8::new(1);

// Below this many columns the rayon overhead dominates.
const PARALLEL_THRESHOLD: usize = 16;

pub fn strategy() -> Strategy {
    match STRATEGY.load(Ordering::Relaxed) {
        0 => Strategy::Sequential,
        _ => Strategy::Parallel,
    }
}

pub fn set_strategy(s: Strategy) {
    STRATEGY.store(
        match s {
            Strategy::Sequential => 0,
            Strategy::Parallel => 1,
        },
        Ordering::Relaxed,
    );
}

/// True when parallel execution is compiled in.
pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

/// Maps `f` over `items`, preserving order.
pub fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if strategy() == Strategy::Parallel && items.len() >= PARALLEL_THRESHOLD {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = PARALLEL_THRESHOLD;
    items.iter().map(f).collect()
}

/// Fallible variant of [`map_indexed`]; reports the error of the lowest index.
pub fn try_map_indexed<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    map_indexed(items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<usize> = (0..1000).collect();
        let out = map_indexed(&items, |x| x * 2);
        assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn first_error_wins() {
        let items: Vec<usize> = (0..100).collect();
        let out: Result<Vec<usize>, usize> =
            try_map_indexed(&items, |&x| if x % 30 == 29 { Err(x) } else { Ok(x) });
        assert_eq!(out, Err(29));
    }
}
