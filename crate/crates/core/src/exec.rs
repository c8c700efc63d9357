//! Data-parallel helpers with a sequential fallback.

/// How a sweep distributes its independent work items.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is on; otherwise sequential.
    #[default]
    Parallel,
}

/// Maps every item and folds the results with an associative `reduce`.
pub fn map_reduce<T, R, M, F>(items: &[T], exec: Execution, identity: R, map: M, reduce: F) -> R
where
    T: Sync,
    R: Send + Sync + Clone,
    M: Fn(&T) -> R + Sync + Send,
    F: Fn(R, R) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter()
                .map(&map)
                .reduce(|| identity.clone(), &reduce)
        }
        _ => items.iter().map(map).fold(identity, reduce),
    }
}

/// Maps every item, keeping input order.
pub fn map_collect<T, R, M>(items: &[T], exec: Execution, map: M) -> Vec<R>
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(map).collect()
        }
        _ => items.iter().map(map).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map_reduce(&xs, Execution::Sequential, 0, |x| x * x, |a, b| a + b);
        let b = map_reduce(&xs, Execution::Parallel, 0, |x| x * x, |a, b| a + b);
        assert_eq!(a, b);
        assert_eq!(
            map_collect(&xs, Execution::Parallel, |x| x + 1),
            map_collect(&xs, Execution::Sequential, |x| x + 1)
        );
    }
}
