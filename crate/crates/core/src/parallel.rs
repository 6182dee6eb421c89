//! Order-preserving execution helpers shared by the data-parallel kernels.
//!
//! Every kernel in this crate that can run in parallel (Pauli-term
//! expectations, FCI matrix-vector rows, shifted gradient evaluations,
//! geometry scans) funnels through [`maybe_par_map`]: an indexed map followed
//! by a sequential reduction at the call site. Results are therefore
//! bit-identical whether the `parallel` feature is enabled or not — threads
//! only change *who* computes each slot, never the order in which slots are
//! combined.
//!
//! [`seq_map`] is always available so benchmarks can compare the sequential
//! kernel against the feature-selected one within a single build.

/// Map `f` over `items`, preserving order, sequentially.
pub fn seq_map<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Map `f` over `items`, preserving order, in parallel.
#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order, using threads when the `parallel`
/// feature is enabled and plain iteration otherwise.
pub fn maybe_par_map<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map(items, f)
    }
}

/// Map `f` over index range `0..n`, preserving order, with the same
/// feature-based dispatch as [`maybe_par_map`].
pub fn maybe_par_map_range<U: Send, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = seq_map(&items, |x| x * x);
        let auto = maybe_par_map(&items, |x| x * x);
        assert_eq!(seq, auto);
        let ranged = maybe_par_map_range(1000, |i| (i as u64) * (i as u64));
        assert_eq!(seq, ranged);
    }
}
