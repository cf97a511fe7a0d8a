//! Order-preserving parallel map helpers with a sequential fallback.
//!
//! Results always come back in input order, and reductions downstream of
//! these helpers run sequentially over that order, so output is bit-identical
//! whether or not the `parallel` feature is enabled. The `*_seq` variants are
//! always available so benchmarks can compare both paths in one build.

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_collect_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_collect_seq(items, f)
    }
}

pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_collect_par<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_range<U, F>(len: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_range_par(len, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_seq(len, f)
    }
}

pub fn map_range_seq<U, F>(len: u64, f: F) -> Vec<U>
where
    F: Fn(u64) -> U,
{
    (0..len).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range_par<U, F>(len: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

/// First index in `0..len` satisfying `pred`, if any. The parallel path uses
/// `find_first`, so the answer matches the sequential scan exactly.
pub fn find_first<F>(len: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        find_first_par(len, pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_first_seq(len, pred)
    }
}

pub fn find_first_seq<F>(len: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool,
{
    (0..len).find(|&i| pred(i))
}

#[cfg(feature = "parallel")]
pub fn find_first_par<F>(len: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    // Scan in chunks so each task amortizes the scheduling cost;
    // `find_first` over ordered chunks still returns the global minimum.
    const CHUNK: u64 = 4096;
    let chunks = len.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .find_map_first(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).find(|&i| pred(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x * x + 1;
        assert_eq!(map_collect(&items, f), map_collect_seq(&items, f));
        assert_eq!(
            map_range(1000, |x| x * 3),
            map_range_seq(1000, |x| x * 3)
        );
        assert_eq!(find_first(1000, |x| x % 7 == 3), Some(3));
        assert_eq!(find_first(4, |x| x > 10), None);
    }
}
