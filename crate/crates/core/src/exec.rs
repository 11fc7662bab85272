//! Chunked map/reduce over index ranges, run on rayon or on the calling
//! thread.
//!
//! Chunks are contiguous and their results are folded in index order, so
//! any associative merge gives the same answer for both modes and every
//! thread count.

use std::ops::Range;

/// How a sweep is executed.
/// Defaults to parallel when the `parallel` feature is on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Split `0..len` into chunks of at most `chunk` indices.
fn chunks(len: u64, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    (0..len.div_ceil(chunk))
        .map(|i| i * chunk..((i + 1) * chunk).min(len))
        .collect()
}

/// Apply `map` to every chunk of `0..len` and fold the results with `merge`.
pub(crate) fn map_reduce<T, M, R>(exec: Execution, len: u64, chunk: u64, identity: T, map: M, merge: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(Range<u64>) -> T + Sync,
    R: Fn(T, T) -> T + Sync,
{
    let parts = chunks(len, chunk);
    match exec {
        Execution::Sequential => parts.into_iter().map(&map).fold(identity, &merge),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            parts
                .into_par_iter()
                .map(&map)
                .reduce(|| identity.clone(), &merge)
        }
    }
}

/// Chunk length that gives each worker several pieces of `len`.
pub(crate) fn chunk_for(len: u64) -> u64 {
    #[cfg(feature = "parallel")]
    let workers = rayon::current_num_threads() as u64;
    #[cfg(not(feature = "parallel"))]
    let workers = 1u64;
    (len / (workers * 8)).clamp(1, 1 << 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        let parts = chunks(10, 3);
        assert_eq!(parts, vec![0..3, 3..6, 6..9, 9..10]);
        assert!(chunks(0, 4).is_empty());
    }

    #[test]
    fn modes_agree() {
        let sum = |exec| map_reduce(exec, 1000, 7, 0u64, |r| r.sum::<u64>(), |a, b| a + b);
        assert_eq!(sum(Execution::Sequential), 499_500);
        assert_eq!(sum(Execution::default()), 499_500);
    }
}
