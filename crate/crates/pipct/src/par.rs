//! Feature-gated data parallelism. With the `parallel` feature (default) the
//! helpers fan out over rayon; without it they run sequentially with the same
//! ordered-output semantics, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, preserving index order; the first error (by index)
/// wins.
pub(crate) fn try_map_indexed<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential twin of [`try_map_indexed`], kept unconditionally so the
/// benchmark suite can compare both paths in a single build.
pub(crate) fn try_map_indexed_seq<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    F: Fn(usize) -> Result<T, E>,
{
    (0..n).map(f).collect()
}
