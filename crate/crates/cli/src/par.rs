//! Index-ordered parallel maps. Results come back in index order whatever the
//! scheduling, and every reduction runs sequentially afterwards.

use rayon::prelude::*;

/// `f(0), …, f(n − 1)` evaluated in parallel.
pub fn map<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to consecutive chunks of `0..total` and concatenates the results.
pub fn chunked<T, E, F>(total: u64, chunk: u64, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(std::ops::Range<u64>) -> Result<Vec<T>, E> + Sync + Send,
{
    let chunk = chunk.max(1);
    let pieces = total.div_ceil(chunk) as usize;
    let parts = map(pieces, |i| {
        let lo = i as u64 * chunk;
        f(lo..(lo + chunk).min(total))
    })?;
    Ok(parts.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let v: Vec<u64> = pool.install(|| chunked(1000, 7, |r| Ok::<_, ()>(r.collect()))).unwrap();
        assert_eq!(v, (0..1000).collect::<Vec<_>>());
    }
}
