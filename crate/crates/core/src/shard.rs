//! Deterministic fork-join over slices.
//!
//! Work is split into contiguous chunks, one per worker, and the per-chunk
//! results are returned in chunk order.  Because the chunk boundaries depend
//! only on the input length and worker count, and results are merged in
//! order, the combined outcome of a scan is identical for every worker
//! count (a requirement for reproducible verification output).

/// Apply `map` to contiguous chunks of `items` using up to `workers`
/// threads, returning the per-chunk results in input order.  A worker count
/// of zero is treated as one; a single chunk runs on the calling thread.
pub fn map_chunks<T, R, F>(items: &[T], workers: usize, map: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return vec![map(items)];
    }
    let base = items.len() / workers;
    let extra = items.len() % workers;
    let mut bounds = Vec::with_capacity(workers + 1);
    let mut at = 0usize;
    bounds.push(at);
    for k in 0..workers {
        at += base + usize::from(k < extra);
        bounds.push(at);
    }
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for k in 0..workers {
            let chunk = &items[bounds[k]..bounds[k + 1]];
            let map = &map;
            handles.push(scope.spawn(move || map(chunk)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_preserves_order_and_content() {
        let items: Vec<u64> = (0..37).collect();
        for workers in [0usize, 1, 2, 3, 5, 8, 64] {
            let chunks = map_chunks(&items, workers, |c| c.to_vec());
            let flat: Vec<u64> = chunks.into_iter().flatten().collect();
            assert_eq!(flat, items, "workers={workers}");
        }
    }

    #[test]
    fn empty_input_yields_single_empty_chunk() {
        let items: Vec<u64> = Vec::new();
        let chunks = map_chunks(&items, 4, |c| c.len());
        assert_eq!(chunks, vec![0]);
    }

    #[test]
    fn sums_match_sequential_evaluation() {
        let items: Vec<i64> = (-50..120).collect();
        let seq: i64 = items.iter().sum();
        for workers in [1usize, 2, 4, 7] {
            let total: i64 = map_chunks(&items, workers, |c| c.iter().sum::<i64>())
                .into_iter()
                .sum();
            assert_eq!(total, seq);
        }
    }
}
