//! Deterministic worker pool: results are merged in index order, so the
//! output never depends on the number of workers or their scheduling.

use std::thread;

/// Worker cap: `BDS_LAB_THREADS` when set (minimum 1), otherwise the
/// machine's available parallelism.
pub fn worker_count() -> usize {
    match std::env::var("BDS_LAB_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&w| w >= 1).unwrap_or(1),
        Err(_) => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Applies `f` to `0..items`, fanning out over at most [`worker_count`]
/// threads; the returned vector is ordered by index regardless of
/// scheduling.
pub fn parallel_map<T, F>(items: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = worker_count().min(items.max(1) as usize).max(1);
    if workers == 1 || items <= 1 {
        return (0..items).map(f).collect();
    }
    let mut buckets: Vec<Vec<(u64, T)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut i = w as u64;
                    while i < items {
                        local.push((i, f(i)));
                        i += workers as u64;
                    }
                    local
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut slots: Vec<Option<T>> = (0..items).map(|_| None).collect();
    for bucket in buckets.drain(..) {
        for (i, value) in bucket {
            slots[i as usize] = Some(value);
        }
    }
    slots.into_iter().map(|s| s.expect("every index filled")).collect()
}
