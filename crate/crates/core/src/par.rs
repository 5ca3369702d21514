//! Scoped worker pool for per-component work.
//!
//! Component transforms are independent, so results are deterministic
//! regardless of how work is split. The thread count comes from the
//! `HODGE_THREADS` environment variable (0 or unset = auto).

use std::sync::atomic::{AtomicUsize, Ordering};

/// Resolve the worker count: `HODGE_THREADS` if set and nonzero, otherwise
/// the available parallelism.
pub fn thread_count() -> usize {
    match std::env::var("HODGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(0) | None => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
        Some(k) => k,
    }
}

/// Apply `f` to every item, in place, possibly on several threads.
/// Item order is preserved; each item is touched exactly once.
pub fn for_each_mut<T: Send>(items: &mut [T], f: impl Fn(&mut T) + Sync) {
    let workers = thread_count().min(items.len());
    if workers <= 1 {
        for item in items.iter_mut() {
            f(item);
        }
        return;
    }
    let next = AtomicUsize::new(0);
    let items_ptr = SendSlice(items.as_mut_ptr());
    let len = items.len();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let next = &next;
            let f = &f;
            let items_ptr = &items_ptr;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= len {
                    break;
                }
                // Each index is claimed by exactly one worker.
                unsafe { f(&mut *items_ptr.0.add(i)) }
            });
        }
    });
}

struct SendSlice<T>(*mut T);
unsafe impl<T: Send> Sync for SendSlice<T> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn touches_every_item_once() {
        let mut v: Vec<usize> = (0..1000).collect();
        for_each_mut(&mut v, |x| *x += 1);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i + 1));
    }
}
