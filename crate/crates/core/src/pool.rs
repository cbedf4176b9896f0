//! Worker pool sizing.

/// Runs `f` on a dedicated pool of `threads` workers; 0 means one worker
/// per available core.
pub fn install<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        // spawning failed (e.g. thread limits); fall back to the global pool
        Err(_) => f(),
    }
}

/// Worker count that `threads = 0` resolves to.
pub fn hardware_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
