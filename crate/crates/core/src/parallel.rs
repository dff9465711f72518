//! Thread-pool sizing for the embarrassingly parallel loops (brute-force
//! enumeration, sweep rows).

/// Environment variable capping internal parallelism.
pub const THREADS_ENV: &str = "DRIFTLAB_THREADS";

/// Thread cap from `DRIFTLAB_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Run `f` on a pool honouring [`THREADS_ENV`]; without it the global rayon
/// pool (one thread per core) is used.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
