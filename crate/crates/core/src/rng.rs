//! Deterministic randomness: per-worker substreams and run-unique continuum
//! tokens.
//!
//! Every stochastic routine takes an explicit seed and derives one ChaCha
//! substream per worker, so a run is reproducible given `(seed, workers)` and
//! workers never share mutable state.  Continuum draws are represented by
//! [`Symbol::Token`](crate::pattern::Symbol::Token) values that embed the
//! worker's stream id, which makes tokens distinct across the whole run
//! rather than just within one worker.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::pattern::Symbol;

/// Stream id reserved for single-threaded auxiliary draws (bootstrap
/// resampling), so they never collide with simulation workers.
pub const AUX_STREAM: u64 = u64::MAX;

/// Source of run-unique continuum tokens.
///
/// A token packs `(stream, counter)` into a `u128`; streams are distinct per
/// worker, counters increment per draw, hence no two draws anywhere in a run
/// produce equal tokens.
#[derive(Debug, Clone)]
pub struct TokenGen {
    stream: u64,
    counter: u64,
}

impl TokenGen {
    /// Token source for the given stream id.
    pub fn new(stream: u64) -> Self {
        TokenGen { stream, counter: 0 }
    }

    /// Next unique token symbol.
    pub fn fresh(&mut self) -> Symbol {
        let token = ((self.stream as u128) << 64) | self.counter as u128;
        self.counter += 1;
        Symbol::Token(token)
    }
}

/// One worker's random state: a ChaCha substream plus a token source.
#[derive(Debug, Clone)]
pub struct SourceRng {
    /// The underlying generator; public so samplers can draw directly.
    pub rng: ChaCha8Rng,
    /// Fresh-token source for continuum draws.
    pub tokens: TokenGen,
}

impl SourceRng {
    /// Substream `worker` of the run seeded by `seed`.
    pub fn for_worker(seed: u64, worker: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(worker);
        SourceRng { rng, tokens: TokenGen::new(worker) }
    }
}

/// Split `total` items into per-worker contiguous chunk sizes.
///
/// The split depends only on `(total, workers)`, so merged results are stable
/// for a fixed worker count.
pub fn chunk_sizes(total: usize, workers: usize) -> Vec<usize> {
    let workers = workers.max(1);
    let base = total / workers;
    let extra = total % workers;
    (0..workers).map(|w| base + usize::from(w < extra)).collect()
}

/// Run `job` once per worker on scoped threads and collect results in worker
/// order.
///
/// `job` receives `(worker index, chunk size, worker rng)`.  With one worker
/// this degenerates to a plain call on the current thread, which is the
/// byte-reproducible default.
pub fn run_workers<T, F>(seed: u64, total: usize, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize, &mut SourceRng) -> T + Sync,
{
    let sizes = chunk_sizes(total, workers);
    if sizes.len() == 1 {
        let mut rng = SourceRng::for_worker(seed, 0);
        return vec![job(0, sizes[0], &mut rng)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(w, &size)| {
                let job = &job;
                scope.spawn(move || {
                    let mut rng = SourceRng::for_worker(seed, w as u64);
                    job(w, size, &mut rng)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}
