//! Work partitioning for exhaustive enumerations.
//!
//! An enumeration over `n` free bits is cut into `2^w` chunks by fixing the
//! top `w` bits. Each chunk fills its own histogram and the histograms are
//! summed, so the result does not depend on how chunks land on workers. With
//! the `parallel` feature chunks run on a rayon pool; without it, or with one
//! thread, they run in order on the calling thread. Without the feature the
//! parallel variants quietly run sequentially.

/// Upper bound on the number of top bits used to form chunks.
pub const CHUNK_BITS: u32 = 10;

/// How an enumeration is scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    /// Single thread, chunks in index order.
    Sequential,
    /// The global rayon pool.
    #[default]
    Parallel,
    /// A dedicated rayon pool with this many workers.
    Threads(usize),
}

impl Execution {
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            None => Execution::Parallel,
            Some(0 | 1) => Execution::Sequential,
            Some(n) => Execution::Threads(n),
        }
    }
}

/// Run `chunk` over every chunk of a `total_bits`-bit space and sum the
/// histograms. `chunk(high, low_bits, hist)` must account for all
/// assignments whose top bits equal `high`.
pub(crate) fn partitioned_histogram<F>(exec: Execution, total_bits: u32, bins: usize, chunk: F) -> Vec<u64>
where
    F: Fn(u64, u32, &mut [u64]) + Sync,
{
    let high_bits = total_bits.min(CHUNK_BITS);
    let low_bits = total_bits - high_bits;
    let chunks = 1u64 << high_bits;

    let run_one = |high: u64| {
        let mut h = vec![0u64; bins];
        chunk(high, low_bits, &mut h);
        h
    };

    match exec {
        Execution::Sequential => sequential(chunks, bins, run_one),
        #[cfg(feature = "parallel")]
        Execution::Parallel => parallel(chunks, bins, &run_one),
        #[cfg(feature = "parallel")]
        Execution::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| parallel(chunks, bins, &run_one)),
            Err(_) => sequential(chunks, bins, run_one),
        },
        #[cfg(not(feature = "parallel"))]
        _ => sequential(chunks, bins, run_one),
    }
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn sequential(chunks: u64, bins: usize, run_one: impl Fn(u64) -> Vec<u64>) -> Vec<u64> {
    (0..chunks).map(run_one).fold(vec![0; bins], merge)
}

#[cfg(feature = "parallel")]
fn parallel(chunks: u64, bins: usize, run_one: &(impl Fn(u64) -> Vec<u64> + Sync)) -> Vec<u64> {
    use rayon::prelude::*;
    (0..chunks)
        .into_par_iter()
        .map(run_one)
        .reduce(|| vec![0; bins], merge)
}
