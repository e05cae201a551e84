use std::sync::atomic::{AtomicU64, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::Counters;

/// Generator for instance `index` of a seeded run; independent of sharding.
pub(crate) fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) struct ScanOutcome<W> {
    pub counters: Counters,
    pub first: Option<(u64, W)>,
}

struct Chunk<W> {
    counters: Counters,
    result: Result<Option<(u64, W)>>,
}

/// Apply `f` to every index in `0..total` and return the smallest index at
/// which it produced a witness. Counters cover exactly the indices up to
/// that witness, whatever the schedule. `jobs = 0` uses all cores.
pub(crate) fn scan<W, F>(total: u64, jobs: usize, f: F) -> Result<ScanOutcome<W>>
where
    W: Send,
    F: Fn(u64, &mut Counters) -> Result<Option<W>> + Sync,
{
    let chunk = (total / 65_536).max(256);
    let chunks = total.div_ceil(chunk);
    let best = AtomicU64::new(u64::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let results: Vec<Option<Chunk<W>>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * chunk;
                if best.load(Ordering::Relaxed) < start {
                    return None;
                }
                let mut counters = Counters::default();
                let end = (start + chunk).min(total);
                for i in start..end {
                    if best.load(Ordering::Relaxed) < i {
                        // Everything from here on is beyond a known witness.
                        break;
                    }
                    match f(i, &mut counters) {
                        Ok(None) => {}
                        Ok(Some(w)) => {
                            best.fetch_min(i, Ordering::Relaxed);
                            return Some(Chunk {
                                counters,
                                result: Ok(Some((i, w))),
                            });
                        }
                        Err(e) => {
                            best.fetch_min(i, Ordering::Relaxed);
                            return Some(Chunk {
                                counters,
                                result: Err(e),
                            });
                        }
                    }
                }
                Some(Chunk {
                    counters,
                    result: Ok(None),
                })
            })
            .collect()
    });
    let mut counters = Counters {
        instances_total: total,
        ..Counters::default()
    };
    for c in results {
        let Some(c) = c else { break };
        counters += c.counters;
        if let Some(first) = c.result? {
            return Ok(ScanOutcome {
                counters,
                first: Some(first),
            });
        }
    }
    Ok(ScanOutcome { counters, first: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serial_and_parallel_agree() {
        let f = |i: u64, c: &mut Counters| {
            c.instances_tested += 1;
            Ok((i % 7919 == 7918 || i == 100_000).then_some(i * 2))
        };
        let a = scan(200_000, 1, f).unwrap();
        let b = scan(200_000, 8, f).unwrap();
        assert_eq!(a.first, Some((7918, 15836)));
        assert_eq!(a.first, b.first);
        assert_eq!(a.counters, b.counters);
        assert_eq!(a.counters.instances_tested, 7919);
        let none = scan(1000, 4, |_, c: &mut Counters| {
            c.instances_tested += 1;
            Ok(None::<()>)
        })
        .unwrap();
        assert_eq!(none.counters.instances_tested, 1000);
    }
}
