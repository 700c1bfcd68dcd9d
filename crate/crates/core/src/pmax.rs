//! `P(n) = max_{1 <= a <= n} P(a, n)` via a single ascending pass.
//!
//! `n mod a < a`, so the step count of `a` is one more than the (already
//! known) step count of `n mod a`; entry 0 holds 0 and absorbs the
//! terminating step. The pass walks `a` in blocks of equal quotient
//! `q = floor(n / a)`: inside a block the remainder is `n - q a`, so no
//! division is needed and every read lands in an earlier block.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::trajectory::steps_count;
use crate::MAX_N;

/// Entries per chunk when streaming a [`StepTable`].
pub const CHUNK: usize = 1 << 20;

/// Step counters are 16 bits wide.
pub type Counter = u16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmaxResult {
    pub n: u64,
    pub pmax: u32,
    /// Smallest `a` with `P(a, n) = pmax`.
    pub argmax: u64,
    /// SHA-256 (hex) of the little-endian table `P(1, n), ..., P(n, n)`.
    pub table_digest: Option<String>,
}

fn check_n(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if n > MAX_N {
        return Err(Error::Domain(format!("n = {n} exceeds 2^63 - 1")));
    }
    let bytes = n
        .saturating_add(1)
        .saturating_mul(std::mem::size_of::<Counter>() as u64);
    usize::try_from(n)
        .ok()
        .and_then(|e| e.checked_add(1))
        .ok_or(Error::Allocation {
            entries: n.saturating_add(1),
            bytes,
        })
}

/// Grows `table` to `n + 1` entries, or `n/2 + 2` when `full` is false.
fn allocate(table: &mut Vec<Counter>, n: u64, full: bool) -> Result<usize> {
    let mut entries = check_n(n)?;
    if !full {
        entries = entries / 2 + 2;
    }
    if table.len() < entries {
        let extra = entries - table.len();
        table.try_reserve_exact(extra).map_err(|_| Error::Allocation {
            entries: entries as u64,
            bytes: (entries * std::mem::size_of::<Counter>()) as u64,
        })?;
        table.resize(entries, 0);
    }
    Ok(entries)
}

/// Fills `table[0..=n]` with `P(a, n)` (entry 0 is 0) and returns the
/// maximum with its smallest argmax. Errors once a counter would pass `limit`.
///
/// With `full = false` only `table[0..=n/2]` is written: for `a > n/2`,
/// `P(a, n) = 1 + P(n - a, n)`, so that half follows from a reduction over
/// the first half.
fn fill(table: &mut [Counter], n: u64, limit: Counter, full: bool) -> Result<(Counter, u64)> {
    table[0] = 0;
    let mut best: Counter = 0;
    let mut argmax = 0u64;
    let mut a = 1u64;
    // blocks of equal q = n / a; below sqrt(n) they are single entries
    while a * a <= n {
        if best >= limit {
            return Err(Error::CounterOverflow { n, a });
        }
        let v = table[(n % a) as usize] + 1;
        table[a as usize] = v;
        if v > best {
            best = v;
            argmax = a;
        }
        a += 1;
    }
    while a <= n {
        if best >= limit {
            return Err(Error::CounterOverflow { n, a });
        }
        let q = n / a;
        let last = n / q;
        // remainders run from n - q*a down to n - q*last in steps of q
        let r_first = (n - q * a) as usize;
        let r_last = (n - q * last) as usize;
        if q == 1 && !full {
            let src = &table[r_last..=r_first];
            let m = src.iter().copied().max().unwrap_or(0) + 1;
            if m > best {
                best = m;
                // smallest a is the largest remainder
                let back = src.iter().rposition(|&s| s + 1 == m).unwrap_or(0);
                argmax = n - (r_last + back) as u64;
            }
            break;
        }
        let (done, rest) = table.split_at_mut(a as usize);
        let block = &mut rest[..(last - a) as usize + 1];
        if q == 1 {
            for (dst, &s) in block.iter_mut().zip(done[r_last..=r_first].iter().rev()) {
                *dst = s + 1;
            }
        } else {
            let src = &done[r_last..=r_first];
            let (top, q) = (src.len() - 1, q as usize);
            for (i, dst) in block.iter_mut().enumerate() {
                *dst = src[top - i * q] + 1;
            }
        }
        // a separate pass keeps the gather loop free of the reduction
        let block_max = block.iter().copied().max().unwrap_or(0);
        if block_max > best {
            best = block_max;
            let offset = block.iter().position(|&s| s == block_max).unwrap_or(0);
            argmax = a + offset as u64;
        }
        a = last + 1;
    }
    Ok((best, argmax))
}

fn digest(steps: &[Counter]) -> String {
    let mut hasher = Sha256::new();
    let mut buf = Vec::with_capacity(steps.len().min(CHUNK) * 2);
    for chunk in steps.chunks(CHUNK) {
        buf.clear();
        buf.extend(chunk.iter().flat_map(|s| s.to_le_bytes()));
        hasher.update(&buf);
    }
    format!("{:x}", hasher.finalize())
}

/// Reusable table for repeated `P(n)` evaluations.
///
/// Each worker owns one engine; the buffer grows to the largest `n` seen and
/// is reused, so a scan does not allocate per `n`.
#[derive(Debug, Default)]
pub struct PmaxEngine {
    table: Vec<Counter>,
}

impl PmaxEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn compute(&mut self, n: u64) -> Result<PmaxResult> {
        self.compute_inner(n, false)
    }

    pub fn compute_with_digest(&mut self, n: u64) -> Result<PmaxResult> {
        self.compute_inner(n, true)
    }

    fn compute_inner(&mut self, n: u64, with_digest: bool) -> Result<PmaxResult> {
        let entries = allocate(&mut self.table, n, with_digest)?;
        let table = &mut self.table[..entries];
        let (pmax, argmax) = fill(table, n, Counter::MAX, with_digest)?;
        Ok(PmaxResult {
            n,
            pmax: pmax as u32,
            argmax,
            table_digest: with_digest.then(|| digest(&table[1..])),
        })
    }
}

/// Exact `P(n)` and its smallest argmax.
pub fn pmax_dp(n: u64) -> Result<PmaxResult> {
    PmaxEngine::new().compute(n)
}

/// As [`pmax_dp`], also hashing the full step table.
pub fn pmax_dp_with_digest(n: u64) -> Result<PmaxResult> {
    PmaxEngine::new().compute_with_digest(n)
}

/// `P(n)` by running [`steps_count`] for every `a`. Quadratic-ish; for
/// cross-checking the table.
pub fn pmax_naive(n: u64) -> Result<PmaxResult> {
    check_n(n)?;
    let mut best = 0u64;
    let mut argmax = 0u64;
    for a in 1..=n {
        let s = steps_count(a, n)?;
        if s > best {
            best = s;
            argmax = a;
        }
    }
    Ok(PmaxResult {
        n,
        pmax: u32::try_from(best).map_err(|_| Error::CounterOverflow { n, a: argmax })?,
        argmax,
        table_digest: None,
    })
}

/// The whole table `P(a, n)` for `a` in `[1, n]`.
#[derive(Debug, Clone)]
pub struct StepTable {
    n: u64,
    steps: Vec<Counter>,
    pmax: Counter,
    argmax: u64,
}

impl StepTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `P(a, n)`; `None` outside `[1, n]`.
    pub fn get(&self, a: u64) -> Option<u32> {
        if a == 0 || a > self.n {
            return None;
        }
        Some(self.steps[a as usize] as u32)
    }

    /// Fixed-size chunks of [`CHUNK`] entries, each tagged with its first `a`.
    pub fn chunks(&self) -> impl Iterator<Item = (u64, &[Counter])> + '_ {
        self.steps[1..]
            .chunks(CHUNK)
            .enumerate()
            .map(|(i, c)| (1 + (i * CHUNK) as u64, c))
    }

    pub fn result(&self) -> PmaxResult {
        PmaxResult {
            n: self.n,
            pmax: self.pmax as u32,
            argmax: self.argmax,
            table_digest: Some(digest(&self.steps[1..])),
        }
    }
}

pub fn steps_table(n: u64) -> Result<StepTable> {
    let mut steps = Vec::new();
    allocate(&mut steps, n, true)?;
    let (pmax, argmax) = fill(&mut steps, n, Counter::MAX, true)?;
    Ok(StepTable {
        n,
        steps,
        pmax,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let r = pmax_dp(1).unwrap();
        assert_eq!((r.pmax, r.argmax), (1, 1));
        let r = pmax_dp(35).unwrap();
        assert_eq!((r.pmax, r.argmax), (7, 22));
        let r = pmax_naive(35).unwrap();
        assert_eq!((r.pmax, r.argmax), (7, 22));
        assert_eq!(pmax_naive(2).unwrap().pmax, 1);
        // brute force over a in [1, 36]
        let r = pmax_naive(36).unwrap();
        assert_eq!((r.pmax, r.argmax), (4, 22));
    }

    #[test]
    fn witness_lower_bound_2519() {
        let r = pmax_dp(2519).unwrap();
        assert!(r.pmax >= 10);
        assert_eq!(steps_count(10, 2519).unwrap(), 10);
    }

    #[test]
    fn table_entries() {
        let t = steps_table(35).unwrap();
        assert_eq!(t.get(13), Some(6));
        assert_eq!(t.get(22), Some(7));
        assert_eq!(t.get(35), Some(1));
        assert_eq!(t.get(0), None);
        assert_eq!(t.get(36), None);

        let t = steps_table(4).unwrap();
        let all: Vec<u32> = (1..=4).map(|a| t.get(a).unwrap()).collect();
        assert_eq!(all, vec![1, 1, 2, 1]);
        for n in 1..200 {
            assert_eq!(steps_table(n).unwrap().get(n), Some(1));
        }
    }

    #[test]
    fn chunks_cover_table() {
        let n = (CHUNK as u64) * 2 + 17;
        let t = steps_table(n).unwrap();
        let chunks: Vec<_> = t.chunks().collect();
        assert_eq!(chunks.len(), 3);
        assert_eq!(chunks[1].0, CHUNK as u64 + 1);
        assert_eq!(chunks[2].1.len(), 17);
        let total: usize = chunks.iter().map(|c| c.1.len()).sum();
        assert_eq!(total as u64, n);
        assert_eq!(chunks[2].1[16] as u64, 1);
    }

    #[test]
    fn digest_matches_between_routes() {
        let a = pmax_dp_with_digest(1000).unwrap();
        let b = steps_table(1000).unwrap().result();
        assert_eq!(a, b);
        assert_eq!(a.table_digest.as_ref().unwrap().len(), 64);
        assert_ne!(a.table_digest, pmax_dp_with_digest(1001).unwrap().table_digest);
    }

    #[test]
    fn engine_reuse_is_clean() {
        let mut engine = PmaxEngine::new();
        for n in (1..300).rev() {
            assert_eq!(engine.compute(n).unwrap(), pmax_naive(n).unwrap());
        }
    }

    #[test]
    fn counter_limit_is_a_hard_error() {
        let mut table = vec![0; 36];
        for full in [false, true] {
            assert!(matches!(
                fill(&mut table, 35, 3, full),
                Err(Error::CounterOverflow { n: 35, .. })
            ));
            assert_eq!(fill(&mut table, 35, 7, full).unwrap(), (7, 22));
        }
    }

    #[test]
    fn rejects_zero() {
        assert!(pmax_dp(0).is_err());
        assert!(pmax_naive(0).is_err());
        assert!(steps_table(0).is_err());
    }
}
