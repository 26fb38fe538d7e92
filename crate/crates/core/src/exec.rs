//! Sequential and data-parallel execution over fixed work decompositions.
//!
//! Work is always cut into the same pieces regardless of mode or thread
//! count, and partial results are reduced in piece order. Both modes
//! therefore return identical values, witnesses and node counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExecMode {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled and runs
    /// sequentially otherwise.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Points per chunk in box scans.
pub const CHUNK: u64 = 4096;

/// Applies `f` to every item, preserving order in the output.
pub fn map_ordered<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.into_par_iter().map(f).collect(),
        _ => items.into_iter().map(f).collect(),
    }
}

/// Mixed-radix digits of `index` for the box `[0, bounds]`, the last
/// coordinate varying fastest (lexicographic order).
pub fn decode(index: u64, bounds: &[i64], out: &mut [i64]) {
    let mut rest = index;
    for (v, &b) in bounds.iter().enumerate().rev() {
        let radix = b as u64 + 1;
        out[v] = (rest % radix) as i64;
        rest /= radix;
    }
}

/// Advances `point` to its lexicographic successor. Returns the lowest
/// coordinate index that changed, or `None` after the last point.
pub fn advance(point: &mut [i64], bounds: &[i64]) -> Option<usize> {
    for v in (0..point.len()).rev() {
        if point[v] < bounds[v] {
            point[v] += 1;
            return Some(v);
        }
        point[v] = 0;
    }
    None
}

/// Runs `f(start, end)` on consecutive index ranges covering `0..total`.
pub fn for_chunks<R, F>(total: u64, mode: ExecMode, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync + Send,
{
    let chunks = total.div_ceil(CHUNK);
    let ranges: Vec<(u64, u64)> = (0..chunks).map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total))).collect();
    map_ordered(mode, ranges, |(s, e)| f(s, e))
}

/// Minimum of a scalar objective over a box scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanMin {
    /// `(value, point)` with the smallest value, earliest point on ties;
    /// `None` when no point was evaluated.
    pub best: Option<(i64, Vec<i64>)>,
    pub explored: u64,
}

/// Exhaustive minimum of `eval` over the integral box `[0, bounds]`,
/// optionally excluding the origin. Errors surface from the earliest
/// failing point.
pub fn scan_min<E, F>(bounds: &[i64], mode: ExecMode, skip_origin: bool, eval: F) -> Result<ScanMin, E>
where
    E: Send,
    F: Fn(&[i64]) -> Result<i64, E> + Sync + Send,
{
    let total = bounds.iter().fold(1u64, |acc, &b| acc.saturating_mul(b as u64 + 1));
    let parts = for_chunks(total, mode, |start, end| -> Result<ScanMin, E> {
        let mut point = vec![0i64; bounds.len()];
        decode(start, bounds, &mut point);
        let mut best: Option<(i64, Vec<i64>)> = None;
        let mut explored = 0u64;
        for index in start..end {
            if !(skip_origin && index == 0) {
                let value = eval(&point)?;
                explored += 1;
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, point.clone()));
                }
            }
            advance(&mut point, bounds);
        }
        Ok(ScanMin { best, explored })
    });
    let mut out = ScanMin { best: None, explored: 0 };
    for part in parts {
        let part = part?;
        out.explored += part.explored;
        if let Some((v, p)) = part.best {
            if out.best.as_ref().is_none_or(|(b, _)| v < *b) {
                out.best = Some((v, p));
            }
        }
    }
    Ok(out)
}
