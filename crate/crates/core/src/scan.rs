//! Prefix sums used to place tokens and chunks.
//!
//! The per-chunk scan is the work-efficient two-sweep (Blelloch) exclusive
//! scan: an up-sweep builds partial sums in a balanced tree, the root holds
//! the chunk total which is saved and replaced by zero, and a down-sweep
//! pushes prefixes back to the leaves. The global scan runs once all chunk
//! totals are known and may use any exact method.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("two-sweep scan needs a power-of-two length, got {0}")]
    NotPowerOfTwo(usize),
    #[error("offset {total} exceeds the 4-byte offset range of a block")]
    BlockTooLarge { total: u64 },
}

/// Observer for the individual sweep levels of the two-sweep scan.
pub trait SweepObserver {
    fn up_level(&mut self, _stride: usize, _values: &[u64]) {}
    fn root_saved(&mut self, _total: u64) {}
    fn down_level(&mut self, _stride: usize, _values: &[u64]) {}
}

impl SweepObserver for () {}

/// Records every sweep level; used by tests to confirm the scan really runs
/// as an up-sweep followed by a down-sweep.
#[derive(Debug, Default, Clone)]
pub struct SweepTrace {
    pub up_strides: Vec<usize>,
    pub down_strides: Vec<usize>,
    pub root: Option<u64>,
}

impl SweepObserver for SweepTrace {
    fn up_level(&mut self, stride: usize, _values: &[u64]) {
        self.up_strides.push(stride);
    }

    fn root_saved(&mut self, total: u64) {
        self.root = Some(total);
    }

    fn down_level(&mut self, stride: usize, _values: &[u64]) {
        self.down_strides.push(stride);
    }
}

/// In-place two-sweep exclusive scan. Returns the total saved from the
/// up-sweep root.
pub fn local_exclusive_scan_in_place(values: &mut [u64]) -> Result<u64, ScanError> {
    local_exclusive_scan_observed(values, &mut ())
}

pub fn local_exclusive_scan_observed<O: SweepObserver>(
    values: &mut [u64],
    observer: &mut O,
) -> Result<u64, ScanError> {
    let n = values.len();
    if !n.is_power_of_two() {
        return Err(ScanError::NotPowerOfTwo(n));
    }

    // up-sweep: at stride d, a[i + 2d - 1] += a[i + d - 1]
    let mut stride = 1;
    while stride < n {
        let step = stride * 2;
        for right in (step - 1..n).step_by(step) {
            values[right] += values[right - stride];
        }
        observer.up_level(stride, values);
        stride = step;
    }

    let total = values[n - 1];
    observer.root_saved(total);
    values[n - 1] = 0;

    // down-sweep: swap left into right, right += old left
    let mut stride = n / 2;
    while stride >= 1 {
        let step = stride * 2;
        for right in (step - 1..n).step_by(step) {
            let left = values[right - stride];
            values[right - stride] = values[right];
            values[right] += left;
        }
        observer.down_level(stride, values);
        stride /= 2;
    }

    Ok(total)
}

/// Two-sweep exclusive scan returning `(offsets, total)`.
pub fn local_exclusive_scan(sizes: &[u64]) -> Result<(Vec<u64>, u64), ScanError> {
    let mut offsets = sizes.to_vec();
    let total = local_exclusive_scan_in_place(&mut offsets)?;
    Ok((offsets, total))
}

/// Per-chunk compressed sizes handed from the chunk stage to the global
/// stage: one integer per chunk per stream, never per-symbol data.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChunkTotals {
    pub payload_sizes: Vec<u64>,
    pub flag_sizes: Vec<u64>,
}

/// Exclusive scan of chunk sizes with a trailing total: `num_chunks + 1`
/// entries, each range-checked into the 4-byte offset domain.
pub fn global_exclusive_scan(chunk_sizes: &[u64]) -> Result<Vec<u32>, ScanError> {
    let mut offsets = Vec::with_capacity(chunk_sizes.len() + 1);
    let mut acc: u64 = 0;
    offsets.push(0);
    for &size in chunk_sizes {
        acc += size;
        let entry = u32::try_from(acc).map_err(|_| ScanError::BlockTooLarge { total: acc })?;
        offsets.push(entry);
    }
    Ok(offsets)
}

/// Offset tables for both streams of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOffsets {
    pub payload: Vec<u32>,
    pub flags: Vec<u32>,
}

impl ChunkTotals {
    pub fn scan(&self) -> Result<BlockOffsets, ScanError> {
        Ok(BlockOffsets {
            payload: global_exclusive_scan(&self.payload_sizes)?,
            flags: global_exclusive_scan(&self.flag_sizes)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sequential(sizes: &[u64]) -> Vec<u64> {
        let mut acc = 0;
        sizes
            .iter()
            .map(|&s| {
                let out = acc;
                acc += s;
                out
            })
            .collect()
    }

    #[test]
    fn worked_example() {
        let (offsets, total) = local_exclusive_scan(&[3, 1, 7, 0, 4, 1, 6, 3]).unwrap();
        assert_eq!(offsets, vec![0, 3, 4, 11, 11, 15, 16, 22]);
        assert_eq!(total, 25);
    }

    #[test]
    fn zeros_and_single_nonzero() {
        assert_eq!(local_exclusive_scan(&[0; 8]).unwrap(), (vec![0; 8], 0));
        assert_eq!(
            local_exclusive_scan(&[5, 0, 0, 0, 0, 0, 0, 0]).unwrap(),
            (vec![0, 5, 5, 5, 5, 5, 5, 5], 5)
        );
    }

    #[test]
    fn length_one() {
        assert_eq!(local_exclusive_scan(&[7]).unwrap(), (vec![0], 7));
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert_eq!(
            local_exclusive_scan(&[1, 2, 3]),
            Err(ScanError::NotPowerOfTwo(3))
        );
        assert_eq!(local_exclusive_scan(&[]), Err(ScanError::NotPowerOfTwo(0)));
    }

    #[test]
    fn sweeps_visit_every_level() {
        let mut values = vec![1u64; 16];
        let mut trace = SweepTrace::default();
        let total = local_exclusive_scan_observed(&mut values, &mut trace).unwrap();
        assert_eq!(trace.up_strides, vec![1, 2, 4, 8]);
        assert_eq!(trace.down_strides, vec![8, 4, 2, 1]);
        assert_eq!(trace.root, Some(total));
        assert_eq!(total, 16);
    }

    #[test]
    fn global_examples() {
        assert_eq!(
            global_exclusive_scan(&[9, 4, 12]).unwrap(),
            vec![0, 9, 13, 25]
        );
        assert_eq!(global_exclusive_scan(&[]).unwrap(), vec![0]);
        assert_eq!(global_exclusive_scan(&[0, 0]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn global_overflow() {
        let err = global_exclusive_scan(&[u32::MAX as u64, 1]).unwrap_err();
        assert_eq!(err, ScanError::BlockTooLarge { total: 1 << 32 });
    }

    proptest! {
        #[test]
        fn two_sweep_matches_sequential(log in 0u32..=10, seed in prop::collection::vec(0u64..70_000, 1024)) {
            let n = 1usize << log;
            let sizes = &seed[..n];
            let (offsets, total) = local_exclusive_scan(sizes).unwrap();
            prop_assert_eq!(&offsets, &sequential(sizes));
            prop_assert_eq!(total, offsets[n - 1] + sizes[n - 1]);
        }
    }
}
