//! Longest-match search over fixed-width symbols.
//!
//! For a coding position `p` the candidates are window starts
//! `w ∈ [max(0, p - W), p)`. A candidate's length is the number of leading
//! symbols where `chunk[w + k] == chunk[p + k]`, capped at the offset
//! `p - w` (a match never overlaps its own destination), at 255 and at the
//! end of the chunk. The longest candidate wins; on ties the one furthest
//! back (largest offset) wins.
//!
//! [`match_chunk`] produces the whole table at once. It walks the chunk
//! backwards keeping, for every offset `d`, the length of the run of equal
//! symbols `chunk[q - d] == chunk[q]` starting at the current position, so
//! each position costs exactly `min(p, W)` symbol comparisons regardless
//! of how long the matches are.

use crate::params::Params;

/// A fixed-width matching unit. Only equality matters to the matcher;
/// values are read little-endian so literals round-trip byte-exactly.
pub trait Symbol: Copy + Eq + Default + Send + Sync + 'static {
    const WIDTH: usize;

    fn read_le(bytes: &[u8]) -> Self;
}

impl Symbol for u8 {
    const WIDTH: usize = 1;

    fn read_le(bytes: &[u8]) -> Self {
        bytes[0]
    }
}

impl Symbol for u16 {
    const WIDTH: usize = 2;

    fn read_le(bytes: &[u8]) -> Self {
        u16::from_le_bytes([bytes[0], bytes[1]])
    }
}

impl Symbol for u32 {
    const WIDTH: usize = 4;

    fn read_le(bytes: &[u8]) -> Self {
        u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]])
    }
}

/// Splits whole symbols out of `bytes`. Trailing bytes that do not fill a
/// symbol are ignored.
pub fn symbols_from_bytes<T: Symbol>(bytes: &[u8]) -> Vec<T> {
    bytes.chunks_exact(T::WIDTH).map(T::read_le).collect()
}

/// Result of a match search at one position, in symbol units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MatchRecord {
    pub length: u8,
    pub offset: u8,
}

impl MatchRecord {
    pub const NONE: MatchRecord = MatchRecord {
        length: 0,
        offset: 0,
    };

    /// Marker for positions skipped by interval matching.
    pub const FORCED_LITERAL: MatchRecord = MatchRecord {
        length: 1,
        offset: 0,
    };

    /// True when the record names a real earlier occurrence.
    pub fn is_match(&self) -> bool {
        self.offset != 0 && self.length != 0
    }

    /// True when the encoder should emit a pointer for this record.
    pub fn encodes_as_pointer(&self, min_match: usize) -> bool {
        self.is_match() && self.length as usize >= min_match
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchTable {
    pub records: Vec<MatchRecord>,
}

impl MatchTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Receives the number of symbol comparisons spent on each position.
pub trait Probe {
    fn position(&mut self, _p: usize, _comparisons: usize) {}

    /// Folds in the counts gathered by another worker.
    fn absorb(&mut self, _other: Self)
    where
        Self: Sized,
    {
    }
}

impl Probe for () {}

/// Tracks the worst per-position comparison count.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonStats {
    pub positions: u64,
    pub comparisons: u64,
    pub max_per_position: usize,
}

impl Probe for ComparisonStats {
    fn position(&mut self, _p: usize, comparisons: usize) {
        self.positions += 1;
        self.comparisons += comparisons as u64;
        self.max_per_position = self.max_per_position.max(comparisons);
    }

    fn absorb(&mut self, other: Self) {
        self.positions += other.positions;
        self.comparisons += other.comparisons;
        self.max_per_position = self.max_per_position.max(other.max_per_position);
    }
}

/// Longest match at `p` by direct candidate scan.
pub fn find_match<T: Symbol>(chunk: &[T], p: usize, params: &Params) -> MatchRecord {
    let n = chunk.len();
    assert!(p < n, "position {p} outside chunk of {n} symbols");
    let lo = p.saturating_sub(params.window());
    let ahead = (n - p).min(255);

    let mut best_len = 0;
    let mut best_start = p;
    for w in lo..p {
        let cap = (p - w).min(ahead);
        let len = chunk[w..w + cap]
            .iter()
            .zip(&chunk[p..p + cap])
            .take_while(|(a, b)| a == b)
            .count();
        if len > best_len {
            best_len = len;
            best_start = w;
            if len == ahead {
                break;
            }
        }
    }

    if best_len == 0 {
        MatchRecord::NONE
    } else {
        MatchRecord {
            length: best_len as u8,
            offset: (p - best_start) as u8,
        }
    }
}

/// Match table for one chunk. Positions off the interval grid are forced
/// literals.
pub fn match_chunk<T: Symbol>(chunk: &[T], params: &Params) -> MatchTable {
    match_chunk_probed(chunk, params, &mut ())
}

pub fn match_chunk_probed<T: Symbol, P: Probe>(
    chunk: &[T],
    params: &Params,
    probe: &mut P,
) -> MatchTable {
    let n = chunk.len();
    let window = params.window();
    let interval = params.interval();

    let mut records = vec![MatchRecord::FORCED_LITERAL; n];
    // runs[j] is the equal-run length for offset d = window - j, saturating
    // at 255 since no match can be longer.
    let mut runs = vec![0u8; window];
    let dists: Vec<u8> = (0..window).map(|j| (window - j) as u8).collect();

    for p in (0..n).rev() {
        let lo = p.saturating_sub(window);
        let span = p - lo;
        let current = chunk[p];
        let runs_tail = &mut runs[window - span..];
        for (run, &prev) in runs_tail.iter_mut().zip(&chunk[lo..p]) {
            *run = if prev == current {
                run.saturating_add(1)
            } else {
                0
            };
        }
        probe.position(p, span);

        if p % interval != 0 {
            continue;
        }
        let dists_tail = &dists[window - span..];
        let length = runs_tail
            .iter()
            .zip(dists_tail)
            .map(|(&run, &d)| run.min(d))
            .max()
            .unwrap_or(0);
        records[p] = if length == 0 {
            MatchRecord::NONE
        } else {
            // offsets descend along the tail, so the first hit is the largest
            let j = runs_tail
                .iter()
                .zip(dists_tail)
                .position(|(&run, &d)| run.min(d) == length)
                .expect("maximum is attained");
            MatchRecord {
                length,
                offset: dists_tail[j],
            }
        };
    }

    MatchTable { records }
}
