//! Traces the two-sweep exclusive scan on token sizes and the block-level
//! scan that places chunks.
//!
//! cargo run --example scan_trace

use chunklz::scan::{global_exclusive_scan, local_exclusive_scan_observed, SweepObserver};

struct Printer;

impl SweepObserver for Printer {
    fn up_level(&mut self, stride: usize, values: &[u64]) {
        println!("  up   stride {stride}: {values:?}");
    }

    fn root_saved(&mut self, total: u64) {
        println!("  root total {total}, cleared");
    }

    fn down_level(&mut self, stride: usize, values: &[u64]) {
        println!("  down stride {stride}: {values:?}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sizes = [3u64, 1, 7, 0, 4, 1, 6, 3];
    println!("token sizes {sizes:?}");
    let total = local_exclusive_scan_observed(&mut sizes, &mut Printer)?;
    println!("offsets {sizes:?}, total {total}");

    let chunk_payloads = [1400u64, 960, 2048, 17, 0, 733];
    println!("\nchunk payload sizes {chunk_payloads:?}");
    println!("table {:?}", global_exclusive_scan(&chunk_payloads)?);
    Ok(())
}
