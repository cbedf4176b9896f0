//! Ratio and throughput over the window and chunk grid on a run-length
//! corpus, plus how much ratio is lost to chunk boundaries.
//!
//! cargo run --release --example bench_grid

use std::time::Instant;

use chunklz::corpus::{generate, GeneratorSpec};
use chunklz::{compress, RawParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = generate(&GeneratorSpec::runlen(16 << 20, 42, 64.0, 4))?;
    let chunks = [2048, 4096, 8192, 16384];

    println!("S  W    C      ratio   MB/s   boundary loss");
    for s in [1, 2] {
        for w in [32, 128, 255] {
            let mut sizes = Vec::new();
            let mut rows = Vec::new();
            for c in chunks {
                let params = RawParams {
                    symbol_width: s,
                    window: w,
                    chunk_size: c,
                    ..RawParams::default()
                }
                .validate()?;
                let start = Instant::now();
                let out = compress(&data, &params, 0)?.len();
                let secs = start.elapsed().as_secs_f64();
                sizes.push(out);
                rows.push((
                    c,
                    data.len() as f64 / out as f64,
                    data.len() as f64 / secs / 1e6,
                ));
            }
            // extra output relative to the largest chunk size
            let best = *sizes.last().unwrap() as f64;
            for ((c, ratio, mbps), size) in rows.into_iter().zip(sizes) {
                println!(
                    "{s}  {w:<4} {c:<6} {ratio:6.3}  {mbps:6.1}  {:5.2}%",
                    100.0 * (size as f64 / best - 1.0)
                );
            }
        }
    }
    Ok(())
}
