//! Compresses a file (or a generated quantization-like field) under a few
//! parameter sets and checks every roundtrip.
//!
//! cargo run --release --example compress_roundtrip [FILE]

use std::time::Instant;

use chunklz::corpus::{generate, GeneratorSpec};
use chunklz::{compress, decompress_file, RawParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = match std::env::args_os().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => generate(&GeneratorSpec::quantlike(8 << 20, 1, 0.9, 2))?,
    };
    println!("input: {} bytes", data.len());

    for (s, w, c, i) in [
        (1, 128, 2048, 1),
        (2, 128, 2048, 1),
        (2, 255, 8192, 1),
        (4, 255, 2048, 4),
    ] {
        let params = RawParams {
            symbol_width: s,
            window: w,
            chunk_size: c,
            interval: i,
            ..RawParams::default()
        }
        .validate()?;

        let start = Instant::now();
        let packed = compress(&data, &params, 0)?;
        let packed_secs = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let unpacked = decompress_file(&packed, 0)?;
        let unpacked_secs = start.elapsed().as_secs_f64();
        assert_eq!(unpacked, data, "roundtrip failed");

        println!(
            "S={s} W={w:>3} C={c:>5} I={i}: {:>9} bytes, ratio {:6.3}, compress {:7.1} MB/s, decompress {:7.1} MB/s",
            packed.len(),
            data.len() as f64 / packed.len() as f64,
            data.len() as f64 / packed_secs / 1e6,
            data.len() as f64 / unpacked_secs / 1e6,
        );
    }
    Ok(())
}
