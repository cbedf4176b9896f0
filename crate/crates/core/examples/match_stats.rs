//! Match-length histograms of a run-structured corpus, counting emitted
//! pointers and raw per-position matches.
//!
//! cargo run --release --example match_stats

use chunklz::corpus::{generate, match_length_histogram, GeneratorSpec, HistogramMode};
use chunklz::RawParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = generate(&GeneratorSpec::runlen(4 << 20, 7, 512.0, 4))?;
    for s in [1, 2] {
        let params = RawParams {
            symbol_width: s,
            window: 255,
            ..RawParams::default()
        }
        .validate()?;
        for mode in [HistogramMode::Selected, HistogramMode::Raw] {
            let h = match_length_histogram(&data, &params, mode);
            println!(
                "S={s} {mode:?}: {} matches, {:.1}% longer than 128 bytes, {:.1}% longer than 256 bytes",
                h.total(),
                100.0 * h.fraction_bytes_over(128),
                100.0 * h.fraction_bytes_over(256),
            );
        }
    }

    let params = RawParams::default().validate()?;
    let csv = match_length_histogram(&data, &params, HistogramMode::Selected).to_csv();
    println!("\nS=2 W=128 histogram (first rows):");
    for line in csv.lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
