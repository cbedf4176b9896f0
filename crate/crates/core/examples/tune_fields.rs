//! Runs the symbol-width tuner on a noisy field and on a quantization-like
//! field declared as uint16.
//!
//! cargo run --release --example tune_fields

use chunklz::corpus::{generate, GeneratorSpec};
use chunklz::tuner::{pilot, TunerConfig};
use chunklz::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Params::default();
    let config = TunerConfig::default();

    let noisy = vec![generate(&GeneratorSpec::uniform(4 << 20, 1))?];
    let quant = vec![
        generate(&GeneratorSpec::quantlike(4 << 20, 1, 0.9, 2))?,
        generate(&GeneratorSpec::quantlike(4 << 20, 2, 0.8, 2))?,
    ];

    for (name, fields) in [("uniform", &noisy), ("quantlike", &quant)] {
        let report = pilot(fields, 2, &base, &config)?;
        println!("== {name}");
        print!("{}", report.to_text());
    }
    Ok(())
}
