//! Damaged files must be rejected with an error, never a panic or a wrong
//! length.

use chunklz::corpus::{generate, GeneratorSpec};
use chunklz::{compress, decompress_file, read_file, RawParams};
use proptest::prelude::*;

fn sample() -> Vec<u8> {
    let params = RawParams {
        symbol_width: 2,
        window: 64,
        chunk_size: 1024,
        block_bytes: 8192,
        ..RawParams::default()
    }
    .validate()
    .unwrap();
    let data = generate(&GeneratorSpec::runlen(20_001, 11, 16.0, 8)).unwrap();
    compress(&data, &params, 1).unwrap()
}

#[test]
fn every_truncation_is_rejected() {
    let file = sample();
    let full = decompress_file(&file, 1).unwrap();
    let boundaries: Vec<usize> = read_file(&file)
        .unwrap()
        .iter()
        .scan(0, |end, c| {
            *end += c.serialized_len();
            Some(*end)
        })
        .collect();
    for cut in 0..file.len() {
        let result = decompress_file(&file[..cut], 1);
        if boundaries.contains(&cut) {
            // whole containers: a valid, shorter file
            let prefix = result.unwrap();
            assert_eq!(prefix, full[..prefix.len()]);
        } else {
            assert!(result.is_err(), "cut at {cut}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn byte_flips_never_panic(flips in prop::collection::vec((any::<prop::sample::Index>(), 1u8..=255), 1..4)) {
        let mut file = sample();
        let len = file.len();
        for (at, mask) in flips {
            file[at.index(len)] ^= mask;
        }
        if let Ok(out) = decompress_file(&file, 1) {
            // a flip inside literal bytes still decodes, to the right length
            prop_assert_eq!(out.len(), 20_001);
        }
    }
}
