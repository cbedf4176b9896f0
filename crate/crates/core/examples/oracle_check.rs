//! Compares the pipeline's tokens with the sequential reference and the
//! optimal parse on a small input.
//!
//! cargo run --example oracle_check [TEXT]

use chunklz::decoder::chunk_tokens;
use chunklz::oracle::{optimal_parse, sequential_lzss, OPTIMAL_PARSE_LIMIT};
use chunklz::{compress, read_file, RawParams, Token};

fn show(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| match t {
            Token::Literal(v) => match char::from_u32(*v) {
                Some(c) if c.is_ascii_graphic() => format!("'{c}'"),
                _ => format!("{v:#x}"),
            },
            Token::Pointer { length, offset } => format!("P({length},{offset})"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "aaaaaaaaaaaaaaaa".into());
    let data = text.as_bytes();
    let params = RawParams {
        symbol_width: 1,
        window: 255,
        ..RawParams::default()
    }
    .validate()?;

    let file = compress(data, &params, 1)?;
    let containers = read_file(&file)?;
    let pipeline = chunk_tokens(&containers[0], 0)?;
    let reference = sequential_lzss(data, &params)?;

    println!("pipeline  {}", show(&pipeline));
    println!("reference {}", show(&reference.tokens));
    println!("identical: {}", pipeline == reference.tokens);
    println!("greedy payload: {} bytes", reference.payload_size(1));
    if data.len() <= OPTIMAL_PARSE_LIMIT {
        println!("optimal payload: {} bytes", optimal_parse(data, &params)?);
    }
    Ok(())
}
