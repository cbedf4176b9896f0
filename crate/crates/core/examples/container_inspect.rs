//! Dumps the layout of a .plz file: headers, offset tables and the first
//! tokens of each block.
//!
//! cargo run --example container_inspect [FILE.plz]

use chunklz::decoder::chunk_tokens;
use chunklz::format::HEADER_LEN;
use chunklz::{compress, read_file, Params, Token};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = match std::env::args_os().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => {
            let data: Vec<u8> = (0..20_000u32).map(|i| (i / 300 % 7) as u8).collect();
            compress(&data, &Params::default(), 0)?
        }
    };

    for (b, c) in read_file(&file)?.iter().enumerate() {
        let h = &c.header;
        println!(
            "block {b}: S={} W={} I={} C={} original={} chunks={} tail={}",
            h.symbol_width,
            h.window,
            h.interval,
            h.chunk_size,
            h.original_len,
            h.num_chunks,
            h.tail_len
        );
        println!(
            "  header {HEADER_LEN} B, tables {} B, flags {} B, payload {} B, total {} B",
            8 * (h.num_chunks as usize + 1),
            c.flag_stream.len(),
            c.payload_stream.len(),
            c.serialized_len()
        );
        println!("  payload offsets {:?}", c.tables.payload_offsets);
        println!("  flag offsets    {:?}", c.tables.flag_offsets);

        if c.num_chunks() > 0 {
            let tokens = chunk_tokens(c, 0)?;
            let pointers = tokens.iter().filter(|t| t.is_pointer()).count();
            println!(
                "  chunk 0: {} tokens, {pointers} pointers; first tokens:",
                tokens.len()
            );
            for t in tokens.iter().take(8) {
                match t {
                    Token::Literal(v) => println!("    literal {v:#x}"),
                    Token::Pointer { length, offset } => {
                        println!("    pointer length {length} offset {offset}")
                    }
                }
            }
        }
    }
    Ok(())
}
