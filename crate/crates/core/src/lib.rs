//! Chunk-parallel, multi-byte LZSS.
//!
//! Input is split into blocks and fixed-size chunks of `S`-byte symbols.
//! Each chunk is matched against a sliding window of at most 255 symbols,
//! greedily resolved into literal and pointer tokens, and placed with a
//! two-sweep prefix sum; a second, block-wide prefix sum places the chunks,
//! and a final pass compacts everything into one flag stream and one payload
//! stream per block. Chunks never reference each other, so both compression
//! and decompression run chunk-parallel and the output does not depend on
//! the number of worker threads.
//!
//! ```
//! use chunklz::{compress, decompress_file, Params};
//!
//! let data = b"abcabcabcabcabcabc-----------------".repeat(10);
//! let packed = compress(&data, &Params::default(), 0).unwrap();
//! assert!(packed.len() < data.len());
//! assert_eq!(decompress_file(&packed, 0).unwrap(), data);
//! ```

pub mod cli;
pub mod corpus;
pub mod decoder;
pub mod deflate;
pub mod encoder;
pub mod format;
pub mod matcher;
pub mod oracle;
pub mod params;
pub mod partition;
pub mod pipeline;
pub mod pool;
pub mod scan;
pub mod tuner;

pub use decoder::{decompress, decompress_file, DecodeError, DecompressError};
pub use encoder::Token;
pub use format::{read_container, read_file, write_container, Container};
pub use params::{level_to_window, Params, RawParams};
pub use pipeline::{compress, compress_containers, CompressError};
