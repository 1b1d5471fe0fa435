//! Lossless, order-preserving binary encoding of arbitrary decimals.
//!
//! Every decimal, however large, small or precise, maps to a bit string, and
//! comparing two bit strings left to right (a strict prefix first) gives the
//! same answer as comparing the numbers. Zeros of both signs, the infinities
//! and NaN have encodings too.
//!
//! ```
//! use declex::{codec, decimal::DecimalValue};
//!
//! let a: DecimalValue = "-103.2".parse().unwrap();
//! let b: DecimalValue = "0.707106".parse().unwrap();
//! let (ea, eb) = (codec::encode(&a), codec::encode(&b));
//! assert_eq!(ea.to_string(), "000011110001111001000");
//! assert!(ea < eb);
//! assert_eq!(codec::decode(&ea).unwrap(), a);
//! ```

pub mod bitstream;
pub mod cli;
pub mod codec;
pub mod decimal;
pub mod error;
pub mod gamma;
pub mod selftest;
pub mod variants;

pub use bitstream::{lex_compare, shortlex_compare, BitCursor, BitString};
pub use codec::{decode, encode, CodecOptions, Variant};
pub use decimal::{compare_numeric, parse_decimal, render_decimal, DecimalValue, ScientificForm};
pub use error::{DecodeError, DecodeErrorKind, EncodeError};
