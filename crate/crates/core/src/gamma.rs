//! Order-preserving variant of the Elias gamma code, and the exponent field
//! built on top of it.
//!
//! For `k ≥ 1` with `N`-bit binary form `b`, the codeword is `N − 1` ones, a
//! zero, then `b` without its leading one. Codewords sort lexicographically in
//! the same order as the integers they encode and form a prefix code.
//!
//! The exponent field stores `e + 2` this way, so the length run is always at
//! least one bit long. For negated fields every bit is flipped, which reverses
//! the order; the leading bit doubles as the exponent-sign bit.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bitstream::{BitCursor, BitString};
use crate::error::DecodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("gamma code is defined for integers >= 1")]
pub struct GammaDomainError;

pub fn modified_gamma_encode(k: &BigUint) -> Result<BitString, GammaDomainError> {
    if k.is_zero() {
        return Err(GammaDomainError);
    }
    let n = k.bits();
    let mut out = BitString::with_capacity(2 * n as usize - 1);
    for _ in 1..n {
        out.push(true);
    }
    out.push(false);
    for i in (0..n - 1).rev() {
        out.push(k.bit(i));
    }
    Ok(out)
}

/// Reads one codeword; the cursor ends just past it.
pub fn modified_gamma_decode(cursor: &mut BitCursor<'_>) -> Result<BigUint, DecodeError> {
    let start = cursor.position();
    read_gamma(cursor, false).map_err(|_| DecodeError::truncated(start))
}

/// Shared body of the plain and negated readers. `flipped` means every bit of
/// the codeword was inverted.
fn read_gamma(cursor: &mut BitCursor<'_>, flipped: bool) -> Result<BigUint, ()> {
    let mut run = 0u64;
    loop {
        match cursor.read_bit() {
            Some(bit) if bit != flipped => run += 1,
            Some(_) => break,
            None => return Err(()),
        }
    }
    if (cursor.remaining() as u64) < run {
        return Err(());
    }
    let mut value = BigUint::one();
    for _ in 0..run {
        let bit = cursor.read_bit().ok_or(())? != flipped;
        value <<= 1u32;
        if bit {
            value |= BigUint::one();
        }
    }
    Ok(value)
}

/// The exponent-sign bit plus exponent bits of an encoded value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentField {
    pub bits: BitString,
    pub exponent: BigUint,
    /// Set when the field was stored negated (leading bit 0).
    pub inverted: bool,
}

pub fn encode_exponent(exponent: &BigUint, invert: bool) -> ExponentField {
    let plain = modified_gamma_encode(&(exponent + 2u32)).expect("offset exponent is >= 2");
    let bits = if invert {
        plain.iter().map(|b| !b).collect()
    } else {
        plain
    };
    ExponentField {
        bits,
        exponent: exponent.clone(),
        inverted: invert,
    }
}

/// Reads an exponent field starting at its leading (sign) bit. Returns the
/// exponent and whether the field was negated.
///
/// A run of `r` identical leading bits means the offset exponent has `r + 1`
/// binary digits and the field spans `2r + 1` bits.
pub fn decode_exponent(cursor: &mut BitCursor<'_>) -> Result<(BigUint, bool), DecodeError> {
    let start = cursor.position();
    let lead = cursor.peek().ok_or(DecodeError::truncated(start))?;
    let inverted = !lead;
    let offset = read_gamma(cursor, inverted).map_err(|_| DecodeError::truncated(start))?;
    Ok((offset - 2u32, inverted))
}

/// Bit length of the exponent field for `exponent`: `2⌊log2(e + 2)⌋ + 1`.
pub fn exponent_field_len(exponent: &BigUint) -> u64 {
    2 * ((exponent + 2u32).bits() - 1) + 1
}
