//! Self-delimiting and fixed-width forms of the canonical encoding.
//!
//! The prefix-free form appends a continuation bit after the tetrade and
//! after each declet: `1` when another group follows, `0` after the last one.
//! Zeros and the other specials carry no significand and therefore no
//! continuation bits, so a stream that mixes them with other values can be
//! ambiguous (`11` `111` and `111` `11` are the same bits). The stream
//! decoder resolves this by searching for a complete parse, trying at each
//! position a finite value first, then NaN, then a two-bit special.
//!
//! Fixed-width keys truncate the canonical encoding, or pad it with trailing
//! zero bits, to a whole number of bytes. Equal-width keys then compare
//! bytewise in numeric order, non-strictly when truncation merged neighbours.

use std::collections::HashSet;

use crate::bitstream::{BitCursor, BitString};
use crate::codec::{
    self, check_group, decode_finite_body, finish_significand, push_declet, significand_groups,
    Padding, DECLET_BITS, TETRADE_BITS,
};
use crate::decimal::{DecimalValue, Sign};
use crate::error::{DecodeError, DecodeErrorKind, EncodeError};
use crate::gamma::exponent_field_len;

pub fn encode_prefix_free(value: &DecimalValue) -> BitString {
    let mut segments = codec::encode_segments(value).into_iter();
    let mut out = BitString::new();
    let Some(form) = value.as_finite() else {
        for segment in segments {
            out.extend_from(&segment);
        }
        return out;
    };
    // Header and exponent field are prefix codes already.
    for segment in segments.by_ref().take(2) {
        out.extend_from(&segment);
    }
    let groups = significand_groups(form.digits(), form.sign() == Sign::Negative);
    let last = groups.len() - 1;
    for (i, group) in groups.iter().enumerate() {
        out.extend_from(group);
        out.push(i != last);
    }
    out
}

fn read_prefix_free_significand(cursor: &mut BitCursor<'_>, negative: bool) -> Result<Vec<u8>, DecodeError> {
    let start = cursor.position();
    let tetrade = cursor.read_uint(TETRADE_BITS).ok_or(DecodeError::truncated(start))?;
    let mut digits = vec![check_group(tetrade, 9, start)? as u8];
    let mut more = cursor.read_bit().ok_or(DecodeError::truncated(cursor.position()))?;
    while more {
        let at = cursor.position();
        let declet = cursor.read_uint(DECLET_BITS).ok_or(DecodeError::truncated(at))?;
        push_declet(&mut digits, check_group(declet, 999, at)?);
        more = cursor.read_bit().ok_or(DecodeError::truncated(cursor.position()))?;
        // An encoder never announces a final group of zeros.
        if !more && declet == 0 {
            return Err(DecodeError::new(DecodeErrorKind::SignificandOutOfRange, at));
        }
    }
    finish_significand(digits, negative, start)
}

/// Candidate parses of one value at the cursor, most preferred first, each
/// with the position just past it. The error of the finite attempt, if any,
/// is returned alongside.
fn candidates_at(bits: &BitString, start: usize) -> (Vec<(DecimalValue, usize)>, Option<DecodeError>) {
    let mut cursor = bits.cursor();
    cursor.seek(start);
    let Some(header) = cursor.read_uint(2) else {
        return (Vec::new(), Some(DecodeError::truncated(start)));
    };
    let mut found = Vec::new();
    let mut error = None;
    if header == 0b00 || header == 0b10 {
        let sign = if header == 0b00 { Sign::Negative } else { Sign::Positive };
        let mut body = cursor.clone();
        match decode_finite_body(&mut body, sign, read_prefix_free_significand) {
            Ok(form) => found.push((DecimalValue::Finite(form), body.position())),
            Err(e) => error = Some(e),
        }
    }
    if header == 0b11 && cursor.peek() == Some(true) {
        found.push((DecimalValue::NaN, start + 3));
    }
    let special = match header {
        0b00 => DecimalValue::NegativeInfinity,
        0b01 => DecimalValue::NegativeZero,
        0b10 => DecimalValue::PositiveZero,
        _ => DecimalValue::PositiveInfinity,
    };
    found.push((special, start + 2));
    (found, error)
}

/// Decodes exactly one prefix-free value occupying all of `bits`. Bits left
/// over after a complete value are reported as an invalid header where the
/// next value would start.
pub fn decode_prefix_free(bits: &BitString) -> Result<DecimalValue, DecodeError> {
    let (options, error) = candidates_at(bits, 0);
    if let Some((value, _)) = options.iter().find(|(_, at)| *at == bits.len()) {
        return Ok(value.clone());
    }
    if let Some(e) = error {
        return Err(e);
    }
    let at = options.first().map_or(0, |(_, at)| *at);
    Err(DecodeError::new(DecodeErrorKind::InvalidHeader, at.min(bits.len())))
}

struct Frame {
    options: Vec<(DecimalValue, usize)>,
    next: usize,
}

/// Decodes a concatenation of prefix-free encodings up to the end of input.
pub fn decode_prefix_free_stream(cursor: &mut BitCursor<'_>) -> Result<Vec<DecimalValue>, DecodeError> {
    let bits = cursor.rest();
    let base = cursor.position();
    let end = bits.len();
    if end == 0 {
        return Ok(Vec::new());
    }

    let mut dead: HashSet<usize> = HashSet::new();
    // Error reported if no parse exists: the one furthest into the input.
    let mut worst: Option<DecodeError> = None;
    let note = |e: DecodeError, worst: &mut Option<DecodeError>| {
        if worst.is_none_or(|w| e.position > w.position) {
            *worst = Some(e);
        }
    };

    let (options, error) = candidates_at(&bits, 0);
    if let Some(e) = error {
        note(e, &mut worst);
    }
    let mut stack = vec![Frame { options, next: 0 }];
    let mut starts = vec![0usize];

    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.options.len() {
            dead.insert(starts.pop().expect("one start per frame"));
            stack.pop();
            continue;
        }
        let at = frame.options[frame.next].1;
        frame.next += 1;
        if at == end {
            cursor.seek(base + end);
            return Ok(stack
                .iter()
                .map(|f| f.options[f.next - 1].0.clone())
                .collect());
        }
        if at > end || dead.contains(&at) {
            continue;
        }
        let (options, error) = candidates_at(&bits, at);
        if let Some(e) = error {
            note(e, &mut worst);
        }
        if end - at < 2 {
            note(DecodeError::truncated(at), &mut worst);
        }
        stack.push(Frame { options, next: 0 });
        starts.push(at);
    }

    let e = worst.unwrap_or(DecodeError::truncated(0));
    Err(DecodeError::new(e.kind, e.position + base))
}

pub fn encode_prefix_free_stream<'a, I>(values: I) -> BitString
where
    I: IntoIterator<Item = &'a DecimalValue>,
{
    let mut out = BitString::new();
    for value in values {
        out.extend_from(&encode_prefix_free(value));
    }
    out
}

/// A canonical encoding cut or zero-padded to `width_bits`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedWidthKey {
    pub bytes: Vec<u8>,
    pub width_bits: u32,
}

/// Bits a key needs so that sign, exponent field and leading digit survive.
pub fn fixed_width_minimum(value: &DecimalValue) -> u64 {
    match value.as_finite() {
        Some(form) => 2 + exponent_field_len(form.exponent()) + TETRADE_BITS as u64,
        None => codec::encode(value).len() as u64,
    }
}

/// True when the canonical encoding fits in `width_bits` without truncation.
pub fn fits_fixed_width(value: &DecimalValue, width_bits: u32) -> bool {
    codec::encode(value).len() <= width_bits as usize
}

pub fn fixed_width_key(value: &DecimalValue, width_bits: u32) -> Result<FixedWidthKey, EncodeError> {
    codec::CodecOptions {
        trim_trailing_zero_bits: false,
        variant: codec::Variant::FixedWidth(width_bits),
    }
    .validate()?;
    let needed = fixed_width_minimum(value);
    if needed > u64::from(width_bits) {
        return Err(EncodeError::FixedWidthRange {
            needed,
            width: width_bits,
        });
    }
    let mut bits = codec::encode(value);
    bits.truncate(width_bits as usize);
    bits.pad_to(width_bits as usize);
    Ok(FixedWidthKey {
        bytes: bits.to_bytes().0,
        width_bits,
    })
}

/// Recovers the value a fixed-width key spells. Exact when the key was not
/// truncated; otherwise the value of the retained prefix. A truncated
/// negative key whose kept significand bits are all zero has no such value
/// and reports `SignificandOutOfRange`.
pub fn decode_fixed_width(bits: &BitString) -> Result<DecimalValue, DecodeError> {
    let zero_after = |from: usize| (from..bits.len()).all(|i| bits.get(i) == Some(false));
    let mut cursor = bits.cursor();
    let header = cursor.read_uint(2).ok_or(DecodeError::truncated(0))?;
    if zero_after(2) {
        return Ok(match header {
            0b00 => DecimalValue::NegativeInfinity,
            0b01 => DecimalValue::NegativeZero,
            0b10 => DecimalValue::PositiveZero,
            _ => DecimalValue::PositiveInfinity,
        });
    }
    if header == 0b11 && bits.get(2) == Some(true) && zero_after(3) {
        return Ok(DecimalValue::NaN);
    }
    if header == 0b01 || header == 0b11 {
        return Err(DecodeError::new(DecodeErrorKind::InvalidHeader, 0));
    }
    codec::decode_value(bits, Padding::Repad)
}

pub fn decode_fixed_width_key(key: &FixedWidthKey) -> Result<DecimalValue, DecodeError> {
    let bits = BitString::from_bytes(&key.bytes, key.width_bits as usize)
        .map_err(|_| DecodeError::truncated(0))?;
    decode_fixed_width(&bits)
}
