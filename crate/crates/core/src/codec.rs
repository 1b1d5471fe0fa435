//! The canonical encoder and decoder.
//!
//! A non-zero finite value is laid out as four concatenated fields:
//!
//! ```text
//! S (2 bits)   00 negative, 10 positive
//! T E          exponent field, negated when sign and exponent sign differ
//! M            4-bit leading digit, then 10-bit groups of three digits
//! ```
//!
//! Negative values store `10 − m` in place of the significand `m`. Zeros,
//! infinities and NaN use the bare two- or three-bit headers `00` (−INF),
//! `01` (−0), `10` (+0), `11` (+INF) and `111` (NaN).

use num_traits::Zero;

use crate::bitstream::{BitCursor, BitString};
use crate::decimal::{DecimalValue, ExponentSign, ScientificForm, Sign};
use crate::error::{DecodeError, DecodeErrorKind, EncodeError};
use crate::gamma::{decode_exponent, encode_exponent, exponent_field_len};
use crate::variants;

pub const TETRADE_BITS: usize = 4;
pub const DECLET_BITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Canonical,
    /// Continuation bit after the tetrade and after every declet.
    PrefixFree,
    /// Truncated or zero-padded to a fixed number of bits.
    FixedWidth(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodecOptions {
    /// Drop trailing zero bits; the decoder re-pads the last group.
    pub trim_trailing_zero_bits: bool,
    pub variant: Variant,
}

impl CodecOptions {
    pub fn validate(&self) -> Result<(), EncodeError> {
        match self.variant {
            Variant::FixedWidth(width) if width < 8 || width % 8 != 0 => Err(
                EncodeError::InvalidOptions("fixed width must be a multiple of 8 and at least 8"),
            ),
            Variant::PrefixFree | Variant::FixedWidth(_) if self.trim_trailing_zero_bits => Err(
                EncodeError::InvalidOptions("trailing-zero trimming applies to the canonical variant only"),
            ),
            _ => Ok(()),
        }
    }
}

fn header(value: &DecimalValue) -> &'static str {
    match value {
        DecimalValue::NegativeInfinity => "00",
        DecimalValue::NegativeZero => "01",
        DecimalValue::PositiveZero => "10",
        DecimalValue::PositiveInfinity => "11",
        DecimalValue::NaN => "111",
        DecimalValue::Finite(f) => match f.sign() {
            Sign::Negative => "00",
            Sign::Positive => "10",
        },
    }
}

/// Whether the exponent field is stored negated: exactly when the overall
/// sign and the exponent sign disagree.
pub(crate) fn exponent_inverted(form: &ScientificForm) -> bool {
    matches!(
        (form.sign(), form.exponent_sign()),
        (Sign::Negative, ExponentSign::NonNegative) | (Sign::Positive, ExponentSign::Negative)
    )
}

/// The encoding split into its fields: header, exponent field, tetrade and
/// each declet. Special values yield a single header segment.
pub fn encode_segments(value: &DecimalValue) -> Vec<BitString> {
    let head: BitString = header(value).parse().expect("static header");
    let Some(form) = value.as_finite() else {
        return vec![head];
    };
    let mut segments = vec![head, encode_exponent(form.exponent(), exponent_inverted(form)).bits];
    segments.extend(significand_groups(form.digits(), form.sign() == Sign::Negative));
    segments
}

pub fn encode(value: &DecimalValue) -> BitString {
    let segments = encode_segments(value);
    let mut out = BitString::with_capacity(segments.iter().map(BitString::len).sum());
    for segment in &segments {
        out.extend_from(segment);
    }
    out
}

pub fn encode_with(value: &DecimalValue, options: &CodecOptions) -> Result<BitString, EncodeError> {
    options.validate()?;
    match options.variant {
        Variant::Canonical => {
            let mut bits = encode(value);
            if options.trim_trailing_zero_bits && value.is_finite() {
                bits.trim_trailing_zeros();
            }
            Ok(bits)
        }
        Variant::PrefixFree => Ok(variants::encode_prefix_free(value)),
        Variant::FixedWidth(width) => {
            let key = variants::fixed_width_key(value, width)?;
            Ok(BitString::from_bytes(&key.bytes, width as usize).expect("key bytes match width"))
        }
    }
}

/// `10 − m` digit by digit: nines' complement on every digit but the last,
/// tens' complement on the last. The last digit must be non-zero.
pub fn complement_to_ten(digits: &[u8]) -> Vec<u8> {
    let Some((&last, init)) = digits.split_last() else {
        return Vec::new();
    };
    debug_assert!(last != 0, "complement needs a non-zero last digit");
    init.iter().map(|&d| 9 - d).chain([10 - last]).collect()
}

pub(crate) fn significand_groups(digits: &[u8], negative: bool) -> Vec<BitString> {
    let complemented;
    let digits = if negative {
        complemented = complement_to_ten(digits);
        &complemented[..]
    } else {
        digits
    };
    let mut groups = Vec::with_capacity(1 + (digits.len() + 1) / 3);
    let mut tetrade = BitString::with_capacity(TETRADE_BITS);
    tetrade.push_uint(u64::from(digits[0]), TETRADE_BITS);
    groups.push(tetrade);
    for chunk in digits[1..].chunks(3) {
        let value = chunk
            .iter()
            .chain(std::iter::repeat(&0))
            .take(3)
            .fold(0u64, |acc, &d| acc * 10 + u64::from(d));
        let mut declet = BitString::with_capacity(DECLET_BITS);
        declet.push_uint(value, DECLET_BITS);
        groups.push(declet);
    }
    groups
}

/// Tetrade for the leading digit, then one 10-bit group per three following
/// digits (the last group zero-filled). Negative values encode `10 − m`.
pub fn encode_significand(digits: &[u8], negative: bool) -> BitString {
    let mut out = BitString::new();
    for group in significand_groups(digits, negative) {
        out.extend_from(&group);
    }
    out
}

/// Length of the canonical encoding of a non-zero finite value:
/// `2 + (2⌊log2(e+2)⌋ + 1) + 4 + 10⌈(|m| − 1)/3⌉`.
pub fn canonical_len(form: &ScientificForm) -> u64 {
    let declets = (form.digits().len() as u64 - 1).div_ceil(3);
    2 + exponent_field_len(form.exponent()) + TETRADE_BITS as u64 + DECLET_BITS as u64 * declets
}

/// Decodes a complete canonical encoding.
///
/// A final partial declet made only of zero bits is accepted as padding.
pub fn decode(bits: &BitString) -> Result<DecimalValue, DecodeError> {
    decode_value(bits, Padding::ZeroFragmentOnly)
}

/// Decodes an encoding whose trailing zero bits may have been removed.
pub fn decode_trimmed(bits: &BitString) -> Result<DecimalValue, DecodeError> {
    decode_value(bits, Padding::Repad)
}

pub fn decode_with(bits: &BitString, options: &CodecOptions) -> Result<DecimalValue, DecodeError> {
    match options.variant {
        Variant::Canonical if options.trim_trailing_zero_bits => decode_trimmed(bits),
        Variant::Canonical => decode(bits),
        Variant::PrefixFree => variants::decode_prefix_free(bits),
        Variant::FixedWidth(_) => variants::decode_fixed_width(bits),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Padding {
    ZeroFragmentOnly,
    Repad,
}

pub(crate) fn decode_value(bits: &BitString, padding: Padding) -> Result<DecimalValue, DecodeError> {
    let mut cursor = bits.cursor();
    let sign = match read_header(&mut cursor)? {
        Header::Special(value) => return Ok(value),
        Header::Finite(sign) => sign,
    };
    let form = decode_finite_body(&mut cursor, sign, |cursor, negative| match padding {
        Padding::ZeroFragmentOnly => decode_significand(cursor, negative),
        Padding::Repad => {
            let start = cursor.position();
            let mut rest = cursor.rest();
            if rest.is_empty() {
                return Err(DecodeError::truncated(start));
            }
            let groups = rest.len().saturating_sub(TETRADE_BITS).div_ceil(DECLET_BITS);
            rest.pad_to(TETRADE_BITS + DECLET_BITS * groups);
            cursor.seek(bits.len());
            decode_significand(&mut rest.cursor(), negative).map_err(|e| DecodeError::new(e.kind, e.position + start))
        }
    })?;
    Ok(DecimalValue::Finite(form))
}

pub(crate) enum Header {
    Special(DecimalValue),
    Finite(Sign),
}

/// Reads the sign header. Specials must span the whole input.
pub(crate) fn read_header(cursor: &mut BitCursor<'_>) -> Result<Header, DecodeError> {
    let start = cursor.position();
    let lead = cursor.read_uint(2).ok_or(DecodeError::truncated(start))?;
    let ends = cursor.is_at_end();
    let invalid = DecodeError::new(DecodeErrorKind::InvalidHeader, start);
    match (lead, ends) {
        (0b00, true) => Ok(Header::Special(DecimalValue::NegativeInfinity)),
        (0b00, false) => Ok(Header::Finite(Sign::Negative)),
        (0b01, true) => Ok(Header::Special(DecimalValue::NegativeZero)),
        (0b01, false) => Err(invalid),
        (0b10, true) => Ok(Header::Special(DecimalValue::PositiveZero)),
        (0b10, false) => Ok(Header::Finite(Sign::Positive)),
        (0b11, true) => Ok(Header::Special(DecimalValue::PositiveInfinity)),
        _ => {
            if cursor.read_bit() == Some(true) && cursor.is_at_end() {
                Ok(Header::Special(DecimalValue::NaN))
            } else {
                Err(invalid)
            }
        }
    }
}

/// Reads the exponent field and significand of a finite value whose sign
/// header has been consumed.
pub(crate) fn decode_finite_body<F>(
    cursor: &mut BitCursor<'_>,
    sign: Sign,
    read_significand: F,
) -> Result<ScientificForm, DecodeError>
where
    F: FnOnce(&mut BitCursor<'_>, bool) -> Result<Vec<u8>, DecodeError>,
{
    let exponent_start = cursor.position();
    let (exponent, inverted) = decode_exponent(cursor)?;
    let exponent_sign = match (sign, inverted) {
        (Sign::Positive, false) | (Sign::Negative, true) => ExponentSign::NonNegative,
        (Sign::Positive, true) | (Sign::Negative, false) => ExponentSign::Negative,
    };
    if exponent.is_zero() && exponent_sign == ExponentSign::Negative {
        return Err(DecodeError::new(
            DecodeErrorKind::NegativeZeroExponent,
            exponent_start,
        ));
    }
    let digits = read_significand(cursor, sign == Sign::Negative)?;
    Ok(ScientificForm::new(sign, exponent_sign, exponent, digits)
        .expect("validated significand forms a canonical value"))
}

/// Reads a significand running to the end of the input and returns its
/// canonical digits.
pub fn decode_significand(cursor: &mut BitCursor<'_>, negative: bool) -> Result<Vec<u8>, DecodeError> {
    let start = cursor.position();
    let tetrade = cursor.read_uint(TETRADE_BITS).ok_or(DecodeError::truncated(start))?;
    let mut digits = vec![check_group(tetrade, 9, start)? as u8];
    while cursor.remaining() >= DECLET_BITS {
        let at = cursor.position();
        let declet = cursor.read_uint(DECLET_BITS).expect("enough bits remain");
        push_declet(&mut digits, check_group(declet, 999, at)?);
    }
    if !cursor.is_at_end() {
        let at = cursor.position();
        while let Some(bit) = cursor.read_bit() {
            if bit {
                return Err(DecodeError::truncated(at));
            }
        }
    }
    finish_significand(digits, negative, start)
}

pub(crate) fn check_group(value: u64, max: u64, position: usize) -> Result<u16, DecodeError> {
    if value > max {
        return Err(DecodeError::new(DecodeErrorKind::DigitOutOfRange, position));
    }
    Ok(value as u16)
}

pub(crate) fn push_declet(digits: &mut Vec<u8>, declet: u16) {
    digits.extend([declet / 100, declet / 10 % 10, declet % 10].map(|d| d as u8));
}

/// Strips padding zeros, undoes the complement and checks `m ∈ [1, 10)`.
pub(crate) fn finish_significand(mut encoded: Vec<u8>, negative: bool, position: usize) -> Result<Vec<u8>, DecodeError> {
    while encoded.len() > 1 && encoded.last() == Some(&0) {
        encoded.pop();
    }
    let out_of_range = DecodeError::new(DecodeErrorKind::SignificandOutOfRange, position);
    if !negative {
        if encoded[0] == 0 {
            return Err(out_of_range);
        }
        return Ok(encoded);
    }
    // Stored 10 − m must lie in (0, 9].
    let is_zero = encoded == [0];
    let above_nine = encoded[0] == 9 && encoded.len() > 1;
    if is_zero || above_nine {
        return Err(out_of_range);
    }
    Ok(complement_to_ten(&encoded))
}
