//! Arbitrary-precision decimal values in canonical scientific form.
//!
//! A non-zero finite value is `sign × m × 10^(±e)` with `m ∈ [1, 10)` kept as
//! its decimal digits. Zeros, infinities and NaN are separate variants. The
//! model only stores and orders numbers; it does no arithmetic.
//!
//! Accepted text grammar:
//!
//! ```text
//! value    := special | sign? digits ('.' digits)? (('e' | 'E') sign? digits)?
//! special  := "INF" | "+INF" | "-INF" | "NaN"
//! sign     := '+' | '-'
//! digits   := [0-9]+
//! ```
//!
//! A signed zero such as `-0` or `-0.00` is negative zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExponentSign {
    Negative,
    NonNegative,
}

/// Violations of the [`ScientificForm`] invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("significand has no digits")]
    EmptySignificand,
    #[error("digit {0} is not a decimal digit")]
    NotADigit(u8),
    #[error("leading significand digit is zero")]
    LeadingZero,
    #[error("significand has trailing zero digits")]
    TrailingZero,
    #[error("exponent 0 must be non-negative")]
    NegativeZeroExponent,
}

/// `sign × d0.d1d2… × 10^(exponent_sign · exponent)` with no redundant digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScientificForm {
    sign: Sign,
    exponent_sign: ExponentSign,
    exponent: BigUint,
    digits: Vec<u8>,
}

impl ScientificForm {
    pub fn new(
        sign: Sign,
        exponent_sign: ExponentSign,
        exponent: BigUint,
        digits: Vec<u8>,
    ) -> Result<Self, FormError> {
        let (&first, &last) = match (digits.first(), digits.last()) {
            (Some(first), Some(last)) => (first, last),
            _ => return Err(FormError::EmptySignificand),
        };
        if let Some(&bad) = digits.iter().find(|&&d| d > 9) {
            return Err(FormError::NotADigit(bad));
        }
        if first == 0 {
            return Err(FormError::LeadingZero);
        }
        if digits.len() > 1 && last == 0 {
            return Err(FormError::TrailingZero);
        }
        if exponent.is_zero() && exponent_sign == ExponentSign::Negative {
            return Err(FormError::NegativeZeroExponent);
        }
        Ok(Self {
            sign,
            exponent_sign,
            exponent,
            digits,
        })
    }

    /// Builds a form from a signed power of ten, picking the exponent sign.
    pub fn from_parts(sign: Sign, power: i64, digits: Vec<u8>) -> Result<Self, FormError> {
        let exponent_sign = if power < 0 {
            ExponentSign::Negative
        } else {
            ExponentSign::NonNegative
        };
        Self::new(sign, exponent_sign, BigUint::from(power.unsigned_abs()), digits)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn exponent_sign(&self) -> ExponentSign {
        self.exponent_sign
    }

    pub fn exponent(&self) -> &BigUint {
        &self.exponent
    }

    /// Significand digits; the first is the digit before the decimal point.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The power of ten as a signed integer.
    pub fn signed_exponent(&self) -> BigInt {
        let magnitude = BigInt::from(self.exponent.clone());
        match self.exponent_sign {
            ExponentSign::Negative => -magnitude,
            ExponentSign::NonNegative => magnitude,
        }
    }

    pub fn negated(&self) -> Self {
        let sign = match self.sign {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        };
        Self { sign, ..self.clone() }
    }

    fn magnitude_cmp(&self, other: &Self) -> Ordering {
        use ExponentSign::*;
        let by_exponent = match (self.exponent_sign, other.exponent_sign) {
            (Negative, NonNegative) => Ordering::Less,
            (NonNegative, Negative) => Ordering::Greater,
            (NonNegative, NonNegative) => self.exponent.cmp(&other.exponent),
            (Negative, Negative) => other.exponent.cmp(&self.exponent),
        };
        // Canonical digit strings compare like the numbers they spell.
        by_exponent.then_with(|| self.digits.cmp(&other.digits))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DecimalValue {
    Finite(ScientificForm),
    PositiveZero,
    NegativeZero,
    PositiveInfinity,
    NegativeInfinity,
    NaN,
}

impl DecimalValue {
    pub fn is_nan(&self) -> bool {
        matches!(self, DecimalValue::NaN)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DecimalValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&ScientificForm> {
        match self {
            DecimalValue::Finite(form) => Some(form),
            _ => None,
        }
    }

    /// Position in the coarse ordering; finite values share a band per sign.
    fn band(&self) -> u8 {
        match self {
            DecimalValue::NegativeInfinity => 0,
            DecimalValue::Finite(f) if f.sign == Sign::Negative => 1,
            DecimalValue::NegativeZero | DecimalValue::PositiveZero => 2,
            DecimalValue::Finite(_) => 3,
            DecimalValue::PositiveInfinity => 4,
            DecimalValue::NaN => 5,
        }
    }
}

impl From<i64> for DecimalValue {
    fn from(n: i64) -> Self {
        if n == 0 {
            return DecimalValue::PositiveZero;
        }
        let sign = if n < 0 { Sign::Negative } else { Sign::Positive };
        let mut digits: Vec<u8> = n.unsigned_abs().to_string().bytes().map(|b| b - b'0').collect();
        let power = digits.len() as i64 - 1;
        while digits.last() == Some(&0) {
            digits.pop();
        }
        DecimalValue::Finite(
            ScientificForm::from_parts(sign, power, digits).expect("integer digits are canonical"),
        )
    }
}

/// Numeric comparison. `None` when either side is NaN.
///
/// Both zeros compare equal; infinities bound every finite value.
pub fn compare_numeric(a: &DecimalValue, b: &DecimalValue) -> Option<Ordering> {
    if a.is_nan() || b.is_nan() {
        return None;
    }
    match (a, b) {
        (DecimalValue::Finite(x), DecimalValue::Finite(y)) => Some(match (x.sign, y.sign) {
            (Sign::Negative, Sign::Positive) => Ordering::Less,
            (Sign::Positive, Sign::Negative) => Ordering::Greater,
            (Sign::Positive, Sign::Positive) => x.magnitude_cmp(y),
            (Sign::Negative, Sign::Negative) => y.magnitude_cmp(x),
        }),
        _ => Some(a.band().cmp(&b.band())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedCharacter(char),
    MissingDigits,
    ExponentTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at position {position}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Empty => "empty input".to_owned(),
        ParseErrorKind::UnexpectedCharacter(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::MissingDigits => "expected a digit".to_owned(),
        ParseErrorKind::ExponentTooLarge => "exponent too large".to_owned(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOptions {
    /// Largest accepted `|exponent|` of the normalized value.
    pub max_exponent: BigUint,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            max_exponent: BigUint::from(1u64 << 32),
        }
    }
}

pub fn parse_decimal(text: &str) -> Result<DecimalValue, ParseError> {
    parse_decimal_with(text, &ParseOptions::default())
}

pub fn parse_decimal_with(text: &str, options: &ParseOptions) -> Result<DecimalValue, ParseError> {
    match text {
        "INF" | "+INF" => return Ok(DecimalValue::PositiveInfinity),
        "-INF" => return Ok(DecimalValue::NegativeInfinity),
        "NaN" => return Ok(DecimalValue::NaN),
        "" => {
            return Err(ParseError {
                kind: ParseErrorKind::Empty,
                position: 0,
            })
        }
        _ => {}
    }

    let bytes = text.as_bytes();
    let mut pos = 0;
    let err = |kind, position| ParseError { kind, position };
    let unexpected = |position: usize| {
        let c = text[position..].chars().next().unwrap_or('\0');
        err(ParseErrorKind::UnexpectedCharacter(c), position)
    };

    let sign = match bytes[0] {
        b'-' => {
            pos += 1;
            Sign::Negative
        }
        b'+' => {
            pos += 1;
            Sign::Positive
        }
        _ => Sign::Positive,
    };

    let digit_run = |start: usize| {
        bytes[start..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count()
    };

    let int_len = digit_run(pos);
    if int_len == 0 {
        return Err(if pos < bytes.len() {
            unexpected(pos)
        } else {
            err(ParseErrorKind::MissingDigits, pos)
        });
    }
    let int_digits = &bytes[pos..pos + int_len];
    pos += int_len;

    let mut frac_digits: &[u8] = &[];
    if bytes.get(pos) == Some(&b'.') {
        pos += 1;
        let frac_len = digit_run(pos);
        if frac_len == 0 {
            return Err(if pos < bytes.len() {
                unexpected(pos)
            } else {
                err(ParseErrorKind::MissingDigits, pos)
            });
        }
        frac_digits = &bytes[pos..pos + frac_len];
        pos += frac_len;
    }

    let mut explicit_exponent = BigInt::zero();
    let mut exponent_pos = pos;
    if matches!(bytes.get(pos), Some(b'e' | b'E')) {
        pos += 1;
        exponent_pos = pos;
        let negative = match bytes.get(pos) {
            Some(b'-') => {
                pos += 1;
                true
            }
            Some(b'+') => {
                pos += 1;
                false
            }
            _ => false,
        };
        let exp_len = digit_run(pos);
        if exp_len == 0 {
            return Err(if pos < bytes.len() {
                unexpected(pos)
            } else {
                err(ParseErrorKind::MissingDigits, pos)
            });
        }
        let magnitude = BigUint::parse_bytes(&bytes[pos..pos + exp_len], 10)
            .expect("ascii digits parse");
        explicit_exponent = BigInt::from_biguint(
            if negative { BigSign::Minus } else { BigSign::Plus },
            magnitude,
        );
        pos += exp_len;
    }

    if pos != bytes.len() {
        return Err(unexpected(pos));
    }

    let all: Vec<u8> = int_digits
        .iter()
        .chain(frac_digits)
        .map(|b| b - b'0')
        .collect();
    let Some(first) = all.iter().position(|&d| d != 0) else {
        return Ok(match sign {
            Sign::Negative => DecimalValue::NegativeZero,
            Sign::Positive => DecimalValue::PositiveZero,
        });
    };
    let last = all.iter().rposition(|&d| d != 0).expect("a non-zero digit exists");
    let digits = all[first..=last].to_vec();

    // Power of ten of the first significant digit.
    let power: BigInt = BigInt::from(int_len) - 1 - BigInt::from(first) + explicit_exponent;
    let (power_sign, magnitude) = power.into_parts();
    if magnitude > options.max_exponent {
        return Err(err(ParseErrorKind::ExponentTooLarge, exponent_pos));
    }
    let exponent_sign = if power_sign == BigSign::Minus {
        ExponentSign::Negative
    } else {
        ExponentSign::NonNegative
    };
    let form = ScientificForm::new(sign, exponent_sign, magnitude, digits)
        .expect("normalized digits satisfy the form invariants");
    Ok(DecimalValue::Finite(form))
}

impl FromStr for DecimalValue {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_decimal(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Values with `|power of ten|` above this are written in scientific
    /// notation.
    pub scientific_threshold: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            scientific_threshold: 20,
        }
    }
}

pub fn render_decimal(value: &DecimalValue) -> String {
    render_decimal_with(value, &RenderOptions::default())
}

pub fn render_decimal_with(value: &DecimalValue, options: &RenderOptions) -> String {
    let form = match value {
        DecimalValue::PositiveZero => return "0".to_owned(),
        DecimalValue::NegativeZero => return "-0".to_owned(),
        DecimalValue::PositiveInfinity => return "INF".to_owned(),
        DecimalValue::NegativeInfinity => return "-INF".to_owned(),
        DecimalValue::NaN => return "NaN".to_owned(),
        DecimalValue::Finite(form) => form,
    };

    let mut out = String::new();
    if form.sign == Sign::Negative {
        out.push('-');
    }
    let digit_chars = form.digits.iter().map(|d| char::from(b'0' + d));

    let plain = form
        .exponent
        .to_u64()
        .filter(|&e| e <= options.scientific_threshold);
    match (plain, form.exponent_sign) {
        (Some(e), ExponentSign::NonNegative) => {
            let int_len = e as usize + 1;
            for (i, c) in digit_chars.enumerate() {
                if i == int_len {
                    out.push('.');
                }
                out.push(c);
            }
            for _ in form.digits.len()..int_len {
                out.push('0');
            }
        }
        (Some(e), ExponentSign::Negative) => {
            out.push_str("0.");
            for _ in 1..e {
                out.push('0');
            }
            out.extend(digit_chars);
        }
        (None, exponent_sign) => {
            for (i, c) in digit_chars.enumerate() {
                if i == 1 {
                    out.push('.');
                }
                out.push(c);
            }
            out.push('E');
            out.push(if exponent_sign == ExponentSign::Negative { '-' } else { '+' });
            out.push_str(&form.exponent.to_string());
        }
    }
    out
}

impl fmt::Display for DecimalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_decimal(self))
    }
}
