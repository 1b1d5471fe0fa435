//! Seeded property checks of the codec against the numeric comparison.
//!
//! Each case draws its values from an RNG seeded by `(seed, case index)`, so a
//! run gives the same report however the cases are scheduled across threads.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitstream::{lex_compare, BitString};
use crate::codec::{self, canonical_len, complement_to_ten};
use crate::decimal::{compare_numeric, DecimalValue, ExponentSign, ScientificForm, Sign};
use crate::error::DecodeError;

/// Random decimal values with bounded exponent and significand length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueGenerator {
    pub max_digits: usize,
    pub max_exponent: u64,
    /// Probability of drawing a zero, infinity or NaN from [`Self::any`].
    pub special_rate: f64,
}

impl Default for ValueGenerator {
    fn default() -> Self {
        Self {
            max_digits: 60,
            max_exponent: 1_000_000,
            special_rate: 0.05,
        }
    }
}

impl ValueGenerator {
    fn exponent<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.max_exponent == 0 {
            return 0;
        }
        if rng.gen_bool(0.5) {
            rng.gen_range(0..=self.max_exponent.min(12))
        } else {
            // Log-uniform so every order of magnitude shows up.
            let top = (self.max_exponent as f64 + 1.0).ln();
            ((rng.gen_range(0.0..top)).exp() as u64).min(self.max_exponent)
        }
    }

    fn digits<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        let len = rng.gen_range(1..=self.max_digits.max(1));
        let mut digits = Vec::with_capacity(len);
        digits.push(rng.gen_range(1..=9));
        for _ in 1..len.saturating_sub(1) {
            digits.push(rng.gen_range(0..=9));
        }
        if len > 1 {
            digits.push(rng.gen_range(1..=9));
        }
        digits
    }

    pub fn finite<R: Rng + ?Sized>(&self, rng: &mut R) -> DecimalValue {
        let sign = if rng.gen_bool(0.5) { Sign::Negative } else { Sign::Positive };
        let exponent = self.exponent(rng);
        let exponent_sign = if exponent > 0 && rng.gen_bool(0.5) {
            ExponentSign::Negative
        } else {
            ExponentSign::NonNegative
        };
        let form = ScientificForm::new(sign, exponent_sign, BigUint::from(exponent), self.digits(rng))
            .expect("generated digits are canonical");
        DecimalValue::Finite(form)
    }

    pub fn special<R: Rng + ?Sized>(&self, rng: &mut R) -> DecimalValue {
        SPECIALS[rng.gen_range(0..SPECIALS.len())].clone()
    }

    pub fn any<R: Rng + ?Sized>(&self, rng: &mut R) -> DecimalValue {
        if rng.gen_bool(self.special_rate) {
            self.special(rng)
        } else {
            self.finite(rng)
        }
    }

    /// A value likely to share leading fields with `x`, so that comparisons
    /// reach the exponent and significand bits.
    pub fn near<R: Rng + ?Sized>(&self, x: &DecimalValue, rng: &mut R) -> DecimalValue {
        let Some(form) = x.as_finite() else {
            return self.any(rng);
        };
        let mut digits = form.digits().to_vec();
        match rng.gen_range(0..4) {
            0 => {
                let i = rng.gen_range(0..digits.len());
                digits[i] = rng.gen_range(0..=9);
            }
            1 => digits.extend(self.digits(rng)),
            2 => digits.truncate(rng.gen_range(1..=digits.len())),
            _ => {
                let mut exponent = form.exponent().clone();
                if rng.gen_bool(0.5) {
                    exponent += 1u32;
                } else if !exponent.is_zero() {
                    exponent -= 1u32;
                }
                return canonical(form.sign(), form.exponent_sign(), exponent, digits);
            }
        }
        canonical(form.sign(), form.exponent_sign(), form.exponent().clone(), digits)
    }
}

const SPECIALS: [DecimalValue; 5] = [
    DecimalValue::NegativeInfinity,
    DecimalValue::NegativeZero,
    DecimalValue::PositiveZero,
    DecimalValue::PositiveInfinity,
    DecimalValue::NaN,
];

/// Builds a value from possibly non-canonical digits by trimming zeros and
/// shifting the exponent for leading zeros.
fn canonical(sign: Sign, exponent_sign: ExponentSign, exponent: BigUint, mut digits: Vec<u8>) -> DecimalValue {
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    let lead = digits.iter().take_while(|&&d| d == 0).count();
    if lead == digits.len() {
        return DecimalValue::PositiveZero;
    }
    digits.drain(..lead);
    let mut power = match exponent_sign {
        ExponentSign::Negative => -num_bigint::BigInt::from(exponent),
        ExponentSign::NonNegative => num_bigint::BigInt::from(exponent),
    };
    power -= lead;
    let (s, magnitude) = power.into_parts();
    let exponent_sign = if s == num_bigint::Sign::Minus {
        ExponentSign::Negative
    } else {
        ExponentSign::NonNegative
    };
    DecimalValue::Finite(ScientificForm::new(sign, exponent_sign, magnitude, digits).expect("normalized"))
}

/// The encoder and decoder under test. Swappable so that a deliberately
/// broken codec can prove the checks catch faults.
#[derive(Clone, Copy)]
pub struct CodecUnderTest {
    pub encode: fn(&DecimalValue) -> BitString,
    pub decode: fn(&BitString) -> Result<DecimalValue, DecodeError>,
}

impl Default for CodecUnderTest {
    fn default() -> Self {
        Self {
            encode: codec::encode,
            decode: codec::decode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    RoundTrip,
    OrderHomomorphism,
    HeaderLaw,
    ComplementInvolution,
    LengthLaw,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::RoundTrip => "round-trip",
            Property::OrderHomomorphism => "order homomorphism",
            Property::HeaderLaw => "header law",
            Property::ComplementInvolution => "complement involution",
            Property::LengthLaw => "length law",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub property: Property,
    pub case: u64,
    /// Minimized values that still violate the property.
    pub values: Vec<DecimalValue>,
    /// Their encodings under the codec that was tested.
    pub encodings: Vec<BitString>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub cases: u64,
    pub seed: u64,
    pub failure: Option<Failure>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None if self.cases == 0 => write!(f, "PASS (vacuous)"),
            None => write!(f, "PASS ({} cases, seed {})", self.cases, self.seed),
            Some(failure) => {
                write!(f, "FAIL: {} violated at case {} (seed {})", failure.property, failure.case, self.seed)?;
                for (value, bits) in failure.values.iter().zip(&failure.encodings) {
                    write!(f, "\n  counterexample: {value} -> {bits}")?;
                }
                Ok(())
            }
        }
    }
}

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn draw_case(generator: &ValueGenerator, seed: u64, case: u64) -> (DecimalValue, DecimalValue) {
    let mut rng = case_rng(seed, case);
    let x = generator.any(&mut rng);
    let y = if rng.gen_bool(0.5) {
        generator.near(&x, &mut rng)
    } else {
        generator.any(&mut rng)
    };
    (x, y)
}

fn violates_single(property: Property, codec: &CodecUnderTest, x: &DecimalValue) -> bool {
    let encoded = (codec.encode)(x);
    match property {
        Property::RoundTrip => (codec.decode)(&encoded).as_ref() != Ok(x),
        Property::HeaderLaw => {
            let text = encoded.to_string();
            x.is_finite() && (text.starts_with("10011") || text.starts_with("00100"))
        }
        Property::ComplementInvolution => x
            .as_finite()
            .is_some_and(|f| complement_to_ten(&complement_to_ten(f.digits())) != f.digits()),
        Property::LengthLaw => x
            .as_finite()
            .is_some_and(|f| canonical_len(f) != encoded.len() as u64),
        Property::OrderHomomorphism => false,
    }
}

fn violates_order(codec: &CodecUnderTest, x: &DecimalValue, y: &DecimalValue) -> bool {
    let Some(numeric) = compare_numeric(x, y) else {
        return false;
    };
    let encoded = lex_compare(&(codec.encode)(x), &(codec.encode)(y));
    match numeric {
        // Only the two zeros are numerically equal yet distinct.
        Ordering::Equal => (x == y) != (encoded == Ordering::Equal),
        ordering => ordering != encoded,
    }
}

const SINGLE_PROPERTIES: [Property; 4] = [
    Property::RoundTrip,
    Property::HeaderLaw,
    Property::ComplementInvolution,
    Property::LengthLaw,
];

fn check_case(codec: &CodecUnderTest, x: &DecimalValue, y: &DecimalValue) -> Option<Property> {
    for property in SINGLE_PROPERTIES {
        if violates_single(property, codec, x) || violates_single(property, codec, y) {
            return Some(property);
        }
    }
    violates_order(codec, x, y).then_some(Property::OrderHomomorphism)
}

/// Smaller variants of `x` to try while minimizing.
fn shrink_candidates(x: &DecimalValue) -> Vec<DecimalValue> {
    let Some(form) = x.as_finite() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let digits = form.digits();
    if digits.len() > 1 {
        out.push(canonical(form.sign(), form.exponent_sign(), form.exponent().clone(), digits[..digits.len() / 2].to_vec()));
        out.push(canonical(form.sign(), form.exponent_sign(), form.exponent().clone(), digits[..digits.len() - 1].to_vec()));
    }
    let e = form.exponent();
    if !e.is_zero() {
        for smaller in [BigUint::zero(), e / 2u32, e - 1u32] {
            let sign = if smaller.is_zero() { ExponentSign::NonNegative } else { form.exponent_sign() };
            out.push(canonical(form.sign(), sign, smaller, digits.to_vec()));
        }
    }
    if digits.iter().any(|&d| d > 1) {
        let simpler: Vec<u8> = digits.iter().map(|&d| d.min(1)).collect();
        out.push(canonical(form.sign(), form.exponent_sign(), e.clone(), simpler));
    }
    out.retain(|c| c != x);
    out
}

fn minimize(codec: &CodecUnderTest, property: Property, mut values: Vec<DecimalValue>) -> Vec<DecimalValue> {
    let fails = |vs: &[DecimalValue]| match property {
        Property::OrderHomomorphism => violates_order(codec, &vs[0], &vs[1]),
        p => violates_single(p, codec, &vs[0]),
    };
    if property != Property::OrderHomomorphism {
        values.retain(|v| violates_single(property, codec, v));
        values.truncate(1);
    }
    // Bounded: every accepted step strictly shrinks digits or exponent.
    for _ in 0..10_000 {
        let mut improved = false;
        'slots: for slot in 0..values.len() {
            for candidate in shrink_candidates(&values[slot]) {
                let mut trial = values.clone();
                trial[slot] = candidate;
                if fails(&trial) {
                    values = trial;
                    improved = true;
                    break 'slots;
                }
            }
        }
        if !improved {
            break;
        }
    }
    values
}

pub fn run_selftest(cases: u64, seed: u64) -> SelfTestReport {
    run_selftest_with(cases, seed, &ValueGenerator::default(), &CodecUnderTest::default())
}

pub fn run_selftest_with(
    cases: u64,
    seed: u64,
    generator: &ValueGenerator,
    codec: &CodecUnderTest,
) -> SelfTestReport {
    let first_failure = (0..cases).into_par_iter().find_first(|&case| {
        let (x, y) = draw_case(generator, seed, case);
        check_case(codec, &x, &y).is_some()
    });
    let failure = first_failure.map(|case| {
        let (x, y) = draw_case(generator, seed, case);
        let property = check_case(codec, &x, &y).expect("case failed before");
        let values = minimize(codec, property, vec![x, y]);
        let encodings = values.iter().map(codec.encode).collect();
        Failure {
            property,
            case,
            values,
            encodings,
        }
    });
    SelfTestReport { cases, seed, failure }
}

/// Exponent magnitude of a finite value, if it fits in `u64`.
pub fn exponent_as_u64(value: &DecimalValue) -> Option<u64> {
    value.as_finite().and_then(|f| f.exponent().to_u64())
}
