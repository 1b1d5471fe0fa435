//! Growable bit strings, a read cursor, the two bit-sequence orders and
//! MSB-first byte packing.
//!
//! Bits are stored packed most-significant-bit first. Bits past `len` in the
//! last storage byte are always zero, which keeps byte-level comparison and
//! serialization trivial.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised when rebuilding a [`BitString`] from bytes or text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitFormatError {
    #[error("bit length {bit_length} exceeds the {available} bits available in {bytes} bytes")]
    LengthOutOfRange {
        bit_length: usize,
        bytes: usize,
        available: usize,
    },
    #[error("padding bits after bit {bit_length} are not zero")]
    NonZeroPadding { bit_length: usize },
    #[error("invalid bit character {found:?} at position {position}")]
    InvalidCharacter { found: char, position: usize },
}

/// An ordered sequence of bits.
///
/// The `Ord` implementation is the full lexicographic order (a strict prefix
/// sorts before its extensions). Use [`shortlex_compare`] for the
/// length-first order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &BitString) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
            return;
        }
        for bit in other.iter() {
            self.push(bit);
        }
    }

    /// Returns `target` extended on the right by `bits`.
    pub fn append(mut self, bits: &BitString) -> BitString {
        self.extend_from(bits);
        self
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    /// Shortens the string to `len` bits. No-op when already shorter.
    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.bytes.truncate(len.div_ceil(8));
        if !len.is_multiple_of(8) {
            let last = self.bytes.len() - 1;
            self.bytes[last] &= 0xFFu8 << (8 - len % 8);
        }
    }

    /// Removes trailing zero bits.
    pub fn trim_trailing_zeros(&mut self) {
        let mut len = self.len;
        while len > 0 && self.get(len - 1) == Some(false) {
            len -= 1;
        }
        self.truncate(len);
    }

    /// Pads with zero bits up to `len`. No-op when already longer.
    pub fn pad_to(&mut self, len: usize) {
        if len <= self.len {
            return;
        }
        self.bytes.resize(len.div_ceil(8), 0);
        self.len = len;
    }

    /// Packs the bits MSB-first, padding the final byte with zeros.
    pub fn to_bytes(&self) -> (Vec<u8>, usize) {
        (self.bytes.clone(), self.len)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn from_bytes(bytes: &[u8], bit_length: usize) -> Result<Self, BitFormatError> {
        let available = bytes.len() * 8;
        if bit_length > available {
            return Err(BitFormatError::LengthOutOfRange {
                bit_length,
                bytes: bytes.len(),
                available,
            });
        }
        // Only whole trailing bytes past the logical length are tolerated
        // when they are zero; callers pass exactly sized buffers otherwise.
        let needed = bit_length.div_ceil(8);
        if bytes[needed..].iter().any(|&b| b != 0) {
            return Err(BitFormatError::NonZeroPadding { bit_length });
        }
        if !bit_length.is_multiple_of(8) {
            let mask = 0xFFu8 >> (bit_length % 8);
            if bytes[needed - 1] & mask != 0 {
                return Err(BitFormatError::NonZeroPadding { bit_length });
            }
        }
        Ok(Self {
            bytes: bytes[..needed].to_vec(),
            len: bit_length,
        })
    }

    pub fn cursor(&self) -> BitCursor<'_> {
        BitCursor::new(self)
    }

    /// Renders the bits as `0`/`1`, inserting a space after each group whose
    /// lengths are listed in `groups`. Bits beyond the listed groups form a
    /// final group.
    pub fn to_grouped_string(&self, groups: &[usize]) -> String {
        let mut out = String::with_capacity(self.len + groups.len());
        let mut boundaries = groups.iter().scan(0usize, |acc, g| {
            *acc += g;
            Some(*acc)
        });
        let mut next = boundaries.next();
        for (i, bit) in self.iter().enumerate() {
            while next == Some(i) {
                if !out.is_empty() && !out.ends_with(' ') {
                    out.push(' ');
                }
                next = boundaries.next();
            }
            out.push(if bit { '1' } else { '0' });
        }
        out
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

/// Parses `0`/`1` text. Spaces are ignored so grouped strings paste directly.
impl FromStr for BitString {
    type Err = BitFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = BitString::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | '_' => {}
                found => return Err(BitFormatError::InvalidCharacter { found, position }),
            }
        }
        Ok(bits)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut bits = BitString::new();
        for bit in iter {
            bits.push(bit);
        }
        bits
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Full lexicographic order: bitwise from the left, a strict prefix first.
pub fn lex_compare(a: &BitString, b: &BitString) -> Ordering {
    let common = a.len.min(b.len);
    let full = common / 8;
    match a.bytes[..full].cmp(&b.bytes[..full]) {
        Ordering::Equal => {}
        other => return other,
    }
    let rest = common % 8;
    if rest != 0 {
        let mask = 0xFFu8 << (8 - rest);
        match (a.bytes[full] & mask).cmp(&(b.bytes[full] & mask)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len.cmp(&b.len)
}

/// Shortlex order: by length, then lexicographically within a length.
pub fn shortlex_compare(a: &BitString, b: &BitString) -> Ordering {
    a.len.cmp(&b.len).then_with(|| a.bytes.cmp(&b.bytes))
}

/// A read position over a [`BitString`].
#[derive(Debug, Clone)]
pub struct BitCursor<'a> {
    source: &'a BitString,
    position: usize,
}

impl<'a> BitCursor<'a> {
    pub fn new(source: &'a BitString) -> Self {
        Self {
            source,
            position: 0,
        }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn remaining(&self) -> usize {
        self.source.len - self.position
    }

    pub fn is_at_end(&self) -> bool {
        self.position == self.source.len
    }

    pub fn peek(&self) -> Option<bool> {
        self.source.get(self.position)
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.source.get(self.position)?;
        self.position += 1;
        Some(bit)
    }

    /// Reads `width` (at most 64) bits as an unsigned integer, MSB first.
    /// Leaves the cursor untouched when fewer bits remain.
    pub fn read_uint(&mut self, width: usize) -> Option<u64> {
        debug_assert!(width <= 64);
        if self.remaining() < width {
            return None;
        }
        let mut value = 0u64;
        for _ in 0..width {
            value = (value << 1) | u64::from(self.read_bit()?);
        }
        Some(value)
    }

    /// Returns the unread bits.
    pub fn rest(&self) -> BitString {
        (self.position..self.source.len)
            .map(|i| self.source.get(i).unwrap_or(false))
            .collect()
    }

    pub fn seek(&mut self, position: usize) {
        assert!(position <= self.source.len, "cursor position past end");
        self.position = position;
    }
}
