//! Helpers shared by the integration tests. The encoder here works on decimal
//! text with plain string arithmetic and shares no code with the library.

#![allow(dead_code)]

use std::cmp::Ordering;

use declex::{compare_numeric, BitString, DecimalValue};
use num_bigint::BigUint;

/// Bits for `text` ("-1.25e3", "0.5", "INF", ...), spaces omitted.
pub fn oracle_encode(text: &str) -> String {
    match text {
        "NaN" => return "111".into(),
        "INF" | "+INF" => return "11".into(),
        "-INF" => return "00".into(),
        _ => {}
    }
    let (negative, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, shift) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap()),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let all = format!("{int_part}{frac_part}");
    let Some(first) = all.find(|c| c != '0') else {
        return if negative { "01".into() } else { "10".into() };
    };
    let digits = all[first..].trim_end_matches('0');
    let power = int_part.len() as i64 - 1 - first as i64 + shift;

    let stored = if negative {
        let n = digits.len();
        let whole = BigUint::from(10u32).pow(n as u32);
        let d: BigUint = digits.parse().unwrap();
        format!("{:0>n$}", (whole - d).to_string())
    } else {
        digits.to_owned()
    };

    let shifted = format!("{:b}", power.unsigned_abs() + 2);
    let mut exponent = "1".repeat(shifted.len() - 1) + "0" + &shifted[1..];
    if negative != (power < 0) {
        exponent = exponent.chars().map(|c| if c == '0' { '1' } else { '0' }).collect();
    }

    let mut out = String::from(if negative { "00" } else { "10" });
    out += &exponent;
    out += &format!("{:04b}", stored.as_bytes()[0] - b'0');
    let mut rest = stored[1..].to_owned();
    while rest.len() % 3 != 0 {
        rest.push('0');
    }
    for chunk in rest.as_bytes().chunks(3) {
        let group: u32 = std::str::from_utf8(chunk).unwrap().parse().unwrap();
        out += &format!("{group:010b}");
    }
    out
}

pub fn bits(text: &str) -> BitString {
    text.parse().unwrap()
}

pub fn value(text: &str) -> DecimalValue {
    text.parse().unwrap()
}

/// Numeric order made total: `-0` just before `+0`, NaN above everything.
pub fn oracle_cmp(a: &DecimalValue, b: &DecimalValue) -> Ordering {
    match (a.is_nan(), b.is_nan()) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Greater,
        (false, true) => return Ordering::Less,
        _ => {}
    }
    let zero_rank = |v: &DecimalValue| match v {
        DecimalValue::NegativeZero => 0,
        DecimalValue::PositiveZero => 1,
        _ => 0,
    };
    compare_numeric(a, b)
        .expect("no NaN left")
        .then_with(|| zero_rank(a).cmp(&zero_rank(b)))
}

pub const SPECIAL_TEXTS: [&str; 5] = ["-INF", "-0", "0", "INF", "NaN"];

/// Every value with at most two significant digits and exponent in
/// `0..=12`, both signs and exponent signs, plus the five specials.
pub fn grid_texts() -> Vec<String> {
    let mut out: Vec<String> = SPECIAL_TEXTS.iter().map(|s| s.to_string()).collect();
    for sign in ["", "-"] {
        for e in -12i32..=12 {
            for first in 1..=9 {
                out.push(format!("{sign}{first}e{e}"));
                for second in 1..=9 {
                    out.push(format!("{sign}{first}.{second}e{e}"));
                }
            }
        }
    }
    out
}

pub fn grid() -> Vec<DecimalValue> {
    grid_texts().iter().map(|t| value(t)).collect()
}

/// Checks that `key` never reverses the oracle order, and with `strict` that
/// it never merges values the oracle tells apart. Returns a violating pair.
pub fn first_misordered<K, F>(values: &[DecimalValue], mut key: F, strict: bool) -> Option<(DecimalValue, DecimalValue)>
where
    K: Ord,
    F: FnMut(&DecimalValue) -> K,
{
    let mut keyed: Vec<(K, &DecimalValue)> = values.iter().map(|v| (key(v), v)).collect();
    // Within a run of equal keys the oracle order is imposed, so comparing
    // neighbours also compares the largest of one run with the next run.
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| oracle_cmp(a.1, b.1)));
    keyed.windows(2).find_map(|w| {
        let numeric = oracle_cmp(w[0].1, w[1].1);
        let keys = w[0].0.cmp(&w[1].0);
        let bad = numeric == Ordering::Greater || (strict && keys == Ordering::Equal && numeric != Ordering::Equal);
        bad.then(|| (w[0].1.clone(), w[1].1.clone()))
    })
}
