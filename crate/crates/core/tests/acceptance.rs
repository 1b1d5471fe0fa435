//! One PASS/FAIL line per acceptance criterion. Runs every criterion even
//! after a failure and exits non-zero if any failed.

mod support;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use declex::cli::size_samples;
use declex::gamma::{decode_exponent, encode_exponent};
use declex::selftest::ValueGenerator;
use declex::variants::{decode_prefix_free_stream, encode_prefix_free, encode_prefix_free_stream, fixed_width_key};
use declex::{compare_numeric, decode, encode, lex_compare, DecimalValue, DecodeError, DecodeErrorKind};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{bits, first_misordered, grid, oracle_cmp, value};

const SEED: u64 = 42;
const ROUND_TRIP_VALUES: usize = 100_000;
const RANDOM_PAIRS: usize = 100_000;
const STREAMS: usize = 10_000;
const SIZE_SAMPLES: usize = 161;
const SIZE_TOLERANCE_BITS: f64 = 12.0;
const FIXED_KEY_BITS: u32 = 64;

type Check = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn golden_examples() -> Check {
    let table = [
        ("-103.2", "00 001 11 1000 1111001000"),
        ("-0.0405", "00 110 00 0101 1110110110"),
        ("4005012345", "10 1110 011 0100 0000000101 0000001100 0101011001"),
        // Published as "... 0001111000" (120) in the last declet; the digits
        // 0, 6, 0 give 60 = 0000111100.
        ("0.707106", "10 01 0 0111 0001000111 0000111100"),
    ];
    for (text, expected) in table {
        let got = encode(&value(text));
        ensure(got == bits(expected), || format!("{text}: got {got}, want {expected}"))?;
    }
    Ok("4 values bit-exact".into())
}

fn small_integers() -> Check {
    let mut table = vec![
        (-15, "00 010 1000 0111110100"),
        // Published as 1011111000 (760); 10 - 1.4 = 8.6 stores declet 600.
        (-14, "00 010 1000 1001011000"),
        (-13, "00 010 1000 1010111100"),
        (-12, "00 010 1000 1100100000"),
        (-11, "00 010 1000 1110000100"),
        (-10, "00 010 1001"),
        // Published as 0010, the same as -8; 10 - 9 = 1 stores tetrade 0001.
        (-9, "00 011 0001"),
        (-8, "00 011 0010"),
        (-7, "00 011 0011"),
        (-6, "00 011 0100"),
        (-5, "00 011 0101"),
        (-4, "00 011 0110"),
        (-3, "00 011 0111"),
        (-2, "00 011 1000"),
        (-1, "00 011 1001"),
        (0, "10"),
        (1, "10 100 0001"),
        (2, "10 100 0010"),
        (3, "10 100 0011"),
        (4, "10 100 0100"),
        (5, "10 100 0101"),
        (6, "10 100 0110"),
        (7, "10 100 0111"),
        (8, "10 100 1000"),
        (9, "10 100 1001"),
        (10, "10 101 0001"),
        (11, "10 101 0001 0001100100"),
        (12, "10 101 0001 0011001000"),
        (13, "10 101 0001 0100101100"),
        (14, "10 101 0001 0110010000"),
        (15, "10 101 0001 0111110100"),
    ];
    table.sort_by_key(|row| row.0);
    for (n, expected) in &table {
        let got = encode(&DecimalValue::from(*n as i64));
        ensure(got == bits(expected), || format!("{n}: got {got}, want {expected}"))?;
    }
    Ok(format!("{} integers, -14 and -9 rule-derived", table.len()))
}

fn exponent_table() -> Check {
    let table = [
        (0u32, "10 0", "01 1"),
        (1, "10 1", "01 0"),
        (2, "110 00", "001 11"),
        (3, "110 01", "001 10"),
        (4, "110 10", "001 01"),
        (5, "110 11", "001 00"),
        (6, "1110 000", "0001 111"),
        (7, "1110 001", "0001 110"),
        (8, "1110 010", "0001 101"),
        (9, "1110 011", "0001 100"),
    ];
    for (e, plain, negated) in table {
        let e = BigUint::from(e);
        let (p, n) = (encode_exponent(&e, false).bits, encode_exponent(&e, true).bits);
        ensure(p == bits(plain), || format!("e={e}: got {p}, want {plain}"))?;
        ensure(n == bits(negated), || format!("e={e} negated: got {n}, want {negated}"))?;
    }
    Ok("10 exponents, both polarities".into())
}

fn worked_decode() -> Check {
    let input = bits("1011100110100000000010100000011000101011001");
    ensure(input.len() == 43, || format!("input has {} bits", input.len()))?;
    let decoded = decode(&input).map_err(|e| e.to_string())?;
    ensure(decoded == value("4.005012345e9"), || format!("decoded {decoded}"))?;

    let run = input.iter().skip(2).take_while(|&b| b).count();
    let mut cursor = input.cursor();
    cursor.seek(2);
    let (e, _) = decode_exponent(&mut cursor).map_err(|e| e.to_string())?;
    let width = cursor.position() - 2;
    ensure(run == 3 && width == 2 * run + 1, || format!("run {run}, field {width} bits"))?;
    ensure(e == BigUint::from(9u32), || format!("exponent {e}"))?;
    Ok(format!("4005012345, exponent field {width} bits"))
}

fn round_trip_values() -> Vec<DecimalValue> {
    let generator = ValueGenerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut values: Vec<DecimalValue> = (0..ROUND_TRIP_VALUES).map(|_| generator.finite(&mut rng)).collect();
    values.extend(support::SPECIAL_TEXTS.iter().map(|t| value(t)));
    values
}

fn random_pairs() -> Vec<(DecimalValue, DecimalValue)> {
    let generator = ValueGenerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    (0..RANDOM_PAIRS)
        .map(|_| {
            let a = generator.any(&mut rng);
            let b = if rng.gen_bool(0.5) { generator.near(&a, &mut rng) } else { generator.any(&mut rng) };
            (a, b)
        })
        .collect()
}

fn round_trip(values: &[DecimalValue]) -> Check {
    let mut combos = [0usize; 4];
    for v in values {
        if let Some(f) = v.as_finite() {
            let negative = f.sign() == declex::decimal::Sign::Negative;
            let negative_exponent = f.exponent_sign() == declex::decimal::ExponentSign::Negative;
            combos[2 * negative as usize + negative_exponent as usize] += 1;
        }
        let back = decode(&encode(v)).map_err(|e| format!("{v}: {e}"))?;
        ensure(back == *v, || format!("{v} came back as {back}"))?;
    }
    ensure(combos.iter().all(|&c| c > 0), || format!("sign combinations {combos:?}"))?;
    Ok(format!("{} values, sign combinations {combos:?}", values.len()))
}

fn order(grid: &[DecimalValue], pairs: &[(DecimalValue, DecimalValue)]) -> Check {
    if let Some((a, b)) = first_misordered(grid, encode, true) {
        return Err(format!("grid: {a} and {b}"));
    }
    for (a, b) in pairs {
        let by_bits = lex_compare(&encode(a), &encode(b));
        ensure(by_bits == oracle_cmp(a, b), || format!("{a} vs {b}: bits say {by_bits:?}"))?;
    }
    let unordered = pairs.iter().filter(|(a, b)| compare_numeric(a, b).is_none()).count();
    Ok(format!("grid of {} sorted, {} pairs agree ({unordered} with NaN)", grid.len(), pairs.len()))
}

fn floor_log2(n: u64) -> u64 {
    63 - n.leading_zeros() as u64
}

fn length_law<'a>(values: impl Iterator<Item = &'a DecimalValue>) -> Check {
    let (mut count, mut low, mut high) = (0usize, f64::MAX, f64::MIN);
    for v in values {
        let Some(f) = v.as_finite() else { continue };
        let e: u64 = f.exponent().try_into().map_err(|_| format!("{v}: exponent too large"))?;
        let m = f.digits().len() as u64;
        let measured = encode(v).len() as u64;
        let law = 2 + (2 * floor_log2(e + 2) + 1) + 4 + 10 * (m - 1).div_ceil(3);
        ensure(measured == law, || format!("{v}: {measured} bits, law says {law}"))?;
        let published = 5.0 + 2.0 * floor_log2(e + 2) as f64 + 10.0 / 3.0 * (m - 1) as f64;
        let delta = measured as f64 - published;
        ensure((2.0..9.0).contains(&delta), || format!("{v}: {measured} - {published:.2} = {delta:.2}"))?;
        low = low.min(delta);
        high = high.max(delta);
        count += 1;
    }
    Ok(format!("{count} finite values, excess over published formula in [{low:.2}, {high:.2}]"))
}

fn asymptotic_size() -> Check {
    let rows = size_samples(&value("1e40"), SIZE_SAMPLES)?;
    let mut outside = Vec::new();
    for row in &rows {
        let deviation = row.bits as f64 - 10.0 / 3.0 * row.log10;
        if deviation.abs() > SIZE_TOLERANCE_BITS {
            outside.push((deviation, row.text.clone(), row.bits));
        }
    }
    if outside.is_empty() {
        return Ok(format!("{} samples within ±{SIZE_TOLERANCE_BITS} bits", rows.len()));
    }
    outside.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
    let (deviation, text, bits) = &outside[0];
    Err(format!(
        "{} of {} samples beyond ±{SIZE_TOLERANCE_BITS} bits; worst {text}: {bits} bits, {deviation:+.1}",
        outside.len(),
        rows.len()
    ))
}

fn exponent_growth() -> Check {
    let rows = size_samples(&value("1e40"), SIZE_SAMPLES)?;
    let mut worst = f64::MAX;
    for row in &rows {
        let bound = 2.0 * (row.log10 + 2.0).log2() + 1.0;
        let slack = bound - row.exponent_bits as f64;
        ensure(slack >= 0.0, || format!("{}: {} exponent bits > {bound:.2}", row.text, row.exponent_bits))?;
        worst = worst.min(slack);
    }
    Ok(format!("{} samples, tightest slack {worst:.2} bits", rows.len()))
}

fn error_taxonomy() -> Check {
    use DecodeErrorKind::*;
    let cases = [
        ("10011000001", NegativeZeroExponent),
        ("10 100 1010", DigitOutOfRange),
        ("10 100 0000", SignificandOutOfRange),
        ("0100 1010", InvalidHeader),
        ("10 101 0001 00110", TruncatedInput),
    ];
    for (input, kind) in cases {
        let got = decode(&bits(input));
        ensure(matches!(got, Err(DecodeError { kind: k, .. }) if k == kind), || {
            format!("{input}: got {got:?}, want {kind:?}")
        })?;
    }
    Ok("5 kinds raised".into())
}

fn prefix_free(grid: &[DecimalValue]) -> Check {
    let generator = ValueGenerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for i in 0..STREAMS {
        let n = rng.gen_range(1..=10);
        let values: Vec<DecimalValue> = (0..n).map(|_| generator.finite(&mut rng)).collect();
        let stream = encode_prefix_free_stream(values.iter());
        let back = decode_prefix_free_stream(&mut stream.cursor()).map_err(|e| format!("stream {i}: {e}"))?;
        ensure(back == values, || format!("stream {i} decoded as {back:?}"))?;
    }

    // With zeros, infinities and NaN mixed in, runs like +INF NaN and NaN
    // +INF share bits, so only the bits are required to survive.
    let mut reparsed = 0;
    for i in 0..STREAMS {
        let n = rng.gen_range(1..=10);
        let values: Vec<DecimalValue> = (0..n).map(|_| generator.any(&mut rng)).collect();
        let stream = encode_prefix_free_stream(values.iter());
        let back = decode_prefix_free_stream(&mut stream.cursor()).map_err(|e| format!("mixed stream {i}: {e}"))?;
        ensure(encode_prefix_free_stream(back.iter()) == stream, || format!("mixed stream {i} re-encodes differently"))?;
        reparsed += (back != values) as usize;
    }

    if let Some((a, b)) = first_misordered(grid, encode_prefix_free, true) {
        return Err(format!("grid: {a} and {b}"));
    }
    Ok(format!(
        "{STREAMS} finite streams exact, {STREAMS} mixed streams bit-stable ({reparsed} reparsed), grid sorted"
    ))
}

fn fixed_width(grid: &[DecimalValue]) -> Check {
    let key = |v: &DecimalValue| fixed_width_key(v, FIXED_KEY_BITS).expect("grid values fit").bytes;
    if let Some((a, b)) = first_misordered(grid, key, false) {
        return Err(format!("keys reverse {a} and {b}"));
    }
    let whole: Vec<DecimalValue> = grid
        .iter()
        .filter(|v| encode(v).len() <= FIXED_KEY_BITS as usize)
        .cloned()
        .collect();
    if let Some((a, b)) = first_misordered(&whole, key, true) {
        return Err(format!("untruncated keys merge {a} and {b}"));
    }
    Ok(format!("{} keys, {} untruncated and strictly ordered", grid.len(), whole.len()))
}

fn run(id: &str, name: &str, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {message}"))
    });
    let ms = start.elapsed().as_millis();
    let (status, detail) = match &outcome {
        Ok(detail) => ("PASS", detail),
        Err(detail) => ("FAIL", detail),
    };
    println!("{status} {id:<3} {name}: {detail} [{ms} ms]");
    outcome.is_ok()
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let grid = grid();
    let round_trip_set = round_trip_values();
    let pairs = random_pairs();

    let results = [
        run("1", "golden worked examples", golden_examples),
        run("2", "integers -15..15", small_integers),
        run("3", "exponent field table", exponent_table),
        run("4", "43-bit decode example", worked_decode),
        run("5", "round trip", || round_trip(&round_trip_set)),
        run("6", "order homomorphism", || order(&grid, &pairs)),
        run("7", "length law", || {
            let all = round_trip_set.iter().chain(&grid).chain(pairs.iter().flat_map(|(a, b)| [a, b]));
            length_law(all)
        }),
        run("8a", "size within ±12 bits of (10/3)·log10 i", asymptotic_size),
        run("8b", "exponent field grows double-logarithmically", exponent_growth),
        run("9", "decode error taxonomy", error_taxonomy),
        run("10", "prefix-free streams", || prefix_free(&grid)),
        run("11", "fixed-width 64-bit keys", || fixed_width(&grid)),
    ];

    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
