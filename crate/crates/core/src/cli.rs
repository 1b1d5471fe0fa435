//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 decode error, 3 self-test
//! failure.

use std::cmp::Ordering;
use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bitstream::{lex_compare, BitString};
use crate::codec::{self, canonical_len, CodecOptions, Variant};
use crate::decimal::{parse_decimal, render_decimal_with, DecimalValue, ExponentSign, RenderOptions, Sign};
use crate::gamma::exponent_field_len;
use crate::selftest::run_selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DECODE: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "declex", version, about = "Order-preserving binary encoding of arbitrary decimals")]
pub struct CliConfig {
    /// canonical, prefix, or fixed:<bits>
    #[arg(long, global = true, default_value = "canonical", value_parser = parse_variant)]
    pub variant: Variant,

    /// Drop trailing zero bits (canonical variant only)
    #[arg(long, global = true)]
    pub trim: bool,

    /// Output (encode) or input (decode) representation; both when omitted
    #[arg(long, global = true)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Bits,
    Hex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode decimals given as arguments or one per line on stdin
    Encode {
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Decode bit text ("10 100 0001") or hex with bit length ("A0 80/9")
    Decode { inputs: Vec<String> },
    /// Compare two decimals through their encodings
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Sort decimals read from stdin by their encodings
    Sort,
    /// Tabulate encoded sizes of log-spaced integers
    BenchSize {
        #[arg(long, default_value = "1e40")]
        max: String,
        #[arg(long, default_value_t = 161)]
        samples: usize,
    },
    /// Run the seeded property suite
    SelfTest {
        #[arg(long, default_value_t = 100_000)]
        cases: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn parse_variant(text: &str) -> Result<Variant, String> {
    match text {
        "canonical" => Ok(Variant::Canonical),
        "prefix" => Ok(Variant::PrefixFree),
        _ => {
            let width = text
                .strip_prefix("fixed:")
                .ok_or_else(|| format!("unknown variant {text:?}"))?;
            let width: u32 = width.parse().map_err(|_| format!("bad width {width:?}"))?;
            if width < 8 || !width.is_multiple_of(8) {
                return Err("fixed width must be a multiple of 8 and at least 8".to_owned());
            }
            Ok(Variant::FixedWidth(width))
        }
    }
}

/// Parses arguments and runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&config, stdin, stdout) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn options(config: &CliConfig) -> Result<CodecOptions, Failure> {
    let options = CodecOptions {
        trim_trailing_zero_bits: config.trim,
        variant: config.variant,
    };
    options.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(options)
}

fn inputs(args: &[String], stdin: &mut dyn BufRead) -> Result<Vec<String>, Failure> {
    if !args.is_empty() {
        return Ok(args.to_vec());
    }
    let mut out = Vec::new();
    for line in stdin.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() {
            out.push(line.to_owned());
        }
    }
    Ok(out)
}

fn parse(text: &str) -> Result<DecimalValue, Failure> {
    parse_decimal(text).map_err(|e| Failure::usage(format!("{text:?}: {e}")))
}

fn execute(config: &CliConfig, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Failure> {
    let opts = options(config)?;
    match &config.command {
        Command::Encode { values } => {
            for text in inputs(values, stdin)? {
                let value = parse(&text)?;
                writeln!(out, "{}", encode_line(&value, &opts, config.format)?)?;
            }
        }
        Command::Decode { inputs: args } => {
            let render = RenderOptions::default();
            for text in inputs(args, stdin)? {
                let bits = parse_encoded(&text, config.format)?;
                let value = codec::decode_with(&bits, &opts).map_err(|e| Failure {
                    code: EXIT_DECODE,
                    message: format!("{text:?}: {e}"),
                })?;
                writeln!(out, "{}", render_decimal_with(&value, &render))?;
            }
        }
        Command::Cmp { a, b } => {
            let ea = encode_for_order(&parse(a)?, &opts)?;
            let eb = encode_for_order(&parse(b)?, &opts)?;
            let symbol = match lex_compare(&ea, &eb) {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            writeln!(out, "{a} {symbol} {b}")?;
        }
        Command::Sort => {
            for line in sort_lines(&inputs(&[], stdin)?, &opts)? {
                writeln!(out, "{line}")?;
            }
        }
        Command::BenchSize { max, samples } => {
            let max = parse(max)?;
            let rows = size_samples(&max, *samples).map_err(Failure::usage)?;
            writeln!(out, "integer\tbits\tlength_law\tapprox_formula\texponent_bits")?;
            for row in rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{:.2}\t{}",
                    row.text, row.bits, row.length_law, row.approx_formula, row.exponent_bits
                )?;
            }
        }
        Command::SelfTest { cases, seed } => {
            let report = run_selftest(*cases, *seed);
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(EXIT_SELFTEST);
            }
        }
    }
    Ok(EXIT_OK)
}

fn encode_for_order(value: &DecimalValue, opts: &CodecOptions) -> Result<BitString, Failure> {
    codec::encode_with(value, opts).map_err(|e| Failure::usage(format!("{value}: {e}")))
}

/// Renders bits grouped by field, and as hex bytes with the bit length.
fn encode_line(value: &DecimalValue, opts: &CodecOptions, format: Option<Format>) -> Result<String, Failure> {
    let bits = encode_for_order(value, opts)?;
    let groups: Vec<usize> = match opts.variant {
        Variant::PrefixFree => {
            let segments = codec::encode_segments(value);
            let mut groups: Vec<usize> = segments.iter().take(2).map(BitString::len).collect();
            groups.extend(segments.iter().skip(2).map(|s| s.len() + 1));
            groups
        }
        _ => codec::encode_segments(value).iter().map(BitString::len).collect(),
    };
    let text = bits.to_grouped_string(&groups);
    let hex = hex_form(&bits);
    Ok(match format {
        Some(Format::Bits) => text,
        Some(Format::Hex) => hex,
        None => format!("{text}\t{hex}"),
    })
}

pub fn hex_form(bits: &BitString) -> String {
    let (bytes, len) = bits.to_bytes();
    let body: Vec<String> = bytes.iter().map(|b| format!("{b:02X}")).collect();
    format!("{}/{len}", body.join(" "))
}

/// Accepts `0`/`1` text (spaces ignored) or hex bytes followed by `/bits`.
pub fn parse_encoded(text: &str, format: Option<Format>) -> Result<BitString, Failure> {
    let bad = |why: String| Failure::usage(format!("{text:?}: {why}"));
    let hex = match format {
        Some(Format::Hex) => true,
        Some(Format::Bits) => false,
        None => text.contains('/'),
    };
    if !hex {
        return text.parse().map_err(|e: crate::bitstream::BitFormatError| bad(e.to_string()));
    }
    let (body, len) = text
        .rsplit_once('/')
        .ok_or_else(|| bad("hex input needs a /<bit length> suffix".to_owned()))?;
    let len: usize = len.trim().parse().map_err(|_| bad(format!("bad bit length {len:?}")))?;
    let digits: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    if !digits.len().is_multiple_of(2) {
        return Err(bad("odd number of hex digits".to_owned()));
    }
    let bytes = (0..digits.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&digits[i..i + 2], 16))
        .collect::<Result<Vec<u8>, _>>()
        .map_err(|e| bad(e.to_string()))?;
    BitString::from_bytes(&bytes, len).map_err(|e| bad(e.to_string()))
}

/// Sorts decimal texts by comparing their encodings only.
pub fn sort_lines(lines: &[String], opts: &CodecOptions) -> Result<Vec<String>, Failure> {
    let mut keyed = lines
        .iter()
        .map(|line| Ok((encode_for_order(&parse(line)?, opts)?, line.clone())))
        .collect::<Result<Vec<_>, Failure>>()?;
    keyed.sort_by(|a, b| lex_compare(&a.0, &b.0));
    Ok(keyed.into_iter().map(|(_, line)| line).collect())
}

/// One row of the size table.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSample {
    pub integer: DecimalValue,
    pub text: String,
    /// Measured canonical encoding length.
    pub bits: u64,
    /// `2 + (2⌊log2(e+2)⌋ + 1) + 4 + 10⌈(|m|−1)/3⌉`.
    pub length_law: u64,
    /// The closed-form approximation `5 + 2⌊log2(e+2)⌋ + (10/3)(|m|−1)`.
    pub approx_formula: f64,
    pub exponent_bits: u64,
    pub log10: f64,
}

/// `⌊10^(k·L/(n−1))⌋` for `k = 0..n`, where `L = ⌊log10 max⌋`, without
/// repeats. Each sample is exact: an integer root of a power of ten.
pub fn size_samples(max: &DecimalValue, samples: usize) -> Result<Vec<SizeSample>, String> {
    let form = max
        .as_finite()
        .filter(|f| f.sign() == Sign::Positive && f.exponent_sign() == ExponentSign::NonNegative)
        .ok_or("max must be a positive integer")?;
    let decades = form.exponent().to_u64().filter(|&l| l <= 100_000).ok_or("max is too large")?;
    if (form.digits().len() as u64) > decades + 1 {
        return Err("max must be a positive integer".to_owned());
    }
    let render = RenderOptions { scientific_threshold: u64::MAX };
    let steps = samples.max(2) as u64 - 1;
    let mut rows: Vec<SizeSample> = Vec::new();
    for k in 0..=steps {
        let numerator = decades * k;
        let g = numerator.gcd(&steps).max(1);
        let (power, root) = (numerator / g, steps / g);
        let integer = BigUint::from(10u32).pow(power as u32).nth_root(root as u32);
        if rows.last().is_some_and(|r| r.text == integer.to_string()) {
            continue;
        }
        let value = parse_decimal(&integer.to_string()).map_err(|e| e.to_string())?;
        let f = value.as_finite().expect("sampled integers are positive");
        let e = f.exponent().clone();
        let digits = f.digits().len() as f64;
        let leading: String = integer.to_string().chars().take(17).collect();
        let log10 = e.to_f64().unwrap_or(f64::MAX)
            + (leading.parse::<f64>().unwrap_or(1.0)).log10()
            - (leading.len() as f64 - 1.0);
        let exponent_bits = exponent_field_len(&e);
        rows.push(SizeSample {
            text: render_decimal_with(&value, &render),
            bits: codec::encode(&value).len() as u64,
            length_law: canonical_len(f),
            approx_formula: 5.0 + (exponent_bits - 1) as f64 + 10.0 / 3.0 * (digits - 1.0),
            exponent_bits,
            log10,
            integer: value,
        });
    }
    debug_assert!(rows.iter().all(|r| !r.integer.as_finite().unwrap().exponent().is_zero() || r.log10 < 1.0));
    Ok(rows)
}
