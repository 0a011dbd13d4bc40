//! Exact parsing of user-supplied numbers: fractions (`3/7`), decimals
//! (`0.25`), and scientific notation (`2.5e-3`), all contributing exact
//! rationals so polynomial evaluation stays exact.

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().context("bad fraction numerator")?;
        let d: BigInt = den.trim().parse().context("bad fraction denominator")?;
        if d == BigInt::from(0) {
            bail!("zero denominator in {s:?}");
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().context("bad exponent")?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let negative = int_part.starts_with('-');
    let digits: String = format!(
        "{}{}",
        int_part.trim_start_matches(['+', '-']),
        frac_part
    );
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        bail!("cannot parse {s:?} as a rational number");
    }
    let mut num: BigInt = digits.parse().unwrap();
    if negative {
        num = -num;
    }
    let shift = exp10 - frac_part.len() as i64;
    let mut value = BigRational::from(num);
    let ten = BigInt::from(10);
    if shift >= 0 {
        value *= BigRational::from(num_traits::pow::pow(ten, shift as usize));
    } else {
        value /= BigRational::from(num_traits::pow::pow(ten, (-shift) as usize));
    }
    Ok(value)
}
