//! Integer helpers and the exact rational carrier.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction with positive denominator.
pub type ExactRational = BigRational;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// lcm of a slice; the empty lcm is 1.
pub fn lcm_all(xs: &[u64]) -> Result<u64> {
    xs.iter()
        .try_fold(1u64, |acc, &x| checked_lcm(acc, x))
        .ok_or(Error::Overflow("lcm"))
}

pub fn ratio(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a fraction as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &ExactRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serde adapter storing an [`ExactRational`] as its `p/q` text.
pub mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, ExactRational};

    pub fn serialize<S: Serializer>(r: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Six-significant-digit decimal rendering, for human scanning only.
pub fn approx(r: &ExactRational) -> String {
    use num_traits::ToPrimitive;
    let v = r.to_f64().unwrap_or(f64::NAN);
    format!("{}", round_sig(v, 6))
}

fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - mag);
    (x * scale).round() / scale
}

/// Counts `m` in `1..=upto` divisible by none of `moduli`, by inclusion-exclusion.
pub fn count_coprime_multiples(upto: u64, moduli: &[u64]) -> u64 {
    // Drop moduli that are multiples of another; they add nothing.
    let mut ms: Vec<u64> = moduli.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let ms: Vec<u64> = ms
        .iter()
        .copied()
        .filter(|&m| {
            !moduli
                .iter()
                .any(|&o| o != m && o > 0 && m % o == 0 && o < m)
        })
        .collect();
    if ms.contains(&1) {
        return 0;
    }
    let mut total: i128 = 0;
    for mask in 0u32..(1u32 << ms.len()) {
        let mut l: u64 = 1;
        let mut overflow = false;
        for (i, &m) in ms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match checked_lcm(l, m) {
                    Some(v) if v <= upto => l = v,
                    _ => {
                        overflow = true;
                        break;
                    }
                }
            }
        }
        if overflow {
            continue;
        }
        let term = (upto / l) as i128;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coprime_multiples_matches_scan() {
        let cases: &[(u64, &[u64])] = &[
            (47, &[3, 4]),
            (100, &[6, 10, 15]),
            (11, &[]),
            (30, &[1]),
            (90, &[2, 4, 9]),
        ];
        for &(upto, moduli) in cases {
            let scan = (1..=upto)
                .filter(|m| moduli.iter().all(|&r| m % r != 0))
                .count() as u64;
            assert_eq!(
                count_coprime_multiples(upto, moduli),
                scan,
                "{upto} {moduli:?}"
            );
        }
    }

    #[test]
    fn rational_text_round_trip() {
        let r = ratio(50, 28);
        assert_eq!(fmt_rational(&r), "25/14");
        assert_eq!(parse_rational("25/14").unwrap(), r);
        assert_eq!(fmt_rational(&ratio(6, 3)), "2");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn lcm_overflow_is_reported() {
        assert_eq!(lcm_all(&[2, 3, 4, 16]).unwrap(), 48);
        assert_eq!(lcm_all(&[]).unwrap(), 1);
        assert!(lcm_all(&[u64::MAX, u64::MAX - 1]).is_err());
    }

    #[test]
    fn approx_has_six_digits() {
        assert_eq!(approx(&ratio(25, 14)), "1.78571");
    }
}
