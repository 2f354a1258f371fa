//! Exact rational scalars and small vector helpers.
//!
//! All analysis-side arithmetic in this crate runs over [`Rat`]
//! (arbitrary-precision rationals). Rationals are serialized as `p/q`
//! (or plain `p` when the denominator is 1) everywhere: scenario files,
//! CLI output, CSV reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` (optionally signed) into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a comma-separated list of rationals, e.g. `1/2,-3,0`.
pub fn parse_rat_vec(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

/// Renders a vector as `(a, b, …)` with exact entries.
pub fn format_rat_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

/// Entrywise sum.
pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Entrywise difference.
pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scalar multiple.
pub fn vec_scale(a: &[Rat], k: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * k).collect()
}

/// Lexicographic comparison of rational vectors of equal length.
pub fn vec_lex_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// All entries zero?
pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Converts to `f64` for the embedding/export layer only.
pub fn to_f64(r: &Rat) -> f64 {
    let n = bigint_to_f64(r.numer());
    let d = bigint_to_f64(r.denom());
    n / d
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    // Adequate for export-scale magnitudes.
    let s = b.to_string();
    s.parse::<f64>().unwrap_or(if b.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-7/3", "5", "0", "-4"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Reduction happens on parse.
        assert_eq!(format_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "a/b", "1//2", "1.5"] {
            assert!(parse_rat(s).is_err(), "expected parse failure for {s:?}");
        }
    }

    #[test]
    fn vec_helpers() {
        let a = vec![rat(1, 2), rint(3)];
        let b = vec![rat(1, 2), rint(-3)];
        assert_eq!(vec_add(&a, &b), vec![rint(1), rint(0)]);
        assert!(vec_is_zero(&vec_sub(&a, &a)));
        assert_eq!(vec_lex_cmp(&a, &b), std::cmp::Ordering::Greater);
        assert_eq!(format_rat_vec(&a), "(1/2, 3)");
    }

    #[test]
    fn f64_conversion() {
        assert!((to_f64(&rat(1, 2)) - 0.5).abs() < 1e-15);
        assert!((to_f64(&rat(-7, 4)) + 1.75).abs() < 1e-15);
    }
}
