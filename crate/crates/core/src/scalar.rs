//! Scalar abstraction shared by every computation in the crate.
//!
//! All algorithms are written once against [`Scalar`]. Floating-point types
//! compare with a small slack; [`Rational`] compares exactly, which is what the
//! fixtures with fractions such as 1/4 or 1/3 rely on.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// Numeric field used for gambles, masses and previsions.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Slack used for membership, measurability and desirability checks.
    fn tolerance() -> Self;

    /// Slack used by the simplex solver for pivot and reduced-cost tests.
    fn lp_tolerance() -> Self;

    /// Whether arithmetic is exact.
    fn is_exact() -> bool;

    /// Converts an exact rational into this type (rounding for floats).
    fn from_rational(r: &Rational) -> Self;

    /// Lossy conversion used for reporting and for transcendental formulas.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite value")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
    fn lp_tolerance() -> Self {
        1e-9
    }
    fn is_exact() -> bool {
        false
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
    fn lp_tolerance() -> Self {
        1e-4
    }
    fn is_exact() -> bool {
        false
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Rational::from_integer(BigInt::from(0))
    }
    fn lp_tolerance() -> Self {
        Self::tolerance()
    }
    fn is_exact() -> bool {
        true
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// `a >= b` up to the type's tolerance.
pub fn approx_ge<S: Scalar>(a: &S, b: &S) -> bool {
    a.clone() + S::tolerance() >= *b
}

/// `|a - b| <= tolerance`.
pub fn approx_eq<S: Scalar>(a: &S, b: &S) -> bool {
    (a.clone() - b.clone()).abs() <= S::tolerance()
}

/// Smallest element; `None` on empty input.
pub fn min_of<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> Option<S> {
    let mut it = values.into_iter();
    let mut best = it.next()?.clone();
    for v in it {
        if *v < best {
            best = v.clone();
        }
    }
    Some(best)
}

/// Largest element; `None` on empty input.
pub fn max_of<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> Option<S> {
    let mut it = values.into_iter();
    let mut best = it.next()?.clone();
    for v in it {
        if *v > best {
            best = v.clone();
        }
    }
    Some(best)
}

/// Expectation `Σ p(w) g(w)` over aligned slices.
pub fn dot<S: Scalar>(mass: &[S], values: &[S]) -> S {
    mass.iter()
        .zip(values)
        .fold(S::zero(), |acc, (p, g)| acc + p.clone() * g.clone())
}

/// Parses `"3"`, `"-0.125"`, `"1/4"` or `"2.5e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d == Rational::from_integer(BigInt::from(0)) {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(all.as_bytes(), 10)?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}
