//! Number abstraction: exact rationals with a machine-word fast path, and `f64`
//! with a single global relative tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::Error;

const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Relative tolerance used by every float-mode comparison.
pub fn float_tolerance() -> f64 {
    let tol = f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed));
    if tol.is_finite() && tol > 0.0 {
        tol
    } else {
        DEFAULT_TOLERANCE
    }
}

pub fn set_float_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0 && tol < 1.0, "tolerance must lie in (0, 1)");
    TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// Exact rational number. Values that fit in `i64` numerator and denominator stay
/// in the small representation; everything else is promoted to big integers.
#[derive(Clone)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational::Small(Ratio::new(num, den))
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational::Small(Ratio::from_integer(n))
    }

    pub fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn signum(&self) -> i8 {
        match self {
            Rational::Small(r) => r.numer().signum() as i8,
            Rational::Big(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Rational {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_integer(),
            Rational::Big(r) => r.is_integer(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rational::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(r) => big_to_f64(r),
        }
    }

    /// Exact square root when the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.signum() < 0 {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &rn * &rn == n && &rd * &rd == d {
            Some(Rational::from_big(BigRational::new(rn, rd)))
        } else {
            None
        }
    }

    /// Nearest rational to a finite float, exact in binary.
    pub fn from_f64(x: f64) -> Option<Rational> {
        BigRational::from_float(x).map(Rational::from_big)
    }

    pub fn pow(&self, e: u32) -> Rational {
        let mut acc = Rational::from_integer(1);
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn binop(
        a: &Rational,
        b: &Rational,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Rational {
        if let (Rational::Small(x), Rational::Small(y)) = (a, b) {
            if let Some(r) = small(x, y) {
                return Rational::Small(r);
            }
        }
        Rational::from_big(big(a.to_big(), b.to_big()))
    }
}

fn big_to_f64(r: &BigRational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()) as i64 - 60;
    if shift <= 0 {
        return n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN);
    }
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = (n >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> ds as usize).to_f64().unwrap_or(f64::NAN);
    nf / df * 2f64.powi((ns - ds) as i32)
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::binop(&self, &rhs, |x, y| x.checked_add(y), |x, y| x + y)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational::binop(&self, &rhs, |x, y| x.checked_sub(y), |x, y| x - y)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::binop(&self, &rhs, |x, y| x.checked_mul(y), |x, y| x * y)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational::binop(&self, &rhs, |x, y| x.checked_div(y), |x, y| x / y)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            other => Rational::from_big(-other.to_big()),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Rational) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => {
                let lhs = *a.numer() as i128 * *b.denom() as i128;
                let rhs = *b.numer() as i128 * *a.denom() as i128;
                lhs.cmp(&rhs)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Small and Big never represent the same value, so hashing the
        // representation directly is consistent with equality.
        match self {
            Rational::Small(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Rational::Big(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{}", r),
            Rational::Big(r) => write!(f, "{}", r),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts integers, `p/q` fractions and decimals with an optional exponent.
    fn from_str(s: &str) -> Result<Rational, Error> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::from_big(BigRational::new(p, q)));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (sign, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Rational::from_big(if sign < 0 { -value } else { value }))
    }
}

/// Arithmetic required by every geometric routine. Implemented exactly by
/// [`Rational`] and approximately by `f64`.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Zero test; within tolerance in float mode.
    fn is_zero(&self) -> bool;
    /// Sign with the same tolerance as [`Scalar::is_zero`].
    fn sign(&self) -> i8;
    fn approx_eq(&self, other: &Self) -> bool;
    fn abs(&self) -> Self;
    /// Integer value, if the number is (within tolerance of) an integer.
    fn to_integer(&self) -> Option<i64>;
    /// Exact rational value; floats convert through their binary expansion.
    fn to_rational(&self) -> Option<Rational>;
    fn parse_scalar(s: &str) -> Result<Self, Error>;
    /// Serialized form: `p/q` for rationals, shortest round-trip decimal for floats.
    fn to_text(&self) -> String;

    fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    fn is_negative(&self) -> bool {
        self.sign() < 0
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::from_integer(0)
    }
    fn one() -> Self {
        Rational::from_integer(1)
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn sign(&self) -> i8 {
        self.signum()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn abs(&self) -> Self {
        Rational::abs(self)
    }
    fn to_integer(&self) -> Option<i64> {
        self.to_i64()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn parse_scalar(s: &str) -> Result<Self, Error> {
        s.parse()
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        f64::abs(*self) <= float_tolerance()
    }
    fn sign(&self) -> i8 {
        if Scalar::is_zero(self) {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }
    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(f64::abs(*self)).max(f64::abs(*other));
        f64::abs(self - other) <= float_tolerance() * scale
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_integer(&self) -> Option<i64> {
        let r = self.round();
        if r.abs() < 9.0e15 && Scalar::approx_eq(self, &r) {
            Some(r as i64)
        } else {
            None
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        Rational::from_f64(*self)
    }
    fn parse_scalar(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.contains('/') {
            return t.parse::<Rational>().map(|r| r.to_f64());
        }
        t.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
    fn to_text(&self) -> String {
        format!("{self:?}")
    }
}

/// Relative comparison used by float-valued outputs that are not `Scalar`s themselves.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(q("3/2"), Rational::new(3, 2));
        assert_eq!(q("-0.25"), Rational::new(-1, 4));
        assert_eq!(q("1e-3"), Rational::new(1, 1000));
        assert_eq!(q("2.5E2"), Rational::from_integer(250));
        assert_eq!(q(" 7 "), Rational::from_integer(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Rational::from_integer(i64::MAX);
        let sq = big.clone() * big.clone();
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq / big.clone();
        assert!(matches!(back, Rational::Small(_)));
        assert_eq!(back, big);
        let m = -Rational::from_integer(i64::MIN);
        assert_eq!(m.numer(), -BigInt::from(i64::MIN));
    }

    #[test]
    fn ordering_matches_floats() {
        let a = Rational::new(1, 3);
        let b = Rational::new(2, 5);
        assert!(a < b);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
        assert!(Rational::new(-1, 2) < Rational::zero());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Rational::new(9, 4).sqrt_exact(), Some(Rational::new(3, 2)));
        assert_eq!(Rational::new(2, 1).sqrt_exact(), None);
    }

    #[test]
    fn float_equality_is_relative() {
        assert!(Scalar::approx_eq(&1e12, &(1e12 + 1.0)));
        assert!(!Scalar::approx_eq(&1.0, &(1.0 + 1e-6)));
        assert!(Scalar::is_zero(&1e-10));
        assert_eq!(Scalar::to_integer(&(3.0 + 1e-12)), Some(3));
    }

    #[test]
    fn big_values_convert_to_float() {
        let r = Rational::from_integer(3).pow(60) / Rational::from_integer(2).pow(70);
        let expect = 3f64.powi(60) / 2f64.powi(70);
        assert!(close(r.to_f64(), expect, 1e-14));
    }
}
