//! Laurent polynomials in `y` with rational coefficients and half-integer
//! exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Keys are twice the exponent of `y`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// `c·y^(half/2)`.
    pub fn monomial(c: Rational, half: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half, c);
        }
        LaurentPoly { terms }
    }

    /// `[x]` as a Laurent polynomial: `(y^(x/2) − y^(−x/2)) / (y^(1/2) − y^(−1/2))`.
    pub fn quantum_integer(x: i64) -> Self {
        let sign = if x < 0 { -Rational::one() } else { Rational::one() };
        let a = x.unsigned_abs() as i64;
        let mut terms = BTreeMap::new();
        let mut e = a - 1;
        while e >= -(a - 1) && a > 0 {
            terms.insert(e as i32, sign.clone());
            e -= 2;
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs with exponents as `(2·e)`.
    pub fn half_terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.terms.iter().all(|(k, c)| self.terms.get(&-k) == Some(c))
    }

    /// Value at `y = 1`.
    pub fn at_one(&self) -> Rational {
        self.terms.values().cloned().fold(Rational::zero(), |a, b| a + b)
    }

    /// Value at `y = e^{πiħ}`.
    pub fn eval_hbar(&self, hbar: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&k, c)| Complex64::from_polar(c.to_f64(), std::f64::consts::PI * hbar * k as f64 / 2.0))
            .sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&k, v)| (k, v.clone() * c.clone())).collect() }
    }

    fn insert_add(terms: &mut BTreeMap<i32, Rational>, k: i32, c: Rational) {
        let entry = terms.entry(k).or_insert_with(Rational::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            terms.remove(&k);
        }
    }

    /// Parses the display form, e.g. `y^-1 + 10 + y` or `3/2 - y^(1/2)`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed Laurent polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = LaurentPoly::zero();
        let mut term = String::new();
        let mut pieces = Vec::new();
        for (i, ch) in compact.char_indices() {
            let prev = compact[..i].chars().last();
            if (ch == '+' || ch == '-') && i > 0 && prev != Some('^') && prev != Some('(') {
                pieces.push(std::mem::take(&mut term));
            }
            term.push(ch);
        }
        pieces.push(term);
        for p in pieces {
            let (sign, body) = match p.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), p.strip_prefix('+').unwrap_or(&p)),
            };
            let (coef, half) = match body.find('y') {
                None => (body.parse::<Rational>().map_err(|_| bad())?, 0),
                Some(pos) => {
                    let c = &body[..pos];
                    let coef = if c.is_empty() { Rational::one() } else { c.trim_end_matches('*').parse::<Rational>().map_err(|_| bad())? };
                    let e = &body[pos + 1..];
                    let exp = if e.is_empty() {
                        Rational::one()
                    } else {
                        let e = e.strip_prefix('^').ok_or_else(bad)?;
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        e.parse::<Rational>().map_err(|_| bad())?
                    };
                    let twice = (exp * Rational::from_integer(2)).to_i64().ok_or_else(bad)?;
                    (coef, twice as i32)
                }
            };
            Self::insert_add(&mut out.terms, half, sign * coef);
        }
        Ok(out)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (k, c) in rhs.terms {
            Self::insert_add(&mut self.terms, k, c);
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                Self::insert_add(&mut terms, a + b, x.clone() * y.clone());
            }
        }
        LaurentPoly { terms }
    }
}

fn exponent_text(half: i32) -> String {
    if half % 2 == 0 {
        format!("{}", half / 2)
    } else {
        format!("({}/2)", half)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            let negative = c.signum() < 0;
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag == Rational::one();
            if k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}")?;
            }
            if k == 2 {
                write!(f, "y")?;
            } else {
                write!(f, "y^{}", exponent_text(k))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_three_is_symmetric() {
        let q = LaurentPoly::quantum_integer(3);
        assert_eq!(q.to_string(), "y^-1 + 1 + y");
        assert!(q.is_palindromic());
        assert_eq!(LaurentPoly::quantum_integer(-3), -q);
        assert_eq!(LaurentPoly::quantum_integer(1), LaurentPoly::one());
        assert!(LaurentPoly::quantum_integer(0).is_zero());
    }

    #[test]
    fn even_quantum_integers_have_half_exponents() {
        let q = LaurentPoly::quantum_integer(2);
        assert!(!q.has_integral_exponents());
        assert_eq!(q.to_string(), "y^(-1/2) + y^(1/2)");
        assert!((q.clone() * q).has_integral_exponents());
    }

    #[test]
    fn evaluation_matches_sine_ratio() {
        for x in -5i64..=5 {
            let q = LaurentPoly::quantum_integer(x);
            for &h in &[0.3, 0.5, 1.0, 1.7] {
                let expect = (std::f64::consts::PI * h * x as f64 / 2.0).sin() / (std::f64::consts::PI * h / 2.0).sin();
                let got = q.eval_hbar(h);
                assert!((got.re - expect).abs() < 1e-12 && got.im.abs() < 1e-12);
            }
            assert_eq!(q.at_one(), Rational::from_integer(x));
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["y^-1 + 10 + y", "0", "-y^2 + 3/2", "2y^(-1/2) - y^(3/2)", "7"] {
            let p = LaurentPoly::parse(s).unwrap();
            assert_eq!(LaurentPoly::parse(&p.to_string()).unwrap(), p);
        }
        assert_eq!(LaurentPoly::parse("y^-1 + 10 + y").unwrap().to_string(), "y^-1 + 10 + y");
    }

    #[test]
    fn ring_laws_on_samples() {
        let a = LaurentPoly::parse("y^-1 + 2 - 3y").unwrap();
        let b = LaurentPoly::parse("1/2 + y^2").unwrap();
        let c = LaurentPoly::quantum_integer(4);
        assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
        assert!((a.clone() - a).is_zero());
    }
}
