//! Planar vectors over a [`Scalar`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2 { x: S::zero(), y: S::zero() }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2 { x: S::from_int(x), y: S::from_int(y) }
    }

    pub fn from_rational(v: &Vec2<Rational>) -> Self {
        Vec2 { x: S::from_rational(&v.x), y: S::from_rational(&v.y) }
    }

    /// `det(self, other)`.
    pub fn cross(&self, other: &Self) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec2 { x: self.x.clone() * k.clone(), y: self.y.clone() * k.clone() }
    }

    /// Counterclockwise rotation by a right angle.
    pub fn rot90(&self) -> Self {
        Vec2 { x: -self.y.clone(), y: self.x.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.x.approx_eq(&other.x) && self.y.approx_eq(&other.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Sign of `cross(self, other)` with tolerance scaled to the operands.
    pub fn orientation(&self, other: &Self) -> i8 {
        if S::EXACT {
            return self.cross(other).sign();
        }
        let c = self.cross(other).to_f64();
        let (ax, ay) = self.to_f64();
        let (bx, by) = other.to_f64();
        let scale = 1f64.max((ax.abs() + ay.abs()) * (bx.abs() + by.abs()));
        if c.abs() <= crate::scalar::float_tolerance() * scale {
            0
        } else if c > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Half-plane index for angular sorting: 0 for angles in [0, π), 1 for [π, 2π).
    pub fn half(&self) -> u8 {
        let ys = self.y.sign();
        if ys > 0 || (ys == 0 && self.x.sign() > 0) {
            0
        } else {
            1
        }
    }

    /// Compares polar angles in [0, 2π) counterclockwise from the positive x-axis.
    pub fn angle_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (ha, hb) = (self.half(), other.half());
        if ha != hb {
            return ha.cmp(&hb);
        }
        0.cmp(&self.orientation(other))
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl<'a, S: Scalar> Add<&'a Vec2<S>> for &'a Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: &Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x.clone() + o.x.clone(), y: self.y.clone() + o.y.clone() }
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl<'a, S: Scalar> Sub<&'a Vec2<S>> for &'a Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: &Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x.clone() - o.x.clone(), y: self.y.clone() - o.y.clone() }
    }
}

impl<S: Scalar> AddAssign for Vec2<S> {
    fn add_assign(&mut self, o: Vec2<S>) {
        *self = self.clone() + o;
    }
}

impl<S: Scalar> SubAssign for Vec2<S> {
    fn sub_assign(&mut self, o: Vec2<S>) {
        *self = self.clone() - o;
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Vec2<S>;
    fn neg(self) -> Vec2<S> {
        Vec2 { x: -self.x, y: -self.y }
    }
}

impl<S: Scalar> Mul<S> for Vec2<S> {
    type Output = Vec2<S>;
    fn mul(self, k: S) -> Vec2<S> {
        Vec2 { x: self.x * k.clone(), y: self.y * k }
    }
}

impl<S: fmt::Display> fmt::Display for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<S: fmt::Debug> fmt::Debug for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// Sum of a sequence of vectors.
pub fn sum<'a, S: Scalar>(vs: impl IntoIterator<Item = &'a Vec2<S>>) -> Vec2<S> {
    vs.into_iter().fold(Vec2::zero(), |acc, v| acc + v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qv(a: i64, b: i64, c: i64, d: i64) -> Vec2<Rational> {
        Vec2::new(Rational::new(a, b.max(1)), Rational::new(c, d.max(1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn cross_is_antisymmetric_and_bilinear(
            a in (-50i64..50, 1i64..20, -50i64..50, 1i64..20),
            b in (-50i64..50, 1i64..20, -50i64..50, 1i64..20),
            c in (-50i64..50, 1i64..20, -50i64..50, 1i64..20),
            k in (-9i64..9, 1i64..9),
        ) {
            let (u, v, w) = (qv(a.0, a.1, a.2, a.3), qv(b.0, b.1, b.2, b.3), qv(c.0, c.1, c.2, c.3));
            let k = Rational::new(k.0, k.1);
            prop_assert_eq!(u.cross(&v), -v.cross(&u));
            prop_assert_eq!((u.clone() + v.clone()).cross(&w), u.cross(&w) + v.cross(&w));
            prop_assert_eq!(u.scale(&k).cross(&v), k * u.cross(&v));
            prop_assert!(u.cross(&u).is_zero());
        }

        #[test]
        fn float_cross_is_antisymmetric(ax in -1e3f64..1e3, ay in -1e3f64..1e3, bx in -1e3f64..1e3, by in -1e3f64..1e3) {
            let u = Vec2::new(ax, ay);
            let v = Vec2::new(bx, by);
            prop_assert!(Scalar::approx_eq(&u.cross(&v), &-v.cross(&u)));
        }
    }

    #[test]
    fn angular_order() {
        let dirs: Vec<Vec2<Rational>> = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
            .iter()
            .map(|&(x, y)| Vec2::from_ints(x, y))
            .collect();
        for i in 0..dirs.len() {
            for j in 0..dirs.len() {
                assert_eq!(dirs[i].angle_cmp(&dirs[j]), i.cmp(&j));
            }
        }
    }

    #[test]
    fn rotation() {
        let v: Vec2<Rational> = Vec2::from_ints(2, 3);
        assert_eq!(v.rot90(), Vec2::from_ints(-3, 2));
        assert_eq!(v.cross(&v.rot90()), v.dot(&v));
    }
}
