//! Quantum numbers and the quantum-torus vertex weights of rigid types.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::marked::MarkedType;
use crate::scalar::{float_tolerance, Rational, Scalar};

/// How quantum numbers are evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightMode {
    /// Real `ħ`; `ħ = 0` gives `[x]₀ = x`, exactly when the input is exact.
    Hbar(f64),
    /// Exact Laurent polynomials in `y = e^{πiħ}`; needs integral arguments.
    Laurent,
}

impl WeightMode {
    pub fn check(&self) -> Result<()> {
        if let WeightMode::Hbar(h) = *self {
            if !h.is_finite() {
                return Err(Error::Parse(format!("hbar {h} is not finite")));
            }
            if h != 0.0 && (h / 2.0).fract() == 0.0 {
                return Err(Error::PoleAtHbar(h));
            }
        }
        Ok(())
    }

    pub fn one(&self) -> Weight {
        match self {
            WeightMode::Hbar(h) if *h == 0.0 => Weight::Exact(Rational::one()),
            WeightMode::Hbar(_) => Weight::Real(1.0),
            WeightMode::Laurent => Weight::Laurent(LaurentPoly::one()),
        }
    }

    pub fn zero(&self) -> Weight {
        match self {
            WeightMode::Hbar(h) if *h == 0.0 => Weight::Exact(Rational::zero()),
            WeightMode::Hbar(_) => Weight::Real(0.0),
            WeightMode::Laurent => Weight::Laurent(LaurentPoly::zero()),
        }
    }
}

/// A coefficient: exact rational, real number, or Laurent polynomial.
#[derive(Clone, PartialEq)]
pub enum Weight {
    Exact(Rational),
    Real(f64),
    Laurent(LaurentPoly),
}

impl Weight {
    pub fn from_int(k: i64) -> Weight {
        Weight::Exact(Rational::from_integer(k))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Exact(r) => r.is_zero(),
            Weight::Real(x) => x.abs() <= float_tolerance(),
            Weight::Laurent(p) => p.is_zero(),
        }
    }

    /// Real value at `ħ`; Laurent weights are evaluated at `y = e^{πiħ}`.
    pub fn to_f64_at(&self, hbar: f64) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64(),
            Weight::Real(x) => *x,
            Weight::Laurent(p) => p.eval_hbar(hbar).re,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_at(0.0)
    }

    /// Magnitude used for relative tolerances.
    pub fn magnitude(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64().abs(),
            Weight::Real(x) => x.abs(),
            Weight::Laurent(p) => p.half_terms().map(|(_, c)| c.to_f64().abs()).sum(),
        }
    }

    /// Equality, exact for exact weights and relative within `tol` otherwise.
    pub fn approx_eq(&self, other: &Weight, tol: f64) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a == b,
            (Weight::Laurent(a), Weight::Laurent(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
            }
        }
    }

    pub fn scale_int(&self, k: i64) -> Weight {
        self.clone() * Weight::from_int(k)
    }

    /// Exact division by a positive integer.
    pub fn div_int(&self, k: u64) -> Weight {
        let inv = Rational::from_big(num_rational::BigRational::new(1.into(), k.into()));
        match self {
            Weight::Exact(r) => Weight::Exact(r.clone() * inv),
            Weight::Real(x) => Weight::Real(x / k as f64),
            Weight::Laurent(p) => Weight::Laurent(p.scale(&inv)),
        }
    }

    pub fn sign(&self) -> i8 {
        match self {
            Weight::Exact(r) => r.signum(),
            Weight::Real(x) => x.sign(),
            Weight::Laurent(p) => p.at_one().signum(),
        }
    }
}

fn combine(a: Weight, b: Weight, exact: fn(Rational, Rational) -> Rational, real: fn(f64, f64) -> f64, poly: fn(LaurentPoly, LaurentPoly) -> LaurentPoly) -> Weight {
    match (a, b) {
        (Weight::Exact(x), Weight::Exact(y)) => Weight::Exact(exact(x, y)),
        (Weight::Laurent(x), Weight::Laurent(y)) => Weight::Laurent(poly(x, y)),
        (Weight::Laurent(x), Weight::Exact(y)) => Weight::Laurent(poly(x, LaurentPoly::constant(y))),
        (Weight::Exact(x), Weight::Laurent(y)) => Weight::Laurent(poly(LaurentPoly::constant(x), y)),
        (Weight::Laurent(_), Weight::Real(_)) | (Weight::Real(_), Weight::Laurent(_)) => {
            panic!("cannot combine a Laurent weight with a real one")
        }
        (x, y) => Weight::Real(real(x.to_f64(), y.to_f64())),
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        combine(self, rhs, |a, b| a + b, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        combine(self, rhs, |a, b| a - b, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        combine(self, rhs, |a, b| a * b, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        match self {
            Weight::Exact(r) => Weight::Exact(-r),
            Weight::Real(x) => Weight::Real(-x),
            Weight::Laurent(p) => Weight::Laurent(-p),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) => write!(f, "{r}"),
            Weight::Real(x) => write!(f, "{x}"),
            Weight::Laurent(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[x]_ħ = sin(πħx/2) / sin(πħ/2)`.
pub fn quantum_number<S: Scalar>(x: &S, mode: WeightMode) -> Result<Weight> {
    mode.check()?;
    match mode {
        WeightMode::Hbar(h) if h == 0.0 => Ok(match x.to_rational() {
            Some(r) if S::EXACT => Weight::Exact(r),
            _ => Weight::Real(x.to_f64()),
        }),
        WeightMode::Hbar(h) => {
            let v = (PI * h * x.to_f64() / 2.0).sin() / (PI * h / 2.0).sin();
            Ok(Weight::Real(v))
        }
        WeightMode::Laurent => {
            let k = x.to_integer().ok_or_else(|| Error::NonIntegralCross(x.to_string()))?;
            Ok(Weight::Laurent(LaurentPoly::quantum_integer(k)))
        }
    }
}

/// Vertex cross products `det(σ(in1), σ(in2))` of a type.
pub fn vertex_crosses<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>) -> Vec<S> {
    t.vertices().iter().map(|&[a, b]| t.edge_slope(a, delta).cross(&t.edge_slope(b, delta))).collect()
}

/// `Π_v [det(σ(in1), σ(in2))]_ħ` in the reference orientation.
pub fn lie_weight<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, mode: WeightMode) -> Result<Weight> {
    let mut w = mode.one();
    for c in vertex_crosses(t, delta) {
        w = w * quantum_number(&c, mode)?;
    }
    Ok(w)
}

/// `Π_v [|det|]_ħ`: the weight in the blackboard orientation.
pub fn blackboard_weight<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, mode: WeightMode) -> Result<Weight> {
    let mut w = mode.one();
    for c in vertex_crosses(t, delta) {
        w = w * quantum_number(&c.abs(), mode)?;
    }
    Ok(w)
}

/// Leading `ε^{n−2}` coefficient of the multiplicity after deforming
/// `ξ_s → (1+ε)ξ_s` and `ξ_t → ξ_t − εξ_s`.
pub fn epsilon_top_coefficient<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, s: usize, tt: usize) -> S {
    let xs = delta.get(s).clone();
    t.vertices().iter().fold(S::one(), |acc, &[a, b]| {
        // Flow slope −Σ_T ξ gains −ε·([s∈T] − [t∈T])·ξ_s.
        let shift = |mask: u32| -> i64 { -((mask >> s & 1) as i64 - (mask >> tt & 1) as i64) };
        let (sa, sb) = (t.edge_slope(a, delta), t.edge_slope(b, delta));
        let (ka, kb) = (shift(a), shift(b));
        let lin = S::from_int(kb) * sa.cross(&xs) + S::from_int(ka) * xs.cross(&sb);
        acc * lin
    })
}

/// The deformed set at a given `ε`.
pub fn deformed_delta<S: Scalar>(delta: &DeltaSet<S>, s: usize, t: usize, eps: &S) -> Result<DeltaSet<S>> {
    let mut v = delta.vectors().to_vec();
    let xs = v[s].clone();
    v[s] = xs.scale(&(S::one() + eps.clone()));
    v[t] = &v[t] - &xs.scale(eps);
    DeltaSet::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{multiplicity, TypeCatalog};
    use crate::vec2::Vec2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quantum_number_basics() {
        for &h in &[0.0, 0.3, 0.5, 1.0, 1.9, -0.7] {
            let one = quantum_number(&1.0f64, WeightMode::Hbar(h)).unwrap();
            assert!((one.to_f64() - 1.0).abs() < 1e-12);
            let a = quantum_number(&2.7f64, WeightMode::Hbar(h)).unwrap().to_f64();
            let b = quantum_number(&-2.7f64, WeightMode::Hbar(h)).unwrap().to_f64();
            assert!((a + b).abs() < 1e-12);
        }
        let x = Rational::new(7, 3);
        assert_eq!(quantum_number(&x, WeightMode::Hbar(0.0)).unwrap(), Weight::Exact(x));
        assert!(matches!(quantum_number(&1.0f64, WeightMode::Hbar(2.0)), Err(Error::PoleAtHbar(_))));
        assert!(matches!(quantum_number(&1.0f64, WeightMode::Hbar(-4.0)), Err(Error::PoleAtHbar(_))));
        let three = quantum_number(&Rational::from_integer(3), WeightMode::Laurent).unwrap();
        assert_eq!(three.to_string(), "y^-1 + 1 + y");
        assert!(matches!(
            quantum_number(&Rational::new(1, 2), WeightMode::Laurent),
            Err(Error::NonIntegralCross(_))
        ));
    }

    #[test]
    fn small_hbar_approaches_identity() {
        let v = quantum_number(&3.3f64, WeightMode::Hbar(1e-6)).unwrap().to_f64();
        assert!((v - 3.3).abs() < 1e-9);
    }

    #[test]
    fn plucker_relation_under_classical_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let v: Vec<Vec2<f64>> = (0..4).map(|_| Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
            let p = |i: usize, j: usize| v[i].cross(&v[j]);
            let r = p(0, 1) * p(2, 3) - p(0, 2) * p(1, 3) + p(1, 2) * p(0, 3);
            assert!(r.abs() < 1e-9);
        }
    }

    #[test]
    fn jacobi_identity_of_structure_constants() {
        // [[La,Lb],Lc] + cyclic = 0 with [La,Lb] = [a×b] L_{a+b}.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let v: Vec<Vec2<f64>> = (0..3).map(|_| Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
            for _ in 0..10 {
                let h: f64 = rng.gen_range(-1.9..1.9);
                let q = |x: f64| quantum_number(&x, WeightMode::Hbar(h)).unwrap().to_f64();
                let term = |a: &Vec2<f64>, b: &Vec2<f64>, c: &Vec2<f64>| q(a.cross(b)) * q((a + b).cross(c));
                let s = term(&v[0], &v[1], &v[2]) + term(&v[1], &v[2], &v[0]) + term(&v[2], &v[0], &v[1]);
                assert!(s.abs() < 1e-9, "{s}");
            }
        }
    }

    #[test]
    fn weights_reduce_to_multiplicity_and_flip_sign() {
        let d = DeltaSet::<Rational>::from_ints(&[(-1, 0), (0, -1), (2, -1), (-1, 2)]).unwrap();
        let cat = TypeCatalog::get(4).unwrap();
        for i in 0..cat.len() {
            let t = cat.type_at(i);
            let w = lie_weight(&t, &d, WeightMode::Hbar(0.0)).unwrap();
            assert_eq!(w, Weight::Exact(multiplicity(&t, &d)));
            let l = lie_weight(&t, &d, WeightMode::Laurent).unwrap();
            let Weight::Laurent(p) = &l else { panic!() };
            assert_eq!(p.at_one(), multiplicity(&t, &d));
            assert!(p.is_palindromic());
            let at1 = lie_weight(&t, &d, WeightMode::Hbar(1.0)).unwrap().to_f64();
            assert!((p.eval_hbar(1.0).re - at1).abs() < 1e-12);
            // Reversing one vertex's cyclic order negates the weight.
            let mut tree = t.to_tree();
            let v = tree.unmarked_vertices()[0];
            tree.flip(v);
            let (same, sign) = MarkedType::from_tree(&tree).unwrap();
            assert_eq!(same, t);
            assert_eq!(sign, -1);
        }
    }

    #[test]
    fn line_and_tripod_weights() {
        let d = DeltaSet::<f64>::new(vec![Vec2::new(0.3, 1.2), Vec2::new(-0.3, -1.2)]).unwrap();
        let t = TypeCatalog::get(2).unwrap().type_at(0);
        assert_eq!(lie_weight(&t, &d, WeightMode::Hbar(0.4)).unwrap(), Weight::Real(1.0));
        let d3 = DeltaSet::<f64>::new(vec![Vec2::new(1.0, 0.2), Vec2::new(-0.5, 1.5), Vec2::new(-0.5, -1.7)]).unwrap();
        let det = d3.get(0).cross(d3.get(1));
        for t in crate::moduli::enumerate_rigid_types(3).unwrap() {
            let w = blackboard_weight(&t, &d3, WeightMode::Hbar(0.5)).unwrap().to_f64();
            let expect = quantum_number(&det.abs(), WeightMode::Hbar(0.5)).unwrap().to_f64();
            assert!((w - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_coefficient_matches_polynomial_fit() {
        let d = DeltaSet::<Rational>::from_ints(&[(-1, 0), (0, -1), (2, -1), (-1, 2)]).unwrap();
        let cat = TypeCatalog::get(4).unwrap();
        for i in 0..cat.len() {
            let t = cat.type_at(i);
            // Degree-2 polynomial in ε: leading coefficient by second differences.
            let f = |e: i64| multiplicity(&t, &deformed_delta(&d, 0, 2, &Rational::from_integer(e)).unwrap());
            let second = f(2) - Rational::from_integer(2) * f(1) + f(0);
            assert_eq!(second / Rational::from_integer(2), epsilon_top_coefficient(&t, &d, 0, 2));
        }
    }
}
