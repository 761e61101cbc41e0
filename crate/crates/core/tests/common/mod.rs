#![allow(dead_code)]

use ptc_core::{AbstractCurve, DeltaSet, Edge, Rational, Vec2};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn random_length(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(1..=40), rng.gen_range(1..=12))
}

/// Currents on `legs` legs summing to zero, with small rational coordinates.
pub fn balanced_currents(legs: usize, rng: &mut ChaCha8Rng) -> Vec<Vec2<Rational>> {
    let mut v: Vec<Vec2<Rational>> = (0..legs.saturating_sub(1))
        .map(|_| Vec2::new(q(rng.gen_range(-9..=9), rng.gen_range(1..=4)), q(rng.gen_range(-9..=9), rng.gen_range(1..=4))))
        .collect();
    if legs > 0 {
        let s = ptc_core::vec2::sum(&v);
        v.push(-s);
    }
    v
}

/// A connected graph with at most 12 vertices and 4 legs per vertex.
pub fn random_graph(rng: &mut ChaCha8Rng, tree: bool) -> AbstractCurve<Rational> {
    let n = rng.gen_range(1..=12);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        seen.insert((u, v));
        edges.push(Edge { ends: [u, v], length: random_length(rng) });
    }
    if !tree && n > 2 {
        for _ in 0..rng.gen_range(0..=n) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && seen.insert((a.min(b), a.max(b))) {
                edges.push(Edge { ends: [a, b], length: random_length(rng) });
            }
        }
    }
    let mut legs = Vec::new();
    for v in 0..n {
        for _ in 0..rng.gen_range(0..=4) {
            legs.push(v);
        }
    }
    if legs.is_empty() {
        legs.push(0);
    }
    legs.shuffle(rng);
    edges.shuffle(rng);
    AbstractCurve::new(n, edges, legs).unwrap()
}

/// Integer Δ-set with coordinates in `-r..=r`, 3-independent.
pub fn random_int_delta(n: usize, r: i64, rng: &mut ChaCha8Rng) -> DeltaSet<Rational> {
    loop {
        let mut v: Vec<(i64, i64)> = (0..n - 1).map(|_| (rng.gen_range(-r..=r), rng.gen_range(-r..=r))).collect();
        let (sx, sy) = v.iter().fold((0, 0), |a, p| (a.0 + p.0, a.1 + p.1));
        v.push((-sx, -sy));
        if let Ok(d) = DeltaSet::from_ints(&v) {
            if d.is_three_independent() {
                return d;
            }
        }
    }
}

/// Δ-set with random real coordinates in `(-3, 3)`.
pub fn random_real_delta(n: usize, rng: &mut ChaCha8Rng) -> DeltaSet<f64> {
    let mut v: Vec<Vec2<f64>> = (0..n - 1).map(|_| Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
    let s = ptc_core::vec2::sum(&v);
    v.push(-s);
    DeltaSet::new(v).unwrap()
}

/// Δ-set with random rational coordinates of denominator up to 7.
pub fn random_rational_delta(n: usize, rng: &mut ChaCha8Rng) -> DeltaSet<Rational> {
    loop {
        let mut v: Vec<Vec2<Rational>> = (0..n - 1)
            .map(|_| Vec2::new(q(rng.gen_range(-20..=20), rng.gen_range(1..=7)), q(rng.gen_range(-20..=20), rng.gen_range(1..=7))))
            .collect();
        let s = ptc_core::vec2::sum(&v);
        v.push(-s);
        if let Ok(d) = DeltaSet::new(v) {
            if d.is_three_independent() {
                return d;
            }
        }
    }
}

pub fn to_float(v: &[Vec2<Rational>]) -> Vec<Vec2<f64>> {
    v.iter().map(|p| Vec2::new(p.x.to_f64(), p.y.to_f64())).collect()
}
