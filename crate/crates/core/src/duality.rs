//! Dual polygons, dual subdivisions, degree and intersection numbers.
//!
//! The dual potential jumps by `rot90(ξ)` when an edge of slope `ξ` is
//! crossed from its right side to its left. The potential of each sector
//! around an overlay vertex is found by casting a ray to infinity, where the
//! potential is read off the outer polygon.

use std::cmp::Ordering;

use crate::curve::{AbstractCurve, Edge, PlaneCurve};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::vec2::Vec2;

/// A convex polygon with counterclockwise vertices. Segments and points are
/// allowed as degenerate polygons.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon<S> {
    pub vertices: Vec<Vec2<S>>,
}

impl<S: Scalar> Polygon<S> {
    /// Walks the edge vectors from `start`; the edges must close up.
    pub fn from_edges(start: Vec2<S>, edges: &[Vec2<S>]) -> Self {
        let mut vertices = Vec::with_capacity(edges.len());
        let mut p = start;
        for e in edges {
            vertices.push(p.clone());
            p = &p + e;
        }
        Polygon { vertices }
    }

    pub fn area(&self) -> S {
        let k = self.vertices.len();
        let mut twice = S::zero();
        for i in 0..k {
            twice = twice + self.vertices[i].cross(&self.vertices[(i + 1) % k]);
        }
        twice / S::from_int(2)
    }

    /// Nonzero edge vectors in counterclockwise order.
    pub fn edges(&self) -> Vec<Vec2<S>> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| &self.vertices[(i + 1) % k] - &self.vertices[i])
            .filter(|e| !e.is_zero())
            .collect()
    }

    /// Edge vectors with consecutive parallel edges merged.
    pub fn primitive_edges(&self) -> Vec<Vec2<S>> {
        let mut out: Vec<Vec2<S>> = Vec::new();
        for e in self.edges() {
            match out.last_mut() {
                Some(last) if last.cross(&e).is_zero() && last.dot(&e).is_positive() => *last = &*last + &e,
                _ => out.push(e),
            }
        }
        if out.len() > 1 {
            let (first, last) = (&out[0], &out[out.len() - 1]);
            if first.cross(last).is_zero() && first.dot(last).is_positive() {
                let merged = first + last;
                out[0] = merged;
                out.pop();
            }
        }
        out
    }

    pub fn is_convex(&self) -> bool {
        let e = self.edges();
        let k = e.len();
        (0..k).all(|i| !e[i].cross(&e[(i + 1) % k]).is_negative())
    }

    /// Whether the interiors are disjoint, by a separating edge line.
    pub fn interiors_disjoint(&self, other: &Polygon<S>) -> bool {
        if self.area().is_zero() || other.area().is_zero() {
            return true;
        }
        let separated = |a: &Polygon<S>, b: &Polygon<S>| {
            let k = a.vertices.len();
            (0..k).any(|i| {
                let p = &a.vertices[i];
                let e = &a.vertices[(i + 1) % k] - p;
                !e.is_zero() && b.vertices.iter().all(|q| !e.cross(&(q - p)).is_positive())
            })
        };
        separated(self, other) || separated(other, self)
    }

    pub fn translate(&self, by: &Vec2<S>) -> Self {
        Polygon { vertices: self.vertices.iter().map(|p| p + by).collect() }
    }
}

/// A bounded edge or a leg of a plane curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentId {
    Edge(usize),
    Leg(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OverlayVertex<S> {
    Vertex(usize),
    /// A transversal self-intersection, promoted to a vertex.
    Node { point: Vec2<S>, segments: Vec<SegmentId> },
}

#[derive(Clone, Debug)]
pub struct DualSubdivision<S> {
    pub outer: Polygon<S>,
    pub cells: Vec<(OverlayVertex<S>, Polygon<S>)>,
}

impl<S: Scalar> DualSubdivision<S> {
    pub fn cell_area_sum(&self) -> S {
        self.cells.iter().fold(S::zero(), |acc, (_, p)| acc + p.area())
    }
}

struct Seg<S> {
    id: SegmentId,
    p: Vec2<S>,
    u: Vec2<S>,
    tmax: Option<S>,
    ends: [Option<usize>; 2],
}

enum Meet<S> {
    None,
    /// Interior points of both.
    Cross(Vec2<S>),
    /// A single common point that is an endpoint of one of them.
    Touch(Vec2<S>),
    Overlap,
}

fn within<S: Scalar>(t: &S, tmax: &Option<S>) -> bool {
    !t.is_negative() && tmax.as_ref().map_or(true, |m| !(t.clone() - m.clone()).is_positive())
}

fn at_end<S: Scalar>(t: &S, tmax: &Option<S>) -> bool {
    t.is_zero() || tmax.as_ref().is_some_and(|m| (t.clone() - m.clone()).is_zero())
}

fn meet<S: Scalar>(a: &Seg<S>, b: &Seg<S>) -> Meet<S> {
    let d = &b.p - &a.p;
    let den = a.u.cross(&b.u);
    if den.is_zero() {
        if !d.cross(&a.u).is_zero() {
            return Meet::None;
        }
        // Collinear: compare parameter intervals along `a`.
        let norm = a.u.dot(&a.u);
        let t0 = d.dot(&a.u) / norm.clone();
        let rate = b.u.dot(&a.u) / norm;
        let (lo_b, hi_b) = match &b.tmax {
            Some(m) => {
                let t1 = t0.clone() + rate * m.clone();
                if t1 < t0 {
                    (Some(t1), Some(t0))
                } else {
                    (Some(t0), Some(t1))
                }
            }
            None if rate.is_positive() => (Some(t0), None),
            None => (None, Some(t0)),
        };
        let lo = match lo_b {
            Some(l) if l.is_positive() => l,
            _ => S::zero(),
        };
        let hi = match (&a.tmax, hi_b) {
            (Some(x), Some(y)) => Some(if *x < y { x.clone() } else { y }),
            (Some(x), None) => Some(x.clone()),
            (None, y) => y,
        };
        return match hi {
            None => Meet::Overlap,
            Some(h) => {
                let gap = h - lo.clone();
                if gap.is_zero() {
                    Meet::Touch(&a.p + &a.u.scale(&lo))
                } else if gap.is_negative() {
                    Meet::None
                } else {
                    Meet::Overlap
                }
            }
        };
    }
    let ta = d.cross(&b.u) / den.clone();
    let tb = d.cross(&a.u) / den;
    if !within(&ta, &a.tmax) || !within(&tb, &b.tmax) {
        return Meet::None;
    }
    let point = &a.p + &a.u.scale(&ta);
    if at_end(&ta, &a.tmax) || at_end(&tb, &b.tmax) {
        Meet::Touch(point)
    } else {
        Meet::Cross(point)
    }
}

fn segments<S: Scalar>(c: &PlaneCurve<S>) -> Vec<Seg<S>> {
    let mut out = Vec::new();
    for (k, e) in c.base.edges().iter().enumerate() {
        out.push(Seg {
            id: SegmentId::Edge(k),
            p: c.positions[e.ends[0]].clone(),
            u: c.slopes[k].clone(),
            tmax: Some(e.length.clone()),
            ends: [Some(e.ends[0]), Some(e.ends[1])],
        });
    }
    for (l, &v) in c.base.legs().iter().enumerate() {
        if c.leg_slopes[l].is_zero() {
            continue;
        }
        out.push(Seg { id: SegmentId::Leg(l), p: c.positions[v].clone(), u: c.leg_slopes[l].clone(), tmax: None, ends: [Some(v), None] });
    }
    out
}

fn shared_vertex<S>(a: &Seg<S>, b: &Seg<S>) -> Option<usize> {
    a.ends.iter().flatten().find(|v| b.ends.contains(&Some(**v))).copied()
}

/// Sorts by polar angle; ties keep their order.
fn sort_by_angle<T, S: Scalar>(items: &mut [T], dir: impl Fn(&T) -> &Vec2<S>) {
    items.sort_by(|a, b| dir(a).angle_cmp(dir(b)));
}

/// Leg slopes in counterclockwise order at infinity, with potentials
/// `P_j = Σ_{i<j} rot90(ξ_i)` of the sector just before leg `j`.
struct AtInfinity<S> {
    dirs: Vec<Vec2<S>>,
    potentials: Vec<Vec2<S>>,
}

impl<S: Scalar> AtInfinity<S> {
    fn new(c: &PlaneCurve<S>) -> Self {
        let mut legs: Vec<(Vec2<S>, Vec2<S>)> =
            c.base.legs().iter().zip(&c.leg_slopes).filter(|(_, u)| !u.is_zero()).map(|(&v, u)| (u.clone(), c.positions[v].clone())).collect();
        legs.sort_by(|a, b| {
            a.0.angle_cmp(&b.0).then_with(|| {
                let (oa, ob) = (a.0.cross(&a.1), a.0.cross(&b.1));
                oa.partial_cmp(&ob).unwrap_or(Ordering::Equal)
            })
        });
        let mut potentials = Vec::with_capacity(legs.len());
        let mut acc = Vec2::zero();
        for (u, _) in &legs {
            potentials.push(acc.clone());
            acc = acc + u.rot90();
        }
        AtInfinity { dirs: legs.into_iter().map(|l| l.0).collect(), potentials }
    }

    fn polygon(&self) -> Polygon<S> {
        Polygon { vertices: self.potentials.clone() }
    }

    /// Potential far out in direction `d`, which must not be parallel to a leg.
    fn potential(&self, d: &Vec2<S>) -> Vec2<S> {
        if self.dirs.is_empty() {
            return Vec2::zero();
        }
        let j = self.dirs.iter().filter(|u| u.angle_cmp(d) == Ordering::Less).count();
        self.potentials[j % self.dirs.len()].clone()
    }
}

fn probe_direction<S: Scalar>(k: i64) -> Vec2<S> {
    let a = Rational::new(1009 + 37 * k, 1);
    let b = Rational::new(313 + 211 * k * k, 1 + 3 * k);
    let (x, y) = match k % 4 {
        0 => (a, b),
        1 => (-b, a),
        2 => (-a, -b),
        _ => (b, -a),
    };
    Vec2::new(S::from_rational(&x), S::from_rational(&y))
}

const PROBES: i64 = 400;

/// Cell of the overlay vertex at `x` with outgoing slopes `dirs`; the
/// segments in `through` pass through `x`.
fn cell<S: Scalar>(segs: &[Seg<S>], inf: &AtInfinity<S>, x: &Vec2<S>, through: &[SegmentId], dirs: &[Vec2<S>]) -> Result<Polygon<S>> {
    let mut dirs = dirs.to_vec();
    sort_by_angle(&mut dirs, |u| u);
    'probe: for k in 0..PROBES {
        let d = probe_direction::<S>(k);
        if segs.iter().any(|s| s.u.cross(&d).is_zero()) {
            continue;
        }
        let ray = Seg { id: SegmentId::Leg(usize::MAX), p: x.clone(), u: d.clone(), tmax: None, ends: [None, None] };
        let mut phi = inf.potential(&d);
        for s in segs.iter().filter(|s| !through.contains(&s.id)) {
            match meet(&ray, s) {
                Meet::None => {}
                Meet::Cross(_) => {
                    let jump = s.u.rot90();
                    phi = if s.u.cross(&d).is_positive() { phi - jump } else { phi + jump };
                }
                Meet::Touch(_) | Meet::Overlap => continue 'probe,
            }
        }
        if dirs.is_empty() {
            return Ok(Polygon { vertices: vec![phi] });
        }
        let k = dirs.len();
        let c = dirs.iter().filter(|u| u.angle_cmp(&d) == Ordering::Less).count();
        let sector = (c + k - 1) % k;
        let mut edges = Vec::with_capacity(k);
        for j in 1..=k {
            edges.push(dirs[(sector + j) % k].rot90());
        }
        // `edges` walks sectors `sector, sector+1, …`; rotate to start at sector 0.
        let poly = Polygon::from_edges(phi, &edges);
        let shift = (k - sector) % k;
        let mut vertices = poly.vertices;
        vertices.rotate_left(shift);
        return Ok(Polygon { vertices });
    }
    Err(Error::DegenerateImmersion("no generic probe direction found".into()))
}

/// Overlay vertices: the curve's vertices and its transversal crossings.
fn overlay<S: Scalar>(c: &PlaneCurve<S>, segs: &[Seg<S>]) -> Result<Vec<(Vec2<S>, Vec<SegmentId>)>> {
    if let Some(s) = segs.iter().find(|s| s.u.is_zero()) {
        return Err(Error::DegenerateImmersion(format!("{:?} has zero slope", s.id)));
    }
    let mut nodes: Vec<(Vec2<S>, Vec<SegmentId>)> = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = (&segs[i], &segs[j]);
            let shared = shared_vertex(a, b);
            match (meet(a, b), shared) {
                (Meet::None, _) => {}
                (Meet::Touch(p), Some(v)) if p.approx_eq(&c.positions[v]) => {}
                (Meet::Cross(p), None) => match nodes.iter_mut().find(|(q, _)| q.approx_eq(&p)) {
                    Some((_, ids)) => {
                        for id in [a.id, b.id] {
                            if !ids.contains(&id) {
                                ids.push(id);
                            }
                        }
                    }
                    None => nodes.push((p, vec![a.id, b.id])),
                },
                (Meet::Overlap, _) => {
                    return Err(Error::DegenerateImmersion(format!("{:?} and {:?} overlap", a.id, b.id)))
                }
                _ => {
                    return Err(Error::DegenerateImmersion(format!(
                        "{:?} and {:?} meet at a vertex that is not a common endpoint",
                        a.id, b.id
                    )))
                }
            }
        }
    }
    Ok(nodes)
}

pub fn dual_subdivision<S: Scalar>(c: &PlaneCurve<S>) -> Result<DualSubdivision<S>> {
    let segs = segments(c);
    let nodes = overlay(c, &segs)?;
    let inf = AtInfinity::new(c);
    let mut cells = Vec::with_capacity(c.base.num_vertices() + nodes.len());
    let inc = c.base.incidence();
    for v in 0..c.base.num_vertices() {
        let mut through = Vec::new();
        let mut dirs = Vec::new();
        for &k in &inc[v] {
            through.push(SegmentId::Edge(k));
            dirs.push(c.outgoing_slope(k, v));
        }
        for l in c.base.legs_at(v).filter(|&l| !c.leg_slopes[l].is_zero()) {
            through.push(SegmentId::Leg(l));
            dirs.push(c.leg_slopes[l].clone());
        }
        cells.push((OverlayVertex::Vertex(v), cell(&segs, &inf, &c.positions[v], &through, &dirs)?));
    }
    for (point, ids) in nodes {
        let dirs: Vec<Vec2<S>> = ids
            .iter()
            .flat_map(|id| {
                let u = segs.iter().find(|s| s.id == *id).expect("segment exists").u.clone();
                [u.clone(), -u]
            })
            .collect();
        let poly = cell(&segs, &inf, &point, &ids, &dirs)?;
        cells.push((OverlayVertex::Node { point, segments: ids }, poly));
    }
    Ok(DualSubdivision { outer: inf.polygon(), cells })
}

/// Outer dual polygon alone; it depends only on the legs.
pub fn dual_polygon<S: Scalar>(c: &PlaneCurve<S>) -> Polygon<S> {
    AtInfinity::new(c).polygon()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Degree<S> {
    /// `deg² = 2·Area`.
    pub squared: S,
    /// The degree itself when `2·Area` is a rational square (exact mode).
    pub exact: Option<S>,
    pub value: f64,
}

pub fn degree_of_polygon<S: Scalar>(p: &Polygon<S>) -> Degree<S> {
    let squared = p.area() * S::from_int(2);
    let exact = if S::EXACT {
        squared.to_rational().and_then(|r| r.sqrt_exact()).map(|r| S::from_rational(&r))
    } else {
        None
    };
    let value = squared.to_f64().max(0.0).sqrt();
    Degree { squared, exact, value }
}

pub fn degree<S: Scalar>(c: &PlaneCurve<S>) -> Result<Degree<S>> {
    let sub = dual_subdivision(c)?;
    Ok(degree_of_polygon(&sub.outer))
}

pub fn minkowski_sum<S: Scalar>(a: &Polygon<S>, b: &Polygon<S>) -> Polygon<S> {
    let mut edges = a.edges();
    edges.extend(b.edges());
    sort_by_angle(&mut edges, |e| e);
    let lowest = |p: &Polygon<S>| {
        p.vertices
            .iter()
            .min_by(|x, y| x.y.partial_cmp(&y.y).unwrap_or(Ordering::Equal).then(x.x.partial_cmp(&y.x).unwrap_or(Ordering::Equal)))
            .cloned()
            .unwrap_or_else(Vec2::zero)
    };
    Polygon::from_edges(&lowest(a) + &lowest(b), &edges)
}

/// `(Area(A⊞B) − Area(A) − Area(B))/2`.
pub fn mixed_area<S: Scalar>(a: &Polygon<S>, b: &Polygon<S>) -> S {
    (minkowski_sum(a, b).area() - a.area() - b.area()) / S::from_int(2)
}

/// Whether `a = λ·b + v` for some `λ > 0`.
pub fn homothetic<S: Scalar>(a: &Polygon<S>, b: &Polygon<S>) -> bool {
    let (ea, eb) = (a.primitive_edges(), b.primitive_edges());
    if ea.len() != eb.len() {
        return false;
    }
    if ea.is_empty() {
        return true;
    }
    let Some(start) = eb.iter().position(|e| e.cross(&ea[0]).is_zero() && e.dot(&ea[0]).is_positive()) else {
        return false;
    };
    let k = ea.len();
    let norm0 = eb[start].dot(&eb[start]);
    let ratio = ea[0].dot(&eb[start]) / norm0;
    (0..k).all(|j| {
        let (x, y) = (&ea[j], &eb[(start + j) % k]);
        x.approx_eq(&y.scale(&ratio))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPoint<S> {
    pub point: Vec2<S>,
    pub first: SegmentId,
    pub second: SegmentId,
    /// `|det(ξ(e₁), ξ(e₂))|`.
    pub multiplicity: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BezoutReport {
    pub total_is_twice_mixed_area: bool,
    pub inequality_holds: bool,
    pub equality: bool,
    pub homothetic: bool,
}

impl BezoutReport {
    pub fn ok(&self) -> bool {
        self.total_is_twice_mixed_area && self.inequality_holds && self.equality == self.homothetic
    }
}

#[derive(Clone, Debug)]
pub struct Intersection<S> {
    pub points: Vec<IntersectionPoint<S>>,
    pub total: S,
    pub mixed_area: S,
    pub degrees: [Degree<S>; 2],
    pub report: BezoutReport,
}

pub fn intersect<S: Scalar>(c1: &PlaneCurve<S>, c2: &PlaneCurve<S>) -> Result<Intersection<S>> {
    let (s1, s2) = (segments(c1), segments(c2));
    let mut points = Vec::new();
    let mut total = S::zero();
    for a in &s1 {
        for b in &s2 {
            match meet(a, b) {
                Meet::None => {}
                Meet::Cross(point) => {
                    let multiplicity = a.u.cross(&b.u).abs();
                    total = total + multiplicity.clone();
                    points.push(IntersectionPoint { point, first: a.id, second: b.id, multiplicity });
                }
                Meet::Touch(p) => {
                    return Err(Error::NotGeneralPosition(format!("{:?} and {:?} meet at the vertex {p}", a.id, b.id)))
                }
                Meet::Overlap => {
                    return Err(Error::NotGeneralPosition(format!("{:?} and {:?} overlap", a.id, b.id)))
                }
            }
        }
    }
    let (p1, p2) = (dual_polygon(c1), dual_polygon(c2));
    let mixed = mixed_area(&p1, &p2);
    let degrees = [degree_of_polygon(&p1), degree_of_polygon(&p2)];
    // I ≥ deg₁·deg₂ ⇔ I² ≥ deg₁²·deg₂² since both sides are nonnegative.
    let lhs = total.clone() * total.clone();
    let rhs = degrees[0].squared.clone() * degrees[1].squared.clone();
    let equality = lhs.approx_eq(&rhs);
    let report = BezoutReport {
        total_is_twice_mixed_area: total.approx_eq(&(mixed.clone() * S::from_int(2))),
        inequality_holds: equality || lhs > rhs,
        equality,
        homothetic: homothetic(&p1, &p2),
    };
    Ok(Intersection { points, total, mixed_area: mixed, degrees, report })
}

/// The curve `C₁ ⊔ C₂`; vertices and legs of `c2` follow those of `c1`.
pub fn disjoint_union<S: Scalar>(c1: &PlaneCurve<S>, c2: &PlaneCurve<S>) -> Result<PlaneCurve<S>> {
    let off = c1.base.num_vertices();
    let mut edges: Vec<Edge<S>> = c1.base.edges().to_vec();
    edges.extend(c2.base.edges().iter().map(|e| Edge { ends: [e.ends[0] + off, e.ends[1] + off], length: e.length.clone() }));
    let mut legs = c1.base.legs().to_vec();
    legs.extend(c2.base.legs().iter().map(|v| v + off));
    let base = AbstractCurve::new(off + c2.base.num_vertices(), edges, legs)?;
    let cat = |a: &[Vec2<S>], b: &[Vec2<S>]| a.iter().chain(b).cloned().collect::<Vec<_>>();
    PlaneCurve::new(base, cat(&c1.positions, &c2.positions), cat(&c1.slopes, &c2.slopes), cat(&c1.leg_slopes, &c2.leg_slopes))
}

/// The same image traced with slopes multiplied by `k > 0`.
pub fn scale_slopes<S: Scalar>(c: &PlaneCurve<S>, k: &S) -> PlaneCurve<S> {
    let inv = S::one() / k.clone();
    PlaneCurve {
        base: c.base.map_lengths(|l| l.clone() * inv.clone()),
        positions: c.positions.clone(),
        slopes: c.slopes.iter().map(|u| u.scale(k)).collect(),
        leg_slopes: c.leg_slopes.iter().map(|u| u.scale(k)).collect(),
    }
}
