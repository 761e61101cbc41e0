//! JSON forms of the library's data. Numbers are written as strings, `p/q`
//! in exact mode, so files round-trip bit for bit.

use serde_json::{json, Map, Value};

use crate::curve::{AbstractCurve, Edge, PlaneCurve};
use crate::delta::DeltaSet;
use crate::duality::{DualSubdivision, Intersection, OverlayVertex, Polygon, SegmentId};
use crate::enumeration::CountResult;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::marked::MarkedType;
use crate::moduli::CurveSolution;
use crate::scalar::{Rational, Scalar};
use crate::vec2::Vec2;
use crate::weights::Weight;

pub const SCHEMA_VERSION: &str = "1";

fn bad(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, found {v}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| bad("a vertex index", v))
}

pub fn scalar_to_json<S: Scalar>(x: &S) -> Value {
    Value::String(x.to_text())
}

/// Accepts `"3/2"`, `"1.25"` or a bare JSON number.
pub fn scalar_from_json<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_scalar(s),
        Value::Number(n) => S::parse_scalar(&n.to_string()),
        _ => Err(bad("a number", v)),
    }
}

pub fn vec_to_json<S: Scalar>(p: &Vec2<S>) -> Value {
    json!([scalar_to_json(&p.x), scalar_to_json(&p.y)])
}

pub fn vec_from_json<S: Scalar>(v: &Value) -> Result<Vec2<S>> {
    match array(v, "a pair [x, y]")?.as_slice() {
        [x, y] => Ok(Vec2::new(scalar_from_json(x)?, scalar_from_json(y)?)),
        _ => Err(bad("a pair [x, y]", v)),
    }
}

fn vecs_to_json<S: Scalar>(ps: &[Vec2<S>]) -> Value {
    Value::Array(ps.iter().map(vec_to_json).collect())
}

fn vecs_from_json<S: Scalar>(v: &Value) -> Result<Vec<Vec2<S>>> {
    array(v, "a list of pairs")?.iter().map(vec_from_json).collect()
}

pub fn delta_to_json<S: Scalar>(d: &DeltaSet<S>) -> Value {
    json!({ "vectors": vecs_to_json(d.vectors()) })
}

pub fn delta_from_json<S: Scalar>(v: &Value) -> Result<DeltaSet<S>> {
    DeltaSet::new(vecs_from_json(field(v, "vectors")?)?)
}

pub fn points_to_json<S: Scalar>(ps: &[Vec2<S>]) -> Value {
    json!({ "points": vecs_to_json(ps) })
}

/// Accepts `{"points": [...]}` or a bare list.
pub fn points_from_json<S: Scalar>(v: &Value) -> Result<Vec<Vec2<S>>> {
    vecs_from_json(v.get("points").unwrap_or(v))
}

pub fn graph_to_json<S: Scalar>(g: &AbstractCurve<S>) -> Value {
    let edges: Vec<Value> =
        g.edges().iter().map(|e| json!({ "ends": e.ends, "length": scalar_to_json(&e.length) })).collect();
    let legs: Vec<Value> = g.legs().iter().map(|v| json!({ "vertex": v })).collect();
    json!({ "vertices": g.num_vertices(), "edges": edges, "legs": legs })
}

/// `vertices` is a count or a list of vertex labels.
pub fn graph_from_json<S: Scalar>(v: &Value) -> Result<AbstractCurve<S>> {
    let vs = field(v, "vertices")?;
    let num_vertices = match vs {
        Value::Array(a) => a.len(),
        _ => index(vs)?,
    };
    let mut edges = Vec::new();
    for e in array(field(v, "edges")?, "an edge list")? {
        let ends = array(field(e, "ends")?, "edge ends")?;
        let [a, b] = ends.as_slice() else { return Err(bad("two edge ends", e)) };
        edges.push(Edge { ends: [index(a)?, index(b)?], length: scalar_from_json(field(e, "length")?)? });
    }
    let legs = match v.get("legs") {
        Some(ls) => array(ls, "a leg list")?.iter().map(|l| index(l.get("vertex").unwrap_or(l))).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    AbstractCurve::new(num_vertices, edges, legs)
}

pub fn plane_curve_to_json<S: Scalar>(c: &PlaneCurve<S>) -> Value {
    json!({
        "graph": graph_to_json(&c.base),
        "positions": vecs_to_json(&c.positions),
        "slopes": vecs_to_json(&c.slopes),
        "leg_slopes": vecs_to_json(&c.leg_slopes),
    })
}

pub fn plane_curve_from_json<S: Scalar>(v: &Value) -> Result<PlaneCurve<S>> {
    PlaneCurve::new(
        graph_from_json(field(v, "graph")?)?,
        vecs_from_json(field(v, "positions")?)?,
        vecs_from_json(field(v, "slopes")?)?,
        vecs_from_json(field(v, "leg_slopes")?)?,
    )
}

pub fn solution_to_json<S: Scalar>(s: &CurveSolution<S>) -> Value {
    json!({
        "type": s.ty.key_string(),
        "lengths": s.lengths.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "root": vec_to_json(&s.root_pos),
    })
}

pub fn solution_from_json<S: Scalar>(v: &Value) -> Result<CurveSolution<S>> {
    let key = field(v, "type")?.as_str().ok_or_else(|| bad("a type key", v))?;
    Ok(CurveSolution {
        ty: MarkedType::parse_key(key)?,
        lengths: array(field(v, "lengths")?, "a length list")?.iter().map(scalar_from_json).collect::<Result<_>>()?,
        root_pos: vec_from_json(field(v, "root")?)?,
    })
}

/// Reals always carry a decimal point or an exponent.
pub fn weight_to_json(w: &Weight) -> Value {
    match w {
        Weight::Real(x) => Value::String(format!("{x:?}")),
        _ => Value::String(w.to_string()),
    }
}

/// Laurent when the text mentions `y`, real when it has a decimal point or
/// an exponent, exact otherwise.
pub fn weight_from_json(v: &Value) -> Result<Weight> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(bad("a weight", v)),
    };
    if text.contains('y') {
        return LaurentPoly::parse(&text).map(Weight::Laurent);
    }
    if !text.contains(['.', 'e', 'E', 'i', 'N']) {
        return text.parse::<Rational>().map(Weight::Exact);
    }
    <f64 as Scalar>::parse_scalar(&text).map(Weight::Real)
}

pub fn polygon_to_json<S: Scalar>(p: &Polygon<S>) -> Value {
    vecs_to_json(&p.vertices)
}

pub fn polygon_from_json<S: Scalar>(v: &Value) -> Result<Polygon<S>> {
    Ok(Polygon { vertices: vecs_from_json(v)? })
}

fn segment_to_json(s: &SegmentId) -> Value {
    match s {
        SegmentId::Edge(k) => json!({ "edge": k }),
        SegmentId::Leg(l) => json!({ "leg": l }),
    }
}

pub fn subdivision_to_json<S: Scalar>(sub: &DualSubdivision<S>) -> Value {
    let cells: Vec<Value> = sub
        .cells
        .iter()
        .map(|(v, p)| {
            let mut m = Map::new();
            match v {
                OverlayVertex::Vertex(i) => {
                    m.insert("vertex".into(), json!(i));
                }
                OverlayVertex::Node { point, segments } => {
                    m.insert("node".into(), vec_to_json(point));
                    m.insert("segments".into(), Value::Array(segments.iter().map(segment_to_json).collect()));
                }
            }
            m.insert("polygon".into(), polygon_to_json(p));
            m.insert("area".into(), scalar_to_json(&p.area()));
            Value::Object(m)
        })
        .collect();
    json!({
        "outer": polygon_to_json(&sub.outer),
        "area": scalar_to_json(&sub.outer.area()),
        "cells": cells,
    })
}

pub fn intersection_to_json<S: Scalar>(r: &Intersection<S>) -> Value {
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "point": vec_to_json(&p.point),
                "first": segment_to_json(&p.first),
                "second": segment_to_json(&p.second),
                "multiplicity": scalar_to_json(&p.multiplicity),
            })
        })
        .collect();
    json!({
        "points": points,
        "total": scalar_to_json(&r.total),
        "mixed_area": scalar_to_json(&r.mixed_area),
        "degrees": r.degrees.iter().map(|d| d.value).collect::<Vec<_>>(),
        "bezout": {
            "total_is_twice_mixed_area": r.report.total_is_twice_mixed_area,
            "inequality_holds": r.report.inequality_holds,
            "equality": r.report.equality,
            "homothetic": r.report.homothetic,
        },
    })
}

pub fn count_to_json<S: Scalar>(r: &CountResult<S>) -> Value {
    let ledger: Vec<Value> = r
        .ledger
        .iter()
        .map(|e| {
            json!({
                "type": e.key,
                "count": e.count,
                "coefficient": weight_to_json(&e.coefficient),
                "solution": solution_to_json(&e.solution),
            })
        })
        .collect();
    json!({
        "value": weight_to_json(&r.value),
        "normalized": r.normalized,
        "aut": r.aut,
        "points": vecs_to_json(&r.points),
        "ledger": ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::refined_invariant;
    use crate::weights::WeightMode;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn round<T>(x: &T, emit: impl Fn(&T) -> Value, parse: impl Fn(&Value) -> Result<T>) -> T {
        let text = serde_json::to_string(&emit(x)).unwrap();
        parse(&serde_json::from_str(&text).unwrap()).unwrap()
    }

    #[test]
    fn parses_the_documented_formats() {
        let d: DeltaSet<Rational> =
            delta_from_json(&json!({ "vectors": [["-1", "0"], [0, -1], ["1", "1"]] })).unwrap();
        assert_eq!(d, DeltaSet::tropical_projective(1));
        let g: AbstractCurve<Rational> = graph_from_json(&json!({
            "vertices": [0, 1],
            "edges": [{ "ends": [0, 1], "length": "3/2" }],
            "legs": [{ "vertex": 0 }, { "vertex": 0 }, { "vertex": 1 }, { "vertex": 1 }],
        }))
        .unwrap();
        assert_eq!(g.edges()[0].length, q(3, 2));
        assert_eq!(g.legs(), &[0, 0, 1, 1]);
        let x: Rational = scalar_from_json(&json!("0.125")).unwrap();
        assert_eq!(x, q(1, 8));
    }

    #[test]
    fn data_types_round_trip() {
        let d = DeltaSet::<Rational>::tropical_projective(2);
        assert_eq!(round(&d, delta_to_json, delta_from_json), d);
        let r = refined_invariant(&DeltaSet::<Rational>::tropical_projective(1), WeightMode::Laurent, 3, false).unwrap();
        let sol = r.ledger[0].solution.clone();
        assert_eq!(round(&sol, solution_to_json, solution_from_json), sol);
        let c = sol.realize(&DeltaSet::tropical_projective(1)).unwrap();
        assert_eq!(round(&c.base, graph_to_json, graph_from_json), c.base);
        assert_eq!(round(&c, plane_curve_to_json, plane_curve_from_json), c);
        let pts = r.points.clone();
        assert_eq!(round(&pts, |p| points_to_json(p), points_from_json), pts);
        let cf = PlaneCurve {
            base: c.base.map_lengths(|l| l.to_f64() / 3.0),
            positions: c.positions.iter().map(|p| Vec2::new(p.x.to_f64(), p.y.to_f64())).collect(),
            slopes: c.slopes.iter().map(|p| Vec2::new(p.x.to_f64() * 3.0, p.y.to_f64() * 3.0)).collect(),
            leg_slopes: c.leg_slopes.iter().map(|p| Vec2::new(p.x.to_f64(), p.y.to_f64())).collect(),
        };
        assert_eq!(round(&cf.base, graph_to_json, graph_from_json), cf.base);
        let poly = Polygon { vertices: vec![Vec2::from_ints(0, 0), Vec2::new(q(1, 3), q(0, 1)), Vec2::from_ints(0, 1)] };
        assert_eq!(round(&poly, polygon_to_json, polygon_from_json), poly);
        for w in [
            Weight::Exact(q(-7, 3)),
            Weight::Real(0.1 + 0.2),
            Weight::Real(1e-30),
            Weight::Laurent(LaurentPoly::parse("y^-1 + 10 + y").unwrap()),
        ] {
            assert_eq!(round(&w, weight_to_json, weight_from_json), w);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(delta_from_json::<Rational>(&json!({ "vectors": [[1, 0]] })).is_err());
        assert!(delta_from_json::<Rational>(&json!({ "vecs": [] })).is_err());
        assert!(graph_from_json::<Rational>(&json!({ "vertices": 1, "edges": [{ "ends": [0, 3], "length": 1 }] })).is_err());
        assert!(vec_from_json::<Rational>(&json!(["1", "x"])).is_err());
    }

    proptest! {
        #[test]
        fn rationals_round_trip(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000) {
            let x = q(a, b);
            prop_assert_eq!(round(&x, scalar_to_json, scalar_from_json), x);
        }

        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(round(&x, scalar_to_json, scalar_from_json::<f64>), x);
        }
    }
}
