//! Metric graphs with legs, and their realizations as plane curves.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vec2::Vec2;

/// A bounded edge oriented from `ends[0]` to `ends[1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub ends: [usize; 2],
    pub length: S,
}

/// A finite graph with positive edge lengths and ordered legs.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractCurve<S> {
    num_vertices: usize,
    edges: Vec<Edge<S>>,
    /// Incident vertex of each leg, in leg order.
    legs: Vec<usize>,
}

impl<S: Scalar> AbstractCurve<S> {
    pub fn new(num_vertices: usize, edges: Vec<Edge<S>>, legs: Vec<usize>) -> Result<Self> {
        let curve = AbstractCurve { num_vertices, edges, legs };
        curve.check(false)?;
        Ok(curve)
    }

    /// Like [`AbstractCurve::new`] but tolerating parallel edges.
    pub(crate) fn with_multi_edges(num_vertices: usize, edges: Vec<Edge<S>>, legs: Vec<usize>) -> Result<Self> {
        let curve = AbstractCurve { num_vertices, edges, legs };
        curve.check(true)?;
        Ok(curve)
    }

    fn check(&self, allow_multi: bool) -> Result<()> {
        let n = self.num_vertices;
        let mut seen = std::collections::HashSet::new();
        for (k, e) in self.edges.iter().enumerate() {
            let [a, b] = e.ends;
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge {k} references a missing vertex")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("edge {k} is a loop")));
            }
            if !e.length.is_positive() {
                return Err(Error::InvalidGraph(format!("edge {k} has non-positive length {}", e.length)));
            }
            if !allow_multi && !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("edge {k} duplicates another edge")));
            }
        }
        if let Some(k) = self.legs.iter().position(|&v| v >= n) {
            return Err(Error::InvalidGraph(format!("leg {k} references a missing vertex")));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    /// For each vertex, the incident edge indices.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.ends[0]].push(k);
            inc[e.ends[1]].push(k);
        }
        inc
    }

    pub fn legs_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.legs.iter().enumerate().filter(move |(_, &w)| w == v).map(|(i, _)| i)
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return false;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &k in &inc[v] {
                let [a, b] = self.edges[k].ends;
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.num_vertices
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.num_vertices
    }

    pub fn map_lengths<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AbstractCurve<T> {
        AbstractCurve {
            num_vertices: self.num_vertices,
            edges: self.edges.iter().map(|e| Edge { ends: e.ends, length: f(&e.length) }).collect(),
            legs: self.legs.clone(),
        }
    }
}

/// An abstract curve together with vertex positions and balanced slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve<S> {
    pub base: AbstractCurve<S>,
    pub positions: Vec<Vec2<S>>,
    /// Slope of each bounded edge in its stored orientation.
    pub slopes: Vec<Vec2<S>>,
    /// Outgoing slope of each leg.
    pub leg_slopes: Vec<Vec2<S>>,
}

impl<S: Scalar> PlaneCurve<S> {
    /// Builds a curve and checks balancing and `h(e⁺) − h(e⁻) = l_e·ξ(e)`.
    pub fn new(
        base: AbstractCurve<S>,
        positions: Vec<Vec2<S>>,
        slopes: Vec<Vec2<S>>,
        leg_slopes: Vec<Vec2<S>>,
    ) -> Result<Self> {
        if positions.len() != base.num_vertices()
            || slopes.len() != base.edges().len()
            || leg_slopes.len() != base.legs().len()
        {
            return Err(Error::InvalidGraph("positions or slopes do not match the graph".into()));
        }
        let c = PlaneCurve { base, positions, slopes, leg_slopes };
        for (k, e) in c.base.edges().iter().enumerate() {
            let d = &c.positions[e.ends[1]] - &c.positions[e.ends[0]];
            if !d.approx_eq(&c.slopes[k].scale(&e.length)) {
                return Err(Error::InvalidGraph(format!("edge {k} is inconsistent with its slope")));
            }
        }
        if let Some(v) = c.unbalanced_vertex() {
            return Err(Error::InvalidGraph(format!("vertex {v} is not balanced")));
        }
        Ok(c)
    }

    /// Sum of outgoing slopes at `v`.
    pub fn balance_at(&self, v: usize) -> Vec2<S> {
        let mut acc = Vec2::zero();
        for (k, e) in self.base.edges().iter().enumerate() {
            if e.ends[0] == v {
                acc = acc + self.slopes[k].clone();
            }
            if e.ends[1] == v {
                acc = acc - self.slopes[k].clone();
            }
        }
        for leg in self.base.legs_at(v) {
            acc = acc + self.leg_slopes[leg].clone();
        }
        acc
    }

    pub fn unbalanced_vertex(&self) -> Option<usize> {
        (0..self.base.num_vertices()).find(|&v| !self.balance_at(v).is_zero())
    }

    /// Largest coordinate of any vertex balance defect, as a float.
    pub fn max_balance_residual(&self) -> f64 {
        (0..self.base.num_vertices())
            .map(|v| {
                let (x, y) = self.balance_at(v).to_f64();
                x.abs().max(y.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Outgoing slope of edge `k` at its endpoint `v`.
    pub fn outgoing_slope(&self, k: usize, v: usize) -> Vec2<S> {
        let e = &self.base.edges()[k];
        if e.ends[0] == v {
            self.slopes[k].clone()
        } else {
            -self.slopes[k].clone()
        }
    }

    pub fn translate(&self, by: &Vec2<S>) -> Self {
        let mut c = self.clone();
        for p in &mut c.positions {
            *p = &*p + by;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rejects_malformed_graphs() {
        let loop_edge = vec![Edge { ends: [0, 0], length: q(1) }];
        assert!(AbstractCurve::new(1, loop_edge, vec![]).is_err());
        let double = vec![Edge { ends: [0, 1], length: q(1) }, Edge { ends: [1, 0], length: q(2) }];
        assert!(AbstractCurve::new(2, double, vec![]).is_err());
        let zero = vec![Edge { ends: [0, 1], length: q(0) }];
        assert!(AbstractCurve::new(2, zero, vec![]).is_err());
        let ok = AbstractCurve::new(3, vec![Edge { ends: [0, 1], length: q(1) }], vec![0, 1]).unwrap();
        assert!(!ok.is_connected());
    }

    #[test]
    fn checks_plane_curve_consistency() {
        let g = AbstractCurve::new(2, vec![Edge { ends: [0, 1], length: q(2) }], vec![0, 1]).unwrap();
        let pos = vec![Vec2::from_ints(0, 0), Vec2::from_ints(2, 0)];
        let ok = PlaneCurve::new(
            g.clone(),
            pos.clone(),
            vec![Vec2::from_ints(1, 0)],
            vec![Vec2::from_ints(-1, 0), Vec2::from_ints(1, 0)],
        );
        assert!(ok.is_ok());
        let bad = PlaneCurve::new(g, pos, vec![Vec2::from_ints(1, 0)], vec![Vec2::from_ints(-1, 0), Vec2::from_ints(2, 0)]);
        assert!(bad.is_err());
    }
}
