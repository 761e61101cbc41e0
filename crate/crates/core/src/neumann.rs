//! Discrete Neumann problem on metric graphs, realization of plane curves from
//! leg slopes, and the star-mesh / Δ-Y network transforms.

use crate::curve::{AbstractCurve, Edge, PlaneCurve};
use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::vec2::{self, Vec2};

/// Weighted Laplacian `𝓛` of a metric graph and the right-hand side `b` of `𝓛φ = b`.
#[derive(Clone, Debug)]
pub struct LaplacianSystem<S> {
    pub matrix: Matrix<S>,
    pub rhs: Vec<Vec2<S>>,
}

/// Leg currents padded with zeros for legs beyond the supplied list.
fn padded_currents<S: Scalar>(g: &AbstractCurve<S>, currents: &[Vec2<S>]) -> Result<Vec<Vec2<S>>> {
    if currents.len() > g.legs().len() {
        return Err(Error::InvalidGraph(format!(
            "{} currents supplied for {} legs",
            currents.len(),
            g.legs().len()
        )));
    }
    let mut out = currents.to_vec();
    out.resize(g.legs().len(), Vec2::zero());
    Ok(out)
}

pub fn laplacian_system<S: Scalar>(g: &AbstractCurve<S>, currents: &[Vec2<S>]) -> Result<LaplacianSystem<S>> {
    let currents = padded_currents(g, currents)?;
    let n = g.num_vertices();
    let mut matrix = Matrix::zeros(n, n);
    for e in g.edges() {
        let [a, b] = e.ends;
        let c = S::one() / e.length.clone();
        matrix.add_to(a, a, c.clone());
        matrix.add_to(b, b, c.clone());
        matrix.add_to(a, b, -c.clone());
        matrix.add_to(b, a, -c);
    }
    let mut rhs = vec![Vec2::zero(); n];
    for (leg, &v) in g.legs().iter().enumerate() {
        rhs[v] = &rhs[v] + &currents[leg];
    }
    Ok(LaplacianSystem { matrix, rhs })
}

/// Solves `𝓛φ = b` with `φ(root) = 0`.
pub fn solve_neumann<S: Scalar>(g: &AbstractCurve<S>, currents: &[Vec2<S>], root: usize) -> Result<Vec<Vec2<S>>> {
    if root >= g.num_vertices() {
        return Err(Error::InvalidGraph(format!("root {root} is not a vertex")));
    }
    let currents = padded_currents(g, currents)?;
    let total = vec2::sum(&currents);
    if !total.is_zero() {
        return Err(Error::NoSolution { sum: total.to_string() });
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let sys = laplacian_system(g, &currents)?;
    let n = g.num_vertices();
    let keep: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut reduced = Matrix::zeros(keep.len(), keep.len());
    let mut rhs = Matrix::zeros(keep.len(), 2);
    for (i, &vi) in keep.iter().enumerate() {
        for (j, &vj) in keep.iter().enumerate() {
            reduced.set(i, j, sys.matrix.get(vi, vj).clone());
        }
        rhs.set(i, 0, sys.rhs[vi].x.clone());
        rhs.set(i, 1, sys.rhs[vi].y.clone());
    }
    let mut phi = vec![Vec2::zero(); n];
    if keep.is_empty() {
        return Ok(phi);
    }
    let x = reduced.solve(&rhs).ok_or(Error::NotConnected)?;
    for (i, &v) in keep.iter().enumerate() {
        phi[v] = Vec2::new(x.get(i, 0).clone(), x.get(i, 1).clone());
    }
    Ok(phi)
}

/// Realizes `g` with the given leg slopes (legs past the end get slope zero),
/// placing `root` at `root_pos`.
pub fn realize_currents<S: Scalar>(
    g: &AbstractCurve<S>,
    currents: &[Vec2<S>],
    root: usize,
    root_pos: &Vec2<S>,
) -> Result<PlaneCurve<S>> {
    let phi = solve_neumann(g, currents, root)?;
    let leg_slopes = padded_currents(g, currents)?;
    let positions: Vec<Vec2<S>> = phi.iter().map(|p| p + root_pos).collect();
    let slopes = g
        .edges()
        .iter()
        .map(|e| (&positions[e.ends[1]] - &positions[e.ends[0]]).scale(&(S::one() / e.length.clone())))
        .collect();
    Ok(PlaneCurve { base: g.clone(), positions, slopes, leg_slopes })
}

pub fn realize<S: Scalar>(
    g: &AbstractCurve<S>,
    delta: &DeltaSet<S>,
    root: usize,
    root_pos: &Vec2<S>,
) -> Result<PlaneCurve<S>> {
    realize_currents(g, delta.vectors(), root, root_pos)
}

/// Balanced slopes on a tree, by summing leg currents beyond each edge.
pub fn tree_slopes<S: Scalar>(g: &AbstractCurve<S>, currents: &[Vec2<S>]) -> Result<Vec<Vec2<S>>> {
    if !g.is_tree() {
        return Err(Error::InvalidGraph("slope propagation needs a tree".into()));
    }
    let currents = padded_currents(g, currents)?;
    let n = g.num_vertices();
    let inc = g.incidence();
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &k in &inc[v] {
            let [a, b] = g.edges()[k].ends;
            let w = if a == v { b } else { a };
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = k;
                stack.push(w);
            }
        }
    }
    let mut below = vec![Vec2::zero(); n];
    for (leg, &v) in g.legs().iter().enumerate() {
        below[v] = &below[v] + &currents[leg];
    }
    let mut slopes = vec![Vec2::zero(); g.edges().len()];
    for &v in order.iter().rev() {
        let k = parent_edge[v];
        if k == usize::MAX {
            continue;
        }
        let e = &g.edges()[k];
        let p = if e.ends[0] == v { e.ends[1] } else { e.ends[0] };
        // Outgoing slope at the parent towards `v` equals the leg sum beyond `v`.
        slopes[k] = if e.ends[1] == v { below[v].clone() } else { -below[v].clone() };
        below[p] = &below[p] + &below[v];
    }
    Ok(slopes)
}

/// Replaces the star of `v` by the complete graph on its neighbours.
///
/// Vertex `v` is removed and later vertices shift down by one. New edges run
/// between neighbours `u_i → u_j` (`i < j` in incidence order) with length
/// `l_i·l_j·Σ_k 1/l_k`; parallel edges are merged by adding conductances.
pub fn star_mesh<S: Scalar>(c: &PlaneCurve<S>, v: usize) -> Result<PlaneCurve<S>> {
    let g = &c.base;
    if v >= g.num_vertices() {
        return Err(Error::InvalidGraph(format!("vertex {v} does not exist")));
    }
    if g.legs_at(v).next().is_some() {
        return Err(Error::VertexHasLeg { vertex: v });
    }
    let star: Vec<usize> = g.incidence()[v].clone();
    let nbrs: Vec<usize> = star
        .iter()
        .map(|&k| {
            let [a, b] = g.edges()[k].ends;
            if a == v {
                b
            } else {
                a
            }
        })
        .collect();
    for i in 0..nbrs.len() {
        if nbrs[i + 1..].contains(&nbrs[i]) {
            return Err(Error::InvalidGraph(format!("vertex {v} has a repeated neighbour")));
        }
    }
    if nbrs.len() < 2 {
        return Err(Error::InvalidGraph(format!("vertex {v} has fewer than two neighbours")));
    }
    let conductance = star.iter().fold(S::zero(), |acc, &k| acc + S::one() / g.edges()[k].length.clone());
    let renum = |w: usize| if w > v { w - 1 } else { w };

    // Remaining edges, keyed by unordered endpoint pair (in new numbering).
    let mut edges: Vec<Edge<S>> = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        if !star.contains(&k) {
            edges.push(Edge { ends: [renum(e.ends[0]), renum(e.ends[1])], length: e.length.clone() });
        }
    }
    for i in 0..nbrs.len() {
        for j in i + 1..nbrs.len() {
            let li = g.edges()[star[i]].length.clone();
            let lj = g.edges()[star[j]].length.clone();
            let length = li * lj * conductance.clone();
            let (a, b) = (renum(nbrs[i]), renum(nbrs[j]));
            match edges.iter_mut().find(|e| (e.ends == [a, b]) || (e.ends == [b, a])) {
                Some(existing) => {
                    let merged = S::one() / (S::one() / existing.length.clone() + S::one() / length);
                    existing.length = merged;
                }
                None => edges.push(Edge { ends: [a, b], length }),
            }
        }
    }
    let positions: Vec<Vec2<S>> =
        c.positions.iter().enumerate().filter(|&(w, _)| w != v).map(|(_, p)| p.clone()).collect();
    let legs: Vec<usize> = g.legs().iter().map(|&w| renum(w)).collect();
    let slopes = edges
        .iter()
        .map(|e| (&positions[e.ends[1]] - &positions[e.ends[0]]).scale(&(S::one() / e.length.clone())))
        .collect();
    let base = AbstractCurve::with_multi_edges(g.num_vertices() - 1, edges, legs)?;
    PlaneCurve::new(base, positions, slopes, c.leg_slopes.clone())
}

/// Inverse of the three-neighbour star-mesh: replaces the triangle on
/// `tri` by a new vertex (appended last) joined to its corners.
pub fn delta_y<S: Scalar>(c: &PlaneCurve<S>, tri: [usize; 3]) -> Result<PlaneCurve<S>> {
    let g = &c.base;
    let find = |a: usize, b: usize| {
        g.edges().iter().position(|e| e.ends == [a, b] || e.ends == [b, a]).ok_or_else(|| {
            Error::InvalidGraph(format!("no edge between {a} and {b}"))
        })
    };
    let [a, b, d] = tri;
    let side = [find(b, d)?, find(d, a)?, find(a, b)?];
    let opposite_len = |i: usize| g.edges()[side[i]].length.clone();
    let total = opposite_len(0) + opposite_len(1) + opposite_len(2);
    // Corner i is adjacent to the two sides not opposite to it.
    let corner_len: Vec<S> = (0..3)
        .map(|i| opposite_len((i + 1) % 3) * opposite_len((i + 2) % 3) / total.clone())
        .collect();
    let conductance = corner_len.iter().fold(S::zero(), |acc, l| acc + S::one() / l.clone());
    let centre = tri
        .iter()
        .zip(&corner_len)
        .fold(Vec2::zero(), |acc, (&w, l)| acc + c.positions[w].scale(&(S::one() / l.clone())))
        .scale(&(S::one() / conductance));
    let w = g.num_vertices();
    let mut edges: Vec<Edge<S>> =
        g.edges().iter().enumerate().filter(|(k, _)| !side.contains(k)).map(|(_, e)| e.clone()).collect();
    for (i, &corner) in tri.iter().enumerate() {
        edges.push(Edge { ends: [w, corner], length: corner_len[i].clone() });
    }
    let mut positions = c.positions.clone();
    positions.push(centre);
    let slopes = edges
        .iter()
        .map(|e| (&positions[e.ends[1]] - &positions[e.ends[0]]).scale(&(S::one() / e.length.clone())))
        .collect();
    let base = AbstractCurve::with_multi_edges(w + 1, edges, g.legs().to_vec())?;
    PlaneCurve::new(base, positions, slopes, c.leg_slopes.clone())
}
