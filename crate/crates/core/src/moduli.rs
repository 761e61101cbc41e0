//! Rigid top-dimensional types, their multiplicities and evaluation maps, and
//! curves through a point configuration by per-type linear solves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::curve::{AbstractCurve, Edge, PlaneCurve};
use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::marked::{all_mask, normalize_split, MarkedType};
use crate::neumann;
use crate::scalar::Scalar;
use crate::vec2::Vec2;

/// Largest leg count with a stored catalog.
pub const MAX_CATALOG_LEGS: usize = 6;

/// Number of rigid top-dimensional types with `n` legs.
///
/// Types correspond to a labeled tree on the legs (its edges labeled by the
/// marked points) together with, for each leg of degree `d`, one of the
/// `(2d−3)!!` rooted binary trees on its `d` incident marked points.
pub fn count_rigid_types(n: usize) -> u128 {
    if n < 2 {
        return 0;
    }
    let excess = n - 2;
    let binom = |a: usize, b: usize| -> u128 { (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128) };
    let dfact = |a: usize| -> u128 { (1..=a).map(|i| (2 * i - 1) as u128).product() };
    // dp[s]: weighted ways to distribute s excess degree among the legs seen so far.
    let mut dp = vec![0u128; excess + 1];
    dp[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; excess + 1];
        for s in 0..=excess {
            for a in 0..=s {
                next[s] += dp[s - a] * binom(s, a) * dfact(a);
            }
        }
        dp = next;
    }
    let marks: u128 = (1..n).map(|i| i as u128).product();
    dp[excess] * marks
}

/// Calls `f` once per rigid type with its raw incoming tail masks (cyclic
/// order arbitrary).
pub fn for_each_rigid_type(n: usize, mut f: impl FnMut(&[[u32; 2]])) {
    assert!((2..=crate::marked::MAX_LEGS).contains(&n));
    if n == 2 {
        f(&[]);
        return;
    }
    let m = n - 1;
    let mut prufer = vec![0usize; n - 2];
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let tree = prufer_edges(&prufer, n);
        let mut perms_done = false;
        perm.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        while !perms_done {
            let options = piece_options(&tree, &perm, n);
            let mut choice = vec![0usize; n];
            let mut verts = Vec::with_capacity(n - 2);
            'product: loop {
                verts.clear();
                for j in 0..n {
                    verts.extend_from_slice(&options[j][choice[j]]);
                }
                f(&verts);
                for j in 0..n {
                    choice[j] += 1;
                    if choice[j] < options[j].len() {
                        continue 'product;
                    }
                    choice[j] = 0;
                }
                break;
            }
            perms_done = !next_permutation(&mut perm);
        }
        // Next Prüfer sequence in lexicographic order.
        let mut i = prufer.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            prufer[i] += 1;
            if prufer[i] < n {
                break;
            }
            prufer[i] = 0;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<[usize; 2]> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push([leaf, s]);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push([rest[0], rest[1]]);
    edges
}

/// For each piece (unmarked leg), the vertex lists of all binary trees on
/// the marked points incident to it.
fn piece_options(tree: &[[usize; 2]], marks: &[usize], n: usize) -> Vec<Vec<Vec<[u32; 2]>>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &[a, b]) in tree.iter().enumerate() {
        adj[a].push((b, marks[e]));
        adj[b].push((a, marks[e]));
    }
    // Leg mask of the side containing `to` after cutting the edge `from`–`to`.
    fn side(adj: &[Vec<(usize, usize)>], from: usize, to: usize, n: usize) -> u32 {
        let mut mask = 1u32 << to;
        for &(w, z) in &adj[to] {
            if w != from {
                mask |= 1 << (n + z) | side(adj, to, w, n);
            }
        }
        mask
    }
    (0..n)
        .map(|j| {
            let inputs: Vec<u32> = adj[j].iter().map(|&(o, z)| side(&adj, j, o, n) | 1 << (n + z)).collect();
            binary_trees(&inputs)
        })
        .collect()
}

/// Vertex lists of all rooted binary trees (unordered children) on the
/// given leaf masks.
fn binary_trees(leaves: &[u32]) -> Vec<Vec<[u32; 2]>> {
    if leaves.len() == 1 {
        return vec![Vec::new()];
    }
    let k = leaves.len();
    let mut out = Vec::new();
    // Subsets containing leaf 0, proper.
    for sub in 0u32..(1 << (k - 1)) {
        let left_set = (sub << 1) | 1;
        if left_set == (1 << k) - 1 {
            continue;
        }
        let left: Vec<u32> = (0..k).filter(|&i| left_set >> i & 1 == 1).map(|i| leaves[i]).collect();
        let right: Vec<u32> = (0..k).filter(|&i| left_set >> i & 1 == 0).map(|i| leaves[i]).collect();
        let (lm, rm) = (left.iter().fold(0, |a, &b| a | b), right.iter().fold(0, |a, &b| a | b));
        for l in binary_trees(&left) {
            for r in binary_trees(&right) {
                let mut v = l.clone();
                v.extend_from_slice(&r);
                v.push([lm, rm]);
                out.push(v);
            }
        }
    }
    out
}

/// All rigid types with `n` legs in reference orientation, sorted by key.
pub fn enumerate_rigid_types(n: usize) -> Result<Vec<MarkedType>> {
    let cat = TypeCatalog::get(n)?;
    Ok((0..cat.len()).map(|i| cat.type_at(i)).collect())
}

/// Sorted table of all rigid types for a leg count `n ≤ 6`.
pub struct TypeCatalog {
    n: usize,
    stride: usize,
    keys: Vec<u32>,
    verts: Vec<[u32; 2]>,
    relations: OnceLock<Relations>,
}

/// Codimension-one faces of the catalog: groups of `(type, sign)` sharing a
/// contraction face.
pub struct Relations {
    pub offsets: Vec<u32>,
    pub entries: Vec<(u32, i8)>,
}

impl Relations {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn group(&self, g: usize) -> &[(u32, i8)] {
        &self.entries[self.offsets[g] as usize..self.offsets[g + 1] as usize]
    }
}

static CATALOGS: OnceLock<Mutex<HashMap<usize, Arc<TypeCatalog>>>> = OnceLock::new();

impl TypeCatalog {
    /// Shared catalog for `n` legs, built on first use.
    pub fn get(n: usize) -> Result<Arc<TypeCatalog>> {
        if !(2..=MAX_CATALOG_LEGS).contains(&n) {
            return Err(Error::Unsupported(format!("type catalogs are stored for 2 ≤ n ≤ {MAX_CATALOG_LEGS}, not {n}")));
        }
        let lock = CATALOGS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = lock.lock().unwrap().get(&n) {
            return Ok(c.clone());
        }
        let built = Arc::new(TypeCatalog::build(n));
        Ok(lock.lock().unwrap().entry(n).or_insert(built).clone())
    }

    fn build(n: usize) -> TypeCatalog {
        let stride = 2 * n - 4;
        let per = n - 2;
        let mut rows: Vec<(Vec<u32>, Vec<[u32; 2]>)> = Vec::new();
        for_each_rigid_type(n, |raw| {
            let (t, _) = MarkedType::from_raw(n, raw);
            rows.push((t.key(), t.vertices().to_vec()));
        });
        rows.sort_unstable();
        let mut keys = Vec::with_capacity(rows.len() * stride);
        let mut verts = Vec::with_capacity(rows.len() * per);
        for (k, v) in rows {
            keys.extend(k);
            verts.extend(v);
        }
        TypeCatalog { n, stride, keys, verts, relations: OnceLock::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        if self.stride == 0 {
            1
        } else {
            self.keys.len() / self.stride
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn key(&self, i: usize) -> &[u32] {
        &self.keys[i * self.stride..(i + 1) * self.stride]
    }

    pub fn verts(&self, i: usize) -> &[[u32; 2]] {
        let per = self.n - 2;
        &self.verts[i * per..(i + 1) * per]
    }

    pub fn type_at(&self, i: usize) -> MarkedType {
        MarkedType::from_canonical(self.n, self.verts(i).to_vec())
    }

    pub fn find(&self, key: &[u32]) -> Option<usize> {
        if key.len() != self.stride {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.key(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Contraction faces, grouped. Contracting the edge at position `p` of
    /// the orientation list `e₁∧…∧e_k` induces the face orientation
    /// `−(−1)^p` times the remaining wedge, compared here with the sorted one.
    pub fn relations(&self) -> &Relations {
        self.relations.get_or_init(|| {
            let n = self.n;
            let all = all_mask(n);
            let bits = 2 * n - 1;
            let mut faces: Vec<(u128, u32, i8)> = Vec::with_capacity(self.len() * self.stride);
            let mut list = Vec::with_capacity(self.stride);
            for i in 0..self.len() {
                list.clear();
                list.extend(self.verts(i).iter().flat_map(|p| p.iter().map(|&t| normalize_split(t, all))));
                for p in 0..list.len() {
                    let mut inversions = 0usize;
                    let mut packed = Vec::with_capacity(list.len() - 1);
                    for (a, &x) in list.iter().enumerate() {
                        if a == p {
                            continue;
                        }
                        for (b, &y) in list.iter().enumerate().skip(a + 1) {
                            if b != p && y < x {
                                inversions += 1;
                            }
                        }
                        packed.push(x);
                    }
                    packed.sort_unstable();
                    let face = packed.iter().fold(0u128, |acc, &x| (acc << bits) | x as u128);
                    let parity = (p + inversions) % 2;
                    let sign = if parity == 0 { -1 } else { 1 };
                    faces.push((face, i as u32, sign));
                }
            }
            faces.sort_unstable();
            let mut offsets = vec![0u32];
            let mut entries = Vec::with_capacity(faces.len());
            for (k, &(face, t, s)) in faces.iter().enumerate() {
                if k > 0 && faces[k - 1].0 != face {
                    offsets.push(entries.len() as u32);
                }
                entries.push((t, s));
            }
            if !entries.is_empty() {
                offsets.push(entries.len() as u32);
            }
            Relations { offsets, entries }
        })
    }
}

/// `Π_v det(σ(in1), σ(in2))` over the unmarked vertices, with flow slopes σ.
pub fn multiplicity<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>) -> S {
    check_legs(t, delta);
    t.vertices()
        .iter()
        .fold(S::one(), |acc, &[a, b]| acc * t.edge_slope(a, delta).cross(&t.edge_slope(b, delta)))
}

fn check_legs<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>) {
    assert_eq!(t.n(), delta.len(), "type and delta set have different leg counts");
}

/// Flow slope of every bounded edge, in orientation order.
pub fn propagate_slopes<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>) -> Vec<Vec2<S>> {
    check_legs(t, delta);
    t.oriented_edges().into_iter().map(|e| t.edge_slope(e, delta)).collect()
}

/// Matrix of `(lengths, root position) ↦ (h(z_0), …, h(z_{m−1}))`; columns are
/// the edges in orientation order followed by the root coordinates, rows the
/// coordinates of the marked points. The root is `z_{m−1}`.
#[derive(Clone, Debug)]
pub struct EvaluationMatrix<S> {
    pub matrix: Matrix<S>,
}

impl<S: Scalar> EvaluationMatrix<S> {
    pub fn determinant(&self) -> S {
        self.matrix.determinant()
    }
}

/// Signed path incidence: `+1` if edge `tail` lies on the path from the root
/// marked point to `z_i` and is traversed along its flow, `−1` against it.
pub fn path_sign(tail: u32, n: usize, i: usize) -> i8 {
    let root = n - 2;
    let zi = tail >> (n + i) & 1;
    let zr = tail >> (n + root) & 1;
    if zi == zr {
        0
    } else if zr == 1 {
        1
    } else {
        -1
    }
}

pub fn ev_matrix<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>) -> EvaluationMatrix<S> {
    check_legs(t, delta);
    let n = t.n();
    let m = n - 1;
    let dim = 2 * m;
    let mut a = Matrix::zeros(dim, dim);
    let edges = t.oriented_edges();
    for (k, &tail) in edges.iter().enumerate() {
        let slope = t.edge_slope(tail, delta);
        for i in 0..m {
            let s = path_sign(tail, n, i);
            if s != 0 {
                let v = if s > 0 { slope.clone() } else { -slope.clone() };
                a.set(2 * i, k, v.x);
                a.set(2 * i + 1, k, v.y);
            }
        }
    }
    for i in 0..m {
        a.set(2 * i, dim - 2, S::one());
        a.set(2 * i + 1, dim - 1, S::one());
    }
    EvaluationMatrix { matrix: a }
}

/// Exact `det(ev)` and multiplicity of catalog type `i` for an integral Δ
/// given by its subset sums over unmarked legs. The root rows of `ev` only
/// meet the root columns, so the length block has the same determinant.
pub fn integer_ev_check(cat: &TypeCatalog, i: usize, sums: &[(i64, i64)]) -> (num_bigint::BigInt, i128) {
    let n = cat.n();
    let m = n - 1;
    let k = 2 * m - 2;
    let unmarked = crate::marked::unmarked_mask(n) as usize;
    let mut stack = [0i64; 144];
    let mut heap;
    let a: &mut [i64] = if k * k <= stack.len() {
        &mut stack[..k * k]
    } else {
        heap = vec![0i64; k * k];
        &mut heap
    };
    let mut mult = 1i128;
    for (v, &[ta, tb]) in cat.verts(i).iter().enumerate() {
        let sa = sums[ta as usize & unmarked];
        let sb = sums[tb as usize & unmarked];
        mult *= sa.0 as i128 * sb.1 as i128 - sa.1 as i128 * sb.0 as i128;
        for (c, tail, s) in [(2 * v, ta, sa), (2 * v + 1, tb, sb)] {
            for r in 0..m - 1 {
                let sign = path_sign(tail, n, r) as i64;
                // Flow slope is minus the tail's leg sum.
                a[2 * r * k + c] = -sign * s.0;
                a[(2 * r + 1) * k + c] = -sign * s.1;
            }
        }
    }
    (crate::linalg::det_i64_in_place(a, k), mult)
}

/// A curve of a given type through the marked points: edge lengths in
/// orientation order and the position of the root point `z_{m−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSolution<S> {
    pub ty: MarkedType,
    pub lengths: Vec<S>,
    pub root_pos: Vec2<S>,
}

impl<S: Scalar> CurveSolution<S> {
    /// Metric tree of the solution; vertex `i < m` is `z_i`.
    pub fn abstract_curve(&self) -> Result<AbstractCurve<S>> {
        let tree = self.ty.to_tree();
        let edges =
            tree.edges.iter().zip(&self.lengths).map(|(&ends, l)| Edge { ends, length: l.clone() }).collect();
        AbstractCurve::new(tree.num_vertices, edges, tree.legs)
    }

    pub fn realize(&self, delta: &DeltaSet<S>) -> Result<PlaneCurve<S>> {
        let g = self.abstract_curve()?;
        let root = self.ty.n() - 2;
        neumann::realize(&g, delta, root, &self.root_pos)
    }

    /// Positions of the marked points from the evaluation map.
    pub fn marked_positions(&self, delta: &DeltaSet<S>) -> Vec<Vec2<S>> {
        let n = self.ty.n();
        let edges = self.ty.oriented_edges();
        (0..n - 1)
            .map(|i| {
                let mut p = self.root_pos.clone();
                for (k, &tail) in edges.iter().enumerate() {
                    match path_sign(tail, n, i) {
                        0 => {}
                        s => {
                            let step = self.ty.edge_slope(tail, delta).scale(&self.lengths[k]);
                            p = if s > 0 { p + step } else { p - step };
                        }
                    }
                }
                p
            })
            .collect()
    }
}

/// Solves `ev(ℓ, r) = p` on one type; `None` when the solution has a
/// non-positive length.
pub fn solve_type<S: Scalar>(
    t: &MarkedType,
    delta: &DeltaSet<S>,
    points: &[Vec2<S>],
) -> Result<Option<CurveSolution<S>>> {
    let n = t.n();
    let m = n - 1;
    if points.len() != m {
        return Err(Error::InvalidType(format!("{m} points are needed, {} given", points.len())));
    }
    let root_pos = points[m - 1].clone();
    if m == 1 {
        return Ok(Some(CurveSolution { ty: t.clone(), lengths: Vec::new(), root_pos }));
    }
    // Subtracting the root rows leaves a square system in the lengths alone.
    let k = 2 * m - 2;
    let edges = t.oriented_edges();
    let mut a = Matrix::zeros(k, k);
    let mut rhs = Matrix::zeros(k, 1);
    for (c, &tail) in edges.iter().enumerate() {
        let slope = t.edge_slope(tail, delta);
        for i in 0..m - 1 {
            let s = path_sign(tail, n, i);
            if s != 0 {
                let v = if s > 0 { slope.clone() } else { -slope.clone() };
                a.set(2 * i, c, v.x);
                a.set(2 * i + 1, c, v.y);
            }
        }
    }
    for i in 0..m - 1 {
        let d = &points[i] - &root_pos;
        rhs.set(2 * i, 0, d.x);
        rhs.set(2 * i + 1, 0, d.y);
    }
    let Some(x) = a.solve(&rhs) else {
        return Ok(None);
    };
    let lengths: Vec<S> = (0..k).map(|c| x.get(c, 0).clone()).collect();
    if lengths.iter().any(|l| l.is_zero()) {
        return Err(Error::NonGenericConfiguration(format!("type {t} passes with a zero edge length")));
    }
    if lengths.iter().any(|l| l.is_negative()) {
        return Ok(None);
    }
    Ok(Some(CurveSolution { ty: t.clone(), lengths, root_pos }))
}

/// Curves through `points` found by solving every non-degenerate catalog
/// type separately. Degenerate types are skipped.
pub fn curves_through_by_types<S: Scalar>(delta: &DeltaSet<S>, points: &[Vec2<S>]) -> Result<Vec<CurveSolution<S>>> {
    let n = delta.len();
    let cat = TypeCatalog::get(n)?;
    let mut out = Vec::new();
    for i in 0..cat.len() {
        let t = cat.type_at(i);
        if multiplicity(&t, delta).is_zero() {
            continue;
        }
        if let Some(sol) = solve_type(&t, delta, points)? {
            out.push(sol);
        }
    }
    Ok(out)
}
