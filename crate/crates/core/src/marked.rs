//! Rigid marked trees: a graph form with explicit cyclic orders and a compact
//! canonical form keyed by leg bitmasks.
//!
//! Leg bits: unmarked legs `0..n`, the marked leg of `z_i` is bit `n + i`.
//! Every bounded edge of a rigid tree with `n − 1` marks is incoming at exactly
//! one unmarked vertex (edges flow toward the unique leg of their component),
//! so a type is determined by the tail-side masks of those incoming edges.

use std::collections::HashMap;
use std::fmt;

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vec2::Vec2;

pub const MAX_LEGS: usize = 9;

pub fn all_mask(n: usize) -> u32 {
    (1u32 << (2 * n - 1)) - 1
}

pub fn unmarked_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// Side of a split not containing leg 0.
pub fn normalize_split(mask: u32, all: u32) -> u32 {
    if mask & 1 != 0 {
        all ^ mask
    } else {
        mask
    }
}

fn low(x: u32) -> u32 {
    x.trailing_zeros()
}

/// Orders the incoming pair so that `(out, in1, in2)` is cyclically increasing
/// by lowest leg. Returns the pair and whether it was swapped.
pub fn canonical_pair(out: u32, a: u32, b: u32) -> ([u32; 2], bool) {
    let (p, q, r) = (low(out), low(a), low(b));
    let ascents = (p < q) as u8 + (q < r) as u8 + (r < p) as u8;
    if ascents == 2 {
        ([a, b], false)
    } else {
        ([b, a], true)
    }
}

/// Combinatorial type of a rigid trivalent `(n, n−1)`-tree in its reference
/// Lie-orientation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedType {
    n: usize,
    verts: Vec<[u32; 2]>,
}

impl MarkedType {
    /// Builds a type from the incoming tail masks of each unmarked vertex in
    /// cyclic order `(out, in1, in2)`. The sign compares that orientation with
    /// the reference one.
    pub fn from_raw(n: usize, raw: &[[u32; 2]]) -> (MarkedType, i8) {
        let all = all_mask(n);
        let mut sign = 1i8;
        let mut verts: Vec<[u32; 2]> = raw
            .iter()
            .map(|&[a, b]| {
                let (pair, flipped) = canonical_pair(all ^ (a | b), a, b);
                if flipped {
                    sign = -sign;
                }
                pair
            })
            .collect();
        verts.sort_unstable_by_key(|p| p[0] | p[1]);
        (MarkedType { n, verts }, sign)
    }

    pub(crate) fn from_canonical(n: usize, verts: Vec<[u32; 2]>) -> MarkedType {
        MarkedType { n, verts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_marked(&self) -> usize {
        self.n - 1
    }

    pub fn all(&self) -> u32 {
        all_mask(self.n)
    }

    /// Incoming tail masks per unmarked vertex in reference order.
    pub fn vertices(&self) -> &[[u32; 2]] {
        &self.verts
    }

    /// Tail masks of all bounded edges in orientation order
    /// `[in1(v1), in2(v1), in1(v2), …]`.
    pub fn oriented_edges(&self) -> Vec<u32> {
        self.verts.iter().flat_map(|p| p.iter().copied()).collect()
    }

    pub fn key(&self) -> Vec<u32> {
        let all = self.all();
        let mut k: Vec<u32> = self.oriented_edges().into_iter().map(|t| normalize_split(t, all)).collect();
        k.sort_unstable();
        k
    }

    pub fn key_string(&self) -> String {
        let parts: Vec<String> = self.key().iter().map(|s| s.to_string()).collect();
        format!("n{}:{}", self.n, parts.join(","))
    }

    pub fn parse_key(s: &str) -> Result<MarkedType> {
        let bad = || Error::Parse(format!("malformed type key {s:?}"));
        let rest = s.trim().strip_prefix('n').ok_or_else(bad)?;
        let (n, splits) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        if !(2..=MAX_LEGS).contains(&n) {
            return Err(Error::InvalidType(format!("unsupported leg count {n}")));
        }
        let splits: Vec<u32> = if splits.is_empty() {
            Vec::new()
        } else {
            splits.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let skeleton = Skeleton::from_splits(n, &splits)?;
        let mut tree = skeleton.with_arbitrary_orders(n);
        tree.n = n;
        let (t, _) = MarkedType::from_tree(&tree)?;
        if t.key() != {
            let mut s = splits.clone();
            s.sort_unstable();
            s
        } {
            return Err(Error::InvalidType(s.to_string()));
        }
        Ok(t)
    }

    /// Flow-direction slope of the edge with tail mask `tail`.
    pub fn edge_slope<S: Scalar>(&self, tail: u32, delta: &DeltaSet<S>) -> Vec2<S> {
        -delta.mask_sum(tail & unmarked_mask(self.n))
    }

    /// Legs `s` and `t` lie in different branches at every unmarked vertex.
    pub fn is_caterpillar(&self, s: usize, t: usize) -> bool {
        let (bs, bt) = (1u32 << s, 1u32 << t);
        self.verts.iter().all(|&[a, b]| {
            let side = |x: u32| if a & x != 0 { 0 } else if b & x != 0 { 1 } else { 2 };
            side(bs) != side(bt)
        })
    }

    /// Contraction faces: for each edge position, the remaining normalized
    /// splits in orientation order.
    pub fn normalized_oriented(&self) -> Vec<u32> {
        let all = self.all();
        self.oriented_edges().into_iter().map(|t| normalize_split(t, all)).collect()
    }

    /// Graph form with vertices `z_0..z_{m−1}` first, then the unmarked
    /// vertices in reference order; edge `k` is oriented edge `k` of
    /// [`MarkedType::oriented_edges`], directed tail to head.
    pub fn to_tree(&self) -> MarkedTree {
        let n = self.n;
        let m = n - 1;
        let all = self.all();
        let tails = self.oriented_edges();
        if n == 2 {
            return MarkedTree {
                n,
                num_vertices: 1,
                edges: Vec::new(),
                legs: vec![0, 0, 0],
                cyclic: vec![None],
            };
        }
        let skeleton = Skeleton::from_splits(n, &self.key()).expect("type splits form a tree");
        let sides = skeleton.edge_sides(all);
        // Skeleton vertex → output vertex.
        let mut remap = vec![usize::MAX; skeleton.num_vertices];
        for i in 0..m {
            remap[skeleton.legs[n + i]] = i;
        }
        let branch_key = |v: usize| -> [u32; 3] {
            let mut b: Vec<u32> = skeleton.branches(v, &sides);
            b.sort_unstable();
            [b[0], b[1], b[2]]
        };
        let mut by_branches: HashMap<[u32; 3], usize> = HashMap::new();
        for (j, &[a, b]) in self.verts.iter().enumerate() {
            let mut k = [a, b, all ^ (a | b)];
            k.sort_unstable();
            by_branches.insert(k, j);
        }
        for v in 0..skeleton.num_vertices {
            if remap[v] == usize::MAX {
                remap[v] = m + by_branches[&branch_key(v)];
            }
        }
        let mut edges = Vec::with_capacity(tails.len());
        for &t in &tails {
            let k = (0..skeleton.edges.len())
                .find(|&k| sides[k][0] == t || sides[k][1] == t)
                .expect("tail mask is a split of the skeleton");
            let [a, b] = skeleton.edges[k];
            // The tail vertex sits on the side whose mask is the tail mask.
            let (tail, head) = if sides[k][0] == t { (a, b) } else { (b, a) };
            edges.push([remap[tail], remap[head]]);
        }
        let legs: Vec<usize> = skeleton.legs.iter().map(|&v| remap[v]).collect();
        let mut cyclic = vec![None; m + self.verts.len()];
        for (j, &[a, b]) in self.verts.iter().enumerate() {
            let out = all ^ (a | b);
            let he_of = |mask: u32, incoming: Option<usize>| -> HalfEdge {
                if let Some(k) = incoming {
                    return HalfEdge::Edge(k);
                }
                if mask.count_ones() == 1 {
                    return HalfEdge::Leg(mask.trailing_zeros() as usize);
                }
                HalfEdge::Edge(tails.iter().position(|&t| t == a | b).expect("out edge"))
            };
            cyclic[m + j] = Some([he_of(out, None), he_of(a, Some(2 * j)), he_of(b, Some(2 * j + 1))]);
        }
        MarkedTree { n, num_vertices: m + self.verts.len(), edges, legs, cyclic }
    }

    /// Canonical type of a graph-form tree and the sign of its orientation
    /// relative to the reference one.
    pub fn from_tree(tree: &MarkedTree) -> Result<(MarkedType, i8)> {
        let n = tree.n;
        if !(2..=MAX_LEGS).contains(&n) {
            return Err(Error::InvalidType(format!("unsupported leg count {n}")));
        }
        let m = n - 1;
        let all = all_mask(n);
        if tree.legs.len() != n + m {
            return Err(Error::InvalidType(format!("expected {} legs, found {}", n + m, tree.legs.len())));
        }
        if tree.cyclic.len() != tree.num_vertices {
            return Err(Error::InvalidType("cyclic orders do not match vertices".into()));
        }
        let skeleton = Skeleton { num_vertices: tree.num_vertices, edges: tree.edges.clone(), legs: tree.legs.clone() };
        skeleton.check_tree()?;
        let mut degree = vec![0usize; tree.num_vertices];
        let mut marked_at = vec![None; tree.num_vertices];
        for &[a, b] in &tree.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        for (l, &v) in tree.legs.iter().enumerate() {
            degree[v] += 1;
            if l >= n {
                if marked_at[v].is_some() {
                    return Err(Error::InvalidType(format!("vertex {v} carries two marked legs")));
                }
                marked_at[v] = Some(l - n);
            }
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::InvalidType(format!("vertex {v} is not trivalent")));
        }
        let sides = skeleton.edge_sides(all);
        let incidence = skeleton.incidence();
        let mut raw = Vec::with_capacity(n - 2);
        let mut incoming_count = vec![0u8; tree.edges.len()];
        for v in 0..tree.num_vertices {
            if marked_at[v].is_some() {
                continue;
            }
            let order = tree.cyclic[v].ok_or_else(|| Error::InvalidType(format!("vertex {v} has no cyclic order")))?;
            let mut own: Vec<HalfEdge> = incidence[v].clone();
            let mut given = order.to_vec();
            own.sort_unstable();
            given.sort_unstable();
            if own != given {
                return Err(Error::InvalidType(format!("cyclic order at vertex {v} does not match its half-edges")));
            }
            let reach: Vec<usize> = order.iter().map(|&h| skeleton.unmarked_legs_reached(v, h, n, &marked_at)).collect();
            if reach.iter().sum::<usize>() != 1 {
                return Err(Error::InvalidType(format!("vertex {v} violates rigidity")));
            }
            let out = reach.iter().position(|&r| r == 1).unwrap();
            let ins = [order[(out + 1) % 3], order[(out + 2) % 3]];
            let mut pair = [0u32; 2];
            for (slot, h) in ins.iter().enumerate() {
                match *h {
                    HalfEdge::Leg(_) => return Err(Error::InvalidType(format!("vertex {v} violates rigidity"))),
                    HalfEdge::Edge(k) => {
                        incoming_count[k] += 1;
                        let far = if tree.edges[k][0] == v { sides[k][1] } else { sides[k][0] };
                        pair[slot] = far;
                    }
                }
            }
            raw.push(pair);
        }
        if raw.len() != n - 2 || incoming_count.iter().any(|&c| c != 1) {
            return Err(Error::InvalidType("tree is not rigid".into()));
        }
        Ok(MarkedType::from_raw(n, &raw))
    }

    /// Forgets the marks and re-marks `z_i` on leg `i`, keeping the cyclic
    /// orders. Returns the reduced type and its orientation sign.
    pub fn mp_reduce(&self) -> (MarkedType, i8) {
        let n = self.n;
        if n == 2 {
            return (self.clone(), 1);
        }
        let m = n - 1;
        let tree = self.to_tree();
        let inc = tree.incidence();
        // Walks from `v` through `h`, passing straight through marked vertices.
        let follow = |mut from: usize, mut h: HalfEdge| -> HalfEdge {
            loop {
                let HalfEdge::Edge(k) = h else { return h };
                let [a, b] = tree.edges[k];
                let w = if a == from { b } else { a };
                if w >= m {
                    return HalfEdge::Edge(w);
                }
                let next = inc[w]
                    .iter()
                    .copied()
                    .find(|&g| g != h && !matches!(g, HalfEdge::Leg(l) if l >= n))
                    .expect("marked vertex has two unmarked half-edges");
                from = w;
                h = next;
            }
        };
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut legs = vec![usize::MAX; 2 * n - 1];
        let mut between: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cyclic = vec![None; tree.num_vertices];
        for v in m..tree.num_vertices {
            let order = tree.cyclic[v].expect("unmarked vertex has a cyclic order");
            let mut out = [HalfEdge::Leg(0); 3];
            for (slot, &h) in order.iter().enumerate() {
                out[slot] = match follow(v, h) {
                    HalfEdge::Leg(l) if l < m => {
                        edges.push([l, v]);
                        legs[l] = l;
                        legs[n + l] = l;
                        HalfEdge::Edge(edges.len() - 1)
                    }
                    HalfEdge::Leg(l) => {
                        legs[l] = v;
                        HalfEdge::Leg(l)
                    }
                    HalfEdge::Edge(w) => {
                        let key = (v.min(w), v.max(w));
                        let k = *between.entry(key).or_insert_with(|| {
                            edges.push([key.0, key.1]);
                            edges.len() - 1
                        });
                        HalfEdge::Edge(k)
                    }
                };
            }
            cyclic[v] = Some(out);
        }
        let reduced = MarkedTree { n, num_vertices: tree.num_vertices, edges, legs, cyclic };
        MarkedType::from_tree(&reduced).expect("reduced tree is rigid")
    }
}

impl fmt::Debug for MarkedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key_string())
    }
}

impl fmt::Display for MarkedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfEdge {
    Edge(usize),
    Leg(usize),
}

/// Graph form of a marked tree: legs `0..n` unmarked, `n..2n−1` marked, and a
/// cyclic order at every unmarked vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedTree {
    pub n: usize,
    pub num_vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub legs: Vec<usize>,
    pub cyclic: Vec<Option<[HalfEdge; 3]>>,
}

impl MarkedTree {
    pub fn incidence(&self) -> Vec<Vec<HalfEdge>> {
        let mut inc = vec![Vec::with_capacity(3); self.num_vertices];
        for (k, &[a, b]) in self.edges.iter().enumerate() {
            inc[a].push(HalfEdge::Edge(k));
            inc[b].push(HalfEdge::Edge(k));
        }
        for (l, &v) in self.legs.iter().enumerate() {
            inc[v].push(HalfEdge::Leg(l));
        }
        inc
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> MarkedTree {
        let mut cyclic = vec![None; self.num_vertices];
        for v in 0..self.num_vertices {
            cyclic[perm[v]] = self.cyclic[v];
        }
        MarkedTree {
            n: self.n,
            num_vertices: self.num_vertices,
            edges: self.edges.iter().map(|&[a, b]| [perm[a], perm[b]]).collect(),
            legs: self.legs.iter().map(|&v| perm[v]).collect(),
            cyclic,
        }
    }

    /// Reverses the cyclic order at vertex `v`.
    pub fn flip(&mut self, v: usize) {
        if let Some([a, b, c]) = self.cyclic[v] {
            self.cyclic[v] = Some([a, c, b]);
        }
    }

    pub fn rotate(&mut self, v: usize) {
        if let Some([a, b, c]) = self.cyclic[v] {
            self.cyclic[v] = Some([b, c, a]);
        }
    }

    pub fn unmarked_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices).filter(|&v| self.cyclic[v].is_some()).collect()
    }
}

/// Canonical key of a graph-form tree: the reference type and the orientation
/// class (`0` for the reference orientation, `1` for its negative).
pub fn canonical_form(tree: &MarkedTree) -> Result<(Vec<u32>, u8)> {
    let (t, sign) = MarkedType::from_tree(tree)?;
    Ok((t.key(), (sign < 0) as u8))
}

/// Underlying tree of a marked tree without orientation data.
struct Skeleton {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    legs: Vec<usize>,
}

impl Skeleton {
    /// Rebuilds the trivalent tree whose bounded-edge splits are `splits`
    /// (each given as the side without leg 0).
    fn from_splits(n: usize, splits: &[u32]) -> Result<Skeleton> {
        let all = all_mask(n);
        let nl = 2 * n - 1;
        if n == 2 {
            if !splits.is_empty() {
                return Err(Error::InvalidType("a two-leg type has no bounded edges".into()));
            }
            return Ok(Skeleton { num_vertices: 1, edges: Vec::new(), legs: vec![0; 3] });
        }
        if splits.len() != 2 * n - 4 {
            return Err(Error::InvalidType(format!("expected {} splits", 2 * n - 4)));
        }
        let root = all ^ 1;
        let mut clades: Vec<u32> = splits.to_vec();
        for &s in splits {
            if s & 1 != 0 || s & !all != 0 || s.count_ones() < 2 || s == root {
                return Err(Error::InvalidType(format!("invalid split {s}")));
            }
        }
        clades.push(root);
        clades.sort_unstable_by_key(|c| (c.count_ones(), *c));
        clades.dedup();
        if clades.len() != splits.len() + 1 {
            return Err(Error::InvalidType("repeated split".into()));
        }
        // Vertex per non-singleton clade; parent = smallest strictly larger clade.
        let parent_of = |c: u32| -> Option<usize> { clades.iter().position(|&d| d != c && d & c == c) };
        let mut edges = Vec::new();
        let mut children = vec![0u32; clades.len()];
        for (i, &c) in clades.iter().enumerate() {
            if c == root {
                continue;
            }
            let p = parent_of(c).ok_or_else(|| Error::InvalidType("splits are not compatible".into()))?;
            children[p] |= c;
            edges.push([p, i]);
        }
        let mut legs = vec![usize::MAX; nl];
        legs[0] = clades.iter().position(|&c| c == root).unwrap();
        for l in 1..nl {
            let p = parent_of(1 << l).unwrap();
            children[p] |= 1 << l;
            legs[l] = p;
        }
        let skeleton = Skeleton { num_vertices: clades.len(), edges, legs };
        let mut degree = vec![0usize; skeleton.num_vertices];
        for &[a, b] in &skeleton.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        for &v in &skeleton.legs {
            degree[v] += 1;
        }
        if degree.iter().any(|&d| d != 3) {
            return Err(Error::InvalidType("splits do not form a trivalent tree".into()));
        }
        Ok(skeleton)
    }

    fn check_tree(&self) -> Result<()> {
        if self.edges.len() + 1 != self.num_vertices {
            return Err(Error::InvalidType("graph is not a tree".into()));
        }
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &[a, b] in &self.edges {
            if a >= self.num_vertices || b >= self.num_vertices {
                return Err(Error::InvalidType("edge endpoint out of range".into()));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::InvalidType("graph has a cycle".into()));
            }
            parent[ra] = rb;
        }
        if self.legs.iter().any(|&v| v >= self.num_vertices) {
            return Err(Error::InvalidType("leg vertex out of range".into()));
        }
        Ok(())
    }

    fn incidence(&self) -> Vec<Vec<HalfEdge>> {
        let mut inc = vec![Vec::with_capacity(3); self.num_vertices];
        for (k, &[a, b]) in self.edges.iter().enumerate() {
            inc[a].push(HalfEdge::Edge(k));
            inc[b].push(HalfEdge::Edge(k));
        }
        for (l, &v) in self.legs.iter().enumerate() {
            inc[v].push(HalfEdge::Leg(l));
        }
        inc
    }

    /// Leg masks on each end's side of every edge.
    fn edge_sides(&self, all: u32) -> Vec<[u32; 2]> {
        let nv = self.num_vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for (k, &[a, b]) in self.edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let mut own = vec![0u32; nv];
        for (l, &v) in self.legs.iter().enumerate() {
            own[v] |= 1 << l;
        }
        let mut order = Vec::with_capacity(nv);
        let mut parent = vec![(usize::MAX, usize::MAX); nv];
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, k) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = (v, k);
                    stack.push(w);
                }
            }
        }
        let mut sub = own;
        for &v in order.iter().rev() {
            let (p, _) = parent[v];
            if p != usize::MAX {
                let s = sub[v];
                sub[p] |= s;
            }
        }
        let mut sides = vec![[0u32; 2]; self.edges.len()];
        for v in 0..nv {
            let (p, k) = parent[v];
            if p == usize::MAX {
                continue;
            }
            let [a, _] = self.edges[k];
            sides[k] = if a == v { [sub[v], all ^ sub[v]] } else { [all ^ sub[v], sub[v]] };
        }
        sides
    }

    fn branches(&self, v: usize, sides: &[[u32; 2]]) -> Vec<u32> {
        let mut b = Vec::with_capacity(3);
        for (k, &[a, c]) in self.edges.iter().enumerate() {
            if a == v {
                b.push(sides[k][1]);
            } else if c == v {
                b.push(sides[k][0]);
            }
        }
        for (l, &w) in self.legs.iter().enumerate() {
            if w == v {
                b.push(1 << l);
            }
        }
        b
    }

    /// Number of unmarked legs reachable from `v` through half-edge `h`
    /// without passing a marked vertex.
    fn unmarked_legs_reached(&self, v: usize, h: HalfEdge, n: usize, marked_at: &[Option<usize>]) -> usize {
        let inc = self.incidence();
        let mut count = 0;
        let mut stack = vec![(v, h)];
        while let Some((from, h)) = stack.pop() {
            match h {
                HalfEdge::Leg(l) => {
                    if l < n {
                        count += 1;
                    }
                }
                HalfEdge::Edge(k) => {
                    let [a, b] = self.edges[k];
                    let w = if a == from { b } else { a };
                    if marked_at[w].is_some() {
                        continue;
                    }
                    for &g in &inc[w] {
                        if g != h {
                            stack.push((w, g));
                        }
                    }
                }
            }
        }
        count
    }

    fn with_arbitrary_orders(&self, n: usize) -> MarkedTree {
        let inc = self.incidence();
        let cyclic = (0..self.num_vertices)
            .map(|v| {
                if inc[v].iter().any(|h| matches!(h, HalfEdge::Leg(l) if *l >= n)) {
                    None
                } else {
                    Some([inc[v][0], inc[v][1], inc[v][2]])
                }
            })
            .collect();
        MarkedTree { n, num_vertices: self.num_vertices, edges: self.edges.clone(), legs: self.legs.clone(), cyclic }
    }
}
