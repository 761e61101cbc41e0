//! Cycles on the rigid moduli: boundary relations, verification, Jacobi-space
//! dimensions, and the Lie and caterpillar cycles.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::linalg::rank_mod61;
use crate::marked::MarkedType;
use crate::moduli::{multiplicity, TypeCatalog};
use crate::scalar::Scalar;
use crate::weights::{lie_weight, Weight, WeightMode};

/// Coefficients on every rigid type with `n` legs, in reference orientation.
#[derive(Clone)]
pub struct Cycle {
    catalog: Arc<TypeCatalog>,
    coeffs: Vec<Weight>,
    verified: bool,
}

/// A boundary face whose relation fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub members: Vec<(String, i8)>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    pub ok: bool,
    pub relations_checked: usize,
    pub violations: Vec<Violation>,
}

const MAX_REPORTED: usize = 20;

impl Cycle {
    pub fn new(n: usize, coeffs: Vec<Weight>) -> Result<Cycle> {
        let catalog = TypeCatalog::get(n)?;
        if coeffs.len() != catalog.len() {
            return Err(Error::InvalidType(format!("{} coefficients for {} types", coeffs.len(), catalog.len())));
        }
        Ok(Cycle { catalog, coeffs, verified: false })
    }

    /// Builds a cycle from `(type key, coefficient)` pairs; other types get `zero`.
    pub fn from_entries(n: usize, entries: &[(Vec<u32>, Weight)], zero: Weight) -> Result<Cycle> {
        let catalog = TypeCatalog::get(n)?;
        let mut coeffs = vec![zero; catalog.len()];
        for (key, w) in entries {
            let i = catalog.find(key).ok_or_else(|| Error::UnknownType(format!("{key:?}")))?;
            coeffs[i] = w.clone();
        }
        Ok(Cycle { catalog, coeffs, verified: false })
    }

    pub fn n(&self) -> usize {
        self.catalog.n()
    }

    pub fn catalog(&self) -> &TypeCatalog {
        &self.catalog
    }

    pub fn coefficients(&self) -> &[Weight] {
        &self.coeffs
    }

    pub fn coefficient(&self, t: &MarkedType) -> Result<&Weight> {
        let i = self.catalog.find(&t.key()).ok_or_else(|| Error::UnknownType(t.key_string()))?;
        Ok(&self.coeffs[i])
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Checks every boundary relation and records the outcome.
    pub fn verify(&mut self) -> CycleReport {
        let report = verify_cycle(self);
        self.verified = report.ok;
        report
    }
}

/// Checks `Σ ± Z_μ = 0` on every codimension-one face. Exact coefficients
/// must cancel exactly; real ones within the float tolerance relative to the
/// sum of magnitudes.
pub fn verify_cycle(z: &Cycle) -> CycleReport {
    let rel = z.catalog.relations();
    let tol = crate::scalar::float_tolerance();
    let reals: Option<Vec<f64>> =
        z.coeffs.iter().map(|c| if let Weight::Real(x) = c { Some(*x) } else { None }).collect();
    let ints: Option<Vec<i64>> = z
        .coeffs
        .iter()
        .map(|c| match c {
            Weight::Exact(r) => r.to_i64().filter(|k| k.abs() < 1 << 40),
            _ => None,
        })
        .collect();
    let generic = |group: &[(u32, i8)]| -> (Weight, f64) {
        let mut sum: Option<Weight> = None;
        let mut scale = 0.0f64;
        for &(t, s) in group {
            let c = &z.coeffs[t as usize];
            scale += c.magnitude();
            let term = if s > 0 { c.clone() } else { -c.clone() };
            sum = Some(match sum {
                None => term,
                Some(acc) => acc + term,
            });
        }
        (sum.expect("faces have members"), scale)
    };
    let holds = |group: &[(u32, i8)]| -> bool {
        if let Some(v) = &reals {
            let (mut sum, mut scale) = (0.0f64, 0.0f64);
            for &(t, s) in group {
                let x = v[t as usize];
                sum += if s > 0 { x } else { -x };
                scale += x.abs();
            }
            return sum.abs() <= tol * scale.max(1.0);
        }
        if let Some(v) = &ints {
            return group.iter().map(|&(t, s)| s as i64 * v[t as usize]).sum::<i64>() == 0;
        }
        match generic(group) {
            (Weight::Real(x), scale) => x.abs() <= tol * scale.max(1.0),
            (other, _) => other.is_zero(),
        }
    };
    let mut violations = Vec::new();
    let mut failed = 0usize;
    for g in 0..rel.len() {
        let group = rel.group(g);
        if holds(group) {
            continue;
        }
        failed += 1;
        if violations.len() < MAX_REPORTED {
            violations.push(Violation {
                members: group.iter().map(|&(t, s)| (z.catalog.type_at(t as usize).key_string(), s)).collect(),
                residual: generic(group).0.to_string(),
            });
        }
    }
    CycleReport { ok: failed == 0, relations_checked: rel.len(), violations }
}

/// `𝒵_ħ`: the Lie weight on every type.
pub fn lie_cycle<S: Scalar>(delta: &DeltaSet<S>, mode: WeightMode) -> Result<Cycle> {
    let n = delta.len();
    let catalog = TypeCatalog::get(n)?;
    let mut coeffs = Vec::with_capacity(catalog.len());
    for i in 0..catalog.len() {
        coeffs.push(lie_weight(&catalog.type_at(i), delta, mode)?);
    }
    Ok(Cycle { catalog, coeffs, verified: false })
}

/// Types whose blackboard coefficient is not positive.
pub fn positivity_violations<S: Scalar>(z: &Cycle, delta: &DeltaSet<S>) -> Vec<String> {
    let mut out = Vec::new();
    for (i, c) in z.coeffs.iter().enumerate() {
        let t = z.catalog.type_at(i);
        let m = multiplicity(&t, delta);
        if m.is_zero() {
            continue;
        }
        if c.sign() * m.sign() <= 0 {
            out.push(t.key_string());
        }
    }
    out
}

/// Number of unmarked vertices where the body path from leg `s` to leg `t`
/// turns left, i.e. the attached branch approaches from the right.
fn right_approaches<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, s: usize, tt: usize) -> usize {
    let all = t.all();
    let unmarked = crate::marked::unmarked_mask(t.n());
    t.vertices()
        .iter()
        .filter(|&&[a, b]| {
            let branches = [a, b, all ^ (a | b)];
            let bs = branches.iter().find(|&&x| x >> s & 1 == 1).unwrap();
            let bt = branches.iter().find(|&&x| x >> tt & 1 == 1).unwrap();
            // Outgoing slope toward a branch is the sum of its legs.
            let (ss, st) = (delta.mask_sum(bs & unmarked), delta.mask_sum(bt & unmarked));
            ss.cross(&st).is_negative()
        })
        .count()
}

/// Sign `ε_st` of an `(s,t)`-caterpillar realized with `delta`.
pub fn caterpillar_sign<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, s: usize, tt: usize) -> i8 {
    if right_approaches(t, delta, s, tt) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Reference-orientation coefficient of `Z_st` on one type.
pub fn caterpillar_coefficient<S: Scalar>(t: &MarkedType, delta: &DeltaSet<S>, s: usize, tt: usize) -> i8 {
    if !t.is_caterpillar(s, tt) {
        return 0;
    }
    caterpillar_sign(t, delta, s, tt) * multiplicity(t, delta).sign()
}

/// `Z_st`: `ε_st` in the blackboard orientation on `(s,t)`-caterpillars.
pub fn caterpillar_cycle<S: Scalar>(delta: &DeltaSet<S>, s: usize, t: usize) -> Result<Cycle> {
    let n = delta.len();
    if s == t || s >= n || t >= n {
        return Err(Error::InvalidType(format!("invalid caterpillar legs ({s},{t})")));
    }
    if !delta.is_st_independent(s, t) {
        return Err(Error::NotSTIndependent { s, t });
    }
    let catalog = TypeCatalog::get(n)?;
    let coeffs =
        (0..catalog.len()).map(|i| Weight::from_int(caterpillar_coefficient(&catalog.type_at(i), delta, s, t) as i64)).collect();
    Ok(Cycle { catalog, coeffs, verified: false })
}

/// Dimensions of the Jacobi space and of its rigid marked model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDims {
    pub n: usize,
    pub generators: usize,
    pub relations: usize,
    pub rank: usize,
    pub dimension: usize,
    pub rigid: Option<RigidDims>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidDims {
    pub types: usize,
    pub faces: usize,
    pub mp_classes: usize,
    pub dimension: usize,
}

/// Rooted binary bracket on leaves `0..n−1`; the root stands for leg `n−1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Bracket {
    Leaf(u8),
    Node(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    fn min_leaf(&self) -> u8 {
        match self {
            Bracket::Leaf(l) => *l,
            Bracket::Node(a, _) => a.min_leaf(),
        }
    }

    /// Orders children by smallest leaf; returns the antisymmetry sign.
    fn canonical(self) -> (Bracket, i8) {
        match self {
            Bracket::Leaf(_) => (self, 1),
            Bracket::Node(a, b) => {
                let (a, sa) = a.canonical();
                let (b, sb) = b.canonical();
                if a.min_leaf() < b.min_leaf() {
                    (Bracket::Node(Box::new(a), Box::new(b)), sa * sb)
                } else {
                    (Bracket::Node(Box::new(b), Box::new(a)), -sa * sb)
                }
            }
        }
    }

    fn node(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Node(Box::new(a), Box::new(b))
    }

    fn all(leaves: &[u8]) -> Vec<Bracket> {
        if leaves.len() == 1 {
            return vec![Bracket::Leaf(leaves[0])];
        }
        let k = leaves.len();
        let mut out = Vec::new();
        for sub in 0u32..(1 << (k - 1)) {
            let left_set = (sub << 1) | 1;
            if left_set == (1 << k) - 1 {
                continue;
            }
            let left: Vec<u8> = (0..k).filter(|&i| left_set >> i & 1 == 1).map(|i| leaves[i]).collect();
            let right: Vec<u8> = (0..k).filter(|&i| left_set >> i & 1 == 0).map(|i| leaves[i]).collect();
            for l in Bracket::all(&left) {
                for r in Bracket::all(&right) {
                    out.push(Bracket::node(l.clone(), r));
                }
            }
        }
        out
    }

    /// Every way of rewriting one node `[[A,B],C]` by the Jacobi identity:
    /// the three terms `[[A,B],C]`, `[[B,C],A]`, `[[C,A],B]`.
    fn jacobi_triples(&self) -> Vec<[Bracket; 3]> {
        let mut out = Vec::new();
        if let Bracket::Node(x, y) = self {
            for (inner, c) in [(x, y), (y, x)] {
                if let Bracket::Node(a, b) = inner.as_ref() {
                    let (a, b, c) = ((**a).clone(), (**b).clone(), (**c).clone());
                    out.push([
                        Bracket::node(Bracket::node(a.clone(), b.clone()), c.clone()),
                        Bracket::node(Bracket::node(b.clone(), c.clone()), a.clone()),
                        Bracket::node(Bracket::node(c, a), b),
                    ]);
                }
            }
            for t in x.jacobi_triples() {
                out.push(t.map(|s| Bracket::node(s, (**y).clone())));
            }
            for t in y.jacobi_triples() {
                out.push(t.map(|s| Bracket::node((**x).clone(), s)));
            }
        }
        out
    }
}

/// Dimension of `J_n` from the bracket model and, when a catalog is
/// available, of the rigid model cut out by the boundary relations.
pub fn relation_rank(n: usize) -> Result<JacobiDims> {
    if n < 3 {
        return Err(Error::Unsupported("Jacobi spaces need n ≥ 3".into()));
    }
    let leaves: Vec<u8> = (0..(n - 1) as u8).collect();
    let gens: Vec<Bracket> = Bracket::all(&leaves);
    let index: HashMap<Bracket, usize> = gens.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let mut rows: HashSet<Vec<i64>> = HashSet::new();
    for g in &gens {
        for triple in g.jacobi_triples() {
            let mut row = vec![0i64; gens.len()];
            for term in triple {
                let (c, s) = term.canonical();
                row[index[&c]] += s as i64;
            }
            if row.iter().any(|&x| x != 0) {
                let lead = row.iter().find(|&&x| x != 0).copied().unwrap();
                if lead < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                rows.insert(row);
            }
        }
    }
    let rows: Vec<Vec<i64>> = rows.into_iter().collect();
    let rank = rank_mod61(&rows, gens.len());
    let rigid = if n <= crate::moduli::MAX_CATALOG_LEGS { Some(rigid_dimension(n)?) } else { None };
    Ok(JacobiDims { n, generators: gens.len(), relations: rows.len(), rank, dimension: gens.len() - rank, rigid })
}

/// Dimension of the space of cycles on the rigid types: two-term faces are
/// resolved by a signed union-find, the rest by a modular rank.
fn rigid_dimension(n: usize) -> Result<RigidDims> {
    let cat = TypeCatalog::get(n)?;
    let rel = cat.relations();
    let size = cat.len();
    let mut parent: Vec<u32> = (0..size as u32).collect();
    // sign[x]: Z_x = sign[x]·Z_parent[x].
    let mut sign: Vec<i8> = vec![1; size];
    let mut dead = vec![false; size];
    fn find(parent: &mut [u32], sign: &mut [i8], x: u32) -> (u32, i8) {
        let p = parent[x as usize];
        if p == x {
            return (x, 1);
        }
        let (r, s) = find(parent, sign, p);
        let total = sign[x as usize] * s;
        parent[x as usize] = r;
        sign[x as usize] = total;
        (r, total)
    }
    for g in 0..rel.len() {
        let group = rel.group(g);
        if group.len() != 2 {
            continue;
        }
        let [(a, sa), (b, sb)] = [group[0], group[1]];
        // sa·Z_a + sb·Z_b = 0.
        let want = -sa * sb;
        let (ra, xa) = find(&mut parent, &mut sign, a);
        let (rb, xb) = find(&mut parent, &mut sign, b);
        if ra == rb {
            if xa != want * xb {
                dead[ra as usize] = true;
            }
        } else {
            parent[ra as usize] = rb;
            sign[ra as usize] = want * xb * xa;
            if dead[ra as usize] {
                dead[rb as usize] = true;
            }
        }
    }
    let mut class_of: HashMap<u32, usize> = HashMap::new();
    let mut rep = vec![(0usize, 0i8); size];
    for x in 0..size as u32 {
        let (r, s) = find(&mut parent, &mut sign, x);
        if dead[r as usize] {
            rep[x as usize] = (usize::MAX, 0);
            continue;
        }
        let next = class_of.len();
        let c = *class_of.entry(r).or_insert(next);
        rep[x as usize] = (c, s);
    }
    let classes = class_of.len();
    let mut rows: HashSet<Vec<(usize, i64)>> = HashSet::new();
    for g in 0..rel.len() {
        let group = rel.group(g);
        if group.len() == 2 {
            continue;
        }
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(t, s) in group {
            let (c, x) = rep[t as usize];
            if c != usize::MAX {
                *acc.entry(c).or_insert(0) += (s * x) as i64;
            }
        }
        let mut row: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        if row.is_empty() {
            continue;
        }
        row.sort_unstable();
        if row[0].1 < 0 {
            row.iter_mut().for_each(|e| e.1 = -e.1);
        }
        rows.insert(row);
    }
    let dense: Vec<Vec<i64>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![0i64; classes];
            for (c, x) in r {
                v[c] = x;
            }
            v
        })
        .collect();
    let rank = rank_mod61(&dense, classes);
    Ok(RigidDims { types: size, faces: rel.len(), mp_classes: classes, dimension: classes - rank })
}
