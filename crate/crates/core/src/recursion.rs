//! Recursive formula for the refined count: slide the last point to infinity
//! in a direction `ξ₀` and split curves along the path joining the two legs
//! next to it.

use std::collections::HashMap;

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::vec2::Vec2;
use crate::weights::{quantum_number, Weight, WeightMode};

/// `({s}, {t}, I₁, …, I_k)` with `η_j = −Σ_{i∈I_j} ξ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissiblePartition<S> {
    pub s: usize,
    pub t: usize,
    pub blocks: Vec<Vec<usize>>,
    pub eta: Vec<Vec2<S>>,
}

impl<S: Scalar> AdmissiblePartition<S> {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// `w_j(S) = [Σ det(ξ_i, ξ_m)]`, `i ∈ I_j`, `m ∈ {s} ∪ I₁ ∪ … ∪ I_{j−1}`.
    pub fn weights(&self, delta: &DeltaSet<S>, mode: WeightMode) -> Result<Vec<Weight>> {
        let mut before = delta.get(self.s).clone();
        let mut out = Vec::with_capacity(self.blocks.len());
        for eta in &self.eta {
            let inner = -eta.clone();
            out.push(quantum_number(&inner.cross(&before), mode)?);
            before = &before + &inner;
        }
        Ok(out)
    }

    /// Parallel η's in the same direction admit both orders; only the one
    /// with increasing smallest index is counted.
    fn is_canonical(&self) -> bool {
        self.eta.windows(2).zip(self.blocks.windows(2)).all(|(e, b)| {
            !(e[0].cross(&e[1]).is_zero() && e[0].dot(&e[1]).is_positive()) || b[0][0] < b[1][0]
        })
    }
}

/// Number of ways to distribute `Σ n_j` points into blocks of sizes `n_j`.
pub fn multinomial(sizes: &[usize]) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &k in sizes {
        for i in 1..=k as u64 {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Errors unless `xi0` is transverse to every nonzero proper subset sum.
pub fn check_direction<S: Scalar>(delta: &DeltaSet<S>, xi0: &Vec2<S>) -> Result<()> {
    if xi0.is_zero() {
        return Err(Error::NonGenericDirection { subset: Vec::new() });
    }
    let n = delta.len();
    let sums = delta.subset_sums();
    for mask in 1u32..(1 << n) - 1 {
        let v = &sums[mask as usize];
        if !v.is_zero() && xi0.cross(v).is_zero() {
            return Err(Error::NonGenericDirection { subset: mask_indices(mask) });
        }
    }
    Ok(())
}

/// `ξ₁` turned repeatedly by the rotation with cosine 3/5 until generic.
pub fn default_xi0<S: Scalar>(delta: &DeltaSet<S>) -> Result<Vec2<S>> {
    let (c, s) = (S::from_rational(&Rational::new(3, 5)), S::from_rational(&Rational::new(4, 5)));
    let mut v = delta.get(0).clone();
    for _ in 0..200 {
        v = Vec2::new(c.clone() * v.x.clone() - s.clone() * v.y.clone(), s.clone() * v.x.clone() + c.clone() * v.y.clone());
        if check_direction(delta, &v).is_ok() {
            return Ok(v);
        }
    }
    Err(Error::NonGenericDirection { subset: Vec::new() })
}

/// Set partitions of `items` into unordered blocks (each block sorted).
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for j in 0..p.len() {
            let mut q = p.clone();
            q[j].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// Orders all permutations of `blocks` that make `(ξ_s, η…, ξ_t)`
/// counterclockwise.
fn ccw_orders<S: Scalar>(xs: &Vec2<S>, xt: &Vec2<S>, blocks: &[Vec<usize>], eta: &[Vec2<S>]) -> Vec<Vec<usize>> {
    let k = blocks.len();
    let mut out = Vec::new();
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn extend<S: Scalar>(
        xt: &Vec2<S>,
        eta: &[Vec2<S>],
        prev: &Vec2<S>,
        order: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if order.len() == eta.len() {
            out.push(order.clone());
            return;
        }
        for j in 0..eta.len() {
            if used[j] || prev.cross(&eta[j]).is_negative() {
                continue;
            }
            if order.iter().any(|&a| eta[a].cross(&eta[j]).is_negative()) {
                continue;
            }
            used[j] = true;
            order.push(j);
            extend(xt, eta, &eta[j], order, used, out);
            order.pop();
            used[j] = false;
        }
    }
    if eta.iter().any(|e| xs.cross(e).is_negative() || e.cross(xt).is_negative()) {
        return out;
    }
    extend(xt, eta, xs, &mut order, &mut used, &mut out);
    out
}

/// All admissible partitions for `ξ₀`, every `k` from 1 to `n − 2`. Blocks
/// with `η = 0` never occur.
pub fn admissible_partitions<S: Scalar>(delta: &DeltaSet<S>, xi0: &Vec2<S>) -> Result<Vec<AdmissiblePartition<S>>> {
    check_direction(delta, xi0)?;
    let n = delta.len();
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let (xs, xt) = (delta.get(s), delta.get(t));
            if s == t || xs.cross(xt).is_negative() || xs.cross(xi0).is_negative() || xi0.cross(xt).is_negative() {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&i| i != s && i != t).collect();
            for blocks in set_partitions(&rest) {
                let eta: Vec<Vec2<S>> = blocks.iter().map(|b| -crate::vec2::sum(b.iter().map(|&i| delta.get(i)))).collect();
                if eta.iter().any(|e| e.is_zero()) {
                    continue;
                }
                for order in ccw_orders(xs, xt, &blocks, &eta) {
                    out.push(AdmissiblePartition {
                        s,
                        t,
                        blocks: order.iter().map(|&j| blocks[j].clone()).collect(),
                        eta: order.iter().map(|&j| eta[j].clone()).collect(),
                    });
                }
            }
        }
    }
    Ok(out)
}

struct Recursion {
    mode: WeightMode,
    memo: HashMap<String, Weight>,
}

fn memo_key<S: Scalar>(vectors: &[Vec2<S>]) -> String {
    let mut parts: Vec<String> = vectors.iter().map(|v| format!("{},{}", v.x.to_text(), v.y.to_text())).collect();
    parts.sort_unstable();
    parts.join(";")
}

impl Recursion {
    fn count<S: Scalar>(&mut self, delta: &DeltaSet<S>, xi0: Option<&Vec2<S>>) -> Result<Weight> {
        let n = delta.len();
        if n == 2 {
            return Ok(self.mode.one());
        }
        if n == 3 {
            return quantum_number(&delta.get(0).cross(delta.get(1)).abs(), self.mode);
        }
        let key = memo_key(delta.vectors());
        if xi0.is_none() {
            if let Some(w) = self.memo.get(&key) {
                return Ok(w.clone());
            }
        }
        let xi0 = match xi0 {
            Some(v) => v.clone(),
            None => default_xi0(delta)?,
        };
        let mut total = self.mode.zero();
        for part in admissible_partitions(delta, &xi0)? {
            if !part.is_canonical() {
                continue;
            }
            let mut term = Weight::from_int(multinomial(&part.sizes()) as i64);
            for (w, (block, eta)) in part.weights(delta, self.mode)?.into_iter().zip(part.blocks.iter().zip(&part.eta)) {
                if w.is_zero() {
                    term = self.mode.zero();
                    break;
                }
                let mut sub: Vec<Vec2<S>> = block.iter().map(|&i| delta.get(i).clone()).collect();
                sub.push(eta.clone());
                term = term * w * self.count(&DeltaSet::new(sub)?, None)?;
            }
            total = total + term;
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }
}

/// `N(Δ)` by the recursion, with `ξ₀` at the top level (a default generic
/// direction when `None`) and default directions below.
pub fn recursive_count<S: Scalar>(delta: &DeltaSet<S>, xi0: Option<&Vec2<S>>, mode: WeightMode) -> Result<Weight> {
    mode.check()?;
    if let Some(x) = xi0 {
        check_direction(delta, x)?;
    }
    let mut r = Recursion { mode, memo: HashMap::new() };
    r.count(delta, xi0)
}
