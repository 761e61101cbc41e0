//! Direct search for rigid curves through a point configuration.
//!
//! Rooted at the last leg, every curve decomposes into subtrees with `k`
//! legs and `k` marked points whose top vertex is pinned by the points. A
//! subtree is either a marked point with a chain hanging below it, running
//! to a single leg and absorbing smaller subtrees, or two subtrees whose top
//! edges meet. Tables are filled by increasing `k`.

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::marked::{all_mask, MarkedType, MAX_LEGS};
use crate::moduli::{solve_type, CurveSolution};
use crate::scalar::Scalar;
use crate::vec2::Vec2;

enum Piece {
    /// Top vertex is `z_i`; below it a chain absorbs the listed subtrees in
    /// order and ends on a leg.
    Point { i: usize, chain: Vec<u32> },
    Merge(u32, u32),
}

struct Rec<S> {
    legs: u32,
    pts: u32,
    pos: Vec2<S>,
    piece: Piece,
}

struct Search<'a, S> {
    n: usize,
    m: usize,
    points: &'a [Vec2<S>],
    /// `Σ_L ξ` over legs `0..n−1`, indexed by mask.
    sums: Vec<Vec2<S>>,
    recs: Vec<Rec<S>>,
    table: Vec<Vec<u32>>,
}

/// Where the ray `x + μσ` meets the ray `q + λτ` with `μ, λ > 0`.
fn ray_meet<S: Scalar>(x: &Vec2<S>, sigma: &Vec2<S>, q: &Vec2<S>, tau: &Vec2<S>) -> Result<Option<Vec2<S>>> {
    let d = q - x;
    let den = sigma.cross(tau);
    if den.is_zero() {
        if d.cross(sigma).is_zero() && d.cross(tau).is_zero() {
            return Err(Error::NonGenericConfiguration("two edges of a curve overlap".into()));
        }
        return Ok(None);
    }
    let mu = d.cross(tau) / den.clone();
    let lambda = d.cross(sigma) / den;
    if mu.is_zero() || lambda.is_zero() {
        return Err(Error::NonGenericConfiguration("a curve through the points has a zero-length edge".into()));
    }
    if mu.is_negative() || lambda.is_negative() {
        return Ok(None);
    }
    Ok(Some(x + &sigma.scale(&mu)))
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(out)
    })
}

impl<'a, S: Scalar> Search<'a, S> {
    fn slot(&self, legs: u32, pts: u32) -> usize {
        ((legs as usize) << self.m) | pts as usize
    }

    /// Tail mask of a subtree's top edge.
    fn tail(&self, r: u32) -> u32 {
        let rec = &self.recs[r as usize];
        rec.legs | rec.pts << self.n
    }

    fn run(&mut self) -> Result<()> {
        let nl = self.n - 1;
        let mut states: Vec<(u32, u32)> = Vec::new();
        for legs in 1u32..1 << nl {
            for pts in 1u32..1 << self.m {
                if legs.count_ones() == pts.count_ones() {
                    states.push((legs, pts));
                }
            }
        }
        states.sort_by_key(|&(l, p)| (l.count_ones(), l, p));
        for (legs, pts) in states {
            let mut found = Vec::new();
            for i in 0..self.m {
                if pts >> i & 1 == 0 {
                    continue;
                }
                let rest = pts & !(1 << i);
                let start = self.points[i].clone();
                let sigma = self.sums[legs as usize].clone();
                for c in 0..nl {
                    if legs >> c & 1 == 0 {
                        continue;
                    }
                    let mut chain = Vec::new();
                    let mut done = Vec::new();
                    self.chain(legs & !(1 << c), rest, &start, &sigma, &mut chain, &mut done)?;
                    for chain in done {
                        found.push(Rec { legs, pts, pos: start.clone(), piece: Piece::Point { i, chain } });
                    }
                }
            }
            let low = legs & legs.wrapping_neg();
            for l1 in submasks(legs) {
                if l1 & low == 0 || l1 == legs {
                    continue;
                }
                let l2 = legs & !l1;
                let k1 = l1.count_ones();
                for p1 in submasks(pts) {
                    if p1.count_ones() != k1 {
                        continue;
                    }
                    let p2 = pts & !p1;
                    let (a_list, b_list) = (&self.table[self.slot(l1, p1)], &self.table[self.slot(l2, p2)]);
                    if a_list.is_empty() || b_list.is_empty() {
                        continue;
                    }
                    let (sa, sb) = (-self.sums[l1 as usize].clone(), -self.sums[l2 as usize].clone());
                    for &a in a_list {
                        for &b in b_list {
                            let (qa, qb) = (&self.recs[a as usize].pos, &self.recs[b as usize].pos);
                            if let Some(w) = ray_meet(qa, &sa, qb, &sb)? {
                                found.push(Rec { legs, pts, pos: w, piece: Piece::Merge(a, b) });
                            }
                        }
                    }
                }
            }
            let slot = self.slot(legs, pts);
            for rec in found {
                self.table[slot].push(self.recs.len() as u32);
                self.recs.push(rec);
            }
        }
        Ok(())
    }

    /// Extends a chain at `x` with flow slope `sigma` by subtrees covering
    /// `(legs, pts)` in every geometrically possible order.
    fn chain(
        &self,
        legs: u32,
        pts: u32,
        x: &Vec2<S>,
        sigma: &Vec2<S>,
        chain: &mut Vec<u32>,
        done: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if legs == 0 {
            done.push(chain.clone());
            return Ok(());
        }
        for lj in submasks(legs) {
            if lj == 0 {
                continue;
            }
            let k = lj.count_ones();
            let tau = -self.sums[lj as usize].clone();
            for pj in submasks(pts) {
                if pj.count_ones() != k {
                    continue;
                }
                for &r in &self.table[self.slot(lj, pj)] {
                    let Some(y) = ray_meet(x, sigma, &self.recs[r as usize].pos, &tau)? else {
                        continue;
                    };
                    chain.push(r);
                    self.chain(legs & !lj, pts & !pj, &y, &(sigma + &tau), chain, done)?;
                    chain.pop();
                }
            }
        }
        Ok(())
    }

    fn collect(&self, r: u32, raw: &mut Vec<[u32; 2]>) {
        let rec = &self.recs[r as usize];
        match &rec.piece {
            Piece::Merge(a, b) => {
                raw.push([self.tail(*a), self.tail(*b)]);
                self.collect(*a, raw);
                self.collect(*b, raw);
            }
            Piece::Point { i, chain } => {
                let below = rec.legs | (rec.pts & !(1 << i)) << self.n;
                let mut current = all_mask(self.n) ^ below;
                for &j in chain {
                    let t = self.tail(j);
                    raw.push([current, t]);
                    current |= t;
                    self.collect(j, raw);
                }
            }
        }
    }
}

/// All rigid curves with legs `delta` through `points` (`n − 1` of them),
/// sorted by type key. Every solution is re-solved on its type.
pub fn curves_through<S: Scalar>(delta: &DeltaSet<S>, points: &[Vec2<S>]) -> Result<Vec<CurveSolution<S>>> {
    let n = delta.len();
    if !(2..=MAX_LEGS).contains(&n) {
        return Err(Error::Unsupported(format!("curve search handles 2 ≤ n ≤ {MAX_LEGS}, not {n}")));
    }
    let m = n - 1;
    if points.len() != m {
        return Err(Error::InvalidType(format!("{m} points are needed, {} given", points.len())));
    }
    if n == 2 {
        let t = MarkedType::from_raw(2, &[]).0;
        return Ok(solve_type(&t, delta, points)?.into_iter().collect());
    }
    let nl = n - 1;
    let mut sums = vec![Vec2::zero(); 1 << nl];
    for mask in 1usize..1 << nl {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + delta.get(low);
    }
    let mut search = Search { n, m, points, sums, recs: Vec::new(), table: vec![Vec::new(); 1 << (nl + m)] };
    search.run()?;
    let top = search.slot((1 << nl) - 1, (1 << m) - 1);
    let mut out = Vec::with_capacity(search.table[top].len());
    let mut raw = Vec::with_capacity(n - 2);
    for &r in &search.table[top] {
        raw.clear();
        search.collect(r, &mut raw);
        let (t, _) = MarkedType::from_raw(n, &raw);
        match solve_type(&t, delta, points)? {
            Some(sol) => out.push(sol),
            None => {
                return Err(Error::NonGenericConfiguration(format!("type {t} found by search does not solve exactly")))
            }
        }
    }
    out.sort_by_cached_key(|s| s.ty.key());
    Ok(out)
}
