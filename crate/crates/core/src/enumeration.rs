//! Weighted counts of rigid curves through generic points and refined
//! invariants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::DeltaSet;
use crate::error::{Error, Result};
use crate::jacobi::{caterpillar_coefficient, Cycle};
use crate::marked::MarkedType;
use crate::moduli::{multiplicity, CurveSolution};
use crate::scalar::{Rational, Scalar};
use crate::search::curves_through;
use crate::vec2::Vec2;
use crate::weights::{lie_weight, Weight, WeightMode};

/// Which cycle weights the count. Lie and caterpillar coefficients are
/// computed per type, so they also work beyond the stored catalogs.
#[derive(Clone)]
pub enum CycleChoice {
    Lie(WeightMode),
    Caterpillar { s: usize, t: usize },
    Table(Cycle),
}

impl CycleChoice {
    fn check<S: Scalar>(&self, delta: &DeltaSet<S>) -> Result<()> {
        match self {
            CycleChoice::Lie(mode) => mode.check(),
            CycleChoice::Caterpillar { s, t } => {
                let n = delta.len();
                if s == t || *s >= n || *t >= n {
                    return Err(Error::InvalidType(format!("invalid caterpillar legs ({s},{t})")));
                }
                if !delta.is_st_independent(*s, *t) {
                    return Err(Error::NotSTIndependent { s: *s, t: *t });
                }
                Ok(())
            }
            CycleChoice::Table(z) => {
                if z.n() != delta.len() {
                    return Err(Error::InvalidType(format!("cycle has {} legs, delta set {}", z.n(), delta.len())));
                }
                if !z.is_verified() {
                    return Err(Error::CycleNotVerified);
                }
                for (i, c) in z.coefficients().iter().enumerate() {
                    let t = z.catalog().type_at(i);
                    if !c.is_zero() && multiplicity(&t, delta).is_zero() {
                        return Err(Error::CycleOnDegenerateType(t.key_string()));
                    }
                }
                Ok(())
            }
        }
    }

    fn zero(&self) -> Weight {
        match self {
            CycleChoice::Lie(mode) => mode.zero(),
            _ => Weight::from_int(0),
        }
    }

    /// Coefficient in the reference orientation.
    fn coefficient<S: Scalar>(&self, t: &MarkedType, delta: &DeltaSet<S>) -> Result<Weight> {
        match self {
            CycleChoice::Lie(mode) => lie_weight(t, delta, *mode),
            CycleChoice::Caterpillar { s, t: tt } => Ok(Weight::from_int(caterpillar_coefficient(t, delta, *s, *tt) as i64)),
            CycleChoice::Table(z) => z.coefficient(t).cloned(),
        }
    }
}

/// One realized type: `N_Δ(μ, p) = 1` and its coefficient in the blackboard
/// orientation.
#[derive(Clone, Debug)]
pub struct LedgerEntry<S> {
    pub key: String,
    pub count: u8,
    pub coefficient: Weight,
    pub solution: CurveSolution<S>,
}

#[derive(Clone, Debug)]
pub struct CountResult<S> {
    pub value: Weight,
    /// Types realized through the points; every other type has `N = 0`.
    pub ledger: Vec<LedgerEntry<S>>,
    pub points: Vec<Vec2<S>>,
    pub normalized: bool,
    pub aut: u64,
}

/// `N_{Δ,Z}(p) = Σ_μ Z_μ·N_Δ(μ, p)`, coefficients taken in the orientation
/// pulled back by the evaluation map.
pub fn weighted_count<S: Scalar>(delta: &DeltaSet<S>, z: &CycleChoice, points: &[Vec2<S>]) -> Result<CountResult<S>> {
    z.check(delta)?;
    let sols = curves_through(delta, points)?;
    let mut value = z.zero();
    let mut ledger = Vec::with_capacity(sols.len());
    for sol in sols {
        let sign = multiplicity(&sol.ty, delta).sign();
        let c = z.coefficient(&sol.ty, delta)?;
        let c = if sign < 0 { -c } else { c };
        value = value + c.clone();
        ledger.push(LedgerEntry { key: sol.ty.key_string(), count: 1, coefficient: c, solution: sol });
    }
    Ok(CountResult { value, ledger, points: points.to_vec(), normalized: false, aut: delta.aut_size() })
}

const MAX_ATTEMPTS: usize = 25;

/// A seeded configuration of `n − 1` points in a box scaled to Δ.
pub fn random_points<S: Scalar>(delta: &DeltaSet<S>, rng: &mut ChaCha8Rng) -> Vec<Vec2<S>> {
    let scale = (delta.magnitude() * 10.0).ceil().max(1.0) as i64;
    let den = 9973i64;
    let mut coord = || S::from_rational(&Rational::new(rng.gen_range(-scale * den..=scale * den), den));
    (0..delta.len() - 1).map(|_| Vec2::new(coord(), coord())).collect()
}

/// Weighted count on a seeded random configuration, resampling when the
/// configuration is not generic.
pub fn count_with_seed<S: Scalar>(delta: &DeltaSet<S>, z: &CycleChoice, seed: u64) -> Result<CountResult<S>> {
    z.check(delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let pts = random_points(delta, &mut rng);
        match weighted_count(delta, z, &pts) {
            Err(e @ Error::NonGenericConfiguration(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `N_{Δ,𝒵_ħ}` on a seeded configuration, optionally divided by `|Aut Δ|`.
pub fn refined_invariant<S: Scalar>(delta: &DeltaSet<S>, mode: WeightMode, seed: u64, normalize: bool) -> Result<CountResult<S>> {
    let mut r = count_with_seed(delta, &CycleChoice::Lie(mode), seed)?;
    if normalize {
        r.value = r.value.div_int(r.aut);
        r.normalized = true;
    }
    Ok(r)
}
