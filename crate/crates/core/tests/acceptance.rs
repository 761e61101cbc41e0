mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ptc_core::duality::{intersect, scale_slopes};
use ptc_core::enumeration::{count_with_seed, random_points, refined_invariant, CycleChoice};
use ptc_core::jacobi::{caterpillar_coefficient, caterpillar_cycle, lie_cycle, relation_rank};
use ptc_core::moduli::{integer_ev_check, TypeCatalog};
use ptc_core::neumann::realize_currents;
use ptc_core::recursion::recursive_count;
use ptc_core::search::curves_through;
use ptc_core::weights::{epsilon_top_coefficient, Weight, WeightMode};
use ptc_core::{DeltaSet, PlaneCurve, Rational, Scalar, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn neumann() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..200 {
        let g = random_graph(&mut rng, false);
        let xi = balanced_currents(g.legs().len(), &mut rng);
        let (r1, r2) = (rng.gen_range(0..g.num_vertices()), rng.gen_range(0..g.num_vertices()));
        let a = realize_currents(&g, &xi, r1, &Vec2::zero()).map_err(|e| e.to_string())?;
        ensure!(a.unbalanced_vertex().is_none(), "graph {k}: exact curve unbalanced");
        let b = realize_currents(&g, &xi, r2, &Vec2::zero()).map_err(|e| e.to_string())?;
        let shift = &a.positions[0] - &b.positions[0];
        ensure!(b.translate(&shift) == a, "graph {k}: roots {r1},{r2} differ by more than a translation");
        let gf = g.map_lengths(|l| l.to_f64());
        let f = realize_currents(&gf, &to_float(&xi), r1, &Vec2::zero()).map_err(|e| e.to_string())?;
        ensure!(f.max_balance_residual() < 1e-9, "graph {k}: float residual {}", f.max_balance_residual());
        let mut bad = xi.clone();
        bad[0] = &bad[0] + &Vec2::new(q(1, 3), q(0, 1));
        ensure!(realize_currents(&g, &bad, r1, &Vec2::zero()).is_err(), "graph {k}: unbalanced currents accepted");
    }
    Ok("200 graphs balanced, root changes are translations, unbalanced currents rejected".into())
}

fn ev_determinant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0u64;
    for n in 2..=6 {
        let cat = TypeCatalog::get(n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let d = loop {
                let mut v: Vec<(i64, i64)> = (0..n - 1).map(|_| (rng.gen_range(-9..=9), rng.gen_range(-9..=9))).collect();
                let (sx, sy) = v.iter().fold((0, 0), |a, p| (a.0 + p.0, a.1 + p.1));
                v.push((-sx, -sy));
                if DeltaSet::<Rational>::from_ints(&v).is_ok() {
                    break v;
                }
            };
            let sums: Vec<(i64, i64)> = (0u32..1 << n)
                .map(|m| (0..n).filter(|&j| m >> j & 1 == 1).fold((0, 0), |a, j| (a.0 + d[j].0, a.1 + d[j].1)))
                .collect();
            let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
            for i in 0..cat.len() {
                let (det, mult) = integer_ev_check(&cat, i, &sums);
                ensure!(det == (sign * mult).into(), "n={n} type {}: det {det} mult {mult}", cat.type_at(i).key_string());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (type, Δ) pairs"))
}

fn curve_of(delta: &DeltaSet<Rational>, rng: &mut ChaCha8Rng) -> Option<PlaneCurve<Rational>> {
    for _ in 0..50 {
        let pts = random_points(delta, rng);
        if let Ok(sols) = curves_through(delta, &pts) {
            if let Some(s) = sols.first() {
                return s.realize(delta).ok();
            }
        }
    }
    None
}

fn to_float_curve(c: &PlaneCurve<Rational>) -> PlaneCurve<f64> {
    PlaneCurve {
        base: c.base.map_lengths(|l| l.to_f64()),
        positions: to_float(&c.positions),
        slopes: to_float(&c.slopes),
        leg_slopes: to_float(&c.leg_slopes),
    }
}

fn bezout() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pairs, mut nodes) = (0, 0);
    while pairs < 50 {
        let d1 = random_int_delta(rng.gen_range(3..=5), 3, &mut rng);
        let d2 = random_int_delta(rng.gen_range(3..=5), 3, &mut rng);
        let (Some(a), Some(b)) = (curve_of(&d1, &mut rng), curve_of(&d2, &mut rng)) else { continue };
        let Ok(r) = intersect(&a, &b) else { continue };
        ensure!(r.total == r.mixed_area.clone() * q(2, 1), "pair {pairs}: I={} mixed area {}", r.total, r.mixed_area);
        ensure!(r.report.ok(), "pair {pairs}: {:?}", r.report);
        let f = intersect(&to_float_curve(&a), &to_float_curve(&b)).map_err(|e| e.to_string())?;
        ensure!((f.total - 2.0 * f.mixed_area).abs() < 1e-9 && f.report.inequality_holds, "pair {pairs}: float {:?}", f.report);
        nodes += r.points.len();
        pairs += 1;
    }
    let mut homothetic = 0;
    while homothetic < 10 {
        let d = random_int_delta(rng.gen_range(3..=5), 3, &mut rng);
        let (Some(a), Some(b)) = (curve_of(&d, &mut rng), curve_of(&d, &mut rng)) else { continue };
        let b = scale_slopes(&b, &q(rng.gen_range(1..=5), rng.gen_range(1..=3)));
        let Ok(r) = intersect(&a, &b) else { continue };
        ensure!(r.report.ok() && r.report.equality && r.report.homothetic, "homothetic pair: {:?}", r.report);
        homothetic += 1;
    }
    Ok(format!("50 pairs ({nodes} crossings), 10 homothetic pairs at equality"))
}

fn jacobi_dimensions() -> Outcome {
    let mut dims = Vec::new();
    for (n, want) in [(3, 1), (4, 2), (5, 6), (6, 24)] {
        let got = relation_rank(n).map_err(|e| e.to_string())?.dimension;
        ensure!(got == want, "n={n}: dimension {got}, expected {want}");
        dims.push(got.to_string());
    }
    Ok(format!("dimensions {}", dims.join(", ")))
}

fn cycles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut verified = 0;
    for n in 3..=6 {
        for _ in 0..10 {
            let d = random_real_delta(n, &mut rng);
            for h in [0.0, 1.0 / 3.0, 0.5, 1.0] {
                let mut z = lie_cycle(&d, WeightMode::Hbar(h)).map_err(|e| e.to_string())?;
                let r = z.verify();
                ensure!(r.ok, "Lie cycle n={n} ħ={h}: {:?}", r.violations.first());
                verified += 1;
            }
        }
        for s in 0..n {
            for t in (0..n).filter(|&t| t != s) {
                let d = loop {
                    let d = random_int_delta(n, 4, &mut rng);
                    if d.is_st_independent(s, t) {
                        break d;
                    }
                };
                let mut z = caterpillar_cycle(&d, s, t).map_err(|e| e.to_string())?;
                let r = z.verify();
                ensure!(r.ok, "caterpillar n={n} ({s},{t}): {:?}", r.violations.first());
                verified += 1;
            }
        }
    }
    Ok(format!("{verified} cycles verified"))
}

fn count_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut runs = 0;
    for n in 3..=6 {
        let exact = random_rational_delta(n, &mut rng);
        let integral = random_int_delta(n, 3, &mut rng);
        let real = random_real_delta(n, &mut rng);
        let mut check = |values: Vec<Weight>, what: &str| -> Result<(), String> {
            for v in &values[1..] {
                ensure!(v.approx_eq(&values[0], 1e-6), "n={n} {what}: {} vs {}", v, values[0]);
            }
            runs += values.len();
            Ok(())
        };
        let seeds = 1..=5u64;
        let run = |d: &DeltaSet<Rational>, z: &CycleChoice| -> Result<Vec<Weight>, String> {
            seeds.clone().map(|s| count_with_seed(d, z, s).map(|r| r.value).map_err(|e| e.to_string())).collect()
        };
        check(run(&exact, &CycleChoice::Lie(WeightMode::Hbar(0.0)))?, "exact ħ=0")?;
        check(run(&integral, &CycleChoice::Lie(WeightMode::Laurent))?, "Laurent")?;
        check(run(&exact, &CycleChoice::Lie(WeightMode::Hbar(0.5)))?, "ħ=1/2")?;
        let real: Vec<Weight> = seeds
            .clone()
            .map(|s| count_with_seed(&real, &CycleChoice::Lie(WeightMode::Hbar(1.0 / 3.0)), s).map(|r| r.value))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check(real, "float ħ=1/3")?;
    }
    Ok(format!("{runs} counts agree across seeds"))
}

fn recursion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = 0;
    for n in 4..=6 {
        for _ in 0..2 {
            let real = random_real_delta(n, &mut rng);
            let exact = random_rational_delta(n, &mut rng);
            for h in [0.0, 0.5] {
                let mode = WeightMode::Hbar(h);
                let a = recursive_count(&real, None, mode).map_err(|e| e.to_string())?;
                let b = refined_invariant(&real, mode, 1, false).map_err(|e| e.to_string())?.value;
                ensure!(a.approx_eq(&b, 1e-6), "float n={n} ħ={h}: recursion {a} direct {b}");
                let a = recursive_count(&exact, None, mode).map_err(|e| e.to_string())?;
                let b = refined_invariant(&exact, mode, 1, false).map_err(|e| e.to_string())?.value;
                ensure!(a.approx_eq(&b, 1e-6), "exact n={n} ħ={h}: recursion {a} direct {b}");
                compared += 2;
            }
        }
    }
    Ok(format!("{compared} comparisons"))
}

fn tropical() -> Outcome {
    let mut out = Vec::new();
    for (d, want) in [(1, "1"), (2, "1"), (3, "y^-1 + 10 + y")] {
        let mode = WeightMode::Laurent;
        let direct = if d < 3 {
            refined_invariant(&DeltaSet::<Rational>::tropical_projective(d), mode, 1, true).map(|r| r.value)
        } else {
            refined_invariant(&DeltaSet::<f64>::tropical_projective(d), mode, 1, true).map(|r| r.value)
        }
        .map_err(|e| e.to_string())?;
        let delta = DeltaSet::<Rational>::tropical_projective(d);
        let rec = recursive_count(&delta, None, mode).map_err(|e| e.to_string())?.div_int(delta.aut_size());
        ensure!(direct.to_string() == want, "d={d}: direct {direct}, expected {want}");
        ensure!(rec.to_string() == want, "d={d}: recursion {rec}, expected {want}");
        out.push(format!("d={d}: {want}"));
        if d == 3 {
            let (at1, atm1) = (direct.to_f64_at(0.0), direct.to_f64_at(1.0));
            ensure!((at1 - 12.0).abs() < 1e-9 && (atm1 - 8.0).abs() < 1e-9, "d=3 evaluates to {at1} and {atm1}");
            out.push("12 at y=1, 8 at y=-1".into());
        }
    }
    Ok(out.join("; "))
}

fn epsilon_deformation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for n in 4..=5 {
        let cat = TypeCatalog::get(n).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let d = random_int_delta(n, 4, &mut rng);
            for s in 0..n {
                for t in (0..n).filter(|&t| t != s) {
                    if !d.is_st_independent(s, t) {
                        continue;
                    }
                    let xs = d.get(s);
                    let factor = (0..n).filter(|&i| i != s && i != t).fold(Rational::one(), |a, i| a * d.get(i).cross(xs));
                    for i in 0..cat.len() {
                        let ty = cat.type_at(i);
                        let top = epsilon_top_coefficient(&ty, &d, s, t);
                        let z = Rational::from_integer(caterpillar_coefficient(&ty, &d, s, t) as i64);
                        ensure!(top == factor.clone() * z, "n={n} ({s},{t}) {}: top {top}", ty.key_string());
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (type, s, t) coefficients"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("neumann solver", 10, neumann),
        ("evaluation determinant", 120, ev_determinant),
        ("bezout-bernstein", 60, bezout),
        ("jacobi dimensions", 60, jacobi_dimensions),
        ("cycle property", 120, cycles),
        ("count invariance", 300, count_invariance),
        ("recursion vs direct", 300, recursion),
        ("tropical benchmarks", 600, tropical),
        ("epsilon deformation", 60, epsilon_deformation),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(*budget) => Err(format!("{msg}, over the {budget} s budget")),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("criterion {} {tag} {name} ({:.1} s): {msg}", k + 1, took.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
