mod common;

use common::*;
use ptc_core::neumann::{laplacian_system, realize_currents, solve_neumann, star_mesh, tree_slopes};
use ptc_core::{Error, Rational, Scalar, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn realized_curves_are_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..200 {
        let g = random_graph(&mut rng, false);
        let xi = balanced_currents(g.legs().len(), &mut rng);
        let root = rng.gen_range(0..g.num_vertices());
        let c = realize_currents(&g, &xi, root, &Vec2::zero()).unwrap();
        assert!(c.unbalanced_vertex().is_none());
        assert_eq!(c.positions[root], Vec2::zero());
        let gf = g.map_lengths(|l| l.to_f64());
        let cf = realize_currents(&gf, &to_float(&xi), root, &Vec2::zero()).unwrap();
        assert!(cf.max_balance_residual() < 1e-9);
    }
}

#[test]
fn unbalanced_currents_have_no_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let g = random_graph(&mut rng, false);
        let mut xi = balanced_currents(g.legs().len(), &mut rng);
        xi[0] = &xi[0] + &Vec2::new(q(1, 1), q(0, 1));
        assert!(matches!(solve_neumann(&g, &xi, 0), Err(Error::NoSolution { .. })));
    }
}

#[test]
fn laplacian_kills_constants_and_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..50 {
        let g = random_graph(&mut rng, false);
        let sys = laplacian_system(&g, &[]).unwrap();
        let n = g.num_vertices();
        assert!(sys.matrix.mul_vec(&vec![Rational::one(); n]).iter().all(|x| x.is_zero()));
        for i in 0..n {
            for j in 0..n {
                assert_eq!(sys.matrix.get(i, j), sys.matrix.get(j, i));
            }
        }
    }
}

#[test]
fn root_choice_is_a_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..100 {
        let g = random_graph(&mut rng, false);
        let xi = balanced_currents(g.legs().len(), &mut rng);
        let (r1, r2) = (rng.gen_range(0..g.num_vertices()), rng.gen_range(0..g.num_vertices()));
        let a = realize_currents(&g, &xi, r1, &Vec2::zero()).unwrap();
        let b = realize_currents(&g, &xi, r2, &Vec2::zero()).unwrap();
        let shift = &a.positions[0] - &b.positions[0];
        assert_eq!(b.translate(&shift), a);
    }
}

#[test]
fn tree_slopes_match_the_linear_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..100 {
        let g = random_graph(&mut rng, true);
        let xi = balanced_currents(g.legs().len(), &mut rng);
        let c = realize_currents(&g, &xi, 0, &Vec2::zero()).unwrap();
        assert_eq!(tree_slopes(&g, &xi).unwrap(), c.slopes);
        let stretched = g.map_lengths(|l| l.clone() * q(10, 1));
        assert_eq!(realize_currents(&stretched, &xi, 0, &Vec2::zero()).unwrap().slopes, c.slopes);
    }
}

#[test]
fn star_mesh_keeps_positions_and_balance() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut done = 0;
    while done < 50 {
        let g = random_graph(&mut rng, false);
        let xi = balanced_currents(g.legs().len(), &mut rng);
        let c = realize_currents(&g, &xi, 0, &Vec2::zero()).unwrap();
        let Some(v) = (0..g.num_vertices()).find(|&v| g.legs_at(v).next().is_none() && g.incidence()[v].len() >= 2)
        else {
            continue;
        };
        let m = star_mesh(&c, v).unwrap();
        assert!(m.unbalanced_vertex().is_none());
        let kept: Vec<_> = (0..g.num_vertices()).filter(|&w| w != v).map(|w| c.positions[w].clone()).collect();
        assert_eq!(m.positions, kept);
        done += 1;
    }
}
