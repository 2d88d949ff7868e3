mod common;

use common::{random_density, rng};
use fairsquare::geometry::{interior_disjoint, CakeDomain, Piece, Rect, Walls};
use fairsquare::measure::GridDensity;
use fairsquare::protocols::*;
use fairsquare::Tolerances;
use proptest::prelude::*;

type Run = fn(&[Agent], &CakeDomain<f64>) -> fairsquare::Result<Division>;

fn agents(seed: u64, n: usize, r: &Rect<f64>) -> Vec<Agent> {
    let mut g = rng(seed);
    (0..n).map(|i| Agent::new(i, random_density(&mut g, r, 4, 4, 0.3))).collect()
}

fn scaled(d: &GridDensity<f64>, k: f64) -> GridDensity<f64> {
    let cells = d.cells().iter().map(|row| row.iter().map(|v| v * k).collect()).collect();
    GridDensity::new(d.xs().to_vec(), d.ys().to_vec(), cells).unwrap()
}

fn unit() -> Rect<f64> {
    Rect::new(0.0, 0.0, 1.0, 1.0)
}

fn walled(k: usize) -> (Run, CakeDomain<f64>) {
    let run: Run = match k {
        4 => divide_four_walls,
        3 => divide_three_walls,
        _ => unreachable!(),
    };
    (run, CakeDomain::rect(unit(), Walls::first(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pieces_disjoint_and_inside(seed in any::<u64>(), n in 2usize..7, k in 3usize..5) {
        let (run, cake) = walled(k);
        let ag = agents(seed, n, &unit());
        let div = run(&ag, &cake).unwrap();
        let pieces: Vec<Piece<f64>> = div.allocation.assignments.values().cloned().collect();
        prop_assert_eq!(pieces.len(), n);
        prop_assert!(interior_disjoint(&pieces, 1e-9));
        prop_assert!(verify(&div, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).is_ok());
    }

    #[test]
    fn scaling_a_density_keeps_fractions(seed in any::<u64>(), n in 2usize..6, k in 0.01f64..100.0) {
        let cake = CakeDomain::square(1.0);
        let ag = agents(seed, n, &unit());
        let sc: Vec<Agent> = ag.iter().map(|a| Agent::new(a.id, scaled(&a.density, k))).collect();
        let a = divide_four_walls(&ag, &cake).unwrap();
        let b = divide_four_walls(&sc, &cake).unwrap();
        for (x, y) in a.report.results.iter().zip(&b.report.results) {
            prop_assert!((x.fraction - y.fraction).abs() < 1e-6, "{} vs {}", x.fraction, y.fraction);
        }
    }

    #[test]
    fn relabeling_keeps_the_guarantee(seed in any::<u64>(), n in 2usize..6) {
        let cake = CakeDomain::rect(Rect::new(0.0, 0.0, f64::INFINITY, f64::INFINITY), Walls { left: true, bottom: true, ..Walls::none() });
        let ag = agents(seed, n, &unit());
        let rev: Vec<Agent> = ag.iter().rev().enumerate().map(|(i, a)| Agent::new(i, a.density.clone())).collect();
        for set in [&ag, &rev] {
            let div = staircase_divide(set, &cake).unwrap();
            prop_assert!(div.report.min_fraction() >= 1.0 / (2 * n - 1) as f64 - 1e-6);
        }
    }

    #[test]
    fn plane_meets_its_bound(seed in any::<u64>(), n in 1usize..6) {
        let inf = f64::INFINITY;
        let cake = CakeDomain::rect(Rect::new(-inf, -inf, inf, inf), Walls::none());
        let ag = agents(seed, n, &Rect::new(-2.0, -1.0, 3.0, 2.0));
        let div = plane_divide(&ag, &cake).unwrap();
        prop_assert!(div.report.min_fraction() >= div.report.bound.value() - 1e-6);
    }
}
