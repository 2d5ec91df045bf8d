use proptest::prelude::*;

use rootlab::assign::multiset_distance;
use rootlab::path::{CoefficientPath, Knot};
use rootlab::poly::{conjugate_closed, min_separation};
use rootlab::quad::{classify, xi_root, FullRootSet, RegionLabel, SelectorId};
use rootlab::solver::solve_all;
use rootlab::track::{induced_permutation, track, track_from};
use rootlab::{Complex, FieldTag, MonicPoly, SolveControls, TrackControls};

fn roots_strategy(max_n: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=max_n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex::new(re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_recovers_separated_roots(roots in roots_strategy(6)) {
        prop_assume!(min_separation(&roots) > 0.1);
        let p = MonicPoly::from_roots(&roots).unwrap();
        let got = solve_all(&p, &SolveControls::default()).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        for z in &got.roots {
            prop_assert!(p.residual(*z) <= 1e-12 || got.has_cluster());
        }
        prop_assert!(multiset_distance(&got.roots, &roots) < 1e-6);
    }

    #[test]
    fn solver_is_deterministic(roots in roots_strategy(5), seed in 0u64..1000) {
        let p = MonicPoly::from_roots(&roots).unwrap();
        let c = SolveControls::default().with_seed(seed);
        prop_assert_eq!(solve_all(&p, &c).unwrap(), solve_all(&p, &c).unwrap());
    }

    #[test]
    fn real_polys_have_conjugate_closed_roots(c in prop::collection::vec(-5.0f64..5.0, 1..=6)) {
        let p = MonicPoly::real(&c).unwrap();
        let r = solve_all(&p, &SolveControls::default()).unwrap();
        prop_assume!(!r.has_cluster());
        prop_assert!(conjugate_closed(&r.roots, 1e-6));
    }

    #[test]
    fn complete_sets_factor_the_quadratic(a0 in -10.0f64..10.0, a1 in -10.0f64..10.0) {
        for first in [SelectorId::EmptySet, SelectorId::PlusSet] {
            let (z1, z2) = FullRootSet::of(first).values(a0, a1).unwrap();
            prop_assert!((z1 + z2 + a1).norm() <= 1e-9);
            prop_assert!((z1 * z2 - a0).norm() <= 1e-9);
        }
    }

    #[test]
    fn complementary_selectors_coincide_only_on_parabola(a0 in -10.0f64..10.0, a1 in -10.0f64..10.0) {
        for sel in SelectorId::ALL {
            let a = xi_root(sel, a0, a1).unwrap();
            let b = xi_root(sel.complement(), a0, a1).unwrap();
            prop_assert_eq!(a == b, classify(a0, a1) == RegionLabel::Parabola);
        }
    }

    #[test]
    fn forward_backward_is_identity(
        start in prop::collection::vec(-3.0f64..3.0, 3),
        drift in prop::collection::vec(-0.3f64..0.3, 3),
    ) {
        // x^3 with well separated real roots moving linearly
        let mut a = start.clone();
        a.sort_by(f64::total_cmp);
        prop_assume!(a[1] - a[0] > 0.5 && a[2] - a[1] > 0.5);
        let b: Vec<f64> = a.iter().zip(&drift).map(|(x, d)| x + d).collect();
        let coeffs = |rs: &[f64]| {
            let z: Vec<Complex> = rs.iter().map(|&r| Complex::new(r, 0.0)).collect();
            MonicPoly::from_roots(&z).unwrap().coeffs().to_vec()
        };
        let knots = (0..=4)
            .map(|k| {
                let w = k as f64 / 4.0;
                let rs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * (1.0 - w) + y * w).collect();
                Knot { t: w, coeffs: coeffs(&rs) }
            })
            .collect();
        let path = CoefficientPath::sampled(3, FieldTag::Real, knots).unwrap();
        let tc = TrackControls::default();
        let fwd = track(&path, &tc).unwrap();
        prop_assert!(fwd.delta_max <= 0.1);
        let back = track_from(&path.reversed(), fwd.final_roots(), &tc).unwrap();
        let perm = induced_permutation(fwd.initial_roots(), back.final_roots());
        prop_assert_eq!(perm, vec![0, 1, 2]);
    }
}
