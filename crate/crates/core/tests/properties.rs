//! Property tests for the crate-wide invariants.

use proptest::prelude::*;

use sadfo::bench::{data_profile, evals_to_converge, ProfileTable};
use sadfo::{eta, Oracle, ValueDataset};

proptest! {
    /// The dataset never exceeds its cap, keeps insertion order, holds no
    /// duplicate points, and evicts oldest-first.
    #[test]
    fn dataset_cap_order_and_dedup(
        cap in 1usize..6,
        // A small lattice forces duplicate points.
        inserts in proptest::collection::vec((0i8..4, 0i8..4, -8i32..8), 0..40),
    ) {
        let mut ds = ValueDataset::new(cap);
        let mut reference: Vec<(Vec<f64>, f64)> = Vec::new();
        for (a, b, v) in inserts {
            let point = vec![a as f64, b as f64];
            let value = v as f64;
            ds.insert(point.clone(), value);
            if let Some(pos) = reference.iter().position(|(p, _)| *p == point) {
                reference.remove(pos);
            } else if reference.len() == cap {
                reference.remove(0);
            }
            reference.push((point, value));

            prop_assert!(ds.len() <= cap);
            let entries: Vec<(Vec<f64>, f64)> =
                ds.iter().map(|e| (e.point.clone(), e.value)).collect();
            prop_assert_eq!(&entries, &reference);
            // No two stored points are equal.
            for i in 0..entries.len() {
                for j in 0..i {
                    prop_assert_ne!(&entries[i].0, &entries[j].0);
                }
            }
        }
    }

    /// eta is 1 at S = 0, lies in (0, 1], and decreases in S.
    #[test]
    fn eta_is_decreasing_into_unit_interval(n in 1usize..60, s in 0.0f64..200.0) {
        let value = eta(s, n);
        prop_assert!(value > 0.0 && value <= 1.0);
        prop_assert!(eta(s + 0.5, n) <= value);
        prop_assert_eq!(eta(0.0, n), 1.0);
    }

    /// Forward differences on a diagonal quadratic carry exactly the h/2
    /// curvature bias per coordinate.
    #[test]
    fn forward_difference_bias_on_diagonal_quadratics(
        w in proptest::collection::vec(0.1f64..4.0, 1..5),
        h in 1e-3f64..0.5,
        scale in -2.0f64..2.0,
    ) {
        let n = w.len();
        let x: Vec<f64> = (0..n).map(|i| scale * (i as f64 + 1.0) / n as f64).collect();
        let weights = w.clone();
        let mut oracle = Oracle::new(n, move |p: &[f64]| {
            0.5 * p.iter().zip(&weights).map(|(pi, wi)| wi * pi * pi).sum::<f64>()
        });
        let fx = oracle.evaluate(&x).unwrap();
        let fg = sadfo::fd::forward_gradient(&mut oracle, &x, fx, h).unwrap();
        prop_assert_eq!(oracle.eval_count(), n + 1);
        for j in 0..n {
            let expected = w[j] * x[j] + 0.5 * h * w[j];
            prop_assert!((fg.grad[j] - expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }

    /// Data-profile curves are monotone non-decreasing and bounded by one.
    #[test]
    fn data_profile_curves_are_monotone(
        entries in proptest::collection::vec((1usize..30, proptest::option::of(1usize..4000)), 1..20),
    ) {
        let table = ProfileTable { solver: "s".into(), entries };
        let curves = data_profile(std::slice::from_ref(&table)).unwrap();
        let mut last = 0.0f64;
        for step in 0..=120 {
            let f = curves[0].fraction_at(step as f64);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f + 1e-15 >= last);
            last = f;
        }
    }

    /// Convergence is judged on the running best: once the test passes at
    /// some prefix it passes for every longer prefix.
    #[test]
    fn convergence_index_is_prefix_stable(
        history in proptest::collection::vec(-100.0f64..100.0, 1..50),
        tau in 1e-6f64..0.5,
    ) {
        let f_best = history.iter().cloned().fold(f64::INFINITY, f64::min);
        if let Some(idx) = evals_to_converge(&history, f_best, tau) {
            prop_assert!(idx >= 1 && idx <= history.len());
            for longer in idx..=history.len() {
                prop_assert_eq!(
                    evals_to_converge(&history[..longer], f_best, tau),
                    Some(idx)
                );
            }
        }
    }
}
