use std::collections::HashSet;

use hartigan_core::io::{parse_points_str, points_to_csv, PointFormat};
use hartigan_core::smoothed::update_center_approx;
use hartigan_core::{
    center_of_ids, hw_run, is_hw_local_opt, is_lloyd_local_opt, merge_delta, move_gain, potential,
    set_potential, ExactClustering, ExactPoints, FloatClustering, FloatPoints, PivotRule, Rational,
    Scalar, Termination,
};
use num_traits::Zero;
use proptest::prelude::*;

fn exact_points(n: usize, d: usize) -> impl Strategy<Value = ExactPoints> {
    prop::collection::vec((-40i64..40, 1i64..5), n * d).prop_map(move |v| {
        let coords = v
            .into_iter()
            .map(|(num, den)| hartigan_core::ratio(num, den))
            .collect();
        ExactPoints::new(d, coords).unwrap()
    })
}

fn float_points(n: usize, d: usize) -> impl Strategy<Value = FloatPoints> {
    prop::collection::vec(-10.0f64..10.0, n * d).prop_map(move |v| FloatPoints::new(d, v).unwrap())
}

/// Assignment with every one of `k` clusters non-empty: the first `k`
/// positions of a permutation seed the clusters.
fn assignment(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(0..k, n),
    )
        .prop_map(move |(perm, mut assign)| {
            for (c, &id) in perm.iter().take(k).enumerate() {
                assign[id] = c;
            }
            assign
        })
}

fn instance_exact() -> impl Strategy<Value = (ExactPoints, ExactClustering)> {
    (2usize..10, 1usize..4)
        .prop_flat_map(|(n, d)| (exact_points(n, d), 2..=n.min(4)))
        .prop_flat_map(|(pts, k)| {
            let n = pts.len();
            (Just(pts), assignment(n, k), Just(k))
        })
        .prop_map(|(pts, assign, k)| {
            let c = ExactClustering::new(&pts, k, assign).unwrap();
            (pts, c)
        })
}

fn instance_float(
    max_n: usize,
    max_k: usize,
) -> impl Strategy<Value = (FloatPoints, FloatClustering)> {
    (3usize..max_n, 1usize..4)
        .prop_flat_map(move |(n, d)| (float_points(n, d), 2..=n.min(max_k)))
        .prop_flat_map(|(pts, k)| {
            let n = pts.len();
            (Just(pts), assignment(n, k), Just(k))
        })
        .prop_map(|(pts, assign, k)| {
            let c = FloatClustering::new(&pts, k, assign).unwrap();
            (pts, c)
        })
}

fn direct_potential<S: Scalar>(
    points: &hartigan_core::PointSet<S>,
    assign: &[usize],
    k: usize,
) -> S {
    (0..k).fold(S::zero(), |acc, c| {
        let ids: Vec<usize> = (0..assign.len()).filter(|&i| assign[i] == c).collect();
        acc + set_potential(points, &ids)
    })
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn merge_delta_matches_potentials((pts, c) in instance_exact()) {
        let s = c.members(0);
        let t = c.members(1);
        let union: Vec<usize> = s.iter().chain(&t).copied().collect();
        let direct = set_potential(&pts, &union) - set_potential(&pts, &s) - set_potential(&pts, &t);
        prop_assert_eq!(merge_delta(&pts, &s, &t).unwrap(), direct);
    }

    #[test]
    fn move_gain_matches_potentials((pts, c) in instance_exact(), pick in any::<prop::sample::Index>()) {
        let movable: Vec<(usize, usize)> = (0..c.n())
            .filter(|&x| c.size(c.cluster_of(x)) >= 2)
            .flat_map(|x| {
                let src = c.cluster_of(x);
                (0..c.k()).filter(move |&j| j != src).map(move |j| (x, j))
            })
            .collect();
        prop_assume!(!movable.is_empty());
        let (x, dst) = movable[pick.index(movable.len())];
        let src = c.cluster_of(x);
        let mut after = c.assignment().to_vec();
        after[x] = dst;
        let direct = direct_potential(&pts, c.assignment(), c.k()) - direct_potential(&pts, &after, c.k());
        prop_assert_eq!(move_gain(x, src, dst, &c, &pts).unwrap(), direct);
    }

    #[test]
    fn float_move_gain_within_tolerance((pts, c) in instance_float(12, 4)) {
        for x in 0..c.n() {
            let src = c.cluster_of(x);
            if c.size(src) < 2 {
                continue;
            }
            for dst in (0..c.k()).filter(|&j| j != src) {
                let mut after = c.assignment().to_vec();
                after[x] = dst;
                let direct = direct_potential(&pts, c.assignment(), c.k())
                    - direct_potential(&pts, &after, c.k());
                let gain = move_gain(x, src, dst, &c, &pts).unwrap();
                let scale = direct_potential(&pts, c.assignment(), c.k());
                prop_assert!((gain - direct).abs() <= 1e-9 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn joining_never_lowers_potential(pts in (2usize..12, 1usize..4).prop_flat_map(|(n, d)| exact_points(n, d))) {
        let t: Vec<usize> = (1..pts.len()).collect();
        let mut with_x = t.clone();
        with_x.push(0);
        prop_assert!(set_potential(&pts, &with_x) >= set_potential(&pts, &t));
    }

    #[test]
    fn hw_local_opt_implies_lloyd_local_opt((pts, c) in instance_float(40, 5)) {
        let trace = hw_run(&pts, c, PivotRule::FirstImprovement, 100_000).unwrap();
        prop_assert_eq!(trace.terminated, Termination::LocalOpt);
        prop_assert!(is_hw_local_opt(&trace.clustering, &pts));
        prop_assert!(is_lloyd_local_opt(&trace.clustering, &pts));
    }

    #[test]
    fn caches_stay_consistent((pts, c) in instance_exact()) {
        let trace = hw_run(&pts, c, PivotRule::BestImprovement, 10_000).unwrap();
        prop_assert!(trace.clustering.is_consistent(&pts));
        prop_assert_eq!(trace.final_potential.clone(), potential(&trace.clustering, &pts));
        prop_assert!(trace.clustering.sizes().iter().all(|&s| s >= 1));
    }

    #[test]
    fn no_clustering_repeats((pts, c) in instance_exact(), seed in any::<u64>()) {
        let mut seen = HashSet::new();
        seen.insert(c.assignment().to_vec());
        let mut run = c.clone();
        let mut rule = PivotRule::RandomImprovement { seed };
        let mut last = potential(&run, &pts);
        while let Some(mv) = hartigan_core::hw_step(&mut run, &pts, &mut rule).unwrap() {
            prop_assert!(mv.gain > Rational::zero());
            let now = potential(&run, &pts);
            prop_assert_eq!(last.clone() - now.clone(), mv.gain);
            last = now;
            prop_assert!(seen.insert(run.assignment().to_vec()));
        }
    }

    #[test]
    fn center_update_ratio_chain(
        (pts, c) in instance_exact(),
        offset in prop::collection::vec((-9i64..10, 1i64..7), 3),
        steps in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 1..8),
    ) {
        let d = pts.dim();
        let offset: Vec<Rational> = offset[..d].iter().map(|&(n, q)| hartigan_core::ratio(n, q)).collect();
        let err0: Rational = offset.iter().fold(Rational::zero(), |a, v| a + v * v);
        let mut run = c.clone();
        let mut approx: Vec<Vec<Rational>> = (0..c.k())
            .map(|j| {
                let cm = center_of_ids(&pts, &c.members(j)).unwrap();
                cm.iter().zip(&offset).map(|(x, o)| x + o).collect()
            })
            .collect();
        let mut moved = HashSet::new();
        for (xi, di) in steps {
            let x = xi.index(run.n());
            let src = run.cluster_of(x);
            if run.size(src) < 2 {
                continue;
            }
            let dst = (src + 1 + di.index(run.k() - 1)) % run.k();
            let sizes_before = run.sizes().to_vec();
            run.apply_move(&pts, x, dst).unwrap();
            moved.insert(x);
            let xv = pts.point(x);
            approx[src] = update_center_approx(&approx[src], sizes_before[src], run.size(src), &[], &[xv]).unwrap();
            approx[dst] = update_center_approx(&approx[dst], sizes_before[dst], run.size(dst), &[xv], &[]).unwrap();
            for j in 0..run.k() {
                let cm = center_of_ids(&pts, &run.members(j)).unwrap();
                let err: Rational = approx[j].iter().zip(&cm).fold(Rational::zero(), |a, (u, v)| {
                    let diff = u - v;
                    a + &diff * &diff
                });
                // Squared error scales by (|C_0| / |C_t|)^2 from the start.
                let factor = hartigan_core::ratio(c.size(j) as i64, run.size(j) as i64);
                prop_assert_eq!(err.clone(), &factor * &factor * &err0);
                let limit = Rational::from_integer((2 * moved.len()).into());
                prop_assert!(err <= &limit * &limit * &err0);
            }
        }
    }

    #[test]
    fn csv_round_trip_exact(pts in (1usize..10, 1usize..4).prop_flat_map(|(n, d)| exact_points(n, d))) {
        let text = points_to_csv(&pts);
        let back: ExactPoints = parse_points_str(&text, PointFormat::Csv).unwrap();
        prop_assert_eq!(back, pts);
    }

    #[test]
    fn csv_round_trip_float(pts in (1usize..10, 1usize..4).prop_flat_map(|(n, d)| float_points(n, d))) {
        let text = points_to_csv(&pts);
        let back: FloatPoints = parse_points_str(&text, PointFormat::Csv).unwrap();
        let same = back.coords().iter().zip(pts.coords()).all(|(a, b)| a.to_bits() == b.to_bits());
        prop_assert!(same);
    }

    #[test]
    fn float_merge_delta_within_tolerance((pts, c) in instance_float(12, 4)) {
        let s = c.members(0);
        let t = c.members(1);
        let union: Vec<usize> = s.iter().chain(&t).copied().collect();
        let direct = set_potential(&pts, &union) - set_potential(&pts, &s) - set_potential(&pts, &t);
        let scale = set_potential(&pts, &union);
        let got = merge_delta(&pts, &s, &t).unwrap();
        prop_assert!((got - direct).abs() <= 1e-9 * scale.max(1.0) || rel_close(got, direct));
    }
}
